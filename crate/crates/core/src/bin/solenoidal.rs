use std::process::ExitCode;

fn main() -> ExitCode {
    let result = solenoidal::cli::parse_args(std::env::args_os()).and_then(|c| solenoidal::cli::run(&c));
    match result {
        Ok(summary) => {
            print!("{}", summary.render());
            ExitCode::SUCCESS
        }
        Err(solenoidal::Error::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
