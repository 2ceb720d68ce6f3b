//! Legacy ASCII `STRUCTURED_POINTS` volume files.
//!
//! Values are written with 17 significant digits so that every `f64`
//! survives a write/read round trip exactly. The title line records the
//! box bounds and periodicity, which the format itself cannot express.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField, VectorField};

fn num(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").unwrap();
}

fn list(values: impl Iterator<Item = f64>) -> String {
    let mut s = String::new();
    for (i, v) in values.enumerate() {
        if i > 0 {
            s.push(',');
        }
        num(&mut s, v);
    }
    s
}

/// Renders the velocity and any extra scalars as one volume file.
pub fn render_fields(u: &VectorField, extras: &[(&str, &ScalarField)]) -> Result<String> {
    let g = *u.grid();
    let dim = g.dim();
    for (name, s) in extras {
        if *s.grid() != g {
            return Err(Error::Shape(format!("scalar '{name}' lives on a different grid")));
        }
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::Config(format!("invalid array name '{name}'")));
        }
    }
    let mut out = String::with_capacity(g.len() * 80 * (1 + extras.len()));
    out.push_str("# vtk DataFile Version 3.0\n");
    let periodic: Vec<&str> = (0..dim).map(|a| if g.is_periodic(a) { "1" } else { "0" }).collect();
    writeln!(
        out,
        "solenoidal lo={} hi={} periodic={}",
        list((0..dim).map(|a| g.lo(a))),
        list((0..dim).map(|a| g.hi(a))),
        periodic.join(",")
    )
    .unwrap();
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let [n0, n1, n2] = g.shape();
    writeln!(out, "DIMENSIONS {n0} {n1} {n2}").unwrap();
    let origin = [g.lo(0), g.lo(1), if dim == 3 { g.lo(2) } else { 0.0 }];
    let spacing = [g.h(0), g.h(1), g.h(2)];
    for (label, v) in [("ORIGIN", origin), ("SPACING", spacing)] {
        out.push_str(label);
        for x in v {
            out.push(' ');
            num(&mut out, x);
        }
        out.push('\n');
    }
    writeln!(out, "POINT_DATA {}", g.len()).unwrap();
    out.push_str("VECTORS velocity double\n");
    for p in 0..g.len() {
        let v = u.at(p);
        for (c, x) in v.iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            num(&mut out, *x);
        }
        out.push('\n');
    }
    for (name, s) in extras {
        writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for &v in s.values() {
            num(&mut out, v);
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn write_fields(u: &VectorField, extras: &[(&str, &ScalarField)], path: &Path) -> Result<()> {
    let text = render_fields(u, extras)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Contents of a volume file written by [`write_fields`].
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeFile {
    pub velocity: VectorField,
    pub scalars: Vec<(String, ScalarField)>,
}

pub fn read_fields(path: &Path) -> Result<VolumeFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_fields(&text).map_err(|msg| Error::Parse {
        path: path.to_path_buf(),
        msg,
    })
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|x| x.parse().map_err(|_| format!("bad value '{x}'")))
        .collect()
}

pub fn parse_fields(text: &str) -> std::result::Result<VolumeFile, String> {
    let mut lines = text.lines();
    let mut next = || lines.next().ok_or_else(|| "unexpected end of file".to_string());
    if !next()?.starts_with("# vtk DataFile") {
        return Err("missing vtk header".into());
    }
    let title = next()?;
    let mut lo = None;
    let mut hi = None;
    let mut periodic = None;
    for item in title.split_whitespace().skip(1) {
        match item.split_once('=') {
            Some(("lo", v)) => lo = Some(parse_list::<f64>(v)?),
            Some(("hi", v)) => hi = Some(parse_list::<f64>(v)?),
            Some(("periodic", v)) => {
                periodic = Some(parse_list::<u8>(v)?.into_iter().map(|b| b == 1).collect::<Vec<_>>())
            }
            _ => return Err(format!("unrecognised title entry '{item}'")),
        }
    }
    let (lo, hi, periodic) = match (lo, hi, periodic) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err("title lacks lo/hi/periodic".into()),
    };
    if next()? != "ASCII" || next()? != "DATASET STRUCTURED_POINTS" {
        return Err("expected ASCII STRUCTURED_POINTS".into());
    }
    let dims: Vec<usize> = next()?
        .strip_prefix("DIMENSIONS ")
        .ok_or("missing DIMENSIONS")?
        .split_whitespace()
        .map(|x| x.parse().map_err(|_| format!("bad dimension '{x}'")))
        .collect::<std::result::Result<_, _>>()?;
    let dim = lo.len();
    if dims.len() != 3 || (dim == 2 && dims[2] != 1) {
        return Err("DIMENSIONS inconsistent with the title".into());
    }
    let grid = GridSpec::new(&dims[..dim], &lo, &hi, &periodic).map_err(|e| e.to_string())?;
    next()?; // ORIGIN
    next()?; // SPACING
    let npts: usize = next()?
        .strip_prefix("POINT_DATA ")
        .and_then(|x| x.parse().ok())
        .ok_or("missing POINT_DATA")?;
    if npts != grid.len() {
        return Err("POINT_DATA does not match DIMENSIONS".into());
    }
    let mut velocity = None;
    let mut scalars = Vec::new();
    while let Ok(header) = next() {
        let parts: Vec<&str> = header.split_whitespace().collect();
        match parts.as_slice() {
            ["VECTORS", _, "double"] => {
                let mut comps = vec![Vec::with_capacity(npts); dim];
                for _ in 0..npts {
                    let line = next()?;
                    let vals: Vec<f64> = line
                        .split_whitespace()
                        .map(|x| x.parse().map_err(|_| format!("bad value '{x}'")))
                        .collect::<std::result::Result<_, _>>()?;
                    if vals.len() != 3 {
                        return Err("vector line needs three values".into());
                    }
                    for (c, comp) in comps.iter_mut().enumerate() {
                        comp.push(vals[c]);
                    }
                }
                velocity = Some(VectorField::from_components(grid, comps).map_err(|e| e.to_string())?);
            }
            ["SCALARS", name, "double", "1"] => {
                if next()? != "LOOKUP_TABLE default" {
                    return Err("missing LOOKUP_TABLE".into());
                }
                let vals = (0..npts)
                    .map(|_| next().and_then(|l| l.trim().parse().map_err(|_| format!("bad value '{l}'"))))
                    .collect::<std::result::Result<Vec<f64>, _>>()?;
                scalars.push((name.to_string(), ScalarField::from_vec(grid, vals).map_err(|e| e.to_string())?));
            }
            _ => return Err(format!("unexpected section '{header}'")),
        }
    }
    Ok(VolumeFile {
        velocity: velocity.ok_or("no velocity array")?,
        scalars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_of_2d_file() {
        let g = GridSpec::bounded(2, 8, 0.0, 7.0).unwrap();
        let u = VectorField::from_fn(g, |x| [x[0], -x[1], 0.0]);
        let text = render_fields(&u, &[]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[4], "DIMENSIONS 8 8 1");
        assert_eq!(lines[7], "POINT_DATA 64");
        assert_eq!(lines.len(), 9 + 64);
        assert!(!text.contains("SCALARS"));
        assert_eq!(lines[9 + 8], "0.0000000000000000e0 -1.0000000000000000e0 0.0000000000000000e0");
    }

    #[test]
    fn round_trip_is_exact() {
        let g = GridSpec::new(&[8, 9, 10], &[-1.0, 0.0, 0.3], &[1.0, 2.0 * std::f64::consts::PI, 0.7], &[false, true, true]).unwrap();
        let u = VectorField::from_fn(g, |x| [x[0].sin() / 3.0, x[1].exp(), x[2] * 1e-300]);
        let s = ScalarField::from_fn(g, |x| (x[0] * x[1] - x[2]).cos() * 1e7);
        let back = parse_fields(&render_fields(&u, &[("phi", &s)]).unwrap()).unwrap();
        assert_eq!(back.velocity, u);
        assert_eq!(back.scalars, vec![("phi".to_string(), s)]);
    }

    #[test]
    fn rejects_bad_names_and_files() {
        let g = GridSpec::bounded(2, 8, 0.0, 1.0).unwrap();
        let s = ScalarField::zeros(g);
        assert!(render_fields(&VectorField::zeros(g), &[("two words", &s)]).is_err());
        assert!(parse_fields("hello").is_err());
    }
}
