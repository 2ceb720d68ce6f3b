use std::f64::consts::PI;

use proptest::prelude::*;

use solenoidal::diffops::{curl, curl_of_vorticity, divergence, Vorticity};
use solenoidal::grid::{build_mask, embed, extract, AxisBox, NodeTag, Prescribed, RegionId};
use solenoidal::spectral::reconstruct;
use solenoidal::{GridSpec, VectorField};

fn periodic_field(n: usize) -> impl Strategy<Value = VectorField> {
    let g = GridSpec::periodic(2, n, 0.0, 2.0 * PI).unwrap();
    prop::collection::vec(-2.0f64..2.0, 2 * g.len())
        .prop_map(move |v| VectorField::from_components(g, v.chunks(g.len()).map(<[f64]>::to_vec).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mask_partitions_nodes(n in 12usize..40, c0 in 0.3f64..0.7, c1 in 0.3f64..0.7, w in 0.02f64..0.1, m in 0.0f64..0.15) {
        let g = GridSpec::bounded(2, n, 0.0, 1.0).unwrap();
        let solid = AxisBox::centered([c0, c1, 0.0], w);
        let given = AxisBox::centered([1.0 - c0, 1.0 - c1, 0.0], w);
        let Ok(mask) = build_mask(&g, &[solid], &[given], m) else { return Ok(()) };
        let (f, s, gv, mg) = mask.counts();
        prop_assert_eq!(f + s + gv + mg, g.len());
        for p in 0..g.len() {
            let x = g.position(p);
            let near_face = (0..2).any(|a| x[a] - g.lo(a) < m - 1e-12 || g.hi(a) - x[a] < m - 1e-12);
            prop_assert_eq!(mask.tag(p) == NodeTag::Margin, near_face);
        }
    }

    #[test]
    fn extract_after_embed_keeps_the_flow_domain(n in 12usize..32, w in 0.05f64..0.2, u0 in -3.0f64..3.0, seed in any::<u64>()) {
        let g = GridSpec::bounded(2, n, 0.0, 1.0).unwrap();
        let mask = build_mask(&g, &[AxisBox::centered([0.5, 0.5, 0.0], w)], &[], 0.1).unwrap();
        let u = VectorField::from_fn(g, |x| [(x[0] * 7.0 + seed as f64).sin(), x[1] * u0, 0.0]);
        let pres = Prescribed::from([(RegionId::Solid(0), vec![u0, -u0])]);
        let e = embed(&u, &mask, &pres).unwrap();
        let back = extract(&e, &mask).unwrap();
        for p in 0..g.len() {
            match mask.tag(p) {
                NodeTag::Fluid => prop_assert_eq!(back.at(p), u.at(p)),
                NodeTag::Solid(_) => prop_assert_eq!(e.at(p), [u0, -u0, 0.0]),
                NodeTag::Margin => prop_assert_eq!(e.at(p), [0.0; 3]),
                NodeTag::Given(_) => unreachable!(),
            }
        }
    }

    #[test]
    fn fd_div_of_curl_of_vorticity_vanishes(n in 10usize..24, seed in 0u64..1000) {
        let g = GridSpec::bounded(3, n, -1.0, 1.0).unwrap();
        let s = seed as f64 * 0.01;
        let u = VectorField::from_fn(g, |x| [(x[1] * 3.0 + s).sin() * x[2], x[0].exp() * x[2], (x[0] * x[1] + s).cos()]);
        let w = curl(&u);
        prop_assert!(matches!(w, Vorticity::Spatial(_)));
        let d = divergence(&curl_of_vorticity(&w));
        for p in 0..g.len() {
            if g.edge_distance(g.unravel(p)) >= 2 {
                prop_assert!(d[p].abs() < 1e-11, "{}", d[p]);
            }
        }
    }

    #[test]
    fn spectral_reconstruction_is_a_projection(u in periodic_field(16)) {
        let once = reconstruct(&u).unwrap();
        prop_assert!(reconstruct(&once).unwrap().max_abs_diff(&once) < 1e-13);
        prop_assert!(solenoidal::spectral::divergence_of(&once).unwrap().max_abs() < 1e-12);
        prop_assert!(once.mean().iter().all(|m| m.abs() < 1e-14));
        // orthogonal projection never increases the discrete energy
        let energy = |v: &VectorField| v.components().iter().flatten().map(|x| x * x).sum::<f64>();
        prop_assert!(energy(&once) <= energy(&u) * (1.0 + 1e-12));
    }
}
