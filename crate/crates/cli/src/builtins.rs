//! Named builtin presentations addressable from the command line.

use folia_core::builders;

use crate::presentation::{FileOptions, Presentation};

fn origin(n: usize) -> Vec<folia_core::poly::Q> {
    vec![folia_core::poly::qi(0); n]
}

fn radius_squared(n: usize) -> String {
    (1..=n)
        .map(|i| format!("x{i}^2"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Looks up a builtin by name; `n` selects the dimension where the
/// family is parameterized.
pub fn lookup(name: &str, n: Option<usize>) -> Result<Presentation, String> {
    let dim = |default: usize| n.unwrap_or(default);
    match name {
        "euler" => {
            let n = dim(3);
            if n < 1 {
                return Err("euler needs n >= 1".into());
            }
            let alg = builders::build_euler(n);
            let opts = FileOptions {
                degree_bound: None,
                obstruction_points: vec![origin(n)],
                witness: Some(format!("({n}/2)*ln({})", radius_squared(n))),
                locus: Some(radius_squared(n)),
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "poisson3" => {
            let alg = builders::build_poisson_r3();
            let opts = FileOptions {
                degree_bound: None,
                obstruction_points: vec![origin(3)],
                witness: Some("ln(x^2 + y^2)".into()),
                locus: Some("x^2 + y^2".into()),
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "quadratic" => {
            let alg = builders::build_quadratic_r2();
            let opts = FileOptions {
                obstruction_points: vec![origin(2)],
                ..Default::default()
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "gln" => {
            let n = dim(3);
            if !(1..=9).contains(&n) {
                return Err("gln needs 1 <= n <= 9".into());
            }
            let alg = builders::build_gln(n);
            let opts = FileOptions {
                obstruction_points: vec![origin(n)],
                ..Default::default()
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "son" => {
            let n = dim(3);
            if !(2..=9).contains(&n) {
                return Err("son needs 2 <= n <= 9".into());
            }
            let alg = builders::build_son(n);
            let opts = FileOptions {
                obstruction_points: vec![origin(n)],
                ..Default::default()
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "son-euler" => {
            let n = dim(3);
            if !(2..=9).contains(&n) {
                return Err("son-euler needs 2 <= n <= 9".into());
            }
            let alg = builders::build_son_euler(n);
            let opts = FileOptions {
                degree_bound: None,
                obstruction_points: vec![origin(n)],
                witness: Some(format!("({n}/2)*ln({})", radius_squared(n))),
                locus: Some(radius_squared(n)),
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "single1" => {
            let alg = builders::build_contrast_transverse();
            Ok(Presentation::Algebroid(alg, FileOptions::default()))
        }
        "single2" => {
            let alg = builders::build_contrast_radial();
            let opts = FileOptions {
                degree_bound: None,
                obstruction_points: vec![origin(3)],
                witness: Some("(1/2)*ln(x1^2)".into()),
                locus: Some("x1".into()),
            };
            Ok(Presentation::Algebroid(alg, opts))
        }
        "spiral" => {
            let p = builders::spiral_presentation();
            let opts = FileOptions {
                witness: Some("ln(x^2 + y^2)".into()),
                ..Default::default()
            };
            Ok(Presentation::Regular(p, opts))
        }
        "circles" => Ok(Presentation::Regular(
            builders::circles_presentation(),
            FileOptions::default(),
        )),
        "euler-regular" => {
            let n = dim(3);
            if n < 2 {
                return Err("euler-regular needs n >= 2".into());
            }
            let p = builders::euler_regular(n);
            let opts = FileOptions {
                witness: Some(format!("({n}/2)*ln({})", radius_squared(n))),
                ..Default::default()
            };
            Ok(Presentation::Regular(p, opts))
        }
        "poisson3-regular" => {
            let p = builders::poisson3_regular();
            let opts = FileOptions {
                witness: Some("ln(x^2 + y^2)".into()),
                ..Default::default()
            };
            Ok(Presentation::Regular(p, opts))
        }
        other => Err(format!(
            "unknown builtin {other:?}; available: euler, poisson3, quadratic, gln, son, \
             son-euler, single1, single2, spiral, circles, euler-regular, poisson3-regular"
        )),
    }
}
