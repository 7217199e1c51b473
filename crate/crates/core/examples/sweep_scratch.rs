use folia_core::builders::*;
use folia_core::modular::{jacobi_sweep, closedness_check, modular_one_form};

fn main() {
    for (name, alg) in [
        ("euler3", build_euler(3)),
        ("poisson3", build_poisson_r3()),
        ("quadratic", build_quadratic_r2()),
        ("gl2", build_gln(2)),
        ("gl3", build_gln(3)),
        ("son3", build_son(3)),
        ("son4", build_son(4)),
        ("son_euler3", build_son_euler(3)),
        ("contrast1", build_contrast_transverse()),
    ] {
        let c = alg.complex_check();
        let sweep = jacobi_sweep(&alg);
        let mut anchor_fail = 0;
        for a in 0..alg.bundle().rank(0) {
            for b in a..alg.bundle().rank(0) {
                if let Ok(r) = alg.anchor_morphism_residual(a, b) {
                    if !r.is_zero() { anchor_fail += 1; }
                }
            }
        }
        let theta = modular_one_form(&alg).unwrap();
        let closed = closedness_check(&alg, &theta.values);
        println!(
            "{name}: complex={} anchor_fail={} jacobi checked={} failed={} unchecked={} closed={}",
            c.passed(), anchor_fail, sweep.checked, sweep.failures.len(), sweep.unchecked.len(), closed.passed()
        );
        for f in sweep.failures.iter().take(3) { println!("   FAIL {f}"); }
    }
}
