//! Per-operation checks against independent oracles: rank
//! computations, matrix products and brute-force solves are
//! reimplemented here from scratch so they cannot share a code path
//! with the library.

use folia_core::algebroid::JacobiOutcome;
use folia_core::builders::*;
use folia_core::graded::Section;
use folia_core::modular::{
    adjoint_trace, closedness_check, exactness_search, modular_one_form, origin_obstruction,
    verify_witness, Obstruction, SearchOutcome,
};
use folia_core::poly::{monomials_of_degree, qi, Poly, Q, Vars};
use folia_core::ratlog::RatLog;
use folia_core::{FoliaError, VectorField};

use num_traits::{One, Zero};

/// Independent rank oracle: cross-multiplication elimination without
/// pivot normalization, structurally different from the library's
/// Gauss-Jordan reduction.
fn rank_oracle(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in 0..rows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let a = m[row][col].clone();
            let b = m[r][col].clone();
            for c in 0..cols {
                let v = &m[r][c] * &a - &m[row][c] * &b;
                m[r][c] = v;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Builds the degree-`d` slice matrix of a map given by basis images,
/// straight from first principles (used to cross-check the library's
/// internal slice machinery).
fn slice_matrix_oracle(
    vars: &Vars,
    images: &[Vec<Poly>],
    target_dim: usize,
    d: u32,
    h: u32,
) -> Vec<Vec<Q>> {
    let n = vars.len();
    let src_monos = monomials_of_degree(n, d);
    let dst_monos = monomials_of_degree(n, d + h);
    let rows = target_dim * dst_monos.len();
    let cols = images.len() * src_monos.len();
    let mut m = vec![vec![Q::zero(); cols]; rows];
    for (s, image) in images.iter().enumerate() {
        for (mi, mono) in src_monos.iter().enumerate() {
            let mp = Poly::from_terms(vars, [(mono.clone(), Q::one())]);
            for (t, comp) in image.iter().enumerate() {
                let prod = &mp * comp;
                for (mm, c) in prod.terms() {
                    let row = t * dst_monos.len()
                        + dst_monos.iter().position(|x| x == mm).unwrap();
                    m[row][s * src_monos.len() + mi] = c.clone();
                }
            }
        }
    }
    m
}

#[test]
fn leibniz_rule_on_scaled_section() {
    // l2(dz, x * one) = x*l2(dz, one) + rho(dz)[x]*one = -3x * one
    let alg = build_poisson_r3();
    let vars = alg.vars().clone();
    let x = Poly::var(&vars, 0);
    let scaled = Section::basis(1, 0, &vars).scale(&x);
    let dz = Section::basis(0, 2, &vars);
    let result = alg.l2_sections(&dz, &scaled).unwrap();
    assert_eq!(result.coeff(0, &vars), x.scale(&qi(-3)));
}

#[test]
fn l2_antisymmetry_on_degree_zero() {
    let alg = build_poisson_r3();
    let a = alg.l2_basis((0, 0), (0, 2)).unwrap();
    let b = alg.l2_basis((0, 2), (0, 0)).unwrap();
    let mut sum = a;
    sum.add_section(&b);
    assert!(sum.is_zero());
}

#[test]
fn gln_bracket_with_all_deltas_zero() {
    // [e1_1, e23_2] has no matching index, so it vanishes
    let alg = build_gln(3);
    let bundle = alg.bundle();
    let a = bundle.find_label("e1_1").unwrap();
    let b = bundle.find_label("e23_2").unwrap();
    let s = alg.l2_basis(a, b).unwrap();
    assert!(s.is_zero());
}

#[test]
fn son_anchor_morphism_against_bracket_oracle() {
    // rho(l2(v12, v23)) must equal the Lie bracket of the anchor
    // images, computed directly
    let alg = build_son(3);
    let bundle = alg.bundle();
    let a = bundle.find_label("v12").unwrap();
    let b = bundle.find_label("v23").unwrap();
    let br = alg.l2_basis(a, b).unwrap();
    let lhs = alg.anchor_of_section(&br);
    let rhs = alg
        .anchor_of_basis(a.1)
        .lie_bracket(alg.anchor_of_basis(b.1));
    assert_eq!(lhs, rhs);
    assert!(alg.anchor_morphism_residual(a.1, b.1).unwrap().is_zero());
}

#[test]
fn koszul_arity_one_identity_at_depth() {
    // l1(l1(u)) = 0 on the deepest level of so_4
    let alg = build_son(4);
    match alg.jacobi_residual(1, &[(2, 0)]) {
        JacobiOutcome::Residual(r) => assert!(r.is_zero()),
        JacobiOutcome::Unchecked(w) => panic!("should be checkable: {w}"),
    }
}

#[test]
fn complex_check_against_matrix_oracle() {
    // multiply the l1 matrices of gl_3 by hand and compare
    let alg = build_gln(3);
    let vars = alg.vars().clone();
    let bundle = alg.bundle();
    for lv in 2..bundle.depth() {
        let r2 = bundle.rank(lv);
        let r1 = bundle.rank(lv - 1);
        let r0 = bundle.rank(lv - 2);
        // matrices as target x source
        let m1: Vec<Vec<Poly>> = (0..r1)
            .map(|t| {
                (0..r2)
                    .map(|s| alg.l1_of_basis(lv, s).unwrap().coeff(t, &vars))
                    .collect()
            })
            .collect();
        let m0: Vec<Vec<Poly>> = (0..r0)
            .map(|t| {
                (0..r1)
                    .map(|s| alg.l1_of_basis(lv - 1, s).unwrap().coeff(t, &vars))
                    .collect()
            })
            .collect();
        for t in 0..r0 {
            for s in 0..r2 {
                let mut acc = Poly::zero(&vars);
                for k in 0..r1 {
                    acc += &(&m0[t][k] * &m1[k][s]);
                }
                assert!(acc.is_zero(), "l1 o l1 entry ({t},{s}) at level {lv}");
            }
        }
    }
    assert!(alg.complex_check().passed());
}

#[test]
fn complex_check_locates_corruption() {
    // a deliberately corrupted unary map fails with a located entry
    let vars = Vars::xyz(3);
    let x = Poly::var(&vars, 0);
    let bundle = folia_core::GradedBundle::new(
        vec![3, 1],
        vec![
            vec!["dx".into(), "dy".into(), "dz".into()],
            vec!["one".into()],
        ],
    );
    let zero = Poly::zero(&vars);
    let anchor = vec![
        VectorField::new(&vars, vec![zero.clone(), zero.clone(), x.clone()]),
        VectorField::new(&vars, vec![zero.clone(), zero.clone(), Poly::var(&vars, 1)]),
        VectorField::new(&vars, vec![-&x, -&Poly::var(&vars, 1), zero.clone()]),
    ];
    // corrupted: l1(one) = x*dx is not killed by the anchor
    let mut bad = Section::zero(0);
    bad.add(0, x.clone());
    let alg = folia_core::LieNAlgebroid::new(
        vars,
        bundle,
        anchor,
        vec![vec![bad]],
        vec![],
        Some(vec![]),
    )
    .unwrap();
    let report = alg.complex_check();
    assert!(!report.passed());
    assert!(report.failures[0].contains("rho(l1(one))"));
}

#[test]
fn sliced_exactness_son3_against_rank_oracle() {
    let alg = build_son(3);
    let vars = alg.vars().clone();
    let report = alg.sliced_exactness(4).unwrap();
    assert!(report.all_exact);
    // cross-check position E_{-1} (the deepest level): kernel of the
    // contraction on each slice must be zero
    let images: Vec<Vec<Poly>> = (0..alg.bundle().rank(1))
        .map(|s| {
            let sec = alg.l1_of_basis(1, s).unwrap();
            (0..alg.bundle().rank(0)).map(|t| sec.coeff(t, &vars)).collect()
        })
        .collect();
    for d in 0..=4u32 {
        let m = slice_matrix_oracle(&vars, &images, alg.bundle().rank(0), d, 1);
        let cols = m.first().map(|r| r.len()).unwrap_or(0);
        let rank = rank_oracle(m);
        let kernel = cols - rank;
        assert_eq!(kernel, 0, "slice degree {d}");
        let lib = report
            .at_position(1)
            .find(|c| c.degree == d)
            .expect("slice present");
        assert_eq!(lib.kernel_dim, kernel);
        assert_eq!(lib.image_rank, 0);
    }
}

#[test]
fn sliced_exactness_gl2_at_position_one() {
    let alg = build_gln(2);
    let report = alg.sliced_exactness(3).unwrap();
    for c in report.at_position(1) {
        assert!(c.passes(), "degree {}", c.degree);
    }
    // and position 0 relations x_i e_{j,k} - x_j e_{i,k} span the
    // kernel: sliced exactness holds there too
    for c in report.at_position(0) {
        assert!(c.passes(), "position 0 degree {}", c.degree);
    }
}

#[test]
fn sliced_exactness_poisson_through_degree_three() {
    let alg = build_poisson_r3();
    let report = alg.sliced_exactness(3).unwrap();
    assert!(report.all_exact);
}

#[test]
fn sliced_exactness_zero_differential_fails_maximally() {
    // zero unary map with positive ranks: every slice fails at the
    // position whose kernel is everything
    let vars = Vars::xyz(2);
    let bundle = folia_core::GradedBundle::new(
        vec![1, 1],
        vec![vec!["a".into()], vec!["b".into()]],
    );
    let anchor = vec![VectorField::euler(&vars)];
    let alg = folia_core::LieNAlgebroid::new(
        vars,
        bundle,
        anchor,
        vec![vec![Section::zero(0)]],
        vec![],
        Some(vec![]),
    )
    .unwrap();
    let report = alg.sliced_exactness(2).unwrap();
    assert!(!report.all_exact);
    // at E_{-1} the kernel of the zero map is the whole slice
    for c in report.at_position(1) {
        assert!(!c.passes());
        let dim = monomials_of_degree(2, c.degree).len();
        assert_eq!(c.kernel_dim, dim);
        assert_eq!(c.image_rank, 0);
    }
}

#[test]
fn monotone_exactness_verdicts() {
    // exact through D implies exact through every smaller bound
    let alg = build_son(3);
    let big = alg.sliced_exactness(4).unwrap();
    let small = alg.sliced_exactness(2).unwrap();
    assert!(big.all_exact);
    assert!(small.all_exact);
    for c in &small.checks {
        let twin = big
            .checks
            .iter()
            .find(|d| d.position == c.position && d.degree == c.degree)
            .unwrap();
        assert_eq!(c.kernel_dim, twin.kernel_dim);
        assert_eq!(c.image_rank, twin.image_rank);
    }
}

#[test]
fn nonhomogeneous_slicing_is_rejected() {
    let vars = Vars::xyz(2);
    let x = Poly::var(&vars, 0);
    let affine = &x + &Poly::int(&vars, 1);
    let alg = build_single_vf(VectorField::new(&vars, vec![affine, Poly::zero(&vars)]));
    match alg.sliced_exactness(2) {
        Err(FoliaError::NonHomogeneous(_)) => {}
        other => panic!("expected NonHomogeneous, got {other:?}"),
    }
}

#[test]
fn d0_component_on_poisson() {
    let alg = build_poisson_r3();
    let theta = modular_one_form(&alg).unwrap();
    // theta(l1(one)) = y*theta(dx) - x*theta(dy) = 0
    let d0 = alg.d0_on_one_form(&theta.values);
    assert_eq!(d0.len(), 1);
    assert!(d0[0].is_zero());
}

#[test]
fn d0_empty_on_depth_one() {
    let alg = build_euler(2);
    let theta = modular_one_form(&alg).unwrap();
    assert!(alg.d0_on_one_form(&theta.values).is_empty());
}

#[test]
fn d1_component_on_poisson_pair() {
    // rho(dx)[theta(dz)] - rho(dz)[theta(dx)] - theta([dx,dz]) = 0
    let alg = build_poisson_r3();
    let theta = modular_one_form(&alg).unwrap();
    let r = alg.d1_on_one_form(&theta.values, 0, 2).unwrap();
    assert!(r.is_zero());
}

#[test]
fn closedness_failure_is_located() {
    // perturbing theta on one slot of so_3 breaks the arity-0 part
    let alg = build_son(3);
    let mut theta = modular_one_form(&alg).unwrap().values;
    let x1 = Poly::var(alg.vars(), 0);
    theta[0] = &theta[0] + &x1;
    let report = closedness_check(&alg, &theta);
    assert!(!report.passed());
    let failures = report.failures();
    assert!(failures.iter().any(|f| f.contains("d0")), "{failures:?}");
}

#[test]
fn lift_euler_generator() {
    let alg = build_euler(3);
    let lifted = alg
        .lift_vector_field(&VectorField::euler(alg.vars()), 2)
        .unwrap();
    assert_eq!(lifted.coeff(0, alg.vars()), Poly::int(alg.vars(), 1));
}

#[test]
fn lift_rotation_in_son3() {
    // x1 d2 - x2 d1 lifts to the v12 generator
    let alg = build_son(3);
    let vars = alg.vars().clone();
    let mut comps = vec![Poly::zero(&vars); 3];
    comps[1] = Poly::var(&vars, 0);
    comps[0] = -&Poly::var(&vars, 1);
    let x = VectorField::new(&vars, comps);
    let lifted = alg.lift_vector_field(&x, 2).unwrap();
    let idx = alg.bundle().find_label("v12").unwrap().1;
    assert_eq!(lifted.coeff(idx, &vars), Poly::int(&vars, 1));
    // and the lift really maps to x under the anchor
    assert_eq!(alg.anchor_of_section(&lifted), x);
}

#[test]
fn lift_constant_field_infeasible_in_gl2() {
    // every anchor image vanishes at the origin, so d_x is not in the
    // image; cross-checked by a brute-force slice solve
    let alg = build_gln(2);
    let vars = alg.vars().clone();
    let mut comps = vec![Poly::zero(&vars); 2];
    comps[0] = Poly::int(&vars, 1);
    let x = VectorField::new(&vars, comps);
    assert!(alg.lift_vector_field(&x, 2).is_none());

    // oracle: stack the full coefficient matrix for unknowns of degree
    // <= 2 and compare ranks of A and [A|b]
    let mut src_monos = Vec::new();
    for d in 0..=2u32 {
        src_monos.extend(monomials_of_degree(2, d));
    }
    let mut dst_monos = Vec::new();
    for d in 0..=3u32 {
        dst_monos.extend(monomials_of_degree(2, d));
    }
    let r0 = alg.bundle().rank(0);
    let rows = 2 * dst_monos.len();
    let mut a = vec![vec![Q::zero(); r0 * src_monos.len()]; rows];
    let mut ab = vec![vec![Q::zero(); r0 * src_monos.len() + 1]; rows];
    for s in 0..r0 {
        for (mi, mono) in src_monos.iter().enumerate() {
            let mp = Poly::from_terms(&vars, [(mono.clone(), Q::one())]);
            for (t, comp) in alg.anchor_of_basis(s).components().iter().enumerate() {
                let prod = &mp * comp;
                for (mm, c) in prod.terms() {
                    let row =
                        t * dst_monos.len() + dst_monos.iter().position(|m| m == mm).unwrap();
                    a[row][s * src_monos.len() + mi] = c.clone();
                    ab[row][s * src_monos.len() + mi] = c.clone();
                }
            }
        }
    }
    // right-hand side: the constant monomial of component 0
    let rhs_row = dst_monos.iter().position(|m| m.total_degree() == 0).unwrap();
    let last = ab[0].len() - 1;
    ab[rhs_row][last] = Q::one();
    assert!(rank_oracle(a) < rank_oracle(ab), "system must be infeasible");
}

#[test]
fn gln_adjoint_traces_match_binomial_formula() {
    fn binom(n: usize, k: usize) -> i64 {
        let mut r = 1i64;
        for i in 0..k {
            r = r * (n - i) as i64 / (i + 1) as i64;
        }
        r
    }
    for n in [3usize, 4] {
        let alg = build_gln(n);
        let diag = alg.bundle().find_label("e1_1").unwrap().1;
        let off = alg.bundle().find_label("e1_2").unwrap().1;
        for p in 1..n {
            let expected = Poly::int(alg.vars(), p as i64 * binom(n, p + 1));
            assert_eq!(adjoint_trace(&alg, diag, p).unwrap(), expected, "n={n} p={p}");
            assert!(adjoint_trace(&alg, off, p).unwrap().is_zero());
        }
        assert!(adjoint_trace(&alg, diag, 0).unwrap().is_zero());
    }
}

#[test]
fn son_brackets_never_hit_the_diagonal() {
    // l2(v_kl, v_I) has no v_I component, for every pair and level
    for n in [3usize, 4] {
        let alg = build_son(n);
        let vars = alg.vars().clone();
        for a in 0..alg.bundle().rank(0) {
            for lv in 0..alg.depth() {
                for b in 0..alg.bundle().rank(lv) {
                    let s = alg.l2_basis((0, a), (lv, b)).unwrap();
                    assert!(s.coeff(b, &vars).is_zero());
                }
            }
        }
    }
}

#[test]
fn missing_bracket_is_reported_with_level() {
    let alg = build_gln(2);
    // negative-negative brackets are intentionally undeclared
    let err = alg.l2_basis((1, 0), (1, 1)).unwrap_err();
    match err {
        FoliaError::MissingBracket(msg) => assert!(msg.contains("l2")),
        other => panic!("expected MissingBracket, got {other}"),
    }
}

#[test]
fn exactness_search_zero_form_returns_zero() {
    let alg = build_son(3);
    let theta = vec![Poly::zero(alg.vars()); alg.bundle().rank(0)];
    match exactness_search(&alg, &theta, 4) {
        SearchOutcome::Solution(g) => assert!(g.is_zero()),
        SearchOutcome::Infeasible => panic!("zero form is exact"),
    }
}

#[test]
fn euler_search_infeasible_at_any_bound() {
    for n in [1usize, 2, 4] {
        let alg = build_euler(n);
        let theta = modular_one_form(&alg).unwrap();
        for bound in 0..=8 {
            assert!(matches!(
                exactness_search(&alg, &theta.values, bound),
                SearchOutcome::Infeasible
            ));
        }
    }
}

#[test]
fn single_field_divergence_free_is_unimodular() {
    // X = g(x2, x3) d_1 has theta = 0 and the zero witness
    let alg = build_contrast_transverse();
    let theta = modular_one_form(&alg).unwrap();
    assert!(theta.values[0].is_zero());
    match exactness_search(&alg, &theta.values, 4) {
        SearchOutcome::Solution(g) => assert!(g.is_zero()),
        SearchOutcome::Infeasible => panic!("expected the zero witness"),
    }
}

#[test]
fn single_field_derivative_value() {
    // X = f(x1) d_1 gives theta = f'
    let vars = Vars::xn(2);
    let x1 = Poly::var(&vars, 0);
    let f = x1.pow(3);
    let alg = build_single_vf(VectorField::new(
        &vars,
        vec![f.clone(), Poly::zero(&vars)],
    ));
    let theta = modular_one_form(&alg).unwrap();
    assert_eq!(theta.values[0], f.derive(0));
}

#[test]
fn obstruction_cases() {
    let euler = build_euler(3);
    let theta = modular_one_form(&euler).unwrap();
    let origin = vec![qi(0); 3];
    assert!(matches!(
        origin_obstruction(&euler, &theta.values, &origin),
        Obstruction::Obstructed { .. }
    ));
    // off the origin the anchor does not vanish
    let off = vec![qi(1), qi(0), qi(0)];
    assert_eq!(
        origin_obstruction(&euler, &theta.values, &off),
        Obstruction::NoObstruction
    );
    let son = build_son(3);
    let theta = modular_one_form(&son).unwrap();
    assert_eq!(
        origin_obstruction(&son, &theta.values, &origin),
        Obstruction::NoObstruction
    );
}

#[test]
fn witness_checks_for_euler_and_poisson() {
    let euler = build_euler(4);
    let theta = modular_one_form(&euler).unwrap();
    let mut q = Poly::zero(euler.vars());
    for i in 0..4 {
        let xi = Poly::var(euler.vars(), i);
        q += &(&xi * &xi);
    }
    let witness = RatLog::log(folia_core::poly::qr(4, 2), q);
    assert!(verify_witness(&euler, &theta.values, &witness).passed);

    let poisson = build_poisson_r3();
    let theta = modular_one_form(&poisson).unwrap();
    let x = Poly::var(poisson.vars(), 0);
    let y = Poly::var(poisson.vars(), 1);
    let good = RatLog::log(Q::one(), &(&x * &x) + &(&y * &y));
    assert!(verify_witness(&poisson, &theta.values, &good).passed);
    // the half-log candidate fails with residual -1 on dz
    let half = RatLog::log(folia_core::poly::qr(1, 2), &(&x * &x) + &(&y * &y));
    let check = verify_witness(&poisson, &theta.values, &half);
    assert!(!check.passed);
    assert!(check.residuals[2].equal_poly(&Poly::int(poisson.vars(), 1)));
}

#[test]
fn gln_alternating_rank_sum_is_n() {
    // Euler characteristic of the truncated complex, computed
    for n in 2..=5usize {
        let alg = build_gln(n);
        let mut sum: i64 = 0;
        for p in 0..alg.depth() {
            let r = alg.bundle().rank(p) as i64;
            sum += if p % 2 == 0 { r } else { -r };
        }
        assert_eq!(sum, n as i64);
    }
}
