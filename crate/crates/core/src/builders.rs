//! Constructors for the example Lie n-algebroids and regular
//! presentations shipped with the crate, with every bracket table
//! declared exactly as far as the modular computation needs it.

use crate::algebroid::{BasisRef, LieNAlgebroid};
use crate::error::{FoliaError, Result};
use crate::fields::VectorField;
use crate::forms::{sort_word, DifferentialForm};
use crate::graded::{GradedBundle, Section};
use crate::poly::{qi, qr, Poly, Vars};
use crate::regfol::RegularPresentation;

/// Ascending words of the given length over `1..=n`.
fn ascending_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, len, cur, out);
            cur.pop();
        }
    }
    rec(1, n, len, &mut cur, &mut out);
    out
}

fn word_label(word: &[usize]) -> String {
    word.iter().map(|i| i.to_string()).collect()
}

/// The rank-one trivial Lie algebroid generated by a single vector
/// field: depth 1, anchor sends the constant section to the field.
pub fn build_single_vf(x: VectorField) -> LieNAlgebroid {
    let vars = x.vars().clone();
    let bundle = GradedBundle::new(vec![1], vec![vec!["one".into()]]);
    LieNAlgebroid::new(vars, bundle, vec![x], vec![], vec![], Some(vec![]))
        .expect("single-field data is well-formed")
}

/// The Euler vector field on R^n as a rank-one algebroid.
pub fn build_euler(n: usize) -> LieNAlgebroid {
    assert!(n >= 1);
    let vars = Vars::xn(n);
    build_single_vf(VectorField::euler(&vars))
}

/// The cotangent Lie algebroid of the bivector
/// `(x dx + y dy) ^ dz` on R^3, resolved one step: depth 2 with the
/// kernel generator `y dx - x dy`.
pub fn build_poisson_r3() -> LieNAlgebroid {
    let vars = Vars::xyz(3);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let zero = Poly::zero(&vars);
    let bundle = GradedBundle::new(
        vec![3, 1],
        vec![
            vec!["dx".into(), "dy".into(), "dz".into()],
            vec!["one".into()],
        ],
    );
    let anchor = vec![
        VectorField::new(&vars, vec![zero.clone(), zero.clone(), x.clone()]),
        VectorField::new(&vars, vec![zero.clone(), zero.clone(), y.clone()]),
        VectorField::new(&vars, vec![-&x, -&y, zero.clone()]),
    ];
    let mut delta = Section::zero(0);
    delta.add(0, y.clone());
    delta.add(1, -&x);
    let l1 = vec![vec![delta]];
    let basis = |i: usize| Section::basis(0, i, &vars);
    let l2 = vec![
        ((0, 0), (0, 1), Section::zero(0)),
        ((0, 0), (0, 2), basis(0)),
        ((0, 1), (0, 2), basis(1)),
        ((0, 0), (1, 0), Section::zero(1)),
        ((0, 1), (1, 0), Section::zero(1)),
        ((0, 2), (1, 0), Section::basis(1, 0, &vars).scale(&Poly::int(&vars, -2))),
    ];
    LieNAlgebroid::new(vars, bundle, anchor, l1, l2, Some(vec![]))
        .expect("cotangent algebroid data is well-formed")
}

/// Symmetric-matrix part of a degree-0 basis element of the
/// quadratic-fields algebroid: `(a, b, c)` with quadratic form
/// `a x^2 + 2b xy + c y^2`.
fn quadratic_abc(p: usize) -> (i64, i64, i64) {
    match p {
        0 => (1, 0, 0),
        1 => (0, 1, 0),
        2 => (0, 0, 1),
        _ => unreachable!(),
    }
}

/// Vector fields on R^2 vanishing quadratically at the origin:
/// `E_0 = S^2(R^2) (x) R^2` (rank 6) over `E_{-1} = R^2 (x) R^2`
/// (rank 4), depth 2, with a genuine 3-bracket.
pub fn build_quadratic_r2() -> LieNAlgebroid {
    let vars = Vars::xyz(2);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let labels0: Vec<String> = (1..=6).map(|i| format!("e{i}")).collect();
    let labels1: Vec<String> = (1..=4).map(|i| format!("f{i}")).collect();
    let bundle = GradedBundle::new(vec![6, 4], vec![labels0, labels1]);

    // e_idx = (A part, X part): A = idx % 3, X = idx / 3
    let quad = |p: usize| -> Poly {
        let (a, b, c) = quadratic_abc(p);
        let mut q = (&x * &x).scale(&qi(a));
        q += &(&x * &y).scale(&qi(2 * b));
        q += &(&y * &y).scale(&qi(c));
        q
    };
    let dir = |q: usize, f: &Poly| -> Poly {
        // derivative along (1,0) or (0,1)
        f.derive(q)
    };
    let mut anchor = Vec::new();
    for idx in 0..6 {
        let (ap, xp) = (idx % 3, idx / 3);
        let mut comps = vec![Poly::zero(&vars), Poly::zero(&vars)];
        comps[xp] = quad(ap);
        anchor.push(VectorField::new(&vars, comps));
    }

    // unary map: (alpha, beta) (x) Y -> matrix (2y a, -x a + y b; ., -2x b) (x) Y
    let mut l1_maps = Vec::new();
    for f_idx in 0..4 {
        let (col, yp) = (f_idx % 2, f_idx / 2);
        let (alpha, beta) = if col == 0 { (1, 0) } else { (0, 1) };
        let a_coeff = y.scale(&qi(2 * alpha));
        let b_coeff = &x.scale(&qi(-alpha)) + &y.scale(&qi(beta));
        let c_coeff = x.scale(&qi(-2 * beta));
        let mut s = Section::zero(0);
        s.add(yp * 3, a_coeff);
        s.add(yp * 3 + 1, b_coeff);
        s.add(yp * 3 + 2, c_coeff);
        l1_maps.push(s);
    }

    let mut l2 = Vec::new();
    // degree-0 pairs: l2(A(x)X, B(x)Y) = Xbar(B) A(x)Y - Ybar(A) B(x)X
    for i in 0..6 {
        for j in (i + 1)..6 {
            let (ai, xi) = (i % 3, i / 3);
            let (aj, xj) = (j % 3, j / 3);
            let mut s = Section::zero(0);
            s.add(ai * 1 + xj * 3, Poly::zero(&vars));
            let xi_on_aj = dir(xi, &quad(aj));
            let xj_on_ai = dir(xj, &quad(ai));
            s.add(xj * 3 + ai, xi_on_aj);
            s.add(xi * 3 + aj, -&xj_on_ai);
            l2.push(((0usize, i), (0usize, j), s));
        }
    }
    // mixed pairs: Eq.-level formula with the Leibniz-compatible
    // first vector (w1, w2) (x) Y and correction -Ybar(A) (alpha,beta) (x) X
    for i in 0..6 {
        let (ap, xp) = (i % 3, i / 3);
        let (a, b, c) = quadratic_abc(ap);
        let (u, v) = if xp == 0 { (1i64, 0i64) } else { (0, 1) };
        for f_idx in 0..4 {
            let (col, yp) = (f_idx % 2, f_idx / 2);
            let (alpha, beta) = if col == 0 { (1i64, 0i64) } else { (0, 1) };
            // w1 = alpha(a x u + 2b x v + c y v) + beta(a y u - a x v)
            let mut w1 = x.scale(&qi(alpha * a * u));
            w1 += &x.scale(&qi(alpha * 2 * b * v));
            w1 += &y.scale(&qi(alpha * c * v));
            w1 += &y.scale(&qi(beta * a * u));
            w1 += &x.scale(&qi(-beta * a * v));
            // w2 = beta(a x u + 2b y u + c y v) + alpha(c x v - c y u)
            let mut w2 = x.scale(&qi(beta * a * u));
            w2 += &y.scale(&qi(beta * 2 * b * u));
            w2 += &y.scale(&qi(beta * c * v));
            w2 += &x.scale(&qi(alpha * c * v));
            w2 += &y.scale(&qi(-alpha * c * u));
            let mut s = Section::zero(1);
            s.add(yp * 2, w1);
            s.add(yp * 2 + 1, w2);
            // correction term: -Ybar(A) (alpha, beta) (x) X
            let ybar_a = dir(yp, &quad(ap));
            s.add(xp * 2 + col, -&ybar_a);
            l2.push(((0usize, i), (1usize, f_idx), s));
        }
    }

    // 3-bracket on degree-0 triples, cyclic sum of
    // X1 X2 (A3) * w(A1, A2) (x) X3
    let mut l3 = Vec::new();
    let triples = {
        let mut t = Vec::new();
        for a in 0..6 {
            for b in (a + 1)..6 {
                for c in (b + 1)..6 {
                    t.push([a, b, c]);
                }
            }
        }
        t
    };
    for t in triples {
        let mut s = Section::zero(1);
        for rot in 0..3 {
            let (i1, i2, i3) = (t[rot], t[(rot + 1) % 3], t[(rot + 2) % 3]);
            let (a1, x1) = (i1 % 3, i1 / 3);
            let (a2, x2) = (i2 % 3, i2 / 3);
            let (a3, x3) = (i3 % 3, i3 / 3);
            let scalar = dir(x1, &dir(x2, &quad(a3)));
            if scalar.is_zero() {
                continue;
            }
            let (ca1, cb1, cc1) = quadratic_abc(a1);
            let (ca2, cb2, cc2) = quadratic_abc(a2);
            // w = ((b1 a2 - a1 b2) x + (c1 a2 - a1 c2)/2 y,
            //      (c1 b2 - b1 c2) y + (c1 a2 - a1 c2)/2 x)
            let mut w_alpha = x.scale(&qi(cb1 * ca2 - ca1 * cb2));
            w_alpha += &y.scale(&qr(cc1 * ca2 - ca1 * cc2, 2));
            let mut w_beta = y.scale(&qi(cc1 * cb2 - cb1 * cc2));
            w_beta += &x.scale(&qr(cc1 * ca2 - ca1 * cc2, 2));
            s.add(x3 * 2, &w_alpha * &scalar);
            s.add(x3 * 2 + 1, &w_beta * &scalar);
        }
        l3.push(([t[0], t[1], t[2]], s));
    }

    LieNAlgebroid::new(vars, bundle, anchor, vec![l1_maps], l2, Some(l3))
        .expect("quadratic-fields data is well-formed")
}

/// The action algebroid of `gl_n` acting on `R^n`, resolved by the
/// Koszul-type complex with `E_{-p}` of rank `n * C(n, p+1)`.
///
/// Level-`p` basis elements are `e{I}_k` with `I` an ascending word of
/// length `p+1` and `k` the copy index; the paper writes the wedge
/// factors of level `p` with superscript `p+1`, which is inconsistent
/// with the level, so labels here stay level-consistent.
pub fn build_gln(n: usize) -> LieNAlgebroid {
    assert!((1..=9).contains(&n), "supported range is 1..=9");
    let vars = Vars::xn(n);
    let mut ranks = Vec::new();
    let mut labels = Vec::new();
    let mut level_words = Vec::new();
    for p in 0..n {
        let words = ascending_words(n, p + 1);
        ranks.push(n * words.len());
        let mut ls = Vec::new();
        for k in 1..=n {
            for w in &words {
                ls.push(format!("e{}_{}", word_label(w), k));
            }
        }
        labels.push(ls);
        level_words.push(words);
    }
    let bundle = GradedBundle::new(ranks, labels);
    let word_pos = |p: usize, w: &[usize]| -> usize {
        level_words[p]
            .iter()
            .position(|x| x == w)
            .expect("canonical word")
    };
    let index_of = |p: usize, w: &[usize], k: usize| -> usize {
        (k - 1) * level_words[p].len() + word_pos(p, w)
    };
    let parts_of = |p: usize, idx: usize| -> (Vec<usize>, usize) {
        let m = level_words[p].len();
        let k = idx / m + 1;
        (level_words[p][idx % m].clone(), k)
    };

    // anchor: e{i}_j -> x_i d_j
    let mut anchor = Vec::new();
    for idx in 0..bundle.rank(0) {
        let (w, k) = parts_of(0, idx);
        let mut comps = vec![Poly::zero(&vars); n];
        comps[k - 1] = Poly::var(&vars, w[0] - 1);
        anchor.push(VectorField::new(&vars, comps));
    }

    // unary maps: alternating contraction by the coordinate functions
    let mut l1 = Vec::new();
    for p in 1..n {
        let mut maps = Vec::new();
        for idx in 0..bundle.rank(p) {
            let (w, k) = parts_of(p, idx);
            let mut s = Section::zero(p - 1);
            for (j, &ij) in w.iter().enumerate() {
                let mut rest = w.clone();
                rest.remove(j);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let coeff = Poly::var(&vars, ij - 1).scale(&qi(sign));
                s.add(index_of(p - 1, &rest, k), coeff);
            }
            maps.push(s);
        }
        l1.push(maps);
    }

    // brackets of degree-0 elements with every level:
    // [e{i}_j, e{I}_k] = sum_l delta(j, I_l) e{I with I_l -> i}_k
    //                    - delta(i, k) e{I}_j
    let mut l2 = Vec::new();
    for a in 0..bundle.rank(0) {
        let (wa, j) = parts_of(0, a);
        let i = wa[0];
        for p in 0..n {
            for b in 0..bundle.rank(p) {
                if p == 0 && b < a {
                    continue;
                }
                let (wb, k) = parts_of(p, b);
                let mut s = Section::zero(p);
                for (l, &il) in wb.iter().enumerate() {
                    if il != j {
                        continue;
                    }
                    let mut replaced = wb.clone();
                    replaced[l] = i;
                    let (sorted, sign) = sort_word(&replaced);
                    if sign == 0 {
                        continue;
                    }
                    s.add(
                        index_of(p, &sorted, k),
                        Poly::int(&vars, sign as i64),
                    );
                }
                if i == k {
                    s.add(index_of(p, &wb, j), Poly::int(&vars, -1));
                }
                l2.push(((0usize, a), (p, b), s));
            }
        }
    }

    LieNAlgebroid::new(vars, bundle, anchor, l1, l2, Some(vec![]))
        .expect("gl_n action data is well-formed")
}

/// The action algebroid of `so_n` acting on `R^n`, resolved by the
/// Koszul complex of the radial quadratic: `E_{-i}` is the `(i+2)`-nd
/// exterior power of the tangent bundle and the unary map contracts
/// with the differential of `(1/2) sum x_i^2`.
pub fn build_son(n: usize) -> LieNAlgebroid {
    assert!((2..=9).contains(&n), "supported range is 2..=9");
    let vars = Vars::xn(n);
    let depth = n - 1;
    let mut ranks = Vec::new();
    let mut labels = Vec::new();
    let mut level_words = Vec::new();
    for lv in 0..depth {
        let words = ascending_words(n, lv + 2);
        ranks.push(words.len());
        labels.push(words.iter().map(|w| format!("v{}", word_label(w))).collect());
        level_words.push(words);
    }
    let bundle = GradedBundle::new(ranks, labels);
    let index_of = |lv: usize, w: &[usize]| -> usize {
        level_words[lv]
            .iter()
            .position(|x| x == w)
            .expect("canonical word")
    };

    // anchor: v{kl} -> x_k d_l - x_l d_k
    let mut anchor = Vec::new();
    for w in &level_words[0] {
        let (k, l) = (w[0], w[1]);
        let mut comps = vec![Poly::zero(&vars); n];
        comps[l - 1] = Poly::var(&vars, k - 1);
        comps[k - 1] = -&Poly::var(&vars, l - 1);
        anchor.push(VectorField::new(&vars, comps));
    }

    // unary maps: interior product with d(phi) = sum x_i dx_i
    let mut l1 = Vec::new();
    for lv in 1..depth {
        let mut maps = Vec::new();
        for w in &level_words[lv] {
            let mut s = Section::zero(lv - 1);
            for (j, &ij) in w.iter().enumerate() {
                let mut rest = w.clone();
                rest.remove(j);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                s.add(index_of(lv - 1, &rest), Poly::var(&vars, ij - 1).scale(&qi(sign)));
            }
            maps.push(s);
        }
        l1.push(maps);
    }

    // 2-brackets of a degree-0 generator with any level:
    // l2(v{kl}, v{I}) = sum_j delta(k, I_j) (-1)^j v{l, I\I_j}
    //                 - sum_j delta(l, I_j) (-1)^j v{k, I\I_j}
    let mut l2 = Vec::new();
    for a in 0..bundle.rank(0) {
        let (k, l) = (level_words[0][a][0], level_words[0][a][1]);
        for lv in 0..depth {
            for b in 0..bundle.rank(lv) {
                if lv == 0 && b < a {
                    continue;
                }
                let wb = &level_words[lv][b];
                let mut s = Section::zero(lv);
                for (j, &ij) in wb.iter().enumerate() {
                    let jsign = if (j + 1) % 2 == 0 { 1i64 } else { -1 };
                    if ij == k {
                        let mut word = vec![l];
                        word.extend(wb.iter().enumerate().filter(|&(q, _)| q != j).map(|(_, &v)| v));
                        let (sorted, wsign) = sort_word(&word);
                        if wsign != 0 {
                            s.add(
                                index_of(lv, &sorted),
                                Poly::int(&vars, jsign * wsign as i64),
                            );
                        }
                    }
                    if ij == l {
                        let mut word = vec![k];
                        word.extend(wb.iter().enumerate().filter(|&(q, _)| q != j).map(|(_, &v)| v));
                        let (sorted, wsign) = sort_word(&word);
                        if wsign != 0 {
                            s.add(
                                index_of(lv, &sorted),
                                Poly::int(&vars, -jsign * wsign as i64),
                            );
                        }
                    }
                }
                l2.push(((0usize, a), (lv, b), s));
            }
        }
    }

    LieNAlgebroid::new(vars, bundle, anchor, l1, l2, Some(vec![]))
        .expect("so_n action data is well-formed")
}

/// Block sum of two algebroids whose anchors commute: all cross
/// 2-brackets are declared zero, which is validated against the
/// commutators of the anchor images.
pub fn direct_sum(a: &LieNAlgebroid, b: &LieNAlgebroid) -> Result<LieNAlgebroid> {
    // merged ambient variables: a's order first, then b's new ones
    let mut names: Vec<String> = a.vars().names().to_vec();
    for n in b.vars().names() {
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    let vars = Vars::new(names);
    let depth = a.depth().max(b.depth());
    let rank_a = |lv: usize| if lv < a.depth() { a.bundle().rank(lv) } else { 0 };
    let rank_b = |lv: usize| if lv < b.depth() { b.bundle().rank(lv) } else { 0 };

    let mut ranks = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for lv in 0..depth {
        let r = rank_a(lv) + rank_b(lv);
        if r == 0 {
            return Err(FoliaError::Invalid(
                "direct sum has a gap level of rank zero".into(),
            ));
        }
        ranks.push(r);
        let mut ls: Vec<String> = if lv < a.depth() {
            a.bundle().labels(lv).to_vec()
        } else {
            Vec::new()
        };
        if lv < b.depth() {
            for l in b.bundle().labels(lv) {
                if ls.contains(l) {
                    ls.push(format!("{l}_b"));
                } else {
                    ls.push(l.clone());
                }
            }
        }
        labels.push(ls);
    }
    let bundle = GradedBundle::new(ranks, labels);

    // cross-commutation of the anchors
    let mut anchor = Vec::new();
    for i in 0..rank_a(0) {
        anchor.push(a.anchor_of_basis(i).embed(&vars));
    }
    for j in 0..rank_b(0) {
        anchor.push(b.anchor_of_basis(j).embed(&vars));
    }
    for i in 0..rank_a(0) {
        for j in 0..rank_b(0) {
            let br = anchor[i].lie_bracket(&anchor[rank_a(0) + j]);
            if !br.is_zero() {
                return Err(FoliaError::CrossBracketNonZero(format!(
                    "[rho({}), rho({})] = {br}",
                    a.bundle().label(0, i),
                    b.bundle().label(0, j)
                )));
            }
        }
    }

    let embed_section = |s: &Section, from_b: bool| -> Section {
        let mut out = Section::zero(s.level);
        let offset = if from_b { rank_a(s.level) } else { 0 };
        for (i, c) in s.coeffs() {
            out.add(i + offset, c.embed(&vars));
        }
        out
    };

    let mut l1 = Vec::new();
    for lv in 1..depth {
        let mut maps = Vec::new();
        for i in 0..rank_a(lv) {
            maps.push(embed_section(
                a.l1_of_basis(lv, i).expect("level >= 1"),
                false,
            ));
        }
        for j in 0..rank_b(lv) {
            maps.push(embed_section(b.l1_of_basis(lv, j).expect("level >= 1"), true));
        }
        l1.push(maps);
    }

    let mut l2: Vec<(BasisRef, BasisRef, Section)> = Vec::new();
    let push_block = |src: &LieNAlgebroid, from_b: bool, l2: &mut Vec<(BasisRef, BasisRef, Section)>| {
        let offset = |lv: usize| if from_b { rank_a(lv) } else { 0 };
        for lv_a in 0..src.depth() {
            for ia in 0..src.bundle().rank(lv_a) {
                for lv_b in 0..src.depth() {
                    for ib in 0..src.bundle().rank(lv_b) {
                        if (lv_b, ib) < (lv_a, ia) {
                            continue;
                        }
                        if lv_a + lv_b >= src.depth() {
                            continue;
                        }
                        if let Ok(s) = src.l2_basis((lv_a, ia), (lv_b, ib)) {
                            l2.push((
                                (lv_a, ia + offset(lv_a)),
                                (lv_b, ib + offset(lv_b)),
                                embed_section(&s, from_b),
                            ));
                        }
                    }
                }
            }
        }
    };
    push_block(a, false, &mut l2);
    push_block(b, true, &mut l2);
    // cross brackets vanish by assumption
    for lv_a in 0..a.depth() {
        for ia in 0..rank_a(lv_a) {
            for lv_b in 0..b.depth() {
                for ib in 0..rank_b(lv_b) {
                    if lv_a + lv_b >= depth {
                        continue;
                    }
                    l2.push((
                        (lv_a, ia),
                        (lv_b, rank_a(lv_b) + ib),
                        Section::zero(lv_a + lv_b),
                    ));
                }
            }
        }
    }

    // 3-brackets: block entries carried over, mixed triples zero
    let mut l3 = Vec::new();
    for t in ascending_triple_indices(rank_a(0)) {
        if let Ok(s) = a.l3_basis((0, t[0]), (0, t[1]), (0, t[2])) {
            if !s.is_zero() {
                l3.push(([t[0], t[1], t[2]], embed_section(&s, false)));
            }
        }
    }
    for t in ascending_triple_indices(rank_b(0)) {
        if let Ok(s) = b.l3_basis((0, t[0]), (0, t[1]), (0, t[2])) {
            if !s.is_zero() {
                l3.push((
                    [t[0] + rank_a(0), t[1] + rank_a(0), t[2] + rank_a(0)],
                    embed_section(&s, true),
                ));
            }
        }
    }

    LieNAlgebroid::new(vars, bundle, anchor, l1, l2, Some(l3))
}

fn ascending_triple_indices(r: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..r {
        for b in (a + 1)..r {
            for c in (b + 1)..r {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// `so_n` summed with the Euler field over the same coordinates.
pub fn build_son_euler(n: usize) -> LieNAlgebroid {
    direct_sum(&build_son(n), &build_euler(n)).expect("the Euler field is central")
}

/// First contrast field: `(x2^2 + x3^2) d_1` on R^3, divergence-free.
pub fn build_contrast_transverse() -> LieNAlgebroid {
    let vars = Vars::xn(3);
    let x2 = Poly::var(&vars, 1);
    let x3 = Poly::var(&vars, 2);
    let g = &(&x2 * &x2) + &(&x3 * &x3);
    build_single_vf(VectorField::new(
        &vars,
        vec![g, Poly::zero(&vars), Poly::zero(&vars)],
    ))
}

/// Second contrast field: `x1 d_1` on R^3, with unit divergence.
pub fn build_contrast_radial() -> LieNAlgebroid {
    let vars = Vars::xn(3);
    build_single_vf(VectorField::new(
        &vars,
        vec![Poly::var(&vars, 0), Poly::zero(&vars), Poly::zero(&vars)],
    ))
}

/// Spiral foliation of the plane minus a disk.
pub fn spiral_presentation() -> RegularPresentation {
    let vars = Vars::xyz(2);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let v = VectorField::new(&vars, vec![&x - &y, &x + &y]);
    let omega = DifferentialForm::one_form(&vars, vec![&x + &y, -&(&x - &y)]);
    RegularPresentation {
        name: "spiral".into(),
        generators: vec![("v".into(), v)],
        annihilator: vec![("w".into(), omega.clone())],
        transverse: omega,
        singular_locus: Some(&(&x * &x) + &(&y * &y)),
    }
}

/// Concentric circles on the punctured plane.
pub fn circles_presentation() -> RegularPresentation {
    let vars = Vars::xyz(2);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let v = VectorField::new(&vars, vec![-&y, x.clone()]);
    let omega = DifferentialForm::one_form(&vars, vec![x.scale(&qi(2)), y.scale(&qi(2))]);
    RegularPresentation {
        name: "circles".into(),
        generators: vec![("v".into(), v)],
        annihilator: vec![("w".into(), omega.clone())],
        transverse: omega,
        singular_locus: Some(&(&x * &x) + &(&y * &y)),
    }
}

/// Radial lines escaping the origin of R^n: the regular part of the
/// Euler foliation, with the spherical transverse volume form.
pub fn euler_regular(n: usize) -> RegularPresentation {
    assert!(n >= 2);
    let vars = Vars::xn(n);
    let eps = VectorField::euler(&vars);
    let mut annihilator = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut comps = vec![Poly::zero(&vars); n];
            comps[j] = Poly::var(&vars, i);
            comps[i] = -&Poly::var(&vars, j);
            annihilator.push((
                format!("w{}{}", i + 1, j + 1),
                DifferentialForm::one_form(&vars, comps),
            ));
        }
    }
    let transverse = DifferentialForm::volume(&vars).interior_product(&eps);
    let mut locus = Poly::zero(&vars);
    for i in 0..n {
        let xi = Poly::var(&vars, i);
        locus += &(&xi * &xi);
    }
    RegularPresentation {
        name: format!("euler-regular-{n}"),
        generators: vec![("eps".into(), eps)],
        annihilator,
        transverse,
        singular_locus: Some(locus),
    }
}

/// Regular part of the characteristic foliation of the degenerate
/// Poisson structure on R^3.
pub fn poisson3_regular() -> RegularPresentation {
    let vars = Vars::xyz(3);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let zero = Poly::zero(&vars);
    let gens = vec![
        (
            "Xx".to_string(),
            VectorField::new(&vars, vec![zero.clone(), zero.clone(), x.clone()]),
        ),
        (
            "Xy".to_string(),
            VectorField::new(&vars, vec![zero.clone(), zero.clone(), y.clone()]),
        ),
        (
            "Xz".to_string(),
            VectorField::new(&vars, vec![-&x, -&y, zero.clone()]),
        ),
    ];
    let omega = DifferentialForm::one_form(&vars, vec![y.clone(), -&x, zero]);
    RegularPresentation {
        name: "poisson3-regular".into(),
        generators: gens,
        annihilator: vec![("w".into(), omega.clone())],
        transverse: omega,
        singular_locus: Some(&(&x * &x) + &(&y * &y)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{adjoint_trace, modular_one_form};

    #[test]
    fn euler_modular_value() {
        for n in 1..=6 {
            let alg = build_euler(n);
            let theta = modular_one_form(&alg).unwrap();
            assert_eq!(theta.values[0], Poly::int(alg.vars(), n as i64));
        }
    }

    #[test]
    fn poisson_assembles_minus_two() {
        let alg = build_poisson_r3();
        let theta = modular_one_form(&alg).unwrap();
        assert!(theta.values[0].is_zero());
        assert!(theta.values[1].is_zero());
        assert_eq!(theta.values[2], Poly::int(alg.vars(), -2));
    }

    #[test]
    fn quadratic_level_traces() {
        let alg = build_quadratic_r2();
        let vars = alg.vars().clone();
        let x = Poly::var(&vars, 0);
        // level-0 trace of e1 is -2x, level-1 trace is -x-x+x+x = 0
        assert_eq!(adjoint_trace(&alg, 0, 0).unwrap(), x.scale(&qi(-2)));
        assert!(adjoint_trace(&alg, 0, 1).unwrap().is_zero());
        let theta = modular_one_form(&alg).unwrap();
        assert!(theta.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn gln_ranks_and_theta() {
        for n in 2..=4usize {
            let alg = build_gln(n);
            let mut binom = |k: usize| -> usize {
                let mut r = 1usize;
                for i in 0..k {
                    r = r * (n - i) / (i + 1);
                }
                r
            };
            for p in 0..n {
                assert_eq!(alg.bundle().rank(p), n * binom(p + 1));
            }
            let theta = modular_one_form(&alg).unwrap();
            assert!(theta.values.iter().all(|v| v.is_zero()), "n = {n}");
        }
    }

    #[test]
    fn gl1_theta_is_one() {
        let alg = build_gln(1);
        let theta = modular_one_form(&alg).unwrap();
        assert_eq!(theta.values[0], Poly::int(alg.vars(), 1));
    }

    #[test]
    fn son_theta_vanishes() {
        for n in 3..=4 {
            let alg = build_son(n);
            let theta = modular_one_form(&alg).unwrap();
            assert!(theta.values.iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn son_euler_composite() {
        let alg = build_son_euler(3);
        let theta = modular_one_form(&alg).unwrap();
        // so_3 rotations contribute zero, the appended Euler slot is n
        assert!(theta.values[..3].iter().all(|v| v.is_zero()));
        assert_eq!(theta.values[3], Poly::int(alg.vars(), 3));
    }

    #[test]
    fn euler_euler_disjoint_variables() {
        let a = build_euler(2);
        let b = {
            let vars = Vars::new(["x3", "x4"]);
            build_single_vf(VectorField::euler(&vars))
        };
        let sum = direct_sum(&a, &b).unwrap();
        assert_eq!(sum.vars().len(), 4);
        let theta = modular_one_form(&sum).unwrap();
        assert_eq!(theta.values[0], Poly::int(sum.vars(), 2));
        assert_eq!(theta.values[1], Poly::int(sum.vars(), 2));
    }
}
