//! Lie n-algebroid structure data over polynomial coefficients.
//!
//! Bracket tables are partial: the examples only declare what the
//! modular computation needs, so every lookup distinguishes a declared
//! zero from an undeclared entry. Verification reports `Unchecked`
//! rather than guessing missing values.

use std::collections::BTreeMap;

use crate::error::{FoliaError, Result};
use crate::fields::VectorField;
use crate::graded::{koszul_sign, unshuffles, GradedBundle, Section};
use crate::linalg::QMatrix;
use crate::poly::{monomials_of_degree, Mono, Poly, Vars};

/// Basis address: `(level, index)` names `e^{(level)}_{index}`,
/// a constant basis section of `E_{-level}`.
pub type BasisRef = (usize, usize);

#[derive(Debug, Clone)]
pub struct LieNAlgebroid {
    vars: Vars,
    bundle: GradedBundle,
    /// Anchor images of the degree-0 basis.
    anchor: Vec<VectorField>,
    /// `l1[lv-1][idx]` is the image in `E_{-(lv-1)}` of basis `(lv, idx)`.
    l1: Vec<Vec<Section>>,
    /// Declared 2-bracket entries under the canonical key
    /// `(lva, ia, lvb, ib)` with `(lva, ia) <= (lvb, ib)`.
    l2: BTreeMap<(usize, usize, usize, usize), Section>,
    /// Declared 3-bracket entries on ascending degree-0 triples.
    l3: BTreeMap<[usize; 3], Section>,
    /// Whether the 3-bracket is declared on degree-0 triples at all.
    l3_declared: bool,
}

/// Outcome of evaluating one higher Jacobi identity.
#[derive(Debug, Clone)]
pub enum JacobiOutcome {
    /// The left-hand side of the identity; zero means it holds.
    Residual(Section),
    /// A needed bracket entry is undeclared.
    Unchecked(String),
}

impl LieNAlgebroid {
    pub fn new(
        vars: Vars,
        bundle: GradedBundle,
        anchor: Vec<VectorField>,
        l1: Vec<Vec<Section>>,
        l2_entries: Vec<(BasisRef, BasisRef, Section)>,
        l3_entries: Option<Vec<([usize; 3], Section)>>,
    ) -> Result<Self> {
        if anchor.len() != bundle.rank(0) {
            return Err(FoliaError::Invalid(
                "anchor row count must equal rank of E_0".into(),
            ));
        }
        for f in &anchor {
            if f.vars() != &vars {
                return Err(FoliaError::Invalid("anchor over wrong variables".into()));
            }
        }
        if l1.len() + 1 != bundle.depth() {
            return Err(FoliaError::Invalid(
                "need one unary map per negative level".into(),
            ));
        }
        for (i, maps) in l1.iter().enumerate() {
            let src = i + 1;
            if maps.len() != bundle.rank(src) {
                return Err(FoliaError::Invalid(format!(
                    "unary map from level {src} has wrong source rank"
                )));
            }
            for s in maps {
                if s.level != src - 1 {
                    return Err(FoliaError::Invalid(format!(
                        "unary map from level {src} must land in level {}",
                        src - 1
                    )));
                }
                if s.coeffs().any(|(idx, _)| idx >= bundle.rank(src - 1)) {
                    return Err(FoliaError::Invalid("unary map index out of range".into()));
                }
            }
        }
        let mut alg = LieNAlgebroid {
            vars,
            bundle,
            anchor,
            l1,
            l2: BTreeMap::new(),
            l3: BTreeMap::new(),
            l3_declared: l3_entries.is_some(),
        };
        for (a, b, s) in l2_entries {
            alg.declare_l2(a, b, s)?;
        }
        if let Some(entries) = l3_entries {
            for (t, s) in entries {
                alg.declare_l3(t, s)?;
            }
        }
        // the anchor must kill the image of l1 (checked exactly later in
        // complex_check; here we only validate shape)
        Ok(alg)
    }

    fn declare_l2(&mut self, a: BasisRef, b: BasisRef, s: Section) -> Result<()> {
        let target = a.0 + b.0;
        if s.level != target {
            return Err(FoliaError::Invalid(format!(
                "2-bracket of levels {} and {} must land in level {target}",
                a.0, b.0
            )));
        }
        let (key, flip) = canonical_l2_key(a, b);
        let stored = if flip { s.scale_sign(swap_sign(a.0, b.0)) } else { s };
        if let Some(existing) = self.l2.get(&key) {
            if *existing != stored {
                return Err(FoliaError::Invalid(format!(
                    "conflicting 2-bracket declaration for {:?}",
                    key
                )));
            }
        }
        self.l2.insert(key, stored);
        Ok(())
    }

    fn declare_l3(&mut self, t: [usize; 3], s: Section) -> Result<()> {
        let (sorted, sign) = sort3(t);
        if sign == 0 {
            if s.is_zero() {
                return Ok(());
            }
            return Err(FoliaError::Invalid(
                "3-bracket with a repeated argument must vanish".into(),
            ));
        }
        let stored = if sign < 0 { s.neg() } else { s };
        self.l3.insert(sorted, stored);
        Ok(())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn bundle(&self) -> &GradedBundle {
        &self.bundle
    }

    pub fn depth(&self) -> usize {
        self.bundle.depth()
    }

    pub fn anchor_of_basis(&self, idx: usize) -> &VectorField {
        &self.anchor[idx]
    }

    /// Anchor of a degree-0 section, extended C-infinity-linearly.
    pub fn anchor_of_section(&self, s: &Section) -> VectorField {
        assert_eq!(s.level, 0, "anchor applies to degree-0 sections");
        let mut out = VectorField::zero(&self.vars);
        for (i, f) in s.coeffs() {
            out = out.add(&self.anchor[i].scale_poly(f));
        }
        out
    }

    pub fn l1_of_basis(&self, lv: usize, idx: usize) -> Option<&Section> {
        if lv == 0 {
            return None;
        }
        Some(&self.l1[lv - 1][idx])
    }

    /// `l1` on an arbitrary section; `None` encodes the structural zero
    /// on degree 0.
    pub fn l1_of_section(&self, s: &Section) -> Option<Section> {
        if s.level == 0 {
            return None;
        }
        let mut out = Section::zero(s.level - 1);
        for (i, f) in s.coeffs() {
            out.add_section(&self.l1[s.level - 1][i].scale(f));
        }
        Some(out)
    }

    /// Declared 2-bracket of two constant basis sections.
    ///
    /// Entries landing below the deepest level are structurally zero.
    /// Coinciding arguments of even degree vanish by antisymmetry.
    pub fn l2_basis(&self, a: BasisRef, b: BasisRef) -> Result<Section> {
        let target = a.0 + b.0;
        if target >= self.depth() {
            return Ok(Section::zero(target));
        }
        let (key, flip) = canonical_l2_key(a, b);
        if let Some(s) = self.l2.get(&key) {
            return Ok(if flip {
                s.scale_sign(swap_sign(a.0, b.0))
            } else {
                s.clone()
            });
        }
        if a == b && swap_sign(a.0, b.0) < 0 {
            return Ok(Section::zero(target));
        }
        Err(FoliaError::MissingBracket(format!(
            "l2({}, {})",
            self.bundle.label(a.0, a.1),
            self.bundle.label(b.0, b.1)
        )))
    }

    pub fn l2_is_declared(&self, a: BasisRef, b: BasisRef) -> bool {
        self.l2_basis(a, b).is_ok()
    }

    /// Iterates the explicitly declared 2-bracket entries in canonical
    /// key order.
    pub fn l2_declared_entries(
        &self,
    ) -> impl Iterator<Item = (BasisRef, BasisRef, &Section)> {
        self.l2
            .iter()
            .map(|(&(la, ia, lb, ib), s)| ((la, ia), (lb, ib), s))
    }

    pub fn l3_is_declared(&self) -> bool {
        self.l3_declared
    }

    /// Iterates the explicitly declared nonzero 3-bracket entries.
    pub fn l3_declared_entries(&self) -> impl Iterator<Item = ([usize; 3], &Section)> {
        self.l3.iter().map(|(&t, s)| (t, s))
    }

    /// Leibniz extension of the 2-bracket to arbitrary sections:
    /// nonlinearity enters only through a degree-0 slot acting on the
    /// other coefficient via the anchor.
    pub fn l2_sections(&self, s: &Section, t: &Section) -> Result<Section> {
        let mut out = Section::zero(s.level + t.level);
        for (i, f) in s.coeffs() {
            for (j, g) in t.coeffs() {
                let base = self.l2_basis((s.level, i), (t.level, j))?;
                out.add_section(&base.scale(&(f * g)));
                if s.level == 0 {
                    // l2(f a, g b) picks up f * rho(a)[g] * b
                    out.add(j, f * &self.anchor[i].apply(g));
                }
                if t.level == 0 {
                    // and symmetrically -g * rho(b)[f] * a
                    out.add(i, -&(g * &self.anchor[j].apply(f)));
                }
            }
        }
        Ok(out)
    }

    /// Convenience: the 2-bracket of a section with a constant basis
    /// element.
    pub fn l2_section_basis(&self, s: &Section, b: BasisRef) -> Result<Section> {
        self.l2_sections(s, &Section::basis(b.0, b.1, &self.vars))
    }

    /// Declared 3-bracket on degree-0 basis triples; entries landing
    /// below the deepest level are structurally zero.
    pub fn l3_basis(&self, a: BasisRef, b: BasisRef, c: BasisRef) -> Result<Section> {
        let target = a.0 + b.0 + c.0 + 1;
        if target >= self.depth() {
            return Ok(Section::zero(target));
        }
        if a.0 == 0 && b.0 == 0 && c.0 == 0 {
            if !self.l3_declared {
                return Err(FoliaError::MissingBracket("l3 on degree-0 triples".into()));
            }
            let (sorted, sign) = sort3([a.1, b.1, c.1]);
            if sign == 0 {
                return Ok(Section::zero(target));
            }
            let s = self
                .l3
                .get(&sorted)
                .cloned()
                .unwrap_or_else(|| Section::zero(target));
            return Ok(if sign < 0 { s.neg() } else { s });
        }
        Err(FoliaError::MissingBracket(format!(
            "l3 on degrees ({}, {}, {})",
            -(a.0 as i64),
            -(b.0 as i64),
            -(c.0 as i64)
        )))
    }

    /// 3-bracket with one section argument (C-infinity-linear in every
    /// slot) and two constant basis arguments.
    fn l3_section(&self, s: &Section, b: BasisRef, c: BasisRef) -> Result<Section> {
        let mut out = Section::zero(s.level + b.0 + c.0 + 1);
        for (i, f) in s.coeffs() {
            let base = self.l3_basis((s.level, i), b, c)?;
            out.add_section(&base.scale(f));
        }
        Ok(out)
    }

    /// Left-hand side of the arity-`k` higher Jacobi identity on a
    /// tuple of constant basis sections. Brackets `l_k`, `k >= 4`, are
    /// structurally absent and contribute nothing.
    pub fn jacobi_residual(&self, k: usize, tuple: &[BasisRef]) -> JacobiOutcome {
        assert!(k >= 1 && k == tuple.len(), "arity must match tuple length");
        let degrees: Vec<i64> = tuple.iter().map(|&(lv, _)| -(lv as i64)).collect();
        let level_sum: usize = tuple.iter().map(|&(lv, _)| lv).sum();
        // nesting l_j inside l_{k-j+1} shifts the level by k - 3
        let formal = level_sum as i64 + k as i64 - 3;
        if formal < 0 {
            return JacobiOutcome::Residual(Section::zero(0));
        }
        let mut acc = Section::zero(formal as usize);
        for j in 1..=k {
            let outer_arity = k - j + 1;
            if outer_arity > 3 {
                continue;
            }
            let sign_j = if (j * (k - j)) % 2 == 0 { 1i64 } else { -1 };
            for sigma in unshuffles(j, k) {
                let eps = koszul_sign(&sigma.image(), &degrees);
                let block: Vec<BasisRef> =
                    sigma.first.iter().map(|&p| tuple[p - 1]).collect();
                let rest: Vec<BasisRef> =
                    sigma.second.iter().map(|&p| tuple[p - 1]).collect();
                let inner: Option<Section> = match j {
                    1 => self.l1_of_basis(block[0].0, block[0].1).cloned(),
                    2 => match self.l2_basis(block[0], block[1]) {
                        Ok(s) => Some(s),
                        Err(e) => return JacobiOutcome::Unchecked(e.to_string()),
                    },
                    3 => match self.l3_basis(block[0], block[1], block[2]) {
                        Ok(s) => Some(s),
                        Err(e) => return JacobiOutcome::Unchecked(e.to_string()),
                    },
                    _ => None,
                };
                let Some(inner) = inner else { continue };
                let term: Option<Section> = match outer_arity {
                    1 => self.l1_of_section(&inner),
                    2 => match self.l2_section_basis(&inner, rest[0]) {
                        Ok(s) => Some(s),
                        Err(e) => return JacobiOutcome::Unchecked(e.to_string()),
                    },
                    3 => match self.l3_section(&inner, rest[0], rest[1]) {
                        Ok(s) => Some(s),
                        Err(e) => return JacobiOutcome::Unchecked(e.to_string()),
                    },
                    _ => None,
                };
                let Some(term) = term else { continue };
                let total = sign_j * eps;
                let term = term.scale_sign(total);
                if term.level == acc.level {
                    acc.add_section(&term);
                } else if !term.is_zero() {
                    panic!(
                        "jacobi bookkeeping: level {} vs {}",
                        term.level, acc.level
                    );
                }
            }
        }
        JacobiOutcome::Residual(acc)
    }

    /// Residual of the anchor/bracket compatibility on a degree-0
    /// basis pair: `rho(l2(a,b)) - [rho(a), rho(b)]`.
    pub fn anchor_morphism_residual(&self, a: usize, b: usize) -> Result<VectorField> {
        let br = self.l2_basis((0, a), (0, b))?;
        let lhs = self.anchor_of_section(&br);
        let rhs = self.anchor[a].lie_bracket(&self.anchor[b]);
        Ok(lhs.sub(&rhs))
    }

    /// Verifies `l1 o l1 = 0` and `rho o l1 = 0` exactly, listing every
    /// failing entry.
    pub fn complex_check(&self) -> ComplexReport {
        let mut failures = Vec::new();
        for lv in 2..self.depth() {
            for idx in 0..self.bundle.rank(lv) {
                let img = self.l1[lv - 1][idx].clone();
                let twice = self.l1_of_section(&img).expect("level >= 1");
                if !twice.is_zero() {
                    failures.push(format!(
                        "l1(l1({})) = {}",
                        self.bundle.label(lv, idx),
                        twice.display(&self.bundle)
                    ));
                }
            }
        }
        if self.depth() >= 2 {
            for idx in 0..self.bundle.rank(1) {
                let img = &self.l1[0][idx];
                let field = self.anchor_of_section(img);
                if !field.is_zero() {
                    failures.push(format!(
                        "rho(l1({})) = {}",
                        self.bundle.label(1, idx),
                        field
                    ));
                }
            }
        }
        ComplexReport { failures }
    }

    /// Applies a 1-form supported on the degree-0 dual to a degree-0
    /// section.
    pub fn pair_one_form(&self, theta: &[Poly], s: &Section) -> Poly {
        assert_eq!(s.level, 0);
        let mut out = Poly::zero(&self.vars);
        for (i, f) in s.coeffs() {
            out += &(f * &theta[i]);
        }
        out
    }

    /// Arity-0 differential component on a 1-form: `u -> theta(l1(u))`
    /// over the degree -1 basis. Empty when the depth is 1.
    pub fn d0_on_one_form(&self, theta: &[Poly]) -> Vec<Poly> {
        if self.depth() < 2 {
            return Vec::new();
        }
        (0..self.bundle.rank(1))
            .map(|u| self.pair_one_form(theta, &self.l1[0][u]))
            .collect()
    }

    /// Arity-1 differential component on a 1-form, evaluated on a
    /// degree-0 basis pair:
    /// `rho(a)[theta(b)] - rho(b)[theta(a)] - theta(l2(a,b))`.
    pub fn d1_on_one_form(&self, theta: &[Poly], a: usize, b: usize) -> Result<Poly> {
        let br = self.l2_basis((0, a), (0, b))?;
        let mut out = self.anchor[a].apply(&theta[b]);
        out += &(-&self.anchor[b].apply(&theta[a]));
        out += &(-&self.pair_one_form(theta, &br));
        Ok(out)
    }

    /// The homogeneous polynomial degree of the anchor entries, when
    /// the anchor is homogeneous; zero entries are neutral.
    pub fn anchor_homogeneous_degree(&self) -> Result<u32> {
        homogeneous_degree_of(
            self.anchor
                .iter()
                .flat_map(|f| f.components().iter()),
            "anchor",
        )
    }

    /// The homogeneous degree of the unary map out of level `lv`.
    pub fn l1_homogeneous_degree(&self, lv: usize) -> Result<u32> {
        homogeneous_degree_of(
            self.l1[lv - 1].iter().flat_map(|s| s.coeffs().map(|(_, p)| p)),
            &format!("l1 from level {lv}"),
        )
    }

    /// Degree-sliced exactness of the linear part through polynomial
    /// degree `max_degree`.
    ///
    /// At position `E_{-p}` and coefficient degree `d`, the kernel
    /// dimension of the outgoing map on the degree-`d` slice must
    /// equal the rank of the incoming map from the matching slice.
    pub fn sliced_exactness(&self, max_degree: u32) -> Result<ExactnessReport> {
        self.anchor_homogeneous_degree()?;
        let mut h_l1 = Vec::new();
        for lv in 1..self.depth() {
            h_l1.push(self.l1_homogeneous_degree(lv)?);
        }
        let mut checks = Vec::new();
        for p in 0..self.depth() {
            for d in 0..=max_degree {
                let (out_matrix, cols) = if p == 0 {
                    (self.anchor_slice_matrix(d), self.bundle.rank(0))
                } else {
                    (self.l1_slice_matrix(p, d), self.bundle.rank(p))
                };
                let n_cols = cols * monomials_of_degree(self.vars.len(), d).len();
                let kernel_dim = n_cols - out_matrix.rank();
                let image_rank = if p + 1 < self.depth() {
                    let h_in = h_l1[p];
                    if d >= h_in {
                        self.l1_slice_matrix(p + 1, d - h_in).rank()
                    } else {
                        0
                    }
                } else {
                    0
                };
                checks.push(SliceCheck {
                    position: p,
                    degree: d,
                    kernel_dim,
                    image_rank,
                });
            }
        }
        let all_exact = checks.iter().all(|c| c.passes());
        Ok(ExactnessReport {
            max_degree,
            checks,
            all_exact,
        })
    }

    /// Matrix of the anchor on degree-`d` polynomial sections of `E_0`.
    fn anchor_slice_matrix(&self, d: u32) -> QMatrix {
        let n = self.vars.len();
        let h = self
            .anchor
            .iter()
            .flat_map(|f| f.components().iter())
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(1);
        let src_monos = monomials_of_degree(n, d);
        let dst_monos = monomials_of_degree(n, d + h);
        let mono_pos: BTreeMap<&Mono, usize> =
            dst_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = n * dst_monos.len();
        let cols = self.bundle.rank(0) * src_monos.len();
        let mut mat = QMatrix::zero(rows, cols);
        for (s, field) in self.anchor.iter().enumerate() {
            for (mi, m) in src_monos.iter().enumerate() {
                let col = s * src_monos.len() + mi;
                let mp = Poly::from_terms(&self.vars, [(m.clone(), crate::poly::qi(1))]);
                for (t, comp) in field.components().iter().enumerate() {
                    let prod = &mp * comp;
                    for (mm, c) in prod.terms() {
                        let row = t * dst_monos.len() + mono_pos[mm];
                        mat.set(row, col, c.clone());
                    }
                }
            }
        }
        mat
    }

    /// Matrix of `l1` from level `lv` on degree-`d` polynomial sections.
    fn l1_slice_matrix(&self, lv: usize, d: u32) -> QMatrix {
        let n = self.vars.len();
        let h = self
            .l1[lv - 1]
            .iter()
            .flat_map(|s| s.coeffs().map(|(_, p)| p))
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(1);
        let src_monos = monomials_of_degree(n, d);
        let dst_monos = monomials_of_degree(n, d + h);
        let mono_pos: BTreeMap<&Mono, usize> =
            dst_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = self.bundle.rank(lv - 1) * dst_monos.len();
        let cols = self.bundle.rank(lv) * src_monos.len();
        let mut mat = QMatrix::zero(rows, cols);
        for s in 0..self.bundle.rank(lv) {
            let image = &self.l1[lv - 1][s];
            for (mi, m) in src_monos.iter().enumerate() {
                let col = s * src_monos.len() + mi;
                let mp = Poly::from_terms(&self.vars, [(m.clone(), crate::poly::qi(1))]);
                for (t, coeff) in image.coeffs() {
                    let prod = &mp * coeff;
                    for (mm, c) in prod.terms() {
                        let row = t * dst_monos.len() + mono_pos[mm];
                        mat.set(row, col, c.clone());
                    }
                }
            }
        }
        mat
    }

    /// Finds a degree-0 section `a` with `rho(a) = x` and coefficients
    /// of degree at most `max_degree`, by exact linear solve. `None`
    /// means the bounded system is infeasible, which is not a proof of
    /// non-membership in general.
    pub fn lift_vector_field(&self, x: &VectorField, max_degree: u32) -> Option<Section> {
        let n = self.vars.len();
        if let Ok(h) = self.anchor_homogeneous_degree() {
            // homogeneous anchors split the solve by degree slices
            let mut out = Section::zero(0);
            let max_r = x
                .components()
                .iter()
                .filter_map(|c| c.total_degree())
                .max()
                .unwrap_or(0);
            for r in 0..=max_r {
                let rhs_parts: Vec<Poly> = x
                    .components()
                    .iter()
                    .map(|c| c.homogeneous_part(r))
                    .collect();
                if rhs_parts.iter().all(|p| p.is_zero()) {
                    continue;
                }
                if r < h || r - h > max_degree {
                    return None;
                }
                let d = r - h;
                let mat = self.anchor_slice_matrix(d);
                let dst_monos = monomials_of_degree(n, d + h);
                let mut rhs = vec![crate::poly::qi(0); n * dst_monos.len()];
                for (t, comp) in rhs_parts.iter().enumerate() {
                    for (m, c) in comp.terms() {
                        let pos = dst_monos.iter().position(|mm| mm == m).unwrap();
                        rhs[t * dst_monos.len() + pos] = c.clone();
                    }
                }
                let sol = mat.solve(&rhs)?;
                let src_monos = monomials_of_degree(n, d);
                for s in 0..self.bundle.rank(0) {
                    let mut poly = Poly::zero(&self.vars);
                    for (mi, m) in src_monos.iter().enumerate() {
                        let c = sol[s * src_monos.len() + mi].clone();
                        poly += &Poly::from_terms(&self.vars, [(m.clone(), c)]);
                    }
                    out.add(s, poly);
                }
            }
            Some(out)
        } else {
            self.lift_dense(x, max_degree)
        }
    }

    fn lift_dense(&self, x: &VectorField, max_degree: u32) -> Option<Section> {
        let n = self.vars.len();
        let max_anchor = self
            .anchor
            .iter()
            .flat_map(|f| f.components().iter())
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(0);
        let mut src_monos = Vec::new();
        for d in 0..=max_degree {
            src_monos.extend(monomials_of_degree(n, d));
        }
        let mut dst_monos = Vec::new();
        for d in 0..=(max_degree + max_anchor) {
            dst_monos.extend(monomials_of_degree(n, d));
        }
        let mono_pos: BTreeMap<&Mono, usize> =
            dst_monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let rows = n * dst_monos.len();
        let cols = self.bundle.rank(0) * src_monos.len();
        let mut mat = QMatrix::zero(rows, cols);
        for (s, field) in self.anchor.iter().enumerate() {
            for (mi, m) in src_monos.iter().enumerate() {
                let col = s * src_monos.len() + mi;
                let mp = Poly::from_terms(&self.vars, [(m.clone(), crate::poly::qi(1))]);
                for (t, comp) in field.components().iter().enumerate() {
                    let prod = &mp * comp;
                    for (mm, c) in prod.terms() {
                        mat.set(t * dst_monos.len() + mono_pos[mm], col, c.clone());
                    }
                }
            }
        }
        let mut rhs = vec![crate::poly::qi(0); rows];
        for (t, comp) in x.components().iter().enumerate() {
            for (m, c) in comp.terms() {
                let pos = *mono_pos.get(m)?;
                rhs[t * dst_monos.len() + pos] = c.clone();
            }
        }
        let sol = mat.solve(&rhs)?;
        let mut out = Section::zero(0);
        for s in 0..self.bundle.rank(0) {
            let mut poly = Poly::zero(&self.vars);
            for (mi, m) in src_monos.iter().enumerate() {
                poly += &Poly::from_terms(
                    &self.vars,
                    [(m.clone(), sol[s * src_monos.len() + mi].clone())],
                );
            }
            out.add(s, poly);
        }
        Some(out)
    }
}

fn homogeneous_degree_of<'a>(
    polys: impl Iterator<Item = &'a Poly>,
    what: &str,
) -> Result<u32> {
    let mut found: Option<u32> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        match p.homogeneous_degree() {
            None => return Err(FoliaError::NonHomogeneous(what.into())),
            Some(d) => match found {
                None => found = Some(d),
                Some(f) if f == d => {}
                Some(_) => return Err(FoliaError::NonHomogeneous(what.into())),
            },
        }
    }
    Ok(found.unwrap_or(1))
}

/// Canonical storage key for a 2-bracket entry plus whether the lookup
/// order is flipped relative to storage.
fn canonical_l2_key(a: BasisRef, b: BasisRef) -> ((usize, usize, usize, usize), bool) {
    if a <= b {
        ((a.0, a.1, b.0, b.1), false)
    } else {
        ((b.0, b.1, a.0, a.1), true)
    }
}

/// Sign of `l2(b, a)` relative to `l2(a, b)`: `-(-1)^(|a||b|)`.
fn swap_sign(lva: usize, lvb: usize) -> i64 {
    if (lva * lvb) % 2 == 0 {
        -1
    } else {
        1
    }
}

fn sort3(t: [usize; 3]) -> ([usize; 3], i64) {
    let mut v = t;
    let mut sign = 1i64;
    for i in 0..3 {
        for j in (i + 1..3).rev() {
            if v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
            }
        }
    }
    if v[0] == v[1] || v[1] == v[2] {
        return (v, 0);
    }
    (v, sign)
}

impl Section {
    pub(crate) fn scale_sign(&self, sign: i64) -> Section {
        match sign {
            1 => self.clone(),
            -1 => self.neg(),
            _ => panic!("sign must be +1 or -1"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComplexReport {
    pub failures: Vec<String>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SliceCheck {
    pub position: usize,
    pub degree: u32,
    pub kernel_dim: usize,
    pub image_rank: usize,
}

impl SliceCheck {
    pub fn passes(&self) -> bool {
        self.kernel_dim == self.image_rank
    }
}

#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub max_degree: u32,
    pub checks: Vec<SliceCheck>,
    pub all_exact: bool,
}

impl ExactnessReport {
    /// All slice checks at one bundle position.
    pub fn at_position(&self, p: usize) -> impl Iterator<Item = &SliceCheck> {
        self.checks.iter().filter(move |c| c.position == p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Degree arithmetic behind the structural vanishing of the
    /// higher-arity differential on 1-forms supported on the degree-0
    /// dual: `l_{s+1}` of non-positive arguments never lands in degree
    /// zero for `s >= 2`.
    #[test]
    fn higher_arity_components_vanish_on_degree_zero_forms() {
        for s in 2i64..=6 {
            let arity = s + 1;
            // enumerate degree tuples from {0, -1, ..., -5}
            let choices: Vec<i64> = (0..=5).map(|d| -d).collect();
            let mut stack = vec![0usize; arity as usize];
            loop {
                let sum: i64 = stack.iter().map(|&i| choices[i]).sum();
                let target = sum + 2 - arity;
                assert_ne!(target, 0, "s = {s} cannot produce a degree-0 value");
                // odometer
                let mut pos = 0;
                loop {
                    if pos == stack.len() {
                        break;
                    }
                    stack[pos] += 1;
                    if stack[pos] < choices.len() {
                        break;
                    }
                    stack[pos] = 0;
                    pos += 1;
                }
                if pos == stack.len() {
                    break;
                }
            }
        }
    }

    #[test]
    fn swap_sign_convention() {
        assert_eq!(swap_sign(0, 0), -1);
        assert_eq!(swap_sign(0, 1), -1);
        assert_eq!(swap_sign(1, 1), 1);
        assert_eq!(swap_sign(1, 2), -1);
    }

    #[test]
    fn sort3_signs() {
        assert_eq!(sort3([0, 1, 2]), ([0, 1, 2], 1));
        assert_eq!(sort3([1, 0, 2]), ([0, 1, 2], -1));
        assert_eq!(sort3([2, 0, 1]), ([0, 1, 2], 1));
        assert_eq!(sort3([1, 1, 2]).1, 0);
    }
}
