//! Differential forms on R^n with rational-log coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::fields::VectorField;
use crate::poly::{Poly, Vars};
use crate::ratlog::RatLog;

/// A degree-`k` differential form, stored as a map from strictly
/// increasing index words `i1 < ... < ik` to coefficients.
#[derive(Debug, Clone)]
pub struct DifferentialForm {
    vars: Vars,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RatLog>,
}

impl DifferentialForm {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        assert!(degree <= vars.len(), "form degree exceeds variable count");
        DifferentialForm {
            vars: vars.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The coordinate 1-form `dx_i`.
    pub fn basis_one_form(vars: &Vars, i: usize) -> Self {
        let mut f = DifferentialForm::zero(vars, 1);
        f.set(vec![i], RatLog::from_poly(Poly::int(vars, 1)));
        f
    }

    /// A 1-form from covector components.
    pub fn one_form(vars: &Vars, comps: Vec<Poly>) -> Self {
        assert_eq!(comps.len(), vars.len());
        let mut f = DifferentialForm::zero(vars, 1);
        for (i, c) in comps.into_iter().enumerate() {
            if !c.is_zero() {
                f.set(vec![i], RatLog::from_poly(c));
            }
        }
        f
    }

    /// The standard volume form `dx_1 ^ ... ^ dx_n`.
    pub fn volume(vars: &Vars) -> Self {
        let n = vars.len();
        let mut f = DifferentialForm::zero(vars, n);
        f.set((0..n).collect(), RatLog::from_poly(Poly::int(vars, 1)));
        f
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RatLog)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[usize]) -> RatLog {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(|| RatLog::zero(&self.vars))
    }

    pub fn set(&mut self, word: Vec<usize>, coeff: RatLog) {
        assert_eq!(word.len(), self.degree, "index word length mismatch");
        assert!(
            word.windows(2).all(|w| w[0] < w[1]),
            "index word must be strictly increasing"
        );
        assert!(word.iter().all(|&i| i < self.vars.len()));
        if coeff.is_zero() {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, coeff);
        }
    }

    pub fn add_term(&mut self, word: Vec<usize>, coeff: RatLog) {
        let cur = self.coefficient(&word);
        self.set(word, cur.add(&coeff));
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.degree, other.degree, "form degrees differ");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DifferentialForm) -> DifferentialForm {
        self.add(&other.scale_ratlog_neg())
    }

    fn scale_ratlog_neg(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.vars, self.degree);
        for (w, c) in &self.terms {
            out.set(w.clone(), c.neg());
        }
        out
    }

    pub fn scale_poly(&self, f: &Poly) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.vars, self.degree);
        let f = RatLog::from_poly(f.clone());
        for (w, c) in &self.terms {
            out.set(
                w.clone(),
                c.mul(&f).expect("coefficient not closed under scaling"),
            );
        }
        out
    }

    pub fn scale_ratlog(&self, f: &RatLog) -> DifferentialForm {
        let mut out = DifferentialForm::zero(&self.vars, self.degree);
        for (w, c) in &self.terms {
            out.set(
                w.clone(),
                c.mul(f).expect("coefficient not closed under scaling"),
            );
        }
        out
    }

    /// Exterior derivative. Squares to zero.
    pub fn exterior_derivative(&self) -> DifferentialForm {
        assert!(
            self.degree < self.vars.len(),
            "exterior derivative of a top-degree form"
        );
        let mut out = DifferentialForm::zero(&self.vars, self.degree + 1);
        for (w, c) in &self.terms {
            for i in 0..self.vars.len() {
                if w.contains(&i) {
                    continue;
                }
                let dc = c.derive(i);
                if dc.is_zero() {
                    continue;
                }
                // insert dx_i in front, then sort into place
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(i);
                word.extend_from_slice(w);
                let (sorted, sign) = sort_word(&word);
                let signed = if sign < 0 { dc.neg() } else { dc };
                out.add_term(sorted, signed);
            }
        }
        out
    }

    /// Interior product (contraction) with Koszul signs:
    /// `i_X(dx_{i1} ^ ... ^ dx_{ik}) = sum_j (-1)^(j-1) X^{ij} dx_{i1} ^ .. hat .. ^ dx_{ik}`.
    pub fn interior_product(&self, x: &VectorField) -> DifferentialForm {
        assert!(self.degree >= 1, "contraction needs degree >= 1");
        let mut out = DifferentialForm::zero(&self.vars, self.degree - 1);
        for (w, c) in &self.terms {
            for (j, &ij) in w.iter().enumerate() {
                let comp = x.component(ij);
                if comp.is_zero() {
                    continue;
                }
                let mut term = c
                    .mul(&RatLog::from_poly(comp.clone()))
                    .expect("coefficient not closed under contraction");
                if j % 2 == 1 {
                    term = term.neg();
                }
                let mut word = w.clone();
                word.remove(j);
                out.add_term(word, term);
            }
        }
        out
    }

    /// True when `other = f * self` for the given factor, symbolically.
    pub fn equals_scaled(&self, factor: &RatLog, other: &DifferentialForm) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mut words: Vec<Vec<usize>> = self.terms.keys().cloned().collect();
        for w in other.terms.keys() {
            if !words.contains(w) {
                words.push(w.clone());
            }
        }
        for w in words {
            let lhs = match self.coefficient(&w).mul(factor) {
                Some(v) => v,
                None => return false,
            };
            if !lhs.equal(&other.coefficient(&w)) {
                return false;
            }
        }
        true
    }
}

/// Sorts an index word, returning the sorted word and the sign of the
/// permutation; a repeated index yields sign 0.
pub fn sort_word(word: &[usize]) -> (Vec<usize>, i32) {
    let mut w = word.to_vec();
    let mut sign = 1i32;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            w.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return (w, 0);
    }
    (w, sign)
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let basis: Vec<String> = w
                    .iter()
                    .map(|&i| format!("d{}", self.vars.name(i)))
                    .collect();
                format!("({})*{}", c, basis.join("^"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::xyz(2)
    }

    #[test]
    fn d_of_spiral_conormal() {
        // d((x+y)dx - (x-y)dy) = -2 dx^dy
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let omega = DifferentialForm::one_form(&v, vec![&x + &y, -&(&x - &y)]);
        let d = omega.exterior_derivative();
        let mut expect = DifferentialForm::zero(&v, 2);
        expect.set(vec![0, 1], RatLog::from_poly(Poly::int(&v, -2)));
        assert!(d.sub(&expect).is_zero());
    }

    #[test]
    fn d_of_basis_form_is_zero() {
        let v = Vars::xyz(3);
        assert!(DifferentialForm::basis_one_form(&v, 0)
            .exterior_derivative()
            .is_zero());
    }

    #[test]
    fn d_squared_is_zero() {
        let v = Vars::xyz(3);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let z = Poly::var(&v, 2);
        let mut f = DifferentialForm::zero(&v, 1);
        f.set(vec![0], RatLog::from_poly(&(&x * &y) * &z));
        f.set(vec![2], RatLog::from_poly(&y * &y));
        assert!(f
            .exterior_derivative()
            .exterior_derivative()
            .is_zero());
    }

    #[test]
    fn spherical_volume_form_from_contraction() {
        // i_euler(dx1^...^dxn) has coefficient (-1)^(i-1) x_i on the
        // word omitting i, and d of it gives n * volume
        for n in 2..=4 {
            let v = Vars::xn(n);
            let vol = DifferentialForm::volume(&v);
            let omega = vol.interior_product(&VectorField::euler(&v));
            for i in 0..n {
                let word: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                let mut expect = Poly::var(&v, i);
                if i % 2 == 1 {
                    expect = -&expect;
                }
                assert!(omega.coefficient(&word).equal_poly(&expect));
            }
            let d = omega.exterior_derivative();
            let expect = vol.scale_poly(&Poly::int(&v, n as i64));
            assert!(d.sub(&expect).is_zero());
        }
    }

    #[test]
    fn double_contraction_vanishes() {
        let v = Vars::xyz(3);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let field = VectorField::new(&v, vec![&x + &y, &x * &y, Poly::int(&v, 3)]);
        let vol = DifferentialForm::volume(&v);
        let once = vol.interior_product(&field);
        assert!(once.interior_product(&field).is_zero());
    }

    #[test]
    fn contraction_of_area_form() {
        // i_v(dx^dy) = (x-y)dy - (x+y)dx for the spiral field
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let field = VectorField::new(&v, vec![&x - &y, &x + &y]);
        let mut area = DifferentialForm::zero(&v, 2);
        area.set(vec![0, 1], RatLog::from_poly(Poly::int(&v, 1)));
        let got = area.interior_product(&field);
        let expect = DifferentialForm::one_form(&v, vec![-&(&x + &y), &x - &y]);
        assert!(got.sub(&expect).is_zero());
    }

    #[test]
    fn sort_word_signs() {
        assert_eq!(sort_word(&[1, 0]), (vec![0, 1], -1));
        assert_eq!(sort_word(&[0, 1, 2]), (vec![0, 1, 2], 1));
        assert_eq!(sort_word(&[2, 0, 1]), (vec![0, 1, 2], 1));
        assert_eq!(sort_word(&[1, 1]).1, 0);
    }
}
