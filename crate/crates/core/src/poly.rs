//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by monomial in graded
//! lexicographic order, so every polynomial has a unique canonical
//! form and printing is deterministic. Coefficients are
//! arbitrary-precision rationals; no floating point appears anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// An ordered set of variable names, shared between all polynomials of
/// one computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        assert!(!names.is_empty(), "variable set must be non-empty");
        Vars(Arc::new(names))
    }

    /// The default ambient variables `x1..xn`.
    pub fn xn(n: usize) -> Self {
        Vars::new((1..=n).map(|i| format!("x{i}")))
    }

    /// Aliases `x`, `y`, `z` for low dimensions.
    pub fn xyz(n: usize) -> Self {
        assert!((1..=3).contains(&n));
        Vars::new(["x", "y", "z"][..n].iter().copied())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }
}

/// Exponent vector aligned with a `Vars` list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn constant(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // graded lexicographic: total degree first, then exponents
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with exact rational coefficients in
/// canonical form: no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Mono, Q>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono::constant(vars.len()), c);
        }
        p
    }

    pub fn int(vars: &Vars, c: i64) -> Self {
        Poly::constant(vars, qi(c))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len());
        let mut p = Poly::zero(vars);
        p.terms.insert(Mono::var(vars.len(), i), Q::one());
        p
    }

    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.index_of(name).map(|i| Poly::var(vars, i))
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant-term coefficient.
    pub fn constant_coeff(&self) -> Q {
        self.terms
            .get(&Mono::constant(self.vars.len()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// As a constant rational, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.constant_coeff())
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// True if every term has total degree `d`. The zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.total_degree() == d)
    }

    /// The unique degree in which this polynomial lives, if homogeneous
    /// and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.total_degree()?;
        self.is_homogeneous_of(d).then_some(d)
    }

    /// The degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Poly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials over different variable sets"
        );
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(&self.vars, Q::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / den`, when the division leaves no
    /// remainder; `None` otherwise. Single-divisor reduction in the
    /// graded-lex order.
    pub fn div_exact(&self, den: &Poly) -> Option<Poly> {
        self.assert_compatible(den);
        assert!(!den.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        let (lead_m, lead_c) = den.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rm, rc) = rem
                .terms
                .iter()
                .next_back()
                .map(|(m, c)| (m.clone(), c.clone()))
                .expect("nonzero remainder");
            let mut q_exps = Vec::with_capacity(rm.0.len());
            for (a, b) in rm.0.iter().zip(&lead_m.0) {
                if a < b {
                    return None;
                }
                q_exps.push(a - b);
            }
            let q_mono = Mono(q_exps);
            let q_coeff = rc / &lead_c;
            let q_term = Poly::from_terms(&self.vars, [(q_mono, q_coeff)]);
            rem = &rem - &(&q_term * den);
            quot += &q_term;
        }
        Some(quot)
    }

    /// Exact formal partial derivative with respect to variable `i`.
    pub fn derive(&self, i: usize) -> Poly {
        assert!(i < self.vars.len(), "derive: variable index out of range");
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] = e - 1;
            out.add_term(m2, c * qi(e as i64));
        }
        out
    }

    /// Exact substitution of a rational point.
    pub fn evaluate_at(&self, point: &[Q]) -> Q {
        assert_eq!(
            point.len(),
            self.vars.len(),
            "evaluate_at: point length must equal variable count"
        );
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            total += t;
        }
        total
    }

    /// Re-embeds this polynomial into a larger variable set that
    /// contains the current variables (matched by name).
    pub fn embed(&self, into: &Vars) -> Poly {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                into.index_of(n)
                    .unwrap_or_else(|| panic!("embed: variable {n} missing from target set"))
            })
            .collect();
        let mut out = Poly::zero(into);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; into.len()];
            for (i, &exp) in m.0.iter().enumerate() {
                e[map[i]] = exp;
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.assert_compatible(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

pub(crate) fn fmt_coeff(c: &Q) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest graded-lex order first
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.total_degree() == 0 {
                factors.push(fmt_coeff(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Enumerates all monomials of total degree exactly `d` in `n`
/// variables, in ascending graded-lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Mono(cur.clone()));
            cur[i] = 0;
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vars {
        Vars::xyz(3)
    }

    #[test]
    fn canonical_form_drops_zero_coefficients() {
        let v = xyz();
        let x = Poly::var(&v, 0);
        let p = &x - &x;
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn derive_power_rule() {
        // d/dx (x^2 y) = 2xy
        let v = xyz();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &(&x * &x) * &y;
        let expect = &Poly::int(&v, 2) * &(&x * &y);
        assert_eq!(p.derive(0), expect);
    }

    #[test]
    fn derive_constant_is_zero() {
        let v = xyz();
        assert!(Poly::int(&v, 7).derive(0).is_zero());
    }

    #[test]
    fn derive_half_sum_of_squares() {
        // d/dx1 of (1/2) sum xi^2 is x1
        let v = Vars::xn(4);
        let mut p = Poly::zero(&v);
        for i in 0..4 {
            let xi = Poly::var(&v, i);
            p += &(&xi * &xi).scale(&qr(1, 2));
        }
        assert_eq!(p.derive(0), Poly::var(&v, 0));
    }

    #[test]
    fn evaluate_exact() {
        let v = xyz();
        let x = Poly::var(&v, 0);
        let p = &(&x * &x) + &Poly::int(&v, 1);
        assert_eq!(p.evaluate_at(&[qi(0), qi(0), qi(0)]), qi(1));
        let xy = &Poly::var(&v, 0) * &Poly::var(&v, 1);
        assert_eq!(xy.evaluate_at(&[qi(2), qi(3), qi(0)]), qi(6));
    }

    #[test]
    fn display_graded_lex() {
        let v = xyz();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &(&(&x * &x) + &(&x * &y).scale(&qi(-3))) + &Poly::int(&v, 1);
        assert_eq!(p.to_string(), "x^2 - 3*x*y + 1");
    }

    #[test]
    fn monomial_enumeration_counts() {
        // C(n+d-1, d) monomials of degree d in n variables
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
    }

    #[test]
    fn homogeneous_parts_split() {
        let v = xyz();
        let x = Poly::var(&v, 0);
        let p = &(&x * &x) + &Poly::int(&v, 5);
        assert_eq!(p.homogeneous_part(2), &x * &x);
        assert_eq!(p.homogeneous_part(0), Poly::int(&v, 5));
        assert!(p.homogeneous_degree().is_none());
        assert_eq!((&x * &x).homogeneous_degree(), Some(2));
    }
}
