//! Polynomial vector fields on R^n.

use std::fmt;

use crate::poly::{Poly, Q, Vars};
use crate::ratlog::RatLog;

/// A vector field `sum_i X^i d/dx_i` with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    vars: Vars,
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(vars: &Vars, components: Vec<Poly>) -> Self {
        assert_eq!(
            components.len(),
            vars.len(),
            "component count must equal variable count"
        );
        for c in &components {
            assert_eq!(c.vars(), vars, "component over wrong variable set");
        }
        VectorField {
            vars: vars.clone(),
            components,
        }
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField::new(vars, vec![Poly::zero(vars); vars.len()])
    }

    /// The Euler vector field `sum_i x_i d/dx_i`.
    pub fn euler(vars: &Vars) -> Self {
        let comps = (0..vars.len()).map(|i| Poly::var(vars, i)).collect();
        VectorField::new(vars, comps)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            &self.vars,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            &self.vars,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale_poly(&self, f: &Poly) -> VectorField {
        VectorField::new(&self.vars, self.components.iter().map(|c| f * c).collect())
    }

    /// Applies the field as a derivation to a polynomial:
    /// `X(f) = sum_i X^i d_i f`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (i, c) in self.components.iter().enumerate() {
            out += &(c * &f.derive(i));
        }
        out
    }

    /// Applies the field to a rational-log expression.
    pub fn apply_ratlog(&self, f: &RatLog) -> RatLog {
        let mut out = RatLog::zero(&self.vars);
        for (i, c) in self.components.iter().enumerate() {
            let term = f
                .derive(i)
                .mul(&RatLog::from_poly(c.clone()))
                .expect("derivative of a RatLog is log-free");
            out = out.add(&term);
        }
        out
    }

    /// Jacobi-Lie bracket `[X, Y] = X o Y - Y o X` as a first-order
    /// operator.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.vars, other.vars, "fields over different variables");
        let comps = (0..self.vars.len())
            .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
            .collect();
        VectorField::new(&self.vars, comps)
    }

    /// Divergence with respect to the standard volume form.
    pub fn divergence(&self) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (i, c) in self.components.iter().enumerate() {
            out += &c.derive(i);
        }
        out
    }

    /// Exact componentwise evaluation at a rational point.
    pub fn evaluate_at(&self, point: &[Q]) -> Vec<Q> {
        self.components
            .iter()
            .map(|c| c.evaluate_at(point))
            .collect()
    }

    pub fn embed(&self, into: &Vars) -> VectorField {
        let mut comps = vec![Poly::zero(into); into.len()];
        for (i, c) in self.components.iter().enumerate() {
            let j = into
                .index_of(self.vars.name(i))
                .expect("embed: missing variable");
            comps[j] = c.embed(into);
        }
        VectorField::new(into, comps)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({})*d_{}", c, self.vars.name(i)));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qi, Q};
    use num_traits::One;

    #[test]
    fn euler_applied_to_log_radius_is_one() {
        // eps( ln sqrt(x1^2+..+xn^2) ) = 1, per generator of the radius
        for n in 2..=4 {
            let v = Vars::xn(n);
            let eps = VectorField::euler(&v);
            let mut q = Poly::zero(&v);
            for i in 0..n {
                let xi = Poly::var(&v, i);
                q += &(&xi * &xi);
            }
            let g = RatLog::log(Q::new(1.into(), 2.into()), q);
            let applied = eps.apply_ratlog(&g);
            assert!(applied.equal_poly(&Poly::int(&v, 1)));
        }
    }

    #[test]
    fn apply_simple() {
        // (x d_z)(z) = x
        let v = Vars::xyz(3);
        let x = Poly::var(&v, 0);
        let z = Poly::var(&v, 2);
        let field = VectorField::new(&v, vec![Poly::zero(&v), Poly::zero(&v), x.clone()]);
        assert_eq!(field.apply(&z), x);
    }

    #[test]
    fn spiral_applied_to_log() {
        // v = (x-y)dx + (x+y)dy applied to ln(x^2+y^2) gives 2
        let v = Vars::xyz(2);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let field = VectorField::new(&v, vec![&x - &y, &x + &y]);
        let q = &(&x * &x) + &(&y * &y);
        let g = RatLog::log(Q::one(), q);
        assert!(field.apply_ratlog(&g).equal_poly(&Poly::int(&v, 2)));
    }

    #[test]
    fn bracket_poisson_pair() {
        // [x d_z, -x d_x - y d_y] = x d_z
        let v = Vars::xyz(3);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let zero = Poly::zero(&v);
        let xx = VectorField::new(&v, vec![zero.clone(), zero.clone(), x.clone()]);
        let xz = VectorField::new(&v, vec![-&x, -&y, zero.clone()]);
        assert_eq!(xx.lie_bracket(&xz), xx);
    }

    #[test]
    fn bracket_antisymmetry_on_self() {
        let v = Vars::xyz(2);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let f = VectorField::new(&v, vec![&x * &y, &x + &y]);
        assert!(f.lie_bracket(&f).is_zero());
    }

    #[test]
    fn rotations_commute_with_euler() {
        // [x_k d_l - x_l d_k, euler] = 0
        let v = Vars::xn(4);
        let eps = VectorField::euler(&v);
        for k in 0..4 {
            for l in (k + 1)..4 {
                let mut comps = vec![Poly::zero(&v); 4];
                comps[l] = Poly::var(&v, k);
                comps[k] = -&Poly::var(&v, l);
                let rot = VectorField::new(&v, comps);
                assert!(rot.lie_bracket(&eps).is_zero());
            }
        }
    }

    #[test]
    fn divergences() {
        let v = Vars::xn(5);
        assert_eq!(VectorField::euler(&v).divergence(), Poly::int(&v, 5));
        // rotation fields have null divergence
        let mut comps = vec![Poly::zero(&v); 5];
        comps[1] = Poly::var(&v, 0);
        comps[0] = -&Poly::var(&v, 1);
        assert!(VectorField::new(&v, comps).divergence().is_zero());
        // div(x^2 d_x) = 2x
        let w = Vars::new(["x"]);
        let x = Poly::var(&w, 0);
        let f = VectorField::new(&w, vec![&x * &x]);
        assert_eq!(f.divergence(), x.scale(&qi(2)));
    }

    #[test]
    fn euler_vanishes_at_origin() {
        let v = Vars::xn(3);
        let eps = VectorField::euler(&v);
        let vals = eps.evaluate_at(&[qi(0), qi(0), qi(0)]);
        assert!(vals.iter().all(|q| q == &qi(0)));
    }
}
