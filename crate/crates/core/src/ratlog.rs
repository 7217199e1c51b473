//! Rational functions extended by formal logarithms.
//!
//! A `RatLog` is `num/den + sum c_i * ln(P_i)` with exact rational
//! `c_i` and nonzero polynomial arguments `P_i`. The grammar is closed
//! under the formal partial derivative: the derivative of `c*ln(P)` is
//! `c * dP / P`, which is again rational. Equality is decided by
//! clearing denominators and matching log arguments after splitting
//! off positive rational constants, `ln(c*P) = ln(c) + ln(P)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::{fmt_coeff, Poly, Q, Vars};

#[derive(Debug, Clone)]
pub struct RatLog {
    num: Poly,
    den: Poly,
    /// Log terms with polynomial arguments of positive total degree.
    logs: Vec<(Q, Poly)>,
    /// Log terms whose argument reduced to a positive rational constant.
    const_logs: Vec<(Q, Q)>,
}

impl RatLog {
    pub fn zero(vars: &Vars) -> Self {
        RatLog {
            num: Poly::zero(vars),
            den: Poly::int(vars, 1),
            logs: Vec::new(),
            const_logs: Vec::new(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::int(p.vars(), 1);
        RatLog {
            num: p,
            den,
            logs: Vec::new(),
            const_logs: Vec::new(),
        }
    }

    pub fn from_ratio(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatLog {
            num,
            den,
            logs: Vec::new(),
            const_logs: Vec::new(),
        };
        r.reduce();
        r
    }

    /// Collapses the rational part when the denominator divides the
    /// numerator exactly.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::int(self.num.vars(), 1);
            return;
        }
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&(Q::one() / c));
                self.den = Poly::int(self.num.vars(), 1);
            }
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly::int(self.num.vars(), 1);
        }
    }

    /// The formal term `c * ln(arg)`.
    pub fn log(c: Q, arg: Poly) -> Self {
        assert!(!arg.is_zero(), "logarithm of the zero polynomial");
        let vars = arg.vars().clone();
        let mut r = RatLog::zero(&vars);
        r.logs.push((c, arg));
        r.normalize_logs();
        r
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn rational_part(&self) -> (&Poly, &Poly) {
        (&self.num, &self.den)
    }

    pub fn log_terms(&self) -> &[(Q, Poly)] {
        &self.logs
    }

    pub fn has_logs(&self) -> bool {
        !self.logs.is_empty() || !self.const_logs.is_empty()
    }

    /// As a polynomial, when the denominator divides trivially (den
    /// constant) and there are no log terms.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.has_logs() {
            return None;
        }
        let c = self.den.as_constant()?;
        Some(self.num.scale(&(Q::one() / c)))
    }

    /// Splits each log argument into content * primitive part with a
    /// positive leading coefficient, merges duplicate arguments, and
    /// drops `ln(1)`.
    fn normalize_logs(&mut self) {
        let mut norm: Vec<(Q, Poly)> = Vec::new();
        let mut consts: Vec<(Q, Q)> = std::mem::take(&mut self.const_logs);
        for (c, arg) in std::mem::take(&mut self.logs) {
            if c.is_zero() {
                continue;
            }
            // content: gcd of coefficients, signed by the leading term
            let mut content: Option<Q> = None;
            for (_, a) in arg.terms() {
                content = Some(match content {
                    None => a.abs(),
                    Some(g) => gcd_q(&g, &a.abs()),
                });
            }
            let mut content = content.expect("nonzero argument");
            let lead_neg = arg
                .terms()
                .last()
                .map(|(_, a)| a.is_negative())
                .unwrap_or(false);
            if lead_neg {
                content = -content;
            }
            let prim = arg.scale(&(Q::one() / content.clone()));
            // ln|c*P| = ln|c| + ln|P|
            let c_abs = content.abs();
            if !c_abs.is_one() {
                consts.push((c.clone(), c_abs));
            }
            if prim.as_constant().map(|k| k.is_one()) != Some(true) {
                match norm.iter_mut().find(|(_, p)| *p == prim) {
                    Some((acc, _)) => *acc += c,
                    None => norm.push((c, prim)),
                }
            }
        }
        norm.retain(|(c, _)| !c.is_zero());
        norm.sort_by(|(_, p), (_, q)| {
            p.to_string().cmp(&q.to_string())
        });
        self.logs = norm;
        // merge constant logs by argument
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (c, k) in consts {
            match merged.iter_mut().find(|(_, a)| *a == k) {
                Some((acc, _)) => *acc += c,
                None => merged.push((c, k)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.const_logs = merged;
    }

    pub fn add(&self, other: &RatLog) -> RatLog {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        let den = &self.den * &other.den;
        let mut logs = self.logs.clone();
        logs.extend(other.logs.iter().cloned());
        let mut const_logs = self.const_logs.clone();
        const_logs.extend(other.const_logs.iter().cloned());
        let mut r = RatLog {
            num,
            den,
            logs,
            const_logs,
        };
        r.reduce();
        r.normalize_logs();
        r
    }

    pub fn neg(&self) -> RatLog {
        RatLog {
            num: -&self.num,
            den: self.den.clone(),
            logs: self.logs.iter().map(|(c, p)| (-c.clone(), p.clone())).collect(),
            const_logs: self
                .const_logs
                .iter()
                .map(|(c, k)| (-c.clone(), k.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &RatLog) -> RatLog {
        self.add(&other.neg())
    }

    /// Multiplication is defined whenever at most one factor carries
    /// log terms and the other is a constant, or both are log-free.
    pub fn mul(&self, other: &RatLog) -> Option<RatLog> {
        if self.has_logs() || other.has_logs() {
            let (logful, logfree) = if self.has_logs() {
                (self, other)
            } else {
                (other, self)
            };
            if logfree.has_logs() {
                return None;
            }
            let c = logfree.num.as_constant()?;
            let d = logfree.den.as_constant()?;
            let k = c / d;
            let mut r = RatLog {
                num: logful.num.scale(&k),
                den: logful.den.clone(),
                logs: logful
                    .logs
                    .iter()
                    .map(|(c, p)| (c * &k, p.clone()))
                    .collect(),
                const_logs: logful
                    .const_logs
                    .iter()
                    .map(|(c, a)| (c * &k, a.clone()))
                    .collect(),
            };
            r.normalize_logs();
            Some(r)
        } else {
            Some(RatLog::from_ratio(
                &self.num * &other.num,
                &self.den * &other.den,
            ))
        }
    }

    /// Division by a log-free nonzero expression.
    pub fn div(&self, other: &RatLog) -> Option<RatLog> {
        if other.has_logs() || other.num.is_zero() {
            return None;
        }
        let flipped = RatLog {
            num: other.den.clone(),
            den: other.num.clone(),
            logs: Vec::new(),
            const_logs: Vec::new(),
        };
        self.mul(&flipped)
    }

    /// Formal partial derivative; always rational (log terms
    /// differentiate to `c * dP / P`).
    pub fn derive(&self, i: usize) -> RatLog {
        // quotient rule on the rational part
        let dnum = &(&self.num.derive(i) * &self.den) - &(&self.num * &self.den.derive(i));
        let dden = &self.den * &self.den;
        let mut out = RatLog::from_ratio(dnum, dden);
        for (c, p) in &self.logs {
            let term = RatLog::from_ratio(p.derive(i).scale(c), p.clone());
            out = out.add(&term);
        }
        out
    }

    /// Decides whether this expression is identically zero.
    ///
    /// The rational part must vanish after clearing the denominator,
    /// every normalized polynomial log argument must carry coefficient
    /// zero, and the residual constant logs `sum c_i ln(k_i)` must
    /// satisfy `prod k_i^(c_i) = 1`, checked with integer exponents
    /// after scaling by the common denominator of the `c_i`.
    pub fn is_zero(&self) -> bool {
        if !self.num.is_zero() {
            return false;
        }
        if !self.logs.is_empty() {
            return false;
        }
        if self.const_logs.is_empty() {
            return true;
        }
        let mut lcm = BigInt::one();
        for (c, _) in &self.const_logs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let mut prod_num = BigInt::one();
        let mut prod_den = BigInt::one();
        for (c, k) in &self.const_logs {
            let e = c.numer() * (&lcm / c.denom());
            let (base_n, base_d, exp) = if e.is_negative() {
                (k.denom().clone(), k.numer().clone(), -e)
            } else {
                (k.numer().clone(), k.denom().clone(), e)
            };
            let exp: u32 = exp.try_into().expect("log exponent overflow");
            prod_num *= base_n.pow(exp);
            prod_den *= base_d.pow(exp);
        }
        prod_num == prod_den
    }

    pub fn equal(&self, other: &RatLog) -> bool {
        self.sub(other).is_zero()
    }

    /// Equality against a plain polynomial.
    pub fn equal_poly(&self, p: &Poly) -> bool {
        self.sub(&RatLog::from_poly(p.clone())).is_zero()
    }
}

fn gcd_q(a: &Q, b: &Q) -> Q {
    // gcd on rationals: gcd of numerators over lcm of denominators
    Q::new(
        num_integer::gcd(a.numer().clone(), b.numer().clone()),
        num_integer::lcm(a.denom().clone(), b.denom().clone()),
    )
}

impl fmt::Display for RatLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.num.is_zero() {
            if self.den.as_constant().map(|c| c.is_one()) == Some(true) {
                parts.push(format!("{}", self.num));
            } else {
                parts.push(format!("({})/({})", self.num, self.den));
            }
        }
        for (c, p) in &self.logs {
            if c.is_one() {
                parts.push(format!("ln({p})"));
            } else {
                parts.push(format!("{}*ln({})", fmt_coeff(c), p));
            }
        }
        for (c, k) in &self.const_logs {
            parts.push(format!("{}*ln({})", fmt_coeff(c), fmt_coeff(k)));
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
    use crate::poly::{qi, qr};

    #[test]
    fn log_derivative_is_rational() {
        // d/dx ln(x^2+y^2) = 2x/(x^2+y^2)
        let v = Vars::xyz(2);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let q = &(&x * &x) + &(&y * &y);
        let g = RatLog::log(Q::one(), q.clone());
        let d = g.derive(0);
        assert!(!d.has_logs());
        let expect = RatLog::from_ratio(x.scale(&qi(2)), q);
        assert!(d.equal(&expect));
    }

    #[test]
    fn split_positive_constant_from_log() {
        // ln(4*(x+1)) - ln(x+1) - 2*ln(2) = 0
        let v = Vars::new(["x"]);
        let xp1 = &Poly::var(&v, 0) + &Poly::int(&v, 1);
        let a = RatLog::log(Q::one(), xp1.scale(&qi(4)));
        let b = RatLog::log(Q::one(), xp1);
        let mut two_ln2 = RatLog::zero(&v);
        two_ln2.const_logs.push((qi(2), qi(2)));
        assert!(a.sub(&b).sub(&two_ln2).is_zero());
    }

    #[test]
    fn constant_log_cancellation_with_rational_coeffs() {
        // (1/2) ln(4) - ln(2) = 0 and (1/2) ln(4) - ln(3) != 0
        let v = Vars::new(["x"]);
        let mut a = RatLog::zero(&v);
        a.const_logs.push((qr(1, 2), qi(4)));
        a.const_logs.push((qi(-1), qi(2)));
        assert!(a.is_zero());
        let mut b = RatLog::zero(&v);
        b.const_logs.push((qr(1, 2), qi(4)));
        b.const_logs.push((qi(-1), qi(3)));
        assert!(!b.is_zero());
    }

    #[test]
    fn rational_equality_clears_denominators() {
        // 2x/(2(x^2+1)) equals x/(x^2+1)
        let v = Vars::new(["x"]);
        let x = Poly::var(&v, 0);
        let q = &(&x * &x) + &Poly::int(&v, 1);
        let a = RatLog::from_ratio(x.scale(&qi(2)), q.scale(&qi(2)));
        let b = RatLog::from_ratio(x, q);
        assert!(a.equal(&b));
    }
}
