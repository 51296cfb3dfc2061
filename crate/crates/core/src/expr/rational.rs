//! Unary rational functions in canceled, monic-denominator form.

use std::fmt;

use num::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;

/// Quotient of unary polynomials `p/q` with `q ≠ 0`, `gcd(p,q) = 1`, `q` monic.
///
/// The canonical form makes equality structural: two rational functions that
/// agree on an unbounded set are the same object.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunc {
    p: Poly,
    q: Poly,
}

impl RationalFunc {
    /// Canonicalize `p/q`. Panics if `q = 0`.
    pub fn new(p: Poly, q: Poly) -> Self {
        assert!(!q.is_zero(), "rational function with zero denominator");
        if p.is_zero() {
            return RationalFunc {
                p,
                q: Poly::constant(1, Rat::one()),
            };
        }
        let g = p.gcd(&q);
        let (mut p, r1) = p.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (mut q, r2) = q.div_rem(&g);
        debug_assert!(r2.is_zero());
        let lc = q.leading_coeff().unwrap();
        let inv = Rat::one() / lc;
        p = p.scale(&inv);
        q = q.scale(&inv);
        RationalFunc { p, q }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunc {
            p,
            q: Poly::constant(1, Rat::one()),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RationalFunc::from_poly(Poly::constant(1, c))
    }

    pub fn zero() -> Self {
        RationalFunc::constant(Rat::zero())
    }

    pub fn one() -> Self {
        RationalFunc::constant(Rat::one())
    }

    pub fn var() -> Self {
        RationalFunc::from_poly(Poly::var(1, 0))
    }

    pub fn numerator(&self) -> &Poly {
        &self.p
    }

    pub fn denominator(&self) -> &Poly {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.q.degree() == Some(0)
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.is_polynomial() {
            Some(&self.p)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_polynomial() {
            self.p.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RationalFunc) -> RationalFunc {
        RationalFunc::new(
            self.p.mul(&other.q).add(&other.p.mul(&self.q)),
            self.q.mul(&other.q),
        )
    }

    pub fn neg(&self) -> RationalFunc {
        RationalFunc {
            p: self.p.neg(),
            q: self.q.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunc) -> RationalFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunc) -> RationalFunc {
        RationalFunc::new(self.p.mul(&other.p), self.q.mul(&other.q))
    }

    /// Reciprocal. Panics on zero; callers guard.
    pub fn recip(&self) -> RationalFunc {
        assert!(!self.is_zero(), "reciprocal of the zero rational function");
        RationalFunc::new(self.q.clone(), self.p.clone())
    }

    pub fn div(&self, other: &RationalFunc) -> RationalFunc {
        self.mul(&other.recip())
    }

    pub fn pow(&self, n: i32) -> RationalFunc {
        let base = if n < 0 { self.recip() } else { self.clone() };
        let mut acc = RationalFunc::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Quotient-rule derivative, canceled.
    pub fn derivative(&self) -> RationalFunc {
        let num = self
            .p
            .derivative()
            .mul(&self.q)
            .sub(&self.p.mul(&self.q.derivative()));
        RationalFunc::new(num, self.q.mul(&self.q))
    }

    /// Substitute another rational function for the variable.
    pub fn compose(&self, inner: &RationalFunc) -> RationalFunc {
        let pn = self.p.compose_rational(inner);
        let qn = self.q.compose_rational(inner);
        pn.div(&qn)
    }

    /// Exact evaluation; `None` at poles.
    pub fn eval_at(&self, x: &Rat) -> Option<Rat> {
        let den = self.q.eval_at(x);
        if den.is_zero() {
            return None;
        }
        Some(self.p.eval_at(x) / den)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.p.eval_f64(x) / self.q.eval_f64(x)
    }

    /// Growth order at +∞: deg(p) − deg(q); `None` for the zero function.
    pub fn growth_order(&self) -> Option<i64> {
        let dp = self.p.degree()?;
        let dq = self.q.degree().expect("denominator is nonzero");
        Some(dp as i64 - dq as i64)
    }

    /// Sign of the function on a neighborhood of +∞ (−1, 0, +1).
    pub fn sign_at_pos_infinity(&self) -> i32 {
        // q is monic, so the ratio's eventual sign is the numerator's.
        self.p.sign_at_pos_infinity()
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "({})/({})", self.p, self.q)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_i};
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn canonical_form() {
        // (2x) / (2x + 2) -> x / (x + 1)
        let r = RationalFunc::new(
            x().scale(&rat_i(2)),
            x().scale(&rat_i(2)).add(&Poly::constant(1, rat_i(2))),
        );
        assert_eq!(r.to_string(), "(x)/(x + 1)");
        assert!(r.denominator().leading_coeff().unwrap().is_one());
    }

    #[test]
    fn field_ops() {
        let xr = RationalFunc::var();
        let inv = xr.recip();
        assert_eq!(xr.mul(&inv), RationalFunc::one());
        assert_eq!(xr.add(&xr.neg()), RationalFunc::zero());
        assert_eq!(inv.to_string(), "(1)/(x)");
    }

    #[test]
    fn derivative_of_reciprocal() {
        // d/dx (1/x) = -1/x^2
        let d = RationalFunc::var().recip().derivative();
        assert_eq!(d.to_string(), "(-1)/(x^2)");
        assert_eq!(d.eval_at(&rat_i(2)).unwrap(), rat(-1, 4));
    }

    #[test]
    fn growth_and_sign() {
        let r = RationalFunc::new(
            x().sub(&Poly::constant(1, rat_i(1))),
            x().add(&Poly::constant(1, rat_i(1))),
        );
        assert_eq!(r.growth_order(), Some(0));
        assert_eq!(r.sign_at_pos_infinity(), 1);
        assert_eq!(RationalFunc::zero().growth_order(), None);
    }

    #[test]
    fn composition() {
        // (1/x) ∘ (x^2) = 1/x^2
        let inner = RationalFunc::from_poly(x().pow(2));
        let outer = RationalFunc::var().recip();
        assert_eq!(outer.compose(&inner).to_string(), "(1)/(x^2)");
    }
}
