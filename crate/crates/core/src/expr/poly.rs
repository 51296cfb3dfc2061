//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Exponent tuples map to nonzero coefficients; the zero polynomial stores no
//! terms and reports degree `None` (the −∞ convention). Unary polynomials get
//! the extra machinery the rest of the crate leans on: exact division, gcd,
//! square-free part, root bounds.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use super::rat::{rat_i, rat_sign, rat_to_f64, Rat};

/// Polynomial in `arity ≥ 1` variables over the rationals.
///
/// Invariant: no stored coefficient is zero; every exponent tuple has length
/// `arity`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        assert!(arity >= 1, "polynomial arity must be at least 1");
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = Poly::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    /// The monomial `x_{index}` (zero-based index).
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity);
        let mut expt = vec![0; arity];
        expt[index] = 1;
        let mut p = Poly::zero(arity);
        p.terms.insert(expt, Rat::one());
        p
    }

    /// Unary polynomial from `(exponent, coefficient)` pairs.
    pub fn unary_from_coeffs(pairs: &[(u32, Rat)]) -> Self {
        let mut p = Poly::zero(1);
        for (e, c) in pairs {
            p.add_term(vec![*e], c.clone());
        }
        p
    }

    /// Unary polynomial with integer coefficients listed from degree 0 up.
    pub fn unary_from_ints(coeffs: &[i64]) -> Self {
        let mut p = Poly::zero(1);
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(vec![e as u32], rat_i(*c));
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Total degree; `None` for the zero polynomial (degree −∞).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    fn add_term(&mut self, expt: Vec<u32>, coeff: Rat) {
        assert_eq!(expt.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expt) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = Poly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expt: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expt, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.arity);
        }
        let mut out = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.arity, Rat::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.arity);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    /// Rename variables: new index `i` holds old variable `perm[i]`.
    pub fn apply_permutation(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.arity);
        let mut out = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            let expt: Vec<u32> = perm.iter().map(|&src| e[src]).collect();
            out.add_term(expt, c.clone());
        }
        out
    }

    /// Embed into `new_arity` variables, shifting each variable index by `offset`.
    pub fn shift_vars(&self, new_arity: usize, offset: usize) -> Poly {
        assert!(self.arity + offset <= new_arity);
        let mut out = Poly::zero(new_arity);
        for (e, c) in &self.terms {
            let mut expt = vec![0; new_arity];
            expt[offset..offset + self.arity].copy_from_slice(e);
            out.terms.insert(expt, c.clone());
        }
        out
    }

    /// Substitute a polynomial for each variable (classical composition).
    pub fn compose(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.arity);
        let out_arity = args
            .first()
            .map(|p| p.arity)
            .expect("arity >= 1 guarantees at least one argument");
        for a in args {
            assert_eq!(a.arity, out_arity);
        }
        let mut acc = Poly::zero(out_arity);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(out_arity, c.clone());
            for (arg, &k) in args.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&arg.pow(k));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn to_string_with(&self, namer: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // Highest total degree first, then lexicographic on exponents.
        let mut entries: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        entries.sort_by(|(ea, _), (eb, _)| {
            let da: u32 = ea.iter().sum();
            let db: u32 = eb.iter().sum();
            db.cmp(&da).then_with(|| eb.cmp(ea))
        });
        let mut out = String::new();
        for (i, (e, c)) in entries.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_term = e.iter().all(|&k| k == 0);
            if !mag.is_one() || is_const_term {
                factors.push(mag.to_string());
            }
            for (idx, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(namer(idx));
                } else if k > 1 {
                    factors.push(format!("{}^{}", namer(idx), k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let namer = |i: usize| {
            if self.arity == 1 {
                "x".to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        f.write_str(&self.to_string_with(&namer))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

// ---------------------------------------------------------------------------
// Unary-specific machinery.
// ---------------------------------------------------------------------------

impl Poly {
    fn assert_unary(&self) {
        assert_eq!(self.arity, 1, "operation requires a unary polynomial");
    }

    /// Degree of a unary polynomial; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.assert_unary();
        self.terms.keys().map(|e| e[0]).max()
    }

    pub fn leading_coeff(&self) -> Option<Rat> {
        self.assert_unary();
        let d = self.degree()?;
        Some(self.terms[&vec![d]].clone())
    }

    pub fn coeff(&self, exponent: u32) -> Rat {
        self.assert_unary();
        self.terms
            .get(&vec![exponent])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Dense coefficient vector from degree 0 up (empty for zero).
    pub fn dense_coeffs(&self) -> Vec<Rat> {
        self.assert_unary();
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff(k)).collect(),
        }
    }

    pub fn from_dense(coeffs: Vec<Rat>) -> Poly {
        let mut p = Poly::zero(1);
        for (e, c) in coeffs.into_iter().enumerate() {
            p.add_term(vec![e as u32], c);
        }
        p
    }

    pub fn derivative(&self) -> Poly {
        self.assert_unary();
        let mut out = Poly::zero(1);
        for (e, c) in &self.terms {
            if e[0] > 0 {
                out.add_term(vec![e[0] - 1], c * rat_i(e[0] as i64));
            }
        }
        out
    }

    /// Horner evaluation in f64.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.assert_unary();
        let coeffs = self.dense_coeffs();
        let mut acc = 0.0;
        for c in coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    /// Exact unary evaluation (Horner).
    pub fn eval_at(&self, x: &Rat) -> Rat {
        self.assert_unary();
        let coeffs = self.dense_coeffs();
        let mut acc = Rat::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division of unary polynomials: `self = q·div + r`, deg r < deg div.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        self.assert_unary();
        div.assert_unary();
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.degree().unwrap();
        let dlc = div.leading_coeff().unwrap();
        let mut rem = self.clone();
        let mut quo = Poly::zero(1);
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading_coeff().unwrap() / &dlc;
            let shift = rd - dd;
            let mut mono = Poly::zero(1);
            mono.add_term(vec![shift], factor.clone());
            quo = quo.add(&mono);
            rem = rem.sub(&div.mul(&mono));
        }
        (quo, rem)
    }

    /// Monic gcd of unary polynomials.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.assert_unary();
        other.assert_unary();
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&(Rat::one() / lc)),
        }
    }

    /// Square-free part `p / gcd(p, p′)`, monic.
    pub fn square_free(&self) -> Poly {
        self.assert_unary();
        if self.is_zero() || self.degree() == Some(0) {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    /// Cauchy bound: every real root has |root| < the returned value.
    pub fn cauchy_root_bound(&self) -> Rat {
        self.assert_unary();
        let lc = self
            .leading_coeff()
            .expect("root bound of the zero polynomial");
        let max_ratio = self
            .terms
            .iter()
            .filter(|(e, _)| e[0] < self.degree().unwrap())
            .map(|(_, c)| (c / &lc).abs())
            .max()
            .unwrap_or_else(Rat::zero);
        Rat::one() + max_ratio
    }

    /// Compose a unary polynomial with a rational function (Horner in ℚ(x)).
    pub fn compose_rational(&self, inner: &super::rational::RationalFunc) -> super::rational::RationalFunc {
        self.assert_unary();
        use super::rational::RationalFunc;
        let mut acc = RationalFunc::zero();
        for c in self.dense_coeffs().iter().rev() {
            acc = acc.mul(inner).add(&RationalFunc::constant(c.clone()));
        }
        acc
    }

    /// Scale to integer coefficients with content 1 (sign of leading coeff kept).
    pub fn primitive_integer(&self) -> Poly {
        self.assert_unary();
        if self.is_zero() {
            return self.clone();
        }
        use num::BigInt;
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            let d = c.denom();
            let g = num::Integer::gcd(&denom_lcm, d);
            denom_lcm = denom_lcm / g * d;
        }
        let scaled = self.scale(&Rat::from_integer(denom_lcm));
        let mut content = BigInt::zero();
        for c in scaled.terms.values() {
            content = num::Integer::gcd(&content, c.numer());
        }
        if content.is_zero() {
            return scaled;
        }
        scaled.scale(&(Rat::one() / Rat::from_integer(content)))
    }

    /// Sign of the polynomial at +∞: sign of the leading coefficient.
    pub fn sign_at_pos_infinity(&self) -> i32 {
        match self.leading_coeff() {
            None => 0,
            Some(lc) => rat_sign(&lc),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::rat;
    use super::*;

    fn x() -> Poly {
        Poly::var(1, 0)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::zero(1).degree(), None);
        assert_eq!(Poly::zero(3).total_degree(), None);
        assert_eq!(Poly::constant(1, rat_i(4)).degree(), Some(0));
    }

    #[test]
    fn arithmetic_and_display() {
        // x^2 - 3x
        let p = x().pow(2).sub(&x().scale(&rat_i(3)));
        assert_eq!(p.to_string(), "x^2 - 3*x");
        assert_eq!(p.eval_at(&rat_i(2)), rat_i(-2));
        assert_eq!(p.derivative().to_string(), "2*x - 3");
    }

    #[test]
    fn division_gcd_squarefree() {
        // (x-1)^2 (x+2)
        let p = x()
            .sub(&Poly::constant(1, rat_i(1)))
            .pow(2)
            .mul(&x().add(&Poly::constant(1, rat_i(2))));
        let sf = p.square_free();
        // (x-1)(x+2) = x^2 + x - 2
        assert_eq!(sf.to_string(), "x^2 + x - 2");
        let (q, r) = p.div_rem(&sf);
        assert!(r.is_zero());
        assert_eq!(q.to_string(), "x - 1");
    }

    #[test]
    fn multivariate_compose_and_permute() {
        // f = x1*x2 + x1^2 over two variables
        let f = Poly::var(2, 0)
            .mul(&Poly::var(2, 1))
            .add(&Poly::var(2, 0).pow(2));
        assert_eq!(f.eval(&[rat_i(2), rat_i(3)]), rat_i(10));
        let swapped = f.apply_permutation(&[1, 0]);
        assert_eq!(swapped.eval(&[rat_i(3), rat_i(2)]), rat_i(10));
        // compose with (x, x) collapses to 2 x^2... in one variable padded to arity 2
        let g = f.compose(&[Poly::var(2, 0), Poly::var(2, 0)]);
        assert_eq!(g.eval(&[rat_i(3), rat_i(0)]), rat_i(18));
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        // x^2 - 4: roots ±2, bound 1 + 4 = 5
        let p = x().pow(2).sub(&Poly::constant(1, rat_i(4)));
        assert_eq!(p.cauchy_root_bound(), rat_i(5));
    }

    #[test]
    fn primitive_integer_scaling() {
        let p = Poly::unary_from_coeffs(&[(1, rat(3, 4)), (0, rat(1, 2))]);
        let q = p.primitive_integer();
        assert_eq!(q.to_string(), "3*x + 2");
    }
}
