//! Expression trees for the working function class.
//!
//! The class is deliberately small: rational functions, piecewise glue with
//! rational breakpoints, and the smooth gate `t ↦ e^{−1/t}` (t > 0) together
//! with the bump and step functions built from it. Everything a germ, a
//! zero-set description, or a quotient-ring element needs is decidable here.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use super::poly::Poly;
use super::rat::{rat, Rat};
use super::rational::RationalFunc;

/// Parameters of a bump function: center `q`, inner radius `a`, outer radius
/// `b`, with `0 < a < b`. The bump equals 1 on `[q−a, q+a]`, vanishes outside
/// `(q−b, q+b)`, and is strictly monotone on the two shoulders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BumpSpec {
    pub q: Rat,
    pub a: Rat,
    pub b: Rat,
}

impl BumpSpec {
    pub fn new(q: Rat, a: Rat, b: Rat) -> Result<Self, ExprError> {
        if !(a.is_positive() && a < b) {
            return Err(ExprError::InvalidBumpRadii {
                a: a.to_string(),
                b: b.to_string(),
            });
        }
        Ok(BumpSpec { q, a, b })
    }

    /// Closed support `[q−b, q+b]`.
    pub fn support(&self) -> (Rat, Rat) {
        (&self.q - &self.b, &self.q + &self.b)
    }

    /// Shoulder argument `u(x) = ((x−q)² − a²)/(b² − a²)` as a polynomial.
    pub fn shoulder_poly(&self) -> Poly {
        let x = Poly::var(1, 0);
        let shifted = x.sub(&Poly::constant(1, self.q.clone()));
        let num = shifted
            .mul(&shifted)
            .sub(&Poly::constant(1, &self.a * &self.a));
        let scale = Rat::one() / (&self.b * &self.b - &self.a * &self.a);
        num.scale(&scale)
    }
}

/// Left endpoint of a piecewise piece.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PieceStart {
    NegInf,
    At(Rat),
}

impl PieceStart {
    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            PieceStart::NegInf => None,
            PieceStart::At(r) => Some(r),
        }
    }

    fn strictly_before(&self, other: &PieceStart) -> bool {
        match (self, other) {
            (PieceStart::NegInf, PieceStart::NegInf) => false,
            (PieceStart::NegInf, _) => true,
            (_, PieceStart::NegInf) => false,
            (PieceStart::At(a), PieceStart::At(b)) => a < b,
        }
    }
}

/// Symbolic expression for a unary real function.
///
/// Piecewise semantics: pieces are listed with strictly increasing start
/// edges; piece `i` is in force on `(start_i, start_{i+1}]` and the last
/// piece on `(start_k, +∞)`. A finite first edge restricts the domain to
/// `(start_0, +∞)`, which doubles as the domain-restriction annotation.
#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Const(Rat),
    /// The ambient variable; inside `Compose` the outer expression's variable
    /// is its own argument slot.
    Var,
    Poly(Poly),
    Rational(RationalFunc),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Box<Expr>, Box<Expr>),
    /// `outer ∘ inner`; `outer` is read as a function of its own variable.
    Compose(Box<Expr>, Box<Expr>),
    /// Symbolic derivative marker, expanded during normalization.
    Derivative(Box<Expr>),
    /// `t ↦ c(t)·e^{−1/t}` for `t > 0`, and exactly 0 for `t ≤ 0`.
    ///
    /// The rational coefficient keeps the class closed under differentiation:
    /// `(c(t)·e^{−1/t})′ = (c′(t) + c(t)/t²)·e^{−1/t}`.
    BumpGate(RationalFunc),
    Bump(BumpSpec),
    /// Smooth step: 0 on `(−∞, lo]`, 1 on `[hi, +∞)`, strictly increasing
    /// between; `step(x) = g((x − lo)/(hi − lo))` with `g(t) = f(t)/(f(t)+f(1−t))`.
    Step {
        lo: Rat,
        hi: Rat,
    },
    Piecewise(Vec<(PieceStart, Expr)>),
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ExprError {
    #[error("bump radii must satisfy 0 < a < b, got a = {a}, b = {b}")]
    InvalidBumpRadii { a: String, b: String },
    #[error("step bounds must satisfy lo < hi, got lo = {lo}, hi = {hi}")]
    InvalidStepBounds { lo: String, hi: String },
    #[error("piecewise breakpoints must be strictly increasing")]
    BreakpointsNotIncreasing,
    #[error("piecewise expression needs at least one piece")]
    EmptyPiecewise,
}

impl Expr {
    pub fn constant(c: Rat) -> Expr {
        Expr::Const(c)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(super::rat::rat_i(n))
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn poly(p: Poly) -> Expr {
        Expr::Poly(p)
    }

    pub fn rational(r: RationalFunc) -> Expr {
        Expr::Rational(r)
    }

    pub fn sum(members: Vec<Expr>) -> Expr {
        Expr::Sum(members)
    }

    pub fn product(members: Vec<Expr>) -> Expr {
        Expr::Product(members)
    }

    pub fn quotient(num: Expr, den: Expr) -> Expr {
        Expr::Quotient(Box::new(num), Box::new(den))
    }

    pub fn compose(outer: Expr, inner: Expr) -> Expr {
        Expr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn derivative(e: Expr) -> Expr {
        Expr::Derivative(Box::new(e))
    }

    /// The gate `f(t) = e^{−1/t}` (t > 0), 0 (t ≤ 0).
    pub fn gate() -> Expr {
        Expr::BumpGate(RationalFunc::one())
    }

    pub fn bump(spec: BumpSpec) -> Expr {
        Expr::Bump(spec)
    }

    pub fn step(lo: Rat, hi: Rat) -> Result<Expr, ExprError> {
        if lo >= hi {
            return Err(ExprError::InvalidStepBounds {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Expr::Step { lo, hi })
    }

    pub fn piecewise(pieces: Vec<(PieceStart, Expr)>) -> Result<Expr, ExprError> {
        if pieces.is_empty() {
            return Err(ExprError::EmptyPiecewise);
        }
        for w in pieces.windows(2) {
            if !w[0].0.strictly_before(&w[1].0) {
                return Err(ExprError::BreakpointsNotIncreasing);
            }
        }
        Ok(Expr::Piecewise(pieces))
    }

    /// Restriction of `body` to the interval `(from, +∞)`.
    pub fn restricted(from: Rat, body: Expr) -> Expr {
        Expr::Piecewise(vec![(PieceStart::At(from), body)])
    }

    /// Negation as a product with −1.
    pub fn negate(e: Expr) -> Expr {
        Expr::Product(vec![Expr::Const(-Rat::one()), e])
    }

    /// Rational-function view of a normalized leaf.
    pub fn as_rational(&self) -> Option<RationalFunc> {
        match self {
            Expr::Const(c) => Some(RationalFunc::constant(c.clone())),
            Expr::Var => Some(RationalFunc::var()),
            Expr::Poly(p) => Some(RationalFunc::from_poly(p.clone())),
            Expr::Rational(r) => Some(r.clone()),
            _ => None,
        }
    }

    /// Piecewise view: every expression is a list of (start, body) pieces.
    pub fn pieces(&self) -> Vec<(PieceStart, &Expr)> {
        match self {
            Expr::Piecewise(ps) => ps.iter().map(|(s, b)| (s.clone(), b)).collect(),
            other => vec![(PieceStart::NegInf, other)],
        }
    }

    /// Left edge of the domain: `None` means defined on a neighborhood of −∞.
    pub fn domain_start(&self) -> Option<Rat> {
        match self {
            Expr::Piecewise(ps) => ps.first().and_then(|(s, _)| s.as_rat().cloned()),
            _ => None,
        }
    }

    /// Syntactic totality: true only when the expression is manifestly
    /// defined on all of ℝ. (`zeroset::expr_is_total` adds the semantic
    /// checks that need root isolation.)
    pub fn quick_total(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var | Expr::Poly(_) | Expr::Bump(_) | Expr::Step { .. } => true,
            Expr::Rational(r) => r.is_polynomial(),
            Expr::Sum(ms) | Expr::Product(ms) => ms.iter().all(Expr::quick_total),
            Expr::Quotient(_, _) => false,
            // Gate coefficients whose poles sit at t = 0 are killed by the gate.
            Expr::BumpGate(r) => gate_coeff_pole_only_at_zero(r),
            Expr::Compose(outer, inner) => match (&**outer, &**inner) {
                (Expr::BumpGate(r), i) => gate_coeff_pole_only_at_zero(r) && i.quick_total(),
                _ => false,
            },
            Expr::Derivative(e) => e.quick_total(),
            Expr::Piecewise(ps) => {
                matches!(ps.first(), Some((PieceStart::NegInf, _)))
                    && ps.iter().all(|(_, b)| b.quick_total())
            }
        }
    }
}

/// True when the coefficient's denominator is a monomial `x^k`, so the only
/// pole is at the gated-out origin.
fn gate_coeff_pole_only_at_zero(r: &RationalFunc) -> bool {
    let den = r.denominator();
    den.terms().count() == 1
}

// ---------------------------------------------------------------------------
// Normalization.
// ---------------------------------------------------------------------------

fn canonical_rational(r: RationalFunc) -> Expr {
    if let Some(c) = r.as_constant() {
        Expr::Const(c)
    } else if let Some(p) = r.as_poly() {
        Expr::Poly(p.clone())
    } else {
        Expr::Rational(r)
    }
}

impl Expr {
    /// Canonical form: rational subtrees folded into leaves, sums/products
    /// flattened with a single leading rational part, derivative markers
    /// expanded, piecewise glue spliced and deduplicated.
    pub fn normalize(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Bump(_) | Expr::Step { .. } => self.clone(),
            Expr::Var => Expr::Poly(Poly::var(1, 0)),
            Expr::Poly(p) => canonical_rational(RationalFunc::from_poly(p.clone())),
            Expr::Rational(r) => canonical_rational(r.clone()),
            Expr::BumpGate(r) => {
                if r.is_zero() {
                    Expr::Const(Rat::zero())
                } else {
                    self.clone()
                }
            }
            Expr::Sum(members) => normalize_sum(members),
            Expr::Product(members) => normalize_product(members),
            Expr::Quotient(num, den) => normalize_quotient(num, den),
            Expr::Compose(outer, inner) => normalize_compose(outer, inner),
            Expr::Derivative(e) => super::diff::differentiate(&e.normalize()),
            Expr::Piecewise(pieces) => normalize_piecewise(pieces),
        }
    }
}

fn normalize_sum(members: &[Expr]) -> Expr {
    let mut rational = RationalFunc::zero();
    let mut rest: Vec<Expr> = Vec::new();
    for m in members {
        let n = m.normalize();
        match n {
            Expr::Sum(inner) => {
                for part in inner {
                    if let Some(r) = part.as_rational() {
                        rational = rational.add(&r);
                    } else {
                        rest.push(part);
                    }
                }
            }
            other => {
                if let Some(r) = other.as_rational() {
                    rational = rational.add(&r);
                } else {
                    rest.push(other);
                }
            }
        }
    }
    if rest.is_empty() {
        return canonical_rational(rational);
    }
    let mut out = Vec::with_capacity(rest.len() + 1);
    if !rational.is_zero() {
        out.push(canonical_rational(rational));
    }
    out.extend(rest);
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Sum(out)
    }
}

fn normalize_product(members: &[Expr]) -> Expr {
    let mut rational = RationalFunc::one();
    let mut rest: Vec<Expr> = Vec::new();
    for m in members {
        let n = m.normalize();
        match n {
            Expr::Product(inner) => {
                for part in inner {
                    if let Some(r) = part.as_rational() {
                        rational = rational.mul(&r);
                    } else {
                        rest.push(part);
                    }
                }
            }
            other => {
                if let Some(r) = other.as_rational() {
                    rational = rational.mul(&r);
                } else {
                    rest.push(other);
                }
            }
        }
    }
    if rest.is_empty() {
        return canonical_rational(rational);
    }
    if rational.is_zero() {
        // Zero coefficient annihilates the product only where the remaining
        // factors are defined; fold only when they are total.
        if rest.iter().all(Expr::quick_total) {
            return Expr::Const(Rat::zero());
        }
        let mut out = vec![Expr::Const(Rat::zero())];
        out.extend(rest);
        return Expr::Product(out);
    }
    let mut out = Vec::with_capacity(rest.len() + 1);
    if rational.as_constant().map(|c| c.is_one()) != Some(true) {
        out.push(canonical_rational(rational));
    }
    out.extend(rest);
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Product(out)
    }
}

fn normalize_quotient(num: &Expr, den: &Expr) -> Expr {
    let n = num.normalize();
    let d = den.normalize();
    if let (Some(nr), Some(dr)) = (n.as_rational(), d.as_rational()) {
        if !dr.is_zero() {
            return canonical_rational(nr.div(&dr));
        }
    }
    Expr::Quotient(Box::new(n), Box::new(d))
}

fn normalize_compose(outer: &Expr, inner: &Expr) -> Expr {
    let i = inner.normalize();
    // Identity inner: the outer IS the function of x.
    if i.as_rational().map(|r| r == RationalFunc::var()) == Some(true) {
        return outer.normalize();
    }
    let o = outer.normalize();
    match o {
        // Rational outer folds through a rational inner, or expands otherwise.
        ref r if r.as_rational().is_some() => {
            let orf = r.as_rational().unwrap();
            if let Some(irf) = i.as_rational() {
                canonical_rational(orf.compose(&irf))
            } else {
                expand_rational_compose(&orf, &i)
            }
        }
        Expr::Sum(ms) => normalize_sum(
            &ms.into_iter()
                .map(|m| Expr::compose(m, i.clone()))
                .collect::<Vec<_>>(),
        ),
        Expr::Product(ms) => normalize_product(
            &ms.into_iter()
                .map(|m| Expr::compose(m, i.clone()))
                .collect::<Vec<_>>(),
        ),
        Expr::Quotient(n, d) => {
            normalize_quotient(&Expr::compose(*n, i.clone()), &Expr::compose(*d, i))
        }
        Expr::Compose(a, b) => normalize_compose(&a, &Expr::compose(*b, i)),
        Expr::BumpGate(r) => {
            if let Expr::Const(c) = &i {
                if !c.is_positive() {
                    return Expr::Const(Rat::zero());
                }
            }
            Expr::Compose(Box::new(Expr::BumpGate(r)), Box::new(i))
        }
        Expr::Bump(spec) => normalize_compose(&bump_expansion(&spec), &i),
        Expr::Step { lo, hi } => normalize_compose(&step_expansion(&lo, &hi), &i),
        // Piecewise outers stay structural; evaluation handles them, the
        // decidable-class operations reject them.
        other => Expr::Compose(Box::new(other), Box::new(i)),
    }
}

/// `p/q ∘ inner` for non-rational inner: expand the polynomials through
/// sums and products of the inner expression.
fn expand_rational_compose(outer: &RationalFunc, inner: &Expr) -> Expr {
    let expand_poly = |p: &Poly| -> Expr {
        let mut members: Vec<Expr> = Vec::new();
        for (e, c) in p.terms() {
            let k = e[0];
            let mut factors = vec![Expr::Const(c.clone())];
            for _ in 0..k {
                factors.push(inner.clone());
            }
            members.push(Expr::Product(factors));
        }
        Expr::Sum(members)
    };
    let num = expand_poly(outer.numerator());
    if outer.is_polynomial() {
        num.normalize()
    } else {
        let den = expand_poly(outer.denominator());
        normalize_quotient(&num, &den)
    }
}

/// The bump `ρ(x) = 1 − g(u(x))` as an explicit gate tree.
pub(crate) fn bump_expansion(spec: &BumpSpec) -> Expr {
    let u = Expr::Poly(spec.shoulder_poly());
    Expr::Sum(vec![
        Expr::int(1),
        Expr::negate(Expr::compose(g_expansion(), u)),
    ])
}

/// The step `g((x − lo)/(hi − lo))` as an explicit gate tree.
pub(crate) fn step_expansion(lo: &Rat, hi: &Rat) -> Expr {
    let w = hi - lo;
    let u = Poly::var(1, 0)
        .sub(&Poly::constant(1, lo.clone()))
        .scale(&(Rat::one() / w));
    Expr::compose(g_expansion(), Expr::Poly(u))
}

/// `g(t) = f(t)/(f(t) + f(1−t))` with `f` the gate.
pub(crate) fn g_expansion() -> Expr {
    let one_minus_t = RationalFunc::constant(Rat::one()).sub(&RationalFunc::var());
    let f_t = Expr::gate();
    let f_mirror = Expr::compose(Expr::gate(), Expr::Rational(one_minus_t));
    Expr::quotient(f_t.clone(), Expr::Sum(vec![f_t, f_mirror]))
}

fn normalize_piecewise(pieces: &[(PieceStart, Expr)]) -> Expr {
    // Normalize bodies, then splice nested piecewise bodies whose domain
    // covers the hosting piece.
    let mut flat: Vec<(PieceStart, Expr)> = Vec::new();
    for (idx, (start, body)) in pieces.iter().enumerate() {
        let end: Option<&Rat> = pieces.get(idx + 1).and_then(|(s, _)| s.as_rat());
        let nb = body.normalize();
        match nb {
            // Splice only when the body's domain covers the hosting piece
            // (no hole): its first edge must not lie beyond `start`.
            Expr::Piecewise(sub) if !start.strictly_before(&sub[0].0) => {
                // Body defined from its first edge; splice the overlap.
                for (j, (sub_start, sub_body)) in sub.iter().enumerate() {
                    let sub_end: Option<&Rat> = sub.get(j + 1).and_then(|(s, _)| s.as_rat());
                    // Effective start: max(start, sub_start).
                    let eff_start = if start.strictly_before(sub_start) {
                        sub_start.clone()
                    } else {
                        start.clone()
                    };
                    // Skip sub-pieces entirely before the hosting interval.
                    if let (Some(se), PieceStart::At(ref es)) = (sub_end, &eff_start) {
                        if se <= es {
                            continue;
                        }
                    }
                    // Skip sub-pieces entirely after the hosting interval.
                    if let (Some(e), PieceStart::At(ref ss)) = (end, sub_start) {
                        if ss >= e {
                            break;
                        }
                    }
                    flat.push((eff_start, sub_body.clone()));
                }
            }
            other => flat.push((start.clone(), other)),
        }
    }
    // Merge consecutive pieces with identical bodies.
    let mut merged: Vec<(PieceStart, Expr)> = Vec::new();
    for (start, body) in flat {
        match merged.last() {
            Some((_, prev)) if *prev == body => {}
            _ => merged.push((start, body)),
        }
    }
    if merged.len() == 1 {
        if let (PieceStart::NegInf, body) = &merged[0] {
            return body.clone();
        }
    }
    Expr::Piecewise(merged)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::printer::write_expr(f, self)
    }
}

/// Convenience: `(lo, hi)` midpoint spec for tests and builders.
pub fn bump_spec(q: i64, a: i64, b: i64) -> BumpSpec {
    BumpSpec::new(rat(q, 1), rat(a, 1), rat(b, 1)).expect("valid radii")
}
