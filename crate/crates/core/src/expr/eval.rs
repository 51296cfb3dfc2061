//! Numeric and exact evaluation of expressions.
//!
//! The float path returns IEEE doubles with rational branch decisions at the
//! structured leaves, so the flat regions of bumps and steps evaluate to
//! exactly 0.0 and 1.0. The exact path tracks values in a small lattice
//! (exact rational / strictly positive / strictly negative / unknown), which
//! is what lets tests assert "exactly zero outside the support" through a
//! quotient whose denominator is transcendental but provably positive.

use num::{One, Signed, Zero};
use thiserror::Error;

use super::rat::{rat_from_f64, rat_sign, rat_to_f64, Rat};
use super::rational::RationalFunc;
use super::tree::{BumpSpec, Expr, PieceStart};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EvalError {
    #[error("argument {at} is outside the expression's domain")]
    DomainViolation { at: f64 },
    #[error("denominator vanishes at {at} outside the certified region")]
    DivisionByZero { at: f64 },
    #[error("cannot evaluate at a non-finite argument")]
    NonFiniteArgument,
}

/// Below this threshold `e^{−1/t}` underflows f64; the gate returns exactly
/// zero there, which matches the true value within one ulp since the function
/// vanishes to all orders at 0⁺.
pub fn gate_underflow_threshold() -> f64 {
    1.0 / f64::MAX.ln()
}

/// The gate `c(t)·e^{−1/t}` for `t > 0`, 0 for `t ≤ 0`.
fn gate_eval(coeff: &RationalFunc, t: f64, at: f64) -> Result<f64, EvalError> {
    if t <= gate_underflow_threshold() {
        return Ok(0.0);
    }
    let den = coeff.denominator().eval_f64(t);
    if den == 0.0 || !den.is_finite() {
        return Err(EvalError::DivisionByZero { at });
    }
    Ok(coeff.numerator().eval_f64(t) / den * (-1.0 / t).exp())
}

/// `g(t) = f(t)/(f(t)+f(1−t))`: 0 for t ≤ 0, 1 for t ≥ 1.
///
/// The denominator is bounded below by f(1/2) > 0 analytically, and the gated
/// branches guarantee it never evaluates to 0.0 in floats either.
pub(crate) fn smooth_step_eval(t: f64) -> f64 {
    let f = |s: f64| {
        if s <= gate_underflow_threshold() {
            0.0
        } else {
            (-1.0 / s).exp()
        }
    };
    let ft = f(t);
    let fm = f(1.0 - t);
    ft / (ft + fm)
}

fn bump_eval(spec: &BumpSpec, x: f64) -> Result<f64, EvalError> {
    let xr = rat_from_f64(x).ok_or(EvalError::NonFiniteArgument)?;
    let dist = (&xr - &spec.q).abs();
    if dist >= spec.b {
        return Ok(0.0);
    }
    if dist <= spec.a {
        return Ok(1.0);
    }
    let q = rat_to_f64(&spec.q);
    let a = rat_to_f64(&spec.a);
    let b = rat_to_f64(&spec.b);
    let u = ((x - q) * (x - q) - a * a) / (b * b - a * a);
    Ok(1.0 - smooth_step_eval(u))
}

impl Expr {
    /// Evaluate at a float argument.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        if x.is_nan() {
            return Err(EvalError::NonFiniteArgument);
        }
        match self {
            Expr::Const(c) => Ok(rat_to_f64(c)),
            Expr::Var => Ok(x),
            Expr::Poly(p) => Ok(p.eval_f64(x)),
            Expr::Rational(r) => {
                let den = r.denominator().eval_f64(x);
                if den == 0.0 || !den.is_finite() {
                    return Err(EvalError::DivisionByZero { at: x });
                }
                Ok(r.numerator().eval_f64(x) / den)
            }
            Expr::Sum(ms) => {
                let mut acc = 0.0;
                for m in ms {
                    acc += m.eval(x)?;
                }
                Ok(acc)
            }
            Expr::Product(ms) => {
                let mut acc = 1.0;
                for m in ms {
                    acc *= m.eval(x)?;
                }
                Ok(acc)
            }
            Expr::Quotient(n, d) => {
                let den = d.eval(x)?;
                if den == 0.0 || !den.is_finite() {
                    return Err(EvalError::DivisionByZero { at: x });
                }
                Ok(n.eval(x)? / den)
            }
            Expr::Compose(outer, inner) => {
                let v = inner.eval(x)?;
                outer.eval(v)
            }
            Expr::Derivative(e) => super::diff::differentiate(&e.normalize()).eval(x),
            Expr::BumpGate(r) => gate_eval(r, x, x),
            Expr::Bump(spec) => bump_eval(spec, x),
            Expr::Step { lo, hi } => {
                let xr = rat_from_f64(x).ok_or(EvalError::NonFiniteArgument)?;
                if xr <= *lo {
                    return Ok(0.0);
                }
                if xr >= *hi {
                    return Ok(1.0);
                }
                let w = rat_to_f64(&(hi - lo));
                Ok(smooth_step_eval((x - rat_to_f64(lo)) / w))
            }
            Expr::Piecewise(pieces) => {
                let xr = rat_from_f64(x).ok_or(EvalError::NonFiniteArgument)?;
                match select_piece(pieces, &xr) {
                    Some(body) => body.eval(x),
                    None => Err(EvalError::DomainViolation { at: x }),
                }
            }
        }
    }
}

/// The piece in force at `x`: piece `i` covers `(start_i, start_{i+1}]`.
fn select_piece<'a>(pieces: &'a [(PieceStart, Expr)], x: &Rat) -> Option<&'a Expr> {
    let mut chosen: Option<&Expr> = None;
    for (start, body) in pieces {
        match start {
            PieceStart::NegInf => chosen = Some(body),
            PieceStart::At(c) if c < x => chosen = Some(body),
            _ => break,
        }
    }
    chosen
}

// ---------------------------------------------------------------------------
// Exact evaluation with sign tracking.
// ---------------------------------------------------------------------------

/// Result of exact evaluation at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactEval {
    /// The value is this rational, exactly.
    Exact(Rat),
    /// Strictly positive, but not a rational we can name (gate territory).
    Pos,
    /// Strictly negative, ditto.
    Neg,
    /// Defined, but nothing is known about the value.
    Unknown,
    /// The point is outside the domain.
    Undefined,
}

impl ExactEval {
    pub fn is_exactly(&self, v: &Rat) -> bool {
        matches!(self, ExactEval::Exact(c) if c == v)
    }

    fn from_sign(sign: i32) -> ExactEval {
        match sign.cmp(&0) {
            std::cmp::Ordering::Greater => ExactEval::Pos,
            std::cmp::Ordering::Less => ExactEval::Neg,
            std::cmp::Ordering::Equal => ExactEval::Exact(Rat::zero()),
        }
    }

    fn add(self, other: ExactEval) -> ExactEval {
        use ExactEval::*;
        match (self, other) {
            (Undefined, _) | (_, Undefined) => Undefined,
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(c), Pos) | (Pos, Exact(c)) => {
                if c.is_negative() {
                    Unknown
                } else {
                    Pos
                }
            }
            (Exact(c), Neg) | (Neg, Exact(c)) => {
                if c.is_positive() {
                    Unknown
                } else {
                    Neg
                }
            }
            (Pos, Pos) => Pos,
            (Neg, Neg) => Neg,
            _ => Unknown,
        }
    }

    fn mul(self, other: ExactEval) -> ExactEval {
        use ExactEval::*;
        match (self, other) {
            (Undefined, _) | (_, Undefined) => Undefined,
            (Exact(a), Exact(b)) => Exact(a * b),
            (Exact(c), Pos) | (Pos, Exact(c)) => {
                if c.is_zero() {
                    Exact(Rat::zero())
                } else if c.is_positive() {
                    Pos
                } else {
                    Neg
                }
            }
            (Exact(c), Neg) | (Neg, Exact(c)) => {
                if c.is_zero() {
                    Exact(Rat::zero())
                } else if c.is_positive() {
                    Neg
                } else {
                    Pos
                }
            }
            (Pos, Pos) | (Neg, Neg) => Pos,
            (Pos, Neg) | (Neg, Pos) => Neg,
            (Exact(c), Unknown) | (Unknown, Exact(c)) => {
                if c.is_zero() {
                    // Zero times a defined value is zero.
                    Exact(Rat::zero())
                } else {
                    Unknown
                }
            }
            _ => Unknown,
        }
    }

    fn div(self, den: ExactEval) -> ExactEval {
        use ExactEval::*;
        match (self, den) {
            (Undefined, _) | (_, Undefined) => Undefined,
            (_, Exact(d)) if d.is_zero() => Undefined,
            (Exact(n), Exact(d)) => Exact(n / d),
            (num, Exact(d)) => num.mul(ExactEval::from_sign(rat_sign(&d))),
            (Exact(n), Pos) => {
                if n.is_zero() {
                    Exact(Rat::zero())
                } else {
                    ExactEval::from_sign(rat_sign(&n)).mul(Pos)
                }
            }
            (Exact(n), Neg) => {
                if n.is_zero() {
                    Exact(Rat::zero())
                } else {
                    ExactEval::from_sign(rat_sign(&n)).mul(Neg)
                }
            }
            (Pos, Pos) | (Neg, Neg) => Pos,
            (Pos, Neg) | (Neg, Pos) => Neg,
            // Unknown denominator could vanish: refuse to conclude.
            _ => Unknown,
        }
    }
}

impl Expr {
    /// Exact evaluation at a rational point, tracking signs through gate
    /// territory.
    pub fn eval_exact(&self, x: &Rat) -> ExactEval {
        match self {
            Expr::Const(c) => ExactEval::Exact(c.clone()),
            Expr::Var => ExactEval::Exact(x.clone()),
            Expr::Poly(p) => ExactEval::Exact(p.eval_at(x)),
            Expr::Rational(r) => match r.eval_at(x) {
                Some(v) => ExactEval::Exact(v),
                None => ExactEval::Undefined,
            },
            Expr::Sum(ms) => ms
                .iter()
                .map(|m| m.eval_exact(x))
                .fold(ExactEval::Exact(Rat::zero()), ExactEval::add),
            Expr::Product(ms) => {
                // Evaluate all members first so an undefined factor is not
                // masked by a zero factor.
                let vals: Vec<ExactEval> = ms.iter().map(|m| m.eval_exact(x)).collect();
                if vals.iter().any(|v| matches!(v, ExactEval::Undefined)) {
                    return ExactEval::Undefined;
                }
                vals.into_iter()
                    .fold(ExactEval::Exact(Rat::one()), ExactEval::mul)
            }
            Expr::Quotient(n, d) => n.eval_exact(x).div(d.eval_exact(x)),
            Expr::Compose(outer, inner) => match inner.eval_exact(x) {
                ExactEval::Exact(v) => outer.eval_exact(&v),
                ExactEval::Neg => match &**outer {
                    // A gate of a strictly negative argument is exactly zero.
                    Expr::BumpGate(_) => ExactEval::Exact(Rat::zero()),
                    _ => ExactEval::Unknown,
                },
                ExactEval::Pos => match &**outer {
                    Expr::BumpGate(r) => match r.as_constant() {
                        Some(c) => ExactEval::from_sign(rat_sign(&c)),
                        None => ExactEval::Unknown,
                    },
                    _ => ExactEval::Unknown,
                },
                ExactEval::Undefined => ExactEval::Undefined,
                ExactEval::Unknown => ExactEval::Unknown,
            },
            Expr::Derivative(e) => super::diff::differentiate(&e.normalize()).eval_exact(x),
            Expr::BumpGate(r) => {
                if !x.is_positive() {
                    return ExactEval::Exact(Rat::zero());
                }
                match r.eval_at(x) {
                    None => ExactEval::Undefined,
                    Some(c) => {
                        if c.is_zero() {
                            ExactEval::Exact(Rat::zero())
                        } else {
                            ExactEval::from_sign(rat_sign(&c))
                        }
                    }
                }
            }
            Expr::Bump(spec) => {
                let dist = (x - &spec.q).abs();
                if dist >= spec.b {
                    ExactEval::Exact(Rat::zero())
                } else if dist <= spec.a {
                    ExactEval::Exact(Rat::one())
                } else {
                    // Shoulder values lie strictly between 0 and 1.
                    ExactEval::Pos
                }
            }
            Expr::Step { lo, hi } => {
                if x <= lo {
                    ExactEval::Exact(Rat::zero())
                } else if x >= hi {
                    ExactEval::Exact(Rat::one())
                } else {
                    ExactEval::Pos
                }
            }
            Expr::Piecewise(pieces) => match select_piece(pieces, x) {
                Some(body) => body.eval_exact(x),
                None => ExactEval::Undefined,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_i};
    use super::super::tree::bump_spec;
    use super::*;

    #[test]
    fn gate_basic_values() {
        let g = Expr::gate();
        assert_eq!(g.eval(-1.0).unwrap(), 0.0);
        assert_eq!(g.eval(0.0).unwrap(), 0.0);
        let v = g.eval(1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15, "f(1) = e^-1, got {v}");
        // Below the underflow threshold the gate is exactly zero.
        assert_eq!(g.eval(1.0e-3).unwrap(), 0.0);
    }

    #[test]
    fn bump_flat_regions_are_exact() {
        let b = Expr::bump(bump_spec(0, 1, 2));
        assert_eq!(b.eval(0.0).unwrap(), 1.0);
        assert_eq!(b.eval(1.0).unwrap(), 1.0);
        assert_eq!(b.eval(-1.0).unwrap(), 1.0);
        assert_eq!(b.eval(2.0).unwrap(), 0.0);
        assert_eq!(b.eval(-2.0).unwrap(), 0.0);
        assert_eq!(b.eval(10.0).unwrap(), 0.0);
        let shoulder = b.eval(1.5).unwrap();
        assert!(shoulder > 0.0 && shoulder < 1.0);
    }

    #[test]
    fn bump_shoulder_strictly_decreasing() {
        // Probe at f64-resolvable spacing; right at the core the decrease is
        // below one ulp of 1.0.
        let b = Expr::bump(bump_spec(0, 1, 2));
        let mut prev = 1.0;
        for i in 1..10 {
            let x = 1.0 + i as f64 * 0.1;
            let v = b.eval(x).unwrap();
            assert!(v < prev, "not strictly decreasing at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn step_symmetry() {
        let s = Expr::step(rat_i(0), rat_i(1)).unwrap();
        assert_eq!(s.eval(0.0).unwrap(), 0.0);
        assert_eq!(s.eval(1.0).unwrap(), 1.0);
        assert_eq!(s.eval(0.5).unwrap(), 0.5);
        let t = 0.3;
        let sum = s.eval(t).unwrap() + s.eval(1.0 - t).unwrap();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn piecewise_domain_and_selection() {
        // piecewise(0: 0, 1: x): domain (0, ∞), value 0 on (0,1], x on (1,∞)
        let pw = Expr::piecewise(vec![
            (PieceStart::At(rat_i(0)), Expr::int(0)),
            (PieceStart::At(rat_i(1)), Expr::var()),
        ])
        .unwrap();
        assert_eq!(pw.eval(0.5).unwrap(), 0.0);
        assert_eq!(pw.eval(1.0).unwrap(), 0.0);
        assert_eq!(pw.eval(2.0).unwrap(), 2.0);
        assert!(matches!(
            pw.eval(-1.0),
            Err(EvalError::DomainViolation { .. })
        ));
        assert!(matches!(
            pw.eval(0.0),
            Err(EvalError::DomainViolation { .. })
        ));
    }

    #[test]
    fn exact_eval_through_quotients_of_gates() {
        // bump / (bump + bump2): exactly zero where the numerator's support ends,
        // provided the denominator is provably positive there.
        let b1 = Expr::bump(bump_spec(0, 1, 2));
        let b2 = Expr::bump(bump_spec(3, 1, 2));
        let member = Expr::quotient(b1.clone(), Expr::sum(vec![b1, b2]));
        // x = 5/2: outside supp b1 = [-2,2], inside shoulder of b2.
        assert!(member.eval_exact(&rat(5, 2)).is_exactly(&rat_i(0)));
        // x = 0: b1 = 1 exactly, b2 = 0 exactly -> quotient exactly 1.
        assert!(member.eval_exact(&rat_i(0)).is_exactly(&rat_i(1)));
    }
}
