//! Exact symbolic differentiation.
//!
//! Closed on the class: the derivative of a gate is again a gate with a
//! rational coefficient, `(c(t)·e^{−1/t})′ = (c′(t) + c(t)/t²)·e^{−1/t}`,
//! still vanishing identically on t ≤ 0 and smooth across 0. Bumps and steps
//! differentiate through the chain rule into gate trees.

use num::One;

use super::poly::Poly;
use super::rat::Rat;
use super::rational::RationalFunc;
use super::tree::{Expr, PieceStart};

/// Derivative of a normalized expression; the result is normalized.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::int(0),
        Expr::Var => Expr::int(1),
        Expr::Poly(p) => Expr::Poly(p.derivative()).normalize(),
        Expr::Rational(r) => Expr::Rational(r.derivative()).normalize(),
        Expr::Sum(ms) => Expr::Sum(ms.iter().map(differentiate).collect()).normalize(),
        Expr::Product(ms) => {
            let mut terms = Vec::with_capacity(ms.len());
            for i in 0..ms.len() {
                let mut factors = Vec::with_capacity(ms.len());
                for (j, m) in ms.iter().enumerate() {
                    if i == j {
                        factors.push(differentiate(m));
                    } else {
                        factors.push(m.clone());
                    }
                }
                terms.push(Expr::Product(factors));
            }
            Expr::Sum(terms).normalize()
        }
        Expr::Quotient(n, d) => {
            let num = Expr::Sum(vec![
                Expr::Product(vec![differentiate(n), (**d).clone()]),
                Expr::negate(Expr::Product(vec![(**n).clone(), differentiate(d)])),
            ]);
            let den = Expr::Product(vec![(**d).clone(), (**d).clone()]);
            Expr::quotient(num, den).normalize()
        }
        Expr::Compose(outer, inner) => {
            let chain = Expr::Product(vec![
                Expr::compose(differentiate(outer), (**inner).clone()),
                differentiate(inner),
            ]);
            chain.normalize()
        }
        Expr::Derivative(inner) => differentiate(&differentiate(&inner.normalize())),
        Expr::BumpGate(r) => Expr::BumpGate(gate_coeff_derivative(r)).normalize(),
        Expr::Bump(spec) => {
            // ρ′ = −g′(u)·u′ with u the shoulder polynomial.
            let u = spec.shoulder_poly();
            let u_prime = u.derivative();
            Expr::Product(vec![
                Expr::Const(-Rat::one()),
                Expr::compose(g_prime_expansion(), Expr::Poly(u)),
                Expr::Poly(u_prime),
            ])
            .normalize()
        }
        Expr::Step { lo, hi } => {
            let w = hi - lo;
            let u = Poly::var(1, 0)
                .sub(&Poly::constant(1, lo.clone()))
                .scale(&(Rat::one() / &w));
            Expr::Product(vec![
                Expr::Const(Rat::one() / w),
                Expr::compose(g_prime_expansion(), Expr::Poly(u)),
            ])
            .normalize()
        }
        Expr::Piecewise(pieces) => {
            let dp: Vec<(PieceStart, Expr)> = pieces
                .iter()
                .map(|(s, b)| (s.clone(), differentiate(b)))
                .collect();
            Expr::Piecewise(dp).normalize()
        }
    }
}

/// Coefficient of the gate's derivative: `c′(t) + c(t)/t²`.
fn gate_coeff_derivative(c: &RationalFunc) -> RationalFunc {
    let t_sq = RationalFunc::from_poly(Poly::var(1, 0).mul(&Poly::var(1, 0)));
    c.derivative().add(&c.div(&t_sq))
}

/// `g′(t) = (f′(t)·f(1−t) + f(t)·f′(1−t)) / (f(t)+f(1−t))²`.
///
/// Both numerator terms carry a factor that vanishes identically outside
/// (0, 1), so g′ is supported on [0, 1].
fn g_prime_expansion() -> Expr {
    let one_minus_t = RationalFunc::constant(Rat::one()).sub(&RationalFunc::var());
    let f = Expr::gate();
    let f_prime = Expr::BumpGate(RationalFunc::var().pow(-2));
    let f_mirror = Expr::compose(f.clone(), Expr::Rational(one_minus_t.clone()));
    let f_prime_mirror = Expr::compose(f_prime.clone(), Expr::Rational(one_minus_t));
    let num = Expr::Sum(vec![
        Expr::Product(vec![f_prime, f_mirror.clone()]),
        Expr::Product(vec![f.clone(), f_prime_mirror]),
    ]);
    let den_base = Expr::Sum(vec![f, f_mirror]);
    Expr::quotient(num, Expr::Product(vec![den_base.clone(), den_base]))
}

/// k-th derivative.
pub fn differentiate_n(e: &Expr, order: u32) -> Expr {
    let mut cur = e.normalize();
    for _ in 0..order {
        cur = differentiate(&cur);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_i};
    use super::super::tree::bump_spec;
    use super::*;

    #[test]
    fn polynomial_and_rational_rules() {
        // d/dx (x^2 - 3x) = 2x - 3
        let p = Expr::Poly(Poly::unary_from_ints(&[0, -3, 1])).normalize();
        assert_eq!(differentiate(&p).to_string(), "2*x - 3");
        // d/dx (1/x) = -1/x^2
        let r = Expr::Rational(RationalFunc::var().recip());
        assert_eq!(differentiate(&r).to_string(), "(-1)/(x^2)");
    }

    #[test]
    fn gate_derivative_vanishes_at_zero_and_left() {
        let d = differentiate(&Expr::gate());
        assert_eq!(d.eval(0.0).unwrap(), 0.0);
        assert_eq!(d.eval(-0.5).unwrap(), 0.0);
        // f'(t) = e^{-1/t}/t^2 at t = 1: e^-1
        let v = d.eval(1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gate_derivative_matches_finite_differences() {
        let d = differentiate(&Expr::gate());
        for &t in &[0.5, 1.0, 2.0, 0.2] {
            let h = 1e-6;
            let fd = (Expr::gate().eval(t + h).unwrap() - Expr::gate().eval(t - h).unwrap())
                / (2.0 * h);
            let sym = d.eval(t).unwrap();
            assert!(
                (fd - sym).abs() < 1e-6 * (1.0 + sym.abs()),
                "t = {t}: fd {fd} vs sym {sym}"
            );
        }
    }

    #[test]
    fn bump_derivative_signs_and_support() {
        let b = Expr::bump(bump_spec(0, 1, 2));
        let db = differentiate(&b);
        // Zero on the flat core and outside the support.
        assert_eq!(db.eval(0.0).unwrap(), 0.0);
        assert_eq!(db.eval(3.0).unwrap(), 0.0);
        assert_eq!(db.eval(-3.0).unwrap(), 0.0);
        // Decreasing on the right shoulder, increasing on the left.
        assert!(db.eval(1.5).unwrap() < 0.0);
        assert!(db.eval(-1.5).unwrap() > 0.0);
        // Finite-difference agreement on the shoulder.
        let h = 1e-6;
        let fd = (b.eval(1.5 + h).unwrap() - b.eval(1.5 - h).unwrap()) / (2.0 * h);
        let sym = db.eval(1.5).unwrap();
        assert!((fd - sym).abs() < 1e-6 * (1.0 + sym.abs()));
    }

    #[test]
    fn second_derivative_of_step_is_smooth_at_edges(){
        let s = Expr::step(rat_i(0), rat_i(1)).unwrap();
        let d2 = differentiate_n(&s, 2);
        assert_eq!(d2.eval(0.0).unwrap(), 0.0);
        assert_eq!(d2.eval(1.0).unwrap(), 0.0);
        assert_eq!(d2.eval(-0.3).unwrap(), 0.0);
        assert_eq!(d2.eval(1.3).unwrap(), 0.0);
        assert!(d2.eval(0.2).unwrap().is_finite());
    }

    #[test]
    fn piecewise_derivative() {
        // piecewise(-inf: 0, 0: x^2) -> piecewise(-inf: 0, 0: 2x)
        let pw = Expr::piecewise(vec![
            (PieceStart::NegInf, Expr::int(0)),
            (PieceStart::At(rat(0, 1)), Expr::Poly(Poly::unary_from_ints(&[0, 0, 1]))),
        ])
        .unwrap();
        let d = differentiate(&pw.normalize());
        assert_eq!(d.eval(-1.0).unwrap(), 0.0);
        assert_eq!(d.eval(3.0).unwrap(), 6.0);
    }
}
