//! Canonical text form for expressions.
//!
//! Printing a normalized expression and parsing it back yields the same
//! normalized expression; the grammar in `parser` accepts everything printed
//! here.

use std::fmt;

use num::{One, Signed};

use super::rat::Rat;
use super::tree::{Expr, PieceStart};

pub(crate) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    write_at(f, e, Prec::Sum)
}

/// Precedence context: what the surrounding text can absorb without parens.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Product,
    Atom,
}

fn needs_parens(e: &Expr, ctx: Prec) -> bool {
    let own = match e {
        Expr::Const(c) => {
            if c.is_negative() || !c.denom().is_one() {
                Prec::Sum
            } else {
                Prec::Atom
            }
        }
        Expr::Var => Prec::Atom,
        Expr::Poly(p) => {
            let multi_term = p.terms().count() > 1;
            let neg_or_scaled = p
                .terms()
                .next()
                .map(|(_, c)| c.is_negative() || !c.is_one())
                .unwrap_or(false);
            if multi_term {
                Prec::Sum
            } else if neg_or_scaled {
                Prec::Product
            } else {
                Prec::Atom
            }
        }
        // Rational leaves print as "(p)/(q)" and only ever sit first in a
        // product, where left associativity keeps the reparse identical.
        Expr::Rational(_) => Prec::Atom,
        // A quotient after "*" would reassociate: force parens in products.
        Expr::Quotient(_, _) => Prec::Sum,
        Expr::Sum(_) => Prec::Sum,
        Expr::Product(_) => Prec::Product,
        Expr::Compose(_, _)
        | Expr::Derivative(_)
        | Expr::BumpGate(_)
        | Expr::Bump(_)
        | Expr::Step { .. }
        | Expr::Piecewise(_) => Prec::Atom,
    };
    own < ctx
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: Prec) -> fmt::Result {
    if needs_parens(e, ctx) {
        write!(f, "(")?;
        write_node(f, e)?;
        return write!(f, ")");
    }
    write_node(f, e)
}

/// A member of a sum, split into sign and magnitude for pretty joining.
fn sum_member_parts(m: &Expr) -> (bool, Expr) {
    match m {
        Expr::Const(c) if c.is_negative() => (true, Expr::Const(-c.clone())),
        Expr::Product(fs) => match fs.first() {
            Some(Expr::Const(c)) if c.is_negative() => {
                let mut rest = fs.clone();
                let flipped = -c.clone();
                if flipped.is_one() && rest.len() > 1 {
                    rest.remove(0);
                } else {
                    rest[0] = Expr::Const(flipped);
                }
                let expr = if rest.len() == 1 {
                    rest.pop().unwrap()
                } else {
                    Expr::Product(rest)
                };
                (true, expr)
            }
            _ => (false, m.clone()),
        },
        _ => (false, m.clone()),
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Const(c) => write_rat(f, c),
        Expr::Var => write!(f, "x"),
        Expr::Poly(p) => write!(f, "{p}"),
        Expr::Rational(r) => write!(f, "{r}"),
        Expr::Sum(ms) => {
            for (i, m) in ms.iter().enumerate() {
                if i == 0 {
                    write_at(f, m, Prec::Sum)?;
                } else {
                    let (neg, mag) = sum_member_parts(m);
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                    write_at(f, &mag, Prec::Product)?;
                }
            }
            Ok(())
        }
        Expr::Product(ms) => {
            for (i, m) in ms.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                write_at(f, m, Prec::Product)?;
            }
            Ok(())
        }
        Expr::Quotient(n, d) => {
            write!(f, "(")?;
            write_node(f, n)?;
            write!(f, ")/(")?;
            write_node(f, d)?;
            write!(f, ")")
        }
        Expr::Compose(outer, inner) => match &**outer {
            Expr::BumpGate(r) if r.as_constant().map(|c| c.is_one()) == Some(true) => {
                write!(f, "gate(")?;
                write_node(f, inner)?;
                write!(f, ")")
            }
            Expr::BumpGate(r) => {
                write!(f, "gate(")?;
                write_node(f, inner)?;
                write!(f, "; ")?;
                write_node(f, &Expr::Rational(r.clone()).normalize())?;
                write!(f, ")")
            }
            _ => {
                write!(f, "compose(")?;
                write_node(f, outer)?;
                write!(f, ", ")?;
                write_node(f, inner)?;
                write!(f, ")")
            }
        },
        Expr::Derivative(inner) => {
            write!(f, "D(")?;
            write_node(f, inner)?;
            write!(f, ")")
        }
        Expr::BumpGate(r) if r.as_constant().map(|c| c.is_one()) == Some(true) => {
            write!(f, "gate(x)")
        }
        Expr::BumpGate(r) => {
            write!(f, "gate(x; ")?;
            write_node(f, &Expr::Rational(r.clone()).normalize())?;
            write!(f, ")")
        }
        Expr::Bump(spec) => {
            write!(f, "bump(x; ")?;
            write_rat(f, &spec.q)?;
            write!(f, ", ")?;
            write_rat(f, &spec.a)?;
            write!(f, ", ")?;
            write_rat(f, &spec.b)?;
            write!(f, ")")
        }
        Expr::Step { lo, hi } => {
            write!(f, "step(x; ")?;
            write_rat(f, lo)?;
            write!(f, ", ")?;
            write_rat(f, hi)?;
            write!(f, ")")
        }
        Expr::Piecewise(pieces) => {
            write!(f, "piecewise(")?;
            for (i, (start, body)) in pieces.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                match start {
                    PieceStart::NegInf => write!(f, "-inf")?,
                    PieceStart::At(c) => write_rat(f, c)?,
                }
                write!(f, ": ")?;
                write_node(f, body)?;
            }
            write!(f, ")")
        }
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, r: &Rat) -> fmt::Result {
    // BigRational displays as "p" or "p/q", both inside the grammar.
    write!(f, "{r}")
}
