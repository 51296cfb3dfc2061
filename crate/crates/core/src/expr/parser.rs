//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr       := term (('+'|'-') term)*
//! term       := unary (('*'|'/') unary)*
//! unary      := ('-'|'+') unary | power
//! power      := atom ('^' ('-')? integer)?
//! atom       := number | 'x' | 'x'<digits> | '(' expr ')' | call
//! call       := 'bump' '(' 'x' ';' rat ',' rat ',' rat ')'
//!             | 'step' '(' 'x' ';' rat ',' rat ')'
//!             | 'gate' '(' expr (';' expr)? ')'
//!             | 'piecewise' '(' edge ':' expr (',' edge ':' expr)* ')'
//!             | 'compose' '(' expr ',' expr ')'
//!             | 'D' '(' expr ')'
//! edge       := '-inf' | rat
//! rat        := ('-')? number ('/' number)?
//! number     := digits ('.' digits)? | '.' digits
//! ```
//!
//! Numbers are decimal rationals (`0.25` is exactly 1/4). The sole unary
//! variable is `x`; `parse_poly` additionally accepts `x1..xn` and restricts
//! the operators to the polynomial fragment.

use num::{One, Zero};
use thiserror::Error;

use super::poly::Poly;
use super::rat::{parse_decimal, Rat};
use super::tree::{BumpSpec, Expr, PieceStart};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("out-of-class construct at byte {position}: {message}")]
    OutOfClass { position: usize, message: String },
}

impl ParseError {
    fn syntax(position: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }

    fn out_of_class(position: usize, message: impl Into<String>) -> Self {
        ParseError::OutOfClass {
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Punct(char),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut seen_dot = false;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_digit() {
                    i += 1;
                } else if d == '.' && !seen_dot {
                    seen_dot = true;
                    i += 1;
                } else {
                    break;
                }
            }
            toks.push((start, Tok::Num(text[start..i].to_string())));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() {
                let d = bytes[i] as char;
                if d.is_ascii_alphanumeric() || d == '_' {
                    i += 1;
                } else {
                    break;
                }
            }
            toks.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        if "+-*/^();,:".contains(c) {
            toks.push((i, Tok::Punct(c)));
            i += 1;
            continue;
        }
        return Err(ParseError::syntax(i, format!("unexpected character '{c}'")));
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat_punct(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::syntax(self.here(), format!("expected '{c}'"))),
        }
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Punct(p)) if *p == c)
    }
}

/// Parse an expression of the unary class; the result is normalized.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut lx = lex(text)?;
    let e = parse_expr(&mut lx)?;
    if lx.pos != lx.toks.len() {
        return Err(ParseError::syntax(lx.here(), "trailing input"));
    }
    Ok(e.normalize())
}

fn parse_expr(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut members = vec![parse_term(lx)?];
    loop {
        match lx.peek() {
            Some(Tok::Punct('+')) => {
                lx.pos += 1;
                members.push(parse_term(lx)?);
            }
            Some(Tok::Punct('-')) => {
                lx.pos += 1;
                members.push(Expr::negate(parse_term(lx)?));
            }
            _ => break,
        }
    }
    Ok(if members.len() == 1 {
        members.pop().unwrap()
    } else {
        Expr::Sum(members)
    })
}

fn parse_term(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut acc = parse_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Punct('*')) => {
                lx.pos += 1;
                let rhs = parse_unary(lx)?;
                acc = Expr::Product(vec![acc, rhs]);
            }
            Some(Tok::Punct('/')) => {
                lx.pos += 1;
                let rhs = parse_unary(lx)?;
                acc = Expr::quotient(acc, rhs);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_unary(lx: &mut Lexer) -> Result<Expr, ParseError> {
    match lx.peek() {
        Some(Tok::Punct('-')) => {
            lx.pos += 1;
            Ok(Expr::negate(parse_unary(lx)?))
        }
        Some(Tok::Punct('+')) => {
            lx.pos += 1;
            parse_unary(lx)
        }
        _ => parse_power(lx),
    }
}

fn parse_power(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let base = parse_atom(lx)?;
    if !lx.at_punct('^') {
        return Ok(base);
    }
    lx.pos += 1;
    let neg = if lx.at_punct('-') {
        lx.pos += 1;
        true
    } else {
        false
    };
    let pos = lx.here();
    let n: u32 = match lx.bump() {
        Some(Tok::Num(s)) if !s.contains('.') => s
            .parse()
            .map_err(|_| ParseError::out_of_class(pos, "exponent too large"))?,
        _ => {
            return Err(ParseError::out_of_class(
                pos,
                "exponents must be integers (the class has integer powers only)",
            ))
        }
    };
    let mut powered = Expr::Product(vec![base; n.max(1) as usize]);
    if n == 0 {
        powered = Expr::int(1);
    }
    if neg {
        powered = Expr::quotient(Expr::int(1), powered);
    }
    Ok(powered)
}

fn parse_atom(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let pos = lx.here();
    match lx.bump() {
        Some(Tok::Num(s)) => {
            let r = parse_decimal(&s)
                .ok_or_else(|| ParseError::syntax(pos, format!("bad number '{s}'")))?;
            Ok(Expr::Const(r))
        }
        Some(Tok::Ident(name)) => match name.as_str() {
            "x" => Ok(Expr::Var),
            "bump" => parse_bump(lx, pos),
            "step" => parse_step(lx, pos),
            "gate" => parse_gate(lx),
            "piecewise" => parse_piecewise(lx, pos),
            "compose" => {
                lx.eat_punct('(')?;
                let outer = parse_expr(lx)?;
                lx.eat_punct(',')?;
                let inner = parse_expr(lx)?;
                lx.eat_punct(')')?;
                Ok(Expr::compose(outer, inner))
            }
            "D" => {
                lx.eat_punct('(')?;
                let inner = parse_expr(lx)?;
                lx.eat_punct(')')?;
                Ok(Expr::derivative(inner))
            }
            other if other.starts_with('x') && other[1..].chars().all(|c| c.is_ascii_digit()) => {
                Err(ParseError::out_of_class(
                    pos,
                    "indexed variables are for the polynomial grammar; the unary class uses 'x'",
                ))
            }
            other => Err(ParseError::syntax(pos, format!("unknown name '{other}'"))),
        },
        Some(Tok::Punct('(')) => {
            let e = parse_expr(lx)?;
            lx.eat_punct(')')?;
            Ok(e)
        }
        Some(t) => Err(ParseError::syntax(pos, format!("unexpected token {t:?}"))),
        None => Err(ParseError::syntax(pos, "unexpected end of input")),
    }
}

/// Signed rational literal: `-3`, `1/2`, `0.25`.
fn parse_rat_literal(lx: &mut Lexer) -> Result<Rat, ParseError> {
    let neg = if lx.at_punct('-') {
        lx.pos += 1;
        true
    } else {
        false
    };
    let pos = lx.here();
    let num = match lx.bump() {
        Some(Tok::Num(s)) => parse_decimal(&s)
            .ok_or_else(|| ParseError::syntax(pos, format!("bad number '{s}'")))?,
        _ => return Err(ParseError::syntax(pos, "expected a rational literal")),
    };
    let mut val = num;
    if lx.at_punct('/') {
        lx.pos += 1;
        let dpos = lx.here();
        let den = match lx.bump() {
            Some(Tok::Num(s)) => parse_decimal(&s)
                .ok_or_else(|| ParseError::syntax(dpos, format!("bad number '{s}'")))?,
            _ => return Err(ParseError::syntax(dpos, "expected a denominator")),
        };
        if den.is_zero() {
            return Err(ParseError::out_of_class(dpos, "zero denominator"));
        }
        val /= den;
    }
    Ok(if neg { -val } else { val })
}

fn expect_var_x(lx: &mut Lexer) -> Result<(), ParseError> {
    let pos = lx.here();
    match lx.bump() {
        Some(Tok::Ident(s)) if s == "x" => Ok(()),
        _ => Err(ParseError::syntax(pos, "expected the variable 'x'")),
    }
}

fn parse_bump(lx: &mut Lexer, call_pos: usize) -> Result<Expr, ParseError> {
    lx.eat_punct('(')?;
    expect_var_x(lx)?;
    lx.eat_punct(';')?;
    let q = parse_rat_literal(lx)?;
    lx.eat_punct(',')?;
    let a = parse_rat_literal(lx)?;
    lx.eat_punct(',')?;
    let b = parse_rat_literal(lx)?;
    lx.eat_punct(')')?;
    let spec = BumpSpec::new(q, a, b)
        .map_err(|e| ParseError::out_of_class(call_pos, e.to_string()))?;
    Ok(Expr::Bump(spec))
}

fn parse_step(lx: &mut Lexer, call_pos: usize) -> Result<Expr, ParseError> {
    lx.eat_punct('(')?;
    expect_var_x(lx)?;
    lx.eat_punct(';')?;
    let lo = parse_rat_literal(lx)?;
    lx.eat_punct(',')?;
    let hi = parse_rat_literal(lx)?;
    lx.eat_punct(')')?;
    Expr::step(lo, hi).map_err(|e| ParseError::out_of_class(call_pos, e.to_string()))
}

fn parse_gate(lx: &mut Lexer) -> Result<Expr, ParseError> {
    lx.eat_punct('(')?;
    let inner = parse_expr(lx)?;
    let coeff = if lx.at_punct(';') {
        lx.pos += 1;
        let cpos = lx.here();
        let ce = parse_expr(lx)?.normalize();
        match ce.as_rational() {
            Some(r) => r,
            None => {
                return Err(ParseError::out_of_class(
                    cpos,
                    "gate coefficient must be a rational function of x",
                ))
            }
        }
    } else {
        super::rational::RationalFunc::one()
    };
    lx.eat_punct(')')?;
    Ok(Expr::compose(Expr::BumpGate(coeff), inner))
}

fn parse_piecewise(lx: &mut Lexer, call_pos: usize) -> Result<Expr, ParseError> {
    lx.eat_punct('(')?;
    let mut pieces = Vec::new();
    loop {
        let start = parse_edge(lx)?;
        lx.eat_punct(':')?;
        let body = parse_expr(lx)?;
        pieces.push((start, body));
        if lx.at_punct(',') {
            lx.pos += 1;
            continue;
        }
        break;
    }
    lx.eat_punct(')')?;
    Expr::piecewise(pieces).map_err(|e| ParseError::out_of_class(call_pos, e.to_string()))
}

fn parse_edge(lx: &mut Lexer) -> Result<PieceStart, ParseError> {
    if lx.at_punct('-') {
        if let Some(Tok::Ident(s)) = lx.peek2() {
            if s == "inf" {
                lx.pos += 2;
                return Ok(PieceStart::NegInf);
            }
        }
    }
    Ok(PieceStart::At(parse_rat_literal(lx)?))
}

// ---------------------------------------------------------------------------
// Polynomial grammar (multivariate, for zero-sets and quotient operations).
// ---------------------------------------------------------------------------

/// Parse a polynomial over variables `x` (≡ `x1`) and `x1..xn`.
///
/// `arity` forces the variable count; pass `None` to infer it from the
/// highest index used (at least 1).
pub fn parse_poly(text: &str, arity: Option<usize>) -> Result<Poly, ParseError> {
    let mut lx = lex(text)?;
    let node = parse_poly_expr(&mut lx)?;
    if lx.pos != lx.toks.len() {
        return Err(ParseError::syntax(lx.here(), "trailing input"));
    }
    let needed = node.max_var().map(|v| v + 1).unwrap_or(0).max(1);
    let arity = match arity {
        Some(a) => {
            if a < needed {
                return Err(ParseError::out_of_class(
                    0,
                    format!("polynomial uses x{needed} but arity {a} was requested"),
                ));
            }
            a
        }
        None => needed,
    };
    node.to_poly(arity)
}

enum PNode {
    Const(Rat),
    Var(usize),
    Add(Box<PNode>, Box<PNode>),
    Mul(Box<PNode>, Box<PNode>),
    Div(Box<PNode>, Box<PNode>, usize),
    Neg(Box<PNode>),
    Pow(Box<PNode>, u32),
}

impl PNode {
    fn max_var(&self) -> Option<usize> {
        match self {
            PNode::Const(_) => None,
            PNode::Var(v) => Some(*v),
            PNode::Add(a, b) | PNode::Mul(a, b) | PNode::Div(a, b, _) => {
                match (a.max_var(), b.max_var()) {
                    (None, m) | (m, None) => m,
                    (Some(x), Some(y)) => Some(x.max(y)),
                }
            }
            PNode::Neg(a) | PNode::Pow(a, _) => a.max_var(),
        }
    }

    fn to_poly(&self, arity: usize) -> Result<Poly, ParseError> {
        Ok(match self {
            PNode::Const(c) => Poly::constant(arity, c.clone()),
            PNode::Var(v) => Poly::var(arity, *v),
            PNode::Add(a, b) => a.to_poly(arity)?.add(&b.to_poly(arity)?),
            PNode::Mul(a, b) => a.to_poly(arity)?.mul(&b.to_poly(arity)?),
            PNode::Div(a, b, pos) => {
                let den = b.to_poly(arity)?;
                match den.as_constant() {
                    Some(c) if !c.is_zero() => a.to_poly(arity)?.scale(&(Rat::one() / c)),
                    _ => {
                        return Err(ParseError::out_of_class(
                            *pos,
                            "polynomial grammar allows division by nonzero constants only",
                        ))
                    }
                }
            }
            PNode::Neg(a) => a.to_poly(arity)?.neg(),
            PNode::Pow(a, n) => a.to_poly(arity)?.pow(*n),
        })
    }
}

fn parse_poly_expr(lx: &mut Lexer) -> Result<PNode, ParseError> {
    let mut acc = parse_poly_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Punct('+')) => {
                lx.pos += 1;
                acc = PNode::Add(Box::new(acc), Box::new(parse_poly_term(lx)?));
            }
            Some(Tok::Punct('-')) => {
                lx.pos += 1;
                acc = PNode::Add(
                    Box::new(acc),
                    Box::new(PNode::Neg(Box::new(parse_poly_term(lx)?))),
                );
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_poly_term(lx: &mut Lexer) -> Result<PNode, ParseError> {
    let mut acc = parse_poly_unary(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Punct('*')) => {
                lx.pos += 1;
                acc = PNode::Mul(Box::new(acc), Box::new(parse_poly_unary(lx)?));
            }
            Some(Tok::Punct('/')) => {
                let pos = lx.here();
                lx.pos += 1;
                acc = PNode::Div(Box::new(acc), Box::new(parse_poly_unary(lx)?), pos);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_poly_unary(lx: &mut Lexer) -> Result<PNode, ParseError> {
    match lx.peek() {
        Some(Tok::Punct('-')) => {
            lx.pos += 1;
            Ok(PNode::Neg(Box::new(parse_poly_unary(lx)?)))
        }
        Some(Tok::Punct('+')) => {
            lx.pos += 1;
            parse_poly_unary(lx)
        }
        _ => parse_poly_power(lx),
    }
}

fn parse_poly_power(lx: &mut Lexer) -> Result<PNode, ParseError> {
    let base = parse_poly_atom(lx)?;
    if !lx.at_punct('^') {
        return Ok(base);
    }
    lx.pos += 1;
    let pos = lx.here();
    let n: u32 = match lx.bump() {
        Some(Tok::Num(s)) if !s.contains('.') => s
            .parse()
            .map_err(|_| ParseError::out_of_class(pos, "exponent too large"))?,
        _ => {
            return Err(ParseError::out_of_class(
                pos,
                "polynomial exponents must be nonnegative integers",
            ))
        }
    };
    Ok(PNode::Pow(Box::new(base), n))
}

fn parse_poly_atom(lx: &mut Lexer) -> Result<PNode, ParseError> {
    let pos = lx.here();
    match lx.bump() {
        Some(Tok::Num(s)) => {
            let r = parse_decimal(&s)
                .ok_or_else(|| ParseError::syntax(pos, format!("bad number '{s}'")))?;
            Ok(PNode::Const(r))
        }
        Some(Tok::Ident(name)) => {
            if name == "x" {
                return Ok(PNode::Var(0));
            }
            if let Some(rest) = name.strip_prefix('x') {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    let idx: usize = rest
                        .parse()
                        .map_err(|_| ParseError::syntax(pos, "variable index too large"))?;
                    if idx == 0 {
                        return Err(ParseError::syntax(pos, "variables are numbered from x1"));
                    }
                    return Ok(PNode::Var(idx - 1));
                }
            }
            Err(ParseError::syntax(
                pos,
                format!("unknown name '{name}' in polynomial"),
            ))
        }
        Some(Tok::Punct('(')) => {
            let e = parse_poly_expr(lx)?;
            lx.eat_punct(')')?;
            Ok(e)
        }
        Some(t) => Err(ParseError::syntax(pos, format!("unexpected token {t:?}"))),
        None => Err(ParseError::syntax(pos, "unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat::{rat, rat_i};
    use super::*;

    #[test]
    fn parses_polynomials_to_leaves() {
        let e = parse("x^2 - 3*x").unwrap();
        match &e {
            Expr::Poly(p) => {
                assert_eq!(p.coeff(2), rat_i(1));
                assert_eq!(p.coeff(1), rat_i(-3));
            }
            other => panic!("expected a polynomial leaf, got {other:?}"),
        }
    }

    #[test]
    fn parses_rational_functions() {
        let e = parse("(x-1)/(x+1)").unwrap();
        match &e {
            Expr::Rational(r) => {
                assert_eq!(r.numerator().to_string(), "x - 1");
                assert_eq!(r.denominator().to_string(), "x + 1");
            }
            other => panic!("expected a rational leaf, got {other:?}"),
        }
    }

    #[test]
    fn parses_bump_and_step() {
        let e = parse("bump(x; 0, 1, 2)").unwrap();
        assert!(matches!(e, Expr::Bump(_)));
        let s = parse("step(x; -1/2, 1/2)").unwrap();
        assert!(matches!(s, Expr::Step { .. }));
        assert!(parse("bump(x; 0, 2, 1)").is_err());
    }

    #[test]
    fn parses_piecewise_with_neg_inf_edge() {
        let e = parse("piecewise(-inf: 0, 0: x-5)").unwrap();
        match &e {
            Expr::Piecewise(ps) => {
                assert_eq!(ps.len(), 2);
                assert_eq!(ps[0].0, PieceStart::NegInf);
                assert_eq!(ps[1].0, PieceStart::At(rat_i(0)));
            }
            other => panic!("expected piecewise, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("x +") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse("x^1.5"),
            Err(ParseError::OutOfClass { .. })
        ));
    }

    #[test]
    fn decimal_rationals_are_exact() {
        let e = parse("0.25*x").unwrap();
        match &e {
            Expr::Poly(p) => assert_eq!(p.coeff(1), rat(1, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poly_grammar_multivariate() {
        let p = parse_poly("x1*x2 + x1^2", None).unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(p.eval(&[rat_i(2), rat_i(3)]), rat_i(10));
        // 'x' is x1.
        let q = parse_poly("x^3 - x", None).unwrap();
        assert_eq!(q.arity(), 1);
        assert!(parse_poly("x1/x2", None).is_err());
        assert!(parse_poly("x1/2", None).is_ok());
    }

    #[test]
    fn print_parse_round_trip_is_identity() {
        for src in [
            "x^2 - 3*x",
            "(x-1)/(x+1)",
            "bump(x; 0, 1, 2)",
            "step(x; 0, 1)",
            "piecewise(-inf: 0, 0: x-5)",
            "piecewise(0: 0, 1: x)",
            "1 + 2*bump(x; 0, 1, 2) - x",
            "gate(x)",
            "gate(1-x; 1/x^2)",
            "x^-2",
            "D(bump(x; 0, 1, 2))",
        ] {
            let once = parse(src).unwrap();
            let twice = parse(&once.to_string()).unwrap();
            assert_eq!(once, twice, "round trip failed for {src}: printed {once}");
        }
    }
}
