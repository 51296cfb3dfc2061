//! Expression core: exact scalars, polynomials, rational functions, and the
//! expression trees every other module manipulates.

mod diff;
mod eval;
mod parser;
mod poly;
mod printer;
mod rat;
mod rational;
mod tree;

pub use diff::{differentiate, differentiate_n};
pub use eval::{gate_underflow_threshold, EvalError, ExactEval};
pub use parser::{parse, parse_poly, ParseError};
pub use poly::Poly;
pub use rat::{
    midpoint, parse_decimal, rat, rat_from_f64, rat_i, rat_one, rat_sign, rat_to_f64, rat_zero,
    Rat,
};
pub use rational::RationalFunc;
pub use tree::{bump_spec, BumpSpec, Expr, ExprError, PieceStart};
