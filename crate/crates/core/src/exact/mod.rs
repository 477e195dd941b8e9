//! Exact arithmetic over the rationals: polynomials, rational functions and
//! truncated series in one variable.

pub mod logseries;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;
pub mod yseries;

pub use logseries::LogSeries;
pub use parse::parse_ratfunc;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{int, parse_rational, rat, Rational};
pub use series::{TruncatedSeries, Var, EXACT};
pub use yseries::YSeries;
