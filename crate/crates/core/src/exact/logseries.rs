use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::series::{TruncatedSeries, Var};
use crate::error::Result;

/// `regular + log_coeff·log v` with a single power of the logarithm.
///
/// The logarithm is formal: only `θ(log v) = 1` is ever used.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    regular: TruncatedSeries,
    log_coeff: TruncatedSeries,
}

impl LogSeries {
    /// Both parts are truncated to their common order.
    pub fn new(regular: TruncatedSeries, log_coeff: TruncatedSeries) -> Self {
        let o = regular.order().min(log_coeff.order());
        LogSeries {
            regular: regular.truncate(o),
            log_coeff: log_coeff.truncate(o),
        }
    }

    pub fn regular_only(regular: TruncatedSeries) -> Self {
        let z = TruncatedSeries::zero(regular.var(), regular.order());
        LogSeries::new(regular, z)
    }

    pub fn regular(&self) -> &TruncatedSeries {
        &self.regular
    }

    pub fn log_coeff(&self) -> &TruncatedSeries {
        &self.log_coeff
    }

    pub fn order(&self) -> i64 {
        self.regular.order()
    }

    pub fn var(&self) -> Var {
        self.regular.var()
    }

    /// `θ(f + g log v) = θf + g + θg·log v`.
    pub fn theta(&self) -> Self {
        LogSeries::new(
            &self.regular.theta() + &self.log_coeff,
            self.log_coeff.theta(),
        )
    }

    pub fn mul_series(&self, s: &TruncatedSeries) -> Self {
        LogSeries::new(&self.regular * s, &self.log_coeff * s)
    }

    pub fn div_series(&self, s: &TruncatedSeries) -> Result<Self> {
        let inv = s.inverse()?;
        Ok(self.mul_series(&inv))
    }

    pub fn is_zero(&self) -> bool {
        self.regular.is_zero() && self.log_coeff.is_zero()
    }
}

impl Add for &LogSeries {
    type Output = LogSeries;
    fn add(self, rhs: &LogSeries) -> LogSeries {
        LogSeries::new(&self.regular + &rhs.regular, &self.log_coeff + &rhs.log_coeff)
    }
}

impl Sub for &LogSeries {
    type Output = LogSeries;
    fn sub(self, rhs: &LogSeries) -> LogSeries {
        LogSeries::new(&self.regular - &rhs.regular, &self.log_coeff - &rhs.log_coeff)
    }
}

impl Neg for &LogSeries {
    type Output = LogSeries;
    fn neg(self) -> LogSeries {
        LogSeries::new(-&self.regular, -&self.log_coeff)
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] + [{}]*log({})",
            self.regular,
            self.log_coeff,
            self.var()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn theta_of_log() {
        let l = LogSeries::new(
            TruncatedSeries::zero(Var::X, 5),
            TruncatedSeries::one(Var::X, 5),
        );
        let t = l.theta();
        assert_eq!(t.regular(), &TruncatedSeries::one(Var::X, 5));
        assert!(t.log_coeff().is_zero());
    }

    #[test]
    fn theta_mixes_parts() {
        // θ(x log x) = x + x log x
        let x = TruncatedSeries::from_ints(Var::X, &[0, 1], 4);
        let l = LogSeries::new(TruncatedSeries::zero(Var::X, 4), x.clone());
        let t = l.theta();
        assert_eq!(t.regular(), &x);
        assert_eq!(t.log_coeff(), &x);
        assert_eq!(t.regular().coeff(1), int(1));
    }
}
