use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::rational::{int, Rational};
use super::series::{TruncatedSeries, Var, EXACT};
use crate::error::{Error, Result};

/// Polynomial in the formal variable `Y` with truncated-series coefficients.
///
/// `Y` stands for `(1/2πi)·1/(t̄ - t)`; it is independent of the holomorphic
/// coordinate except through the derivation rule supplied to
/// [`y_derive`](YSeries::y_derive).
#[derive(Clone)]
pub struct YSeries {
    var: Var,
    coeffs: Vec<TruncatedSeries>,
}

impl YSeries {
    /// Coefficient `coeffs[k]` multiplies `Y^k`.
    pub fn new(var: Var, mut coeffs: Vec<TruncatedSeries>) -> Self {
        while coeffs.last().is_some_and(TruncatedSeries::is_zero) && coeffs.len() > 1 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(TruncatedSeries::zero(var, EXACT));
        }
        YSeries { var, coeffs }
    }

    pub fn from_series(s: TruncatedSeries) -> Self {
        YSeries::new(s.var(), vec![s])
    }

    /// `c·Y^k`.
    pub fn monomial(c: TruncatedSeries, k: usize) -> Self {
        let var = c.var();
        let mut coeffs = vec![TruncatedSeries::zero(var, EXACT); k];
        coeffs.push(c);
        YSeries::new(var, coeffs)
    }

    /// The generator `Y` itself.
    pub fn y(var: Var) -> Self {
        Self::monomial(TruncatedSeries::one(var, EXACT), 1)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeff(&self, k: usize) -> TruncatedSeries {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::zero(self.var, EXACT))
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    /// Degree in `Y` (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Minimum truncation order over the coefficients.
    pub fn order(&self) -> i64 {
        self.coeffs.iter().map(TruncatedSeries::order).min().unwrap_or(EXACT)
    }

    pub fn truncate(&self, order: i64) -> Self {
        YSeries::new(self.var, self.coeffs.iter().map(|c| c.truncate(order)).collect())
    }

    /// Coefficient of `Y^0`: the quotient map by the ideal `(Y)`.
    pub fn y_constant_term(&self) -> TruncatedSeries {
        self.coeffs[0].clone()
    }

    pub fn mul_series(&self, s: &TruncatedSeries) -> Self {
        YSeries::new(self.var, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        YSeries::new(self.var, self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// Extends `∂` from coefficients to `Q[[x]][Y]` with `∂Y = d_rule·Y²`.
    pub fn y_derive(&self, d_rule: &TruncatedSeries) -> Result<Self> {
        let mut out: Vec<TruncatedSeries> = self.coeffs.iter().map(|c| c.derivative()).collect();
        out.push(TruncatedSeries::zero(self.var, EXACT));
        for (k, a) in self.coeffs.iter().enumerate() {
            if k == 0 || a.is_zero() {
                continue;
            }
            let term = (a * d_rule).scale(&int(k as i64));
            out[k + 1] = &out[k + 1] + &term;
        }
        let r = YSeries::new(self.var, out);
        if r.order() < 0 {
            return Err(Error::OrderUnderflow { order: r.order() });
        }
        Ok(r)
    }

    /// Substitutes a series for the coefficient variable in every coefficient.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.compose(inner))
            .collect::<Result<Vec<_>>>()?;
        Ok(YSeries::new(inner.var(), coeffs))
    }

    /// First `(Y-degree, exponent)` where the two disagree through common order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, i64)> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).find_map(|k| {
            self.coeff(k)
                .first_difference(&other.coeff(k))
                .map(|e| (k, e))
        })
    }
}

impl PartialEq for YSeries {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.first_difference(other).is_none()
    }
}

impl Add for &YSeries {
    type Output = YSeries;
    fn add(self, rhs: &YSeries) -> YSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        YSeries::new(self.var, (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &YSeries {
    type Output = YSeries;
    fn sub(self, rhs: &YSeries) -> YSeries {
        self + &(-rhs)
    }
}

impl Neg for &YSeries {
    type Output = YSeries;
    fn neg(self) -> YSeries {
        YSeries::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &YSeries {
    type Output = YSeries;
    fn mul(self, rhs: &YSeries) -> YSeries {
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut out = vec![TruncatedSeries::zero(self.var, EXACT); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        YSeries::new(self.var, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for YSeries {
            type Output = YSeries;
            fn $m(self, rhs: YSeries) -> YSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for YSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*Y")?,
                _ => write!(f, "({c})*Y^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for YSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule() -> TruncatedSeries {
        TruncatedSeries::from_ints(Var::X, &[3, 1, 4, 1, 5], 6)
    }

    #[test]
    fn derive_generator() {
        let y = YSeries::y(Var::X);
        let d = y.y_derive(&rule()).unwrap();
        assert_eq!(d, YSeries::monomial(rule(), 2));
    }

    #[test]
    fn derive_y_squared() {
        let y2 = &YSeries::y(Var::X) * &YSeries::y(Var::X);
        let d = y2.y_derive(&rule()).unwrap();
        assert_eq!(d, YSeries::monomial(rule().scale(&int(2)), 3));
    }

    #[test]
    fn derive_constant_has_no_y() {
        let c = TruncatedSeries::from_ints(Var::X, &[1, 2, 3], 5);
        let d = YSeries::from_series(c.clone()).y_derive(&rule()).unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.y_constant_term(), c.derivative());
    }

    #[test]
    fn underflow_is_reported() {
        let c = TruncatedSeries::from_ints(Var::X, &[1], 0);
        let e = YSeries::from_series(c).y_derive(&rule());
        assert_eq!(e, Err(Error::OrderUnderflow { order: -1 }));
    }

    #[test]
    fn constant_term_examples() {
        let s = TruncatedSeries::from_ints(Var::X, &[3], EXACT);
        let p = YSeries::new(
            Var::X,
            vec![s.clone(), s.scale(&(int(5) / int(3))), TruncatedSeries::one(Var::X, EXACT)],
        );
        assert_eq!(p.y_constant_term(), s);
        assert!(YSeries::y(Var::X).y_constant_term().is_zero());
    }
}
