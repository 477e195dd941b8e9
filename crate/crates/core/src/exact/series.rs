use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Truncation order used for values known to all orders (polynomials, constants).
pub const EXACT: i64 = i64::MAX / 4;

fn clamp(o: i64) -> i64 {
    o.min(EXACT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Q,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::X => 'x',
            Var::Q => 'q',
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Laurent series `Σ c_k v^k` known exactly for every exponent `k <= order`.
///
/// Only finitely many negative exponents may occur. Every operation derives
/// the order of its result from the orders and valuations of its inputs, so
/// precision is never silently invented. Equality compares coefficients up to
/// the smaller of the two orders.
#[derive(Clone)]
pub struct TruncatedSeries {
    var: Var,
    start: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl TruncatedSeries {
    /// Builds `Σ coeffs[i] v^(start+i)`, dropping anything above `order`.
    pub fn from_coeffs(var: Var, start: i64, mut coeffs: Vec<Rational>, order: i64) -> Self {
        let order = clamp(order);
        let keep = (order - start + 1).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        if lead == coeffs.len() {
            return TruncatedSeries {
                var,
                start: 0,
                coeffs: Vec::new(),
                order,
            };
        }
        coeffs.drain(..lead);
        TruncatedSeries {
            var,
            start: start + lead as i64,
            coeffs,
            order,
        }
    }

    pub fn from_fn(var: Var, start: i64, order: i64, f: impl FnMut(i64) -> Rational) -> Self {
        let coeffs = (start..=order).map(f).collect();
        Self::from_coeffs(var, start, coeffs, order)
    }

    pub fn zero(var: Var, order: i64) -> Self {
        Self::from_coeffs(var, 0, Vec::new(), order)
    }

    pub fn constant(var: Var, c: Rational, order: i64) -> Self {
        Self::from_coeffs(var, 0, vec![c], order)
    }

    pub fn one(var: Var, order: i64) -> Self {
        Self::constant(var, Rational::one(), order)
    }

    /// `c·v^k`, exact.
    pub fn monomial(var: Var, c: Rational, k: i64) -> Self {
        Self::from_coeffs(var, k, vec![c], EXACT)
    }

    pub fn variable(var: Var) -> Self {
        Self::monomial(var, Rational::one(), 1)
    }

    pub fn from_poly(var: Var, p: &Poly, order: i64) -> Self {
        Self::from_coeffs(var, 0, p.coeffs().to_vec(), order)
    }

    pub fn from_ints(var: Var, cs: &[i64], order: i64) -> Self {
        Self::from_coeffs(var, 0, cs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Lowest stored exponent (0 for the zero series).
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Stored coefficients, beginning at exponent [`start`](Self::start).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Rational {
        if k < self.start {
            return Rational::zero();
        }
        self.coeffs
            .get((k - self.start) as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficients for exponents `from..=to`, zero-filled.
    pub fn coeff_range(&self, from: i64, to: i64) -> Vec<Rational> {
        (from..=to).map(|k| self.coeff(k)).collect()
    }

    /// Exponent of the first nonzero coefficient; `None` when the series
    /// vanishes through its order.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    fn val_or_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.order.saturating_add(1))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::from_coeffs(self.var, self.start, self.coeffs.clone(), self.order.min(order))
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            var: self.var,
            start: if self.coeffs.is_empty() { 0 } else { self.start + k },
            coeffs: self.coeffs.clone(),
            order: clamp(self.order.saturating_add(k)),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(
            self.var,
            self.start,
            self.coeffs.iter().map(|a| a * c).collect(),
            self.order,
        )
    }

    pub fn map_coeffs(&self, f: impl Fn(i64, &Rational) -> Rational) -> Self {
        Self::from_coeffs(
            self.var,
            self.start,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| f(self.start + i as i64, c))
                .collect(),
            self.order,
        )
    }

    /// `d/dv`; the order drops by one.
    pub fn derivative(&self) -> Self {
        self.map_coeffs(|k, c| c * int(k)).shift(-1)
    }

    /// `θ = v·d/dv`; the order is unchanged.
    pub fn theta(&self) -> Self {
        self.map_coeffs(|k, c| c * int(k))
    }

    /// Term-by-term primitive with zero constant term.
    pub fn integrate(&self) -> Result<Self> {
        if !self.coeff(-1).is_zero() {
            return Err(Error::Domain {
                op: "integrate",
                what: "series has a residue term".into(),
            });
        }
        Ok(self
            .map_coeffs(|k, c| if k == -1 { Rational::zero() } else { c / int(k + 1) })
            .shift(1))
    }

    fn check_var(&self, other: &Self) {
        assert_eq!(
            self.var, other.var,
            "series in different variables combined"
        );
    }

    /// Multiplicative inverse. The result has valuation `-v` and order
    /// `order - 2v` where `v` is the valuation of `self`.
    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::NotInvertible { order: self.order })?;
        if self.coeffs.len() == 1 {
            let c = Rational::one() / &self.coeffs[0];
            let order = if self.is_exact() { EXACT } else { self.order - 2 * v };
            return Ok(Self::from_coeffs(self.var, -v, vec![c], order));
        }
        if self.is_exact() {
            return Err(Error::Domain {
                op: "inverse",
                what: "non-monomial series without a truncation order".into(),
            });
        }
        let n = (self.order - v).max(-1);
        let a0inv = Rational::one() / &self.coeffs[0];
        let mut b: Vec<Rational> = Vec::with_capacity((n + 1).max(0) as usize);
        for m in 0..=n {
            if m == 0 {
                b.push(a0inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            let top = (m as usize).min(self.coeffs.len() - 1);
            for k in 1..=top {
                acc += &self.coeffs[k] * &b[m as usize - k];
            }
            b.push(-acc * &a0inv);
        }
        Ok(Self::from_coeffs(self.var, -v, b, self.order - 2 * v))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut result = Self::one(self.var, EXACT);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// `exp(self)` for a series with positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.val_or_bound() < 1 {
            return Err(Error::Domain {
                op: "exp",
                what: "argument must have positive valuation".into(),
            });
        }
        if self.is_exact() && !self.is_zero() {
            return Err(Error::Domain {
                op: "exp",
                what: "argument has no truncation order".into(),
            });
        }
        let n = self.order;
        let mut e: Vec<Rational> = vec![Rational::one()];
        for m in 1..=n.min(EXACT - 1) {
            if self.is_zero() {
                break;
            }
            let mut acc = Rational::zero();
            for k in 1..=m {
                let sk = self.coeff(k);
                if !sk.is_zero() {
                    acc += sk * int(k) * &e[(m - k) as usize];
                }
            }
            e.push(acc / int(m));
        }
        Ok(Self::from_coeffs(self.var, 0, e, n))
    }

    /// `log(self)` for a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.valuation() != Some(0) || !self.coeffs[0].is_one() {
            return Err(Error::Domain {
                op: "log",
                what: "series must start 1 + O(v)".into(),
            });
        }
        let d = (&self.derivative() / self)?;
        d.integrate()
    }

    /// Substitutes `inner` (positive valuation `v`) for the variable.
    ///
    /// With `self` known through order `N` and `inner` through order `P`, the
    /// result is known through `min((N+1)v - 1, min_k ((k-1)v + P))` where `k`
    /// ranges over the nonzero exponents of `self` other than zero.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let v = inner.val_or_bound();
        if v < 1 {
            return Err(Error::CompositionValuation {
                found: inner.valuation().unwrap_or(0),
            });
        }
        let p = inner.order;
        let mut target = clamp(self.order.saturating_add(1).saturating_mul(v) - 1);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.start + i as i64;
            if k != 0 && !c.is_zero() {
                target = target.min(clamp((k - 1) * v + p));
            }
        }
        let var = inner.var;
        let mut acc = Self::zero(var, target);
        if self.is_zero() {
            return Ok(acc);
        }
        let g = inner.truncate(target);
        let lo = self.start;
        let hi = self.start + self.coeffs.len() as i64 - 1;
        // powers g^k for k in lo..=hi; k < 0 through the inverse
        if hi >= 0 {
            let mut pw = Self::one(var, EXACT);
            for k in 0..=hi {
                if k > 0 {
                    pw = (&pw * &g).truncate(target);
                }
                if k >= lo {
                    let c = self.coeff(k);
                    if !c.is_zero() {
                        acc = &acc + &pw.scale(&c);
                    }
                }
            }
        }
        if lo < 0 {
            let gi = inner.inverse()?;
            let mut pw = Self::one(var, EXACT);
            for k in 1..=(-lo) {
                pw = &pw * &gi;
                let c = self.coeff(-k);
                if !c.is_zero() {
                    acc = &acc + &pw.scale(&c);
                }
            }
        }
        Ok(acc.truncate(target))
    }

    /// Compositional inverse: the series `g` in `var` with `self(g) = var`.
    /// Requires valuation exactly one; the result has the same order.
    pub fn revert(&self, var: Var) -> Result<Self> {
        if self.valuation() != Some(1) {
            return Err(Error::InversionValuation {
                found: self.valuation().unwrap_or(self.order + 1),
            });
        }
        let n = self.order;
        if self.is_exact() {
            return Err(Error::Domain {
                op: "revert",
                what: "series has no truncation order".into(),
            });
        }
        let a1inv = Rational::one() / &self.coeffs[0];
        let mut b = vec![Rational::zero(), a1inv.clone()];
        for m in 2..=n {
            let g = Self::from_coeffs(var, 0, b.clone(), m);
            let fg = self.compose(&g)?;
            // [y^m] f(g) = a1·b_m + (terms fixed by b_1..b_{m-1}); b_m is zero here
            b.push(-fg.coeff(m) * &a1inv);
        }
        Ok(Self::from_coeffs(var, 0, b, n))
    }

    /// First exponent, up to the common order, where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let o = self.order.min(other.order);
        let lo = self.start.min(other.start);
        let hi = (self.start + self.coeffs.len() as i64)
            .max(other.start + other.coeffs.len() as i64)
            .min(o.saturating_add(1));
        (lo..hi).find(|&k| self.coeff(k) != other.coeff(k))
    }

    /// Returns `Ok` when the series agree through their common order, or a
    /// mismatch error naming the first differing exponent.
    pub fn assert_agrees(&self, other: &Self, name: &str) -> Result<()> {
        match self.first_difference(other) {
            None => Ok(()),
            Some(k) => Err(Error::Mismatch {
                name: name.to_string(),
                exponent: k,
            }),
        }
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.first_difference(other).is_none()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.start + i as i64;
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "{v}")?;
                    } else {
                        write!(f, "{v}^{k}")?;
                    }
                }
            }
        }
        if !self.is_exact() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "O({v}^{})", self.order + 1)?;
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_var(rhs);
        let order = self.order.min(rhs.order);
        if self.is_zero() {
            return rhs.truncate(order);
        }
        if rhs.is_zero() {
            return self.truncate(order);
        }
        let lo = self.start.min(rhs.start);
        let hi = (self.start + self.coeffs.len() as i64)
            .max(rhs.start + rhs.coeffs.len() as i64)
            .min(order.saturating_add(1));
        let coeffs = (lo..hi).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        TruncatedSeries::from_coeffs(self.var, lo, coeffs, order)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            var: self.var,
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_var(rhs);
        let order = clamp(
            self.order
                .saturating_add(rhs.val_or_bound())
                .min(rhs.order.saturating_add(self.val_or_bound())),
        );
        if self.is_zero() || rhs.is_zero() {
            return TruncatedSeries::zero(self.var, order);
        }
        let start = self.start + rhs.start;
        let len = ((order - start + 1).max(0) as usize)
            .min(self.coeffs.len() + rhs.coeffs.len() - 1);
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries::from_coeffs(self.var, start, out, order)
    }
}

impl Div for &TruncatedSeries {
    type Output = Result<TruncatedSeries>;
    fn div(self, rhs: &TruncatedSeries) -> Result<TruncatedSeries> {
        Ok(self * &rhs.inverse()?)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $out:ty) => {
        impl $tr for TruncatedSeries {
            type Output = $out;
            fn $m(self, rhs: TruncatedSeries) -> $out {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add, TruncatedSeries);
forward_owned!(Sub, sub, TruncatedSeries);
forward_owned!(Mul, mul, TruncatedSeries);
forward_owned!(Div, div, Result<TruncatedSeries>);

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn s(cs: &[i64], order: i64) -> TruncatedSeries {
        TruncatedSeries::from_ints(Var::Q, cs, order)
    }

    #[test]
    fn difference_of_squares() {
        let a = s(&[1, 1], EXACT);
        let b = s(&[1, -1], EXACT);
        assert_eq!((&a * &b).coeffs(), &[int(1), int(0), int(-1)]);
        assert!((&a * &b).is_exact());
    }

    #[test]
    fn geometric_series_by_composition() {
        let f = s(&[1, 1, 1, 1], 3); // 1/(1-u) through order 3
        let u = TruncatedSeries::variable(Var::Q);
        let out = f.compose(&u).unwrap();
        assert_eq!(out.order(), 3);
        assert_eq!(out.coeffs(), &[int(1), int(1), int(1), int(1)]);
    }

    #[test]
    fn reversion_of_quadratic() {
        let f = s(&[0, 1, 1], 6).with_var(Var::X);
        let g = f.revert(Var::Q).unwrap();
        // Catalan numbers with alternating sign
        assert_eq!(g.coeff_range(1, 6), [1, -1, 2, -5, 14, -42].map(int).to_vec());
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn reversion_needs_valuation_one() {
        assert_eq!(
            s(&[0, 0, 1], 5).revert(Var::X),
            Err(Error::InversionValuation { found: 2 })
        );
        assert!(matches!(s(&[1, 1], 5).revert(Var::X), Err(Error::InversionValuation { .. })));
    }

    #[test]
    fn laurent_inverse_tracks_order() {
        let a = s(&[0, 1, 1], 4); // q + q^2 through q^4
        let inv = a.inverse().unwrap();
        assert_eq!(inv.start(), -1);
        assert_eq!(inv.order(), 2);
        assert_eq!(inv.coeff_range(-1, 2), [1, -1, 1, -1].map(int).to_vec());
    }

    #[test]
    fn exp_and_log_are_inverse() {
        let a = TruncatedSeries::from_coeffs(Var::X, 1, vec![rat(1, 2), rat(-3, 7), int(5)], 8);
        let back = a.exp().unwrap().log().unwrap();
        assert_eq!(back, a);
        assert_eq!(back.order(), 8);
    }

    #[test]
    fn order_zero_is_just_the_constant() {
        let a = s(&[1, 5, 7], 0);
        assert_eq!(a.coeffs(), &[int(1)]);
        assert_eq!(a.to_string(), "1 + O(q^1)");
    }

    #[test]
    fn compose_laurent_outer() {
        // 1/u with u = q + q^2  ->  1/q - 1 + q - ...
        let f = TruncatedSeries::monomial(Var::X, int(1), -1);
        let u = s(&[0, 1, 1], 5);
        let out = f.compose(&u).unwrap();
        assert_eq!(out, u.inverse().unwrap());
        assert_eq!(out.order(), 3);
    }
}
