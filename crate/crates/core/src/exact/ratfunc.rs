use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use super::series::{TruncatedSeries, Var};
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials in `x`.
///
/// The denominator is monic and coprime to the numerator; the zero function is
/// `0/1`. Constants take a fast path that skips the gcd.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = Rational::one() / den.coeff(0);
            return RationalFunction {
                num: num.scale(&c),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        let lead = den.leading().unwrap().clone();
        let inv = Rational::one() / lead;
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn derivative(&self) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    /// Logarithmic derivative `f'/f`.
    pub fn log_derivative(&self) -> Result<Self> {
        &self.derivative() / self
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitutes `x -> inner(z)` for another rational function.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self> {
        // Homogenize: p(a/b) = P(a, b) / b^deg p.
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let hom = |p: &Poly, deg: usize| -> Poly {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = &inner.num.pow(k as u32) * &inner.den.pow((deg - k) as u32);
                acc = &acc + &term.scale(c);
            }
            acc
        };
        let n = hom(&self.num, dn);
        let d = hom(&self.den, dd);
        let (n, d) = if dn >= dd {
            (n, &d * &inner.den.pow((dn - dd) as u32))
        } else {
            (&n * &inner.den.pow((dd - dn) as u32), d)
        };
        Self::new(n, d)
    }

    /// Laurent expansion at `x = 0` through exponent `order`.
    pub fn expand(&self, var: Var, order: i64) -> TruncatedSeries {
        let v = self.den.valuation().unwrap_or(0);
        let span = order + v as i64 + 1;
        let num = TruncatedSeries::from_poly(var, &self.num, span.max(0) - 1);
        let den_coeffs: Vec<Rational> = self.den.coeffs()[v..].to_vec();
        let den = TruncatedSeries::from_poly(var, &Poly::new(den_coeffs), span.max(0) - 1);
        let q = (&num / &den).expect("denominator unit after shifting out its valuation");
        q.shift(-(v as i64)).truncate(order)
    }

    /// Evaluates at a series argument, `self(s)`.
    pub fn eval_series(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let n = poly_at_series(&self.num, s);
        let d = poly_at_series(&self.den, s);
        &n / &d
    }
}

fn poly_at_series(p: &Poly, s: &TruncatedSeries) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(s.var(), s.order().max(s.start()));
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * s) + &TruncatedSeries::constant(s.var(), c.clone(), i64::MAX / 4);
    }
    acc
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &rhs.num);
            }
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = Result<RationalFunction>;
    fn div(self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction::reduce(
            &self.num * &rhs.den,
            &self.den * &rhs.num,
        ))
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_ratfunc;
    use crate::exact::rational::{int, rat};

    fn rf(s: &str) -> RationalFunction {
        parse_ratfunc(s).unwrap()
    }

    #[test]
    fn reduces_common_factor() {
        assert_eq!(rf("(x^2 - x)/x"), rf("x - 1"));
    }

    #[test]
    fn yukawa_derivative_by_quotient_rule() {
        let c = rf("1/((1-432*x)*x)");
        let expected = rf("(864*x - 1)/((1-432*x)^2*x^2)");
        assert_eq!(c.derivative(), expected);
        // Cross-check against term-by-term differentiation of the expansion.
        let lhs = c.derivative().expand(Var::X, 6);
        let rhs = c.expand(Var::X, 7).derivative();
        assert_eq!(lhs.first_difference(&rhs), None);
    }

    #[test]
    fn geometric_expansion() {
        let s = rf("1/(1-432*x)").expand(Var::X, 2);
        assert_eq!(s.coeffs(), &[int(1), int(432), int(432 * 432)]);
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn laurent_expansion_starts_below_zero() {
        let s = rf("1/((1-432*x)*x)").expand(Var::X, 1);
        assert_eq!(s.start(), -1);
        assert_eq!(s.coeff(-1), int(1));
        assert_eq!(s.coeff(0), int(432));
        assert_eq!(s.coeff(1), int(432 * 432));
    }

    #[test]
    fn compose_with_reciprocal() {
        // x/25 under x = 1/z becomes 1/(25 z)
        let z = rf("1/x");
        assert_eq!(rf("x/25").compose(&z).unwrap(), rf("1/(25*x)"));
        assert_eq!(rf("(x+1)/(x-3)").compose(&z).unwrap(), rf("(1+x)/(1-3*x)"));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(&rf("x") / &RationalFunction::zero(), Err(Error::DivisionByZero));
        assert_eq!(rf("x").scale(&rat(0, 1)), RationalFunction::zero());
    }
}
