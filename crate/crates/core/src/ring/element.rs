use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::generator::{Generator, Monomial, TensorType};
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalFunction};

/// A monomial together with the tensor type carried by its coefficient.
///
/// Plain scalar coefficients have type [`TensorType::SCALAR`]; model data such
/// as lift tensors attach their own type so weight checks stay meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub mono: Monomial,
    pub ctype: TensorType,
}

impl TermKey {
    pub fn scalar(mono: Monomial) -> Self {
        TermKey {
            mono,
            ctype: TensorType::SCALAR,
        }
    }

    pub fn tensor_type(&self) -> TensorType {
        self.mono.tensor_type() + self.ctype
    }
}

/// Polynomial in ring generators with rational-function coefficients and a
/// declared tensor type.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ttype: TensorType,
    terms: BTreeMap<TermKey, RationalFunction>,
}

impl RingElement {
    pub fn zero(ttype: TensorType) -> Self {
        RingElement {
            ttype,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(RationalFunction::one())
    }

    pub fn constant(c: RationalFunction) -> Self {
        Self::term(c, TensorType::SCALAR, Monomial::one())
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(RationalFunction::constant(c))
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(RationalFunction::one(), TensorType::SCALAR, Monomial::of(g))
    }

    /// A single term `c·mono` whose coefficient carries `ctype`.
    pub fn term(c: RationalFunction, ctype: TensorType, mono: Monomial) -> Self {
        let key = TermKey { mono, ctype };
        let mut e = RingElement::zero(key.tensor_type());
        e.add_term(key, c);
        e
    }

    pub fn tensor_type(&self) -> TensorType {
        self.ttype
    }

    pub fn rank(&self) -> i32 {
        self.ttype.rank
    }

    pub fn weight(&self) -> i32 {
        self.ttype.weight
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff_of(&self, key: &TermKey) -> RationalFunction {
        self.terms.get(key).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// Coefficient of a scalar-typed monomial.
    pub fn coeff(&self, mono: &Monomial) -> RationalFunction {
        self.coeff_of(&TermKey::scalar(mono.clone()))
    }

    pub fn add_term(&mut self, key: TermKey, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Reinterprets the declared type; used for the additive zero.
    pub fn with_type(mut self, ttype: TensorType) -> Self {
        self.ttype = ttype;
        self
    }

    fn join_type(&self, other: &Self) -> TensorType {
        if self.is_zero() {
            return other.ttype;
        }
        if !other.is_zero() {
            assert_eq!(
                self.ttype, other.ttype,
                "adding ring elements of different tensor type"
            );
        }
        self.ttype
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return RingElement::zero(self.ttype);
        }
        RingElement {
            ttype: self.ttype,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RingElement::zero(self.ttype);
        }
        RingElement {
            ttype: self.ttype,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect(),
        }
    }

    /// Multiplies by the single term `c·mono` with coefficient type `ctype`.
    pub fn mul_term(&self, c: &RationalFunction, ctype: TensorType, mono: &Monomial) -> Self {
        let ttype = self.ttype + ctype + mono.tensor_type();
        let mut out = RingElement::zero(ttype);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            let key = TermKey {
                mono: k.mono.mul(mono),
                ctype: k.ctype + ctype,
            };
            out.add_term(key, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RingElement::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to a generator.
    pub fn partial(&self, g: &Generator) -> Self {
        let mut out = RingElement::zero(self.ttype - g.tensor_type());
        for (k, v) in &self.terms {
            let e = k.mono.exponent(g);
            if e == 0 {
                continue;
            }
            let mono = k.mono.div_gen(g, 1).expect("exponent checked");
            out.add_term(
                TermKey {
                    mono,
                    ctype: k.ctype,
                },
                v.scale(&Rational::from_integer(e.into())),
            );
        }
        out
    }

    /// Replaces every occurrence of `g` by `image`, which must carry the
    /// tensor type of `g`.
    pub fn substitute(&self, g: &Generator, image: &RingElement) -> Self {
        assert!(
            image.is_zero() || image.ttype == g.tensor_type(),
            "substitution changes the tensor type of {g}"
        );
        let mut powers: Vec<RingElement> = vec![RingElement::one()];
        let mut out = RingElement::zero(self.ttype);
        for (k, v) in &self.terms {
            let e = k.mono.exponent(g);
            if e == 0 {
                out.add_term(k.clone(), v.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * image;
                powers.push(next);
            }
            let rest = k.mono.div_gen(g, e).expect("exponent checked");
            let part = powers[e as usize].mul_term(v, k.ctype, &rest);
            out = &out + &part.with_type(self.ttype);
        }
        out
    }

    /// Largest total exponent of generators matching `pred` in any term.
    pub fn max_degree(&self, pred: impl Fn(&Generator) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|k| k.mono.degree_where(&pred))
            .max()
            .unwrap_or(0)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Self {
        RingElement {
            ttype: self.ttype,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Verifies that every term has the declared tensor type.
    pub fn check_weight(&self) -> Result<()> {
        for k in self.terms.keys() {
            let t = k.tensor_type();
            if t != self.ttype {
                return Err(Error::Consistency {
                    equation: "weight".into(),
                    detail: format!(
                        "term {} has {} but the element declares {}",
                        k.mono, t, self.ttype
                    ),
                });
            }
        }
        Ok(())
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms.values().all(RationalFunction::is_constant)
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let ttype = self.join_type(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone().with_type(ttype);
        for (k, v) in &small.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            ttype: self.ttype,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self + &(-rhs)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero(self.ttype + rhs.ttype);
        for (ka, va) in &self.terms {
            for (kb, vb) in &rhs.terms {
                out.add_term(
                    TermKey {
                        mono: ka.mono.mul(&kb.mono),
                        ctype: ka.ctype + kb.ctype,
                    },
                    va * vb,
                );
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, v)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if k.mono.is_one() {
                write!(f, "({v})")?;
            } else {
                write!(f, "({v})*{}", k.mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement[{}]({self})", self.ttype)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn g(x: Generator) -> RingElement {
        RingElement::generator(x)
    }

    #[test]
    fn weight_check_accepts_contracted_product() {
        let e = &g(Generator::sij(0, 0)) * &g(Generator::cxxx());
        assert_eq!(e.weight(), 0);
        assert!(e.check_weight().is_ok());
    }

    #[test]
    fn weight_check_rejects_wrong_declaration() {
        let ss = &g(Generator::S) * &g(Generator::S);
        let bad = ss.clone().with_type(TensorType::new(0, -2));
        assert!(bad.check_weight().is_err());
        assert!(ss.check_weight().is_ok());
    }

    #[test]
    fn partial_derivative_counts_multiplicity() {
        let e = g(Generator::S).pow(3).scale_rat(&rat(1, 3));
        let d = e.partial(&Generator::S);
        assert_eq!(d, g(Generator::S).pow(2));
    }

    #[test]
    fn substitution_expands_powers() {
        // S^2 with S -> 3S
        let s2 = g(Generator::S).pow(2);
        let lin = &g(Generator::S) + &g(Generator::S).scale_rat(&int(2));
        let out = s2.substitute(&Generator::S, &lin);
        assert_eq!(out, g(Generator::S).pow(2).scale_rat(&int(9)));
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = g(Generator::S);
        assert!((&a - &a).is_zero());
    }
}
