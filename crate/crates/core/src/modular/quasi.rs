use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::qexp::eisenstein;
use crate::error::Result;
use crate::exact::{int, rat, Rational, TruncatedSeries, Var, YSeries, EXACT};

/// Polynomial over the rationals in `N` weighted symbols.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
struct MPoly<const N: usize> {
    terms: BTreeMap<[u32; N], Rational>,
}

impl<const N: usize> MPoly<N> {
    fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    fn monomial(c: Rational, e: [u32; N]) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: [u32; N], c: Rational) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for k in 0..N {
                    e[k] += eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn pow(&self, n: u32) -> Self {
        let mut one = [0u32; N];
        one.iter_mut().for_each(|x| *x = 0);
        let mut acc = Self::monomial(Rational::one(), one);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = *e;
            d[var] -= 1;
            out.add_term(d, c * int(e[var] as i64));
        }
        out
    }

    fn weight_of(e: &[u32; N], w: &[i32; N]) -> i32 {
        e.iter().zip(w).map(|(a, b)| *a as i32 * b).sum()
    }

    /// Derivation given the images of the symbols.
    fn derive(&self, images: &[Self; N]) -> Self {
        let mut out = Self::zero();
        for var in 0..N {
            let d = self.partial(var);
            if !d.terms.is_empty() {
                out = out.add(&d.mul(&images[var]));
            }
        }
        out
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[&str; N]) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for k in 0..N {
                match e[k] {
                    0 => {}
                    1 => write!(f, "*{}", names[k])?,
                    p => write!(f, "*{}^{p}", names[k])?,
                }
            }
        }
        Ok(())
    }
}

const QM_WEIGHTS: [i32; 3] = [2, 4, 6];
const AH_WEIGHTS: [i32; 4] = [2, 4, 6, 2];

/// Element of `Q[E2, E4, E6]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuasiModularPoly(MPoly<3>);

impl QuasiModularPoly {
    pub fn zero() -> Self {
        QuasiModularPoly(MPoly::zero())
    }

    pub fn constant(c: Rational) -> Self {
        QuasiModularPoly(MPoly::monomial(c, [0, 0, 0]))
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c·E2^a E4^b E6^c`.
    pub fn monomial(c: Rational, exps: [u32; 3]) -> Self {
        QuasiModularPoly(MPoly::monomial(c, exps))
    }

    pub fn e2() -> Self {
        Self::monomial(Rational::one(), [1, 0, 0])
    }

    pub fn e4() -> Self {
        Self::monomial(Rational::one(), [0, 1, 0])
    }

    pub fn e6() -> Self {
        Self::monomial(Rational::one(), [0, 0, 1])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Rational)> {
        self.0.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuasiModularPoly(self.0.scale(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        QuasiModularPoly(self.0.pow(n))
    }

    /// Common weight of all terms; `None` for mixed weight (zero has weight 0).
    pub fn weight(&self) -> Option<i32> {
        let mut ws = self.0.terms.keys().map(|e| MPoly::weight_of(e, &QM_WEIGHTS));
        let first = ws.next().unwrap_or(0);
        ws.all(|w| w == first).then_some(first)
    }

    /// `q d/dq` through `DE2 = (E2²-E4)/12`, `DE4 = (E2E4-E6)/3`,
    /// `DE6 = (E2E6-E4²)/2`.
    pub fn ramanujan_derive(&self) -> Self {
        let e2 = Self::e2();
        let e4 = Self::e4();
        let e6 = Self::e6();
        let images = [
            (&e2.pow(2) - &e4).scale(&rat(1, 12)).0,
            (&(&e2 * &e4) - &e6).scale(&rat(1, 3)).0,
            (&(&e2 * &e6) - &e4.pow(2)).scale(&rat(1, 2)).0,
        ];
        QuasiModularPoly(self.0.derive(&images))
    }

    /// `∂/∂E2`.
    pub fn partial_e2(&self) -> Self {
        QuasiModularPoly(self.0.partial(0))
    }

    /// Substitutes the Eisenstein `q`-expansions.
    pub fn evaluate(&self, order: i64) -> Result<TruncatedSeries> {
        let es = [
            eisenstein(2, order)?.series,
            eisenstein(4, order)?.series,
            eisenstein(6, order)?.series,
        ];
        Ok(eval_terms(self.0.terms.iter(), &es, Var::Q, order))
    }
}

fn eval_terms<'a, const N: usize>(
    terms: impl Iterator<Item = (&'a [u32; N], &'a Rational)>,
    gens: &[TruncatedSeries; N],
    var: Var,
    order: i64,
) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(var, order);
    for (e, c) in terms {
        let mut t = TruncatedSeries::constant(var, c.clone(), EXACT);
        for k in 0..N {
            for _ in 0..e[k] {
                t = &t * &gens[k];
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// Element of `Q[E2, E4, E6, Y]`; the almost-holomorphic `E2* = E2 - 12Y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlmostHolPoly(MPoly<4>);

impl AlmostHolPoly {
    pub fn zero() -> Self {
        AlmostHolPoly(MPoly::zero())
    }

    pub fn constant(c: Rational) -> Self {
        AlmostHolPoly(MPoly::monomial(c, [0; 4]))
    }

    /// `c·E2^a E4^b E6^c Y^d`.
    pub fn monomial(c: Rational, exps: [u32; 4]) -> Self {
        AlmostHolPoly(MPoly::monomial(c, exps))
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), [0, 0, 0, 1])
    }

    pub fn e2star() -> Self {
        &Self::from_quasi(&QuasiModularPoly::e2()) - &Self::y().scale(&int(12))
    }

    pub fn from_quasi(p: &QuasiModularPoly) -> Self {
        let mut out = MPoly::zero();
        for (e, c) in p.terms() {
            out.add_term([e[0], e[1], e[2], 0], c.clone());
        }
        AlmostHolPoly(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Rational)> {
        self.0.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlmostHolPoly(self.0.scale(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        AlmostHolPoly(self.0.pow(n))
    }

    pub fn weight(&self) -> Option<i32> {
        let mut ws = self.0.terms.keys().map(|e| MPoly::weight_of(e, &AH_WEIGHTS));
        let first = ws.next().unwrap_or(0);
        ws.all(|w| w == first).then_some(first)
    }

    /// `q d/dq` acting on both the quasi-modular part and on `Y`, with
    /// `DY = Y²`.
    pub fn raw_derive(&self) -> Self {
        let q = |p: QuasiModularPoly| Self::from_quasi(&p).0;
        let e2 = QuasiModularPoly::e2();
        let e4 = QuasiModularPoly::e4();
        let e6 = QuasiModularPoly::e6();
        let images = [
            q(e2.ramanujan_derive()),
            q(e4.ramanujan_derive()),
            q(e6.ramanujan_derive()),
            Self::y().pow(2).0,
        ];
        let _ = (e2, e4, e6);
        AlmostHolPoly(self.0.derive(&images))
    }

    /// The weight-raising derivative on almost-holomorphic forms:
    /// `q d/dq - k·Y` on the weight-`k` part.
    pub fn almost_hol_derive(&self) -> Self {
        let raw = self.raw_derive();
        let mut shift = MPoly::zero();
        for (e, c) in &self.0.terms {
            let k = MPoly::weight_of(e, &AH_WEIGHTS);
            let mut e1 = *e;
            e1[3] += 1;
            shift.add_term(e1, c * int(k as i64));
        }
        AlmostHolPoly(raw.0.add(&shift.scale(&int(-1))))
    }

    /// Constant term in `Y`: the map to quasi-modular forms.
    pub fn kz_constant_term(&self) -> QuasiModularPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.0.terms {
            if e[3] == 0 {
                out.add_term([e[0], e[1], e[2]], c.clone());
            }
        }
        QuasiModularPoly(out)
    }

    /// `q`-expansion with `Y` kept formal.
    pub fn evaluate(&self, order: i64) -> Result<YSeries> {
        let es = [
            eisenstein(2, order)?.series,
            eisenstein(4, order)?.series,
            eisenstein(6, order)?.series,
        ];
        let mut by_y: BTreeMap<u32, Vec<([u32; 3], Rational)>> = BTreeMap::new();
        for (e, c) in &self.0.terms {
            by_y.entry(e[3]).or_default().push(([e[0], e[1], e[2]], c.clone()));
        }
        let mut out = YSeries::from_series(TruncatedSeries::zero(Var::Q, order));
        for (d, ts) in by_y {
            let s = eval_terms(ts.iter().map(|(e, c)| (e, c)), &es, Var::Q, order);
            out = &out + &YSeries::monomial(s, d as usize);
        }
        Ok(out)
    }
}

macro_rules! ring_ops {
    ($t:ident) => {
        impl Add for &$t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                $t(self.0.add(&o.0))
            }
        }
        impl Sub for &$t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                $t(self.0.add(&o.0.scale(&int(-1))))
            }
        }
        impl Mul for &$t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                $t(self.0.mul(&o.0))
            }
        }
        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.scale(&int(-1)))
            }
        }
    };
}
ring_ops!(QuasiModularPoly);
ring_ops!(AlmostHolPoly);

impl fmt::Display for QuasiModularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, &["E2", "E4", "E6"])
    }
}

impl fmt::Debug for QuasiModularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuasiModularPoly({self})")
    }
}

impl fmt::Display for AlmostHolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f, &["E2", "E4", "E6", "Y"])
    }
}

impl fmt::Debug for AlmostHolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlmostHolPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramanujan_e2() {
        let d = QuasiModularPoly::e2().ramanujan_derive();
        let expect = (&QuasiModularPoly::e2().pow(2) - &QuasiModularPoly::e4()).scale(&rat(1, 12));
        assert_eq!(d, expect);
        assert!(QuasiModularPoly::one().ramanujan_derive().is_zero());
    }

    #[test]
    fn ramanujan_matches_q_derivative() {
        for p in [QuasiModularPoly::e2(), QuasiModularPoly::e4(), QuasiModularPoly::e6()] {
            let lhs = p.ramanujan_derive().evaluate(20).unwrap();
            let rhs = p.evaluate(20).unwrap().theta();
            assert_eq!(lhs.first_difference(&rhs), None, "{p}");
        }
    }

    #[test]
    fn almost_holomorphic_e2_closes() {
        let s = AlmostHolPoly::e2star();
        let expect = (&s.pow(2) - &AlmostHolPoly::from_quasi(&QuasiModularPoly::e4())).scale(&rat(1, 12));
        assert_eq!(s.almost_hol_derive(), expect);
    }

    #[test]
    fn raw_derivative_of_y() {
        assert_eq!(AlmostHolPoly::y().raw_derive(), AlmostHolPoly::y().pow(2));
    }

    #[test]
    fn constant_term_map() {
        assert_eq!(AlmostHolPoly::e2star().kz_constant_term(), QuasiModularPoly::e2());
        assert!(AlmostHolPoly::y().kz_constant_term().is_zero());
        assert_eq!(
            AlmostHolPoly::e2star().pow(2).kz_constant_term(),
            QuasiModularPoly::e2().pow(2)
        );
    }

    #[test]
    fn weights() {
        assert_eq!((&QuasiModularPoly::e4() * &QuasiModularPoly::e6()).weight(), Some(10));
        assert_eq!((&QuasiModularPoly::e4() + &QuasiModularPoly::e6()).weight(), None);
        assert_eq!(AlmostHolPoly::e2star().almost_hol_derive().weight(), Some(4));
    }
}
