use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Index of a moduli direction, `0..r`.
pub type Idx = u8;

/// Net lower tensor rank and line-bundle weight of a ring object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TensorType {
    pub rank: i32,
    pub weight: i32,
}

impl TensorType {
    pub const SCALAR: TensorType = TensorType { rank: 0, weight: 0 };

    pub const fn new(rank: i32, weight: i32) -> Self {
        TensorType { rank, weight }
    }
}

impl Add for TensorType {
    type Output = TensorType;
    fn add(self, o: TensorType) -> TensorType {
        TensorType::new(self.rank + o.rank, self.weight + o.weight)
    }
}

impl std::ops::Sub for TensorType {
    type Output = TensorType;
    fn sub(self, o: TensorType) -> TensorType {
        TensorType::new(self.rank - o.rank, self.weight - o.weight)
    }
}

impl std::ops::Mul<i32> for TensorType {
    type Output = TensorType;
    fn mul(self, k: i32) -> TensorType {
        TensorType::new(self.rank * k, self.weight * k)
    }
}

impl fmt::Display for TensorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, weight {})", self.rank, self.weight)
    }
}

/// A symbol of the differential ring. Propagator components carry upper
/// indices, `K` and the n-point symbols lower ones; symmetric index sets are
/// kept sorted so equal symbols compare equal.
///
/// The hatted top propagator coincides with `Sij`, so only `Ŝ^i` and `Ŝ` get
/// their own variants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Sij(Idx, Idx),
    Si(Idx),
    S,
    HatSi(Idx),
    HatS,
    K(Idx),
    C(Vec<Idx>),
    H(Vec<Idx>),
}

impl Generator {
    pub fn sij(i: Idx, j: Idx) -> Self {
        Generator::Sij(i.min(j), i.max(j))
    }

    pub fn c(mut idx: Vec<Idx>) -> Self {
        idx.sort_unstable();
        Generator::C(idx)
    }

    pub fn h(mut idx: Vec<Idx>) -> Self {
        idx.sort_unstable();
        Generator::H(idx)
    }

    /// `C_{xxx}` in one modulus.
    pub fn cxxx() -> Self {
        Generator::C(vec![0, 0, 0])
    }

    pub fn tensor_type(&self) -> TensorType {
        match self {
            Generator::Sij(..) => TensorType::new(-2, -2),
            Generator::Si(_) | Generator::HatSi(_) => TensorType::new(-1, -2),
            Generator::S | Generator::HatS => TensorType::new(0, -2),
            Generator::K(_) => TensorType::new(1, 0),
            Generator::C(i) | Generator::H(i) => TensorType::new(i.len() as i32, 2),
        }
    }

    pub fn is_hatted(&self) -> bool {
        matches!(self, Generator::HatSi(_) | Generator::HatS)
    }

    pub fn is_k(&self) -> bool {
        matches!(self, Generator::K(_))
    }

    /// Propagator-like symbols counted by the Ŝ-degree bound.
    pub fn is_propagator(&self) -> bool {
        matches!(
            self,
            Generator::Sij(..) | Generator::Si(_) | Generator::S | Generator::HatSi(_) | Generator::HatS
        )
    }
}

fn idx_name(i: Idx) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        3 => "w".into(),
        n => format!("[{n}]"),
    }
}

fn idx_list(is: &[Idx]) -> String {
    is.iter().map(|&i| idx_name(i)).collect()
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sij(i, j) => write!(f, "S^{{{}}}", idx_list(&[*i, *j])),
            Generator::Si(i) => write!(f, "S^{{{}}}", idx_name(*i)),
            Generator::S => write!(f, "S"),
            Generator::HatSi(i) => write!(f, "Ŝ^{{{}}}", idx_name(*i)),
            Generator::HatS => write!(f, "Ŝ"),
            Generator::K(i) => write!(f, "K_{{{}}}", idx_name(*i)),
            Generator::C(is) => write!(f, "C_{{{}}}", idx_list(is)),
            Generator::H(is) => write!(f, "h_{{{}}}", idx_list(is)),
        }
    }
}

/// Product of generator powers, stored sorted with positive exponents.
///
/// Ordered by total degree first, then lexicographically on
/// `(generator, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Generator, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn of(g: Generator) -> Self {
        Monomial {
            factors: vec![(g, 1)],
        }
    }

    pub fn from_factors(fs: impl IntoIterator<Item = (Generator, u32)>) -> Self {
        let mut m = Monomial::one();
        for (g, k) in fs {
            m = m.mul_gen(&g, k);
        }
        m
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum()
    }

    pub fn exponent(&self, g: &Generator) -> u32 {
        self.factors
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|p| self.factors[p].1)
            .unwrap_or(0)
    }

    pub fn degree_where(&self, pred: impl Fn(&Generator) -> bool) -> u32 {
        self.factors
            .iter()
            .filter(|(g, _)| pred(g))
            .map(|(_, k)| k)
            .sum()
    }

    pub fn tensor_type(&self) -> TensorType {
        self.factors
            .iter()
            .fold(TensorType::SCALAR, |acc, (g, k)| acc + g.tensor_type() * (*k as i32))
    }

    pub fn mul_gen(&self, g: &Generator, k: u32) -> Monomial {
        if k == 0 {
            return self.clone();
        }
        let mut factors = self.factors.clone();
        match factors.binary_search_by(|(h, _)| h.cmp(g)) {
            Ok(p) => factors[p].1 += k,
            Err(p) => factors.insert(p, (g.clone(), k)),
        }
        Monomial { factors }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (mut a, mut b) = (0, 0);
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        while a < self.factors.len() && b < other.factors.len() {
            let (ga, ka) = &self.factors[a];
            let (gb, kb) = &other.factors[b];
            match ga.cmp(gb) {
                Ordering::Less => {
                    out.push((ga.clone(), *ka));
                    a += 1;
                }
                Ordering::Greater => {
                    out.push((gb.clone(), *kb));
                    b += 1;
                }
                Ordering::Equal => {
                    out.push((ga.clone(), ka + kb));
                    a += 1;
                    b += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[a..]);
        out.extend_from_slice(&other.factors[b..]);
        Monomial { factors: out }
    }

    /// Removes `k` copies of `g`; `None` if fewer are present.
    pub fn div_gen(&self, g: &Generator, k: u32) -> Option<Monomial> {
        let p = self.factors.binary_search_by(|(h, _)| h.cmp(g)).ok()?;
        let have = self.factors[p].1;
        if have < k {
            return None;
        }
        let mut factors = self.factors.clone();
        if have == k {
            factors.remove(p);
        } else {
            factors[p].1 -= k;
        }
        Some(Monomial { factors })
    }

    /// Splits off every factor matching `pred`.
    pub fn split(&self, pred: impl Fn(&Generator) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.factors.iter().cloned().partition(|(g, _)| pred(g));
        (Monomial { factors: a }, Monomial { factors: b })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (n, (g, k)) in self.factors.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *k == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_indices_are_sorted() {
        assert_eq!(Generator::sij(1, 0), Generator::sij(0, 1));
        assert_eq!(Generator::c(vec![2, 0, 1]), Generator::C(vec![0, 1, 2]));
    }

    #[test]
    fn weights_of_generators() {
        let m = Monomial::from_factors([(Generator::sij(0, 0), 1), (Generator::cxxx(), 1)]);
        assert_eq!(m.tensor_type(), TensorType::new(1, 0));
        let ss = Monomial::from_factors([(Generator::S, 2)]);
        assert_eq!(ss.tensor_type().weight, -4);
    }

    #[test]
    fn monomial_order_is_degree_first() {
        let a = Monomial::from_factors([(Generator::K(0), 3)]);
        let b = Monomial::from_factors([(Generator::sij(0, 0), 1), (Generator::S, 1)]);
        assert!(b < a);
        assert_eq!(a.div_gen(&Generator::K(0), 2).unwrap().degree(), 1);
        assert!(a.div_gen(&Generator::S, 1).is_none());
    }

    #[test]
    fn display() {
        let m = Monomial::from_factors([(Generator::cxxx(), 2), (Generator::HatS, 1)]);
        assert_eq!(m.to_string(), "Ŝ*C_{xxx}^2");
    }
}
