use std::collections::BTreeMap;
use std::fmt;

use super::quasi::QuasiModularPoly;
use crate::error::{Error, Result};
use crate::exact::rat;

/// `P · q^{n/2} / η^{12n}` with the prefactor kept symbolic through `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZForm {
    pub n: u32,
    pub poly: QuasiModularPoly,
}

impl ZForm {
    pub fn new(n: u32, poly: QuasiModularPoly) -> Self {
        ZForm { n, poly }
    }

    /// Prefactor indices add under multiplication.
    pub fn mul(&self, o: &ZForm) -> ZForm {
        ZForm::new(self.n + o.n, &self.poly * &o.poly)
    }

    /// `∂/∂E2` acts on the polynomial part only.
    pub fn partial_e2(&self) -> ZForm {
        ZForm::new(self.n, self.poly.partial_e2())
    }
}

impl fmt::Display for ZForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] * q^({}/2)/eta^{}", self.poly, self.n, 12 * self.n)
    }
}

/// Table of `P_{g;n}` keyed by `(g, n)`.
pub type ZTable = BTreeMap<(u32, u32), QuasiModularPoly>;

fn lookup(t: &ZTable, g: u32, n: u32) -> Result<ZForm> {
    t.get(&(g, n))
        .map(|p| ZForm::new(n, p.clone()))
        .ok_or(Error::MissingTableEntry { g, n })
}

/// Right-hand side of the modular anomaly recursion
/// `∂Z_{g;n}/∂E2 = (1/24) Σ_{g'+g''=g} Σ_{s=1}^{n-1} s(n-s) Z_{g';s} Z_{g'';n-s}
///                + n(n+1)/24 · Z_{g-1;n}`.
pub fn modular_anomaly_rhs(table: &ZTable, g: u32, n: u32) -> Result<ZForm> {
    let mut acc = QuasiModularPoly::zero();
    for s in 1..n {
        for g1 in 0..=g {
            let a = lookup(table, g1, s)?;
            let b = lookup(table, g - g1, n - s)?;
            let w = rat((s * (n - s)) as i64, 24);
            acc = &acc + &a.mul(&b).poly.scale(&w);
        }
    }
    if g >= 1 {
        let z = lookup(table, g - 1, n)?;
        acc = &acc + &z.poly.scale(&rat((n * (n + 1)) as i64, 24));
    }
    Ok(ZForm::new(n, acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ZTable {
        let mut t = ZTable::new();
        t.insert((0, 1), QuasiModularPoly::e4());
        t
    }

    #[test]
    fn genus_zero_one_point_has_no_source() {
        let r = modular_anomaly_rhs(&table(), 0, 1).unwrap();
        assert!(r.poly.is_zero());
        assert_eq!(r.n, 1);
    }

    #[test]
    fn genus_one() {
        let r = modular_anomaly_rhs(&table(), 1, 1).unwrap();
        assert_eq!(r.poly, QuasiModularPoly::e4().scale(&rat(1, 12)));
    }

    #[test]
    fn two_point_genus_zero() {
        let r = modular_anomaly_rhs(&table(), 0, 2).unwrap();
        assert_eq!(r.n, 2);
        assert_eq!(r.poly, QuasiModularPoly::e4().pow(2).scale(&rat(1, 24)));
    }

    #[test]
    fn missing_entry() {
        assert_eq!(
            modular_anomaly_rhs(&table(), 1, 2),
            Err(Error::MissingTableEntry { g: 1, n: 1 }).map(|_: ()| unreachable!())
        );
    }
}
