use std::collections::BTreeMap;

use super::element::{RingElement, TermKey};
use super::generator::{Generator, Idx, Monomial, TensorType};
use super::hat::unhat_generator;
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational, RationalFunction};

/// Meromorphic lift data for one modulus, all components along `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftData {
    /// Yukawa coupling `C_{xxx}(x)`.
    pub yukawa: RationalFunction,
    /// `f̃_{xx}^x`.
    pub f_tilde: RationalFunction,
    /// `ℰ_x^{xx}`, `ℰ_x^x`, `ℰ_x`.
    pub e_xx: RationalFunction,
    pub e_x: RationalFunction,
    pub e: RationalFunction,
    /// `C_{xxx}·κ^x`.
    pub c_kappa: RationalFunction,
}

impl LiftData {
    /// `C'/C - 3f̃`: the holomorphic remainder in `D_x C_{xxx}`.
    pub fn phi(&self) -> Result<RationalFunction> {
        Ok(&self.yukawa.log_derivative()? - &self.f_tilde.scale(&int(3)))
    }

    /// All lift terms switched off.
    pub fn trivial(yukawa: RationalFunction) -> Self {
        let f_tilde = yukawa.log_derivative().expect("nonzero Yukawa").scale(&rat(1, 3));
        LiftData {
            yukawa,
            f_tilde,
            e_xx: RationalFunction::zero(),
            e_x: RationalFunction::zero(),
            e: RationalFunction::zero(),
            c_kappa: RationalFunction::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TableKind {
    /// Threefold rules with the holomorphic four-point tensor set to zero.
    Reduced,
    /// Threefold rules keeping the holomorphic tensors `h_I` as symbols.
    Full,
    /// Threefold rules for the lifted propagators of a one-modulus model.
    Lifted { lift: LiftData, phi: RationalFunction },
    /// One-modulus curve: generators `S`, `K_x`, `C_x` with
    /// `D S = -C S S`, `D K = -K K + k_shift·C`, `D C = 0`.
    Elliptic { k_shift: Rational },
}

/// Images of the generators under the covariant derivative `D_i`.
#[derive(Clone, Debug)]
pub struct DerivationTable {
    r: usize,
    kind: TableKind,
    cache: BTreeMap<(Generator, Idx), RingElement>,
}

fn gen(g: Generator) -> RingElement {
    RingElement::generator(g)
}

fn typed(c: &RationalFunction, ctype: TensorType, mono: Monomial) -> RingElement {
    RingElement::term(c.clone(), ctype, mono)
}

impl DerivationTable {
    pub fn reduced(r: usize) -> Self {
        Self::build(r, TableKind::Reduced)
    }

    pub fn full(r: usize) -> Self {
        Self::build(r, TableKind::Full)
    }

    pub fn lifted(lift: LiftData) -> Result<Self> {
        let phi = lift.phi()?;
        Ok(Self::build(1, TableKind::Lifted { lift, phi }))
    }

    pub fn elliptic(k_shift: Rational) -> Self {
        Self::build(1, TableKind::Elliptic { k_shift })
    }

    fn build(r: usize, kind: TableKind) -> Self {
        assert!((1..=8).contains(&r), "dimension of moduli space out of range");
        let mut t = DerivationTable {
            r,
            kind,
            cache: BTreeMap::new(),
        };
        let mut cache = BTreeMap::new();
        for g in t.alphabet() {
            for i in 0..r as Idx {
                if let Ok(e) = t.rule(&g, i) {
                    cache.insert((g.clone(), i), e);
                }
            }
        }
        t.cache = cache;
        t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn kind(&self) -> &TableKind {
        &self.kind
    }

    pub fn lift(&self) -> Option<&LiftData> {
        match &self.kind {
            TableKind::Lifted { lift, .. } => Some(lift),
            _ => None,
        }
    }

    /// Generators the table has rules for (apart from `h_I` of any length).
    pub fn alphabet(&self) -> Vec<Generator> {
        let r = self.r as Idx;
        if let TableKind::Elliptic { .. } = self.kind {
            return vec![Generator::S, Generator::K(0), Generator::C(vec![0])];
        }
        let mut out = vec![Generator::S, Generator::HatS];
        for i in 0..r {
            out.push(Generator::Si(i));
            out.push(Generator::HatSi(i));
            out.push(Generator::K(i));
            for j in i..r {
                out.push(Generator::Sij(i, j));
                for k in j..r {
                    out.push(Generator::C(vec![i, j, k]));
                }
            }
        }
        out.sort();
        out
    }

    fn delta(i: Idx, k: Idx) -> bool {
        i == k
    }

    fn rule(&self, g: &Generator, i: Idx) -> Result<RingElement> {
        let r = self.r as Idx;
        let ty = g.tensor_type() + TensorType::new(1, 0);
        let mut out = RingElement::zero(ty);
        let c3 = |a: Idx, b: Idx, c: Idx| gen(Generator::c(vec![a, b, c]));
        if let TableKind::Elliptic { k_shift } = &self.kind {
            let c = gen(Generator::C(vec![0]));
            return match g {
                Generator::S => Ok(-(&c * &gen(Generator::S).pow(2))),
                Generator::K(0) => {
                    // the numerical constant carries type (1, -2) so both sides balance
                    let shift = RingElement::term(
                        RationalFunction::constant(k_shift.clone()),
                        TensorType::new(1, -2),
                        Monomial::of(Generator::C(vec![0])),
                    );
                    Ok(&(-gen(Generator::K(0)).pow(2)) + &shift)
                }
                Generator::C(ix) if ix.len() == 1 => Ok(out),
                _ => Err(Error::UncoveredGenerator(g.clone())),
            };
        }
        let lift = self.lift();
        match g {
            Generator::Sij(k, l) => {
                if Self::delta(i, *k) {
                    out = &out + &gen(Generator::Si(*l));
                }
                if Self::delta(i, *l) {
                    out = &out + &gen(Generator::Si(*k));
                }
                for m in 0..r {
                    for n in 0..r {
                        let t = &(&c3(i, m, n) * &gen(Generator::sij(m, *k)))
                            * &gen(Generator::sij(n, *l));
                        out = &out - &t;
                    }
                }
                if let Some(l) = lift {
                    out = &out + &typed(&l.e_xx, TensorType::new(-1, -2), Monomial::one());
                }
            }
            Generator::Si(k) => {
                for m in 0..r {
                    for n in 0..r {
                        let t = &(&c3(i, m, n) * &gen(Generator::Si(m)))
                            * &gen(Generator::sij(n, *k));
                        out = &out - &t;
                    }
                }
                if Self::delta(i, *k) {
                    out = &out + &gen(Generator::S).scale_rat(&int(2));
                }
                if let Some(l) = lift {
                    out = &out
                        + &typed(&l.e_xx, TensorType::new(-1, -2), Monomial::of(Generator::K(0)));
                    out = &out + &typed(&l.e_x, TensorType::new(0, -2), Monomial::one());
                }
            }
            Generator::S => {
                for m in 0..r {
                    for n in 0..r {
                        let t = &(&c3(i, m, n) * &gen(Generator::Si(m))) * &gen(Generator::Si(n));
                        out = &out - &t.scale_rat(&rat(1, 2));
                    }
                }
                if let Some(l) = lift {
                    let k2 = Monomial::from_factors([(Generator::K(0), 2)]);
                    out = &out
                        + &typed(&l.e_xx.scale(&rat(1, 2)), TensorType::new(-1, -2), k2);
                    out = &out
                        + &typed(&l.e_x, TensorType::new(0, -2), Monomial::of(Generator::K(0)));
                    out = &out + &typed(&l.e, TensorType::new(1, -2), Monomial::one());
                }
            }
            Generator::K(j) => {
                out = &out - &(&gen(Generator::K(i)) * &gen(Generator::K(*j)));
                for m in 0..r {
                    for n in 0..r {
                        let t = &(&c3(i, *j, m) * &gen(Generator::sij(m, n))) * &gen(Generator::K(n));
                        out = &out + &t;
                    }
                    out = &out - &(&c3(i, *j, m) * &gen(Generator::Si(m)));
                }
                if let Some(l) = lift {
                    out = &out + &typed(&l.c_kappa, TensorType::new(2, 0), Monomial::one());
                }
            }
            Generator::C(idx) if idx.len() == 3 => {
                let all = [idx[0], idx[1], idx[2], i];
                // the three ways of splitting four indices into two pairs
                for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
                    for m in 0..r {
                        for n in 0..r {
                            let t = &(&c3(all[a], all[b], m) * &gen(Generator::sij(m, n)))
                                * &c3(n, all[c], all[d]);
                            out = &out + &t;
                        }
                    }
                }
                for skip in 0..4 {
                    let rest: Vec<Idx> = (0..4).filter(|&p| p != skip).map(|p| all[p]).collect();
                    out = &out - &(&gen(Generator::K(all[skip])) * &gen(Generator::c(rest)));
                }
                match &self.kind {
                    TableKind::Full => out = &out + &gen(Generator::h(all.to_vec())),
                    TableKind::Lifted { phi, .. } => {
                        out = &out
                            + &typed(phi, TensorType::new(1, 0), Monomial::of(g.clone()));
                    }
                    _ => {}
                }
            }
            Generator::H(idx) if matches!(self.kind, TableKind::Full) => {
                // same connection terms as for C, with h_{iJ} as the new symbol
                let mut all = idx.clone();
                all.push(i);
                out = gen(Generator::h(all));
                for a in 0..idx.len() {
                    let mut rest = idx.clone();
                    let ia = rest.remove(a);
                    for m in 0..r {
                        for n in 0..r {
                            let mut hn = rest.clone();
                            hn.push(n);
                            let t = &(&c3(i, ia, m) * &gen(Generator::sij(m, n))) * &gen(Generator::h(hn));
                            out = &out + &t;
                        }
                    }
                    let mut hi = rest;
                    hi.push(i);
                    out = &out - &(&gen(Generator::K(ia)) * &gen(Generator::h(hi)));
                }
                let shift = idx.len() as i64 - 2;
                out = &out - &(&gen(Generator::K(i)) * &gen(Generator::H(idx.clone()))).scale_rat(&int(shift));
            }
            Generator::HatSi(_) | Generator::HatS => {
                let plain = unhat_generator(g, self.r);
                return self.derive(&plain, i);
            }
            _ => return Err(Error::UncoveredGenerator(g.clone())),
        }
        Ok(out)
    }

    /// `D_i` of a single generator.
    pub fn derive_generator(&self, g: &Generator, i: Idx) -> Result<RingElement> {
        match self.cache.get(&(g.clone(), i)) {
            Some(e) => Ok(e.clone()),
            None => self.rule(g, i),
        }
    }

    /// `D_i` of a coefficient `ρ` carrying tensor type `(n, w)`:
    /// `ρ' - n f̃ ρ` plus `(w - 2n) K ρ + n C S^{xx} ρ` from the connection.
    fn derive_coefficient(
        &self,
        c: &RationalFunction,
        ctype: TensorType,
        i: Idx,
    ) -> Result<RingElement> {
        let out_type = ctype + TensorType::new(1, 0);
        let uncovered = || Error::UncoveredCoefficient {
            rank: ctype.rank,
            weight: ctype.weight,
        };
        let n = ctype.rank;
        let w = ctype.weight;
        let mut out = RingElement::zero(out_type);
        if matches!(self.kind, TableKind::Elliptic { .. }) && c.is_constant() {
            // numerical constants of the curve ring are flat
            return Ok(out);
        }
        if self.r > 1 {
            if !c.is_constant() || n != 0 {
                return Err(uncovered());
            }
        } else {
            let mut lead = c.derivative();
            if n != 0 {
                let lift = self.lift().ok_or_else(uncovered)?;
                lead = &lead - &(&lift.f_tilde * c).scale(&int(n as i64));
                let cs = Monomial::from_factors([(Generator::cxxx(), 1), (Generator::sij(0, 0), 1)]);
                out.add_term(
                    TermKey { mono: cs, ctype },
                    c.scale(&int(n as i64)),
                );
            }
            out.add_term(
                TermKey {
                    mono: Monomial::one(),
                    ctype: out_type,
                },
                lead,
            );
        }
        let kc = w - 2 * n;
        if kc != 0 {
            out.add_term(
                TermKey {
                    mono: Monomial::of(Generator::K(i)),
                    ctype,
                },
                c.scale(&int(kc as i64)),
            );
        }
        Ok(out)
    }

    /// Covariant derivative `D_i`, extended from the generator rules by
    /// Leibniz and acting on coefficients through their tensor type.
    pub fn derive(&self, e: &RingElement, i: Idx) -> Result<RingElement> {
        if i as usize >= self.r {
            return Err(Error::Unsupported(format!(
                "index {i} outside a {}-dimensional moduli space",
                self.r
            )));
        }
        let mut out = RingElement::zero(e.tensor_type() + TensorType::new(1, 0));
        for (key, c) in e.terms() {
            let dc = self.derive_coefficient(c, key.ctype, i)?;
            for (k2, v) in dc.terms() {
                out.add_term(
                    TermKey {
                        mono: k2.mono.mul(&key.mono),
                        ctype: k2.ctype,
                    },
                    v.clone(),
                );
            }
            for (g, mult) in key.mono.factors() {
                let dg = self.derive_generator(g, i)?;
                let rest = key.mono.div_gen(g, 1).expect("factor present");
                let coeff = c.scale(&int(*mult as i64));
                for (k2, v) in dg.terms() {
                    out.add_term(
                        TermKey {
                            mono: k2.mono.mul(&rest),
                            ctype: k2.ctype + key.ctype,
                        },
                        v * &coeff,
                    );
                }
            }
        }
        Ok(out)
    }
}
