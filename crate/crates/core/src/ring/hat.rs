use std::collections::BTreeMap;

use super::element::{RingElement, TermKey};
use super::generator::{Generator, Idx, Monomial};
use crate::error::{Error, Result};
use crate::exact::rat;

fn gen(g: Generator) -> RingElement {
    RingElement::generator(g)
}

/// Plain-generator expression of `Ŝ^k` or `Ŝ`:
/// `Ŝ^k = S^k - S^{km}K_m`, `Ŝ = S - S^m K_m + ½ S^{mn} K_m K_n`.
pub fn unhat_generator(g: &Generator, r: usize) -> RingElement {
    let r = r as Idx;
    match g {
        Generator::HatSi(k) => {
            let mut e = gen(Generator::Si(*k));
            for m in 0..r {
                e = &e - &(&gen(Generator::sij(*k, m)) * &gen(Generator::K(m)));
            }
            e
        }
        Generator::HatS => {
            let mut e = gen(Generator::S);
            for m in 0..r {
                e = &e - &(&gen(Generator::Si(m)) * &gen(Generator::K(m)));
                for n in 0..r {
                    let t = &(&gen(Generator::sij(m, n)) * &gen(Generator::K(m))) * &gen(Generator::K(n));
                    e = &e + &t.scale_rat(&rat(1, 2));
                }
            }
            e
        }
        other => gen(other.clone()),
    }
}

/// Hatted-generator expression of `S^k` or `S`:
/// `S^k = Ŝ^k + S^{km}K_m`, `S = Ŝ + Ŝ^m K_m + ½ S^{mn} K_m K_n`.
pub fn hat_generator(g: &Generator, r: usize) -> RingElement {
    let r = r as Idx;
    match g {
        Generator::Si(k) => {
            let mut e = gen(Generator::HatSi(*k));
            for m in 0..r {
                e = &e + &(&gen(Generator::sij(*k, m)) * &gen(Generator::K(m)));
            }
            e
        }
        Generator::S => {
            let mut e = gen(Generator::HatS);
            for m in 0..r {
                e = &e + &(&gen(Generator::HatSi(m)) * &gen(Generator::K(m)));
                for n in 0..r {
                    let t = &(&gen(Generator::sij(m, n)) * &gen(Generator::K(m))) * &gen(Generator::K(n));
                    e = &e + &t.scale_rat(&rat(1, 2));
                }
            }
            e
        }
        other => gen(other.clone()),
    }
}

/// Rewrites `S^k` and `S` in hatted generators.
pub fn hat(e: &RingElement, r: usize) -> RingElement {
    let mut out = e.substitute(&Generator::S, &hat_generator(&Generator::S, r));
    for k in 0..r as Idx {
        out = out.substitute(&Generator::Si(k), &hat_generator(&Generator::Si(k), r));
    }
    out
}

/// Rewrites `Ŝ^k` and `Ŝ` in plain generators; inverse of [`hat`].
pub fn unhat(e: &RingElement, r: usize) -> RingElement {
    let mut out = e.substitute(&Generator::HatS, &unhat_generator(&Generator::HatS, r));
    for k in 0..r as Idx {
        out = out.substitute(&Generator::HatSi(k), &unhat_generator(&Generator::HatSi(k), r));
    }
    out
}

/// Splits an element by its monomial in the `K_i`, returning the K-free
/// cofactor for each K-monomial. Fails if some term has K-degree above `max`.
pub fn k_expand(e: &RingElement, max: u32) -> Result<BTreeMap<Monomial, RingElement>> {
    let mut out: BTreeMap<Monomial, RingElement> = BTreeMap::new();
    for (key, c) in e.terms() {
        let (kpart, rest) = key.mono.split(Generator::is_k);
        let deg = kpart.degree();
        if deg > max {
            return Err(Error::KDegree {
                found: deg,
                max,
                monomial: key.mono.to_string(),
            });
        }
        let ty = e.tensor_type() - kpart.tensor_type();
        out.entry(kpart)
            .or_insert_with(|| RingElement::zero(ty))
            .add_term(
                TermKey {
                    mono: rest,
                    ctype: key.ctype,
                },
                c.clone(),
            );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unhat_of_hatted_scalar_propagator() {
        let e = unhat(&gen(Generator::HatS), 1);
        let k = gen(Generator::K(0));
        let expect = &(&gen(Generator::S) - &(&gen(Generator::Si(0)) * &k))
            + &(&gen(Generator::sij(0, 0)) * &k.pow(2)).scale_rat(&rat(1, 2));
        assert_eq!(e, expect);
    }

    #[test]
    fn top_propagator_is_fixed() {
        let s = gen(Generator::sij(0, 0));
        assert_eq!(hat(&s, 1), s);
        assert_eq!(unhat(&s, 1), s);
    }

    #[test]
    fn round_trip_two_moduli() {
        let e = &(&gen(Generator::S) * &gen(Generator::Si(1)))
            + &(&gen(Generator::Si(0)) * &gen(Generator::HatS));
        assert_eq!(unhat(&hat(&e, 2), 2), unhat(&e, 2));
        let plain = unhat(&e, 2);
        assert_eq!(unhat(&hat(&plain, 2), 2), plain);
        assert_eq!(hat(&unhat(&e, 2), 2), hat(&e, 2));
    }

    #[test]
    fn k_expansion_by_degree() {
        let k = Generator::K(0);
        let mut e = RingElement::zero(gen(Generator::cxxx()).tensor_type());
        let a = Monomial::of(Generator::cxxx());
        e.add_term(TermKey::scalar(a.clone()), crate::exact::RationalFunction::one());
        e.add_term(TermKey::scalar(a.mul_gen(&k, 2)), crate::exact::RationalFunction::one());
        assert!(k_expand(&e, 1).is_err());
        let parts = k_expand(&e, 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Monomial::one()], gen(Generator::cxxx()));
        assert!(k_expand(&gen(Generator::S), 2).unwrap().contains_key(&Monomial::one()));
    }
}
