#![allow(dead_code)]

use bcov_core::exact::{rat, RationalFunction};
use bcov_core::modular::AlmostHolPoly;
use bcov_core::ring::{Generator, Monomial, RingElement, TensorType, TermKey};
use rand::Rng;

/// Generators of the formal two-modulus ring, plain and hatted.
pub fn alphabet_r2() -> Vec<Generator> {
    let mut out = vec![Generator::S, Generator::HatS];
    for i in 0..2 {
        out.push(Generator::Si(i));
        out.push(Generator::HatSi(i));
        out.push(Generator::K(i));
        for j in i..2 {
            out.push(Generator::sij(i, j));
            for k in j..2 {
                out.push(Generator::c(vec![i, j, k]));
            }
        }
    }
    out
}

pub fn random_rational(rng: &mut impl Rng) -> bcov_core::exact::Rational {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=6);
    rat(if n == 0 { 1 } else { n }, d)
}

pub fn random_monomial(rng: &mut impl Rng, gens: &[Generator], max_deg: usize) -> Monomial {
    let deg = rng.gen_range(0..=max_deg);
    let mut m = Monomial::one();
    for _ in 0..deg {
        let g = &gens[rng.gen_range(0..gens.len())];
        m = m.mul_gen(g, 1);
    }
    m
}

/// A random homogeneous element: all monomials share the net rank of the
/// first one and constant coefficients absorb the weight difference.
pub fn random_element(rng: &mut impl Rng, gens: &[Generator], terms: usize, max_deg: usize) -> RingElement {
    let first = random_monomial(rng, gens, max_deg);
    let ty = first.tensor_type();
    let mut e = RingElement::zero(ty);
    e.add_term(TermKey::scalar(first), RationalFunction::constant(random_rational(rng)));
    let mut tries = 0;
    while e.len() < terms && tries < 200 {
        tries += 1;
        let m = random_monomial(rng, gens, max_deg);
        let mt = m.tensor_type();
        if mt.rank != ty.rank {
            continue;
        }
        let ctype = TensorType::new(0, ty.weight - mt.weight);
        e.add_term(TermKey { mono: m, ctype }, RationalFunction::constant(random_rational(rng)));
    }
    e
}

/// Random homogeneous almost-holomorphic polynomial of even weight `<= 12`.
pub fn random_almost_hol(rng: &mut impl Rng) -> AlmostHolPoly {
    let k = 2 * rng.gen_range(0..=6u32);
    let mut exps = Vec::new();
    for a in 0..=k / 2 {
        for b in 0..=k / 4 {
            for c in 0..=k / 6 {
                for d in 0..=k / 2 {
                    if 2 * a + 4 * b + 6 * c + 2 * d == k {
                        exps.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let mut p = AlmostHolPoly::zero();
    for e in exps {
        if rng.gen_bool(0.7) {
            p = &p + &AlmostHolPoly::monomial(random_rational(rng), e);
        }
    }
    p
}
