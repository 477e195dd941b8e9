//! Genus-by-genus integration of the holomorphic anomaly equation for
//! one-modulus threefolds, in hatted propagators `Ŝ^{xx}, Ŝ^x, Ŝ` and the
//! Yukawa coupling.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{rat, Rational, RationalFunction, TruncatedSeries, Var, EXACT};
use crate::models::{HolPropagators, ModelKind, ModelSpec};
use crate::picard_fuchs::PeriodData;
use crate::ring::{hat, k_expand, unhat, DerivationTable, Generator, Monomial, RingElement, TensorType, TermKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Reduced ring: no holomorphic tensors, no lift terms.
    Reduced,
    /// Lifted propagators with the model's meromorphic data and ambiguities.
    Lifted,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(Variant::Reduced),
            "lifted" => Ok(Variant::Lifted),
            _ => Err(Error::Unsupported(format!("variant '{s}'"))),
        }
    }
}

/// The three generators `F^{(g)}` is integrated in.
pub fn propagator_generators() -> [Generator; 3] {
    [Generator::sij(0, 0), Generator::HatSi(0), Generator::HatS]
}

fn k() -> RingElement {
    RingElement::generator(Generator::K(0))
}

/// `Q_{xx}`, `Q_x`, `Q` with
/// `RHS = Q_{xx} + 2 Q_x K_x + ½ Q K_x K_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsTargets {
    pub genus: u32,
    pub q_xx: RingElement,
    pub q_x: RingElement,
    pub q: RingElement,
}

impl RhsTargets {
    /// Required `∂F/∂Ŝ^{xx}`, `∂F/∂Ŝ^x`, `∂F/∂Ŝ`.
    pub fn partials(&self) -> [RingElement; 3] {
        [self.q_xx.clone(), self.q_x.scale_rat(&rat(-2, 1)), self.q.clone()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// `S^{xx} ∂F/∂S^x + S^x ∂F/∂S + ∂F/∂K_x` in plain generators.
    pub k_residual: RingElement,
    /// `∂F/∂a - target_a` for each propagator `a`.
    pub target_residuals: Vec<(String, RingElement)>,
    /// `∂_b target_a - ∂_a target_b` and `∂_a∂_b F - ∂_b target_a`.
    pub mixed_partial_residuals: Vec<(String, RingElement)>,
    pub weight_ok: bool,
}

impl Diagnostics {
    pub fn all_zero(&self) -> bool {
        self.k_residual.is_zero()
            && self.target_residuals.iter().all(|(_, r)| r.is_zero())
            && self.mixed_partial_residuals.iter().all(|(_, r)| r.is_zero())
            && self.weight_ok
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenusSolution {
    pub genus: u32,
    /// `F^{(g)}` in hatted generators, K-free, weight `2 - 2g`.
    pub f: RingElement,
    pub diagnostics: Diagnostics,
}

fn scalar_type(genus: u32) -> TensorType {
    TensorType::new(0, 2 - 2 * genus as i32)
}

/// `D_x F^{(1)} = ½ C_{xxx} Ŝ^{xx} - (χ/24 - 1) K_x`, plus `∂_x log f₀` in the
/// lifted variant when the model supplies `f₀`.
pub fn genus_one_seed(m: &ModelSpec, variant: Variant) -> Result<RingElement> {
    let c = RingElement::generator(Generator::cxxx());
    let s = RingElement::generator(Generator::sij(0, 0));
    let chi_term = Rational::new(m.chi.into(), 24.into()) - Rational::from_integer(1.into());
    let mut seed = &(&c * &s).scale_rat(&rat(1, 2)) - &k().scale_rat(&chi_term);
    if variant == Variant::Lifted {
        if let Some(f0) = &m.f0 {
            let dlog = f0.log_derivative()?;
            seed = &seed + &RingElement::term(dlog, TensorType::new(1, 0), Monomial::one());
        }
    }
    Ok(seed)
}

/// Derivation table used for a model and variant.
pub fn table_for(m: &ModelSpec, variant: Variant) -> Result<DerivationTable> {
    if m.kind != ModelKind::Threefold {
        return Err(Error::Unsupported(format!(
            "anomaly solving needs a threefold model; '{}' is a {}",
            m.name, m.kind
        )));
    }
    if m.r != 1 {
        return Err(Error::Unsupported("anomaly solving for r > 1".into()));
    }
    match variant {
        Variant::Reduced => Ok(DerivationTable::reduced(1)),
        Variant::Lifted => DerivationTable::lifted(m.lift_data()?),
    }
}

/// `D_x F^{(h)}` in hatted generators; `F^{(1)}` enters through its seed.
fn first_derivative(
    table: &DerivationTable,
    seed: &RingElement,
    solutions: &BTreeMap<u32, GenusSolution>,
    h: u32,
) -> Result<RingElement> {
    if h == 1 {
        return Ok(seed.clone());
    }
    let f = &solutions.get(&h).ok_or(Error::MissingGenus(h))?.f;
    Ok(hat(&table.derive(f, 0)?, 1))
}

/// Assembles `½ D D F^{(g-1)} + ½ Σ_{h=1}^{g-1} D F^{(g-h)} D F^{(h)}` and
/// splits it by powers of `K_x`.
pub fn assemble_rhs(
    table: &DerivationTable,
    g: u32,
    solutions: &BTreeMap<u32, GenusSolution>,
    seed: &RingElement,
) -> Result<RhsTargets> {
    if g < 2 {
        return Err(Error::GenusBound(g));
    }
    let half = rat(1, 2);
    let d_prev = first_derivative(table, seed, solutions, g - 1)?;
    let dd = hat(&table.derive(&d_prev, 0)?, 1);
    let mut rhs = dd.scale_rat(&half);
    let firsts: Vec<RingElement> = (1..g)
        .map(|h| first_derivative(table, seed, solutions, h))
        .collect::<Result<_>>()?;
    for h in 1..g {
        let a = &firsts[(g - h - 1) as usize];
        let b = &firsts[(h - 1) as usize];
        rhs = &rhs + &(a * b).scale_rat(&half);
    }
    rhs.check_weight()?;
    let parts = k_expand(&rhs, 2)?;
    let ty = TensorType::new(2, 4 - 2 * g as i32);
    let part = |deg: u32| -> RingElement {
        let key = Monomial::from_factors([(Generator::K(0), deg)]);
        let key = if deg == 0 { Monomial::one() } else { key };
        parts
            .get(&key)
            .cloned()
            .unwrap_or_else(|| RingElement::zero(ty - TensorType::new(deg as i32, 0)))
    };
    let (r0, r1, r2) = (part(0), part(1), part(2));
    Ok(RhsTargets {
        genus: g,
        q_xx: r0,
        q_x: r1.scale_rat(&half),
        q: r2.scale_rat(&rat(2, 1)),
    })
}

fn describe(key: &TermKey) -> String {
    key.mono.to_string()
}

/// Reconstructs `F` from its three partial derivatives. Every monomial
/// `M·a` is fixed by `∂F/∂a` alone; the other partials must agree.
pub fn integrate_targets(t: &RhsTargets) -> Result<GenusSolution> {
    let g = t.genus;
    let ty = scalar_type(g);
    let gens = propagator_generators();
    let parts = t.partials();
    for p in &parts {
        if p.terms().any(|(k, _)| k.mono.degree_where(Generator::is_k) > 0) {
            return Err(Error::InconsistentTargets {
                monomial: "K".into(),
                detail: "targets must be free of K".into(),
            });
        }
    }
    let mut f = RingElement::zero(ty);
    let mut seen: BTreeMap<TermKey, (usize, RationalFunction)> = BTreeMap::new();
    for (ai, (a, target)) in gens.iter().zip(&parts).enumerate() {
        for (key, c) in target.terms() {
            let mono = key.mono.mul_gen(a, 1);
            let mult = mono.exponent(a);
            let coeff = c.scale(&Rational::new(1.into(), (mult as i64).into()));
            let fk = TermKey {
                mono,
                ctype: key.ctype,
            };
            match seen.get(&fk) {
                Some((bi, prev)) if *prev != coeff => {
                    return Err(Error::InconsistentTargets {
                        monomial: describe(&fk),
                        detail: format!(
                            "d/d{} gives coefficient {}, d/d{} gives {}",
                            gens[*bi], prev, a, coeff
                        ),
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(fk.clone(), (ai, coeff.clone()));
                    f.add_term(fk, coeff);
                }
            }
        }
    }
    let diagnostics = diagnose(&f, t)?;
    if let Some((name, r)) = diagnostics.target_residuals.iter().find(|(_, r)| !r.is_zero()) {
        let (key, _) = r.terms().next().expect("nonzero residual");
        return Err(Error::InconsistentTargets {
            monomial: describe(key),
            detail: format!("{name} is not reproduced"),
        });
    }
    Ok(GenusSolution {
        genus: g,
        f,
        diagnostics,
    })
}

fn diagnose(f: &RingElement, t: &RhsTargets) -> Result<Diagnostics> {
    let gens = propagator_generators();
    let parts = t.partials();
    let mut target_residuals = Vec::new();
    for (a, target) in gens.iter().zip(&parts) {
        let r = &f.partial(a) - target;
        target_residuals.push((format!("dF/d{a} - target"), r));
    }
    let mut mixed = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, b) = (&gens[i], &gens[j]);
            let cross = &parts[i].partial(b) - &parts[j].partial(a);
            mixed.push((format!("d{b}(target {a}) - d{a}(target {b})"), cross));
            let ff = &f.partial(a).partial(b) - &parts[j].partial(a);
            mixed.push((format!("d{a}d{b}F - d{a}(target {b})"), ff));
        }
    }
    let plain = unhat(f, 1);
    let k_res = &(&(&RingElement::generator(Generator::sij(0, 0)) * &plain.partial(&Generator::Si(0)))
        + &(&RingElement::generator(Generator::Si(0)) * &plain.partial(&Generator::S)))
        + &plain.partial(&Generator::K(0));
    let weight_ok = f.tensor_type() == scalar_type(t.genus) && f.check_weight().is_ok();
    Ok(Diagnostics {
        k_residual: k_res,
        target_residuals,
        mixed_partial_residuals: mixed,
        weight_ok,
    })
}

/// Solves for `F^{(2)}, …, F^{(gmax)}`.
pub fn solve_to_genus(m: &ModelSpec, gmax: u32, variant: Variant) -> Result<Vec<GenusSolution>> {
    if gmax < 2 {
        return Err(Error::GenusBound(gmax));
    }
    let table = table_for(m, variant)?;
    let seed = genus_one_seed(m, variant)?;
    let mut solutions: BTreeMap<u32, GenusSolution> = BTreeMap::new();
    for g in 2..=gmax {
        let targets = assemble_rhs(&table, g, &solutions, &seed)?;
        let mut sol = integrate_targets(&targets)?;
        if variant == Variant::Lifted {
            let fg = m.ambiguity(g);
            if !fg.is_zero() {
                sol.f.add_term(
                    TermKey {
                        mono: Monomial::one(),
                        ctype: scalar_type(g),
                    },
                    fg,
                );
            }
        }
        solutions.insert(g, sol);
    }
    Ok(solutions.into_values().collect())
}

/// Series of each generator in the holomorphic limit.
fn generator_series(g: &Generator, props: &HolPropagators) -> Result<TruncatedSeries> {
    let hat_x = &props.s_x - &(&props.s_xx * &props.k);
    Ok(match g {
        Generator::Sij(0, 0) => props.s_xx.clone(),
        Generator::Si(0) => props.s_x.clone(),
        Generator::S => props.s.clone(),
        Generator::HatSi(0) => hat_x,
        Generator::HatS => {
            &(&props.s - &(&hat_x * &props.k)) - &(&props.s_xx * &(&props.k * &props.k)).scale(&rat(1, 2))
        }
        Generator::K(0) => props.k.clone(),
        Generator::C(ix) if ix.len() == 3 => props.yukawa.clone(),
        other => return Err(Error::UncoveredGenerator(other.clone())),
    })
}

/// Holomorphic limit of a ring element as an `x`-series through `x^order`.
pub fn holomorphic_x_series(e: &RingElement, props: &HolPropagators, order: i64) -> Result<TruncatedSeries> {
    let mut cache: BTreeMap<Generator, TruncatedSeries> = BTreeMap::new();
    let mut acc = TruncatedSeries::zero(Var::X, EXACT);
    for (key, c) in e.terms() {
        let mut t = c.expand(Var::X, order + 16);
        for (g, p) in key.mono.factors() {
            if !cache.contains_key(g) {
                cache.insert(g.clone(), generator_series(g, props)?);
            }
            t = &t * &cache[g].pow(*p as i64)?;
        }
        acc = &acc + &t;
    }
    if acc.order() < order {
        return Err(Error::OrderUnderflow { order: acc.order() });
    }
    Ok(acc.truncate(order))
}

/// `F^{(g)}` in the holomorphic limit, re-expanded in `q` through `x(q)`.
/// Overall normalizations (powers of `2πi`, `ω₀` and the string coupling)
/// are left as they come out of the ring.
pub fn holomorphic_evaluate(
    sol: &GenusSolution,
    pd: &PeriodData,
    props: &HolPropagators,
    order: i64,
) -> Result<TruncatedSeries> {
    if sol.f.is_zero() {
        return Ok(TruncatedSeries::zero(Var::Q, order));
    }
    let xs = holomorphic_x_series(&sol.f, props, order)?;
    let xq = pd.x_of_q()?.truncate(order + 1);
    Ok(xs.compose(&xq)?.truncate(order))
}

/// Checks that the holomorphic limit of the genus-one seed is the derivative
/// of `(χ/24 - 2) log ω₀ - ½ log(x dT/dx)` plus the primitive of the regular
/// part of `½ f̃`, with residue `½ res f̃ + ½`.
pub fn genus_one_seed_check(m: &ModelSpec, pd: &PeriodData, props: &HolPropagators, order: i64) -> Result<()> {
    let seed = genus_one_seed(m, Variant::Reduced)?;
    let sigma = holomorphic_x_series(&seed, props, order)?;
    let f = m
        .lift_spec()?
        .f_tilde
        .as_ref()
        .ok_or_else(|| Error::Model("genus-one check needs f_tilde".into()))?
        .expand(Var::X, order + 1);
    let res_f = f.coeff(-1);
    let residue = sigma.coeff(-1);
    let want_res = (&res_f + Rational::from_integer(1.into())) / Rational::from_integer(2.into());
    if residue != want_res {
        return Err(Error::Mismatch {
            name: "genus-one seed residue".into(),
            exponent: -1,
        });
    }
    if sigma.valuation().is_some_and(|v| v < -1) {
        return Err(Error::Mismatch {
            name: "genus-one seed pole order".into(),
            exponent: sigma.valuation().unwrap_or(0),
        });
    }
    let reg = &sigma - &TruncatedSeries::monomial(Var::X, residue, -1);
    let prim = reg.integrate()?;
    let chi = Rational::new(m.chi.into(), 24.into()) - Rational::from_integer(2.into());
    let w0 = pd.omega0.truncate(order + 1);
    let xt = pd.dtdx()?.shift(1).truncate(order + 1);
    let f_reg = &f - &TruncatedSeries::monomial(Var::X, res_f, -1);
    let expect = &(&w0.log()?.scale(&chi) - &xt.log()?.scale(&rat(1, 2))) + &f_reg.integrate()?.scale(&rat(1, 2));
    prim.assert_agrees(&expect, "genus-one seed primitive")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quintic() -> ModelSpec {
        ModelSpec::builtin("quintic").unwrap()
    }

    #[test]
    fn seed_shape() {
        let mut m = quintic();
        let seed = genus_one_seed(&m, Variant::Reduced).unwrap();
        assert_eq!(seed.tensor_type(), TensorType::new(1, 0));
        assert_eq!(seed.len(), 2);
        m.chi = 24;
        let seed = genus_one_seed(&m, Variant::Reduced).unwrap();
        assert_eq!(seed.len(), 1);
        assert_eq!(seed.max_degree(Generator::is_k), 0);
    }

    #[test]
    fn single_monomial_integration() {
        let c = RingElement::term(RationalFunction::constant(rat(7, 3)), TensorType::new(2, 0), Monomial::one());
        let t = RhsTargets {
            genus: 2,
            q_xx: c.clone(),
            q_x: RingElement::zero(TensorType::new(1, 0)),
            q: RingElement::zero(TensorType::new(0, 0)),
        };
        let sol = integrate_targets(&t).unwrap();
        assert_eq!(sol.f, &c * &RingElement::generator(Generator::sij(0, 0)));
        assert!(sol.diagnostics.all_zero());
    }

    #[test]
    fn genus_two_reduced() {
        let sols = solve_to_genus(&quintic(), 3, Variant::Reduced).unwrap();
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert!(s.diagnostics.all_zero(), "genus {}", s.genus);
            assert_eq!(s.f.weight(), 2 - 2 * s.genus as i32);
            assert_eq!(s.f.max_degree(Generator::is_k), 0);
        }
    }

    #[test]
    fn corrupted_targets_rejected() {
        let m = quintic();
        let table = table_for(&m, Variant::Reduced).unwrap();
        let seed = genus_one_seed(&m, Variant::Reduced).unwrap();
        let mut t = assemble_rhs(&table, 2, &BTreeMap::new(), &seed).unwrap();
        t.q_x = t.q_x.scale_rat(&rat(3, 1));
        assert!(matches!(integrate_targets(&t), Err(Error::InconsistentTargets { .. })));
    }

    #[test]
    fn guards() {
        assert_eq!(solve_to_genus(&quintic(), 1, Variant::Reduced), Err(Error::GenusBound(1)));
        let e = ModelSpec::builtin("elliptic").unwrap();
        assert!(matches!(solve_to_genus(&e, 2, Variant::Reduced), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lifted_runs() {
        let sols = solve_to_genus(&quintic(), 3, Variant::Lifted).unwrap();
        for s in &sols {
            assert!(s.diagnostics.all_zero(), "genus {}", s.genus);
        }
    }

    #[test]
    fn seed_primitive() {
        let m = quintic();
        let pd = m.periods(20).unwrap();
        let props = crate::models::hol_propagators(&m, &pd, 14).unwrap();
        genus_one_seed_check(&m, &pd, &props, 10).unwrap();
    }

    #[test]
    fn genus_two_holomorphic_limit() {
        let m = quintic();
        let pd = m.periods(24).unwrap();
        let props = crate::models::hol_propagators(&m, &pd, 16).unwrap();
        let sols = solve_to_genus(&m, 2, Variant::Reduced).unwrap();
        let f2 = holomorphic_evaluate(&sols[0], &pd, &props, 6).unwrap();
        assert!(f2.valuation().is_some());
        assert!(f2.valuation().unwrap() >= -10);
    }
}
