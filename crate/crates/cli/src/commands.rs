use std::collections::BTreeMap;

use bcov_core::exact::{int, rat, TruncatedSeries, Var};
use bcov_core::modular::{
    eisenstein, eta24, j_normalized, modular_anomaly_rhs, AlmostHolPoly, QuasiModularPoly, ZForm, ZTable,
};
use bcov_core::models::{
    elliptic_yukawa, hol_propagators, lambda_lift_table, tilde_s_modular_check, EllipticRealization,
    ModelKind, ModelSpec,
};
use bcov_core::picard_fuchs::{yukawa_flat_check, PeriodData};
use bcov_core::solver::{genus_one_seed_check, holomorphic_evaluate, solve_to_genus, Variant};
use bcov_core::Error;
use serde_json::{json, Map, Value};

use crate::report::{element_json, Check, RunReport};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Load(Error),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    EllipticIdentities,
    LambdaLifts,
    QuinticRing,
    Modular,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::EllipticIdentities => "elliptic-identities",
            Suite::LambdaLifts => "lambda-lifts",
            Suite::QuinticRing => "quintic-ring",
            Suite::Modular => "modular",
        }
    }

    fn default_model(self) -> &'static str {
        match self {
            Suite::EllipticIdentities | Suite::LambdaLifts | Suite::Modular => "elliptic",
            Suite::QuinticRing => "quintic",
        }
    }
}

fn load(name: &str) -> Result<ModelSpec, CliError> {
    bcov_core::models::resolve_model(name).map_err(CliError::Load)
}

fn require_kind(m: &ModelSpec, kind: ModelKind, what: &str) -> Result<(), CliError> {
    if m.kind == kind {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} needs a {kind} model, '{}' is a {}", m.name, m.kind)))
    }
}

fn small_order_warning(r: &mut RunReport, order: i64) {
    if order < 2 {
        r.warnings
            .push(format!("order {order} leaves almost nothing to compare; checks pass vacuously"));
    }
}

fn load_check() -> Check {
    Check::pass("model load checks", "omega0 coefficients, Wronskian and holomorphic limit")
}

pub fn cmd_pf(model: &str, order: i64) -> Result<RunReport, CliError> {
    let m = load(model)?;
    let mut r = RunReport::new("pf", &m.name);
    r.order("x", order);
    r.checks.push(load_check());
    if m.pf.is_none() {
        return Err(CliError::Usage(format!("model '{}' has no Picard-Fuchs operator", m.name)));
    }
    let pd = m.periods(order)?;
    r.series("omega0", &pd.omega0);
    if order >= 1 {
        r.order("q", order);
        r.series("x_of_q", pd.x_of_q()?);
        r.series("q_of_x", pd.q_of_x()?);
        let c = m.yukawa()?;
        let n = if m.kind == ModelKind::Curve { 1 } else { 3 };
        let y = yukawa_flat_check(&pd, c, n, order)?;
        r.series("yukawa_flat", &y);
        if m.kind == ModelKind::Curve {
            let one = TruncatedSeries::one(Var::Q, order);
            r.checks.push(Check::series(
                "C_x (dx/dT) / w0^2 = 1",
                "elliptic Yukawa normalization",
                &y,
                &one,
                order,
            ));
        }
    } else {
        r.warnings.push("order 0: mirror map not computed".into());
    }
    let known = m.omega0_check.len() as i64;
    if known > order + 1 {
        r.warnings
            .push(format!("model lists {known} omega0 coefficients, only {} computed", order + 1));
    }
    Ok(r)
}

pub fn cmd_verify(model: Option<&str>, suite: Suite, order: i64) -> Result<RunReport, CliError> {
    let m = load(model.unwrap_or(suite.default_model()))?;
    let mut r = RunReport::new("verify", &m.name);
    r.payload.insert("suite".into(), json!(suite.name()));
    small_order_warning(&mut r, order);
    r.checks.push(load_check());
    match suite {
        Suite::EllipticIdentities => elliptic_identities(&m, order, &mut r)?,
        Suite::LambdaLifts => lambda_lifts(&m, order, &mut r)?,
        Suite::QuinticRing => quintic_ring(&m, order, &mut r)?,
        Suite::Modular => modular(order, &mut r)?,
    }
    Ok(r)
}

fn curve_periods(m: &ModelSpec, order: i64, what: &str) -> Result<PeriodData, CliError> {
    require_kind(m, ModelKind::Curve, what)?;
    Ok(m.periods(order.max(1) + 4)?)
}

fn elliptic_identities(m: &ModelSpec, order: i64, r: &mut RunReport) -> Result<(), CliError> {
    let pd = curve_periods(m, order, "elliptic-identities")?;
    let c_rf = m.yukawa()?;
    r.order("q", order);
    r.order("x", order);
    let xq = pd.x_of_q()?.truncate(order + 1);
    let w0 = pd.omega0.compose(&xq)?;
    let e4 = eisenstein(4, order)?.series;
    let eta = eta24(order)?.series;
    r.checks.push(Check::series("w0(x(q))^4 = E4(q)", "periods against Eisenstein series", &w0.pow(4)?, &e4, order));
    let cq = c_rf.expand(Var::X, order + 2).compose(&xq)?;
    let lhs = (&w0.pow(12)? / &cq)?;
    r.checks.push(Check::series("w0(x(q))^12 / C_x(x(q)) = eta(q)^24", "periods against eta", &lhs, &eta, order));
    // C has a simple pole at x = 0, which costs one order after composition
    let xq_deep = pd.x_of_q()?.truncate(order + 2);
    let c_deep = c_rf.expand(Var::X, order + 3).compose(&xq_deep)?;
    let j = j_normalized(order)?.series;
    r.checks.push(Check::series("j(q) = 1/(x(1 - 432 x))", "Hauptmodul", &j, &c_deep, order));
    let y = yukawa_flat_check(&pd, c_rf, 1, order)?;
    let one = TruncatedSeries::one(Var::Q, order);
    r.checks.push(Check::series("C_x (dx/dT) / w0^2 = 1", "elliptic Yukawa normalization", &y, &one, order));
    let real = EllipticRealization::new(&pd, c_rf, order.max(1))?;
    let shift = m.k_shift.clone().unwrap_or_else(|| int(-60));
    for (name, res) in real.ring_residuals(&shift)? {
        let check = match (0..=res.degree()).find(|&d| !res.coeff(d).is_zero()) {
            None => Check::pass(name, "almost-holomorphic ring in Q((x))[Y]"),
            Some(d) => {
                let c = res.coeff(d);
                Check::fail(name, "almost-holomorphic ring in Q((x))[Y]", c.valuation(), format!("Y^{d} coefficient {c}"))
            }
        };
        r.checks.push(check);
    }
    r.series("omega0", &pd.omega0.truncate(order));
    r.series("x_of_q", &xq.truncate(order));
    Ok(())
}

fn lambda_lifts(m: &ModelSpec, order: i64, r: &mut RunReport) -> Result<(), CliError> {
    let pd = curve_periods(m, order, "lambda-lifts")?;
    let c = elliptic_yukawa();
    r.order("q", order);
    let mut lifts = Map::new();
    for l in lambda_lift_table() {
        let tag = format!("lambda = {}", l.lambda);
        r.checks.push(Check::from_result(
            &format!("r' + C r^2 - 60 = lambda C, {tag}"),
            "lift condition",
            l.validate(&c),
        )?);
        r.checks.push(Check::from_result(
            &format!("S~ closed form in E2*, E4, E6, {tag}"),
            "lift against quasi-modular forms",
            tilde_s_modular_check(&l, &pd, order.max(1)),
        )?);
        lifts.insert(
            l.lambda.to_string(),
            json!({
                "r": l.r.to_string(),
                "e6_over_e4": l.closed_form.0.to_string(),
                "e4sq_over_e6": l.closed_form.1.to_string(),
            }),
        );
    }
    r.payload.insert("lifts".into(), Value::Object(lifts));
    Ok(())
}

fn quintic_ring(m: &ModelSpec, order: i64, r: &mut RunReport) -> Result<(), CliError> {
    require_kind(m, ModelKind::Threefold, "quintic-ring")?;
    let n = order.max(1);
    r.order("x", n);
    let pd = m.periods(n + 8)?;
    let hp = match hol_propagators(m, &pd, n) {
        Ok(hp) => hp,
        Err(e @ Error::Consistency { .. }) => {
            r.checks.push(Check::fail("holomorphic-limit derivative system", "propagator equations", None, e.to_string()));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    for (name, res) in &hp.residuals {
        let check = match res.valuation() {
            None => Check::pass(name, "propagator equations in the holomorphic limit"),
            Some(k) => Check::fail(name, "propagator equations in the holomorphic limit", Some(k), res.coeff(k).to_string()),
        };
        r.checks.push(check);
    }
    let pd_seed = m.periods(n + 14)?;
    let hp_seed = hol_propagators(m, &pd_seed, n + 4)?;
    r.checks.push(Check::from_result(
        "D F1 = 1/2 C S^xx - (chi/24 - 1) K integrates to the genus-one free energy",
        "genus-one seed",
        genus_one_seed_check(m, &pd_seed, &hp_seed, n),
    )?);
    for (name, s) in [("S^xx", &hp.s_xx), ("S^x", &hp.s_x), ("S", &hp.s), ("K_x", &hp.k)] {
        r.series(name, s);
    }
    Ok(())
}

fn modular(order: i64, r: &mut RunReport) -> Result<(), CliError> {
    let n = order.max(1);
    r.order("q", n);
    for p in [QuasiModularPoly::e2(), QuasiModularPoly::e4(), QuasiModularPoly::e6()] {
        let lhs = p.ramanujan_derive().evaluate(n)?;
        let rhs = p.evaluate(n)?.theta();
        r.checks.push(Check::series(
            &format!("Ramanujan derivative of {p}"),
            "q d/dq on Eisenstein series",
            &lhs,
            &rhs,
            n,
        ));
    }
    // every monomial E2*^a E4^b E6^c Y^d of weight <= 12
    let mut failures = Vec::new();
    let mut count = 0;
    for a in 0..=6u32 {
        for b in 0..=3u32 {
            for c in 0..=2u32 {
                for d in 0..=6u32 {
                    if 2 * a + 4 * b + 6 * c + 2 * d > 12 {
                        continue;
                    }
                    count += 1;
                    let p = AlmostHolPoly::monomial(int(1), [a, b, c, d]);
                    if p.almost_hol_derive().kz_constant_term() != p.kz_constant_term().ramanujan_derive() {
                        failures.push(p.to_string());
                    }
                }
            }
        }
    }
    let kz = "constant term map intertwines the two derivatives";
    r.checks.push(if failures.is_empty() {
        Check::pass(format!("Kaneko-Zagier intertwining on {count} monomials"), kz)
    } else {
        Check::fail("Kaneko-Zagier intertwining", kz, None, failures.join(", "))
    });
    let z01 = ZForm::new(1, QuasiModularPoly::e4());
    let anchor = "modular anomaly operator";
    r.checks.push(if z01.partial_e2().poly.is_zero() {
        Check::pass("dZ(0;1)/dE2 = 0", anchor)
    } else {
        Check::fail("dZ(0;1)/dE2 = 0", anchor, None, "nonzero")
    });
    let mut t = ZTable::new();
    t.insert((0, 1), z01.poly.clone());
    let expected: BTreeMap<(u32, u32), QuasiModularPoly> = [
        ((0, 2), (&z01.poly * &z01.poly).scale(&rat(1, 24))),
        ((1, 1), z01.poly.scale(&rat(1, 12))),
    ]
    .into_iter()
    .collect();
    for ((g, k), want) in expected {
        let got = modular_anomaly_rhs(&t, g, k)?;
        let name = format!("RHS({g};{k})");
        r.checks.push(if got.poly == want {
            Check::pass(name, anchor)
        } else {
            Check::fail(name, anchor, None, format!("got {}, expected {want}", got.poly))
        });
    }
    r.series("E2", &eisenstein(2, n)?.series);
    r.series("E4", &eisenstein(4, n)?.series);
    r.series("E6", &eisenstein(6, n)?.series);
    Ok(())
}

pub fn cmd_solve(
    model: &str,
    genus: u32,
    variant: Variant,
    holomorphic: bool,
    order: i64,
) -> Result<RunReport, CliError> {
    if genus < 2 {
        return Err(CliError::Usage(format!("--genus {genus}: the recursion starts at genus 2")));
    }
    let m = load(model)?;
    require_kind(&m, ModelKind::Threefold, "solve")?;
    if variant == Variant::Lifted && m.lift.is_none() {
        return Err(CliError::Usage(format!("model '{}' has no lift data", m.name)));
    }
    let mut r = RunReport::new("solve", &m.name);
    r.payload.insert(
        "variant".into(),
        json!(match variant {
            Variant::Reduced => "reduced",
            Variant::Lifted => "lifted",
        }),
    );
    r.checks.push(load_check());
    let sols = solve_to_genus(&m, genus, variant)?;
    let hol = if holomorphic {
        r.order("q", order);
        Some(hol_series(&m, &sols, order)?)
    } else {
        None
    };
    let mut genera = Map::new();
    for (i, s) in sols.iter().enumerate() {
        let g = s.genus;
        let d = &s.diagnostics;
        let anchor = "anomaly recursion";
        let named = |n: &str| format!("F{g}: {n}");
        r.checks.push(if d.k_residual.is_zero() {
            Check::pass(named("K-annihilation"), anchor)
        } else {
            Check::fail(named("K-annihilation"), anchor, None, d.k_residual.to_string())
        });
        r.checks.push(if d.weight_ok {
            Check::pass(named(&format!("weight {}", 2 - 2 * g as i32)), anchor)
        } else {
            Check::fail(named("weight"), anchor, None, format!("weight {}", s.f.weight()))
        });
        for (n, res) in d.target_residuals.iter().chain(&d.mixed_partial_residuals) {
            r.checks.push(if res.is_zero() {
                Check::pass(named(n), anchor)
            } else {
                Check::fail(named(n), anchor, None, res.to_string())
            });
        }
        let mut entry = Map::new();
        entry.insert("weight".into(), json!(s.f.weight()));
        entry.insert("terms".into(), element_json(&s.f));
        if let Some(h) = &hol {
            entry.insert("holomorphic_q".into(), crate::report::series_json(&h[i]));
            r.tables.push((format!("F{g}"), h[i].clone()));
        }
        genera.insert(g.to_string(), Value::Object(entry));
    }
    r.payload.insert("genera".into(), Value::Object(genera));
    Ok(r)
}

/// Holomorphic limits in `q`. Poles of the Yukawa coupling eat into the
/// truncation order, so the propagators are recomputed deeper until every
/// genus reaches `order`.
fn hol_series(m: &ModelSpec, sols: &[bcov_core::solver::GenusSolution], order: i64) -> Result<Vec<TruncatedSeries>, CliError> {
    let mut pad = 8;
    loop {
        let pd = m.periods(order + pad + 8)?;
        let hp = hol_propagators(m, &pd, order + pad)?;
        let out: Result<Vec<_>, _> = sols.iter().map(|s| holomorphic_evaluate(s, &pd, &hp, order)).collect();
        match out {
            Ok(v) => return Ok(v),
            Err(Error::OrderUnderflow { .. }) if pad < 512 => pad *= 2,
            Err(e) => return Err(e.into()),
        }
    }
}
