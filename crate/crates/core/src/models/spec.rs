use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use super::hol::hol_propagators;
use crate::error::{Error, Result};
use crate::exact::{int, parse_rational, parse_ratfunc, rat, Poly, Rational, RationalFunction};
use crate::picard_fuchs::{frobenius_solve, PFOperator, PeriodData};
use crate::ring::{DerivationTable, LiftData};

/// Order to which the holomorphic-limit equations are checked when a model
/// with both periods and lift data is loaded.
pub const LOAD_CHECK_ORDER: i64 = 8;

const BUILTIN: &[(&str, &str)] = &[
    ("elliptic", include_str!("../../../../models/elliptic.toml")),
    ("quintic", include_str!("../../../../models/quintic.toml")),
    ("two_cusp", include_str!("../../../../models/two_cusp.toml")),
];

/// Names of the models compiled into the library.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _)| *n)
}

/// Source text of a built-in model.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// One-modulus elliptic curve family.
    Curve,
    /// One-modulus Calabi-Yau threefold family.
    Threefold,
    /// Lift tensors only, without periods.
    LiftData,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Curve => "curve",
            ModelKind::Threefold => "threefold",
            ModelKind::LiftData => "lift-data",
        })
    }
}

/// Meromorphic lift tensors as recorded in a model file.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftSpec {
    pub f_tilde: Option<RationalFunction>,
    pub h_tilde: Option<RationalFunction>,
    pub e_xx: RationalFunction,
    pub e_x: RationalFunction,
    pub e: RationalFunction,
    pub kappa: Option<RationalFunction>,
    /// `C_{xxx}·κ^x`, either given directly or derived.
    pub c_kappa: RationalFunction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub kind: ModelKind,
    pub r: usize,
    pub chi: i64,
    pub basis: String,
    pub pf: Option<PFOperator>,
    pub omega0_check: Vec<Rational>,
    pub yukawa: Option<RationalFunction>,
    pub lift: Option<LiftSpec>,
    /// `D_x K_x = -K_x K_x + k_shift·C_x` for curves.
    pub k_shift: Option<Rational>,
    /// Genus-one holomorphic factor `f₀`; the lifted seed gains `∂ log f₀`.
    pub f0: Option<RationalFunction>,
    /// Holomorphic ambiguities `f_g`, zero when absent.
    pub ambiguities: BTreeMap<u32, RationalFunction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    kind: String,
    #[serde(default = "one")]
    r: usize,
    chi: i64,
    #[serde(default)]
    basis: String,
    yukawa: Option<String>,
    pf: Option<RawPf>,
    lift: Option<RawLift>,
    curve: Option<RawCurve>,
    #[serde(default)]
    ambiguities: BTreeMap<String, String>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPf {
    theta_coeffs: Vec<String>,
    omega0_check: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLift {
    f_tilde: Option<String>,
    h_tilde: Option<String>,
    e_xx: String,
    e_x: String,
    e: String,
    kappa: Option<String>,
    c_kappa: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    k_shift: String,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Model(format!("schema: {}", msg.into()))
}

fn field(name: &str, src: &str) -> Result<RationalFunction> {
    parse_ratfunc(src).map_err(|e| Error::Model(format!("field {name}: {e}")))
}

fn opt_field(name: &str, src: &Option<String>) -> Result<Option<RationalFunction>> {
    src.as_deref().map(|s| field(name, s)).transpose()
}

fn poly_field(name: &str, src: &str) -> Result<Poly> {
    let f = field(name, src)?;
    if !f.den().is_one() {
        return Err(schema(format!("{name} must be a polynomial in x")));
    }
    Ok(f.num().clone())
}

fn consistency(equation: &str, detail: impl Into<String>) -> Error {
    Error::Consistency {
        equation: equation.into(),
        detail: detail.into(),
    }
}

impl ModelSpec {
    /// Parses a model and performs the checks that need no series
    /// computation.
    pub fn parse_schema(src: &str) -> Result<ModelSpec> {
        let raw: RawModel = toml::from_str(src).map_err(|e| schema(e.message().to_string()))?;
        let kind = match raw.kind.as_str() {
            "curve" => ModelKind::Curve,
            "threefold" => ModelKind::Threefold,
            "lift-data" => ModelKind::LiftData,
            k => return Err(schema(format!("unknown kind '{k}'"))),
        };
        if raw.r != 1 {
            return Err(schema(format!("only one-modulus models are supported, got r = {}", raw.r)));
        }
        let yukawa = opt_field("yukawa", &raw.yukawa)?;
        if kind != ModelKind::LiftData {
            match &yukawa {
                None => return Err(schema("missing field 'yukawa'")),
                Some(c) if c.is_zero() => return Err(schema("yukawa must be nonzero")),
                _ => {}
            }
            if raw.pf.is_none() {
                return Err(schema("missing table [pf]"));
            }
        }
        let (pf, omega0_check) = match &raw.pf {
            Some(p) => {
                let coeffs = p
                    .theta_coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, s)| poly_field(&format!("pf.theta_coeffs[{k}]"), s))
                    .collect::<Result<Vec<_>>>()?;
                let op = PFOperator::new(coeffs).map_err(|e| schema(format!("pf: {e}")))?;
                let expect_order = match kind {
                    ModelKind::Curve => 2,
                    _ => 4,
                };
                if op.degree() != expect_order {
                    return Err(schema(format!(
                        "a {kind} needs a Picard-Fuchs operator of order {expect_order}, got {}",
                        op.degree()
                    )));
                }
                op.check_unipotent()?;
                if p.omega0_check.is_empty() {
                    return Err(schema("pf.omega0_check must list at least one coefficient"));
                }
                let checks = p
                    .omega0_check
                    .iter()
                    .map(|s| parse_rational(s).map_err(|e| schema(format!("pf.omega0_check: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                (Some(op), checks)
            }
            None => (None, Vec::new()),
        };
        let k_shift = match (&raw.curve, kind) {
            (Some(c), ModelKind::Curve) => {
                Some(parse_rational(&c.k_shift).map_err(|e| schema(format!("curve.k_shift: {e}")))?)
            }
            (None, ModelKind::Curve) => return Err(schema("missing table [curve]")),
            (Some(_), _) => return Err(schema("[curve] is only valid for kind = \"curve\"")),
            (None, _) => None,
        };
        let lift = match &raw.lift {
            Some(l) => {
                if kind == ModelKind::Curve {
                    return Err(schema("[lift] is not valid for curves"));
                }
                let f_tilde = opt_field("lift.f_tilde", &l.f_tilde)?;
                let h_tilde = opt_field("lift.h_tilde", &l.h_tilde)?;
                let kappa = opt_field("lift.kappa", &l.kappa)?;
                let given = opt_field("lift.c_kappa", &l.c_kappa)?;
                let from_kappa = match (&kappa, &yukawa) {
                    (Some(k), Some(c)) => Some(k * c),
                    _ => None,
                };
                let candidates = [
                    ("c_kappa", given),
                    ("C*kappa", from_kappa),
                    ("h_tilde", h_tilde.clone()),
                ];
                let known: Vec<_> = candidates.into_iter().filter_map(|(n, v)| v.map(|v| (n, v))).collect();
                let Some((_, c_kappa)) = known.first().cloned() else {
                    return Err(schema("lift needs one of c_kappa, kappa (with yukawa) or h_tilde"));
                };
                for (n, v) in &known[1..] {
                    if *v != c_kappa {
                        return Err(consistency(
                            "C_{xxx} kappa^x = h_tilde",
                            format!("{} gives {v}, {} gives {c_kappa}", n, known[0].0),
                        ));
                    }
                }
                Some(LiftSpec {
                    f_tilde,
                    h_tilde,
                    e_xx: field("lift.e_xx", &l.e_xx)?,
                    e_x: field("lift.e_x", &l.e_x)?,
                    e: field("lift.e", &l.e)?,
                    kappa,
                    c_kappa,
                })
            }
            None => {
                if kind == ModelKind::LiftData {
                    return Err(schema("missing table [lift]"));
                }
                None
            }
        };
        let mut f0 = None;
        let mut ambiguities = BTreeMap::new();
        for (k, v) in &raw.ambiguities {
            if k == "f0" {
                let f = field("ambiguities.f0", v)?;
                if f.is_zero() {
                    return Err(schema("ambiguities.f0 must be nonzero"));
                }
                f0 = Some(f);
                continue;
            }
            let g: u32 = k
                .parse()
                .map_err(|_| schema(format!("ambiguity key '{k}' is neither f0 nor a genus")))?;
            if g < 2 {
                return Err(schema(format!("ambiguity genus {g} is below 2")));
            }
            ambiguities.insert(g, field(&format!("ambiguities.{k}"), v)?);
        }
        Ok(ModelSpec {
            name: raw.name,
            kind,
            r: raw.r,
            chi: raw.chi,
            basis: raw.basis,
            pf,
            omega0_check,
            yukawa,
            lift,
            k_shift,
            f0,
            ambiguities,
        })
    }

    /// Full load: schema plus the period self-checks and, when both periods
    /// and lift data are present, the holomorphic-limit equations.
    pub fn parse(src: &str) -> Result<ModelSpec> {
        let m = Self::parse_schema(src)?;
        m.verify()?;
        Ok(m)
    }

    pub fn builtin(name: &str) -> Result<ModelSpec> {
        let src = builtin_source(name).ok_or_else(|| Error::Model(format!("no built-in model '{name}'")))?;
        Self::parse(src)
    }

    pub fn verify(&self) -> Result<()> {
        if let Some(op) = &self.pf {
            let n = self.omega0_check.len() as i64 - 1;
            let pd = frobenius_solve(op, n)?;
            for (k, want) in self.omega0_check.iter().enumerate() {
                let got = pd.omega0.coeff(k as i64);
                if &got != want {
                    return Err(consistency(
                        "omega0 recursion",
                        format!("coefficient of x^{k} is {got}, the model file lists {want}"),
                    ));
                }
            }
            if let Some(c) = &self.yukawa {
                wronskian_check(op, c)?;
            }
        }
        if self.pf.is_some() && self.lift.is_some() {
            let pd = self.periods(LOAD_CHECK_ORDER + 8)?;
            hol_propagators(self, &pd, LOAD_CHECK_ORDER)?;
        }
        Ok(())
    }

    /// Frobenius periods and mirror map through `x^order`.
    pub fn periods(&self, order: i64) -> Result<PeriodData> {
        let op = self
            .pf
            .as_ref()
            .ok_or_else(|| Error::Model(format!("model '{}' has no Picard-Fuchs operator", self.name)))?;
        frobenius_solve(op, order)?.mirror_map()
    }

    pub fn yukawa(&self) -> Result<&RationalFunction> {
        self.yukawa
            .as_ref()
            .ok_or_else(|| Error::Model(format!("model '{}' has no Yukawa coupling", self.name)))
    }

    pub fn lift_spec(&self) -> Result<&LiftSpec> {
        self.lift
            .as_ref()
            .ok_or_else(|| Error::Model(format!("model '{}' has no lift data", self.name)))
    }

    /// Lift data for the derivation table; needs the Yukawa coupling and `f̃`.
    pub fn lift_data(&self) -> Result<LiftData> {
        let l = self.lift_spec()?;
        let f_tilde = l
            .f_tilde
            .clone()
            .ok_or_else(|| Error::Model(format!("model '{}' has no f_tilde", self.name)))?;
        Ok(LiftData {
            yukawa: self.yukawa()?.clone(),
            f_tilde,
            e_xx: l.e_xx.clone(),
            e_x: l.e_x.clone(),
            e: l.e.clone(),
            c_kappa: l.c_kappa.clone(),
        })
    }

    /// Elliptic table for curves.
    pub fn curve_table(&self) -> Result<DerivationTable> {
        match (self.kind, &self.k_shift) {
            (ModelKind::Curve, Some(k)) => Ok(DerivationTable::elliptic(k.clone())),
            _ => Err(Error::Model(format!("model '{}' is not a curve", self.name))),
        }
    }

    /// `f_g`, zero unless configured.
    pub fn ambiguity(&self, g: u32) -> RationalFunction {
        self.ambiguities.get(&g).cloned().unwrap_or_else(RationalFunction::zero)
    }
}

/// Reads a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<ModelSpec> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Model(format!("cannot read {}: {e}", path.display())))?;
    ModelSpec::parse(&src)
}

/// A built-in name, or else a path to a model file.
pub fn resolve_model(name_or_path: &str) -> Result<ModelSpec> {
    if builtin_source(name_or_path).is_some() {
        ModelSpec::builtin(name_or_path)
    } else {
        load_model(name_or_path)
    }
}

/// For an operator of order `m` written in `d/dx`, the Yukawa coupling obeys
/// `C'/C = -(2/m)·a_{m-1}/a_m`. In `θ`-form `a_m = x^m p_m` and
/// `a_{m-1} = x^{m-1}(p_{m-1} + binom(m,2) p_m)`.
fn wronskian_check(op: &PFOperator, c: &RationalFunction) -> Result<()> {
    let m = op.degree() as i64;
    let ps = op.coeffs();
    let pm = RationalFunction::from_poly(ps[m as usize].clone());
    let pm1 = RationalFunction::from_poly(ps[m as usize - 1].clone());
    let a_ratio = (&(&pm1 + &pm.scale(&int(m * (m - 1) / 2))) / &(&pm * &RationalFunction::x()))?;
    let want = a_ratio.scale(&rat(-2, m));
    let got = c.log_derivative()?;
    if got != want {
        return Err(consistency(
            "C'/C = -(2/m) a_{m-1}/a_m",
            format!("Yukawa gives {got}, the operator gives {want}"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load() {
        for n in builtin_names() {
            ModelSpec::builtin(n).unwrap_or_else(|e| panic!("{n}: {e}"));
        }
    }

    #[test]
    fn quintic_data() {
        let m = ModelSpec::builtin("quintic").unwrap();
        assert_eq!(m.yukawa().unwrap(), &parse_ratfunc("5/(x^3*(1-3125*x))").unwrap());
        assert_eq!(m.chi, -200);
        assert_eq!(m.lift_spec().unwrap().c_kappa, parse_ratfunc("2/(25*x^2)").unwrap());
    }

    #[test]
    fn elliptic_data() {
        let m = ModelSpec::builtin("elliptic").unwrap();
        assert_eq!(m.yukawa().unwrap(), &parse_ratfunc("1/((1-432*x)*x)").unwrap());
        assert_eq!(m.k_shift, Some(int(-60)));
    }

    fn strip(src: &str, prefix: &str) -> String {
        src.lines().filter(|l| !l.starts_with(prefix)).collect::<Vec<_>>().join("\n")
    }

    #[test]
    fn missing_yukawa_is_schema_error() {
        let src = strip(builtin_source("quintic").unwrap(), "yukawa");
        match ModelSpec::parse_schema(&src) {
            Err(Error::Model(m)) => assert!(m.contains("yukawa"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_chi_is_schema_error() {
        let src = strip(builtin_source("quintic").unwrap(), "chi");
        assert!(matches!(ModelSpec::parse_schema(&src), Err(Error::Model(_))));
    }

    #[test]
    fn wrong_omega0_is_rejected() {
        let src = builtin_source("quintic").unwrap().replace("113400", "113401");
        assert!(matches!(ModelSpec::parse(&src), Err(Error::Consistency { .. })));
    }

    #[test]
    fn wrong_kappa_is_rejected() {
        let src = builtin_source("quintic").unwrap().replace("kappa = \"2*x", "kappa = \"3*x");
        assert!(matches!(ModelSpec::parse_schema(&src), Err(Error::Consistency { .. })));
    }

    #[test]
    fn wrong_lift_is_rejected() {
        let src = builtin_source("quintic").unwrap().replace("e_xx = \"x/25\"", "e_xx = \"x/26\"");
        match ModelSpec::parse(&src) {
            Err(Error::Consistency { equation, .. }) => assert!(equation.contains("S^{xx}"), "{equation}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wrong_yukawa_is_rejected() {
        let src = builtin_source("elliptic").unwrap().replace("1/((1 - 432*x)*x)", "1/((1 - 431*x)*x)");
        assert!(matches!(ModelSpec::parse(&src), Err(Error::Consistency { .. })));
    }

    #[test]
    fn unknown_field_rejected() {
        let src = format!("{}\nbogus = 1\n", builtin_source("elliptic").unwrap());
        assert!(ModelSpec::parse_schema(&src).is_err());
    }
}
