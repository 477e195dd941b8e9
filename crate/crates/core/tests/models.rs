use std::path::PathBuf;

use bcov_core::exact::{int, parse_ratfunc, Rational, TruncatedSeries, Var};
use bcov_core::models::{hol_propagators, load_model, resolve_model, ModelKind, ModelSpec};
use bcov_core::picard_fuchs::yukawa_flat_check;
use bcov_core::ring::{Generator, Monomial, TensorType, TermKey};
use bcov_core::solver::{genus_one_seed_check, holomorphic_evaluate, solve_to_genus, Variant};
use bcov_core::Error;

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn files_on_disk_match_builtins() {
    for name in ["elliptic", "quintic", "two_cusp"] {
        let path = models_dir().join(format!("{name}.toml"));
        let from_disk = load_model(&path).unwrap();
        let builtin = ModelSpec::builtin(name).unwrap();
        assert_eq!(from_disk.name, builtin.name);
        assert_eq!(from_disk.chi, builtin.chi);
        let by_path = resolve_model(path.to_str().unwrap()).unwrap();
        assert_eq!(by_path.kind, builtin.kind);
    }
    assert_eq!(resolve_model("quintic").unwrap().kind, ModelKind::Threefold);
    assert!(resolve_model("no_such_model").is_err());
}

/// Genus-zero Gromov-Witten invariants of the quintic in degrees 1..=3,
/// as an outside reference for the instanton expansion of the Yukawa
/// coupling in flat coordinates.
#[test]
fn quintic_yukawa_instanton_expansion() {
    let m = ModelSpec::builtin("quintic").unwrap();
    let pd = m.periods(8).unwrap();
    let y = yukawa_flat_check(&pd, m.yukawa().unwrap(), 3, 3).unwrap();
    let n = [2875i64, 609250, 317206375];
    // 5 + Σ_d n_d d³ q^d/(1 - q^d)
    let mut want = vec![int(5), int(0), int(0), int(0)];
    for (i, nd) in n.iter().enumerate() {
        let d = i + 1;
        let mut k = d;
        while k <= 3 {
            want[k] += Rational::from_integer((nd * (d as i64).pow(3)).into());
            k += d;
        }
    }
    let want = TruncatedSeries::from_coeffs(Var::Q, 0, want, 3);
    assert_eq!(y.first_difference(&want), None, "{y}");
}

#[test]
fn quintic_genus_one_seed() {
    let m = ModelSpec::builtin("quintic").unwrap();
    let pd = m.periods(20).unwrap();
    let hp = hol_propagators(&m, &pd, 14).unwrap();
    genus_one_seed_check(&m, &pd, &hp, 10).unwrap();
}

#[test]
fn quintic_genus_two_structure() {
    let m = ModelSpec::builtin("quintic").unwrap();
    let sols = solve_to_genus(&m, 2, Variant::Reduced).unwrap();
    let f2 = &sols[0].f;
    assert_eq!(f2.weight(), -2);
    assert!(sols[0].diagnostics.all_zero());
    // the pure Ŝ term carries (χ/24 - 1) χ/24
    let hat_s = Monomial::of(Generator::HatS);
    let chi = Rational::new((-200).into(), 24.into());
    let want = (&chi - Rational::from_integer(1.into())) * &chi;
    assert_eq!(f2.coeff(&hat_s).as_constant(), Some(want));
}

#[test]
fn solver_output_is_deterministic() {
    let m = ModelSpec::builtin("quintic").unwrap();
    let a = solve_to_genus(&m, 3, Variant::Reduced).unwrap();
    let b = solve_to_genus(&m, 3, Variant::Reduced).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[1].f.to_string(), b[1].f.to_string());
}

#[test]
fn lifted_variant_adds_ambiguity() {
    let src = ModelSpec::builtin("quintic").unwrap();
    let mut m = src.clone();
    m.ambiguities.insert(2, parse_ratfunc("1/(1 - 3125*x)").unwrap());
    let plain = solve_to_genus(&src, 2, Variant::Lifted).unwrap();
    let with = solve_to_genus(&m, 2, Variant::Lifted).unwrap();
    let diff = &with[0].f - &plain[0].f;
    assert_eq!(diff.len(), 1);
    let key = TermKey {
        mono: Monomial::one(),
        ctype: TensorType::new(0, -2),
    };
    assert_eq!(diff.coeff_of(&key), parse_ratfunc("1/(1 - 3125*x)").unwrap());
}

#[test]
fn holomorphic_genus_two_is_a_q_series() {
    let m = ModelSpec::builtin("quintic").unwrap();
    let pd = m.periods(24).unwrap();
    let hp = hol_propagators(&m, &pd, 12).unwrap();
    let sols = solve_to_genus(&m, 2, Variant::Reduced).unwrap();
    let f2 = holomorphic_evaluate(&sols[0], &pd, &hp, 4).unwrap();
    assert_eq!(f2.var(), Var::Q);
    assert!(f2.order() >= 4);
}

#[test]
fn genus_bound_and_kind_errors() {
    let m = ModelSpec::builtin("quintic").unwrap();
    assert_eq!(solve_to_genus(&m, 1, Variant::Reduced), Err(Error::GenusBound(1)));
    let e = ModelSpec::builtin("elliptic").unwrap();
    assert!(matches!(solve_to_genus(&e, 2, Variant::Reduced), Err(Error::Unsupported(_))));
}
