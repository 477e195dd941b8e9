use super::spec::ModelSpec;
use crate::error::{Error, Result};
use crate::exact::{rat, RationalFunction, TruncatedSeries, Var};
use crate::picard_fuchs::{hol_connections, PeriodData};

/// Holomorphic limits of the propagators of a one-modulus threefold, as
/// `x`-series, with the residuals of the derivative system.
#[derive(Clone, Debug)]
pub struct HolPropagators {
    pub s_xx: TruncatedSeries,
    pub s_x: TruncatedSeries,
    pub s: TruncatedSeries,
    pub k: TruncatedSeries,
    pub gamma: TruncatedSeries,
    pub yukawa: TruncatedSeries,
    pub residuals: Vec<(String, TruncatedSeries)>,
}

pub const EQ_GAMMA: &str = "Gamma = 2 K - C S^{xx} + f_tilde";
pub const EQ_DK: &str = "D K = -K K + C S^{xx} K - C S^x + C kappa";
pub const EQ_DSXX: &str = "D S^{xx} = 2 S^x - C S^{xx} S^{xx} + E^{xx}";
pub const EQ_DSX: &str = "D S^x = 2 S - C S^x S^{xx} + E^{xx} K + E^x";
pub const EQ_DS: &str = "D S = -1/2 C S^x S^x + 1/2 E^{xx} K K + E^x K + E";

fn ex(f: &RationalFunction, order: i64) -> TruncatedSeries {
    f.expand(Var::X, order)
}

/// Solves the holomorphic-limit relations for `S^{xx}` and `S^x`, takes `S`
/// from the `D S^x` equation and re-substitutes everything into the full
/// derivative system. Every residual must vanish through `order`.
pub fn hol_propagators(m: &ModelSpec, pd: &PeriodData, order: i64) -> Result<HolPropagators> {
    if m.r != 1 {
        return Err(Error::Unsupported("holomorphic propagators for r > 1".into()));
    }
    let lift = m.lift_spec()?;
    let f = lift
        .f_tilde
        .as_ref()
        .ok_or_else(|| Error::Model(format!("model '{}' has no f_tilde", m.name)))?;
    let h = lift.h_tilde.as_ref().unwrap_or(&lift.c_kappa);
    let c_rf = m.yukawa()?;
    let n = pd.order();
    let pad = n + 8;
    let conn = hol_connections(pd, n)?;
    let k = conn.tt_k;
    let g = conn.tt_gamma;
    let c = ex(c_rf, pad);
    let c_inv = ex(&c_rf.recip()?, pad);
    let (f, h) = (ex(f, pad), ex(h, pad));
    let (e_xx, e_x, e) = (ex(&lift.e_xx, pad), ex(&lift.e_x, pad), ex(&lift.e, pad));
    let c_kappa = ex(&lift.c_kappa, pad);
    let two = rat(2, 1);
    let half = rat(1, 2);

    let s_xx = &(&(&k.scale(&two) + &f) - &g) * &c_inv;
    let s_x = &(&(&(&k * &k) - &k.derivative()) + &(&(&f * &k) + &h)) * &c_inv;
    let ds_x_lhs = &(&s_x.derivative() + &(&g * &s_x)) - &(&k * &s_x).scale(&two);
    let s = (&(&(&ds_x_lhs + &(&c * &(&s_x * &s_xx))) - &(&e_xx * &k)) - &e_x).scale(&half);

    let residuals = vec![
        (EQ_GAMMA.to_string(), &g - &(&(&k.scale(&two) - &(&c * &s_xx)) + &f)),
        (
            EQ_DK.to_string(),
            &(&k.derivative() - &(&g * &k))
                - &(&(&(&(&c * &(&s_xx * &k)) - &(&k * &k)) - &(&c * &s_x)) + &c_kappa),
        ),
        (
            EQ_DSXX.to_string(),
            &(&(&s_xx.derivative() + &(&g * &s_xx).scale(&two)) - &(&k * &s_xx).scale(&two))
                - &(&(&s_x.scale(&two) - &(&c * &(&s_xx * &s_xx))) + &e_xx),
        ),
        (
            EQ_DSX.to_string(),
            &ds_x_lhs - &(&(&(&s.scale(&two) - &(&c * &(&s_x * &s_xx))) + &(&e_xx * &k)) + &e_x),
        ),
        (
            EQ_DS.to_string(),
            &(&s.derivative() - &(&k * &s).scale(&two))
                - &(&(&(&(&c * &(&s_x * &s_x)).scale(&-&half) + &(&e_xx * &(&k * &k)).scale(&half))
                    + &(&e_x * &k))
                    + &e),
        ),
    ];
    for (name, r) in &residuals {
        if r.order() < order {
            return Err(Error::OrderUnderflow { order: r.order() });
        }
        if let Some(exp) = r.truncate(order).valuation() {
            return Err(Error::Consistency {
                equation: name.clone(),
                detail: format!("residual has coefficient {} at x^{exp}", r.coeff(exp)),
            });
        }
    }
    let t = |s: &TruncatedSeries| s.truncate(order);
    Ok(HolPropagators {
        s_xx: t(&s_xx),
        s_x: t(&s_x),
        s: t(&s),
        k: t(&k),
        gamma: t(&g),
        yukawa: t(&c),
        residuals: residuals.into_iter().map(|(n, r)| (n, r.truncate(order))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_residuals_vanish() {
        let m = ModelSpec::builtin("quintic").unwrap();
        let pd = m.periods(20).unwrap();
        let hp = hol_propagators(&m, &pd, 12).unwrap();
        assert_eq!(hp.residuals.len(), 5);
        for (name, r) in &hp.residuals {
            assert!(r.is_zero(), "{name}: {r}");
            assert!(r.order() >= 12);
        }
        // S^{xx} starts at x^2 since f̃ - Γ ~ (-8/5 + 1)/x and 1/C ~ x^3/5.
        assert_eq!(hp.s_xx.valuation(), Some(2));
    }
}
