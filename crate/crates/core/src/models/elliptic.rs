use crate::error::{Error, Result};
use crate::exact::{int, rat, Poly, Rational, RationalFunction, TruncatedSeries, Var, YSeries};
use crate::modular::{eisenstein, AlmostHolPoly};
use crate::picard_fuchs::PeriodData;

/// `C_x = 1/((1-432x)x)`.
pub fn elliptic_yukawa() -> RationalFunction {
    let den = Poly::from_ints(&[0, 1, -432]);
    RationalFunction::new(Poly::one(), den).expect("nonzero denominator")
}

/// Generators of the curve ring realized in `Q((x))[Y]`, with
/// `∂_x Y = (C_x/ω₀²) Y²`.
#[derive(Clone, Debug)]
pub struct EllipticRealization {
    /// `Y/ω₀²`.
    pub s: YSeries,
    /// `C_x Y/ω₀² - ω₀'/ω₀`.
    pub k: YSeries,
    /// `Γ^x_xx = 2K_x + C_x'/C_x`.
    pub gamma: YSeries,
    pub c: TruncatedSeries,
    pub yukawa: RationalFunction,
    /// `C_x/ω₀²`, the derivation rule for `Y`.
    pub d_rule: TruncatedSeries,
    pub omega0: TruncatedSeries,
    pub order: i64,
}

impl EllipticRealization {
    pub fn new(pd: &PeriodData, yukawa: &RationalFunction, order: i64) -> Result<Self> {
        if pd.order() < order + 2 {
            return Err(Error::Domain {
                op: "elliptic_realization",
                what: format!("periods through x^{} (have x^{})", order + 2, pd.order()),
            });
        }
        let w0 = pd.omega0.truncate(order + 2);
        let inv_w0_sq = w0.pow(-2)?;
        let c = yukawa.expand(Var::X, order + 2);
        let d_rule = &c * &inv_w0_sq;
        let log_w0 = (&w0.derivative() / &w0)?;
        let s = YSeries::monomial(inv_w0_sq.clone(), 1);
        let k = &YSeries::monomial(d_rule.clone(), 1) - &YSeries::from_series(log_w0.clone());
        let c_log = yukawa.log_derivative()?.expand(Var::X, order + 2);
        let gamma = &k.scale(&int(2)) + &YSeries::from_series(c_log);
        Ok(EllipticRealization {
            s,
            k,
            gamma,
            c,
            yukawa: yukawa.clone(),
            d_rule,
            omega0: w0,
            order,
        })
    }

    /// `∂_x` on `Q((x))[Y]`.
    pub fn partial(&self, e: &YSeries) -> Result<YSeries> {
        e.y_derive(&self.d_rule)
    }

    /// `D_x e = ∂_x e - n Γ e + w K e` for an element of net lower rank `n`
    /// and weight `w`.
    pub fn covariant(&self, e: &YSeries, n: i64, w: i64) -> Result<YSeries> {
        let d = self.partial(e)?;
        Ok(&(&d - &(&self.gamma * e).scale(&int(n))) + &(&self.k * e).scale(&int(w)))
    }

    /// Residuals of `D S = -C S S`, `D K = -K K - 60 C`, `D C = 0` and, for a
    /// lift, `D S̃ = -C S̃ S̃ + λ C`. Each entry is `(name, residual)`.
    pub fn ring_residuals(&self, k_shift: &Rational) -> Result<Vec<(String, YSeries)>> {
        let c = YSeries::from_series(self.c.clone());
        let ds = self.covariant(&self.s, 0, -2)?;
        let dk = self.covariant(&self.k, 1, 0)?;
        let dc = self.covariant(&c, 1, 2)?;
        let o = self.order;
        Ok(vec![
            ("D S = -C S S".into(), (&ds + &(&c * &(&self.s * &self.s))).truncate(o)),
            (
                format!("D K = -K K + ({k_shift}) C"),
                (&(&dk + &(&self.k * &self.k)) - &c.scale(k_shift)).truncate(o),
            ),
            ("D C = 0".into(), dc.truncate(o)),
        ])
    }

    /// `S̃ = S + ΔS` with `ΔS = -(1/C)(ω₀'/ω₀) + r`.
    pub fn tilde_s(&self, lift: &LambdaLift) -> Result<YSeries> {
        let o = self.order + 2;
        let log_w0 = (&self.omega0.derivative() / &self.omega0)?;
        let c_inv = self.yukawa.recip()?.expand(Var::X, o);
        let delta = &lift.r.expand(Var::X, o) - &(&c_inv * &log_w0);
        Ok(&self.s + &YSeries::from_series(delta))
    }

    /// Residual of `D S̃ = -C S̃ S̃ + λ C`.
    pub fn tilde_s_residual(&self, lift: &LambdaLift) -> Result<YSeries> {
        let st = self.tilde_s(lift)?;
        let c = YSeries::from_series(self.c.clone());
        let d = self.covariant(&st, 0, -2)?;
        Ok((&(&d + &(&c * &(&st * &st))) - &c.scale(&lift.lambda)).truncate(self.order))
    }
}

/// A meromorphic shift `ΔS` of the curve propagator for which
/// `r' + C_x r² - 60 = λ C_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaLift {
    pub lambda: Rational,
    pub r: RationalFunction,
    /// Coefficients `(a, b, c)` of the closed form
    /// `S̃ = -(1/12ω₀²)(E₂* + a·E₆/E₄ + b·E₄²/E₆)`.
    pub closed_form: (Rational, Rational),
}

impl LambdaLift {
    /// `r' + C r² - 60 - λ C`; zero exactly when `r` defines a lift.
    pub fn defect(r: &RationalFunction, lambda: &Rational, c: &RationalFunction) -> RationalFunction {
        let lhs = &(&r.derivative() + &(c * &(r * r))) - &RationalFunction::constant(int(60));
        &lhs - &c.scale(lambda)
    }

    /// Whether `r' + C r² - 60` is a constant multiple of `C`; returns that
    /// constant.
    pub fn lift_constant(r: &RationalFunction, c: &RationalFunction) -> Option<Rational> {
        let e = &(&r.derivative() + &(c * &(r * r))) - &RationalFunction::constant(int(60));
        (&e / c).ok()?.as_constant()
    }

    pub fn validate(&self, c: &RationalFunction) -> Result<()> {
        let d = Self::defect(&self.r, &self.lambda, c);
        if d.is_zero() {
            Ok(())
        } else {
            Err(Error::Consistency {
                equation: format!("r' + C r^2 - 60 = ({}) C", self.lambda),
                detail: format!("defect {d}"),
            })
        }
    }
}

/// The four rational lifts with `λ = 1/144, 25/144, 49/144, 121/144`.
pub fn lambda_lift_table() -> Vec<LambdaLift> {
    let c = elliptic_yukawa();
    let base = (&c.derivative() / &c.pow(2).expect("nonzero")).expect("nonzero");
    let pole = RationalFunction::new(Poly::constant(rat(-1, 2)), Poly::from_ints(&[1, -864])).expect("nonzero");
    let entries = [
        (rat(1, 144), rat(1, 12), false, (0, 0)),
        (rat(25, 144), rat(5, 12), false, (4, 0)),
        (rat(49, 144), rat(1, 12), true, (0, 6)),
        (rat(121, 144), rat(5, 12), true, (4, 6)),
    ];
    entries
        .into_iter()
        .map(|(lambda, a, with_pole, (e6, e4sq))| {
            let mut r = base.scale(&a);
            if with_pole {
                r = &r + &pole;
            }
            LambdaLift {
                lambda,
                r,
                closed_form: (int(e6), int(e4sq)),
            }
        })
        .collect()
}

/// Compares `S̃(x(q))` with its closed form in Eisenstein series, as a
/// polynomial in `Y` with `q`-series coefficients, through `q^order`.
pub fn tilde_s_modular_check(lift: &LambdaLift, pd: &PeriodData, order: i64) -> Result<()> {
    let real = EllipticRealization::new(pd, &elliptic_yukawa(), order + 2)?;
    let xq = pd.x_of_q()?.truncate(order + 1);
    let lhs = real.tilde_s(lift)?.compose(&xq)?.truncate(order);
    let e2s = AlmostHolPoly::e2star().evaluate(order)?;
    let e4 = eisenstein(4, order)?.series;
    let e6 = eisenstein(6, order)?.series;
    let (a, b) = &lift.closed_form;
    let hol = &(&e6 / &e4)?.scale(a) + &(&e4.pow(2)? / &e6)?.scale(b);
    let w0q = real.omega0.compose(&xq)?;
    let pref = w0q.pow(-2)?.scale(&rat(-1, 12));
    let rhs = (&e2s + &YSeries::from_series(hol)).mul_series(&pref).truncate(order);
    match lhs.first_difference(&rhs) {
        None => Ok(()),
        Some((deg, exp)) => Err(Error::Mismatch {
            name: format!("S~ closed form for lambda = {} (Y^{deg})", lift.lambda),
            exponent: exp,
        }),
    }
}

/// `𝚝S = ΔS` for a lift: the `Y`-free part of `S̃`.
pub fn elliptic_hol_s(lift: &LambdaLift, pd: &PeriodData, order: i64) -> Result<TruncatedSeries> {
    let real = EllipticRealization::new(pd, &elliptic_yukawa(), order)?;
    Ok(real.tilde_s(lift)?.y_constant_term().truncate(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard_fuchs::{frobenius_solve, PFOperator};

    fn periods(n: i64) -> PeriodData {
        frobenius_solve(&PFOperator::elliptic(), n).unwrap().mirror_map().unwrap()
    }

    #[test]
    fn lifts_satisfy_riccati() {
        let c = elliptic_yukawa();
        let table = lambda_lift_table();
        assert_eq!(table.len(), 4);
        for l in &table {
            l.validate(&c).unwrap();
            assert_eq!(LambdaLift::lift_constant(&l.r, &c), Some(l.lambda.clone()));
        }
    }

    #[test]
    fn zero_shift_is_not_a_lift() {
        let c = elliptic_yukawa();
        assert_eq!(LambdaLift::lift_constant(&RationalFunction::zero(), &c), None);
    }

    #[test]
    fn ring_identities() {
        let pd = periods(20);
        let real = EllipticRealization::new(&pd, &elliptic_yukawa(), 15).unwrap();
        for (name, r) in real.ring_residuals(&int(-60)).unwrap() {
            assert_eq!(r.degree(), 0, "{name}");
            assert!(r.coeff(0).is_zero(), "{name}: {r}");
            assert!(r.order() >= 15, "{name}: order {}", r.order());
        }
        for l in lambda_lift_table() {
            let r = real.tilde_s_residual(&l).unwrap();
            assert!(r.coeff(0).is_zero() && r.degree() == 0, "{}", l.lambda);
        }
    }

    #[test]
    fn holomorphic_limit_of_k() {
        let pd = periods(12);
        let real = EllipticRealization::new(&pd, &elliptic_yukawa(), 10).unwrap();
        let w0 = &pd.omega0;
        let want = -(&w0.derivative() / w0).unwrap();
        assert_eq!(real.k.y_constant_term().first_difference(&want), None);
    }

    #[test]
    fn closed_forms() {
        let pd = periods(24);
        for l in lambda_lift_table() {
            tilde_s_modular_check(&l, &pd, 20).unwrap_or_else(|e| panic!("{}: {e}", l.lambda));
        }
    }

    #[test]
    fn closed_form_mismatch_detected() {
        let pd = periods(14);
        let mut l = lambda_lift_table().remove(1);
        l.closed_form.0 = int(5);
        assert!(matches!(tilde_s_modular_check(&l, &pd, 10), Err(Error::Mismatch { .. })));
    }
}
