//! Frobenius solutions of Picard-Fuchs operators at a point of maximal
//! unipotent monodromy, mirror map and holomorphic-limit connection data.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, LogSeries, Poly, Rational, RationalFunction, TruncatedSeries, Var, EXACT};

/// `Σ_k p_k(x) θ^k` with `θ = x d/dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct PFOperator {
    coeffs: Vec<Poly>,
}

impl PFOperator {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        match coeffs.last() {
            Some(p) if !p.is_zero() => Ok(PFOperator { coeffs }),
            _ => Err(Error::Domain {
                op: "PFOperator::new",
                what: "a nonzero top coefficient".into(),
            }),
        }
    }

    /// `θ^2 - 12x(6θ+1)(6θ+5)`.
    pub fn elliptic() -> Self {
        PFOperator::new(vec![
            Poly::from_ints(&[0, -60]),
            Poly::from_ints(&[0, -432]),
            Poly::from_ints(&[1, -432]),
        ])
        .expect("nonzero top coefficient")
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `P_j(θ)`: the coefficient of `x^j` when the operator is written as
    /// `Σ_j x^j P_j(θ)`. Entry `k` of the result multiplies `θ^k`.
    pub fn theta_poly(&self, j: usize) -> Poly {
        Poly::new(self.coeffs.iter().map(|p| p.coeff(j)).collect())
    }

    fn max_shift(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    /// Checks that the indicial polynomial is a multiple of `θ^m` with `m`
    /// the order of the operator and `m >= 2`.
    pub fn check_unipotent(&self) -> Result<()> {
        let p0 = self.theta_poly(0);
        let m = self.degree();
        let ok = m >= 2 && p0.degree() == Some(m) && p0.valuation() == Some(m);
        if ok {
            Ok(())
        } else {
            Err(Error::NotUnipotent(format!(
                "indicial polynomial {} is not c*θ^{m} with m >= 2",
                p0.fmt_in('θ')
            )))
        }
    }

    /// Applies the operator to a log-extended series.
    pub fn apply(&self, f: &LogSeries) -> LogSeries {
        let var = f.var();
        let mut acc = LogSeries::regular_only(TruncatedSeries::zero(var, f.order()));
        let mut th = f.clone();
        for (k, p) in self.coeffs.iter().enumerate() {
            if k > 0 {
                th = th.theta();
            }
            let ps = TruncatedSeries::from_poly(var, p, EXACT);
            acc = &acc + &th.mul_series(&ps);
        }
        acc
    }
}

impl fmt::Display for PFOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({p})")?;
            match k {
                0 => {}
                1 => f.write_str("*θ")?,
                _ => write!(f, "*θ^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `u + v ε` with `ε² = 0`.
#[derive(Clone, Debug)]
struct Dual {
    u: Rational,
    v: Rational,
}

impl Dual {
    fn mul(&self, o: &Dual) -> Dual {
        Dual {
            u: &self.u * &o.u,
            v: &self.u * &o.v + &self.v * &o.u,
        }
    }

    fn div(&self, o: &Dual) -> Dual {
        let u = &self.u / &o.u;
        let v = (&self.v * &o.u - &self.u * &o.v) / (&o.u * &o.u);
        Dual { u, v }
    }
}

/// `P(s + ε)` for a polynomial `P` in `θ`.
fn eval_dual(p: &Poly, s: i64) -> Dual {
    let s = int(s);
    Dual {
        u: p.eval(&s),
        v: p.derivative().eval(&s),
    }
}

/// Periods at the expansion point and, once computed, the mirror map.
#[derive(Clone, Debug)]
pub struct PeriodData {
    /// Holomorphic period, normalized to `1 + O(x)`.
    pub omega0: TruncatedSeries,
    /// Logarithmic period `ω₀ log x + ω̃₁` with `ω̃₁(0) = 0`.
    pub omega1: LogSeries,
    /// `T = ω₁/ω₀ = log x + (power series)`; `T = 2πi t`.
    pub mirror_t: Option<LogSeries>,
    /// `q(x) = x·exp(ω̃₁/ω₀)`.
    pub q_of_x: Option<TruncatedSeries>,
    /// Functional inverse `x(q)`.
    pub x_of_q: Option<TruncatedSeries>,
}

/// Frobenius basis `ω₀, ω₁` through `x^order`.
pub fn frobenius_solve(op: &PFOperator, order: i64) -> Result<PeriodData> {
    if order < 0 {
        return Err(Error::Domain {
            op: "frobenius_solve",
            what: "a nonnegative order".into(),
        });
    }
    op.check_unipotent()?;
    let shifts: Vec<Poly> = (0..=op.max_shift()).map(|j| op.theta_poly(j)).collect();
    let mut a: Vec<Dual> = vec![Dual {
        u: Rational::one(),
        v: Rational::zero(),
    }];
    for n in 1..=order {
        let mut rhs = Dual {
            u: Rational::zero(),
            v: Rational::zero(),
        };
        for (j, pj) in shifts.iter().enumerate().skip(1) {
            let j = j as i64;
            if j > n || pj.is_zero() {
                continue;
            }
            let t = eval_dual(pj, n - j).mul(&a[(n - j) as usize]);
            rhs.u -= t.u;
            rhs.v -= t.v;
        }
        a.push(rhs.div(&eval_dual(&shifts[0], n)));
    }
    let omega0 = TruncatedSeries::from_coeffs(Var::X, 0, a.iter().map(|d| d.u.clone()).collect(), order);
    let reg = TruncatedSeries::from_coeffs(Var::X, 0, a.iter().map(|d| d.v.clone()).collect(), order);
    Ok(PeriodData {
        omega1: LogSeries::new(reg, omega0.clone()),
        omega0,
        mirror_t: None,
        q_of_x: None,
        x_of_q: None,
    })
}

impl PeriodData {
    pub fn order(&self) -> i64 {
        self.omega0.order()
    }

    /// Completes the data with `T(x)`, `q(x)` and `x(q)`.
    pub fn mirror_map(mut self) -> Result<Self> {
        let ratio = (self.omega1.regular() / &self.omega0)?;
        let o = ratio.order();
        self.mirror_t = Some(LogSeries::new(ratio.clone(), TruncatedSeries::one(Var::X, o)));
        let q = ratio.exp()?.shift(1);
        self.x_of_q = Some(q.revert(Var::Q)?);
        self.q_of_x = Some(q);
        Ok(self)
    }

    fn need<'a>(&self, s: &'a Option<TruncatedSeries>) -> Result<&'a TruncatedSeries> {
        s.as_ref().ok_or(Error::Domain {
            op: "period data",
            what: "the mirror map (call mirror_map first)".into(),
        })
    }

    pub fn x_of_q(&self) -> Result<&TruncatedSeries> {
        self.need(&self.x_of_q)
    }

    pub fn q_of_x(&self) -> Result<&TruncatedSeries> {
        self.need(&self.q_of_x)
    }

    /// `dT/dx = 1/x + d/dx(ω̃₁/ω₀)`.
    pub fn dtdx(&self) -> Result<TruncatedSeries> {
        let t = self.mirror_t.as_ref().ok_or(Error::Domain {
            op: "period data",
            what: "the mirror map (call mirror_map first)".into(),
        })?;
        let reg = t.regular().derivative();
        Ok(&reg + &TruncatedSeries::monomial(Var::X, int(1), -1))
    }

    /// A series in `x` re-expressed in `q` through `x(q)`.
    pub fn to_q(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        s.compose(self.x_of_q()?)
    }
}

/// `(1/ω₀²)·C·(dx/dT)^n` as a `q`-series, where `n` is the number of
/// Yukawa indices (1 for a curve, 3 for a threefold).
pub fn yukawa_flat_check(
    pd: &PeriodData,
    c: &RationalFunction,
    n: u32,
    order: i64,
) -> Result<TruncatedSeries> {
    let xq = pd.x_of_q()?.truncate(order + 1);
    let w0 = pd.omega0.truncate(order).compose(&xq)?;
    let cq = c.expand(Var::X, order).compose(&xq)?;
    let dxdt = xq.theta();
    let out = &(&cq * &dxdt.pow(n as i64)?) / &w0.pow(2)?;
    Ok(out?.truncate(order))
}

/// Holomorphic limits of the Kähler connection and of the Christoffel symbol.
#[derive(Clone, Debug)]
pub struct HolLimitConnections {
    /// `-ω₀'/ω₀`.
    pub tt_k: TruncatedSeries,
    /// `(dx/dT)·d/dx(dT/dx)`; Laurent with leading term `-1/x`.
    pub tt_gamma: TruncatedSeries,
    pub dtdx: TruncatedSeries,
}

pub fn hol_connections(pd: &PeriodData, order: i64) -> Result<HolLimitConnections> {
    let w0 = pd.omega0.truncate(order + 1);
    let tt_k = -(&w0.derivative() / &w0)?;
    let dtdx = pd.dtdx()?.truncate(order);
    let tt_gamma = (&dtdx.derivative() / &dtdx)?;
    Ok(HolLimitConnections {
        tt_k: tt_k.truncate(order),
        tt_gamma: tt_gamma.truncate(order),
        dtdx,
    })
}
