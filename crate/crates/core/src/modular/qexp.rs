use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rational, TruncatedSeries, Var, EXACT};

/// A `q`-expansion tagged with its modular weight.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub name: &'static str,
    pub weight: i32,
    pub series: TruncatedSeries,
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn divisor_sum(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Eisenstein series `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n` for `k = 2, 4, 6`.
pub fn eisenstein(k: u32, order: i64) -> Result<QExpansion> {
    let (c, name) = match k {
        2 => (-24, "E2"),
        4 => (240, "E4"),
        6 => (-504, "E6"),
        _ => return Err(Error::UnsupportedWeight(k)),
    };
    if order < 0 {
        return Err(Error::Domain {
            op: "eisenstein",
            what: "a nonnegative order".into(),
        });
    }
    let series = TruncatedSeries::from_fn(Var::Q, 0, order, |n| {
        if n == 0 {
            Rational::one()
        } else {
            Rational::from_integer(divisor_sum(k - 1, n as u64)) * int(c)
        }
    });
    Ok(QExpansion {
        name,
        weight: k as i32,
        series,
    })
}

/// `η^24 = q Π_{n>=1} (1 - q^n)^24`.
pub fn eta24(order: i64) -> Result<QExpansion> {
    if order < 1 {
        return Err(Error::Domain {
            op: "eta24",
            what: "order at least 1".into(),
        });
    }
    let inner = order - 1;
    let mut prod = TruncatedSeries::one(Var::Q, inner);
    for n in 1..=inner {
        let factor = TruncatedSeries::from_coeffs(
            Var::Q,
            0,
            (0..=n).map(|k| if k == 0 { int(1) } else if k == n { int(-1) } else { int(0) }).collect(),
            EXACT,
        );
        prod = &prod * &factor;
    }
    let series = prod.pow(24)?.shift(1);
    Ok(QExpansion {
        name: "eta24",
        weight: 12,
        series,
    })
}

/// `j = E_4^3 / η^24 = 1/q + 744 + ...`.
pub fn j_normalized(order: i64) -> Result<QExpansion> {
    let e4 = eisenstein(4, order + 2)?.series;
    let eta = eta24(order + 2)?.series;
    let series = (&e4.pow(3)? / &eta)?.truncate(order);
    Ok(QExpansion {
        name: "j",
        weight: 0,
        series,
    })
}
