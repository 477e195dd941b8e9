use super::spec::ModelSpec;
use crate::error::{Error, Result};
use crate::exact::{int, Poly, RationalFunction};

/// A rational tensor component with `lower` lower and `upper` upper indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub name: &'static str,
    pub lower: i32,
    pub upper: i32,
    pub value: RationalFunction,
}

/// `z = 1/x`, so `x = 1/z` and `dz/dx = -1/x²`.
fn inversion() -> RationalFunction {
    RationalFunction::new(Poly::one(), Poly::x()).expect("nonzero denominator")
}

/// Transforms a component to the coordinate `z = 1/x` by the tensor rule
/// `T_z = T_x (dx/dz)^lower (dz/dx)^upper`, written as a function of `z`.
pub fn to_inverse_coordinate(c: &Component) -> Result<RationalFunction> {
    let x_of_z = inversion();
    let dz_dx = RationalFunction::new(Poly::constant(int(-1)), Poly::monomial(int(1), 2))?;
    let factor = dz_dx.pow(c.upper - c.lower)?;
    (&c.value * &factor).compose(&x_of_z)
}

/// One exchange relation between the two cusps.
#[derive(Clone, Debug)]
pub struct CuspRelation {
    pub name: String,
    pub holds: bool,
    pub z_side: RationalFunction,
}

/// Checks the exchange relations `ℰ_z^{zz} = ℰ_x^{xx}(dz/dx)`,
/// `ℰ_z^z = ℰ_x^x`, `ℰ_z = ℰ_x(dx/dz)` and `C κ` rescaled by `(dx/dz)²`
/// against the tensor transformation law.
pub fn cusp_exchange(m: &ModelSpec) -> Result<Vec<CuspRelation>> {
    let l = m.lift_spec()?;
    let dz_dx = RationalFunction::new(Poly::constant(int(-1)), Poly::monomial(int(1), 2))?;
    let dx_dz = dz_dx.recip()?;
    let comps = [
        (Component { name: "E_z^{zz} = E_x^{xx} dz/dx", lower: 1, upper: 2, value: l.e_xx.clone() }, dz_dx.clone()),
        (Component { name: "E_z^z = E_x^x", lower: 1, upper: 1, value: l.e_x.clone() }, RationalFunction::one()),
        (Component { name: "E_z = E_x dx/dz", lower: 1, upper: 0, value: l.e.clone() }, dx_dz.clone()),
        // C_{zzz} κ^z = C_{xxx} (dx/dz)³ κ^x (dz/dx)
        (
            Component { name: "C_z kappa^z = C_x kappa^x (dx/dz)^2", lower: 2, upper: 0, value: l.c_kappa.clone() },
            dx_dz.pow(2)?,
        ),
    ];
    let x_of_z = inversion();
    comps
        .into_iter()
        .map(|(c, stated)| {
            let z_side = to_inverse_coordinate(&c)?;
            let printed = (&c.value * &stated).compose(&x_of_z)?;
            Ok(CuspRelation {
                name: c.name.to_string(),
                holds: z_side == printed,
                z_side,
            })
        })
        .collect()
}

/// Largest power of `(x - a)` dividing the reduced denominator.
pub fn pole_order(f: &RationalFunction, a: i64) -> usize {
    let lin = Poly::from_ints(&[-a, 1]);
    let mut d = f.den().clone();
    let mut k = 0;
    loop {
        let (q, r) = d.div_rem(&lin).expect("nonzero divisor");
        if !r.is_zero() {
            return k;
        }
        d = q;
        k += 1;
    }
}

/// Pole orders at `x = 3` of `ℰ^{xx}`, `ℰ^x`, `ℰ`.
pub fn apparent_pole_orders(m: &ModelSpec) -> Result<[usize; 3]> {
    let l = m.lift_spec()?;
    Ok([pole_order(&l.e_xx, 3), pole_order(&l.e_x, 3), pole_order(&l.e, 3)])
}

pub fn require_all(rel: &[CuspRelation]) -> Result<()> {
    match rel.iter().find(|r| !r.holds) {
        None => Ok(()),
        Some(r) => Err(Error::Consistency {
            equation: r.name.clone(),
            detail: format!("z-side component {}", r.z_side),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_ratfunc;

    #[test]
    fn two_cusp_relations_hold() {
        let m = ModelSpec::builtin("two_cusp").unwrap();
        let rel = cusp_exchange(&m).unwrap();
        assert_eq!(rel.len(), 4);
        require_all(&rel).unwrap();
        assert_eq!(apparent_pole_orders(&m).unwrap(), [2, 2, 3]);
    }

    #[test]
    fn scalar_component_unchanged_up_to_substitution() {
        let c = Component {
            name: "t",
            lower: 1,
            upper: 1,
            value: parse_ratfunc("x^2 + 1").unwrap(),
        };
        assert_eq!(to_inverse_coordinate(&c).unwrap(), parse_ratfunc("(1 + x^2)/x^2").unwrap());
    }

    #[test]
    fn vector_picks_up_jacobian() {
        // ∂/∂x = -z² ∂/∂z, so a vector component 1 along x becomes -z².
        let c = Component {
            name: "v",
            lower: 0,
            upper: 1,
            value: RationalFunction::one(),
        };
        assert_eq!(to_inverse_coordinate(&c).unwrap(), parse_ratfunc("-x^2").unwrap());
    }
}
