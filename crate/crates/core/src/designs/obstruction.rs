use std::cmp::Ordering;

use serde::Serialize;

use super::DesignError;
use crate::groups::{GroupType, ReflectionGroup};
use crate::invariants::{a_obstruction_factors, corner_value};
use crate::scalar::Scalar;

/// Orbit sums `sum_{x in v_k^G} f(x)` of a harmonic polynomial that keeps
/// one sign over every corner orbit.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionTable {
    pub ty: GroupType,
    pub n: usize,
    pub label: &'static str,
    pub degree: u32,
    /// `(k, orbit sum)`.
    pub values: Vec<(usize, Scalar)>,
    /// For `A_n`, the factor `F(k)` carrying the sign.
    pub factor: Option<Vec<(usize, Scalar)>>,
    pub sign: i8,
}

impl ObstructionTable {
    /// No `X(G, J)` can be a design of this strength.
    pub fn forbidden_strength(&self) -> u32 {
        self.degree
    }
}

/// Signed orbit sums certifying that no `X(G, J)` reaches strength 6
/// (`A_n`) or 8 (`B_n`, `D_n`).
pub fn nonexistence_obstruction(ty: GroupType, n: usize) -> Result<ObstructionTable, DesignError> {
    let g = ReflectionGroup::new(ty, n)?;
    let (label, degree, expected) = match ty {
        GroupType::A => ("obstruction6", 6, Ordering::Less),
        GroupType::B | GroupType::D => ("f8", 8, Ordering::Greater),
    };
    let mut values = Vec::with_capacity(n);
    let mut factor = Vec::with_capacity(n);
    for k in 1..=n {
        let sum = match ty {
            GroupType::A => {
                let (g1, f) = a_obstruction_factors(n, k);
                if g1.signum() != Ordering::Greater {
                    return Err(DesignError::ObstructionSign { ty, n, k });
                }
                let s = &g1 * &f;
                factor.push((k, f));
                s
            }
            _ => {
                let nk = Scalar::from_bigint((g.corner_orbit_size(k) as i64).into());
                &nk * &corner_value(ty, n, k, label)?
            }
        };
        if sum.signum() != expected {
            return Err(DesignError::ObstructionSign { ty, n, k });
        }
        values.push((k, sum));
    }
    let sign = if expected == Ordering::Less { -1 } else { 1 };
    let factor = (ty == GroupType::A).then_some(factor);
    Ok(ObstructionTable {
        ty,
        n,
        label,
        degree,
        values,
        factor,
        sign,
    })
}
