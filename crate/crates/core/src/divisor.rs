//! Torus-invariant divisors, Picard coordinates and support functions.

use crate::error::{Error, Result};
use crate::exact::{kernel_lattice, IntMatrix};
use crate::fan::{Fan, Relation};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `sum a_i D_i`, one coefficient per ray in ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TDivisor(pub Vec<i64>);

impl TDivisor {
    /// `-K = sum D_i`.
    pub fn anticanonical(n_rays: usize) -> Self {
        Self(vec![1; n_rays])
    }

    /// The prime divisor `D_i`.
    pub fn prime(n_rays: usize, i: usize) -> Self {
        let mut a = vec![0; n_rays];
        a[i] = 1;
        Self(a)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.0.len() == fan.n_rays() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: fan.n_rays(),
                got: self.0.len(),
            })
        }
    }
}

/// Coordinates on the Picard group.
///
/// The class of `D` is the vector of intersection numbers `D . C_j` with the
/// Hermite-reduced basis `C_1..C_r` of the relation lattice, so the map is
/// onto `Z^r` with kernel the principal divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicBasis {
    relations: Vec<Relation>,
}

impl PicBasis {
    pub fn new(fan: &Fan) -> Result<Self> {
        fan.require_smooth_complete()?;
        let k = kernel_lattice(&fan.ray_matrix());
        let rows = k
            .to_i64_rows()
            .ok_or_else(|| Error::Malformed("relation lattice overflows i64".into()))?;
        Ok(Self {
            relations: rows.into_iter().map(Relation).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.relations.len()
    }

    /// Basis of the relation lattice, one relation per Picard coordinate.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn class_of(&self, d: &TDivisor) -> Vec<i64> {
        self.relations
            .iter()
            .map(|c| c.0.iter().zip(&d.0).map(|(x, y)| x * y).sum())
            .collect()
    }

    pub fn class_of_ray(&self, i: usize) -> Vec<i64> {
        self.relations.iter().map(|c| c.0[i]).collect()
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows(&self.relations.iter().map(|r| r.0.clone()).collect::<Vec<_>>())
    }
}

/// The character `m_D(cone)` with `<m, ray_i> = -a_i` on the rays of the cone.
pub fn support_function(fan: &Fan, d: &TDivisor, cone: usize) -> Result<Vec<i64>> {
    fan.require_smooth_complete()?;
    d.check_len(fan)?;
    Ok(support_function_unchecked(fan, d, cone))
}

pub(crate) fn support_function_unchecked(fan: &Fan, d: &TDivisor, cone: usize) -> Vec<i64> {
    let dual = fan.dual_basis(cone);
    let mut m = vec![0i64; fan.dim()];
    for (pos, &i) in fan.cone(cone).iter().enumerate() {
        for (k, mk) in m.iter_mut().enumerate() {
            *mk -= d.0[i] * dual[pos][k];
        }
    }
    m
}

fn pairing(m: &[i64], v: &[i64]) -> i64 {
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `phi_D(v) = <m_D(cone of v), v>`.
pub fn support_value(fan: &Fan, d: &TDivisor, v: &[BigRational]) -> Result<BigRational> {
    fan.require_smooth_complete()?;
    d.check_len(fan)?;
    let (c, _) = fan.locate_cone(v)?;
    let m = support_function_unchecked(fan, d, c);
    Ok(m.iter()
        .zip(v)
        .fold(BigRational::zero(), |acc, (a, b)| acc + BigRational::from_integer((*a).into()) * b))
}

/// Degree of `D` on the curve class `c`, i.e. `sum c_i a_i`.
///
/// Debug builds recompute it as `-sum c_i phi_D(ray_i)` and compare.
pub fn deg_relation(fan: &Fan, d: &TDivisor, c: &Relation) -> Result<i64> {
    fan.require_smooth_complete()?;
    d.check_len(fan)?;
    if !fan.is_relation(c) {
        return Err(Error::NotARelation);
    }
    let direct: i64 = c.0.iter().zip(&d.0).map(|(x, y)| x * y).sum();
    #[cfg(debug_assertions)]
    {
        let mut via_phi = 0i64;
        for (i, &ci) in c.0.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let v: Vec<BigRational> = fan.ray(i).iter().map(|&x| BigRational::from_integer(x.into())).collect();
            let phi = support_value(fan, d, &v)?;
            via_phi -= ci * phi.to_integer().to_i64().expect("support value fits");
        }
        debug_assert_eq!(direct, via_phi, "intersection formulas disagree");
    }
    Ok(direct)
}

/// Coefficients of `D(cone) = D + div(chi^{m_D(cone)})`, possibly negative.
pub(crate) fn d_sigma_unchecked(fan: &Fan, d: &TDivisor, cone: usize) -> Vec<i64> {
    let m = support_function_unchecked(fan, d, cone);
    fan.rays()
        .iter()
        .zip(&d.0)
        .map(|(r, a)| a + pairing(&m, r))
        .collect()
}

/// The linearly equivalent divisor `D(cone)`, zero on the rays of the cone.
///
/// Fails with [`Error::NotGloballyGenerated`] when some coefficient is negative.
pub fn d_sigma(fan: &Fan, d: &TDivisor, cone: usize) -> Result<TDivisor> {
    fan.require_smooth_complete()?;
    d.check_len(fan)?;
    let coeffs = d_sigma_unchecked(fan, d, cone);
    if let Some(ray) = coeffs.iter().position(|&x| x < 0) {
        return Err(Error::NotGloballyGenerated { cone, ray });
    }
    Ok(TDivisor(coeffs))
}
