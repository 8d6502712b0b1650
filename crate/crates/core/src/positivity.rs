//! Nef, ample and big tests, and the effective cone.

use crate::divisor::{d_sigma_unchecked, PicBasis, TDivisor};
use crate::error::Result;
use crate::exact::{lp_feasible, lp_strict_feasible, RationalVector};
use crate::fan::Fan;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

/// A `(cone, ray)` pair at which a convexity inequality fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeRay {
    pub cone: usize,
    pub ray: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityWitnesses {
    /// First pair with `phi_D(ray) > <m_D(cone), ray>`.
    pub not_nef: Option<ConeRay>,
    /// First pair outside the cone where equality holds (only when nef).
    pub not_ample: Option<ConeRay>,
    /// A character in the interior of the polytope of `D`, when big.
    #[serde(serialize_with = "crate::serde_util::opt_rationals")]
    pub interior_point: Option<RationalVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub nef: bool,
    pub ample: bool,
    pub big: bool,
    /// Equal to `nef` on a smooth complete toric variety.
    pub globally_generated: bool,
    /// Equal to `ample` on a smooth complete toric variety.
    pub very_ample: bool,
    pub witnesses: PositivityWitnesses,
}

/// Positivity of `D` from convexity of its support function and an exact LP for bigness.
pub fn positivity(fan: &Fan, d: &TDivisor) -> Result<PositivityReport> {
    fan.require_smooth_complete()?;
    d.check_len(fan)?;
    let mut not_nef = None;
    let mut not_ample = None;
    'outer: for c in 0..fan.n_cones() {
        let ds = d_sigma_unchecked(fan, d, c);
        let mask = fan.cone_mask(c);
        for (ray, &x) in ds.iter().enumerate() {
            if x < 0 {
                not_nef = Some(ConeRay { cone: c, ray });
                break 'outer;
            }
            if x == 0 && mask & (1 << ray) == 0 && not_ample.is_none() {
                not_ample = Some(ConeRay { cone: c, ray });
            }
        }
    }
    if not_nef.is_some() {
        not_ample = None;
    }
    let nef = not_nef.is_none();
    let ample = nef && not_ample.is_none();
    let rows: Vec<Vec<BigRational>> = fan
        .rays()
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let rhs: Vec<BigRational> = d.0.iter().map(|&a| BigRational::from_integer((-a).into())).collect();
    let strict = lp_strict_feasible(&rows, &rhs);
    Ok(PositivityReport {
        nef,
        ample,
        big: strict.feasible,
        globally_generated: nef,
        very_ample: ample,
        witnesses: PositivityWitnesses {
            not_nef,
            not_ample,
            interior_point: strict.witness,
        },
    })
}

/// `(nef, ample)` read off the degrees of `D` on the wall curves.
pub fn wall_criterion(fan: &Fan, d: &TDivisor) -> Result<(bool, bool)> {
    d.check_len(fan)?;
    let degs: Vec<i64> = fan
        .walls()?
        .iter()
        .map(|w| w.relation.0.iter().zip(&d.0).map(|(c, a)| c * a).sum())
        .collect();
    Ok((degs.iter().all(|&x| x >= 0), degs.iter().all(|&x| x > 0)))
}

/// An extreme ray of the effective cone and the prime divisors on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeClass {
    /// Primitive generator in Picard coordinates.
    pub class: Vec<i64>,
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffConeReport {
    pub picard_rank: usize,
    pub extreme: Vec<ExtremeClass>,
    /// Number of extreme rays equals the Picard rank.
    pub simplicial: bool,
    /// First cone whose dual basis gives every outside ray nonpositive coordinates.
    pub sigma0: Option<usize>,
    /// `simplicial` agrees with the existence of `sigma0`.
    pub consistent: bool,
}

fn primitive_direction(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Extreme rays of the effective cone by one exact LP per generator direction.
pub fn effective_cone(fan: &Fan) -> Result<EffConeReport> {
    let pic = PicBasis::new(fan)?;
    let mut dirs: Vec<(Vec<i64>, Vec<usize>)> = Vec::new();
    for i in 0..fan.n_rays() {
        let d = primitive_direction(&pic.class_of_ray(i));
        match dirs.iter_mut().find(|(x, _)| *x == d) {
            Some((_, rays)) => rays.push(i),
            None => dirs.push((d, vec![i])),
        }
    }
    let to_q = |x: i64| BigRational::from_integer(x.into());
    let mut extreme = Vec::new();
    for (k, (d, rays)) in dirs.iter().enumerate() {
        let others: Vec<&Vec<i64>> = dirs.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, (v, _))| v).collect();
        let a: Vec<Vec<BigRational>> = (0..pic.rank())
            .map(|row| others.iter().map(|v| to_q(v[row])).collect())
            .collect();
        let b: Vec<BigRational> = d.iter().map(|&x| to_q(x)).collect();
        let inside = !others.is_empty() && lp_feasible(&a, &b).is_some();
        if !inside {
            extreme.push(ExtremeClass {
                class: d.clone(),
                rays: rays.clone(),
            });
        }
    }
    let sigma0 = sigma0(fan)?;
    let simplicial = extreme.len() == pic.rank();
    Ok(EffConeReport {
        picard_rank: pic.rank(),
        simplicial,
        consistent: simplicial == sigma0.is_some(),
        extreme,
        sigma0,
    })
}

/// First maximal cone in which every other ray has nonpositive coordinates.
pub fn sigma0(fan: &Fan) -> Result<Option<usize>> {
    fan.require_smooth_complete()?;
    Ok((0..fan.n_cones()).find(|&c| {
        let mask = fan.cone_mask(c);
        (0..fan.n_rays())
            .filter(|&j| mask & (1 << j) == 0)
            .all(|j| fan.cone_coords_i64(c, fan.ray(j)).iter().all(|&x| x <= 0))
    }))
}

/// For each ray `j` outside `cone`, the nonnegative `b` with `ray_j = -sum b_i ray_i` over the cone.
///
/// Entries of `b` follow the listed ray order of the cone. Meaningful when `cone` is a `sigma0`.
pub fn outside_coefficients(fan: &Fan, cone: usize) -> Vec<(usize, Vec<i64>)> {
    let mask = fan.cone_mask(cone);
    (0..fan.n_rays())
        .filter(|&j| mask & (1 << j) == 0)
        .map(|j| (j, fan.cone_coords_i64(cone, fan.ray(j)).iter().map(|x| -x).collect()))
        .collect()
}
