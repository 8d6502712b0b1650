//! Primitive collections, the constant beta and the accumulating locus.

use crate::divisor::{PicBasis, TDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, Relation};
use crate::positivity::{outside_coefficients, positivity, sigma0};
use itertools::Itertools;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

/// Where the sum of a non-centred collection lands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumLocation {
    pub cone: usize,
    /// `(ray, coefficient)` with positive coefficient; the rays span the minimal cone.
    pub terms: Vec<(usize, i64)>,
}

/// A minimal set of rays not spanning a cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveCollection {
    pub rays: Vec<usize>,
    /// The rays sum to zero.
    pub centred: bool,
    pub sum: Option<SumLocation>,
}

impl PrimitiveCollection {
    /// The primitive relation `sum_{I} ray - sum coeff * ray = 0`.
    pub fn relation(&self, n_rays: usize) -> Relation {
        let mut c = vec![0i64; n_rays];
        for &i in &self.rays {
            c[i] += 1;
        }
        if let Some(s) = &self.sum {
            for &(i, a) in &s.terms {
                c[i] -= a;
            }
        }
        Relation(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollectionReport {
    pub collections: Vec<PrimitiveCollection>,
    /// Set when no collection is centred.
    pub warning: Option<String>,
}

impl CollectionReport {
    pub fn centred(&self) -> impl Iterator<Item = &PrimitiveCollection> {
        self.collections.iter().filter(|c| c.centred)
    }
}

/// Minimal non-faces, enumerated by increasing size.
pub fn primitive_collections(fan: &Fan) -> Result<CollectionReport> {
    fan.require_smooth_complete()?;
    let mut found: Vec<PrimitiveCollection> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    for size in 2..=fan.dim() + 1 {
        for subset in (0..fan.n_rays()).combinations(size) {
            let subset = subset.as_slice();
            let mask = subset.iter().fold(0u64, |m, &i| m | (1 << i));
            if masks.iter().any(|&p| p & mask == p) || fan.is_face(mask) {
                continue;
            }
            masks.push(mask);
            let total: Vec<i64> = (0..fan.dim())
                .map(|k| subset.iter().map(|&i| fan.ray(i)[k]).sum())
                .collect();
            let centred = total.iter().all(|&x| x == 0);
            let sum = (!centred).then(|| {
                let (cone, coords) = fan.locate_cone_i64(&total).expect("complete fan covers lattice points");
                SumLocation {
                    cone,
                    terms: fan
                        .cone(cone)
                        .iter()
                        .zip(coords)
                        .filter(|(_, a)| *a != 0)
                        .map(|(&i, a)| (i, a))
                        .collect(),
                }
            });
            found.push(PrimitiveCollection {
                rays: subset.to_vec(),
                centred,
                sum,
            });
        }
    }
    let warning = (!found.iter().any(|c| c.centred)).then(|| "no centred primitive collection".to_string());
    Ok(CollectionReport {
        collections: found,
        warning,
    })
}

fn degree_on(d: &TDivisor, rays: &[usize]) -> i64 {
    rays.iter().map(|&i| d.0[i]).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaReport {
    pub beta: i64,
    /// Every centred collection with the degree of `D` on its line.
    pub centred: Vec<(Vec<usize>, i64)>,
    /// Set only when the effective cone is simplicial (so beta is the approximation constant at a general point).
    pub alpha: Option<i64>,
}

/// `beta(D)`: the least degree of `D` over centred primitive collections.
pub fn beta(fan: &Fan, d: &TDivisor) -> Result<BetaReport> {
    let pos = positivity(fan, d)?;
    if !(pos.nef && pos.big) {
        return Err(Error::NotNefOrBig);
    }
    let pcs = primitive_collections(fan)?;
    let centred: Vec<(Vec<usize>, i64)> = pcs
        .centred()
        .map(|c| (c.rays.clone(), degree_on(d, &c.rays)))
        .collect();
    let beta = centred.iter().map(|(_, x)| *x).min().ok_or(Error::NoCpc)?;
    let alpha = sigma0(fan)?.map(|_| beta);
    Ok(BetaReport { beta, centred, alpha })
}

/// One component: the closure of `{y_j = 1 for j in fixed}` in the chart of `sigma0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocusComponent {
    pub cpc: Vec<usize>,
    /// Chart coordinates (positions in the cone of `sigma0`) left free.
    pub free: Vec<usize>,
    /// Chart coordinates set to one.
    pub fixed: Vec<usize>,
    /// Number of rays in the collection; the component is a projective space of one less dimension.
    pub cardinality: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccumulatingLocus {
    pub sigma0: usize,
    pub beta: i64,
    pub components: Vec<LocusComponent>,
}

impl AccumulatingLocus {
    /// Whether chart coordinates `y` (in the cone `sigma0`) lie on some component.
    pub fn contains(&self, y: &[BigRational]) -> bool {
        self.components
            .iter()
            .any(|c| c.fixed.iter().all(|&j| y[j].is_one()))
    }

    /// Components pairwise meet only at the base point: their free coordinates are disjoint.
    pub fn meets_only_at_base_point(&self) -> bool {
        self.components.iter().enumerate().all(|(k, a)| {
            self.components[k + 1..]
                .iter()
                .all(|b| a.free.iter().all(|j| !b.free.contains(j)))
        })
    }
}

/// The union of the centred-collection subvarieties through the base point of minimal degree.
pub fn accumulating_locus(fan: &Fan, d: &TDivisor) -> Result<AccumulatingLocus> {
    let pos = positivity(fan, d)?;
    if !pos.ample {
        return Err(Error::NotAmple);
    }
    let s0 = sigma0(fan)?.ok_or(Error::HypothesisStarFails)?;
    if PicBasis::new(fan)?.rank() == 1 {
        return Err(Error::IsProjectiveSpace);
    }
    let b = beta(fan, d)?;
    let cone = fan.cone(s0);
    let components = b
        .centred
        .iter()
        .filter(|(_, deg)| *deg == b.beta)
        .map(|(rays, _)| {
            let (free, fixed): (Vec<usize>, Vec<usize>) = (0..cone.len()).partition(|&p| rays.contains(&cone[p]));
            LocusComponent {
                cpc: rays.clone(),
                free,
                fixed,
                cardinality: rays.len(),
            }
        })
        .collect();
    Ok(AccumulatingLocus {
        sigma0: s0,
        beta: b.beta,
        components,
    })
}

/// What can be said about the locus for `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LocusStatus {
    Exact { locus: AccumulatingLocus },
    /// Globally generated and big but not ample: the centred lines only bound the constant from above.
    UpperBoundOnly { beta: i64 },
    NotApplicable { reason: String },
}

pub fn locus_status(fan: &Fan, d: &TDivisor) -> Result<LocusStatus> {
    match accumulating_locus(fan, d) {
        Ok(locus) => Ok(LocusStatus::Exact { locus }),
        Err(Error::NotAmple) => match beta(fan, d) {
            Ok(b) => Ok(LocusStatus::UpperBoundOnly { beta: b.beta }),
            Err(e) => Ok(LocusStatus::NotApplicable { reason: e.to_string() }),
        },
        Err(e @ (Error::HypothesisStarFails | Error::IsProjectiveSpace | Error::NoCpc)) => {
            Ok(LocusStatus::NotApplicable { reason: e.to_string() })
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticItem {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl DiagnosticItem {
    fn from_failures(failures: Vec<String>) -> Self {
        Self {
            pass: failures.is_empty(),
            failures,
        }
    }
}

/// Checks of the structural consequences of the effective-cone hypothesis for `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarDiagnostics {
    pub sigma0: usize,
    pub beta: i64,
    /// `(outside ray, b over the cone of sigma0, degree of its relation)`.
    pub outside: Vec<(usize, Vec<i64>, i64)>,
    /// Each outside-ray relation is positive with degree at least beta.
    pub relations_bounded: DiagnosticItem,
    /// Each centred collection has exactly one ray outside the cone.
    pub one_outside_ray: DiagnosticItem,
    pub cpcs_disjoint: DiagnosticItem,
    /// Degree of each outside relation is at least `b * beta` for each of its coefficients.
    pub degree_grid: DiagnosticItem,
}

impl StarDiagnostics {
    pub fn all_pass(&self) -> bool {
        self.relations_bounded.pass && self.one_outside_ray.pass && self.cpcs_disjoint.pass && self.degree_grid.pass
    }
}

pub fn diagnostics_star(fan: &Fan, d: &TDivisor) -> Result<StarDiagnostics> {
    let s0 = sigma0(fan)?.ok_or(Error::HypothesisStarFails)?;
    let b = beta(fan, d)?;
    let cone = fan.cone(s0).to_vec();
    let outside: Vec<(usize, Vec<i64>, i64)> = outside_coefficients(fan, s0)
        .into_iter()
        .map(|(j, bs)| {
            let deg = d.0[j] + cone.iter().zip(&bs).map(|(&i, bi)| bi * d.0[i]).sum::<i64>();
            (j, bs, deg)
        })
        .collect();
    let mut f_a = Vec::new();
    let mut f_d = Vec::new();
    for (j, bs, deg) in &outside {
        if bs.iter().any(|&x| x < 0) {
            f_a.push(format!("relation of ray {j} is not positive"));
        }
        if *deg < b.beta {
            f_a.push(format!("relation of ray {j} has degree {deg} < {}", b.beta));
        }
        for (pos, bi) in bs.iter().enumerate() {
            if *deg < bi * b.beta {
                f_d.push(format!("degree {deg} of ray {j} below {bi} * beta at ray {}", cone[pos]));
            }
        }
    }
    let mut f_b = Vec::new();
    for (rays, _) in &b.centred {
        let out = rays.iter().filter(|i| !cone.contains(i)).count();
        if out != 1 {
            f_b.push(format!("collection {rays:?} has {out} rays outside the cone"));
        }
    }
    let mut f_c = Vec::new();
    for (k, (a, _)) in b.centred.iter().enumerate() {
        for (c, _) in &b.centred[k + 1..] {
            if a.iter().any(|i| c.contains(i)) {
                f_c.push(format!("collections {a:?} and {c:?} meet"));
            }
        }
    }
    Ok(StarDiagnostics {
        sigma0: s0,
        beta: b.beta,
        outside,
        relations_bounded: DiagnosticItem::from_failures(f_a),
        one_outside_ray: DiagnosticItem::from_failures(f_b),
        cpcs_disjoint: DiagnosticItem::from_failures(f_c),
        degree_grid: DiagnosticItem::from_failures(f_d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn p2_has_one_centred_collection() {
        let r = primitive_collections(&p2()).unwrap();
        assert_eq!(r.collections.len(), 1);
        assert_eq!(r.collections[0].rays, vec![0, 1, 2]);
        assert!(r.collections[0].centred);
        assert!(r.warning.is_none());
    }

    #[test]
    fn p2_beta_and_locus() {
        let b = beta(&p2(), &TDivisor::anticanonical(3)).unwrap();
        assert_eq!(b.beta, 3);
        assert_eq!(b.alpha, Some(3));
        assert_eq!(
            accumulating_locus(&p2(), &TDivisor::anticanonical(3)),
            Err(Error::IsProjectiveSpace)
        );
    }
}
