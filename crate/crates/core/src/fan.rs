//! Simplicial fans: validation, point location and walls.

use crate::error::{Error, Result};
use crate::exact::{solve_rational, IntMatrix, RationalVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const COVERAGE_SAMPLES: usize = 100;
const COVERAGE_SEED: u64 = 0x7061_6e5f_636f_7665;

/// On-disk fan description: rays as integer rows, cones as 0-based ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// Outcome of the smoothness and completeness checks, computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub smooth: bool,
    pub complete: bool,
    /// Every failed check, in the order they were found.
    #[serde(serialize_with = "crate::serde_util::errors")]
    pub issues: Vec<Error>,
}

/// A simplicial fan with one cone per `dim`-subset of rays listed in `max_cones`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FanFile", into = "FanFile")]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    cone_masks: Vec<u64>,
    duals: Vec<Option<Vec<Vec<i64>>>>,
    report: ValidationReport,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl TryFrom<FanFile> for Fan {
    type Error = Error;
    fn try_from(f: FanFile) -> Result<Fan> {
        Fan::new(f.dim, f.rays, f.max_cones)
    }
}

impl From<Fan> for FanFile {
    fn from(f: Fan) -> FanFile {
        FanFile {
            dim: f.dim,
            rays: f.rays,
            max_cones: f.max_cones,
        }
    }
}

/// Integer coefficients `c` with `sum c_i ray_i = 0`, i.e. a curve class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Relation(pub Vec<i64>);

impl Relation {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Nonzero with all coefficients nonnegative.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] != 0).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Relation) -> Relation {
        Relation(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Relation {
        Relation(self.0.iter().map(|a| a * k).collect())
    }
}

/// A codimension-one cone shared by two maximal cones, with its wall relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// Rays of the wall, ascending.
    pub rays: Vec<usize>,
    pub cones: [usize; 2],
    /// The ray completing the wall to each of the two cones.
    pub completing: [usize; 2],
    /// `u + u' + sum b_i v_i = 0` as a coefficient vector over all rays.
    pub relation: Relation,
}

fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

impl Fan {
    /// Builds a fan after shape checks; smoothness and completeness are recorded in [`Fan::report`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        if rays.len() > 64 {
            return Err(Error::Malformed("at most 64 rays are supported".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Malformed(format!("ray {i} has length {}, expected {dim}", r.len())));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::Malformed(format!("ray {i} is zero")));
            }
        }
        let mut cone_masks = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.iter().enumerate() {
            if cone.len() != dim {
                return Err(Error::Malformed(format!("cone {c} has {} rays, expected {dim}", cone.len())));
            }
            let mut mask = 0u64;
            for &i in cone {
                if i >= rays.len() {
                    return Err(Error::Malformed(format!("cone {c} refers to missing ray {i}")));
                }
                if mask & (1 << i) != 0 {
                    return Err(Error::Malformed(format!("cone {c} repeats ray {i}")));
                }
                mask |= 1 << i;
            }
            cone_masks.push(mask);
        }
        if max_cones.is_empty() {
            return Err(Error::Malformed("fan has no cones".into()));
        }
        let mut fan = Fan {
            dim,
            rays,
            max_cones,
            cone_masks,
            duals: Vec::new(),
            report: ValidationReport {
                smooth: false,
                complete: false,
                issues: Vec::new(),
            },
        };
        fan.duals = (0..fan.max_cones.len())
            .map(|c| {
                fan.cone_matrix(c)
                    .unimodular_inverse()
                    .and_then(|m| m.to_i64_rows())
            })
            .collect();
        fan.report = fan.run_validation();
        Ok(fan)
    }

    pub fn from_json(s: &str) -> Result<Fan> {
        let file: FanFile = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Fan::try_from(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FanFile::from(self.clone())).expect("fan serializes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, c: usize) -> &[usize] {
        &self.max_cones[c]
    }

    pub fn n_cones(&self) -> usize {
        self.max_cones.len()
    }

    /// Rank of the Picard group, `#rays - dim`.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - self.dim
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_smooth_complete(&self) -> bool {
        self.report.smooth && self.report.complete
    }

    /// Fails with the first recorded issue unless the fan is smooth and complete.
    pub fn require_smooth_complete(&self) -> Result<()> {
        if self.is_smooth_complete() {
            Ok(())
        } else {
            let why = self
                .report
                .issues
                .first()
                .map_or_else(|| "unknown".to_string(), |e| e.to_string());
            Err(Error::NotSmoothComplete(why))
        }
    }

    /// `dim x #rays` matrix whose columns are the rays.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_columns(&self.rays, self.dim)
    }

    /// Square matrix whose columns are the rays of cone `c`, in listed order.
    pub fn cone_matrix(&self, c: usize) -> IntMatrix {
        let cols: Vec<&Vec<i64>> = self.max_cones[c].iter().map(|&i| &self.rays[i]).collect();
        IntMatrix::from_i64_columns(&cols, self.dim)
    }

    /// Rows are the dual basis of cone `c` (so `dual * ray_j = e_j`). Panics on a non-unimodular cone.
    pub fn dual_basis(&self, c: usize) -> &[Vec<i64>] {
        self.duals[c]
            .as_deref()
            .expect("dual basis requested for a non-unimodular cone")
    }

    pub fn cone_mask(&self, c: usize) -> u64 {
        self.cone_masks[c]
    }

    /// Whether the ray set `mask` spans a cone of the fan.
    pub fn is_face(&self, mask: u64) -> bool {
        self.cone_masks.iter().any(|&m| m & mask == mask)
    }

    /// Coordinates of an integer vector in the ray basis of cone `c`.
    pub fn cone_coords_i64(&self, c: usize, v: &[i64]) -> Vec<i64> {
        self.dual_basis(c)
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn cone_coords_rational(&self, c: usize, v: &[BigRational]) -> Option<RationalVector> {
        match &self.duals[c] {
            Some(d) => Some(
                d.iter()
                    .map(|row| {
                        row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| {
                            acc + BigRational::from_integer((*a).into()) * b
                        })
                    })
                    .collect(),
            ),
            None => {
                let m = big_rows(&self.cone_matrix(c).to_i64_rows()?);
                solve_rational(&m, v)
            }
        }
    }

    /// First maximal cone containing `v`, with the (nonnegative) coordinates of `v` on its rays.
    pub fn locate_cone(&self, v: &[BigRational]) -> Result<(usize, RationalVector)> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        for c in 0..self.max_cones.len() {
            if let Some(coords) = self.cone_coords_rational(c, v) {
                if coords.iter().all(|x| !x.is_negative()) {
                    return Ok((c, coords));
                }
            }
        }
        Err(Error::NotSmoothComplete("point not covered by any cone".into()))
    }

    /// Integer variant of [`Fan::locate_cone`]; requires a smooth fan.
    pub fn locate_cone_i64(&self, v: &[i64]) -> Option<(usize, Vec<i64>)> {
        (0..self.max_cones.len()).find_map(|c| {
            let coords = self.cone_coords_i64(c, v);
            coords.iter().all(|&x| x >= 0).then_some((c, coords))
        })
    }

    fn run_validation(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for (i, r) in self.rays.iter().enumerate() {
            let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
            if g != 1 {
                issues.push(Error::RaysNotPrimitive { ray: i });
            }
        }
        for (c, d) in self.duals.iter().enumerate() {
            if d.is_none() {
                issues.push(Error::ConeNotUnimodular { cone: c });
            }
        }
        let smooth = issues.is_empty();
        let mut complete = true;
        for (rays, entries) in self.wall_incidence() {
            if entries.len() != 2 || !self.separates(&rays, entries[0].1, entries[1].1) {
                issues.push(Error::FacetUnpaired { rays });
                complete = false;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(COVERAGE_SEED);
        for sample in 0..COVERAGE_SAMPLES {
            let v: RationalVector = (0..self.dim)
                .map(|_| BigRational::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=97).into()))
                .collect();
            if self.locate_cone(&v).is_err() {
                issues.push(Error::PointNotCovered { sample });
                complete = false;
                break;
            }
        }
        ValidationReport {
            smooth,
            complete,
            issues,
        }
    }

    /// Each codimension-one face with its (cone, completing ray) incidences, keyed by sorted rays.
    fn wall_incidence(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in self.max_cones.iter().enumerate() {
            for &u in cone {
                let mut wall: Vec<usize> = cone.iter().copied().filter(|&i| i != u).collect();
                wall.sort_unstable();
                map.entry(wall).or_default().push((c, u));
            }
        }
        map
    }

    /// Whether `u` and `w` lie strictly on opposite sides of the span of `wall`.
    fn separates(&self, wall: &[usize], u: usize, w: usize) -> bool {
        let side = |x: usize| {
            let mut cols: Vec<&Vec<i64>> = wall.iter().map(|&i| &self.rays[i]).collect();
            cols.push(&self.rays[x]);
            IntMatrix::from_i64_columns(&cols, self.dim).det()
        };
        let (a, b) = (side(u), side(w));
        !a.is_zero() && !b.is_zero() && a.is_positive() != b.is_positive()
    }

    /// All walls with their relations. Requires a smooth complete fan.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        self.require_smooth_complete()?;
        let mut out = Vec::new();
        for (rays, entries) in self.wall_incidence() {
            let (c0, u) = entries[0];
            let (c1, w) = entries[1];
            let coords = self.cone_coords_i64(c0, &self.rays[w]);
            let mut relation = vec![0i64; self.rays.len()];
            relation[w] = 1;
            for (pos, &i) in self.max_cones[c0].iter().enumerate() {
                if i == u {
                    debug_assert_eq!(coords[pos], -1);
                    relation[u] = 1;
                } else {
                    relation[i] = -coords[pos];
                }
            }
            out.push(Wall {
                rays,
                cones: [c0, c1],
                completing: [u, w],
                relation: Relation(relation),
            });
        }
        Ok(out)
    }

    /// Whether `c` has one coefficient per ray and `sum c_i ray_i = 0`.
    pub fn is_relation(&self, c: &Relation) -> bool {
        c.0.len() == self.rays.len()
            && (0..self.dim).all(|k| {
                self.rays
                    .iter()
                    .zip(&c.0)
                    .map(|(r, &ci)| i128::from(r[k]) * i128::from(ci))
                    .sum::<i128>()
                    == 0
            })
    }

    /// The fan with every ray replaced by `g * ray`; `g` must be unimodular.
    pub fn transformed(&self, g: &[Vec<i64>]) -> Result<Fan> {
        let gm = IntMatrix::from_i64_rows(g);
        if gm.rows() != self.dim || gm.cols() != self.dim || !gm.det().abs().is_one() {
            return Err(Error::BadParameters("transform must be a unimodular square matrix".into()));
        }
        let rays = self
            .rays
            .iter()
            .map(|r| {
                let v: Vec<BigInt> = r.iter().map(|&x| BigInt::from(x)).collect();
                gm.mul_vec(&v)
                    .iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::Malformed("ray overflow".into())))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Fan::new(self.dim, rays, self.max_cones.clone())
    }
}
