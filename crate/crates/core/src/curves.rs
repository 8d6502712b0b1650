//! Positive relations, rational curves through the base point and their splitting types.

use crate::divisor::{PicBasis, TDivisor};
use crate::error::{Error, Result};
use crate::exact::poly::{form_matrix_det, forms_have_common_zero, BinaryForm};
use crate::exact::IntMatrix;
use crate::fan::{Fan, Relation};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const MAX_ATTEMPTS: usize = 8;
const SECOND_SEED_OFFSET: u64 = 0xD1B5_4A32_D192_ED03;

fn check_relation(fan: &Fan, c: &Relation) -> Result<()> {
    if !fan.is_relation(c) {
        return Err(Error::NotARelation);
    }
    if !c.is_positive() {
        return Err(Error::NotPositive);
    }
    Ok(())
}

/// All nonzero relations with every coefficient in `0..=bound`, by total degree then lexicographically.
///
/// Scans the box of coordinates on `r` rays whose relation minor is invertible and
/// keeps the integral lifts that stay in the box.
pub fn enumerate_positive_relations(fan: &Fan, bound: i64) -> Result<Vec<Relation>> {
    let pic = PicBasis::new(fan)?;
    let r = pic.rank();
    let k = pic.relation_matrix();
    let mut best: Option<(Vec<usize>, BigInt)> = None;
    for cols in (0..fan.n_rays()).combinations(r) {
        let det = k.select_columns(&cols).det();
        if det.is_zero() {
            continue;
        }
        let better = best.as_ref().map_or(true, |(_, d)| det.magnitude() < d.magnitude());
        if better {
            let unit = det.magnitude().is_one();
            best = Some((cols, det));
            if unit {
                break;
            }
        }
    }
    let (cols, det) = best.expect("relation lattice has full rank");
    // lambda * K_J = c_J, so lambda = c_J * adj(K_J) / det(K_J)
    let kj = k.select_columns(&cols);
    let adj = adjugate(&kj);
    let rows: Vec<Vec<i64>> = pic.relations().iter().map(|x| x.0.clone()).collect();
    let mut out = Vec::new();
    let mut cj = vec![0i64; r];
    loop {
        if cj.iter().any(|&x| x != 0) {
            let scaled: Vec<BigInt> = (0..r)
                .map(|col| (0..r).map(|row| BigInt::from(cj[row]) * adj.get(row, col)).sum())
                .collect();
            if scaled.iter().all(|x| x.is_multiple_of(&det)) {
                let lambda: Vec<i64> = scaled
                    .iter()
                    .map(|x| i64::try_from(x / &det).expect("coefficient fits"))
                    .collect();
                let c: Vec<i64> = (0..fan.n_rays())
                    .map(|i| lambda.iter().zip(&rows).map(|(l, row)| l * row[i]).sum())
                    .collect();
                if c.iter().all(|&x| (0..=bound).contains(&x)) {
                    out.push(Relation(c));
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == r {
                out.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
                return Ok(out);
            }
            cj[pos] += 1;
            if cj[pos] <= bound {
                break;
            }
            cj[pos] = 0;
            pos += 1;
        }
    }
}

fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let mut adj = IntMatrix::zeros(n, n);
    if n == 1 {
        adj.set(0, 0, BigInt::one());
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m.get(r, c).clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(rows, n - 1).det();
            let sign = if (i + j) % 2 == 0 { minor } else { -minor };
            adj.set(j, i, sign);
        }
    }
    adj
}

/// Whether the rays in the support of the positive relation `c` span the whole space.
pub fn very_free(fan: &Fan, c: &Relation) -> Result<bool> {
    fan.require_smooth_complete()?;
    check_relation(fan, c)?;
    let support: Vec<&Vec<i64>> = c.support().iter().map(|&i| &fan.rays()[i]).collect();
    Ok(IntMatrix::from_i64_columns(&support, fan.dim()).rank() == fan.dim())
}

/// Least degree of `D` over very free positive relations with coefficients up to `bound`.
pub fn min_very_free_degree(fan: &Fan, d: &TDivisor, bound: i64) -> Result<Option<(Relation, i64)>> {
    d.check_len(fan)?;
    let mut best: Option<(Relation, i64)> = None;
    for c in enumerate_positive_relations(fan, bound)? {
        if !very_free(fan, &c)? {
            continue;
        }
        let deg: i64 = c.0.iter().zip(&d.0).map(|(x, a)| x * a).sum();
        if best.as_ref().map_or(true, |(_, b)| deg < *b) {
            best = Some((c, deg));
        }
    }
    Ok(best)
}

/// Degrees `a_1 <= .. <= a_n` with `f^* T_X = O(a_1) + .. + O(a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub degrees: Vec<i64>,
}

impl SplittingType {
    pub fn mu_min(&self) -> i64 {
        self.degrees[0]
    }
}

/// A lift of a curve of class `c`: one form of degree `c_i` per ray, products of distinct linear factors.
struct RandomLift {
    /// Linear factors `(alpha, beta)` of `alpha u + beta v`, per ray.
    factors: Vec<Vec<(i64, i64)>>,
    constants: Vec<i64>,
}

impl RandomLift {
    fn sample(c: &Relation, rng: &mut ChaCha8Rng) -> Self {
        let mut used: Vec<(i64, i64)> = Vec::new();
        let mut factors = Vec::with_capacity(c.0.len());
        let mut constants = Vec::with_capacity(c.0.len());
        for &ci in &c.0 {
            let mut fs = Vec::new();
            while fs.len() < ci as usize {
                let l = (rng.gen_range(1..=1000i64), rng.gen_range(1..=1000i64));
                if used.iter().all(|&(a, b)| a * l.1 != b * l.0) {
                    used.push(l);
                    fs.push(l);
                }
            }
            factors.push(fs);
            constants.push(rng.gen_range(1..=1000i64));
        }
        Self { factors, constants }
    }

    fn form(&self, i: usize) -> BinaryForm {
        self.factors[i].iter().fold(BinaryForm::constant(self.constants[i].into()), |f, &(a, b)| {
            f.mul(&BinaryForm::linear(a.into(), b.into()))
        })
    }

    /// The relation morphisms `(w_{j,i} f_i)` have maximal rank at every point.
    fn certified(&self, relations: &[Relation]) -> bool {
        let m = self.factors.len();
        let r = relations.len();
        let forms: Vec<BinaryForm> = (0..m).map(|i| self.form(i)).collect();
        let mut minors = Vec::new();
        for cols in (0..m).combinations(r) {
            let mat: Vec<Vec<BinaryForm>> = relations
                .iter()
                .map(|w| cols.iter().map(|&i| forms[i].scale(&BigInt::from(w.0[i]))).collect())
                .collect();
            let det = form_matrix_det(&mat);
            if det.degree() == 0 && !det.is_zero() {
                return true;
            }
            minors.push(det);
        }
        !forms_have_common_zero(&minors)
    }

    /// `h^0` of the dual of the pulled-back tangent bundle twisted by `O(k)`.
    ///
    /// Sections correspond to `m` in `M (x) H^0(O(k))` with `f_i | <m, ray_i>` for every ray;
    /// divisibility by a product of distinct linear forms is vanishing at their roots.
    fn dual_sections(&self, fan: &Fan, k: usize) -> usize {
        let n = fan.dim();
        let cols = n * (k + 1);
        let mut rows = Vec::new();
        for (i, fs) in self.factors.iter().enumerate() {
            let ray = fan.ray(i);
            for &(alpha, beta) in fs {
                // root of alpha u + beta v is (u : v) = (-beta : alpha)
                let u = BigInt::from(-beta);
                let v = BigInt::from(alpha);
                let mut row = vec![BigInt::zero(); cols];
                for e in 0..=k {
                    let val = u.pow(e as u32) * v.pow((k - e) as u32);
                    for (coord, &x) in ray.iter().enumerate() {
                        if x != 0 {
                            row[coord * (k + 1) + e] = &val * x;
                        }
                    }
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return cols;
        }
        cols - IntMatrix::from_rows(rows, cols).rank()
    }
}

fn splitting_with_seed(fan: &Fan, c: &Relation, relations: &[Relation], seed: u64) -> Result<Vec<i64>> {
    let n = fan.dim();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let lift = RandomLift::sample(c, &mut rng);
        if !lift.certified(relations) {
            continue;
        }
        // h(k) = sum_l max(0, k - a_l + 1), so h(k) - h(k-1) counts the a_l <= k
        let total = c.total_degree() as usize;
        let mut degrees = Vec::with_capacity(n);
        let mut prev_h = 0usize;
        let mut prev_count = 0usize;
        for k in 0..=total {
            let h = lift.dual_sections(fan, k);
            let count = h - prev_h;
            for _ in prev_count..count {
                degrees.push(k as i64);
            }
            prev_h = h;
            prev_count = count;
            if count == n {
                break;
            }
        }
        if degrees.len() != n || degrees.iter().sum::<i64>() != c.total_degree() {
            return Err(Error::GenericityFailure { attempts: attempt + 1 });
        }
        return Ok(degrees);
    }
    Err(Error::GenericityFailure { attempts: MAX_ATTEMPTS })
}

/// Splitting type of the pulled-back tangent bundle along a general curve of class `c`.
///
/// Two independent seeded lifts must agree.
pub fn splitting_type(fan: &Fan, c: &Relation, seed: u64) -> Result<SplittingType> {
    fan.require_smooth_complete()?;
    check_relation(fan, c)?;
    let pic = PicBasis::new(fan)?;
    let first = splitting_with_seed(fan, c, pic.relations(), seed)?;
    let second = splitting_with_seed(fan, c, pic.relations(), seed.wrapping_add(SECOND_SEED_OFFSET))?;
    if first != second {
        return Err(Error::GenericityFailure { attempts: 2 });
    }
    Ok(SplittingType { degrees: first })
}

/// A rational curve given by one binary form per ray (its Cox coordinates), through the base point at `(0 : 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    pub class: Relation,
    pub forms: Vec<BinaryForm>,
}

impl CurveFamily {
    pub fn cox_at(&self, u: &BigInt, v: &BigInt) -> Vec<BigInt> {
        self.forms.iter().map(|f| f.eval(u, v)).collect()
    }

    /// Whether the parameter `(0 : 1)` maps to the point with all Cox coordinates one.
    pub fn passes_base_point(&self) -> bool {
        self.cox_at(&BigInt::zero(), &BigInt::one()).iter().all(One::is_one)
    }
}

/// The curve `t -> (m_i t + 1)` in the chart of `cone`; zero entries of `m` keep a coordinate at one.
pub fn chart_line(fan: &Fan, cone: usize, m: &[i64]) -> Result<CurveFamily> {
    fan.require_smooth_complete()?;
    if m.len() != fan.dim() {
        return Err(Error::DimensionMismatch {
            expected: fan.dim(),
            got: m.len(),
        });
    }
    if m.iter().all(|&x| x == 0) {
        return Err(Error::ZeroParameter { index: 0 });
    }
    let rays = fan.cone(cone);
    let mut class = vec![0i64; fan.n_rays()];
    let mut forms: Vec<BinaryForm> = (0..fan.n_rays()).map(|_| BinaryForm::constant(BigInt::one())).collect();
    let mut target = vec![0i64; fan.dim()];
    for (pos, &i) in rays.iter().enumerate() {
        if m[pos] == 0 {
            continue;
        }
        class[i] += 1;
        forms[i] = forms[i].mul(&BinaryForm::linear(m[pos].into(), BigInt::one()));
        for (t, x) in target.iter_mut().zip(fan.ray(i)) {
            *t -= x;
        }
    }
    let (tau, coords) = fan
        .locate_cone_i64(&target)
        .expect("complete fan covers lattice points");
    for (&i, a) in fan.cone(tau).iter().zip(coords) {
        if a > 0 {
            class[i] += a;
            forms[i] = forms[i].mul(&BinaryForm::v_power(a as usize));
        }
    }
    Ok(CurveFamily {
        class: Relation(class),
        forms,
    })
}

/// A general line through the base point in the chart of `cone`; every entry of `m` must be nonzero.
pub fn general_line(fan: &Fan, cone: usize, m: &[i64]) -> Result<CurveFamily> {
    if let Some(index) = m.iter().position(|&x| x == 0) {
        return Err(Error::ZeroParameter { index });
    }
    chart_line(fan, cone, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn p2_relations_up_to_three() {
        let rels = enumerate_positive_relations(&p2(), 3).unwrap();
        assert_eq!(
            rels,
            vec![Relation(vec![1, 1, 1]), Relation(vec![2, 2, 2]), Relation(vec![3, 3, 3])]
        );
    }

    #[test]
    fn p2_line_splits_as_one_two() {
        let s = splitting_type(&p2(), &Relation(vec![1, 1, 1]), 7).unwrap();
        assert_eq!(s.degrees, vec![1, 2]);
        // a conic: T_P2 restricted to a conic is O(3) + O(3)
        let s = splitting_type(&p2(), &Relation(vec![2, 2, 2]), 7).unwrap();
        assert_eq!(s.degrees, vec![3, 3]);
    }

    #[test]
    fn p2_general_line_class() {
        let l = general_line(&p2(), 0, &[2, -3]).unwrap();
        assert_eq!(l.class, Relation(vec![1, 1, 1]));
        assert!(l.passes_base_point());
        assert_eq!(general_line(&p2(), 0, &[2, 0]), Err(Error::ZeroParameter { index: 1 }));
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(very_free(&p2(), &Relation(vec![-1, -1, -1])), Err(Error::NotPositive));
        assert_eq!(very_free(&p2(), &Relation(vec![1, 0, 0])), Err(Error::NotARelation));
    }
}
