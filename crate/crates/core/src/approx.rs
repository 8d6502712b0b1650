//! Approach sequences, slope estimates and exhaustive Liouville searches near the base point.

use crate::arith::{self, CoxPoint, HeightFunction, HeightKind, Place, RationalPoint};
use crate::collections::{locus_status, AccumulatingLocus, LocusStatus};
use crate::curves::CurveFamily;
use crate::divisor::TDivisor;
use crate::error::{Error, Result};
use crate::fan::{Fan, Relation};
use crate::positivity::positivity;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Rational exponent `num / den` applied to the distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadParameters("exponent denominator is zero".into()));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integer(k: u32) -> Self {
        Self { num: k, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameters(format!("cannot parse exponent {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => Exponent::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => Ok(Exponent::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

/// How the curve parameter approaches the base parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `t = 1/N` (or `p^k`), `t -> 0` from above.
    ZeroFromAbove,
    /// `t = -1/N` (or `-p^k`).
    ZeroFromBelow,
    /// `s = N` (or `p^-k`) with `t = 1/s`, `s -> infinity`.
    Infinity,
}

const SCHEDULE_LENGTH: usize = 40;
const TAIL_WINDOW: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproachPoint {
    #[serde(serialize_with = "crate::serde_util::rationals")]
    pub coords: Vec<BigRational>,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub distance: BigRational,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub height: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproachSequence {
    pub class: Relation,
    pub chart: usize,
    pub schedule: Schedule,
    pub place: Place,
    pub points: Vec<ApproachPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub estimate: f64,
    pub window: usize,
    /// Root mean square of the regression residuals.
    pub residual: f64,
    pub sequence: ApproachSequence,
}

/// Natural logarithm of a positive integer, accurate to double precision.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().map_or(f64::NAN, f64::ln)
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().map_or(f64::NAN, f64::ln) + shift as f64 * std::f64::consts::LN_2
    }
}

pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

fn require_big(fan: &Fan, d: &TDivisor) -> Result<HeightFunction> {
    let h = HeightFunction::new(fan, d)?;
    if !positivity(fan, d)?.big {
        return Err(Error::NotNefOrBig);
    }
    Ok(h)
}

fn schedule_parameters(schedule: Schedule, place: Place) -> Result<Vec<(BigInt, BigInt)>> {
    let scales: Vec<(BigInt, BigInt)> = match place.check()? {
        // t = 1/N with N geometric from 10 to 10^6
        Place::Infinity => (0..SCHEDULE_LENGTH)
            .map(|k| {
                let n = 10f64.powf(1.0 + 5.0 * k as f64 / (SCHEDULE_LENGTH - 1) as f64).round();
                (BigInt::one(), BigInt::from(n as u64))
            })
            .collect(),
        Place::Prime(p) => (1..=SCHEDULE_LENGTH as u32)
            .map(|k| (BigInt::from(p).pow(k), BigInt::one()))
            .collect(),
        Place::Complex => unreachable!("rejected by check"),
    };
    Ok(scales
        .into_iter()
        .map(|(u, v)| match schedule {
            Schedule::ZeroFromAbove => (u, v),
            Schedule::ZeroFromBelow => (-u, v),
            // the parameter s = v/u runs to infinity; the curve point sits at t = 1/s
            Schedule::Infinity => {
                let s = BigRational::new(v, u);
                let t = s.recip();
                (t.numer().clone(), t.denom().clone())
            }
        })
        .collect())
}

/// Least-squares slope of `ln H` against `-ln d` on the tail of an approach sequence along `curve`.
///
/// Points are read in the chart of `chart`; the curve must send the parameter `(0 : 1)` to the base point.
pub fn estimate_alpha_on_curve(
    fan: &Fan,
    d: &TDivisor,
    curve: &CurveFamily,
    chart: usize,
    place: Place,
    schedule: Schedule,
) -> Result<SlopeEstimate> {
    if !curve.passes_base_point() {
        return Err(Error::CurveMissesQ0);
    }
    let heights = require_big(fan, d)?;
    let mut points = Vec::with_capacity(SCHEDULE_LENGTH);
    for (u, v) in schedule_parameters(schedule, place)? {
        let x = CoxPoint(curve.cox_at(&u, &v));
        if x.0.iter().any(Zero::is_zero) {
            continue;
        }
        let p = arith::project(fan, chart, &x)?;
        if p.is_base_point() {
            continue;
        }
        let height = heights.salberger(&arith::cox_lift(fan, &p)?);
        let distance = arith::distance(&p, place)?;
        points.push(ApproachPoint {
            coords: p.coords,
            distance,
            height,
        });
    }
    if points.len() < TAIL_WINDOW {
        return Err(Error::NotApplicable("too few torus points on the schedule".into()));
    }
    let tail = &points[points.len() - TAIL_WINDOW..];
    let xs: Vec<f64> = tail.iter().map(|p| -ln_rational(&p.distance)).collect();
    let ys: Vec<f64> = tail.iter().map(|p| ln_bigint(&p.height)).collect();
    let (slope, residual) = least_squares(&xs, &ys);
    Ok(SlopeEstimate {
        estimate: slope,
        window: TAIL_WINDOW,
        residual,
        sequence: ApproachSequence {
            class: curve.class.clone(),
            chart,
            schedule,
            place,
            points,
        },
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, (ss / n).sqrt())
}

/// Which torus points a search visits, relative to an accumulating locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "region", content = "locus", rename_all = "snake_case")]
pub enum Region {
    All,
    OffLocus(AccumulatingLocus),
    OnLocus(AccumulatingLocus),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub chart: usize,
    pub exponent: Exponent,
    /// Numerators and denominators of chart coordinates are bounded by this in absolute value.
    pub bound: u64,
    pub place: Place,
    pub height: HeightKind,
    pub region: Region,
    /// Box bounds at which the running minimum is reported.
    pub checkpoints: Vec<u64>,
}

impl SearchConfig {
    /// Salberger height at the archimedean place over every torus point, with checkpoints `B/4, B/2, B`.
    pub fn new(chart: usize, exponent: Exponent, bound: u64) -> Self {
        Self {
            chart,
            exponent,
            bound,
            place: Place::Infinity,
            height: HeightKind::Salberger,
            region: Region::All,
            checkpoints: default_checkpoints(bound),
        }
    }
}

fn default_checkpoints(bound: u64) -> Vec<u64> {
    let mut c: Vec<u64> = [bound / 4, bound / 2, bound].into_iter().filter(|&b| b > 0).collect();
    c.dedup();
    c
}

/// A minimizing point of `d^gamma H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchMinimum {
    #[serde(serialize_with = "crate::serde_util::rationals")]
    pub coords: Vec<BigRational>,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub distance: BigRational,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub height: BigInt,
    /// `(d^gamma H)^den = d^num H^den`, exact.
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub power: BigRational,
    pub value: f64,
}

impl SearchMinimum {
    /// Whether `d^gamma H >= c` for a positive rational `c`, decided exactly.
    pub fn at_least(&self, c: &BigRational, exponent: Exponent) -> bool {
        self.power >= c.pow(exponent.den as i32)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxMinimum {
    pub bound: u64,
    pub minimum: Option<SearchMinimum>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub scanned: u64,
    pub minimum: Option<SearchMinimum>,
    pub stabilization: Vec<BoxMinimum>,
}

impl SearchResult {
    pub fn point(&self) -> Option<RationalPoint> {
        self.minimum
            .as_ref()
            .map(|m| RationalPoint::new(self.config.chart, m.coords.clone()))
    }
}

/// Reduced fraction `a/b` with its factorization and box level `max(|a|, b)`.
#[derive(Clone, Debug)]
struct Fraction {
    num: i64,
    den: i64,
    level: u64,
    /// `(prime, signed exponent)`.
    factors: Vec<(u64, i64)>,
}

fn factor_small(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn fractions(bound: u64) -> Vec<Fraction> {
    let b = bound as i64;
    let mut out = Vec::new();
    for den in 1..=b {
        for num in -b..=b {
            if num == 0 || num.gcd(&den) != 1 {
                continue;
            }
            let mut factors = factor_small(num.unsigned_abs());
            factors.extend(factor_small(den as u64).into_iter().map(|(p, e)| (p, -e)));
            out.push(Fraction {
                num,
                den,
                level: num.unsigned_abs().max(den as u64),
                factors,
            });
        }
    }
    out.sort_by_key(|f| (f.level, f.num, f.den));
    out
}

/// Everything the inner loop needs about the fan, in machine integers.
struct Lifter {
    chart_rays: Vec<Vec<i64>>,
    cones: Vec<(Vec<usize>, Vec<Vec<i64>>)>,
    n_rays: usize,
    monomials: Vec<Vec<u32>>,
}

#[derive(Default)]
struct Scratch {
    primes: Vec<u64>,
    vals: Vec<i64>,
    x: Vec<u128>,
    u: Vec<i64>,
}

impl Lifter {
    fn new(fan: &Fan, chart: usize, heights: &HeightFunction, kind: HeightKind) -> Self {
        let monomials = match kind {
            HeightKind::Salberger => (0..heights.n_cones()).map(|c| heights.exponents(c).to_vec()).collect(),
            HeightKind::ChartMonomial(c) => vec![heights.exponents(c).to_vec()],
        };
        Self {
            chart_rays: fan.cone(chart).iter().map(|&i| fan.ray(i).to_vec()).collect(),
            cones: (0..fan.n_cones())
                .map(|c| (fan.cone(c).to_vec(), fan.dual_basis(c).to_vec()))
                .collect(),
            n_rays: fan.n_rays(),
            monomials,
        }
    }

    /// Height of the point with these chart coordinates, or `None` on `u128` overflow.
    fn height(&self, coords: &[&Fraction], s: &mut Scratch) -> Option<u128> {
        let dim = self.chart_rays.len();
        s.primes.clear();
        s.vals.clear();
        for (i, f) in coords.iter().enumerate() {
            for &(p, e) in &f.factors {
                let k = match s.primes.iter().position(|&q| q == p) {
                    Some(k) => k,
                    None => {
                        s.primes.push(p);
                        s.vals.extend(std::iter::repeat(0).take(dim));
                        s.primes.len() - 1
                    }
                };
                s.vals[k * dim + i] += e;
            }
        }
        s.x.clear();
        s.x.resize(self.n_rays, 1);
        for (k, &p) in s.primes.iter().enumerate() {
            s.u.clear();
            s.u.resize(dim, 0);
            for (i, ray) in self.chart_rays.iter().enumerate() {
                let v = s.vals[k * dim + i];
                if v != 0 {
                    for (uj, rj) in s.u.iter_mut().zip(ray) {
                        *uj += v * rj;
                    }
                }
            }
            let (rays, dual) = self
                .cones
                .iter()
                .find(|(_, dual)| dual.iter().all(|row| dot(row, &s.u) >= 0))
                .expect("complete fan covers lattice points");
            for (&j, row) in rays.iter().zip(dual) {
                let e = dot(row, &s.u);
                if e > 0 {
                    s.x[j] = s.x[j].checked_mul(u128::from(p).checked_pow(e as u32)?)?;
                }
            }
        }
        let mut best = 0u128;
        for m in &self.monomials {
            let mut acc = 1u128;
            for (&xj, &e) in s.x.iter().zip(m) {
                if e > 0 && xj > 1 {
                    acc = acc.checked_mul(xj.checked_pow(e)?)?;
                }
            }
            best = best.max(acc);
        }
        Some(best)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|a/b - 1|` at `place` as an exact `(numerator, denominator)` pair.
fn coordinate_distance(f: &Fraction, place: Place) -> (u128, u128) {
    let diff = (f.num - f.den).unsigned_abs() as u128;
    match place {
        Place::Prime(p) => {
            if diff == 0 {
                return (0, 1);
            }
            let p = u128::from(p);
            let v = |mut x: u128| {
                let mut e = 0i32;
                while x % p == 0 {
                    x /= p;
                    e += 1;
                }
                e
            };
            let val = v(diff) - v(f.den as u128);
            if val >= 0 {
                (1, p.pow(val as u32))
            } else {
                (p.pow((-val) as u32), 1)
            }
        }
        _ => (diff, f.den as u128),
    }
}

fn point_distance(coords: &[&Fraction], place: Place) -> (u128, u128) {
    let mut best = (0u128, 1u128);
    for f in coords {
        let (n, d) = coordinate_distance(f, place);
        if n * best.1 > best.0 * d {
            best = (n, d);
        }
    }
    if best.0 >= best.1 {
        (1, 1)
    } else {
        best
    }
}

#[derive(Clone)]
struct Candidate {
    log_value: f64,
    power: BigRational,
    index: Vec<usize>,
    distance: BigRational,
    height: BigInt,
}

fn better(a: &Candidate, b: &Option<Candidate>) -> bool {
    match b {
        None => true,
        Some(b) => match a.power.cmp(&b.power) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => a.index < b.index,
            std::cmp::Ordering::Greater => false,
        },
    }
}

struct Scan<'a> {
    fan: &'a Fan,
    heights: &'a HeightFunction,
    lifter: Lifter,
    fracs: Vec<Fraction>,
    cfg: &'a SearchConfig,
    locus_in_chart: Option<(&'a AccumulatingLocus, bool)>,
}

impl Scan<'_> {
    fn in_region(&self, coords: &[&Fraction]) -> bool {
        let Some((locus, on)) = self.locus_in_chart else {
            return true;
        };
        let contained = if locus.sigma0 == self.cfg.chart {
            locus
                .components
                .iter()
                .any(|c| c.fixed.iter().all(|&j| coords[j].num == coords[j].den))
        } else {
            let p = RationalPoint::new(self.cfg.chart, exact_coords(coords));
            let q = arith::change_chart(self.fan, &p, locus.sigma0).expect("chart change of a torus point");
            locus.contains(&q.coords)
        };
        contained == on
    }

    fn height(&self, coords: &[&Fraction], scratch: &mut Scratch) -> (f64, Option<u128>) {
        match self.lifter.height(coords, scratch) {
            Some(h) => ((h as f64).ln(), Some(h)),
            None => {
                let h = self.exact_height(coords);
                (ln_bigint(&h), None)
            }
        }
    }

    fn exact_height(&self, coords: &[&Fraction]) -> BigInt {
        let p = RationalPoint::new(self.cfg.chart, exact_coords(coords));
        let x = arith::cox_lift(self.fan, &p).expect("torus point lifts");
        self.heights.eval(self.cfg.height, &x)
    }

    /// Per-level best candidates for all points whose first coordinate is `first`.
    fn scan_first(&self, first: usize) -> (u64, Vec<Option<Candidate>>) {
        let dim = self.fan.dim();
        let levels = self.cfg.bound as usize + 1;
        let mut best: Vec<Option<Candidate>> = vec![None; levels];
        let mut scratch = Scratch::default();
        let mut index = vec![0usize; dim];
        index[0] = first;
        let gamma = self.cfg.exponent;
        let mut scanned = 0u64;
        let mut coords: Vec<&Fraction> = Vec::with_capacity(dim);
        loop {
            coords.clear();
            coords.extend(index.iter().map(|&k| &self.fracs[k]));
            let is_base = coords.iter().all(|f| f.num == f.den);
            if !is_base && self.in_region(&coords) {
                scanned += 1;
                let level = coords.iter().map(|f| f.level).max().unwrap_or(0) as usize;
                let (dn, dd) = point_distance(&coords, self.cfg.place);
                let (ln_height, small) = self.height(&coords, &mut scratch);
                let log_value =
                    f64::from(gamma.num) * ((dn as f64).ln() - (dd as f64).ln()) + f64::from(gamma.den) * ln_height;
                let slot = &mut best[level];
                let promising = slot.as_ref().map_or(true, |b| log_value <= b.log_value + 1e-9);
                if promising {
                    let height = match small {
                        Some(h) => BigInt::from(h),
                        None => self.exact_height(&coords),
                    };
                    let distance = BigRational::new(BigInt::from(dn), BigInt::from(dd));
                    let power = distance.pow(gamma.num as i32) * BigRational::from_integer(height.pow(gamma.den));
                    let cand = Candidate {
                        log_value,
                        power,
                        index: index.clone(),
                        distance,
                        height,
                    };
                    if better(&cand, slot) {
                        *slot = Some(cand);
                    }
                }
            }
            // odometer over coordinates 1..dim
            let mut k = dim;
            loop {
                if k == 1 {
                    return (scanned, best);
                }
                k -= 1;
                index[k] += 1;
                if index[k] < self.fracs.len() {
                    break;
                }
                index[k] = 0;
            }
        }
    }
}

fn exact_coords(coords: &[&Fraction]) -> Vec<BigRational> {
    coords
        .iter()
        .map(|f| BigRational::new(f.num.into(), f.den.into()))
        .collect()
}

fn to_minimum(c: &Candidate, fracs: &[Fraction], gamma: Exponent) -> SearchMinimum {
    let coords: Vec<&Fraction> = c.index.iter().map(|&k| &fracs[k]).collect();
    SearchMinimum {
        coords: exact_coords(&coords),
        distance: c.distance.clone(),
        height: c.height.clone(),
        power: c.power.clone(),
        value: (c.log_value / f64::from(gamma.den)).exp(),
    }
}

/// Exhaustive minimum of `d^gamma H` over torus points in the chart with bounded coordinates.
///
/// The base point is always skipped. Ties are broken by the first point in a fixed
/// enumeration order, so the result does not depend on how the work is split.
pub fn liouville_search(fan: &Fan, d: &TDivisor, cfg: &SearchConfig) -> Result<SearchResult> {
    let heights = require_big(fan, d)?;
    if cfg.chart >= fan.n_cones() {
        return Err(Error::BadParameters(format!("chart {} out of range", cfg.chart)));
    }
    if cfg.bound == 0 || cfg.bound > 1 << 20 {
        return Err(Error::BadParameters("box bound must be between 1 and 2^20".into()));
    }
    if let HeightKind::ChartMonomial(c) = cfg.height {
        if c >= fan.n_cones() {
            return Err(Error::BadParameters(format!("height chart {c} out of range")));
        }
    }
    cfg.place.check()?;
    let locus_in_chart = match &cfg.region {
        Region::All => None,
        Region::OffLocus(l) => Some((l, false)),
        Region::OnLocus(l) => Some((l, true)),
    };
    let scan = Scan {
        fan,
        heights: &heights,
        lifter: Lifter::new(fan, cfg.chart, &heights, cfg.height),
        fracs: fractions(cfg.bound),
        cfg,
        locus_in_chart,
    };
    let levels = cfg.bound as usize + 1;
    let (scanned, per_level) = (0..scan.fracs.len())
        .into_par_iter()
        .map(|first| scan.scan_first(first))
        .reduce(
            || (0, vec![None; levels]),
            |(sa, mut a), (sb, b)| {
                for (slot, cand) in a.iter_mut().zip(b) {
                    if let Some(c) = cand {
                        if better(&c, slot) {
                            *slot = Some(c);
                        }
                    }
                }
                (sa + sb, a)
            },
        );
    let mut running: Option<Candidate> = None;
    let mut prefix = Vec::with_capacity(levels);
    for cand in per_level.into_iter() {
        if let Some(c) = cand {
            if better(&c, &running) {
                running = Some(c);
            }
        }
        prefix.push(running.clone());
    }
    let gamma = cfg.exponent;
    let stabilization = cfg
        .checkpoints
        .iter()
        .filter(|&&b| b <= cfg.bound)
        .map(|&b| BoxMinimum {
            bound: b,
            minimum: prefix[b as usize].as_ref().map(|c| to_minimum(c, &scan.fracs, gamma)),
        })
        .collect();
    Ok(SearchResult {
        config: cfg.clone(),
        scanned,
        minimum: prefix[cfg.bound as usize].as_ref().map(|c| to_minimum(c, &scan.fracs, gamma)),
        stabilization,
    })
}

/// One row of a search dump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchRow {
    pub point: String,
    pub distance: String,
    pub height: String,
    pub value: f64,
}

/// Every visited point with its distance, height and `d^gamma H`, in enumeration order.
///
/// Uses the generic lift and height, independent of the search's fast path.
pub fn search_rows(fan: &Fan, d: &TDivisor, cfg: &SearchConfig) -> Result<Vec<SearchRow>> {
    let heights = require_big(fan, d)?;
    cfg.place.check()?;
    let fracs = fractions(cfg.bound);
    let mut rows = Vec::new();
    let dim = fan.dim();
    let total = fracs.len().checked_pow(dim as u32).unwrap_or(usize::MAX);
    if total > 5_000_000 {
        return Err(Error::BadParameters("too many points to dump; lower the box bound".into()));
    }
    for flat in 0..total {
        let mut rest = flat;
        let mut coords = vec![BigRational::zero(); dim];
        for k in (0..dim).rev() {
            let f = &fracs[rest % fracs.len()];
            rest /= fracs.len();
            coords[k] = BigRational::new(f.num.into(), f.den.into());
        }
        let p = RationalPoint::new(cfg.chart, coords);
        if p.is_base_point() || !region_contains(fan, &cfg.region, &p)? {
            continue;
        }
        let dist = arith::distance(&p, cfg.place)?;
        let h = heights.eval(cfg.height, &arith::cox_lift(fan, &p)?);
        let value = (cfg.exponent.to_f64() * ln_rational(&dist) + ln_bigint(&h)).exp();
        rows.push(SearchRow {
            point: p.to_string(),
            distance: dist.to_string(),
            height: h.to_string(),
            value,
        });
    }
    Ok(rows)
}

fn region_contains(fan: &Fan, region: &Region, p: &RationalPoint) -> Result<bool> {
    let (locus, on) = match region {
        Region::All => return Ok(true),
        Region::OffLocus(l) => (l, false),
        Region::OnLocus(l) => (l, true),
    };
    let q = arith::change_chart(fan, p, locus.sigma0)?;
    Ok(locus.contains(&q.coords) == on)
}

/// Probing grid for the exponent gap off the locus.
pub const DELTA_GRID: [(u32, u32); 3] = [(1, 4), (1, 2), (1, 1)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaProbe {
    pub delta: Exponent,
    pub exponent: Exponent,
    pub search: SearchResult,
    /// `-ln(v_last / v_first) / ln(B_last / B_first)` over the nested box minima.
    pub decay: f64,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccumulationReport {
    pub locus: AccumulatingLocus,
    /// Minimum of `d^beta H` over locus points.
    pub on_locus: SearchResult,
    pub probes: Vec<DeltaProbe>,
    pub pass: bool,
}

/// Largest decay exponent still read as bounded away from zero.
pub const DECAY_TOLERANCE: f64 = 0.125;

fn decay_rate(r: &SearchResult) -> f64 {
    let pts: Vec<(u64, f64)> = r
        .stabilization
        .iter()
        .filter_map(|b| b.minimum.as_ref().map(|m| (b.bound, m.value)))
        .collect();
    match (pts.first(), pts.last()) {
        (Some(&(b0, v0)), Some(&(b1, v1))) if b1 > b0 && v0 > 0.0 => {
            -(v1 / v0).ln() / (b1 as f64 / b0 as f64).ln()
        }
        _ => 0.0,
    }
}

/// Minima on and off the accumulating locus of an ample `D`, in the chart of `sigma0`.
///
/// Passes when some probed `delta` keeps the minimum of `d^{beta+delta} H` off the locus
/// from decaying across the nested boxes `B/4, B/2, B`.
pub fn verify_accumulation(fan: &Fan, d: &TDivisor, bound: u64, place: Place) -> Result<AccumulationReport> {
    let locus = match locus_status(fan, d)? {
        LocusStatus::Exact { locus } => locus,
        LocusStatus::UpperBoundOnly { .. } => return Err(Error::NotApplicable("divisor is not ample".into())),
        LocusStatus::NotApplicable { reason } => return Err(Error::NotApplicable(reason)),
    };
    let beta = u32::try_from(locus.beta).map_err(|_| Error::NotApplicable("negative beta".into()))?;
    let base = |exponent: Exponent, region: Region| SearchConfig {
        chart: locus.sigma0,
        exponent,
        bound,
        place,
        height: HeightKind::Salberger,
        region,
        checkpoints: default_checkpoints(bound),
    };
    let on_locus = liouville_search(fan, d, &base(Exponent::integer(beta), Region::OnLocus(locus.clone())))?;
    let mut probes = Vec::new();
    for (n, m) in DELTA_GRID {
        let delta = Exponent::new(n, m)?;
        let exponent = Exponent::new(beta * m + n, m)?;
        let search = liouville_search(fan, d, &base(exponent, Region::OffLocus(locus.clone())))?;
        let decay = decay_rate(&search);
        let bounded = search.minimum.is_some() && decay <= DECAY_TOLERANCE;
        probes.push(DeltaProbe {
            delta,
            exponent,
            search,
            decay,
            bounded,
        });
    }
    let pass = probes.iter().any(|p| p.bounded);
    Ok(AccumulationReport {
        locus,
        on_locus,
        probes,
        pass,
    })
}

/// `d^gamma H` as an exact `gamma.den`-th power, via the generic lift.
pub fn power_value(fan: &Fan, d: &TDivisor, p: &RationalPoint, gamma: Exponent, kind: HeightKind, place: Place) -> Result<BigRational> {
    let h = HeightFunction::new(fan, d)?.eval(kind, &arith::cox_lift(fan, p)?);
    let dist = arith::distance(p, place)?;
    Ok(dist.pow(gamma.num as i32) * BigRational::from_integer(h.pow(gamma.den)))
}
