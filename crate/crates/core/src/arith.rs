//! Rational points, Cox lifts, Salberger heights and distances to the base point.

use crate::divisor::{d_sigma, TDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A torus point given by its coordinates `y_i = chi^{dual_i}` in the chart of a maximal cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub chart: usize,
    pub coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(chart: usize, coords: Vec<BigRational>) -> Self {
        Self { chart, coords }
    }

    pub fn from_fractions(chart: usize, coords: &[(i64, i64)]) -> Self {
        Self {
            chart,
            coords: coords
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        }
    }

    /// Whether this is the base point (all coordinates one).
    pub fn is_base_point(&self) -> bool {
        self.coords.iter().all(One::is_one)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Integer Cox coordinates, one per ray, coprime over every primitive collection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxPoint(pub Vec<BigInt>);

/// On-disk point: chart index and `[numerator, denominator]` per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFile {
    pub chart: usize,
    pub coords: Vec<[i64; 2]>,
}

impl TryFrom<&PointFile> for RationalPoint {
    type Error = Error;
    fn try_from(p: &PointFile) -> Result<Self> {
        if p.coords.iter().any(|c| c[1] == 0) {
            return Err(Error::Malformed("zero denominator".into()));
        }
        Ok(RationalPoint::from_fractions(
            p.chart,
            &p.coords.iter().map(|c| (c[0], c[1])).collect::<Vec<_>>(),
        ))
    }
}

/// `A[i][j] = <dual_i, ray_j>`: chart coordinate `i` is `prod_j X_j^{A[i][j]}`.
pub fn chart_exponents(fan: &Fan, cone: usize) -> Vec<Vec<i64>> {
    fan.dual_basis(cone)
        .iter()
        .map(|d| {
            fan.rays()
                .iter()
                .map(|r| d.iter().zip(r).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect()
}

fn check_chart(fan: &Fan, p: &RationalPoint) -> Result<()> {
    fan.require_smooth_complete()?;
    if p.chart >= fan.n_cones() {
        return Err(Error::Malformed(format!("chart {} out of range", p.chart)));
    }
    if p.coords.len() != fan.dim() {
        return Err(Error::DimensionMismatch {
            expected: fan.dim(),
            got: p.coords.len(),
        });
    }
    if let Some(coord) = p.coords.iter().position(Zero::is_zero) {
        return Err(Error::NotInTorus { coord });
    }
    Ok(())
}

fn pow_signed(x: &BigInt, e: i64) -> BigRational {
    let p = x.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// The torus point with Cox coordinates `x`, in the chart of `cone`.
pub fn project(fan: &Fan, cone: usize, x: &CoxPoint) -> Result<RationalPoint> {
    fan.require_smooth_complete()?;
    if let Some(coord) = x.0.iter().position(Zero::is_zero) {
        return Err(Error::NotInTorus { coord });
    }
    let coords = chart_exponents(fan, cone)
        .iter()
        .map(|row| {
            row.iter()
                .zip(&x.0)
                .fold(BigRational::one(), |acc, (&e, xj)| acc * pow_signed(xj, e))
        })
        .collect();
    Ok(RationalPoint { chart: cone, coords })
}

/// Coordinates of the same torus point in the chart of `cone`.
pub fn change_chart(fan: &Fan, p: &RationalPoint, cone: usize) -> Result<RationalPoint> {
    check_chart(fan, p)?;
    // y'_k = prod_i y_i^{<dual'_k, ray_{chart,i}>}
    let new_dual = fan.dual_basis(cone);
    let old_rays = fan.cone(p.chart);
    let coords = new_dual
        .iter()
        .map(|d| {
            old_rays.iter().zip(&p.coords).fold(BigRational::one(), |acc, (&i, y)| {
                let e: i64 = d.iter().zip(fan.ray(i)).map(|(a, b)| a * b).sum();
                acc * y.pow(e as i32)
            })
        })
        .collect();
    Ok(RationalPoint { chart: cone, coords })
}

const SMALL_PRIMES_BOUND: u64 = 1000;

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (2..SMALL_PRIMES_BOUND)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect()
    })
}

/// Pairwise coprime integers `> 1` such that every input is a product of their powers.
pub fn coprime_base(values: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = Vec::new();
    let mut todo: Vec<BigInt> = values.iter().map(|v| v.abs()).filter(|v| *v > BigInt::one()).collect();
    while let Some(x) = todo.pop() {
        if x <= BigInt::one() {
            continue;
        }
        match base.iter().position(|b| !b.gcd(&x).is_one()) {
            None => base.push(x),
            Some(k) => {
                let b = base.swap_remove(k);
                let g = b.gcd(&x);
                todo.push(&b / &g);
                todo.push(&x / &g);
                todo.push(g);
            }
        }
    }
    base.sort();
    base
}

fn valuation(x: &BigInt, q: &BigInt) -> i64 {
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (d, r) = x.div_rem(q);
        if !r.is_zero() {
            return e;
        }
        x = d;
        e += 1;
    }
}

/// `(base, valuation per coordinate)` over a coprime factor base of all numerators and denominators.
fn valuation_table(coords: &[BigRational]) -> Vec<(BigInt, Vec<i64>)> {
    let n = coords.len();
    let mut table: Vec<(BigInt, Vec<i64>)> = Vec::new();
    let mut rests: Vec<(usize, i64, BigInt)> = Vec::new();
    for (i, y) in coords.iter().enumerate() {
        for (part, sign) in [(y.numer().abs(), 1i64), (y.denom().clone(), -1i64)] {
            if part.is_one() {
                continue;
            }
            match part.to_u64() {
                Some(mut v) => {
                    for &p in small_primes() {
                        if p * p > v {
                            break;
                        }
                        let mut e = 0;
                        while v % p == 0 {
                            v /= p;
                            e += 1;
                        }
                        if e > 0 {
                            add_valuation(&mut table, BigInt::from(p), i, sign * e, n);
                        }
                    }
                    if v > 1 {
                        rests.push((i, sign, BigInt::from(v)));
                    }
                }
                None => rests.push((i, sign, part)),
            }
        }
    }
    if !rests.is_empty() {
        let mut values: Vec<BigInt> = rests.iter().map(|(_, _, v)| v.clone()).collect();
        values.extend(table.iter().map(|(q, _)| q.clone()));
        for q in coprime_base(&values) {
            for (i, sign, v) in &rests {
                let e = valuation(v, &q);
                if e > 0 {
                    add_valuation(&mut table, q.clone(), *i, sign * e, n);
                }
            }
        }
    }
    table
}

fn add_valuation(table: &mut Vec<(BigInt, Vec<i64>)>, q: BigInt, i: usize, e: i64, n: usize) {
    match table.iter_mut().find(|(b, _)| *b == q) {
        Some((_, v)) => v[i] += e,
        None => {
            let mut v = vec![0; n];
            v[i] = e;
            table.push((q, v));
        }
    }
}

/// The Cox lift of a torus point: integer coordinates, coprime over primitive collections.
///
/// For each factor `q` the valuation vector `sum v_q(y_i) ray_i` is located in a cone, and
/// its cone coordinates become the exponents of `q`. Signs are the lexicographically first
/// solution (positive before negative, ray 0 first) of the sign equations.
pub fn cox_lift(fan: &Fan, p: &RationalPoint) -> Result<CoxPoint> {
    check_chart(fan, p)?;
    let rays = fan.cone(p.chart);
    let mut x: Vec<BigInt> = vec![BigInt::one(); fan.n_rays()];
    for (q, vals) in valuation_table(&p.coords) {
        let mut u = vec![0i64; fan.dim()];
        for (&i, &v) in rays.iter().zip(&vals) {
            for (uk, rk) in u.iter_mut().zip(fan.ray(i)) {
                *uk += v * rk;
            }
        }
        let (tau, coords) = fan.locate_cone_i64(&u).expect("complete fan covers lattice points");
        for (&j, e) in fan.cone(tau).iter().zip(coords) {
            if e > 0 {
                x[j] *= q.pow(e as u32);
            }
        }
    }
    let negative: Vec<bool> = p.coords.iter().map(|y| y.is_negative()).collect();
    let signs = lex_first_signs(&chart_exponents(fan, p.chart), &negative, rays);
    for (xj, s) in x.iter_mut().zip(signs) {
        if s {
            *xj = -&*xj;
        }
    }
    Ok(CoxPoint(x))
}

/// Lexicographically first `eps` over GF(2) with `sum_j A[i][j] eps_j = neg_i`; `true` means negative.
fn lex_first_signs(a: &[Vec<i64>], negative: &[bool], chart_rays: &[usize]) -> Vec<bool> {
    let m = a.first().map_or(0, Vec::len);
    let free: Vec<usize> = (0..m).filter(|j| !chart_rays.contains(j)).collect();
    let mut best: Option<Vec<bool>> = None;
    for bits in 0u64..(1 << free.len()) {
        let mut eps = vec![false; m];
        for (k, &j) in free.iter().enumerate() {
            eps[j] = bits & (1 << k) != 0;
        }
        // the chart columns form an identity block, which fixes the remaining signs
        for (i, &ri) in chart_rays.iter().enumerate() {
            let parity = free
                .iter()
                .filter(|&&j| eps[j] && a[i][j].rem_euclid(2) == 1)
                .count()
                % 2
                == 1;
            eps[ri] = parity != negative[i];
        }
        if best.as_ref().map_or(true, |b| eps < *b) {
            best = Some(eps);
        }
    }
    best.unwrap_or_default()
}

/// Precomputed `D(sigma)` exponents for repeated height evaluation.
#[derive(Clone, Debug)]
pub struct HeightFunction {
    dsigma: Vec<Vec<u32>>,
}

/// Which height to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "cone")]
pub enum HeightKind {
    /// `max_sigma |X^{D(sigma)}|`.
    Salberger,
    /// The single monomial `|X^{D(sigma)}|` of one chart, comparable to the Salberger height near the base point.
    ChartMonomial(usize),
}

impl HeightFunction {
    pub fn new(fan: &Fan, d: &TDivisor) -> Result<Self> {
        let dsigma = (0..fan.n_cones())
            .map(|c| Ok(d_sigma(fan, d, c)?.0.iter().map(|&x| x as u32).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dsigma })
    }

    /// Exponents of `X^{D(sigma)}` for the cone `sigma`.
    pub fn exponents(&self, cone: usize) -> &[u32] {
        &self.dsigma[cone]
    }

    pub fn n_cones(&self) -> usize {
        self.dsigma.len()
    }

    pub fn monomial(&self, cone: usize, x: &CoxPoint) -> BigInt {
        let mut acc = BigInt::one();
        for (xj, &e) in x.0.iter().zip(&self.dsigma[cone]) {
            if e > 0 {
                acc *= xj.abs().pow(e);
            }
        }
        acc
    }

    pub fn salberger(&self, x: &CoxPoint) -> BigInt {
        (0..self.dsigma.len())
            .map(|c| self.monomial(c, x))
            .max()
            .expect("fan has cones")
    }

    pub fn eval(&self, kind: HeightKind, x: &CoxPoint) -> BigInt {
        match kind {
            HeightKind::Salberger => self.salberger(x),
            HeightKind::ChartMonomial(c) => self.monomial(c, x),
        }
    }
}

/// `H_D(P) = max_sigma |X^{D(sigma)}|` on the Cox lift of `P`.
pub fn salberger_height(fan: &Fan, d: &TDivisor, p: &RationalPoint) -> Result<BigInt> {
    let h = HeightFunction::new(fan, d)?;
    Ok(h.salberger(&cox_lift(fan, p)?))
}

/// A place of the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Infinity,
    Prime(u64),
    /// Complex places arise only over number fields; not supported over the rationals.
    Complex,
}

impl Place {
    pub fn check(self) -> Result<Self> {
        match self {
            Place::Prime(p) if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) => {
                Err(Error::NotPrime(p))
            }
            Place::Complex => Err(Error::Unsupported("complex places need a number field".into())),
            _ => Ok(self),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
            Place::Complex => f.write_str("complex"),
        }
    }
}

/// `|x|_place` for a rational `x`.
pub fn abs_at(x: &BigRational, place: Place) -> Result<BigRational> {
    match place.check()? {
        Place::Infinity => Ok(x.abs()),
        Place::Prime(p) => {
            if x.is_zero() {
                return Ok(BigRational::zero());
            }
            let pb = BigInt::from(p);
            let v = valuation(x.numer(), &pb) - valuation(x.denom(), &pb);
            Ok(pow_signed(&pb, -v))
        }
        Place::Complex => unreachable!("rejected by check"),
    }
}

/// `min(1, max_i |y_i - 1|_place)` in the point's own chart.
pub fn distance(p: &RationalPoint, place: Place) -> Result<BigRational> {
    let one = BigRational::one();
    let mut best = BigRational::zero();
    for y in &p.coords {
        let a = abs_at(&(y - &one), place)?;
        if a > best {
            best = a;
        }
    }
    Ok(if best > one { one } else { best })
}

/// Applies the sign character `X_j -> (-1)^{<s, [D_j]>} X_j` of the Neron-Severi torus.
///
/// `classes[j]` is the Picard class of ray `j`; the result lifts the same point.
pub fn sign_twist(x: &CoxPoint, classes: &[Vec<i64>], s: &[bool]) -> CoxPoint {
    CoxPoint(
        x.0.iter()
            .zip(classes)
            .map(|(xj, cl)| {
                let parity = cl
                    .iter()
                    .zip(s)
                    .filter(|(c, &on)| on && c.rem_euclid(2) == 1)
                    .count();
                if parity % 2 == 1 {
                    -xj
                } else {
                    xj.clone()
                }
            })
            .collect(),
    )
}
