//! Picard-rank-two smooth projective toric varieties in normal form.

use crate::curves::{min_very_free_degree, very_free};
use crate::divisor::{deg_relation, TDivisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, Relation};
use serde::Serialize;

/// The variety `P(O + O(a_1) + .. + O(a_t))`-style fan with parameters `s, t >= 1`, `0 <= a_1 <= .. <= a_t`.
///
/// Rays are indexed `0..=n+1` with `n = s + t`: ray 0 is `-(e_1 + .. + e_t)`, ray `i` is `e_i`
/// for `1 <= i <= n`, and ray `n+1` is `-(e_{t+1} + .. + e_n) + sum a_i e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KleinschmidtFan {
    s: usize,
    t: usize,
    a: Vec<i64>,
    fan: Fan,
}

/// Degrees of `D` on the two extremal classes, `[D] = A [D_t] + B [D_{n+1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rank2Positivity {
    pub a: i64,
    pub b: i64,
    pub nef: bool,
    pub ample: bool,
    pub big: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssConstant {
    pub value: i64,
    /// `"C3"` or `"C1+C3"`.
    pub class_name: &'static str,
    pub class: Relation,
    pub very_free: bool,
    /// Least degree over very free positive relations with coefficients up to 6.
    pub min_very_free_degree: Option<i64>,
}

impl EssConstant {
    pub fn verified(&self) -> bool {
        self.very_free && self.min_very_free_degree == Some(self.value)
    }
}

impl KleinschmidtFan {
    pub fn build(s: usize, t: usize, a: &[i64]) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::BadParameters("s and t must be positive".into()));
        }
        if a.len() != t {
            return Err(Error::BadParameters(format!("expected {t} twist parameters, got {}", a.len())));
        }
        if a.iter().any(|&x| x < 0) || a.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::BadParameters("twists must be nonnegative and nondecreasing".into()));
        }
        let n = s + t;
        let mut rays = Vec::with_capacity(n + 2);
        let mut r0 = vec![0i64; n];
        for x in r0.iter_mut().take(t) {
            *x = -1;
        }
        rays.push(r0);
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            rays.push(e);
        }
        let mut last = vec![0i64; n];
        for (i, x) in last.iter_mut().enumerate() {
            *x = if i < t { a[i] } else { -1 };
        }
        rays.push(last);
        let mut cones = Vec::with_capacity((t + 1) * (s + 1));
        for i in 0..=t {
            for j in 1..=s + 1 {
                cones.push((0..n + 2).filter(|&k| k != i && k != t + j).collect());
            }
        }
        let fan = Fan::new(n, rays, cones)?;
        fan.require_smooth_complete()?;
        Ok(Self {
            s,
            t,
            a: a.to_vec(),
            fan,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn twists(&self) -> &[i64] {
        &self.a
    }

    fn n(&self) -> usize {
        self.s + self.t
    }

    fn a_t(&self) -> i64 {
        self.a[self.t - 1]
    }

    /// `C_1 = ray_0 + .. + ray_t`.
    pub fn c1(&self) -> Relation {
        let mut c = vec![0i64; self.n() + 2];
        for x in c.iter_mut().take(self.t + 1) {
            *x = 1;
        }
        Relation(c)
    }

    /// `C_2 = ray_{t+1} + .. + ray_{n+1} - sum a_i ray_i`.
    pub fn c2(&self) -> Relation {
        let mut c = vec![0i64; self.n() + 2];
        for i in 1..=self.t {
            c[i] = -self.a[i - 1];
        }
        for x in c.iter_mut().skip(self.t + 1) {
            *x = 1;
        }
        Relation(c)
    }

    /// `C_3 = a_t C_1 + C_2`.
    pub fn c3(&self) -> Relation {
        self.c1().scale(self.a_t()).add(&self.c2())
    }

    /// `b_i = a_t - a_i` for `i < t` and `b_t = a_t`.
    pub fn b(&self) -> Vec<i64> {
        let at = self.a_t();
        (1..=self.t)
            .map(|i| if i == self.t { at } else { at - self.a[i - 1] })
            .collect()
    }

    /// Index of the cone omitting rays `t` and `n+1`.
    pub fn sigma0(&self) -> usize {
        self.t * (self.s + 1) + self.s
    }

    pub fn positivity_rank2(&self, d: &TDivisor) -> Result<Rank2Positivity> {
        let a = deg_relation(&self.fan, d, &self.c1())?;
        let b = deg_relation(&self.fan, d, &self.c2())? + a * self.a_t();
        let at = self.a_t();
        Ok(Rank2Positivity {
            a,
            b,
            nef: a >= 0 && b >= a * at,
            ample: a > 0 && b > a * at,
            big: a > 0 && b > 0,
        })
    }

    /// The essential constant: degree of `C_3`, or of `C_1 + C_3` when some `b_i` vanishes.
    pub fn ess_constant(&self, d: &TDivisor) -> Result<EssConstant> {
        let p = self.positivity_rank2(d)?;
        if !(p.nef && p.big) {
            return Err(Error::NotBigNef);
        }
        let (class_name, class) = if self.b().iter().all(|&x| x != 0) {
            ("C3", self.c3())
        } else {
            ("C1+C3", self.c1().add(&self.c3()))
        };
        let value = deg_relation(&self.fan, d, &class)?;
        Ok(EssConstant {
            value,
            class_name,
            very_free: very_free(&self.fan, &class)?,
            min_very_free_degree: min_very_free_degree(&self.fan, d, 6)?.map(|(_, x)| x),
            class,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hirzebruch_one_has_four_cones() {
        let k = KleinschmidtFan::build(1, 1, &[1]).unwrap();
        assert_eq!(k.fan().n_cones(), 4);
        assert_eq!(k.fan().rays(), &[vec![-1, 0], vec![1, 0], vec![0, 1], vec![1, -1]]);
        assert_eq!(k.c3(), Relation(vec![1, 0, 1, 1]));
        assert_eq!(k.fan().cone(k.sigma0()), &[0, 2]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(KleinschmidtFan::build(0, 1, &[1]).is_err());
        assert!(KleinschmidtFan::build(1, 2, &[2, 1]).is_err());
        assert!(KleinschmidtFan::build(1, 1, &[]).is_err());
        assert!(KleinschmidtFan::build(1, 1, &[-1]).is_err());
    }

    #[test]
    fn hyperplane_of_base_is_not_nef() {
        let k = KleinschmidtFan::build(1, 1, &[2]).unwrap();
        let p = k.positivity_rank2(&TDivisor::prime(4, 1)).unwrap();
        assert_eq!((p.a, p.b), (1, 0));
        assert!(!p.nef && !p.big);
    }
}
