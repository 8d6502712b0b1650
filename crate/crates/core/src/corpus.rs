//! Bundled test fans.

use crate::divisor::TDivisor;
use crate::fan::Fan;
use crate::kleinschmidt::KleinschmidtFan;
use crate::positivity::positivity;

/// A named fan, with its normal-form parameters when it is a Kleinschmidt fan.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub fan: Fan,
    pub kleinschmidt: Option<KleinschmidtFan>,
}

impl CorpusEntry {
    /// `-K` when it is nef and big, otherwise the first ample divisor with coefficients in `0..=2`.
    pub fn test_divisor(&self) -> TDivisor {
        test_divisor(&self.fan)
    }
}

pub fn test_divisor(fan: &Fan) -> TDivisor {
    let n = fan.n_rays();
    let k = TDivisor::anticanonical(n);
    if positivity(fan, &k).is_ok_and(|p| p.nef && p.big) {
        return k;
    }
    (0..3u64.pow(n as u32))
        .map(|mut code| {
            TDivisor(
                (0..n)
                    .map(|_| {
                        let c = (code % 3) as i64;
                        code /= 3;
                        c
                    })
                    .collect(),
            )
        })
        .find(|d| positivity(fan, d).is_ok_and(|p| p.ample))
        .unwrap_or(k)
}

fn plain(name: &'static str, dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> CorpusEntry {
    let fan = Fan::new(
        dim,
        rays.iter().map(|r| r.to_vec()).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
    )
    .expect("corpus fan is well formed");
    CorpusEntry {
        name,
        fan,
        kleinschmidt: None,
    }
}

fn kleinschmidt(name: &'static str, s: usize, t: usize, a: &[i64]) -> CorpusEntry {
    let k = KleinschmidtFan::build(s, t, a).expect("corpus parameters are valid");
    CorpusEntry {
        name,
        fan: k.fan().clone(),
        kleinschmidt: Some(k),
    }
}

pub fn p2() -> Fan {
    by_name("p2").unwrap().fan
}

pub fn s7() -> Fan {
    by_name("s7").unwrap().fan
}

/// Every bundled fan, in a fixed order.
pub fn all() -> Vec<CorpusEntry> {
    vec![
        plain("p2", 2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]]),
        plain(
            "p3",
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
            &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        ),
        plain(
            "s7",
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1]],
            &[&[0, 4], &[4, 1], &[1, 2], &[2, 3], &[3, 0]],
        ),
        plain(
            "s6",
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1], &[-1, -1]],
            &[&[0, 4], &[4, 1], &[1, 2], &[2, 5], &[5, 3], &[3, 0]],
        ),
        kleinschmidt("f0", 1, 1, &[0]),
        kleinschmidt("f1", 1, 1, &[1]),
        kleinschmidt("f2", 1, 1, &[2]),
        kleinschmidt("k_2_1_2", 2, 1, &[2]),
        kleinschmidt("k_1_2_0_1", 1, 2, &[0, 1]),
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    all().into_iter().find(|e| e.name == name)
}
