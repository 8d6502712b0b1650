//! Binary forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Homogeneous polynomial in `(u, v)` of a fixed degree.
///
/// `coeffs[k]` is the coefficient of `u^k v^(degree - k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        Self {
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The linear form `a u + b v`.
    pub fn linear(a: BigInt, b: BigInt) -> Self {
        Self::new(vec![b, a])
    }

    /// `v^degree`.
    pub fn v_power(degree: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[0] = BigInt::one();
        f
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn add_assign(&mut self, other: &Self, negate: bool) {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if negate {
                *a -= b;
            } else {
                *a += b;
            }
        }
    }

    pub fn eval(&self, u: &BigInt, v: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut upow = BigInt::one();
        let vpows: Vec<BigInt> = {
            let mut p = Vec::with_capacity(self.degree + 1);
            let mut cur = BigInt::one();
            for _ in 0..=self.degree {
                p.push(cur.clone());
                cur *= v;
            }
            p
        };
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &upow * &vpows[self.degree - k];
            }
            upow *= u;
        }
        acc
    }
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

/// Primitive gcd of univariate integer polynomials (coefficients low to high).
fn poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut a = primitive(trim(a));
    let mut b = primitive(trim(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        // pseudo-remainder of a by b
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() && !a.is_empty() {
            let la = a.last().unwrap().clone();
            let shift = a.len() - b.len();
            for c in a.iter_mut() {
                *c *= &lb;
            }
            for (k, bc) in b.iter().enumerate() {
                a[k + shift] -= &la * bc;
            }
            a = trim(a);
        }
        a = primitive(a);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Whether the nonzero forms share a zero on the projective line over an algebraic closure.
///
/// An all-zero family counts as having a common zero.
pub fn forms_have_common_zero(forms: &[BinaryForm]) -> bool {
    let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return true;
    }
    if nonzero.iter().all(|f| f.coeffs[f.degree].is_zero()) {
        return true;
    }
    let mut g: Vec<BigInt> = Vec::new();
    for f in nonzero {
        g = if g.is_empty() {
            primitive(trim(f.coeffs.clone()))
        } else {
            poly_gcd(g, f.coeffs.clone())
        };
        if g.len() == 1 {
            return false;
        }
    }
    g.len() > 1
}

/// Determinant of a square matrix of forms whose column `j` has constant degree.
pub fn form_matrix_det(m: &[Vec<BinaryForm>]) -> BinaryForm {
    let n = m.len();
    if n == 0 {
        return BinaryForm::constant(BigInt::one());
    }
    // expansion over column subsets, building up from the first row
    let mut memo: HashMap<u64, BinaryForm> = HashMap::new();
    memo.insert(0, BinaryForm::constant(BigInt::one()));
    for size in 1..=n {
        let row = &m[size - 1];
        let mut next = HashMap::new();
        for mask in subsets_of_size(n, size) {
            let mut acc: Option<BinaryForm> = None;
            let mut pos = 0;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let minor = &memo[&(mask & !(1 << c))];
                let term = row[c].mul(minor);
                let negate = (size - 1 + pos) % 2 == 1;
                match &mut acc {
                    None => {
                        acc = Some(if negate {
                            term.scale(&BigInt::from(-1))
                        } else {
                            term
                        })
                    }
                    Some(a) => a.add_assign(&term, negate),
                }
                pos += 1;
            }
            next.insert(mask, acc.expect("nonempty subset"));
        }
        memo = next;
    }
    memo.remove(&((1u64 << n) - 1)).unwrap()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0u64..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(a: i64, b: i64) -> BinaryForm {
        BinaryForm::linear(a.into(), b.into())
    }

    #[test]
    fn multiply_and_evaluate() {
        let f = lin(1, 2).mul(&lin(3, -1)); // (u+2v)(3u-v) = 3u^2 + 5uv - 2v^2
        assert_eq!(f.coeffs(), &[BigInt::from(-2), 5.into(), 3.into()]);
        assert_eq!(f.eval(&2.into(), &1.into()), BigInt::from(20));
        assert_eq!(f.eval(&1.into(), &0.into()), BigInt::from(3));
    }

    #[test]
    fn common_zero_detection() {
        let a = lin(1, 2).mul(&lin(1, 3));
        let b = lin(1, 2).mul(&lin(2, 1));
        assert!(forms_have_common_zero(&[a.clone(), b]));
        let c = lin(1, 5).mul(&lin(1, 7));
        assert!(!forms_have_common_zero(&[a, c]));
        // both vanish at (1:0)
        assert!(forms_have_common_zero(&[lin(0, 1), BinaryForm::v_power(3)]));
        assert!(!forms_have_common_zero(&[lin(0, 1), lin(1, 0)]));
        assert!(!forms_have_common_zero(&[BinaryForm::constant(5.into())]));
    }

    #[test]
    fn determinant_of_form_matrix() {
        // det [[u, v], [v, u]] = u^2 - v^2
        let m = vec![vec![lin(1, 0), lin(0, 1)], vec![lin(0, 1), lin(1, 0)]];
        let d = form_matrix_det(&m);
        assert_eq!(d.coeffs(), &[BigInt::from(-1), 0.into(), 1.into()]);
        let c = |x: i64| BinaryForm::constant(x.into());
        let m3 = vec![
            vec![c(2), c(1), c(0)],
            vec![c(1), c(3), c(1)],
            vec![c(0), c(1), c(4)],
        ];
        assert_eq!(form_matrix_det(&m3), c(18));
    }
}
