use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Replaces rows `i`, `k` of `m` by `(p*Ri + q*Rk, r*Ri + s*Rk)`.
fn combine_rows(m: &mut IntMatrix, i: usize, k: usize, coeffs: [&BigInt; 4]) {
    let [p, q, r, s] = coeffs;
    for c in 0..m.cols() {
        let a = m.get(i, c).clone();
        let b = m.get(k, c).clone();
        if a.is_zero() && b.is_zero() {
            continue;
        }
        m.set(i, c, p * &a + q * &b);
        m.set(k, c, r * &a + s * &b);
    }
}

fn add_row_multiple(m: &mut IntMatrix, target: usize, src: usize, factor: &BigInt) {
    for c in 0..m.cols() {
        let v = m.get(src, c) * factor;
        if !v.is_zero() {
            let t = m.get(target, c) + v;
            m.set(target, c, t);
        }
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c).clone();
        m.set(r, c, v);
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`, `U` unimodular.
///
/// `H` is in echelon form with zero rows last, each pivot positive and the
/// entries above a pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        for i in row + 1..m.rows() {
            if h.get(i, col).is_zero() {
                continue;
            }
            let a = h.get(row, col).clone();
            let b = h.get(i, col).clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let bg = -(&b / &g);
            let ag = &a / &g;
            combine_rows(&mut h, row, i, [&x, &y, &bg, &ag]);
            combine_rows(&mut u, row, i, [&x, &y, &bg, &ag]);
        }
        if h.get(row, col).is_zero() {
            continue;
        }
        if h.get(row, col).is_negative() {
            negate_row(&mut h, row);
            negate_row(&mut u, row);
        }
        let piv = h.get(row, col).clone();
        for i in 0..row {
            let q = h.get(i, col).div_floor(&piv);
            if !q.is_zero() {
                let nq = -q;
                add_row_multiple(&mut h, i, row, &nq);
                add_row_multiple(&mut u, i, row, &nq);
            }
        }
        row += 1;
    }
    (h, u)
}

/// Saturated integer basis (as rows, in Hermite form) of `{v : M v = 0}`.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(&m.transpose());
    let zero_rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&r| h.row(r).iter().all(Zero::is_zero))
        .map(|r| u.row(r).to_vec())
        .collect();
    if zero_rows.is_empty() {
        return IntMatrix::zeros(0, m.cols());
    }
    let basis = IntMatrix::from_rows(zero_rows, m.cols());
    hermite_normal_form(&basis).0
}

/// Whether the rows of `k` span a saturated sublattice (all Hermite pivots of `k^T` equal one).
pub fn is_saturated(k: &IntMatrix) -> bool {
    let (h, _) = hermite_normal_form(&k.transpose());
    let mut pivots = 0;
    for r in 0..h.rows() {
        if let Some(p) = h.row(r).iter().find(|x| !x.is_zero()) {
            if !p.is_one() {
                return false;
            }
            pivots += 1;
        }
    }
    pivots == k.rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_row_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            match h.row(r).iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|p| c <= p) {
                        return false;
                    }
                    let piv = h.get(r, c);
                    if !piv.is_positive() {
                        return false;
                    }
                    for above in 0..r {
                        let v = h.get(above, c);
                        if v.is_negative() || v >= piv {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_of_small_matrix() {
        let m = IntMatrix::from_i64_rows(&[[4, 6, 2], [2, 4, 8], [1, 1, 1]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(u.mul(&m), h);
        assert!(u.det().abs().is_one());
        assert!(is_row_hnf(&h));
        // |det m| = product of pivots
        assert_eq!(m.det().abs(), BigInt::from(16));
        let prod: BigInt = (0..3).map(|i| h.get(i, i).clone()).product();
        assert_eq!(prod, BigInt::from(16));
    }

    #[test]
    fn kernel_of_projective_plane_rays() {
        let k = kernel_lattice(&IntMatrix::from_i64_rows(&[[1, 1, 1]]));
        assert_eq!(k.rows(), 2);
        // kernel of the ray matrix [[1,0,-1],[0,1,-1]] is spanned by (1,1,1)
        let g = IntMatrix::from_i64_rows(&[[1, 0, -1], [0, 1, -1]]);
        assert_eq!(kernel_lattice(&g), IntMatrix::from_i64_rows(&[[1, 1, 1]]));
    }

    #[test]
    fn kernel_of_full_rank_square_is_empty() {
        let m = IntMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        assert_eq!(kernel_lattice(&m).rows(), 0);
    }

    #[test]
    fn kernel_is_saturated_even_for_non_primitive_input() {
        // kernel of (2, 4) is spanned by (2,-1), not by a multiple
        let k = kernel_lattice(&IntMatrix::from_i64_rows(&[[2, 4]]));
        assert_eq!(k.rows(), 1);
        assert!(is_saturated(&k));
        assert!(!is_saturated(&IntMatrix::from_i64_rows(&[[2, 0]])));
        assert!(!is_saturated(&IntMatrix::from_i64_rows(&[[1, 1], [1, -1]])));
    }
}
