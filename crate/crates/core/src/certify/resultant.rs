//! Elimination of `y` from two bivariate polynomials via the Sylvester
//! resultant.

use super::poly::{BiPoly, RationalPoly};

/// Sylvester matrix of `p` (degree m in y) and `q` (degree n in y): n
/// shifted rows of `p`'s coefficients followed by m shifted rows of `q`'s,
/// highest power of `y` first.
pub fn sylvester_matrix_y(p: &BiPoly, q: &BiPoly) -> Vec<Vec<RationalPoly>> {
    let m = p.degree_y().expect("p must be nonzero");
    let n = q.degree_y().expect("q must be nonzero");
    let size = m + n;
    let row = |coeffs: &[RationalPoly], shift: usize| {
        let mut r = vec![RationalPoly::zero(); size];
        for (k, c) in coeffs.iter().rev().enumerate() {
            r[shift + k] = c.clone();
        }
        r
    };
    let mut mat = Vec::with_capacity(size);
    for i in 0..n {
        mat.push(row(p.y_coeffs(), i));
    }
    for i in 0..m {
        mat.push(row(q.y_coeffs(), i));
    }
    mat
}

/// Determinant over ℚ[x] by Bareiss fraction-free elimination. Every
/// division is exact.
pub fn bareiss_det(mut a: Vec<Vec<RationalPoly>>) -> RationalPoly {
    let n = a.len();
    if n == 0 {
        return RationalPoly::one();
    }
    let mut negate = false;
    let mut prev = RationalPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return RationalPoly::zero();
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev);
            }
            a[i][k] = RationalPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// `Res_y(p, q)`, a polynomial in `x` vanishing at the x-coordinate of
/// every common root.
pub fn sylvester_resultant_y(p: &BiPoly, q: &BiPoly) -> RationalPoly {
    if p.degree_y() == Some(0) && q.degree_y() == Some(0) {
        // Empty Sylvester matrix.
        return RationalPoly::one();
    }
    bareiss_det(sylvester_matrix_y(p, q))
}
