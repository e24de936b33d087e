//! 2x2 real matrices, the two game-Hessian splittings, and the spectral
//! predicates that relate them.
//!
//! With one parameter per player every block of the game Hessian is a
//! scalar, so `H_d` is the diagonal and `H_o` the off-diagonal part.

use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

pub type Vec2 = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Matrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2::new(0.0, 0.0, 0.0, 0.0);
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    /// Row-major constructor.
    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[f64; 2]; 2]) -> Self {
        Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn transpose(&self) -> Self {
        Matrix2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn scale(&self, s: f64) -> Self {
        Matrix2::new(s * self.a11, s * self.a12, s * self.a21, s * self.a22)
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    /// Solves `self * u = v` by the adjugate formula. `None` when
    /// `|det| < min_abs_det`.
    pub fn solve(&self, v: Vec2, min_abs_det: f64) -> Option<Vec2> {
        let det = self.det();
        if !(det.abs() >= min_abs_det) {
            return None;
        }
        Some([
            (self.a22 * v[0] - self.a12 * v[1]) / det,
            (self.a11 * v[1] - self.a21 * v[0]) / det,
        ])
    }

    pub fn diag(&self) -> Vec2 {
        [self.a11, self.a22]
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let d = *self - *other;
        d.a11
            .abs()
            .max(d.a12.abs())
            .max(d.a21.abs())
            .max(d.a22.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    /// Real parts of the eigenvalues as `(min, max)`.
    ///
    /// Closed form: `tr/2` twice when the discriminant is negative, else
    /// `(tr -+ sqrt(disc)) / 2`.
    pub fn eig_re(&self) -> (f64, f64) {
        let tr = self.trace();
        let disc = tr * tr - 4.0 * self.det();
        if disc < 0.0 {
            (tr / 2.0, tr / 2.0)
        } else {
            let r = disc.sqrt();
            ((tr - r) / 2.0, (tr + r) / 2.0)
        }
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(-1.0)
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

/// `H = S + A` with `S = (H + Hᵀ)/2`, `A = (H - Hᵀ)/2`.
pub fn decompose_sym_antisym(m: Matrix2) -> (Matrix2, Matrix2) {
    let off_s = (m.a12 + m.a21) / 2.0;
    let off_a = (m.a12 - m.a21) / 2.0;
    (
        Matrix2::new(m.a11, off_s, off_s, m.a22),
        Matrix2::new(0.0, off_a, -off_a, 0.0),
    )
}

/// `H = H_d + H_o`: player-diagonal blocks and the cross-player blocks.
pub fn decompose_blocks(m: Matrix2) -> (Matrix2, Matrix2) {
    (
        Matrix2::new(m.a11, 0.0, 0.0, m.a22),
        Matrix2::new(0.0, m.a12, m.a21, 0.0),
    )
}

/// The six spectral predicates relating `H`, `H_d` and `S`. Negative
/// definiteness of a non-symmetric `H` means `S ≺ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DefinitenessReport {
    pub neg_definite: bool,
    pub max_re_spec_h_neg: bool,
    pub min_re_spec_h_neg: bool,
    pub max_re_spec_hd_neg: bool,
    pub min_re_spec_hd_neg: bool,
    pub min_spec_s_neg: bool,
}

impl DefinitenessReport {
    /// Lists every implication edge that fails. Empty for any real matrix.
    pub fn violated_implications(&self) -> Vec<&'static str> {
        let edges = [
            (self.neg_definite, self.max_re_spec_h_neg, "H≺0 ⇒ maxλ(H)<0"),
            (
                self.neg_definite,
                self.max_re_spec_hd_neg,
                "H≺0 ⇒ maxλ(H_d)<0",
            ),
            (
                self.max_re_spec_h_neg,
                self.min_re_spec_h_neg,
                "maxλ(H)<0 ⇒ minλ(H)<0",
            ),
            (
                self.max_re_spec_h_neg,
                self.min_re_spec_hd_neg,
                "maxλ(H)<0 ⇒ minλ(H_d)<0",
            ),
            (
                self.max_re_spec_hd_neg,
                self.min_re_spec_hd_neg,
                "maxλ(H_d)<0 ⇒ minλ(H_d)<0",
            ),
            (
                self.max_re_spec_hd_neg,
                self.min_re_spec_h_neg,
                "maxλ(H_d)<0 ⇒ minλ(H)<0",
            ),
            (
                self.min_re_spec_h_neg,
                self.min_spec_s_neg,
                "minλ(H)<0 ⇒ minλ(S)<0",
            ),
            (
                self.min_re_spec_hd_neg,
                self.min_spec_s_neg,
                "minλ(H_d)<0 ⇒ minλ(S)<0",
            ),
        ];
        edges
            .iter()
            .filter(|(lhs, rhs, _)| *lhs && !*rhs)
            .map(|(_, _, name)| *name)
            .collect()
    }
}

/// Sign tests on trace and determinant (Routh–Hurwitz for 2x2), no epsilon.
///
/// Both eigenvalues have negative real part iff `tr < 0` and `det > 0`; at
/// least one does iff not (`tr >= 0` and `det >= 0`). `S` is positive
/// semidefinite iff its diagonal and determinant are non-negative.
pub fn classify_definiteness(m: Matrix2) -> DefinitenessReport {
    let (s, _) = decompose_sym_antisym(m);
    let (hd, _) = decompose_blocks(m);
    let tr = m.trace();
    let det = m.det();
    DefinitenessReport {
        neg_definite: is_negative_definite(&m),
        max_re_spec_h_neg: tr < 0.0 && det > 0.0,
        min_re_spec_h_neg: !(tr >= 0.0 && det >= 0.0),
        max_re_spec_hd_neg: hd.a11 < 0.0 && hd.a22 < 0.0,
        min_re_spec_hd_neg: hd.a11 < 0.0 || hd.a22 < 0.0,
        min_spec_s_neg: !(s.a11 >= 0.0 && s.a22 >= 0.0 && s.det() >= 0.0),
    }
}

/// `uᵀ M u < 0` for all `u ≠ 0`, decided on the symmetric part.
pub fn is_negative_definite(m: &Matrix2) -> bool {
    let (s, _) = decompose_sym_antisym(*m);
    s.trace() < 0.0 && s.det() > 0.0
}

pub fn is_positive_definite(m: &Matrix2) -> bool {
    let (s, _) = decompose_sym_antisym(*m);
    s.trace() > 0.0 && s.det() > 0.0
}

pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}
