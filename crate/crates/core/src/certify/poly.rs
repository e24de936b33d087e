//! Dense polynomials with exact rational coefficients, univariate and
//! bivariate.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Univariate polynomial over ℚ, coefficients in ascending degree. The zero
/// polynomial has no coefficients; otherwise the last one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RationalPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        RationalPoly::new(vec![c])
    }

    pub fn one() -> Self {
        RationalPoly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        RationalPoly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RationalPoly::zero();
        }
        RationalPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => RationalPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Sign (-1, 0, 1) at `x`.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    /// Sign as `x → +∞`.
    pub fn sign_at_pos_inf(&self) -> i8 {
        self.leading().map_or(0, sign)
    }

    /// Sign as `x → −∞`.
    pub fn sign_at_neg_inf(&self) -> i8 {
        match (self.leading(), self.degree()) {
            (Some(lc), Some(d)) => {
                let s = sign(lc);
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
            _ => 0,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(RationalPoly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division: `self = q·quot + rem`, `deg rem < deg q`.
    pub fn divrem(&self, q: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        let dq = q.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lc_inv = q.coeffs[dq].recip();
        let mut rem = self.coeffs.clone();
        let Some(dp) = self.degree() else {
            return Ok((RationalPoly::zero(), RationalPoly::zero()));
        };
        if dp < dq {
            return Ok((RationalPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); dp - dq + 1];
        for k in (0..=dp - dq).rev() {
            let c = &rem[k + dq] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, qc) in q.coeffs.iter().enumerate() {
                rem[k + j] -= &c * qc;
            }
            quot[k] = c;
        }
        rem.truncate(dq);
        Ok((RationalPoly::new(quot), RationalPoly::new(rem)))
    }

    pub fn rem(&self, q: &RationalPoly) -> Result<RationalPoly> {
        Ok(self.divrem(q)?.1)
    }

    /// Division known to be exact. Panics otherwise.
    pub fn exact_div(&self, q: &RationalPoly) -> RationalPoly {
        let (quot, rem) = self.divrem(q).expect("exact division by zero polynomial");
        assert!(rem.is_zero(), "inexact polynomial division");
        quot
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RationalPoly) -> RationalPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Cauchy bound: every real root lies strictly inside `(−B, B)`.
    pub fn cauchy_bound(&self) -> Rational {
        let Some(lc) = self.leading() else {
            return Rational::one();
        };
        let lc = lc.abs();
        let d = self.coeffs.len() - 1;
        let m = self.coeffs[..d]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |acc, c| if c > acc { c } else { acc });
        m + Rational::one()
    }

    /// Nearest-f64 evaluation of the exact value at `x`.
    pub fn eval_f64(&self, x: &Rational) -> f64 {
        to_f64(&self.eval(x))
    }
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: &RationalPoly) -> RationalPoly {
        self + &(-o)
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: &RationalPoly) -> RationalPoly {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(RationalPoly, Add add, Sub sub, Mul mul);

/// Polynomial in `y` whose coefficients are polynomials in `x`;
/// `y_coeffs[k]` multiplies `yᵏ`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    y_coeffs: Vec<RationalPoly>,
}

impl BiPoly {
    pub fn new(mut y_coeffs: Vec<RationalPoly>) -> Self {
        while y_coeffs.last().is_some_and(RationalPoly::is_zero) {
            y_coeffs.pop();
        }
        BiPoly { y_coeffs }
    }

    pub fn from_x(p: RationalPoly) -> Self {
        BiPoly::new(vec![p])
    }

    pub fn constant(c: i64) -> Self {
        BiPoly::from_x(RationalPoly::from_ints(&[c]))
    }

    pub fn x() -> Self {
        BiPoly::from_x(RationalPoly::x())
    }

    pub fn y() -> Self {
        BiPoly::new(vec![RationalPoly::zero(), RationalPoly::one()])
    }

    pub fn y_coeffs(&self) -> &[RationalPoly] {
        &self.y_coeffs
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.y_coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.y_coeffs.is_empty()
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(BiPoly::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.y_coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * y + c.eval(x))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let n = self.y_coeffs.len().max(o.y_coeffs.len());
        let zero = RationalPoly::zero();
        BiPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.y_coeffs.get(i).unwrap_or(&zero);
                    let b = o.y_coeffs.get(i).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            y_coeffs: self.y_coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        self + &(-o)
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::default();
        }
        let mut out = vec![RationalPoly::zero(); self.y_coeffs.len() + o.y_coeffs.len() - 1];
        for (i, a) in self.y_coeffs.iter().enumerate() {
            for (j, b) in o.y_coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

forward_owned!(BiPoly, Add add, Sub sub, Mul mul);
