//! Square-free reduction, Sturm sequences and real-root counting and
//! isolation over ℚ.

use super::poly::{rat, Rational, RationalPoly};
use num_traits::Zero;

/// `p / gcd(p, p′)`, monic. Removes repeated factors.
pub fn squarefree(p: &RationalPoly) -> RationalPoly {
    assert!(!p.is_zero(), "square-free part of the zero polynomial");
    let g = p.gcd(&p.derivative());
    p.exact_div(&g).monic()
}

/// `p₀ = p`, `p₁ = p′`, `p_{k+1} = −rem(p_{k−1}, p_k)` until the remainder
/// vanishes.
pub fn sturm_sequence(p: &RationalPoly) -> Vec<RationalPoly> {
    assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = seq[n - 2]
            .rem(&seq[n - 1])
            .expect("sequence entries are nonzero");
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sign variations of the sequence at a finite point (zeros skipped).
pub fn variations_at(seq: &[RationalPoly], x: &Rational) -> usize {
    variations(seq.iter().map(|q| q.sign_at(x)))
}

pub fn variations_at_neg_inf(seq: &[RationalPoly]) -> usize {
    variations(seq.iter().map(RationalPoly::sign_at_neg_inf))
}

pub fn variations_at_pos_inf(seq: &[RationalPoly]) -> usize {
    variations(seq.iter().map(RationalPoly::sign_at_pos_inf))
}

/// Distinct real roots of `p`, over ℝ or inside the open interval `(a, b)`.
///
/// Works on the square-free part. For a square-free Sturm sequence
/// `V(a) − V(b)` counts the roots in `(a, b]` whether or not the endpoints
/// are roots, so the open count subtracts one when `b` is a root.
pub fn count_real_roots(p: &RationalPoly, interval: Option<(&Rational, &Rational)>) -> usize {
    let sf = squarefree(p);
    let seq = sturm_sequence(&sf);
    match interval {
        None => variations_at_neg_inf(&seq) - variations_at_pos_inf(&seq),
        Some((a, b)) => {
            if a >= b {
                return 0;
            }
            let half_open = variations_at(&seq, a) - variations_at(&seq, b);
            half_open - usize::from(sf.sign_at(b) == 0)
        }
    }
}

/// An interval with rational endpoints, `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat(2)
    }
}

/// Disjoint open intervals, each holding exactly one real root of the
/// square-free input, found by Sturm-guided bisection of the Cauchy-bound
/// interval. Endpoints are never roots.
pub fn isolate_roots(p: &RationalPoly) -> Vec<RatInterval> {
    let sf = squarefree(p);
    let seq = sturm_sequence(&sf);
    let b = sf.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = variations_at(&seq, &lo) - variations_at(&seq, &hi);
        match n {
            0 => {}
            1 => out.push(RatInterval { lo, hi }),
            _ => {
                let mid = split_point(&sf, &lo, &hi);
                // Right half first so that the output comes out ascending.
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out
}

/// A point strictly inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &RationalPoly, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    for den in 2i64.. {
        for num in 1..den {
            let t = lo + &width * Rational::new(num.into(), den.into());
            if !p.eval(&t).is_zero() {
                return t;
            }
        }
    }
    unreachable!()
}

/// Bisects an isolating interval `steps` times, keeping the sign change.
/// Collapses to a point if a midpoint hits the root exactly.
pub fn refine_interval(p: &RationalPoly, iv: &RatInterval, steps: usize) -> RatInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let s_lo = p.sign_at(&lo);
    for _ in 0..steps {
        let mid = (&lo + &hi) / rat(2);
        let s = p.sign_at(&mid);
        if s == 0 {
            return RatInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RatInterval { lo, hi }
}
