//! Exact certificates that a game has a single real critical point.
//!
//! The critical-point equations are cleared of denominators, `y` is
//! eliminated with a Sylvester resultant, and the distinct real roots of
//! the resulting polynomial in `x` are counted with a Sturm sequence and
//! independently isolated by bisection. Since the origin is known to be
//! critical, a count of one proves uniqueness.

pub mod poly;
pub mod resultant;
pub mod sturm;

use crate::error::{Error, Result};
use crate::game::GameId;
use poly::{BiPoly, Rational, RationalPoly};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

pub use resultant::sylvester_resultant_y;
pub use sturm::{
    count_real_roots, isolate_roots, refine_interval, squarefree, sturm_sequence, RatInterval,
};

/// Polynomial critical-point system `{p₁ = 0, p₂ = 0}` for games that admit
/// one.
pub fn critical_system(game: &GameId) -> Result<(BiPoly, BiPoly)> {
    let x = BiPoly::x;
    let y = BiPoly::y;
    let c = BiPoly::constant;
    match game {
        GameId::MarketM => {
            // 2(1+x²)²(1+y²)(x⁵−x+y) − y⁴x(1+y²) − 2x³(1+x²)²
            let one_x2 = &c(1) + &x().pow(2);
            let one_y2 = &c(1) + &y().pow(2);
            let p1 = &(&(&c(2) * &one_x2.pow(2)) * &(&one_y2 * &(&(&x().pow(5) - &x()) + &y())))
                - &(&(&y().pow(4) * &x()) * &one_y2);
            let p1 = &p1 - &(&(&c(2) * &x().pow(3)) * &one_x2.pow(2));
            // 2(1+y²)²(1+x²)(y⁵−y−x) − x⁴y(1+x²) − 2y³(1+y²)²
            let p2 = &(&(&c(2) * &one_y2.pow(2)) * &(&one_x2 * &(&(&y().pow(5) - &y()) - &x())))
                - &(&(&x().pow(4) * &y()) * &one_x2);
            let p2 = &p2 - &(&(&c(2) * &y().pow(3)) * &one_y2.pow(2));
            Ok((p1, p2))
        }
        GameId::ZeroSumN => {
            let p1 = &(&y() - &x()) + &x().pow(3);
            let p2 = &(&(-&x()) - &y()) + &y().pow(3);
            Ok((p1, p2))
        }
        other => Err(Error::UnsupportedGame(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertReport {
    pub game: GameId,
    pub resultant: RationalPoly,
    pub resultant_degree: usize,
    /// Distinct real roots of the resultant, by Sturm count.
    pub real_root_count: usize,
    /// Isolating intervals from the bisection oracle.
    pub isolating_intervals: Vec<RatInterval>,
    /// Unique critical point confirmed: the Sturm count is one and the
    /// bisection oracle agrees.
    pub conclusion: bool,
}

impl Serialize for CertReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = |r: &Rational| [r.numer().to_string(), r.denom().to_string()];
        let intervals: Vec<[[String; 2]; 2]> = self
            .isolating_intervals
            .iter()
            .map(|iv| [pair(&iv.lo), pair(&iv.hi)])
            .collect();
        let mut st = s.serialize_struct("CertReport", 5)?;
        st.serialize_field("game", self.game.short_name())?;
        st.serialize_field("resultant_degree", &self.resultant_degree)?;
        st.serialize_field("real_root_count", &self.real_root_count)?;
        st.serialize_field("intervals", &intervals)?;
        st.serialize_field("conclusion", &self.conclusion)?;
        st.end()
    }
}

pub fn certify_unique_critical(game: &GameId) -> Result<CertReport> {
    let (p1, p2) = critical_system(game)?;
    let res = sylvester_resultant_y(&p1, &p2);
    if res.is_zero() {
        // Common factor in the system; elimination says nothing.
        return Ok(CertReport {
            game: *game,
            resultant: res,
            resultant_degree: 0,
            real_root_count: 0,
            isolating_intervals: Vec::new(),
            conclusion: false,
        });
    }
    let degree = res.degree().unwrap_or(0);
    let count = count_real_roots(&res, None);
    let intervals = isolate_roots(&res);
    let conclusion = count == 1 && intervals.len() == 1;
    Ok(CertReport {
        game: *game,
        resultant: res,
        resultant_degree: degree,
        real_root_count: count,
        isolating_intervals: intervals,
        conclusion,
    })
}
