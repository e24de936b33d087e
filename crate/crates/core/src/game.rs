//! Two-player, one-parameter-per-player differentiable games with
//! closed-form losses, simultaneous gradients and game Hessians.
//!
//! * `MarketM`: coercive analytic market whose only critical point, the
//!   origin, is a strict maximum.
//! * `MarketMSigma`: the same market with a disc of radius σ around the
//!   origin deformed so that the origin becomes a strict minimum.
//! * `ZeroSumN`: weakly-coercive zero-sum game, origin a strict maximum.
//! * `ConvexQuad`: `L¹ = x²/2 + xy`, `L² = y²/2 − xy`; constant Hessian
//!   with identity symmetric part.

use crate::error::{Error, Result};
use crate::matrix::{decompose_sym_antisym, norm, Matrix2, Vec2};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Params {
    pub x: f64,
    pub y: f64,
}

impl Params {
    pub const ORIGIN: Params = Params { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Params { x, y }
    }

    pub fn to_vec(self) -> Vec2 {
        [self.x, self.y]
    }

    pub fn from_vec(v: Vec2) -> Self {
        Params { x: v[0], y: v[1] }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// `self - s * v`
    pub fn sub_scaled(self, s: f64, v: Vec2) -> Self {
        Params::new(self.x - s * v[0], self.y - s * v[1])
    }

    pub fn dist(self, o: Params) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameId {
    MarketM,
    /// Use [`GameId::market_sigma`] to construct; σ must lie in (0, 0.1).
    MarketMSigma {
        sigma: f64,
    },
    ZeroSumN,
    ConvexQuad,
}

impl GameId {
    pub fn market_sigma(sigma: f64) -> Result<Self> {
        if sigma > 0.0 && sigma < 0.1 {
            Ok(GameId::MarketMSigma { sigma })
        } else {
            Err(Error::InvalidSigma(sigma))
        }
    }

    /// Short name used on the command line and in output files.
    pub fn short_name(&self) -> &'static str {
        match self {
            GameId::MarketM => "m",
            GameId::MarketMSigma { .. } => "msigma",
            GameId::ZeroSumN => "n",
            GameId::ConvexQuad => "convex",
        }
    }

    pub fn sigma(&self) -> Option<f64> {
        match *self {
            GameId::MarketMSigma { sigma } => Some(sigma),
            _ => None,
        }
    }

    /// Losses `(L¹, L²)`.
    pub fn losses(&self, p: Params) -> (f64, f64) {
        let Params { x, y } = p;
        match *self {
            GameId::MarketM => {
                let (self1, self2) = market_self_terms(x, y);
                let inter = market_interaction(x, y);
                (self1 + inter, self2 - inter)
            }
            GameId::MarketMSigma { sigma } => {
                let inter = market_interaction(x, y);
                let f = f_sigma(sigma, x, y);
                (
                    x.powi(6) / 6.0 - x * x + f + inter,
                    y.powi(6) / 6.0 - f - inter,
                )
            }
            GameId::ZeroSumN => {
                let l1 = x * y - x * x / 2.0 + y * y / 2.0 + x.powi(4) / 4.0 - y.powi(4) / 4.0;
                (l1, -l1)
            }
            GameId::ConvexQuad => (x * x / 2.0 + x * y, y * y / 2.0 - x * y),
        }
    }

    /// Simultaneous gradient `ξ = (∂ₓL¹, ∂ᵧL²)`.
    ///
    /// For `MarketMSigma` points on the circle `‖θ‖ = σ` use the outer branch.
    pub fn grad(&self, p: Params) -> Vec2 {
        let Params { x, y } = p;
        match *self {
            GameId::MarketM => market_xi(x, y),
            GameId::MarketMSigma { sigma } => {
                let xi = market_xi(x, y);
                if outside(sigma, x, y) {
                    xi
                } else {
                    let s2 = sigma * sigma;
                    [
                        xi[0] + 2.0 * x - 2.0 * x * (3.0 * x * x + y * y) / s2,
                        xi[1] + 2.0 * y - 2.0 * y * (y * y - x * x) / s2,
                    ]
                }
            }
            GameId::ZeroSumN => [y - x + x.powi(3), -x - y + y.powi(3)],
            GameId::ConvexQuad => [x + y, y - x],
        }
    }

    /// Game Hessian `H = ∇ξ`, row `i` the gradient of `ξᵢ`.
    pub fn hessian(&self, p: Params) -> Matrix2 {
        let Params { x, y } = p;
        match *self {
            GameId::MarketM => market_hessian(x, y),
            GameId::MarketMSigma { sigma } => {
                let h = market_hessian(x, y);
                if outside(sigma, x, y) {
                    h
                } else {
                    let s2 = sigma * sigma;
                    h + Matrix2::new(
                        2.0 - (18.0 * x * x + 2.0 * y * y) / s2,
                        -4.0 * x * y / s2,
                        4.0 * x * y / s2,
                        2.0 - (6.0 * y * y - 2.0 * x * x) / s2,
                    )
                }
            }
            GameId::ZeroSumN => Matrix2::new(-1.0 + 3.0 * x * x, 1.0, -1.0, -1.0 + 3.0 * y * y),
            GameId::ConvexQuad => Matrix2::new(1.0, 1.0, -1.0, 1.0),
        }
    }

    /// All first partials of both losses: entry `(i, j)` is `∂L^j / ∂θ^i`.
    /// The diagonal is `ξ`.
    pub fn loss_gradients(&self, p: Params) -> Matrix2 {
        let Params { x, y } = p;
        let xi = self.grad(p);
        let (dy_l1, dx_l2) = match *self {
            GameId::MarketM => market_cross(x, y),
            GameId::MarketMSigma { sigma } => {
                let (a, b) = market_cross(x, y);
                // f_σ enters L¹ with + and L² with −; outside the disc ∂f = θ.
                let (fx, fy) = if outside(sigma, x, y) {
                    (x, y)
                } else {
                    let s2 = sigma * sigma;
                    (
                        3.0 * x - 2.0 * x * (3.0 * x * x + y * y) / s2,
                        2.0 * y * (y * y - x * x) / s2 - y,
                    )
                };
                (a + fy, b - fx)
            }
            GameId::ZeroSumN => {
                let dy_l1 = x + y - y.powi(3);
                (dy_l1, -xi[0])
            }
            GameId::ConvexQuad => (x, -y),
        };
        Matrix2::new(xi[0], dx_l2, dy_l1, xi[1])
    }

    pub fn eval(&self, p: Params) -> GameEval {
        let (l1, l2) = self.losses(p);
        GameEval {
            l1,
            l2,
            xi: self.grad(p),
            hess: self.hessian(p),
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameId::MarketMSigma { sigma } => write!(f, "msigma({sigma})"),
            other => f.write_str(other.short_name()),
        }
    }
}

impl FromStr for GameId {
    type Err = Error;

    /// Parses `m`, `n`, `convex`, or `msigma` (σ = 0.01).
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m" | "market" => Ok(GameId::MarketM),
            "msigma" | "market-sigma" => GameId::market_sigma(0.01),
            "n" | "zerosum" => Ok(GameId::ZeroSumN),
            "convex" | "convexquad" => Ok(GameId::ConvexQuad),
            other => Err(Error::InvalidConfig(format!("unknown game `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameEval {
    pub l1: f64,
    pub l2: f64,
    pub xi: Vec2,
    pub hess: Matrix2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalClass {
    NotCritical,
    StrictMin,
    StrictMax,
    Other,
}

pub fn classify_critical_point(game: &GameId, p: Params, tol: f64) -> CriticalClass {
    if !(norm(game.grad(p)) < tol) {
        return CriticalClass::NotCritical;
    }
    let (s, _) = decompose_sym_antisym(game.hessian(p));
    if s.trace() > 0.0 && s.det() > 0.0 {
        CriticalClass::StrictMin
    } else if s.trace() < 0.0 && s.det() > 0.0 {
        CriticalClass::StrictMax
    } else {
        CriticalClass::Other
    }
}

/// Central differences of each player's own loss in its own coordinate.
pub fn fd_grad(game: &GameId, p: Params, h: f64) -> Vec2 {
    let dx = (game.losses(Params::new(p.x + h, p.y)).0 - game.losses(Params::new(p.x - h, p.y)).0)
        / (2.0 * h);
    let dy = (game.losses(Params::new(p.x, p.y + h)).1 - game.losses(Params::new(p.x, p.y - h)).1)
        / (2.0 * h);
    [dx, dy]
}

/// Central differences of `ξ`; row `i` approximates `∇ξᵢ`.
pub fn fd_hessian(game: &GameId, p: Params, h: f64) -> Matrix2 {
    let gxp = game.grad(Params::new(p.x + h, p.y));
    let gxm = game.grad(Params::new(p.x - h, p.y));
    let gyp = game.grad(Params::new(p.x, p.y + h));
    let gym = game.grad(Params::new(p.x, p.y - h));
    let d = 2.0 * h;
    Matrix2::new(
        (gxp[0] - gxm[0]) / d,
        (gyp[0] - gym[0]) / d,
        (gxp[1] - gxm[1]) / d,
        (gyp[1] - gym[1]) / d,
    )
}

fn outside(sigma: f64, x: f64, y: f64) -> bool {
    x * x + y * y >= sigma * sigma
}

fn f_sigma(sigma: f64, x: f64, y: f64) -> f64 {
    let s2 = sigma * sigma;
    let r2 = x * x + y * y;
    if r2 >= s2 {
        (r2 - s2) / 2.0
    } else {
        (y * y - 3.0 * x * x) * (r2 - s2) / (2.0 * s2)
    }
}

fn market_self_terms(x: f64, y: f64) -> (f64, f64) {
    (x.powi(6) / 6.0 - x * x / 2.0, y.powi(6) / 6.0 - y * y / 2.0)
}

/// Zero-sum interaction: enters `L¹` with `+` and `L²` with `−`.
fn market_interaction(x: f64, y: f64) -> f64 {
    x * y + 0.25 * (y.powi(4) / (1.0 + x * x) - x.powi(4) / (1.0 + y * y))
}

fn market_xi(x: f64, y: f64) -> Vec2 {
    let px = 1.0 + x * x;
    let py = 1.0 + y * y;
    [
        x.powi(5) - x + y - y.powi(4) * x / (2.0 * px * px) - x.powi(3) / py,
        y.powi(5) - y - x - x.powi(4) * y / (2.0 * py * py) - y.powi(3) / px,
    ]
}

fn market_hessian(x: f64, y: f64) -> Matrix2 {
    let px = 1.0 + x * x;
    let py = 1.0 + y * y;
    Matrix2::new(
        5.0 * x.powi(4)
            - 1.0
            - y.powi(4) * (1.0 - 3.0 * x * x) / (2.0 * px.powi(3))
            - 3.0 * x * x / py,
        1.0 - 2.0 * y.powi(3) * x / (px * px) + 2.0 * x.powi(3) * y / (py * py),
        -1.0 - 2.0 * x.powi(3) * y / (py * py) + 2.0 * y.powi(3) * x / (px * px),
        5.0 * y.powi(4)
            - 1.0
            - x.powi(4) * (1.0 - 3.0 * y * y) / (2.0 * py.powi(3))
            - 3.0 * y * y / px,
    )
}

/// `(∂ᵧL¹, ∂ₓL²)` for the market.
fn market_cross(x: f64, y: f64) -> (f64, f64) {
    let px = 1.0 + x * x;
    let py = 1.0 + y * y;
    (
        x + y.powi(3) / px + x.powi(4) * y / (2.0 * py * py),
        -y + x * y.powi(4) / (2.0 * px * px) + x.powi(3) / py,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma05() -> GameId {
        GameId::market_sigma(0.05).unwrap()
    }

    #[test]
    fn loss_examples() {
        assert_eq!(GameId::ZeroSumN.losses(Params::ORIGIN), (0.0, 0.0));
        assert_eq!(GameId::ZeroSumN.losses(Params::new(1.0, 1.0)), (1.0, -1.0));
        let (l1, l2) = sigma05().losses(Params::ORIGIN);
        assert_eq!(l1, 0.0);
        assert_eq!(l2, 0.0);
    }

    #[test]
    fn grad_examples() {
        assert_eq!(GameId::MarketM.grad(Params::ORIGIN), [0.0, 0.0]);
        assert_eq!(GameId::MarketM.grad(Params::new(1.0, 0.0)), [-1.0, -1.0]);
        assert_eq!(GameId::ZeroSumN.grad(Params::new(1.0, 0.0)), [0.0, -1.0]);
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(
            GameId::ZeroSumN.hessian(Params::ORIGIN),
            Matrix2::new(-1.0, 1.0, -1.0, -1.0)
        );
        assert_eq!(
            GameId::ZeroSumN.hessian(Params::new(1.0, 1.0)),
            Matrix2::new(2.0, 1.0, -1.0, 2.0)
        );
        assert_eq!(
            sigma05().hessian(Params::ORIGIN),
            Matrix2::new(1.0, 1.0, -1.0, 1.0)
        );
        assert_eq!(
            GameId::MarketM.hessian(Params::ORIGIN),
            Matrix2::new(-1.0, 1.0, -1.0, -1.0)
        );
        assert_eq!(
            GameId::ConvexQuad.hessian(Params::new(3.0, -2.0)),
            Matrix2::new(1.0, 1.0, -1.0, 1.0)
        );
    }

    #[test]
    fn fd_grad_examples() {
        let g = fd_grad(&GameId::ZeroSumN, Params::ORIGIN, 1e-5);
        assert!(g[0].abs() < 1e-10 && g[1].abs() < 1e-10);
        for (game, p) in [
            (GameId::ZeroSumN, Params::new(0.5, -0.5)),
            (GameId::MarketM, Params::new(1.2, 0.7)),
        ] {
            let a = game.grad(p);
            let n = fd_grad(&game, p, 1e-5);
            for i in 0..2 {
                assert!(
                    (a[i] - n[i]).abs() <= 1e-6 * (1.0 + a[i].abs()),
                    "{game} {p:?}"
                );
            }
        }
    }

    #[test]
    fn sigma_circle_uses_outer_branch() {
        let g = sigma05();
        // Exactly ‖θ‖ = σ in floating point.
        let p = Params::new(0.05, 0.0);
        assert_eq!(g.grad(p), GameId::MarketM.grad(p));
        assert_eq!(g.hessian(p), GameId::MarketM.hessian(p));
    }

    #[test]
    fn sigma_bounds() {
        assert!(GameId::market_sigma(0.0).is_err());
        assert!(GameId::market_sigma(0.1).is_err());
        assert!(GameId::market_sigma(f64::NAN).is_err());
        assert!(GameId::market_sigma(0.099).is_ok());
    }

    #[test]
    fn critical_point_examples() {
        assert_eq!(
            classify_critical_point(&GameId::ZeroSumN, Params::ORIGIN, 1e-9),
            CriticalClass::StrictMax
        );
        assert_eq!(
            classify_critical_point(&sigma05(), Params::ORIGIN, 1e-9),
            CriticalClass::StrictMin
        );
        assert_eq!(
            classify_critical_point(&GameId::ZeroSumN, Params::new(1.0, 1.0), 1e-9),
            CriticalClass::NotCritical
        );
        assert_eq!(
            classify_critical_point(&GameId::MarketM, Params::ORIGIN, 1e-9),
            CriticalClass::StrictMax
        );
    }

    #[test]
    fn loss_gradient_diagonal_is_xi() {
        for game in [
            GameId::MarketM,
            sigma05(),
            GameId::ZeroSumN,
            GameId::ConvexQuad,
        ] {
            for p in [Params::new(0.3, -1.1), Params::new(0.01, 0.02)] {
                let lg = game.loss_gradients(p);
                assert_eq!(lg.diag(), game.grad(p));
            }
        }
    }

    #[test]
    fn loss_gradients_match_central_differences() {
        let h = 1e-6;
        for game in [
            GameId::MarketM,
            sigma05(),
            GameId::ZeroSumN,
            GameId::ConvexQuad,
        ] {
            for p in [
                Params::new(0.3, -1.1),
                Params::new(0.01, 0.02),
                Params::new(-0.02, 0.015),
            ] {
                let lg = game.loss_gradients(p);
                let (l1yp, l2yp) = game.losses(Params::new(p.x, p.y + h));
                let (l1ym, l2ym) = game.losses(Params::new(p.x, p.y - h));
                let (l1xp, l2xp) = game.losses(Params::new(p.x + h, p.y));
                let (l1xm, l2xm) = game.losses(Params::new(p.x - h, p.y));
                let fd = Matrix2::new(
                    (l1xp - l1xm) / (2.0 * h),
                    (l2xp - l2xm) / (2.0 * h),
                    (l1yp - l1ym) / (2.0 * h),
                    (l2yp - l2ym) / (2.0 * h),
                );
                assert!(
                    lg.max_abs_diff(&fd) < 1e-6,
                    "{game} {p:?}: {lg:?} vs {fd:?}"
                );
            }
        }
    }

    #[test]
    fn parse_games() {
        assert_eq!("n".parse::<GameId>().unwrap(), GameId::ZeroSumN);
        assert_eq!("M".parse::<GameId>().unwrap(), GameId::MarketM);
        assert!("q".parse::<GameId>().is_err());
    }
}
