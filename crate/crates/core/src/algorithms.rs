//! The ten gradient-based update rules, each written as
//! `θ ← θ − α G(θ)` for an algorithm-specific direction `G`.

use crate::error::{Error, Result};
use crate::game::{GameId, Params};
use crate::matrix::{decompose_blocks, decompose_sym_antisym, dot, norm, Matrix2, Vec2};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Determinant floor for the CGD solve.
pub const CGD_MIN_ABS_DET: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AlgoId {
    /// Simultaneous gradient descent.
    GD,
    /// Alternating gradient descent: player 2 sees player 1's fresh update.
    AGD,
    /// Extragradient.
    EG,
    /// Optimistic mirror descent.
    OMD,
    /// Symplectic gradient adjustment.
    SGA,
    /// Consensus optimization.
    CO,
    /// Competitive gradient descent.
    CGD,
    /// Lookahead.
    LA,
    /// Learning with opponent-learning awareness.
    LOLA,
    /// Stable opponent shaping.
    SOS,
}

impl AlgoId {
    pub const ALL: [AlgoId; 10] = [
        AlgoId::GD,
        AlgoId::AGD,
        AlgoId::EG,
        AlgoId::OMD,
        AlgoId::SGA,
        AlgoId::CO,
        AlgoId::CGD,
        AlgoId::LA,
        AlgoId::LOLA,
        AlgoId::SOS,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgoId::GD => "gd",
            AlgoId::AGD => "agd",
            AlgoId::EG => "eg",
            AlgoId::OMD => "omd",
            AlgoId::SGA => "sga",
            AlgoId::CO => "co",
            AlgoId::CGD => "cgd",
            AlgoId::LA => "la",
            AlgoId::LOLA => "lola",
            AlgoId::SOS => "sos",
        }
    }
}

impl fmt::Display for AlgoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        AlgoId::ALL
            .iter()
            .copied()
            .find(|a| a.name() == lower)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperParams {
    /// Learning rate, shared by both players.
    pub alpha: f64,
    /// Consensus-optimization coefficient.
    pub gamma: f64,
    /// SOS alignment constant, in (0, 1).
    pub sos_a: f64,
    /// SOS gradient-norm threshold.
    pub sos_b: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        HyperParams {
            alpha: 0.01,
            gamma: 0.01,
            sos_a: 0.5,
            sos_b: 0.1,
        }
    }
}

impl HyperParams {
    pub fn with_alpha(alpha: f64) -> Self {
        HyperParams {
            alpha,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "gamma must be > 0, got {}",
                self.gamma
            )));
        }
        if !(self.sos_a > 0.0 && self.sos_a < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sos_a must be in (0,1), got {}",
                self.sos_a
            )));
        }
        if !(self.sos_b > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sos_b must be > 0, got {}",
                self.sos_b
            )));
        }
        Ok(())
    }
}

/// Carried state. Only OMD reads it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgoState {
    pub prev: Option<Params>,
}

/// Update direction `G`, so that the next iterate is `p − α G`.
pub fn g_vector(
    game: &GameId,
    algo: AlgoId,
    p: Params,
    state: &AlgoState,
    hp: &HyperParams,
) -> Result<Vec2> {
    let alpha = hp.alpha;
    let xi = game.grad(p);
    let g = match algo {
        AlgoId::GD => xi,
        AlgoId::AGD => {
            let moved = Params::new(p.x - alpha * xi[0], p.y);
            [xi[0], game.grad(moved)[1]]
        }
        AlgoId::EG => game.grad(p.sub_scaled(alpha, xi)),
        AlgoId::OMD => {
            // First step: prev := θ₀, i.e. plain GD.
            let prev_xi = state.prev.map_or(xi, |q| game.grad(q));
            [2.0 * xi[0] - prev_xi[0], 2.0 * xi[1] - prev_xi[1]]
        }
        AlgoId::SGA => {
            let lambda = sga_lambda(game, p);
            let (_, a) = decompose_sym_antisym(game.hessian(p));
            add(xi, a.transpose().mul_vec(xi), lambda)
        }
        AlgoId::CO => {
            let h = game.hessian(p);
            add(xi, h.transpose().mul_vec(xi), hp.gamma)
        }
        AlgoId::CGD => {
            let (_, ho) = decompose_blocks(game.hessian(p));
            let m = Matrix2::IDENTITY + ho.scale(alpha);
            m.solve(xi, CGD_MIN_ABS_DET)
                .ok_or(Error::SingularMatrix { det: m.det() })?
        }
        AlgoId::LA => lookahead(game, p, xi, alpha),
        AlgoId::LOLA => {
            let chi = shaping_term(game, p);
            add(lookahead(game, p, xi, alpha), chi, -alpha)
        }
        AlgoId::SOS => {
            let chi = shaping_term(game, p);
            let pp = sos_p(game, p, hp);
            add(lookahead(game, p, xi, alpha), chi, -pp * alpha)
        }
    };
    Ok(g)
}

/// One update. OMD's returned state remembers `p`; every other state is
/// passed through unchanged.
pub fn step(
    game: &GameId,
    algo: AlgoId,
    p: Params,
    state: &AlgoState,
    hp: &HyperParams,
) -> Result<(Params, AlgoState)> {
    let g = g_vector(game, algo, p, state, hp)?;
    let next_state = match algo {
        AlgoId::OMD => AlgoState { prev: Some(p) },
        _ => *state,
    };
    Ok((p.sub_scaled(hp.alpha, g), next_state))
}

/// SGA's alignment sign `sign(⟨ξ, Hᵀξ⟩ ⟨Aᵀξ, Hᵀξ⟩)`, with `sign(0) = 0`.
pub fn sga_lambda(game: &GameId, p: Params) -> f64 {
    let xi = game.grad(p);
    let h = game.hessian(p);
    let (_, a) = decompose_sym_antisym(h);
    let ht_xi = h.transpose().mul_vec(xi);
    let prod = dot(xi, ht_xi) * dot(a.transpose().mul_vec(xi), ht_xi);
    if prod > 0.0 {
        1.0
    } else if prod < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// SOS interpolation weight in `[0, 1]`: `min(p₁, p₂)` with
///
/// * `p₁ = 1` if `⟨ξ₀, χ⟩ ≥ 0`, else `min(1, a‖ξ₀‖² / |⟨ξ₀, χ⟩|)`,
/// * `p₂ = ‖ξ‖²` if `‖ξ‖ < b`, else `1`,
///
/// where `ξ₀ = (I − αH_o)ξ` and `χ = −diag(H_oᵀ ∇L)`. Vanishes at
/// critical points through `p₂`.
pub fn sos_p(game: &GameId, p: Params, hp: &HyperParams) -> f64 {
    let xi = game.grad(p);
    let xi0 = lookahead(game, p, xi, hp.alpha);
    let chi = shaping_term(game, p);
    let chi = [-chi[0], -chi[1]];
    let inner = dot(xi0, chi);
    let p1 = if inner >= 0.0 {
        1.0
    } else {
        (hp.sos_a * dot(xi0, xi0) / inner.abs()).min(1.0)
    };
    let xi_norm = norm(xi);
    let p2 = if xi_norm < hp.sos_b {
        xi_norm * xi_norm
    } else {
        1.0
    };
    p1.min(p2)
}

/// Central-difference Jacobian of `G` at `p`. OMD is probed with its
/// memory pinned at `prev = p`.
pub fn update_jacobian_fd(
    game: &GameId,
    algo: AlgoId,
    p: Params,
    hp: &HyperParams,
    h: f64,
) -> Result<Matrix2> {
    let state = AlgoState { prev: Some(p) };
    let g = |q: Params| g_vector(game, algo, q, &state, hp);
    let gxp = g(Params::new(p.x + h, p.y))?;
    let gxm = g(Params::new(p.x - h, p.y))?;
    let gyp = g(Params::new(p.x, p.y + h))?;
    let gym = g(Params::new(p.x, p.y - h))?;
    let d = 2.0 * h;
    Ok(Matrix2::new(
        (gxp[0] - gxm[0]) / d,
        (gyp[0] - gym[0]) / d,
        (gxp[1] - gxm[1]) / d,
        (gyp[1] - gym[1]) / d,
    ))
}

/// `diag(H_oᵀ ∇L)`, where `∇L` has entry `(i, j) = ∂L^j/∂θ^i`.
pub fn shaping_term(game: &GameId, p: Params) -> Vec2 {
    let (_, ho) = decompose_blocks(game.hessian(p));
    (ho.transpose() * game.loss_gradients(p)).diag()
}

/// `(I − αH_o) ξ`
fn lookahead(game: &GameId, p: Params, xi: Vec2, alpha: f64) -> Vec2 {
    let (_, ho) = decompose_blocks(game.hessian(p));
    add(xi, ho.mul_vec(xi), -alpha)
}

/// `a + s b`
fn add(a: Vec2, b: Vec2, s: f64) -> Vec2 {
    [a[0] + s * b[0], a[1] + s * b[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: GameId = GameId::ZeroSumN;

    fn g(algo: AlgoId, p: Params, hp: &HyperParams) -> Vec2 {
        g_vector(&N, algo, p, &AlgoState::default(), hp).unwrap()
    }

    #[test]
    fn gd_direction_is_xi() {
        assert_eq!(
            g(AlgoId::GD, Params::new(1.0, 0.0), &HyperParams::default()),
            [0.0, -1.0]
        );
    }

    #[test]
    fn lola_on_zero_sum_doubles_lookahead() {
        let hp = HyperParams::with_alpha(0.07);
        for p in [
            Params::new(0.4, -1.3),
            Params::new(2.0, 0.5),
            Params::new(-0.1, 0.2),
        ] {
            let xi = N.grad(p);
            let (_, ho) = decompose_blocks(N.hessian(p));
            let expected = add(xi, ho.mul_vec(xi), -2.0 * hp.alpha);
            let got = g(AlgoId::LOLA, p, &hp);
            assert!((got[0] - expected[0]).abs() < 1e-12 && (got[1] - expected[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn omd_with_repeated_iterate_is_gd() {
        let hp = HyperParams::default();
        for game in [GameId::MarketM, GameId::ZeroSumN, GameId::ConvexQuad] {
            let p = Params::new(0.3, -0.8);
            let state = AlgoState { prev: Some(p) };
            assert_eq!(
                g_vector(&game, AlgoId::OMD, p, &state, &hp).unwrap(),
                game.grad(p)
            );
        }
    }

    #[test]
    fn step_examples() {
        let hp = HyperParams::default();
        let (p, _) = step(&N, AlgoId::GD, Params::ORIGIN, &AlgoState::default(), &hp).unwrap();
        assert_eq!(p, Params::ORIGIN);
        let (p, _) = step(
            &N,
            AlgoId::GD,
            Params::new(1.0, 0.0),
            &AlgoState::default(),
            &hp,
        )
        .unwrap();
        assert_eq!(p, Params::new(1.0, 0.01));
        let hp = HyperParams::with_alpha(0.5);
        let (p, _) = step(&N, AlgoId::CGD, Params::ORIGIN, &AlgoState::default(), &hp).unwrap();
        assert_eq!(p, Params::ORIGIN);
    }

    #[test]
    fn omd_state_tracks_previous_iterate() {
        let hp = HyperParams::default();
        let p0 = Params::new(0.5, 0.5);
        let (p1, s1) = step(&N, AlgoId::OMD, p0, &AlgoState::default(), &hp).unwrap();
        assert_eq!(s1.prev, Some(p0));
        let (_, s2) = step(&N, AlgoId::OMD, p1, &s1, &hp).unwrap();
        assert_eq!(s2.prev, Some(p1));
        let (_, s) = step(&N, AlgoId::GD, p0, &AlgoState::default(), &hp).unwrap();
        assert_eq!(s.prev, None);
    }

    #[test]
    fn cgd_solve_never_singular_on_markets() {
        // Markets have antisymmetric H_o, so det(I + αH_o) = 1 + α²h₁₂² ≥ 1.
        let hp = HyperParams::with_alpha(5.0);
        for game in [
            GameId::MarketM,
            GameId::market_sigma(0.05).unwrap(),
            N,
            GameId::ConvexQuad,
        ] {
            for p in [Params::new(0.01, 0.02), Params::new(1.5, -2.0)] {
                let (_, ho) = decompose_blocks(game.hessian(p));
                assert!((Matrix2::IDENTITY + ho.scale(hp.alpha)).det() >= 1.0);
                assert!(g_vector(&game, AlgoId::CGD, p, &AlgoState::default(), &hp).is_ok());
            }
        }
    }

    #[test]
    fn sga_lambda_examples() {
        assert_eq!(sga_lambda(&N, Params::ORIGIN), 0.0);
        assert_eq!(sga_lambda(&N, Params::new(1.0, 0.0)), -1.0);
    }

    #[test]
    fn sga_lambda_independent_rederivation() {
        // ξ(0,1) = (1, 0); H(0,1) = [[-1,1],[-1,2]].
        // Hᵀξ = (-1, 1), ⟨ξ,Hᵀξ⟩ = -1; Aᵀξ = (0, 1), ⟨Aᵀξ,Hᵀξ⟩ = 1.
        let xi = [1.0, 0.0];
        let ht_xi = [-xi[0] - xi[1], xi[0] + 2.0 * xi[1]];
        let at_xi = [0.0 * xi[0] - 1.0 * xi[1], 1.0 * xi[0] + 0.0 * xi[1]];
        let prod =
            (xi[0] * ht_xi[0] + xi[1] * ht_xi[1]) * (at_xi[0] * ht_xi[0] + at_xi[1] * ht_xi[1]);
        assert_eq!(prod, -1.0);
        assert_eq!(sga_lambda(&N, Params::new(0.0, 1.0)), -1.0);
    }

    #[test]
    fn sos_p_examples() {
        let hp = HyperParams::default();
        assert_eq!(sos_p(&N, Params::ORIGIN, &hp), 0.0);
        let v = sos_p(&N, Params::new(2.0, 2.0), &hp);
        assert!((0.0..=1.0).contains(&v));
        let p = Params::new(0.05, 0.0);
        let n = norm(N.grad(p));
        assert!(n < hp.sos_b);
        assert_eq!(sos_p(&N, p, &hp), n * n);
    }

    #[test]
    fn sos_equals_la_at_origin() {
        let hp = HyperParams::default();
        assert_eq!(
            g(AlgoId::SOS, Params::ORIGIN, &hp),
            g(AlgoId::LA, Params::ORIGIN, &hp)
        );
    }

    #[test]
    fn eg_is_two_call_composition() {
        let hp = HyperParams::with_alpha(0.2);
        let p = Params::new(1.1, -0.4);
        let xi = N.grad(p);
        let inner = Params::new(p.x - 0.2 * xi[0], p.y - 0.2 * xi[1]);
        assert_eq!(g(AlgoId::EG, p, &hp), N.grad(inner));
    }

    #[test]
    fn jacobian_examples() {
        let h = 1e-5;
        let j =
            update_jacobian_fd(&N, AlgoId::GD, Params::ORIGIN, &HyperParams::default(), h).unwrap();
        assert!(j.max_abs_diff(&Matrix2::new(-1.0, 1.0, -1.0, -1.0)) < 1e-6);
        let hp = HyperParams::with_alpha(0.1);
        let j = update_jacobian_fd(&N, AlgoId::AGD, Params::ORIGIN, &hp, h).unwrap();
        assert!(j.max_abs_diff(&Matrix2::new(-1.0, 1.0, -1.1, -0.9)) < 1e-6);
        let j = update_jacobian_fd(&N, AlgoId::EG, Params::ORIGIN, &hp, h).unwrap();
        assert!(j.max_abs_diff(&Matrix2::new(-1.0, 1.2, -1.2, -1.0)) < 1e-6);
    }

    #[test]
    fn parse_algorithms() {
        for a in AlgoId::ALL {
            assert_eq!(a.name().parse::<AlgoId>().unwrap(), a);
        }
        assert_eq!("LOLA".parse::<AlgoId>().unwrap(), AlgoId::LOLA);
        assert!("adam".parse::<AlgoId>().is_err());
    }

    #[test]
    fn hyperparams_validation() {
        assert!(HyperParams::default().validate().is_ok());
        assert!(HyperParams::with_alpha(0.0).validate().is_err());
        assert!(HyperParams {
            sos_a: 1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
