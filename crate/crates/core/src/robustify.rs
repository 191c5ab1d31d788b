//! Search for local symplectic maps that make an entangled state fully robust.
//!
//! Local squeezing and rotations leave the entanglement (the partially
//! transposed symplectic spectrum) unchanged but move the robustness
//! witnesses. Any entangled state can be brought to a form in which
//! robustness follows from entanglement, so a map driving
//! `max(W_full, w_ch1, w_ch2)` below zero always exists; no closed-form
//! construction is used, only a derivative-free search.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cov::{apply_local_symplectic, CovMatrix, LocalSymplectic};
use crate::error::{Error, Result};
use crate::simplex::{minimize, SimplexOptions};
use crate::witness::{boundary_band, gamma_coefficients, ppt_witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustifyOptions {
    /// Total objective evaluations across all restarts.
    pub max_evaluations: usize,
    /// Additional randomly seeded starts after the one at the identity.
    pub restarts: usize,
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for RobustifyOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 10_000,
            restarts: 8,
            initial_step: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Robustified {
    pub symplectic: LocalSymplectic,
    pub state: CovMatrix,
    /// `max(W_full, w_ch1, w_ch2)` of the output state; negative.
    pub objective: f64,
    pub evaluations: usize,
    /// 0 when the search from the identity succeeded.
    pub restart: usize,
}

/// `max(W_full, w_ch1, w_ch2)`; negative means fully robust for an entangled state.
pub fn robustness_objective(v: &CovMatrix) -> f64 {
    let g = gamma_coefficients(v);
    let w_full = g.gamma11;
    let w_ch1 = g.gamma11 + g.gamma12;
    let w_ch2 = g.gamma11 + g.gamma21;
    w_full.max(w_ch1).max(w_ch2)
}

/// Returns a local symplectic `S` with `robustness_objective(S V S^T) < 0`,
/// or `None` if the evaluation budget runs out first.
pub fn robustify(v: &CovMatrix, options: &RobustifyOptions) -> Result<Option<Robustified>> {
    v.require_physical()?;
    let w_ppt = ppt_witness(v);
    if w_ppt >= -boundary_band(v) {
        return Err(Error::Separable { w_ppt });
    }

    let objective = |p: &[f64; 6]| -> f64 {
        let s = LocalSymplectic::from_params(p);
        if s.mode1.r.abs() > LocalSymplectic::MAX_SQUEEZE || s.mode2.r.abs() > LocalSymplectic::MAX_SQUEEZE {
            return f64::INFINITY;
        }
        robustness_objective(&apply_local_symplectic(v, &s))
    };

    let f0 = robustness_objective(v);
    if f0 < 0.0 {
        return Ok(Some(Robustified {
            symplectic: LocalSymplectic::identity(),
            state: *v,
            objective: f0,
            evaluations: 1,
            restart: 0,
        }));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut used = 1usize;
    for restart in 0..=options.restarts {
        // a simplex iteration can overrun its budget by 7 evaluations
        let budget = options.max_evaluations.saturating_sub(used + 7);
        if budget == 0 {
            break;
        }
        let start = if restart == 0 {
            [0.0; 6]
        } else {
            [
                rng.random_range(-PI..PI),
                rng.random_range(-1.0..1.0),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-1.0..1.0),
                rng.random_range(-PI..PI),
            ]
        };
        let simplex = SimplexOptions {
            initial_step: options.initial_step,
            max_evaluations: budget,
            f_tolerance: 1e-14,
        };
        let result = minimize(objective, start, &simplex, |y| y < 0.0);
        used += result.evaluations;
        if result.hit_target {
            let symplectic = LocalSymplectic::from_params(&result.x);
            return Ok(Some(Robustified {
                symplectic,
                state: apply_local_symplectic(v, &symplectic),
                objective: result.f,
                evaluations: used,
                restart,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robustness::{classify, RobustnessClass};
    use approx::assert_relative_eq;

    fn reference_state(cq: f64) -> CovMatrix {
        CovMatrix::from_rows([
            [2.55, 0.0, cq, 0.0],
            [0.0, 1.80, 0.0, -1.26],
            [cq, 0.0, 2.55, 0.0],
            [0.0, -1.26, 0.0, 1.80],
        ])
        .unwrap()
    }

    #[test]
    fn fully_robust_input_returns_identity() {
        let r = robustify(&reference_state(1.275), &RobustifyOptions::default()).unwrap().unwrap();
        assert_eq!(r.symplectic, LocalSymplectic::identity());
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn partially_robust_and_fragile_become_fully_robust() {
        for cq in [1.033, 0.893] {
            let v = reference_state(cq);
            let r = robustify(&v, &RobustifyOptions::default()).unwrap().expect("search succeeds");
            assert!(r.objective < 0.0);
            assert!(r.evaluations <= 10_000);
            assert_eq!(classify(&r.state).unwrap().class, RobustnessClass::FullyRobust);
            let before = v.symplectic_spectrum(None).unwrap();
            let after = r.state.symplectic_spectrum(None).unwrap();
            assert_relative_eq!(before.nu_minus, after.nu_minus, max_relative = 1e-9);
            assert_relative_eq!(before.nu_plus, after.nu_plus, max_relative = 1e-9);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let opts = RobustifyOptions { seed: 7, ..Default::default() };
        let a = robustify(&reference_state(0.893), &opts).unwrap();
        let b = robustify(&reference_state(0.893), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn separable_input_is_a_domain_error() {
        assert!(matches!(robustify(&reference_state(0.3825), &RobustifyOptions::default()), Err(Error::Separable { .. })));
    }

    #[test]
    fn tiny_budget_gives_up() {
        let opts = RobustifyOptions { max_evaluations: 5, ..Default::default() };
        assert_eq!(robustify(&reference_state(0.893), &opts).unwrap(), None);
    }
}
