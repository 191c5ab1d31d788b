//! Robustness of entanglement against partial losses.
//!
//! `W_R` is affine in each transmittance, so its sign pattern on the unit
//! square is fixed by the four corners:
//!
//! | corner   | value                | meaning                          |
//! |----------|----------------------|----------------------------------|
//! | `(1, 1)` | `W_ppt`              | entangled before any loss        |
//! | `(0, 1)` | `w_ch1 = G11 + G12`  | survives any loss on mode 1 only |
//! | `(1, 0)` | `w_ch2 = G11 + G21`  | survives any loss on mode 2 only |
//! | `(0, 0)` | `W_full = G11`       | survives any combination         |
//!
//! Some derivations write the mode-1 witness as `W_full + G21`; expanding
//! `W_R(T1, 1)` as `T1 -> 0` gives `G11 + G12`, which is what is used here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::channel::Transmittance;
use crate::cov::{CovMatrix, Mode};
use crate::error::{Error, Result};
use crate::witness::{boundary_band, gamma_coefficients, ppt_witness, witness_scale, GammaSet};

/// Note attached to reports about the channel-witness index convention.
pub const CHANNEL_INDEX_NOTE: &str = "w_ch1 is the witness for loss on mode 1 only and equals \
G11 + G12 (the T1 -> 0 intercept of W_R(T1, 1)); the labelling W1 = W_full + G21 found in some \
derivations has the channel indices swapped";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "label")]
pub enum RobustnessClass {
    Separable,
    FullyRobust,
    PartiallyRobustSymmetric,
    PartiallyRobustAsymmetric { robust_mode: Mode },
    Fragile,
}

impl RobustnessClass {
    /// Position in the order
    /// `FullyRobust > PartiallyRobustSymmetric > PartiallyRobustAsymmetric > Fragile > Separable`.
    pub fn rank(&self) -> u8 {
        match self {
            RobustnessClass::Separable => 0,
            RobustnessClass::Fragile => 1,
            RobustnessClass::PartiallyRobustAsymmetric { .. } => 2,
            RobustnessClass::PartiallyRobustSymmetric => 3,
            RobustnessClass::FullyRobust => 4,
        }
    }

    pub fn is_entangled(&self) -> bool {
        !matches!(self, RobustnessClass::Separable)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RobustnessClass::Separable => "Separable",
            RobustnessClass::FullyRobust => "FullyRobust",
            RobustnessClass::PartiallyRobustSymmetric => "PartiallyRobustSymmetric",
            RobustnessClass::PartiallyRobustAsymmetric { .. } => "PartiallyRobustAsymmetric",
            RobustnessClass::Fragile => "Fragile",
        }
    }
}

impl std::fmt::Display for RobustnessClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RobustnessClass::PartiallyRobustAsymmetric { robust_mode } => {
                write!(f, "PartiallyRobustAsymmetric(robust_mode={robust_mode})")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Witnesses that fell inside the tolerance band around zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryFlag {
    Physicality,
    Separability,
    FullRobustness,
    Channel1,
    Channel2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub w_ppt: f64,
    pub w_full: f64,
    pub w_ch1: f64,
    pub w_ch2: f64,
    pub t1_critical: Option<f64>,
    pub t2_critical: Option<f64>,
    pub class: RobustnessClass,
    pub boundary_flags: BTreeSet<BoundaryFlag>,
}

impl RobustnessReport {
    pub fn channel_witness(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.w_ch1,
            Mode::Two => self.w_ch2,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !self.boundary_flags.is_empty()
    }
}

/// `W_full = G11 = sigma1 sigma2 - tr(C^T C) + 2 det C`.
pub fn full_robustness_witness(v: &CovMatrix) -> f64 {
    gamma_coefficients(v).gamma11
}

/// `lim_{T -> 0+} W_R` along the edge where only `mode` is attenuated.
pub fn channel_robustness_witness(v: &CovMatrix, mode: Mode) -> f64 {
    channel_witness_from_gamma(&gamma_coefficients(v), mode)
}

fn channel_witness_from_gamma(g: &GammaSet, mode: Mode) -> f64 {
    match mode {
        Mode::One => g.gamma11 + g.gamma12,
        Mode::Two => g.gamma11 + g.gamma21,
    }
}

/// Transmittance of `mode` (other channel lossless) at which entanglement
/// vanishes, or `None` when the state is robust against that loss.
pub fn critical_transmittance(v: &CovMatrix, mode: Mode) -> Result<Option<f64>> {
    let band = boundary_band(v);
    let w_ppt = ppt_witness(v);
    if w_ppt >= -band {
        return Err(Error::Separable { w_ppt });
    }
    let g = gamma_coefficients(v);
    Ok(critical_from(channel_witness_from_gamma(&g, mode), g.sum(), band))
}

fn critical_from(w_ch: f64, w_corner: f64, band: f64) -> Option<f64> {
    (w_ch > band).then(|| w_ch / (w_ch - w_corner))
}

pub fn classify(v: &CovMatrix) -> Result<RobustnessReport> {
    let diagnosis = v.validate_physicality();
    v.require_physical()?;

    let band = boundary_band(v);
    let g = gamma_coefficients(v);
    let w_ppt = ppt_witness(v);
    let w_full = g.gamma11;
    let w_ch1 = channel_witness_from_gamma(&g, Mode::One);
    let w_ch2 = channel_witness_from_gamma(&g, Mode::Two);

    let mut flags = BTreeSet::new();
    if diagnosis.boundary {
        flags.insert(BoundaryFlag::Physicality);
    }
    for (w, flag) in [
        (w_ppt, BoundaryFlag::Separability),
        (w_full, BoundaryFlag::FullRobustness),
        (w_ch1, BoundaryFlag::Channel1),
        (w_ch2, BoundaryFlag::Channel2),
    ] {
        if w.abs() <= band {
            flags.insert(flag);
        }
    }

    // Inside the band: separability wins for W_ppt, robustness wins otherwise.
    let entangled = w_ppt < -band;
    let robust = |w: f64| w <= band;

    let class = if !entangled {
        RobustnessClass::Separable
    } else {
        match (robust(w_full), robust(w_ch1), robust(w_ch2)) {
            (true, true, true) => RobustnessClass::FullyRobust,
            (_, true, true) => RobustnessClass::PartiallyRobustSymmetric,
            (_, true, false) => RobustnessClass::PartiallyRobustAsymmetric { robust_mode: Mode::One },
            (_, false, true) => RobustnessClass::PartiallyRobustAsymmetric { robust_mode: Mode::Two },
            (_, false, false) => RobustnessClass::Fragile,
        }
    };

    let (t1_critical, t2_critical) = if entangled {
        let corner = g.sum();
        (critical_from(w_ch1, corner, band), critical_from(w_ch2, corner, band))
    } else {
        (None, None)
    };

    Ok(RobustnessReport {
        w_ppt,
        w_full,
        w_ch1,
        w_ch2,
        t1_critical,
        t2_critical,
        class,
        boundary_flags: flags,
    })
}

const CONTOUR_RESIDUAL: f64 = 1e-9;
const POLE_TOL: f64 = 1e-12;

/// Points of the disentanglement curve `W_R(t1, t2) = 0` inside `(0, 1]^2`.
///
/// Follows the branch `t2 = -(G21 t1 + G11) / (G22 t1 + G12)`. Samples are
/// spread over the `t1` interval(s) where that branch lies in the square, both
/// ends included, so crossings of the single-loss edges appear exactly. At
/// most `samples` points are returned, ordered by `t1`.
///
/// `W_R` is bilinear, so its maximum over the square sits at a corner. When
/// the three corners other than `(1, 1)` are within the boundary band the
/// state is treated as robust and the curve is empty, matching [`classify`].
pub fn esd_contour(v: &CovMatrix, samples: usize) -> Vec<(f64, f64)> {
    let g = gamma_coefficients(v);
    let band = boundary_band(v);
    let corners = [g.gamma11, g.gamma11 + g.gamma12, g.gamma11 + g.gamma21];
    if corners.iter().all(|&w| w <= band) {
        return Vec::new();
    }
    contour_from_gamma(&g, witness_scale(v), samples)
}

fn contour_from_gamma(g: &GammaSet, scale: f64, samples: usize) -> Vec<(f64, f64)> {
    if samples == 0 {
        return Vec::new();
    }
    let pole_tol = POLE_TOL * scale;
    let residual_tol = CONTOUR_RESIDUAL * scale;

    // W_R independent of t2: the zero set is a vertical line.
    if g.gamma22.abs() <= pole_tol && g.gamma12.abs() <= pole_tol {
        if g.gamma21.abs() <= pole_tol {
            return Vec::new();
        }
        let t1 = -g.gamma11 / g.gamma21;
        if !(t1 > 0.0 && t1 <= 1.0) {
            return Vec::new();
        }
        return (0..samples)
            .map(|k| (t1, (k + 1) as f64 / samples as f64))
            .collect();
    }

    let branch = |t1: f64| -> Option<f64> {
        let den = g.gamma22 * t1 + g.gamma12;
        if den.abs() < pole_tol {
            bisect_vertical(g, t1)
        } else {
            Some(-(g.gamma21 * t1 + g.gamma11) / den)
        }
    };

    let mut cuts = vec![0.0, 1.0];
    let mut push_cut = |num: f64, den: f64| {
        if den != 0.0 {
            let x = num / den;
            if x > 0.0 && x < 1.0 {
                cuts.push(x);
            }
        }
    };
    push_cut(-g.gamma12, g.gamma22); // pole
    push_cut(-(g.gamma11 + g.gamma12), g.gamma21 + g.gamma22); // t2 = 1
    push_cut(-g.gamma11, g.gamma21); // t2 = 0
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let intervals: Vec<(f64, f64)> = cuts
        .windows(2)
        .map(|w| (w[0], w[1]))
        .filter(|&(a, b)| {
            if b - a <= 0.0 {
                return false;
            }
            let mid = 0.5 * (a + b);
            let den = g.gamma22 * mid + g.gamma12;
            if den == 0.0 {
                return false;
            }
            let t2 = -(g.gamma21 * mid + g.gamma11) / den;
            (0.0..=1.0).contains(&t2)
        })
        .collect();
    if intervals.is_empty() {
        return Vec::new();
    }

    let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
    let mut remaining = samples;
    let mut points = Vec::with_capacity(samples);
    for (i, &(a, b)) in intervals.iter().enumerate() {
        let n = if i + 1 == intervals.len() {
            remaining
        } else {
            (((b - a) / total * samples as f64).round() as usize).clamp(1, remaining)
        };
        remaining -= n;
        for k in 0..n {
            let t1 = if n == 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * k as f64 / (n - 1) as f64
            };
            let Some(t2) = branch(t1) else { continue };
            // endpoints may overshoot the edge by an ulp
            let t2 = if (t2 - 1.0).abs() <= 1e-12 { 1.0 } else { t2 };
            if t1 > 0.0 && t1 <= 1.0 && t2 > 0.0 && t2 <= 1.0 && g.reduced_at(t1, t2).abs() <= residual_tol {
                points.push((t1, t2));
            }
        }
        if remaining == 0 {
            break;
        }
    }
    points
}

/// Zero of `W_R(t1, .)` on `[0, 1]` by bisection, if it changes sign.
fn bisect_vertical(g: &GammaSet, t1: f64) -> Option<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let (f_lo, f_hi) = (g.reduced_at(t1, lo), g.reduced_at(t1, hi));
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = g.reduced_at(t1, mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// `W_R` on the transmittance pair, for callers holding only a state.
pub fn reduced_witness_at(v: &CovMatrix, t: Transmittance) -> f64 {
    gamma_coefficients(v).reduced_witness(t)
}
