//! Entanglement witnesses and the decomposition of the attenuated PPT
//! witness into transmittance-independent coefficients.
//!
//! Under losses `(T1, T2)` the PPT witness factorizes as
//! `W'_ppt(T1, T2) = T1 T2 W_R(T1, T2)` with the bilinear reduced witness
//! `W_R = T1 T2 G22 + T2 G12 + T1 G21 + G11`. Negative values signal
//! entanglement throughout.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::channel::Transmittance;
use crate::cov::{j2, CovMatrix};
use crate::error::{Error, Result};

/// Relative width of the band around zero in which a witness is treated as
/// sitting on a boundary.
pub const BOUNDARY_BAND: f64 = 1e-10;
/// Excess noise below which a reduced state counts as vacuum-like.
pub const DEGENERATE_SIGMA: f64 = 1e-9;

/// Magnitude scale for witness comparisons: `max(1, max|V_ij|^2)`.
pub fn witness_scale(v: &CovMatrix) -> f64 {
    let m = v.max_abs();
    (m * m).max(1.0)
}

/// Absolute half-width of the boundary band for witnesses of `v`.
pub fn boundary_band(v: &CovMatrix) -> f64 {
    BOUNDARY_BAND * witness_scale(v)
}

/// Variances of the EPR-like combinations
/// `u = (|a| p1 - p2 / a) / sqrt 2` and `v = (|a| q1 + q2 / a) / sqrt 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuanParameters {
    pub a: f64,
    pub u_variance: f64,
    pub v_variance: f64,
}

impl DuanParameters {
    pub fn new(v: &CovMatrix, a: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::InvalidDuanWeight(a));
        }
        let a2 = a * a;
        let sign = a.signum();
        let m = v.matrix();
        let u_variance = 0.5 * (a2 * m[(1, 1)] + m[(3, 3)] / a2 - 2.0 * sign * m[(1, 3)]);
        let v_variance = 0.5 * (a2 * m[(0, 0)] + m[(2, 2)] / a2 + 2.0 * sign * m[(0, 2)]);
        Ok(Self { a, u_variance, v_variance })
    }

    pub fn witness(&self) -> f64 {
        let a2 = self.a * self.a;
        self.u_variance + self.v_variance - (a2 + 1.0 / a2)
    }
}

/// `W_D = Var(u) + Var(v) - (a^2 + a^-2)`. Negative is sufficient for entanglement.
pub fn duan_witness(v: &CovMatrix, a: f64) -> Result<f64> {
    Ok(DuanParameters::new(v, a)?.witness())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuanMinimum {
    /// `sigma1 sigma2 - (c_p - c_q)^2`.
    pub w_m: f64,
    /// Minimizing weight; absent when a reduced state is degenerate.
    pub a_opt: Option<f64>,
    pub w_d_at_opt: Option<f64>,
    pub degenerate: bool,
}

/// Minimized Duan witness.
///
/// `|a_opt|^2 = sqrt(sigma2 / sigma1)`; both signs are evaluated and the one
/// giving the smaller `W_D` is kept. Only the diagonal correlations `c_q`,
/// `c_p` enter, so for a non-diagonal `C` this is a sufficient test only.
pub fn minimized_duan(v: &CovMatrix) -> DuanMinimum {
    let b = v.blocks();
    let sigma1 = b.a1.trace() - 2.0;
    let sigma2 = b.a2.trace() - 2.0;
    let dc = v.c_p() - v.c_q();
    let w_m = sigma1 * sigma2 - dc * dc;
    if sigma1 <= DEGENERATE_SIGMA || sigma2 <= DEGENERATE_SIGMA {
        return DuanMinimum {
            w_m,
            a_opt: None,
            w_d_at_opt: None,
            degenerate: true,
        };
    }
    let magnitude = (sigma2 / sigma1).sqrt().sqrt();
    let best = [magnitude, -magnitude]
        .into_iter()
        .filter_map(|a| duan_witness(v, a).ok().map(|w| (a, w)))
        .min_by(|x, y| x.1.total_cmp(&y.1));
    DuanMinimum {
        w_m,
        a_opt: best.map(|(a, _)| a),
        w_d_at_opt: best.map(|(_, w)| w),
        degenerate: false,
    }
}

/// `W_ppt = 1 + det V + 2 det C - det A1 - det A2`.
///
/// Negative iff the state is entangled (for Gaussian states).
pub fn ppt_witness(v: &CovMatrix) -> f64 {
    let b = v.blocks();
    1.0 + v.det() + 2.0 * b.c.determinant() - b.a1.determinant() - b.a2.determinant()
}

/// Coefficients of the reduced witness plus the rotation invariants they are
/// built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSet {
    pub gamma11: f64,
    pub gamma12: f64,
    pub gamma21: f64,
    pub gamma22: f64,
    /// `tr(C^T J (A1 - I) J C)`, scales as `T1^2 T2`.
    pub lambda1: f64,
    /// `tr(C J (A2 - I) J C^T)`, scales as `T1 T2^2`.
    pub lambda2: f64,
    /// `tr(C^T C)`.
    pub lambda_c: f64,
    /// `tr(A1 J C J A2 J C^T J)`, so that `det V = det A1 det A2 + (det C)^2 - lambda4`.
    pub lambda4: f64,
    /// `det V - det(V - I)`.
    pub eta: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub impurity1: f64,
    pub impurity2: f64,
}

impl GammaSet {
    /// `W_R(T1, T2)`.
    pub fn reduced_witness(&self, t: Transmittance) -> f64 {
        self.reduced_at(t.t1(), t.t2())
    }

    /// Unchecked evaluation of the bilinear form at arbitrary `(t1, t2)`.
    pub fn reduced_at(&self, t1: f64, t2: f64) -> f64 {
        t1 * t2 * self.gamma22 + t2 * self.gamma12 + t1 * self.gamma21 + self.gamma11
    }

    pub fn sum(&self) -> f64 {
        self.gamma11 + self.gamma12 + self.gamma21 + self.gamma22
    }
}

pub fn gamma_coefficients(v: &CovMatrix) -> GammaSet {
    let b = v.blocks();
    let id = Matrix2::identity();
    let j = j2();
    let (a1, a2, c) = (b.a1, b.a2, b.c);

    let sigma1 = a1.trace() - 2.0;
    let sigma2 = a2.trace() - 2.0;
    let det_a1 = a1.determinant();
    let det_a2 = a2.determinant();
    let impurity1 = det_a1 - 1.0;
    let impurity2 = det_a2 - 1.0;
    let det_c = c.determinant();

    let lambda1 = (c.transpose() * j * (a1 - id) * j * c).trace();
    let lambda2 = (c * j * (a2 - id) * j * c.transpose()).trace();
    let lambda_c = (c.transpose() * c).trace();
    let lambda4 = (a1 * j * c * j * a2 * j * c.transpose() * j).trace();

    let eta = sigma1 * (impurity2 - sigma2) + sigma2 * (impurity1 - sigma1) + sigma1 * sigma2 + det_a1 + det_a2
        - lambda_c
        + lambda1
        + lambda2
        - 1.0;

    let shifted = v.matrix() - nalgebra::Matrix4::identity();
    GammaSet {
        gamma11: sigma1 * sigma2 - lambda_c + 2.0 * det_c,
        gamma12: sigma1 * (impurity2 - sigma2) + lambda2,
        gamma21: sigma2 * (impurity1 - sigma1) + lambda1,
        gamma22: shifted.determinant(),
        lambda1,
        lambda2,
        lambda_c,
        lambda4,
        eta,
        sigma1,
        sigma2,
        impurity1,
        impurity2,
    }
}

/// `W_R(T1, T2)` for the given coefficients.
pub fn reduced_witness(g: &GammaSet, t: Transmittance) -> f64 {
    g.reduced_witness(t)
}
