//! Shared fixtures and independent reference computations for the
//! integration tests. The oracles here deliberately avoid the library's own
//! formulas: spectra come from the characteristic quartic, physicality from a
//! real embedding of `V + iΩ`, Duan variances from explicit quadratic forms,
//! and robustness classes from brute-force sign scans.

#![allow(dead_code)]

use cvrobust::channel::{attenuate, Transmittance};
use cvrobust::cov::{omega, CovMatrix};
use cvrobust::families::{random_physical_state, RandomStateParams};
use cvrobust::witness::ppt_witness;
use cvrobust::{Mode, RobustnessClass};
use nalgebra::{SMatrix, SymmetricEigen};

/// Two-mode matrix with equal modes, `(dq, dp) = (2.55, 1.80)` and `c_p = -1.26`.
pub fn reference_state(cq: f64) -> CovMatrix {
    CovMatrix::from_rows([
        [2.55, 0.0, cq, 0.0],
        [0.0, 1.80, 0.0, -1.26],
        [cq, 0.0, 2.55, 0.0],
        [0.0, -1.26, 0.0, 1.80],
    ])
    .unwrap()
}

pub fn cm_a() -> CovMatrix {
    reference_state(1.275)
}
pub fn cm_b() -> CovMatrix {
    reference_state(0.893)
}
pub fn cm_c() -> CovMatrix {
    reference_state(0.3825)
}
pub fn cm_d() -> CovMatrix {
    reference_state(1.033)
}

/// CM-D after `T2 = 0.40`, rounded to three digits.
pub fn attenuated_reference_rounded() -> [[f64; 4]; 4] {
    [
        [2.55, 0.0, 0.653, 0.0],
        [0.0, 1.80, 0.0, -0.797],
        [0.653, 0.0, 1.62, 0.0],
        [0.0, -0.797, 0.0, 1.32],
    ]
}

/// Pure, strongly squeezed state.
pub fn squeezed_reference() -> CovMatrix {
    CovMatrix::from_rows([
        [52.5, 0.0, -47.5, 0.0],
        [0.0, 0.105, 0.0, 0.095],
        [-47.5, 0.0, 52.5, 0.0],
        [0.0, 0.095, 0.0, 0.105],
    ])
    .unwrap()
}

pub fn ensemble(seed0: u64, n: usize) -> Vec<CovMatrix> {
    let p = RandomStateParams::default();
    (0..n as u64).map(|k| random_physical_state(seed0 + k, &p).unwrap()).collect()
}

/// First `n` entangled states from consecutive seeds.
pub fn entangled_ensemble(seed0: u64, n: usize) -> Vec<CovMatrix> {
    let p = RandomStateParams::default();
    (seed0..)
        .map(|s| random_physical_state(s, &p).unwrap())
        .filter(|v| pt_nu_minus_quartic(v) < 1.0 - 1e-6)
        .take(n)
        .collect()
}

fn dets(v: &CovMatrix) -> (f64, f64, f64, f64) {
    let m = v.matrix();
    let d2 = |r: usize, c: usize| m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)];
    (d2(0, 0), d2(2, 2), d2(0, 2), m.determinant())
}

/// Symplectic eigenvalues from the roots of `nu^4 - Delta nu^2 + det V`.
pub fn spectrum_quartic(v: &CovMatrix) -> (f64, f64) {
    let (a1, a2, c, d) = dets(v);
    quartic_roots(a1 + a2 + 2.0 * c, d)
}

/// Same for the partial transpose, where `det C` changes sign.
pub fn pt_spectrum_quartic(v: &CovMatrix) -> (f64, f64) {
    let (a1, a2, c, d) = dets(v);
    quartic_roots(a1 + a2 - 2.0 * c, d)
}

pub fn pt_nu_minus_quartic(v: &CovMatrix) -> f64 {
    pt_spectrum_quartic(v).0
}

fn quartic_roots(delta: f64, det: f64) -> (f64, f64) {
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let minus = (0.5 * (delta - disc)).max(0.0).sqrt();
    let plus = (0.5 * (delta + disc)).sqrt();
    (minus, plus)
}

/// Smallest eigenvalue of `V + iΩ` via the real symmetric 8x8 embedding
/// `[[V, -Ω], [Ω, V]]`.
pub fn min_eig_v_plus_i_omega(v: &CovMatrix) -> f64 {
    let om = omega();
    let m = v.matrix();
    let big = SMatrix::<f64, 8, 8>::from_fn(|r, c| {
        let (br, bc) = (r / 4, c / 4);
        let (i, j) = (r % 4, c % 4);
        match (br, bc) {
            (0, 0) | (1, 1) => m[(i, j)],
            (0, 1) => -om[(i, j)],
            _ => om[(i, j)],
        }
    });
    SymmetricEigen::new(big).eigenvalues.min()
}

/// `W_D(a)` from explicit weight vectors over `(q1, p1, q2, p2)`.
pub fn duan_quadratic(v: &CovMatrix, a: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let u = nalgebra::Vector4::new(0.0, a.abs() * s, 0.0, -s / a);
    let w = nalgebra::Vector4::new(a.abs() * s, 0.0, s / a, 0.0);
    let m = v.matrix();
    (u.transpose() * m * u)[0] + (w.transpose() * m * w)[0] - (a * a + 1.0 / (a * a))
}

/// Transmittance axis used by the brute-force scans. `W'_ppt` vanishes
/// identically on `T = 0`, so the lowest sample is just above it.
pub fn scan_axis() -> Vec<f64> {
    let mut axis = vec![1e-5];
    axis.extend((1..=100).map(|k| k as f64 / 100.0));
    axis
}

pub fn attenuated_ppt(v: &CovMatrix, t1: f64, t2: f64) -> f64 {
    ppt_witness(&attenuate(v, Transmittance::new(t1, t2).unwrap()))
}

/// Robustness class from sign scans of the attenuated PPT witness alone.
pub fn brute_force_class(v: &CovMatrix) -> RobustnessClass {
    let axis = scan_axis();
    if ppt_witness(v) >= 0.0 {
        return RobustnessClass::Separable;
    }
    let ch1 = axis.iter().all(|&t| attenuated_ppt(v, t, 1.0) < 0.0);
    let ch2 = axis.iter().all(|&t| attenuated_ppt(v, 1.0, t) < 0.0);
    let full = ch1 && ch2 && axis.iter().all(|&t1| axis.iter().all(|&t2| attenuated_ppt(v, t1, t2) < 0.0));
    match (full, ch1, ch2) {
        (true, _, _) => RobustnessClass::FullyRobust,
        (false, true, true) => RobustnessClass::PartiallyRobustSymmetric,
        (false, true, false) => RobustnessClass::PartiallyRobustAsymmetric { robust_mode: Mode::One },
        (false, false, true) => RobustnessClass::PartiallyRobustAsymmetric { robust_mode: Mode::Two },
        (false, false, false) => RobustnessClass::Fragile,
    }
}

/// Relative agreement with an absolute floor of one.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
