//! Parameterized state families, their closed-form witnesses, EPR-operator
//! variables and labeled region maps.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cov::{CovMatrix, LocalSymplectic, ModeSymplectic};
use crate::error::{Error, Result};
use crate::robustness::{classify, RobustnessClass};
use crate::witness::{gamma_coefficients, ppt_witness};

/// Largest squeezing parameter accepted by the squeezed-state families.
pub const MAX_FAMILY_SQUEEZE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `A1 = A2 = s I`, `C = diag(c, -c)`.
    FullySymmetric { s: f64, c: f64 },
    /// Fully symmetric with `s = nu cosh 2r`, `c = nu sinh 2r`.
    FullySymmetricFromSqueezing { r: f64, nu: f64 },
    /// Equal modes, `A = diag(dq, dp)`, `C = diag(cq, cp)`.
    SymmetricModes { dq: f64, dp: f64, cq: f64, cp: f64 },
    /// `A1 = s I`, `A2 = t I`, `C = diag(cq, cp)`.
    StandardFormI { s: f64, t: f64, cq: f64, cp: f64 },
    /// Two-mode squeezed vacuum.
    PureTwoModeSqueezed { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyWitnesses {
    pub w_ppt: f64,
    pub w_full: f64,
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::FullySymmetric { .. } => "fully-symmetric",
            FamilySpec::FullySymmetricFromSqueezing { .. } => "fully-symmetric-squeezing",
            FamilySpec::SymmetricModes { .. } => "symmetric-modes",
            FamilySpec::StandardFormI { .. } => "standard-form-i",
            FamilySpec::PureTwoModeSqueezed { .. } => "tmsv",
        }
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FamilySpec::FullySymmetric { s, c } => vec![("s", s), ("c", c)],
            FamilySpec::FullySymmetricFromSqueezing { r, nu } => vec![("r", r), ("nu", nu)],
            FamilySpec::SymmetricModes { dq, dp, cq, cp } => vec![("dq", dq), ("dp", dp), ("cq", cq), ("cp", cp)],
            FamilySpec::StandardFormI { s, t, cq, cp } => vec![("s", s), ("t", t), ("cq", cq), ("cp", cp)],
            FamilySpec::PureTwoModeSqueezed { r } => vec![("r", r)],
        }
    }

    /// Reduces the squeezing-parameterized variants to their `(s, c)` form.
    fn normalized(&self) -> Result<FamilySpec> {
        for (name, value) in self.params() {
            if !value.is_finite() {
                return Err(invalid(name, value, "must be finite"));
            }
        }
        let squeezed = |r: f64, nu: f64| -> Result<FamilySpec> {
            if r.abs() > MAX_FAMILY_SQUEEZE {
                return Err(invalid("r", r, &format!("|r| must not exceed {MAX_FAMILY_SQUEEZE}")));
            }
            if nu < 1.0 {
                return Err(invalid("nu", nu, "nu >= 1 required"));
            }
            Ok(FamilySpec::FullySymmetric {
                s: nu * (2.0 * r).cosh(),
                c: nu * (2.0 * r).sinh(),
            })
        };
        match *self {
            FamilySpec::FullySymmetricFromSqueezing { r, nu } => squeezed(r, nu),
            FamilySpec::PureTwoModeSqueezed { r } => squeezed(r, 1.0),
            other => Ok(other),
        }
    }

    fn check_bounds(&self) -> Result<()> {
        let tol = |x: f64| 1e-9 * x.abs().max(1.0);
        match *self {
            FamilySpec::FullySymmetric { s, c } => {
                if s <= 0.0 {
                    return Err(invalid("s", s, "s > 0 required"));
                }
                let d = s * s - c * c;
                if d < 1.0 - tol(s * s) {
                    return Err(invalid("c", c, &format!("s^2 - c^2 >= 1 required, got {d}")));
                }
            }
            FamilySpec::SymmetricModes { dq, dp, cq, cp } => {
                for (name, x) in [("dq", dq), ("dp", dp)] {
                    if x <= 0.0 {
                        return Err(invalid(name, x, "variance must be positive"));
                    }
                }
                if cq.abs() > dq {
                    return Err(invalid("cq", cq, &format!("|cq| <= dq = {dq} required")));
                }
                if cp.abs() > dp {
                    return Err(invalid("cp", cp, &format!("|cp| <= dp = {dp} required")));
                }
            }
            FamilySpec::StandardFormI { s, t, .. } => {
                for (name, x) in [("s", s), ("t", t)] {
                    if x < 1.0 - tol(x) {
                        return Err(invalid(name, x, "local variance >= 1 required"));
                    }
                }
            }
            FamilySpec::FullySymmetricFromSqueezing { .. } | FamilySpec::PureTwoModeSqueezed { .. } => {}
        }
        Ok(())
    }

    fn matrix(&self) -> Matrix4<f64> {
        let (dq1, dp1, dq2, dp2, cq, cp) = match *self {
            FamilySpec::FullySymmetric { s, c } => (s, s, s, s, c, -c),
            FamilySpec::SymmetricModes { dq, dp, cq, cp } => (dq, dp, dq, dp, cq, cp),
            FamilySpec::StandardFormI { s, t, cq, cp } => (s, s, t, t, cq, cp),
            FamilySpec::FullySymmetricFromSqueezing { .. } | FamilySpec::PureTwoModeSqueezed { .. } => {
                unreachable!("normalized before use")
            }
        };
        Matrix4::new(
            dq1, 0.0, cq, 0.0, //
            0.0, dp1, 0.0, cp, //
            cq, 0.0, dq2, 0.0, //
            0.0, cp, 0.0, dp2,
        )
    }
}

fn invalid(name: &'static str, value: f64, reason: &str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason: reason.to_string(),
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}:{}", self.name(), params.join(","))
    }
}

/// Parses `name:key=value,...`, for example
/// `symmetric-modes:dq=2.55,dp=1.80,cq=1.033,cp=-1.26`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Spec(format!("expected `family:key=value,...`, got `{text}`")))?;
        let keys: &[&str] = match name {
            "fully-symmetric" => &["s", "c"],
            "fully-symmetric-squeezing" => &["r", "nu"],
            "symmetric-modes" => &["dq", "dp", "cq", "cp"],
            "standard-form-i" => &["s", "t", "cq", "cp"],
            "tmsv" => &["r"],
            other => return Err(Error::Spec(format!("unknown family `{other}`"))),
        };
        let mut values: Vec<Option<f64>> = vec![None; keys.len()];
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("expected key=value, got `{item}`")))?;
            let key = key.trim();
            let slot = keys
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::Spec(format!("unknown parameter `{key}` for {name}")))?;
            if values[slot].is_some() {
                return Err(Error::Spec(format!("parameter `{key}` given twice")));
            }
            let x: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Spec(format!("parameter `{key}`: `{}` is not a number", value.trim())))?;
            values[slot] = Some(x);
        }
        let mut got = [0.0; 4];
        for (i, key) in keys.iter().enumerate() {
            got[i] = values[i].ok_or_else(|| Error::Spec(format!("missing parameter `{key}` for {name}")))?;
        }
        Ok(match name {
            "fully-symmetric" => FamilySpec::FullySymmetric { s: got[0], c: got[1] },
            "fully-symmetric-squeezing" => FamilySpec::FullySymmetricFromSqueezing { r: got[0], nu: got[1] },
            "symmetric-modes" => FamilySpec::SymmetricModes {
                dq: got[0],
                dp: got[1],
                cq: got[2],
                cp: got[3],
            },
            "standard-form-i" => FamilySpec::StandardFormI {
                s: got[0],
                t: got[1],
                cq: got[2],
                cp: got[3],
            },
            _ => FamilySpec::PureTwoModeSqueezed { r: got[0] },
        })
    }
}

/// Covariance matrix of the family member; rejects unphysical parameters.
pub fn build(spec: &FamilySpec) -> Result<CovMatrix> {
    let spec = spec.normalized()?;
    spec.check_bounds()?;
    let v = CovMatrix::new(spec.matrix())?;
    v.require_physical()?;
    Ok(v)
}

/// Closed-form `W_ppt` and `W_full` for the family.
pub fn family_witnesses(spec: &FamilySpec) -> Result<FamilyWitnesses> {
    build(spec)?;
    Ok(match spec.normalized()? {
        FamilySpec::FullySymmetric { s, c } => FamilyWitnesses {
            w_ppt: (s * s - c * c + 1.0).powi(2) - 4.0 * s * s,
            w_full: 4.0 * ((s - 1.0).powi(2) - c * c),
        },
        FamilySpec::SymmetricModes { dq, dp, cq, cp } => FamilyWitnesses {
            w_ppt: (dp * dp - cp * cp) * (dq * dq - cq * cq) - 2.0 * dp * dq + 2.0 * cp * cq + 1.0,
            w_full: (dp + dq - 2.0).powi(2) - (cq - cp).powi(2),
        },
        FamilySpec::StandardFormI { s, t, cq, cp } => FamilyWitnesses {
            w_ppt: (s * t - cq * cq) * (s * t - cp * cp) - s * s - t * t + 2.0 * cq * cp + 1.0,
            w_full: 4.0 * (s - 1.0) * (t - 1.0) - (cq - cp).powi(2),
        },
        FamilySpec::FullySymmetricFromSqueezing { .. } | FamilySpec::PureTwoModeSqueezed { .. } => {
            unreachable!("normalized")
        }
    })
}

/// Variances of `p± = (p1 ± p2)/√2`, `q± = (q1 ± q2)/√2` and the witnesses
/// built from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EprSummary {
    pub var_p_minus: f64,
    pub var_p_plus: f64,
    pub var_q_minus: f64,
    pub var_q_plus: f64,
    /// `1/sqrt(var_p_plus var_q_plus)`.
    pub mu_plus: f64,
    /// `1/sqrt(var_p_minus var_q_minus)`.
    pub mu_minus: f64,
    /// `var_p_minus + var_q_plus - 2`.
    pub w_sum: f64,
    /// `var_p_plus + var_q_minus - 2`.
    pub w_sum_bar: f64,
    /// `var_p_minus var_q_plus - 1`.
    pub w_prod: f64,
    /// `var_p_plus var_q_minus - 1`.
    pub w_prod_bar: f64,
}

pub fn epr_summary(v: &CovMatrix) -> EprSummary {
    let m = v.matrix();
    let half = |a: f64, b: f64, c: f64| 0.5 * (a + b + 2.0 * c);
    let var_p_plus = half(m[(1, 1)], m[(3, 3)], m[(1, 3)]);
    let var_p_minus = half(m[(1, 1)], m[(3, 3)], -m[(1, 3)]);
    let var_q_plus = half(m[(0, 0)], m[(2, 2)], m[(0, 2)]);
    let var_q_minus = half(m[(0, 0)], m[(2, 2)], -m[(0, 2)]);
    EprSummary {
        var_p_minus,
        var_p_plus,
        var_q_minus,
        var_q_plus,
        mu_plus: (var_p_plus * var_q_plus).sqrt().recip(),
        mu_minus: (var_p_minus * var_q_minus).sqrt().recip(),
        w_sum: var_p_minus + var_q_plus - 2.0,
        w_sum_bar: var_p_plus + var_q_minus - 2.0,
        w_prod: var_p_minus * var_q_plus - 1.0,
        w_prod_bar: var_p_plus * var_q_minus - 1.0,
    }
}

/// `W1 = W_sum W̄_prod + W_prod W̄_sum` for symmetric-mode states.
///
/// Equals twice the single-channel witness, so only its sign is meaningful
/// when compared against the generic one.
pub fn epr_partial_witness(v: &CovMatrix) -> Result<f64> {
    check_symmetric_modes(v)?;
    let e = epr_summary(v);
    Ok(e.w_sum * e.w_prod_bar + e.w_prod * e.w_sum_bar)
}

fn check_symmetric_modes(v: &CovMatrix) -> Result<()> {
    let m = v.matrix();
    let tol = 1e-9 * v.max_abs().max(1.0);
    let checks = [
        ("Δ²q1 ≠ Δ²q2", m[(0, 0)] - m[(2, 2)]),
        ("Δ²p1 ≠ Δ²p2", m[(1, 1)] - m[(3, 3)]),
        ("<q1 p1> ≠ 0", m[(0, 1)]),
        ("<q2 p2> ≠ 0", m[(2, 3)]),
        ("<q1 p2> ≠ 0", m[(0, 3)]),
        ("<p1 q2> ≠ 0", m[(1, 2)]),
    ];
    for (what, dev) in checks {
        if dev.abs() > tol {
            return Err(Error::NotSymmetricModes(format!("{what} (deviation {dev:e})")));
        }
    }
    Ok(())
}

/// Region labels of the state-space maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Fully robust.
    I,
    /// Partially robust.
    II,
    /// Fragile.
    III,
    /// Separable.
    IV,
    Unphysical,
}

impl Region {
    pub fn from_class(class: RobustnessClass) -> Region {
        match class {
            RobustnessClass::FullyRobust => Region::I,
            RobustnessClass::PartiallyRobustSymmetric | RobustnessClass::PartiallyRobustAsymmetric { .. } => {
                Region::II
            }
            RobustnessClass::Fragile => Region::III,
            RobustnessClass::Separable => Region::IV,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
            Region::Unphysical => "unphysical",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub x: f64,
    pub y: f64,
    pub region: Region,
    /// Some witness (or the physicality test) is inside its tolerance band.
    pub boundary: bool,
    pub w_ppt: f64,
    pub w_full: f64,
    pub w_ch1: f64,
    pub w_ch2: f64,
}

/// A `grid x grid` raster, row-major with `y` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub x_label: String,
    pub y_label: String,
    pub grid: usize,
    pub cells: Vec<RegionCell>,
}

/// Region of an arbitrary matrix; unphysical input is labeled, not rejected.
pub fn region_of(v: &CovMatrix) -> (Region, bool) {
    let diagnosis = v.validate_physicality();
    if !diagnosis.physical {
        return (Region::Unphysical, diagnosis.boundary);
    }
    match classify(v) {
        Ok(report) => (Region::from_class(report.class), report.is_boundary()),
        Err(_) => (Region::Unphysical, true),
    }
}

fn cell(x: f64, y: f64, v: &CovMatrix) -> RegionCell {
    let (region, boundary) = region_of(v);
    let g = gamma_coefficients(v);
    RegionCell {
        x,
        y,
        region,
        boundary,
        w_ppt: ppt_witness(v),
        w_full: g.gamma11,
        w_ch1: g.gamma11 + g.gamma12,
        w_ch2: g.gamma11 + g.gamma21,
    }
}

fn cell_center(k: usize, grid: usize, lo: f64, hi: f64) -> f64 {
    lo + (k as f64 + 0.5) * (hi - lo) / grid as f64
}

fn symmetric_modes_matrix(dq: f64, dp: f64, cq: f64, cp: f64) -> Result<CovMatrix> {
    CovMatrix::new(Matrix4::new(
        dq, 0.0, cq, 0.0, //
        0.0, dp, 0.0, cp, //
        cq, 0.0, dq, 0.0, //
        0.0, cp, 0.0, dp,
    ))
}

/// Labels the `(C̄p, C̄q) = (cp/dp, cq/dq)` square `[-1, 1]^2` at cell centers.
pub fn region_map_correlations(dq: f64, dp: f64, grid: usize) -> Result<RegionMap> {
    for (name, x) in [("dq", dq), ("dp", dp)] {
        if !(x >= 1.0 && x.is_finite()) {
            return Err(invalid(name, x, "variance >= 1 required"));
        }
    }
    if grid == 0 {
        return Err(invalid("grid", 0.0, "at least one cell required"));
    }
    let mut cells = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        let cq_bar = cell_center(j, grid, -1.0, 1.0);
        for i in 0..grid {
            let cp_bar = cell_center(i, grid, -1.0, 1.0);
            let v = symmetric_modes_matrix(dq, dp, cq_bar * dq, cp_bar * dp)?;
            cells.push(cell(cp_bar, cq_bar, &v));
        }
    }
    Ok(RegionMap {
        x_label: "cp_bar".into(),
        y_label: "cq_bar".into(),
        grid,
        cells,
    })
}

/// Symmetric-mode state with the given EPR variances and partial purities.
pub fn symmetric_modes_from_epr(var_q_plus: f64, var_p_minus: f64, mu_minus: f64, mu_plus: f64) -> Result<CovMatrix> {
    let var_q_minus = 1.0 / (mu_minus * mu_minus * var_p_minus);
    let var_p_plus = 1.0 / (mu_plus * mu_plus * var_q_plus);
    symmetric_modes_matrix(
        0.5 * (var_q_plus + var_q_minus),
        0.5 * (var_p_plus + var_p_minus),
        0.5 * (var_q_plus - var_q_minus),
        0.5 * (var_p_plus - var_p_minus),
    )
}

/// Labels `(var_q_plus, var_p_minus) ∈ (0, extent]^2` at fixed partial purities.
pub fn region_map_epr(mu_minus: f64, mu_plus: f64, grid: usize, extent: f64) -> Result<RegionMap> {
    for (name, mu) in [("mu_minus", mu_minus), ("mu_plus", mu_plus)] {
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(invalid(name, mu, "0 < mu <= 1 required"));
        }
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(invalid("extent", extent, "must be positive"));
    }
    if grid == 0 {
        return Err(invalid("grid", 0.0, "at least one cell required"));
    }
    let mut cells = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        let var_p_minus = cell_center(j, grid, 0.0, extent);
        for i in 0..grid {
            let var_q_plus = cell_center(i, grid, 0.0, extent);
            let v = symmetric_modes_from_epr(var_q_plus, var_p_minus, mu_minus, mu_plus)?;
            cells.push(cell(var_q_plus, var_p_minus, &v));
        }
    }
    Ok(RegionMap {
        x_label: "var_q_plus".into(),
        y_label: "var_p_minus".into(),
        grid,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomStateParams {
    /// Range of the two symplectic eigenvalues, `1 <= nu_min <= nu_max`.
    pub nu_min: f64,
    pub nu_max: f64,
    /// Local squeezing parameters are drawn from `[-max_squeeze, max_squeeze]`.
    pub max_squeeze: f64,
}

impl Default for RandomStateParams {
    fn default() -> Self {
        Self {
            nu_min: 1.0,
            nu_max: 3.0,
            max_squeeze: 1.0,
        }
    }
}

impl RandomStateParams {
    fn check(&self) -> Result<()> {
        if !(self.nu_min >= 1.0 && self.nu_min.is_finite()) {
            return Err(invalid("nu_min", self.nu_min, "nu_min >= 1 required"));
        }
        if !(self.nu_max >= self.nu_min && self.nu_max.is_finite()) {
            return Err(invalid("nu_max", self.nu_max, "nu_max >= nu_min required"));
        }
        if !(self.max_squeeze >= 0.0 && self.max_squeeze <= LocalSymplectic::MAX_SQUEEZE) {
            return Err(invalid(
                "max_squeeze",
                self.max_squeeze,
                &format!("must lie in [0, {}]", LocalSymplectic::MAX_SQUEEZE),
            ));
        }
        Ok(())
    }
}

/// `S diag(nu1, nu1, nu2, nu2) S^T` with `S = L2 B L1` built from random
/// local rotation/squeeze/rotation maps `L` and a beam splitter `B`.
pub fn random_physical_state(seed: u64, params: &RandomStateParams) -> Result<CovMatrix> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_state(&mut rng, params))
}

/// Same as [`random_physical_state`], drawing from a caller-owned generator.
pub fn random_physical_state_from<R: Rng>(rng: &mut R, params: &RandomStateParams) -> Result<CovMatrix> {
    params.check()?;
    Ok(sample_state(rng, params))
}

fn sample_state<R: Rng>(rng: &mut R, params: &RandomStateParams) -> CovMatrix {
    use std::f64::consts::{FRAC_PI_2, PI};
    let nu1 = draw(rng, params.nu_min, params.nu_max);
    let nu2 = draw(rng, params.nu_min, params.nu_max);
    let local = |rng: &mut R| {
        let mut mode = || ModeSymplectic {
            theta: rng.random_range(-PI..PI),
            r: draw(rng, -params.max_squeeze, params.max_squeeze),
            phi: rng.random_range(-PI..PI),
        };
        let mode1 = mode();
        let mode2 = mode();
        LocalSymplectic { mode1, mode2 }.matrix()
    };
    let l1 = local(rng);
    let l2 = local(rng);
    let s = l2 * beam_splitter(rng.random_range(0.0..FRAC_PI_2)) * l1;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    CovMatrix::symmetrized(s * d * s.transpose())
}

fn draw<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

/// Beam splitter with mixing angle `angle` (transmissivity `cos^2 angle`).
pub fn beam_splitter(angle: f64) -> Matrix4<f64> {
    let (s, c) = angle.sin_cos();
    let mut m = Matrix4::zeros();
    let id = Matrix2::identity();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(id * c));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(id * s));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(id * -s));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(id * c));
    m
}
