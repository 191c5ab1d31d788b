//! Two-mode covariance matrices in quadrature ordering `(q1, p1, q2, p2)`.
//!
//! Units are normalized to the standard quantum level: the vacuum covariance
//! is the identity and physical states have symplectic eigenvalues `>= 1`.

use std::fmt;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative asymmetry tolerated on input before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Absolute tolerance on `nu_minus >= 1` and on `V >= 0`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
/// Largest entry magnitude accepted. Fourth powers must stay finite.
pub const MAX_ENTRY: f64 = 1e64;

const EIGEN_MAX_ITER: usize = 10_000;

/// One of the two field modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::One, Mode::Two];

    /// 1-based index.
    pub fn index(self) -> usize {
        match self {
            Mode::One => 1,
            Mode::Two => 2,
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }

    /// Row/column offset of this mode's `(q, p)` pair.
    pub(crate) fn offset(self) -> usize {
        2 * (self.index() - 1)
    }
}

impl TryFrom<i64> for Mode {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        match value {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            other => Err(Error::InvalidMode(other)),
        }
    }
}

impl From<Mode> for i64 {
    fn from(mode: Mode) -> i64 {
        mode.index() as i64
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Symplectic form for a single mode.
pub fn j2() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Two-mode symplectic form `diag(J, J)`.
pub fn omega() -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&j2());
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&j2());
    m
}

/// A symmetric 4x4 covariance matrix.
///
/// Construction checks symmetry and finiteness only; use
/// [`CovMatrix::validate_physicality`] or [`CovMatrix::require_physical`]
/// for the uncertainty principle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMatrix(Matrix4<f64>);

impl CovMatrix {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let mut scale = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let x = m[(r, c)];
                if !x.is_finite() || x.abs() > MAX_ENTRY {
                    return Err(Error::EntryOutOfRange {
                        row: r,
                        col: c,
                        max: MAX_ENTRY,
                    });
                }
                scale = scale.max(x.abs());
            }
        }
        let deviation = (m - m.transpose()).amax();
        let tolerance = SYMMETRY_TOL * scale;
        if deviation > tolerance {
            return Err(Error::Asymmetric {
                deviation,
                tolerance,
            });
        }
        Ok(Self::symmetrized(m))
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|r, c| rows[r][c]))
    }

    pub fn vacuum() -> Self {
        CovMatrix(Matrix4::identity())
    }

    /// Builds from blocks; `C` is placed top-right and `C^T` bottom-left.
    pub fn from_blocks(blocks: &Blocks) -> Result<Self> {
        Self::new(blocks.reassemble())
    }

    pub(crate) fn symmetrized(m: Matrix4<f64>) -> Self {
        CovMatrix((m + m.transpose()) * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = self.0[(r, c)];
            }
        }
        out
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    pub fn blocks(&self) -> Blocks {
        Blocks {
            a1: self.0.fixed_view::<2, 2>(0, 0).into_owned(),
            a2: self.0.fixed_view::<2, 2>(2, 2).into_owned(),
            c: self.0.fixed_view::<2, 2>(0, 2).into_owned(),
        }
    }

    /// `<dq1 dq2>`.
    pub fn c_q(&self) -> f64 {
        self.0[(0, 2)]
    }

    /// `<dp1 dp2>`.
    pub fn c_p(&self) -> f64 {
        self.0[(1, 3)]
    }

    /// Time reversal on one mode: flips the sign of that mode's `p` row and column.
    pub fn partial_transpose(&self, mode: Mode) -> CovMatrix {
        let p = mode.offset() + 1;
        let mut m = self.0;
        for k in 0..4 {
            if k != p {
                m[(p, k)] = -m[(p, k)];
                m[(k, p)] = -m[(k, p)];
            }
        }
        CovMatrix(m)
    }

    pub fn symplectic_spectrum(&self, partial_transpose: Option<Mode>) -> Result<SymplecticSpectrum> {
        symplectic_spectrum(self, partial_transpose)
    }

    pub fn validate_physicality(&self) -> PhysicalityDiagnosis {
        validate_physicality(self)
    }

    /// Returns `self` if physical, otherwise [`Error::Unphysical`].
    pub fn require_physical(&self) -> Result<&Self> {
        let d = self.validate_physicality();
        if d.physical {
            Ok(self)
        } else {
            Err(Error::Unphysical {
                nu_minus: d.nu.nu_minus,
                min_eigenvalue: d.min_eigenvalue,
            })
        }
    }
}

impl fmt::Display for CovMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            let row: Vec<String> = (0..4).map(|c| format!("{}", self.0[(r, c)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as four rows of four numbers.
impl Serialize for CovMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CovMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[f64; 4]; 4]>::deserialize(deserializer)?;
        CovMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// `V = [[A1, C], [C^T, A2]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blocks {
    pub a1: Matrix2<f64>,
    pub a2: Matrix2<f64>,
    pub c: Matrix2<f64>,
}

impl Blocks {
    pub fn reassemble(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.a1);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.a2);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&self.c.transpose());
        m
    }

    pub fn a(&self, mode: Mode) -> &Matrix2<f64> {
        match mode {
            Mode::One => &self.a1,
            Mode::Two => &self.a2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

/// Symplectic eigenvalues of `V` (or of its partial transpose).
///
/// They are the singular values of `V^{1/2} Omega V^{1/2}`, each appearing
/// twice. This stays accurate near degenerate spectra (pure states), where
/// the root formula of the characteristic quartic loses half its digits.
pub fn symplectic_spectrum(v: &CovMatrix, partial_transpose: Option<Mode>) -> Result<SymplecticSpectrum> {
    let m = match partial_transpose {
        Some(mode) => v.partial_transpose(mode),
        None => *v,
    };
    let half = psd_sqrt(m.matrix())?;
    let k = half * omega() * half;
    let svd = SVD::try_new(k, false, false, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence("singular value decomposition"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(f64::total_cmp);
    Ok(SymplecticSpectrum {
        nu_minus: 0.5 * (s[0] + s[1]),
        nu_plus: 0.5 * (s[2] + s[3]),
    })
}

fn psd_sqrt(m: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let eig = SymmetricEigen::try_new(*m, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence("symmetric eigendecomposition"))?;
    let roots = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    Ok(eig.eigenvectors * Matrix4::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

pub(crate) fn min_eigenvalue(m: &Matrix4<f64>) -> Result<f64> {
    let eig = SymmetricEigen::try_new(*m, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence("symmetric eigendecomposition"))?;
    Ok(eig.eigenvalues.min())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityDiagnosis {
    pub physical: bool,
    /// Within tolerance of a physicality bound (pure states land here).
    pub boundary: bool,
    pub nu: SymplecticSpectrum,
    pub min_eigenvalue: f64,
    /// `1 + det V - 2 det C - det A1 - det A2`; nonnegative for physical states.
    pub det_condition: f64,
}

pub fn validate_physicality(v: &CovMatrix) -> PhysicalityDiagnosis {
    let b = v.blocks();
    let det_condition = 1.0 + v.det() - 2.0 * b.c.determinant() - b.a1.determinant() - b.a2.determinant();
    let spectrum = symplectic_spectrum(v, None);
    let min_eig = min_eigenvalue(v.matrix());
    match (spectrum, min_eig) {
        (Ok(nu), Ok(min_eigenvalue)) => {
            let physical = min_eigenvalue >= -PHYSICALITY_TOL && nu.nu_minus >= 1.0 - PHYSICALITY_TOL;
            let boundary = min_eigenvalue.abs() <= PHYSICALITY_TOL || (nu.nu_minus - 1.0).abs() <= PHYSICALITY_TOL;
            PhysicalityDiagnosis {
                physical,
                boundary,
                nu,
                min_eigenvalue,
                det_condition,
            }
        }
        _ => PhysicalityDiagnosis {
            physical: false,
            boundary: false,
            nu: SymplecticSpectrum {
                nu_minus: f64::NAN,
                nu_plus: f64::NAN,
            },
            min_eigenvalue: f64::NAN,
            det_condition,
        },
    }
}

/// Global and reduced purities together with the excess-noise and impurity
/// quantities `sigma_j = tr A_j - 2` and `varpi_j = det A_j - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Purities {
    pub mu: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub impurity1: f64,
    pub impurity2: f64,
}

pub fn purities(v: &CovMatrix) -> Result<Purities> {
    let b = v.blocks();
    let det_v = v.det();
    let det_a1 = b.a1.determinant();
    let det_a2 = b.a2.determinant();
    for (what, det) in [("V", det_v), ("A1", det_a1), ("A2", det_a2)] {
        if det <= 0.0 {
            return Err(Error::NonPositiveDeterminant { what, det });
        }
    }
    Ok(Purities {
        mu: det_v.powf(-0.5),
        mu1: det_a1.powf(-0.5),
        mu2: det_a2.powf(-0.5),
        sigma1: b.a1.trace() - 2.0,
        sigma2: b.a2.trace() - 2.0,
        impurity1: det_a1 - 1.0,
        impurity2: det_a2 - 1.0,
    })
}

/// Single-mode `R(phi) Z(r) R(theta)` with `Z(r) = diag(e^-r, e^r)` on `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeSymplectic {
    pub theta: f64,
    pub r: f64,
    pub phi: f64,
}

impl ModeSymplectic {
    pub fn matrix(&self) -> Matrix2<f64> {
        rotation2(self.phi) * Matrix2::new((-self.r).exp(), 0.0, 0.0, self.r.exp()) * rotation2(self.theta)
    }
}

pub fn rotation2(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// A mode-local symplectic map `S = S1 (+) S2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalSymplectic {
    pub mode1: ModeSymplectic,
    pub mode2: ModeSymplectic,
}

impl LocalSymplectic {
    /// Squeeze parameters beyond this make covariance entries overflow quickly.
    pub const MAX_SQUEEZE: f64 = 10.0;

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(mode1: ModeSymplectic, mode2: ModeSymplectic) -> Result<Self> {
        for (name, x) in [
            ("theta1", mode1.theta),
            ("r1", mode1.r),
            ("phi1", mode1.phi),
            ("theta2", mode2.theta),
            ("r2", mode2.r),
            ("phi2", mode2.phi),
        ] {
            if !x.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: x,
                    reason: "must be finite".into(),
                });
            }
        }
        for (name, r) in [("r1", mode1.r), ("r2", mode2.r)] {
            if r.abs() > Self::MAX_SQUEEZE {
                return Err(Error::InvalidParameter {
                    name,
                    value: r,
                    reason: format!("|r| must not exceed {}", Self::MAX_SQUEEZE),
                });
            }
        }
        Ok(Self { mode1, mode2 })
    }

    /// Local rotations only.
    pub fn rotation(theta1: f64, theta2: f64) -> Self {
        Self {
            mode1: ModeSymplectic { theta: theta1, ..Default::default() },
            mode2: ModeSymplectic { theta: theta2, ..Default::default() },
        }
    }

    /// Local squeezing only.
    pub fn squeeze(r1: f64, r2: f64) -> Self {
        Self {
            mode1: ModeSymplectic { r: r1, ..Default::default() },
            mode2: ModeSymplectic { r: r2, ..Default::default() },
        }
    }

    /// Flattened `(theta1, r1, phi1, theta2, r2, phi2)`.
    pub fn to_params(&self) -> [f64; 6] {
        [self.mode1.theta, self.mode1.r, self.mode1.phi, self.mode2.theta, self.mode2.r, self.mode2.phi]
    }

    pub fn from_params(p: &[f64; 6]) -> Self {
        Self {
            mode1: ModeSymplectic { theta: p[0], r: p[1], phi: p[2] },
            mode2: ModeSymplectic { theta: p[3], r: p[4], phi: p[5] },
        }
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.mode1.matrix());
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.mode2.matrix());
        m
    }

    /// `max |S Omega S^T - Omega|`.
    pub fn symplectic_defect(&self) -> f64 {
        let s = self.matrix();
        (s * omega() * s.transpose() - omega()).amax()
    }
}

/// `S V S^T`.
pub fn apply_local_symplectic(v: &CovMatrix, s: &LocalSymplectic) -> CovMatrix {
    let m = s.matrix();
    CovMatrix::symmetrized(m * v.matrix() * m.transpose())
}
