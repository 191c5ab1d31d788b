//! Pure-loss bosonic channels acting on covariance matrices.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::cov::{CovMatrix, Mode};
use crate::error::{Error, Result};

/// Standard telecom fiber loss.
pub const DEFAULT_ALPHA_DB_PER_KM: f64 = 0.2;

/// Intensity transmittances of the two channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transmittance {
    t1: f64,
    t2: f64,
}

impl Transmittance {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for (channel, value) in [(1u8, t1), (2u8, t2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::TransmittanceOutOfRange { channel, value });
            }
        }
        Ok(Self { t1, t2 })
    }

    /// No loss on either channel.
    pub fn lossless() -> Self {
        Self { t1: 1.0, t2: 1.0 }
    }

    /// Loss on `mode` only.
    pub fn single(mode: Mode, t: f64) -> Result<Self> {
        match mode {
            Mode::One => Self::new(t, 1.0),
            Mode::Two => Self::new(1.0, t),
        }
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn get(&self, mode: Mode) -> f64 {
        match mode {
            Mode::One => self.t1,
            Mode::Two => self.t2,
        }
    }
}

/// `V' = L (V - I) L + I` with `L = diag(sqrt T1, sqrt T1, sqrt T2, sqrt T2)`.
///
/// Blockwise this is `C' = sqrt(T1 T2) C` and `A_j' = T_j (A_j - I) + I`.
pub fn attenuate(v: &CovMatrix, t: Transmittance) -> CovMatrix {
    let l = [t.t1.sqrt(), t.t1.sqrt(), t.t2.sqrt(), t.t2.sqrt()];
    let m = v.matrix();
    let out = Matrix4::from_fn(|r, c| {
        let delta = if r == c { 1.0 } else { 0.0 };
        l[r] * l[c] * (m[(r, c)] - delta) + delta
    });
    CovMatrix::symmetrized(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Both modes travel through lossy links.
    DualChannel,
    /// Only the given mode travels; the other stays with the source.
    SingleChannel(Mode),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Fiber length per channel in km. Ignored for the stationary mode in a
    /// single-channel scenario.
    pub length_km: [f64; 2],
    pub alpha_db_per_km: f64,
    pub scenario: Scenario,
}

impl LinkBudget {
    pub fn dual(length1_km: f64, length2_km: f64) -> Self {
        Self {
            length_km: [length1_km, length2_km],
            alpha_db_per_km: DEFAULT_ALPHA_DB_PER_KM,
            scenario: Scenario::DualChannel,
        }
    }

    pub fn single(mode: Mode, length_km: f64) -> Self {
        let mut lengths = [0.0; 2];
        lengths[mode.index() - 1] = length_km;
        Self {
            length_km: lengths,
            alpha_db_per_km: DEFAULT_ALPHA_DB_PER_KM,
            scenario: Scenario::SingleChannel(mode),
        }
    }

    pub fn with_alpha(mut self, alpha_db_per_km: f64) -> Self {
        self.alpha_db_per_km = alpha_db_per_km;
        self
    }
}

/// `T = 10^(-alpha * length / 10)` per lossy channel.
pub fn transmittance_from_link(b: &LinkBudget) -> Result<Transmittance> {
    if !(b.alpha_db_per_km.is_finite() && b.alpha_db_per_km >= 0.0) {
        return Err(Error::InvalidLink(format!(
            "attenuation coefficient must be a nonnegative number, got {}",
            b.alpha_db_per_km
        )));
    }
    let lossy = |mode: Mode| match b.scenario {
        Scenario::DualChannel => true,
        Scenario::SingleChannel(m) => m == mode,
    };
    let mut t = [1.0; 2];
    for mode in Mode::BOTH {
        let i = mode.index() - 1;
        if !lossy(mode) {
            continue;
        }
        let length = b.length_km[i];
        if !(length.is_finite() && length >= 0.0) {
            return Err(Error::InvalidLink(format!(
                "length of channel {} must be a nonnegative number, got {}",
                mode, length
            )));
        }
        t[i] = 10f64.powf(-b.alpha_db_per_km * length / 10.0);
    }
    Transmittance::new(t[0], t[1])
}
