//! Entanglement robustness of two-mode Gaussian states under lossy channels.
//!
//! States are 4x4 covariance matrices in `(q1, p1, q2, p2)` ordering with the
//! vacuum normalized to the identity. The crate evaluates the PPT and Duan
//! entanglement witnesses, factors the witness of an attenuated state into
//! `T1 T2 W_R(T1, T2)`, and classifies states by how their entanglement
//! survives loss on one or both channels.
//!
//! ```
//! use cvrobust::{classify, CovMatrix, RobustnessClass};
//!
//! let v = CovMatrix::from_rows([
//!     [2.55, 0.0, 1.275, 0.0],
//!     [0.0, 1.80, 0.0, -1.26],
//!     [1.275, 0.0, 2.55, 0.0],
//!     [0.0, -1.26, 0.0, 1.80],
//! ])?;
//! assert_eq!(classify(&v)?.class, RobustnessClass::FullyRobust);
//! # Ok::<(), cvrobust::Error>(())
//! ```

pub mod channel;
pub mod cov;
pub mod error;
pub mod families;
pub mod format;
pub mod robustify;
pub mod robustness;
pub mod simplex;
pub mod witness;

pub use channel::{attenuate, transmittance_from_link, LinkBudget, Scenario, Transmittance};
pub use cov::{
    apply_local_symplectic, purities, symplectic_spectrum, validate_physicality, Blocks, CovMatrix, LocalSymplectic,
    Mode, ModeSymplectic, PhysicalityDiagnosis, Purities, SymplecticSpectrum,
};
pub use error::{Error, Result};
pub use families::{
    build, epr_partial_witness, epr_summary, family_witnesses, random_physical_state, region_map_correlations,
    region_map_epr, EprSummary, FamilySpec, FamilyWitnesses, RandomStateParams, Region, RegionMap,
};
pub use format::{scan, ScanGrid, StateFile};
pub use robustify::{robustify, Robustified, RobustifyOptions};
pub use robustness::{
    channel_robustness_witness, classify, critical_transmittance, esd_contour, full_robustness_witness, BoundaryFlag,
    RobustnessClass, RobustnessReport,
};
pub use witness::{
    duan_witness, gamma_coefficients, minimized_duan, ppt_witness, reduced_witness, DuanMinimum, GammaSet,
};
