//! JSON documents written by the subcommands.

use std::collections::BTreeSet;

use cvrobust::cov::{PhysicalityDiagnosis, SymplecticSpectrum};
use cvrobust::families::{EprSummary, FamilyWitnesses};
use cvrobust::format::StateFile;
use cvrobust::robustify::Robustified;
use cvrobust::robustness::CHANNEL_INDEX_NOTE;
use cvrobust::witness::{gamma_coefficients, minimized_duan, DuanMinimum, GammaSet};
use cvrobust::{classify, BoundaryFlag, CovMatrix, LocalSymplectic, Mode, RobustnessClass};
use serde::Serialize;

#[derive(Serialize)]
pub struct ValidateReport {
    pub label: String,
    pub physical: bool,
    pub boundary: bool,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub min_eigenvalue: f64,
    pub det_condition: f64,
}

impl ValidateReport {
    pub fn new(label: String, v: &CovMatrix) -> Self {
        let PhysicalityDiagnosis {
            physical,
            boundary,
            nu,
            min_eigenvalue,
            det_condition,
        } = v.validate_physicality();
        Self {
            label,
            physical,
            boundary,
            nu_minus: nu.nu_minus,
            nu_plus: nu.nu_plus,
            min_eigenvalue,
            det_condition,
        }
    }
}

#[derive(Serialize)]
pub struct Spectra {
    pub state: SymplecticSpectrum,
    pub partial_transpose: SymplecticSpectrum,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub label: String,
    pub class: RobustnessClass,
    pub w_ppt: f64,
    pub w_full: f64,
    pub w_ch1: f64,
    pub w_ch2: f64,
    pub t1_critical: Option<f64>,
    pub t2_critical: Option<f64>,
    pub boundary_flags: BTreeSet<BoundaryFlag>,
    pub duan: DuanMinimum,
    pub gamma: GammaSet,
    pub spectra: Spectra,
    pub note: &'static str,
}

impl ClassifyReport {
    pub fn new(label: String, v: &CovMatrix) -> cvrobust::Result<Self> {
        let r = classify(v)?;
        Ok(Self {
            label,
            class: r.class,
            w_ppt: r.w_ppt,
            w_full: r.w_full,
            w_ch1: r.w_ch1,
            w_ch2: r.w_ch2,
            t1_critical: r.t1_critical,
            t2_critical: r.t2_critical,
            boundary_flags: r.boundary_flags,
            duan: minimized_duan(v),
            gamma: gamma_coefficients(v),
            spectra: Spectra {
                state: v.symplectic_spectrum(None)?,
                partial_transpose: v.symplectic_spectrum(Some(Mode::Two))?,
            },
            note: CHANNEL_INDEX_NOTE,
        })
    }
}

#[derive(Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub closed_form: FamilyWitnesses,
    pub epr: EprSummary,
}

#[derive(Serialize)]
pub struct RobustifyReport {
    pub symplectic: LocalSymplectic,
    pub objective: f64,
    pub evaluations: usize,
    pub restart: usize,
    pub class: RobustnessClass,
    pub state: StateFile,
}

impl RobustifyReport {
    pub fn new(label: String, found: Robustified) -> cvrobust::Result<Self> {
        Ok(Self {
            symplectic: found.symplectic,
            objective: found.objective,
            evaluations: found.evaluations,
            restart: found.restart,
            class: classify(&found.state)?.class,
            state: StateFile::new(format!("{label} (robustified)"), &found.state),
        })
    }
}
