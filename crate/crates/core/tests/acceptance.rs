//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use cvrobust::channel::{attenuate, Transmittance};
use cvrobust::cov::{apply_local_symplectic, LocalSymplectic};
use cvrobust::families::{build, FamilySpec};
use cvrobust::witness::{gamma_coefficients, minimized_duan, ppt_witness};
use cvrobust::{classify, critical_transmittance, robustify, Mode, RobustifyOptions, RobustnessClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid11() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

fn reference_state_classes() -> Outcome {
    let expected = [
        (1.275, RobustnessClass::FullyRobust),
        (0.893, RobustnessClass::Fragile),
        (0.3825, RobustnessClass::Separable),
        (1.033, RobustnessClass::PartiallyRobustSymmetric),
    ];
    let mut got = Vec::new();
    for (cq, want) in expected {
        let class = classify(&reference_state(cq)).map_err(|e| e.to_string())?.class;
        check(class == want, || format!("c_q = {cq}: got {class}, want {want}"))?;
        got.push(format!("{cq}->{class}"));
    }
    Ok(got.join(", "))
}

fn attenuation_fixture() -> Outcome {
    let out = attenuate(&cm_d(), Transmittance::new(1.0, 0.40).unwrap());
    let rounded = attenuated_reference_rounded();
    let mut worst = 0.0f64;
    for (r, row) in rounded.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            worst = worst.max((out.get(r, c) - x).abs());
        }
    }
    check(worst <= 5e-3, || format!("max entry deviation {worst:.2e} > 5e-3"))?;
    let class = classify(&out).map_err(|e| e.to_string())?.class;
    check(
        class == RobustnessClass::PartiallyRobustAsymmetric { robust_mode: Mode::Two },
        || format!("class {class}"),
    )?;
    Ok(format!("max deviation {worst:.1e}, class {class}"))
}

fn pure_state_fragility() -> Outcome {
    let v = squeezed_reference();
    let det = v.det();
    check((det - 1.0).abs() <= 1e-9, || format!("|det V - 1| = {:.2e}", (det - 1.0).abs()))?;
    let d = v.validate_physicality();
    check(d.physical, || format!("rejected as unphysical: nu_minus = {}", d.nu.nu_minus))?;
    let nu = v.symplectic_spectrum(Some(Mode::Two)).map_err(|e| e.to_string())?.nu_minus;
    check((nu - 0.2236).abs() <= 0.005, || format!("PT nu_minus = {nu}"))?;
    let class = classify(&v).map_err(|e| e.to_string())?.class;
    check(class == RobustnessClass::PartiallyRobustSymmetric, || format!("class {class}"))?;
    Ok(format!("det V = {det:.12}, PT nu_minus = {nu:.6}, class {class}"))
}

fn factorization_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for v in ensemble(1_000_000, 1000) {
        let g = gamma_coefficients(&v);
        for &t1 in &grid11() {
            for &t2 in &grid11() {
                let lhs = ppt_witness(&attenuate(&v, Transmittance::new(t1, t2).unwrap()));
                let w_r = g.reduced_at(t1, t2);
                let err = (lhs - t1 * t2 * w_r).abs() / (1.0 + w_r.abs());
                worst = worst.max(err);
                count += 1;
            }
        }
    }
    check(worst <= 1e-9, || format!("worst normalized error {worst:.2e}"))?;
    Ok(format!("{count} evaluations, worst normalized error {worst:.1e}"))
}

fn duan_scaling() -> Outcome {
    let mut worst = 0.0f64;
    for v in ensemble(1_000_000, 1000) {
        let w = minimized_duan(&v).w_m;
        for &t1 in &grid11() {
            for &t2 in &grid11() {
                let wt = minimized_duan(&attenuate(&v, Transmittance::new(t1, t2).unwrap())).w_m;
                let expect = t1 * t2 * w;
                worst = worst.max((wt - expect).abs() / (1.0 + expect.abs()));
            }
        }
    }
    check(worst <= 1e-9, || format!("worst relative error {worst:.2e}"))?;
    Ok(format!("worst relative error {worst:.1e}"))
}

fn corner_test_oracle() -> Outcome {
    let mut compared = 0;
    let mut excluded = 0;
    let mut counts = std::collections::BTreeMap::new();
    for v in entangled_ensemble(2_000_000, 500) {
        let report = classify(&v).map_err(|e| e.to_string())?;
        if report.is_boundary() {
            excluded += 1;
            continue;
        }
        let brute = brute_force_class(&v);
        check(report.class == brute, || format!("corner test {} vs scan {brute} on\n{v}", report.class))?;
        compared += 1;
        *counts.entry(report.class.name()).or_insert(0) += 1;
    }
    let mix: Vec<String> = counts.iter().map(|(k, n)| format!("{k} {n}")).collect();
    Ok(format!("{compared} states agree ({}), {excluded} boundary-flagged excluded", mix.join(", ")))
}

fn critical_transmittance_fixture() -> Outcome {
    let v = cm_b();
    let tc = critical_transmittance(&v, Mode::One)
        .map_err(|e| e.to_string())?
        .ok_or("no critical transmittance")?;
    check((tc - 0.412).abs() <= 0.001, || format!("T1c = {tc}"))?;
    let w = ppt_witness(&attenuate(&v, Transmittance::new(tc, 1.0).unwrap()));
    check(w.abs() <= 1e-6, || format!("|W_ppt| at T1c = {w:.2e}"))?;
    Ok(format!("T1c = {tc:.6}, W_ppt there {w:.1e}"))
}

fn fully_symmetric_robustness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut robust = 0;
    while robust < 10_000 {
        let s: f64 = rng.random_range(1.0..10.0);
        let bound = (s * s - 1.0).sqrt();
        let mag = rng.random_range(s - 1.0..=bound);
        if mag <= s - 1.0 {
            continue;
        }
        let c = if rng.random_bool(0.5) { mag } else { -mag };
        let v = build(&FamilySpec::FullySymmetric { s, c }).map_err(|e| e.to_string())?;
        let report = classify(&v).map_err(|e| e.to_string())?;
        if report.is_boundary() {
            continue;
        }
        check(report.class == RobustnessClass::FullyRobust, || format!("(s, c) = ({s}, {c}): {}", report.class))?;
        robust += 1;
    }
    let mut signs = 0;
    for _ in 0..10_000 {
        let s: f64 = rng.random_range(1.0..10.0);
        let bound = (s * s - 1.0).sqrt();
        let c = rng.random_range(-bound..=bound);
        let v = build(&FamilySpec::FullySymmetric { s, c }).map_err(|e| e.to_string())?;
        let report = classify(&v).map_err(|e| e.to_string())?;
        let reference = s - 1.0 - c.abs();
        if report.is_boundary() || reference.abs() < 1e-9 {
            continue;
        }
        check(report.w_ppt.signum() == reference.signum(), || {
            format!("(s, c) = ({s}, {c}): W_ppt = {}, s - 1 - |c| = {reference}", report.w_ppt)
        })?;
        signs += 1;
    }
    Ok(format!("{robust} entangled draws FullyRobust, {signs} sign checks"))
}

fn monotone_fragility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut lowered = 0;
    for v in entangled_ensemble(3_000_000, 1000) {
        let before = classify(&v).map_err(|e| e.to_string())?;
        let t = Transmittance::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0)).unwrap();
        let after = classify(&attenuate(&v, t)).map_err(|e| e.to_string())?;
        check(after.class.rank() <= before.class.rank(), || {
            format!("{} -> {} at ({}, {})", before.class, after.class, t.t1(), t.t2())
        })?;
        if after.class.rank() < before.class.rank() {
            lowered += 1;
        }
    }
    Ok(format!("1000 pairs, {lowered} became strictly less robust, none more"))
}

fn rotation_loss_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for v in ensemble(4_000_000, 1000) {
        let rot = LocalSymplectic::rotation(rng.random_range(-3.2..3.2), rng.random_range(-3.2..3.2));
        let t = Transmittance::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0)).unwrap();
        let lhs = attenuate(&apply_local_symplectic(&v, &rot), t);
        let rhs = apply_local_symplectic(&attenuate(&v, t), &rot);
        worst = worst.max((lhs.matrix() - rhs.matrix()).amax() / v.max_abs().max(1.0));
    }
    check(worst <= 1e-12, || format!("rotation violation {worst:.2e}"))?;
    let squeeze = LocalSymplectic::squeeze(0.5, 0.5);
    let t = Transmittance::new(0.5, 0.7).unwrap();
    let violation = ensemble(4_000_000, 20)
        .iter()
        .map(|v| {
            let lhs = attenuate(&apply_local_symplectic(v, &squeeze), t);
            let rhs = apply_local_symplectic(&attenuate(v, t), &squeeze);
            (lhs.matrix() - rhs.matrix()).amax()
        })
        .fold(0.0, f64::max);
    check(violation > 1e-6, || format!("squeeze violation only {violation:.2e}"))?;
    Ok(format!("rotation error {worst:.1e}, squeeze counterexample {violation:.3}"))
}

fn robustify_fixtures() -> Outcome {
    let opts = RobustifyOptions::default();
    let mut notes = Vec::new();
    for (name, v) in [("CM-B", cm_b()), ("CM-D", cm_d())] {
        let r = robustify(&v, &opts)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{name}: no map found within {} evaluations", opts.max_evaluations))?;
        let class = classify(&r.state).map_err(|e| e.to_string())?.class;
        check(class == RobustnessClass::FullyRobust, || format!("{name}: output class {class}"))?;
        check(r.evaluations <= opts.max_evaluations, || format!("{name}: {} evaluations", r.evaluations))?;
        for pt in [None, Some(Mode::One)] {
            let a = v.symplectic_spectrum(pt).map_err(|e| e.to_string())?;
            let b = r.state.symplectic_spectrum(pt).map_err(|e| e.to_string())?;
            for (x, y) in [(a.nu_minus, b.nu_minus), (a.nu_plus, b.nu_plus)] {
                check((x - y).abs() <= 1e-9 * x.abs(), || format!("{name}: spectrum {x} -> {y}"))?;
            }
        }
        notes.push(format!("{name} in {} evaluations", r.evaluations));
    }
    Ok(notes.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("robustness classes of the four reference states", reference_state_classes),
        ("attenuated fixture entries and asymmetric class", attenuation_fixture),
        ("pure squeezed state is partially robust", pure_state_fragility),
        ("attenuated witness factorization", factorization_identity),
        ("minimized Duan witness scaling", duan_scaling),
        ("corner test matches brute-force scans", corner_test_oracle),
        ("critical transmittance of the fragile state", critical_transmittance_fixture),
        ("fully symmetric states are fully robust", fully_symmetric_robustness),
        ("attenuation never increases robustness", monotone_fragility),
        ("rotations commute with loss, squeezing does not", rotation_loss_commutation),
        ("robustify reaches full robustness", robustify_fixtures),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
