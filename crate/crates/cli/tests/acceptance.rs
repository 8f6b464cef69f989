//! Acceptance suite: every headline result at its stated tolerance.
//!
//! Prints one `PASS`/`FAIL` line per check and exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use latinvis::config::*;
use latinvis::presets::find;
use latinvis::runner::{execute, FieldOutcome, Outcome, QWalkOutcome};
use latinvis::selftest::SelftestReport;
use latinvis_core::dispersion::{band_info, square_lattice_band};
use latinvis_core::evolution::{convergence_probe, evolve_1d, IntegratorConfig};
use latinvis_core::lattice::{
    Boundary, Harmonic, HoppingKernel, Lattice1D, LatticeHamiltonian, Modulation, StateVector1D,
};
use latinvis_core::qwalk::{continuum_order, run, QWalkConfig, QWalkState};
use latinvis_core::scattering::{gaussian_packet, ExperimentResult, WavePacketSpec};
use latinvis_core::C64;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e:#}")));
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.checks.push(Check { name: name.to_string(), pass, detail });
    }
}

fn preset(name: &str) -> Result<Outcome> {
    execute(&find(name).expect("preset exists").config())
}

fn scatter(name: &str) -> Result<ExperimentResult> {
    match preset(name)? {
        Outcome::Scatter1d { result, .. } | Outcome::Scatter2d { result, .. } => Ok(result),
        _ => bail!("{name} is not a scattering preset"),
    }
}

fn walk(name: &str) -> Result<QWalkOutcome> {
    match preset(name)? {
        Outcome::QWalk(q) => Ok(q),
        _ => bail!("{name} is not a quantum-walk preset"),
    }
}

fn reference_peak(r: &ExperimentResult) -> f64 {
    r.final_reference_profile.iter().copied().fold(0.0, f64::max)
}

fn invisible_pair(name: &str, invisible: &Result<ExperimentResult>, visible: &Result<ExperimentResult>) -> Result<(bool, String)> {
    let (Ok(a), Ok(b)) = (invisible, visible) else { bail!("{name} runs failed") };
    let (ia, ib, peak) = (a.final_error(), b.final_error(), reference_peak(a));
    let pass = a.verdict_is_valid() && ia <= 1e-2 * peak && ib >= 100.0 * ia;
    Ok((pass, format!("I = {ia:.3e} (limit {:.3e}), cosine/exp = {:.1} (need >= 100)", 1e-2 * peak, ib / ia)))
}

fn visible(r: &Result<ExperimentResult>) -> Result<(bool, String)> {
    let Ok(r) = r else { bail!("run failed") };
    let (i, peak) = (r.final_error(), reference_peak(r));
    Ok((r.verdict_is_valid() && i >= 5e-2 * peak, format!("I = {i:.3e}, floor {:.3e}", 5e-2 * peak)))
}

fn chain(sites: usize, hopping: &[f64]) -> Lattice1D {
    Lattice1D::new(sites, -(sites as i64) / 2, HoppingKernel::symmetric(hopping).unwrap(), Boundary::HardWall).unwrap()
}

fn fig1_modulation() -> Modulation {
    Modulation::new(vec![Harmonic::exp(1.0, 5.0), Harmonic::exp(1.0, 18f64.sqrt())])
}

/// Integrator self-convergence of the fig1a run between rel_tol 1e-9 and 1e-10.
fn fig1a_self_convergence(i_final: f64) -> Result<(bool, String)> {
    let lattice = chain(512, &[1.0, 0.2]);
    let pert = latinvis_core::lattice::Perturbation::gaussian_onsite(5.0, 2.0, 0, fig1_modulation());
    let psi0 = gaussian_packet(&lattice, &WavePacketSpec { center: -90.0, width: 10.0, carrier: FRAC_PI_2 })?;
    let h = LatticeHamiltonian::new(&lattice, Some(&pert))?;
    let rows = convergence_probe(&h, &psi0.amplitudes, (0.0, 100.0), &[], &IntegratorConfig::default(), &[1e-9, 1e-10])?;
    let d = rows[0].deviation;
    Ok((d < 1e-2 * i_final, format!("|ψ(1e-9) − ψ(1e-10)| = {d:.2e}, I(100) = {i_final:.3e}")))
}

fn band_facts() -> Result<(bool, String)> {
    let b = band_info(&HoppingKernel::symmetric(&[1.0, 0.2])?)?;
    let mut worst: f64 = (b.width - 4.0).abs();
    for kappa in [0.5, 1.0, 1.7] {
        let b = band_info(&HoppingKernel::nearest_neighbor(kappa)?)?;
        worst = worst.max((b.width - 4.0 * kappa).abs()).max((b.v_max - 2.0 * kappa).abs());
    }
    worst = worst.max((square_lattice_band(1.0).width - 8.0).abs());
    Ok((worst < 1e-9, format!("largest deviation {worst:.1e}")))
}

fn evanescence() -> Result<(bool, String)> {
    let cfg = ExperimentConfig::ScatteredField(ScatteredFieldConfig {
        lattice: LatticeConfig {
            sites: 161,
            origin: -80,
            hopping: vec![1.0.into()],
            boundary: BoundaryConfig::Absorbing { width: 30, strength: 1.0 },
        },
        perturbation: PerturbationConfig::Onsite { sites: vec![0], values: vec![1.0.into()] },
        modulation: vec![TermConfig::exp(1.0, 5.0.into())],
        carrier: half_pi(),
        t_start: -10.0,
        t_end: 200.0,
        frames: 42,
        switch_on: Some(SwitchOnConfig { center: 30.0, width: 10.0 }),
        fit: Some(FitConfig { side: SideConfig::Right, center: 0, near: 2, far: 10 }),
        integrator: IntegratorSection::default(),
    });
    let Outcome::ScatteredField(FieldOutcome { fit: Some(fit), .. }) = execute(&cfg)? else { bail!("no fit") };
    let expected = 2.5f64.acosh();
    let rel = (fit.decay_rate - expected).abs() / expected;
    Ok((rel < 0.05, format!("fitted {:.5}, arccosh(2.5) = {expected:.5}, relative error {rel:.1e}", fit.decay_rate)))
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn norm_drift(hermitian: &Result<ExperimentResult>) -> Result<(bool, String)> {
    let Ok(r) = hermitian else { bail!("run failed") };
    let n0 = norm(&r.perturbed.states[0]);
    let drift = r.perturbed.states.iter().map(|s| (norm(s) - n0).abs() / n0).fold(0.0, f64::max);
    let t = r.times().last().copied().unwrap_or(0.0);
    Ok((drift < 1e-8 && t >= 100.0, format!("max relative drift {drift:.2e} over t = {t}")))
}

fn unitarity(hermitian: &Result<QWalkOutcome>) -> Result<(bool, String)> {
    let Ok(q) = hermitian else { bail!("walk failed") };
    Ok((q.intensity_drift < 1e-12, format!("max per-step change {:.2e} over {} steps", q.intensity_drift, q.states.len() - 1)))
}

fn linearity() -> Result<(bool, String)> {
    let lattice = chain(512, &[1.0, 0.2]);
    let pert = latinvis_core::lattice::Perturbation::gaussian_onsite(5.0, 2.0, 0, fig1_modulation());
    let cfg = IntegratorConfig::default();
    let a = gaussian_packet(&lattice, &WavePacketSpec { center: -90.0, width: 10.0, carrier: FRAC_PI_2 })?;
    let b = gaussian_packet(&lattice, &WavePacketSpec { center: -40.0, width: 6.0, carrier: 0.3 * PI })?;
    let (ca, cb) = (C64::new(0.8, -0.3), C64::new(-0.4, 1.1));
    let mix = StateVector1D::new(0.0, a.amplitudes.iter().zip(&b.amplitudes).map(|(x, y)| ca * x + cb * y).collect())?;
    let t = 50.0;
    let ya = evolve_1d(&lattice, Some(&pert), &a, t, &[], &cfg)?;
    let yb = evolve_1d(&lattice, Some(&pert), &b, t, &[], &cfg)?;
    let ym = evolve_1d(&lattice, Some(&pert), &mix, t, &[], &cfg)?;
    let combined: Vec<C64> = ya.final_state().iter().zip(yb.final_state()).map(|(x, y)| ca * x + cb * y).collect();
    let scale = combined.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let dev = ym.final_state().iter().zip(&combined).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let budget = 10.0 * cfg.rel_tol * scale;
    Ok((dev < budget, format!("deviation {dev:.2e}, budget {budget:.2e}")))
}

/// `J_n(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ` by the trapezoid rule.
fn bessel_j(n: i64, x: f64) -> f64 {
    let m = 2000;
    let h = PI / m as f64;
    let mut s = 0.5 * (1.0 + (n as f64 * PI).cos());
    for k in 1..m {
        let tau = k as f64 * h;
        s += (n as f64 * tau - x * tau.sin()).cos();
    }
    s * h / PI
}

fn bessel() -> Result<(bool, String)> {
    let lattice = Lattice1D::new(80, -40, HoppingKernel::nearest_neighbor(1.0)?, Boundary::HardWall)?;
    let mut psi = StateVector1D::zeros(&lattice);
    psi.amplitudes[lattice.index_of(0).unwrap()] = C64::new(1.0, 0.0);
    let tr = evolve_1d(&lattice, None, &psi, 8.0, &[1.0, 2.0, 4.0], &IntegratorConfig::default())?;
    let mut worst: f64 = 0.0;
    for (t, s) in tr.times.iter().zip(&tr.states) {
        for (i, z) in s.iter().enumerate() {
            let n = lattice.label(i);
            worst = worst.max((z - C64::new(0.0, 1.0).powi(n as i32) * bessel_j(n, 2.0 * t)).norm());
        }
    }
    Ok((worst < 1e-8, format!("max |ψ − iⁿJₙ(2t)| = {worst:.2e} for t ≤ 8")))
}

fn light_cone() -> Result<(bool, String)> {
    let profile: Vec<(i64, C64)> = (-8..=8).map(|n| (n, C64::new(0.3 * (-(n as f64 / 3.0).powi(2)).exp(), 0.0))).collect();
    let mut violations = 0;
    let mut worst_growth = 0i64;
    for beta in [0.3, 0.97 * FRAC_PI_2, 1.2] {
        let cfg = QWalkConfig::new(beta, 121, -60, profile.clone(), fig1_modulation().rescaled(0.1, 0.02))?;
        let start = -5;
        let states = run(&cfg, &QWalkState::single_site(&cfg, start)?, 50)?;
        for (m, s) in states.iter().enumerate() {
            for (i, (u, v)) in s.u.iter().zip(&s.v).enumerate() {
                let d = (cfg.label(i) - start).abs();
                if (u.norm() > 0.0 || v.norm() > 0.0) && d > m as i64 {
                    violations += 1;
                }
                if u.norm() > 0.0 || v.norm() > 0.0 {
                    worst_growth = worst_growth.max(d - m as i64);
                }
            }
        }
    }
    Ok((violations == 0, format!("{violations} sites outside |n − n₀| ≤ m (max excess {worst_growth})")))
}

fn selftest_line(r: &Result<SelftestReport>, pick: impl Fn(&SelftestReport) -> (bool, String)) -> Result<(bool, String)> {
    match r {
        Ok(r) => Ok(pick(r)),
        Err(e) => bail!("selftest failed: {e:#}"),
    }
}

fn order() -> Result<(bool, String)> {
    let profile: Vec<(i64, C64)> = (-10..=10).map(|n| (n, C64::new((-(n as f64 / 3.0).powi(2)).exp(), 0.0))).collect();
    let m = Modulation::new(vec![Harmonic::exp(0.02, 0.1), Harmonic::exp(0.012, 2f64.sqrt() / 15.0)]);
    let cfg = QWalkConfig::new(FRAC_PI_2 - 0.02, 61, -30, profile, m)?;
    let r = continuum_order(&cfg, &QWalkState::single_site(&cfg, -2)?, 20, &IntegratorConfig::default())?;
    Ok((
        (r.ratio - 4.0).abs() <= 0.8,
        format!("discrepancy {:.3e} at ρ = 0.02, {:.3e} at ρ = 0.01, ratio {:.2}", r.coarse.max_discrepancy, r.fine.max_discrepancy, r.ratio),
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut s = Suite::default();

    let fig1a = scatter("fig1a");
    let fig1b = scatter("fig1b");
    let fig2a = scatter("fig2a");
    let fig2b = scatter("fig2b");
    s.record("fig1a on-site invisibility", invisible_pair("fig1", &fig1a, &fig1b));
    s.record(
        "fig1a integrator self-convergence",
        fig1a.as_ref().map_err(|e| anyhow::anyhow!("{e:#}")).and_then(|r| fig1a_self_convergence(r.final_error())),
    );
    s.record("fig1b cosine visibility", visible(&fig1b));
    s.record("fig2b cosine visibility", visible(&fig2b));
    s.record("fig2a hopping-defect invisibility", invisible_pair("fig2", &fig2a, &fig2b));

    let fig4nh = scatter("fig4nh");
    let fig4h = scatter("fig4h");
    s.record(
        "fig4 non-Hermitian decay",
        fig4nh.as_ref().map_err(|e| anyhow::anyhow!("{e:#}")).map(|r| {
            let ratio = r.final_error() / r.peak_error();
            (ratio < 1e-2, format!("I(15)/max I = {ratio:.3e} (need < 1e-2)"))
        }),
    );
    s.record(
        "fig4 Hermitian persistence",
        fig4h.as_ref().map_err(|e| anyhow::anyhow!("{e:#}")).map(|r| {
            let ratio = r.final_error() / r.peak_error();
            (ratio >= 1.0 / 3.0, format!("I(15)/max I = {ratio:.3} over {} samples (need >= 1/3)", r.error_series.len()))
        }),
    );

    let fig3a = walk("fig3a");
    let fig3b = walk("fig3b");
    s.record(
        "fig3 quantum-walk far-field contrast",
        match (&fig3a, &fig3b) {
            (Ok(a), Ok(b)) => {
                let c = b.far_field / a.far_field;
                Ok((c >= 100.0, format!("far field exp {:.3e}, cosine {:.3e}, contrast {c:.3e}", a.far_field, b.far_field)))
            }
            _ => Err(anyhow::anyhow!("walk failed")),
        },
    );

    s.record("band facts", band_facts());
    s.record("evanescent decay rate", evanescence());

    s.record("property: Hermitian norm conservation", norm_drift(&fig1b));
    s.record("property: quantum-walk unitarity", unitarity(&fig3b));
    s.record("property: linearity of evolution", linearity());
    s.record("property: free-lattice Bessel propagator", bessel());
    s.record("property: quantum-walk light cone", light_cone());

    let st = match find("appendix-selftest").unwrap().config() {
        ExperimentConfig::SpectralSelftest(c) => latinvis::selftest::run(&c),
        _ => unreachable!(),
    };
    s.record(
        "spectral: window kernel area",
        selftest_line(&st, |r| {
            let a = r.kernel_area.area;
            ((a - 1.0).norm() <= 1e-2, format!("area {:.6} {:+.1e}i", a.re, a.im))
        }),
    );
    s.record(
        "spectral: theta kernel area",
        selftest_line(&st, |r| {
            let a = r.theta_area.area;
            let rel = (a - 2.0 * PI).norm() / (2.0 * PI);
            (rel <= 1e-2, format!("area {:.6} {:+.1e}i, relative error {rel:.1e}", a.re, a.im))
        }),
    );
    s.record(
        "spectral: transform round trip",
        selftest_line(&st, |r| (r.round_trip.rel_l2 < 1e-3, format!("relative L2 {:.2e}", r.round_trip.rel_l2))),
    );
    s.record(
        "spectral: convolution relation",
        selftest_line(&st, |r| {
            let c = &r.convolution;
            (c.deviation < 5e-2, format!("deviation {:.2e} (pointwise {:.2})", c.deviation, c.pointwise_deviation))
        }),
    );
    s.record(
        "spectral: forbidden band of the scattered field",
        selftest_line(&st, |r| {
            let f = &r.forbidden;
            (f.ratio < 1e-3, format!("max over ω ≥ {:.3} is {:.2e} of the peak", f.from, f.ratio))
        }),
    );

    s.record("continuum limit order", order());

    let failed: Vec<&Check> = s.checks.iter().filter(|c| !c.pass).collect();
    println!(
        "\n{} of {} checks passed in {:.1} s",
        s.checks.len() - failed.len(),
        s.checks.len(),
        start.elapsed().as_secs_f64()
    );
    for c in &failed {
        println!("failed: {} ({})", c.name, c.detail);
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
