//! Turns a validated config into results.

use anyhow::{Context, Result};
use latinvis_core::dispersion::{band_eval, band_info, complex_bloch_roots, q_plus_min, BandInfo, BandPoint, ComplexBlochSolution};
use latinvis_core::lattice::{Lattice1D, Lattice2D};
use latinvis_core::qwalk::{far_field_max, qwalk_error, run, QWalkConfig, QWalkState};
use latinvis_core::scattering::{
    evanescence_fit, full_field_residual, invisibility_predicate, run_invisibility_experiment,
    run_invisibility_experiment_2d, scattered_field, EvanescenceFit, ExperimentResult, Guarantee, ScatteredField,
    ScatteredFieldSetup, Side,
};

use crate::config::*;
use crate::selftest::{self, SelftestReport};

pub struct DispersionOutcome {
    pub band: BandInfo,
    pub samples: Vec<(f64, BandPoint)>,
    pub roots: Vec<ComplexBlochSolution>,
}

pub struct FieldOutcome {
    pub lattice: Lattice1D,
    pub field: ScatteredField,
    pub guarantee: Guarantee,
    /// Largest equation-of-motion residual of the reconstructed full field.
    pub residual: f64,
    pub fit: Option<EvanescenceFit>,
    /// Slowest right-going evanescent rate over the modulation's shifts.
    pub predicted_rate: Option<f64>,
}

pub struct QWalkOutcome {
    pub walk: QWalkConfig,
    pub states: Vec<QWalkState>,
    pub errors: Vec<Vec<f64>>,
    pub far_field: f64,
    pub peak_intensity: f64,
    /// Largest step-to-step change of the total intensity.
    pub intensity_drift: f64,
}

pub enum Outcome {
    Dispersion(DispersionOutcome),
    Scatter1d { lattice: Lattice1D, result: ExperimentResult, guarantee: Guarantee },
    Scatter2d { lattice: Lattice2D, result: ExperimentResult, frames: Vec<f64>, guarantee: Guarantee },
    ScatteredField(FieldOutcome),
    QWalk(QWalkOutcome),
    Selftest(SelftestReport),
}

impl Outcome {
    /// True when the edge monitor tripped in a run whose policy is abort.
    pub fn aborts(&self, cfg: &ExperimentConfig) -> bool {
        let policy = match cfg {
            ExperimentConfig::Scatter1d(c) => c.edge_policy,
            ExperimentConfig::Scatter2d(c) => c.edge_policy,
            _ => return false,
        };
        let tripped = match self {
            Outcome::Scatter1d { result, .. } | Outcome::Scatter2d { result, .. } => result.edge.tripped(),
            _ => false,
        };
        tripped && policy == EdgePolicy::Abort
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    match cfg {
        ExperimentConfig::Dispersion(c) => dispersion(c).map(Outcome::Dispersion),
        ExperimentConfig::Scatter1d(c) => {
            let lattice = c.lattice()?;
            let pert = c.perturbation()?;
            let guarantee = invisibility_predicate(pert.modulation(), &band_info(lattice.kernel())?);
            let result = run_invisibility_experiment(&lattice, &pert, &c.packet()?, &c.plan()?).context("scatter-1d run")?;
            Ok(Outcome::Scatter1d { lattice, result, guarantee })
        }
        ExperimentConfig::Scatter2d(c) => {
            let lattice = c.lattice()?;
            let pert = c.perturbation();
            let band = latinvis_core::dispersion::square_lattice_band(lattice.kappa());
            let guarantee = invisibility_predicate(pert.modulation(), &band);
            let result = run_invisibility_experiment_2d(&lattice, &pert, &c.packet(), &c.plan()?).context("scatter-2d run")?;
            Ok(Outcome::Scatter2d { lattice, result, frames: c.frame_times(), guarantee })
        }
        ExperimentConfig::ScatteredField(c) => field(c).map(Outcome::ScatteredField),
        ExperimentConfig::QWalk(c) => qwalk(c).map(Outcome::QWalk),
        ExperimentConfig::SpectralSelftest(c) => selftest::run(c).map(Outcome::Selftest),
    }
}

fn dispersion(c: &DispersionConfig) -> Result<DispersionOutcome> {
    let kernel = c.kernel()?;
    let band = band_info(&kernel)?;
    let samples = (0..c.samples)
        .map(|k| {
            let q = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / (c.samples - 1) as f64;
            Ok((q, band_eval(&kernel, q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let roots = c
        .energies
        .iter()
        .enumerate()
        .map(|(i, e)| complex_bloch_roots(&kernel, e.value()).with_context(|| format!("energies[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DispersionOutcome { band, samples, roots })
}

fn field(c: &ScatteredFieldConfig) -> Result<FieldOutcome> {
    let lattice = c.lattice()?;
    let pert = c.perturbation()?;
    let setup = ScatteredFieldSetup {
        carrier: c.carrier.value(),
        t_start: c.t_start,
        t_end: c.t_end,
        snapshots: c.snapshots()?,
        switch_on: c.switch_on(),
        integrator: c.integrator.build()?,
    };
    let field = scattered_field(&lattice, &pert, &setup).context("scattered-field run")?;
    let residual = full_field_residual(&lattice, &pert, &field, c.switch_on())?;
    let band = band_info(lattice.kernel())?;
    let guarantee = invisibility_predicate(pert.modulation(), &band);
    let fit = match &c.fit {
        Some(f) => {
            let side = match f.side {
                SideConfig::Left => Side::Left,
                SideConfig::Right => Side::Right,
            };
            Some(evanescence_fit(&field, side, f.center, f.near, f.far).context("fit")?)
        }
        None => None,
    };
    let predicted_rate = if guarantee == Guarantee::GuaranteedInvisible && !pert.modulation().is_zero() {
        let shifts: Vec<f64> = pert.modulation().spectral_support().iter().map(|w| -w).collect();
        Some(q_plus_min(lattice.kernel(), field.energy, &shifts)?)
    } else {
        None
    };
    Ok(FieldOutcome { lattice, field, guarantee, residual, fit, predicted_rate })
}

fn qwalk(c: &QWalkFileConfig) -> Result<QWalkOutcome> {
    let walk = c.walk()?;
    let init = QWalkState::single_site(&walk, c.initial_site)?;
    let states = run(&walk, &init, c.steps)?;
    let free = run(&walk.free(), &init, c.steps)?;
    let errors = qwalk_error(&states, &free)?;
    let far_field = far_field_max(&errors, &walk, c.profile.center, c.far_radius);
    let peak_intensity = states.iter().flat_map(|s| s.intensity()).fold(0.0, f64::max);
    let totals: Vec<f64> = states.iter().map(QWalkState::total_intensity).collect();
    let intensity_drift = totals.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    Ok(QWalkOutcome { walk, states, errors, far_field, peak_intensity, intensity_drift })
}
