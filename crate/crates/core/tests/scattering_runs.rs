use std::f64::consts::PI;

use latinvis_core::dispersion::{band_eval, band_info, complex_bloch_roots};
use latinvis_core::evolution::{convergence_probe, is_monotone, IntegratorConfig};
use latinvis_core::lattice::{
    Boundary, Harmonic, HoppingKernel, Lattice1D, LatticeHamiltonian, Modulation, Perturbation,
};
use latinvis_core::scattering::{
    evanescence_fit, full_field_residual, gaussian_packet, run_invisibility_experiment, scattered_field,
    ExperimentPlan, ScatteredField, ScatteredFieldSetup, Side, SwitchOn, Verdict, WavePacketSpec,
};
use latinvis_core::Error;

fn invisible() -> Modulation {
    Modulation::new(vec![Harmonic::exp(1.0, 5.0), Harmonic::exp(1.0, 18f64.sqrt())])
}

fn bilateral() -> Modulation {
    Modulation::new(vec![Harmonic::cos(1.0, 5.0), Harmonic::cos(1.0, 18f64.sqrt())])
}

fn chain(sites: usize) -> Lattice1D {
    Lattice1D::new(sites, -(sites as i64) / 2, HoppingKernel::symmetric(&[1.0, 0.2]).unwrap(), Boundary::HardWall).unwrap()
}

fn packet(center: f64, carrier: f64) -> WavePacketSpec {
    WavePacketSpec { center, width: 8.0, carrier }
}

#[test]
fn bond_defect_runs_follow_the_onsite_pattern() {
    let lattice = chain(320);
    let plan = ExperimentPlan::uniform(70.0, 14);
    let p = packet(-60.0, PI / 2.0);
    let exp_run = run_invisibility_experiment(&lattice, &Perturbation::bond_defect(0, 1, 1.0, invisible()).unwrap(), &p, &plan)
        .unwrap();
    let cos_run = run_invisibility_experiment(&lattice, &Perturbation::bond_defect(0, 1, 1.0, bilateral()).unwrap(), &p, &plan)
        .unwrap();
    let zero_run = run_invisibility_experiment(
        &lattice,
        &Perturbation::bond_defect(0, 1, 1.0, Modulation::new(vec![Harmonic::exp(0.0, 5.0)])).unwrap(),
        &p,
        &plan,
    )
    .unwrap();
    assert!(exp_run.verdict_is_valid() && cos_run.verdict_is_valid());
    assert_eq!(exp_run.verdict, Verdict::Invisible, "{:e}", exp_run.final_error());
    assert_eq!(cos_run.verdict, Verdict::Visible, "{:e}", cos_run.final_error());
    assert!(cos_run.final_error() > 100.0 * exp_run.final_error());
    assert!(zero_run.error_series.iter().all(|&e| e == 0.0));
}

#[test]
fn residual_error_shrinks_deeper_inside_the_band() {
    let lattice = chain(400);
    let band = band_info(lattice.kernel()).unwrap();
    let pert = Perturbation::gaussian_onsite(5.0, 2.0, 0, invisible());
    let plan = ExperimentPlan::uniform(70.0, 14);
    // (depth of E(q) below the nearest band edge, final error)
    let mut runs: Vec<(f64, f64)> = [0.3 * PI, 0.5 * PI]
        .iter()
        .map(|&q| {
            let e = band_eval(lattice.kernel(), q).unwrap().energy;
            let depth = (e - band.e_min).min(band.e_max - e);
            (depth, run_invisibility_experiment(&lattice, &pert, &packet(-60.0, q), &plan).unwrap().final_error())
        })
        .collect();
    runs.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(runs[1].1 < runs[0].1, "{runs:?}");
}

#[test]
fn fig1a_convergence_probe_is_monotone() {
    let lattice = chain(512);
    let pert = Perturbation::gaussian_onsite(5.0, 2.0, 0, invisible());
    let psi0 = gaussian_packet(&lattice, &WavePacketSpec { center: -90.0, width: 10.0, carrier: PI / 2.0 }).unwrap();
    let h = LatticeHamiltonian::new(&lattice, Some(&pert)).unwrap();
    let rows = convergence_probe(&h, &psi0.amplitudes, (0.0, 100.0), &[50.0], &IntegratorConfig::default(), &[1e-6, 1e-8, 1e-10])
        .unwrap();
    assert!(is_monotone(&rows), "{rows:?}");
    assert!(rows[0].deviation > rows[1].deviation);
}

fn absorbing(sites: usize, kernel: HoppingKernel) -> Lattice1D {
    Lattice1D::new(sites, -(sites as i64) / 2, kernel, Boundary::Absorbing { width: 30, strength: 1.0 }).unwrap()
}

fn forced(lattice: &Lattice1D, pert: &Perturbation, carrier: f64, t_end: f64) -> ScatteredField {
    let setup = ScatteredFieldSetup {
        carrier,
        t_start: -10.0,
        t_end,
        snapshots: (0..=40).map(|k| -10.0 + (t_end + 10.0) * k as f64 / 40.0).collect(),
        switch_on: Some(SwitchOn { center: 30.0, width: 10.0 }),
        integrator: IntegratorConfig::default(),
    };
    scattered_field(lattice, pert, &setup).unwrap()
}

fn max_outside(field: &ScatteredField, radius: i64) -> (f64, f64) {
    let (mut inside, mut outside): (f64, f64) = (0.0, 0.0);
    for (k, s) in field.fields.iter().enumerate() {
        for i in 0..s.len() {
            let n = field.origin + i as i64;
            let a = field.value(k, n).unwrap().norm();
            if n.abs() <= radius {
                inside = inside.max(a);
            } else {
                outside = outside.max(a);
            }
        }
    }
    (inside, outside)
}

#[test]
fn invisible_forcing_stays_localized() {
    let lattice = absorbing(201, HoppingKernel::symmetric(&[1.0, 0.2]).unwrap());
    let pert = Perturbation::gaussian_onsite(5.0, 2.0, 0, invisible());
    let field = forced(&lattice, &pert, PI / 2.0, 150.0);
    let support = pert.support().iter().map(|n| n.abs()).max().unwrap();
    let (inside, outside) = max_outside(&field, support + 10);
    assert!(outside < 1e-3 * inside, "{outside:e} vs {inside:e}");
    assert!(!field.absorber_saturated);
}

#[test]
fn static_potential_radiates() {
    let lattice = absorbing(201, HoppingKernel::symmetric(&[1.0, 0.2]).unwrap());
    let pert = Perturbation::gaussian_onsite(5.0, 2.0, 0, Modulation::constant(1.0));
    let field = forced(&lattice, &pert, PI / 2.0, 150.0);
    let support = pert.support().iter().map(|n| n.abs()).max().unwrap();
    let (inside, outside) = max_outside(&field, support + 10);
    assert!(outside > 0.1 * inside, "{outside:e} vs {inside:e}");
}

#[test]
fn reconstructed_full_field_obeys_lattice_equations() {
    let lattice = absorbing(161, HoppingKernel::symmetric(&[1.0, 0.2]).unwrap());
    let pert = Perturbation::gaussian_onsite(5.0, 2.0, 0, invisible());
    let field = forced(&lattice, &pert, PI / 2.0, 80.0);
    let r = full_field_residual(&lattice, &pert, &field, Some(SwitchOn { center: 30.0, width: 10.0 })).unwrap();
    assert!(r < 1e-8, "{r:e}");
}

#[test]
fn two_harmonics_decay_no_faster_than_the_slowest() {
    let kernel = HoppingKernel::nearest_neighbor(1.0).unwrap();
    let lattice = absorbing(161, kernel.clone());
    let mut pert = Perturbation::onsite(vec![(0, 1.0.into())], invisible());
    let field = forced(&lattice, &pert, PI / 2.0, 200.0);
    let fit = evanescence_fit(&field, Side::Right, 0, 2, 10).unwrap();
    let slowest = [5.0, 18f64.sqrt()]
        .iter()
        .map(|&w| complex_bloch_roots(&kernel, -w).unwrap().decay_rate_right)
        .fold(f64::INFINITY, f64::min);
    assert!(fit.decay_rate >= 0.95 * slowest, "{} vs {}", fit.decay_rate, slowest);

    pert = pert.with_modulation(Modulation::new(vec![Harmonic::exp(0.0, 5.0)]));
    let silent = forced(&lattice, &pert, PI / 2.0, 200.0);
    assert!(matches!(evanescence_fit(&silent, Side::Left, 0, 2, 10), Err(Error::InsufficientSignal { .. })));
}
