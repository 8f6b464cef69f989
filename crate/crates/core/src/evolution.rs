//! Adaptive Runge–Kutta integration of `dy/dt = f(t, y)` for complex state
//! vectors.
//!
//! The stepper is the Cash–Karp embedded 4(5) pair. The fourth-order
//! solution is propagated and the difference to the fifth-order one drives
//! a PI step-size controller. Snapshot times are hit exactly by shortening
//! the step that would cross them; there is no dense output.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lattice::{
    check_finite, Lattice1D, Lattice2D, LatticeHamiltonian, Perturbation, Perturbation2D,
    SquareLatticeHamiltonian, StateVector1D, StateVector2D, C64,
};

/// A first-order system `dy/dt = f(t, y)`.
pub trait Dynamics {
    fn dimension(&self) -> usize;
    /// Writes `f(t, state)` into `out`; both slices have length
    /// [`Dynamics::dimension`].
    fn derivative(&self, t: f64, state: &[C64], out: &mut [C64]);
}

impl<D: Dynamics + ?Sized> Dynamics for &D {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn derivative(&self, t: f64, state: &[C64], out: &mut [C64]) {
        (**self).derivative(t, state, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub safety: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-9, abs_tol: 1e-12, h_init: 1e-3, h_min: 1e-12, h_max: 1.0, safety: 0.9 }
    }
}

impl IntegratorConfig {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("integrator tolerances must be positive"));
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return Err(Error::InvalidArgument("integrator steps need 0 < h_min <= h_init <= h_max"));
        }
        if !(self.safety > 0.0 && self.safety < 1.0) {
            return Err(Error::InvalidArgument("safety factor must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub smallest_step: f64,
    pub largest_step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &[C64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

// Cash–Karp tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 3.0 / 5.0;
const C5: f64 = 1.0;
const C6: f64 = 7.0 / 8.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 3.0 / 10.0;
const A42: f64 = -9.0 / 10.0;
const A43: f64 = 6.0 / 5.0;
const A51: f64 = -11.0 / 54.0;
const A52: f64 = 5.0 / 2.0;
const A53: f64 = -70.0 / 27.0;
const A54: f64 = 35.0 / 27.0;
const A61: f64 = 1631.0 / 55296.0;
const A62: f64 = 175.0 / 512.0;
const A63: f64 = 575.0 / 13824.0;
const A64: f64 = 44275.0 / 110592.0;
const A65: f64 = 253.0 / 4096.0;
const B5: [f64; 6] = [37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0];
const B4: [f64; 6] =
    [2825.0 / 27648.0, 0.0, 18575.0 / 48384.0, 13525.0 / 55296.0, 277.0 / 14336.0, 1.0 / 4.0];

const ALPHA: f64 = 0.7 / 5.0;
const BETA: f64 = 0.4 / 5.0;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

struct Stepper {
    k: [Vec<C64>; 6],
    tmp: Vec<C64>,
    next: Vec<C64>,
}

impl Stepper {
    fn new(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            k: [z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z.clone(),
            next: z,
        }
    }

    /// One trial step from `(t, y)` with `k[0] = f(t, y)` already filled.
    /// Leaves the fourth-order result in `next` and returns the scaled error.
    fn attempt<D: Dynamics>(&mut self, f: &D, t: f64, y: &[C64], h: f64, cfg: &IntegratorConfig) -> f64 {
        let n = y.len();
        let [k1, k2, k3, k4, k5, k6] = &mut self.k;
        let tmp = &mut self.tmp;
        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (h * A21);
        }
        f.derivative(t + C2 * h, tmp, k2);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
        }
        f.derivative(t + C3 * h, tmp, k3);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
        }
        f.derivative(t + C4 * h, tmp, k4);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
        }
        f.derivative(t + C5 * h, tmp, k5);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
        }
        f.derivative(t + C6 * h, tmp, k6);

        let mut err: f64 = 0.0;
        for i in 0..n {
            let incr = (k1[i] * B4[0] + k3[i] * B4[2] + k4[i] * B4[3] + k5[i] * B4[4] + k6[i] * B4[5]) * h;
            let diff = (k1[i] * (B5[0] - B4[0])
                + k3[i] * (B5[2] - B4[2])
                + k4[i] * (B5[3] - B4[3])
                + k5[i] * (B5[4] - B4[4])
                + k6[i] * (B5[5] - B4[5]))
                * h;
            let yn = y[i] + incr;
            self.next[i] = yn;
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(yn.norm());
            let e = diff.norm() / scale;
            // propagate NaN instead of letting max() swallow it
            err = if e.is_nan() { f64::NAN } else { err.max(e) };
        }
        err
    }
}

/// Integrates from `t_span.0` to `t_span.1`, calling `observer(t, y)` at the
/// start, at every snapshot time and at the end. Returns the final state.
///
/// Snapshot times must lie inside the span; duplicates are visited once.
pub fn evolve_observed<D, F>(
    f: &D,
    y0: &[C64],
    t_span: (f64, f64),
    snapshots: &[f64],
    cfg: &IntegratorConfig,
    mut observer: F,
) -> Result<(Vec<C64>, StepStats)>
where
    D: Dynamics,
    F: FnMut(f64, &[C64]),
{
    cfg.validate()?;
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 >= t0) {
        return Err(Error::InvalidArgument("time span must be finite and increasing"));
    }
    if y0.len() != f.dimension() {
        return Err(Error::ShapeMismatch { expected: f.dimension(), found: y0.len() });
    }
    check_finite(y0, t0)?;
    let targets = snapshot_grid(t_span, snapshots)?;

    let n = y0.len();
    let mut y = y0.to_vec();
    let mut st = Stepper::new(n);
    let mut stats = StepStats { smallest_step: f64::INFINITY, ..StepStats::default() };
    let mut t = t0;
    let mut h = cfg.h_init;
    let mut err_prev: f64 = 1.0;

    observer(t, &y);
    f.derivative(t, &y, &mut st.k[0]);
    stats.evaluations += 1;

    for &target in &targets[1..] {
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            let err = st.attempt(f, t, &y, step, cfg);
            stats.evaluations += 5;
            if err.is_nan() {
                return Err(Error::NonFinite { t });
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                core::mem::swap(&mut y, &mut st.next);
                check_finite(&y, t)?;
                f.derivative(t, &y, &mut st.k[0]);
                stats.evaluations += 1;
                stats.accepted += 1;
                stats.smallest_step = stats.smallest_step.min(step);
                stats.largest_step = stats.largest_step.max(step);
                let e = err.max(1e-10);
                let factor = (cfg.safety * e.powf(-ALPHA) * err_prev.powf(BETA)).clamp(MIN_FACTOR, MAX_FACTOR);
                err_prev = e;
                // a step truncated onto a snapshot does not shrink the proposal
                let base = if last { h.max(step) } else { step };
                h = (base * factor).min(cfg.h_max);
            } else {
                stats.rejected += 1;
                let factor = (cfg.safety * err.powf(-1.0 / 5.0)).clamp(MIN_FACTOR, 1.0);
                h = step * factor;
                if h < cfg.h_min {
                    return Err(Error::StepUnderflow { t, step: h });
                }
            }
        }
        observer(t, &y);
    }
    if stats.accepted == 0 {
        stats.smallest_step = 0.0;
    }
    Ok((y, stats))
}

/// Sorted, deduplicated snapshot times including both ends of the span.
fn snapshot_grid(t_span: (f64, f64), snapshots: &[f64]) -> Result<Vec<f64>> {
    let (t0, t1) = t_span;
    let mut out = Vec::with_capacity(snapshots.len() + 2);
    out.push(t0);
    for &s in snapshots {
        if !(s >= t0 && s <= t1) {
            return Err(Error::OutOfRange { value: s, min: t0, max: t1 });
        }
        out.push(s);
    }
    out.push(t1);
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Integrates and stores the state at the start, at each snapshot and at
/// the end.
pub fn evolve<D: Dynamics>(
    f: &D,
    y0: &[C64],
    t_span: (f64, f64),
    snapshots: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    let (_, stats) = evolve_observed(f, y0, t_span, snapshots, cfg, |t, y| {
        times.push(t);
        states.push(y.to_vec());
    })?;
    Ok(Trajectory { times, states, stats })
}

/// [`evolve`] for a 1D lattice; `perturbation = None` gives the free
/// reference evolution.
pub fn evolve_1d(
    lattice: &Lattice1D,
    perturbation: Option<&Perturbation>,
    psi0: &StateVector1D,
    t_end: f64,
    snapshots: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let h = LatticeHamiltonian::new(lattice, perturbation)?;
    evolve(&h, &psi0.amplitudes, (psi0.time, t_end), snapshots, cfg)
}

pub fn evolve_2d(
    lattice: &Lattice2D,
    perturbation: Option<&Perturbation2D>,
    psi0: &StateVector2D,
    t_end: f64,
    snapshots: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let h = SquareLatticeHamiltonian::new(lattice, perturbation)?;
    evolve(&h, &psi0.amplitudes, (psi0.time, t_end), snapshots, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub rel_tol: f64,
    /// Max over snapshots and components of the deviation from the
    /// tightest-tolerance run.
    pub deviation: f64,
    pub steps: usize,
}

/// Reruns the integration at each relative tolerance and measures the
/// deviation from the run at the smallest tolerance. Rows come back in
/// decreasing tolerance order.
pub fn convergence_probe<D: Dynamics>(
    f: &D,
    y0: &[C64],
    t_span: (f64, f64),
    snapshots: &[f64],
    cfg: &IntegratorConfig,
    tolerances: &[f64],
) -> Result<Vec<ProbeRow>> {
    if tolerances.is_empty() {
        return Err(Error::InvalidArgument("no tolerances given"));
    }
    let mut tols = tolerances.to_vec();
    tols.sort_by(|a, b| b.total_cmp(a));
    tols.dedup();
    let runs = tols
        .iter()
        .map(|&tol| evolve(f, y0, t_span, snapshots, &cfg.with_rel_tol(tol)))
        .collect::<Result<Vec<_>>>()?;
    let reference = runs.last().unwrap();
    Ok(tols
        .iter()
        .zip(&runs)
        .map(|(&rel_tol, run)| {
            let deviation = run
                .states
                .iter()
                .zip(&reference.states)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
                .fold(0.0, f64::max);
            ProbeRow { rel_tol, deviation, steps: run.stats.accepted }
        })
        .collect())
}

/// True when deviations do not increase as the tolerance tightens.
pub fn is_monotone(rows: &[ProbeRow]) -> bool {
    rows.windows(2).all(|w| w[1].deviation <= w[0].deviation)
}
