//! Discrete-time quantum walk of light in two coupled fiber loops.
//!
//! One step maps `(u, v)` to
//!
//! ```text
//! u'_n = [cos β u_{n+1} + i sin β v_{n+1}] exp(−2i V_n^{(m)})
//! v'_n =  cos β v_{n−1} + i sin β u_{n−1}
//! ```
//!
//! with hard walls at the ends of the site range. The quasienergy bands are
//! `E_± = ±acos(cos β cos q)`; for `ρ = π/2 − β ≪ 1` they flatten to
//! `±(π/2 − ρ cos q)`, and the walk is described by two tight-binding
//! lattices with hopping `κ = ρ/2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::evolution::{evolve_observed, Dynamics, IntegratorConfig};
use crate::lattice::{Modulation, C64, I};

#[derive(Debug, Clone, PartialEq)]
pub struct QWalkConfig {
    pub beta: f64,
    pub sites: usize,
    pub origin: i64,
    /// Spatial factor of `V_n^{(m)} = R_m · profile_n`.
    pub profile: Vec<(i64, C64)>,
    pub modulation: Modulation,
}

impl QWalkConfig {
    pub fn new(beta: f64, sites: usize, origin: i64, profile: Vec<(i64, C64)>, modulation: Modulation) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidArgument("coupling angle must be finite"));
        }
        if sites < 2 {
            return Err(Error::InvalidLattice("walk needs at least two sites"));
        }
        for &(n, _) in &profile {
            if n < origin || n >= origin + sites as i64 {
                return Err(Error::SupportViolation { site: n });
            }
        }
        Ok(Self { beta, sites, origin, profile, modulation })
    }

    /// `ρ = π/2 − β`
    pub fn rho(&self) -> f64 {
        FRAC_PI_2 - self.beta
    }

    pub fn index_of(&self, site: i64) -> Option<usize> {
        let i = site - self.origin;
        (i >= 0 && (i as usize) < self.sites).then_some(i as usize)
    }

    pub fn label(&self, index: usize) -> i64 {
        self.origin + index as i64
    }

    fn dense_profile(&self) -> Vec<C64> {
        let mut p = vec![C64::new(0.0, 0.0); self.sites];
        for &(n, v) in &self.profile {
            p[(n - self.origin) as usize] += v;
        }
        p
    }

    /// Same walk without the potential.
    pub fn free(&self) -> Self {
        Self { profile: Vec::new(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QWalkState {
    pub step: usize,
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

impl QWalkState {
    pub fn new(u: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::ShapeMismatch { expected: u.len(), found: v.len() });
        }
        crate::lattice::check_finite(&u, 0.0)?;
        crate::lattice::check_finite(&v, 0.0)?;
        Ok(Self { step: 0, u, v })
    }

    /// `u = δ_{n,site}`, `v = 0`.
    pub fn single_site(cfg: &QWalkConfig, site: i64) -> Result<Self> {
        let i = cfg.index_of(site).ok_or(Error::SupportViolation { site })?;
        let mut u = vec![C64::new(0.0, 0.0); cfg.sites];
        u[i] = C64::new(1.0, 0.0);
        Self::new(u, vec![C64::new(0.0, 0.0); cfg.sites])
    }

    /// `|u_n|² + |v_n|²`
    pub fn intensity(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }

    pub fn total_intensity(&self) -> f64 {
        self.intensity().iter().sum()
    }
}

struct Stepper {
    c: f64,
    s: f64,
    profile: Vec<C64>,
}

impl Stepper {
    fn new(cfg: &QWalkConfig) -> Self {
        Self { c: cfg.beta.cos(), s: cfg.beta.sin(), profile: cfg.dense_profile() }
    }

    fn step(&self, cfg: &QWalkConfig, st: &QWalkState) -> QWalkState {
        let n = st.u.len();
        let mut u = vec![C64::new(0.0, 0.0); n];
        let mut v = vec![C64::new(0.0, 0.0); n];
        let r = cfg.modulation.value(st.step as f64);
        for i in 0..n - 1 {
            u[i] = st.u[i + 1] * self.c + I * self.s * st.v[i + 1];
        }
        for i in 1..n {
            v[i] = st.v[i - 1] * self.c + I * self.s * st.u[i - 1];
        }
        if r != C64::new(0.0, 0.0) {
            for (ui, &p) in u.iter_mut().zip(&self.profile) {
                if p != C64::new(0.0, 0.0) {
                    *ui *= (-2.0 * I * r * p).exp();
                }
            }
        }
        QWalkState { step: st.step + 1, u, v }
    }
}

/// One step of the walk, from step `m` to `m + 1`.
pub fn qwalk_step(state: &QWalkState, cfg: &QWalkConfig) -> Result<QWalkState> {
    if state.u.len() != cfg.sites {
        return Err(Error::ShapeMismatch { expected: cfg.sites, found: state.u.len() });
    }
    Ok(Stepper::new(cfg).step(cfg, state))
}

/// States for `m = 0..=steps`.
pub fn run(cfg: &QWalkConfig, initial: &QWalkState, steps: usize) -> Result<Vec<QWalkState>> {
    if initial.u.len() != cfg.sites {
        return Err(Error::ShapeMismatch { expected: cfg.sites, found: initial.u.len() });
    }
    let stepper = Stepper::new(cfg);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial.clone());
    for _ in 0..steps {
        let next = stepper.step(cfg, out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

/// `I_n^{(m)} = |u − ũ|² + |v − ṽ|²` for every step and site.
pub fn qwalk_error(with: &[QWalkState], without: &[QWalkState]) -> Result<Vec<Vec<f64>>> {
    if with.len() != without.len() {
        return Err(Error::ShapeMismatch { expected: with.len(), found: without.len() });
    }
    with.iter()
        .zip(without)
        .map(|(a, b)| {
            if a.u.len() != b.u.len() {
                return Err(Error::ShapeMismatch { expected: a.u.len(), found: b.u.len() });
            }
            Ok(a.u
                .iter()
                .zip(&b.u)
                .zip(a.v.iter().zip(&b.v))
                .map(|((x, y), (p, q))| (x - y).norm_sqr() + (p - q).norm_sqr())
                .collect())
        })
        .collect()
}

/// Max of an error field over sites with `|n − center| > radius`.
pub fn far_field_max(errors: &[Vec<f64>], cfg: &QWalkConfig, center: i64, radius: i64) -> f64 {
    errors
        .iter()
        .flat_map(|row| {
            row.iter().enumerate().filter(move |(i, _)| (cfg.label(*i) - center).abs() > radius).map(|(_, &e)| e)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quasienergy {
    pub plus: f64,
    pub minus: f64,
    /// `π/2 − ρ cos q`
    pub plus_approx: f64,
    pub minus_approx: f64,
}

pub fn quasienergy(beta: f64, q: f64) -> Quasienergy {
    let plus = (beta.cos() * q.cos()).clamp(-1.0, 1.0).acos();
    let rho = FRAC_PI_2 - beta;
    let plus_approx = FRAC_PI_2 - rho * q.cos();
    Quasienergy { plus, minus: -plus, plus_approx, minus_approx: -plus_approx }
}

/// Width `2ρ` of each flattened quasienergy band (`4κ` with `κ = ρ/2`).
pub fn effective_bandwidth(beta: f64) -> f64 {
    2.0 * (FRAC_PI_2 - beta)
}

/// The two decoupled lattices `i dψ±/dt = ±κ(ψ±_{n+1} + ψ±_{n−1}) + V_n(t)ψ±`,
/// stacked as `[ψ+, ψ−]`.
struct ContinuumPair {
    kappa: f64,
    profile: Vec<C64>,
    modulation: Modulation,
}

impl Dynamics for ContinuumPair {
    fn dimension(&self) -> usize {
        2 * self.profile.len()
    }

    fn derivative(&self, t: f64, y: &[C64], out: &mut [C64]) {
        let n = self.profile.len();
        let r = self.modulation.value(t);
        for (half, sign) in [(0usize, 1.0), (1, -1.0)] {
            let psi = &y[half * n..(half + 1) * n];
            let o = &mut out[half * n..(half + 1) * n];
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                if i > 0 {
                    s += psi[i - 1];
                }
                if i + 1 < n {
                    s += psi[i + 1];
                }
                o[i] = -I * (s * (sign * self.kappa) + r * self.profile[i] * psi[i]);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumReport {
    pub rho: f64,
    /// `max_n |u_rec − u|` per step `m = 0..=m_max`.
    pub per_step: Vec<f64>,
    pub max_discrepancy: f64,
}

/// Compares the exact walk with the continuous-time description over
/// `m_max` steps.
///
/// The two lattices start from `ψ± = (u⁰ ± D)/2` with
/// `D = −i[u¹_free − κ(u⁰_{n+1} + u⁰_{n−1})]`, where `u¹_free` is the first
/// free step of the walk. This matches both `u⁰` and the first step of the
/// walk to first order in `ρ`; `u` is then rebuilt as
/// `u^{(m)} = i^m (ψ+ + (−1)^m ψ−)`.
pub fn continuous_limit_check(
    cfg: &QWalkConfig,
    initial: &QWalkState,
    m_max: usize,
    integrator: &IntegratorConfig,
) -> Result<ContinuumReport> {
    let exact = run(cfg, initial, m_max)?;
    let n = cfg.sites;
    let kappa = cfg.rho() / 2.0;
    let (c, s) = (cfg.beta.cos(), cfg.beta.sin());
    let u0 = &initial.u;
    let v0 = &initial.v;
    let mut y0 = vec![C64::new(0.0, 0.0); 2 * n];
    for i in 0..n {
        let u1 = if i + 1 < n { u0[i + 1] * c + I * s * v0[i + 1] } else { C64::new(0.0, 0.0) };
        let mut nb = C64::new(0.0, 0.0);
        if i > 0 {
            nb += u0[i - 1];
        }
        if i + 1 < n {
            nb += u0[i + 1];
        }
        let d = -I * (u1 - nb * kappa);
        y0[i] = (u0[i] + d) * 0.5;
        y0[n + i] = (u0[i] - d) * 0.5;
    }
    let pair = ContinuumPair { kappa, profile: cfg.dense_profile(), modulation: cfg.modulation.clone() };
    let times: Vec<f64> = (0..=m_max).map(|m| m as f64).collect();
    let mut per_step = Vec::with_capacity(m_max + 1);
    let mut m = 0usize;
    evolve_observed(&pair, &y0, (0.0, m_max as f64), &times, integrator, |_, y| {
        let phase = I.powi(m as i32);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let d = (0..n)
            .map(|i| (phase * (y[i] + y[n + i] * sign) - exact[m].u[i]).norm())
            .fold(0.0, f64::max);
        per_step.push(d);
        m += 1;
    })?;
    let max_discrepancy = per_step.iter().copied().fold(0.0, f64::max);
    Ok(ContinuumReport { rho: cfg.rho(), per_step, max_discrepancy })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport {
    pub coarse: ContinuumReport,
    pub fine: ContinuumReport,
    /// `coarse.max_discrepancy / fine.max_discrepancy`; about 4 for a
    /// second-order limit.
    pub ratio: f64,
}

/// Runs [`continuous_limit_check`] at `ρ` and at `ρ/2`. The potential
/// amplitudes and modulation frequencies are halved with `ρ`, keeping the
/// potential `O(ρ)` and on the same slow time scale.
pub fn continuum_order(
    cfg: &QWalkConfig,
    initial: &QWalkState,
    m_max: usize,
    integrator: &IntegratorConfig,
) -> Result<OrderReport> {
    let coarse = continuous_limit_check(cfg, initial, m_max, integrator)?;
    let halved = QWalkConfig {
        beta: FRAC_PI_2 - cfg.rho() / 2.0,
        modulation: cfg.modulation.rescaled(0.5, 0.5),
        ..cfg.clone()
    };
    let fine = continuous_limit_check(&halved, initial, m_max, integrator)?;
    let ratio = coarse.max_discrepancy / fine.max_discrepancy;
    Ok(OrderReport { coarse, fine, ratio })
}
