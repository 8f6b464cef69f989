//! Scattering experiments.
//!
//! Two pictures are supported:
//!
//! - wave-packet runs, where the same initial packet is evolved with and
//!   without the perturbation and the difference `I(t) = max_n |ψ_n − ψ̃_n|`
//!   measures how visible the perturbation is;
//! - the forced scattered-field problem for an incident Bloch wave
//!   `ψ_n = e^{iqn − iEt} + φ_n e^{−iEt}`, with
//!   `i dφ_n/dt = −Eφ_n + Σ_l (V_{n,l}(t) − κ_{n−l})φ_l + Σ_l V_{n,l}(t) e^{iql}`
//!   and `φ(−t₀) = 0`, integrated on a lattice with absorbing layers.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::dispersion::{band_eval, BandInfo};
use crate::error::{Error, Result};
use crate::evolution::{evolve, Dynamics, IntegratorConfig, Trajectory};
use crate::lattice::{
    Boundary, Lattice1D, Lattice2D, LatticeHamiltonian, Modulation, Perturbation, Perturbation2D,
    SquareLatticeHamiltonian, StateVector1D, StateVector2D, C64, I,
};

/// Gaussian packet `exp[−((n − n₀)/w)² + iqn]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacketSpec {
    pub center: f64,
    pub width: f64,
    pub carrier: f64,
}

/// Unit-norm Gaussian packet on a square lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket2D {
    pub center: (f64, f64),
    pub width: f64,
    pub carrier: (f64, f64),
}

pub fn gaussian_packet(lattice: &Lattice1D, spec: &WavePacketSpec) -> Result<StateVector1D> {
    if !(spec.width > 0.0 && spec.width.is_finite()) {
        return Err(Error::InvalidArgument("packet width must be positive"));
    }
    let (a, b) = lattice.interior();
    for edge in [spec.center - 5.0 * spec.width, spec.center + 5.0 * spec.width] {
        if edge < a as f64 || edge > b as f64 {
            return Err(Error::SupportViolation { site: edge.round() as i64 });
        }
    }
    let amps = lattice
        .labels()
        .map(|n| {
            let x = (n as f64 - spec.center) / spec.width;
            C64::from_polar((-x * x).exp(), spec.carrier * n as f64)
        })
        .collect();
    StateVector1D::new(0.0, amps)
}

pub fn gaussian_packet_2d(lattice: &Lattice2D, spec: &WavePacket2D) -> Result<StateVector2D> {
    if !(spec.width > 0.0 && spec.width.is_finite()) {
        return Err(Error::InvalidArgument("packet width must be positive"));
    }
    let mut amps: Vec<C64> = (0..lattice.len())
        .map(|i| {
            let (n, m) = lattice.label(i);
            let x = (n as f64 - spec.center.0) / spec.width;
            let y = (m as f64 - spec.center.1) / spec.width;
            C64::from_polar((-x * x - y * y).exp(), spec.carrier.0 * n as f64 + spec.carrier.1 * m as f64)
        })
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("packet has no weight on the lattice"));
    }
    for z in amps.iter_mut() {
        *z /= norm;
    }
    StateVector2D::new(0.0, lattice, amps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictRule {
    /// Invisible iff `I(t_end) < threshold · max_n |ψ̃_n(t_end)|`.
    RelativeToReference,
    /// Invisible iff `I(t_end) < threshold · max_t I(t)`.
    DecayFromPeak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Invisible,
    Visible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub t_end: f64,
    /// Times at which states and `I(t)` are recorded, besides 0 and `t_end`.
    pub snapshots: Vec<f64>,
    pub threshold: f64,
    pub rule: VerdictRule,
    /// Maximal allowed `|ψ₀|` on the perturbation support; `None` only
    /// reports the overlap.
    pub overlap_limit: Option<f64>,
    pub integrator: IntegratorConfig,
}

impl ExperimentPlan {
    pub fn new(t_end: f64, snapshots: Vec<f64>) -> Self {
        Self {
            t_end,
            snapshots,
            threshold: 1e-2,
            rule: VerdictRule::RelativeToReference,
            overlap_limit: Some(1e-10),
            integrator: IntegratorConfig::default(),
        }
    }

    /// Snapshots at `k·t_end/count`, `k = 1..count`.
    pub fn uniform(t_end: f64, count: usize) -> Self {
        let count = count.max(1);
        Self::new(t_end, (1..=count).map(|k| t_end * k as f64 / count as f64).collect())
    }
}

/// Edge-site amplitudes relative to the maximum amplitude, monitored at
/// every recorded time of both runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeReport {
    pub limit: f64,
    pub worst_ratio: f64,
    pub first_trip: Option<f64>,
}

impl EdgeReport {
    pub const DEFAULT_LIMIT: f64 = 1e-6;

    pub fn tripped(&self) -> bool {
        self.first_trip.is_some()
    }

    fn new(limit: f64) -> Self {
        Self { limit, worst_ratio: 0.0, first_trip: None }
    }

    fn observe(&mut self, t: f64, state: &[C64], edge: &[usize]) {
        let max = state.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return;
        }
        let e = edge.iter().map(|&i| state[i].norm()).fold(0.0, f64::max);
        let r = e / max;
        self.worst_ratio = self.worst_ratio.max(r);
        if r > self.limit && self.first_trip.is_none_or(|t0| t < t0) {
            self.first_trip = Some(t);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub perturbed: Trajectory,
    pub reference: Trajectory,
    /// `I(t)` at each recorded time.
    pub error_series: Vec<f64>,
    pub final_profile: Vec<f64>,
    pub final_reference_profile: Vec<f64>,
    pub verdict: Verdict,
    pub rule: VerdictRule,
    pub threshold: f64,
    pub edge: EdgeReport,
    /// `max |ψ₀|` over the perturbation support.
    pub initial_overlap: f64,
}

impl ExperimentResult {
    pub fn times(&self) -> &[f64] {
        &self.perturbed.times
    }

    /// An edge trip means the truncated lattice no longer represents the
    /// infinite one and the verdict cannot be trusted.
    pub fn verdict_is_valid(&self) -> bool {
        !self.edge.tripped()
    }

    pub fn final_error(&self) -> f64 {
        self.error_series.last().copied().unwrap_or(0.0)
    }

    pub fn peak_error(&self) -> f64 {
        self.error_series.iter().copied().fold(0.0, f64::max)
    }
}

pub fn max_abs_difference(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn run_pair<P: Dynamics, F: Dynamics>(
    perturbed: &P,
    free: &F,
    psi0: &[C64],
    plan: &ExperimentPlan,
    edge: &[usize],
    initial_overlap: f64,
) -> Result<ExperimentResult> {
    if !(plan.threshold > 0.0) {
        return Err(Error::InvalidArgument("verdict threshold must be positive"));
    }
    if let Some(limit) = plan.overlap_limit {
        if initial_overlap >= limit {
            return Err(Error::PacketOverlap { amplitude: initial_overlap });
        }
    }
    let span = (0.0, plan.t_end);
    let pert = evolve(perturbed, psi0, span, &plan.snapshots, &plan.integrator)?;
    let refr = evolve(free, psi0, span, &plan.snapshots, &plan.integrator)?;
    let error_series: Vec<f64> = pert.states.iter().zip(&refr.states).map(|(a, b)| max_abs_difference(a, b)).collect();
    let mut report = EdgeReport::new(EdgeReport::DEFAULT_LIMIT);
    for tr in [&pert, &refr] {
        for (t, s) in tr.times.iter().zip(&tr.states) {
            report.observe(*t, s, edge);
        }
    }
    let final_profile: Vec<f64> = pert.final_state().iter().map(|z| z.norm()).collect();
    let final_reference_profile: Vec<f64> = refr.final_state().iter().map(|z| z.norm()).collect();
    let last = *error_series.last().unwrap();
    let scale = match plan.rule {
        VerdictRule::RelativeToReference => final_reference_profile.iter().copied().fold(0.0, f64::max),
        VerdictRule::DecayFromPeak => error_series.iter().copied().fold(0.0, f64::max),
    };
    let verdict = if last == 0.0 || last < plan.threshold * scale { Verdict::Invisible } else { Verdict::Visible };
    Ok(ExperimentResult {
        perturbed: pert,
        reference: refr,
        error_series,
        final_profile,
        final_reference_profile,
        verdict,
        rule: plan.rule,
        threshold: plan.threshold,
        edge: report,
        initial_overlap,
    })
}

/// Indices of the outermost `L` sites on each side.
pub fn edge_sites_1d(lattice: &Lattice1D) -> Vec<usize> {
    let l = lattice.kernel().range();
    let n = lattice.sites();
    (0..l).chain(n - l..n).collect()
}

pub fn edge_sites_2d(lattice: &Lattice2D) -> Vec<usize> {
    (0..lattice.len()).filter(|&i| lattice.is_edge(i)).collect()
}

/// Evolves the packet with and without the perturbation and compares.
pub fn run_invisibility_experiment(
    lattice: &Lattice1D,
    perturbation: &Perturbation,
    packet: &WavePacketSpec,
    plan: &ExperimentPlan,
) -> Result<ExperimentResult> {
    let psi0 = gaussian_packet(lattice, packet)?;
    let with = LatticeHamiltonian::new(lattice, Some(perturbation))?;
    let without = LatticeHamiltonian::new(lattice, None)?;
    let overlap = perturbation
        .support()
        .iter()
        .map(|&s| psi0.amplitudes[lattice.index_of(s).unwrap()].norm())
        .fold(0.0, f64::max);
    run_pair(&with, &without, &psi0.amplitudes, plan, &edge_sites_1d(lattice), overlap)
}

pub fn run_invisibility_experiment_2d(
    lattice: &Lattice2D,
    perturbation: &Perturbation2D,
    packet: &WavePacket2D,
    plan: &ExperimentPlan,
) -> Result<ExperimentResult> {
    let psi0 = gaussian_packet_2d(lattice, packet)?;
    let with = SquareLatticeHamiltonian::new(lattice, Some(perturbation))?;
    let without = SquareLatticeHamiltonian::new(lattice, None)?;
    let overlap = perturbation
        .profile()
        .iter()
        .filter(|p| p.1 != C64::new(0.0, 0.0))
        .map(|&(s, _)| psi0.amplitudes[lattice.index_of(s).unwrap()].norm())
        .fold(0.0, f64::max);
    run_pair(&with, &without, &psi0.amplitudes, plan, &edge_sites_2d(lattice), overlap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    GuaranteedInvisible,
    NotGuaranteed,
}

/// Sufficient condition for invisibility: the spectrum of `R(t)` lies
/// entirely above `Δ` or entirely below `−Δ`. An empty spectrum (zero
/// perturbation) is trivially invisible.
pub fn invisibility_predicate(modulation: &Modulation, band: &BandInfo) -> Guarantee {
    let support = modulation.spectral_support();
    match (support.first(), support.last()) {
        (None, _) | (_, None) => Guarantee::GuaranteedInvisible,
        (Some(&lo), Some(&hi)) if lo > band.width || hi < -band.width => Guarantee::GuaranteedInvisible,
        _ => Guarantee::NotGuaranteed,
    }
}

/// Smooth turn-on `s(t) = ½[1 + erf((t − center)/width)]` multiplying the
/// perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchOn {
    pub center: f64,
    pub width: f64,
}

impl SwitchOn {
    pub fn value(&self, t: f64) -> f64 {
        0.5 * (1.0 + libm::erf((t - self.center) / self.width))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteredFieldSetup {
    pub carrier: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub snapshots: Vec<f64>,
    pub switch_on: Option<SwitchOn>,
    pub integrator: IntegratorConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteredField {
    pub carrier: f64,
    pub energy: f64,
    pub origin: i64,
    pub times: Vec<f64>,
    pub fields: Vec<Vec<C64>>,
    /// `max_t |φ|` on the innermost absorbing sites over `max_{t,n} |φ|`.
    pub absorber_ratio: f64,
    pub absorber_saturated: bool,
    pub t_start: f64,
    pub t_end: f64,
}

impl ScatteredField {
    pub fn site_series(&self, site: i64) -> Option<Vec<C64>> {
        let i = usize::try_from(site - self.origin).ok()?;
        self.fields.first().filter(|f| i < f.len())?;
        Some(self.fields.iter().map(|f| f[i]).collect())
    }

    pub fn value(&self, snapshot: usize, site: i64) -> Option<C64> {
        let i = usize::try_from(site - self.origin).ok()?;
        self.fields.get(snapshot)?.get(i).copied()
    }
}

const TAPER_SITES: usize = 5;

/// Forcing window: zero inside the absorbers, a tanh ramp over the first
/// five interior sites, one beyond.
fn forcing_taper(lattice: &Lattice1D, index: usize) -> f64 {
    let w = lattice.absorber_width();
    if w == 0 {
        return 1.0;
    }
    let d = index.min(lattice.sites() - 1 - index);
    if d < w {
        return 0.0;
    }
    let d = d - w;
    if d >= TAPER_SITES {
        1.0
    } else {
        0.5 * (1.0 + ((d as f64 - 2.5) / 1.25).tanh())
    }
}

/// Right-hand side of the scattered-field equations.
pub struct ScatteredFieldDynamics<'a> {
    hamiltonian: LatticeHamiltonian<'a>,
    energy: f64,
    // Σ_l T_{n,l} e^{iql}, tapered
    forcing: Vec<C64>,
    switch_on: Option<SwitchOn>,
}

impl<'a> ScatteredFieldDynamics<'a> {
    pub fn new(
        lattice: &'a Lattice1D,
        perturbation: &Perturbation,
        carrier: f64,
        switch_on: Option<SwitchOn>,
    ) -> Result<Self> {
        let energy = band_eval(lattice.kernel(), carrier)?.energy;
        let hamiltonian = LatticeHamiltonian::new(lattice, Some(perturbation))?;
        let mut forcing = vec![C64::new(0.0, 0.0); lattice.sites()];
        for &(n, m, v) in hamiltonian.perturbation().unwrap().entries() {
            forcing[n] += v * C64::from_polar(1.0, carrier * lattice.label(m) as f64);
        }
        for (i, f) in forcing.iter_mut().enumerate() {
            *f *= forcing_taper(lattice, i);
        }
        Ok(Self { hamiltonian, energy, forcing, switch_on })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    fn envelope(&self, t: f64) -> f64 {
        self.switch_on.map_or(1.0, |s| s.value(t))
    }

    fn modulation_value(&self, t: f64) -> C64 {
        self.hamiltonian.perturbation().unwrap().modulation().value(t) * self.envelope(t)
    }
}

impl Dynamics for ScatteredFieldDynamics<'_> {
    fn dimension(&self) -> usize {
        self.forcing.len()
    }

    fn derivative(&self, t: f64, phi: &[C64], out: &mut [C64]) {
        self.hamiltonian.apply(t, self.envelope(t), phi, out);
        let r = self.modulation_value(t);
        for i in 0..phi.len() {
            out[i] = -I * (out[i] - self.energy * phi[i] + r * self.forcing[i]);
        }
    }
}

/// Integrates the scattered field from `φ(t_start) = 0`.
pub fn scattered_field(
    lattice: &Lattice1D,
    perturbation: &Perturbation,
    setup: &ScatteredFieldSetup,
) -> Result<ScatteredField> {
    if !matches!(lattice.boundary(), Boundary::Absorbing { .. }) {
        return Err(Error::InvalidLattice("scattered-field runs need absorbing boundaries"));
    }
    let dynamics = ScatteredFieldDynamics::new(lattice, perturbation, setup.carrier, setup.switch_on)?;
    let zero = vec![C64::new(0.0, 0.0); lattice.sites()];
    let tr = evolve(&dynamics, &zero, (setup.t_start, setup.t_end), &setup.snapshots, &setup.integrator)?;
    let w = lattice.absorber_width();
    let inner = [w - 1, lattice.sites() - w];
    let mut overall: f64 = 0.0;
    let mut at_edge: f64 = 0.0;
    for s in &tr.states {
        overall = overall.max(s.iter().map(|z| z.norm()).fold(0.0, f64::max));
        at_edge = at_edge.max(inner.iter().map(|&i| s[i].norm()).fold(0.0, f64::max));
    }
    let absorber_ratio = if overall > 0.0 { at_edge / overall } else { 0.0 };
    Ok(ScatteredField {
        carrier: setup.carrier,
        energy: dynamics.energy(),
        origin: lattice.origin(),
        times: tr.times,
        fields: tr.states,
        absorber_ratio,
        absorber_saturated: absorber_ratio > 0.1,
        t_start: setup.t_start,
        t_end: setup.t_end,
    })
}

/// Max over recorded times of the equation-of-motion residual of the
/// reconstructed full field `ψ = e^{iqn−iEt} + φ e^{−iEt}` on sites at
/// least `L` away from the absorbing layers. The time derivative of `φ`
/// comes from the scattered-field equations, the one of `ψ` from the
/// lattice equations; both must agree identically.
pub fn full_field_residual(
    lattice: &Lattice1D,
    perturbation: &Perturbation,
    field: &ScatteredField,
    switch_on: Option<SwitchOn>,
) -> Result<f64> {
    let dynamics = ScatteredFieldDynamics::new(lattice, perturbation, field.carrier, switch_on)?;
    let free = Lattice1D::new(lattice.sites(), lattice.origin(), lattice.kernel().clone(), Boundary::HardWall)?;
    let full = LatticeHamiltonian::new(&free, Some(perturbation))?;
    let e = field.energy;
    let n = lattice.sites();
    let pad = lattice.absorber_width() + 2 * lattice.kernel().range() + TAPER_SITES;
    let mut dphi = vec![C64::new(0.0, 0.0); n];
    let mut hpsi = vec![C64::new(0.0, 0.0); n];
    let mut worst: f64 = 0.0;
    for (t, phi) in field.times.iter().zip(&field.fields) {
        let t = *t;
        dynamics.derivative(t, phi, &mut dphi);
        let rot = C64::from_polar(1.0, -e * t);
        let psi: Vec<C64> = (0..n)
            .map(|i| (C64::from_polar(1.0, field.carrier * lattice.label(i) as f64) + phi[i]) * rot)
            .collect();
        full.apply(t, dynamics.envelope(t), &psi, &mut hpsi);
        for i in pad..n - pad {
            let plane = C64::from_polar(1.0, field.carrier * lattice.label(i) as f64);
            // d/dt of the reconstruction
            let lhs = (-I * e * (plane + phi[i]) + dphi[i]) * rot;
            worst = worst.max((lhs - (-I) * hpsi[i]).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescenceFit {
    pub decay_rate: f64,
    /// Fitted `|φ|` extrapolated to the center site.
    pub amplitude: f64,
    pub sites: usize,
}

/// Least-squares fit of `ln ⟨|φ_n|⟩` against `n` over sites
/// `center ± [near, far]` on the requested side. `⟨·⟩` averages the
/// snapshots inside the middle half of the run.
pub fn evanescence_fit(field: &ScatteredField, side: Side, center: i64, near: i64, far: i64) -> Result<EvanescenceFit> {
    if !(near >= 0 && far > near) {
        return Err(Error::InvalidArgument("fit window needs 0 <= near < far"));
    }
    let span = field.t_end - field.t_start;
    let (lo, hi) = (field.t_start + 0.25 * span, field.t_start + 0.75 * span);
    let picked: Vec<usize> = (0..field.times.len()).filter(|&k| field.times[k] >= lo && field.times[k] <= hi).collect();
    if picked.is_empty() {
        return Err(Error::InvalidArgument("no snapshots inside the averaging interval"));
    }
    let sign = if side == Side::Right { 1 } else { -1 };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for d in near..=far {
        let site = center + sign * d;
        let mut mean = 0.0;
        for &k in &picked {
            mean += field.value(k, site).ok_or(Error::SupportViolation { site })?.norm();
        }
        mean /= picked.len() as f64;
        if !(mean >= 1e-13) {
            return Err(Error::InsufficientSignal { site, amplitude: mean });
        }
        xs.push(d as f64);
        ys.push(mean.ln());
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(EvanescenceFit { decay_rate: -slope, amplitude: (my - slope * mx).exp(), sites: xs.len() })
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use crate::dispersion::band_info;
    use crate::lattice::{Harmonic, HoppingKernel};
    use core::f64::consts::PI;

    #[test]
    fn packet_shape() {
        let lat = Lattice1D::new(512, -256, HoppingKernel::symmetric(&[1.0, 0.2]).unwrap(), Boundary::HardWall).unwrap();
        let p = gaussian_packet(&lat, &WavePacketSpec { center: -90.0, width: 10.0, carrier: PI / 2.0 }).unwrap();
        let at = |n: i64| p.amplitudes[lat.index_of(n).unwrap()];
        assert!((at(-90).norm() - 1.0).abs() < 1e-15);
        assert!((at(-80).norm() - (-1f64).exp()).abs() < 1e-15);
        let s = gaussian_packet(&lat, &WavePacketSpec { center: 0.0, width: 4.0, carrier: 0.0 }).unwrap();
        for n in 1..30 {
            assert_eq!(s.amplitudes[lat.index_of(n).unwrap()], s.amplitudes[lat.index_of(-n).unwrap()]);
            assert_eq!(s.amplitudes[lat.index_of(n).unwrap()].im, 0.0);
        }
        assert!(gaussian_packet(&lat, &WavePacketSpec { center: -240.0, width: 10.0, carrier: 0.0 }).is_err());
    }

    #[test]
    fn packet_2d_matches_formula() {
        let lat = Lattice2D::new(42, 42, (-20, -20), 1.0).unwrap();
        let spec = WavePacket2D { center: (-7.0, -7.0), width: 3.0, carrier: (PI / 2.0, PI / 2.0) };
        let p = gaussian_packet_2d(&lat, &spec).unwrap();
        let norm: f64 = p.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        let c = p.amplitudes[lat.index_of((-7, -7)).unwrap()];
        let z = p.amplitudes[lat.index_of((-5, -8)).unwrap()];
        let expected = C64::from_polar((-(4.0 + 1.0) / 9.0f64).exp(), PI * (-13.0) / 2.0);
        let scale = c.norm() / C64::from_polar(1.0, 0.0).norm();
        assert!((z - expected * scale).norm() < 1e-14);
    }

    #[test]
    fn predicate_cases() {
        let band = band_info(&HoppingKernel::symmetric(&[1.0, 0.2]).unwrap()).unwrap();
        let exp = Modulation::new(vec![Harmonic::exp(1.0, 5.0), Harmonic::exp(1.0, 18f64.sqrt())]);
        assert_eq!(invisibility_predicate(&exp, &band), Guarantee::GuaranteedInvisible);
        let cos = Modulation::new(vec![Harmonic::cos(1.0, 5.0), Harmonic::cos(1.0, 18f64.sqrt())]);
        assert_eq!(invisibility_predicate(&cos, &band), Guarantee::NotGuaranteed);
        let low = Modulation::new(vec![Harmonic::exp(1.0, 3.9)]);
        assert_eq!(invisibility_predicate(&low, &band), Guarantee::NotGuaranteed);
        let neg = Modulation::new(vec![Harmonic::exp(1.0, -4.5)]);
        assert_eq!(invisibility_predicate(&neg, &band), Guarantee::GuaranteedInvisible);
        assert_eq!(invisibility_predicate(&Modulation::default(), &band), Guarantee::GuaranteedInvisible);
    }

    #[test]
    fn zero_amplitude_gives_identical_runs() {
        let lat = Lattice1D::new(200, -100, HoppingKernel::nearest_neighbor(1.0).unwrap(), Boundary::HardWall).unwrap();
        let m = Modulation::new(vec![Harmonic::exp(0.0, 5.0), Harmonic::exp(0.0, 18f64.sqrt())]);
        let p = Perturbation::gaussian_onsite(5.0, 2.0, 0, m);
        let r = run_invisibility_experiment(
            &lat,
            &p,
            &WavePacketSpec { center: -40.0, width: 5.0, carrier: PI / 2.0 },
            &ExperimentPlan::uniform(10.0, 5),
        )
        .unwrap();
        assert!(r.error_series.iter().all(|&e| e == 0.0));
        assert_eq!(r.verdict, Verdict::Invisible);
        assert_eq!(r.times().len(), 6);
    }

    #[test]
    fn overlapping_packet_rejected() {
        let lat = Lattice1D::new(200, -100, HoppingKernel::nearest_neighbor(1.0).unwrap(), Boundary::HardWall).unwrap();
        let p = Perturbation::gaussian_onsite(5.0, 2.0, 0, Modulation::constant(1.0));
        let r = run_invisibility_experiment(
            &lat,
            &p,
            &WavePacketSpec { center: -20.0, width: 5.0, carrier: PI / 2.0 },
            &ExperimentPlan::uniform(1.0, 1),
        );
        assert!(matches!(r, Err(Error::PacketOverlap { .. })));
    }

    #[test]
    fn edge_monitor_trips_on_small_lattice() {
        let lat = Lattice1D::new(60, -30, HoppingKernel::nearest_neighbor(1.0).unwrap(), Boundary::HardWall).unwrap();
        let p = Perturbation::onsite(vec![(20, C64::new(1.0, 0.0))], Modulation::constant(0.0));
        let r = run_invisibility_experiment(
            &lat,
            &p,
            &WavePacketSpec { center: 0.0, width: 3.0, carrier: PI / 2.0 },
            &ExperimentPlan::uniform(20.0, 20),
        )
        .unwrap();
        assert!(r.edge.tripped());
        assert!(!r.verdict_is_valid());
    }

    #[test]
    fn forcing_taper_profile() {
        let lat = Lattice1D::new(60, 0, HoppingKernel::nearest_neighbor(1.0).unwrap(), Boundary::Absorbing { width: 10, strength: 1.0 })
            .unwrap();
        assert_eq!(forcing_taper(&lat, 9), 0.0);
        assert!(forcing_taper(&lat, 10) < 0.02);
        assert_eq!(forcing_taper(&lat, 15), 1.0);
        assert_eq!(forcing_taper(&lat, 44), 1.0);
        assert!(forcing_taper(&lat, 11) < forcing_taper(&lat, 12));
    }

    #[test]
    fn zero_forcing_gives_zero_field_and_no_signal() {
        let lat = Lattice1D::new(101, -50, HoppingKernel::nearest_neighbor(1.0).unwrap(), Boundary::Absorbing { width: 20, strength: 1.0 })
            .unwrap();
        let p = Perturbation::onsite(vec![(0, C64::new(1.0, 0.0))], Modulation::new(vec![Harmonic::exp(0.0, 5.0)]));
        let setup = ScatteredFieldSetup {
            carrier: PI / 2.0,
            t_start: -10.0,
            t_end: 30.0,
            snapshots: (0..=40).map(|k| -10.0 + k as f64).collect(),
            switch_on: None,
            integrator: IntegratorConfig::default(),
        };
        let f = scattered_field(&lat, &p, &setup).unwrap();
        assert!(f.fields.iter().all(|s| s.iter().all(|z| z.norm() == 0.0)));
        assert!(matches!(evanescence_fit(&f, Side::Right, 0, 2, 10), Err(Error::InsufficientSignal { .. })));
    }
}
