//! Numerical checks of the damped Fourier–Laplace machinery.

use std::thread;

use anyhow::{Context, Result};
use latinvis_core::dispersion::band_info;
use latinvis_core::evolution::{evolve_observed, IntegratorConfig};
use latinvis_core::lattice::{Modulation, C64};
use latinvis_core::scattering::{ScatteredFieldDynamics, SwitchOn};
use latinvis_core::spectral::{
    convolution_check, default_kernel_step, forbidden_band_ratio, mlf_inverse, mlf_transform,
    modulation_spectrum_support, theta_area, window_kernel_area, AreaReport, MLFConfig, RegimeQuality,
    SampledSignal, UniformGrid, WindowKernel,
};

use crate::config::{modulation, SelftestConfig};

pub struct RoundTrip {
    pub grid: UniformGrid,
    pub spectrum: Vec<C64>,
    pub rel_l2: f64,
}

pub struct ConvolutionSummary {
    pub deviation: f64,
    pub pointwise_deviation: f64,
    pub points: usize,
}

pub struct ForbiddenBand {
    pub omega0: f64,
    pub bandwidth: f64,
    /// Lowest frequency of the checked region, `−ω₀ + (ω₀ − Δ)/2`.
    pub from: f64,
    pub ratio: f64,
    pub absorber_ratio: f64,
    pub grid: UniformGrid,
    pub spectrum: Vec<C64>,
}

pub struct SelftestReport {
    pub regime: RegimeQuality,
    pub kernel_area: AreaReport,
    pub theta_area: AreaReport,
    /// Asymptotic window kernel at `εt₀ = poor_eps_t0`.
    pub poor_kernel_area: AreaReport,
    pub round_trip: RoundTrip,
    pub convolution: ConvolutionSummary,
    pub forbidden: ForbiddenBand,
}

/// Test signal of the round trip: `e^{5it} + 0.5 e^{i√18 t}`.
pub fn two_tone(t: f64) -> C64 {
    C64::from_polar(1.0, 5.0 * t) + C64::from_polar(0.5, 18f64.sqrt() * t)
}

pub fn run(cfg: &SelftestConfig) -> Result<SelftestReport> {
    let mlf = cfg.mlf()?;
    let step = default_kernel_step(&mlf);
    let kernel_area = window_kernel_area(&mlf, WindowKernel::Exact, cfg.kernel_half_width, step).context("window kernel area")?;
    let theta_area = theta_area(&mlf, cfg.kernel_half_width, step).context("theta area")?;
    let poor = MLFConfig::new(cfg.poor_eps_t0 / cfg.t0, cfg.t0, cfg.t1)?;
    let poor_kernel_area = window_kernel_area(&poor, WindowKernel::Asymptotic, cfg.kernel_half_width, default_kernel_step(&poor))
        .context("poor-regime kernel area")?;
    Ok(SelftestReport {
        regime: mlf.regime(),
        kernel_area,
        theta_area,
        poor_kernel_area,
        round_trip: round_trip(cfg, &mlf)?,
        convolution: convolution(cfg)?,
        forbidden: forbidden_band(cfg)?,
    })
}

fn intervals(t0: f64, t1: f64, dt: f64) -> usize {
    ((t1 + t0) / dt).round() as usize
}

/// `mlf_transform` with the grid split over the available cores. Every
/// frequency is computed independently, so the result does not depend on
/// the split.
pub fn parallel_transform(signal: &SampledSignal, cfg: &MLFConfig, grid: &UniformGrid) -> Result<Vec<C64>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(grid.count.max(1));
    let chunk = grid.count.div_ceil(workers);
    let parts: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let first = w * chunk;
                let count = chunk.min(grid.count - first.min(grid.count));
                s.spawn(move || {
                    if count == 0 {
                        return Ok(Vec::new());
                    }
                    let sub = UniformGrid::new(grid.point(first), grid.step, count)?;
                    mlf_transform(signal, cfg, &sub)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("transform worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(grid.count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn round_trip(cfg: &SelftestConfig, mlf: &MLFConfig) -> Result<RoundTrip> {
    let rt = &cfg.round_trip;
    let signal = SampledSignal::from_fn(two_tone, -cfg.t0, cfg.t1, intervals(cfg.t0, cfg.t1, rt.dt), 5.0)?;
    let grid = UniformGrid::symmetric(rt.half_width, rt.step)?;
    let spectrum = parallel_transform(&signal, mlf, &grid).context("round trip transform")?;
    let (lo, hi) = (-cfg.t0 + rt.margin, cfg.t1 - rt.margin);
    let taus: Vec<f64> = (0..rt.points).map(|k| lo + (hi - lo) * k as f64 / (rt.points - 1) as f64).collect();
    let back = mlf_inverse(&spectrum, &grid, mlf, &taus).context("round trip inverse")?;
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, b) in taus.iter().zip(&back) {
        let f = two_tone(t);
        num += (b - f).norm_sqr();
        den += f.norm_sqr();
    }
    Ok(RoundTrip { grid, spectrum, rel_l2: (num / den).sqrt() })
}

fn convolution(cfg: &SelftestConfig) -> Result<ConvolutionSummary> {
    let c = &cfg.convolution;
    let mlf = MLFConfig::new(c.epsilon, c.t0, c.t1)?;
    let n = intervals(c.t0, c.t1, c.dt);
    let f = SampledSignal::from_fn(|t| C64::from_polar(1.0, 5.0 * t), -c.t0, c.t1, n, 5.0)?;
    let g = SampledSignal::from_fn(|t| C64::from_polar(1.0, 18f64.sqrt() * t), -c.t0, c.t1, n, 18f64.sqrt())?;
    let grid = UniformGrid::symmetric(c.half_width, c.step)?;
    let r = convolution_check(&f, &g, &mlf, &grid, c.stride).context("convolution check")?;
    Ok(ConvolutionSummary { deviation: r.deviation, pointwise_deviation: r.pointwise_deviation, points: r.omegas.len() })
}

fn forbidden_band(cfg: &SelftestConfig) -> Result<ForbiddenBand> {
    let c = &cfg.forbidden_band;
    let mlf = MLFConfig::new(c.epsilon, c.t0, c.t1)?;
    let lattice = c.lattice.build().context("forbidden_band.lattice")?;
    let m: Modulation = modulation(&c.modulation);
    let pert = c.perturbation.build(m.clone()).context("forbidden_band.perturbation")?;
    let band = band_info(lattice.kernel())?;
    let omega0 = modulation_spectrum_support(&m)
        .omega0
        .context("forbidden_band.modulation: needs at least one harmonic")?;
    let site = lattice.index_of(c.site).context("forbidden_band.site: outside the lattice")?;

    let switch_on = SwitchOn { center: c.switch_on.center, width: c.switch_on.width };
    let dynamics = ScatteredFieldDynamics::new(&lattice, &pert, c.carrier.value(), Some(switch_on))?;
    let n = intervals(c.t0, c.t1, c.dt);
    let times: Vec<f64> = (0..=n).map(|k| -c.t0 + c.dt * k as f64).collect();
    let zero = vec![C64::new(0.0, 0.0); lattice.sites()];
    let mut samples = Vec::with_capacity(times.len());
    let w = lattice.absorber_width();
    if w == 0 {
        anyhow::bail!("forbidden_band.lattice: needs absorbing boundaries");
    }
    let (mut peak, mut at_edge): (f64, f64) = (0.0, 0.0);
    let integrator = IntegratorConfig::default();
    evolve_observed(&dynamics, &zero, (times[0], times[n]), &times, &integrator, |_, y| {
        samples.push(y[site]);
        peak = peak.max(y.iter().map(|z| z.norm()).fold(0.0, f64::max));
        at_edge = at_edge.max(y[w - 1].norm()).max(y[lattice.sites() - w].norm());
    })
    .context("forbidden_band field run")?;
    let max_frequency = m.max_abs_frequency() + band.e_max.abs().max(band.e_min.abs()) + dynamics.energy().abs();
    let signal = SampledSignal::new(times[0], c.dt, samples, max_frequency)?;
    let grid = UniformGrid::symmetric(c.half_width, c.step)?;
    let spectrum = parallel_transform(&signal, &mlf, &grid).context("forbidden_band transform")?;
    let from = -omega0 + 0.5 * (omega0 - band.width);
    Ok(ForbiddenBand {
        omega0,
        bandwidth: band.width,
        from,
        ratio: forbidden_band_ratio(&spectrum, &grid, from),
        absorber_ratio: if peak > 0.0 { at_edge / peak } else { 0.0 },
        grid,
        spectrum,
    })
}
