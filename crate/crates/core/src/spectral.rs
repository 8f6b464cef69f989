//! Damped, windowed Fourier–Laplace transform
//!
//! ```text
//! f̂(ω) = ∫_{−t₀}^{t₁} f(t) e^{iωt − εt} dt,
//! f(τ) = (1/2π) e^{ετ} ∫ f̂(ω) e^{−iωτ} dω,   −t₀ < τ < t₁,
//! ```
//!
//! together with the window kernels whose areas justify treating the
//! transform as an ordinary Fourier spectrum when `εt₀ → 0` and
//! `εt₁ → ∞`. All quadratures are composite trapezoid rules on uniform
//! grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::lattice::{Modulation, C64, I};

/// Regime is called acceptable when `εt₀ ≤ 0.1` and `εt₁ ≥ 3`.
pub const MAX_EPS_T0: f64 = 0.1;
pub const MIN_EPS_T1: f64 = 3.0;

const RESEED: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLFConfig {
    pub epsilon: f64,
    pub t0: f64,
    pub t1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeQuality {
    pub eps_t0: f64,
    pub eps_t1: f64,
    pub acceptable: bool,
}

impl MLFConfig {
    pub fn new(epsilon: f64, t0: f64, t1: f64) -> Result<Self> {
        if !(epsilon > 0.0 && t0 > 0.0 && t1 > 0.0 && epsilon.is_finite() && t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidArgument("ε, t₀ and t₁ must be positive and finite"));
        }
        Ok(Self { epsilon, t0, t1 })
    }

    pub fn regime(&self) -> RegimeQuality {
        let eps_t0 = self.epsilon * self.t0;
        let eps_t1 = self.epsilon * self.t1;
        RegimeQuality { eps_t0, eps_t1, acceptable: eps_t0 <= MAX_EPS_T0 && eps_t1 >= MIN_EPS_T1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl UniformGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) || count == 0 {
            return Err(Error::InvalidArgument("grid needs a positive step and at least one point"));
        }
        Ok(Self { start, step, count })
    }

    /// `{k·step : |k| ≤ round(half_width/step)}`
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        let n = (half_width / step).round();
        if !(n >= 0.0 && n < 1e9) {
            return Err(Error::InvalidArgument("bad symmetric grid"));
        }
        Self::new(-n * step, step, 2 * n as usize + 1)
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.point(k))
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    /// Trapezoid weight of point `k`.
    fn weight(&self, k: usize) -> f64 {
        if self.count > 1 && (k == 0 || k + 1 == self.count) {
            0.5 * self.step
        } else if self.count == 1 {
            0.0
        } else {
            self.step
        }
    }
}

/// Uniformly sampled complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    pub t_start: f64,
    pub dt: f64,
    pub samples: Vec<C64>,
    /// Highest angular frequency present; the grid must resolve it with at
    /// least 16 samples per period.
    pub max_frequency: f64,
}

impl SampledSignal {
    pub fn new(t_start: f64, dt: f64, samples: Vec<C64>, max_frequency: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) || samples.len() < 2 {
            return Err(Error::InvalidArgument("signal needs a positive step and two samples"));
        }
        let max_frequency = max_frequency.abs();
        if max_frequency > 0.0 {
            let max_dt = 2.0 * PI / (16.0 * max_frequency);
            if dt > max_dt {
                return Err(Error::Undersampled { dt, max_dt });
            }
        }
        crate::lattice::check_finite(&samples, t_start)?;
        Ok(Self { t_start, dt, samples, max_frequency })
    }

    /// Samples `f` on `[t_start, t_end]` with `intervals` steps.
    pub fn from_fn(
        f: impl Fn(f64) -> C64,
        t_start: f64,
        t_end: f64,
        intervals: usize,
        max_frequency: f64,
    ) -> Result<Self> {
        if !(t_end > t_start) || intervals == 0 {
            return Err(Error::InvalidArgument("empty sampling interval"));
        }
        let dt = (t_end - t_start) / intervals as f64;
        let samples = (0..=intervals).map(|k| f(t_start + dt * k as f64)).collect();
        Self::new(t_start, dt, samples, max_frequency)
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + self.dt * k as f64
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.samples.len() - 1)
    }

    /// Pointwise product; both signals must share the time grid.
    pub fn product(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.check_same_grid(other)?;
        Ok(SampledSignal {
            t_start: self.t_start,
            dt: self.dt,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect(),
            max_frequency: self.max_frequency + other.max_frequency,
        })
    }

    fn check_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::ShapeMismatch { expected: self.samples.len(), found: other.samples.len() });
        }
        let tol = 1e-9 * self.dt;
        if (self.t_start - other.t_start).abs() > tol || (self.dt - other.dt).abs() > tol {
            return Err(Error::InvalidArgument("signals are sampled on different grids"));
        }
        Ok(())
    }

    fn check_span(&self, cfg: &MLFConfig) -> Result<()> {
        let tol = 1e-9 * (cfg.t0 + cfg.t1) + 1e-6 * self.dt;
        if (self.t_start + cfg.t0).abs() > tol || (self.t_end() - cfg.t1).abs() > tol {
            return Err(Error::InvalidArgument("signal must be sampled on [−t₀, t₁]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSupport {
    pub frequencies: Vec<f64>,
    /// Smallest frequency in the support, `None` for a zero modulation.
    pub omega0: Option<f64>,
}

/// Delta-support of the spectrum of `R(t)`, read off the harmonic terms.
pub fn modulation_spectrum_support(modulation: &Modulation) -> SpectrumSupport {
    let frequencies = modulation.spectral_support();
    let omega0 = frequencies.first().copied();
    SpectrumSupport { frequencies, omega0 }
}

/// `Σ_k w_k f_k e^{(iω − ε)t_k}` with trapezoid weights.
fn damped_sum(signal: &SampledSignal, epsilon: f64, omega: f64) -> C64 {
    let a = C64::new(-epsilon, omega);
    let step = (a * signal.dt).exp();
    let n = signal.samples.len();
    let mut acc = C64::new(0.0, 0.0);
    let mut k = 0;
    while k < n {
        let mut p = (a * signal.time(k)).exp();
        let end = (k + RESEED).min(n);
        for j in k..end {
            let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            acc += signal.samples[j] * p * w;
            p *= step;
        }
        k = end;
    }
    acc * signal.dt
}

/// `f̂^{(ε)}(ω)` at every grid frequency.
pub fn mlf_transform(signal: &SampledSignal, cfg: &MLFConfig, grid: &UniformGrid) -> Result<Vec<C64>> {
    signal.check_span(cfg)?;
    Ok(grid.points().map(|w| damped_sum(signal, cfg.epsilon, w)).collect())
}

/// Reconstructs `f(τ)` from a spectrum sampled on `grid`.
pub fn mlf_inverse(spectrum: &[C64], grid: &UniformGrid, cfg: &MLFConfig, taus: &[f64]) -> Result<Vec<C64>> {
    if spectrum.len() != grid.count {
        return Err(Error::ShapeMismatch { expected: grid.count, found: spectrum.len() });
    }
    taus.iter()
        .map(|&tau| {
            if !(tau > -cfg.t0 && tau < cfg.t1) {
                return Err(Error::OutOfRange { value: tau, min: -cfg.t0, max: cfg.t1 });
            }
            let step = C64::from_polar(1.0, -grid.step * tau);
            let mut acc = C64::new(0.0, 0.0);
            let mut k = 0;
            while k < grid.count {
                let mut p = C64::from_polar(1.0, -grid.point(k) * tau);
                let end = (k + RESEED).min(grid.count);
                for j in k..end {
                    acc += spectrum[j] * p * grid.weight(j);
                    p *= step;
                }
                k = end;
            }
            Ok(acc * ((cfg.epsilon * tau).exp() / (2.0 * PI)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKernel {
    /// `G(ω) = [e^{i(ω+iε)t₁} − e^{−i(ω+iε)t₀}] / (2πi(ω+iε))`, the
    /// transform of the damped window over `2π`. Its area is exactly 1.
    Exact,
    /// Large-`t₁` form `−e^{−iωt₀} / (2πi(ω+iε))`, with area `e^{−εt₀}`.
    Asymptotic,
}

pub fn window_kernel(cfg: &MLFConfig, kind: WindowKernel, omega: f64) -> C64 {
    let z = C64::new(omega, cfg.epsilon);
    let den = 2.0 * PI * I * z;
    match kind {
        WindowKernel::Exact => ((I * z * cfg.t1).exp() - (-I * z * cfg.t0).exp()) / den,
        WindowKernel::Asymptotic => -C64::from_polar(1.0, -omega * cfg.t0) / den,
    }
}

/// `Θ(Ω) = ∫_{−t₀}^{t₁} e^{iΩt} dt`
pub fn theta_kernel(cfg: &MLFConfig, omega: f64) -> C64 {
    let span = cfg.t0 + cfg.t1;
    let x = omega * span;
    // (e^{ix} − 1)/(ix) without cancellation near 0
    let ratio = if x.abs() < 1e-4 {
        C64::new(1.0 - x * x / 6.0, x / 2.0)
    } else {
        (C64::from_polar(1.0, x) - 1.0) / (I * x)
    };
    C64::from_polar(span, -omega * cfg.t0) * ratio
}

/// `∫_x^∞ sin(u)/u du` for `x ≳ 30` from its asymptotic series.
fn sine_integral_tail(x: f64) -> f64 {
    let x2 = x * x;
    x.cos() / x * (1.0 - 2.0 / x2 + 24.0 / (x2 * x2)) + x.sin() / x2 * (1.0 - 6.0 / x2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaReport {
    /// Quadrature over `[−W, W]` plus the analytic tail beyond `±W`.
    pub area: C64,
    /// Bound on the magnitude of the tail that was added.
    pub tail_estimate: f64,
    pub regime: RegimeQuality,
}

/// Step `min(2π/(16·max(t₀, t₁)), ε/8)` resolving both the oscillation and
/// the central peak of the kernels.
pub fn default_kernel_step(cfg: &MLFConfig) -> f64 {
    (2.0 * PI / (16.0 * cfg.t0.max(cfg.t1))).min(cfg.epsilon / 8.0)
}

fn integrate(f: impl Fn(f64) -> C64, half_width: f64, step: f64) -> Result<C64> {
    let grid = UniformGrid::symmetric(half_width, step)?;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..grid.count {
        acc += f(grid.point(k)) * grid.weight(k);
    }
    Ok(acc)
}

fn check_tail(tail: f64) -> Result<()> {
    if tail > 1e-2 {
        Err(Error::WindowTooNarrow { tail })
    } else {
        Ok(())
    }
}

/// Area under the window kernel `G`.
pub fn window_kernel_area(cfg: &MLFConfig, kind: WindowKernel, half_width: f64, step: f64) -> Result<AreaReport> {
    let (w, e) = (half_width, cfg.epsilon);
    let (tail, tail_estimate) = match kind {
        WindowKernel::Exact => (
            ((-e * cfg.t1).exp() * sine_integral_tail(cfg.t1 * w) + (e * cfg.t0).exp() * sine_integral_tail(cfg.t0 * w)) / PI,
            (e * cfg.t0).exp() / (PI * w * cfg.t0) + (-e * cfg.t1).exp() / (PI * w * cfg.t1),
        ),
        WindowKernel::Asymptotic => (sine_integral_tail(cfg.t0 * w) / PI, 1.0 / (PI * w * cfg.t0)),
    };
    check_tail(tail_estimate)?;
    let body = integrate(|x| window_kernel(cfg, kind, x), half_width, step)?;
    Ok(AreaReport { area: body + tail, tail_estimate, regime: cfg.regime() })
}

/// Area under `Θ`, `2π` for any `t₀, t₁`.
pub fn theta_area(cfg: &MLFConfig, half_width: f64, step: f64) -> Result<AreaReport> {
    let w = half_width;
    let tail = 2.0 * (sine_integral_tail(cfg.t1 * w) + sine_integral_tail(cfg.t0 * w));
    let tail_estimate = 2.0 * (1.0 / (w * cfg.t0) + 1.0 / (w * cfg.t1)) / (2.0 * PI);
    check_tail(tail_estimate)?;
    let body = integrate(|x| theta_kernel(cfg, x), half_width, step)?;
    Ok(AreaReport { area: body + tail, tail_estimate, regime: cfg.regime() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionReport {
    pub omegas: Vec<f64>,
    /// `∫ f g e^{iωt−εt} dt`
    pub direct: Vec<C64>,
    /// `(1/2π) ∫ f̂^{(ε)}(ω − ω₂) ĝ(ω₂) dω₂`
    pub convolved: Vec<C64>,
    /// `max |direct − convolved| / max |direct|` over the retained points.
    pub deviation: f64,
    /// `max |direct − convolved| / |direct|` over the retained points.
    pub pointwise_deviation: f64,
}

/// Compares the damped transform of `f·g` with the convolution of
/// `f̂^{(ε)}` and the undamped windowed spectrum `ĝ` of `g`.
///
/// `grid` must be symmetric about zero; it carries both `ω₂` and the
/// output frequencies (every `stride`-th point). `f̂^{(ε)}` is evaluated on
/// the doubled grid so that `ω − ω₂` is always a grid point. Points where
/// `|direct| ≤ 1e−6·max` are left out of both deviation measures.
pub fn convolution_check(
    f: &SampledSignal,
    g: &SampledSignal,
    cfg: &MLFConfig,
    grid: &UniformGrid,
    stride: usize,
) -> Result<ConvolutionReport> {
    f.check_same_grid(g)?;
    f.check_span(cfg)?;
    if grid.count % 2 == 0 || (grid.start + grid.end()).abs() > 1e-9 * grid.step {
        return Err(Error::InvalidArgument("convolution grid must be symmetric about zero"));
    }
    let stride = stride.max(1);
    let n = (grid.count - 1) / 2;
    let wide = UniformGrid { start: -2.0 * n as f64 * grid.step, step: grid.step, count: 4 * n + 1 };
    let f_hat: Vec<C64> = wide.points().map(|w| damped_sum(f, cfg.epsilon, w)).collect();
    let g_hat: Vec<C64> = grid.points().map(|w| damped_sum(g, 0.0, w)).collect();
    let fg = f.product(g)?;

    let mut omegas = Vec::new();
    let mut direct = Vec::new();
    let mut convolved = Vec::new();
    for k in (0..grid.count).step_by(stride) {
        let w = grid.point(k);
        omegas.push(w);
        direct.push(damped_sum(&fg, cfg.epsilon, w));
        // ω_k − ω_j sits at index (k − j) + 2n of the wide grid
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..grid.count {
            acc += f_hat[k + 2 * n - j] * g_hat[j] * grid.weight(j);
        }
        convolved.push(acc / (2.0 * PI));
    }
    let peak = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut deviation: f64 = 0.0;
    let mut pointwise: f64 = 0.0;
    if peak > 0.0 {
        for (d, c) in direct.iter().zip(&convolved) {
            if d.norm() > 1e-6 * peak {
                let diff = (d - c).norm();
                deviation = deviation.max(diff / peak);
                pointwise = pointwise.max(diff / d.norm());
            }
        }
    } else {
        deviation = convolved.iter().map(|z| z.norm()).fold(0.0, f64::max);
        pointwise = deviation;
    }
    Ok(ConvolutionReport { omegas, direct, convolved, deviation, pointwise_deviation: pointwise })
}

/// `max_{ω ≥ from} |S(ω)| / max_ω |S(ω)|`; zero when the spectrum vanishes.
pub fn forbidden_band_ratio(spectrum: &[C64], grid: &UniformGrid, from: f64) -> f64 {
    let peak = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let worst = grid
        .points()
        .zip(spectrum)
        .filter(|(w, _)| *w >= from)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    worst / peak
}
