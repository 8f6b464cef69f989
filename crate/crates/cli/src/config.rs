//! Experiment configuration files.
//!
//! A config is a TOML document whose top-level `kind` selects the
//! experiment. Unknown keys are rejected everywhere.

use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use latinvis_core::evolution::IntegratorConfig;
use latinvis_core::lattice::{Boundary, Harmonic, HoppingKernel, Lattice1D, Lattice2D, Modulation, Perturbation, Perturbation2D};
use latinvis_core::qwalk::QWalkConfig;
use latinvis_core::scattering::{ExperimentPlan, SwitchOn, VerdictRule, WavePacket2D, WavePacketSpec};
use latinvis_core::spectral::MLFConfig;
use latinvis_core::C64;
use serde::{Deserialize, Serialize};

use crate::expr::{Amplitude, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExperimentConfig {
    #[serde(rename = "dispersion")]
    Dispersion(DispersionConfig),
    #[serde(rename = "scatter-1d")]
    Scatter1d(Scatter1dConfig),
    #[serde(rename = "scatter-2d")]
    Scatter2d(Scatter2dConfig),
    #[serde(rename = "scattered-field")]
    ScatteredField(ScatteredFieldConfig),
    #[serde(rename = "qwalk")]
    QWalk(QWalkFileConfig),
    #[serde(rename = "spectral-selftest")]
    SpectralSelftest(SelftestConfig),
}

impl ExperimentConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentConfig::Dispersion(_) => "dispersion",
            ExperimentConfig::Scatter1d(_) => "scatter-1d",
            ExperimentConfig::Scatter2d(_) => "scatter-2d",
            ExperimentConfig::ScatteredField(_) => "scattered-field",
            ExperimentConfig::QWalk(_) => "qwalk",
            ExperimentConfig::SpectralSelftest(_) => "spectral-selftest",
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| anyhow::anyhow!("config: {}", e.message()))?;
        Self::from_value(toml::Value::Table(table))
    }

    /// Dispatches on `kind` first so that deserialization errors carry the
    /// full key path inside the selected experiment.
    pub fn from_value(value: toml::Value) -> Result<Self> {
        let toml::Value::Table(mut table) = value else { bail!("config: expected a table") };
        let kind = match table.remove("kind") {
            Some(toml::Value::String(k)) => k,
            Some(_) => bail!("kind: expected a string"),
            None => bail!("kind: missing"),
        };
        let body = toml::Value::Table(table);
        let cfg = match kind.as_str() {
            "dispersion" => ExperimentConfig::Dispersion(body_as(body)?),
            "scatter-1d" => ExperimentConfig::Scatter1d(body_as(body)?),
            "scatter-2d" => ExperimentConfig::Scatter2d(body_as(body)?),
            "scattered-field" => ExperimentConfig::ScatteredField(body_as(body)?),
            "qwalk" => ExperimentConfig::QWalk(body_as(body)?),
            "spectral-selftest" => ExperimentConfig::SpectralSelftest(body_as(body)?),
            other => bail!(
                "kind: unknown experiment `{other}` (expected dispersion, scatter-1d, scatter-2d, scattered-field, qwalk or spectral-selftest)"
            ),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn to_value(&self) -> Result<toml::Value> {
        Ok(toml::Value::try_from(self)?)
    }

    /// Builds every core object once so invalid parameters surface before
    /// any run starts.
    pub fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::Dispersion(c) => {
                c.kernel()?;
                if c.samples < 2 {
                    bail!("samples: need at least 2 points");
                }
            }
            ExperimentConfig::Scatter1d(c) => {
                c.lattice()?;
                c.perturbation()?;
                c.plan()?;
                c.packet()?;
            }
            ExperimentConfig::Scatter2d(c) => {
                c.lattice()?;
                c.plan()?;
            }
            ExperimentConfig::ScatteredField(c) => {
                let lattice = c.lattice()?;
                if !matches!(lattice.boundary(), Boundary::Absorbing { .. }) {
                    bail!("lattice.boundary: scattered-field runs need an absorbing boundary");
                }
                c.perturbation()?.bind(&lattice).context("perturbation")?;
                c.snapshots()?;
            }
            ExperimentConfig::QWalk(c) => {
                c.walk()?;
            }
            ExperimentConfig::SpectralSelftest(c) => {
                c.mlf()?;
                MLFConfig::new(c.convolution.epsilon, c.convolution.t0, c.convolution.t1).context("convolution")?;
            }
        }
        Ok(())
    }

    pub fn integrator_mut(&mut self) -> Option<&mut IntegratorSection> {
        match self {
            ExperimentConfig::Scatter1d(c) => Some(&mut c.integrator),
            ExperimentConfig::Scatter2d(c) => Some(&mut c.integrator),
            ExperimentConfig::ScatteredField(c) => Some(&mut c.integrator),
            _ => None,
        }
    }
}

fn body_as<T: serde::de::DeserializeOwned>(body: toml::Value) -> Result<T> {
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "config".to_string() } else { path };
        anyhow::anyhow!("{path}: {}", e.into_inner())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EdgePolicy {
    /// Write outputs, then exit with status 2.
    #[default]
    Abort,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "defaults::rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "defaults::abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "defaults::h_init")]
    pub h_init: f64,
    #[serde(default = "defaults::h_min")]
    pub h_min: f64,
    #[serde(default = "defaults::h_max")]
    pub h_max: f64,
    #[serde(default = "defaults::safety")]
    pub safety: f64,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let d = IntegratorConfig::default();
        Self { rel_tol: d.rel_tol, abs_tol: d.abs_tol, h_init: d.h_init, h_min: d.h_min, h_max: d.h_max, safety: d.safety }
    }
}

impl IntegratorSection {
    pub fn build(&self) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: self.h_init,
            h_min: self.h_min,
            h_max: self.h_max,
            safety: self.safety,
        };
        cfg.validate().context("integrator")?;
        Ok(cfg)
    }
}

mod defaults {
    use latinvis_core::evolution::IntegratorConfig;

    pub fn rel_tol() -> f64 {
        IntegratorConfig::default().rel_tol
    }
    pub fn abs_tol() -> f64 {
        IntegratorConfig::default().abs_tol
    }
    pub fn h_init() -> f64 {
        IntegratorConfig::default().h_init
    }
    pub fn h_min() -> f64 {
        IntegratorConfig::default().h_min
    }
    pub fn h_max() -> f64 {
        IntegratorConfig::default().h_max
    }
    pub fn safety() -> f64 {
        IntegratorConfig::default().safety
    }
    pub fn threshold() -> f64 {
        1e-2
    }
    pub fn yes() -> bool {
        true
    }
    pub fn one() -> crate::expr::Amplitude {
        1.0.into()
    }
    pub fn samples() -> usize {
        1024
    }
    pub fn far_radius() -> i64 {
        10
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    Exp,
    Cos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    #[serde(default = "defaults::one")]
    pub amplitude: Amplitude,
    pub frequency: Real,
    pub kind: TermKind,
}

impl TermConfig {
    pub fn exp(amplitude: impl Into<Amplitude>, frequency: Real) -> Self {
        Self { amplitude: amplitude.into(), frequency, kind: TermKind::Exp }
    }

    pub fn cos(amplitude: impl Into<Amplitude>, frequency: Real) -> Self {
        Self { amplitude: amplitude.into(), frequency, kind: TermKind::Cos }
    }
}

pub fn modulation(terms: &[TermConfig]) -> Modulation {
    Modulation::new(
        terms
            .iter()
            .map(|t| match t.kind {
                TermKind::Exp => Harmonic::exp(t.amplitude.value(), t.frequency.value()),
                TermKind::Cos => Harmonic::cos(t.amplitude.value(), t.frequency.value()),
            })
            .collect(),
    )
}

fn kernel(hopping: &[Real]) -> Result<HoppingKernel> {
    let amps: Vec<f64> = hopping.iter().map(Real::value).collect();
    HoppingKernel::symmetric(&amps).context("lattice.hopping")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundaryConfig {
    #[default]
    HardWall,
    Absorbing { width: usize, strength: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub sites: usize,
    pub origin: i64,
    /// `κ₁, κ₂, …` of a symmetric real kernel.
    pub hopping: Vec<Real>,
    #[serde(default)]
    pub boundary: BoundaryConfig,
}

impl LatticeConfig {
    pub fn build(&self) -> Result<Lattice1D> {
        let boundary = match self.boundary {
            BoundaryConfig::HardWall => Boundary::HardWall,
            BoundaryConfig::Absorbing { width, strength } => Boundary::Absorbing { width, strength },
        };
        Lattice1D::new(self.sites, self.origin, kernel(&self.hopping)?, boundary).context("lattice")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PerturbationConfig {
    /// `V_n = v0·exp(−((n − center)/width)²)`
    Gaussian { v0: Amplitude, width: Real, center: i64 },
    /// Symmetric hopping defect between sites `a` and `b`.
    Bond { a: i64, b: i64, amplitude: Amplitude },
    /// Explicit on-site values.
    Onsite { sites: Vec<i64>, values: Vec<Amplitude> },
}

impl PerturbationConfig {
    pub fn build(&self, modulation: Modulation) -> Result<Perturbation> {
        Ok(match self {
            PerturbationConfig::Gaussian { v0, width, center } => {
                if !(width.value() > 0.0) {
                    bail!("perturbation.width: must be positive");
                }
                Perturbation::gaussian_onsite(v0.value(), width.value(), *center, modulation)
            }
            PerturbationConfig::Bond { a, b, amplitude } => {
                Perturbation::bond_defect(*a, *b, amplitude.value(), modulation).context("perturbation")?
            }
            PerturbationConfig::Onsite { sites, values } => {
                if sites.len() != values.len() {
                    bail!("perturbation.values: {} values for {} sites", values.len(), sites.len());
                }
                Perturbation::onsite(sites.iter().zip(values).map(|(&n, v)| (n, v.value())).collect(), modulation)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub center: Real,
    pub width: Real,
    pub carrier: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    pub hopping: Vec<Real>,
    #[serde(default = "defaults::samples")]
    pub samples: usize,
    /// Out-of-band energies at which complex Bloch roots are listed.
    #[serde(default)]
    pub energies: Vec<Real>,
}

impl DispersionConfig {
    pub fn kernel(&self) -> Result<HoppingKernel> {
        kernel(&self.hopping)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scatter1dConfig {
    pub lattice: LatticeConfig,
    pub perturbation: PerturbationConfig,
    pub modulation: Vec<TermConfig>,
    pub packet: PacketConfig,
    pub t_end: Real,
    /// Number of uniformly spaced recorded times after `t = 0`.
    pub frames: usize,
    #[serde(default = "defaults::threshold")]
    pub threshold: f64,
    /// Reject packets that touch the perturbation at `t = 0`.
    #[serde(default = "defaults::yes")]
    pub check_overlap: bool,
    #[serde(default)]
    pub edge_policy: EdgePolicy,
    #[serde(default)]
    pub integrator: IntegratorSection,
}

impl Scatter1dConfig {
    pub fn lattice(&self) -> Result<Lattice1D> {
        self.lattice.build()
    }

    pub fn perturbation(&self) -> Result<Perturbation> {
        let p = self.perturbation.build(modulation(&self.modulation))?;
        p.bind(&self.lattice()?).context("perturbation")?;
        Ok(p)
    }

    pub fn packet(&self) -> Result<WavePacketSpec> {
        let spec = WavePacketSpec {
            center: self.packet.center.value(),
            width: self.packet.width.value(),
            carrier: self.packet.carrier.value(),
        };
        latinvis_core::scattering::gaussian_packet(&self.lattice()?, &spec).context("packet")?;
        Ok(spec)
    }

    pub fn plan(&self) -> Result<ExperimentPlan> {
        let t_end = self.t_end.value();
        if !(t_end > 0.0) || self.frames == 0 {
            bail!("t_end/frames: need t_end > 0 and at least one frame");
        }
        if !(self.threshold > 0.0) {
            bail!("threshold: must be positive");
        }
        let mut plan = ExperimentPlan::uniform(t_end, self.frames);
        plan.threshold = self.threshold;
        plan.overlap_limit = if self.check_overlap { Some(1e-10) } else { None };
        plan.integrator = self.integrator.build()?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice2DConfig {
    pub nx: usize,
    pub ny: usize,
    pub origin: [i64; 2],
    pub kappa: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gaussian2DConfig {
    pub v0: Amplitude,
    pub width: Real,
    pub center: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Packet2DConfig {
    pub center: [Real; 2],
    pub width: Real,
    pub carrier: [Real; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleConfig {
    RelativeToReference,
    DecayFromPeak,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scatter2dConfig {
    pub lattice: Lattice2DConfig,
    pub perturbation: Gaussian2DConfig,
    pub modulation: Vec<TermConfig>,
    pub packet: Packet2DConfig,
    pub t_end: Real,
    /// Times written to `heatmap.csv`.
    pub frames: Vec<Real>,
    /// Uniform recorded times for the error series, merged with `frames`.
    pub series: usize,
    pub rule: RuleConfig,
    #[serde(default = "defaults::threshold")]
    pub threshold: f64,
    #[serde(default = "defaults::yes")]
    pub check_overlap: bool,
    #[serde(default)]
    pub edge_policy: EdgePolicy,
    #[serde(default)]
    pub integrator: IntegratorSection,
}

impl Scatter2dConfig {
    pub fn lattice(&self) -> Result<Lattice2D> {
        let o = self.lattice.origin;
        Lattice2D::new(self.lattice.nx, self.lattice.ny, (o[0], o[1]), self.lattice.kappa.value()).context("lattice")
    }

    pub fn perturbation(&self) -> Perturbation2D {
        let p = &self.perturbation;
        Perturbation2D::gaussian(p.v0.value(), p.width.value(), (p.center[0], p.center[1]), modulation(&self.modulation))
    }

    pub fn packet(&self) -> WavePacket2D {
        let p = &self.packet;
        WavePacket2D {
            center: (p.center[0].value(), p.center[1].value()),
            width: p.width.value(),
            carrier: (p.carrier[0].value(), p.carrier[1].value()),
        }
    }

    pub fn frame_times(&self) -> Vec<f64> {
        self.frames.iter().map(Real::value).collect()
    }

    pub fn plan(&self) -> Result<ExperimentPlan> {
        let t_end = self.t_end.value();
        if !(t_end > 0.0) {
            bail!("t_end: must be positive");
        }
        if let Some(f) = self.frames.iter().find(|f| !(f.value() >= 0.0 && f.value() <= t_end)) {
            bail!("frames: {f} lies outside [0, t_end]");
        }
        self.perturbation().bind(&self.lattice()?).context("perturbation")?;
        let mut times: Vec<f64> = (1..=self.series).map(|k| t_end * k as f64 / self.series as f64).collect();
        times.extend(self.frame_times().into_iter().filter(|&t| t > 0.0));
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * t_end);
        let mut plan = ExperimentPlan::new(t_end, times);
        plan.threshold = self.threshold;
        plan.rule = match self.rule {
            RuleConfig::RelativeToReference => VerdictRule::RelativeToReference,
            RuleConfig::DecayFromPeak => VerdictRule::DecayFromPeak,
        };
        plan.overlap_limit = if self.check_overlap { Some(1e-10) } else { None };
        plan.integrator = self.integrator.build()?;
        Ok(plan)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchOnConfig {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideConfig {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub side: SideConfig,
    pub center: i64,
    pub near: i64,
    pub far: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteredFieldConfig {
    pub lattice: LatticeConfig,
    pub perturbation: PerturbationConfig,
    pub modulation: Vec<TermConfig>,
    pub carrier: Real,
    pub t_start: f64,
    pub t_end: f64,
    pub frames: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub switch_on: Option<SwitchOnConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    #[serde(default)]
    pub integrator: IntegratorSection,
}

impl ScatteredFieldConfig {
    pub fn lattice(&self) -> Result<Lattice1D> {
        self.lattice.build()
    }

    pub fn perturbation(&self) -> Result<Perturbation> {
        self.perturbation.build(modulation(&self.modulation))
    }

    pub fn switch_on(&self) -> Option<SwitchOn> {
        self.switch_on.as_ref().map(|s| SwitchOn { center: s.center, width: s.width })
    }

    pub fn snapshots(&self) -> Result<Vec<f64>> {
        if !(self.t_end > self.t_start) || self.frames == 0 {
            bail!("t_end/frames: need t_end > t_start and at least one frame");
        }
        let span = self.t_end - self.t_start;
        Ok((1..=self.frames).map(|k| self.t_start + span * k as f64 / self.frames as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QWalkProfileConfig {
    pub amplitude: Amplitude,
    pub width: Real,
    pub center: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QWalkFileConfig {
    pub beta: Real,
    pub sites: usize,
    pub origin: i64,
    /// `V_n^{(m)} = R_m · amplitude · exp(−((n − center)/width)²)`
    pub profile: QWalkProfileConfig,
    pub modulation: Vec<TermConfig>,
    pub initial_site: i64,
    pub steps: usize,
    /// Far field is `|n − center| > far_radius`.
    #[serde(default = "defaults::far_radius")]
    pub far_radius: i64,
}

impl QWalkFileConfig {
    pub fn walk(&self) -> Result<QWalkConfig> {
        let p = &self.profile;
        let w = p.width.value();
        if !(w > 0.0) {
            bail!("profile.width: must be positive");
        }
        // cut where the Gaussian drops below 1e-16
        let reach = ((16.0 * std::f64::consts::LN_10).sqrt() * w).floor() as i64;
        let lo = (p.center - reach).max(self.origin);
        let hi = (p.center + reach).min(self.origin + self.sites as i64 - 1);
        let amp = p.amplitude.value();
        let profile: Vec<(i64, C64)> = (lo..=hi)
            .map(|n| {
                let x = (n - p.center) as f64 / w;
                (n, amp * (-x * x).exp())
            })
            .collect();
        let cfg = QWalkConfig::new(self.beta.value(), self.sites, self.origin, profile, modulation(&self.modulation))
            .context("qwalk")?;
        if cfg.index_of(self.initial_site).is_none() {
            bail!("initial_site: {} is outside the site range", self.initial_site);
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundTripConfig {
    pub dt: f64,
    pub half_width: f64,
    pub step: f64,
    /// Reconstruction points spread over `[−t₀ + margin, t₁ − margin]`.
    pub points: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvolutionConfig {
    pub epsilon: f64,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub half_width: f64,
    pub step: f64,
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForbiddenBandConfig {
    pub epsilon: f64,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub half_width: f64,
    pub step: f64,
    pub site: i64,
    pub switch_on: SwitchOnConfig,
    pub lattice: LatticeConfig,
    pub perturbation: PerturbationConfig,
    pub modulation: Vec<TermConfig>,
    pub carrier: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestConfig {
    pub epsilon: f64,
    pub t0: f64,
    pub t1: f64,
    /// Half width of the quadrature window for kernel areas.
    pub kernel_half_width: f64,
    /// `εt₀` of the deliberately poor regime for the asymptotic kernel.
    pub poor_eps_t0: f64,
    pub round_trip: RoundTripConfig,
    pub convolution: ConvolutionConfig,
    pub forbidden_band: ForbiddenBandConfig,
}

impl SelftestConfig {
    pub fn mlf(&self) -> Result<MLFConfig> {
        MLFConfig::new(self.epsilon, self.t0, self.t1).context("epsilon/t0/t1")
    }
}

/// `π/2` written as an expression.
pub fn half_pi() -> Real {
    let r = Real::expr("pi/2");
    debug_assert_eq!(r.value(), PI / 2.0);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
kind = "scatter-1d"
t_end = 10
frames = 5

[lattice]
sites = 120
origin = -60
hopping = [1.0, 0.2]

[perturbation]
type = "gaussian"
v0 = 5
width = 2
center = 0

[[modulation]]
frequency = 5
kind = "exp"

[[modulation]]
amplitude = [1, 0]
frequency = "sqrt(18)"
kind = "exp"

[packet]
center = -30
width = 4
carrier = "pi/2"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
        assert_eq!(cfg.kind(), "scatter-1d");
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_keys_are_reported_with_path() {
        let bad = SMALL.replace("origin = -60", "origin = -60\nsitez = 3");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("lattice") && err.contains("sitez"), "{err}");
        let bad = SMALL.replace("kind = \"scatter-1d\"", "kind = \"scatter-3d\"");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let bad = SMALL.replace("t_end = 10", "t_end = 10\ncolour = 1");
        assert!(ExperimentConfig::from_toml(&bad).unwrap_err().to_string().contains("colour"));
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let bad = SMALL.replace("center = -30", "center = -58");
        let err = format!("{:#}", ExperimentConfig::from_toml(&bad).unwrap_err());
        assert!(err.starts_with("packet"), "{err}");
        let bad = SMALL.replace("frequency = \"sqrt(18)\"", "frequency = \"sqrt(\"");
        let err = ExperimentConfig::from_toml(&bad).unwrap_err().to_string();
        assert!(err.contains("modulation[1].frequency"), "{err}");
    }
}
