//! Built-in experiment configurations.

use crate::config::*;
use crate::expr::Real;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

pub const PRESETS: [Preset; 9] = [
    Preset { name: "fig1a", description: "on-site Gaussian, R = e^{i5t} + e^{i√18 t}: invisible", build: fig1a },
    Preset { name: "fig1b", description: "on-site Gaussian, R = cos 5t + cos √18 t: visible", build: fig1b },
    Preset { name: "fig2a", description: "hopping defect (0,1), positive-frequency R: invisible", build: fig2a },
    Preset { name: "fig2b", description: "hopping defect (0,1), cosine R: visible", build: fig2b },
    Preset { name: "fig3a", description: "fiber-loop quantum walk, positive-frequency R_m: invisible", build: fig3a },
    Preset { name: "fig3b", description: "fiber-loop quantum walk, cosine R_m: visible", build: fig3b },
    Preset { name: "fig4nh", description: "42×42 square lattice, non-Hermitian R: I(t) decays", build: fig4nh },
    Preset { name: "fig4h", description: "42×42 square lattice, Hermitian cosine R: I(t) persists", build: fig4h },
    Preset {
        name: "appendix-selftest",
        description: "kernel areas, transform round trip, convolution relation, forbidden band",
        build: appendix_selftest,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

fn sqrt18() -> Real {
    Real::expr("sqrt(18)")
}

fn chain_1d() -> LatticeConfig {
    LatticeConfig { sites: 512, origin: -256, hopping: vec![1.0.into(), 0.2.into()], boundary: BoundaryConfig::HardWall }
}

fn positive(a: f64, w1: Real, b: f64, w2: Real) -> Vec<TermConfig> {
    vec![TermConfig::exp(a, w1), TermConfig::exp(b, w2)]
}

fn bilateral(a: f64, w1: Real, b: f64, w2: Real) -> Vec<TermConfig> {
    vec![TermConfig::cos(a, w1), TermConfig::cos(b, w2)]
}

fn scatter_1d(perturbation: PerturbationConfig, modulation: Vec<TermConfig>) -> ExperimentConfig {
    ExperimentConfig::Scatter1d(Scatter1dConfig {
        lattice: chain_1d(),
        perturbation,
        modulation,
        packet: PacketConfig { center: (-90.0).into(), width: 10.0.into(), carrier: half_pi() },
        t_end: 100.0.into(),
        frames: 200,
        threshold: 1e-2,
        check_overlap: true,
        edge_policy: EdgePolicy::Abort,
        integrator: IntegratorSection::default(),
    })
}

fn onsite_gaussian() -> PerturbationConfig {
    PerturbationConfig::Gaussian { v0: 5.0.into(), width: 2.0.into(), center: 0 }
}

fn bond() -> PerturbationConfig {
    PerturbationConfig::Bond { a: 0, b: 1, amplitude: 1.0.into() }
}

fn fig1a() -> ExperimentConfig {
    scatter_1d(onsite_gaussian(), positive(1.0, 5.0.into(), 1.0, sqrt18()))
}

fn fig1b() -> ExperimentConfig {
    scatter_1d(onsite_gaussian(), bilateral(1.0, 5.0.into(), 1.0, sqrt18()))
}

fn fig2a() -> ExperimentConfig {
    scatter_1d(bond(), positive(1.0, 5.0.into(), 1.0, sqrt18()))
}

fn fig2b() -> ExperimentConfig {
    scatter_1d(bond(), bilateral(1.0, 5.0.into(), 1.0, sqrt18()))
}

fn qwalk(modulation: Vec<TermConfig>) -> ExperimentConfig {
    ExperimentConfig::QWalk(QWalkFileConfig {
        beta: Real::expr("0.97*pi/2"),
        sites: 151,
        origin: -75,
        profile: QWalkProfileConfig { amplitude: 1.0.into(), width: 3.0.into(), center: 0 },
        modulation,
        initial_site: -15,
        steps: 400,
        far_radius: 10,
    })
}

fn fig3a() -> ExperimentConfig {
    qwalk(positive(0.1, 0.1.into(), 0.06, Real::expr("sqrt(2)/15")))
}

fn fig3b() -> ExperimentConfig {
    qwalk(bilateral(0.1, 0.1.into(), 0.06, Real::expr("sqrt(2)/15")))
}

fn square(modulation: Vec<TermConfig>) -> ExperimentConfig {
    ExperimentConfig::Scatter2d(Scatter2dConfig {
        lattice: Lattice2DConfig { nx: 42, ny: 42, origin: [-20, -20], kappa: 1.0.into() },
        perturbation: Gaussian2DConfig { v0: 25.0.into(), width: 2.0.into(), center: [0, 0] },
        modulation,
        packet: Packet2DConfig { center: [(-7.0).into(), (-7.0).into()], width: 3.0.into(), carrier: [half_pi(), half_pi()] },
        t_end: 15.0.into(),
        frames: vec![0.0.into(), 5.0.into(), 7.5.into(), 10.0.into(), 15.0.into()],
        series: 150,
        rule: RuleConfig::DecayFromPeak,
        threshold: 1e-2,
        check_overlap: false,
        edge_policy: EdgePolicy::Warn,
        integrator: IntegratorSection::default(),
    })
}

fn fig4nh() -> ExperimentConfig {
    square(positive(1.0, 10.0.into(), 1.0, Real::expr("2*sqrt(18)")))
}

fn fig4h() -> ExperimentConfig {
    square(bilateral(1.0, 10.0.into(), 1.0, Real::expr("2*sqrt(18)")))
}

fn appendix_selftest() -> ExperimentConfig {
    ExperimentConfig::SpectralSelftest(SelftestConfig {
        epsilon: 1e-3,
        t0: 10.0,
        t1: 5000.0,
        kernel_half_width: 50.0,
        poor_eps_t0: 1.0,
        round_trip: RoundTripConfig { dt: 0.0625, half_width: 20.0, step: 1e-3, points: 2001, margin: 1.0 },
        convolution: ConvolutionConfig { epsilon: 1e-2, t0: 10.0, t1: 500.0, dt: 0.04, half_width: 20.0, step: 2e-3, stride: 100 },
        forbidden_band: ForbiddenBandConfig {
            epsilon: 1e-2,
            t0: 10.0,
            t1: 1000.0,
            dt: 0.02,
            half_width: 20.0,
            step: 1e-2,
            site: 0,
            switch_on: SwitchOnConfig { center: 190.0, width: 50.0 },
            lattice: LatticeConfig {
                sites: 201,
                origin: -100,
                hopping: vec![1.0.into(), 0.2.into()],
                boundary: BoundaryConfig::Absorbing { width: 30, strength: 1.0 },
            },
            perturbation: onsite_gaussian(),
            modulation: positive(1.0, 5.0.into(), 1.0, sqrt18()),
            carrier: half_pi(),
        },
    })
}
