//! Deterministic CSV and JSON output.
//!
//! Every CSV starts with a `# config_sha256=<hex>` comment line followed by
//! a header row. Floats are written with 17 significant digits.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use latinvis_core::dispersion::Decay;
use latinvis_core::scattering::{ExperimentResult, Guarantee, Verdict, VerdictRule};
use latinvis_core::spectral::{AreaReport, UniformGrid};
use latinvis_core::C64;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::runner::{DispersionOutcome, FieldOutcome, Outcome, QWalkOutcome};
use crate::selftest::SelftestReport;

pub const HASH_PREFIX: &str = "# config_sha256=";

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// SHA-256 of the resolved config serialized as compact JSON.
pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let text = serde_json::to_string(&cfg.to_value()?)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

pub struct OutputDir {
    root: PathBuf,
    hash: String,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path, cfg: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), hash: config_hash(cfg)?, files: Vec::new() })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.root.join(name);
        let mut w = BufWriter::new(fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(w, "{HASH_PREFIX}{}", self.hash)?;
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let path = self.root.join(name);
        fs::write(&path, serde_json::to_string_pretty(value)? + "\n").with_context(|| format!("writing {}", path.display()))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Writes `manifest.json`; call last so the file list is complete.
    pub fn finish(mut self, cfg: &ExperimentConfig, diagnostics: Value) -> Result<PathBuf> {
        let manifest = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "kind": cfg.kind(),
            "config": serde_json::to_value(cfg.to_value()?)?,
            "config_sha256": self.hash,
            "diagnostics": diagnostics,
            "files": self.files,
        });
        self.json("manifest.json", &manifest)?;
        Ok(self.root.join("manifest.json"))
    }
}

/// Writes every output of `outcome` into `dir` and returns the manifest path.
pub fn write_outcome(dir: &Path, cfg: &ExperimentConfig, outcome: &Outcome) -> Result<PathBuf> {
    let mut out = OutputDir::create(dir, cfg)?;
    let diagnostics = match outcome {
        Outcome::Dispersion(d) => dispersion(&mut out, d)?,
        Outcome::Scatter1d { lattice, result, guarantee } => {
            let labels: Vec<Vec<String>> = lattice.labels().map(|n| vec![n.to_string()]).collect();
            scatter(&mut out, result, *guarantee, &labels, &["site"], None)?
        }
        Outcome::Scatter2d { lattice, result, frames, guarantee } => {
            let labels: Vec<Vec<String>> = (0..lattice.len())
                .map(|i| {
                    let (n, m) = lattice.label(i);
                    vec![n.to_string(), m.to_string()]
                })
                .collect();
            scatter(&mut out, result, *guarantee, &labels, &["n", "m"], Some(frames))?
        }
        Outcome::ScatteredField(f) => field(&mut out, f)?,
        Outcome::QWalk(q) => qwalk(&mut out, q)?,
        Outcome::Selftest(r) => selftest(&mut out, r)?,
    };
    out.finish(cfg, diagnostics)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Invisible => "invisible",
        Verdict::Visible => "visible",
    }
}

fn rule_name(r: VerdictRule) -> &'static str {
    match r {
        VerdictRule::RelativeToReference => "relative-to-reference",
        VerdictRule::DecayFromPeak => "decay-from-peak",
    }
}

fn guarantee_name(g: Guarantee) -> &'static str {
    match g {
        Guarantee::GuaranteedInvisible => "guaranteed-invisible",
        Guarantee::NotGuaranteed => "not-guaranteed",
    }
}

fn dispersion(out: &mut OutputDir, d: &DispersionOutcome) -> Result<Value> {
    out.csv(
        "band.csv",
        &["q", "energy", "group_velocity"],
        d.samples.iter().map(|(q, p)| vec![float(*q), float(p.energy), float(p.group_velocity)]),
    )?;
    let rows = d.roots.iter().flat_map(|s| {
        s.roots.iter().map(move |r| {
            let side = match r.decay {
                Decay::Right => "right",
                Decay::Left => "left",
            };
            vec![float(s.energy), float(r.z.re), float(r.z.im), float(r.q.re), float(r.q.im), float(r.decay_rate), side.into()]
        })
    });
    out.csv("bloch_roots.csv", &["energy", "z_re", "z_im", "q_re", "q_im", "decay_rate", "decays_towards"], rows)?;
    Ok(json!({
        "band": { "e_min": d.band.e_min, "e_max": d.band.e_max, "width": d.band.width, "v_max": d.band.v_max },
        "energies": d.roots.iter().map(|s| json!({
            "energy": s.energy,
            "decay_rate_right": s.decay_rate_right,
            "decay_rate_left": s.decay_rate_left,
        })).collect::<Vec<_>>(),
    }))
}

fn scatter(
    out: &mut OutputDir,
    r: &ExperimentResult,
    guarantee: Guarantee,
    labels: &[Vec<String>],
    site_columns: &[&str],
    frames: Option<&[f64]>,
) -> Result<Value> {
    let mut header: Vec<&str> = site_columns.to_vec();
    header.extend(["abs_psi", "abs_psi_ref"]);
    out.csv(
        "profile_final.csv",
        &header,
        labels.iter().zip(r.final_profile.iter().zip(&r.final_reference_profile)).map(|(l, (p, q))| {
            let mut row = l.clone();
            row.extend([float(*p), float(*q)]);
            row
        }),
    )?;
    out.csv(
        "error_series.csv",
        &["t", "error"],
        r.times().iter().zip(&r.error_series).map(|(t, e)| vec![float(*t), float(*e)]),
    )?;
    let mut header = vec!["t"];
    header.extend(site_columns);
    header.push("abs_psi");
    let keep: Vec<usize> = match frames {
        None => (0..r.perturbed.times.len()).collect(),
        Some(fs) => (0..r.perturbed.times.len())
            .filter(|&k| fs.iter().any(|f| (r.perturbed.times[k] - f).abs() <= 1e-12 * f.abs().max(1.0)))
            .collect(),
    };
    let rows = keep.into_iter().flat_map(|k| {
        let t = float(r.perturbed.times[k]);
        r.perturbed.states[k].iter().zip(labels).map(move |(z, l)| {
            let mut row = vec![t.clone()];
            row.extend(l.iter().cloned());
            row.push(float(z.norm()));
            row
        })
    });
    out.csv("heatmap.csv", &header, rows)?;

    let reference_peak = r.final_reference_profile.iter().copied().fold(0.0, f64::max);
    let verdict = json!({
        "verdict": verdict_name(r.verdict),
        "valid": r.verdict_is_valid(),
        "rule": rule_name(r.rule),
        "threshold": r.threshold,
        "final_error": r.final_error(),
        "peak_error": r.peak_error(),
        "reference_peak": reference_peak,
        "guarantee": guarantee_name(guarantee),
    });
    out.json("verdict.json", &verdict)?;
    Ok(json!({
        "verdict": verdict,
        "edge": {
            "limit": r.edge.limit,
            "worst_ratio": r.edge.worst_ratio,
            "first_trip": r.edge.first_trip,
            "tripped": r.edge.tripped(),
        },
        "initial_overlap": r.initial_overlap,
        "steps": {
            "perturbed": r.perturbed.stats.accepted,
            "rejected": r.perturbed.stats.rejected,
            "reference": r.reference.stats.accepted,
        },
    }))
}

fn field(out: &mut OutputDir, f: &FieldOutcome) -> Result<Value> {
    let fd = &f.field;
    let rows = fd.times.iter().zip(&fd.fields).flat_map(|(t, s)| {
        s.iter().enumerate().map(move |(i, z)| vec![float(*t), (fd.origin + i as i64).to_string(), float(z.re), float(z.im)])
    });
    out.csv("field.csv", &["t", "site", "re", "im"], rows)?;
    Ok(json!({
        "energy": fd.energy,
        "guarantee": guarantee_name(f.guarantee),
        "residual": f.residual,
        "absorber_ratio": fd.absorber_ratio,
        "absorber_saturated": fd.absorber_saturated,
        "predicted_decay_rate": f.predicted_rate,
        "fit": f.fit.as_ref().map(|e| json!({
            "decay_rate": e.decay_rate,
            "amplitude": e.amplitude,
            "sites": e.sites,
        })),
    }))
}

fn qwalk(out: &mut OutputDir, q: &QWalkOutcome) -> Result<Value> {
    let rows = q.states.iter().zip(&q.errors).flat_map(|(s, e)| {
        let m = s.step.to_string();
        s.intensity()
            .into_iter()
            .zip(e.iter().copied())
            .enumerate()
            .map(move |(i, (a, b))| vec![m.clone(), q.walk.label(i).to_string(), float(a), float(b)])
            .collect::<Vec<_>>()
    });
    out.csv("qwalk.csv", &["m", "n", "intensity", "error"], rows)?;
    Ok(json!({
        "far_field": q.far_field,
        "peak_intensity": q.peak_intensity,
        "contrast": if q.far_field > 0.0 { Some(q.peak_intensity / q.far_field) } else { None },
        "intensity_drift": q.intensity_drift,
    }))
}

fn spectrum_rows<'a>(grid: &'a UniformGrid, s: &'a [C64]) -> impl Iterator<Item = Vec<String>> + 'a {
    grid.points().zip(s).map(|(w, z)| vec![float(w), float(z.re), float(z.im)])
}

fn area(a: &AreaReport) -> Value {
    json!({
        "re": a.area.re,
        "im": a.area.im,
        "tail_estimate": a.tail_estimate,
        "eps_t0": a.regime.eps_t0,
        "eps_t1": a.regime.eps_t1,
        "regime_acceptable": a.regime.acceptable,
    })
}

fn selftest(out: &mut OutputDir, r: &SelftestReport) -> Result<Value> {
    out.csv("spectrum.csv", &["omega", "re", "im"], spectrum_rows(&r.round_trip.grid, &r.round_trip.spectrum))?;
    out.csv("field_spectrum.csv", &["omega", "re", "im"], spectrum_rows(&r.forbidden.grid, &r.forbidden.spectrum))?;
    Ok(json!({
        "regime": { "eps_t0": r.regime.eps_t0, "eps_t1": r.regime.eps_t1, "acceptable": r.regime.acceptable },
        "window_kernel_area": area(&r.kernel_area),
        "theta_area": area(&r.theta_area),
        "poor_regime_kernel_area": area(&r.poor_kernel_area),
        "round_trip_rel_l2": r.round_trip.rel_l2,
        "convolution": {
            "deviation": r.convolution.deviation,
            "pointwise_deviation": r.convolution.pointwise_deviation,
            "points": r.convolution.points,
        },
        "forbidden_band": {
            "omega0": r.forbidden.omega0,
            "bandwidth": r.forbidden.bandwidth,
            "from": r.forbidden.from,
            "ratio": r.forbidden.ratio,
            "absorber_ratio": r.forbidden.absorber_ratio,
        },
    }))
}
