//! Parameter sweeps over a single config key.

use anyhow::{bail, Context, Result};
use toml::Value;

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Key path such as `packet.carrier` or `modulation[1].frequency`.
    pub path: Vec<Segment>,
    pub raw_path: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Key(String),
    Index(usize),
}

impl Sweep {
    /// Parses `path=start:stop:count` (inclusive, evenly spaced) or
    /// `path=a,b,c`. List entries may be expressions like `sqrt(18)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (path, range) = spec.split_once('=').context("sweep must look like path=start:stop:count or path=a,b,c")?;
        let raw_path = path.trim().to_string();
        let path = parse_path(&raw_path)?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let values: Vec<String> = match parts.as_slice() {
            [start, stop, count] => {
                let start: f64 = start.parse().with_context(|| format!("sweep start `{start}`"))?;
                let stop: f64 = stop.parse().with_context(|| format!("sweep stop `{stop}`"))?;
                let count: usize = count.parse().with_context(|| format!("sweep count `{count}`"))?;
                if count == 0 {
                    bail!("sweep count must be positive");
                }
                (0..count)
                    .map(|k| {
                        let x = if count == 1 { start } else { start + (stop - start) * k as f64 / (count - 1) as f64 };
                        format!("{x}")
                    })
                    .collect()
            }
            [list] => list.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect(),
            _ => bail!("sweep range `{range}` is neither start:stop:count nor a comma list"),
        };
        if values.is_empty() {
            bail!("sweep `{raw_path}` has no values");
        }
        Ok(Self { path, raw_path, values })
    }

    /// One config per value, with the swept key replaced.
    pub fn configs(&self, base: &ExperimentConfig) -> Result<Vec<ExperimentConfig>> {
        let root = base.to_value()?;
        self.values
            .iter()
            .map(|v| {
                let mut doc = root.clone();
                let slot = lookup(&mut doc, &self.path).with_context(|| format!("sweep path `{}`", self.raw_path))?;
                *slot = replacement(slot, v)?;
                ExperimentConfig::from_value(doc).with_context(|| format!("sweep {}={v}", self.raw_path))
            })
            .collect()
    }
}

fn parse_path(path: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if !key.is_empty() {
            out.push(Segment::Key(key.to_string()));
        }
        while let Some(r) = rest.strip_prefix('[') {
            let (idx, tail) = r.split_once(']').with_context(|| format!("unclosed `[` in `{path}`"))?;
            out.push(Segment::Index(idx.parse().with_context(|| format!("bad index `{idx}` in `{path}`"))?));
            rest = tail;
        }
        if !rest.is_empty() {
            bail!("cannot parse `{part}` in `{path}`");
        }
    }
    if out.is_empty() {
        bail!("empty sweep path");
    }
    Ok(out)
}

fn lookup<'a>(doc: &'a mut Value, path: &[Segment]) -> Result<&'a mut Value> {
    let mut cur = doc;
    for seg in path {
        cur = match seg {
            Segment::Key(k) => cur.get_mut(k.as_str()).with_context(|| format!("no key `{k}`"))?,
            Segment::Index(i) => cur.get_mut(*i).with_context(|| format!("no element [{i}]"))?,
        };
    }
    Ok(cur)
}

/// Keeps integers integral and passes anything that is not a plain number
/// on as an expression string.
fn replacement(old: &Value, text: &str) -> Result<Value> {
    if let Value::Integer(_) = old {
        let x: f64 = text.parse().with_context(|| format!("`{text}` is not a number"))?;
        if x.fract() != 0.0 {
            bail!("`{text}` is not an integer");
        }
        return Ok(Value::Integer(x as i64));
    }
    Ok(match text.parse::<f64>() {
        Ok(x) => Value::Float(x),
        Err(_) => Value::String(text.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::find;

    #[test]
    fn ranges_and_lists_parse() {
        let s = Sweep::parse("packet.carrier=0.5:1.5:3").unwrap();
        assert_eq!(s.values, vec!["0.5", "1", "1.5"]);
        assert_eq!(s.path, vec![Segment::Key("packet".into()), Segment::Key("carrier".into())]);
        let s = Sweep::parse("modulation[1].frequency=5,sqrt(18)").unwrap();
        assert_eq!(s.path[1], Segment::Index(1));
        assert_eq!(s.values.len(), 2);
        assert!(Sweep::parse("packet.carrier").is_err());
        assert!(Sweep::parse("a=1:2").is_err());
        assert!(Sweep::parse("a[x]=1").is_err());
    }

    #[test]
    fn configs_replace_only_the_swept_key() {
        let base = find("fig1a").unwrap().config();
        let cfgs = Sweep::parse("modulation[1].frequency=4.5,sqrt(20)").unwrap().configs(&base).unwrap();
        let ExperimentConfig::Scatter1d(c) = &cfgs[1] else { panic!() };
        assert_eq!(c.modulation[1].frequency.value(), 20f64.sqrt());
        let ExperimentConfig::Scatter1d(b) = &base else { panic!() };
        assert_eq!(c.packet, b.packet);

        let cfgs = Sweep::parse("lattice.sites=400:600:2").unwrap().configs(&base).unwrap();
        let ExperimentConfig::Scatter1d(c) = &cfgs[1] else { panic!() };
        assert_eq!(c.lattice.sites, 600);
        assert!(Sweep::parse("lattice.sites=400.5").unwrap().configs(&base).is_err());
        assert!(Sweep::parse("lattice.nope=1").unwrap().configs(&base).is_err());
    }
}
