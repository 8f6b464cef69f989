//! Numbers that may be written as arithmetic expressions in config files.

use std::fmt;

use latinvis_core::C64;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A real number, optionally carrying the expression it was written as
/// (`"sqrt(18)"`, `"0.97*pi/2"`). The expression is written back on
/// serialization so configs round-trip textually.
#[derive(Debug, Clone, PartialEq)]
pub struct Real {
    value: f64,
    expr: Option<String>,
}

impl Real {
    pub fn parse(text: &str) -> Result<Self, String> {
        let value = meval::eval_str(text).map_err(|e| format!("cannot evaluate `{text}`: {e}"))?;
        if !value.is_finite() {
            return Err(format!("`{text}` is not finite"));
        }
        Ok(Self { value, expr: Some(text.to_string()) })
    }

    /// Panics on a malformed expression; meant for code-embedded presets.
    pub fn expr(text: &str) -> Self {
        Self::parse(text).unwrap()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn text(&self) -> Option<&str> {
        self.expr.as_deref()
    }
}

impl From<f64> for Real {
    fn from(value: f64) -> Self {
        Self { value, expr: None }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            Some(e) => write!(f, "{e}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.expr {
            Some(e) => s.serialize_str(e),
            None => s.serialize_f64(self.value),
        }
    }
}

struct RealVisitor;

impl Visitor<'_> for RealVisitor {
    type Value = Real;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or an arithmetic expression string")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
        Ok(Real::from(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
        Ok(Real::from(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
        Ok(Real::from(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
        Real::parse(v).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RealVisitor)
    }
}

/// Complex amplitude: a real number (or expression) or a `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(Real),
    Complex([Real; 2]),
}

impl Amplitude {
    pub fn value(&self) -> C64 {
        match self {
            Amplitude::Real(r) => C64::new(r.value(), 0.0),
            Amplitude::Complex([re, im]) => C64::new(re.value(), im.value()),
        }
    }
}

impl From<f64> for Amplitude {
    fn from(v: f64) -> Self {
        Amplitude::Real(v.into())
    }
}
