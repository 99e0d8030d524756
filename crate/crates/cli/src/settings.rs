use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ccsfa::{AtomicSystem, HalfCyclePulse, Variant};

/// Invalid input. Maps to exit status 1.
#[derive(Debug)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for SpecError {
    fn from(e: E) -> Self {
        SpecError(e.to_string())
    }
}

pub type SpecResult<T> = Result<T, SpecError>;

fn spec_err<T>(msg: impl Into<String>) -> SpecResult<T> {
    Err(SpecError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `start:stop:points[:log]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Range {
    pub fn parse(s: &str) -> SpecResult<Range> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 && parts.len() != 4 {
            return spec_err(format!("range '{s}' is not of the form a:b:n"));
        }
        let num = |v: &str| v.parse::<f64>().map_err(|_| SpecError(format!("bad number '{v}' in range '{s}'")));
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let points: usize = parts[2].parse().map_err(|_| SpecError(format!("bad point count in range '{s}'")))?;
        let spacing = match parts.get(3).map(|v| v.to_ascii_lowercase()) {
            None => Spacing::Linear,
            Some(v) if v == "lin" || v == "linear" => Spacing::Linear,
            Some(v) if v == "log" => Spacing::Log,
            Some(v) => return spec_err(format!("unknown spacing '{v}'")),
        };
        if points < 2 {
            return spec_err(format!("range '{s}' needs at least 2 points"));
        }
        if !(start.is_finite() && stop.is_finite()) || start == stop {
            return spec_err(format!("range '{s}' is empty"));
        }
        Ok(Range { start, stop, points, spacing })
    }

    /// As [`Range::parse`], also requiring positive end points.
    pub fn parse_positive(s: &str) -> SpecResult<Range> {
        let r = Range::parse(s)?;
        if r.start <= 0.0 || r.stop <= 0.0 {
            return spec_err(format!("range '{s}' must be positive"));
        }
        Ok(r)
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let u = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + u * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + u * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Variant selection; `HQA` adds the trajectory columns.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantSet {
    pub variants: Vec<Variant>,
    pub hqa: bool,
}

impl VariantSet {
    pub fn parse(s: &str) -> SpecResult<VariantSet> {
        let mut variants = Vec::new();
        let mut hqa = false;
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok.eq_ignore_ascii_case("hqa") {
                hqa = true;
            } else {
                variants.push(tok.parse::<Variant>()?);
            }
        }
        variants.sort();
        variants.dedup();
        if variants.is_empty() && !hqa {
            return spec_err("variant list is empty");
        }
        Ok(VariantSet { variants, hqa })
    }
}

impl Default for VariantSet {
    fn default() -> Self {
        VariantSet { variants: Variant::QUASICLASSICAL.to_vec(), hqa: false }
    }
}

/// Raw string values from the config file and the command line.
#[derive(Debug, Clone, Default)]
pub struct RawSettings {
    pub kappa: Option<String>,
    pub z: Option<String>,
    pub e0: Option<String>,
    pub omega: Option<String>,
    pub gamma: Option<String>,
    pub f_range: Option<String>,
    pub gamma_range: Option<String>,
    pub p_range: Option<String>,
    pub variants: Option<String>,
    pub out: Option<String>,
}

impl RawSettings {
    pub fn from_config(path: &Path) -> SpecResult<RawSettings> {
        let text = fs::read_to_string(path).map_err(|e| SpecError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_config(&text)
    }

    pub fn parse_config(text: &str) -> SpecResult<RawSettings> {
        let mut s = RawSettings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return spec_err(format!("config line {}: expected key=value", n + 1));
            };
            let value = Some(value.trim().to_string());
            let key = key.trim().trim_start_matches("--");
            match key {
                "kappa" => s.kappa = value,
                "Z" | "z" => s.z = value,
                "E0" | "e0" => s.e0 = value,
                "omega" => s.omega = value,
                "gamma" => s.gamma = value,
                "f-range" | "f_range" => s.f_range = value,
                "gamma-range" | "gamma_range" => s.gamma_range = value,
                "p-range" | "p_range" => s.p_range = value,
                "variants" => s.variants = value,
                "out" => s.out = value,
                other => return spec_err(format!("config line {}: unknown key '{other}'", n + 1)),
            }
        }
        Ok(s)
    }

    /// Values set in `over` replace those in `self`.
    pub fn overlay(self, over: RawSettings) -> RawSettings {
        RawSettings {
            kappa: over.kappa.or(self.kappa),
            z: over.z.or(self.z),
            e0: over.e0.or(self.e0),
            omega: over.omega.or(self.omega),
            gamma: over.gamma.or(self.gamma),
            f_range: over.f_range.or(self.f_range),
            gamma_range: over.gamma_range.or(self.gamma_range),
            p_range: over.p_range.or(self.p_range),
            variants: over.variants.or(self.variants),
            out: over.out.or(self.out),
        }
    }

    pub fn resolve(&self) -> SpecResult<Settings> {
        let num = |name: &str, v: &Option<String>| -> SpecResult<Option<f64>> {
            v.as_deref()
                .map(|s| s.trim().parse::<f64>().map_err(|_| SpecError(format!("--{name}: '{s}' is not a number"))))
                .transpose()
        };
        let kappa = num("kappa", &self.kappa)?.unwrap_or(1.0);
        let z = num("Z", &self.z)?.unwrap_or(1.0);
        Ok(Settings {
            atom: AtomicSystem::new(kappa, z)?,
            e0: num("E0", &self.e0)?,
            omega: num("omega", &self.omega)?,
            gamma: num("gamma", &self.gamma)?,
            f_range: self.f_range.as_deref().map(Range::parse_positive).transpose()?,
            gamma_range: self.gamma_range.as_deref().map(Range::parse_positive).transpose()?,
            p_range: self.p_range.as_deref().map(Range::parse).transpose()?,
            variants: self.variants.as_deref().map(VariantSet::parse).transpose()?.unwrap_or_default(),
            out: self.out.as_ref().map(PathBuf::from),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub atom: AtomicSystem,
    pub e0: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub f_range: Option<Range>,
    pub gamma_range: Option<Range>,
    pub p_range: Option<Range>,
    pub variants: VariantSet,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Pulse from any two of `E0`, `omega`, `gamma`; all three must agree.
    pub fn pulse(&self) -> SpecResult<HalfCyclePulse> {
        let k = self.atom.kappa;
        let pulse = match (self.e0, self.omega, self.gamma) {
            (Some(e0), Some(w), g) => {
                let p = HalfCyclePulse::new(e0, w)?;
                if let Some(g) = g {
                    let implied = w * k / e0;
                    if (implied - g).abs() > 1e-9 * g.abs().max(1.0) {
                        return spec_err(format!("E0, omega and gamma are inconsistent (E0 and omega imply gamma = {implied})"));
                    }
                }
                p
            }
            (Some(e0), None, Some(g)) => HalfCyclePulse::new(e0, g * e0 / k)?,
            (None, Some(w), Some(g)) => HalfCyclePulse::from_omega_gamma(&self.atom, w, g)?,
            _ => return spec_err("the pulse needs two of --E0, --omega, --gamma"),
        };
        Ok(pulse)
    }

    pub fn gamma_or(&self, default: f64) -> SpecResult<f64> {
        let g = self.gamma.unwrap_or(default);
        if !(g > 0.0) {
            return spec_err(format!("--gamma must be positive, got {g}"));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = Range::parse("0.005:0.05:10").unwrap();
        let v = r.values();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 0.005);
        assert!((v[9] - 0.05).abs() < 1e-15);
        let l = Range::parse("1:100:3:log").unwrap().values();
        assert!((l[1] - 10.0).abs() < 1e-12);
        assert!(Range::parse("1:2:1").is_err());
        assert!(Range::parse("1:2").is_err());
        assert!(Range::parse_positive("-1:2:4").is_err());
    }

    #[test]
    fn variant_lists() {
        let v = VariantSet::parse("s2qu, S0,hqa").unwrap();
        assert_eq!(v.variants, vec![Variant::S0, Variant::S2qu]);
        assert!(v.hqa);
        assert!(VariantSet::parse("S3").is_err());
        assert!(VariantSet::parse(" , ").is_err());
    }

    #[test]
    fn flags_override_config() {
        let file = RawSettings::parse_config("# comment\nkappa = 2\nZ=0.5\n\ngamma=0.3\n").unwrap();
        let flags = RawSettings { z: Some("1".into()), ..Default::default() };
        let s = file.overlay(flags).resolve().unwrap();
        assert_eq!(s.atom.kappa, 2.0);
        assert_eq!(s.atom.charge, 1.0);
        assert_eq!(s.gamma, Some(0.3));
        assert!(RawSettings::parse_config("foo=1").is_err());
        assert!(RawSettings::parse_config("kappa").is_err());
    }

    #[test]
    fn pulse_resolution() {
        let mut s = RawSettings { e0: Some("0.02".into()), gamma: Some("0.1".into()), ..Default::default() }.resolve().unwrap();
        let p = s.pulse().unwrap();
        assert!((p.omega - 0.002).abs() < 1e-15);
        s.omega = Some(0.5);
        assert!(s.pulse().is_err());
        s.e0 = None;
        s.gamma = None;
        assert!(s.pulse().is_err());
    }
}
