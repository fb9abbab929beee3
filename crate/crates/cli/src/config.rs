//! Experiment configuration: an optional TOML file, overridden field by
//! field by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

/// Fields accepted in a config file. All are optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub poly: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub rhos: Option<Vec<f64>>,
    #[serde(rename = "as")]
    pub a_values: Option<Vec<String>>,
    pub alpha: Option<Vec<f64>>,
    pub degree: Option<u32>,
    pub at: Option<String>,
    pub grid: Option<usize>,
    pub phases: Option<usize>,
    pub polytope: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: FileConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // relative paths in a config file are relative to the file
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.poly, &mut cfg.out, &mut cfg.polytope].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Settings after merging file and flags.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub poly: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: u64,
    pub window: Option<(f64, f64)>,
    pub samples: Option<usize>,
    pub rhos: Option<Vec<f64>>,
    pub a_values: Option<Vec<Complex64>>,
    pub alpha: Option<Vec<f64>>,
    pub degree: Option<u32>,
    pub at: Option<Complex64>,
    pub grid: Option<usize>,
    pub phases: Option<usize>,
    pub polytope: Option<PathBuf>,
}

/// Flag values; `None` means "not given on the command line".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub poly: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub rhos: Option<Vec<f64>>,
    pub a_values: Option<Vec<String>>,
    pub alpha: Option<Vec<f64>>,
    pub degree: Option<u32>,
    pub at: Option<String>,
    pub grid: Option<usize>,
    pub phases: Option<usize>,
    pub polytope: Option<PathBuf>,
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim().replace(' ', "");
    t.parse::<Complex64>()
        .map_err(|e| anyhow::anyhow!("cannot parse '{s}' as a complex number: {e}"))
}

fn window_pair(v: Vec<f64>) -> Result<(f64, f64)> {
    match v[..] {
        [lo, hi] if lo < hi && lo.is_finite() && hi.is_finite() => Ok((lo, hi)),
        _ => bail!("window must be 'lo,hi' with lo < hi, got {v:?}"),
    }
}

fn strictly_decreasing(v: &[f64], what: &str) -> Result<()> {
    if v.is_empty() {
        bail!("{what} list is empty");
    }
    if v.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
        bail!("{what} values must be positive and finite");
    }
    if v.windows(2).any(|w| !(w[1] < w[0])) {
        bail!("{what} values must be strictly decreasing");
    }
    Ok(())
}

impl Settings {
    pub fn resolve(kind: &str, file: Option<FileConfig>, flags: Overrides) -> Result<Self> {
        let file = file.unwrap_or_default();
        if let Some(k) = &file.experiment {
            if k != kind {
                bail!("config is for experiment '{k}', not '{kind}'");
            }
        }
        let window = flags.window.or(file.window).map(window_pair).transpose()?;
        let a_values = flags
            .a_values
            .or(file.a_values)
            .map(|v| v.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>())
            .transpose()?;
        if let Some(a) = &a_values {
            let moduli: Vec<f64> = a.iter().map(|z| z.norm()).collect();
            strictly_decreasing(&moduli, "|a|")?;
        }
        let rhos = flags.rhos.or(file.rhos);
        if let Some(r) = &rhos {
            strictly_decreasing(r, "rho")?;
        }
        let at = flags.at.or(file.at).map(|s| parse_complex(&s)).transpose()?;
        Ok(Settings {
            poly: flags.poly.or(file.poly),
            out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            window,
            samples: flags.samples.or(file.samples),
            rhos,
            a_values,
            alpha: flags.alpha.or(file.alpha),
            degree: flags.degree.or(file.degree),
            at,
            grid: flags.grid.or(file.grid),
            phases: flags.phases.or(file.phases),
            polytope: flags.polytope.or(file.polytope),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            r#"
experiment = "converge-a"
seed = 3
samples = 100
rhos = [0.2, 0.1]
window = [-2.0, 2.0]
"#,
        )
        .unwrap();
        let flags = Overrides {
            seed: Some(9),
            ..Overrides::default()
        };
        let s = Settings::resolve("converge-a", Some(file.clone()), flags).unwrap();
        assert_eq!(s.seed, 9);
        assert_eq!(s.samples, Some(100));
        assert_eq!(s.window, Some((-2.0, 2.0)));
        assert!(Settings::resolve("family-b", Some(file), Overrides::default()).is_err());
    }

    #[test]
    fn validates_lists() {
        let bad = Overrides {
            rhos: Some(vec![0.1, 0.2]),
            ..Overrides::default()
        };
        assert!(Settings::resolve("converge-a", None, bad).is_err());
        let a = Overrides {
            a_values: Some(vec!["0.5".into(), "0.1+0.1i".into(), "-0.05".into()]),
            ..Overrides::default()
        };
        let s = Settings::resolve("family-b", None, a).unwrap();
        assert_eq!(s.a_values.unwrap()[1], Complex64::new(0.1, 0.1));
        assert!(parse_complex("abc").is_err());
        assert!(toml::from_str::<FileConfig>("nonsense = 1").is_err());
    }
}
