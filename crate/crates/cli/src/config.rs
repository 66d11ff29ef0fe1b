//! Run configuration. Sources are layered as flags over a TOML file over
//! `GAMMALAB_*` environment variables over built-in defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub degree_cap: usize,
    pub subgroup_cap: u64,
    pub subset_cap: usize,
    pub screen_size: usize,
    pub tolerance: f64,
    pub work_cap: u64,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            degree_cap: gammalab_core::numfield::DEFAULT_DEGREE_CAP,
            subgroup_cap: 4096,
            subset_cap: gammalab_core::gamma::MAX_SCAN_STAGES,
            screen_size: gammalab_core::heights::DEFAULT_SCREEN_SIZE,
            tolerance: gammalab_core::heights::DEFAULT_TOLERANCE,
            work_cap: gammalab_core::heights::DEFAULT_WORK_CAP,
            seed: 0,
            format: Format::Json,
            cache_dir: None,
            threads: None,
        }
    }
}

/// One layer of settings; `None` leaves the lower layer in place.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub degree_cap: Option<usize>,
    pub subgroup_cap: Option<u64>,
    pub subset_cap: Option<usize>,
    pub screen_size: Option<usize>,
    pub tolerance: Option<f64>,
    pub work_cap: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Overrides {
    /// Reads `GAMMALAB_<FIELD>` variables through `get`.
    pub fn from_env(get: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        fn parse<T: std::str::FromStr>(
            get: &impl Fn(&str) -> Option<String>,
            key: &str,
        ) -> Result<Option<T>, String>
        where
            T::Err: std::fmt::Display,
        {
            match get(key) {
                None => Ok(None),
                Some(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|e| format!("{key}={v:?}: {e}")),
            }
        }
        Ok(Self {
            degree_cap: parse(&get, "GAMMALAB_DEGREE_CAP")?,
            subgroup_cap: parse(&get, "GAMMALAB_SUBGROUP_CAP")?,
            subset_cap: parse(&get, "GAMMALAB_SUBSET_CAP")?,
            screen_size: parse(&get, "GAMMALAB_SCREEN_SIZE")?,
            tolerance: parse(&get, "GAMMALAB_TOLERANCE")?,
            work_cap: parse(&get, "GAMMALAB_WORK_CAP")?,
            seed: parse(&get, "GAMMALAB_SEED")?,
            format: parse(&get, "GAMMALAB_FORMAT")?,
            cache_dir: get("GAMMALAB_CACHE_DIR").map(PathBuf::from),
            threads: parse(&get, "GAMMALAB_THREADS")?,
        })
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn apply(&self, c: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    c.$f = v.clone();
                }
            )*};
        }
        set!(
            degree_cap,
            subgroup_cap,
            subset_cap,
            screen_size,
            tolerance,
            work_cap,
            seed,
            format
        );
        if self.cache_dir.is_some() {
            c.cache_dir = self.cache_dir.clone();
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
    }
}

impl RunConfig {
    /// Defaults, then environment, then file, then flags.
    pub fn resolve(
        env: &Overrides,
        file: Option<&Overrides>,
        flags: &Overrides,
    ) -> Result<Self, String> {
        let mut c = RunConfig::default();
        env.apply(&mut c);
        if let Some(f) = file {
            f.apply(&mut c);
        }
        flags.apply(&mut c);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("degree_cap", self.degree_cap as u64),
            ("subgroup_cap", self.subgroup_cap),
            ("subset_cap", self.subset_cap as u64),
            ("screen_size", self.screen_size as u64),
            ("work_cap", self.work_cap),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(format!("{name} must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err("tolerance must be positive".into());
        }
        if self.subset_cap > 12 {
            return Err("subset_cap is at most 12".into());
        }
        Ok(())
    }

    /// SHA-256 of the settings that influence results.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let env = Overrides::from_env(|k| match k {
            "GAMMALAB_SEED" => Some("1".into()),
            "GAMMALAB_SCREEN_SIZE" => Some("10".into()),
            "GAMMALAB_DEGREE_CAP" => Some("8".into()),
            _ => None,
        })
        .unwrap();
        let file: Overrides = toml::from_str("seed = 2\nscreen_size = 20\n").unwrap();
        let flags = Overrides {
            seed: Some(3),
            ..Default::default()
        };
        let c = RunConfig::resolve(&env, Some(&file), &flags).unwrap();
        assert_eq!((c.seed, c.screen_size, c.degree_cap), (3, 20, 8));
        assert_eq!(c.subgroup_cap, 4096);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Overrides::from_env(|k| (k == "GAMMALAB_SEED").then(|| "x".into())).is_err());
        assert!(toml::from_str::<Overrides>("unknown = 1").is_err());
        let flags = Overrides {
            screen_size: Some(0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&Overrides::default(), None, &flags).is_err());
    }

    #[test]
    fn digest_tracks_settings() {
        let a = RunConfig::default();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        b.cache_dir = Some("/tmp/x".into());
        assert_eq!(a.digest(), b.digest());
        b.seed = 9;
        assert_ne!(a.digest(), b.digest());
    }
}
