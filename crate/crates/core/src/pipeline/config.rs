use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capalign::DEFAULT_WINDOW_S;
use crate::docalign::{DocAlignConfig, VECTOR_BITS};
use crate::filter::FilterConfig;
use crate::normalize::NormalizeConfig;
use crate::spellcheck::DEFAULT_MAX_COST;
use crate::{Error, Result};

/// Resource files. Unset entries fall back to the built-in lists or, for
/// required files, fail validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResourceConfig {
    pub dictionary: Option<PathBuf>,
    pub misspellings: Option<PathBuf>,
    pub unigrams: Option<PathBuf>,
    pub bigrams: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub en_stopwords: Option<PathBuf>,
    pub ja_particles: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpellcheckConfig {
    pub enabled: bool,
    pub max_cost: u32,
}

impl Default for SpellcheckConfig {
    fn default() -> Self {
        SpellcheckConfig { enabled: true, max_cost: DEFAULT_MAX_COST }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapAlignConfig {
    /// Half-width of the caption search window, in seconds.
    pub window_s: f64,
}

impl Default for CapAlignConfig {
    fn default() -> Self {
        CapAlignConfig { window_s: DEFAULT_WINDOW_S }
    }
}

/// Everything a pipeline run needs. Loadable from TOML; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub en_dir: PathBuf,
    pub ja_dir: PathBuf,
    pub output_dir: PathBuf,
    /// Overrides `filter.seed` when set.
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub resources: ResourceConfig,
    pub normalize: NormalizeConfig,
    pub spellcheck: SpellcheckConfig,
    pub docalign: DocAlignConfig,
    pub capalign: CapAlignConfig,
    pub filter: FilterConfig,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            e => e,
        })?;
        if let Some(base) = path.parent() {
            config.resolve_relative(base);
        }
        Ok(config)
    }

    /// Makes every relative path relative to `base` instead of the working
    /// directory. Empty paths stay empty.
    pub fn resolve_relative(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if !p.as_os_str().is_empty() && p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.en_dir);
        fix(&mut self.ja_dir);
        fix(&mut self.output_dir);
        let r = &mut self.resources;
        for p in [
            &mut r.dictionary,
            &mut r.misspellings,
            &mut r.unigrams,
            &mut r.bigrams,
            &mut r.lexicon,
            &mut r.embeddings,
            &mut r.en_stopwords,
            &mut r.ja_particles,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    /// Filter settings with the top-level seed applied.
    pub fn effective_filter(&self) -> FilterConfig {
        FilterConfig { seed: self.seed.unwrap_or(self.filter.seed), ..self.filter }
    }

    /// Checks thresholds and, when `check_paths` is set, that every input
    /// and resource path the run will read exists.
    pub fn validate(&self, check_paths: bool) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let unit = |name: &str, v: f64| (0.0..=1.0).contains(&v).then_some(()).ok_or(format!("{name} must be in [0, 1], got {v}"));
        unit("docalign.title_threshold", self.docalign.title_threshold).map_err(Error::Config)?;
        unit("docalign.hamming_threshold", self.docalign.hamming_threshold).map_err(Error::Config)?;
        if self.docalign.shift_range_s as usize >= VECTOR_BITS {
            return bad(format!("docalign.shift_range_s must be below {VECTOR_BITS}"));
        }
        if !(self.capalign.window_s.is_finite() && self.capalign.window_s >= 0.0) {
            return bad(format!("capalign.window_s must be a non-negative number, got {}", self.capalign.window_s));
        }
        if !self.filter.percentile_z.is_finite() {
            return bad("filter.percentile_z must be finite".into());
        }
        if self.spellcheck.max_cost > 8 {
            return bad(format!("spellcheck.max_cost must be at most 8, got {}", self.spellcheck.max_cost));
        }
        if !check_paths {
            return Ok(());
        }
        for (name, dir) in [("en_dir", &self.en_dir), ("ja_dir", &self.ja_dir)] {
            if !dir.is_dir() {
                return bad(format!("{name} `{}` is not a directory", dir.display()));
            }
        }
        if self.output_dir.as_os_str().is_empty() {
            return bad("output_dir is not set".into());
        }
        let r = &self.resources;
        let mut required = vec![("resources.lexicon", &r.lexicon), ("resources.embeddings", &r.embeddings)];
        if self.spellcheck.enabled {
            required.extend([
                ("resources.dictionary", &r.dictionary),
                ("resources.misspellings", &r.misspellings),
                ("resources.unigrams", &r.unigrams),
                ("resources.bigrams", &r.bigrams),
            ]);
        }
        for (name, path) in required {
            match path {
                None => return bad(format!("{name} is required")),
                Some(p) if !p.is_file() => return bad(format!("{name} `{}` does not exist", p.display())),
                Some(_) => {}
            }
        }
        for (name, path) in [("resources.en_stopwords", &r.en_stopwords), ("resources.ja_particles", &r.ja_particles)] {
            if let Some(p) = path {
                if !p.is_file() {
                    return bad(format!("{name} `{}` does not exist", p.display()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = PipelineConfig::from_toml(
            r#"
            en_dir = "a"
            seed = 9
            [normalize.rules.lowercase]
            enabled = false
            [docalign]
            shift_range_s = 30
            [filter]
            val_size = 3
            "#,
        )
        .unwrap();
        assert_eq!(c.docalign.shift_range_s, 30);
        assert_eq!(c.docalign.title_threshold, 0.90);
        assert_eq!(c.filter.val_size, 3);
        assert_eq!(c.filter.test_size, 2001);
        assert_eq!(c.effective_filter().seed, 9);
        assert!(!c.normalize.rules.lowercase.enabled);
        assert_eq!(c.capalign.window_s, 12.5);
        assert_eq!(PipelineConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_ranges() {
        assert!(PipelineConfig::from_toml("[docalign]\ntitle_treshold = 0.5\n").is_err());
        let mut c = PipelineConfig::default();
        c.docalign.hamming_threshold = 1.5;
        assert!(c.validate(false).is_err());
        let c = PipelineConfig::default();
        assert!(c.validate(false).is_ok());
        assert!(c.validate(true).is_err());
    }
}
