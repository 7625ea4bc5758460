//! TOML configuration: extra Weyl-constant profiles and an optional 𝔣 bound.
//!
//! ```toml
//! profile = "eps0.2"      # used when no profile is named on the command line
//! f_bound = "40"          # bound on 𝔣, needed for 𝔪
//!
//! [profiles."eps0.2"]
//! eps = "0.2"
//! a = "2.5"
//! b = "300"
//! d = "80"
//! e = "600"
//! ```
//!
//! Numbers may be written as TOML numbers or as decimal strings; strings are
//! parsed exactly.

use crate::interval::Bound;
use crate::spectral_density::{WeylConstants, WeylProfile, BUILTIN_PROFILE};
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("unknown profile {0:?}")]
    UnknownProfile(String),
    #[error("profile {0:?} is built in and cannot be redefined")]
    BuiltinRedefined(String),
    #[error("profile {profile:?}: {message}")]
    InvalidProfile { profile: String, message: String },
    #[error("f_bound: {0}")]
    InvalidFBound(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

/// A decimal given either as a TOML string or number.
fn decimal<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        S(String),
        I(i64),
        F(f64),
    }
    Ok(match Raw::deserialize(d)? {
        Raw::S(s) => s,
        Raw::I(i) => i.to_string(),
        // shortest round-trip text of the double, which is what the user typed in practice
        Raw::F(f) => format!("{f:?}"),
    })
}

fn opt_decimal<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<String>, D::Error> {
    decimal(d).map(Some)
}

#[derive(Deserialize)]
struct RawProfile {
    #[serde(deserialize_with = "decimal")]
    eps: String,
    #[serde(deserialize_with = "decimal")]
    a: String,
    #[serde(deserialize_with = "decimal")]
    b: String,
    #[serde(deserialize_with = "decimal")]
    d: String,
    #[serde(deserialize_with = "decimal")]
    e: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    profile: Option<String>,
    #[serde(default, deserialize_with = "opt_decimal")]
    f_bound: Option<String>,
    #[serde(default)]
    profiles: BTreeMap<String, RawProfile>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Default profile name.
    pub profile: Option<String>,
    pub f_bound: Option<String>,
    pub profiles: BTreeMap<String, WeylProfile>,
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Config> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let mut profiles = BTreeMap::new();
        for (name, p) in raw.profiles {
            if name == BUILTIN_PROFILE {
                return Err(ConfigError::BuiltinRedefined(name));
            }
            let p = WeylProfile { eps: p.eps, a: p.a, b: p.b, d: p.d, e: p.e };
            WeylConstants::from_profile(&name, &p)
                .map_err(|e| ConfigError::InvalidProfile { profile: name.clone(), message: e.to_string() })?;
            profiles.insert(name, p);
        }
        let cfg = Config { profile: raw.profile, f_bound: raw.f_bound, profiles };
        cfg.f_bound()?;
        if let Some(p) = &cfg.profile {
            cfg.weyl(Some(p))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Config::from_toml_str(&text)
    }

    /// Looks up `name`, falling back to the configured default and then the built-in profile.
    pub fn weyl(&self, name: Option<&str>) -> Result<WeylConstants> {
        let name = name.or(self.profile.as_deref()).unwrap_or(BUILTIN_PROFILE);
        if name == BUILTIN_PROFILE {
            return Ok(WeylConstants::eps_015());
        }
        let p = self.profiles.get(name).ok_or_else(|| ConfigError::UnknownProfile(name.to_string()))?;
        WeylConstants::from_profile(name, p)
            .map_err(|e| ConfigError::InvalidProfile { profile: name.to_string(), message: e.to_string() })
    }

    pub fn f_bound(&self) -> Result<Option<Bound>> {
        let Some(s) = &self.f_bound else { return Ok(None) };
        let b = Bound::from_decimal_str(s).map_err(|e| ConfigError::InvalidFBound(e.to_string()))?;
        if !b.is_nonnegative() {
            return Err(ConfigError::InvalidFBound(format!("must be ≥ 0, got {s}")));
        }
        Ok(Some(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Ext;

    const SAMPLE: &str = r#"
profile = "eps0.2"
f_bound = 40

[profiles."eps0.2"]
eps = "0.2"
a = 3
b = 402
d = 100.0
e = "780"
"#;

    #[test]
    fn loads_profiles_and_f_bound() {
        let c = Config::from_toml_str(SAMPLE).unwrap();
        let w = c.weyl(None).unwrap();
        assert_eq!(w.name, "eps0.2");
        assert!(w.hessian_coefficient().unwrap().contains(&Ext::from_i64(2772)));
        assert_eq!(c.weyl(Some(BUILTIN_PROFILE)).unwrap().name, BUILTIN_PROFILE);
        assert!(c.f_bound().unwrap().unwrap().contains(&Ext::from_i64(40)));
        assert!(matches!(c.weyl(Some("nope")), Err(ConfigError::UnknownProfile(_))));
    }

    #[test]
    fn empty_config_uses_builtin() {
        let c = Config::from_toml_str("").unwrap();
        assert_eq!(c.weyl(None).unwrap().name, BUILTIN_PROFILE);
        assert!(c.f_bound().unwrap().is_none());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            Config::from_toml_str("[profiles.\"eps0.15\"]\neps=1\na=1\nb=1\nd=1\ne=1"),
            Err(ConfigError::BuiltinRedefined(_))
        ));
        assert!(matches!(
            Config::from_toml_str("[profiles.x]\neps=1\na=0\nb=1\nd=1\ne=1"),
            Err(ConfigError::InvalidProfile { .. })
        ));
        assert!(matches!(Config::from_toml_str("f_bound = -1"), Err(ConfigError::InvalidFBound(_))));
        assert!(matches!(Config::from_toml_str("profile = \"missing\""), Err(ConfigError::UnknownProfile(_))));
        assert!(matches!(Config::from_toml_str("bogus = 1"), Err(ConfigError::Syntax(_))));
    }
}
