//! Configuration interchange format.
//!
//! ```json
//! {"label": "...", "torus": "unit-square-centered", "exact": true,
//!  "points": [["13/36", "-13/36"], ...]}
//! ```
//!
//! Coordinates are JSON numbers or rational strings like `"13/36"`; exact
//! mode requires rational strings for every coordinate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Configuration, ExactConfiguration, NumericConfiguration, PackingError};
use crate::scalar::{format_rational, parse_rational, Rat, TorusScalar};

pub const TORUS_KIND: &str = "unit-square-centered";

#[derive(Debug, Error)]
pub enum ConfigIoError {
    #[error("malformed configuration JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported torus kind {0:?}; expected {TORUS_KIND:?}")]
    UnsupportedTorus(String),
    #[error("exact mode requires rational-string coordinates, found a number at point {index}")]
    NumberInExactMode { index: usize },
    #[error("cannot parse rational coordinate {text:?} at point {index}")]
    BadRational { index: usize, text: String },
    #[error(transparent)]
    Packing(#[from] PackingError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordValue {
    Number(f64),
    Rational(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub torus: String,
    pub exact: bool,
    pub points: Vec<(CoordValue, CoordValue)>,
}

/// A configuration loaded from the interchange format, keeping the exact
/// representation when the file carried one.
#[derive(Debug, Clone)]
pub enum LoadedConfiguration {
    Numeric(NumericConfiguration),
    Exact(ExactConfiguration),
}

impl LoadedConfiguration {
    pub fn len(&self) -> usize {
        match self {
            LoadedConfiguration::Numeric(c) => c.len(),
            LoadedConfiguration::Exact(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            LoadedConfiguration::Numeric(c) => c.label(),
            LoadedConfiguration::Exact(c) => c.label(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LoadedConfiguration::Exact(_))
    }

    pub fn exact(&self) -> Option<&ExactConfiguration> {
        match self {
            LoadedConfiguration::Exact(c) => Some(c),
            LoadedConfiguration::Numeric(_) => None,
        }
    }

    /// Numeric view (converting exact coordinates when necessary).
    pub fn numeric(&self) -> NumericConfiguration {
        match self {
            LoadedConfiguration::Numeric(c) => c.clone(),
            LoadedConfiguration::Exact(c) => c.to_numeric(),
        }
    }
}

fn coord_to_rat(value: &CoordValue, index: usize) -> Result<Rat, ConfigIoError> {
    match value {
        CoordValue::Number(_) => Err(ConfigIoError::NumberInExactMode { index }),
        CoordValue::Rational(text) => {
            parse_rational(text).ok_or_else(|| ConfigIoError::BadRational {
                index,
                text: text.clone(),
            })
        }
    }
}

fn coord_to_f64(value: &CoordValue, index: usize) -> Result<f64, ConfigIoError> {
    match value {
        CoordValue::Number(v) => Ok(*v),
        CoordValue::Rational(text) => parse_rational(text)
            .map(|r| TorusScalar::to_f64(&r))
            .ok_or_else(|| ConfigIoError::BadRational {
                index,
                text: text.clone(),
            }),
    }
}

pub fn from_json(text: &str) -> Result<LoadedConfiguration, ConfigIoError> {
    let file: ConfigFile = serde_json::from_str(text)?;
    if file.torus != TORUS_KIND {
        return Err(ConfigIoError::UnsupportedTorus(file.torus));
    }
    if file.exact {
        let coords = file
            .points
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Ok((coord_to_rat(x, i)?, coord_to_rat(y, i)?)))
            .collect::<Result<Vec<_>, ConfigIoError>>()?;
        Ok(LoadedConfiguration::Exact(Configuration::from_raw(
            &coords, file.label,
        )?))
    } else {
        let coords = file
            .points
            .iter()
            .enumerate()
            .map(|(i, (x, y))| Ok((coord_to_f64(x, i)?, coord_to_f64(y, i)?)))
            .collect::<Result<Vec<_>, ConfigIoError>>()?;
        Ok(LoadedConfiguration::Numeric(Configuration::from_raw(
            &coords, file.label,
        )?))
    }
}

pub fn exact_to_file(config: &ExactConfiguration) -> ConfigFile {
    ConfigFile {
        label: config.label().map(str::to_owned),
        torus: TORUS_KIND.to_string(),
        exact: true,
        points: config
            .points()
            .iter()
            .map(|p| {
                (
                    CoordValue::Rational(format_rational(p.x())),
                    CoordValue::Rational(format_rational(p.y())),
                )
            })
            .collect(),
    }
}

pub fn numeric_to_file(config: &NumericConfiguration) -> ConfigFile {
    ConfigFile {
        label: config.label().map(str::to_owned),
        torus: TORUS_KIND.to_string(),
        exact: false,
        points: config
            .points()
            .iter()
            .map(|p| (CoordValue::Number(*p.x()), CoordValue::Number(*p.y())))
            .collect(),
    }
}

pub fn to_json(config: &LoadedConfiguration) -> String {
    let file = match config {
        LoadedConfiguration::Exact(c) => exact_to_file(c),
        LoadedConfiguration::Numeric(c) => numeric_to_file(c),
    };
    serde_json::to_string_pretty(&file).expect("config serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip_preserves_rationals() {
        let text = r#"{"label":"t","torus":"unit-square-centered","exact":true,
                       "points":[["13/36","-13/36"],["-1/2","0"]]}"#;
        let loaded = from_json(text).unwrap();
        let exact = loaded.exact().unwrap();
        assert_eq!(exact.points()[0].x(), &parse_rational("13/36").unwrap());
        let emitted = to_json(&loaded);
        let reloaded = from_json(&emitted).unwrap();
        assert_eq!(reloaded.exact().unwrap(), exact);
    }

    #[test]
    fn numeric_accepts_rational_strings() {
        let text = r#"{"torus":"unit-square-centered","exact":false,
                       "points":[["1/4",0.25],[0.0,-0.1]]}"#;
        let loaded = from_json(text).unwrap();
        let numeric = loaded.numeric();
        assert_eq!(numeric.points()[0].x(), &0.25);
    }

    #[test]
    fn exact_mode_rejects_numbers() {
        let text = r#"{"torus":"unit-square-centered","exact":true,
                       "points":[[0.25,"1/4"]]}"#;
        assert!(matches!(
            from_json(text),
            Err(ConfigIoError::NumberInExactMode { index: 0 })
        ));
    }

    #[test]
    fn wrong_torus_kind_rejected() {
        let text = r#"{"torus":"hexagonal","exact":false,"points":[[0.0,0.0]]}"#;
        assert!(matches!(
            from_json(text),
            Err(ConfigIoError::UnsupportedTorus(_))
        ));
    }

    #[test]
    fn unparseable_rational_rejected() {
        let text = r#"{"torus":"unit-square-centered","exact":true,"points":[["x","0"]]}"#;
        assert!(matches!(
            from_json(text),
            Err(ConfigIoError::BadRational { .. })
        ));
    }
}
