//! Input configuration.
//!
//! Configurations are TOML documents using dotted keys:
//!
//! ```toml
//! surface.genus = 0
//! surface.e = 0
//! surface.blowups = 1
//! sheaf.rank = 2
//! sheaf.c1 = [1, 0, -1]     # basis σ, f, E_1, ..., E_n
//! sheaf.c2 = 1
//! polarization = "auto"     # or an integer list in the same basis
//! ```
//!
//! `polarization` is optional and defaults to `"auto"`.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;
use crate::invariants::ChernData;
use crate::lattice::{DivisorClass, RuledSurface};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Syntax(String),

    #[error("{field}: {source}")]
    Field {
        field: &'static str,
        #[source]
        source: Error,
    },

    #[error("polarization: expected \"auto\" or an integer list, got \"{0}\"")]
    Polarization(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolarizationChoice {
    Auto,
    Explicit(DivisorClass),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub surface: RuledSurface,
    pub sheaf: ChernData,
    pub polarization: PolarizationChoice,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    surface: RawSurface,
    sheaf: RawSheaf,
    polarization: Option<RawPolarization>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    genus: i64,
    e: i64,
    #[serde(default)]
    blowups: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSheaf {
    rank: i64,
    c1: Vec<i64>,
    c2: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPolarization {
    Keyword(String),
    Class(Vec<i64>),
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;

    let field = |field: &'static str| move |source: Error| ConfigError::Field { field, source };
    let surface = RuledSurface::geometrically_ruled(raw.surface.genus, raw.surface.e).map_err(|e| match e {
        Error::NegativeGenus(_) => field("surface.genus")(e),
        _ => field("surface.e")(e),
    })?;
    let surface = RuledSurface::with_blowups(surface.genus(), surface.e_invariant(), raw.surface.blowups)
        .map_err(field("surface.blowups"))?;

    let c1 = surface.class(raw.sheaf.c1).map_err(field("sheaf.c1"))?;
    let sheaf = ChernData::new(raw.sheaf.rank, c1, raw.sheaf.c2).map_err(field("sheaf.rank"))?;

    let polarization = match raw.polarization {
        None => PolarizationChoice::Auto,
        Some(RawPolarization::Keyword(k)) if k == "auto" => PolarizationChoice::Auto,
        Some(RawPolarization::Keyword(k)) => return Err(ConfigError::Polarization(k)),
        Some(RawPolarization::Class(v)) => {
            PolarizationChoice::Explicit(surface.class(v).map_err(field("polarization"))?)
        }
    };
    Ok(Config {
        surface,
        sheaf,
        polarization,
    })
}

fn list(v: &[i64]) -> String {
    let items: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", items.join(", "))
}

impl Config {
    /// Serialize back to the configuration format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.surface;
        let _ = writeln!(out, "surface.genus = {}", s.genus());
        let _ = writeln!(out, "surface.e = {}", s.e_invariant());
        let _ = writeln!(out, "surface.blowups = {}", s.blowup_count());
        let _ = writeln!(out, "sheaf.rank = {}", self.sheaf.rank());
        let _ = writeln!(out, "sheaf.c1 = {}", list(self.sheaf.c1().coeffs()));
        let _ = writeln!(out, "sheaf.c2 = {}", self.sheaf.c2());
        match &self.polarization {
            PolarizationChoice::Auto => out.push_str("polarization = \"auto\"\n"),
            PolarizationChoice::Explicit(h) => {
                let _ = writeln!(out, "polarization = {}", list(h.coeffs()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "
        surface.genus = 0
        surface.e = 0
        surface.blowups = 0
        sheaf.rank = 2
        sheaf.c1 = [1, 1]
        sheaf.c2 = 2
    ";

    #[test]
    fn minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.surface, RuledSurface::geometrically_ruled(0, 0).unwrap());
        assert_eq!(cfg.sheaf, ChernData::on(&cfg.surface, 2, vec![1, 1], 2).unwrap());
        assert_eq!(cfg.polarization, PolarizationChoice::Auto);
    }

    #[test]
    fn table_syntax_is_accepted() {
        let text = "polarization = [1, 2]\n[surface]\ngenus=1\ne=1\n[sheaf]\nrank=3\nc1=[0,0]\nc2=0\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(
            cfg.polarization,
            PolarizationChoice::Explicit(cfg.surface.class(vec![1, 2]).unwrap())
        );
    }

    #[test]
    fn wrong_c1_length() {
        let text = MINIMAL.replace("[1, 1]", "[1, 1, 0]");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Field {
                field: "sheaf.c1",
                source: Error::DimensionMismatch { expected: 2, found: 3 }
            }
        ));
    }

    #[test]
    fn negative_e() {
        let text = MINIMAL.replace("surface.e = 0", "surface.e = -1");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Field {
                field: "surface.e",
                source: Error::UnsupportedSurface { e: -1 }
            }
        ));
    }

    #[test]
    fn bad_polarization() {
        let err = parse_config(&format!("polarization = \"best\"\n{MINIMAL}")).unwrap_err();
        assert!(matches!(err, ConfigError::Polarization(_)));
        let err = parse_config(&format!("polarization = [1]\n{MINIMAL}")).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Field {
                field: "polarization",
                ..
            }
        ));
    }

    #[test]
    fn syntax_errors_carry_location() {
        let err = parse_config("surface.genus = 0\nsurface.e = \n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        let err = parse_config(&format!("{MINIMAL}\nsheaf.c3 = 1\n")).unwrap_err();
        assert!(err.to_string().contains("c3"), "{err}");
    }

    proptest! {
        #[test]
        fn text_round_trip(
            g in 0i64..4, e in 0i64..5, n in 0usize..4, r in 1i64..7, c2 in -40i64..40,
            coords in prop::collection::vec(-8i64..=8, 6),
            pol in prop::option::of(prop::collection::vec(-5i64..=5, 6)),
        ) {
            let s = RuledSurface::with_blowups(g, e, n).unwrap();
            let rho = s.picard_number();
            let cfg = Config {
                surface: s,
                sheaf: ChernData::on(&s, r, coords[..rho].to_vec(), c2).unwrap(),
                polarization: match pol {
                    None => PolarizationChoice::Auto,
                    Some(v) => PolarizationChoice::Explicit(s.class(v[..rho].to_vec()).unwrap()),
                },
            };
            let reparsed = parse_config(&cfg.to_text()).unwrap();
            prop_assert_eq!(&reparsed, &cfg);
            prop_assert_eq!(parse_config(&reparsed.to_text()).unwrap(), reparsed);
        }
    }
}
