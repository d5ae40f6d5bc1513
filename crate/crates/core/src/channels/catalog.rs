//! Underwater turbulence scenarios (salinity × bubble level) and their EGG
//! parameters, with an optional TOML overlay.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::EggParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaterType {
    Salty,
    Fresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turbulence {
    Weak,
    Moderate,
    Severe,
}

impl WaterType {
    pub const ALL: [WaterType; 2] = [WaterType::Salty, WaterType::Fresh];

    pub fn as_str(self) -> &'static str {
        match self {
            WaterType::Salty => "salty",
            WaterType::Fresh => "fresh",
        }
    }
}

impl Turbulence {
    pub const ALL: [Turbulence; 3] = [Turbulence::Weak, Turbulence::Moderate, Turbulence::Severe];

    pub fn as_str(self) -> &'static str {
        match self {
            Turbulence::Weak => "weak",
            Turbulence::Moderate => "moderate",
            Turbulence::Severe => "severe",
        }
    }

    /// Air-bubble level in L/min. Descriptive only; it never enters a formula.
    pub fn bubble_level(self) -> f64 {
        match self {
            Turbulence::Weak => 2.4,
            Turbulence::Moderate => 4.7,
            Turbulence::Severe => 16.5,
        }
    }
}

impl FromStr for WaterType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "salty" | "salt" => Ok(WaterType::Salty),
            "fresh" => Ok(WaterType::Fresh),
            _ => Err(Error::UnknownScenario(s.to_string())),
        }
    }
}

impl FromStr for Turbulence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weak" => Ok(Turbulence::Weak),
            "moderate" => Ok(Turbulence::Moderate),
            "severe" | "strong" => Ok(Turbulence::Severe),
            _ => Err(Error::UnknownScenario(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaterScenario {
    pub water: WaterType,
    pub turbulence: Turbulence,
    pub bubble_level: f64,
}

impl WaterScenario {
    pub fn new(water: WaterType, turbulence: Turbulence) -> Self {
        Self {
            water,
            turbulence,
            bubble_level: turbulence.bubble_level(),
        }
    }

    pub fn all() -> impl Iterator<Item = WaterScenario> {
        WaterType::ALL
            .into_iter()
            .flat_map(|w| Turbulence::ALL.into_iter().map(move |t| WaterScenario::new(w, t)))
    }

    /// `"salty-weak"` style name.
    pub fn name(&self) -> String {
        format!("{}-{}", self.water.as_str(), self.turbulence.as_str())
    }
}

impl fmt::Display for WaterScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for WaterScenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownScenario(s.to_string());
        let (w, t) = s.split_once(['-', '_', ' ', '/']).ok_or_else(unknown)?;
        Ok(WaterScenario::new(
            w.parse().map_err(|_| unknown())?,
            t.parse().map_err(|_| unknown())?,
        ))
    }
}

// a, b, c, λ, w per (water, turbulence), measured under heterodyne detection.
const TABLE: [(WaterType, Turbulence, [f64; 5]); 6] = [
    (
        WaterType::Salty,
        Turbulence::Weak,
        [0.7736, 1.1372, 49.1773, 0.4687, 0.1770],
    ),
    (
        WaterType::Salty,
        Turbulence::Moderate,
        [0.5307, 1.2154, 35.7368, 0.3953, 0.2064],
    ),
    (
        WaterType::Salty,
        Turbulence::Severe,
        [0.0161, 3.2033, 82.1030, 0.1368, 0.4951],
    ),
    (
        WaterType::Fresh,
        Turbulence::Weak,
        [3.7291, 1.0721, 30.3214, 0.5273, 0.1953],
    ),
    (
        WaterType::Fresh,
        Turbulence::Moderate,
        [1.2526, 1.1501, 41.3258, 0.4603, 0.2109],
    ),
    (
        WaterType::Fresh,
        Turbulence::Severe,
        [0.0075, 2.9963, 216.8356, 0.1602, 0.5117],
    ),
];

/// Measured EGG parameters for one of the six scenarios, with unit mean SNR.
pub fn scenario_params(s: WaterScenario) -> Result<EggParams> {
    let (_, _, [a, b, c, lambda, w]) = TABLE
        .iter()
        .find(|(wt, t, _)| *wt == s.water && *t == s.turbulence)
        .ok_or_else(|| Error::UnknownScenario(s.name()))?;
    EggParams::new(*a, *b, *c, *lambda, *w, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub scenario: WaterScenario,
    /// Mean SNR is 1; callers set it per sweep point.
    pub params: EggParams,
}

/// Named UWO scenarios, starting from the six measured rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    uwo: Vec<UwoEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UwoEntry {
    name: Option<String>,
    water: WaterType,
    turbulence: Turbulence,
    bubble_level: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    lambda: Option<f64>,
    w: Option<f64>,
}

impl Catalog {
    pub fn builtin() -> Self {
        let entries = WaterScenario::all()
            .map(|s| CatalogEntry {
                name: s.name(),
                scenario: s,
                params: scenario_params(s).expect("built-in table is valid"),
            })
            .collect();
        Self { entries }
    }

    /// Built-in catalog overlaid with `[[uwo]]` tables from a TOML document.
    /// An entry whose name already exists overrides the given fields; a new
    /// name adds an entry based on the row for its water/turbulence pair.
    pub fn with_overrides(toml_text: &str) -> Result<Self> {
        let file: CatalogFile = toml::from_str(toml_text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cat = Self::builtin();
        for e in file.uwo {
            let mut scenario = WaterScenario::new(e.water, e.turbulence);
            let name = e.name.unwrap_or_else(|| scenario.name());
            let base = match cat.entries.iter().find(|x| x.name == name) {
                Some(x) => x.params,
                None => scenario_params(scenario)?,
            };
            if let Some(bl) = e.bubble_level {
                scenario.bubble_level = bl;
            }
            let params = EggParams::new(
                e.a.unwrap_or(base.a),
                e.b.unwrap_or(base.b),
                e.c.unwrap_or(base.c),
                e.lambda.unwrap_or(base.lambda),
                e.w.unwrap_or(base.w),
                1.0,
            )
            .map_err(|err| Error::Config(format!("scenario {name}: {err}")))?;
            let entry = CatalogEntry {
                name: name.clone(),
                scenario,
                params,
            };
            match cat.entries.iter_mut().find(|x| x.name == name) {
                Some(slot) => *slot = entry,
                None => cat.entries.push(entry),
            }
        }
        Ok(cat)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        let key = name.to_ascii_lowercase().replace(['_', ' ', '/'], "-");
        self.entries
            .iter()
            .find(|e| e.name == key || e.name == name)
            .ok_or_else(|| Error::UnknownScenario(name.to_string()))
    }

    pub fn filter(&self, water: Option<WaterType>, turbulence: Option<Turbulence>) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| water.is_none_or(|w| e.scenario.water == w))
            .filter(|e| turbulence.is_none_or(|t| e.scenario.turbulence == t))
            .collect()
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let p = scenario_params(WaterScenario::new(WaterType::Salty, Turbulence::Weak)).unwrap();
        assert_eq!(
            (p.a, p.b, p.c, p.lambda, p.w),
            (0.7736, 1.1372, 49.1773, 0.4687, 0.1770)
        );
        let p = scenario_params("fresh-severe".parse().unwrap()).unwrap();
        assert_eq!(
            (p.a, p.b, p.c, p.lambda, p.w),
            (0.0075, 2.9963, 216.8356, 0.1602, 0.5117)
        );
        let p = scenario_params("salty-moderate".parse().unwrap()).unwrap();
        assert_eq!(
            (p.a, p.b, p.c, p.lambda, p.w),
            (0.5307, 1.2154, 35.7368, 0.3953, 0.2064)
        );
        assert!(matches!(
            "brackish-weak".parse::<WaterScenario>(),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn catalog_listing_and_filter() {
        let c = Catalog::builtin();
        assert_eq!(c.entries().len(), 6);
        assert_eq!(c.filter(Some(WaterType::Fresh), None).len(), 3);
        assert_eq!(c.filter(Some(WaterType::Salty), Some(Turbulence::Severe)).len(), 1);
        assert_eq!(c.get("salty_weak").unwrap().scenario.bubble_level, 2.4);
        assert!(c.get("nope").is_err());
    }

    #[test]
    fn toml_overlay() {
        let text = r#"
            [[uwo]]
            water = "salty"
            turbulence = "weak"
            w = 0.25

            [[uwo]]
            name = "tank-b"
            water = "fresh"
            turbulence = "moderate"
            c = 20.0
            bubble_level = 7.0
        "#;
        let c = Catalog::with_overrides(text).unwrap();
        assert_eq!(c.entries().len(), 7);
        let sw = c.get("salty-weak").unwrap();
        assert_eq!(sw.params.w, 0.25);
        assert_eq!(sw.params.a, 0.7736);
        let t = c.get("tank-b").unwrap();
        assert_eq!((t.params.a, t.params.c, t.scenario.bubble_level), (1.2526, 20.0, 7.0));
        assert!(Catalog::with_overrides("[[uwo]]\nwater='salty'\nturbulence='weak'\nw=1.5").is_err());
        assert!(Catalog::with_overrides("[[uwo]]\nwater='salty'").is_err());
    }
}
