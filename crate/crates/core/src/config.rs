//! JSON scheme configurations.
//!
//! Scalars are strings in the textual `Qf` form, so configs are exact.

use serde::{Deserialize, Serialize};

use crate::cps::{Face, Generator, Scheme, Window};
use crate::error::{Error, Result};
use crate::qfield::{Qf, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    #[serde(rename = "D")]
    pub radicand: u64,
    pub d: usize,
    pub n: usize,
    pub generators: Vec<GeneratorConfig>,
    pub window: WindowConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub phys: Vec<String>,
    pub star: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WindowConfig {
    Canonical,
    Vertices { vertices: Vec<Vec<String>> },
    Halfspaces { halfspaces: Vec<FaceConfig> },
}

/// `side` is `"+"` or `"-"`: the window lies where `normal·x − offset` has
/// that sign (or vanishes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceConfig {
    pub normal: Vec<String>,
    pub offset: String,
    pub side: String,
}

/// A validated scheme together with its window and default shift.
#[derive(Debug, Clone)]
pub struct Model {
    pub scheme: Scheme,
    pub window: Window,
    pub shift: Vec<Qf>,
}

fn scalar(s: &str, radicand: u64) -> Result<Qf> {
    let x: Qf = s.parse()?;
    if x.radicand() != 0 && x.radicand() != radicand {
        return Err(Error::InvalidScheme(format!(
            "scalar `{s}` is not in Q(√{radicand})"
        )));
    }
    Ok(x)
}

pub fn parse_vector(items: &[String], radicand: u64) -> Result<Vec<Qf>> {
    items.iter().map(|s| scalar(s, radicand)).collect()
}

fn text(v: &[Qf]) -> Vec<String> {
    v.iter().map(Qf::to_string).collect()
}

impl SchemeConfig {
    pub fn from_json(s: &str) -> Result<SchemeConfig> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<Model> {
        let d = self.radicand;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    phys: parse_vector(&g.phys, d)?,
                    star: parse_vector(&g.star, d)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let scheme = Scheme::new(d, self.d, self.n, gens)?;
        let window = match &self.window {
            WindowConfig::Canonical => Window::canonical(&scheme)?,
            WindowConfig::Vertices { vertices } => {
                let pts = vertices
                    .iter()
                    .map(|v| parse_vector(v, d))
                    .collect::<Result<Vec<_>>>()?;
                if pts.iter().any(|p| p.len() != self.n) {
                    return Err(Error::InvalidWindow("vertex of the wrong dimension".into()));
                }
                Window::from_vertices(self.n, pts)?
            }
            WindowConfig::Halfspaces { halfspaces } => {
                let faces = halfspaces
                    .iter()
                    .map(|f| {
                        let side = match f.side.as_str() {
                            "+" => Sign::Pos,
                            "-" => Sign::Neg,
                            other => {
                                return Err(Error::InvalidWindow(format!("face side `{other}`")))
                            }
                        };
                        let normal = parse_vector(&f.normal, d)?;
                        if normal.len() != self.n {
                            return Err(Error::InvalidWindow(
                                "face normal of the wrong dimension".into(),
                            ));
                        }
                        Face::new(normal, scalar(&f.offset, d)?, side)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Window::from_halfspaces(self.n, faces)?
            }
        };
        let shift = match &self.shift {
            Some(s) => parse_vector(s, d)?,
            None => vec![Qf::zero(); self.n],
        };
        if shift.len() != self.n {
            return Err(Error::InvalidInput("shift of the wrong dimension".into()));
        }
        Ok(Model {
            scheme,
            window,
            shift,
        })
    }

    /// Config describing an existing scheme with an explicit vertex window.
    pub fn describe(scheme: &Scheme, window: &Window, shift: &[Qf]) -> SchemeConfig {
        SchemeConfig {
            radicand: scheme.radicand(),
            d: scheme.d(),
            n: scheme.n(),
            generators: scheme
                .generators()
                .iter()
                .map(|g| GeneratorConfig {
                    phys: text(&g.phys),
                    star: text(&g.star),
                })
                .collect(),
            window: WindowConfig::Vertices {
                vertices: window.vertices().iter().map(|v| text(v)).collect(),
            },
            shift: Some(text(shift)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "D": 2, "d": 2, "n": 2,
        "generators": [
            {"phys": ["1", "0"], "star": ["1", "0"]},
            {"phys": ["√2", "0"], "star": ["0", "0"]},
            {"phys": ["0", "1"], "star": ["0", "1"]},
            {"phys": ["0", "√2"], "star": ["0", "0"]}
        ],
        "window": {"type": "halfspaces", "halfspaces": [
            {"normal": ["1", "0"], "offset": "0", "side": "+"},
            {"normal": ["2", "0"], "offset": "2", "side": "-"},
            {"normal": ["0", "1"], "offset": "0", "side": "+"},
            {"normal": ["0", "-1"], "offset": "-1", "side": "+"}
        ]},
        "shift": ["1/3", "1/3"]
    }"#;

    #[test]
    fn halfspace_config_builds_unit_square() {
        let cfg = SchemeConfig::from_json(SQUARE).unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.window.vertices().len(), 4);
        let q = |s: &str| s.parse::<Qf>().unwrap();
        assert_eq!(m.window.vertices()[0], vec![q("0"), q("0")]);
        assert_eq!(m.shift, vec![q("1/3"), q("1/3")]);
    }

    #[test]
    fn describe_round_trips() {
        let m = SchemeConfig::from_json(SQUARE).unwrap().build().unwrap();
        let cfg = SchemeConfig::describe(&m.scheme, &m.window, &m.shift);
        let again = SchemeConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
        let m2 = again.build().unwrap();
        assert_eq!(m2.window, m.window);
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(matches!(
            SchemeConfig::from_json("{}"),
            Err(Error::InvalidInput(_))
        ));
        let wrong_field = SQUARE.replace("\"√2\", \"0\"", "\"√3\", \"0\"");
        assert!(SchemeConfig::from_json(&wrong_field)
            .unwrap()
            .build()
            .is_err());
        let bad_side = SQUARE.replacen("\"side\": \"+\"", "\"side\": \"0\"", 1);
        assert!(matches!(
            SchemeConfig::from_json(&bad_side).unwrap().build(),
            Err(Error::InvalidWindow(_))
        ));
        let bad_scalar = SQUARE.replace("1/3", "1/0");
        assert!(SchemeConfig::from_json(&bad_scalar)
            .unwrap()
            .build()
            .is_err());
    }
}
