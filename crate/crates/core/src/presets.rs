//! Bundled schemes: the Ammann–Beenker octagonal scheme and a Fibonacci
//! chain. Both are stored as configs and go through the same loader as user
//! input.

use crate::config::{GeneratorConfig, Model, SchemeConfig, WindowConfig};
use crate::cps::{Scheme, Window};
use crate::error::{Error, Result};
use crate::qfield::Qf;

pub const NAMES: [&str; 2] = ["octagon", "fibonacci"];

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub scheme: Scheme,
    pub window: Window,
    /// Shift of the reference vertex pattern `𝔓(W + shift)`.
    pub shift: Vec<Qf>,
    pub config: SchemeConfig,
}

fn gen(phys: &[&str], star: &[&str]) -> GeneratorConfig {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
    GeneratorConfig {
        phys: s(phys),
        star: s(star),
    }
}

pub fn config(name: &str) -> Result<SchemeConfig> {
    match name {
        "octagon" => Ok(SchemeConfig {
            radicand: 2,
            d: 2,
            n: 2,
            generators: vec![
                gen(&["1", "0"], &["1", "0"]),
                gen(&["1/2√2", "1/2√2"], &["-1/2√2", "1/2√2"]),
                gen(&["0", "1"], &["0", "-1"]),
                gen(&["-1/2√2", "1/2√2"], &["1/2√2", "1/2√2"]),
            ],
            window: WindowConfig::Canonical,
            // −(e₁* + e₂* + e₃* + e₄*)/2
            shift: Some(vec!["-1/2".into(), "1/2-1/2√2".into()]),
        }),
        "fibonacci" => Ok(SchemeConfig {
            radicand: 5,
            d: 1,
            n: 1,
            generators: vec![gen(&["1"], &["1"]), gen(&["1/2+1/2√5"], &["1/2-1/2√5"])],
            window: WindowConfig::Canonical,
            shift: Some(vec!["1/2".into()]),
        }),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

pub fn load_preset(name: &str) -> Result<Preset> {
    let config = config(name)?;
    let Model {
        scheme,
        window,
        shift,
    } = config.build()?;
    let name = NAMES.iter().find(|n| **n == name).expect("known name");
    Ok(Preset {
        name,
        scheme,
        window,
        shift,
        config,
    })
}

pub fn octagon() -> Preset {
    load_preset("octagon").expect("bundled preset")
}

pub fn fibonacci() -> Preset {
    load_preset("fibonacci").expect("bundled preset")
}

/// A scheme whose internal group `Γ* = ℤ²` is discrete, with the unit square
/// as window. Useful as a negative example; not exported by name.
pub fn discrete_square() -> Preset {
    let config = SchemeConfig {
        radicand: 2,
        d: 2,
        n: 2,
        generators: vec![
            gen(&["1", "0"], &["1", "0"]),
            gen(&["√2", "0"], &["0", "0"]),
            gen(&["0", "1"], &["0", "1"]),
            gen(&["0", "√2"], &["0", "0"]),
        ],
        window: WindowConfig::Vertices {
            vertices: [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect(),
        },
        shift: Some(vec!["1/3".into(), "1/3".into()]),
    };
    let Model {
        scheme,
        window,
        shift,
    } = config.build().expect("valid scheme");
    Preset {
        name: "discrete-square",
        scheme,
        window,
        shift,
        config,
    }
}
