//! Scenario configuration: one JSON file plus `key=value` overrides.
//!
//! Every key is optional; missing keys take the documented defaults and
//! unknown keys are rejected. Nested keys are addressed with dots on the
//! command line, e.g. `--set leach.p=0.1` or `--set radio.e_init=1.0`.
//!
//! ```json
//! {
//!   "nodes": 100, "width": 100.0, "height": 100.0,
//!   "grid": null,
//!   "bs": null,
//!   "radio": { "e_elec": 5e-8, "eps_fs": 1e-11, "eps_mp": 1.3e-15, "e_da": 5e-9,
//!              "data_bits": 4000, "ctrl_bits": 200, "e_init": 0.5 },
//!   "protocols": ["direct", "leach", "leach_c", "leach_modified", "mesh_flood"],
//!   "leach": { "p": 0.05, "boost_rounds": null, "boost_factor": 2.0 },
//!   "frames_per_round": 1, "max_rounds": 5000,
//!   "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19],
//!   "control_energy": false, "radio_range": null, "out_dir": "out"
//! }
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::energy::RadioParams;
use crate::engine::{Deployment, RunConfig};
use crate::error::{Error, Result};
use crate::field::Position;
use crate::protocols::{LeachConfig, ProtocolKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Uniform deployment size; ignored when `grid` is set.
    pub nodes: usize,
    pub width: f64,
    pub height: f64,
    /// Lattice deployment instead of a uniform one.
    pub grid: Option<GridSpec>,
    pub bs: Option<Position>,
    pub radio: RadioParams,
    pub protocols: Vec<ProtocolKind>,
    pub leach: LeachConfig,
    pub frames_per_round: u32,
    pub max_rounds: u64,
    pub seeds: Vec<u64>,
    pub control_energy: bool,
    pub radio_range: Option<f64>,
    pub out_dir: PathBuf,
}

pub const DEFAULT_PROTOCOLS: [ProtocolKind; 5] = [
    ProtocolKind::Direct,
    ProtocolKind::Leach,
    ProtocolKind::LeachC,
    ProtocolKind::LeachModified,
    ProtocolKind::MeshFlood,
];

impl Default for ScenarioConfig {
    fn default() -> Self {
        let run = RunConfig::default();
        Self {
            nodes: 100,
            width: 100.0,
            height: 100.0,
            grid: None,
            bs: None,
            radio: run.radio,
            protocols: DEFAULT_PROTOCOLS.to_vec(),
            leach: run.leach,
            frames_per_round: run.frames_per_round,
            max_rounds: run.max_rounds,
            seeds: (0..20).collect(),
            control_energy: run.control_energy,
            radio_range: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ScenarioConfig {
    /// The per-run part of the scenario.
    pub fn run_config(&self) -> RunConfig {
        let deployment = match self.grid {
            Some(g) => Deployment::Grid {
                nx: g.nx,
                ny: g.ny,
                spacing: g.spacing,
            },
            None => Deployment::Uniform {
                nodes: self.nodes,
                width: self.width,
                height: self.height,
            },
        };
        RunConfig {
            deployment,
            bs: self.bs,
            radio: self.radio,
            leach: self.leach,
            frames_per_round: self.frames_per_round,
            max_rounds: self.max_rounds,
            control_energy: self.control_energy,
            radio_range: self.radio_range,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.run_config().validate()?;
        if self.protocols.is_empty() {
            return Err(Error::config("protocols", "at least one protocol is required"));
        }
        let unique: BTreeSet<_> = self.protocols.iter().collect();
        if unique.len() != self.protocols.len() {
            return Err(Error::config("protocols", "duplicate protocol"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed is required"));
        }
        let unique: BTreeSet<_> = self.seeds.iter().collect();
        if unique.len() != self.seeds.len() {
            return Err(Error::config("seeds", "duplicate seed"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Parses JSON text (blank text means all defaults), applies overrides and
    /// validates.
    pub fn from_json_str(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let mut value: Value = if text.trim().is_empty() {
            Value::Object(Map::new())
        } else {
            serde_json::from_str(text).map_err(|source| Error::Json {
                context: "config".into(),
                source,
            })?
        };
        for (key, raw) in overrides {
            set_path(&mut value, key, parse_scalar(raw))?;
        }
        let cfg: ScenarioConfig = serde_path_to_error::deserialize(value).map_err(|e| {
            let key = e.path().to_string();
            Error::config(key, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads `path` (or starts from defaults) and applies `overrides` in order.
pub fn parse_config(path: Option<&Path>, overrides: &[(String, String)]) -> Result<ScenarioConfig> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    ScenarioConfig::from_json_str(&text, overrides)
}

/// Splits `key=value`.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::config(s, "override must look like key=value")),
    }
}

/// Seed list syntax: `a..b` (inclusive of both ends), `a..=b`, or a comma
/// list `1,4,9`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::config("seeds", format!("cannot parse seed list `{s}`"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let a = num(a)?;
        let b = num(b.strip_prefix('=').unwrap_or(b))?;
        if b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn parse_scalar(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn set_path(root: &mut Value, key: &str, value: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = root;
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::config(key, "empty key segment"));
        }
        if cur.is_null() {
            *cur = Value::Object(Map::new());
        }
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| Error::config(parts[..i].join("."), "not an object"))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert(Value::Object(Map::new()));
    }
    unreachable!("split yields at least one segment")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key_of(r: Result<ScenarioConfig>) -> String {
        match r {
            Err(Error::InvalidConfig { key, .. }) => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_means_defaults() {
        let cfg = ScenarioConfig::from_json_str("", &[]).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.nodes, 100);
        assert_eq!((cfg.width, cfg.height), (100.0, 100.0));
        assert_eq!(cfg.leach.p, 0.05);
        assert_eq!(cfg.seeds, (0..20).collect::<Vec<_>>());
        assert_eq!(ScenarioConfig::from_json_str("{}", &[]).unwrap(), cfg);
    }

    #[test]
    fn out_of_range_p_names_the_key() {
        let key = key_of(ScenarioConfig::from_json_str(r#"{"leach": {"p": 1.5}}"#, &[]));
        assert_eq!(key, "leach.p");
        let key = key_of(ScenarioConfig::from_json_str("", &[("leach.p".into(), "1.5".into())]));
        assert!(key.ends_with('p'));
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let key = key_of(ScenarioConfig::from_json_str(r#"{"radio": {"e_elek": 1}}"#, &[]));
        assert_eq!(key, "radio.e_elek");
        let err = ScenarioConfig::from_json_str(r#"{"nodez": 3}"#, &[]).unwrap_err();
        assert!(err.to_string().contains("nodez"), "{err}");
    }

    #[test]
    fn bad_types_name_the_key() {
        let key = key_of(ScenarioConfig::from_json_str(r#"{"max_rounds": "lots"}"#, &[]));
        assert_eq!(key, "max_rounds");
        let key = key_of(ScenarioConfig::from_json_str(
            r#"{"protocols": ["leach", "leeach"]}"#,
            &[],
        ));
        assert_eq!(key, "protocols[1]");
    }

    #[test]
    fn overrides_win_over_the_file() {
        let cfg = ScenarioConfig::from_json_str(
            r#"{"nodes": 50, "radio": {"e_init": 2.0}}"#,
            &[
                ("nodes".into(), "60".into()),
                ("radio.data_bits".into(), "2000".into()),
                ("protocols".into(), r#"["leach","direct"]"#.into()),
                ("bs".into(), r#"{"x": 1, "y": 2}"#.into()),
                ("grid.nx".into(), "3".into()),
                ("grid.ny".into(), "4".into()),
                ("grid.spacing".into(), "5".into()),
                ("out_dir".into(), "results/run1".into()),
            ],
        )
        .unwrap();
        assert_eq!(cfg.nodes, 60);
        assert_eq!(cfg.radio.e_init, 2.0);
        assert_eq!(cfg.radio.data_bits, 2000);
        assert_eq!(cfg.protocols, vec![ProtocolKind::Leach, ProtocolKind::Direct]);
        assert_eq!(cfg.bs, Some(Position::new(1.0, 2.0)));
        assert_eq!(
            cfg.grid,
            Some(GridSpec {
                nx: 3,
                ny: 4,
                spacing: 5.0
            })
        );
        assert_eq!(cfg.out_dir, PathBuf::from("results/run1"));
        assert_eq!(cfg.run_config().deployment.node_count(), 12);
    }

    #[test]
    fn semantic_validation() {
        assert_eq!(key_of(ScenarioConfig::from_json_str(r#"{"nodes": 0}"#, &[])), "nodes");
        assert_eq!(key_of(ScenarioConfig::from_json_str(r#"{"seeds": []}"#, &[])), "seeds");
        assert_eq!(
            key_of(ScenarioConfig::from_json_str(r#"{"protocols": []}"#, &[])),
            "protocols"
        );
        assert_eq!(
            key_of(ScenarioConfig::from_json_str(r#"{"radio": {"eps_fs": -1}}"#, &[])),
            "radio.eps_fs"
        );
        assert!(matches!(
            parse_config(Some(Path::new("/definitely/not/here.json")), &[]),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn seed_and_override_syntax() {
        assert_eq!(parse_seeds("0..19").unwrap().len(), 20);
        assert_eq!(parse_seeds("3..=5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_seeds("1,4,9").unwrap(), vec![1, 4, 9]);
        assert!(parse_seeds("5..2").is_err());
        assert!(parse_seeds("x").is_err());
        assert_eq!(parse_override("leach.p=0.1").unwrap(), ("leach.p".into(), "0.1".into()));
        assert!(parse_override("=3").is_err());
        assert!(parse_override("nokey").is_err());
    }

    fn arb_config() -> impl Strategy<Value = ScenarioConfig> {
        (
            1usize..500,
            (1.0..1e3f64, 1.0..1e3f64),
            proptest::option::of((1usize..20, 1usize..20, 0.5..50.0f64)),
            proptest::option::of((-500.0..500.0f64, -500.0..500.0f64)),
            (0.001..0.999f64, proptest::option::of(1u64..100), 1.0..10.0f64),
            (1u32..4, 1u64..10_000, any::<bool>()),
            proptest::sample::subsequence(ProtocolKind::ALL.to_vec(), 1..=8),
            proptest::collection::btree_set(any::<u64>(), 1..30),
            (1e-9..1e-6f64, 0.0..10.0f64, 1u64..10_000),
            proptest::option::of(0.5..100.0f64),
        )
            .prop_map(
                |(nodes, (w, h), grid, bs, (p, br, bf), (fr, mr, ce), protocols, seeds, (ee, ei, db), rr)| {
                    ScenarioConfig {
                        nodes,
                        width: w,
                        height: h,
                        grid: grid.map(|(nx, ny, spacing)| GridSpec { nx, ny, spacing }),
                        bs: bs.map(|(x, y)| Position::new(x, y)),
                        radio: RadioParams {
                            e_elec: ee,
                            e_init: ei,
                            data_bits: db,
                            ..Default::default()
                        },
                        protocols,
                        leach: LeachConfig {
                            p,
                            boost_rounds: br,
                            boost_factor: bf,
                        },
                        frames_per_round: fr,
                        max_rounds: mr,
                        seeds: seeds.into_iter().collect(),
                        control_energy: ce,
                        radio_range: rr,
                        out_dir: PathBuf::from("out/x"),
                    }
                },
            )
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(cfg in arb_config()) {
            let back = ScenarioConfig::from_json_str(&cfg.to_json(), &[]).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
