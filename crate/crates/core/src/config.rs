//! Declarative case configuration: serde types for the JSON config file and
//! parsers for the compact `family:params` strings used on the command line.

use crate::criteria::EndModel;
use crate::dec::Topology;
use crate::error::{Error, Result};
use crate::frankel::Generator;
use crate::geometry::{Profile, WeightSpec};
use serde::{Deserialize, Serialize};

/// Profile selector: a builtin family name plus its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl ProfileConfig {
    /// Parses the compact CLI form, e.g. `plane`, `sinh`, `hyperbolic:2`,
    /// `decaying:1.0`, `torus`, `torus:6.283`.
    pub fn parse(text: &str) -> Result<Self> {
        let (family, params) = split_spec(text)?;
        Ok(ProfileConfig { family, params })
    }

    pub fn build(&self) -> Result<Profile> {
        let p = &self.params;
        match self.family.as_str() {
            "plane" => expect_params(p, 0, "plane").and(Ok(Profile::plane())),
            "sinh" | "hyperbolic" => match p.len() {
                0 => Ok(Profile::hyperbolic()),
                1 => Profile::hyperbolic_scaled(p[0]),
                n => Err(Error::Config(format!(
                    "hyperbolic takes at most one parameter, got {n}"
                ))),
            },
            "cylinder" => expect_params(p, 0, "cylinder").and(Ok(Profile::cylinder())),
            "decaying" => {
                expect_params(p, 1, "decaying")?;
                Profile::decaying(p[0])
            }
            "torus" => match p.len() {
                0 => Profile::flat_torus(2.0 * std::f64::consts::PI),
                1 => Profile::flat_torus(p[0]),
                n => Err(Error::Config(format!(
                    "torus takes at most one parameter, got {n}"
                ))),
            },
            other => Err(Error::Config(format!(
                "unknown profile family {other:?} (expected plane, sinh, hyperbolic, cylinder, \
                 decaying, torus)"
            ))),
        }
    }
}

/// Weight selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            family: "none".into(),
            params: Vec::new(),
        }
    }
}

impl WeightConfig {
    /// Parses `none`, `gauss:1`, `poly:3`, `loggrowth`.
    pub fn parse(text: &str) -> Result<Self> {
        let (family, params) = split_spec(text)?;
        Ok(WeightConfig { family, params })
    }

    pub fn build(&self) -> Result<WeightSpec> {
        let p = &self.params;
        match self.family.as_str() {
            "none" | "zero" => expect_params(p, 0, "none").and(Ok(WeightSpec::zero())),
            "gauss" => {
                expect_params(p, 1, "gauss")?;
                WeightSpec::gaussian(p[0])
            }
            "poly" => {
                expect_params(p, 1, "poly")?;
                WeightSpec::power(p[0])
            }
            "loggrowth" => expect_params(p, 0, "loggrowth").and(Ok(WeightSpec::log_growth())),
            other => Err(Error::Config(format!(
                "unknown weight family {other:?} (expected none, gauss, poly, loggrowth)"
            ))),
        }
    }
}

/// End-model selector, e.g. `cylindrical`, `conic:4`, `fibered:2,1`,
/// `qac:4` or `qac:4,2.5`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl EndConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, params) = split_spec(text)?;
        Ok(EndConfig { kind, params })
    }

    pub fn build(&self) -> Result<EndModel> {
        let p = &self.params;
        let as_dim = |v: f64, what: &str| -> Result<usize> {
            if v.fract() != 0.0 || v < 2.0 {
                return Err(Error::Config(format!(
                    "{what} dimension must be an integer >= 2, got {v}"
                )));
            }
            Ok(v as usize)
        };
        match self.kind.as_str() {
            "cylindrical" => expect_params(p, 0, "cylindrical").and(Ok(EndModel::Cylindrical)),
            "conic" => {
                expect_params(p, 1, "conic")?;
                Ok(EndModel::Conic {
                    n: as_dim(p[0], "conic")?,
                })
            }
            "fibered" => {
                expect_params(p, 2, "fibered")?;
                let k = p[0];
                let l = p[1];
                if k.fract() != 0.0 || l.fract() != 0.0 || k < 0.0 || l < 0.0 {
                    return Err(Error::Config(
                        "fibered parameters (k, l) must be nonnegative integers".into(),
                    ));
                }
                Ok(EndModel::Fibered {
                    k: k as usize,
                    l: l as usize,
                })
            }
            "qac" => match p.len() {
                1 => {
                    let n = as_dim(p[0], "qac")?;
                    Ok(EndModel::Qac {
                        n,
                        c: n as f64 - 1.0,
                    })
                }
                2 => Ok(EndModel::Qac {
                    n: as_dim(p[0], "qac")?,
                    c: p[1],
                }),
                k => Err(Error::Config(format!("qac takes 1 or 2 parameters, got {k}"))),
            },
            other => Err(Error::Config(format!(
                "unknown end kind {other:?} (expected cylindrical, conic, fibered, qac)"
            ))),
        }
    }
}

/// Truncation radius: a number or the tail-mass rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RMax {
    Value(f64),
    Auto(AutoTag),
}

/// The literal string "auto".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AutoTag {
    #[serde(rename = "auto")]
    Auto,
}

impl RMax {
    pub fn auto() -> Self {
        RMax::Auto(AutoTag::Auto)
    }

    /// Resolves to a concrete radius; `auto` applies the tail-mass rule for
    /// proper weights and the natural circumference for the torus.
    pub fn resolve(&self, profile: &Profile, weight: &WeightSpec) -> Result<f64> {
        match self {
            RMax::Value(v) => {
                if !(*v > 0.0) {
                    return Err(Error::Config(format!("r_max must be positive, got {v}")));
                }
                Ok(*v)
            }
            RMax::Auto(_) => match profile.kind() {
                crate::geometry::ProfileKind::TorusFlat => {
                    if let crate::geometry::ProfileFamily::FlatTorus { circumference } =
                        profile.family()
                    {
                        Ok(circumference)
                    } else {
                        unreachable!()
                    }
                }
                _ => crate::dec::auto_r_max(profile, weight),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: RMax,
}

impl GridConfig {
    /// Parses the `RxT` CLI shape, e.g. `128x64`.
    pub fn parse_shape(text: &str) -> Result<(usize, usize)> {
        let mut parts = text.split('x');
        let bad = || Error::Config(format!("grid must look like 128x64, got {text:?}"));
        let n_r = parts
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(bad)?;
        let n_theta = parts
            .next()
            .filter(|t| !t.is_empty())
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(bad)?;
        if parts.next().is_some() || n_r == 0 || n_theta == 0 {
            return Err(bad());
        }
        Ok((n_r, n_theta))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub tol_h: f64,
    pub spectral_rel_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_h: crate::frankel::DEFAULT_TOL_H,
            spectral_rel_threshold: crate::hodge::SPECTRAL_REL_THRESHOLD,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_h > 0.0) || !(self.spectral_rel_threshold > 0.0) {
            return Err(Error::Config(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriteriaToggles {
    pub troyanov: bool,
    pub mckean: bool,
    pub ahmed_stroock: bool,
    pub gong_wang: bool,
}

impl Default for CriteriaToggles {
    fn default() -> Self {
        CriteriaToggles {
            troyanov: true,
            mckean: true,
            ahmed_stroock: true,
            gong_wang: true,
        }
    }
}

/// One full case: everything a pipeline or checker run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub profile: ProfileConfig,
    #[serde(default)]
    pub weight: WeightConfig,
    /// Normally inferred from the profile kind; an explicit value must
    /// agree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<Topology>,
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub criteria: CriteriaToggles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<EndConfig>,
    #[serde(default = "default_generator")]
    pub generator: String,
    #[serde(default = "default_r_range")]
    pub r_range: (f64, f64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

fn default_generator() -> String {
    "theta1".into()
}

fn default_r_range() -> (f64, f64) {
    (1.0, 100.0)
}

impl CaseConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Config(format!(
                "config parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn generator(&self) -> Result<Generator> {
        match self.generator.as_str() {
            "theta1" | "theta" => Ok(Generator::Theta),
            "theta2" => Ok(Generator::SecondAngle),
            other => Err(Error::Config(format!(
                "unknown generator {other:?} (expected theta1 or theta2)"
            ))),
        }
    }

    /// Builds the concrete profile/weight pair and resolves the grid,
    /// validating topology consistency.
    pub fn resolve(&self) -> Result<ResolvedCase> {
        self.tolerances.validate()?;
        let profile = self.profile.build()?;
        let weight = self.weight.build()?;
        let expected_topology = match profile.kind() {
            crate::geometry::ProfileKind::PlaneLike => Topology::Disk,
            crate::geometry::ProfileKind::CylinderLike => Topology::Cylinder,
            crate::geometry::ProfileKind::TorusFlat => Topology::Torus,
        };
        if let Some(t) = self.topology {
            if t != expected_topology {
                return Err(Error::Config(format!(
                    "profile {} lives on a {}, not a {}",
                    profile.family_name(),
                    expected_topology.name(),
                    t.name()
                )));
            }
        }
        let r_max = self.grid.r_max.resolve(&profile, &weight)?;
        let end = self.end.as_ref().map(|e| e.build()).transpose()?;
        Ok(ResolvedCase {
            profile,
            weight,
            topology: expected_topology,
            n_r: self.grid.n_r,
            n_theta: self.grid.n_theta,
            r_max,
            tolerances: self.tolerances,
            generator: self.generator()?,
            end,
            r_range: self.r_range,
        })
    }
}

/// A validated, concrete case.
#[derive(Debug, Clone)]
pub struct ResolvedCase {
    pub profile: Profile,
    pub weight: WeightSpec,
    pub topology: Topology,
    pub n_r: usize,
    pub n_theta: usize,
    pub r_max: f64,
    pub tolerances: Tolerances,
    pub generator: Generator,
    pub end: Option<EndModel>,
    pub r_range: (f64, f64),
}

fn split_spec(text: &str) -> Result<(String, Vec<f64>)> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Config("empty spec string".into()));
    }
    match text.split_once(':') {
        None => Ok((text.to_string(), Vec::new())),
        Some((name, rest)) => {
            let params = rest
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad numeric parameter {t:?} in {text:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((name.to_string(), params))
        }
    }
}

fn expect_params(params: &[f64], n: usize, what: &str) -> Result<()> {
    if params.len() != n {
        return Err(Error::Config(format!(
            "{what} takes {n} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config() -> CaseConfig {
        CaseConfig {
            profile: ProfileConfig::parse("plane").unwrap(),
            weight: WeightConfig::parse("gauss:1").unwrap(),
            topology: None,
            grid: GridConfig {
                n_r: 128,
                n_theta: 64,
                r_max: RMax::auto(),
            },
            tolerances: Tolerances::default(),
            criteria: CriteriaToggles::default(),
            end: Some(EndConfig::parse("conic:4").unwrap()),
            generator: "theta1".into(),
            r_range: (1.0, 100.0),
            out_dir: Some("out".into()),
        }
    }

    #[test]
    fn config_json_round_trip_is_identity() {
        let cfg = sample_config();
        let text = cfg.to_json();
        let back = CaseConfig::from_json(&text).unwrap();
        assert_eq!(cfg, back);
        // and a numeric r_max round-trips exactly too
        let mut cfg2 = cfg;
        cfg2.grid.r_max = RMax::Value(4.208193548387097);
        let back2 = CaseConfig::from_json(&cfg2.to_json()).unwrap();
        assert_eq!(cfg2, back2);
    }

    #[test]
    fn spec_strings_parse() {
        assert_eq!(
            ProfileConfig::parse("decaying:1.5").unwrap().params,
            vec![1.5]
        );
        assert!(ProfileConfig::parse("sinh").unwrap().build().is_ok());
        assert!(ProfileConfig::parse("hyperbolic:2").unwrap().build().is_ok());
        assert!(ProfileConfig::parse("nope").unwrap().build().is_err());
        assert!(WeightConfig::parse("poly:3").unwrap().build().is_ok());
        assert!(WeightConfig::parse("poly").unwrap().build().is_err());
        assert!(EndConfig::parse("fibered:2,1").unwrap().build().is_ok());
        assert!(EndConfig::parse("conic:4.5").unwrap().build().is_err());
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(GridConfig::parse_shape("128x64").unwrap(), (128, 64));
        assert!(GridConfig::parse_shape("128x").is_err());
        assert!(GridConfig::parse_shape("x64").is_err());
        assert!(GridConfig::parse_shape("128x64x2").is_err());
        assert!(GridConfig::parse_shape("axb").is_err());
    }

    #[test]
    fn auto_radius_resolution() {
        let plane = Profile::plane();
        let gauss = WeightSpec::gaussian(1.0).unwrap();
        let r = RMax::auto().resolve(&plane, &gauss).unwrap();
        assert!(r > 4.0 && r < 4.7);
        // unweighted auto is an error
        assert!(RMax::auto().resolve(&plane, &WeightSpec::zero()).is_err());
        // torus auto takes the circumference
        let torus = Profile::flat_torus(7.0).unwrap();
        assert_eq!(RMax::auto().resolve(&torus, &WeightSpec::zero()).unwrap(), 7.0);
    }

    #[test]
    fn topology_mismatch_is_rejected() {
        let mut cfg = sample_config();
        cfg.topology = Some(Topology::Torus);
        cfg.grid.r_max = RMax::Value(4.0);
        assert!(matches!(cfg.resolve(), Err(Error::Config(_))));
        cfg.topology = Some(Topology::Disk);
        assert!(cfg.resolve().is_ok());
    }

    #[test]
    fn unknown_fields_are_rejected_with_location() {
        let err = CaseConfig::from_json("{\"profile\": {\"family\": \"plane\"}, \"bogus\": 1}")
            .unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn generator_names() {
        let mut cfg = sample_config();
        assert_eq!(cfg.generator().unwrap(), Generator::Theta);
        cfg.generator = "theta2".into();
        assert_eq!(cfg.generator().unwrap(), Generator::SecondAngle);
        cfg.generator = "spin".into();
        assert!(cfg.generator().is_err());
    }
}
