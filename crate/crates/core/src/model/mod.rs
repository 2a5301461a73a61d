//! The JSON model file format, with conversion to and from algebroids.
//!
//! A file describes either a constructed algebroid (groupoid, Lie bundle,
//! action and truncation) or a table algebroid. Rationals are written as
//! strings `"p/q"`; integers are also accepted, floats never are.

mod generate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::{funs3, generate, group_algebra, pairh3, random_model, z2line, Preset};

use crate::algebroid::{
    AlgebroidError, ConvolutionAlgebroid, DeltaEntries, HopfAlgebroid, MulEntries, TableAlgebroid, TableData,
    TableError,
};
use crate::exact::{QMatrix, Rational};
use crate::groupoid::{BaseSpace, FiniteGroupoid, GroupoidError, GroupoidViolation};
use crate::lie::{default_names, ActionViolation, BundleAction, LieBundle, LieError, LieFiber, LieViolation};

pub const FORMAT: &str = "hopfalg-model/1";
pub const DEFAULT_TRUNCATION: u32 = 4;

/// The JSON schema of model files.
pub const SCHEMA: &str = include_str!("schema.json");

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub base: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<GroupoidSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<ActionSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidSpec {
    pub arrows: Vec<ArrowSpec>,
    /// Triples `[g, h, g∘h]`.
    pub composition: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub fibers: Vec<FiberSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub point: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    /// Entries `[i, j, [c_0, …]]` giving `[e_i, e_j]`; an absent `[j, i]`
    /// is the negative of `[i, j]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<(usize, usize, Vec<Rational>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub arrow: String,
    /// Rows of a `dim 𝔟_{t(g)} × dim 𝔟_{s(g)}` matrix.
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub dim: usize,
    pub labels: Vec<String>,
    /// The point over which each basis vector lies.
    pub points: Vec<String>,
    pub units: BTreeMap<String, Vec<(usize, Rational)>>,
    #[serde(default)]
    pub mul: MulEntries,
    #[serde(default)]
    pub delta: DeltaEntries,
    #[serde(default)]
    pub counit: Vec<(usize, Rational)>,
    #[serde(default)]
    pub antipode: Vec<(usize, Vec<(usize, Rational)>)>,
}

/// A resolved model: identifiers looked up, shapes checked, laws not yet.
#[derive(Clone, Debug)]
pub enum Model {
    Constructed {
        groupoid: FiniteGroupoid,
        bundle: LieBundle,
        action: BundleAction,
        truncation: u32,
    },
    Table(TableAlgebroid),
}

/// Law violations found in the ingredients of a constructed model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub groupoid: Vec<GroupoidViolation>,
    pub bundle: Vec<(String, LieViolation)>,
    pub action: Vec<ActionViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.groupoid.is_empty() && self.bundle.is_empty() && self.action.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.groupoid.iter().map(|v| format!("groupoid: {v}")));
        out.extend(self.bundle.iter().map(|(p, v)| format!("bundle at {p}: {v}")));
        out.extend(self.action.iter().map(|v| format!("action: {v}")));
        out
    }
}

impl ModelFile {
    /// Parses JSON, reporting the field path and position of any error.
    pub fn from_json(text: &str) -> Result<ModelFile, ModelError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ModelFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ModelError::Syntax {
                path: if path.is_empty() { "<root>".to_string() } else { path },
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        if file.format != FORMAT {
            return Err(ModelError::Structure(format!(
                "unsupported format {:?}, expected {FORMAT:?}",
                file.format
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_constructed(
        groupoid: &FiniteGroupoid,
        bundle: &LieBundle,
        action: &BundleAction,
        truncation: u32,
    ) -> ModelFile {
        let base = groupoid.base();
        let point = |x| base.name(x).to_string();
        let arrows = groupoid
            .arrows()
            .iter()
            .map(|a| ArrowSpec {
                id: a.id.clone(),
                src: point(a.src),
                tgt: point(a.tgt),
            })
            .collect();
        let composition = groupoid
            .triples()
            .into_iter()
            .map(|(g, h, gh)| {
                [
                    groupoid.id(g).to_string(),
                    groupoid.id(h).to_string(),
                    groupoid.id(gh).to_string(),
                ]
            })
            .collect();
        let fibers = base
            .points()
            .map(|x| {
                let f = bundle.fiber(x);
                let names = (f.names() != default_names(f.dim()).as_slice()).then(|| f.names().to_vec());
                FiberSpec {
                    point: point(x),
                    dim: f.dim(),
                    names,
                    brackets: f.bracket_entries(),
                }
            })
            .collect();
        let action = (0..groupoid.len())
            .map(|g| ActionSpec {
                arrow: groupoid.id(g).to_string(),
                matrix: action.matrix(g).to_rows(),
            })
            .collect();
        ModelFile {
            format: FORMAT.to_string(),
            base: base.names().to_vec(),
            truncation: Some(truncation),
            groupoid: Some(GroupoidSpec { arrows, composition }),
            bundle: Some(BundleSpec { fibers }),
            action: Some(action),
            table: None,
        }
    }

    pub fn from_table(table: &TableAlgebroid) -> ModelFile {
        let data = table.to_data();
        let name = |x: usize| data.base.name(x).to_string();
        ModelFile {
            format: FORMAT.to_string(),
            base: data.base.names().to_vec(),
            truncation: None,
            groupoid: None,
            bundle: None,
            action: None,
            table: Some(TableSpec {
                dim: data.labels.len(),
                labels: data.labels.clone(),
                points: data.points.iter().map(|&p| name(p)).collect(),
                units: data
                    .units
                    .iter()
                    .enumerate()
                    .map(|(y, u)| (name(y), u.clone()))
                    .collect(),
                mul: data.mul,
                delta: data.delta,
                counit: data.counit,
                antipode: data.antipode,
            }),
        }
    }

    /// Resolves identifiers and checks shapes.
    pub fn resolve(&self) -> Result<Model, ModelError> {
        let base = BaseSpace::new(self.base.iter().cloned())?;
        match (&self.table, &self.groupoid) {
            (Some(_), Some(_)) => Err(ModelError::Structure(
                "a model has either \"groupoid\" or \"table\", not both".to_string(),
            )),
            (None, None) => Err(ModelError::Structure(
                "a model needs \"groupoid\" or \"table\"".to_string(),
            )),
            (Some(t), None) => {
                for key in ["truncation", "bundle", "action"] {
                    let present = match key {
                        "truncation" => self.truncation.is_some(),
                        "bundle" => self.bundle.is_some(),
                        _ => self.action.is_some(),
                    };
                    if present {
                        return Err(ModelError::Structure(format!("table models take no \"{key}\"")));
                    }
                }
                Ok(Model::Table(resolve_table(base, t)?))
            }
            (None, Some(g)) => self.resolve_constructed(base, g),
        }
    }

    fn resolve_constructed(&self, base: BaseSpace, g: &GroupoidSpec) -> Result<Model, ModelError> {
        let groupoid = FiniteGroupoid::from_table(
            base.clone(),
            g.arrows
                .iter()
                .map(|a| (a.id.clone(), a.src.clone(), a.tgt.clone()))
                .collect(),
            g.composition
                .iter()
                .map(|[a, b, c]| (a.clone(), b.clone(), c.clone()))
                .collect(),
        )?;
        let bundle = match &self.bundle {
            None => LieBundle::zero(base.clone()),
            Some(spec) => {
                let mut fibers: Vec<Option<LieFiber>> = vec![None; base.len()];
                for f in &spec.fibers {
                    let x = base
                        .index_of(&f.point)
                        .ok_or_else(|| GroupoidError::UnknownPoint(f.point.clone()))?;
                    if fibers[x].is_some() {
                        return Err(ModelError::Structure(format!("fiber at {:?} given twice", f.point)));
                    }
                    let names = f.names.clone().unwrap_or_else(|| default_names(f.dim));
                    if names.len() != f.dim {
                        return Err(ModelError::Structure(format!(
                            "fiber at {:?} has dim {} but {} names",
                            f.point,
                            f.dim,
                            names.len()
                        )));
                    }
                    fibers[x] = Some(LieFiber::from_brackets(names, f.brackets.clone())?);
                }
                let fibers = fibers
                    .into_iter()
                    .enumerate()
                    .map(|(x, f)| f.ok_or_else(|| ModelError::Structure(format!("no fiber at {:?}", base.name(x)))))
                    .collect::<Result<Vec<_>, _>>()?;
                LieBundle::new(base.clone(), fibers)?
            }
        };
        let action = match &self.action {
            None => BundleAction::identity(&groupoid, &bundle)?,
            Some(entries) => {
                let mut matrices: Vec<Option<QMatrix>> = vec![None; groupoid.len()];
                for e in entries {
                    let gi = groupoid
                        .arrow_by_id(&e.arrow)
                        .ok_or_else(|| GroupoidError::UnknownArrow(e.arrow.clone()))?;
                    if matrices[gi].is_some() {
                        return Err(ModelError::Structure(format!("matrix for {:?} given twice", e.arrow)));
                    }
                    let cols = e
                        .matrix
                        .first()
                        .map(Vec::len)
                        .unwrap_or_else(|| bundle.fiber(groupoid.src(gi)).dim());
                    let m = QMatrix::from_rows(e.matrix.clone(), cols)
                        .ok_or_else(|| ModelError::Structure(format!("matrix for {:?} is ragged", e.arrow)))?;
                    matrices[gi] = Some(m);
                }
                let matrices = matrices
                    .into_iter()
                    .enumerate()
                    .map(|(g, m)| {
                        m.ok_or_else(|| ModelError::Structure(format!("no matrix for arrow {:?}", groupoid.id(g))))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                BundleAction::new(&groupoid, &bundle, matrices)?
            }
        };
        Ok(Model::Constructed {
            groupoid,
            bundle,
            action,
            truncation: self.truncation.unwrap_or(DEFAULT_TRUNCATION),
        })
    }
}

fn resolve_table(base: BaseSpace, t: &TableSpec) -> Result<TableAlgebroid, ModelError> {
    if t.labels.len() != t.dim {
        return Err(ModelError::Structure(format!(
            "table has dim {} but {} labels",
            t.dim,
            t.labels.len()
        )));
    }
    let points = t
        .points
        .iter()
        .map(|p| base.index_of(p).ok_or_else(|| GroupoidError::UnknownPoint(p.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut units = vec![Vec::new(); base.len()];
    let mut seen = vec![false; base.len()];
    for (p, u) in &t.units {
        let y = base.index_of(p).ok_or_else(|| GroupoidError::UnknownPoint(p.clone()))?;
        units[y] = u.clone();
        seen[y] = true;
    }
    if let Some(y) = seen.iter().position(|s| !s) {
        return Err(TableError::MissingUnit(base.name(y).to_string()).into());
    }
    Ok(TableAlgebroid::import(TableData {
        base,
        labels: t.labels.clone(),
        points,
        units,
        mul: t.mul.clone(),
        delta: t.delta.clone(),
        counit: t.counit.clone(),
        antipode: t.antipode.clone(),
    })?)
}

impl Model {
    pub fn validate(&self) -> ValidationReport {
        match self {
            Model::Table(_) => ValidationReport::default(),
            Model::Constructed {
                groupoid,
                bundle,
                action,
                ..
            } => {
                let groupoid_report = groupoid.validate();
                let bundle_report = bundle.validate();
                let action_report = if groupoid_report.is_valid() {
                    action.validate(groupoid, bundle)
                } else {
                    Vec::new()
                };
                ValidationReport {
                    groupoid: groupoid_report.violations,
                    bundle: bundle_report,
                    action: action_report,
                }
            }
        }
    }

    /// Builds the algebroid, rejecting inputs that violate the laws.
    pub fn into_algebroid(self) -> Result<HopfAlgebroid, AlgebroidError> {
        match self {
            Model::Table(t) => Ok(HopfAlgebroid::Table(t)),
            Model::Constructed {
                groupoid,
                bundle,
                action,
                truncation,
            } => Ok(HopfAlgebroid::Convolution(ConvolutionAlgebroid::new(
                groupoid, bundle, action, truncation,
            )?)),
        }
    }

    /// Builds the algebroid without checking Lie or action laws.
    pub fn into_algebroid_unchecked(self) -> Result<HopfAlgebroid, AlgebroidError> {
        match self {
            Model::Table(t) => Ok(HopfAlgebroid::Table(t)),
            Model::Constructed {
                groupoid,
                bundle,
                action,
                truncation,
            } => Ok(HopfAlgebroid::Convolution(ConvolutionAlgebroid::new_unchecked(
                groupoid, bundle, action, truncation,
            )?)),
        }
    }
}

/// Reads, resolves and builds in one step.
pub fn load_algebroid(text: &str) -> Result<HopfAlgebroid, ModelError> {
    Ok(ModelFile::from_json(text)?.resolve()?.into_algebroid()?)
}

pub(crate) fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_the_field_path() {
        let text = r#"{"format": "hopfalg-model/1", "base": ["x"], "truncation": "four"}"#;
        match ModelFile::from_json(text) {
            Err(ModelError::Syntax { path, line, .. }) => {
                assert_eq!(path, "truncation");
                assert_eq!(line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn floats_are_rejected() {
        let text = r#"{"format": "hopfalg-model/1", "base": ["x"],
            "groupoid": {"arrows": [{"id": "e", "src": "x", "tgt": "x"}], "composition": [["e","e","e"]]},
            "action": [{"arrow": "e", "matrix": [[0.5]]}]}"#;
        match ModelFile::from_json(text) {
            Err(ModelError::Syntax { path, .. }) => assert!(path.starts_with("action[0].matrix"), "{path}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_arrow_is_a_structure_error() {
        let text = r#"{"format": "hopfalg-model/1", "base": ["x"],
            "groupoid": {"arrows": [{"id": "e", "src": "x", "tgt": "x"}], "composition": [["e","f","e"]]}}"#;
        let file = ModelFile::from_json(text).unwrap();
        assert!(matches!(
            file.resolve(),
            Err(ModelError::Groupoid(GroupoidError::UnknownArrow(_)))
        ));
    }

    #[test]
    fn presets_round_trip() {
        for file in [z2line(), pairh3(), funs3(), random_model(5)] {
            let text = file.to_json();
            let back = ModelFile::from_json(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn schema_is_json() {
        let v: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
        assert!(v.get("properties").is_some());
    }
}
