//! TOML space descriptions.
//!
//! ```toml
//! [[piece]]
//! id = "X1"
//! coords = ["x1", "y1"]
//!
//! [[piece]]
//! id = "X2"
//! coords = ["x2", "y2"]
//!
//! [[wedge]]
//! id = "w0"
//! participants = [
//!     { piece = "X1", at = ["0", "0"] },
//!     { piece = "X2", at = ["0", "0"] },
//! ]
//!
//! [metric.X1]
//! matrix = [["1", "0"], ["0", "exp(x1*y1)"]]
//!
//! [form.omega]
//! grade = 1
//! X1 = { "dx1" = "y1" }
//!
//! [section.s]
//! X1 = { "1" = "x1", "dx1^dy1" = "x1*y1" }
//! ```
//!
//! Wedge coordinates are rationals written as strings (`"1/2"`) or integers.
//! Pieces without a metric get the standard one. Pieces missing from a form
//! or section carry zero there.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::derham::{GluedSection, PieceSection};
use crate::error::{Error, Result};
use crate::forms::{assemble, GluedForm, PieceForm};
use crate::metric::{induced_metric, GluedPseudoMetric, PieceCotangentMetric};
use crate::scalar_expr::{parse_rational, rational, Rational};
use crate::space::{EuclideanPiece, GluedSpace, Participant, WedgePoint};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    piece: Vec<RawPiece>,
    #[serde(default)]
    wedge: Vec<RawWedge>,
    #[serde(default)]
    metric: BTreeMap<String, RawMetric>,
    #[serde(default)]
    form: BTreeMap<String, RawForm>,
    #[serde(default)]
    section: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    id: String,
    coords: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWedge {
    id: String,
    participants: Vec<RawParticipant>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParticipant {
    piece: String,
    at: Vec<RawRational>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    matrix: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct RawForm {
    grade: usize,
    #[serde(flatten)]
    pieces: BTreeMap<String, BTreeMap<String, String>>,
}

/// A parsed and validated space file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescription {
    pub space: GluedSpace,
    /// One metric per piece, in space order.
    pub metrics: Vec<PieceCotangentMetric>,
    /// Pieces whose metric was given explicitly.
    pub explicit_metrics: Vec<String>,
    /// Per-piece forms as written; see [`SpaceDescription::form`].
    pub forms: BTreeMap<String, Vec<PieceForm>>,
    pub sections: BTreeMap<String, GluedSection>,
}

fn context(key: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Validation(v) => Error::Validation(v),
        other => Error::SpaceFile(format!("{key}: {other}")),
    }
}

fn parse_coordinate(r: &RawRational) -> Result<Rational> {
    match r {
        RawRational::Int(n) => Ok(rational(*n)),
        RawRational::Text(t) => parse_rational(t),
    }
}

impl SpaceDescription {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(src).map_err(|e| Error::SpaceFile(e.to_string().trim_end().to_string()))?;
        if raw.piece.is_empty() {
            return Err(Error::SpaceFile("no [[piece]] entries".into()));
        }
        let pieces: Vec<EuclideanPiece> = raw
            .piece
            .iter()
            .map(|p| EuclideanPiece {
                id: p.id.clone(),
                coords: p.coords.clone(),
            })
            .collect();
        let wedges = raw
            .wedge
            .iter()
            .map(|w| {
                let participants = w
                    .participants
                    .iter()
                    .enumerate()
                    .map(|(i, q)| {
                        let key = format!("wedge `{}` participant {i}", w.id);
                        let at = q
                            .at
                            .iter()
                            .map(parse_coordinate)
                            .collect::<Result<Vec<_>>>()
                            .map_err(context(&key))?;
                        Ok(Participant {
                            piece: q.piece.clone(),
                            at,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(WedgePoint {
                    id: w.id.clone(),
                    participants,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let space = GluedSpace::new(pieces, wedges)?;

        for id in raw.metric.keys() {
            space.piece(id).map_err(context(&format!("metric.{id}")))?;
        }
        let mut explicit_metrics = Vec::new();
        let metrics = space
            .pieces()
            .iter()
            .map(|p| match raw.metric.get(&p.id) {
                Some(m) => {
                    explicit_metrics.push(p.id.clone());
                    let rows: Vec<Vec<&str>> = m.matrix.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
                    PieceCotangentMetric::parse(p, &rows).map_err(context(&format!("metric.{}.matrix", p.id)))
                }
                None => Ok(PieceCotangentMetric::identity(p)),
            })
            .collect::<Result<Vec<_>>>()?;

        let mut forms = BTreeMap::new();
        for (name, f) in &raw.form {
            let key = format!("form.{name}");
            let comps = space
                .pieces()
                .iter()
                .map(|p| {
                    let entries: Vec<(&str, &str)> = f
                        .pieces
                        .get(&p.id)
                        .map(|m| m.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect())
                        .unwrap_or_default();
                    PieceForm::parse(p, f.grade, &entries).map_err(context(&format!("{key}.{}", p.id)))
                })
                .collect::<Result<Vec<_>>>()?;
            for id in f.pieces.keys() {
                space.piece(id).map_err(context(&key))?;
            }
            forms.insert(name.clone(), comps);
        }

        let mut sections = BTreeMap::new();
        for (name, per_piece) in &raw.section {
            let key = format!("section.{name}");
            let comps = per_piece
                .iter()
                .map(|(id, m)| {
                    let p = space.piece(id).map_err(context(&key))?;
                    let entries: Vec<(&str, &str)> = m.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
                    PieceSection::parse(p, &entries).map_err(context(&format!("{key}.{id}")))
                })
                .collect::<Result<Vec<_>>>()?;
            sections.insert(name.clone(), GluedSection::new(&space, comps)?);
        }

        Ok(SpaceDescription {
            space,
            metrics,
            explicit_metrics,
            forms,
            sections,
        })
    }

    pub fn from_space(space: GluedSpace) -> Self {
        let metrics = space.pieces().iter().map(PieceCotangentMetric::identity).collect();
        SpaceDescription {
            space,
            metrics,
            explicit_metrics: Vec::new(),
            forms: BTreeMap::new(),
            sections: BTreeMap::new(),
        }
    }

    pub fn induced_metric(&self) -> Result<GluedPseudoMetric> {
        induced_metric(&self.metrics, &self.space)
    }

    /// A named form; fails if its pieces disagree at a wedge point.
    pub fn form(&self, name: &str) -> Result<GluedForm> {
        let comps = self
            .forms
            .get(name)
            .ok_or_else(|| Error::SpaceFile(format!("no form named `{name}`")))?;
        assemble(comps, &self.space).map_err(context(&format!("form.{name}")))
    }

    /// A named section, or a named form read as a section.
    pub fn section(&self, name: &str) -> Result<GluedSection> {
        if let Some(s) = self.sections.get(name) {
            return Ok(s.clone());
        }
        if self.forms.contains_key(name) {
            return Ok(GluedSection::from_form(&self.form(name)?));
        }
        Err(Error::SpaceFile(format!("no section or form named `{name}`")))
    }
}

pub fn parse_space(path: &Path) -> Result<SpaceDescription> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::SpaceFile(format!("{}: {e}", path.display())))?;
    SpaceDescription::from_toml_str(&src)
}
