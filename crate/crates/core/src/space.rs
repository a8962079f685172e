//! Finite wedges of Euclidean pieces.
//!
//! A [`GluedSpace`] is a finite family of whole Euclidean spaces together with
//! finitely many wedge points, each identifying one point from each of two or
//! more pieces. Iterated point gluings are stored flatly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar_expr::{fmt_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclideanPiece {
    pub id: String,
    pub coords: Vec<String>,
}

impl EuclideanPiece {
    pub fn new(id: impl Into<String>, coords: &[&str]) -> Self {
        EuclideanPiece {
            id: id.into(),
            coords: coords.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Binds this piece's coordinates to `values`.
    pub fn point(&self, values: &[Rational]) -> BTreeMap<String, Rational> {
        self.coords.iter().cloned().zip(values.iter().cloned()).collect()
    }

    /// Covector names `dx`, `dy`, ... used when rendering forms.
    pub fn covector_names(&self) -> Vec<String> {
        self.coords.iter().map(|c| format!("d{c}")).collect()
    }

    pub fn origin(&self) -> Vec<Rational> {
        vec![Rational::default(); self.dim()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Participant {
    pub piece: String,
    pub at: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgePoint {
    pub id: String,
    pub participants: Vec<Participant>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpacePoint {
    Piece { piece: String, coords: Vec<Rational> },
    Wedge(String),
}

impl fmt::Display for SpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpacePoint::Wedge(id) => write!(f, "{id}"),
            SpacePoint::Piece { piece, coords } => {
                let c: Vec<String> = coords.iter().map(fmt_rational).collect();
                write!(f, "{piece}:{}", c.join(","))
            }
        }
    }
}

impl SpacePoint {
    /// Parses `wedge_id` or `piece:c1,c2,...`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None => Ok(SpacePoint::Wedge(s.trim().to_string())),
            Some((piece, rest)) => {
                let coords = if rest.trim().is_empty() {
                    Vec::new()
                } else {
                    rest.split(',')
                        .map(crate::scalar_expr::parse_rational)
                        .collect::<Result<Vec<_>>>()?
                };
                Ok(SpacePoint::Piece {
                    piece: piece.trim().to_string(),
                    coords,
                })
            }
        }
    }
}

/// A broken structural invariant, with the ids it concerns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub piece: Option<String>,
    pub wedge: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.wedge, &self.piece) {
            (Some(w), Some(p)) => write!(f, "wedge `{w}`, piece `{p}`: {}", self.message),
            (Some(w), None) => write!(f, "wedge `{w}`: {}", self.message),
            (None, Some(p)) => write!(f, "piece `{p}`: {}", self.message),
            (None, None) => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedSpace {
    pieces: Vec<EuclideanPiece>,
    wedges: Vec<WedgePoint>,
}

impl GluedSpace {
    /// Builds and validates.
    pub fn new(pieces: Vec<EuclideanPiece>, wedges: Vec<WedgePoint>) -> Result<Self> {
        let s = GluedSpace::from_parts_unchecked(pieces, wedges);
        s.validate().map_err(Error::Validation)?;
        Ok(s)
    }

    pub fn from_parts_unchecked(pieces: Vec<EuclideanPiece>, wedges: Vec<WedgePoint>) -> Self {
        GluedSpace { pieces, wedges }
    }

    /// Standard `R^n` with coordinates `x, y, z, ...`.
    pub fn euclidean(n: usize) -> Self {
        let names = coordinate_names(n, "");
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        GluedSpace::new(vec![EuclideanPiece::new("X", &refs)], Vec::new()).expect("valid")
    }

    /// Wedge at the origins of pieces of the given dimensions. Piece `i`
    /// (1-based) is `Xi` with coordinates `xi, yi, ...`; the wedge point is `w0`.
    pub fn wedge_at_origins(dims: &[usize]) -> Result<Self> {
        let pieces: Vec<EuclideanPiece> = dims
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let names = coordinate_names(n, &(i + 1).to_string());
                EuclideanPiece {
                    id: format!("X{}", i + 1),
                    coords: names,
                }
            })
            .collect();
        let wedge = WedgePoint {
            id: "w0".into(),
            participants: pieces
                .iter()
                .map(|p| Participant {
                    piece: p.id.clone(),
                    at: p.origin(),
                })
                .collect(),
        };
        GluedSpace::new(pieces, vec![wedge])
    }

    pub fn wedge_of_lines(m: usize) -> Result<Self> {
        GluedSpace::wedge_at_origins(&vec![1; m])
    }

    pub fn wedge_of_planes() -> Self {
        GluedSpace::wedge_at_origins(&[2, 2]).expect("valid")
    }

    pub fn pieces(&self) -> &[EuclideanPiece] {
        &self.pieces
    }

    pub fn wedges(&self) -> &[WedgePoint] {
        &self.wedges
    }

    pub fn piece(&self, id: &str) -> Result<&EuclideanPiece> {
        self.pieces
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| Error::UnknownPiece(id.to_string()))
    }

    pub fn piece_index(&self, id: &str) -> Result<usize> {
        self.pieces
            .iter()
            .position(|p| p.id == id)
            .ok_or_else(|| Error::UnknownPiece(id.to_string()))
    }

    pub fn wedge(&self, id: &str) -> Result<&WedgePoint> {
        self.wedges
            .iter()
            .find(|w| w.id == id)
            .ok_or_else(|| Error::UnknownWedge(id.to_string()))
    }

    /// Maximum of the piece dimensions (0 for the empty space).
    pub fn dimension(&self) -> usize {
        self.pieces.iter().map(EuclideanPiece::dim).max().unwrap_or(0)
    }

    /// The space consisting of one piece only, with no gluing.
    pub fn single_piece(&self, id: &str) -> Result<GluedSpace> {
        let p = self.piece(id)?.clone();
        Ok(GluedSpace {
            pieces: vec![p],
            wedges: Vec::new(),
        })
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let piece_v = |p: &str, m: String| Violation {
            piece: Some(p.to_string()),
            wedge: None,
            message: m,
        };
        let mut ids = BTreeSet::new();
        for p in &self.pieces {
            if !ids.insert(p.id.as_str()) {
                out.push(piece_v(&p.id, "duplicate piece id".into()));
            }
            if p.coords.is_empty() {
                out.push(piece_v(&p.id, "piece dimension must be at least 1".into()));
            }
            let distinct: BTreeSet<&String> = p.coords.iter().collect();
            if distinct.len() != p.coords.len() {
                out.push(piece_v(&p.id, "coordinate names are not distinct".into()));
            }
        }

        let mut wedge_ids = BTreeSet::new();
        let mut owner: BTreeMap<(String, Vec<Rational>), String> = BTreeMap::new();
        for w in &self.wedges {
            let wv = |piece: Option<&str>, m: String| Violation {
                piece: piece.map(str::to_string),
                wedge: Some(w.id.clone()),
                message: m,
            };
            if !wedge_ids.insert(w.id.as_str()) {
                out.push(wv(None, "duplicate wedge id".into()));
            }
            if w.participants.len() < 2 {
                out.push(wv(
                    None,
                    format!("needs at least 2 participants, has {}", w.participants.len()),
                ));
            }
            let mut seen = BTreeSet::new();
            for part in &w.participants {
                let Ok(piece) = self.piece(&part.piece) else {
                    out.push(wv(Some(&part.piece), "unknown piece".into()));
                    continue;
                };
                if part.at.len() != piece.dim() {
                    out.push(wv(
                        Some(&part.piece),
                        format!("point has {} coordinates, piece has dimension {}", part.at.len(), piece.dim()),
                    ));
                }
                if !seen.insert(part.piece.as_str()) {
                    out.push(wv(Some(&part.piece), "more than one point of the same piece".into()));
                }
                let key = (part.piece.clone(), part.at.clone());
                if let Some(other) = owner.get(&key) {
                    if other != &w.id {
                        out.push(wv(
                            Some(&part.piece),
                            format!("point already belongs to wedge `{other}`"),
                        ));
                    }
                } else {
                    owner.insert(key, w.id.clone());
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Checks the point and rewrites a piece point lying on a wedge into
    /// wedge form.
    pub fn normalize_point(&self, x: &SpacePoint) -> Result<SpacePoint> {
        match x {
            SpacePoint::Wedge(id) => {
                self.wedge(id)?;
                Ok(x.clone())
            }
            SpacePoint::Piece { piece, coords } => {
                let p = self.piece(piece)?;
                if coords.len() != p.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: p.dim(),
                        found: coords.len(),
                    });
                }
                for w in &self.wedges {
                    if w.participants.iter().any(|q| &q.piece == piece && &q.at == coords) {
                        return Ok(SpacePoint::Wedge(w.id.clone()));
                    }
                }
                Ok(x.clone())
            }
        }
    }

    /// `(piece, local coordinates)` for every piece meeting `x`.
    pub fn pieces_at(&self, x: &SpacePoint) -> Result<Vec<(&EuclideanPiece, Vec<Rational>)>> {
        match self.normalize_point(x)? {
            SpacePoint::Wedge(id) => self
                .wedge(&id)?
                .participants
                .iter()
                .map(|q| Ok((self.piece(&q.piece)?, q.at.clone())))
                .collect(),
            SpacePoint::Piece { piece, coords } => Ok(vec![(self.piece(&piece)?, coords)]),
        }
    }
}

fn coordinate_names(n: usize, suffix: &str) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    (0..n)
        .map(|i| {
            if n <= LETTERS.len() {
                format!("{}{suffix}", LETTERS[i])
            } else if suffix.is_empty() {
                format!("t{i}")
            } else {
                format!("t{suffix}_{i}")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::rational;

    #[test]
    fn dimension_examples() {
        assert_eq!(GluedSpace::wedge_of_lines(2).unwrap().dimension(), 1);
        assert_eq!(GluedSpace::wedge_of_planes().dimension(), 2);
        assert_eq!(GluedSpace::euclidean(3).dimension(), 3);
    }

    #[test]
    fn shared_point_in_two_wedges_is_a_violation() {
        let a = EuclideanPiece::new("A", &["x"]);
        let b = EuclideanPiece::new("B", &["u"]);
        let c = EuclideanPiece::new("C", &["v"]);
        let part = |p: &str| Participant {
            piece: p.into(),
            at: vec![rational(0)],
        };
        let w1 = WedgePoint {
            id: "w1".into(),
            participants: vec![part("A"), part("B")],
        };
        let w2 = WedgePoint {
            id: "w2".into(),
            participants: vec![part("A"), part("C")],
        };
        let err = GluedSpace::new(vec![a, b, c], vec![w1, w2]).unwrap_err();
        let Error::Validation(v) = err else { panic!() };
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].wedge.as_deref(), Some("w2"));
        assert_eq!(v[0].piece.as_deref(), Some("A"));
    }

    #[test]
    fn no_wedges_is_a_disjoint_union() {
        let s = GluedSpace::new(
            vec![EuclideanPiece::new("A", &["x"]), EuclideanPiece::new("B", &["u", "v"])],
            vec![],
        )
        .unwrap();
        assert_eq!(s.dimension(), 2);
    }

    #[test]
    fn single_participant_is_a_violation() {
        let w = WedgePoint {
            id: "lonely".into(),
            participants: vec![Participant {
                piece: "A".into(),
                at: vec![rational(0)],
            }],
        };
        let s = GluedSpace::from_parts_unchecked(vec![EuclideanPiece::new("A", &["x"])], vec![w]);
        let v = s.validate().unwrap_err();
        assert_eq!(v[0].wedge.as_deref(), Some("lonely"));
    }

    #[test]
    fn pieces_at_examples() {
        let planes = GluedSpace::wedge_of_planes();
        let interior = SpacePoint::Piece {
            piece: "X1".into(),
            coords: vec![rational(1), rational(2)],
        };
        assert_eq!(planes.pieces_at(&interior).unwrap().len(), 1);
        assert_eq!(planes.pieces_at(&SpacePoint::Wedge("w0".into())).unwrap().len(), 2);
        let lines = GluedSpace::wedge_of_lines(4).unwrap();
        assert_eq!(lines.pieces_at(&SpacePoint::Wedge("w0".into())).unwrap().len(), 4);
    }

    #[test]
    fn piece_point_on_wedge_is_normalized() {
        let planes = GluedSpace::wedge_of_planes();
        let p = SpacePoint::parse("X2:0,0").unwrap();
        assert_eq!(planes.normalize_point(&p).unwrap(), SpacePoint::Wedge("w0".into()));
        assert!(planes.normalize_point(&SpacePoint::parse("X2:0").unwrap()).is_err());
        assert!(planes.normalize_point(&SpacePoint::Wedge("nope".into())).is_err());
    }
}
