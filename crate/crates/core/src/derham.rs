//! The De Rham operator `D = c o nabla` on sections of the exterior algebra
//! of `Lambda^1` over glued spaces, plus the flat `d + d*` comparison.

use serde::Serialize;

use crate::clifford::clifford_action;
use crate::error::{Error, Result};
use crate::exterior::{ExtElement, MultiIndex};
use crate::forms::{exterior_d, parse_multi_index, GluedForm, PieceForm};
use crate::metric::{christoffel, induced_metric, GluedConnection, GluedPseudoMetric, PieceCotangentMetric};
use crate::scalar_expr::{rational, Rational, ScalarExpr};
use crate::space::{EuclideanPiece, GluedSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundedDimension {
    Bounded(usize),
    Unbounded,
}

/// Largest fibre dimension of `Lambda^1`: the piece dimensions, and at each
/// wedge point the sum of the participants' dimensions.
pub fn bounded_dimension(s: &GluedSpace) -> BoundedDimension {
    let pieces = s.pieces().iter().map(EuclideanPiece::dim).max().unwrap_or(0);
    let wedges = s
        .wedges()
        .iter()
        .map(|w| {
            w.participants
                .iter()
                .filter_map(|q| s.piece(&q.piece).ok())
                .map(EuclideanPiece::dim)
                .sum()
        })
        .max()
        .unwrap_or(0);
    BoundedDimension::Bounded(pieces.max(wedges))
}

/// Mixed-grade section on one piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceSection {
    pub piece: String,
    pub coords: Vec<String>,
    pub value: ExtElement,
}

impl PieceSection {
    pub fn zero(piece: &EuclideanPiece) -> Self {
        PieceSection {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            value: ExtElement::zero(piece.dim()),
        }
    }

    pub fn new(piece: &EuclideanPiece, value: ExtElement) -> Result<Self> {
        if value.dim() != piece.dim() {
            return Err(Error::DimensionMismatch {
                expected: piece.dim(),
                found: value.dim(),
            });
        }
        for (_, c) in value.terms() {
            if let Some(v) = c.variables().into_iter().find(|v| !piece.coords.contains(v)) {
                return Err(Error::Mismatch(format!(
                    "coefficient uses `{v}`, which is not a coordinate of piece `{}`",
                    piece.id
                )));
            }
        }
        Ok(PieceSection {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            value,
        })
    }

    /// Entries keyed like `dx^dy`, with `1` for the function part.
    pub fn parse(piece: &EuclideanPiece, entries: &[(&str, &str)]) -> Result<Self> {
        let mut value = ExtElement::zero(piece.dim());
        for (key, expr) in entries {
            let (sign, idx) = parse_multi_index(piece, key)?;
            value.add_term(idx, ScalarExpr::parse(expr)?.scale(&rational(sign.into())));
        }
        PieceSection::new(piece, value)
    }

    pub fn from_form(w: &PieceForm) -> Self {
        PieceSection {
            piece: w.piece().to_string(),
            coords: w.coords().to_vec(),
            value: w.element().clone(),
        }
    }

    pub fn sub(&self, other: &PieceSection) -> Result<PieceSection> {
        Ok(PieceSection {
            value: self.value.sub(&other.value)?,
            ..self.clone()
        })
    }

    pub fn names(&self) -> Vec<String> {
        self.coords.iter().map(|c| format!("d{c}")).collect()
    }

    pub fn render(&self) -> String {
        self.value.render(&self.names())
    }
}

/// A section of the exterior algebra bundle: one piece section per piece,
/// in space order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedSection {
    components: Vec<PieceSection>,
}

/// Value of a glued section at a wedge point. Positive-grade parts are
/// direct-summed into the wedge fibre; the function parts are listed per
/// participant and agree when the section is continuous there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeValue {
    pub wedge: String,
    pub dim: usize,
    pub positive: ExtElement,
    pub scalars: Vec<(String, ScalarExpr)>,
}

impl WedgeValue {
    pub fn scalars_agree(&self) -> bool {
        self.scalars.windows(2).all(|p| p[0].1 == p[1].1)
    }

    /// The full fibre value, if the function parts agree.
    pub fn fibre_value(&self) -> Option<ExtElement> {
        if !self.scalars_agree() {
            return None;
        }
        let c = self.scalars.first().map(|(_, c)| c.clone()).unwrap_or_else(ScalarExpr::zero);
        ExtElement::scalar(self.dim, c).add(&self.positive).ok()
    }
}

impl GluedSection {
    /// Pieces missing from `components` get the zero section.
    pub fn new(s: &GluedSpace, components: Vec<PieceSection>) -> Result<Self> {
        for c in &components {
            let p = s.piece(&c.piece)?;
            if p.coords != c.coords {
                return Err(Error::Mismatch(format!("section on `{}` uses other coordinates", c.piece)));
            }
        }
        let ordered = s
            .pieces()
            .iter()
            .map(|p| {
                let mut acc = PieceSection::zero(p);
                for c in components.iter().filter(|c| c.piece == p.id) {
                    acc.value = acc.value.add(&c.value)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GluedSection { components: ordered })
    }

    pub fn zero(s: &GluedSpace) -> Self {
        GluedSection {
            components: s.pieces().iter().map(PieceSection::zero).collect(),
        }
    }

    /// `entries[i] = (piece id, [(key, expression)])`.
    pub fn parse(s: &GluedSpace, entries: &[(&str, Vec<(&str, &str)>)]) -> Result<Self> {
        let comps = entries
            .iter()
            .map(|(piece, kv)| PieceSection::parse(s.piece(piece)?, kv))
            .collect::<Result<Vec<_>>>()?;
        GluedSection::new(s, comps)
    }

    pub fn from_form(w: &GluedForm) -> Self {
        GluedSection {
            components: w.components().iter().map(PieceSection::from_form).collect(),
        }
    }

    pub fn components(&self) -> &[PieceSection] {
        &self.components
    }

    pub fn component(&self, piece: &str) -> Result<&PieceSection> {
        self.components
            .iter()
            .find(|c| c.piece == piece)
            .ok_or_else(|| Error::UnknownPiece(piece.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.value.is_zero())
    }

    pub fn sub(&self, other: &GluedSection) -> Result<GluedSection> {
        if self.components.len() != other.components.len() {
            return Err(Error::Mismatch("sections live on different spaces".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(GluedSection { components })
    }

    pub fn grade_part(&self, k: usize) -> GluedSection {
        GluedSection {
            components: self
                .components
                .iter()
                .map(|c| PieceSection {
                    value: c.value.grade_part(k),
                    ..c.clone()
                })
                .collect(),
        }
    }

    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.components.iter().flat_map(|c| c.value.grades()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn wedge_value(&self, s: &GluedSpace, wedge: &str) -> Result<WedgeValue> {
        let w = s.wedge(wedge)?;
        let dim: usize = w
            .participants
            .iter()
            .map(|q| s.piece(&q.piece).map(EuclideanPiece::dim))
            .sum::<Result<usize>>()?;
        let mut positive = ExtElement::zero(dim);
        let mut scalars = Vec::new();
        let mut offset = 0;
        for q in &w.participants {
            let p = s.piece(&q.piece)?;
            let c = &self.components[s.piece_index(&q.piece)?];
            let pt = p.point(&q.at);
            let at = c.value.map_coefficients(|e| e.substitute(&pt));
            scalars.push((p.id.clone(), at.coefficient(&MultiIndex::empty())));
            let rest = at.sub(&at.grade_part(0))?;
            positive = positive.add(&rest.embed(dim, offset)?)?;
            offset += p.dim();
        }
        Ok(WedgeValue {
            wedge: wedge.to_string(),
            dim,
            positive,
            scalars,
        })
    }

    pub fn render(&self) -> Vec<(String, String)> {
        self.components.iter().map(|c| (c.piece.clone(), c.render())).collect()
    }
}

fn check_metric_matches(g: &GluedPseudoMetric, conn: &GluedConnection) -> Result<()> {
    if g.pieces().len() != conn.pieces().len() {
        return Err(Error::Mismatch("metric and connection have different pieces".into()));
    }
    for (m, c) in g.pieces().iter().zip(conn.pieces()) {
        if m.piece() != c.piece() {
            return Err(Error::Mismatch(format!(
                "metric on `{}` paired with connection on `{}`",
                m.piece(),
                c.piece()
            )));
        }
        if &christoffel(m)? != c.christoffel() {
            return Err(Error::Mismatch(format!(
                "connection on `{}` is not the Levi-Civita connection of its metric",
                m.piece()
            )));
        }
    }
    Ok(())
}

/// `D s = sum_a c(dx_a)(nabla_a s)` on each piece.
pub fn derham_apply(sec: &GluedSection, g: &GluedPseudoMetric, conn: &GluedConnection) -> Result<GluedSection> {
    check_metric_matches(g, conn)?;
    let nabla = conn.apply(sec)?;
    let components = nabla
        .pieces
        .iter()
        .zip(g.pieces())
        .map(|(t, m)| {
            let form = m.fibre_form()?;
            let n = m.dim();
            let mut out = ExtElement::zero(n);
            for (a, leg) in t.legs.iter().enumerate() {
                out = out.add(&clifford_action(&ExtElement::generator(n, a), leg, &form)?)?;
            }
            Ok(PieceSection {
                piece: t.piece.clone(),
                coords: t.coords.clone(),
                value: out,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GluedSection { components })
}

/// Standard metrics on every piece and their (flat) connections.
pub fn flat_structure(s: &GluedSpace) -> Result<(GluedPseudoMetric, GluedConnection)> {
    let gs: Vec<_> = s.pieces().iter().map(PieceCotangentMetric::identity).collect();
    let g = induced_metric(&gs, s)?;
    let conn = GluedConnection::levi_civita(s, &g)?;
    Ok((g, conn))
}

/// `d w + d* w` for the flat metric, with
/// `(d* w)_{a2..ak} = -sum_a d_a w_{a a2..ak}`.
pub fn euclidean_dplusdstar(w: &PieceSection) -> PieceSection {
    let mut out = exterior_d(&w.value, &w.coords);
    for (idx, c) in w.value.terms() {
        for (pos, &a) in idx.indices().iter().enumerate() {
            let da = c.differentiate(&w.coords[a]);
            if da.is_zero() {
                continue;
            }
            // w_{a, I minus a} = (-1)^pos w_I
            let sign: i64 = if pos % 2 == 0 { -1 } else { 1 };
            out.add_term(idx.without_position(pos), da.scale(&rational(sign)));
        }
    }
    PieceSection {
        value: out,
        ..w.clone()
    }
}

/// `derham_apply - (d + d*)` per piece, with the standard metric on every piece.
pub fn compare_with_oracle(sec: &GluedSection, s: &GluedSpace) -> Result<GluedSection> {
    let (g, conn) = flat_structure(s)?;
    let d = derham_apply(sec, &g, &conn)?;
    let oracle = GluedSection {
        components: sec.components.iter().map(euclidean_dplusdstar).collect(),
    };
    d.sub(&oracle)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceResidual {
    pub piece: String,
    /// `None` when the piece metric is not the standard one.
    pub residual: Option<f64>,
    pub difference: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WedgeReport {
    pub wedge: String,
    pub value: String,
    pub scalar_parts_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeRhamReport {
    pub input: Vec<(String, String)>,
    pub output: Vec<(String, String)>,
    pub residuals: Vec<PieceResidual>,
    pub wedge_values: Vec<WedgeReport>,
}

fn sample_points(n: usize) -> Vec<Vec<Rational>> {
    (0..9)
        .map(|i: i64| (0..n as i64).map(|j| Rational::new(((i * 7 + j * 3) % 9 - 4).into(), 3.into())).collect())
        .collect()
}

/// Applies `D` and compares flat pieces against `d + d*`.
pub fn derham_report(sec: &GluedSection, s: &GluedSpace, g: &GluedPseudoMetric, conn: &GluedConnection) -> Result<DeRhamReport> {
    let out = derham_apply(sec, g, conn)?;
    let mut residuals = Vec::new();
    for ((c, o), m) in sec.components.iter().zip(&out.components).zip(g.pieces()) {
        let piece = s.piece(&c.piece)?;
        if m != &PieceCotangentMetric::identity(piece) {
            residuals.push(PieceResidual {
                piece: c.piece.clone(),
                residual: None,
                difference: None,
            });
            continue;
        }
        let diff = o.sub(&euclidean_dplusdstar(c))?;
        let mut worst = 0.0f64;
        for (_, coeff) in diff.value.terms() {
            for p in sample_points(piece.dim()) {
                worst = worst.max(coeff.evaluate(&piece.point(&p))?.to_f64().abs());
            }
        }
        residuals.push(PieceResidual {
            piece: c.piece.clone(),
            residual: Some(worst),
            difference: Some(diff.render()),
        });
    }
    let wedge_values = s
        .wedges()
        .iter()
        .map(|w| {
            let v = out.wedge_value(s, &w.id)?;
            let names = wedge_names(s, &w.id)?;
            let value = match v.fibre_value() {
                Some(e) => e.render(&names),
                None => {
                    let parts: Vec<String> = v.scalars.iter().map(|(p, c)| format!("{p}: {c}")).collect();
                    format!("{} + scalar parts [{}]", v.positive.render(&names), parts.join(", "))
                }
            };
            Ok(WedgeReport {
                wedge: w.id.clone(),
                value,
                scalar_parts_agree: v.scalars_agree(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DeRhamReport {
        input: sec.render(),
        output: out.render(),
        residuals,
        wedge_values,
    })
}

/// Covector names in the wedge fibre, participants in order.
pub fn wedge_names(s: &GluedSpace, wedge: &str) -> Result<Vec<String>> {
    let w = s.wedge(wedge)?;
    let mut names = Vec::new();
    for q in &w.participants {
        names.extend(s.piece(&q.piece)?.covector_names());
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_section(entries: &[(&str, &str)]) -> (GluedSpace, GluedSection) {
        let s = GluedSpace::euclidean(2);
        let sec = GluedSection::parse(&s, &[("X", entries.to_vec())]).unwrap();
        (s, sec)
    }

    fn apply_flat(s: &GluedSpace, sec: &GluedSection) -> GluedSection {
        let (g, conn) = flat_structure(s).unwrap();
        derham_apply(sec, &g, &conn).unwrap()
    }

    #[test]
    fn bounded_dimension_examples() {
        assert_eq!(bounded_dimension(&GluedSpace::wedge_of_planes()), BoundedDimension::Bounded(4));
        assert_eq!(bounded_dimension(&GluedSpace::wedge_of_lines(5).unwrap()), BoundedDimension::Bounded(5));
        assert_eq!(bounded_dimension(&GluedSpace::euclidean(3)), BoundedDimension::Bounded(3));
    }

    #[test]
    fn flat_examples() {
        let (s, f) = plane_section(&[("1", "x^2*y")]);
        let expected = GluedSection::parse(&s, &[("X", vec![("dx", "2*x*y"), ("dy", "x^2")])]).unwrap();
        assert_eq!(apply_flat(&s, &f), expected);

        let (s, w) = plane_section(&[("dy", "x")]);
        let expected = GluedSection::parse(&s, &[("X", vec![("dx^dy", "1")])]).unwrap();
        assert_eq!(apply_flat(&s, &w), expected);

        let (s, w) = plane_section(&[("dx", "x")]);
        let expected = GluedSection::parse(&s, &[("X", vec![("1", "-1")])]).unwrap();
        assert_eq!(apply_flat(&s, &w), expected);
    }

    #[test]
    fn oracle_examples() {
        let (_, w) = plane_section(&[("dx^dy", "x")]);
        let d = euclidean_dplusdstar(&w.components()[0]);
        assert_eq!(d.value, ExtElement::generator(2, 1).scale(&ScalarExpr::int(-1)));
        let (s, w) = plane_section(&[("dx^dy", "x*exp(y)"), ("dx", "y^3"), ("1", "x*y")]);
        assert!(compare_with_oracle(&w, &s).unwrap().is_zero());
    }

    #[test]
    fn wedge_value_is_a_direct_sum() {
        let s = GluedSpace::wedge_of_planes();
        let sec = GluedSection::parse(&s, &[("X1", vec![("dy1", "x1")])]).unwrap();
        let d = apply_flat(&s, &sec);
        let v = d.wedge_value(&s, "w0").unwrap();
        assert!(v.scalars_agree());
        assert_eq!(v.positive, ExtElement::basis(4, MultiIndex::new(vec![0, 1]).unwrap()));

        let (g, conn) = flat_structure(&s).unwrap();
        let t = conn.apply(&sec).unwrap();
        let legs = t.wedge_value(&s, "w0").unwrap();
        assert_eq!(legs[0], ExtElement::generator(4, 1));
        assert!(legs[1..].iter().all(ExtElement::is_zero));
        assert!(derham_report(&sec, &s, &g, &conn).unwrap().residuals.iter().all(|r| r.residual == Some(0.0)));
    }

    #[test]
    fn mismatched_connection_is_rejected() {
        let s = GluedSpace::euclidean(2);
        let p = &s.pieces()[0];
        let curved = PieceCotangentMetric::parse(p, &[vec!["1", "0"], vec!["0", "exp(x*y)"]]).unwrap();
        let g = induced_metric(&[curved], &s).unwrap();
        let (_, flat_conn) = flat_structure(&s).unwrap();
        let sec = GluedSection::zero(&s);
        assert!(matches!(derham_apply(&sec, &g, &flat_conn), Err(Error::Mismatch(_))));
    }
}
