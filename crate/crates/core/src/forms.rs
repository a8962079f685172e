//! Differential forms on glued spaces.
//!
//! A form on a wedge is a tuple of per-piece forms satisfying the
//! compatibility condition. With point gluings, constant plots pull every
//! positive-degree form back to zero, so the condition only constrains
//! functions: their values must agree at each wedge point.
//!
//! The fibre of `Lambda^k` at a point is the space of forms modulo the forms
//! vanishing there; it is the direct sum of the piece fibres over the pieces
//! meeting the point, presented here with piece-tagged labels.

use std::collections::BTreeMap;
use std::fmt;

use crate::cohomology::PolyComplexSlice;
use crate::error::{Error, Result};
use crate::exterior::{binomial, ExtElement, MultiIndex};
use crate::linalg::Matrix;
use crate::scalar_expr::{rational, Rational, ScalarExpr};
use crate::space::{EuclideanPiece, GluedSpace, SpacePoint};

/// A homogeneous form on one Euclidean piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceForm {
    piece: String,
    coords: Vec<String>,
    grade: usize,
    element: ExtElement,
}

impl PieceForm {
    pub fn new(piece: &EuclideanPiece, grade: usize, element: ExtElement) -> Result<Self> {
        if element.dim() != piece.dim() {
            return Err(Error::DimensionMismatch {
                expected: piece.dim(),
                found: element.dim(),
            });
        }
        if let Some(k) = element.homogeneous_grade()? {
            if k != grade {
                return Err(Error::GradeMismatch {
                    expected: grade,
                    found: k,
                });
            }
        }
        for (_, c) in element.terms() {
            if let Some(v) = c.variables().into_iter().find(|v| !piece.coords.contains(v)) {
                return Err(Error::Mismatch(format!(
                    "coefficient uses `{v}`, which is not a coordinate of piece `{}`",
                    piece.id
                )));
            }
        }
        Ok(PieceForm {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            grade,
            element,
        })
    }

    pub fn zero(piece: &EuclideanPiece, grade: usize) -> Self {
        PieceForm {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            grade,
            element: ExtElement::zero(piece.dim()),
        }
    }

    /// Builds from `(multi-index string, expression string)` pairs such as
    /// `("dx^dy", "x + 2*y")`. The key `1` denotes the function part.
    pub fn parse(piece: &EuclideanPiece, grade: usize, entries: &[(&str, &str)]) -> Result<Self> {
        let mut element = ExtElement::zero(piece.dim());
        for (key, expr) in entries {
            let (sign, idx) = parse_multi_index(piece, key)?;
            let c = ScalarExpr::parse(expr)?;
            element.add_term(idx, c.scale(&rational(sign.into())));
        }
        PieceForm::new(piece, grade, element)
    }

    pub fn piece(&self) -> &str {
        &self.piece
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn element(&self) -> &ExtElement {
        &self.element
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }

    pub(crate) fn with_element(&self, grade: usize, element: ExtElement) -> PieceForm {
        PieceForm {
            piece: self.piece.clone(),
            coords: self.coords.clone(),
            grade,
            element,
        }
    }

    /// `d(sum c_I dx_I) = sum_a d_a c_I dx_a ^ dx_I`.
    pub fn d(&self) -> PieceForm {
        self.with_element(self.grade + 1, exterior_d(&self.element, &self.coords))
    }

    pub fn add(&self, other: &PieceForm) -> Result<PieceForm> {
        self.same_shape(other)?;
        Ok(self.with_element(self.grade, self.element.add(&other.element)?))
    }

    pub fn sub(&self, other: &PieceForm) -> Result<PieceForm> {
        self.same_shape(other)?;
        Ok(self.with_element(self.grade, self.element.sub(&other.element)?))
    }

    pub fn scale(&self, c: &ScalarExpr) -> PieceForm {
        self.with_element(self.grade, self.element.scale(c))
    }

    pub fn wedge(&self, other: &PieceForm) -> Result<PieceForm> {
        if self.piece != other.piece {
            return Err(Error::Mismatch(format!(
                "cannot wedge forms on pieces `{}` and `{}`",
                self.piece, other.piece
            )));
        }
        Ok(self.with_element(self.grade + other.grade, self.element.wedge(&other.element)?))
    }

    fn same_shape(&self, other: &PieceForm) -> Result<()> {
        if self.piece != other.piece {
            return Err(Error::Mismatch(format!(
                "forms live on different pieces `{}` and `{}`",
                self.piece, other.piece
            )));
        }
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        Ok(())
    }

    /// Exact values of the coefficients at a point of the piece.
    pub fn at(&self, coords: &[Rational]) -> ExtElement {
        let pt: BTreeMap<String, Rational> = self.coords.iter().cloned().zip(coords.iter().cloned()).collect();
        self.element.map_coefficients(|c| c.substitute(&pt))
    }

    pub fn render(&self) -> String {
        let names: Vec<String> = self.coords.iter().map(|c| format!("d{c}")).collect();
        self.element.render(&names)
    }
}

impl fmt::Display for PieceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.piece, self.render())
    }
}

pub(crate) fn exterior_d(w: &ExtElement, coords: &[String]) -> ExtElement {
    let mut out = ExtElement::zero(w.dim());
    for (idx, c) in w.terms() {
        for (a, name) in coords.iter().enumerate() {
            let da = c.differentiate(name);
            if da.is_zero() {
                continue;
            }
            if let Some((sign, k)) = MultiIndex::single(a).wedge(idx) {
                out.add_term(k, da.scale(&rational(sign.into())));
            }
        }
    }
    out
}

/// Parses `dx^dy`-style keys against a piece's coordinates, returning the
/// sign needed to sort the factors. `1` is the empty index.
pub fn parse_multi_index(piece: &EuclideanPiece, key: &str) -> Result<(i32, MultiIndex)> {
    let key = key.trim();
    if key == "1" {
        return Ok((1, MultiIndex::empty()));
    }
    let mut idx = Vec::new();
    for factor in key.split('^') {
        let factor = factor.trim();
        let name = factor.strip_prefix('d').ok_or_else(|| Error::Parse {
            pos: 0,
            message: format!("`{factor}` in `{key}` is not a coordinate differential"),
        })?;
        let i = piece.coords.iter().position(|c| c == name).ok_or_else(|| Error::Parse {
            pos: 0,
            message: format!("`{name}` is not a coordinate of piece `{}`", piece.id),
        })?;
        idx.push(i);
    }
    MultiIndex::sorted(idx).ok_or_else(|| Error::Parse {
        pos: 0,
        message: format!("repeated differential in `{key}`"),
    })
}

/// A compatible tuple of piece forms, one per piece in space order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedForm {
    grade: usize,
    components: Vec<PieceForm>,
}

impl GluedForm {
    pub fn zero(s: &GluedSpace, grade: usize) -> Self {
        GluedForm {
            grade,
            components: s.pieces().iter().map(|p| PieceForm::zero(p, grade)).collect(),
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    /// The pullbacks to the pieces.
    pub fn components(&self) -> &[PieceForm] {
        &self.components
    }

    pub fn component(&self, piece: &str) -> Result<&PieceForm> {
        self.components
            .iter()
            .find(|c| c.piece == piece)
            .ok_or_else(|| Error::UnknownPiece(piece.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(PieceForm::is_zero)
    }

    pub fn add(&self, other: &GluedForm) -> Result<GluedForm> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(GluedForm {
            grade: self.grade,
            components,
        })
    }

    pub fn sub(&self, other: &GluedForm) -> Result<GluedForm> {
        self.add(&other.scale(&ScalarExpr::int(-1)))
    }

    /// Multiplication by a constant.
    pub fn scale(&self, c: &ScalarExpr) -> GluedForm {
        GluedForm {
            grade: self.grade,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn render(&self) -> Vec<(String, String)> {
        self.components
            .iter()
            .map(|c| (c.piece.clone(), c.render()))
            .collect()
    }
}

fn order_by_pieces(t: &[PieceForm], s: &GluedSpace) -> Result<Vec<PieceForm>> {
    let grade = t.first().map(PieceForm::grade);
    if t.iter().any(|f| Some(f.grade) != grade) {
        return Err(Error::MixedGrades);
    }
    for f in t {
        s.piece(&f.piece)?;
    }
    s.pieces()
        .iter()
        .map(|p| {
            let mut matching = t.iter().filter(|f| f.piece == p.id);
            let first = matching.next().ok_or_else(|| Error::MissingPiece(p.id.clone()))?;
            if matching.next().is_some() {
                return Err(Error::Mismatch(format!("piece `{}` given twice", p.id)));
            }
            if first.coords != p.coords {
                return Err(Error::Mismatch(format!("form for `{}` uses other coordinates", p.id)));
            }
            Ok(first.clone())
        })
        .collect()
}

fn first_incompatible_wedge(ordered: &[PieceForm], s: &GluedSpace) -> Result<Option<String>> {
    if ordered.first().map_or(true, |f| f.grade > 0) {
        return Ok(None);
    }
    for w in s.wedges() {
        let mut values = Vec::new();
        for part in &w.participants {
            let f = &ordered[s.piece_index(&part.piece)?];
            values.push(f.at(&part.at).coefficient(&MultiIndex::empty()));
        }
        if values.windows(2).any(|v| !(&v[0] - &v[1]).is_zero()) {
            return Ok(Some(w.id.clone()));
        }
    }
    Ok(None)
}

/// Whether the per-piece forms define a form on the glued space.
pub fn check_compatibility(t: &[PieceForm], s: &GluedSpace) -> Result<bool> {
    let ordered = order_by_pieces(t, s)?;
    Ok(first_incompatible_wedge(&ordered, s)?.is_none())
}

/// The glued form with pullbacks `t`.
pub fn assemble(t: &[PieceForm], s: &GluedSpace) -> Result<GluedForm> {
    let ordered = order_by_pieces(t, s)?;
    if let Some(w) = first_incompatible_wedge(&ordered, s)? {
        return Err(Error::Incompatible(w));
    }
    Ok(GluedForm {
        grade: ordered.first().map_or(0, PieceForm::grade),
        components: ordered,
    })
}

/// Componentwise `d`; for point gluings the result is always compatible.
pub fn exterior_derivative(w: &GluedForm) -> GluedForm {
    GluedForm {
        grade: w.grade + 1,
        components: w.components.iter().map(PieceForm::d).collect(),
    }
}

pub fn wedge_forms(a: &GluedForm, b: &GluedForm) -> Result<GluedForm> {
    if a.components.len() != b.components.len() {
        return Err(Error::Mismatch("forms live on different spaces".into()));
    }
    let components = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| x.wedge(y))
        .collect::<Result<Vec<_>>>()?;
    Ok(GluedForm {
        grade: a.grade + b.grade,
        components,
    })
}

/// Every coefficient of every piece meeting `x` is zero there.
pub fn vanishes_at(w: &GluedForm, s: &GluedSpace, x: &SpacePoint) -> Result<bool> {
    for (piece, coords) in s.pieces_at(x)? {
        if !w.component(&piece.id)?.at(&coords).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FibreLabel {
    /// The class of the constant function 1 (grade 0).
    Constant,
    Piece { piece: String, index: MultiIndex },
}

impl FibreLabel {
    pub fn render(&self, s: &GluedSpace) -> String {
        match self {
            FibreLabel::Constant => "1".into(),
            FibreLabel::Piece { piece, index } => {
                let names = s.piece(piece).map(EuclideanPiece::covector_names).unwrap_or_default();
                format!("{piece}:{}", index.render(&names))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreBasis {
    pub point: SpacePoint,
    pub grade: usize,
    pub labels: Vec<FibreLabel>,
}

impl FibreBasis {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Fibre element with exact constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreElement {
    pub basis: FibreBasis,
    pub coeffs: Vec<ScalarExpr>,
}

impl FibreElement {
    pub fn zero(basis: FibreBasis) -> Self {
        let n = basis.dim();
        FibreElement {
            basis,
            coeffs: vec![ScalarExpr::zero(); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ScalarExpr::is_zero)
    }

    fn add_assign(&mut self, other: &FibreElement) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = &*a + b;
        }
    }

    /// Rational coefficients, when every coefficient is exp-free.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(ScalarExpr::as_rational).collect()
    }
}

pub fn fibre_basis(s: &GluedSpace, x: &SpacePoint, k: usize) -> Result<FibreBasis> {
    let point = s.normalize_point(x)?;
    let labels = if k == 0 {
        vec![FibreLabel::Constant]
    } else {
        s.pieces_at(&point)?
            .into_iter()
            .flat_map(|(piece, _)| {
                MultiIndex::all(piece.dim(), k).into_iter().map(|index| FibreLabel::Piece {
                    piece: piece.id.clone(),
                    index,
                })
            })
            .collect()
    };
    Ok(FibreBasis {
        point,
        grade: k,
        labels,
    })
}

/// `sum_i C(n_i, k)` over the pieces meeting `x` (1 for `k = 0`).
pub fn fibre_dimension(s: &GluedSpace, x: &SpacePoint, k: usize) -> Result<usize> {
    if k == 0 {
        return Ok(1);
    }
    Ok(s.pieces_at(x)?.iter().map(|(p, _)| binomial(p.dim(), k)).sum())
}

/// The class of `w` in the fibre of `Lambda^k` at `x`.
pub fn project_to_fibre(w: &GluedForm, s: &GluedSpace, x: &SpacePoint) -> Result<FibreElement> {
    let basis = fibre_basis(s, x, w.grade)?;
    let located = s.pieces_at(&basis.point)?;
    let mut coeffs = Vec::with_capacity(basis.dim());
    if w.grade == 0 {
        let (piece, at) = &located[0];
        coeffs.push(w.component(&piece.id)?.at(at).coefficient(&MultiIndex::empty()));
    } else {
        let values: BTreeMap<&str, ExtElement> = located
            .iter()
            .map(|(p, at)| Ok((p.id.as_str(), w.component(&p.id)?.at(at))))
            .collect::<Result<_>>()?;
        for label in &basis.labels {
            let FibreLabel::Piece { piece, index } = label else { unreachable!() };
            coeffs.push(values[piece.as_str()].coefficient(index));
        }
    }
    Ok(FibreElement { basis, coeffs })
}

/// Constant-coefficient form dual to `label`, supported on its piece.
pub fn canonical_representative(s: &GluedSpace, label: &FibreLabel, grade: usize) -> Result<GluedForm> {
    let mut out = GluedForm::zero(s, grade);
    match label {
        FibreLabel::Constant => {
            for c in &mut out.components {
                c.element = ExtElement::scalar(c.coords.len(), ScalarExpr::one());
            }
        }
        FibreLabel::Piece { piece, index } => {
            if index.grade() != grade {
                return Err(Error::GradeMismatch {
                    expected: grade,
                    found: index.grade(),
                });
            }
            let i = s.piece_index(piece)?;
            let dim = out.components[i].coords.len();
            out.components[i].element = ExtElement::basis(dim, index.clone());
        }
    }
    Ok(out)
}

/// The map `wedge^k(Lambda^1_x) -> Lambda^k_x`: wedge the canonical
/// representatives of the factors and project.
pub fn wedge_1k_map(w: &ExtElement, s: &GluedSpace, x: &SpacePoint, k: usize) -> Result<FibreElement> {
    let lambda1 = fibre_basis(s, x, 1)?;
    let reps = lambda1
        .labels
        .iter()
        .map(|l| canonical_representative(s, l, 1))
        .collect::<Result<Vec<_>>>()?;
    wedge_1k_map_with(&reps, w, s, x, k)
}

/// Same map with caller-chosen representatives of the `Lambda^1_x` basis.
/// The result does not depend on the choice.
pub fn wedge_1k_map_with(
    reps: &[GluedForm],
    w: &ExtElement,
    s: &GluedSpace,
    x: &SpacePoint,
    k: usize,
) -> Result<FibreElement> {
    if w.dim() != reps.len() {
        return Err(Error::DimensionMismatch {
            expected: reps.len(),
            found: w.dim(),
        });
    }
    if let Some(g) = w.homogeneous_grade()? {
        if g != k {
            return Err(Error::GradeMismatch { expected: k, found: g });
        }
    }
    let mut out = FibreElement::zero(fibre_basis(s, x, k)?);
    for (idx, c) in w.terms() {
        let mut prod = canonical_representative(s, &FibreLabel::Constant, 0)?;
        for &i in idx.indices() {
            prod = wedge_forms(&prod, &reps[i])?;
        }
        let mut v = project_to_fibre(&prod, s, x)?;
        for coeff in &mut v.coeffs {
            *coeff = &*coeff * c;
        }
        out.add_assign(&v);
    }
    Ok(out)
}

/// Rank of `wedge^k(Lambda^1_x) -> Lambda^k_x` over the standard basis.
pub fn wedge_1k_rank(s: &GluedSpace, x: &SpacePoint, k: usize) -> Result<usize> {
    let n1 = fibre_dimension(s, x, 1)?;
    let target = fibre_dimension(s, x, k)?;
    let mut cols = Vec::new();
    for idx in MultiIndex::all(n1, k) {
        let img = wedge_1k_map(&ExtElement::basis(n1, idx), s, x, k)?;
        cols.push(img.rational_coeffs().expect("constant representatives"));
    }
    Ok(Matrix::from_columns(target, &cols).rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeVerdict {
    Yes,
    No,
    Indeterminate,
}

impl fmt::Display for VolumeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VolumeVerdict::Yes => "yes",
            VolumeVerdict::No => "no",
            VolumeVerdict::Indeterminate => "indeterminate",
        })
    }
}

/// Structural nowhere-vanishing test of a top-degree form.
///
/// `yes` when every piece coefficient is a unit (nonzero constant times
/// `exp`), `no` when one is identically zero or vanishes at a probed rational
/// point, `indeterminate` otherwise.
pub fn is_volume_form(w: &GluedForm, s: &GluedSpace) -> Result<VolumeVerdict> {
    let n = s.dimension();
    if s.pieces().iter().any(|p| p.dim() != n) {
        return Err(Error::MixedPieceDimensions);
    }
    if w.grade != n {
        return Err(Error::GradeMismatch {
            expected: n,
            found: w.grade,
        });
    }
    let top = MultiIndex::new((0..n).collect())?;
    let mut verdict = VolumeVerdict::Yes;
    for (piece, comp) in s.pieces().iter().zip(&w.components) {
        let c = comp.element.coefficient(&top);
        if c.is_zero() {
            return Ok(VolumeVerdict::No);
        }
        if c.unit_inverse().is_some() {
            continue;
        }
        let mut probes = probe_points(piece.dim());
        for wedge in s.wedges() {
            probes.extend(wedge.participants.iter().filter(|q| q.piece == piece.id).map(|q| q.at.clone()));
        }
        if probes.iter().any(|pt| c.substitute(&piece.point(pt)).is_zero()) {
            return Ok(VolumeVerdict::No);
        }
        verdict = VolumeVerdict::Indeterminate;
    }
    Ok(verdict)
}

fn probe_points(dim: usize) -> Vec<Vec<Rational>> {
    let values: Vec<Rational> = if dim <= 3 {
        vec![
            rational(0),
            rational(1),
            rational(-1),
            Rational::new(1.into(), 2.into()),
            Rational::new((-1).into(), 2.into()),
            rational(2),
            rational(-2),
        ]
    } else {
        vec![rational(0), rational(1), rational(-1)]
    };
    let mut pts = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    pts
}

/// Dimension of `Omega^k_{<=D} / Span(Omega^k_{x,<=D}, d Omega^{k-1}_{<=D+1})`
/// on polynomial forms.
pub fn reduced_fibre_dimension(s: &GluedSpace, x: &SpacePoint, k: usize, max_degree: usize) -> Result<usize> {
    let slice = PolyComplexSlice::new(s, k, max_degree as i64)?;
    let fibre_dim = fibre_dimension(s, x, k)?;
    // evaluation at x, as a matrix on the slice basis
    let mut eval_cols = Vec::with_capacity(slice.dim());
    for form in slice.basis_forms() {
        let v = project_to_fibre(&form, s, x)?;
        eval_cols.push(v.rational_coeffs().ok_or_else(|| Error::NotPolynomial("basis form".into()))?);
    }
    let eval = Matrix::from_columns(fibre_dim, &eval_cols);
    let mut span: Vec<Vec<Rational>> = eval.nullspace();
    if k > 0 {
        let lower = PolyComplexSlice::new(s, k - 1, max_degree as i64 + 1)?;
        for form in lower.basis_forms() {
            span.push(slice.coordinates(&exterior_derivative(&form))?);
        }
    }
    let rank = Matrix::from_columns(slice.dim(), &span).rank();
    Ok(slice.dim() - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planes() -> GluedSpace {
        GluedSpace::wedge_of_planes()
    }

    fn w0() -> SpacePoint {
        SpacePoint::Wedge("w0".into())
    }

    fn pf(s: &GluedSpace, piece: &str, k: usize, entries: &[(&str, &str)]) -> PieceForm {
        PieceForm::parse(s.piece(piece).unwrap(), k, entries).unwrap()
    }

    #[test]
    fn compatibility_of_functions() {
        let s = GluedSpace::wedge_of_lines(2).unwrap();
        let ok = [pf(&s, "X1", 0, &[("1", "x1")]), pf(&s, "X2", 0, &[("1", "x2^2")])];
        assert!(check_compatibility(&ok, &s).unwrap());
        let bad = [pf(&s, "X1", 0, &[("1", "x1")]), pf(&s, "X2", 0, &[("1", "x2^2 + 1")])];
        assert!(!check_compatibility(&bad, &s).unwrap());
        assert_eq!(assemble(&bad, &s).unwrap_err(), Error::Incompatible("w0".into()));
    }

    #[test]
    fn positive_degree_is_always_compatible() {
        let s = planes();
        let t = [pf(&s, "X1", 1, &[("dx1", "x1 + 5")]), pf(&s, "X2", 1, &[("dy2", "7")])];
        assert!(check_compatibility(&t, &s).unwrap());
        let g = assemble(&t, &s).unwrap();
        assert_eq!(g.components(), &t);
    }

    #[test]
    fn missing_and_mixed() {
        let s = planes();
        let one = [pf(&s, "X1", 1, &[("dx1", "1")])];
        assert_eq!(check_compatibility(&one, &s).unwrap_err(), Error::MissingPiece("X2".into()));
        let mixed = [pf(&s, "X1", 1, &[("dx1", "1")]), pf(&s, "X2", 0, &[("1", "1")])];
        assert_eq!(check_compatibility(&mixed, &s).unwrap_err(), Error::MixedGrades);
    }

    #[test]
    fn foreign_coordinates_rejected() {
        let s = planes();
        assert!(PieceForm::parse(s.piece("X1").unwrap(), 1, &[("dx1", "x2")]).is_err());
        assert!(PieceForm::parse(s.piece("X1").unwrap(), 1, &[("dx2", "1")]).is_err());
        assert!(PieceForm::parse(s.piece("X1").unwrap(), 1, &[("dx1^dy1", "1")]).is_err());
    }

    #[test]
    fn derivative_examples() {
        let s = GluedSpace::euclidean(2);
        let w = assemble(&[pf(&s, "X", 1, &[("dy", "x")])], &s).unwrap();
        let dw = exterior_derivative(&w);
        assert_eq!(dw.components()[0], pf(&s, "X", 2, &[("dx^dy", "1")]));
        assert!(exterior_derivative(&dw).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let s = GluedSpace::euclidean(2);
        let dx = assemble(&[pf(&s, "X", 1, &[("dx", "1")])], &s).unwrap();
        let dy = assemble(&[pf(&s, "X", 1, &[("dy", "1")])], &s).unwrap();
        let p = wedge_forms(&dx, &dy).unwrap();
        assert_eq!(p.components()[0], pf(&s, "X", 2, &[("dx^dy", "1")]));
        assert!(wedge_forms(&dx, &dx).unwrap().is_zero());

        let s = planes();
        let a = assemble(&[pf(&s, "X1", 1, &[("dx1", "1")]), PieceForm::zero(s.piece("X2").unwrap(), 1)], &s).unwrap();
        let b = assemble(&[PieceForm::zero(s.piece("X1").unwrap(), 1), pf(&s, "X2", 1, &[("dy2", "1")])], &s).unwrap();
        assert!(wedge_forms(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn vanishing_examples() {
        let s = GluedSpace::euclidean(1);
        let origin = SpacePoint::parse("X:0").unwrap();
        let w = assemble(&[pf(&s, "X", 1, &[("dx", "x")])], &s).unwrap();
        assert!(vanishes_at(&w, &s, &origin).unwrap());
        let h = assemble(&[pf(&s, "X", 0, &[("1", "x")])], &s).unwrap();
        assert!(vanishes_at(&h, &s, &origin).unwrap());
        assert!(!vanishes_at(&exterior_derivative(&h), &s, &origin).unwrap());

        let s = planes();
        let w = assemble(&[pf(&s, "X1", 1, &[("dx1", "1")]), pf(&s, "X2", 1, &[("dx2", "1")])], &s).unwrap();
        assert!(!vanishes_at(&w, &s, &w0()).unwrap());
    }

    #[test]
    fn fibre_basis_examples() {
        for m in 2..=6 {
            let s = GluedSpace::wedge_of_lines(m).unwrap();
            assert_eq!(fibre_basis(&s, &w0(), 1).unwrap().dim(), m);
        }
        let s = planes();
        let b1 = fibre_basis(&s, &w0(), 1).unwrap();
        let rendered: Vec<String> = b1.labels.iter().map(|l| l.render(&s)).collect();
        assert_eq!(rendered, ["X1:dx1", "X1:dy1", "X2:dx2", "X2:dy2"]);
        assert_eq!(fibre_basis(&s, &w0(), 2).unwrap().dim(), 2);
        assert_eq!(fibre_basis(&s, &w0(), 3).unwrap().dim(), 0);
        assert_eq!(fibre_basis(&s, &w0(), 0).unwrap().dim(), 1);
    }

    #[test]
    fn projection_examples() {
        let s = GluedSpace::euclidean(1);
        let w = assemble(&[pf(&s, "X", 1, &[("dx", "x")])], &s).unwrap();
        let v = project_to_fibre(&w, &s, &SpacePoint::parse("X:2").unwrap()).unwrap();
        assert_eq!(v.coeffs, vec![ScalarExpr::int(2)]);
        assert!(project_to_fibre(&w, &s, &SpacePoint::parse("X:0").unwrap()).unwrap().is_zero());

        let s = planes();
        let w = assemble(&[pf(&s, "X1", 1, &[("dx1", "1")]), pf(&s, "X2", 1, &[("dy2", "x2 + 3")])], &s).unwrap();
        let v = project_to_fibre(&w, &s, &w0()).unwrap();
        assert_eq!(v.rational_coeffs().unwrap(), vec![rational(1), rational(0), rational(0), rational(3)]);
    }

    #[test]
    fn wedge_1k_examples() {
        let s = GluedSpace::euclidean(2);
        let p = SpacePoint::parse("X:1,1").unwrap();
        let e01 = ExtElement::basis(2, MultiIndex::new(vec![0, 1]).unwrap());
        let img = wedge_1k_map(&e01, &s, &p, 2).unwrap();
        assert_eq!(img.coeffs, vec![ScalarExpr::one()]);
        assert_eq!(wedge_1k_rank(&s, &p, 2).unwrap(), 1);

        let s = planes();
        // dx1 (+) 0 is generator 0, 0 (+) dy2 is generator 3
        let kernel = ExtElement::basis(4, MultiIndex::new(vec![0, 3]).unwrap());
        assert!(wedge_1k_map(&kernel, &s, &w0(), 2).unwrap().is_zero());
        let same_piece = ExtElement::basis(4, MultiIndex::new(vec![0, 1]).unwrap());
        let img = wedge_1k_map(&same_piece, &s, &w0(), 2).unwrap();
        assert_eq!(img.rational_coeffs().unwrap(), vec![rational(1), rational(0)]);
        assert_eq!(wedge_1k_rank(&s, &w0(), 2).unwrap(), 2);
    }

    #[test]
    fn volume_examples() {
        let s = planes();
        let vol = |a: &str, b: &str| {
            assemble(&[pf(&s, "X1", 2, &[("dx1^dy1", a)]), pf(&s, "X2", 2, &[("dx2^dy2", b)])], &s).unwrap()
        };
        assert_eq!(is_volume_form(&vol("1", "1"), &s).unwrap(), VolumeVerdict::Yes);
        assert_eq!(is_volume_form(&vol("x1", "1"), &s).unwrap(), VolumeVerdict::No);
        assert_eq!(is_volume_form(&vol("exp(x1*y1)", "1"), &s).unwrap(), VolumeVerdict::Yes);
        assert_eq!(is_volume_form(&vol("x1^2 + 1", "1"), &s).unwrap(), VolumeVerdict::Indeterminate);

        let mixed = GluedSpace::wedge_at_origins(&[1, 2]).unwrap();
        let w = GluedForm::zero(&mixed, 2);
        assert_eq!(is_volume_form(&w, &mixed).unwrap_err(), Error::MixedPieceDimensions);
    }
}
