//! Pseudo-metrics on `Lambda^1` of glued spaces and their Levi-Civita
//! connections.
//!
//! Metrics are given on 1-forms, `g^Lambda(dx_a, dx_b)`. The Christoffel
//! symbols come from the tangent metric, the symbolic inverse of that matrix;
//! the connection then acts on 1-forms by
//! `(nabla w)_{ab} = d_a w_b - Gamma^c_{ab} w_c` and extends to the whole
//! exterior algebra as a derivation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::clifford::FibreBilinearForm;
use crate::derham::GluedSection;
use crate::error::{Error, Result};
use crate::exterior::{ExtElement, MultiIndex};
use crate::forms::PieceForm;
use crate::scalar_expr::{rational, Rational, ScalarExpr, Value};
use crate::space::{EuclideanPiece, GluedSpace};

/// `g^Lambda` on one piece, as a matrix of expressions in the piece coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceCotangentMetric {
    piece: String,
    coords: Vec<String>,
    matrix: Vec<Vec<ScalarExpr>>,
}

impl PieceCotangentMetric {
    pub fn new(piece: &EuclideanPiece, matrix: Vec<Vec<ScalarExpr>>) -> Result<Self> {
        let n = piece.dim();
        if matrix.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.len(),
            });
        }
        for row in &matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for e in row {
                if let Some(v) = e.variables().into_iter().find(|v| !piece.coords.contains(v)) {
                    return Err(Error::Mismatch(format!(
                        "metric entry uses `{v}`, which is not a coordinate of piece `{}`",
                        piece.id
                    )));
                }
            }
        }
        Ok(PieceCotangentMetric {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            matrix,
        })
    }

    pub fn identity(piece: &EuclideanPiece) -> Self {
        PieceCotangentMetric::diagonal(piece, (0..piece.dim()).map(|_| ScalarExpr::one()).collect())
            .expect("shape")
    }

    pub fn diagonal(piece: &EuclideanPiece, entries: Vec<ScalarExpr>) -> Result<Self> {
        let n = entries.len();
        let mut m = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, e) in entries.into_iter().enumerate() {
            m[i][i] = e;
        }
        PieceCotangentMetric::new(piece, m)
    }

    /// Matrix entries given as expression strings.
    pub fn parse(piece: &EuclideanPiece, rows: &[Vec<&str>]) -> Result<Self> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|e| ScalarExpr::parse(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PieceCotangentMetric::new(piece, m)
    }

    pub fn piece(&self) -> &str {
        &self.piece
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn entry(&self, a: usize, b: usize) -> &ScalarExpr {
        &self.matrix[a][b]
    }

    pub fn matrix(&self) -> &[Vec<ScalarExpr>] {
        &self.matrix
    }

    pub fn fibre_form(&self) -> Result<FibreBilinearForm> {
        FibreBilinearForm::new(self.matrix.clone())
    }

    /// `g^Lambda(s, t)` for 1-form coefficient vectors.
    pub fn pair(&self, s: &[ScalarExpr], t: &[ScalarExpr]) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for (a, sa) in s.iter().enumerate() {
            if sa.is_zero() {
                continue;
            }
            for (b, tb) in t.iter().enumerate() {
                if !tb.is_zero() && !self.matrix[a][b].is_zero() {
                    acc = acc + &(sa * &self.matrix[a][b]) * tb;
                }
            }
        }
        acc
    }

    fn point(&self, values: &[Rational]) -> BTreeMap<String, Rational> {
        self.coords.iter().cloned().zip(values.iter().cloned()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricViolation {
    NotSymmetric { row: usize, col: usize },
    NotPositiveDefinite { point: Vec<Rational>, minor: usize, value: f64 },
    Unevaluable(String),
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NotSymmetric { row, col } => write!(f, "entries ({row}, {col}) and ({col}, {row}) differ"),
            MetricViolation::NotPositiveDefinite { point, minor, value } => {
                let p: Vec<String> = point.iter().map(crate::scalar_expr::fmt_rational).collect();
                write!(f, "leading minor {minor} is {value} at ({})", p.join(", "))
            }
            MetricViolation::Unevaluable(e) => write!(f, "could not evaluate: {e}"),
        }
    }
}

/// Symbolic symmetry plus positive leading principal minors at each sample.
pub fn check_pseudometric(g: &PieceCotangentMetric, samples: &[Vec<Rational>]) -> std::result::Result<(), MetricViolation> {
    let n = g.dim();
    for row in 0..n {
        for col in row + 1..n {
            if g.matrix[row][col] != g.matrix[col][row] {
                return Err(MetricViolation::NotSymmetric { row, col });
            }
        }
    }
    for sample in samples {
        let pt = g.point(sample);
        let mut values = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                values[a][b] = g.matrix[a][b]
                    .evaluate(&pt)
                    .map_err(|e| MetricViolation::Unevaluable(e.to_string()))?
                    .to_f64();
            }
        }
        for k in 1..=n {
            let minor = det_f64(&values[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>());
            if !(minor > 0.0) {
                return Err(MetricViolation::NotPositiveDefinite {
                    point: sample.clone(),
                    minor: k,
                    value: minor,
                });
            }
        }
    }
    Ok(())
}

fn det_f64(m: &[Vec<f64>]) -> f64 {
    let mut a = m.to_vec();
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let Some(p) = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
            return 0.0;
        };
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricCompatibility {
    pub compatible: bool,
    pub note: String,
}

/// Compatibility of per-piece metrics across the gluing. For point gluings
/// the condition involves no nonzero pairs of compatible forms and holds.
pub fn compatible_metrics(gs: &[PieceCotangentMetric], s: &GluedSpace) -> Result<MetricCompatibility> {
    if gs.len() != s.pieces().len() {
        return Err(Error::Mismatch(format!(
            "{} metrics given for {} pieces",
            gs.len(),
            s.pieces().len()
        )));
    }
    for p in s.pieces() {
        let g = gs
            .iter()
            .find(|g| g.piece == p.id)
            .ok_or_else(|| Error::MissingPiece(p.id.clone()))?;
        if g.coords != p.coords {
            return Err(Error::Mismatch(format!("metric for `{}` uses other coordinates", p.id)));
        }
    }
    let note = if s.wedges().is_empty() {
        "no gluing: nothing to check".to_string()
    } else {
        "gluing along single points: positive-degree forms restrict to zero there, \
         so the compatibility condition is vacuous"
            .to_string()
    };
    Ok(MetricCompatibility {
        compatible: true,
        note,
    })
}

/// Per-piece metrics plus the value on the doubled fibre at each wedge point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedPseudoMetric {
    pieces: Vec<PieceCotangentMetric>,
    wedge_blocks: BTreeMap<String, FibreBilinearForm>,
}

impl GluedPseudoMetric {
    pub fn pieces(&self) -> &[PieceCotangentMetric] {
        &self.pieces
    }

    pub fn piece(&self, id: &str) -> Result<&PieceCotangentMetric> {
        self.pieces
            .iter()
            .find(|g| g.piece == id)
            .ok_or_else(|| Error::UnknownPiece(id.to_string()))
    }

    pub fn wedge_block(&self, wedge: &str) -> Result<&FibreBilinearForm> {
        self.wedge_blocks
            .get(wedge)
            .ok_or_else(|| Error::UnknownWedge(wedge.to_string()))
    }

    pub fn wedge_blocks(&self) -> &BTreeMap<String, FibreBilinearForm> {
        &self.wedge_blocks
    }
}

/// Builds the induced pseudo-metric: piece metrics away from the wedge points,
/// `1/2 (g_1 (+) ... (+) g_m)` evaluated at each wedge point.
pub fn induced_metric(gs: &[PieceCotangentMetric], s: &GluedSpace) -> Result<GluedPseudoMetric> {
    compatible_metrics(gs, s)?;
    let pieces: Vec<PieceCotangentMetric> = s
        .pieces()
        .iter()
        .map(|p| gs.iter().find(|g| g.piece == p.id).cloned().expect("checked"))
        .collect();
    let half = ScalarExpr::constant(Rational::new(1.into(), 2.into()));
    let mut wedge_blocks = BTreeMap::new();
    for w in s.wedges() {
        let n: usize = w.participants.iter().map(|q| s.piece(&q.piece).map(EuclideanPiece::dim)).sum::<Result<usize>>()?;
        let mut block = vec![vec![ScalarExpr::zero(); n]; n];
        let mut offset = 0;
        for q in &w.participants {
            let g = &pieces[s.piece_index(&q.piece)?];
            let pt = g.point(&q.at);
            for a in 0..g.dim() {
                for b in 0..g.dim() {
                    block[offset + a][offset + b] = &g.matrix[a][b].substitute(&pt) * &half;
                }
            }
            offset += g.dim();
        }
        wedge_blocks.insert(w.id.clone(), FibreBilinearForm::new(block)?);
    }
    Ok(GluedPseudoMetric { pieces, wedge_blocks })
}

fn determinant(m: &[Vec<ScalarExpr>]) -> ScalarExpr {
    let n = m.len();
    if n == 0 {
        return ScalarExpr::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ScalarExpr::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<ScalarExpr>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = entry * &determinant(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// The tangent metric `g_{ab}`, the inverse of `g^Lambda`. Needs the
/// determinant to be a unit of the coefficient ring.
pub fn tangent_metric(g: &PieceCotangentMetric) -> Result<Vec<Vec<ScalarExpr>>> {
    let n = g.dim();
    let det = determinant(&g.matrix);
    let inv_det = det
        .unit_inverse()
        .ok_or_else(|| Error::NonInvertibleMetric(g.piece.clone()))?;
    let mut inv = vec![vec![ScalarExpr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // adjugate: cofactor of (j, i)
            let minor: Vec<Vec<ScalarExpr>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| g.matrix[r][c].clone()).collect())
                .collect();
            let cof = determinant(&minor);
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            inv[i][j] = &cof * &inv_det;
        }
    }
    Ok(inv)
}

/// `Gamma^c_{ab}`, indexed `gamma[c][a][b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelData {
    piece: String,
    coords: Vec<String>,
    gamma: Vec<Vec<Vec<ScalarExpr>>>,
}

impl ChristoffelData {
    pub fn zero(piece: &EuclideanPiece) -> Self {
        let n = piece.dim();
        ChristoffelData {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            gamma: vec![vec![vec![ScalarExpr::zero(); n]; n]; n],
        }
    }

    /// Arbitrary symbols, symmetric or not (for negative controls).
    pub fn from_components(piece: &EuclideanPiece, gamma: Vec<Vec<Vec<ScalarExpr>>>) -> Result<Self> {
        let n = piece.dim();
        if gamma.len() != n || gamma.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gamma.len(),
            });
        }
        Ok(ChristoffelData {
            piece: piece.id.clone(),
            coords: piece.coords.clone(),
            gamma,
        })
    }

    pub fn piece(&self) -> &str {
        &self.piece
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> &ScalarExpr {
        &self.gamma[c][a][b]
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|c| (0..n).all(|a| (0..n).all(|b| self.gamma[c][a][b] == self.gamma[c][b][a])))
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(ScalarExpr::is_zero)
    }

    pub fn components(&self) -> &[Vec<Vec<ScalarExpr>>] {
        &self.gamma
    }
}

/// `Gamma^c_{ab} = 1/2 g^{cd} (d_a g_{bd} + d_b g_{ad} - d_d g_{ab})`.
pub fn christoffel(g: &PieceCotangentMetric) -> Result<ChristoffelData> {
    let n = g.dim();
    let lower = tangent_metric(g)?;
    let x = &g.coords;
    let half = Rational::new(1.into(), 2.into());
    let mut gamma = vec![vec![vec![ScalarExpr::zero(); n]; n]; n];
    for a in 0..n {
        for b in a..n {
            // first kind, Gamma_{d,ab}
            let first: Vec<ScalarExpr> = (0..n)
                .map(|d| {
                    &(&lower[b][d].differentiate(&x[a]) + &lower[a][d].differentiate(&x[b]))
                        - &lower[a][b].differentiate(&x[d])
                })
                .collect();
            for c in 0..n {
                let v: ScalarExpr = (0..n)
                    .filter(|&d| !first[d].is_zero())
                    .map(|d| &g.matrix[c][d] * &first[d])
                    .sum::<ScalarExpr>()
                    .scale(&half);
                gamma[c][a][b] = v.clone();
                gamma[c][b][a] = v;
            }
        }
    }
    Ok(ChristoffelData {
        piece: g.piece.clone(),
        coords: g.coords.clone(),
        gamma,
    })
}

/// Section of `Lambda^1 (x) wedge(Lambda^1)` on one piece: `legs[a]` is the
/// factor multiplying `dx_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSection {
    pub piece: String,
    pub coords: Vec<String>,
    pub legs: Vec<ExtElement>,
}

impl TensorSection {
    pub fn is_zero(&self) -> bool {
        self.legs.iter().all(ExtElement::is_zero)
    }

    pub fn sub(&self, other: &TensorSection) -> Result<TensorSection> {
        let legs = self
            .legs
            .iter()
            .zip(&other.legs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TensorSection { legs, ..self.clone() })
    }

    /// Contraction of the `Lambda^1` leg with a vector field.
    pub fn contract(&self, vector: &[ScalarExpr]) -> Result<ExtElement> {
        let mut out = ExtElement::zero(self.coords.len());
        for (leg, v) in self.legs.iter().zip(vector) {
            out = out.add(&leg.scale(v))?;
        }
        Ok(out)
    }

    pub fn at(&self, values: &[Rational]) -> TensorSection {
        let pt: BTreeMap<String, Rational> = self.coords.iter().cloned().zip(values.iter().cloned()).collect();
        TensorSection {
            legs: self.legs.iter().map(|l| l.map_coefficients(|c| c.substitute(&pt))).collect(),
            ..self.clone()
        }
    }

    pub fn render(&self) -> String {
        let names: Vec<String> = self.coords.iter().map(|c| format!("d{c}")).collect();
        let parts: Vec<String> = self
            .legs
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_zero())
            .map(|(a, l)| format!("{} (x) ({})", names[a], l.render(&names)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Levi-Civita connection extended to the exterior algebra of `Lambda^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorConnection {
    christoffel: ChristoffelData,
}

impl ExteriorConnection {
    pub fn christoffel(&self) -> &ChristoffelData {
        &self.christoffel
    }

    pub fn piece(&self) -> &str {
        &self.christoffel.piece
    }

    /// `nabla_a (c_I dx_I) = d_a c_I dx_I + c_I sum_j dx_.. ^ nabla_a dx_{i_j} ^ dx_..`
    /// with `nabla_a dx^m = -Gamma^m_{ab} dx^b`.
    pub fn apply(&self, w: &ExtElement) -> Result<TensorSection> {
        let gm = &self.christoffel;
        let n = gm.dim();
        if w.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.dim(),
            });
        }
        let mut legs = vec![ExtElement::zero(n); n];
        for (a, leg) in legs.iter_mut().enumerate() {
            for (idx, c) in w.terms() {
                leg.add_term(idx.clone(), c.differentiate(&gm.coords[a]));
                for (pos, &m) in idx.indices().iter().enumerate() {
                    for b in 0..n {
                        let gam = &gm.gamma[m][a][b];
                        if gam.is_zero() {
                            continue;
                        }
                        let mut replaced = idx.indices().to_vec();
                        replaced[pos] = b;
                        if let Some((sign, k)) = MultiIndex::sorted(replaced) {
                            let coeff = (c * gam).scale(&rational(-i64::from(sign)));
                            leg.add_term(k, coeff);
                        }
                    }
                }
            }
        }
        Ok(TensorSection {
            piece: gm.piece.clone(),
            coords: gm.coords.clone(),
            legs,
        })
    }
}

pub fn extend_to_exterior(christoffel: ChristoffelData) -> ExteriorConnection {
    ExteriorConnection { christoffel }
}

/// `(nabla w)_{ab} = d_a w_b - Gamma^c_{ab} w_c` for a 1-form.
pub fn nabla_oneform(w: &PieceForm, christoffel: &ChristoffelData) -> Result<TensorSection> {
    if w.grade() != 1 {
        return Err(Error::GradeMismatch {
            expected: 1,
            found: w.grade(),
        });
    }
    extend_to_exterior(christoffel.clone()).apply(w.element())
}

/// Symbolic residual of an identity, one component per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub coords: Vec<String>,
    pub components: Vec<ScalarExpr>,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarExpr::is_zero)
    }

    /// Largest absolute component value over the sample points.
    pub fn max_abs_at(&self, samples: &[Vec<Rational>]) -> Result<f64> {
        let mut worst = 0.0f64;
        for s in samples {
            let pt: BTreeMap<String, Rational> = self.coords.iter().cloned().zip(s.iter().cloned()).collect();
            for c in &self.components {
                let v = match c.evaluate(&pt)? {
                    Value::Exact(r) => r.to_f64().unwrap_or(f64::INFINITY),
                    Value::Approx(v) => v,
                };
                worst = worst.max(v.abs());
            }
        }
        Ok(worst)
    }
}

fn one_form_coeffs(w: &PieceForm) -> Result<Vec<ScalarExpr>> {
    if w.grade() != 1 {
        return Err(Error::GradeMismatch {
            expected: 1,
            found: w.grade(),
        });
    }
    Ok((0..w.coords().len())
        .map(|i| w.element().coefficient(&MultiIndex::single(i)))
        .collect())
}

fn leg_coeffs(t: &TensorSection, a: usize) -> Vec<ScalarExpr> {
    (0..t.coords.len())
        .map(|b| t.legs[a].coefficient(&MultiIndex::single(b)))
        .collect()
}

/// `d(g(s,t)) - g(nabla s, t) - g(s, nabla t)`, per direction.
pub fn verify_metric_compatibility(
    g: &PieceCotangentMetric,
    christoffel: &ChristoffelData,
    s: &PieceForm,
    t: &PieceForm,
) -> Result<Residual> {
    let sc = one_form_coeffs(s)?;
    let tc = one_form_coeffs(t)?;
    let ns = nabla_oneform(s, christoffel)?;
    let nt = nabla_oneform(t, christoffel)?;
    let gst = g.pair(&sc, &tc);
    let components = (0..g.dim())
        .map(|a| {
            let lhs = gst.differentiate(&g.coords[a]);
            let rhs = &g.pair(&leg_coeffs(&ns, a), &tc) + &g.pair(&sc, &leg_coeffs(&nt, a));
            lhs - rhs
        })
        .collect();
    Ok(Residual {
        coords: g.coords.clone(),
        components,
    })
}

/// `nabla_s t - nabla_t s - [s, t]` where `nabla_s` differentiates along the
/// vector field `Phi_g(s) = g^Lambda(s, .)` and `[s, t]` is the tangent-metric
/// dual of the Lie bracket of `Phi_g(s)` and `Phi_g(t)`.
pub fn verify_torsion_free(
    g: &PieceCotangentMetric,
    christoffel: &ChristoffelData,
    s: &PieceForm,
    t: &PieceForm,
) -> Result<Residual> {
    let n = g.dim();
    let sc = one_form_coeffs(s)?;
    let tc = one_form_coeffs(t)?;
    let form = g.fibre_form()?;
    let xs = crate::clifford::pairing_map(&form, &sc)?;
    let xt = crate::clifford::pairing_map(&form, &tc)?;
    let ns = nabla_oneform(s, christoffel)?;
    let nt = nabla_oneform(t, christoffel)?;
    let along_s = nt.contract(&xs)?;
    let along_t = ns.contract(&xt)?;
    let bracket: Vec<ScalarExpr> = (0..n)
        .map(|c| {
            (0..n)
                .map(|a| &(&xs[a] * &xt[c].differentiate(&g.coords[a])) - &(&xt[a] * &xs[c].differentiate(&g.coords[a])))
                .sum()
        })
        .collect();
    let lower = tangent_metric(g)?;
    let components = (0..n)
        .map(|d| {
            let flat: ScalarExpr = (0..n).map(|c| &lower[d][c] * &bracket[c]).sum();
            let idx = MultiIndex::single(d);
            &(&along_s.coefficient(&idx) - &along_t.coefficient(&idx)) - &flat
        })
        .collect();
    Ok(Residual {
        coords: g.coords.clone(),
        components,
    })
}

/// Per-piece connections on `wedge(Lambda^1)` of a glued space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedConnection {
    space: GluedSpace,
    pieces: Vec<ExteriorConnection>,
}

/// `nabla` of a glued section: one tensor section per piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedTensorSection {
    pub pieces: Vec<TensorSection>,
}

impl GluedConnection {
    pub fn new(s: &GluedSpace, pieces: Vec<ExteriorConnection>) -> Result<Self> {
        let ordered = s
            .pieces()
            .iter()
            .map(|p| {
                pieces
                    .iter()
                    .find(|c| c.piece() == p.id)
                    .cloned()
                    .ok_or_else(|| Error::MissingPiece(p.id.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GluedConnection {
            space: s.clone(),
            pieces: ordered,
        })
    }

    /// Levi-Civita connections of the piece metrics.
    pub fn levi_civita(s: &GluedSpace, g: &GluedPseudoMetric) -> Result<Self> {
        let conns = g
            .pieces()
            .iter()
            .map(|m| christoffel(m).map(extend_to_exterior))
            .collect::<Result<Vec<_>>>()?;
        GluedConnection::new(s, conns)
    }

    pub fn pieces(&self) -> &[ExteriorConnection] {
        &self.pieces
    }

    pub fn space(&self) -> &GluedSpace {
        &self.space
    }

    pub fn apply(&self, sec: &GluedSection) -> Result<GluedTensorSection> {
        if sec.components().len() != self.pieces.len() {
            return Err(Error::Mismatch("section and connection live on different spaces".into()));
        }
        let pieces = self
            .pieces
            .iter()
            .zip(sec.components())
            .map(|(c, p)| {
                if c.piece() != p.piece {
                    return Err(Error::Mismatch(format!("expected piece `{}`, found `{}`", c.piece(), p.piece)));
                }
                c.apply(&p.value)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GluedTensorSection { pieces })
    }
}

impl GluedTensorSection {
    /// Value at a wedge point: direct sum of the participants' values in the
    /// wedge fibre, whose `Lambda^1` basis lists the participants' coordinate
    /// covectors in order. `legs[i]` multiplies the `i`-th of them.
    pub fn wedge_value(&self, s: &GluedSpace, wedge: &str) -> Result<Vec<ExtElement>> {
        let w = s.wedge(wedge)?;
        let n: usize = w.participants.iter().map(|q| s.piece(&q.piece).map(EuclideanPiece::dim)).sum::<Result<usize>>()?;
        let mut legs = vec![ExtElement::zero(n); n];
        let mut offset = 0;
        for q in &w.participants {
            let t = self.pieces[s.piece_index(&q.piece)?].at(&q.at);
            for (a, leg) in t.legs.iter().enumerate() {
                legs[offset + a] = leg.embed(n, offset)?;
            }
            offset += t.coords.len();
        }
        Ok(legs)
    }
}
