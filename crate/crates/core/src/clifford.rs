//! Clifford algebras of fibres carrying a possibly degenerate symmetric
//! bilinear form, and the standard action of covectors on the exterior
//! algebra.
//!
//! Convention: `v * v = -g(v, v)`. Clifford elements are stored in the
//! exterior (Chevalley) basis, so with `g = 0` the product is the wedge.

use crate::error::{Error, Result};
use crate::exterior::{ExtElement, MultiIndex};
use crate::scalar_expr::ScalarExpr;

/// Symmetric bilinear form on an `N`-dimensional fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreBilinearForm {
    matrix: Vec<Vec<ScalarExpr>>,
}

impl FibreBilinearForm {
    pub fn new(matrix: Vec<Vec<ScalarExpr>>) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Mismatch(format!(
                        "bilinear form is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(FibreBilinearForm { matrix })
    }

    pub fn identity(n: usize) -> Self {
        FibreBilinearForm::diagonal((0..n).map(|_| ScalarExpr::one()).collect())
    }

    pub fn zero(n: usize) -> Self {
        FibreBilinearForm::diagonal(vec![ScalarExpr::zero(); n])
    }

    pub fn diagonal(entries: Vec<ScalarExpr>) -> Self {
        let n = entries.len();
        let mut matrix = vec![vec![ScalarExpr::zero(); n]; n];
        for (i, e) in entries.into_iter().enumerate() {
            matrix[i][i] = e;
        }
        FibreBilinearForm { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<ScalarExpr>] {
        &self.matrix
    }

    pub fn apply(&self, u: &[ScalarExpr], v: &[ScalarExpr]) -> ScalarExpr {
        let mut acc = ScalarExpr::zero();
        for i in 0..self.dim() {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim() {
                if !v[j].is_zero() && !self.matrix[i][j].is_zero() {
                    acc = acc + &(&u[i] * &self.matrix[i][j]) * &v[j];
                }
            }
        }
        acc
    }

    pub fn substitute(&self, pt: &std::collections::BTreeMap<String, crate::scalar_expr::Rational>) -> Self {
        FibreBilinearForm {
            matrix: self
                .matrix
                .iter()
                .map(|r| r.iter().map(|e| e.substitute(pt)).collect())
                .collect(),
        }
    }
}

/// `Phi_g(v) = g(v, .)`, as a coefficient vector on the dual basis.
pub fn pairing_map(g: &FibreBilinearForm, v: &[ScalarExpr]) -> Result<Vec<ScalarExpr>> {
    if v.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: v.len(),
        });
    }
    Ok((0..g.dim())
        .map(|j| {
            (0..g.dim())
                .filter(|&i| !v[i].is_zero())
                .map(|i| &v[i] * g.entry(i, j))
                .sum()
        })
        .collect())
}

fn grade_one_coefficients(alpha: &ExtElement) -> Result<Vec<ScalarExpr>> {
    if alpha.grades().iter().any(|&k| k != 1) {
        return Err(Error::GradeMismatch {
            expected: 1,
            found: alpha.grades().into_iter().find(|&k| k != 1).unwrap_or(0),
        });
    }
    Ok((0..alpha.dim())
        .map(|i| alpha.coefficient(&MultiIndex::single(i)))
        .collect())
}

/// `c(alpha) w = alpha ^ w - i_{Phi_g(alpha)} w`.
pub fn clifford_action(alpha: &ExtElement, w: &ExtElement, g: &FibreBilinearForm) -> Result<ExtElement> {
    if alpha.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: alpha.dim(),
        });
    }
    let coeffs = grade_one_coefficients(alpha)?;
    let dual = pairing_map(g, &coeffs)?;
    alpha.wedge(w)?.sub(&w.interior(&dual)?)
}

/// Element of `Cl(V, g)`, stored in the exterior basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement(ExtElement);

impl CliffordElement {
    pub fn from_exterior(e: ExtElement) -> Self {
        CliffordElement(e)
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        CliffordElement(ExtElement::generator(dim, i))
    }

    pub fn scalar(dim: usize, c: ScalarExpr) -> Self {
        CliffordElement(ExtElement::scalar(dim, c))
    }

    pub fn as_exterior(&self) -> &ExtElement {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Clifford product relative to `g`.
pub fn clifford_mul(a: &CliffordElement, b: &CliffordElement, g: &FibreBilinearForm) -> Result<CliffordElement> {
    if a.dim() != g.dim() || b.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: if a.dim() != g.dim() { a.dim() } else { b.dim() },
        });
    }
    let mut out = ExtElement::zero(g.dim());
    for (idx, c) in a.0.terms() {
        let prod = blade_times(idx, &b.0, g)?;
        out = out.add(&prod.scale(c))?;
    }
    Ok(CliffordElement(out))
}

// e_I * x, using e_i ^ y = e_i * y + i_{g(e_i,.)} y for the leading generator.
fn blade_times(idx: &MultiIndex, x: &ExtElement, g: &FibreBilinearForm) -> Result<ExtElement> {
    let Some(&first) = idx.indices().first() else {
        return Ok(x.clone());
    };
    let n = g.dim();
    let rest = idx.without_position(0);
    let gen = ExtElement::generator(n, first);
    let row: Vec<ScalarExpr> = (0..n).map(|j| g.entry(first, j).clone()).collect();

    let rest_times_x = blade_times(&rest, x, g)?;
    let lead = clifford_action(&gen, &rest_times_x, g)?;

    let contracted = ExtElement::basis(n, rest).interior(&row)?;
    let mut tail = ExtElement::zero(n);
    for (j, c) in contracted.terms() {
        tail = tail.add(&blade_times(j, x, g)?.scale(c))?;
    }
    lead.add(&tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::{point, rational};

    fn s(x: &str) -> ScalarExpr {
        ScalarExpr::parse(x).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let id = FibreBilinearForm::identity(2);
        assert_eq!(pairing_map(&id, &[s("1"), s("0")]).unwrap(), vec![s("1"), s("0")]);
        let degenerate = FibreBilinearForm::diagonal(vec![s("1"), s("0")]);
        assert!(pairing_map(&degenerate, &[s("0"), s("1")])
            .unwrap()
            .iter()
            .all(ScalarExpr::is_zero));
        let g = FibreBilinearForm::diagonal(vec![s("1"), s("exp(x*y)")]);
        let at = point([("x", rational(1)), ("y", rational(0))]);
        let phi = pairing_map(&g.substitute(&at), &[s("0"), s("1")]).unwrap();
        assert_eq!(phi, vec![s("0"), s("1")]);
    }

    #[test]
    fn product_examples() {
        let id = FibreBilinearForm::identity(2);
        let e1 = CliffordElement::generator(2, 0);
        let e2 = CliffordElement::generator(2, 1);
        assert_eq!(
            clifford_mul(&e1, &e1, &id).unwrap(),
            CliffordElement::scalar(2, s("-1"))
        );
        let a = clifford_mul(&e1, &e2, &id).unwrap();
        let b = clifford_mul(&e2, &e1, &id).unwrap();
        assert_eq!(a.as_exterior(), &b.as_exterior().scale(&s("-1")));
        let null = FibreBilinearForm::diagonal(vec![s("0"), s("1")]);
        assert!(clifford_mul(&e1, &e1, &null).unwrap().is_zero());
    }

    #[test]
    fn action_examples() {
        let id = FibreBilinearForm::identity(2);
        let dx = ExtElement::generator(2, 0);
        let dy = ExtElement::generator(2, 1);
        let one = ExtElement::scalar(2, s("1"));
        assert_eq!(clifford_action(&dx, &one, &id).unwrap(), dx);
        assert_eq!(clifford_action(&dx, &dx, &id).unwrap(), ExtElement::scalar(2, s("-1")));
        assert_eq!(
            clifford_action(&dx, &dy, &id).unwrap(),
            ExtElement::basis(2, MultiIndex::new(vec![0, 1]).unwrap())
        );
        assert!(clifford_action(&one, &dx, &id).is_err());
    }

    #[test]
    fn non_symmetric_form_is_rejected() {
        assert!(FibreBilinearForm::new(vec![vec![s("1"), s("x")], vec![s("0"), s("1")]]).is_err());
    }
}
