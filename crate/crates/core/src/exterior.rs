//! Exterior algebra of a finite-dimensional fibre with [`ScalarExpr`]
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar_expr::ScalarExpr;

/// Strictly increasing tuple of basis indices; the empty index is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Mismatch(format!(
                "multi-index {indices:?} is not strictly increasing"
            )));
        }
        Ok(MultiIndex(indices))
    }

    /// Sorts the indices, returning the permutation sign, or `None` when an
    /// index repeats.
    pub fn sorted(mut indices: Vec<usize>) -> Option<(i32, Self)> {
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, MultiIndex(indices)))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    pub fn grade(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Every grade-`k` index over `dim` generators, in lexicographic order.
    pub fn all(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        combinations(dim, k, 0, &mut cur, &mut out);
        out
    }

    /// `e_self ^ e_other` as `(sign, index)`; `None` when they overlap.
    pub fn wedge(&self, other: &MultiIndex) -> Option<(i32, MultiIndex)> {
        let mut inversions = 0usize;
        for &b in &other.0 {
            if self.contains(b) {
                return None;
            }
            inversions += self.0.iter().filter(|&&a| a > b).count();
        }
        let mut merged = self.0.clone();
        merged.extend_from_slice(&other.0);
        merged.sort_unstable();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, MultiIndex(merged)))
    }

    /// Removes position `pos`, returning the index left behind.
    pub fn without_position(&self, pos: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    pub fn shifted(&self, offset: usize) -> MultiIndex {
        MultiIndex(self.0.iter().map(|i| i + offset).collect())
    }

    /// Renders with the given generator names, e.g. `dx^dy`; the unit is `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&i| names.get(i).cloned().unwrap_or_else(|| format!("e{i}")))
            .collect::<Vec<_>>()
            .join("^")
    }
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
    if cur.len() == k {
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Possibly mixed-grade element of the exterior algebra over `dim` generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtElement {
    dim: usize,
    terms: BTreeMap<MultiIndex, ScalarExpr>,
}

impl ExtElement {
    pub fn zero(dim: usize) -> Self {
        ExtElement {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: ScalarExpr) -> Self {
        ExtElement::zero(dim).with_term(MultiIndex::empty(), c)
    }

    /// The generator `e_i`.
    pub fn generator(dim: usize, i: usize) -> Self {
        assert!(i < dim, "generator {i} out of range for dimension {dim}");
        ExtElement::zero(dim).with_term(MultiIndex::single(i), ScalarExpr::one())
    }

    pub fn basis(dim: usize, index: MultiIndex) -> Self {
        ExtElement::zero(dim).with_term(index, ScalarExpr::one())
    }

    /// Grade-1 element with the given coefficients.
    pub fn covector(coeffs: &[ScalarExpr]) -> Self {
        let mut out = ExtElement::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            out.add_term(MultiIndex::single(i), c.clone());
        }
        out
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, ScalarExpr)>) -> Result<Self> {
        let mut out = ExtElement::zero(dim);
        for (idx, c) in terms {
            if let Some(&last) = idx.indices().last() {
                if last >= dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: last + 1,
                    });
                }
            }
            out.add_term(idx, c);
        }
        Ok(out)
    }

    fn with_term(mut self, idx: MultiIndex, c: ScalarExpr) -> Self {
        self.add_term(idx, c);
        self
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> ScalarExpr {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    /// Grades with a nonzero component, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(MultiIndex::grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The grade of a homogeneous element; zero is homogeneous of every
    /// grade and reports `None` here.
    pub fn homogeneous_grade(&self) -> Result<Option<usize>> {
        match self.grades().as_slice() {
            [] => Ok(None),
            [k] => Ok(Some(*k)),
            _ => Err(Error::NotHomogeneous),
        }
    }

    pub fn grade_part(&self, k: usize) -> ExtElement {
        ExtElement {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.grade() == k)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim != other_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other_dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtElement) -> Result<ExtElement> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExtElement) -> Result<ExtElement> {
        self.add(&other.scale(&ScalarExpr::int(-1)))
    }

    pub fn scale(&self, c: &ScalarExpr) -> ExtElement {
        let mut out = ExtElement::zero(self.dim);
        for (i, a) in &self.terms {
            out.add_term(i.clone(), a * c);
        }
        out
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&ScalarExpr) -> ScalarExpr) -> ExtElement {
        let mut out = ExtElement::zero(self.dim);
        for (i, a) in &self.terms {
            out.add_term(i.clone(), f(a));
        }
        out
    }

    pub fn wedge(&self, other: &ExtElement) -> Result<ExtElement> {
        self.check_dim(other.dim)?;
        let mut out = ExtElement::zero(self.dim);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((sign, k)) = i.wedge(j) {
                    out.add_term(k, (a * b).scale(&crate::scalar_expr::rational(sign.into())));
                }
            }
        }
        Ok(out)
    }

    /// Interior product with the vector whose components are `vec`:
    /// `i_v(e_J) = sum_p (-1)^p v_{J_p} e_{J without J_p}`.
    pub fn interior(&self, vec: &[ScalarExpr]) -> Result<ExtElement> {
        self.check_dim(vec.len())?;
        let mut out = ExtElement::zero(self.dim);
        for (idx, a) in &self.terms {
            for (p, &j) in idx.indices().iter().enumerate() {
                if vec[j].is_zero() {
                    continue;
                }
                let c = a * &vec[j];
                let c = if p % 2 == 0 { c } else { -c };
                out.add_term(idx.without_position(p), c);
            }
        }
        Ok(out)
    }

    /// Places this element into a bigger fibre, generator `i` going to `i + offset`.
    pub fn embed(&self, dim: usize, offset: usize) -> Result<ExtElement> {
        if offset + self.dim > dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: offset + self.dim,
            });
        }
        let mut out = ExtElement::zero(dim);
        for (i, a) in &self.terms {
            out.add_term(i.shifted(offset), a.clone());
        }
        Ok(out)
    }

    /// Renders with generator names, e.g. `x*dx^dy - dy`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(i, c)| {
                let basis = i.render(names);
                if i.grade() == 0 {
                    format!("({c})")
                } else if *c == ScalarExpr::one() {
                    basis
                } else {
                    format!("({c})*{basis}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|i| format!("e{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Sign of the permutation given as a sequence of distinct values.
fn permutation_sign(seq: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Formal basis-complement Hodge star on one fibre:
/// `f_{s(1)}^...^f_{s(k)} -> sgn(s) f_{s(k+1)}^...^f_{s(N)}`, where
/// `f_j = e_{order[j]}` is the basis declared orthonormal. The output grade
/// is `N - k` with `N` the fibre's own dimension.
pub fn hodge_star_fibre(w: &ExtElement, order: &[usize]) -> Result<ExtElement> {
    let n = w.dim();
    if order.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: order.len(),
        });
    }
    let mut position = vec![usize::MAX; n];
    for (p, &e) in order.iter().enumerate() {
        if e >= n || position[e] != usize::MAX {
            return Err(Error::Mismatch(format!("basis order {order:?} is not a permutation")));
        }
        position[e] = p;
    }
    let Some(k) = w.homogeneous_grade()? else {
        return Ok(ExtElement::zero(n));
    };
    let mut out = ExtElement::zero(n);
    for (idx, c) in w.terms() {
        // rewrite e_I in the f basis
        let f_positions: Vec<usize> = idx.indices().iter().map(|&i| position[i]).collect();
        let (s_in, sorted) = MultiIndex::sorted(f_positions).expect("distinct");
        let complement: Vec<usize> = (0..n).filter(|p| !sorted.contains(*p)).collect();
        let mut sigma = sorted.indices().to_vec();
        sigma.extend_from_slice(&complement);
        let s_perm = permutation_sign(&sigma);
        // back to the e basis
        let e_indices: Vec<usize> = complement.iter().map(|&p| order[p]).collect();
        let (s_out, target) = MultiIndex::sorted(e_indices).expect("distinct");
        debug_assert_eq!(target.grade(), n - k);
        let sign = s_in * s_perm * s_out;
        out.add_term(target, c.scale(&crate::scalar_expr::rational(sign.into())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let dx = ExtElement::generator(2, 0);
        let dy = ExtElement::generator(2, 1);
        assert_eq!(dx.wedge(&dy).unwrap(), ExtElement::basis(2, mi(&[0, 1])));
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(
            dy.wedge(&dx).unwrap(),
            ExtElement::basis(2, mi(&[0, 1])).scale(&ScalarExpr::int(-1))
        );
        assert!(dx.wedge(&ExtElement::generator(3, 0)).is_err());
    }

    #[test]
    fn interior_examples() {
        let e12 = ExtElement::basis(2, mi(&[0, 1]));
        let e1 = [ScalarExpr::one(), ScalarExpr::zero()];
        let e2 = [ScalarExpr::zero(), ScalarExpr::one()];
        assert_eq!(e12.interior(&e1).unwrap(), ExtElement::generator(2, 1));
        assert_eq!(
            e12.interior(&e2).unwrap(),
            ExtElement::generator(2, 0).scale(&ScalarExpr::int(-1))
        );
        assert!(ExtElement::generator(2, 1).interior(&e1).unwrap().is_zero());
        assert!(ExtElement::scalar(2, ScalarExpr::int(5)).interior(&e1).unwrap().is_zero());
    }

    #[test]
    fn hodge_examples() {
        let id2 = [0, 1];
        assert_eq!(
            hodge_star_fibre(&ExtElement::generator(2, 0), &id2).unwrap(),
            ExtElement::generator(2, 1)
        );
        let top = ExtElement::basis(3, mi(&[0, 1, 2]));
        assert_eq!(
            hodge_star_fibre(&top, &[0, 1, 2]).unwrap(),
            ExtElement::scalar(3, ScalarExpr::one())
        );
        let star = hodge_star_fibre(&ExtElement::generator(4, 0), &[0, 1, 2, 3]).unwrap();
        assert_eq!(star, ExtElement::basis(4, mi(&[1, 2, 3])));
        let mixed = ExtElement::generator(2, 0).add(&ExtElement::scalar(2, ScalarExpr::one())).unwrap();
        assert_eq!(hodge_star_fibre(&mixed, &id2), Err(Error::NotHomogeneous));
    }

    #[test]
    fn hodge_respects_basis_order() {
        // with f = (e1, e0): *f0 = f1, i.e. *e1 = e0; *f1 = -f0, i.e. *e0 = -e1
        let order = [1, 0];
        assert_eq!(
            hodge_star_fibre(&ExtElement::generator(2, 1), &order).unwrap(),
            ExtElement::generator(2, 0)
        );
        assert_eq!(
            hodge_star_fibre(&ExtElement::generator(2, 0), &order).unwrap(),
            ExtElement::generator(2, 1).scale(&ScalarExpr::int(-1))
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(MultiIndex::all(4, 2).len(), 6);
        assert_eq!(MultiIndex::all(3, 0), vec![MultiIndex::empty()]);
    }
}
