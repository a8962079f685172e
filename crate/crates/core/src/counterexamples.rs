//! Finite witnesses of the ways classical constructions fail on wedges.
//!
//! - a function vanishing at a point whose differential does not
//! - a nonzero element of `wedge^2(Lambda^1_x)` mapped to zero in `Lambda^2_x`
//! - the fibre star on the doubled fibre landing in the wrong degree

use serde::Serialize;

use crate::derham::wedge_names;
use crate::error::{Error, Result};
use crate::exterior::{binomial, hodge_star_fibre, ExtElement, MultiIndex};
use crate::forms::{
    assemble, exterior_derivative, fibre_dimension, project_to_fibre, vanishes_at, wedge_1k_map, wedge_1k_rank,
    PieceForm,
};
use crate::scalar_expr::rational;
use crate::space::{GluedSpace, SpacePoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingDifferential {
    pub function: String,
    pub point: String,
    pub function_vanishes: bool,
    pub differential: String,
    pub differential_vanishes: bool,
    pub differential_fibre_value: Vec<String>,
}

/// `h(x) = x` on the line: `h` vanishes at 0 while `dh` does not, so `d`
/// does not descend to the fibres of `Lambda^0 -> Lambda^1`.
pub fn vanishing_differential() -> Result<VanishingDifferential> {
    let s = GluedSpace::euclidean(1);
    let piece = &s.pieces()[0];
    let h = assemble(&[PieceForm::parse(piece, 0, &[("1", "x")])?], &s)?;
    let dh = exterior_derivative(&h);
    let origin = SpacePoint::Piece {
        piece: piece.id.clone(),
        coords: vec![rational(0)],
    };
    let value = project_to_fibre(&dh, &s, &origin)?;
    Ok(VanishingDifferential {
        function: h.components()[0].render(),
        point: origin.to_string(),
        function_vanishes: vanishes_at(&h, &s, &origin)?,
        differential: dh.components()[0].render(),
        differential_vanishes: vanishes_at(&dh, &s, &origin)?,
        differential_fibre_value: value.coeffs.iter().map(ToString::to_string).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeKernel {
    pub wedge: String,
    pub element: String,
    pub image_is_zero: bool,
    pub lambda1_dim: usize,
    pub exterior_square_dim: usize,
    pub lambda2_dim: usize,
    pub map_rank: usize,
}

fn two_participants(s: &GluedSpace, wedge: &str) -> Result<(usize, usize)> {
    let w = s.wedge(wedge)?;
    let n0 = s.piece(&w.participants[0].piece)?.dim();
    let n1 = s.piece(&w.participants[1].piece)?.dim();
    Ok((n0, n1))
}

/// `(first covector of piece 1) ^ (last covector of piece 2)` in
/// `wedge^2(Lambda^1_x)`; its image in `Lambda^2_x` is zero because no
/// single piece carries both factors.
pub fn wedge_kernel(s: &GluedSpace, wedge: &str) -> Result<WedgeKernel> {
    let x = SpacePoint::Wedge(wedge.to_string());
    let (n0, n1) = two_participants(s, wedge)?;
    let n = fibre_dimension(s, &x, 1)?;
    let idx = MultiIndex::new(vec![0, n0 + n1 - 1])?;
    let element = ExtElement::basis(n, idx);
    let image = wedge_1k_map(&element, s, &x, 2)?;
    Ok(WedgeKernel {
        wedge: wedge.to_string(),
        element: element.render(&wedge_names(s, wedge)?),
        image_is_zero: image.is_zero(),
        lambda1_dim: n,
        exterior_square_dim: binomial(n, 2),
        lambda2_dim: fibre_dimension(s, &x, 2)?,
        map_rank: wedge_1k_rank(s, &x, 2)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarDegree {
    pub wedge: String,
    pub input: String,
    pub input_as_sums: String,
    pub star: String,
    pub star_grade: usize,
    pub expected_grade: usize,
}

fn sum_label(s: &GluedSpace, wedge: &str, i: usize) -> Result<String> {
    let w = s.wedge(wedge)?;
    let mut slots = Vec::new();
    let mut offset = 0;
    let mut hit = None;
    for q in &w.participants {
        let p = s.piece(&q.piece)?;
        if i >= offset && i < offset + p.dim() {
            hit = Some(p.covector_names()[i - offset].clone());
            slots.push(hit.clone().expect("set"));
        } else {
            slots.push("0".into());
        }
        offset += p.dim();
    }
    hit.ok_or(Error::DimensionMismatch {
        expected: offset,
        found: i,
    })?;
    Ok(format!("({})", slots.join("(+)")))
}

/// `dx1 (+) dx2` (first covectors of the first two participants) in the
/// wedge fibre: its star has grade `N - 1` for the fibre dimension `N`,
/// while the space has dimension `n` and would call for grade `n - 1`.
pub fn star_degree(s: &GluedSpace, wedge: &str) -> Result<StarDegree> {
    let x = SpacePoint::Wedge(wedge.to_string());
    let (n0, _) = two_participants(s, wedge)?;
    let n = fibre_dimension(s, &x, 1)?;
    let alpha = ExtElement::generator(n, 0).add(&ExtElement::generator(n, n0))?;
    let star = hodge_star_fibre(&alpha, &(0..n).collect::<Vec<_>>())?;
    let names = wedge_names(s, wedge)?;
    let sums: Vec<String> = (0..n).map(|i| sum_label(s, wedge, i)).collect::<Result<_>>()?;
    Ok(StarDegree {
        wedge: wedge.to_string(),
        input: alpha.render(&names),
        input_as_sums: alpha.render(&sums),
        star: star.render(&names),
        star_grade: star.homogeneous_grade()?.unwrap_or(0),
        expected_grade: s.dimension() - 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Suite {
    pub vanishing_differential: VanishingDifferential,
    pub wedge_kernel: Option<WedgeKernel>,
    pub star_degree: Option<StarDegree>,
}

/// All three witnesses; the wedge ones use the first wedge point, if any.
pub fn suite(s: &GluedSpace) -> Result<Suite> {
    let first = s.wedges().first().map(|w| w.id.clone());
    Ok(Suite {
        vanishing_differential: vanishing_differential()?,
        wedge_kernel: first.as_deref().map(|w| wedge_kernel(s, w)).transpose()?,
        star_degree: first.as_deref().map(|w| star_degree(s, w)).transpose()?,
    })
}
