mod common;

use common::{names, q, Gen};
use diffeo_glue::clifford::{clifford_action, clifford_mul, CliffordElement, FibreBilinearForm};
use diffeo_glue::derham::{bounded_dimension, derham_apply, flat_structure, BoundedDimension, GluedSection, PieceSection};
use diffeo_glue::exterior::{ExtElement, MultiIndex};
use diffeo_glue::forms::{
    assemble, canonical_representative, exterior_derivative, fibre_basis, project_to_fibre, vanishes_at,
    wedge_1k_map, wedge_1k_map_with, GluedForm, PieceForm,
};
use diffeo_glue::metric::{
    christoffel, extend_to_exterior, nabla_oneform, verify_metric_compatibility, verify_torsion_free,
    ChristoffelData, PieceCotangentMetric, TensorSection,
};
use diffeo_glue::scalar_expr::{Rational, ScalarExpr};
use diffeo_glue::space::{GluedSpace, SpacePoint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

/// A random form of grade `k` that is compatible (functions get value 0 at
/// every wedge point by multiplying with the first coordinate shifted).
fn random_glued_form(g: &mut Gen, s: &GluedSpace, k: usize) -> GluedForm {
    let comps: Vec<PieceForm> = s
        .pieces()
        .iter()
        .map(|p| {
            if k > p.dim() {
                return PieceForm::zero(p, k);
            }
            let mut e = g.homogeneous(&p.coords, k, true);
            if k == 0 {
                let mut vanish = ScalarExpr::one();
                for w in s.wedges() {
                    for part in w.participants.iter().filter(|x| x.piece == p.id) {
                        vanish = vanish * (ScalarExpr::var(&p.coords[0]) - ScalarExpr::constant(part.at[0].clone()));
                    }
                }
                e = e.scale(&vanish);
            }
            PieceForm::new(p, k, e).unwrap()
        })
        .collect();
    assemble(&comps, s).unwrap()
}

fn plane() -> diffeo_glue::space::EuclideanPiece {
    GluedSpace::euclidean(2).pieces()[0].clone()
}

fn metric_family() -> Vec<PieceCotangentMetric> {
    let p = plane();
    vec![
        PieceCotangentMetric::identity(&p),
        PieceCotangentMetric::parse(&p, &[vec!["1", "0"], vec!["0", "exp(x*y)"]]).unwrap(),
        PieceCotangentMetric::parse(&p, &[vec!["exp(x)", "0"], vec!["0", "exp(y)"]]).unwrap(),
    ]
}

fn legs_wedge_right(t: &TensorSection, b: &ExtElement) -> Vec<ExtElement> {
    t.legs.iter().map(|l| l.wedge(b).unwrap()).collect()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn display_then_parse_is_identity(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let e = g.expr(&names("x", 3), true);
        let back = ScalarExpr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(ScalarExpr::parse(&back.to_string()).unwrap(), back);
    }

    #[test]
    fn differentiation_is_leibniz(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let vars = names("x", 2);
        let (f, h) = (g.expr(&vars, true), g.expr(&vars, true));
        for v in &vars {
            let lhs = (&f * &h).differentiate(v);
            let rhs = &(&f.differentiate(v) * &h) + &(&f * &h.differentiate(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let vars = names("x", 2);
        let f = g.expr(&vars, true);
        let df = f.differentiate("x0");
        let (x, y) = (q(g.range(-4, 4), 4), q(g.range(-4, 4), 4));
        let h = q(1, 1_000_000);
        let at = |a: Rational| common::point_map(&vars, &[a, y.clone()]);
        let fd = (f.evaluate(&at(&x + &h)).unwrap().to_f64() - f.evaluate(&at(&x - &h)).unwrap().to_f64())
            / (2.0 * h.to_f64().unwrap());
        let exact = df.evaluate(&at(x.clone())).unwrap().to_f64();
        prop_assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "fd {} vs {}", fd, exact);
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.range(2, 4) as usize;
        let vars = names("x", n);
        let (p, r) = (g.index(n + 1), g.index(n + 1));
        let a = g.homogeneous(&vars, p, false);
        let b = g.homogeneous(&vars, r, false);
        let c = g.mixed(&vars, false);
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        let sign = if (p * r) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale(&ScalarExpr::int(sign)));
    }

    #[test]
    fn interior_squares_to_zero_and_is_an_antiderivation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.range(1, 4) as usize;
        let vars = names("x", n);
        let v: Vec<ScalarExpr> = (0..n).map(|_| g.expr(&vars, false)).collect();
        let p = g.index(n + 1);
        let a = g.homogeneous(&vars, p, false);
        let b = g.mixed(&vars, false);
        prop_assert!(a.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs = a.interior(&v).unwrap().wedge(&b).unwrap()
            .add(&a.wedge(&b.interior(&v).unwrap()).unwrap().scale(&ScalarExpr::int(sign))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn clifford_action_squares_to_minus_the_norm(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.range(1, 4) as usize;
        let form = FibreBilinearForm::new(g.psd_matrix(n)).unwrap();
        let alpha = g.constant_element(n, 1);
        let coeffs: Vec<ScalarExpr> = (0..n).map(|j| alpha.coefficient(&MultiIndex::single(j))).collect();
        let norm = form.apply(&coeffs, &coeffs);
        let w = g.mixed(&names("x", n), false);
        let twice = clifford_action(&alpha, &clifford_action(&alpha, &w, &form).unwrap(), &form).unwrap();
        prop_assert!(twice.add(&w.scale(&norm)).unwrap().is_zero());
    }

    #[test]
    fn clifford_product_is_associative_and_extends_the_action(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.range(1, 3) as usize;
        let form = FibreBilinearForm::new(g.psd_matrix(n)).unwrap();
        let el = |g: &mut Gen| {
            let mut e = ExtElement::zero(n);
            for k in 0..=n {
                e = e.add(&g.constant_element(n, k)).unwrap();
            }
            CliffordElement::from_exterior(e)
        };
        let (a, b, c) = (el(&mut g), el(&mut g), el(&mut g));
        let ab_c = clifford_mul(&clifford_mul(&a, &b, &form).unwrap(), &c, &form).unwrap();
        let a_bc = clifford_mul(&a, &clifford_mul(&b, &c, &form).unwrap(), &form).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let v = g.constant_element(n, 1);
        let prod = clifford_mul(&CliffordElement::from_exterior(v.clone()), &c, &form).unwrap();
        prop_assert_eq!(prod.as_exterior(), &clifford_action(&v, c.as_exterior(), &form).unwrap());
    }

    #[test]
    fn d_squares_to_zero_on_glued_forms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let r = g.space();
        let k = g.index(3);
        let w = random_glued_form(&mut g, &r.space, k);
        prop_assert!(exterior_derivative(&exterior_derivative(&w)).is_zero());
    }

    #[test]
    fn projection_of_canonical_representatives_is_a_unit_vector(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let r = g.space();
        let s = &r.space;
        let x = if g.chance(0.5) {
            SpacePoint::Wedge(s.wedges()[0].id.clone())
        } else {
            let p = &s.pieces()[g.index(s.pieces().len())];
            SpacePoint::Piece { piece: p.id.clone(), coords: g.point(p.dim()) }
        };
        let k = g.index(3);
        let basis = fibre_basis(s, &x, k).unwrap();
        for (i, label) in basis.labels.iter().enumerate() {
            let rep = canonical_representative(s, label, k).unwrap();
            let v = project_to_fibre(&rep, s, &x).unwrap().rational_coeffs().unwrap();
            for (j, c) in v.iter().enumerate() {
                prop_assert_eq!(c.clone(), if i == j { q(1, 1) } else { q(0, 1) });
            }
        }
    }

    #[test]
    fn projection_vanishes_exactly_when_the_form_does(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let r = g.space();
        let s = &r.space;
        let x = SpacePoint::Wedge(s.wedges()[0].id.clone());
        let k = 1 + g.index(2);
        let w = random_glued_form(&mut g, s, k);
        prop_assert_eq!(project_to_fibre(&w, s, &x).unwrap().is_zero(), vanishes_at(&w, s, &x).unwrap());
    }

    #[test]
    fn wedge_map_does_not_depend_on_representatives(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let r = g.space();
        let s = &r.space;
        let wedge = &s.wedges()[0];
        let x = SpacePoint::Wedge(wedge.id.clone());
        let basis = fibre_basis(s, &x, 1).unwrap();
        // add forms vanishing at x to each canonical representative
        let reps: Vec<GluedForm> = basis.labels.iter().map(|l| {
            let canon = canonical_representative(s, l, 1).unwrap();
            let comps: Vec<PieceForm> = canon.components().iter().map(|c| {
                let p = s.piece(c.piece()).unwrap();
                let mut e = g.homogeneous(&p.coords, 1, false);
                if let Some(part) = wedge.participants.iter().find(|q| q.piece == p.id) {
                    e = e.scale(&(ScalarExpr::var(&p.coords[0]) - ScalarExpr::constant(part.at[0].clone())));
                }
                c.add(&PieceForm::new(p, 1, e).unwrap()).unwrap()
            }).collect();
            assemble(&comps, s).unwrap()
        }).collect();
        let k = 1 + g.index(2);
        let w = g.constant_element(basis.dim(), k);
        prop_assert_eq!(
            wedge_1k_map_with(&reps, &w, s, &x, k).unwrap().coeffs,
            wedge_1k_map(&w, s, &x, k).unwrap().coeffs
        );
    }

    #[test]
    fn bounded_dimension_is_the_largest_fibre(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let r = g.space();
        let s = &r.space;
        let wedge_max = s.wedges().iter()
            .map(|w| w.participants.iter().map(|p| s.piece(&p.piece).unwrap().dim()).sum::<usize>())
            .max().unwrap_or(0);
        let expected = wedge_max.max(*r.dims.iter().max().unwrap());
        prop_assert_eq!(bounded_dimension(s), BoundedDimension::Bounded(expected));
        prop_assert!(expected >= s.dimension());
    }

    #[test]
    fn levi_civita_family_satisfies_both_axioms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = plane();
        let s = PieceForm::new(&p, 1, g.homogeneous(&p.coords, 1, true)).unwrap();
        let t = PieceForm::new(&p, 1, g.homogeneous(&p.coords, 1, true)).unwrap();
        for m in metric_family() {
            let gamma = christoffel(&m).unwrap();
            prop_assert!(gamma.is_symmetric());
            prop_assert!(verify_metric_compatibility(&m, &gamma, &s, &t).unwrap().is_zero());
            prop_assert!(verify_torsion_free(&m, &gamma, &s, &t).unwrap().is_zero());
        }
    }

    #[test]
    fn perturbed_symbols_break_metric_compatibility(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = plane();
        let m = &metric_family()[g.index(3)];
        let gamma = christoffel(m).unwrap();
        let mut comps = gamma.components().to_vec();
        let mut changed = false;
        for c in 0..2 {
            for a in 0..2 {
                for b in a..2 {
                    if g.chance(0.5) {
                        let d = ScalarExpr::constant(g.nonzero_rational());
                        comps[c][a][b] = &comps[c][a][b] + &d;
                        if a != b {
                            comps[c][b][a] = &comps[c][b][a] + &d;
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            comps[0][0][0] = &comps[0][0][0] + &ScalarExpr::one();
        }
        let perturbed = ChristoffelData::from_components(&p, comps).unwrap();
        prop_assert!(perturbed.is_symmetric());
        let basis = |i: usize| PieceForm::new(&p, 1, ExtElement::generator(2, i)).unwrap();
        let broken = (0..2).any(|i| (0..2).any(|j| {
            !verify_metric_compatibility(m, &perturbed, &basis(i), &basis(j)).unwrap().is_zero()
        }));
        prop_assert!(broken);
    }

    #[test]
    fn connection_is_leibniz_on_functions_times_forms(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = plane();
        let gamma = christoffel(&metric_family()[g.index(3)]).unwrap();
        let h = g.expr(&p.coords, true);
        let w = PieceForm::new(&p, 1, g.homogeneous(&p.coords, 1, true)).unwrap();
        let lhs = nabla_oneform(&w.scale(&h), &gamma).unwrap();
        let nw = nabla_oneform(&w, &gamma).unwrap();
        for a in 0..2 {
            let expected = w.element().scale(&h.differentiate(&p.coords[a])).add(&nw.legs[a].scale(&h)).unwrap();
            prop_assert_eq!(&lhs.legs[a], &expected);
        }
    }

    #[test]
    fn exterior_extension_is_a_derivation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = plane();
        let conn = extend_to_exterior(christoffel(&metric_family()[g.index(3)]).unwrap());
        let a = g.mixed(&p.coords, true);
        let b = g.mixed(&p.coords, true);
        let lhs = conn.apply(&a.wedge(&b).unwrap()).unwrap();
        let left = legs_wedge_right(&conn.apply(&a).unwrap(), &b);
        let nb = conn.apply(&b).unwrap();
        for i in 0..2 {
            let rhs = left[i].add(&a.wedge(&nb.legs[i]).unwrap()).unwrap();
            prop_assert_eq!(&lhs.legs[i], &rhs);
        }
    }

    #[test]
    fn flat_operator_shifts_grade_by_one(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.range(1, 3) as usize;
        let s = GluedSpace::euclidean(n);
        let piece = s.pieces()[0].clone();
        let k = g.index(n + 1);
        let sec = GluedSection::new(&s, vec![PieceSection::new(&piece, g.homogeneous(&piece.coords, k, true)).unwrap()]).unwrap();
        let (gm, conn) = flat_structure(&s).unwrap();
        let out = derham_apply(&sec, &gm, &conn).unwrap();
        prop_assert!(out.grades().iter().all(|&j| j + 1 == k || j == k + 1));
    }
}
