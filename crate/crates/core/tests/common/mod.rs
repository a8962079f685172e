//! Seeded random inputs and independent oracles shared by the integration
//! tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use diffeo_glue::exterior::{ExtElement, MultiIndex};
use diffeo_glue::scalar_expr::{Rational, ScalarExpr};
use diffeo_glue::space::{EuclideanPiece, GluedSpace, Participant, WedgePoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub struct Gen {
    rng: ChaCha8Rng,
}

/// A randomly generated space, kept alongside the data it was built from.
pub struct RandomSpace {
    pub dims: Vec<usize>,
    pub space: GluedSpace,
    pub toml: String,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn rational(&mut self) -> Rational {
        let d = self.range(1, 3);
        q(self.range(-4, 4), d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != q(0, 1) {
                return r;
            }
        }
    }

    pub fn point(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    /// Sum of up to `terms` monomials of degree at most `max_degree`.
    pub fn poly(&mut self, vars: &[String], max_degree: u32, terms: usize) -> ScalarExpr {
        let count = self.index(terms + 1);
        let mut acc = ScalarExpr::zero();
        for _ in 0..count {
            let mut m = ScalarExpr::constant(self.nonzero_rational());
            let mut budget = self.range(0, max_degree as i64) as u32;
            while budget > 0 && !vars.is_empty() {
                let v = &vars[self.index(vars.len())];
                m = m * ScalarExpr::var(v);
                budget -= 1;
            }
            acc = acc + m;
        }
        acc
    }

    /// A polynomial, sometimes plus a polynomial times `exp` of a polynomial.
    pub fn expr(&mut self, vars: &[String], allow_exp: bool) -> ScalarExpr {
        let base = self.poly(vars, 3, 3);
        if allow_exp && self.chance(0.4) {
            let arg = self.poly(vars, 2, 2);
            let factor = self.poly(vars, 2, 2);
            base + factor * arg.exp().expect("polynomial argument")
        } else {
            base
        }
    }

    /// Homogeneous element of grade `k` with random coefficients.
    pub fn homogeneous(&mut self, vars: &[String], k: usize, allow_exp: bool) -> ExtElement {
        let n = vars.len();
        let mut e = ExtElement::zero(n);
        for idx in MultiIndex::all(n, k) {
            if self.chance(0.7) {
                let c = self.expr(vars, allow_exp);
                e.add_term(idx, c);
            }
        }
        e
    }

    /// Mixed-grade element.
    pub fn mixed(&mut self, vars: &[String], allow_exp: bool) -> ExtElement {
        let n = vars.len();
        let mut e = ExtElement::zero(n);
        for k in 0..=n {
            if self.chance(0.6) {
                e = e.add(&self.homogeneous(vars, k, allow_exp)).unwrap();
            }
        }
        e
    }

    /// Constant-coefficient element, used as a fibre value.
    pub fn constant_element(&mut self, n: usize, k: usize) -> ExtElement {
        let mut e = ExtElement::zero(n);
        for idx in MultiIndex::all(n, k) {
            if self.chance(0.7) {
                e.add_term(idx, ScalarExpr::constant(self.rational()));
            }
        }
        e
    }

    /// Positive semidefinite `A^T A` with `A` of random rank, entries small
    /// integers.
    pub fn psd_matrix(&mut self, n: usize) -> Vec<Vec<ScalarExpr>> {
        let rows = self.index(n + 1);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..n).map(|_| self.range(-2, 2)).collect()).collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| ScalarExpr::int(a.iter().map(|r| r[i] * r[j]).sum()))
                    .collect()
            })
            .collect()
    }

    /// 2 to 4 pieces of dimension 1 to 3, with 1 or 2 wedge points.
    pub fn space(&mut self) -> RandomSpace {
        let count = self.range(2, 4) as usize;
        let dims: Vec<usize> = (0..count).map(|_| self.range(1, 3) as usize).collect();
        let pieces: Vec<EuclideanPiece> = dims
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let coords: Vec<String> = (0..n).map(|j| format!("u{i}_{j}")).collect();
                let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
                EuclideanPiece::new(format!("P{i}"), &refs)
            })
            .collect();
        let wedge_count = self.range(1, 2) as usize;
        let mut wedges = Vec::new();
        for w in 0..wedge_count {
            let mut members: Vec<usize> = (0..count).collect();
            members.shuffle(&mut self.rng);
            let size = self.range(2, count as i64) as usize;
            members.truncate(size);
            members.sort_unstable();
            let participants = members
                .iter()
                .map(|&i| {
                    // first coordinate pins the point to this wedge
                    let mut at = self.point(dims[i]);
                    at[0] = q(10 * w as i64 + self.range(0, 5), 1);
                    Participant {
                        piece: format!("P{i}"),
                        at,
                    }
                })
                .collect();
            wedges.push(WedgePoint {
                id: format!("w{w}"),
                participants,
            });
        }
        let toml = space_toml(&pieces, &wedges);
        let space = GluedSpace::new(pieces, wedges).expect("generated space is valid");
        RandomSpace { dims, space, toml }
    }
}

fn space_toml(pieces: &[EuclideanPiece], wedges: &[WedgePoint]) -> String {
    let mut out = String::new();
    for p in pieces {
        let coords: Vec<String> = p.coords.iter().map(|c| format!("\"{c}\"")).collect();
        out.push_str(&format!("[[piece]]\nid = \"{}\"\ncoords = [{}]\n\n", p.id, coords.join(", ")));
    }
    for w in wedges {
        out.push_str(&format!("[[wedge]]\nid = \"{}\"\nparticipants = [\n", w.id));
        for q in &w.participants {
            let at: Vec<String> = q.at.iter().map(|r| format!("\"{r}\"")).collect();
            out.push_str(&format!("    {{ piece = \"{}\", at = [{}] }},\n", q.piece, at.join(", ")));
        }
        out.push_str("]\n\n");
    }
    out
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

// Fully antisymmetric components: w(i_1, ..., i_k) for any tuple.
fn component(w: &ExtElement, tuple: &[usize]) -> ScalarExpr {
    match MultiIndex::sorted(tuple.to_vec()) {
        Some((sign, idx)) => {
            let c = w.coefficient(&idx);
            if sign < 0 {
                -c
            } else {
                c
            }
        }
        None => ScalarExpr::zero(),
    }
}

/// `(dw)_{i_0..i_k} = sum_j (-1)^j d_{i_j} w_{i_0..^i_j..i_k}` on sorted tuples.
pub fn oracle_d(coords: &[String], w: &ExtElement) -> ExtElement {
    let n = coords.len();
    let mut out = ExtElement::zero(n);
    for k in 0..n {
        let part = w.grade_part(k);
        if part.is_zero() {
            continue;
        }
        for target in MultiIndex::all(n, k + 1) {
            let t = target.indices();
            let mut acc = ScalarExpr::zero();
            for j in 0..t.len() {
                let rest: Vec<usize> = t.iter().enumerate().filter(|(p, _)| *p != j).map(|(_, &v)| v).collect();
                let term = component(&part, &rest).differentiate(&coords[t[j]]);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            out.add_term(target, acc);
        }
    }
    out
}

/// `(d* w)_{i_2..i_k} = -sum_a d_a w_{a i_2..i_k}`.
pub fn oracle_dstar(coords: &[String], w: &ExtElement) -> ExtElement {
    let n = coords.len();
    let mut out = ExtElement::zero(n);
    for k in 1..=n {
        let part = w.grade_part(k);
        if part.is_zero() {
            continue;
        }
        for target in MultiIndex::all(n, k - 1) {
            let mut acc = ScalarExpr::zero();
            for (a, name) in coords.iter().enumerate() {
                let mut tuple = vec![a];
                tuple.extend_from_slice(target.indices());
                acc = acc - component(&part, &tuple).differentiate(name);
            }
            out.add_term(target, acc);
        }
    }
    out
}

pub fn oracle_dplusdstar(coords: &[String], w: &ExtElement) -> ExtElement {
    oracle_d(coords, w).add(&oracle_dstar(coords, w)).unwrap()
}

pub fn point_map(coords: &[String], values: &[Rational]) -> BTreeMap<String, Rational> {
    coords.iter().cloned().zip(values.iter().cloned()).collect()
}
