use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// A power product `x^a * y^b * ...`. Exponents are always positive; the
/// empty monomial is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial::from_powers([(name, 1)])
    }

    pub fn from_powers<'a>(powers: impl IntoIterator<Item = (&'a str, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *m.entry(v.to_string()).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// All monomials in `vars` of total degree at most `max_degree`, in a
    /// fixed order (by degree, then lexicographically by exponent vector).
    pub fn all_up_to(vars: &[String], max_degree: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if max_degree < 0 {
            return out;
        }
        for d in 0..=max_degree as u32 {
            let mut exps = vec![0u32; vars.len()];
            collect_exponents(vars, d, 0, &mut exps, &mut out);
        }
        out
    }
}

fn collect_exponents(
    vars: &[String],
    remaining: u32,
    at: usize,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if at + 1 >= vars.len() {
        if vars.is_empty() {
            if remaining == 0 {
                out.push(Monomial::one());
            }
            return;
        }
        exps[at] = remaining;
        out.push(Monomial::from_powers(
            vars.iter().map(String::as_str).zip(exps.iter().copied()),
        ));
        return;
    }
    for e in (0..=remaining).rev() {
        exps[at] = e;
        collect_exponents(vars, remaining - e, at + 1, exps, out);
    }
    exps[at] = 0;
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients. No zero coefficients are stored,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Poly::term(Rational::one(), Monomial::var(name))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().flat_map(|m| m.0.keys().map(String::as_str))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn differentiate(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let mut powers = m.0.clone();
            if e == 1 {
                powers.remove(var);
            } else {
                powers.insert(var.to_string(), e - 1);
            }
            out.add_term(Monomial(powers), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Substitutes the bound variables by rational values; unbound ones stay symbolic.
    pub fn substitute(&self, point: &BTreeMap<String, Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = BTreeMap::new();
            for (v, e) in &m.0 {
                match point.get(v) {
                    Some(val) => coeff *= pow_rational(val, *e),
                    None => {
                        rest.insert(v.clone(), *e);
                    }
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Replaces each bound variable by a polynomial.
    pub fn compose(&self, map: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let factor = match map.get(v) {
                    Some(p) => p.pow(*e),
                    None => Poly::term(Rational::one(), Monomial::from_powers([(v.as_str(), *e)])),
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let val = point
                    .get(v)
                    .ok_or_else(|| Error::UnboundCoordinate(v.clone()))?;
                t *= pow_rational(val, *e);
            }
            total += t;
        }
        Ok(total)
    }
}

pub(crate) fn pow_rational(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn monomial_enumeration_counts() {
        let vars = vec!["x".to_string(), "y".to_string()];
        // C(D+2, 2)
        assert_eq!(Monomial::all_up_to(&vars, 0).len(), 1);
        assert_eq!(Monomial::all_up_to(&vars, 3).len(), 10);
        assert_eq!(Monomial::all_up_to(&vars, -1).len(), 0);
        let one = vec!["t".to_string()];
        assert_eq!(Monomial::all_up_to(&one, 4).len(), 5);
        assert_eq!(Monomial::all_up_to(&[], 4).len(), 1);
    }

    #[test]
    fn product_and_derivative() {
        let x = Poly::var("x");
        let y = Poly::var("y");
        let p = x.pow(2).mul(&y);
        assert_eq!(p.differentiate("x"), x.mul(&y).scale(&q(2)));
        assert!(p.differentiate("z").is_zero());
        assert_eq!(p.to_string(), "x^2*y");
    }

    #[test]
    fn compose_shifts_variables() {
        let x = Poly::var("x");
        let map = BTreeMap::from([("x".to_string(), x.add(&Poly::constant(q(1))))]);
        let shifted = x.pow(2).compose(&map);
        assert_eq!(shifted, x.pow(2).add(&x.scale(&q(2))).add(&Poly::constant(q(1))));
    }
}
