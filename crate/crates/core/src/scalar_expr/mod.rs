//! Exact scalar coefficients.
//!
//! Every [`ScalarExpr`] is kept in the normal form
//!
//! ```text
//!     sum_i  p_i(x) * exp(q_i(x))
//! ```
//!
//! with rational polynomials `p_i`, `q_i` and pairwise distinct arguments
//! `q_i`. Functions `exp(q)` with distinct polynomial arguments are linearly
//! independent over the polynomial ring, so two expressions are equal exactly
//! when their normal forms coincide and [`ScalarExpr::is_zero`] is a decision
//! procedure. The same holds after substituting a rational point, since
//! `exp(c_1), ..., exp(c_n)` are linearly independent over the rationals for
//! distinct rational `c_i`.

mod parse;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use parse::{parse, Expr};
pub use poly::{Monomial, Poly};
pub(crate) use poly::fmt_rational;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse::<Rational>().map_err(|e| Error::Parse {
        pos: 0,
        message: format!("`{s}` is not a rational literal: {e}"),
    })
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarExpr {
    /// exp argument -> polynomial factor (never zero)
    terms: BTreeMap<Poly, Poly>,
}

/// Result of [`ScalarExpr::evaluate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    /// Double precision (53 significant bits).
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Approx(v) => *v,
        }
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::default()
    }

    pub fn one() -> Self {
        ScalarExpr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ScalarExpr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        ScalarExpr::constant(rational(n))
    }

    pub fn var(name: &str) -> Self {
        ScalarExpr::from_poly(Poly::var(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr::from_parts(p, Poly::zero())
    }

    /// `factor * exp(argument)`
    pub fn from_parts(factor: Poly, argument: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !factor.is_zero() {
            terms.insert(argument, factor);
        }
        ScalarExpr { terms }
    }

    /// Parses the text grammar (`p/q`, identifiers, `+ - * / ^ exp( )`).
    pub fn parse(src: &str) -> Result<Self> {
        parse(src)?.normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exp argument, polynomial factor)` pairs of the normal form.
    pub fn terms(&self) -> impl Iterator<Item = (&Poly, &Poly)> {
        self.terms.iter()
    }

    pub fn as_polynomial(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => self.terms.get(&Poly::zero()).cloned(),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_polynomial().and_then(|p| p.as_constant())
    }

    pub fn is_polynomial(&self) -> bool {
        self.as_polynomial().is_some()
    }

    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        self.terms
            .iter()
            .flat_map(|(a, p)| a.variables().chain(p.variables()))
            .map(str::to_string)
            .collect()
    }

    fn add_term(&mut self, argument: Poly, factor: Poly) {
        if factor.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&argument) {
            Some(existing) => existing.add(&factor),
            None => factor,
        };
        if !sum.is_zero() {
            self.terms.insert(argument, sum);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(a, p)| (a.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = ScalarExpr::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `exp(self)`; the argument has to be a polynomial.
    pub fn exp(&self) -> Result<Self> {
        let arg = self.as_polynomial().ok_or(Error::NestedExp)?;
        Ok(ScalarExpr::from_parts(Poly::constant(Rational::one()), arg))
    }

    pub fn differentiate(&self, var: &str) -> Self {
        let mut out = ScalarExpr::zero();
        for (arg, p) in &self.terms {
            // (p e^q)' = (p' + p q') e^q
            let factor = p.differentiate(var).add(&p.mul(&arg.differentiate(var)));
            out.add_term(arg.clone(), factor);
        }
        out
    }

    /// Exact substitution of rational values; unbound coordinates stay symbolic.
    pub fn substitute(&self, point: &BTreeMap<String, Rational>) -> Self {
        let mut out = ScalarExpr::zero();
        for (arg, p) in &self.terms {
            out.add_term(arg.substitute(point), p.substitute(point));
        }
        out
    }

    /// Replaces coordinates by polynomials (used for translations).
    pub fn compose(&self, map: &BTreeMap<String, Poly>) -> Self {
        let mut out = ScalarExpr::zero();
        for (arg, p) in &self.terms {
            out.add_term(arg.compose(map), p.compose(map));
        }
        out
    }

    /// Exact for exp-free expressions; otherwise double precision.
    pub fn evaluate(&self, point: &BTreeMap<String, Rational>) -> Result<Value> {
        if let Some(p) = self.as_polynomial() {
            return p.evaluate(point).map(Value::Exact);
        }
        let mut total = 0.0;
        for (arg, p) in &self.terms {
            let a = arg.evaluate(point)?.to_f64().unwrap_or(f64::NAN);
            let c = p.evaluate(point)?.to_f64().unwrap_or(f64::NAN);
            total += c * a.exp();
        }
        Ok(Value::Approx(total))
    }

    /// Multiplicative inverse when `self` is a unit of the coefficient ring,
    /// i.e. a nonzero constant times `exp(q)`.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (arg, p) = self.terms.iter().next()?;
        let c = p.as_constant()?;
        if c.is_zero() {
            return None;
        }
        Some(ScalarExpr::from_parts(Poly::constant(c.recip()), arg.neg()))
    }

    /// Tree form of the normal form; normalizing it gives `self` back.
    pub fn to_expr(&self) -> Expr {
        let mut summands = Vec::new();
        for (arg, p) in &self.terms {
            for (m, c) in p.terms() {
                let mut factors = vec![Expr::Const(c.clone())];
                for (v, e) in m.powers() {
                    factors.push(Expr::Pow(Box::new(Expr::Var(v.to_string())), e));
                }
                if !arg.is_zero() {
                    factors.push(Expr::Exp(Box::new(ScalarExpr::from_poly(arg.clone()).to_expr())));
                }
                summands.push(Expr::Mul(factors));
            }
        }
        Expr::Add(summands)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (arg, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if arg.is_zero() {
                if self.terms.len() > 1 {
                    write!(f, "({p})")?;
                } else {
                    write!(f, "{p}")?;
                }
            } else if p.as_constant().is_some_and(|c| c.is_one()) {
                write!(f, "exp({arg})")?;
            } else {
                write!(f, "({p})*exp({arg})")?;
            }
        }
        Ok(())
    }
}

impl From<Poly> for ScalarExpr {
    fn from(p: Poly) -> Self {
        ScalarExpr::from_poly(p)
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(r: Rational) -> Self {
        ScalarExpr::constant(r)
    }
}

impl Add<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (a, p) in &rhs.terms {
            out.add_term(a.clone(), p.clone());
        }
        out
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.scale(&-Rational::one())
    }
}

impl Sub<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl Mul<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (a1, p1) in &self.terms {
            for (a2, p2) in &rhs.terms {
                out.add_term(a1.add(a2), p1.mul(p2));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr { (&self).$m(&rhs) }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: &ScalarExpr) -> ScalarExpr { (&self).$m(rhs) }
        }
        impl $tr<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl std::iter::Sum for ScalarExpr {
    fn sum<I: Iterator<Item = ScalarExpr>>(iter: I) -> Self {
        iter.fold(ScalarExpr::zero(), |a, b| a + b)
    }
}

/// Builds a point map from `(name, value)` pairs.
pub fn point<'a>(pairs: impl IntoIterator<Item = (&'a str, Rational)>) -> BTreeMap<String, Rational> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
