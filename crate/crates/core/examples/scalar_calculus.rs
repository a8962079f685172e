//! Exact arithmetic and calculus in the coefficient ring of polynomials and
//! polynomial multiples of exponentials of polynomials.

use diffeo_glue::scalar_expr::{point, rational, ScalarExpr, Value};

fn show(v: Value) -> String {
    match v {
        Value::Exact(r) => format!("{r} (exact)"),
        Value::Approx(x) => format!("{x} (double precision)"),
    }
}

fn main() -> diffeo_glue::Result<()> {
    let f = ScalarExpr::parse("x^2*y + 3*exp(x*y)")?;
    let g = ScalarExpr::parse("(1 + x)*exp(-x*y)")?;
    println!("f        = {f}");
    println!("g        = {g}");
    println!("f * g    = {}", &f * &g);
    println!("df/dx    = {}", f.differentiate("x"));
    println!("d2f/dxdy = {}", f.differentiate("x").differentiate("y"));

    let at = point([("x", rational(1)), ("y", rational(0))]);
    println!("f(1, 0)  = {}", show(f.evaluate(&at)?));
    println!("x^2*y at (1, 0) = {}", show(ScalarExpr::parse("x^2*y")?.evaluate(&at)?));

    // exp(p) is a unit of the ring, polynomials other than constants are not
    let e = ScalarExpr::parse("2*exp(x)")?;
    println!("1 / {e} = {}", e.unit_inverse().expect("unit"));
    println!("1 + x invertible: {}", ScalarExpr::parse("1 + x")?.unit_inverse().is_some());

    // exp of a non-polynomial is rejected
    match ScalarExpr::parse("exp(exp(x))") {
        Ok(v) => println!("unexpected: {v}"),
        Err(err) => println!("exp(exp(x)): {err}"),
    }
    Ok(())
}
