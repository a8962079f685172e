//! Wedge products, interior products and the basis-complement star on a
//! fibre.

use diffeo_glue::exterior::{binomial, hodge_star_fibre, ExtElement, MultiIndex};
use diffeo_glue::scalar_expr::ScalarExpr;

fn main() -> diffeo_glue::Result<()> {
    let names: Vec<String> = ["dx", "dy", "dz"].iter().map(|s| s.to_string()).collect();
    let dx = ExtElement::generator(3, 0);
    let dy = ExtElement::generator(3, 1);
    let dz = ExtElement::generator(3, 2);

    let a = dx.scale(&ScalarExpr::parse("y")?).add(&dz)?;
    let b = dy.wedge(&dz)?.scale(&ScalarExpr::parse("exp(x)")?);
    println!("a       = {}", a.render(&names));
    println!("b       = {}", b.render(&names));
    println!("a ^ b   = {}", a.wedge(&b)?.render(&names));
    println!("a ^ a   = {}", a.wedge(&a)?.render(&names));

    let v = vec![ScalarExpr::one(), ScalarExpr::int(2), ScalarExpr::zero()];
    println!("i_v (a ^ b) = {}", a.wedge(&b)?.interior(&v)?.render(&names));

    let order = [0, 1, 2];
    for k in 0..=3 {
        for idx in MultiIndex::all(3, k) {
            let e = ExtElement::basis(3, idx);
            println!("*({}) = {}", e.render(&names), hodge_star_fibre(&e, &order)?.render(&names));
        }
    }
    println!("dim Lambda^2 of R^3 = {}", binomial(3, 2));
    Ok(())
}
