//! Clifford multiplication by a covector, including a degenerate pairing.

use diffeo_glue::clifford::{clifford_action, clifford_mul, CliffordElement, FibreBilinearForm};
use diffeo_glue::exterior::ExtElement;
use diffeo_glue::scalar_expr::ScalarExpr;

fn main() -> diffeo_glue::Result<()> {
    let names: Vec<String> = ["e1", "e2", "e3"].iter().map(|s| s.to_string()).collect();
    let g = FibreBilinearForm::identity(3);
    let e1 = ExtElement::generator(3, 0);
    let e2 = ExtElement::generator(3, 1);
    let w = e1.wedge(&e2)?;
    println!("c(e1) e2       = {}", clifford_action(&e1, &e2, &g)?.render(&names));
    println!("c(e1) e1       = {}", clifford_action(&e1, &e1, &g)?.render(&names));
    println!("c(e1) (e1^e2)  = {}", clifford_action(&e1, &w, &g)?.render(&names));

    // rank-one pairing: e3 is null
    let degenerate = FibreBilinearForm::diagonal(vec![ScalarExpr::int(2), ScalarExpr::int(1), ScalarExpr::zero()]);
    let e3 = ExtElement::generator(3, 2);
    let twice = clifford_action(&e3, &clifford_action(&e3, &w, &degenerate)?, &degenerate)?;
    println!("c(e3)^2 (e1^e2) with g(e3, e3) = 0: {}", twice.render(&names));

    let a = CliffordElement::generator(3, 0);
    let b = CliffordElement::generator(3, 1);
    let ab = clifford_mul(&a, &b, &degenerate)?;
    let ba = clifford_mul(&b, &a, &degenerate)?;
    println!("e1 e2 + e2 e1 = {}", ab.as_exterior().add(ba.as_exterior())?.render(&names));
    println!("e1 e1         = {}", clifford_mul(&a, &a, &degenerate)?.as_exterior().render(&names));
    Ok(())
}
