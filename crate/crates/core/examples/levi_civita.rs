//! Christoffel symbols of a metric on 1-forms, and symbolic residuals of
//! metric compatibility and torsion.

use diffeo_glue::forms::PieceForm;
use diffeo_glue::metric::{
    christoffel, verify_metric_compatibility, verify_torsion_free, ChristoffelData, PieceCotangentMetric,
};
use diffeo_glue::space::GluedSpace;

fn main() -> diffeo_glue::Result<()> {
    let plane = GluedSpace::euclidean(2).pieces()[0].clone();
    let g = PieceCotangentMetric::parse(&plane, &[vec!["1", "0"], vec!["0", "exp(x*y)"]])?;
    let gamma = christoffel(&g)?;
    for c in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let v = gamma.get(c, a, b);
                if !v.is_zero() {
                    println!("Gamma^{c}_{a}{b} = {v}");
                }
            }
        }
    }
    let s = PieceForm::parse(&plane, 1, &[("dx", "x*y"), ("dy", "1 + x^2")])?;
    let t = PieceForm::parse(&plane, 1, &[("dx", "exp(y)"), ("dy", "x")])?;
    println!("compatibility residual zero: {}", verify_metric_compatibility(&g, &gamma, &s, &t)?.is_zero());
    println!("torsion residual zero:       {}", verify_torsion_free(&g, &gamma, &s, &t)?.is_zero());

    // the flat connection is not compatible with this metric
    let flat = ChristoffelData::zero(&plane);
    let r = verify_metric_compatibility(&g, &flat, &s, &t)?;
    println!("flat connection, compatibility residual zero: {}", r.is_zero());
    Ok(())
}
