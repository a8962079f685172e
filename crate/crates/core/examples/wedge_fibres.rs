//! Fibres of the form bundles at ordinary points and at wedge points, and
//! the map from exterior powers of the 1-form fibre.

use diffeo_glue::exterior::binomial;
use diffeo_glue::forms::{fibre_basis, wedge_1k_rank};
use diffeo_glue::space::{GluedSpace, SpacePoint};

fn main() -> diffeo_glue::Result<()> {
    let planes = GluedSpace::wedge_of_planes();
    let wedge = SpacePoint::Wedge("w0".into());
    let ordinary = SpacePoint::parse("X1:1,2")?;
    println!("wedge of two planes, dimension {}", planes.dimension());
    for k in 0..=3 {
        let at_wedge = fibre_basis(&planes, &wedge, k)?;
        let at_point = fibre_basis(&planes, &ordinary, k)?;
        let labels: Vec<String> = at_wedge.labels.iter().map(|l| l.render(&planes)).collect();
        println!("k = {k}: {} at X1:1,2, {} at w0 {:?}", at_point.dim(), at_wedge.dim(), labels);
    }
    let n1 = fibre_basis(&planes, &wedge, 1)?.dim();
    for k in 1..=3 {
        println!(
            "wedge^{k} of the 1-form fibre: dimension {}, rank of the map to Lambda^{k}: {}",
            binomial(n1, k),
            wedge_1k_rank(&planes, &wedge, k)?
        );
    }
    for m in 2..=5 {
        let lines = GluedSpace::wedge_of_lines(m)?;
        println!("{m} lines: 1-form fibre at w0 has dimension {}", fibre_basis(&lines, &wedge, 1)?.dim());
    }
    Ok(())
}
