//! Polynomial de Rham cohomology of wedges, truncated by degree, with
//! explicit primitives from the Koszul homotopy.

use diffeo_glue::cohomology::{cocycle_basis, cohomology_dims, koszul_primitive, verify_splitting};
use diffeo_glue::forms::exterior_derivative;
use diffeo_glue::space::GluedSpace;

fn main() -> diffeo_glue::Result<()> {
    let s = GluedSpace::wedge_of_planes();
    for k in 0..=2 {
        let e = cohomology_dims(&s, k, 4)?;
        println!(
            "k = {k}: forms {}, cocycles {}, coboundaries {}, cohomology {}",
            e.dim_forms, e.dim_cocycles, e.dim_coboundaries, e.dim_cohomology
        );
        let split = verify_splitting(&s, k, 4)?;
        println!("  per piece {:?}, sum {}, agree {}", split.per_piece, split.piece_sum, split.agree);
    }
    let cocycles = cocycle_basis(&s, 1, 2)?;
    if let Some(w) = cocycles.iter().find(|w| !w.is_zero()) {
        let p = koszul_primitive(w, &s)?.expect("closed forms are exact");
        println!("closed 1-form {:?}", w.render());
        println!("primitive     {:?}", p.render());
        println!("d primitive - form is zero: {}", exterior_derivative(&p).sub(w)?.is_zero());
    }
    Ok(())
}
