//! Three situations where naive fibrewise constructions break down.

use diffeo_glue::counterexamples::{star_degree, vanishing_differential, wedge_kernel};
use diffeo_glue::space::GluedSpace;

fn main() -> diffeo_glue::Result<()> {
    let v = vanishing_differential()?;
    println!(
        "{} vanishes at {}: {}; {} vanishes there: {}",
        v.function, v.point, v.function_vanishes, v.differential, v.differential_vanishes
    );

    let s = GluedSpace::wedge_of_planes();
    let k = wedge_kernel(&s, "w0")?;
    println!(
        "{} maps to zero: {} (dimensions {}, {}, {}; rank {})",
        k.element, k.image_is_zero, k.lambda1_dim, k.exterior_square_dim, k.lambda2_dim, k.map_rank
    );

    let st = star_degree(&s, "w0")?;
    println!(
        "star of {} = {} has grade {}, a grade-{} result would be needed",
        st.input_as_sums, st.star, st.star_grade, st.expected_grade
    );
    Ok(())
}
