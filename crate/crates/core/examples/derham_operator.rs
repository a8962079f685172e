//! The de Rham operator on sections of the exterior algebra bundle of a
//! wedge, with per-piece results and the value at the wedge point.

use diffeo_glue::derham::{compare_with_oracle, derham_apply, derham_report, flat_structure, GluedSection};
use diffeo_glue::metric::GluedConnection;
use diffeo_glue::space::GluedSpace;

fn main() -> diffeo_glue::Result<()> {
    let s = GluedSpace::wedge_of_planes();
    let sec = GluedSection::parse(
        &s,
        &[
            ("X1", vec![("1", "x1^2*y1"), ("dx1^dy1", "x1")]),
            ("X2", vec![("dx2", "x2"), ("dy2", "x2*y2")]),
        ],
    )?;
    let (g, conn) = flat_structure(&s)?;
    let d = derham_apply(&sec, &g, &conn)?;
    for (piece, text) in d.render() {
        println!("D s on {piece}: {text}");
    }
    println!("flat D equals d + d*: {}", compare_with_oracle(&sec, &s)?.is_zero());

    let levi = GluedConnection::levi_civita(&s, &g)?;
    let report = derham_report(&sec, &s, &g, &levi)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}
