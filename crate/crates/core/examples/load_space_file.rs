//! Loading a space description and running the checks the command line
//! tool offers.

use std::path::PathBuf;

use diffeo_glue::derham::derham_apply;
use diffeo_glue::forms::exterior_derivative;
use diffeo_glue::metric::GluedConnection;
use diffeo_glue::spacefile::parse_space;

fn main() -> diffeo_glue::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join("wedge2planes.toml");
    let desc = parse_space(&path)?;
    let s = &desc.space;
    println!("pieces: {:?}", s.pieces().iter().map(|p| &p.id).collect::<Vec<_>>());
    println!("dimension {}", s.dimension());

    let f = desc.form("f")?;
    println!("f  = {:?}", f.render());
    println!("df = {:?}", exterior_derivative(&f).render());

    let g = desc.induced_metric()?;
    let conn = GluedConnection::levi_civita(s, &g)?;
    let sec = desc.section("s")?;
    let d = derham_apply(&sec, &g, &conn)?;
    for (piece, text) in d.render() {
        println!("D s on {piece}: {text}");
    }
    Ok(())
}
