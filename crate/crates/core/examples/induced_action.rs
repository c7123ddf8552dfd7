//! Builds the induced-action space for <a> <= F(a,b) acting on a line and
//! checks the cocycle identity, the action law and freeness.

use grpact::action::{GraphAction, Vertex};
use grpact::group::{Ball, Group, SubgroupEmbedding, Transversal};
use grpact::induced::{action_law_violations, check_freeness, cocycle_violations, InducedSpace};

fn main() -> grpact::Result<()> {
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0])?;
    let line = GraphAction::line(h.subgroup(), &[1])?;
    let space = InducedSpace::new(
        &g,
        vec![g.element("b")?],
        vec![Transversal::canonical(h)],
        vec![Vertex::Int(0)],
        vec![line],
    )?;
    let ball = space.build_ball(3, 1_000_000)?;
    println!("{:?} gluing, {} vertices within 3", space.mode(), ball.len());

    let elems = Ball::enumerate(&g, &g.generator_elements(), 2, 10_000)?;
    let bad = cocycle_violations(&space, 0, elems.elements())?;
    println!("cocycle violations: {}", bad.len());
    let bad = action_law_violations(&space, elems.elements(), ball.vertices())?;
    println!("action law violations: {}", bad.len());
    let free = check_freeness(&space, &ball, elems.elements())?;
    println!("free: {} ({} checks)", free.free, free.checked);

    if std::env::args().any(|a| a == "--dot") {
        print!("{}", space.build_ball(2, 10_000)?.to_dot("induced"));
    }
    Ok(())
}
