//! F(a,b) x| Z/2 with X = {t}: the line action a -> +1, b -> 0 of F(a,b)
//! does not extend, because its orbit collapses in the induced space.

use grpact::action::{GraphAction, Vertex};
use grpact::group::{Group, SubgroupEmbedding, Transversal};
use grpact::induced::{extension_series, InducedSpace};

fn main() -> grpact::Result<()> {
    let g = Group::f2_semidirect_z2();
    let h = SubgroupEmbedding::unflipped(&g)?;
    let line = GraphAction::line(h.subgroup(), &[1, 0])?;
    let space = InducedSpace::new(
        &g,
        vec![g.element("t")?],
        vec![Transversal::canonical(h)],
        vec![Vertex::Int(0)],
        vec![line],
    )?
    .with_stabilizer_sample(1, 20)?;
    let id = g.identity();
    let origin = space.pair(0, &id, Vertex::Int(0))?;
    for n in [1, 5, 20] {
        let p = space.pair(0, &id, Vertex::Int(n))?;
        let d = space.search_distance(&p, &origin, 4, 1_000_000)?;
        println!("d_S((H,{n}), (H,0)) <= {d:?}   d_R = {n}");
    }
    let ball = space.build_ball(3, 1_000_000)?;
    let s = extension_series(&space, 0, &[5, 10, 20], &ball, 4.0, 100_000)?;
    for (r, q) in &s.rows {
        println!("R = {r:>2}: C = {}", q.mult_constant);
    }
    println!("verdict: {:?}", s.verdict);
    Ok(())
}
