//! Changing the transversal or the subgroup action gives equivalent induced
//! actions; the maps between them are measured as quasi-isometries.

use grpact::action::{GraphAction, Vertex};
use grpact::group::{Group, SubgroupEmbedding, Transversal};
use grpact::induced::{equivalence_report, Equivalence, InducedSpace, VertexMap};

fn main() -> grpact::Result<()> {
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0])?;
    let x = vec![g.element("b")?];
    let build = |t: Transversal, shift: i64| {
        let line = GraphAction::line(h.subgroup(), &[shift])?;
        InducedSpace::new(&g, x.clone(), vec![t], vec![Vertex::Int(0)], vec![line])
    };
    let canonical = Transversal::canonical(h.clone());
    let src = build(canonical.clone(), 1)?;

    let b = g.element("b")?;
    let moved = build(canonical.clone().with_choice(&b, g.element("b a")?), 1)?;
    let q = equivalence_report(&src, &moved, &Equivalence::Transversal, 3, 5, 1, 1_000_000)?;
    println!("transversal change: C = {}, defect = {}", q.mult_constant, q.equivariance_defect);

    let doubled = build(canonical, 2)?;
    let rho = Equivalence::Action(vec![VertexMap::Affine { mul: 2, add: 0 }]);
    let q = equivalence_report(&src, &doubled, &rho, 4, 8, 1, 1_000_000)?;
    println!("doubled line: C = {}, A = {}, defect = {}", q.mult_constant, q.additive_constant, q.equivariance_defect);
    Ok(())
}
