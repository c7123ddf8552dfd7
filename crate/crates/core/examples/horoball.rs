//! Combinatorial horoball over a 16-cycle: geodesic shape and depth bound.

use grpact::graph::Graph;
use grpact::horoball::{default_depth, HoroballGraph};

fn main() -> grpact::Result<()> {
    let base = Graph::cycle(16);
    let depth = default_depth(&base)?;
    let hb = HoroballGraph::build(&base, &[], depth)?;
    for v in [1, 4, 8] {
        println!("d((0,0), ({v},0)) = {}", hb.distance((0, 0), (v, 0))?.value);
    }
    let shape = hb.geodesic_shape_check();
    println!("{:?}: {}/{} pairs", shape.verdict, shape.passing, shape.pairs);
    if let Some(w) = shape.highest {
        println!("highest climb: {} -- {} via {:?}", w.u, w.v, w.shape);
    }
    println!("depth-0 bound violations: {}", hb.depth0_bound_check().violations.len());
    Ok(())
}
