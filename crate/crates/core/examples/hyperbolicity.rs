//! Thin-triangle constants of a free-group ball and of cycles.

use grpact::graph::Graph;
use grpact::group::{Ball, Group};
use grpact::hyperbolicity::{delta_thin, DeltaMode};

fn main() -> grpact::Result<()> {
    let f2 = Group::free(2);
    let gens = f2.generator_elements();
    let ball = Ball::enumerate(&f2, &gens, 6, 1_000_000)?;
    let r = delta_thin(&ball.cayley_graph(&f2, &gens), DeltaMode::Exhaustive)?;
    println!("free(2) radius 6: delta = {} ({})", r.delta, r.notion);
    for n in [6, 12, 24] {
        let r = delta_thin(&Graph::cycle(n), DeltaMode::Exhaustive)?;
        println!("C{n}: delta = {} witness {:?}", r.delta, r.witness);
    }
    let r = delta_thin(&Graph::cycle(60), DeltaMode::Sampled { count: 5000, seed: 1 })?;
    println!("C60 sampled: delta >= {}", r.delta);
    Ok(())
}
