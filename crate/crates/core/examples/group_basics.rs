//! Normal forms, word balls and coset transversals.

use grpact::group::{Ball, Group, SubgroupEmbedding, Transversal};

fn main() -> grpact::Result<()> {
    let g = Group::f2_semidirect_z2();
    let w = g.element("t a b t")?;
    println!("t a b t = {w}");
    println!("inverse = {}", g.inverse(&w));

    let ball = Ball::enumerate(&g, &g.generator_elements(), 3, 100_000)?;
    for r in 0..=3 {
        println!("|B({r})| = {}", ball.within(r).count());
    }

    let h = SubgroupEmbedding::unflipped(&g)?;
    let tr = Transversal::canonical(h.clone());
    for e in ["a", "t", "t a^2", "b t"] {
        let e = g.element(e)?;
        println!("{e} lies in the coset of {}", tr.rep(&e));
    }
    Ok(())
}
