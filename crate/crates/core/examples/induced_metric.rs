//! The induced metric d_{C,X} on F(a,b) with H = <a> under two subgroup metrics.

use grpact::group::{Group, SubgroupEmbedding};
use grpact::metric::{InducedSetup, SubgroupMetric};

fn main() -> grpact::Result<()> {
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0])?;
    let x = vec![g.element("b")?];
    for metric in [SubgroupMetric::word(), SubgroupMetric::scaled(3)] {
        let setup = InducedSetup::new(&g, x.clone(), vec![h.clone()], vec![metric.clone()])?;
        let ball = setup.induced_ball(4, 1_000_000)?;
        println!("{}: {} points within 4", metric.describe(), ball.len());
        for w in ["a", "a^3", "b a^2 b^-1", "a b a"] {
            let e = g.element(w)?;
            match ball.norm(&e) {
                Some(m) => println!("  d(1, {w}) = {}", m.value),
                None => println!("  d(1, {w}) > 4"),
            }
        }
    }
    Ok(())
}
