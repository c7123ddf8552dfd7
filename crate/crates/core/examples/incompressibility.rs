//! Z^2 x| Z/2 with the diagonal subgroup: the ratio d_H / d_{C,X} stays
//! below M D + 1.

use grpact::analysis::incompressibility::{backward_bound, incompressibility_report};
use grpact::group::{Group, SubgroupEmbedding};
use grpact::metric::{InducedSetup, SubgroupMetric};

fn main() -> grpact::Result<()> {
    let g = Group::abelian_inversion(2);
    let diagonal = SubgroupEmbedding::lattice(&g, vec![vec![1, 1]])?;
    let z2 = SubgroupEmbedding::lattice(&g, vec![vec![1, 0], vec![0, 1]])?;
    let setup = InducedSetup::new(&g, g.generator_elements(), vec![diagonal], vec![SubgroupMetric::scaled(3)])?;
    for r in 3..=5 {
        let b = backward_bound(&setup, &z2, r, 1_000_000)?;
        println!(
            "R = {r}: ratio {} <= M D + 1 = {} * {} + 1 = {}",
            b.ratio.max_ratio, b.m, b.d, b.bound
        );
    }
    let rep = incompressibility_report(&setup, &[3, 4, 5], 4.0, 1_000_000)?;
    println!("trend: {:?}", rep.verdicts);
    Ok(())
}
