//! Exponential distortion of <a> in BS(1,2).

use grpact::analysis::distortion::distortion_profile;
use grpact::group::{Group, SubgroupEmbedding};
use grpact::metric::SubgroupMetric;

fn main() -> grpact::Result<()> {
    let g = Group::baumslag_solitar(2)?;
    let h = SubgroupEmbedding::base_translations(&g)?;
    let p = distortion_profile(&h, &g.generator_elements(), &SubgroupMetric::word(), 11, 1_000_000)?;
    println!("{:>3} {:>6}  witness", "r", "d_H");
    for row in &p.rows {
        println!("{:>3} {:>6}  {}", row.r, row.value, row.witness);
    }
    println!("growth: {:?}", p.growth_class);
    Ok(())
}
