//! Z x Z/2 retracts onto Z; the line action of Z extends along the retraction.

use grpact::action::GraphAction;
use grpact::analysis::retract::retract_extension;
use grpact::group::{Group, Side, SubgroupEmbedding};

fn main() -> grpact::Result<()> {
    let g = Group::direct_product(Group::free(1), Group::cyclic(2));
    let z = SubgroupEmbedding::factor(&g, Side::Left)?;
    let sub = z.subgroup();
    let line = GraphAction::line(sub, &[1])?;
    let images = vec![sub.element("a")?, sub.element("a^-1")?, sub.identity()];
    let ext = retract_extension(&z, &line, &line.default_base(), images, 3, 100_000)?;
    println!("{}", serde_json::to_string_pretty(&ext.to_json()).expect("json"));
    Ok(())
}
