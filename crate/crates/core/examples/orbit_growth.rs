//! d(b, g b) <= M |g| for a few actions.

use grpact::action::GraphAction;
use grpact::analysis::orbit::orbit_growth_check;
use grpact::group::Group;

fn main() -> grpact::Result<()> {
    let f2 = Group::free(2);
    let gens = f2.generator_elements();
    for action in [
        GraphAction::cayley(&f2),
        GraphAction::line(&f2, &[1, 0])?,
        GraphAction::line(&f2, &[3, -2])?,
        GraphAction::point(&f2),
    ] {
        let r = orbit_growth_check(&action, &gens, &action.default_base(), 4, 1_000_000)?;
        println!("{}: M = {}, {} checked, passed {}", action.describe(), r.m, r.checked, r.passed());
    }
    Ok(())
}
