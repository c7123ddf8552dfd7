//! Runs a builtin scenario through the library and prints its checks.
//!
//! `cargo run --example scenario -- vfree-collapse`

use grpact::scenario::{builtin, builtin_names, run, RunOptions};

fn main() -> grpact::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "horoball-shape".into());
    if !builtin_names().contains(&name.as_str()) {
        eprintln!("builtins: {}", builtin_names().join(", "));
    }
    let report = run(&builtin(&name)?, &RunOptions::default())?;
    print!("{}", report.summary());
    println!("passed: {}", report.passed);
    Ok(())
}
