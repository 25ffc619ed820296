//! Sum-rate of the Z_4 MAC with encoder states, and the numerical outer
//! bound on what unstructured codes achieve there.

use quasigroup::regions::presets::mac_states_example;
use quasigroup::regions::{gp_example_outer_check, mac_states_sum_rate};

fn main() -> quasigroup::Result<()> {
    let cfg = mac_states_example()?;
    let r = mac_states_sum_rate(&cfg)?;
    println!(
        "nested quasi group codes: {:.4} ({:?})",
        r.rates[0], r.status
    );
    for t in &r.trace {
        println!("  {:<20} {:.4}", t.label, t.value);
    }
    let step = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.02);
    let gp = gp_example_outer_check(step);
    println!(
        "unstructured outer bound at step {}: max {:.4}, below one: {}",
        gp.step, gp.max, gp.below_one
    );
    println!("  witness {:?}", gp.witness);
    Ok(())
}
