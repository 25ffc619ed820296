//! Monte Carlo run of sum computation over the noiseless and the noisy Z_4
//! adder MAC with nested group codes. The noisy case runs well above the
//! computation rate of that channel and shows the failure mode.
//!
//! Usage: `cargo run --release --example comp_mac_simulation [trials]`

use quasigroup::mcsim::{simulate_comp_mac, CompMacSim, SimConfig};
use quasigroup::prob::Pmf;
use quasigroup::regions::presets::{adder_mac, noise_law, z4};
use quasigroup::regions::AuxPair;

fn main() -> quasigroup::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let cases = [
        ("noiseless", Pmf::point(4, 0), 16.0),
        ("noisy d=0.6 above rate", noise_law(0.6)?, 4.0),
    ];
    println!("channel,trials,success,ed,no_candidate,multiple,wrong_unique,error,lower,upper");
    for (name, noise, eps_dec) in cases {
        let cfg = CompMacSim {
            mac: adder_mac(&noise)?,
            inputs: [Pmf::uniform(4), Pmf::uniform(4)],
            w: AuxPair::uniform(z4()),
            v: AuxPair::uniform(z4()),
            sim: SimConfig {
                n: 6,
                k: 3,
                l: [1, 1],
                eps: 4.0,
                eps_dec: Some(eps_dec),
                eps_index: None,
                trials,
                seed: 3,
            },
        };
        let r = simulate_comp_mac(&cfg)?;
        println!(
            "{name},{},{},{},{},{},{},{:.4},{:.4},{:.4}",
            r.trials,
            r.success,
            r.ed,
            r.detail.no_candidate,
            r.detail.multiple,
            r.detail.wrong_unique,
            r.error.estimate,
            r.error.lower,
            r.error.upper
        );
    }
    Ok(())
}
