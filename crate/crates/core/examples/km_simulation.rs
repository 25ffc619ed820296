//! Monte Carlo run of the modulo-sum source coding scheme over Z_4 at a few
//! blocklengths, with rates placed inside the achievable region.
//!
//! Usage: `cargo run --release --example km_simulation [trials] [eps] [eps_dec] [eps_index]`

use quasigroup::mcsim::{km_dimensions, simulate_km, KmSim, SimConfig};
use quasigroup::prob::Pmf;
use quasigroup::regions::presets::{aux_with_one, km_source};

fn main() -> quasigroup::Result<()> {
    let arg = |i: usize| std::env::args().nth(i);
    let trials = arg(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let eps: f64 = arg(2).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let eps_dec = Some(arg(3).and_then(|s| s.parse().ok()).unwrap_or(0.3));
    let eps_index = Some(arg(4).and_then(|s| s.parse().ok()).unwrap_or(0.2));
    let source = km_source(0.6)?;
    let w = aux_with_one(0.05)?;
    println!("n,k,l,structural,e1,e2,ed,success,ed_given_encoded,lower,upper,truth_outside");
    for n in [8, 12, 16] {
        let (k, l) = km_dimensions(&source, &w, n, 0.15)?;
        let cfg = KmSim {
            source: source.clone(),
            w: w.clone(),
            v_law: Pmf::new(vec![0.5, 0.5, 0.0, 0.0])?,
            sim: SimConfig {
                n,
                k,
                l,
                eps,
                eps_dec,
                eps_index,
                trials,
                seed: 7,
            },
        };
        let r = simulate_km(&cfg)?;
        println!(
            "{n},{k},{},{},{},{},{},{},{:.4},{:.4},{:.4},{}",
            l[0],
            r.structural,
            r.e1,
            r.e2,
            r.ed,
            r.success,
            r.ed_given_encoded.estimate,
            r.ed_given_encoded.lower,
            r.ed_given_encoded.upper,
            r.detail.truth_outside
        );
    }
    Ok(())
}
