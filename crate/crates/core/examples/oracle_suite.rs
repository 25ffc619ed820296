//! Runs the default instance suite of every lemma check and prints a summary.
//!
//! Usage: `cargo run --release --example oracle_suite [lemma-id]`

use quasigroup::oracle::{default_suite, LEMMA_IDS};

fn main() -> quasigroup::Result<()> {
    let only = std::env::args().nth(1);
    for id in LEMMA_IDS
        .iter()
        .filter(|id| only.as_deref().is_none_or(|o| o == **id))
    {
        for v in default_suite(id)? {
            let status = if v.pass { "PASS" } else { "FAIL" };
            println!(
                "{status} {} [{}] checked={}",
                v.lemma, v.instance, v.checked
            );
            for (name, value) in &v.metrics {
                println!("    {name} = {value:.6}");
            }
            if let Some(w) = &v.witness {
                println!("    witness: {w}");
            }
        }
    }
    Ok(())
}
