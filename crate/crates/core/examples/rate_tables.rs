//! Evaluates the Z_4 source and channel examples with every scheme.

use quasigroup::regions::presets::{adder_mac, aux_with_one, km_source, noise_law};
use quasigroup::regions::{
    comp_mac_baselines, comp_mac_corollary_rate, km_baselines, km_qgc_rate, GridSpec,
};

fn main() -> quasigroup::Result<()> {
    let src = km_source(0.6)?;
    let b = km_baselines(&src)?;
    let q = km_qgc_rate(&src, &aux_with_one(0.05)?)?;
    println!("distributed source, sum-rates");
    println!("  unstructured      {:.4}", b.unstructured);
    println!("  linear over Z_{}   {:.4}", b.field, b.linear);
    println!("  group             {:.4}", b.group);
    println!("  quasi group       {:.4}", q.sum());

    let mac = adder_mac(&noise_law(0.6)?)?;
    let b = comp_mac_baselines(&mac, &GridSpec::default())?;
    let q = comp_mac_corollary_rate(&mac, &aux_with_one(0.05)?)?;
    println!("computation over the adder MAC, symmetric rates");
    println!("  unstructured      {:.4}", b.unstructured);
    println!(
        "  linear over Z_{}   {:.4}  (grid step {})",
        b.field, b.linear, b.linear_grid_step
    );
    println!("  group             {:.4}", b.group);
    println!("  quasi group       {:.4}", q.rates[0]);
    for t in &q.trace {
        println!("    {:<28} {:.4}", t.label, t.value);
    }
    Ok(())
}
