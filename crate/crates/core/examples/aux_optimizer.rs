//! Grid search over symmetric auxiliary laws for the Z_4 distributed source,
//! compared with the fixed law `P(W=1) = 0.05`.

use quasigroup::regions::presets::{aux_with_one, km_source};
use quasigroup::regions::{km_baselines, km_qgc_rate, optimize_km_aux, GridSpec};

fn main() -> quasigroup::Result<()> {
    let src = km_source(0.6)?;
    let fixed = km_qgc_rate(&src, &aux_with_one(0.05)?)?;
    let b = km_baselines(&src)?;
    println!(
        "group codes {:.4}, fixed aux law {:.4}",
        b.group,
        fixed.sum()
    );
    for step in [0.1, 0.05] {
        let grid = GridSpec { step, depth: 4 };
        let (aux, rate, opt) = optimize_km_aux(&src, &grid)?;
        println!(
            "step {step}: sum-rate {:.4} at P_W = {:.3?} ({} evaluations, final step {:.5})",
            rate.sum(),
            aux.laws(0)[0].probs(),
            opt.evaluations,
            opt.final_step
        );
    }
    Ok(())
}
