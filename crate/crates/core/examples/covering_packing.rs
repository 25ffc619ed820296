//! Empirical covering and packing failure rates of random quasi group codes
//! on either side of the rate thresholds.

use quasigroup::mcsim::{
    empirical_covering, empirical_packing, CoveringConfig, PackingConfig, ProbeReport,
};
use quasigroup::prob::{CondPmf, JointPmf, Pmf};
use quasigroup::regions::presets::z4;
use quasigroup::typical::IndexSetSpec;

fn shift_channel() -> quasigroup::Result<CondPmf> {
    let rows = (0..4)
        .map(|a| {
            let mut p = vec![0.0; 4];
            p[a] = 0.5;
            p[(a + 1) % 4] = 0.5;
            Pmf::new(p)
        })
        .collect::<quasigroup::Result<Vec<_>>>()?;
    CondPmf::new(vec![4], rows)
}

fn show(kind: &str, k: usize, n: usize, r: &ProbeReport) {
    println!(
        "{kind:<8} k={k:<2} n={n:<2} rate {:.3} bound {:.3} margin {:+.3}  failures {:.3} [{:.3}, {:.3}]",
        r.code_rate, r.bound, r.margin, r.failures.estimate, r.failures.lower, r.failures.upper
    );
}

fn main() -> quasigroup::Result<()> {
    let joint =
        JointPmf::from_pmf("x", &Pmf::uniform(4)).with_kernel("xhat", &["x"], &shift_channel()?)?;
    for k in [5, 6, 8] {
        let r = empirical_covering(&CoveringConfig {
            modulus: z4(),
            joint: joint.clone(),
            index: IndexSetSpec::full(z4(), k)?,
            n: 12,
            eps: 2.0,
            trials: 200,
            seed: 1,
        })?;
        show("covering", k, 12, &r);
    }
    for k in [2, 4, 8] {
        let r = empirical_packing(&PackingConfig {
            modulus: z4(),
            input: Pmf::uniform(4),
            channel: shift_channel()?,
            index: IndexSetSpec::full(z4(), k)?,
            n: 12,
            eps: 2.0,
            trials: 200,
            seed: 2,
        })?;
        show("packing", k, 12, &r);
    }
    Ok(())
}
