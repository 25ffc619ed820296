//! Ready-made configurations over Z_4 used by the examples and table
//! reproductions.

use crate::error::Result;
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::zring::Modulus;

use super::{AuxPair, Mac, MacStates, SourcePair};

pub fn z4() -> Modulus {
    Modulus::new(2, 2).expect("4 = 2^2")
}

/// `P_N = (0.1 d, 0.9 d, 0.1 (1 - d), 0.9 (1 - d))`.
pub fn noise_law(delta: f64) -> Result<Pmf> {
    Pmf::new(vec![
        0.1 * delta,
        0.9 * delta,
        0.1 * (1.0 - delta),
        0.9 * (1.0 - delta),
    ])
}

/// `X_1` uniform, `X_2 = N - X_1`, so that `X_1 + X_2 = N`.
pub fn km_source(delta: f64) -> Result<SourcePair> {
    let n = noise_law(delta)?;
    let mut probs = vec![0.0; 16];
    for x1 in 0..4 {
        for z in 0..4 {
            probs[x1 * 4 + (z + 4 - x1) % 4] += 0.25 * n.get(z);
        }
    }
    SourcePair::new(z4(), JointPmf::new(&[("x1", 4), ("x2", 4)], probs)?)
}

/// Symmetric auxiliaries over Z_4 with mass `p` on 1 and `1 - p` on 0.
pub fn aux_with_one(p: f64) -> Result<AuxPair> {
    AuxPair::symmetric(z4(), Pmf::new(vec![1.0 - p, p, 0.0, 0.0])?)
}

/// `Y = X_1 + X_2 + N` over Z_4.
pub fn adder_mac(noise: &Pmf) -> Result<Mac> {
    let rows = (0..16).map(|k| noise.shift((k / 4 + k % 4) % 4)).collect();
    Mac::new(z4(), CondPmf::new(vec![4, 4], rows)?)
}

/// `Y = X_1 + S_1 + X_2 + S_2` over Z_4 with uniform states, costs that
/// confine `X_1` to {0, 2} and `X_2` to {0, 1} at zero budget, `Z_1` uniform on
/// `{-s, 2 - s}`, `Z_2` uniform on `{s, s + 1}`, `X_i = Z_i - S_i`, and
/// auxiliaries uniform on {0, 1}.
pub fn mac_states_example() -> Result<MacStates> {
    let md = z4();
    let channel = CondPmf::deterministic(vec![4, 4, 4, 4], 4, |a| (a[0] + a[1] + a[2] + a[3]) % 4)?;
    let half = |a: usize, b: usize| {
        let mut p = vec![0.0; 4];
        p[a % 4] += 0.5;
        p[b % 4] += 0.5;
        Pmf::new(p)
    };
    let z1 = (0..4)
        .map(|s| half(4 - s, 6 - s))
        .collect::<Result<Vec<_>>>()?;
    let z2 = (0..4).map(|s| half(s, s + 1)).collect::<Result<Vec<_>>>()?;
    let x = (0..4)
        .map(|z| (0..4).map(|s| Pmf::point(4, (z + 4 - s) % 4)).collect())
        .collect::<Vec<Vec<Pmf>>>();
    let cost = |bad: [usize; 2]| -> Vec<Vec<f64>> {
        (0..4)
            .map(|x| vec![if bad.contains(&x) { 1.0 } else { 0.0 }; 4])
            .collect()
    };
    let cfg = MacStates {
        modulus: md,
        states: [Pmf::uniform(4), Pmf::uniform(4)],
        channel,
        costs: [cost([1, 3]), cost([2, 3])],
        caps: [0.0, 0.0],
        v: AuxPair::symmetric(md, Pmf::new(vec![0.5, 0.5, 0.0, 0.0])?)?,
        z_laws: [vec![z1], vec![z2]],
        x_laws: [vec![x.clone()], vec![x]],
    };
    Ok(cfg)
}
