//! Deterministic grid search over products of probability simplices.
//!
//! A coarse lattice with spacing `step` is scanned exhaustively in
//! lexicographic order; the best lattice point is then refined by moving
//! mass between pairs of coordinates, halving the move size `depth` times.
//! Ties always go to the earliest point in scan order, so results do not
//! depend on thread scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::Pmf;

/// Upper limit on coarse lattice points.
pub const MAX_GRID_POINTS: f64 = 5e7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub step: f64,
    pub depth: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            step: 0.05,
            depth: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// True if `a` is strictly better than `b`; NaN is never better.
    fn better(self, a: f64, b: f64) -> bool {
        if a.is_nan() {
            return false;
        }
        if b.is_nan() {
            return true;
        }
        match self {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    pub value: f64,
    pub point: Vec<Pmf>,
    pub coarse_step: f64,
    pub final_step: f64,
    pub evaluations: usize,
}

/// Compositions of `units` into `parts` nonnegative parts, lexicographic.
pub(crate) fn compositions(units: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(units, parts, &mut Vec::new(), &mut out);
    out
}

/// Number of compositions of `units` into `parts` parts, as a float.
fn lattice_size(units: usize, parts: usize) -> f64 {
    (1..parts).fold(1.0, |acc, k| acc * (units + k) as f64 / k as f64)
}

fn to_pmfs(coords: &[Vec<f64>]) -> Vec<Pmf> {
    coords
        .iter()
        .map(|c| Pmf::new(c.clone()).expect("lattice points are distributions"))
        .collect()
}

/// Optimizes `f` over the product of simplices with the given sizes.
pub fn optimize(
    dims: &[usize],
    grid: &GridSpec,
    sense: Sense,
    f: impl Fn(&[Pmf]) -> f64 + Sync,
) -> Result<OptResult> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidSpec(
            "optimizer needs nonempty simplices".into(),
        ));
    }
    if !(grid.step > 0.0 && grid.step <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "grid step {} outside (0, 1]",
            grid.step
        )));
    }
    let units = (1.0 / grid.step).round() as usize;
    let step = 1.0 / units as f64;
    let total: f64 = dims.iter().map(|&d| lattice_size(units, d)).product();
    if total > MAX_GRID_POINTS {
        return Err(Error::guard(
            "optimizer grid points",
            total,
            MAX_GRID_POINTS,
        ));
    }
    let total = total as usize;
    let lattices: Vec<Vec<Vec<f64>>> = dims
        .iter()
        .map(|&d| {
            compositions(units, d)
                .into_iter()
                .map(|c| c.into_iter().map(|u| u as f64 * step).collect())
                .collect()
        })
        .collect();

    let point_at = |mut idx: usize| -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); lattices.len()];
        for (slot, lat) in out.iter_mut().zip(&lattices).rev() {
            *slot = lat[idx % lat.len()].clone();
            idx /= lat.len();
        }
        out
    };

    let (best_val, best_idx) = (0..total)
        .into_par_iter()
        .map(|idx| (f(&to_pmfs(&point_at(idx))), idx))
        .reduce(
            || (f64::NAN, usize::MAX),
            |a, b| {
                if sense.better(a.0, b.0) || (!sense.better(b.0, a.0) && a.1 < b.1) {
                    a
                } else {
                    b
                }
            },
        );

    let mut point = point_at(best_idx);
    let mut value = best_val;
    let mut evaluations = total;
    let mut delta = step;
    for _ in 0..grid.depth {
        delta /= 2.0;
        // Bounded number of sweeps; each accepted move strictly improves.
        for _ in 0..10_000 {
            let mut best_move: Option<(f64, Vec<Vec<f64>>)> = None;
            for i in 0..point.len() {
                for a in 0..point[i].len() {
                    if point[i][a] <= 0.0 {
                        continue;
                    }
                    let amount = delta.min(point[i][a]);
                    for b in 0..point[i].len() {
                        if a == b {
                            continue;
                        }
                        let mut cand = point.clone();
                        cand[i][a] -= amount;
                        cand[i][b] += amount;
                        let v = f(&to_pmfs(&cand));
                        evaluations += 1;
                        let incumbent = best_move.as_ref().map_or(value, |m| m.0);
                        if sense.better(v, incumbent) {
                            best_move = Some((v, cand));
                        }
                    }
                }
            }
            match best_move {
                Some((v, cand)) => {
                    value = v;
                    point = cand;
                }
                None => break,
            }
        }
    }
    Ok(OptResult {
        value,
        point: to_pmfs(&point),
        coarse_step: step,
        final_step: delta,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(20, 4).len(), 1771);
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn constant_objective_returns_first_point() {
        let r = optimize(&[3], &GridSpec::default(), Sense::Maximize, |_| 1.5).unwrap();
        assert_eq!(r.value, 1.5);
        assert_eq!(r.point[0].probs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn finds_entropy_maximum() {
        let r = optimize(&[4], &GridSpec::default(), Sense::Maximize, |p| {
            p[0].entropy()
        })
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = optimize(&[3], &GridSpec::default(), Sense::Maximize, |p| {
            p[0].entropy()
        })
        .unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-3);
    }

    #[test]
    fn refinement_beats_lattice() {
        // Optimum at x0 = 0.3127, off every coarse lattice point.
        let target = 0.3127;
        let f = |p: &[Pmf]| -(p[0].get(0) - target).powi(2);
        let r = optimize(
            &[2],
            &GridSpec {
                step: 0.1,
                depth: 6,
            },
            Sense::Maximize,
            f,
        )
        .unwrap();
        assert!((r.point[0].get(0) - target).abs() < 0.1 / 64.0);
    }

    #[test]
    fn minimize_and_products() {
        let f = |p: &[Pmf]| p[0].get(0) + p[1].get(1);
        let r = optimize(&[2, 2], &GridSpec::default(), Sense::Minimize, f).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.point[0].probs(), &[0.0, 1.0]);
        assert_eq!(r.point[1].probs(), &[1.0, 0.0]);
    }

    #[test]
    fn guard_and_bad_step() {
        assert!(optimize(
            &[8, 8],
            &GridSpec {
                step: 0.01,
                depth: 0
            },
            Sense::Maximize,
            |_| 0.0
        )
        .is_err());
        assert!(optimize(
            &[2],
            &GridSpec {
                step: 0.0,
                depth: 0
            },
            Sense::Maximize,
            |_| 0.0
        )
        .is_err());
    }
}
