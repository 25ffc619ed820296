//! TOML configuration trees and their conversion into module inputs.
//!
//! Every failure names the key path it came from.

use toml::{Table, Value};

use super::Failure;
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::regions::{AuxPair, GridSpec, Mac, MacStates, SourcePair};
use crate::typical::IndexSetSpec;
use crate::zring::Modulus;

/// A possibly absent value together with its dotted key path.
#[derive(Clone)]
pub struct Node<'a> {
    path: String,
    value: Option<&'a Value>,
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Self {
        Node {
            path: String::new(),
            value: Some(value),
        }
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn get(&self, key: &str) -> Node<'a> {
        Node {
            path: if self.path.is_empty() {
                key.to_string()
            } else {
                format!("{}.{key}", self.path)
            },
            value: self
                .value
                .and_then(|v| v.as_table())
                .and_then(|t| t.get(key)),
        }
    }

    fn at(&self, value: &'a Value) -> Node<'a> {
        Node {
            path: self.path.clone(),
            value: Some(value),
        }
    }

    pub fn present(&self) -> bool {
        self.value.is_some()
    }

    pub fn invalid(&self, msg: impl std::fmt::Display) -> Failure {
        Failure::validation(format!("key `{}`: {msg}", self.path()))
    }

    fn require(&self) -> Result<&'a Value, Failure> {
        self.value.ok_or_else(|| self.invalid("missing"))
    }

    pub fn f64(&self) -> Result<f64, Failure> {
        match self.require()? {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(self.invalid("expected a number")),
        }
    }

    pub fn f64_or(&self, default: f64) -> Result<f64, Failure> {
        if self.present() {
            self.f64()
        } else {
            Ok(default)
        }
    }

    pub fn opt_f64(&self) -> Result<Option<f64>, Failure> {
        self.present().then(|| self.f64()).transpose()
    }

    pub fn usize(&self) -> Result<usize, Failure> {
        match self.require()? {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            _ => Err(self.invalid("expected a nonnegative integer")),
        }
    }

    pub fn usize_or(&self, default: usize) -> Result<usize, Failure> {
        if self.present() {
            self.usize()
        } else {
            Ok(default)
        }
    }

    /// A single integer or an array of integers.
    pub fn usize_list(&self) -> Result<Vec<usize>, Failure> {
        match self.require()? {
            Value::Array(_) => self.items().iter().map(|n| n.usize()).collect(),
            _ => Ok(vec![self.usize()?]),
        }
    }

    fn items(&self) -> Vec<Node<'a>> {
        match self.value {
            Some(Value::Array(a)) => a.iter().map(|v| self.at(v)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn f64_vec(&self) -> Result<Vec<f64>, Failure> {
        match self.require()? {
            Value::Array(a) => a
                .iter()
                .enumerate()
                .map(|(i, v)| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(x) => Ok(*x as f64),
                    _ => Err(self.invalid(format!("entry {i} is not a number"))),
                })
                .collect(),
            _ => Err(self.invalid("expected an array of numbers")),
        }
    }

    pub fn pmf(&self) -> Result<Pmf, Failure> {
        Pmf::new(self.f64_vec()?).map_err(|e| self.invalid(e))
    }

    pub fn ring_pmf(&self, md: Modulus) -> Result<Pmf, Failure> {
        let p = self.pmf()?;
        if p.len() as u64 != md.order() {
            return Err(self.invalid(format!(
                "expected {} entries, found {}",
                md.order(),
                p.len()
            )));
        }
        Ok(p)
    }

    /// Nested arrays of the given depth, flattened in row-major order.
    fn nested(
        &self,
        depth: usize,
        shape: &mut Vec<usize>,
        out: &mut Vec<f64>,
    ) -> Result<(), Failure> {
        let v = self.require()?;
        if depth == 0 {
            out.extend(self.f64_vec()?);
            return Ok(());
        }
        let arr = v
            .as_array()
            .ok_or_else(|| self.invalid("expected a nested array"))?;
        let level = shape.len() - depth - 1;
        if shape[level] == usize::MAX {
            shape[level] = arr.len();
        } else if shape[level] != arr.len() {
            return Err(self.invalid("ragged nested array"));
        }
        for v in arr {
            self.at(v).nested(depth - 1, shape, out)?;
        }
        Ok(())
    }

    /// Rows of PMFs from an array nested `depth` levels above the PMFs.
    pub fn pmf_rows(&self, depth: usize) -> Result<(Vec<usize>, Vec<Pmf>), Failure> {
        let mut shape = vec![usize::MAX; depth + 1];
        let mut flat = Vec::new();
        self.nested(depth, &mut shape, &mut flat)?;
        let width = flat.len() / shape[..depth].iter().product::<usize>().max(1);
        let rows = flat
            .chunks(width.max(1))
            .map(|c| Pmf::new(c.to_vec()).map_err(|e| self.invalid(e)))
            .collect::<Result<Vec<_>, _>>()?;
        shape.truncate(depth);
        Ok((shape, rows))
    }

    pub fn matrix(&self) -> Result<Vec<Vec<f64>>, Failure> {
        let v = self.require()?;
        let arr = v
            .as_array()
            .ok_or_else(|| self.invalid("expected an array of arrays"))?;
        arr.iter().map(|row| self.at(row).f64_vec()).collect()
    }

    pub fn table(&self) -> Option<&'a Table> {
        self.value.and_then(|v| v.as_table())
    }
}

/// Parses a `"num/den"` weight (a bare integer means `num/1`).
fn ratio(node: &Node<'_>, v: &Value) -> Result<(u64, u64), Failure> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Integer(i) if *i >= 0 => return Ok((*i as u64, 1)),
        _ => return Err(node.invalid("weights must be \"num/den\" strings")),
    };
    let (num, den) = s.split_once('/').unwrap_or((&s, "1"));
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| node.invalid(format!("bad weight `{s}`")))
    };
    let (num, den) = (parse(num)?, parse(den)?);
    if den == 0 {
        return Err(node.invalid(format!("zero denominator in `{s}`")));
    }
    Ok((num, den))
}

/// Rational weights of `Q`; defaults to a trivial `Q`.
pub fn q_weights(node: &Node) -> Result<Vec<(u64, u64)>, Failure> {
    let q = node.get("q");
    let Some(v) = q.value else {
        return Ok(vec![(1, 1)]);
    };
    let arr = v
        .as_array()
        .ok_or_else(|| q.invalid("expected an array of \"num/den\" strings"))?;
    let w = arr
        .iter()
        .map(|v| ratio(&q, v))
        .collect::<Result<Vec<_>, _>>()?;
    // Exact check that the weights sum to one.
    let (mut num, mut den) = (0u128, 1u128);
    for &(a, b) in &w {
        num = num * b as u128 + a as u128 * den;
        den *= b as u128;
    }
    if num != den {
        return Err(q.invalid("weights do not sum to 1"));
    }
    Ok(w)
}

fn weights_pmf(node: &Node, w: &[(u64, u64)]) -> Result<Pmf, Failure> {
    Pmf::new(w.iter().map(|&(a, b)| a as f64 / b as f64).collect()).map_err(|e| node.invalid(e))
}

pub fn modulus(root: &Node) -> Result<Modulus, Failure> {
    let ring = root.get("ring");
    let (pv, rv) = (ring.get("p").usize()? as u64, ring.get("r").usize()?);
    Modulus::new(pv, rv as u32).map_err(|e| ring.invalid(e))
}

/// Per-user laws under `name` (shared) or `name1`/`name2`, one per value of `Q`.
pub fn aux_pair(aux: &Node, md: Modulus, name: &str) -> Result<AuxPair, Failure> {
    let weights = q_weights(aux)?;
    let q = weights_pmf(&aux.get("q"), &weights)?;
    let nq = weights.len();
    let per_user = |key: String| -> Result<Vec<Pmf>, Failure> {
        let node = aux.get(&key);
        let laws = match node.value {
            Some(Value::Array(a)) if a.first().is_some_and(|v| v.is_array()) => node.pmf_rows(1)?.1,
            Some(_) => vec![node.pmf()?; nq],
            None => return Err(node.invalid("missing")),
        };
        if laws.len() != nq {
            return Err(node.invalid(format!("expected {nq} laws, one per value of q")));
        }
        if laws.iter().any(|l| l.len() as u64 != md.order()) {
            return Err(node.invalid(format!("laws must have {} entries", md.order())));
        }
        Ok(laws)
    };
    let shared = aux.get(name);
    let (u1, u2) = if shared.present() {
        let l = per_user(name.to_string())?;
        (l.clone(), l)
    } else {
        (per_user(format!("{name}1"))?, per_user(format!("{name}2"))?)
    };
    AuxPair::new(md, q, u1, u2).map_err(|e| aux.invalid(e))
}

/// `[source]`: either `joint` (rows indexed by `x1`) or `sum_noise`, which
/// takes `X_1` uniform and `X_2 = N - X_1`.
pub fn source(root: &Node, md: Modulus) -> Result<SourcePair, Failure> {
    let src = root.get("source");
    let m = md.order() as usize;
    let joint = src.get("joint");
    let noise = src.get("sum_noise");
    let probs = if joint.present() {
        let rows = joint.matrix()?;
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(joint.invalid(format!("expected a {m} x {m} table")));
        }
        rows.concat()
    } else if noise.present() {
        let n = noise.ring_pmf(md)?;
        let mut probs = vec![0.0; m * m];
        for x1 in 0..m {
            for z in 0..m {
                probs[x1 * m + (z + m - x1) % m] += n.get(z) / m as f64;
            }
        }
        probs
    } else {
        return Err(src.invalid("needs `joint` or `sum_noise`"));
    };
    let j = JointPmf::new(&[("x1", m), ("x2", m)], probs).map_err(|e| joint.invalid(e))?;
    SourcePair::new(md, j).map_err(|e| src.invalid(e))
}

/// Rows of a channel given as nested tables keyed by input letters, in
/// lexicographic order of the inputs.
fn keyed_rows(node: &Node, dims: &[usize]) -> Result<Vec<Pmf>, Failure> {
    fn walk(
        node: &Node,
        v: &Value,
        dims: &[usize],
        out: &mut Vec<Vec<f64>>,
    ) -> Result<(), Failure> {
        if dims.is_empty() {
            out.push(node.at(v).f64_vec()?);
            return Ok(());
        }
        let t = v
            .as_table()
            .ok_or_else(|| node.invalid("expected a table keyed by input letters"))?;
        for a in 0..dims[0] {
            let key = a.to_string();
            let child = t
                .get(&key)
                .ok_or_else(|| node.invalid(format!("missing row for input {key}")))?;
            walk(node, child, &dims[1..], out)?;
        }
        if t.len() != dims[0] {
            return Err(node.invalid(format!("expected keys 0..{}", dims[0] - 1)));
        }
        Ok(())
    }
    let mut raw = Vec::new();
    walk(node, node.require()?, dims, &mut raw)?;
    let width = raw.first().map_or(0, Vec::len);
    if raw.iter().any(|r| r.len() != width) {
        return Err(node.invalid("rows have different output alphabets"));
    }
    raw.into_iter()
        .map(|r| Pmf::new(r).map_err(|e| node.invalid(e)))
        .collect()
}

/// `[channel]`: `adder_noise` for `Y = (sum of inputs) + N`, or the full
/// transition table under `rows`.
pub fn channel(root: &Node, md: Modulus, dims: &[usize]) -> Result<CondPmf, Failure> {
    let ch = root.get("channel");
    let noise = ch.get("adder_noise");
    let rows = ch.get("rows");
    let m = md.order() as usize;
    let rows = if noise.present() {
        let n = noise.ring_pmf(md)?;
        let total: usize = dims.iter().product();
        (0..total)
            .map(|mut k| {
                let mut sum = 0;
                for &d in dims.iter().rev() {
                    sum += k % d;
                    k /= d;
                }
                n.shift(sum % m)
            })
            .collect()
    } else if rows.present() {
        keyed_rows(&rows, dims)?
    } else {
        return Err(ch.invalid("needs `adder_noise` or `rows`"));
    };
    CondPmf::new(dims.to_vec(), rows).map_err(|e| ch.invalid(e))
}

pub fn mac(root: &Node, md: Modulus) -> Result<Mac, Failure> {
    let m = md.order() as usize;
    Mac::new(md, channel(root, md, &[m, m])?).map_err(|e| root.get("channel").invalid(e))
}

/// `[inputs]` laws `x1`, `x2`; absent means uniform.
pub fn inputs(root: &Node, md: Modulus) -> Result<[Pmf; 2], Failure> {
    let inp = root.get("inputs");
    let one = |k: &'static str| -> Result<Pmf, Failure> {
        let n = inp.get(k);
        if n.present() {
            n.ring_pmf(md)
        } else {
            Ok(Pmf::uniform(md.order() as usize))
        }
    };
    Ok([one("x1")?, one("x2")?])
}

pub fn grid(root: &Node) -> Result<GridSpec, Failure> {
    let g = root.get("optimize");
    let d = GridSpec::default();
    let step = g.get("step").f64_or(d.step)?;
    if !(step > 0.0 && step <= 1.0) {
        return Err(g.get("step").invalid("must lie in (0, 1]"));
    }
    Ok(GridSpec {
        step,
        depth: g.get("depth").usize_or(d.depth as usize)? as u32,
    })
}

pub fn mac_states(root: &Node, md: Modulus) -> Result<MacStates, Failure> {
    let m = md.order() as usize;
    let st = root.get("states");
    let states = [st.get("s1").pmf()?, st.get("s2").pmf()?];
    let aux = root.get("aux");
    let v = aux_pair(&aux, md, "v")?;
    let nq = v.q().len();
    let mut z_laws: [Vec<Vec<Pmf>>; 2] = [Vec::new(), Vec::new()];
    let mut x_laws: [Vec<Vec<Vec<Pmf>>>; 2] = [Vec::new(), Vec::new()];
    let mut xs = [0usize; 2];
    for i in 0..2 {
        let ns = states[i].len();
        let zk = ["z1", "z2"][i];
        let xk = ["x1", "x2"][i];
        let zn = aux.get(zk);
        let (shape, rows) = zn.pmf_rows(2)?;
        if shape != [nq, ns] || rows.iter().any(|r| r.len() != m) {
            return Err(zn.invalid(format!("expected [{nq}][{ns}] laws over {m} letters")));
        }
        z_laws[i] = rows.chunks(ns).map(|c| c.to_vec()).collect();
        let xn = aux.get(xk);
        let (shape, rows) = xn.pmf_rows(3)?;
        if shape != [nq, m, ns] {
            return Err(xn.invalid(format!("expected [{nq}][{m}][{ns}] laws")));
        }
        xs[i] = rows[0].len();
        x_laws[i] = rows
            .chunks(m * ns)
            .map(|q| q.chunks(ns).map(|c| c.to_vec()).collect())
            .collect();
    }
    let costs = root.get("costs");
    let cost = |k: &'static str, i: usize| -> Result<Vec<Vec<f64>>, Failure> {
        let c = costs.get(k);
        let t = c.matrix()?;
        if t.len() != xs[i] || t.iter().any(|r| r.len() != states[i].len()) {
            return Err(c.invalid(format!("expected a {} x {} table", xs[i], states[i].len())));
        }
        Ok(t)
    };
    let caps_node = costs.get("caps");
    let caps = caps_node.f64_vec()?;
    let caps: [f64; 2] = caps
        .try_into()
        .map_err(|_| caps_node.invalid("expected two caps"))?;
    let ch = channel(root, md, &[xs[0], xs[1], states[0].len(), states[1].len()])?;
    Ok(MacStates {
        modulus: md,
        channel: ch,
        costs: [cost("c1", 0)?, cost("c2", 1)?],
        caps,
        v,
        z_laws,
        x_laws,
        states,
    })
}

/// `[index]`: `law` for a single block, or `q` weights with per-block `laws`.
pub fn index_set(node: &Node, md: Modulus, k: usize, eps: f64) -> Result<IndexSetSpec, Failure> {
    let law = node.get("law");
    let spec = if law.present() {
        IndexSetSpec::single(law.ring_pmf(md)?, k, eps)
    } else {
        let w = q_weights(node)?;
        let laws_node = node.get("laws");
        let (_, laws) = laws_node.pmf_rows(1)?;
        if laws.len() != w.len() {
            return Err(laws_node.invalid("expected one law per weight"));
        }
        IndexSetSpec::new(w, laws, k, eps)
    };
    spec.map_err(|e| node.invalid(e))
}

/// Rows `P(b | a)` keyed by input letter.
pub fn kernel(node: &Node, inputs: usize) -> Result<CondPmf, Failure> {
    CondPmf::new(vec![inputs], keyed_rows(node, &[inputs])?).map_err(|e| node.invalid(e))
}
