//! Sizes of letter-typical sets and of a two-part index set, compared with
//! the exponents `n H(X)` and `k H(U|Q)`.

use quasigroup::prob::Pmf;
use quasigroup::typical::{IndexSetSpec, TypicalSpec};

fn main() -> quasigroup::Result<()> {
    let p = Pmf::new(vec![0.5, 0.25, 0.125, 0.125])?;
    println!("P_X = {:?}, H(X) = {:.4}", p.probs(), p.entropy());
    println!("n   eps   log2|T|   n H(X)");
    for n in [8, 16, 32, 64] {
        for eps in [0.2, 0.5] {
            let t = TypicalSpec::new(p.clone(), n, eps)?;
            println!(
                "{n:<3} {eps:<5} {:<9.3} {:.3}",
                t.log2_count()?,
                n as f64 * p.entropy()
            );
        }
    }

    let t = TypicalSpec::new(p.clone(), 8, 0.5)?;
    let members = t.enumerate()?;
    println!("n=8: {} sequences, first {:?}", members.len(), members[0]);

    let laws = vec![Pmf::new(vec![0.9, 0.1, 0.0, 0.0])?, Pmf::uniform(4)];
    let index = IndexSetSpec::new(vec![(1, 2), (1, 2)], laws, 8, 0.5)?;
    println!(
        "index set with Q uniform on 2 values, k=8: block lengths {:?}, log2|U| = {:.3}, k H(U|Q) = {:.3}",
        index.block_lengths(),
        index.log2_size()?,
        8.0 * index.cond_entropy()
    );
    Ok(())
}
