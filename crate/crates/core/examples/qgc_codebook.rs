//! Draws a random quasi group code over Z_4 and a nested code built on it,
//! then reports codebook sizes, rates and bin structure.

use quasigroup::prob::Pmf;
use quasigroup::qgc::{sum_codes, NestedQgc, Qgc};
use quasigroup::rng;
use quasigroup::typical::IndexSetSpec;
use quasigroup::zring::Modulus;

fn main() -> quasigroup::Result<()> {
    let z4 = Modulus::new(2, 2)?;
    let mut rng = rng::stream(2024, 0);
    let n = 6;

    let law = Pmf::new(vec![0.7, 0.1, 0.1, 0.1])?;
    let code = Qgc::sample(&mut rng, z4, IndexSetSpec::single(law, 4, 0.6)?, n)?;
    let rates = code.rates()?;
    println!(
        "QGC k=4 n={n}: {} codewords, codeword rate {:.3}, index rate {:.3}",
        code.codebook()?.len(),
        rates.codeword_rate,
        rates.index_rate
    );
    println!(
        "fraction of indices with a unique codeword: {:.3}",
        code.injectivity_probe(&mut rng, 500)?
    );

    let full = Qgc::sample(&mut rng, z4, IndexSetSpec::full(z4, 2)?, n)?;
    let sum = sum_codes(&code, &full)?;
    println!(
        "sum code: k={}, {} distinct codewords",
        sum.k(),
        sum.codebook()?.len()
    );

    let binary = Pmf::new(vec![0.5, 0.5, 0.0, 0.0])?;
    let shift = Qgc::sample(&mut rng, z4, IndexSetSpec::single(binary, 4, 0.0)?, n)?;
    let nested = NestedQgc::new(code, shift)?;
    println!(
        "nested code: log2(bins) = {:.3}, outer codewords = {}, bin overlap = {:.3}",
        nested.log2_bins()?,
        nested.outer()?.codebook()?.len(),
        nested.bin_overlap()?
    );
    let v = [0, 1, 1, 0];
    let bin = nested.bin_of(&v)?;
    println!(
        "bin {v:?}: shift {:?}, {} members",
        bin.shift.as_slice(),
        nested.bin_members(&v)?.len()
    );
    Ok(())
}
