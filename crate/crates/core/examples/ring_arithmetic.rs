//! Arithmetic in Z_8: projections onto the transversal, subgroup
//! decomposition, element levels and a small matrix product.

use quasigroup::zring::{Modulus, RingMatrix, RingVec};

fn main() -> quasigroup::Result<()> {
    let md = Modulus::new(2, 3)?;
    println!("ring {md}, order {}", md.order());
    for s in 0..=md.r() {
        println!(
            "H_{s} = {:?}  T_{s} = {:?}",
            md.subgroup(s)?,
            md.transversal(s)?
        );
    }
    println!("a  [a]_1 [a]_2  (t, h) at s=2  level");
    for a in 0..md.order() {
        let (t, h) = md.decompose(a, 2)?;
        let level = md.level(a).map_or("-".to_string(), |l| l.to_string());
        println!(
            "{a}  {}     {}      ({t}, {h})         {level}",
            md.proj(a, 1)?,
            md.proj(a, 2)?
        );
    }
    let (a, b) = (md.elem(5)?, md.elem(6)?);
    println!("5 + 6 = {}, 5 * 6 = {}, -5 = {}", a + b, a * b, -a);

    let g = RingMatrix::from_rows(md, &[vec![1, 2, 4, 0], vec![0, 1, 3, 6]])?;
    let u = RingVec::new(md, vec![3, 5])?;
    let c = u.mul_mat(&g)?;
    println!(
        "u = {:?}, uG = {:?}, [uG]_1 = {:?}",
        u.as_slice(),
        c.as_slice(),
        c.proj(1)?
    );
    Ok(())
}
