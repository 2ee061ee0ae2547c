//! Antisymmetrizing d+1 strings gives relations that hold in every
//! d-dimensional structure.

use invariant_ring::eval::{evaluate_element, Structure};
use invariant_ring::hilbert::id_generators;
use invariant_ring::Result;

fn main() -> Result<()> {
    for (text, d, md) in [("1 1", 1, vec![2]), ("1 1", 2, vec![3]), ("2 2", 1, vec![1]), ("2 1 1 2", 2, vec![1, 1])] {
        let sig = text.parse()?;
        let gens = id_generators(d, &sig, &md)?;
        println!("{sig}, d = {d}, multidegree {md:?}: {} generators", gens.len());
        for g in gens.iter().take(3) {
            println!("  {g}");
        }
        let s = Structure::random(&sig, d, 1)?;
        let big = Structure::random(&sig, d + 1, 3)?;
        let on = |s: &Structure| gens.iter().map(|g| evaluate_element(g, s)).collect::<Result<Vec<_>>>();
        println!("  on a random {d}-dim structure: {:?}", on(&s)?.iter().map(invariant_ring::fmt_q).collect::<Vec<_>>());
        println!("  on a random {}-dim structure: {:?}", d + 1, on(&big)?.iter().map(invariant_ring::fmt_q).collect::<Vec<_>>());
    }
    Ok(())
}
