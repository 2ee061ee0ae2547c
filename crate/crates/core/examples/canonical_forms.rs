//! Enumerate the diagram basis for a few multidegrees and show how
//! relabelled diagrams collapse to one canonical representative.

use invariant_ring::diagram::{basis, canonicalize_closed, TypeSignature};
use invariant_ring::parse::parse_perm;
use invariant_ring::Result;

fn main() -> Result<()> {
    let endo: TypeSignature = "1 1".parse()?;
    for n in 0..=4 {
        let b = basis(&endo, &[n])?;
        println!("((1,1)) degree {n}: {} diagrams", b.len());
        for d in b {
            println!("  {d}  |Aut| = {}", d.aut_order());
        }
    }

    // (1 2 3) and (1 3 2) differ only by renaming the three copies of the box
    let a = canonicalize_closed(&endo, &[3], 0, &parse_perm("(1 2 3)", 3)?)?;
    let b = canonicalize_closed(&endo, &[3], 0, &parse_perm("(1 3 2)", 3)?)?;
    println!("\n(1 2 3) -> {a}\n(1 3 2) -> {b}\nsame: {}", a == b);

    let quartic: TypeSignature = "2 2".parse()?;
    let b = basis(&quartic, &[2])?;
    println!("\n((2,2)) degree 2: {} diagrams, {} connected", b.len(), b.iter().filter(|d| d.is_connected()).count());
    Ok(())
}
