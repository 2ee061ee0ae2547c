//! Dimensions of graded pieces of K[X]: Burnside counting, the character
//! formula, and the quotients by the dimension relations.

use invariant_ring::diagram::{balanced_multidegrees, TypeSignature};
use invariant_ring::hilbert::{dim_burnside, dim_formula, report};
use invariant_ring::Result;

fn main() -> Result<()> {
    let endo: TypeSignature = "1 1".parse()?;
    println!("n  burnside formula  d=1 d=2 d=3");
    for n in 0..=6 {
        let q: Vec<String> = (1..=3)
            .map(|d| invariant_ring::hilbert::quotient_dim(&endo, &[n], d).map(|v| format!("{v:>3}")))
            .collect::<Result<_>>()?;
        println!("{n}  {:>8} {:>7}  {}", dim_burnside(&endo, &[n])?, dim_formula(&endo, &[n], None)?, q.join(" "));
    }

    for text in ["2 2", "2 1 1 2"] {
        let sig: TypeSignature = text.parse()?;
        println!("\n{sig}");
        for md in balanced_multidegrees(&sig, 8, 4) {
            println!("  {md:?}: {}", dim_formula(&sig, &md, None)?);
        }
    }

    // the quotient dimension is confirmed by the rank of sampled evaluations
    let r = report(&endo, &[4], Some(2), 30, 0)?;
    println!("\n{r:?}");
    Ok(())
}
