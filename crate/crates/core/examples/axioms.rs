//! Unital associative algebras: check a model, break it, and list the
//! closed relations the axioms generate.

use invariant_ring::axioms::{self, ideal_generators_upto, is_model, unital_associative_theory};
use invariant_ring::eval::evaluate_element;
use invariant_ring::Result;

fn main() -> Result<()> {
    let theory = unital_associative_theory()?;
    println!("{theory}");
    let m2 = axioms::matrix_algebra(2)?;
    let broken = axioms::perturb(&m2, 0, &[0, 0, 0])?;
    println!("M_2 is a model: {}", is_model(&theory, &m2)?);
    println!("perturbed M_2 is a model: {}", is_model(&theory, &broken)?);

    for g in ideal_generators_upto(&theory, 2)? {
        println!("{g}\n    on M_2: {}, perturbed: {}", evaluate_element(&g, &m2)?, evaluate_element(&g, &broken)?);
    }
    Ok(())
}
