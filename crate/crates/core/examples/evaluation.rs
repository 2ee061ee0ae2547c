//! Evaluate diagrams on concrete structures, and watch the character turn
//! direct sums and tensor products into coproduct and product data.

use invariant_ring::diagram::basis;
use invariant_ring::eval::{direct_sum, evaluate_closed, evaluate_element, tensor_structures, Structure};
use invariant_ring::parse::parse_element;
use invariant_ring::{fmt_q, Result};

fn main() -> Result<()> {
    let sig = "1 1".parse()?;
    let a = Structure::parse("signature 1 1\ndim 2\ntensor 1\n1 1 1\n1 2 2\n2 1 3\n2 2 4\n")?;
    let b = Structure::random(&sig, 2, 1)?;
    println!("A =\n{}", a.to_text());

    // Tr(A)^2 - Tr(A^2) = 2 det(A)
    let x = parse_element(&sig, "p(;1)*p(;1) - p((1 2); 2)")?;
    println!("Tr(A)^2 - Tr(A^2) = {}", fmt_q(&evaluate_element(&x, &a)?));

    let sum = direct_sum(&a, &b)?;
    let prod = tensor_structures(&a, &b)?;
    for d in basis(&sig, &[3])? {
        let (va, vb) = (evaluate_closed(&d, &a)?, evaluate_closed(&d, &b)?);
        println!(
            "{d}: A {}, B {}, A⊕B {}, A⊗B {}{}",
            fmt_q(&va),
            fmt_q(&vb),
            fmt_q(&evaluate_closed(&d, &sum)?),
            fmt_q(&evaluate_closed(&d, &prod)?),
            if d.is_connected() { "  (connected: additive)" } else { "" }
        );
    }
    Ok(())
}
