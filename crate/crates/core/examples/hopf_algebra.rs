//! Products, both coproducts, the antipode and the inner product of K[X].

use invariant_ring::kx::KXElement;
use invariant_ring::parse::parse_element;
use invariant_ring::Result;

fn main() -> Result<()> {
    let sig = "1 1".parse()?;
    let tr = parse_element(&sig, "p(; 1)")?;
    let tr2 = parse_element(&sig, "p((1 2); 2)")?;

    let x = &tr.multiply(&tr)?.scale(&invariant_ring::q_int(3)) - &tr2;
    println!("x = {x}");
    println!("x * x = {}", x.multiply(&x)?);
    println!("Δ+(x) = {}", x.coproduct_sum()?);
    println!("Δ×(x) = {}", x.coproduct_tensor());
    println!("S(x) = {}", x.antipode());
    println!("ε+(x) = {}, ε×(x) = {}", invariant_ring::fmt_q(&x.counit_sum()), invariant_ring::fmt_q(&x.counit_tensor()));
    println!("⟨x, x⟩ = {}", invariant_ring::fmt_q(&x.inner_product(&x)?));

    // m ∘ (S ⊗ id) ∘ Δ+ is the counit times the unit
    let check = x.coproduct_sum()?.contract_with(|l| l.antipode(), |r| r.clone());
    println!("m(S⊗id)Δ+(x) = {check}  (ε+(x)·1 = {})", KXElement::unit(&sig).scale(&x.counit_sum()));
    Ok(())
}
