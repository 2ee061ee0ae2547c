//! The single-endomorphism case: K[X] is the ring of symmetric functions,
//! with power sums as connected diagrams and Schur functions spanning I_d.

use invariant_ring::endo::{self, jacobi_trudi, SymElement};
use invariant_ring::reptheory::{list_partitions, Partition};
use invariant_ring::Result;

fn main() -> Result<()> {
    let l = Partition::new(vec![2, 1])?;
    let s = SymElement::schur(&l);
    println!("{s} = {}", s.to_powersum());
    println!("Jacobi–Trudi: {}", jacobi_trudi(&l));
    println!("{s} · {{(1)}} = {}", s.multiply(&SymElement::schur(&Partition::row(1))));
    println!("as a diagram combination: {}", endo::to_kx(&s)?);

    // {λ} lies in I_d exactly when λ has more than d rows
    for d in 1..=3 {
        let inside: Vec<String> = list_partitions(4, None)
            .into_iter()
            .filter(|l| endo::in_ideal_id(&SymElement::schur(l), d))
            .map(|l| l.to_string())
            .collect();
        println!("d={d}: Schur functions of degree 4 in I_d: {inside:?}");
    }
    println!("\ndim (K[X]/I_d)_n, against the polynomial ring in d variables");
    for d in 1..=3 {
        let q: Vec<_> = (0..=8).map(|n| endo::quotient_dim(n, d)).collect();
        let p: Vec<_> = (0..=8).map(|n| endo::polynomial_ring_hilbert(d, n)).collect();
        println!("d={d}: {q:?}\n     {p:?}");
    }
    Ok(())
}
