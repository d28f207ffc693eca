// Kronecker products, partial traces and entropies on a two-qubit Bell pair.

use densecode::states::bell_state;
use densecode::tensor::{partial_trace, von_neumann_entropy, DensityMatrix, SubsystemLayout};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rho = bell_state(2)?;
    let layout = SubsystemLayout::new(vec![2], 2)?;

    let alice = partial_trace(&rho, &layout, &[0])?;
    let bob = partial_trace(&rho, &layout, &[1])?;
    println!("S(AB) = {:.6}", von_neumann_entropy(&rho));
    println!("S(A)  = {:.6}", von_neumann_entropy(&alice));
    println!("S(B)  = {:.6}", von_neumann_entropy(&bob));

    // both marginals of a maximally entangled pair are maximally mixed
    let mixed = DensityMatrix::maximally_mixed(2);
    if alice.matrix().max_abs_diff(mixed.matrix()) > 1e-12 || von_neumann_entropy(&rho) > 1e-12 {
        return Err("Bell pair marginals are not maximally mixed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("tensor_basics failed");
}
