// Encoding two Bell pairs with `Ṽ_L U` yields 16 mutually orthogonal states
// for any sender unitary `U`.

use densecode::capacity::lemma2_orthogonality_check;
use densecode::tensor::random_unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let u = random_unitary(4, &mut rng);
    let report = lemma2_orthogonality_check(&[2, 2], &u)?;
    println!(
        "{} pairs: max |tr(pi pi')| = {:.3e}, purity deviation = {:.3e}",
        report.pairs, report.max_cross_trace, report.purity_deviation
    );
    if report.max_cross_trace > 1e-10 || report.purity_deviation > 1e-12 {
        return Err("encoded states are not orthonormal".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("orthogonal_encodings failed");
}
