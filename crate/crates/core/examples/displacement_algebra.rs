// Displacement operators: algebra identities, the encoding set and the twirl.

use densecode::displacement::{local_encoding_set, twirl, verify_displacement_algebra};
use densecode::tensor::{random_ginibre, ComplexMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for d in [2, 3, 5] {
        let report = verify_displacement_algebra(d)?;
        println!("d={d}: max deviation {:.3e}", report.max_deviation());
        if report.max_deviation() > 1e-12 {
            return Err(format!("algebra identities fail for d={d}").into());
        }
    }

    let set = local_encoding_set(&[2, 3])?;
    println!("two senders (2, 3): {} encoders on dimension {}", set.len(), set.sender_dim());
    println!("Gram deviation from D_A * I: {:.3e}", set.orthogonality_deviation());

    // averaging over the full set sends any operator to tr(x) I / D
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_ginibre(6, 6, &mut rng);
    let expected = ComplexMatrix::identity(6).scale(x.trace() / 6.0);
    let dev = twirl(&set, &x)?.max_abs_diff(&expected);
    println!("twirl deviation: {dev:.3e}");
    if dev > 1e-10 {
        return Err("twirl is not the completely depolarizing map".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("displacement_algebra failed");
}
