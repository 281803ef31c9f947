//! Conditioning a separable state by a left operator keeps it separable: the
//! reweighted, conditioned decomposition assembles to the conditioned state.

use bellcorr::random::gaussian_operator;
use bellcorr::separability::{assemble, condition, push_decomposition, random_decomposition};
use bellcorr::Factor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bellcorr::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dims = (3, 2);
    let d = random_decomposition(5, dims, &mut rng);
    let a = gaussian_operator(dims.0, &mut rng);

    let pushed = push_decomposition(&d, &a)?;
    let direct = condition(&assemble(&d)?, &a, Factor::Left)?;
    let via_terms = assemble(&pushed)?;

    println!("weights before: {:?}", d.weights);
    println!("weights after:  {:?}", pushed.weights);
    println!("sum after:      {}", pushed.weights.iter().sum::<f64>());
    println!("|assembled pushforward - conditioned| = {:.3e}", via_terms.rho().distance(direct.state.rho()));
    Ok(())
}
