//! Random nilpotent partial isometries on each factor give gadgets whose Bell
//! operator satisfies `R² = EF + A3B3`. Prints the worst residual per dimension.

use bellcorr::bell::{gadget_from_isometry, verify_square_identity};
use bellcorr::matrix::Factor;
use bellcorr::random::nilpotent_isometry;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> bellcorr::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!("dim  factors  max |R^2 - EF - A3B3|");
    for (d1, d2) in [(2, 2), (2, 4), (4, 4), (6, 6)] {
        let mut worst = 0.0_f64;
        for _ in 0..25 {
            let left = gadget_from_isometry(&nilpotent_isometry(d1, &mut rng))?.embed(Factor::Left, d2);
            let right = gadget_from_isometry(&nilpotent_isometry(d2, &mut rng))?.embed(Factor::Right, d1);
            worst = worst.max(verify_square_identity(&left, &right));
        }
        println!("{:>3}  {d1}x{d2}      {worst:.3e}", d1 * d2);
    }
    Ok(())
}
