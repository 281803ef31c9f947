//! Bell correlated vectors `zₙ` near a random `x` on `C^K ⊗ C^K`.
//!
//! Usage: `cargo run --example density_sequence -- [K] [n_max] [support]`.
//! Defaults `16 6 3` keep the run short; `32 8 8` is the full-size table.

use bellcorr::density::{make_shift_family, random_supported_vector, DensityDemo};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arg(i: usize, default: usize) -> usize {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> bellcorr::Result<()> {
    let (levels, n_max, support) = (arg(1, 16), arg(2, 6), arg(3, 3));
    let fam = make_shift_family(levels)?;
    let demo = DensityDemo::new(&fam, &fam, n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_supported_vector(levels, support, &mut rng);

    println!(" n  value               bound               |z-x|     |z-x_n|   sqrt(2/n)  branch");
    for row in demo.approach(&x)? {
        println!(
            "{:>2}  {:.15}  {:.15}  {:.6}  {:.6}  {:.6}   {}",
            row.n,
            row.value,
            row.bound,
            row.dist,
            row.dist_to_xn,
            (2.0 / row.n as f64).sqrt(),
            row.branch.as_str()
        );
    }
    Ok(())
}
