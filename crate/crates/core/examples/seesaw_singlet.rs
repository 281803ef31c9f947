//! See-saw lower bounds against the exact two-qubit value.

use bellcorr::seesaw::{qubit_exact_beta, seesaw_beta, SeesawOptions};
use bellcorr::separability::{werner_state, State};
use bellcorr::CommutingPair;

fn main() -> bellcorr::Result<()> {
    let pair = CommutingPair::tensor_split(2, 2);
    let opts = SeesawOptions::default();
    let states = [
        ("singlet", State::singlet()),
        ("werner 0.9", werner_state(0.9)?),
        ("werner 0.6", werner_state(0.6)?),
        ("maximally mixed", State::maximally_mixed(2, 2)),
    ];
    println!("state             see-saw           exact             iterations");
    for (name, state) in &states {
        let res = seesaw_beta(state, &pair, &opts)?;
        println!(
            "{name:<16}  {:.15}  {:.15}  {}",
            res.beta_lower,
            qubit_exact_beta(state)?,
            res.iterations
        );
    }
    Ok(())
}
