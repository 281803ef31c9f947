//! Werner states: entangled for p > 1/3, Bell correlated only for p > 1/√2.

use bellcorr::seesaw::qubit_exact_beta;
use bellcorr::separability::{ppt_oracle, werner_state};

fn main() -> bellcorr::Result<()> {
    println!("  p    PT min eig   verdict       beta");
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        let w = werner_state(p)?;
        let ppt = ppt_oracle(&w)?;
        let beta = qubit_exact_beta(&w)?;
        let marker = if ppt.min_eig < 0.0 && beta <= 1.0 { "  <- entangled, no violation" } else { "" };
        println!("{p:.1}  {:>+10.6}   {:<12}  {beta:.6}{marker}", ppt.min_eig, ppt.verdict.as_str());
    }
    Ok(())
}
