//! A cyclic vector can be steered by a left operator into a Bell correlated
//! vector, so its own state is nonseparable. A product vector is not cyclic.

use bellcorr::algebra::{cyclic_check, maximally_entangled};
use bellcorr::separability::{steer_to_violation, SteerOptions};
use bellcorr::{CommutingPair, Error, Vector};

fn main() -> bellcorr::Result<()> {
    let pair = CommutingPair::tensor_split(3, 3);
    let x = maximally_entangled(3);
    println!("maximally entangled x cyclic: {}", cyclic_check(&x, pair.left())?);

    let res = steer_to_violation(&x, &pair, &SteerOptions::default())?;
    println!("deterministic step:  {}", res.deterministic);
    println!("certificate value:   {:.15}", res.certificate.unwrap_or(f64::NAN));
    println!("see-saw beta of Ax:  {:.15}", res.beta_after);
    println!("A = {:?}", res.a);

    let product = Vector::basis(9, 0);
    println!("product vector cyclic: {}", cyclic_check(&product, pair.left())?);
    match steer_to_violation(&product, &pair, &SteerOptions::default()) {
        Err(Error::NotCyclic) => println!("steering refused: not cyclic"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
