//! Commutants, the bicommutant, and the Schlieder gate.

use bellcorr::algebra::{schlieder_check, SchliederMode};
use bellcorr::{CommutingPair, Factor, Operator, VnAlgebra};

fn main() -> bellcorr::Result<()> {
    let left = VnAlgebra::generated_by(
        4,
        vec![
            Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0])?.embed(Factor::Left, 2),
            Operator::diag(&[1.0, -1.0]).embed(Factor::Left, 2),
        ],
    )?;
    let comm = left.commutant();
    println!("dim of algebra:     {}", left.linear_dim());
    println!("dim of commutant:   {}", comm.linear_dim());
    println!("I (x) Z in commutant: {}", comm.contains(&Operator::diag(&[1.0, -1.0]).embed(Factor::Right, 2), 1e-10)?);
    println!("bicommutant equals algebra: {}", comm.commutant().same_span(&left, 1e-8)?);

    for d in 2..=4 {
        let rep = schlieder_check(&CommutingPair::tensor_split(d, d), SchliederMode::Structural, 0, 0)?;
        println!("Schlieder M{d} (x) I, I (x) M{d}: holds={} ({:?})", rep.holds, rep.certainty);
    }
    let p = Operator::diag(&[1.0, 0.0, 0.0]);
    let abelian = VnAlgebra::generated_by(3, vec![p])?;
    let rep = schlieder_check(&CommutingPair::new(abelian.clone(), abelian)?, SchliederMode::Structural, 0, 0)?;
    if let Some((a, b)) = rep.witness {
        println!("abelian pair: holds={}, |AB| = {}", rep.holds, (&a * &b).frobenius_norm());
    }
    Ok(())
}
