//! The `√2` eigenvector of a gadget pack and the lift that makes `R̃` act as
//! the identity off `EF`.

use std::f64::consts::SQRT_2;

use bellcorr::bell::{gadget_from_isometry, sqrt2_eigenvector, tilde_lift};
use bellcorr::matrix::{Factor, Operator};

fn main() -> bellcorr::Result<()> {
    // |3⟩⟨2| on C^4 on the left, |2⟩⟨1| on C^2 on the right
    let left = gadget_from_isometry(&Operator::matrix_unit(4, 2, 1))?.embed(Factor::Left, 2);
    let right = gadget_from_isometry(&Operator::matrix_unit(2, 1, 0))?.embed(Factor::Right, 4);

    let found = sqrt2_eigenvector(&left, &right)?;
    println!("sign fix branch: {}", found.branch.as_str());
    println!("<y, R y>        = {:.15}", found.pack.vector_value(&found.y));
    println!("|R|             = {:.15}", found.pack.norm());

    let lifted = tilde_lift(&found.pack, left.e(), right.e())?;
    let r = &lifted.residuals;
    println!("lifted square residual    {:.3e}", r.square);
    println!("lift expansion residual   {:.3e}", r.expansion);
    println!("corner fixed residual     {:.3e}", r.fixed);
    let ry = lifted.pack.operator().apply(&found.y);
    println!("|R~ y - sqrt2 y|          {:.3e}", ry.distance(&found.y.scale_real(SQRT_2)));
    println!("|R~|                      {:.15}", lifted.pack.norm());
    Ok(())
}
