//! Realizations of inverses, products, sums and concatenations.

use ringsys::statespace::{realize_cascade, realize_concat_cols, realize_concat_rows, realize_inverse, realize_sum};
use ringsys::{Complex, EvalPoint, RingElement, RingMatrix, StateSpaceSystem, TruncationSpec};

fn scalar_system(spec: TruncationSpec, a: RingElement, b: f64, c: RingElement, d: f64) -> ringsys::Result<StateSpaceSystem> {
    let k = |v: f64| RingMatrix::scalar(RingElement::constant(spec, Complex::new(v, 0.0)));
    StateSpaceSystem::new(RingMatrix::scalar(a), k(b), RingMatrix::scalar(c), k(d))
}

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(2, 6)?;
    let z1 = RingElement::variable(spec, 1)?;
    let z2 = RingElement::variable(spec, 2)?;
    let half = RingElement::constant(spec, Complex::new(0.5, 0.0));
    let h1 = scalar_system(spec, z1.clone(), 1.0, &half + &z2, 2.0)?;
    let h2 = scalar_system(spec, half.clone(), 1.0, z1.clone(), 1.0)?;

    let zeta = Complex::new(0.3, 0.0);
    let z = EvalPoint::from_real(&[0.2, 0.1]);
    let v1 = h1.tf_eval(zeta, &z)?[(0, 0)];
    let v2 = h2.tf_eval(zeta, &z)?[(0, 0)];

    let inv = realize_inverse(&h1)?;
    println!("H1⁻¹: {} states, H1·H1⁻¹ = {}", inv.dims().state, v1 * inv.tf_eval(zeta, &z)?[(0, 0)]);

    let prod = realize_cascade(&h1, &h2)?;
    println!("H1H2: {} states, {} vs {}", prod.dims().state, prod.tf_eval(zeta, &z)?[(0, 0)], v1 * v2);

    let sum = realize_sum(&h1, &h2)?;
    println!("H1+H2: {} states, {} vs {}", sum.dims().state, sum.tf_eval(zeta, &z)?[(0, 0)], v1 + v2);

    let row = realize_concat_rows(&h1, &h2)?;
    println!("[H1 H2]: {}x{} on {} states", row.dims().output, row.dims().input, row.dims().state);
    let col = realize_concat_cols(&h1, &h2)?;
    println!("[H1; H2]: {}x{} on {} states", col.dims().output, col.dims().input, col.dims().state);

    let strictly_proper = scalar_system(spec, z1, 1.0, z2, 0.0)?;
    if let Err(e) = realize_inverse(&strictly_proper) {
        println!("no inverse when D(0) = 0: {e}");
    }
    Ok(())
}
