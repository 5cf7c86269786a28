//! Realization of a scalar transfer series from a backward-shift recursion.

use ringsys::statespace::{realize_from_recursion, TransferSeries};
use ringsys::{Complex, RingElement, RingMatrix, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(1, 6)?;
    let z1 = RingElement::variable(spec, 1)?;
    let a = &RingElement::constant(spec, Complex::new(0.5, 0.0)) + &z1;

    // H_0 = 1, H_n = a^{n-1} z1: the shifted series R₀H satisfies R₀(R₀H) = a R₀H
    let mut params = vec![RingMatrix::identity(spec, 1)];
    let mut power = RingElement::one(spec);
    for _ in 1..=10 {
        params.push(RingMatrix::scalar(power.wick_mul(&z1)?));
        power = power.wick_mul(&a)?;
    }
    let h = TransferSeries::new(params)?;

    let mut arec = RingMatrix::zeros(spec, 2, 2);
    arec.set(1, 1, a.clone());
    let sys = realize_from_recursion(&h, 2, &arec)?;
    println!("realized on {} states", sys.dims().state);
    let back = sys.markov(10)?;
    let err = (0..=10)
        .map(|n| back.get(n).unwrap().sub(h.get(n).unwrap()).map(|d| d.max_abs_coeff()))
        .collect::<ringsys::Result<Vec<_>>>()?;
    println!("Markov mismatch: {:.1e}", err.iter().cloned().fold(0.0, f64::max));

    let mut wrong = arec.clone();
    wrong.set(1, 1, &a + &z1);
    match realize_from_recursion(&h, 2, &wrong) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("bad certificate rejected: {e}"),
    }
    Ok(())
}
