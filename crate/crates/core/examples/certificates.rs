//! Observability, controllability and minimality certificates.

use ringsys::analysis::{
    controllability_certificate, kalman_rank_at_zero, minimality_certificate, observability_certificate,
    r_controllability_certificate,
};
use ringsys::{Complex, RingElement, RingMatrix, StateSpaceSystem, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(2, 4)?;
    let one = RingMatrix::identity(spec, 1);
    let z1 = RingMatrix::scalar(RingElement::variable(spec, 1)?);

    // C = z1 vanishes at 0, yet z1 f = 0 forces f = 0
    println!("rank at z = 0: {}", kalman_rank_at_zero(&z1.eval0(), &one.eval0()));
    let obs = observability_certificate(&z1, &one)?;
    println!("{}", serde_json::to_string(&obs).expect("serializable"));

    // B = z1 does not generate the state module but has trivial left kernel
    println!("{:?}", controllability_certificate(&one, &z1)?.verdict);
    println!("{:?}", r_controllability_certificate(&one, &z1)?.verdict);

    let half = RingMatrix::scalar(RingElement::constant(spec, Complex::new(0.5, 0.0)));
    let sys = StateSpaceSystem::new(half, one.clone(), z1, RingMatrix::zeros(spec, 1, 1))?;
    let cert = minimality_certificate(&sys)?;
    println!("{}", serde_json::to_string_pretty(&cert).expect("serializable"));
    Ok(())
}
