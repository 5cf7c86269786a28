//! State recursion, Markov parameters and transfer function values.

use ringsys::{Complex, EvalPoint, RingElement, RingMatrix, SignalSequence, StateSpaceSystem, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(2, 4)?;
    let c = |v: f64| RingElement::constant(spec, Complex::new(v, 0.0));
    let z1 = RingElement::variable(spec, 1)?;
    let z2 = RingElement::variable(spec, 2)?;

    // x_{n+1} = A x_n + B u_n, y_n = C x_n + D u_n
    let a = RingMatrix::from_rows(spec, vec![vec![c(0.5), z1.clone()], vec![c(0.0), &c(0.25) + &z2]])?;
    let b = RingMatrix::from_rows(spec, vec![vec![c(1.0)], vec![z2.clone()]])?;
    let cm = RingMatrix::from_rows(spec, vec![vec![c(1.0), c(1.0)]])?;
    let d = RingMatrix::scalar(c(0.0));
    let sys = StateSpaceSystem::new(a, b, cm, d)?;

    let u = SignalSequence::new(vec![RingMatrix::scalar(c(1.0)), RingMatrix::scalar(z1.clone())])?;
    let sim = sys.simulate(&u, None, 5)?;
    for (n, y) in sim.outputs.iter().enumerate() {
        let e = y.get(0, 0);
        println!("y_{n}: {} terms, constant {}", e.num_terms(), e.constant_term());
    }

    let h = sys.markov(6)?;
    let conv = h.convolve(&u, 5)?;
    let diff = sim
        .outputs
        .iter()
        .zip(&conv)
        .map(|(x, y)| x.sub(y).map(|m| m.max_abs_coeff()))
        .collect::<ringsys::Result<Vec<_>>>()?;
    println!("simulation vs Markov convolution: {:.1e}", diff.iter().cloned().fold(0.0, f64::max));

    let zeta = Complex::new(0.4, 0.1);
    let z = EvalPoint::from_real(&[0.1, -0.1]);
    println!("H(ζ, z) = {}", sys.tf_eval(zeta, &z)?[(0, 0)]);
    println!("H(ζ, 0) = {}", sys.tf_eval(zeta, &EvalPoint::zeros(2))?[(0, 0)]);
    let series = h.eval(zeta, &z)?;
    println!("6-term series: {} (tail estimate {:?})", series.value[(0, 0)], series.tail_bound);
    Ok(())
}
