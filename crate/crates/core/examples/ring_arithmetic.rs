//! Wick products, inverses and pointwise evaluation in the truncated ring.

use ringsys::{Complex, EvalPoint, MultiIndex, RingElement, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(2, 6)?;
    let z1 = RingElement::variable(spec, 1)?;
    let z2 = RingElement::variable(spec, 2)?;

    // f = 1 + z1 + 0.5 z1 z2
    let f = &(&RingElement::one(spec) + &z1) + &z1.wick_mul(&z2)?.scale(Complex::new(0.5, 0.0));
    let g = &RingElement::constant(spec, Complex::new(2.0, 0.0)) - &z2;
    let fg = f.wick_mul(&g)?;
    println!("f ◊ g has {} terms, degree {:?}", fg.num_terms(), fg.degree());
    for (alpha, c) in fg.terms() {
        println!("  {alpha}: {c}");
    }

    let z = EvalPoint::from_real(&[0.3, -0.2]);
    println!("(f◊g)(z) = {}", fg.evaluate(&z)?);
    println!("f(z)g(z) = {}", f.evaluate(&z)? * g.evaluate(&z)?);

    let inv = f.inverse()?;
    let check = f.wick_mul(&inv)?.sub(&RingElement::one(spec))?;
    println!("f ◊ f⁻¹ - 1: max coefficient {:.1e}", check.max_abs_coeff());
    println!("z1 invertible? {}", z1.inverse().is_ok());

    let top = MultiIndex::from_dense(&[6, 0]);
    println!("coefficient of z1^6 in f⁻¹: {}", inv.coeff(&top));
    Ok(())
}
