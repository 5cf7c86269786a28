//! Weighted coefficient norms, the product inequality constant and the
//! K_q neighbourhoods.

use ringsys::ring::{growth_bound_check, kq_membership, vage_constant};
use ringsys::{Complex, EvalPoint, RingElement, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(3, 6)?;
    let h = RingElement::from_terms(
        spec,
        [
            (ringsys::MultiIndex::zero(), Complex::new(1.0, 0.0)),
            (ringsys::MultiIndex::unit(1), Complex::new(2.0, 0.0)),
            (ringsys::MultiIndex::unit(3), Complex::new(0.0, 1.0)),
        ],
    )?;
    let u = &RingElement::variable(spec, 2)? + &RingElement::one(spec);
    for k in 0..=4 {
        println!("‖h‖_{k} = {:.6}", h.norm_k(k));
    }

    let a2 = vage_constant(4, 2)?;
    let lhs = h.wick_mul(&u)?.norm_k(4);
    let rhs = a2 * h.norm_k(2) * u.norm_k(4);
    println!("A(2) = {a2:.12} (π/2 = {:.12})", std::f64::consts::FRAC_PI_2);
    println!("‖h◊u‖₄ = {lhs:.6} <= {rhs:.6}");
    println!("A(3) = {:.12}", vage_constant(5, 2)?);
    if let Err(e) = vage_constant(3, 2) {
        println!("A(1): {e}");
    }

    let z = EvalPoint::from_real(&[0.1, 0.05, 0.02]);
    for q in 1..=3 {
        let m = kq_membership(&z, q, 0.5);
        println!("q = {q}: Σ = {:.6}, in K_q(0.5): {}", m.sum, m.member);
    }
    let b = growth_bound_check(&h, &z, 2)?;
    println!(
        "|h(z)| = {:.6} <= {:.6} <= {:.6}: {}",
        b.value_abs,
        b.abs_series,
        b.rhs(),
        b.holds
    );
    Ok(())
}
