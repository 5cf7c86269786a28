//! Matrices over the ring: inverse, determinant, characteristic polynomial.

use ringsys::{RingElement, RingMatrix, TruncationSpec};

fn main() -> ringsys::Result<()> {
    let spec = TruncationSpec::new(2, 5)?;
    let one = RingElement::one(spec);
    let z1 = RingElement::variable(spec, 1)?;
    let z2 = RingElement::variable(spec, 2)?;
    let m = RingMatrix::from_rows(
        spec,
        vec![
            vec![&one + &z1, z2.clone()],
            vec![z1.clone(), &one.scale(ringsys::Complex::new(2.0, 0.0)) - &z2],
        ],
    )?;

    println!("M(0) =\n{}", m.eval0());
    let inv = m.mat_inverse()?;
    let id = m.mat_mul(&inv)?.sub(&RingMatrix::identity(spec, 2))?;
    println!("M M⁻¹ - I: max coefficient {:.1e}", id.max_abs_coeff());

    let det = m.determinant()?;
    println!("det M has {} terms, constant term {}", det.num_terms(), det.constant_term());

    let p = m.char_poly()?;
    let residual = RingMatrix::apply_poly(&p, &m)?;
    println!("characteristic polynomial degree {}, p(M) max coefficient {:.1e}", p.len() - 1, residual.max_abs_coeff());

    let singular = RingMatrix::from_rows(spec, vec![vec![z1.clone(), z2.clone()], vec![z2, z1]])?;
    match singular.mat_inverse() {
        Ok(_) => println!("unexpected inverse"),
        Err(e) => println!("singular at z = 0: {e}"),
    }
    Ok(())
}
