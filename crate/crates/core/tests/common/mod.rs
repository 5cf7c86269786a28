//! Seeded random generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ringsys::linalg::CMatrix;
use ringsys::{Complex, EvalPoint, MultiIndex, RingElement, RingMatrix, StateSpaceSystem, TruncationSpec};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spec(m: usize, d: u32) -> TruncationSpec {
    TruncationSpec::new(m, d).unwrap()
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// Uniform on the square `[-scale, scale]²`.
pub fn cplx(rng: &mut TestRng, scale: f64) -> Complex {
    Complex::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// Random index of degree in `min_deg..=max_deg` on `m` variables.
pub fn random_index(rng: &mut TestRng, m: usize, min_deg: u32, max_deg: u32) -> MultiIndex {
    let deg = rng.gen_range(min_deg..=max_deg);
    let mut dense = vec![0u32; m];
    for _ in 0..deg {
        dense[rng.gen_range(0..m)] += 1;
    }
    MultiIndex::from_dense(&dense)
}

/// Sum of `terms` random monomials of degree `min_deg..=max_deg`.
pub fn random_terms(
    rng: &mut TestRng,
    spec: TruncationSpec,
    min_deg: u32,
    max_deg: u32,
    terms: usize,
    scale: f64,
) -> RingElement {
    let ts: Vec<_> = (0..terms)
        .map(|_| (random_index(rng, spec.num_vars, min_deg, max_deg), cplx(rng, scale)))
        .collect();
    RingElement::from_terms(spec, ts).unwrap()
}

pub fn random_element(rng: &mut TestRng, spec: TruncationSpec, max_deg: u32, terms: usize) -> RingElement {
    random_terms(rng, spec, 0, max_deg, terms, 1.0)
}

/// Element with zero constant term.
pub fn random_vanishing(
    rng: &mut TestRng,
    spec: TruncationSpec,
    max_deg: u32,
    terms: usize,
    scale: f64,
) -> RingElement {
    random_terms(rng, spec, 1, max_deg.max(1), terms, scale)
}

/// Constant term of modulus in `[1, 2]` plus vanishing noise.
pub fn random_unit(rng: &mut TestRng, spec: TruncationSpec, max_deg: u32, terms: usize) -> RingElement {
    let r = rng.gen_range(1.0..=2.0);
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    let c0 = RingElement::constant(spec, Complex::from_polar(r, th));
    &c0 + &random_vanishing(rng, spec, max_deg, terms, 1.0)
}

pub fn random_cmatrix(rng: &mut TestRng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cplx(rng, scale))
}

pub fn random_matrix(
    rng: &mut TestRng,
    spec: TruncationSpec,
    rows: usize,
    cols: usize,
    max_deg: u32,
    terms: usize,
    scale: f64,
) -> RingMatrix {
    RingMatrix::from_fn(spec, rows, cols, |_, _| random_terms(rng, spec, 0, max_deg, terms, scale))
}

/// Constant part `m0` plus entries vanishing at 0.
pub fn perturb(
    rng: &mut TestRng,
    spec: TruncationSpec,
    m0: &CMatrix,
    max_deg: u32,
    terms: usize,
    scale: f64,
) -> RingMatrix {
    let base = RingMatrix::from_complex(spec, m0);
    let noise = RingMatrix::from_fn(spec, m0.nrows(), m0.ncols(), |_, _| {
        random_vanishing(rng, spec, max_deg, terms, scale)
    });
    base.add(&noise).unwrap()
}

/// Random system; `a_scale` bounds the coefficients of `A`.
pub fn random_system(
    rng: &mut TestRng,
    spec: TruncationSpec,
    (n, q, p): (usize, usize, usize),
    max_deg: u32,
    a_scale: f64,
) -> StateSpaceSystem {
    let a = random_matrix(rng, spec, n, n, max_deg, 3, a_scale);
    let b = random_matrix(rng, spec, n, q, max_deg, 3, 1.0);
    let cm = random_matrix(rng, spec, p, n, max_deg, 3, 1.0);
    let d = random_matrix(rng, spec, p, q, max_deg, 3, 1.0);
    StateSpaceSystem::new(a, b, cm, d).unwrap()
}

/// Point with every coordinate modulus at most `radius`.
pub fn random_point(rng: &mut TestRng, m: usize, radius: f64) -> EvalPoint {
    EvalPoint::new(
        (0..m)
            .map(|_| {
                let r = radius * rng.gen_range(0.0f64..=1.0).sqrt();
                Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect(),
    )
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Dense Gauss–Jordan inverse with partial pivoting.
pub fn gauss_inverse(m: &CMatrix) -> Option<CMatrix> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n, n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
        if a[(piv, col)].norm() == 0.0 {
            return None;
        }
        a.swap_rows(col, piv);
        inv.swap_rows(col, piv);
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = a[(i, col)];
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= f * ac;
                    inv[(i, j)] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// `D + ζ C (I - ζA)⁻¹ B` through [`gauss_inverse`].
pub fn classical_transfer(a: &CMatrix, b: &CMatrix, cm: &CMatrix, d: &CMatrix, zeta: Complex) -> Option<CMatrix> {
    let n = a.nrows();
    let pencil = CMatrix::identity(n, n) - a * zeta;
    Some(d + cm * gauss_inverse(&pencil)? * b * zeta)
}
