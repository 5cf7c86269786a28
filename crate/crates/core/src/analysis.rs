//! Observability, controllability and minimality certificates over the ring.
//!
//! Each check first looks at the complex system at `z = 0`. Observability
//! (resp. ring-controllability) of the `z = 0` pair is sufficient for the
//! ring-level property. When the `z = 0` test fails, the ring-level property
//! is equivalent to a nonzero maximal minor of the observability (resp.
//! controllability) matrix, because the ring is a domain and injectivity can
//! be decided over its fraction field. Powers beyond `N - 1` are redundant by
//! Cayley–Hamilton.
//!
//! Minors are computed on truncated series. A zero minor can be an artifact
//! of truncation, so all-zero minors yield `Inconclusive`, never a negative
//! verdict.
//!
//! Module-generation controllability needs a *unit* maximal minor, i.e. one
//! with nonzero constant term, which happens exactly when the `z = 0` pair is
//! controllable. Its failure at `z = 0` refutes the property outright.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix, DEFAULT_RANK_TOL};
use crate::ring::RingElement;
use crate::ringmatrix::RingMatrix;
use crate::statespace::StateSpaceSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    Observable,
    Controllable,
    RControllable,
    RMinimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    SufficientAtZero,
    SufficientNonzeroMinor,
    RefutedAtZero,
    Inconclusive,
}

impl Verdict {
    pub fn is_sufficient(self) -> bool {
        matches!(self, Verdict::SufficientAtZero | Verdict::SufficientNonzeroMinor)
    }
}

/// Row and column indices (0-based) of a square submatrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witness {
    /// Numerical rank of the relevant Kalman matrix at `z = 0`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z0_rank: Option<usize>,
    /// Rank needed for the property (the state dimension).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub required_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minor: Option<MinorWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub components: Vec<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub verdict: Verdict,
    pub witness: Witness,
}

/// Tolerances for the certificate checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertOptions {
    /// Relative singular-value threshold for ranks at `z = 0`.
    pub rank_tol: f64,
    /// A ring minor counts as nonzero when some coefficient exceeds this
    /// fraction of the product of its rows' coefficient ℓ¹ norms, a bound on
    /// every coefficient of the determinant.
    pub nonzero_tol: f64,
}

impl Default for CertOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            nonzero_tol: 1e-12,
        }
    }
}

/// Rank of `[C₀; C₀A₀; ...; C₀A₀^{N-1}]`.
pub fn kalman_rank_at_zero(c0: &CMatrix, a0: &CMatrix) -> usize {
    kalman_rank_at_zero_with(c0, a0, DEFAULT_RANK_TOL)
}

pub fn kalman_rank_at_zero_with(c0: &CMatrix, a0: &CMatrix, tol: f64) -> usize {
    linalg::numerical_rank(&complex_observability_matrix(c0, a0), tol)
}

/// Rank of `[B₀, A₀B₀, ..., A₀^{N-1}B₀]`.
pub fn controllability_rank_at_zero(a0: &CMatrix, b0: &CMatrix) -> usize {
    controllability_rank_at_zero_with(a0, b0, DEFAULT_RANK_TOL)
}

pub fn controllability_rank_at_zero_with(a0: &CMatrix, b0: &CMatrix, tol: f64) -> usize {
    linalg::numerical_rank(&complex_controllability_matrix(a0, b0), tol)
}

fn complex_observability_matrix(c0: &CMatrix, a0: &CMatrix) -> CMatrix {
    let (p, n) = (c0.nrows(), c0.ncols());
    let mut out = CMatrix::zeros(p * n, n);
    let mut block = c0.clone();
    for k in 0..n {
        out.view_mut((k * p, 0), (p, n)).copy_from(&block);
        block = &block * a0;
    }
    out
}

fn complex_controllability_matrix(a0: &CMatrix, b0: &CMatrix) -> CMatrix {
    let (n, q) = (b0.nrows(), b0.ncols());
    let mut out = CMatrix::zeros(n, n * q);
    let mut block = b0.clone();
    for k in 0..n {
        out.view_mut((0, k * q), (n, q)).copy_from(&block);
        block = a0 * &block;
    }
    out
}

/// `[C; CA; ...; CA^{N-1}]` over the ring.
pub fn observability_matrix(c: &RingMatrix, a: &RingMatrix) -> crate::Result<RingMatrix> {
    let n = a.rows();
    let mut out = c.clone();
    let mut block = c.clone();
    for _ in 1..n {
        block = block.mat_mul(a)?;
        out = out.vstack(&block)?;
    }
    Ok(out)
}

/// `[B, AB, ..., A^{N-1}B]` over the ring.
pub fn controllability_matrix(a: &RingMatrix, b: &RingMatrix) -> crate::Result<RingMatrix> {
    let n = a.rows();
    let mut out = b.clone();
    let mut block = b.clone();
    for _ in 1..n {
        block = a.mat_mul(&block)?;
        out = out.hstack(&block)?;
    }
    Ok(out)
}

/// Lexicographic `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

fn minor_is_nonzero(sub: &RingMatrix, det: &RingElement, tol: f64) -> bool {
    let scale: f64 = (0..sub.rows())
        .map(|i| (0..sub.cols()).map(|j| sub.get(i, j).l1_norm()).sum::<f64>())
        .product();
    scale > 0.0 && det.max_abs_coeff() > tol * scale
}

/// First nonzero maximal minor, scanning row subsets (`by_rows`) or column
/// subsets of a tall or wide matrix in lexicographic order.
fn first_nonzero_minor(m: &RingMatrix, by_rows: bool, tol: f64) -> Option<MinorWitness> {
    let (total, keep) = if by_rows {
        (m.rows(), m.cols())
    } else {
        (m.cols(), m.rows())
    };
    let fixed: Vec<usize> = (0..keep).collect();
    combinations(total, keep).find_map(|subset| {
        let (rows, cols) = if by_rows {
            (subset, fixed.clone())
        } else {
            (fixed.clone(), subset)
        };
        let sub = m.select(&rows, &cols);
        let det = sub.determinant().ok()?;
        minor_is_nonzero(&sub, &det, tol).then_some(MinorWitness { rows, cols })
    })
}

/// First maximal minor of a complex matrix that is numerically invertible.
fn first_unit_minor(m: &CMatrix, by_rows: bool, tol: f64) -> Option<MinorWitness> {
    let (total, keep) = if by_rows {
        (m.nrows(), m.ncols())
    } else {
        (m.ncols(), m.nrows())
    };
    let fixed: Vec<usize> = (0..keep).collect();
    combinations(total, keep).find_map(|subset| {
        let (rows, cols) = if by_rows {
            (subset, fixed.clone())
        } else {
            (fixed.clone(), subset)
        };
        let sub = m.select_rows(&rows).select_columns(&cols);
        linalg::is_invertible(&sub, tol).then_some(MinorWitness { rows, cols })
    })
}

pub fn observability_certificate(c: &RingMatrix, a: &RingMatrix) -> crate::Result<Certificate> {
    observability_certificate_with(c, a, &CertOptions::default())
}

/// Observability of `(C, A)`: injectivity of `f ↦ (Cf, CAf, CA²f, ...)`.
pub fn observability_certificate_with(
    c: &RingMatrix,
    a: &RingMatrix,
    opts: &CertOptions,
) -> crate::Result<Certificate> {
    let n = a.rows();
    let o = observability_matrix(c, a)?;
    let o0 = o.eval0();
    let z0_rank = linalg::numerical_rank(&o0, opts.rank_tol);
    let mut witness = Witness {
        z0_rank: Some(z0_rank),
        required_rank: Some(n),
        ..Witness::default()
    };
    let verdict = if z0_rank == n {
        witness.minor = first_unit_minor(&o0, true, opts.rank_tol);
        Verdict::SufficientAtZero
    } else if let Some(minor) = first_nonzero_minor(&o, true, opts.nonzero_tol) {
        witness.minor = Some(minor);
        Verdict::SufficientNonzeroMinor
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        property: Property::Observable,
        verdict,
        witness,
    })
}

pub fn controllability_certificate(a: &RingMatrix, b: &RingMatrix) -> crate::Result<Certificate> {
    controllability_certificate_with(a, b, &CertOptions::default())
}

/// Controllability of `(A, B)` in the module sense: the columns of
/// `[B, AB, ..., A^{N-1}B]` generate the free module of rank `N`.
pub fn controllability_certificate_with(
    a: &RingMatrix,
    b: &RingMatrix,
    opts: &CertOptions,
) -> crate::Result<Certificate> {
    let n = a.rows();
    let k0 = controllability_matrix(a, b)?.eval0();
    let z0_rank = linalg::numerical_rank(&k0, opts.rank_tol);
    let mut witness = Witness {
        z0_rank: Some(z0_rank),
        required_rank: Some(n),
        ..Witness::default()
    };
    let verdict = if z0_rank < n {
        Verdict::RefutedAtZero
    } else if let Some(minor) = first_unit_minor(&k0, false, opts.rank_tol) {
        witness.minor = Some(minor);
        Verdict::SufficientAtZero
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        property: Property::Controllable,
        verdict,
        witness,
    })
}

pub fn r_controllability_certificate(a: &RingMatrix, b: &RingMatrix) -> crate::Result<Certificate> {
    r_controllability_certificate_with(a, b, &CertOptions::default())
}

/// Ring-controllability: `f(I - ζA)⁻¹B ≡ 0` forces `f = 0` for row vectors
/// `f`, i.e. `[B, AB, ..., A^{N-1}B]` has full row rank over the fraction
/// field.
pub fn r_controllability_certificate_with(
    a: &RingMatrix,
    b: &RingMatrix,
    opts: &CertOptions,
) -> crate::Result<Certificate> {
    let n = a.rows();
    let k = controllability_matrix(a, b)?;
    let k0 = k.eval0();
    let z0_rank = linalg::numerical_rank(&k0, opts.rank_tol);
    let mut witness = Witness {
        z0_rank: Some(z0_rank),
        required_rank: Some(n),
        ..Witness::default()
    };
    let verdict = if z0_rank == n {
        witness.minor = first_unit_minor(&k0, false, opts.rank_tol);
        Verdict::SufficientAtZero
    } else if let Some(minor) = first_nonzero_minor(&k, false, opts.nonzero_tol) {
        witness.minor = Some(minor);
        Verdict::SufficientNonzeroMinor
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        property: Property::RControllable,
        verdict,
        witness,
    })
}

pub fn minimality_certificate(sys: &StateSpaceSystem) -> crate::Result<Certificate> {
    minimality_certificate_with(sys, &CertOptions::default())
}

/// Ring-minimality: observable and ring-controllable. Both legs sufficient
/// at `z = 0` gives `SufficientAtZero`; any inconclusive leg makes the whole
/// verdict inconclusive.
pub fn minimality_certificate_with(
    sys: &StateSpaceSystem,
    opts: &CertOptions,
) -> crate::Result<Certificate> {
    let obs = observability_certificate_with(sys.c(), sys.a(), opts)?;
    let ctrl = r_controllability_certificate_with(sys.a(), sys.b(), opts)?;
    let verdict = match (obs.verdict, ctrl.verdict) {
        (Verdict::SufficientAtZero, Verdict::SufficientAtZero) => Verdict::SufficientAtZero,
        (x, y) if x.is_sufficient() && y.is_sufficient() => Verdict::SufficientNonzeroMinor,
        _ => Verdict::Inconclusive,
    };
    Ok(Certificate {
        property: Property::RMinimal,
        verdict,
        witness: Witness {
            required_rank: Some(sys.dims().state),
            components: vec![obs, ctrl],
            ..Witness::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::TruncationSpec;
    use crate::ring::Complex;

    fn spec() -> TruncationSpec {
        TruncationSpec::new(2, 4).unwrap()
    }

    fn k(v: f64) -> RingMatrix {
        RingMatrix::scalar(RingElement::constant(spec(), Complex::new(v, 0.0)))
    }

    fn z1() -> RingMatrix {
        RingMatrix::scalar(RingElement::variable(spec(), 1).unwrap())
    }

    fn cm(rows: usize, cols: usize, v: &[f64]) -> CMatrix {
        CMatrix::from_row_iterator(rows, cols, v.iter().map(|&x| Complex::new(x, 0.0)))
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = combinations(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 3).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn kalman_rank_examples() {
        assert_eq!(kalman_rank_at_zero(&cm(1, 1, &[1.0]), &cm(1, 1, &[1.0])), 1);
        assert_eq!(kalman_rank_at_zero(&cm(1, 1, &[0.0]), &cm(1, 1, &[1.0])), 0);
        assert_eq!(
            kalman_rank_at_zero(&cm(1, 2, &[1.0, 0.0]), &cm(2, 2, &[0.0, 1.0, 0.0, 0.0])),
            2
        );
        assert_eq!(
            kalman_rank_at_zero(&cm(1, 2, &[0.0, 1.0]), &cm(2, 2, &[0.0, 1.0, 0.0, 0.0])),
            1
        );
    }

    #[test]
    fn observability_examples() {
        let cert = observability_certificate(&z1(), &k(1.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::SufficientNonzeroMinor);
        assert_eq!(cert.witness.z0_rank, Some(0));
        assert_eq!(cert.witness.minor, Some(MinorWitness { rows: vec![0], cols: vec![0] }));

        let cert = observability_certificate(&k(1.0), &k(1.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::SufficientAtZero);
        assert_eq!(cert.witness.z0_rank, Some(1));

        let cert = observability_certificate(&k(0.0), &k(1.0)).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(cert.witness.minor.is_none());
    }

    #[test]
    fn controllability_examples() {
        assert_eq!(
            controllability_certificate(&k(0.0), &k(1.0)).unwrap().verdict,
            Verdict::SufficientAtZero
        );
        assert_eq!(
            controllability_certificate(&k(1.0), &z1()).unwrap().verdict,
            Verdict::RefutedAtZero
        );
        let s = spec();
        let a = RingMatrix::zeros(s, 2, 2);
        let b = RingMatrix::from_rows(s, vec![vec![RingElement::one(s)], vec![RingElement::zero(s)]]).unwrap();
        let cert = controllability_certificate(&a, &b).unwrap();
        assert_eq!(cert.verdict, Verdict::RefutedAtZero);
        assert_eq!(cert.witness.z0_rank, Some(1));
    }

    #[test]
    fn r_controllability_examples() {
        let cert = r_controllability_certificate(&k(1.0), &z1()).unwrap();
        assert_eq!(cert.verdict, Verdict::SufficientNonzeroMinor);
        assert_eq!(
            r_controllability_certificate(&k(0.5), &k(1.0)).unwrap().verdict,
            Verdict::SufficientAtZero
        );
        assert_eq!(
            r_controllability_certificate(&k(0.5), &k(0.0)).unwrap().verdict,
            Verdict::Inconclusive
        );
    }

    #[test]
    fn minimality_examples() {
        let sys = StateSpaceSystem::new(k(0.5), k(1.0), k(1.0), k(0.0)).unwrap();
        assert_eq!(minimality_certificate(&sys).unwrap().verdict, Verdict::SufficientAtZero);
        let sys = StateSpaceSystem::new(k(1.0), k(1.0), z1(), k(0.0)).unwrap();
        let cert = minimality_certificate(&sys).unwrap();
        assert_eq!(cert.verdict, Verdict::SufficientNonzeroMinor);
        assert_eq!(cert.witness.components[0].verdict, Verdict::SufficientNonzeroMinor);
        assert_eq!(cert.witness.components[1].verdict, Verdict::SufficientAtZero);
        let sys = StateSpaceSystem::new(k(1.0), k(1.0), k(0.0), k(0.0)).unwrap();
        assert_eq!(minimality_certificate(&sys).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn cancellation_residue_is_not_a_certificate() {
        // rows (0.1, 0.3)·z₁ and (0.7, 2.1)·z₁ are dependent, but the float
        // determinant leaves a residue of about 3e-17
        let s = spec();
        let x = RingElement::variable(s, 1).unwrap();
        let e = |v: f64| x.scale(Complex::new(v, 0.0));
        let c = RingMatrix::from_rows(s, vec![vec![e(0.1), e(0.3)], vec![e(0.7), e(2.1)]]).unwrap();
        assert!(!c.determinant().unwrap().is_zero());
        let a = RingMatrix::zeros(s, 2, 2);
        let cert = observability_certificate(&c, &a).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn certificate_json_shape() {
        let cert = observability_certificate(&z1(), &k(1.0)).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["property"], "Observable");
        assert_eq!(v["verdict"], "SufficientNonzeroMinor");
        assert_eq!(v["witness"]["z0_rank"], 0);
        assert_eq!(v["witness"]["minor"]["rows"][0], 0);
    }
}
