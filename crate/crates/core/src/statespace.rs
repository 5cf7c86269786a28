//! Discrete-time state-space systems with ring-valued coefficients.
//!
//! ```text
//! x_{n+1} = A◊x_n + B◊u_n
//! y_n     = C◊x_n + D◊u_n
//! ```
//!
//! with transfer function `H(ζ) = D + ζ C (I - ζA)⁻¹ B` and Markov
//! parameters `H₀ = D`, `H_n = C A^{n-1} B`. Degree truncation is a ring
//! homomorphism, so every identity of the realization calculus holds exactly
//! at the coefficient level. Pointwise evaluation of a truncated product only
//! matches the product of evaluations when the degrees fit under the cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::multiindex::TruncationSpec;
use crate::ring::{Complex, EvalPoint, RingElement};
use crate::ringmatrix::RingMatrix;

/// `|det(I - ζA(z))|` relative to its Hadamard bound below which the pencil
/// counts as singular.
pub const SINGULAR_PENCIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub state: usize,
    pub input: usize,
    pub output: usize,
}

/// The quadruple `(A, B, C, D)` with shapes `N×N`, `N×q`, `p×N`, `p×q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpaceSystem {
    a: RingMatrix,
    b: RingMatrix,
    c: RingMatrix,
    d: RingMatrix,
}

impl StateSpaceSystem {
    pub fn new(a: RingMatrix, b: RingMatrix, c: RingMatrix, d: RingMatrix) -> Result<Self> {
        let spec = a.spec();
        for m in [&b, &c, &d] {
            if m.spec() != spec {
                return Err(Error::SpecMismatch {
                    left: spec,
                    right: m.spec(),
                });
            }
        }
        let n = a.rows();
        let (q, p) = (b.cols(), c.rows());
        let ok = a.cols() == n && b.rows() == n && c.cols() == n && d.shape() == (p, q);
        if !ok || n == 0 || p == 0 || q == 0 {
            return Err(Error::ShapeMismatch(format!(
                "A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// Static gain `D` realized with a single idle state.
    pub fn static_gain(d: RingMatrix) -> Result<Self> {
        let spec = d.spec();
        let (p, q) = d.shape();
        Self::new(
            RingMatrix::zeros(spec, 1, 1),
            RingMatrix::zeros(spec, 1, q),
            RingMatrix::zeros(spec, p, 1),
            d,
        )
    }

    pub fn a(&self) -> &RingMatrix {
        &self.a
    }
    pub fn b(&self) -> &RingMatrix {
        &self.b
    }
    pub fn c(&self) -> &RingMatrix {
        &self.c
    }
    pub fn d(&self) -> &RingMatrix {
        &self.d
    }

    pub fn spec(&self) -> TruncationSpec {
        self.a.spec()
    }

    pub fn dims(&self) -> Dims {
        Dims {
            state: self.a.rows(),
            input: self.b.cols(),
            output: self.c.rows(),
        }
    }

    /// The `z = 0` system `(A(0), B(0), C(0), D(0))`.
    pub fn eval0(&self) -> [CMatrix; 4] {
        [self.a.eval0(), self.b.eval0(), self.c.eval0(), self.d.eval0()]
    }

    /// `-H`, realized by negating `C` and `D`.
    pub fn negated(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.negate(),
            d: self.d.negate(),
        }
    }

    /// Runs the Wick recursion for `steps` steps.
    ///
    /// Returns states `x_0..x_steps` and outputs `y_0..y_{steps-1}`. Inputs
    /// past the end of `u` are zero; `x0 = None` starts from rest.
    pub fn simulate(
        &self,
        u: &SignalSequence,
        x0: Option<&RingMatrix>,
        steps: usize,
    ) -> Result<Simulation> {
        let spec = self.spec();
        let dims = self.dims();
        if !u.is_empty() {
            if u.spec() != spec {
                return Err(Error::SpecMismatch {
                    left: spec,
                    right: u.spec(),
                });
            }
            if u.dim() != dims.input {
                return Err(Error::DimensionMismatch {
                    expected: dims.input,
                    got: u.dim(),
                });
            }
        }
        let mut x = match x0 {
            Some(x0) => {
                if x0.shape() != (dims.state, 1) {
                    return Err(Error::ShapeMismatch(format!(
                        "initial state {:?}, expected ({}, 1)",
                        x0.shape(),
                        dims.state
                    )));
                }
                if x0.spec() != spec {
                    return Err(Error::SpecMismatch {
                        left: spec,
                        right: x0.spec(),
                    });
                }
                x0.clone()
            }
            None => RingMatrix::zeros(spec, dims.state, 1),
        };
        let zero_u = RingMatrix::zeros(spec, dims.input, 1);
        let mut states = Vec::with_capacity(steps + 1);
        let mut outputs = Vec::with_capacity(steps);
        for n in 0..steps {
            let un = u.get(n).unwrap_or(&zero_u);
            outputs.push(self.c.mat_mul(&x)?.add(&self.d.mat_mul(un)?)?);
            let next = self.a.mat_mul(&x)?.add(&self.b.mat_mul(un)?)?;
            states.push(std::mem::replace(&mut x, next));
        }
        states.push(x);
        Ok(Simulation { states, outputs })
    }

    /// `[D, CB, CAB, ..., CA^{T-1}B]`.
    pub fn markov(&self, horizon: usize) -> Result<TransferSeries> {
        let mut params = Vec::with_capacity(horizon + 1);
        params.push(self.d.clone());
        let mut ak_b = self.b.clone();
        for n in 1..=horizon {
            params.push(self.c.mat_mul(&ak_b)?);
            if n < horizon {
                ak_b = self.a.mat_mul(&ak_b)?;
            }
        }
        Ok(TransferSeries { params })
    }

    /// `D(z) + ζ C(z) (I - ζA(z))⁻¹ B(z)` by complex linear algebra.
    pub fn tf_eval(&self, zeta: Complex, z: &EvalPoint) -> Result<CMatrix> {
        let [a, b, c, d] = self.evaluate(z)?;
        transfer_at(&a, &b, &c, &d, zeta)
    }

    /// Entrywise evaluation of `(A, B, C, D)` at `z`.
    pub fn evaluate(&self, z: &EvalPoint) -> Result<[CMatrix; 4]> {
        Ok([
            self.a.evaluate(z)?,
            self.b.evaluate(z)?,
            self.c.evaluate(z)?,
            self.d.evaluate(z)?,
        ])
    }

    /// `|ζ| ρ(A(z))`; the Markov series at `(ζ, z)` converges when below 1.
    pub fn convergence_ratio(&self, zeta: Complex, z: &EvalPoint) -> Result<f64> {
        Ok(zeta.norm() * linalg::spectral_radius(&self.a.evaluate(z)?))
    }

    /// `ζ` is admissible when `det(I - ζA(0)) ≠ 0`; then `I - ζA` is
    /// invertible over the ring.
    pub fn is_admissible(&self, zeta: Complex) -> bool {
        let n = self.dims().state;
        let pencil = linalg::identity(n) - self.a.eval0() * zeta;
        linalg::relative_det(&pencil) > SINGULAR_PENCIL_TOL
    }

    /// `(I - ζA)⁻¹` over the ring for an admissible numeric `ζ`.
    pub fn resolvent(&self, zeta: Complex) -> Result<RingMatrix> {
        let n = self.dims().state;
        let pencil = RingMatrix::identity(self.spec(), n).sub(&self.a.scale(zeta))?;
        pencil.mat_inverse()
    }

    /// `H(ζ)` as a ring-valued matrix, `D + ζ C (I - ζA)⁻¹ B`.
    pub fn tf_ring(&self, zeta: Complex) -> Result<RingMatrix> {
        let r = self.resolvent(zeta)?;
        self.d
            .add(&self.c.mat_mul(&r)?.mat_mul(&self.b)?.scale(zeta))
    }
}

/// `D + ζ C (I - ζA)⁻¹ B` for complex matrices.
pub fn transfer_at(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix, zeta: Complex) -> Result<CMatrix> {
    let n = a.nrows();
    let pencil = linalg::identity(n) - a * zeta;
    let rel = linalg::relative_det(&pencil);
    if rel <= SINGULAR_PENCIL_TOL {
        return Err(Error::SingularAtPoint { det: rel });
    }
    let x = pencil
        .lu()
        .solve(b)
        .ok_or(Error::SingularAtPoint { det: rel })?;
    Ok(d + c * x * zeta)
}

/// Column vectors `u_0, u_1, ...` of a common dimension and truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSequence {
    values: Vec<RingMatrix>,
}

impl SignalSequence {
    pub fn new(values: Vec<RingMatrix>) -> Result<Self> {
        if let Some(first) = values.first() {
            let (dim, spec) = (first.rows(), first.spec());
            for v in &values {
                if v.cols() != 1 || v.rows() != dim {
                    return Err(Error::ShapeMismatch(format!(
                        "signal entry {:?}, expected ({dim}, 1)",
                        v.shape()
                    )));
                }
                if v.spec() != spec {
                    return Err(Error::SpecMismatch {
                        left: spec,
                        right: v.spec(),
                    });
                }
            }
        }
        Ok(Self { values })
    }

    /// `u_0 = v`, all later inputs zero.
    pub fn impulse(v: RingMatrix) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn values(&self) -> &[RingMatrix] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&RingMatrix> {
        self.values.get(n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, RingMatrix::rows)
    }

    fn spec(&self) -> TruncationSpec {
        self.values[0].spec()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// `x_0 .. x_T`.
    pub states: Vec<RingMatrix>,
    /// `y_0 .. y_{T-1}`.
    pub outputs: Vec<RingMatrix>,
}

/// Markov parameters `H_0, H_1, ..., H_T`, the coefficients of `H(ζ)` in `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSeries {
    params: Vec<RingMatrix>,
}

/// A truncated series sum together with a geometric estimate of the omitted
/// tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEval {
    pub value: CMatrix,
    /// `None` when the last terms do not decay.
    pub tail_bound: Option<f64>,
}

impl TransferSeries {
    pub fn new(params: Vec<RingMatrix>) -> Result<Self> {
        let Some(first) = params.first() else {
            return Err(Error::ShapeMismatch("empty transfer series".into()));
        };
        let (shape, spec) = (first.shape(), first.spec());
        for h in &params {
            if h.shape() != shape {
                return Err(Error::ShapeMismatch(format!("{:?} vs {shape:?}", h.shape())));
            }
            if h.spec() != spec {
                return Err(Error::SpecMismatch {
                    left: spec,
                    right: h.spec(),
                });
            }
        }
        Ok(Self { params })
    }

    pub fn params(&self) -> &[RingMatrix] {
        &self.params
    }

    pub fn get(&self, n: usize) -> Option<&RingMatrix> {
        self.params.get(n)
    }

    /// Index of the last stored parameter.
    pub fn horizon(&self) -> usize {
        self.params.len() - 1
    }

    pub fn spec(&self) -> TruncationSpec {
        self.params[0].spec()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.params[0].shape()
    }

    /// Backward shift `R₀f = (f(ζ) - f(0))/ζ`: drops `H_0`.
    ///
    /// The shift of a one-term series is the zero series of the same shape.
    pub fn r0_shift(&self) -> TransferSeries {
        if self.params.len() == 1 {
            let (p, q) = self.shape();
            return TransferSeries {
                params: vec![RingMatrix::zeros(self.spec(), p, q)],
            };
        }
        TransferSeries {
            params: self.params[1..].to_vec(),
        }
    }

    /// `Σ_{n ≤ T} ζⁿ H_n(z)`.
    pub fn eval(&self, zeta: Complex, z: &EvalPoint) -> Result<SeriesEval> {
        let mut value = CMatrix::zeros(self.shape().0, self.shape().1);
        let mut norms = Vec::with_capacity(self.params.len());
        let mut power = Complex::new(1.0, 0.0);
        for h in &self.params {
            let term = h.evaluate(z)? * power;
            norms.push(term.norm());
            value += term;
            power *= zeta;
        }
        Ok(SeriesEval {
            value,
            tail_bound: geometric_tail(&norms),
        })
    }

    /// Output of the Markov convolution `y_n = Σ_{j ≤ n} H_{n-j} ◊ u_j`,
    /// valid for `n` up to the horizon.
    pub fn convolve(&self, u: &SignalSequence, steps: usize) -> Result<Vec<RingMatrix>> {
        if steps > self.params.len() {
            return Err(Error::Precondition(format!(
                "{steps} outputs need {steps} Markov parameters, have {}",
                self.params.len()
            )));
        }
        let (p, q) = self.shape();
        let spec = self.spec();
        if !u.is_empty() && u.dim() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                got: u.dim(),
            });
        }
        let mut out = Vec::with_capacity(steps);
        for n in 0..steps {
            let mut acc = RingMatrix::zeros(spec, p, 1);
            for j in 0..=n.min(u.len().saturating_sub(1)) {
                if let Some(uj) = u.get(j) {
                    acc = acc.add(&self.params[n - j].mat_mul(uj)?)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// `‖t_T‖ r/(1 - r)` with `r` the largest ratio among the last three
/// consecutive term norms.
fn geometric_tail(norms: &[f64]) -> Option<f64> {
    let last = *norms.last()?;
    if last == 0.0 {
        return Some(0.0);
    }
    let k = norms.len();
    if k < 2 {
        return None;
    }
    let mut ratio: f64 = 0.0;
    for i in k.saturating_sub(3).max(1)..k {
        if norms[i - 1] == 0.0 {
            return None;
        }
        ratio = ratio.max(norms[i] / norms[i - 1]);
    }
    (ratio < 1.0).then(|| last * ratio / (1.0 - ratio))
}

/// Realization of `H⁻¹` for square `H` with `D(0)` invertible:
/// `(A - B D⁻¹ C, B D⁻¹, -D⁻¹ C, D⁻¹)`.
pub fn realize_inverse(sys: &StateSpaceSystem) -> Result<StateSpaceSystem> {
    realize_inverse_with_tol(sys, linalg::DEFAULT_RANK_TOL)
}

/// [`realize_inverse`] with a custom relative singular-value threshold for
/// `D(0)`.
pub fn realize_inverse_with_tol(sys: &StateSpaceSystem, tol: f64) -> Result<StateSpaceSystem> {
    let dims = sys.dims();
    if dims.input != dims.output {
        return Err(Error::ShapeMismatch(format!(
            "inverse needs a square transfer function, got {}x{}",
            dims.output, dims.input
        )));
    }
    let d_inv = sys.d.mat_inverse_with_tol(tol)?;
    let b_dinv = sys.b.mat_mul(&d_inv)?;
    let a_cross = sys.a.sub(&b_dinv.mat_mul(&sys.c)?)?;
    let c_new = d_inv.mat_mul(&sys.c)?.negate();
    StateSpaceSystem::new(a_cross, b_dinv, c_new, d_inv)
}

/// Realization of the product `H₁H₂` on `N₁ + N₂` states:
/// `A = [[A₁, B₁C₂], [0, A₂]]`, `B = [B₁D₂; B₂]`, `C = [C₁, D₁C₂]`, `D = D₁D₂`.
pub fn realize_cascade(s1: &StateSpaceSystem, s2: &StateSpaceSystem) -> Result<StateSpaceSystem> {
    let (d1, d2) = (s1.dims(), s2.dims());
    if d1.input != d2.output {
        return Err(Error::ShapeMismatch(format!(
            "cascade needs q₁ = p₂, got {} and {}",
            d1.input, d2.output
        )));
    }
    let spec = s1.spec();
    let a = RingMatrix::block(
        &s1.a,
        &s1.b.mat_mul(&s2.c)?,
        &RingMatrix::zeros(spec, d2.state, d1.state),
        &s2.a,
    )?;
    let b = s1.b.mat_mul(&s2.d)?.vstack(&s2.b)?;
    let c = s1.c.hstack(&s1.d.mat_mul(&s2.c)?)?;
    let d = s1.d.mat_mul(&s2.d)?;
    StateSpaceSystem::new(a, b, c, d)
}

/// Realization of `H₁ + H₂`: `diag(A₁, A₂)`, `[B₁; B₂]`, `[C₁ C₂]`, `D₁ + D₂`.
pub fn realize_sum(s1: &StateSpaceSystem, s2: &StateSpaceSystem) -> Result<StateSpaceSystem> {
    let (d1, d2) = (s1.dims(), s2.dims());
    if (d1.output, d1.input) != (d2.output, d2.input) {
        return Err(Error::ShapeMismatch(format!(
            "sum of {}x{} and {}x{}",
            d1.output, d1.input, d2.output, d2.input
        )));
    }
    StateSpaceSystem::new(
        RingMatrix::block_diag(&s1.a, &s2.a)?,
        s1.b.vstack(&s2.b)?,
        s1.c.hstack(&s2.c)?,
        s1.d.add(&s2.d)?,
    )
}

/// Realization of the block row `[H₁ H₂]` (equal output dimension).
pub fn realize_concat_rows(s1: &StateSpaceSystem, s2: &StateSpaceSystem) -> Result<StateSpaceSystem> {
    let (d1, d2) = (s1.dims(), s2.dims());
    if d1.output != d2.output {
        return Err(Error::ShapeMismatch(format!(
            "[H₁ H₂] needs equal output dimension, got {} and {}",
            d1.output, d2.output
        )));
    }
    StateSpaceSystem::new(
        RingMatrix::block_diag(&s1.a, &s2.a)?,
        RingMatrix::block_diag(&s1.b, &s2.b)?,
        s1.c.hstack(&s2.c)?,
        s1.d.hstack(&s2.d)?,
    )
}

/// Realization of the block column `[H₁; H₂]` (equal input dimension).
pub fn realize_concat_cols(s1: &StateSpaceSystem, s2: &StateSpaceSystem) -> Result<StateSpaceSystem> {
    let (d1, d2) = (s1.dims(), s2.dims());
    if d1.input != d2.input {
        return Err(Error::ShapeMismatch(format!(
            "[H₁; H₂] needs equal input dimension, got {} and {}",
            d1.input, d2.input
        )));
    }
    StateSpaceSystem::new(
        RingMatrix::block_diag(&s1.a, &s2.a)?,
        s1.b.vstack(&s2.b)?,
        RingMatrix::block_diag(&s1.c, &s2.c)?,
        s1.d.vstack(&s2.d)?,
    )
}

/// Relative tolerance for the recursion certificate in
/// [`realize_from_recursion`].
pub const RECURSION_TOL: f64 = 1e-9;

/// Shift realization of a scalar series from a recursion certificate.
///
/// With the row `φ = (1, R₀H, ..., R₀^{M-1}H)`, the certificate `A` must
/// satisfy `R₀φ = φA`. It is checked coefficient by coefficient in `ζ` for
/// every `n` the horizon allows (`n ≤ T - M`), to a residual of
/// [`RECURSION_TOL`] relative to the largest coefficient in play. The result
/// is `(A, e₂, φ(0), H₀)`, i.e. `C = (1, H₁, ..., H_{M-1})`.
pub fn realize_from_recursion(
    h: &TransferSeries,
    m: usize,
    arec: &RingMatrix,
) -> Result<StateSpaceSystem> {
    if h.shape() != (1, 1) {
        return Err(Error::ShapeMismatch(format!(
            "shift realization is scalar-only, got {:?}",
            h.shape()
        )));
    }
    if m < 2 || arec.shape() != (m, m) {
        return Err(Error::ShapeMismatch(format!(
            "certificate must be MxM with M >= 2, got M = {m}, shape {:?}",
            arec.shape()
        )));
    }
    let spec = h.spec();
    if arec.spec() != spec {
        return Err(Error::SpecMismatch {
            left: spec,
            right: arec.spec(),
        });
    }
    let horizon = h.horizon();
    if horizon < m {
        return Err(Error::Precondition(format!(
            "horizon {horizon} too short to check an order-{m} recursion"
        )));
    }
    let hn = |n: usize| h.get(n).expect("index within horizon").get(0, 0).clone();
    // (φ_k)_n: the constant series 1 for k = 0, H_{n+k} otherwise
    let phi = |k: usize, n: usize| -> RingElement {
        match (k, n) {
            (0, 0) => RingElement::one(spec),
            (0, _) => RingElement::zero(spec),
            _ => hn(n + k),
        }
    };
    let scale = 1.0
        + h.params()
            .iter()
            .map(RingMatrix::max_abs_coeff)
            .fold(arec.max_abs_coeff(), f64::max);
    for n in 0..=horizon - m {
        for col in 0..m {
            let lhs = phi(col, n + 1);
            let mut rhs = RingElement::zero(spec);
            for row in 0..m {
                rhs = &rhs + &(&phi(row, n) * arec.get(row, col));
            }
            let residual = (&lhs - &rhs).max_abs_coeff();
            if residual > RECURSION_TOL * scale * scale {
                return Err(Error::InvalidRecursion {
                    column: col,
                    n,
                    residual,
                });
            }
        }
    }
    let c = RingMatrix::from_fn(spec, 1, m, |_, k| phi(k, 0));
    let b = RingMatrix::from_fn(spec, m, 1, |i, _| {
        if i == 1 {
            RingElement::one(spec)
        } else {
            RingElement::zero(spec)
        }
    });
    let d = RingMatrix::scalar(hn(0));
    StateSpaceSystem::new(arec.clone(), b, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: usize, d: u32) -> TruncationSpec {
        TruncationSpec::new(m, d).unwrap()
    }

    fn k(s: TruncationSpec, v: f64) -> RingMatrix {
        RingMatrix::scalar(RingElement::constant(s, Complex::new(v, 0.0)))
    }

    fn zvar(s: TruncationSpec, j: usize) -> RingMatrix {
        RingMatrix::scalar(RingElement::variable(s, j).unwrap())
    }

    fn scalar_sys(a: RingMatrix, b: RingMatrix, c: RingMatrix, d: RingMatrix) -> StateSpaceSystem {
        StateSpaceSystem::new(a, b, c, d).unwrap()
    }

    fn c1(v: f64) -> Complex {
        Complex::new(v, 0.0)
    }

    #[test]
    fn shape_validation() {
        let s = spec(1, 2);
        let bad = StateSpaceSystem::new(
            RingMatrix::zeros(s, 2, 2),
            RingMatrix::zeros(s, 2, 1),
            RingMatrix::zeros(s, 1, 3),
            RingMatrix::zeros(s, 1, 1),
        );
        assert!(matches!(bad, Err(Error::ShapeMismatch(_))));
        let foreign = StateSpaceSystem::new(k(s, 0.0), k(s, 1.0), k(spec(2, 2), 1.0), k(s, 0.0));
        assert!(matches!(foreign, Err(Error::SpecMismatch { .. })));
    }

    #[test]
    fn simulate_one_step_delay() {
        let s = spec(1, 3);
        let sys = scalar_sys(k(s, 0.0), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let u = SignalSequence::impulse(zvar(s, 1)).unwrap();
        let sim = sys.simulate(&u, None, 3).unwrap();
        assert!(sim.outputs[0].is_zero());
        assert_eq!(sim.outputs[1], zvar(s, 1));
        assert!(sim.outputs[2].is_zero());
        assert_eq!(sim.states.len(), 4);
    }

    #[test]
    fn simulate_geometric() {
        let s = spec(1, 6);
        let sys = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let u = SignalSequence::impulse(k(s, 1.0)).unwrap();
        let sim = sys.simulate(&u, None, 6).unwrap();
        for n in 1..6 {
            let expected = RingElement::variable(s, 1).unwrap().pow(n as u32 - 1);
            assert_eq!(sim.outputs[n].get(0, 0), &expected);
        }
    }

    #[test]
    fn simulate_rejects_bad_input() {
        let s = spec(1, 2);
        let sys = scalar_sys(k(s, 0.0), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let u = SignalSequence::impulse(RingMatrix::zeros(s, 2, 1)).unwrap();
        assert!(matches!(
            sys.simulate(&u, None, 2),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
        let x0 = RingMatrix::zeros(s, 2, 1);
        let u = SignalSequence::new(vec![]).unwrap();
        assert!(sys.simulate(&u, Some(&x0), 2).is_err());
    }

    #[test]
    fn markov_examples() {
        let s = spec(1, 4);
        let sys = scalar_sys(k(s, 0.5), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let h = sys.markov(3).unwrap();
        let vals: Vec<Complex> = h.params().iter().map(|m| m.get(0, 0).constant_term()).collect();
        assert_eq!(vals, vec![c1(0.0), c1(1.0), c1(0.5), c1(0.25)]);

        let d_only = StateSpaceSystem::static_gain(k(s, 2.0)).unwrap();
        let h = d_only.markov(3).unwrap();
        assert_eq!(h.get(0).unwrap(), &k(s, 2.0));
        assert!(h.params()[1..].iter().all(RingMatrix::is_zero));

        let geo = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let h = geo.markov(4).unwrap();
        for n in 1..=4 {
            assert_eq!(h.get(n).unwrap().get(0, 0), &RingElement::variable(s, 1).unwrap().pow(n as u32 - 1));
        }
    }

    #[test]
    fn tf_eval_examples() {
        let s = spec(1, 4);
        let geo = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let z = EvalPoint::from_real(&[0.5]);
        let v = geo.tf_eval(c1(0.5), &z).unwrap()[(0, 0)];
        assert!((v - c1(2.0 / 3.0)).norm() < 1e-15);
        let sys = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 3.0), k(s, 7.0));
        assert_eq!(sys.tf_eval(c1(0.0), &z).unwrap()[(0, 0)], c1(7.0));
        // pole at ζ = 1/A(z) = 2
        assert!(matches!(geo.tf_eval(c1(2.0), &z), Err(Error::SingularAtPoint { .. })));
    }

    #[test]
    fn series_eval_examples() {
        let s = spec(1, 2);
        let geo = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let z = EvalPoint::from_real(&[0.5]);
        // truncation keeps z₁^n only up to degree 2, so compare against the
        // untruncated closed form with a wide enough cutoff instead
        let wide = scalar_sys(
            zvar(spec(1, 40), 1),
            k(spec(1, 40), 1.0),
            k(spec(1, 40), 1.0),
            k(spec(1, 40), 0.0),
        );
        let series = wide.markov(40).unwrap().eval(c1(0.25), &z).unwrap();
        let closed = wide.tf_eval(c1(0.25), &z).unwrap();
        assert!((series.value[(0, 0)] - closed[(0, 0)]).norm() < 1e-8);
        let tail = series.tail_bound.unwrap();
        assert!((series.value[(0, 0)] - closed[(0, 0)]).norm() <= tail * 1.01 + 1e-300);

        let h = geo.markov(5).unwrap();
        let d = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 3.0)).markov(0).unwrap();
        assert_eq!(d.eval(c1(0.3), &z).unwrap().value[(0, 0)], c1(3.0));
        assert_eq!(h.eval(c1(0.0), &z).unwrap().value[(0, 0)], c1(0.0));
    }

    #[test]
    fn r0_shift_examples() {
        let s = spec(1, 3);
        let sys = scalar_sys(zvar(s, 1), k(s, 2.0), k(s, 1.0), k(s, 5.0));
        let h = sys.markov(3).unwrap();
        let r = h.r0_shift();
        assert_eq!(r.params(), &h.params()[1..]);
        let constant = TransferSeries::new(vec![k(s, 4.0)]).unwrap();
        assert!(constant.r0_shift().params().iter().all(RingMatrix::is_zero));
    }

    #[test]
    fn r0_powers_match_shifted_resolvent() {
        // coefficient j of C(I - ζA)⁻¹ A^{n-1} B is C A^{n-1+j} B
        let s = spec(2, 5);
        let a = RingMatrix::from_rows(
            s,
            vec![
                vec![RingElement::variable(s, 1).unwrap(), RingElement::one(s)],
                vec![RingElement::constant(s, c1(0.3)), RingElement::variable(s, 2).unwrap()],
            ],
        )
        .unwrap();
        let b = RingMatrix::from_rows(s, vec![vec![RingElement::one(s)], vec![RingElement::variable(s, 2).unwrap()]]).unwrap();
        let c = RingMatrix::from_rows(s, vec![vec![RingElement::constant(s, c1(2.0)), RingElement::variable(s, 1).unwrap()]]).unwrap();
        let sys = StateSpaceSystem::new(a.clone(), b.clone(), c.clone(), k(s, 1.0)).unwrap();
        let h = sys.markov(8).unwrap();
        let mut shifted = h.clone();
        for n in 1..=3u32 {
            shifted = shifted.r0_shift();
            let an1_b = a.pow(n - 1).unwrap().mat_mul(&b).unwrap();
            let inner = StateSpaceSystem::new(a.clone(), an1_b, c.clone(), k(s, 0.0)).unwrap().markov(6).unwrap();
            for j in 0..shifted.params().len().min(6) {
                // inner has the ζ prefactor, so its H_{j+1} is coefficient j
                assert_eq!(shifted.get(j).unwrap(), inner.get(j + 1).unwrap());
            }
        }
    }

    #[test]
    fn inverse_realization_scalar() {
        let s = spec(1, 2);
        let sys = scalar_sys(k(s, 0.0), k(s, 1.0), k(s, 1.0), k(s, 1.0));
        let inv = realize_inverse(&sys).unwrap();
        let z = EvalPoint::zeros(1);
        for i in 0..10 {
            let zeta = c1(-0.9 + 0.2 * i as f64);
            let h = inv.tf_eval(zeta, &z).unwrap()[(0, 0)];
            assert!((h - (c1(1.0) + zeta).inv()).norm() < 1e-12);
        }
        let gain = StateSpaceSystem::static_gain(k(s, 1.0)).unwrap();
        assert_eq!(realize_inverse(&gain).unwrap().d(), &k(s, 1.0));
        let singular = scalar_sys(k(s, 0.0), k(s, 1.0), k(s, 1.0), zvar(s, 1));
        assert!(matches!(realize_inverse(&singular), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn double_inverse_same_values() {
        let s = spec(1, 3);
        let sys = scalar_sys(k(s, 0.4), k(s, 2.0), k(s, -1.0), k(s, 3.0));
        let back = realize_inverse(&realize_inverse(&sys).unwrap()).unwrap();
        let z = EvalPoint::from_real(&[0.2]);
        for zeta in [0.1, -0.3, 0.7] {
            let a = sys.tf_eval(c1(zeta), &z).unwrap();
            let b = back.tf_eval(c1(zeta), &z).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn cascade_and_sum_shapes() {
        let s = spec(1, 2);
        let one = scalar_sys(k(s, 0.5), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let two = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 2.0), k(s, 1.0));
        let casc = realize_cascade(&one, &two).unwrap();
        assert_eq!(casc.dims().state, 2);
        let id = StateSpaceSystem::static_gain(k(s, 1.0)).unwrap();
        let z = EvalPoint::from_real(&[0.1]);
        let with_id = realize_cascade(&one, &id).unwrap();
        for zeta in [0.1, 0.5] {
            let a = one.tf_eval(c1(zeta), &z).unwrap();
            assert!((with_id.tf_eval(c1(zeta), &z).unwrap() - &a).norm() < 1e-14);
            let zero = realize_sum(&one, &one.negated()).unwrap();
            assert!(zero.tf_eval(c1(zeta), &z).unwrap().norm() < 1e-14);
        }
        let wide = StateSpaceSystem::static_gain(RingMatrix::zeros(s, 1, 2)).unwrap();
        assert!(realize_sum(&one, &wide).is_err());
        assert!(realize_cascade(&wide, &one).is_err());
        let rows = realize_concat_rows(&one, &wide).unwrap();
        assert_eq!((rows.dims().output, rows.dims().input), (1, 3));
        assert!(realize_concat_cols(&one, &wide).is_err());
        let cols = realize_concat_cols(&one, &two).unwrap();
        assert_eq!((cols.dims().output, cols.dims().input, cols.dims().state), (2, 1, 2));
    }

    #[test]
    fn recursion_geometric() {
        let s = spec(1, 2);
        let a: f64 = 0.7;
        // H_0 = 0, H_n = a^{n-1}
        let params: Vec<RingMatrix> =
            (0..10).map(|n| if n == 0 { k(s, 0.0) } else { k(s, a.powi(n - 1)) }).collect();
        let h = TransferSeries::new(params).unwrap();
        let arec = RingMatrix::from_complex(
            s,
            &CMatrix::from_row_slice(2, 2, &[c1(0.0), c1(0.0), c1(0.0), c1(a)]),
        );
        let sys = realize_from_recursion(&h, 2, &arec).unwrap();
        let back = sys.markov(9).unwrap();
        for n in 0..=9 {
            assert!(back.get(n).unwrap().sub(h.get(n).unwrap()).unwrap().max_abs_coeff() < 1e-14);
        }
        let mut wrong = arec.clone();
        wrong.set(1, 1, RingElement::constant(s, c1(0.71)));
        assert!(matches!(
            realize_from_recursion(&h, 2, &wrong),
            Err(Error::InvalidRecursion { column: 1, n: 0, .. })
        ));
        assert!(matches!(
            realize_from_recursion(&h, 1, &RingMatrix::zeros(s, 1, 1)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn convolution_matches_simulation() {
        let s = spec(2, 4);
        let sys = scalar_sys(zvar(s, 1), zvar(s, 2), k(s, 1.0), k(s, 0.5));
        let u = SignalSequence::new(vec![k(s, 1.0), zvar(s, 2), k(s, -2.0)]).unwrap();
        let sim = sys.simulate(&u, None, 6).unwrap();
        let conv = sys.markov(6).unwrap().convolve(&u, 6).unwrap();
        assert_eq!(conv.len(), 6);
        for (a, b) in sim.outputs.iter().zip(&conv) {
            assert!(a.sub(b).unwrap().max_abs_coeff() < 1e-14);
        }
    }

    #[test]
    fn ring_transfer_function_matches_pointwise_at_zero() {
        let s = spec(1, 3);
        let sys = scalar_sys(zvar(s, 1), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        let zeta = c1(0.5);
        assert!(sys.is_admissible(zeta));
        let h = sys.tf_ring(zeta).unwrap();
        let z0 = EvalPoint::zeros(1);
        assert!((h.evaluate(&z0).unwrap() - sys.tf_eval(zeta, &z0).unwrap()).norm() < 1e-15);
        let pole = scalar_sys(k(s, 2.0), k(s, 1.0), k(s, 1.0), k(s, 0.0));
        assert!(!pole.is_admissible(c1(0.5)));
    }
}
