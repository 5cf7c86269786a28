//! Truncated power series in countably many variables.
//!
//! A [`RingElement`] holds finitely many coefficients `f_α` indexed by
//! [`MultiIndex`] under a [`TruncationSpec`]. Multiplication is the Cauchy
//! product (the image of the Wick product under the Hermite transform) with
//! every term above the degree cutoff discarded, so a product is exact
//! whenever the degrees of the factors add up to at most the cutoff.
//!
//! Only exactly-zero coefficients are pruned. Numerical cancellation is left
//! visible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::{MultiIndex, TruncationSpec};

pub type Complex = Complex64;

/// A finite point `(z_1, ..., z_m)` at which series are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint(Vec<Complex>);

impl EvalPoint {
    pub fn new(values: Vec<Complex>) -> Self {
        Self(values)
    }

    pub fn zeros(num_vars: usize) -> Self {
        Self(vec![Complex::new(0.0, 0.0); num_vars])
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn moduli(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    pub(crate) fn check(&self, spec: &TruncationSpec) -> Result<()> {
        if self.0.len() != spec.num_vars {
            return Err(Error::DimensionMismatch {
                expected: spec.num_vars,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq)]
pub struct RingElement {
    spec: TruncationSpec,
    coeffs: BTreeMap<MultiIndex, Complex>,
}

impl RingElement {
    pub fn zero(spec: TruncationSpec) -> Self {
        Self {
            spec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(spec: TruncationSpec) -> Self {
        Self::constant(spec, Complex::new(1.0, 0.0))
    }

    pub fn constant(spec: TruncationSpec, c: Complex) -> Self {
        let mut out = Self::zero(spec);
        if c != Complex::new(0.0, 0.0) {
            out.coeffs.insert(MultiIndex::zero(), c);
        }
        out
    }

    /// `c · z^α`.
    pub fn monomial(spec: TruncationSpec, alpha: MultiIndex, c: Complex) -> Result<Self> {
        Self::from_terms(spec, [(alpha, c)])
    }

    /// The coordinate function `z_j` (1-based).
    pub fn variable(spec: TruncationSpec, position: usize) -> Result<Self> {
        Self::monomial(spec, MultiIndex::unit(position), Complex::new(1.0, 0.0))
    }

    /// Sums the given terms; repeated indices accumulate.
    pub fn from_terms(
        spec: TruncationSpec,
        terms: impl IntoIterator<Item = (MultiIndex, Complex)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (alpha, c) in terms {
            if !spec.admits(&alpha) {
                return Err(Error::OutOfSpec {
                    index: alpha.to_string(),
                    spec,
                });
            }
            *coeffs.entry(alpha).or_insert(Complex::new(0.0, 0.0)) += c;
        }
        Ok(Self::pruned(spec, coeffs))
    }

    fn pruned(spec: TruncationSpec, mut coeffs: BTreeMap<MultiIndex, Complex>) -> Self {
        coeffs.retain(|_, c| *c != Complex::new(0.0, 0.0));
        Self { spec, coeffs }
    }

    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    /// Stored `(α, f_α)` pairs in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    /// `f(0)`.
    pub fn constant_term(&self) -> Complex {
        self.coeff(&MultiIndex::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest total degree among stored terms; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().map(MultiIndex::degree).max()
    }

    /// Smallest stored index in graded lexicographic order.
    pub fn leading_index(&self) -> Option<&MultiIndex> {
        self.coeffs.keys().next()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ |f_α|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.spec.check_same(&other.spec)?;
        Ok(self.add_unchecked(other, 1.0))
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.spec.check_same(&other.spec)?;
        Ok(self.add_unchecked(other, -1.0))
    }

    fn add_unchecked(&self, other: &RingElement, sign: f64) -> RingElement {
        let mut coeffs = self.coeffs.clone();
        for (alpha, c) in &other.coeffs {
            *coeffs.entry(alpha.clone()).or_default() += c * sign;
        }
        Self::pruned(self.spec, coeffs)
    }

    pub fn negate(&self) -> RingElement {
        Self {
            spec: self.spec,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> RingElement {
        let coeffs = self.coeffs.iter().map(|(a, c)| (a.clone(), c * s)).collect();
        Self::pruned(self.spec, coeffs)
    }

    /// Wick (Cauchy) product, truncated at the shared degree cutoff.
    pub fn wick_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.spec.check_same(&other.spec)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &RingElement) -> RingElement {
        let max = self.spec.max_degree as u64;
        let mut coeffs: BTreeMap<MultiIndex, Complex> = BTreeMap::new();
        for (a, fa) in &self.coeffs {
            let room = max - a.degree();
            // keys iterate in increasing degree, so stop at the first overflow
            for (b, gb) in other.coeffs.iter().take_while(|(b, _)| b.degree() <= room) {
                *coeffs.entry(a.add(b)).or_default() += fa * gb;
            }
        }
        Self::pruned(self.spec, coeffs)
    }

    /// `f^n` by repeated squaring; `f^0 = 1`.
    pub fn pow(&self, mut n: u32) -> RingElement {
        let mut base = self.clone();
        let mut acc = RingElement::one(self.spec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `Σ_α f_α z^α` over the stored terms.
    pub fn evaluate(&self, z: &EvalPoint) -> Result<Complex> {
        z.check(&self.spec)?;
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| c * a.monomial_value(z.values()))
            .sum())
    }

    /// `Σ_α |f_α| |z^α|`, the absolute series at `z`.
    pub fn abs_series(&self, z: &EvalPoint) -> Result<f64> {
        z.check(&self.spec)?;
        let moduli = z.moduli();
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| c.norm() * a.modulus_value(&moduli))
            .sum())
    }

    /// Multiplicative inverse; exists exactly when `f(0) ≠ 0`.
    ///
    /// Writes `f = c(1 - r)` with `c = f(0)`, `r(0) = 0`, and sums the
    /// geometric series `c⁻¹ Σ_{n ≤ d} rⁿ`, which is exact below the cutoff.
    pub fn inverse(&self) -> Result<RingElement> {
        let c = self.constant_term();
        if c == Complex::new(0.0, 0.0) {
            return Err(Error::NotInvertible(
                "constant term is zero".to_string(),
            ));
        }
        let r = RingElement::one(self.spec).add_unchecked(&self.scale(c.inv()), -1.0);
        let ones = vec![Complex::new(1.0, 0.0); self.spec.max_degree as usize + 1];
        Ok(compose_unchecked(&ones, &r).scale(c.inv()))
    }

    /// `Σ_n x_n rⁿ` for a power series `x` and `r(0) = 0`. Coefficients past
    /// the degree cutoff cannot contribute and are ignored.
    pub fn compose(x: &[Complex], r: &RingElement) -> Result<RingElement> {
        let r0 = r.constant_term();
        if r0 != Complex::new(0.0, 0.0) {
            return Err(Error::CompositionDomain(format!("{r0}")));
        }
        Ok(compose_unchecked(x, r))
    }

    /// `‖f‖_k = (Σ |f_α|² (2ℕ)^{-kα})^{1/2}`.
    pub fn norm_k(&self, k: u32) -> f64 {
        self.weighted_norm(-(k as f64))
    }

    /// `(Σ |f_α|² (2ℕ)^{sα})^{1/2}` for an arbitrary real exponent `s`.
    pub fn weighted_norm(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(a, c)| c.norm_sqr() * a.weight2n(s))
            .sum::<f64>()
            .sqrt()
    }

    /// Restricts to a smaller window, dropping terms it does not admit.
    pub fn truncate_to(&self, spec: TruncationSpec) -> Result<RingElement> {
        if spec.num_vars > self.spec.num_vars || spec.max_degree > self.spec.max_degree {
            return Err(Error::InvalidSpec(format!(
                "cannot truncate {:?} to larger {:?}",
                self.spec, spec
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(a, _)| spec.admits(a))
            .map(|(a, c)| (a.clone(), *c))
            .collect();
        Ok(Self { spec, coeffs })
    }

    /// Same coefficients under a wider window.
    pub fn embed_into(&self, spec: TruncationSpec) -> Result<RingElement> {
        if spec.num_vars < self.spec.num_vars || spec.max_degree < self.spec.max_degree {
            return Err(Error::InvalidSpec(format!(
                "cannot embed {:?} into smaller {:?}",
                self.spec, spec
            )));
        }
        Ok(Self {
            spec,
            coeffs: self.coeffs.clone(),
        })
    }
}

fn compose_unchecked(x: &[Complex], r: &RingElement) -> RingElement {
    let top = x.len().min(r.spec.max_degree as usize + 1);
    if top == 0 {
        return RingElement::zero(r.spec);
    }
    let mut acc = RingElement::constant(r.spec, x[top - 1]);
    for &xn in x[..top - 1].iter().rev() {
        acc = acc
            .mul_unchecked(r)
            .add_unchecked(&RingElement::constant(r.spec, xn), 1.0);
    }
    acc
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})z^{a}")?;
        }
        Ok(())
    }
}

// Operator forms panic on truncation mismatch; use the named methods for
// fallible arithmetic.
impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        RingElement::add(self, rhs).expect("ring addition")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        RingElement::sub(self, rhs).expect("ring subtraction")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.wick_mul(rhs).expect("ring multiplication")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.negate()
    }
}

/// `A(k - l) = Σ_α (2ℕ)^{(l-k)α}`, the constant in `‖h◊u‖_k ≤ A(k-l)‖h‖_l‖u‖_k`.
///
/// Uses the factorization `∏_{j≥1} (1 - (2j)^{-s})^{-1}` with `s = k - l`:
/// the first [`VAGE_DIRECT_FACTORS`] factors are multiplied out in log space
/// and the rest is summed in closed form through the Euler–Maclaurin tail of
/// `Σ_{j>J} j^{-n}`. Relative error is below 1e-12.
pub fn vage_constant(k: i64, l: i64) -> Result<f64> {
    let s = k - l;
    if s <= 1 {
        return Err(Error::DivergentConstant(s));
    }
    let s_f = s as f64;
    let direct: f64 = (1..=VAGE_DIRECT_FACTORS)
        .map(|j| -(-(2.0 * j as f64).powf(-s_f)).ln_1p())
        .sum();
    // -ln(1 - x) = Σ_m x^m / m with x = (2j)^{-s}
    let j0 = VAGE_DIRECT_FACTORS as f64;
    let mut tail = 0.0;
    for m in 1.. {
        let n = s_f * m as f64;
        let term = 2f64.powf(-n) / m as f64 * power_sum_tail(n, j0);
        tail += term;
        if term < 1e-18 * (direct + tail) || m > 64 {
            break;
        }
    }
    Ok((direct + tail).exp())
}

/// Number of factors multiplied out explicitly in [`vage_constant`].
pub const VAGE_DIRECT_FACTORS: usize = 1000;

/// `Σ_{j>J} j^{-n}` for `n > 1` by Euler–Maclaurin; the omitted remainder is
/// of order `n^5 J^{-n-5}`.
fn power_sum_tail(n: f64, j: f64) -> f64 {
    j.powf(1.0 - n) / (n - 1.0) - 0.5 * j.powf(-n) + n * j.powf(-n - 1.0) / 12.0
        - n * (n + 1.0) * (n + 2.0) * j.powf(-n - 3.0) / 720.0
}

/// Outcome of a `K_q(δ)` membership query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KqMembership {
    /// `Σ_{α≠0} |z^α|² (2ℕ)^{qα}`; `+∞` when divergent.
    pub sum: f64,
    pub member: bool,
}

impl KqMembership {
    pub fn is_divergent(&self) -> bool {
        self.sum.is_infinite()
    }
}

/// Tests `Σ_{α≠0} |z^α|² (2ℕ)^{qα} < δ²`.
///
/// The sum factorizes over variables as `∏_j (1 - |z_j|²(2j)^q)^{-1} - 1`.
/// Any ratio `|z_j|²(2j)^q ≥ 1` makes it diverge.
pub fn kq_membership(z: &EvalPoint, q: u32, delta: f64) -> KqMembership {
    match kq_log_product(z, q) {
        Some(log) => {
            let sum = log.exp_m1();
            KqMembership {
                sum,
                member: sum < delta * delta,
            }
        }
        None => KqMembership {
            sum: f64::INFINITY,
            member: false,
        },
    }
}

/// `ln ∏_j (1 - |z_j|²(2j)^q)^{-1}`, or `None` when some ratio reaches 1.
fn kq_log_product(z: &EvalPoint, q: u32) -> Option<f64> {
    let mut log = 0.0;
    for (i, zj) in z.values().iter().enumerate() {
        let ratio = zj.norm_sqr() * (2.0 * (i + 1) as f64).powi(q as i32);
        if ratio == 0.0 {
            continue;
        }
        if ratio >= 1.0 {
            return None;
        }
        log -= (-ratio).ln_1p();
    }
    Some(log)
}

/// Both sides of the bound `|f(z)| ≤ Σ|f_α||z^α| ≤ M_q (Σ_α (2ℕ)^{qα}|z^α|²)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub value_abs: f64,
    pub abs_series: f64,
    /// `M_q = (Σ |f_α|² (2ℕ)^{-qα})^{1/2}`.
    pub m_q: f64,
    /// `Σ_α (2ℕ)^{qα}|z^α|²` over all of ℓ, including `α = 0`.
    pub weight_sum: f64,
    pub holds: bool,
}

impl GrowthBound {
    pub fn rhs(&self) -> f64 {
        self.m_q * self.weight_sum.sqrt()
    }
}

/// Slack for floating-point rounding in the two comparisons of
/// [`growth_bound_check`].
const GROWTH_SLACK: f64 = 1e-12;

/// Checks the growth bound with `M_q` taken as the q-weighted coefficient
/// norm, the Cauchy–Schwarz constant for this choice of weights.
pub fn growth_bound_check(f: &RingElement, z: &EvalPoint, q: u32) -> Result<GrowthBound> {
    z.check(&f.spec)?;
    let log = kq_log_product(z, q).ok_or_else(|| {
        Error::Precondition(format!("weight sum Σ(2ℕ)^{{qα}}|z^α|² diverges for q = {q}"))
    })?;
    let weight_sum = log.exp();
    let value_abs = f.evaluate(z)?.norm();
    let abs_series = f.abs_series(z)?;
    let m_q = f.norm_k(q);
    let holds = value_abs <= abs_series * (1.0 + GROWTH_SLACK)
        && abs_series <= m_q * weight_sum.sqrt() * (1.0 + GROWTH_SLACK);
    Ok(GrowthBound {
        value_abs,
        abs_series,
        m_q,
        weight_sum,
        holds,
    })
}

/// The three quantities of the absolute-convergence product bound
/// `|f(z)g(z)| ≤ Σ_γ |z|^γ |Σ_{α+β=γ} f_α g_β| ≤ (Σ|f_α||z|^α)(Σ|g_α||z|^α)`.
///
/// The middle term uses the full, untruncated convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductChain {
    pub product_abs: f64,
    pub convolution_abs: f64,
    pub factor_abs: f64,
}

pub fn product_chain(f: &RingElement, g: &RingElement, z: &EvalPoint) -> Result<ProductChain> {
    f.spec.check_same(&g.spec)?;
    z.check(&f.spec)?;
    let moduli = z.moduli();
    let mut conv: BTreeMap<MultiIndex, Complex> = BTreeMap::new();
    for (a, fa) in &f.coeffs {
        for (b, gb) in &g.coeffs {
            *conv.entry(a.add(b)).or_default() += fa * gb;
        }
    }
    let convolution_abs = conv
        .iter()
        .map(|(a, c)| c.norm() * a.modulus_value(&moduli))
        .sum();
    Ok(ProductChain {
        product_abs: (f.evaluate(z)? * g.evaluate(z)?).norm(),
        convolution_abs,
        factor_abs: f.abs_series(z)? * g.abs_series(z)?,
    })
}
