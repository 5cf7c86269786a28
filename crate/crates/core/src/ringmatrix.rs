//! Dense matrices with [`RingElement`] entries.
//!
//! Products sum in a fixed order (`k = 0, 1, ...`), so results are
//! reproducible bit for bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, DEFAULT_RANK_TOL};
use crate::multiindex::TruncationSpec;
use crate::ring::{Complex, EvalPoint, RingElement};

#[derive(Clone, PartialEq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    spec: TruncationSpec,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zeros(spec: TruncationSpec, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            spec,
            entries: vec![RingElement::zero(spec); rows * cols],
        }
    }

    pub fn identity(spec: TruncationSpec, n: usize) -> Self {
        Self::from_fn(spec, n, n, |i, j| {
            if i == j {
                RingElement::one(spec)
            } else {
                RingElement::zero(spec)
            }
        })
    }

    pub fn from_fn(
        spec: TruncationSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.spec(), spec, "entry ({i},{j}) has a foreign truncation");
                entries.push(e);
            }
        }
        Self {
            rows,
            cols,
            spec,
            entries,
        }
    }

    /// Row-major entries; every entry must carry `spec`.
    pub fn from_entries(
        spec: TruncationSpec,
        rows: usize,
        cols: usize,
        entries: Vec<RingElement>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.spec() != spec) {
            return Err(Error::SpecMismatch {
                left: spec,
                right: bad.spec(),
            });
        }
        Ok(Self {
            rows,
            cols,
            spec,
            entries,
        })
    }

    pub fn from_rows(spec: TruncationSpec, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_entries(spec, r, c, rows.into_iter().flatten().collect())
    }

    /// Constant matrix with the given complex entries.
    pub fn from_complex(spec: TruncationSpec, m: &CMatrix) -> Self {
        Self::from_fn(spec, m.nrows(), m.ncols(), |i, j| {
            RingElement::constant(spec, m[(i, j)])
        })
    }

    /// 1×1 matrix.
    pub fn scalar(e: RingElement) -> Self {
        let spec = e.spec();
        Self {
            rows: 1,
            cols: 1,
            spec,
            entries: vec![e],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn spec(&self) -> TruncationSpec {
        self.spec
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElement) {
        assert_eq!(e.spec(), self.spec);
        self.entries[i * self.cols + j] = e;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn row_vec(&self, i: usize) -> Vec<RingElement> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RingElement::is_zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries
            .iter()
            .map(RingElement::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> RingMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            spec: self.spec,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn check_spec(&self, other: &RingMatrix) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        Ok(())
    }

    /// Matrix product with Wick entry products.
    pub fn mat_mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_spec(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.spec, self.rows, other.cols, |i, j| {
            let mut acc = RingElement::zero(self.spec);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        }))
    }

    fn check_same_shape(&self, other: &RingMatrix) -> Result<()> {
        self.check_spec(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &RingMatrix, f: impl Fn(&RingElement, &RingElement) -> RingElement) -> RingMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            spec: self.spec,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn negate(&self) -> RingMatrix {
        self.map(RingElement::negate)
    }

    pub fn scale(&self, s: Complex) -> RingMatrix {
        self.map(|e| e.scale(s))
    }

    /// Every entry multiplied by the ring element `r`.
    pub fn scale_ring(&self, r: &RingElement) -> Result<RingMatrix> {
        if r.spec() != self.spec {
            return Err(Error::SpecMismatch {
                left: self.spec,
                right: r.spec(),
            });
        }
        Ok(self.map(|e| e * r))
    }

    pub fn transpose(&self) -> RingMatrix {
        Self::from_fn(self.spec, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `Aⁿ`; `A⁰ = I`.
    pub fn pow(&self, n: u32) -> Result<RingMatrix> {
        self.require_square()?;
        let mut acc = Self::identity(self.spec, self.rows);
        for _ in 0..n {
            acc = acc.mat_mul(self)?;
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Entrywise constant terms.
    pub fn eval0(&self) -> CMatrix {
        CMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).constant_term())
    }

    /// Entrywise evaluation at `z`.
    pub fn evaluate(&self, z: &EvalPoint) -> Result<CMatrix> {
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).evaluate(z)?;
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RingMatrix {
        Self::from_fn(self.spec, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_spec(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Self::from_fn(self.spec, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_spec(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        Ok(Self::from_fn(self.spec, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        }))
    }

    /// `[[a, b], [c, d]]` from four blocks with compatible shapes.
    pub fn block(
        a: &RingMatrix,
        b: &RingMatrix,
        c: &RingMatrix,
        d: &RingMatrix,
    ) -> Result<RingMatrix> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// `diag(a, b)`.
    pub fn block_diag(a: &RingMatrix, b: &RingMatrix) -> Result<RingMatrix> {
        a.check_spec(b)?;
        let spec = a.spec;
        Self::block(
            a,
            &Self::zeros(spec, a.rows, b.cols),
            &Self::zeros(spec, b.rows, a.cols),
            b,
        )
    }

    /// Inverse over the ring with the default singularity tolerance.
    pub fn mat_inverse(&self) -> Result<RingMatrix> {
        self.mat_inverse_with_tol(DEFAULT_RANK_TOL)
    }

    /// Inverse over the ring; exists exactly when `M(0)` is invertible.
    ///
    /// Splits `M = M₀ + G` with `G(0) = 0` and sums the Neumann series
    /// `(Σ_{n ≤ d} (-M₀⁻¹G)ⁿ) M₀⁻¹`, exact below the degree cutoff. `M₀` counts
    /// as singular when `σ_min ≤ tol · σ_max`.
    pub fn mat_inverse_with_tol(&self, tol: f64) -> Result<RingMatrix> {
        self.require_square()?;
        let m0 = self.eval0();
        if !linalg::is_invertible(&m0, tol) {
            return Err(Error::NotInvertible(format!(
                "M(0) is singular (singular values {:?})",
                linalg::singular_values(&m0)
            )));
        }
        let m0_inv = m0
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("M(0) is singular".into()))?;
        let spec = self.spec;
        let n = self.rows;
        let g = self.sub(&Self::from_complex(spec, &m0))?;
        let m0_inv_ring = Self::from_complex(spec, &m0_inv);
        let x = m0_inv_ring.mat_mul(&g)?.negate();
        // Horner: I + X(I + X(I + ...))
        let id = Self::identity(spec, n);
        let mut acc = id.clone();
        for _ in 0..spec.max_degree {
            acc = id.add(&x.mat_mul(&acc)?)?;
        }
        acc.mat_mul(&m0_inv_ring)
    }

    /// Determinant. Cofactor expansion up to 4×4, Faddeev–LeVerrier above.
    pub fn determinant(&self) -> Result<RingElement> {
        self.require_square()?;
        if self.rows <= 4 {
            Ok(self.cofactor_det())
        } else {
            let p = self.char_poly()?;
            let sign = if self.rows.is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(p[0].scale(Complex::new(sign, 0.0)))
        }
    }

    fn cofactor_det(&self) -> RingElement {
        let n = self.rows;
        match n {
            0 => RingElement::one(self.spec),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = RingElement::zero(self.spec);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let rows: Vec<usize> = (1..n).collect();
                    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    let term = a * &self.select(&rows, &cols).cofactor_det();
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    /// Characteristic polynomial `det(λI - A)` as coefficients `p₀..p_N`,
    /// `p_N = 1`, by the Faddeev–LeVerrier recursion
    /// `M_k = A M_{k-1} + p_{N-k+1} I`, `p_{N-k} = -tr(A M_k)/k`.
    pub fn char_poly(&self) -> Result<Vec<RingElement>> {
        self.require_square()?;
        let spec = self.spec;
        let n = self.rows;
        let id = Self::identity(spec, n);
        let mut p = vec![RingElement::zero(spec); n + 1];
        p[n] = RingElement::one(spec);
        // A·M_0 with M_0 = 0
        let mut am = Self::zeros(spec, n, n);
        for k in 1..=n {
            let m = am.add(&id.scale_ring(&p[n - k + 1])?)?;
            am = self.mat_mul(&m)?;
            p[n - k] = am.trace().scale(Complex::new(-1.0 / k as f64, 0.0));
        }
        Ok(p)
    }

    pub fn trace(&self) -> RingElement {
        let mut acc = RingElement::zero(self.spec);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// `Σ pᵢ Aⁱ` by Horner's rule.
    pub fn apply_poly(p: &[RingElement], a: &RingMatrix) -> Result<RingMatrix> {
        a.require_square()?;
        let spec = a.spec;
        let n = a.rows;
        let id = Self::identity(spec, n);
        let Some((last, rest)) = p.split_last() else {
            return Ok(Self::zeros(spec, n, n));
        };
        let mut acc = id.scale_ring(last)?;
        for c in rest.iter().rev() {
            acc = acc.mat_mul(a)?.add(&id.scale_ring(c)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RingMatrix {}x{} {:?}", self.rows, self.cols, self.spec)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn spec(m: usize, d: u32) -> TruncationSpec {
        TruncationSpec::new(m, d).unwrap()
    }

    fn k(s: TruncationSpec, v: f64) -> RingElement {
        RingElement::constant(s, Complex::new(v, 0.0))
    }

    fn z(s: TruncationSpec, j: usize) -> RingElement {
        RingElement::variable(s, j).unwrap()
    }

    #[test]
    fn mat_mul_examples() {
        let s = spec(2, 3);
        let x = RingMatrix::from_rows(s, vec![vec![z(s, 1), k(s, 2.0)], vec![k(s, 0.0), z(s, 2)]]).unwrap();
        assert_eq!(x.mat_mul(&RingMatrix::identity(s, 2)).unwrap(), x);
        let p = RingMatrix::scalar(z(s, 1)).mat_mul(&RingMatrix::scalar(z(s, 2))).unwrap();
        assert_eq!(p.get(0, 0), &(&z(s, 1) * &z(s, 2)));
        assert!(matches!(x.mat_mul(&RingMatrix::zeros(s, 3, 1)), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            x.mat_mul(&RingMatrix::identity(spec(2, 2), 2)),
            Err(Error::SpecMismatch { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        let s = spec(1, 3);
        let id = RingMatrix::identity(s, 2);
        assert_eq!(id.mat_inverse().unwrap(), id);
        let u = RingMatrix::from_rows(s, vec![vec![k(s, 1.0), z(s, 1)], vec![k(s, 0.0), k(s, 1.0)]]).unwrap();
        let expected =
            RingMatrix::from_rows(s, vec![vec![k(s, 1.0), z(s, 1).negate()], vec![k(s, 0.0), k(s, 1.0)]]).unwrap();
        assert_eq!(u.mat_inverse().unwrap(), expected);
        let singular = RingMatrix::from_rows(s, vec![vec![z(s, 1), k(s, 1.0)], vec![k(s, 0.0), z(s, 1)]]).unwrap();
        assert!(matches!(singular.mat_inverse(), Err(Error::NotInvertible(_))));
        assert!(matches!(RingMatrix::zeros(s, 2, 3).mat_inverse(), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn inverse_of_swap_plus_noise() {
        let s = spec(2, 4);
        let g = |i: usize| {
            RingElement::from_terms(
                s,
                [
                    (MultiIndex::from_dense(&[1, 0]), Complex::new(0.3 * i as f64, 0.1)),
                    (MultiIndex::from_dense(&[1, 1]), Complex::new(-0.2, 0.0)),
                ],
            )
            .unwrap()
        };
        let m = RingMatrix::from_rows(
            s,
            vec![vec![g(1), &k(s, 1.0) + &g(2)], vec![&k(s, 1.0) + &g(3), g(4)]],
        )
        .unwrap();
        let inv = m.mat_inverse().unwrap();
        let id = RingMatrix::identity(s, 2);
        for prod in [m.mat_mul(&inv).unwrap(), inv.mat_mul(&m).unwrap()] {
            assert!(prod.sub(&id).unwrap().max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn char_poly_examples() {
        let s = spec(2, 4);
        let p = RingMatrix::scalar(k(s, 3.0)).char_poly().unwrap();
        assert_eq!(p, vec![k(s, -3.0), k(s, 1.0)]);
        let nil = RingMatrix::from_rows(s, vec![vec![k(s, 0.0), k(s, 1.0)], vec![k(s, 0.0), k(s, 0.0)]]).unwrap();
        assert_eq!(nil.char_poly().unwrap(), vec![k(s, 0.0), k(s, 0.0), k(s, 1.0)]);
        let a = RingMatrix::from_rows(s, vec![vec![z(s, 1), k(s, 1.0)], vec![k(s, 0.0), z(s, 2)]]).unwrap();
        let p = a.char_poly().unwrap();
        assert_eq!(p[2], k(s, 1.0));
        assert_eq!(p[1], (&z(s, 1) + &z(s, 2)).negate());
        assert!((&p[0] - &(&z(s, 1) * &z(s, 2))).max_abs_coeff() < 1e-15);
    }

    #[test]
    fn apply_poly_examples() {
        let s = spec(2, 4);
        let a = RingMatrix::from_rows(s, vec![vec![z(s, 1), k(s, 1.0)], vec![k(s, 2.0), z(s, 2)]]).unwrap();
        assert_eq!(RingMatrix::apply_poly(&[k(s, 1.0)], &a).unwrap(), RingMatrix::identity(s, 2));
        assert_eq!(RingMatrix::apply_poly(&[k(s, 0.0), k(s, 1.0)], &a).unwrap(), a);
        let p = a.char_poly().unwrap();
        assert!(RingMatrix::apply_poly(&p, &a).unwrap().max_abs_coeff() < 1e-14);
    }

    #[test]
    fn determinant_routes_agree() {
        let s = spec(2, 5);
        let a = RingMatrix::from_fn(s, 3, 3, |i, j| {
            let base = k(s, (i * 3 + j) as f64 * 0.25 - 1.0);
            if i == j { &base + &z(s, 1 + i % 2) } else { base }
        });
        let cof = a.determinant().unwrap();
        let p = a.char_poly().unwrap();
        let via_poly = p[0].negate();
        assert!((&cof - &via_poly).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn blocks() {
        let s = spec(1, 1);
        let a = RingMatrix::identity(s, 2);
        let b = RingMatrix::scalar(z(s, 1));
        let d = RingMatrix::block_diag(&a, &b).unwrap();
        assert_eq!(d.shape(), (3, 3));
        assert_eq!(d.get(2, 2), &z(s, 1));
        assert!(d.get(0, 2).is_zero());
        assert!(a.hstack(&b).is_err());
        assert_eq!(a.transpose(), a);
    }
}
