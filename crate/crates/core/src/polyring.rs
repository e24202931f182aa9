//! Univariate polynomials in `t` over `Q(xi_n)` and exact determinants of
//! matrices of such polynomials.
//!
//! Determinants use fraction-free Bareiss elimination: every intermediate
//! division is exact in `Q(xi_n)[t]`, so no rational-function intermediates
//! appear. A cofactor/complementary-minor Laplace expansion is kept as an
//! independent oracle for matrices of dimension at most six.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exactfield::CycloElement;

/// Polynomial in `t` with `Q(xi_n)` coefficients, ascending by degree.
///
/// Trailing coefficients that are zero in the field (not merely structurally)
/// are trimmed, so the zero polynomial is the empty vector and `degree` is
/// undefined exactly for zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TPoly {
    order: usize,
    #[serde(rename = "degree_coeffs")]
    coeffs: Vec<CycloElement>,
}

impl TPoly {
    /// Build from ascending coefficients, trimming trailing field zeros.
    pub fn new(order: usize, mut coeffs: Vec<CycloElement>) -> Self {
        for c in &coeffs {
            assert_eq!(c.order(), order, "mixed field orders in TPoly");
        }
        while coeffs.last().is_some_and(CycloElement::is_zero) {
            coeffs.pop();
        }
        TPoly { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TPoly { order, coeffs: Vec::new() }
    }

    pub fn one(order: usize) -> Self {
        TPoly::constant(CycloElement::one(order))
    }

    pub fn constant(c: CycloElement) -> Self {
        TPoly::new(c.order(), vec![c])
    }

    /// `c * t^degree`.
    pub fn monomial(c: CycloElement, degree: usize) -> Self {
        let order = c.order();
        let mut coeffs = vec![CycloElement::zero(order); degree + 1];
        coeffs[degree] = c;
        TPoly::new(order, coeffs)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Canonical degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    /// Coefficient of `t^d` (zero beyond the stored degree).
    pub fn coeff(&self, d: usize) -> CycloElement {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| CycloElement::zero(self.order))
    }

    fn lead(&self) -> Option<&CycloElement> {
        self.coeffs.last()
    }

    /// Lowest degree whose coefficient is structurally nonzero. This is a
    /// representative-level valuation bound: the true valuation may be
    /// higher, never lower.
    pub(crate) fn min_structural_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_structurally_zero())
    }

    pub fn scale(&self, c: &CycloElement) -> Self {
        if c.is_structurally_zero() || self.is_zero() {
            return TPoly::zero(self.order);
        }
        TPoly::new(self.order, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![CycloElement::zero(self.order); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly { order: self.order, coeffs }
    }

    /// Divide by `t^k`; the low coefficients must be structural zeros.
    pub(crate) fn shift_down(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        debug_assert!(self.coeffs[..k].iter().all(CycloElement::is_structurally_zero));
        TPoly {
            order: self.order,
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    /// Exact division in `Q(xi_n)[t]`.
    ///
    /// # Panics
    ///
    /// Panics when the divisor is zero or does not divide exactly; both
    /// signal an internal logic error, not bad input.
    pub fn div_exact(&self, div: &TPoly) -> TPoly {
        assert_eq!(self.order, div.order, "mixed field orders in division");
        assert!(!div.is_zero(), "exact division by the zero polynomial");
        if self.is_zero() {
            return TPoly::zero(self.order);
        }
        let dp = self.degree().unwrap();
        let dq = div.degree().unwrap();
        assert!(dp >= dq, "inexact polynomial division: degree too small");
        let lead_inv = div
            .lead()
            .unwrap()
            .inverse()
            .expect("canonical lead coefficient must be invertible");
        // Monomial divisors show up constantly in orbit determinants; a
        // shift plus scale avoids the long-division loop.
        if div.min_structural_degree() == Some(dq) {
            for c in &self.coeffs[..dq] {
                assert!(c.is_zero(), "inexact polynomial division: low-degree remainder");
            }
            let mut coeffs = Vec::with_capacity(dp - dq + 1);
            for c in &self.coeffs[dq..] {
                coeffs.push(c * &lead_inv);
            }
            return TPoly { order: self.order, coeffs };
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![CycloElement::zero(self.order); dp - dq + 1];
        for d in (dq..=dp).rev() {
            if rem[d].is_structurally_zero() {
                continue;
            }
            let q = &rem[d] * &lead_inv;
            for (i, c) in div.coeffs.iter().enumerate() {
                if !c.is_structurally_zero() {
                    let delta = &q * c;
                    rem[d - dq + i] = &rem[d - dq + i] - &delta;
                }
            }
            quot[d - dq] = q;
        }
        for c in &rem[..dq] {
            assert!(c.is_zero(), "inexact polynomial division: nonzero remainder");
        }
        // The quotient lead is self.lead * lead_inv, nonzero in the field,
        // so trimming in `new` only clears field-zero junk representatives.
        TPoly::new(self.order, quot)
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rational(&self, lambda: &BigRational) -> CycloElement {
        let mut acc = CycloElement::zero(self.order);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(lambda) + c;
        }
        acc
    }
}

impl PartialEq for TPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        let diff = self - other;
        diff.coeffs.iter().all(CycloElement::is_zero)
    }
}

impl Add for &TPoly {
    type Output = TPoly;

    fn add(self, rhs: &TPoly) -> TPoly {
        assert_eq!(self.order, rhs.order, "mixed field orders in TPoly add");
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let a = self.coeffs.get(k);
            let b = rhs.coeffs.get(k);
            coeffs.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        TPoly::new(self.order, coeffs)
    }
}

impl Sub for &TPoly {
    type Output = TPoly;

    fn sub(self, rhs: &TPoly) -> TPoly {
        self + &(-rhs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;

    fn neg(self) -> TPoly {
        TPoly {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TPoly {
    type Output = TPoly;

    fn mul(self, rhs: &TPoly) -> TPoly {
        assert_eq!(self.order, rhs.order, "mixed field orders in TPoly mul");
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero(self.order);
        }
        let mut coeffs =
            vec![CycloElement::zero(self.order); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_structurally_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_structurally_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        TPoly::new(self.order, coeffs)
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Matrices of polynomials
// ---------------------------------------------------------------------------

/// Rectangular row-major matrix of [`TPoly`] entries sharing one field order.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    order: usize,
    entries: Vec<TPoly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<TPoly>>) -> Self {
        assert!(!rows.is_empty(), "matrix must have at least one row");
        let cols = rows[0].len();
        assert!(cols > 0, "matrix must have at least one column");
        let order = rows[0][0].order();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for e in row {
                assert_eq!(e.order(), order, "mixed field orders in matrix");
                entries.push(e.clone());
            }
        }
        PolyMatrix { rows: rows.len(), cols, order, entries }
    }

    pub fn identity(order: usize, dim: usize) -> Self {
        let mut rows = vec![vec![TPoly::zero(order); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = TPoly::one(order);
        }
        PolyMatrix::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field_order(&self) -> usize {
        self.order
    }

    pub fn at(&self, i: usize, j: usize) -> &TPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[TPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(rhs.cols);
            for j in 0..rhs.cols {
                let mut acc = TPoly::zero(self.order);
                for k in 0..self.cols {
                    acc = &acc + &(self.at(i, k) * rhs.at(k, j));
                }
                row.push(acc);
            }
            rows.push(row);
        }
        PolyMatrix::from_rows(rows)
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    ///
    /// Pivots are the lowest-degree nonzero entries in the current column,
    /// ties broken by row index; every division along the way is exact.
    pub fn determinant(&self) -> TPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let dim = self.rows;
        let mut m: Vec<Vec<TPoly>> = (0..dim).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = TPoly::one(self.order);
        for col in 0..dim.saturating_sub(1) {
            let pivot = (col..dim)
                .filter(|&i| !m[i][col].is_zero())
                .min_by_key(|&i| (m[i][col].degree().unwrap(), i));
            let Some(pivot) = pivot else {
                return TPoly::zero(self.order);
            };
            if pivot != col {
                m.swap(pivot, col);
                negate = !negate;
            }
            for i in col + 1..dim {
                for j in col + 1..dim {
                    let num = &(&m[col][col] * &m[i][j]) - &(&m[i][col] * &m[col][j]);
                    m[i][j] = num.div_exact(&prev);
                }
                m[i][col] = TPoly::zero(self.order);
            }
            prev = m[col][col].clone();
        }
        let det = m[dim - 1][dim - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Determinant by signed cofactor expansion along the first row;
    /// an independent cross-check for the elimination path.
    ///
    /// # Panics
    ///
    /// Panics for dimensions above six (oracle use only).
    pub fn determinant_laplace(&self) -> TPoly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        assert!(self.rows <= 6, "Laplace oracle capped at dimension 6");
        let rows: Vec<Vec<TPoly>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        laplace_det(self.order, &rows)
    }
}

fn laplace_det(order: usize, m: &[Vec<TPoly>]) -> TPoly {
    let dim = m.len();
    if dim == 0 {
        return TPoly::one(order);
    }
    if dim == 1 {
        return m[0][0].clone();
    }
    let mut acc = TPoly::zero(order);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<TPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(k, e)| (k != j).then(|| e.clone()))
                    .collect()
            })
            .collect();
        let term = entry * &laplace_det(order, &minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `prod_{j < k} (a_k - a_j)` from the Vandermonde product formula.
pub fn vandermonde_det(nodes: &[CycloElement]) -> CycloElement {
    assert!(!nodes.is_empty(), "vandermonde_det needs at least one node");
    let order = nodes[0].order();
    let mut acc = CycloElement::one(order);
    for k in 1..nodes.len() {
        for j in 0..k {
            acc = &acc * &(&nodes[k] - &nodes[j]);
        }
    }
    acc
}

/// Determinant of a square matrix of field scalars, through the polynomial
/// elimination path with constant entries.
pub fn cyclo_matrix_det(order: usize, rows: &[Vec<CycloElement>]) -> CycloElement {
    if rows.is_empty() {
        return CycloElement::one(order);
    }
    let m = PolyMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|c| TPoly::constant(c.clone())).collect())
            .collect(),
    );
    m.determinant().coeff(0)
}
