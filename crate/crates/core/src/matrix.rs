//! Dense matrices over a semifield.

use std::fmt;

use crate::error::{Error, Result};
use crate::semifield::{Scalar, Semifield};

/// Row-major dense matrix. Every matrix remembers its semifield and binary
/// operations refuse operands from different ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    semifield: Semifield,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Column vectors are matrices with a single column.
pub type Vector = Matrix;

impl Matrix {
    pub fn new(semifield: Semifield, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self {
            semifield,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(semifield: Semifield, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let height = rows.len();
        let mut data = Vec::with_capacity(height * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(semifield, height, cols, data)
    }

    pub fn column_vector(semifield: Semifield, entries: Vec<Scalar>) -> Result<Self> {
        let n = entries.len();
        Self::new(semifield, n, 1, entries)
    }

    /// Matrix with every entry equal to `value`.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn filled(semifield: Semifield, rows: usize, cols: usize, value: Scalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            semifield,
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn zeros(semifield: Semifield, rows: usize, cols: usize) -> Self {
        Self::filled(semifield, rows, cols, Scalar::Zero)
    }

    pub fn identity(semifield: Semifield, n: usize) -> Self {
        let mut m = Self::zeros(semifield, n, n);
        for i in 0..n {
            m.data[i * n + i] = semifield.one();
        }
        m
    }

    pub fn semifield(&self) -> Semifield {
        self.semifield
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        let data = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
        Self {
            semifield: self.semifield,
            rows: self.rows,
            cols: 1,
            data,
        }
    }

    /// Rows `indices` in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self::new(self.semifield, indices.len(), self.cols, data)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            semifield: self.semifield,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_semifield(&self, other: &Self) -> Result<()> {
        if self.semifield != other.semifield {
            return Err(Error::SemifieldMismatch);
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        self.check_semifield(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    fn require_square(&self, op: &'static str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    /// Entrywise ⊕.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let sf = self.semifield;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| sf.add(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<Scalar>) -> Self {
        Self {
            semifield: self.semifield,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Tropical product `self ⊗ other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_semifield(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let sf = self.semifield;
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                let mut acc = Scalar::Zero;
                for (k, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let c = other.get(k, j);
                    if c.is_zero() {
                        continue;
                    }
                    let prod = sf.mul(a, c);
                    if sf.lt(&acc, &prod) {
                        acc = prod;
                    }
                }
                data.push(acc);
            }
        }
        Ok(Self {
            semifield: sf,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `x ⊗ self`, entrywise.
    pub fn scale(&self, x: &Scalar) -> Self {
        let sf = self.semifield;
        let data = self.data.iter().map(|a| sf.mul(x, a)).collect();
        self.with_data(data)
    }

    /// Square power; `A⁰ = I`.
    pub fn pow(&self, exponent: u32) -> Result<Self> {
        let n = self.require_square("pow")?;
        let mut result = Self::identity(self.semifield, n);
        for _ in 0..exponent {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// The conjugate `A⁻`: transpose with nonzero entries inverted.
    pub fn conjugate(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroConjugate);
        }
        let sf = self.semifield;
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                let a = self.get(i, j);
                data.push(if a.is_zero() {
                    Scalar::Zero
                } else {
                    sf.inv(a)?
                });
            }
        }
        Ok(Self {
            semifield: sf,
            rows: self.cols,
            cols: self.rows,
            data,
        })
    }

    /// ⊕ of the diagonal.
    pub fn trace(&self) -> Result<Scalar> {
        let n = self.require_square("trace")?;
        Ok(self.diagonal_sum(n))
    }

    fn diagonal_sum(&self, n: usize) -> Scalar {
        let sf = self.semifield;
        (0..n).fold(Scalar::Zero, |acc, i| sf.add(&acc, self.get(i, i)))
    }

    /// Trace function `Tr(A) = tr A ⊕ tr A² ⊕ ⋯ ⊕ tr Aⁿ`.
    pub fn trace_fn(&self) -> Result<Scalar> {
        let n = self.require_square("trace_fn")?;
        let sf = self.semifield;
        let mut power = self.clone();
        let mut acc = power.diagonal_sum(n);
        for _ in 1..n {
            power = power.mul(self)?;
            acc = sf.add(&acc, &power.diagonal_sum(n));
        }
        Ok(acc)
    }

    /// First `tr(Aⁱ)`, `i = 1..=n`, that exceeds 𝟙, if any.
    ///
    /// A feasibility verdict only needs this value: `Tr(A) > 𝟙` iff it is
    /// `Some`. Powers beyond the first exceeding one are not computed.
    pub fn trace_fn_first_excess(&self) -> Result<Option<Scalar>> {
        let n = self.require_square("trace_fn")?;
        let sf = self.semifield;
        let one = sf.one();
        let mut power = self.clone();
        for i in 0..n {
            if i > 0 {
                power = power.mul(self)?;
            }
            let tr = power.diagonal_sum(n);
            if sf.lt(&one, &tr) {
                return Ok(Some(tr));
            }
        }
        Ok(None)
    }

    /// Whether `Tr(A) > 𝟙`, with early exit.
    pub fn trace_fn_exceeds_one(&self) -> Result<bool> {
        Ok(self.trace_fn_first_excess()?.is_some())
    }

    /// Kleene star `A* = I ⊕ A ⊕ ⋯ ⊕ Aⁿ⁻¹`.
    ///
    /// Computed by squaring `I ⊕ A` until every power up to `n − 1` is
    /// covered. Fails with [`Error::Divergent`] when `Tr(A) > 𝟙`.
    pub fn kleene_star(&self) -> Result<Self> {
        let n = self.require_square("kleene_star")?;
        let sf = self.semifield;
        let trace = self.trace_fn()?;
        if !sf.leq(&trace, &sf.one()) {
            return Err(Error::Divergent { trace });
        }
        let mut closure = Self::identity(sf, n).add(self)?;
        let mut covered = 1;
        while covered + 1 < n {
            closure = closure.mul(&closure)?;
            covered *= 2;
        }
        Ok(closure)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// No entry equals ε (the vector notion of regularity).
    pub fn is_regular(&self) -> bool {
        !self.data.iter().any(Scalar::is_zero)
    }

    pub fn is_row_regular(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).iter().any(|a| !a.is_zero()))
    }

    /// First row consisting only of ε, if any.
    pub fn first_zero_row(&self) -> Option<usize> {
        (0..self.rows).find(|&i| self.row(i).iter().all(Scalar::is_zero))
    }

    pub fn is_row_monomial(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).iter().filter(|a| !a.is_zero()).count() == 1)
    }

    /// Column indices of the nonzero entries of row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, _)| j)
            .collect()
    }

    /// Entrywise `self ≤ other` in the semifield order.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_shape(other, "leq")?;
        let sf = self.semifield;
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| sf.leq(a, b)))
    }

    /// Entrywise equality under the semifield's comparison (exact in exact mode).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.semifield == other.semifield
            && self.shape() == other.shape()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| self.semifield.eq(a, b))
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_semifield(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self::new(self.semifield, self.rows, self.cols + other.cols, data)
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check_semifield(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::new(self.semifield, self.rows + other.rows, self.cols, data)
    }

    /// Rows `range` of a matrix as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Result<Self> {
        let indices: Vec<usize> = (start..end).collect();
        self.select_rows(&indices)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
