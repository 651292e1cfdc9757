//! Complete solutions of `A x ≤ x` and of the coupled system
//! `A x ≤ y`, `B y ≤ x`.
//!
//! Both are answered by Kleene stars: when the trace function of the
//! relevant square matrix does not exceed 𝟙, every regular solution is an
//! image of a star matrix; otherwise no regular solution exists.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::semifield::Scalar;

/// Result of a solver that may find the system infeasible.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<T> {
    Feasible(T),
    /// The trace function exceeded 𝟙; `trace` is the offending value.
    Infeasible {
        trace: Scalar,
    },
}

impl<T> Outcome<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Feasible(_))
    }

    pub fn feasible(self) -> Option<T> {
        match self {
            Outcome::Feasible(t) => Some(t),
            Outcome::Infeasible { .. } => None,
        }
    }
}

/// Generator of the solutions of `A x ≤ x`: `x = generator ⊗ u`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeBasis {
    pub generator: Matrix,
    pub description: String,
}

/// Solves `A x ≤ x` for square `A`.
pub fn solve_x_leq(a: &Matrix) -> Result<Outcome<ConeBasis>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "solve_x_leq",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    match a.kleene_star() {
        Ok(generator) => Ok(Outcome::Feasible(ConeBasis {
            generator,
            description: format!("Kleene star of a {}x{} matrix", a.rows(), a.cols()),
        })),
        Err(Error::Divergent { trace }) => Ok(Outcome::Infeasible { trace }),
        Err(e) => Err(e),
    }
}

/// Generators of the coupled system, for `A` of size k×n and `B` of size n×k:
///
/// ```text
/// x = (BA)* u ⊕ B(AB)* v
/// y = A(BA)* u ⊕ (AB)* v
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct PairBasis {
    /// `(BA)*`, n×n.
    pub gxu: Matrix,
    /// `B(AB)*`, n×k.
    pub gxv: Matrix,
    /// `A(BA)*`, k×n.
    pub gyu: Matrix,
    /// `(AB)*`, k×k.
    pub gyv: Matrix,
}

impl PairBasis {
    /// Dimension of `x` (and of `u`).
    pub fn x_len(&self) -> usize {
        self.gxu.rows()
    }

    /// Dimension of `y` (and of `v`).
    pub fn y_len(&self) -> usize {
        self.gyv.rows()
    }

    /// The stacked generator `[[Gxu, Gxv], [Gyu, Gyv]]`, mapping `(u; v)`
    /// to `(x; y)`.
    pub fn stacked(&self) -> Result<Matrix> {
        let top = self.gxu.hstack(&self.gxv)?;
        let bottom = self.gyu.hstack(&self.gyv)?;
        top.vstack(&bottom)
    }

    /// Expands parameters `u` (length n) and `v` (length k) into `(x, y)`.
    pub fn expand(&self, u: &Vector, v: &Vector) -> Result<(Vector, Vector)> {
        if u.is_zero() && v.is_zero() {
            return Err(Error::ZeroParameters);
        }
        let x = self.gxu.mul(u)?.add(&self.gxv.mul(v)?)?;
        let y = self.gyu.mul(u)?.add(&self.gyv.mul(v)?)?;
        Ok((x, y))
    }

    /// Whether all-𝟙 parameters give a regular pair, i.e. the stacked
    /// generator is row-regular.
    pub fn admits_regular_sample(&self) -> Result<bool> {
        Ok(self.stacked()?.is_row_regular())
    }

    /// Parameter positions whose generator column is not all ε. Only these
    /// columns can contribute to a sample; the rest may be set to anything.
    pub fn contributing_columns(&self) -> Result<Vec<usize>> {
        let g = self.stacked()?;
        Ok((0..g.cols()).filter(|&j| !g.column(j).is_zero()).collect())
    }
}

fn check_pair_shapes(a: &Matrix, b: &Matrix, op: &'static str) -> Result<()> {
    if a.cols() != b.rows() || a.rows() != b.cols() {
        return Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// Solves `A x ≤ y`, `B y ≤ x` for `A` (k×n) and `B` (n×k).
///
/// The blocks are computed from the closed formulas; [`block_kleene`] builds
/// the same generators through the combined block matrix.
pub fn solve_pair_system(a: &Matrix, b: &Matrix) -> Result<Outcome<PairBasis>> {
    check_pair_shapes(a, b, "solve_pair_system")?;
    let ab = a.mul(b)?;
    let sf = ab.semifield();
    let trace = ab.trace_fn()?;
    if !sf.leq(&trace, &sf.one()) {
        return Ok(Outcome::Infeasible { trace });
    }
    let ba = b.mul(a)?;
    let gxu = ba.kleene_star()?;
    let gyv = ab.kleene_star()?;
    let gxv = b.mul(&gyv)?;
    let gyu = a.mul(&gxu)?;
    Ok(Outcome::Feasible(PairBasis { gxu, gxv, gyu, gyv }))
}

/// The block matrix `C = [[0, B], [A, 0]]` of order n + k.
pub fn block_matrix(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_pair_shapes(a, b, "block_matrix")?;
    let sf = a.semifield();
    let (k, n) = a.shape();
    let top = Matrix::zeros(sf, n, n).hstack(b)?;
    let bottom = a.hstack(&Matrix::zeros(sf, k, k))?;
    top.vstack(&bottom)
}

/// `C*` assembled from its blocks `[[(BA)*, B(AB)*], [A(BA)*, (AB)*]]`.
pub fn block_kleene(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    check_pair_shapes(a, b, "block_kleene")?;
    match solve_pair_system(a, b)? {
        Outcome::Feasible(basis) => basis.stacked(),
        Outcome::Infeasible { trace } => Err(Error::Divergent { trace }),
    }
}
