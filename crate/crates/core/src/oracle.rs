//! Verification machinery kept independent of the sparsification solver:
//! direct substitution, residuation and a bounded brute-force search.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::semifield::{Scalar, SemifieldKind};
use crate::twosided::SolutionBasis;

#[derive(Clone, Debug, PartialEq)]
pub enum VerifyStatus {
    ExactEqual,
    /// First row where `(A x)ᵢ ≠ (B y)ᵢ`.
    Mismatch {
        row: usize,
        lhs: Scalar,
        rhs: Scalar,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyResult {
    pub status: VerifyStatus,
    pub regular_x: bool,
    pub regular_y: bool,
}

impl VerifyResult {
    pub fn is_exact_equal(&self) -> bool {
        self.status == VerifyStatus::ExactEqual
    }

    pub fn mismatch_row(&self) -> Option<usize> {
        match self.status {
            VerifyStatus::ExactEqual => None,
            VerifyStatus::Mismatch { row, .. } => Some(row),
        }
    }
}

fn check_vector(v: &Vector, len: usize, op: &'static str) -> Result<()> {
    if v.shape() != (len, 1) {
        return Err(Error::ShapeMismatch {
            op,
            left: (len, 1),
            right: v.shape(),
        });
    }
    Ok(())
}

/// Substitutes `(x, y)` into `A x = B y`.
pub fn verify_solution(a: &Matrix, b: &Matrix, x: &Vector, y: &Vector) -> Result<VerifyResult> {
    if a.rows() != b.rows() {
        return Err(Error::RowCountMismatch {
            a: a.rows(),
            b: b.rows(),
        });
    }
    check_vector(x, a.cols(), "verify_solution")?;
    check_vector(y, b.cols(), "verify_solution")?;
    let lhs = a.mul(x)?;
    let rhs = b.mul(y)?;
    let sf = a.semifield();
    let status = (0..lhs.rows())
        .find(|&i| !sf.eq(lhs.get(i, 0), rhs.get(i, 0)))
        .map_or(VerifyStatus::ExactEqual, |row| VerifyStatus::Mismatch {
            row,
            lhs: lhs.get(row, 0).clone(),
            rhs: rhs.get(row, 0).clone(),
        });
    Ok(VerifyResult {
        status,
        regular_x: x.is_regular(),
        regular_y: y.is_regular(),
    })
}

/// Greatest `y` with `B y ≤ c`:
/// `yⱼ = min over rows i with B[i,j] ≠ ε of B[i,j]⁻¹ ⊗ cᵢ` (minimum taken
/// in the semifield order), and `yⱼ = ε` for an all-ε column.
pub fn principal_y(b: &Matrix, c: &Vector) -> Result<Vector> {
    check_vector(c, b.rows(), "principal_y")?;
    let sf = b.semifield();
    let mut entries = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        let mut best: Option<Scalar> = None;
        for i in 0..b.rows() {
            let bij = b.get(i, j);
            if bij.is_zero() {
                continue;
            }
            let candidate = sf.mul(&sf.inv(bij)?, c.get(i, 0));
            best = Some(match best {
                None => candidate,
                Some(current) => sf.meet(&current, &candidate),
            });
        }
        entries.push(best.unwrap_or(Scalar::Zero));
    }
    Matrix::column_vector(sf, entries)
}

/// Whether `target` is `G ⊗ w` for some `w`: residuate, re-expand, compare.
pub fn in_generated_cone(generator: &Matrix, target: &Vector) -> Result<bool> {
    let w = principal_y(generator, target)?;
    Ok(generator.mul(&w)?.approx_eq(target))
}

/// Whether `(x, y)` lies in the family generated by `basis`.
pub fn membership_test(basis: &SolutionBasis, x: &Vector, y: &Vector) -> Result<bool> {
    check_vector(x, basis.x_len(), "membership_test")?;
    check_vector(y, basis.y_len(), "membership_test")?;
    in_generated_cone(&basis.stacked()?, &x.vstack(y)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridReport {
    /// Some witness was found. `false` only means none exists on this grid.
    pub exists: bool,
    pub witnesses: Vec<(Vector, Vector)>,
    pub candidates: u64,
    pub bound: i64,
}

fn integer_entries(m: &Matrix) -> Result<Vec<Option<i64>>> {
    m.entries()
        .iter()
        .map(|s| match s {
            Scalar::Zero => Ok(None),
            other => other
                .as_integer()
                .and_then(|v| v.to_i64())
                .map(Some)
                .ok_or_else(|| {
                    Error::OracleUnsupported(format!("entry {other} is not a machine integer"))
                }),
        })
        .collect()
}

/// `2·max|entry| + 2` over the finite entries of `A` and `B`.
pub fn default_bound(a: &Matrix, b: &Matrix) -> Result<i64> {
    let mut largest = 0i64;
    for m in [a, b] {
        for v in integer_entries(m)?.into_iter().flatten() {
            largest = largest.max(v.abs());
        }
    }
    Ok(2 * largest + 2)
}

/// Brute-force search for integer solutions of `A x = B y` in max-plus.
///
/// Candidates fix `x₁ = 0` (solutions are closed under scaling) and range
/// the other coordinates over `[-bound, bound]`. For each, `y` is the
/// greatest vector with `B y ≤ A x`; coordinates of `y` whose column of `B`
/// is entirely ε do not affect `B y` and are set to 0. The candidate is a
/// witness when `B y = A x` exactly.
pub fn grid_oracle(a: &Matrix, b: &Matrix, bound: i64) -> Result<GridReport> {
    let sf = a.semifield();
    if sf.kind() != SemifieldKind::MaxPlus {
        return Err(Error::OracleUnsupported(
            "grid search needs max-plus".into(),
        ));
    }
    if !sf.is_exact() {
        return Err(Error::OracleUnsupported(
            "grid search needs exact arithmetic".into(),
        ));
    }
    if b.semifield() != sf {
        return Err(Error::SemifieldMismatch);
    }
    if a.rows() != b.rows() {
        return Err(Error::RowCountMismatch {
            a: a.rows(),
            b: b.rows(),
        });
    }
    if let Some(row) = a.first_zero_row() {
        return Err(Error::NotRowRegular { matrix: 'A', row });
    }
    if let Some(row) = b.first_zero_row() {
        return Err(Error::NotRowRegular { matrix: 'B', row });
    }
    integer_entries(a)?;
    integer_entries(b)?;
    if bound.is_negative() {
        return Err(Error::OracleUnsupported(
            "bound must be non-negative".into(),
        ));
    }

    let n = a.cols();
    let free_columns: Vec<bool> = (0..b.cols()).map(|j| b.column(j).is_zero()).collect();
    let width = (2 * bound + 1) as u64;
    let per_branch = width.pow(n.saturating_sub(2) as u32);

    let test = |coords: &[i64]| -> Result<Option<(Vector, Vector)>> {
        let x = Matrix::column_vector(
            sf,
            coords
                .iter()
                .map(|&v| sf.int(v))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let c = a.mul(&x)?;
        let mut y = principal_y(b, &c)?;
        for (j, &free) in free_columns.iter().enumerate() {
            if free {
                y.set(j, 0, sf.one());
            }
        }
        if y.is_regular() && b.mul(&y)? == c {
            Ok(Some((x, y)))
        } else {
            Ok(None)
        }
    };

    let branches: Vec<Vec<(Vector, Vector)>> = if n == 1 {
        vec![test(&[0])?.into_iter().collect()]
    } else {
        (-bound..=bound)
            .into_par_iter()
            .map(|second| {
                let mut found = Vec::new();
                let mut coords = vec![0i64; n];
                coords[1] = second;
                for index in 0..per_branch {
                    let mut rest = index;
                    for coord in coords.iter_mut().skip(2) {
                        *coord = (rest % width) as i64 - bound;
                        rest /= width;
                    }
                    if let Some(w) = test(&coords)? {
                        found.push(w);
                    }
                }
                Ok(found)
            })
            .collect::<Result<Vec<_>>>()?
    };
    let witnesses: Vec<(Vector, Vector)> = branches.into_iter().flatten().collect();
    let candidates = if n == 1 { 1 } else { width * per_branch };
    Ok(GridReport {
        exists: !witnesses.is_empty(),
        witnesses,
        candidates,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semifield::Semifield;
    use crate::text::{parse_matrix, parse_vector};
    use crate::twosided::{build_basis, RowSelection, SelectionPair, Side};

    fn mp(text: &str) -> Matrix {
        parse_matrix(Semifield::max_plus(), text).unwrap()
    }

    fn vec_mp(text: &str) -> Vector {
        parse_vector(Semifield::max_plus(), text).unwrap()
    }

    fn example() -> (Matrix, Matrix) {
        (mp("3 . 0\n1 1 0\n. 1 2"), mp("1 1\n3 2\n3 1"))
    }

    fn example_basis() -> SolutionBasis {
        let (a, b) = example();
        let pair = SelectionPair {
            sel_a: RowSelection::new(Side::A, vec![0, 1, 2]),
            sel_b: RowSelection::new(Side::B, vec![1, 0, 0]),
            trace: Semifield::max_plus().one(),
        };
        build_basis(&a, &b, &pair).unwrap()
    }

    #[test]
    fn verify_known_witness() {
        let (a, b) = example();
        let r = verify_solution(&a, &b, &vec_mp("0 3 2"), &vec_mp("1 2")).unwrap();
        assert!(r.is_exact_equal());
        assert!(r.regular_x && r.regular_y);
        assert_eq!(a.mul(&vec_mp("0 3 2")).unwrap(), vec_mp("3 4 4"));

        let r = verify_solution(&a, &b, &vec_mp("1 3 2"), &vec_mp("1 2")).unwrap();
        assert_eq!(r.mismatch_row(), Some(0));
        assert_eq!(
            r.status,
            VerifyStatus::Mismatch {
                row: 0,
                lhs: Semifield::max_plus().int(4).unwrap(),
                rhs: Semifield::max_plus().int(3).unwrap(),
            }
        );
    }

    #[test]
    fn verify_zero_vectors() {
        let (a, b) = example();
        let r = verify_solution(&a, &b, &vec_mp(". . ."), &vec_mp(". .")).unwrap();
        assert!(r.is_exact_equal());
        assert!(!r.regular_x && !r.regular_y);
        assert!(verify_solution(&a, &b, &vec_mp("0 0"), &vec_mp("0 0")).is_err());
    }

    #[test]
    fn principal_y_examples() {
        let sf = Semifield::max_plus();
        let c = vec_mp("3 4 4");
        assert_eq!(principal_y(&Matrix::identity(sf, 3), &c).unwrap(), c);
        let (_, b) = example();
        let y = principal_y(&b, &c).unwrap();
        assert_eq!(y, vec_mp("1 2"));
        assert_eq!(b.mul(&y).unwrap(), c);
        let shift = sf.int(7).unwrap();
        assert_eq!(principal_y(&b, &c.scale(&shift)).unwrap(), y.scale(&shift));
        assert_eq!(
            principal_y(&mp("0 .\n1 ."), &vec_mp("0 0")).unwrap(),
            vec_mp("-1 .")
        );
    }

    #[test]
    fn membership_round_trips() {
        let basis = example_basis();
        assert!(membership_test(&basis, &vec_mp("0 3 2"), &vec_mp("1 2")).unwrap());
        let (x, y) = basis
            .generators()
            .expand(&vec_mp("0 -5 2"), &vec_mp("1 -3"))
            .unwrap();
        assert!(membership_test(&basis, &x, &y).unwrap());
        assert!(!membership_test(&basis, &vec_mp("0 0 0"), &vec_mp("0 0")).unwrap());
    }

    #[test]
    fn grid_finds_known_witness() {
        let (a, b) = example();
        let report = grid_oracle(&a, &b, 5).unwrap();
        assert!(report.exists);
        assert_eq!(report.candidates, 121);
        let known = (vec_mp("0 3 2"), vec_mp("1 2"));
        assert!(report.witnesses.contains(&known));
        for (x, y) in &report.witnesses {
            assert!(verify_solution(&a, &b, x, y).unwrap().is_exact_equal());
        }
        assert_eq!(default_bound(&a, &b).unwrap(), 8);
    }

    #[test]
    fn grid_on_identical_sides() {
        let a = mp("0 1\n2 .");
        let report = grid_oracle(&a, &a, 1).unwrap();
        assert!(report.witnesses.contains(&(vec_mp("0 0"), vec_mp("0 0"))));
    }

    #[test]
    fn grid_reports_nothing_for_infeasible() {
        let a = mp("0 .\n. 0\n0 .");
        let b = mp("0\n1\n-1");
        assert!(!grid_oracle(&a, &b, 6).unwrap().exists);
    }

    #[test]
    fn grid_fills_unconstrained_y() {
        let a = mp("0");
        let b = mp("0 .");
        let report = grid_oracle(&a, &b, 0).unwrap();
        assert_eq!(report.witnesses, vec![(vec_mp("0"), vec_mp("0 0"))]);
    }

    #[test]
    fn grid_refuses_unsupported_inputs() {
        let sf = Semifield::max_plus().with_tolerance(1e-9);
        let a = parse_matrix(sf, "0").unwrap();
        assert!(matches!(
            grid_oracle(&a, &a, 2),
            Err(Error::OracleUnsupported(_))
        ));
        let a = mp("1/2");
        assert!(matches!(
            grid_oracle(&a, &a, 2),
            Err(Error::OracleUnsupported(_))
        ));
        let mt = parse_matrix(Semifield::min_times(), "2").unwrap();
        assert!(matches!(
            grid_oracle(&mt, &mt, 2),
            Err(Error::OracleUnsupported(_))
        ));
    }
}
