//! Complete solution of the two-sided equation `A x = B y`.
//!
//! For row-regular `A` (m×n) and `B` (m×k), every regular solution solves
//! the inequality system
//!
//! ```text
//! B₁⁻ A x ≤ y,    A₁⁻ B y ≤ x
//! ```
//!
//! for some row-monomial sparsifications `A₁` of `A` and `B₁` of `B` (one
//! nonzero entry kept per row), and conversely. Such a system is solvable
//! iff `Tr(A A₁⁻ B B₁⁻) = 𝟙`, and its solutions are then generated by four
//! star matrices. Enumerating all selection pairs therefore yields every
//! solution of the equation.
//!
//! Enumeration is exponential in `m`. The backtracking strategy fixes
//! selections row by row and discards a partial selection as soon as the
//! equation restricted to the rows fixed so far is already infeasible.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inequality::{solve_pair_system, Outcome, PairBasis};
use crate::matrix::{Matrix, Vector};
use crate::oracle::{in_generated_cone, verify_solution};
use crate::semifield::{Scalar, Semifield};

/// Which side of the equation a selection sparsifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    fn label(self) -> char {
        match self {
            Side::A => 'A',
            Side::B => 'B',
        }
    }
}

/// One nonzero column per row; defines a row-monomial sparsification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowSelection {
    pub side: Side,
    /// 0-based column picked in each row.
    pub picks: Vec<usize>,
}

impl RowSelection {
    pub fn new(side: Side, picks: Vec<usize>) -> Self {
        Self { side, picks }
    }

    /// Builds a selection from 1-based column numbers.
    pub fn from_one_based(side: Side, picks: &[usize]) -> Result<Self> {
        let picks = picks
            .iter()
            .enumerate()
            .map(|(row, &c)| {
                c.checked_sub(1).ok_or(Error::InvalidSelection {
                    matrix: side.label(),
                    row,
                    column: 0,
                    reason: "columns are numbered from 1",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { side, picks })
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.picks.iter().map(|c| c + 1).collect()
    }

    pub fn validate(&self, source: &Matrix) -> Result<()> {
        let matrix = self.side.label();
        if self.picks.len() != source.rows() {
            return Err(Error::SelectionLength {
                matrix,
                expected: source.rows(),
                actual: self.picks.len(),
            });
        }
        for (row, &column) in self.picks.iter().enumerate() {
            if column >= source.cols() {
                return Err(Error::InvalidSelection {
                    matrix,
                    row,
                    column,
                    reason: "which is out of range",
                });
            }
            if source.get(row, column).is_zero() {
                return Err(Error::InvalidSelection {
                    matrix,
                    row,
                    column,
                    reason: "which is a zero entry",
                });
            }
        }
        Ok(())
    }

    /// The row-monomial matrix keeping only the picked entries.
    pub fn materialize(&self, source: &Matrix) -> Result<Matrix> {
        self.validate(source)?;
        let mut out = Matrix::zeros(source.semifield(), source.rows(), source.cols());
        for (row, &column) in self.picks.iter().enumerate() {
            out.set(row, column, source.get(row, column).clone());
        }
        Ok(out)
    }
}

/// A selection over `A`, one over `B`, and `Tr(A A₁⁻ B B₁⁻)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionPair {
    pub sel_a: RowSelection,
    pub sel_b: RowSelection,
    pub trace: Scalar,
}

impl SelectionPair {
    pub fn is_feasible(&self, semifield: &Semifield) -> bool {
        semifield.is_one(&self.trace)
    }
}

/// Generators of all solutions attached to one feasible selection pair:
///
/// ```text
/// x = Gxu u ⊕ Gxv v,    y = Gyu u ⊕ Gyv v
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBasis {
    /// `(A₁⁻ B B₁⁻ A)*`, n×n.
    pub gxu: Matrix,
    /// `A₁⁻ B (B₁⁻ A A₁⁻ B)*`, n×k.
    pub gxv: Matrix,
    /// `B₁⁻ A (A₁⁻ B B₁⁻ A)*`, k×n.
    pub gyu: Matrix,
    /// `(B₁⁻ A A₁⁻ B)*`, k×k.
    pub gyv: Matrix,
    pub pair: SelectionPair,
}

impl SolutionBasis {
    fn from_parts(generators: PairBasis, pair: SelectionPair) -> Self {
        let PairBasis { gxu, gxv, gyu, gyv } = generators;
        Self {
            gxu,
            gxv,
            gyu,
            gyv,
            pair,
        }
    }

    pub fn generators(&self) -> PairBasis {
        PairBasis {
            gxu: self.gxu.clone(),
            gxv: self.gxv.clone(),
            gyu: self.gyu.clone(),
            gyv: self.gyv.clone(),
        }
    }

    /// `[[Gxu, Gxv], [Gyu, Gyv]]`.
    pub fn stacked(&self) -> Result<Matrix> {
        self.gxu
            .hstack(&self.gxv)?
            .vstack(&self.gyu.hstack(&self.gyv)?)
    }

    pub fn x_len(&self) -> usize {
        self.gxu.rows()
    }

    pub fn y_len(&self) -> usize {
        self.gyv.rows()
    }
}

/// A parameter choice and the pair `(x, y)` it produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub x: Vector,
    pub y: Vector,
    /// Both `x` and `y` are regular.
    pub regular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Exhaustive,
    #[default]
    Backtracking,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Backtracking => "backtracking",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "backtracking" => Ok(Strategy::Backtracking),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

/// Output of [`enumerate_selections`].
#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Complete selection pairs reached, in lexicographic order of
    /// `(sel_a, sel_b)`.
    pub pairs: Vec<SelectionPair>,
    /// Complete pairs whose condition was evaluated.
    pub examined: u64,
    /// Complete pairs never reached because a row prefix was infeasible.
    pub pruned: u64,
}

impl Enumeration {
    pub fn feasible(&self, semifield: &Semifield) -> Vec<&SelectionPair> {
        self.pairs
            .iter()
            .filter(|p| p.is_feasible(semifield))
            .collect()
    }
}

fn validate_problem(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.semifield() != b.semifield() {
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
    Ok(())
}

/// `Tr(A A₁⁻ B B₁⁻)`, computed from the materialized sparsifications.
pub fn check_condition(
    a: &Matrix,
    b: &Matrix,
    sel_a: &RowSelection,
    sel_b: &RowSelection,
) -> Result<Scalar> {
    if a.rows() != b.rows() {
        return Err(Error::RowCountMismatch {
            a: a.rows(),
            b: b.rows(),
        });
    }
    let a1 = sel_a.materialize(a)?;
    let b1 = sel_b.materialize(b)?;
    a.mul(&a1.conjugate()?)?
        .mul(b)?
        .mul(&b1.conjugate()?)?
        .trace_fn()
}

/// Generators for a feasible pair, via the coupled inequality solver with
/// `B₁⁻A` in place of its first matrix and `A₁⁻B` in place of its second.
pub fn build_basis(a: &Matrix, b: &Matrix, pair: &SelectionPair) -> Result<SolutionBasis> {
    let a1_conj = pair.sel_a.materialize(a)?.conjugate()?;
    let b1_conj = pair.sel_b.materialize(b)?.conjugate()?;
    let b1a = b1_conj.mul(a)?;
    let a1b = a1_conj.mul(b)?;
    match solve_pair_system(&b1a, &a1b)? {
        Outcome::Feasible(g) => {
            let trace = a.semifield().one();
            Ok(SolutionBasis::from_parts(
                g,
                SelectionPair {
                    trace,
                    ..pair.clone()
                },
            ))
        }
        Outcome::Infeasible { trace } => Err(Error::InfeasiblePair { trace }),
    }
}

/// `x = Gxu u ⊕ Gxv v`, `y = Gyu u ⊕ Gyv v`.
pub fn sample_solution(basis: &SolutionBasis, u: &Vector, v: &Vector) -> Result<Sample> {
    let (x, y) = basis.generators().expand(u, v)?;
    let regular = x.is_regular() && y.is_regular();
    Ok(Sample { x, y, regular })
}

/// Per-row data for the sparsified products.
///
/// For a pick `c` in row `i`, column `i` of `A A₁⁻` equals
/// `A[·, c] ⊗ A[i, c]⁻¹`; caching these columns turns every condition check
/// into one m×m product plus its trace function.
struct RowChoices {
    columns: Vec<usize>,
    /// `conj_columns[t][r] = M[r, columns[t]] ⊗ M[i, columns[t]]⁻¹`.
    conj_columns: Vec<Vec<Scalar>>,
}

fn row_choices(m: &Matrix) -> Result<Vec<RowChoices>> {
    let sf = m.semifield();
    (0..m.rows())
        .map(|i| {
            let columns = m.row_support(i);
            let conj_columns = columns
                .iter()
                .map(|&c| {
                    let inv = sf.inv(m.get(i, c))?;
                    Ok((0..m.rows()).map(|r| sf.mul(m.get(r, c), &inv)).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RowChoices {
                columns,
                conj_columns,
            })
        })
        .collect()
}

struct Search<'a> {
    semifield: Semifield,
    m: usize,
    a_rows: &'a [RowChoices],
    b_rows: &'a [RowChoices],
    prune: bool,
    /// `leaves_below[d]`: complete pairs under one node at depth `d`.
    leaves_below: Vec<u64>,
}

#[derive(Default)]
struct SearchResult {
    pairs: Vec<SelectionPair>,
    examined: u64,
    pruned: u64,
}

impl Search<'_> {
    /// `Tr` of the leading `d`×`d` block of `(A A₁⁻)(B B₁⁻)`.
    fn prefix_product(&self, d: usize, pick_a: &[usize], pick_b: &[usize]) -> Result<Matrix> {
        let sf = self.semifield;
        let mut left = Matrix::zeros(sf, d, d);
        let mut right = Matrix::zeros(sf, d, d);
        for i in 0..d {
            let ca = &self.a_rows[i].conj_columns[pick_a[i]];
            let cb = &self.b_rows[i].conj_columns[pick_b[i]];
            for r in 0..d {
                left.set(r, i, ca[r].clone());
                right.set(r, i, cb[r].clone());
            }
        }
        left.mul(&right)
    }

    fn descend(
        &self,
        depth: usize,
        pick_a: &mut Vec<usize>,
        pick_b: &mut Vec<usize>,
        out: &mut SearchResult,
    ) -> Result<()> {
        if depth == self.m {
            let trace = self.prefix_product(self.m, pick_a, pick_b)?.trace_fn()?;
            out.examined += 1;
            out.pairs.push(self.pair(pick_a, pick_b, trace));
            return Ok(());
        }
        let na = self.a_rows[depth].columns.len();
        let nb = self.b_rows[depth].columns.len();
        for ta in 0..na {
            for tb in 0..nb {
                pick_a.push(ta);
                pick_b.push(tb);
                let keep = if self.prune && depth + 1 < self.m {
                    !self
                        .prefix_product(depth + 1, pick_a, pick_b)?
                        .trace_fn_exceeds_one()?
                } else {
                    true
                };
                if keep {
                    self.descend(depth + 1, pick_a, pick_b, out)?;
                } else {
                    out.pruned += self.leaves_below[depth + 1];
                }
                pick_a.pop();
                pick_b.pop();
            }
        }
        Ok(())
    }

    fn pair(&self, pick_a: &[usize], pick_b: &[usize], trace: Scalar) -> SelectionPair {
        let cols = |rows: &[RowChoices], picks: &[usize]| -> Vec<usize> {
            picks
                .iter()
                .enumerate()
                .map(|(i, &t)| rows[i].columns[t])
                .collect()
        };
        SelectionPair {
            sel_a: RowSelection::new(Side::A, cols(self.a_rows, pick_a)),
            sel_b: RowSelection::new(Side::B, cols(self.b_rows, pick_b)),
            trace,
        }
    }
}

/// Enumerates row-monomial selection pairs with their condition values.
///
/// `Exhaustive` reaches every pair. `Backtracking` assigns rows in order and
/// drops a partial assignment over rows `1..=i` when the equation made of
/// those rows alone already has `Tr > 𝟙` for the partial selections; any
/// solution of the full equation solves every row subset with the induced
/// selections, so no feasible pair is lost.
pub fn enumerate_selections(a: &Matrix, b: &Matrix, strategy: Strategy) -> Result<Enumeration> {
    validate_problem(a, b)?;
    let a_rows = row_choices(a)?;
    let b_rows = row_choices(b)?;
    let m = a.rows();
    let mut leaves_below = vec![1u64; m + 1];
    for d in (0..m).rev() {
        let width = (a_rows[d].columns.len() * b_rows[d].columns.len()) as u64;
        leaves_below[d] = leaves_below[d + 1].saturating_mul(width);
    }
    let search = Search {
        semifield: a.semifield(),
        m,
        a_rows: &a_rows,
        b_rows: &b_rows,
        prune: strategy == Strategy::Backtracking,
        leaves_below,
    };

    // Subtrees below each first-row choice are independent.
    let roots: Vec<(usize, usize)> = (0..a_rows[0].columns.len())
        .flat_map(|ta| (0..b_rows[0].columns.len()).map(move |tb| (ta, tb)))
        .collect();
    let partials = roots
        .par_iter()
        .map(|&(ta, tb)| {
            let mut out = SearchResult::default();
            let mut pick_a = vec![ta];
            let mut pick_b = vec![tb];
            let keep = if search.prune && m > 1 {
                !search
                    .prefix_product(1, &pick_a, &pick_b)?
                    .trace_fn_exceeds_one()?
            } else {
                true
            };
            if keep {
                search.descend(1, &mut pick_a, &mut pick_b, &mut out)?;
            } else {
                out.pruned += search.leaves_below[1];
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut result = Enumeration {
        pairs: Vec::new(),
        examined: 0,
        pruned: 0,
    };
    for part in partials {
        result.pairs.extend(part.pairs);
        result.examined += part.examined;
        result.pruned += part.pruned;
    }
    result
        .pairs
        .sort_by(|p, q| (&p.sel_a.picks, &p.sel_b.picks).cmp(&(&q.sel_a.picks, &q.sel_b.picks)));
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Drop bases whose solution family is contained in another's.
    pub dedupe: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Backtracking,
            dedupe: true,
        }
    }
}

/// A verified sample together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub u: Vector,
    pub v: Vector,
    pub x: Vector,
    pub y: Vector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisRecord {
    pub basis: SolutionBasis,
    /// Sample from all-𝟙 parameters, present when it is regular.
    pub witness: Option<Witness>,
    pub note: Option<String>,
    /// For a dropped basis, the index in [`SolveReport::bases`] of a basis
    /// whose family contains this one.
    pub subsumed_by: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub feasible: bool,
    /// Every feasible selection pair, in enumeration order.
    pub feasible_pairs: Vec<SelectionPair>,
    /// Bases of the feasible pairs, after optional deduplication.
    pub bases: Vec<BasisRecord>,
    /// Bases dropped by deduplication, in enumeration order.
    pub redundant_bases: Vec<BasisRecord>,
    pub selections_examined: u64,
    pub selections_pruned: u64,
    /// First regular witness among the bases.
    pub witness: Option<Witness>,
}

fn all_one(semifield: Semifield, n: usize) -> Vector {
    Matrix::filled(semifield, n, 1, semifield.one())
}

fn witness_for(
    a: &Matrix,
    b: &Matrix,
    basis: &SolutionBasis,
) -> Result<(Option<Witness>, Option<String>)> {
    let sf = a.semifield();
    let u = all_one(sf, basis.x_len());
    let v = all_one(sf, basis.y_len());
    let sample = sample_solution(basis, &u, &v)?;
    if !sample.regular {
        return Ok((
            None,
            Some("all-one parameters do not give a regular pair".to_string()),
        ));
    }
    let check = verify_solution(a, b, &sample.x, &sample.y)?;
    if let Some(row) = check.mismatch_row() {
        return Err(Error::WitnessMismatch { row });
    }
    Ok((
        Some(Witness {
            u,
            v,
            x: sample.x,
            y: sample.y,
        }),
        None,
    ))
}

/// Whether every solution generated by `inner` is generated by `outer`.
fn family_contains(outer: &Matrix, inner: &Matrix) -> Result<bool> {
    for j in 0..inner.cols() {
        if !in_generated_cone(outer, &inner.column(j))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of bases kept after removing families contained in others.
/// Among mutually containing families the earliest is kept.
fn dedupe(stacked: &[Matrix]) -> Result<Vec<usize>> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, g) in stacked.iter().enumerate() {
        let mut redundant = false;
        for &k in &kept {
            if stacked[k] == *g || family_contains(&stacked[k], g)? {
                redundant = true;
                break;
            }
        }
        if redundant {
            continue;
        }
        let mut survivors = Vec::with_capacity(kept.len() + 1);
        for &k in &kept {
            if !family_contains(g, &stacked[k])? {
                survivors.push(k);
            }
        }
        survivors.push(i);
        survivors.sort_unstable();
        kept = survivors;
    }
    Ok(kept)
}

/// Finds every feasible selection pair, builds and verifies its basis.
pub fn solve_all(a: &Matrix, b: &Matrix, options: &SolveOptions) -> Result<SolveReport> {
    let enumeration = enumerate_selections(a, b, options.strategy)?;
    let sf = a.semifield();
    let feasible_pairs: Vec<SelectionPair> = enumeration
        .pairs
        .into_iter()
        .filter(|p| p.is_feasible(&sf))
        .collect();

    let records = feasible_pairs
        .par_iter()
        .map(|pair| {
            let basis = build_basis(a, b, pair)?;
            let (witness, note) = witness_for(a, b, &basis)?;
            Ok(BasisRecord {
                basis,
                witness,
                note,
                subsumed_by: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (bases, redundant_bases) = if options.dedupe {
        let stacked = records
            .iter()
            .map(|r| r.basis.stacked())
            .collect::<Result<Vec<_>>>()?;
        let kept = dedupe(&stacked)?;
        let mut bases = Vec::with_capacity(kept.len());
        let mut redundant = Vec::new();
        for (i, mut record) in records.into_iter().enumerate() {
            if kept.binary_search(&i).is_ok() {
                bases.push(record);
                continue;
            }
            for (slot, &k) in kept.iter().enumerate() {
                if stacked[k] == stacked[i] || family_contains(&stacked[k], &stacked[i])? {
                    record.subsumed_by = Some(slot);
                    break;
                }
            }
            redundant.push(record);
        }
        (bases, redundant)
    } else {
        (records, Vec::new())
    };
    let witness = bases.iter().find_map(|r| r.witness.clone());
    Ok(SolveReport {
        feasible: !bases.is_empty(),
        feasible_pairs,
        bases,
        redundant_bases,
        selections_examined: enumeration.examined,
        selections_pruned: enumeration.pruned,
        witness,
    })
}
