#![allow(dead_code)]

use proptest::prelude::*;
use tropsolve_core::{Matrix, Scalar, Semifield};

pub fn mp() -> Semifield {
    Semifield::max_plus()
}

/// `None` is ε.
pub fn entry(lo: i64, hi: i64) -> impl Strategy<Value = Option<i64>> {
    prop_oneof![1 => Just(None), 4 => (lo..=hi).prop_map(Some)]
}

pub fn build(sf: Semifield, rows: usize, cols: usize, values: &[Option<i64>]) -> Matrix {
    let data = values
        .iter()
        .map(|v| v.map_or(Scalar::Zero, |v| sf.int(v).unwrap()))
        .collect();
    Matrix::new(sf, rows, cols, data).unwrap()
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(entry(-3, 3), rows * cols).prop_map(move |v| build(mp(), rows, cols, &v))
}

pub fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n))
}

pub fn row_regular(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    matrix(rows, cols).prop_filter("row-regular", Matrix::is_row_regular)
}

/// `Σ_{i<n} Aⁱ` by plain repeated multiplication.
pub fn star_by_sum(a: &Matrix) -> Matrix {
    let sf = a.semifield();
    let n = a.rows();
    let mut sum = Matrix::identity(sf, n);
    let mut power = Matrix::identity(sf, n);
    for _ in 1..n {
        power = power.mul(a).unwrap();
        sum = sum.add(&power).unwrap();
    }
    sum
}
