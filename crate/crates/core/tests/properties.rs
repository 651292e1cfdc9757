mod common;

use common::*;
use proptest::prelude::*;
use proptest::strategy::Strategy;
use tropsolve_core::inequality::{block_matrix, solve_pair_system};
use tropsolve_core::oracle::principal_y;
use tropsolve_core::text::{format_matrices, parse_matrices};
use tropsolve_core::Strategy as Search;
use tropsolve_core::*;

fn scalar(lo: i64, hi: i64) -> impl Strategy<Value = Scalar> {
    entry(lo, hi).prop_map(|v| v.map_or(Scalar::Zero, |v| mp().int(v).unwrap()))
}

fn min_times_scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        1 => Just(Scalar::Zero),
        4 => (1i64..=6, 1i64..=6).prop_map(|(p, q)| {
            Semifield::min_times().parse_scalar(&format!("{p}/{q}")).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn semifield_axioms(a in scalar(-5, 5), b in scalar(-5, 5), c in scalar(-5, 5)) {
        let sf = mp();
        prop_assert_eq!(sf.add(&sf.add(&a, &b), &c), sf.add(&a, &sf.add(&b, &c)));
        prop_assert_eq!(sf.mul(&sf.mul(&a, &b), &c), sf.mul(&a, &sf.mul(&b, &c)));
        prop_assert_eq!(sf.mul(&a, &sf.add(&b, &c)), sf.add(&sf.mul(&a, &b), &sf.mul(&a, &c)));
        prop_assert_eq!(sf.add(&a, &a), a.clone());
        let sum = sf.add(&a, &b);
        prop_assert!(sum == a || sum == b);
        prop_assert!(sf.leq(&a, &sum));
        prop_assert_eq!(sf.leq(&sum, &c), sf.leq(&a, &c) && sf.leq(&b, &c));
        prop_assert_eq!(sf.mul(&Scalar::Zero, &a), Scalar::Zero);
        prop_assert_eq!(sf.add(&Scalar::Zero, &a), a.clone());
        if !a.is_zero() {
            prop_assert!(sf.is_one(&sf.mul(&a, &sf.inv(&a).unwrap())));
        }
        if !a.is_zero() && !b.is_zero() && sf.leq(&a, &b) {
            prop_assert!(sf.leq(&sf.inv(&b).unwrap(), &sf.inv(&a).unwrap()));
        }
    }

    #[test]
    fn min_times_axioms(a in min_times_scalar(), b in min_times_scalar(), c in min_times_scalar()) {
        let sf = Semifield::min_times();
        prop_assert_eq!(sf.mul(&a, &sf.add(&b, &c)), sf.add(&sf.mul(&a, &b), &sf.mul(&a, &c)));
        let sum = sf.add(&a, &b);
        prop_assert!(sum == a || sum == b);
        prop_assert!(sf.leq(&b, &sum));
        if !a.is_zero() {
            prop_assert!(sf.is_one(&sf.mul(&a, &sf.inv(&a).unwrap())));
        }
        if !a.is_zero() && !b.is_zero() && sf.leq(&a, &b) {
            prop_assert!(sf.leq(&sf.inv(&b).unwrap(), &sf.inv(&a).unwrap()));
        }
    }

    #[test]
    fn scalar_text_round_trip(num in -50i64..50, den in 1i64..12) {
        let sf = mp();
        let s = sf.parse_scalar(&format!("{num}/{den}")).unwrap();
        prop_assert_eq!(sf.parse_scalar(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn matrix_text_round_trip(a in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| matrix(r, c)),
                              b in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let printed = format_matrices(&[&a, &b]);
        let (_, back) = parse_matrices(&printed, SemifieldKind::MinTimes, Arithmetic::Exact).unwrap();
        prop_assert_eq!(back, vec![a, b]);
    }

    #[test]
    fn trace_monotone(a in square(4), shift in 0i64..3) {
        // a ⊕ (shift ⊗ a) ≥ a entrywise.
        let sf = mp();
        let bigger = a.add(&a.scale(&sf.int(shift).unwrap())).unwrap();
        prop_assert!(a.leq(&bigger).unwrap());
        prop_assert!(sf.leq(&a.trace().unwrap(), &bigger.trace().unwrap()));
        prop_assert!(sf.leq(&a.trace_fn().unwrap(), &bigger.trace_fn().unwrap()));
    }

    #[test]
    fn power_traces_bounded_by_trace_fn(a in square(4), p in 1u32..9) {
        let sf = mp();
        let tr = a.pow(p).unwrap().trace().unwrap();
        let total = a.trace_fn().unwrap();
        if p as usize <= a.rows() {
            prop_assert!(sf.leq(&tr, &total));
        }
        if sf.leq(&total, &sf.one()) {
            prop_assert!(sf.leq(&tr, &sf.one()));
        }
    }

    #[test]
    fn early_exit_agrees_with_full_value(a in square(4)) {
        let sf = mp();
        let exceeds = sf.lt(&sf.one(), &a.trace_fn().unwrap());
        prop_assert_eq!(a.trace_fn_exceeds_one().unwrap(), exceeds);
    }

    #[test]
    fn kleene_star_is_closure(a in square(4)) {
        let sf = mp();
        if sf.leq(&a.trace_fn().unwrap(), &sf.one()) {
            let star = a.kleene_star().unwrap();
            prop_assert_eq!(&star, &star_by_sum(&a));
            prop_assert_eq!(star.mul(&star).unwrap(), star.clone());
            prop_assert_eq!(star.kleene_star().unwrap(), star.clone());
            // A* solves A x ≤ x column by column.
            prop_assert!(a.mul(&star).unwrap().leq(&star).unwrap());
        } else {
            let diverges = matches!(a.kleene_star(), Err(Error::Divergent { .. }));
            prop_assert!(diverges);
        }
    }

    #[test]
    fn pair_feasibility_is_symmetric((a, b) in (1usize..4, 1usize..4)
        .prop_flat_map(|(k, n)| (matrix(k, n), matrix(n, k)))) {
        let sf = mp();
        let ab = a.mul(&b).unwrap().trace_fn().unwrap();
        let ba = b.mul(&a).unwrap().trace_fn().unwrap();
        let one = sf.one();
        prop_assert_eq!(sf.leq(&ab, &one), sf.leq(&ba, &one));
        if sf.leq(&ab, &one) {
            prop_assert_eq!(ab, ba);
        }
        let c = block_matrix(&a, &b).unwrap();
        let mut power = c.clone();
        for i in 1..=c.rows() {
            if i % 2 == 1 {
                prop_assert!(power.trace().unwrap().is_zero());
            }
            power = power.mul(&c).unwrap();
        }
    }

    #[test]
    fn pair_samples_are_sound((a, b) in (1usize..4, 1usize..4)
            .prop_flat_map(|(k, n)| (matrix(k, n), matrix(n, k))),
        params in prop::collection::vec(entry(-4, 4), 6)) {
        let sf = mp();
        if let Outcome::Feasible(basis) = solve_pair_system(&a, &b).unwrap() {
            let (k, n) = a.shape();
            let u = build(sf, n, 1, &params[..n]);
            let v = build(sf, k, 1, &params[3..3 + k]);
            if let Ok((x, y)) = basis.expand(&u, &v) {
                prop_assert!(a.mul(&x).unwrap().leq(&y).unwrap());
                prop_assert!(b.mul(&y).unwrap().leq(&x).unwrap());
            }
            prop_assert!(basis.admits_regular_sample().unwrap());
        }
    }

    #[test]
    fn principal_y_is_greatest(b in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| row_regular(r, c)),
                               c in prop::collection::vec(-4i64..=4, 3),
                               other in prop::collection::vec(entry(-6, 6), 3)) {
        let sf = mp();
        let target = build(sf, b.rows(), 1, &c[..b.rows()].iter().map(|&v| Some(v)).collect::<Vec<_>>());
        let y = principal_y(&b, &target).unwrap();
        prop_assert!(b.mul(&y).unwrap().leq(&target).unwrap());
        let candidate = build(sf, b.cols(), 1, &other[..b.cols()]);
        if b.mul(&candidate).unwrap().leq(&target).unwrap() {
            for j in 0..b.cols() {
                if !b.column(j).is_zero() {
                    prop_assert!(sf.leq(candidate.get(j, 0), y.get(j, 0)));
                }
            }
        }
    }

    #[test]
    fn twosided_invariants((a, b) in (1usize..4, 1usize..4, 1usize..4)
        .prop_flat_map(|(m, n, k)| (row_regular(m, n), row_regular(m, k)))) {
        let sf = mp();
        let all = enumerate_selections(&a, &b, Search::Exhaustive).unwrap();
        let bt = enumerate_selections(&a, &b, Search::Backtracking).unwrap();
        prop_assert_eq!(all.examined, bt.examined + bt.pruned);
        let f1: Vec<_> = all.feasible(&sf).into_iter().cloned().collect();
        let f2: Vec<_> = bt.feasible(&sf).into_iter().cloned().collect();
        prop_assert_eq!(&f1, &f2);
        for pair in &all.pairs {
            prop_assert!(sf.leq(&sf.one(), &pair.trace));
            let a1c = pair.sel_a.materialize(&a).unwrap().conjugate().unwrap();
            let b1c = pair.sel_b.materialize(&b).unwrap().conjugate().unwrap();
            let cyclic = a1c.mul(&b).unwrap().mul(&b1c).unwrap().mul(&a).unwrap().trace_fn().unwrap();
            // Equal whenever the condition holds; both exceed 𝟙 otherwise.
            prop_assert_eq!(sf.is_one(&cyclic), sf.is_one(&pair.trace));
            if sf.is_one(&pair.trace) {
                prop_assert_eq!(&cyclic, &pair.trace);
            }
        }
        for pair in &f1 {
            let basis = build_basis(&a, &b, pair).unwrap();
            let u = Matrix::filled(sf, a.cols(), 1, sf.one());
            let v = Matrix::filled(sf, b.cols(), 1, sf.one());
            let s = sample_solution(&basis, &u, &v).unwrap();
            prop_assert!(s.regular);
            prop_assert!(verify_solution(&a, &b, &s.x, &s.y).unwrap().is_exact_equal());
        }
    }

    #[test]
    fn row_monomial_inequalities(rows in 1usize..5, cols in 1usize..5,
                                 picks in prop::collection::vec((0usize..4, -3i64..=3), 4)) {
        let sf = mp();
        let mut a1 = Matrix::zeros(sf, rows, cols);
        for (i, &(c, v)) in picks.iter().take(rows).enumerate() {
            a1.set(i, c % cols, sf.int(v).unwrap());
        }
        prop_assert!(a1.is_row_monomial());
        let conj = a1.conjugate().unwrap();
        prop_assert!(conj.mul(&a1).unwrap().leq(&Matrix::identity(sf, cols)).unwrap());
        prop_assert!(Matrix::identity(sf, rows).leq(&a1.mul(&conj).unwrap()).unwrap());
    }
}
