mod common;

use std::collections::BTreeMap;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use ramop_core::forms::{forms_checks, relation_survey, DEFAULT_SEED};
use ramop_core::linear::{quotient_basis, rank, reduce, rref, SparseMatrix, SparseVec};
use ramop_core::ram::{self, Which};
use ramop_core::ramanujan::{predicted_dims, psi, Poly2};
use ramop_core::Limits;

fn random_matrix(seed: u64, rows: usize, cols: usize) -> SparseMatrix {
    let mut r = rng(seed);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| if below(&mut r, 3) == 0 { below(&mut r, 7) as i64 - 3 } else { 0 }).collect())
        .collect();
    let refs: Vec<&[i64]> = data.iter().map(|v| v.as_slice()).collect();
    SparseMatrix::from_dense(&refs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rref_spans_the_input_rows(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let m = random_matrix(seed, rows, cols);
        let e = rref(&m);
        for row in m.rows.iter() {
            prop_assert!(reduce(row, &e).is_zero());
        }
        let both = SparseMatrix::from_rows(cols, m.rows.iter().cloned().chain(e.rows().iter().cloned()).collect());
        prop_assert_eq!(rank(&both), e.rank());
        prop_assert!(e.rank() <= rows.min(cols));
    }

    #[test]
    fn quotient_basis_complements_the_row_space(seed in any::<u64>(), rows in 1usize..8, cols in 1usize..8) {
        let m = random_matrix(seed, rows, cols);
        let q = quotient_basis(&m);
        prop_assert_eq!(q.dim() + rank(&m), cols);
        for (i, &c) in q.basis.iter().enumerate() {
            prop_assert_eq!(q.coordinates(&SparseVec::unit(c)), SparseVec::unit(i));
        }
    }
}

/// `ψ_{n+1} = ψ_n + (x + y)(n ψ_n + x ∂_x ψ_n)` applied coefficientwise.
fn next_psi(p: &Poly2, n: u32) -> BTreeMap<(u32, u32), BigInt> {
    let mut out: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for (&(i, k), c) in p.0.iter() {
        *out.entry((i, k)).or_default() += c;
        let t = c * BigInt::from(n + i);
        *out.entry((i + 1, k)).or_default() += &t;
        *out.entry((i, k + 1)).or_default() += &t;
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

#[test]
fn ramanujan_recursion_and_values() {
    for n in 1..8u32 {
        assert_eq!(psi(n as usize + 1).0, next_psi(&psi(n as usize), n), "n={n}");
    }
    let totals: Vec<BigInt> = (1..=5).map(|n| psi(n).eval(1, 1)).collect();
    assert_eq!(totals, [1, 3, 17, 147, 1729].map(BigInt::from));
    assert_eq!(psi(2).to_string(), "1 + x + y");
}

#[test]
fn poisson_dims_follow_the_pure_y_part() {
    let mut ws = ram::workspace(Which::Poisson, Limits::default());
    let totals: Vec<usize> = (1..=5).map(|n| ws.dims(n).unwrap().total()).collect();
    assert_eq!(totals, [1, 2, 6, 24, 120]);
    for n in 1..=5 {
        assert_eq!(ws.dims(n).unwrap(), predicted_dims(n).filter(|d| d.h == 0), "n={n}");
    }
}

#[test]
fn bessel_dims_follow_the_diagonal() {
    let mut ws = ram::workspace(Which::Bessel, Limits::default());
    for n in 1..=4 {
        assert_eq!(ws.dims(n).unwrap(), predicted_dims(n).filter(|d| d.h == d.w), "n={n}");
    }
}

#[test]
fn listed_form_relations_hold_at_seeded_points() {
    for n in 2..=5 {
        let report = forms_checks(n, 20, DEFAULT_SEED).unwrap();
        assert!(report.passed(), "{report:?}");
    }
    let a = relation_survey(4, 5, 1).unwrap();
    let b = relation_survey(4, 5, 1).unwrap();
    assert_eq!(a, b);
}
