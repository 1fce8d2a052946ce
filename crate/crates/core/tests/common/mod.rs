//! Reference implementations used as oracles by the integration tests. They
//! share no code with the library's elimination routines: ranks come from
//! Gaussian elimination over the rationals, invariant factors from gcds of
//! minors, determinants from the Leibniz formula.

#![allow(dead_code)]

use std::path::PathBuf;

use bredon::linalg::{FinAbGroup, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub const SEED: u64 = 0x5eed_b4ed;
pub const CASES: u32 = 500;

pub fn proptest_config() -> Config {
    Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = to_rows(m)
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..rows {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                let pivot = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pivot).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn leibniz_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = BigInt::one();
        for (i, &p) in perm.iter().enumerate() {
            term *= &a[i][p];
        }
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors `d_k / d_{k-1}`, with `d_k` the gcd of all `k x k` minors.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let a = to_rows(m);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&leibniz_det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Homology of `Z^n --incoming--> Z^m --outgoing--> Z^k`: free rank from
/// rational ranks, torsion from the invariant factors of `incoming` (the
/// quotient `Z^m / ker(outgoing)` is torsion-free).
pub fn oracle_homology(incoming: &IntMatrix, outgoing: &IntMatrix) -> (usize, Vec<BigInt>) {
    let free = incoming.rows() - rational_rank(incoming) - rational_rank(outgoing);
    let torsion = invariant_factors(incoming)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    (free, torsion)
}

pub fn parts(g: &FinAbGroup) -> (usize, Vec<BigInt>) {
    (g.free_rank(), g.torsion().to_vec())
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.checked_mul(b).expect("compatible shapes")
}

/// A unimodular matrix and its inverse, built from elementary row operations.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> (IntMatrix, IntMatrix) {
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);
    if n == 1 && ops.first().is_some_and(|o| o.2 < 0) {
        p.set(0, 0, BigInt::from(-1));
        q.set(0, 0, BigInt::from(-1));
    }
    if n < 2 {
        return (p, q);
    }
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(c));
        let mut einv = IntMatrix::identity(n);
        einv.set(i, j, BigInt::from(-c));
        p = mul(&e, &p);
        q = mul(&q, &einv);
    }
    (p, q)
}

/// Building block of a random chain complex.
#[derive(Clone, Debug)]
pub enum Piece {
    /// `Z` in one degree.
    Free(usize),
    /// `Z --d--> Z` from degree `p + 1` to degree `p`.
    Arrow(usize, i64),
}

/// Random finite free chain complex: differentials `d[p-1] : C_p -> C_{p-1}`
/// as `rank C_{p-1} x rank C_p` matrices, together with the pieces it was
/// built from.
#[derive(Clone, Debug)]
pub struct RandomComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
    pub pieces: Vec<Piece>,
}

impl RandomComplex {
    pub fn new(top: usize, pieces: Vec<Piece>, ops: &[Vec<(usize, usize, i64)>]) -> Self {
        let mut ranks = vec![0usize; top + 1];
        let mut slots = Vec::new();
        for piece in &pieces {
            match *piece {
                Piece::Free(p) => {
                    slots.push((ranks[p], 0));
                    ranks[p] += 1;
                }
                Piece::Arrow(p, _) => {
                    slots.push((ranks[p + 1], ranks[p]));
                    ranks[p + 1] += 1;
                    ranks[p] += 1;
                }
            }
        }
        let mut raw: Vec<IntMatrix> = (1..=top).map(|p| IntMatrix::zeros(ranks[p - 1], ranks[p])).collect();
        for (piece, &(hi, lo)) in pieces.iter().zip(&slots) {
            if let Piece::Arrow(p, d) = *piece {
                raw[p].set(lo, hi, BigInt::from(d));
            }
        }
        let changes: Vec<(IntMatrix, IntMatrix)> = (0..=top)
            .map(|p| unimodular(ranks[p], ops.get(p).map(Vec::as_slice).unwrap_or(&[])))
            .collect();
        let boundaries = (1..=top)
            .map(|p| mul(&mul(&changes[p - 1].0, &raw[p - 1]), &changes[p].1))
            .collect();
        RandomComplex {
            ranks,
            boundaries,
            pieces,
        }
    }

    /// `(incoming, outgoing)` at degree `p` of the chain complex.
    pub fn chain_pair(&self, p: usize) -> (IntMatrix, IntMatrix) {
        let top = self.ranks.len() - 1;
        let incoming = if p < top {
            self.boundaries[p].clone()
        } else {
            IntMatrix::zeros(self.ranks[top], 0)
        };
        let outgoing = if p >= 1 {
            self.boundaries[p - 1].clone()
        } else {
            IntMatrix::zeros(0, self.ranks[0])
        };
        (incoming, outgoing)
    }

    /// `(incoming, outgoing)` at degree `p` of the dual cochain complex.
    pub fn cochain_pair(&self, p: usize) -> (IntMatrix, IntMatrix) {
        let top = self.ranks.len() - 1;
        let incoming = if p >= 1 {
            self.boundaries[p - 1].transpose()
        } else {
            IntMatrix::zeros(self.ranks[0], 0)
        };
        let outgoing = if p < top {
            self.boundaries[p].transpose()
        } else {
            IntMatrix::zeros(0, self.ranks[top])
        };
        (incoming, outgoing)
    }

    /// Homology read off the pieces, as free rank and nontrivial cyclic orders.
    pub fn expected_homology(&self, p: usize) -> (usize, Vec<BigInt>) {
        let free = self.pieces.iter().filter(|x| matches!(x, Piece::Free(q) if *q == p)).count();
        let cyclic: Vec<i64> = self
            .pieces
            .iter()
            .filter_map(|x| match *x {
                Piece::Arrow(q, d) if q == p && d.abs() > 1 => Some(d.abs()),
                _ => None,
            })
            .collect();
        let n = cyclic.len();
        let diag = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::from(cyclic[i])
            } else {
                BigInt::zero()
            }
        });
        let torsion = invariant_factors(&diag).into_iter().filter(|d| !d.is_one()).collect();
        (free, torsion)
    }
}

pub const TOP: usize = 3;

pub fn piece_strategy() -> impl Strategy<Value = Piece> {
    prop_oneof![
        (0..=TOP).prop_map(Piece::Free),
        (0..TOP, prop_oneof![Just(1i64), Just(-1), 2i64..=6, -6i64..=-2]).prop_map(|(p, d)| Piece::Arrow(p, d)),
    ]
}

pub fn complex_strategy() -> impl Strategy<Value = RandomComplex> {
    (
        proptest::collection::vec(piece_strategy(), 0..=6),
        proptest::collection::vec(proptest::collection::vec((0usize..8, 0usize..8, -2i64..=2), 0..8), TOP + 1),
    )
        .prop_map(|(pieces, ops)| RandomComplex::new(TOP, pieces, &ops))
}

pub fn matrix_strategy(max_dim: usize, max_entry: i64) -> impl Strategy<Value = IntMatrix> {
    (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(
            prop_oneof![3 => Just(0i64), 2 => -max_entry..=max_entry],
            r * c,
        )
        .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

pub fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}
