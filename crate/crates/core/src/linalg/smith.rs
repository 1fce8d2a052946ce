use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `A = U * S * V` with `U`, `V` unimodular and `S` diagonal,
/// `divisors` the positive diagonal entries with each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

/// Working state: `a` is the current matrix, and `u`, `v` are kept so that
/// `u * a * v` always equals the input.
struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.a.cols() {
            let x = self.a.get(i, c).clone();
            let y = self.a.get(j, c).clone();
            self.a.set(i, c, y);
            self.a.set(j, c, x);
        }
        for r in 0..self.u.rows() {
            let x = self.u.get(r, i).clone();
            let y = self.u.get(r, j).clone();
            self.u.set(r, i, y);
            self.u.set(r, j, x);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.a.rows() {
            let x = self.a.get(r, i).clone();
            let y = self.a.get(r, j).clone();
            self.a.set(r, i, y);
            self.a.set(r, j, x);
        }
        for c in 0..self.v.cols() {
            let x = self.v.get(i, c).clone();
            let y = self.v.get(j, c).clone();
            self.v.set(i, c, y);
            self.v.set(j, c, x);
        }
    }

    /// row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.a.cols() {
            let d = self.a.get(j, c) * k;
            self.a.add_at(i, c, &d);
        }
        let neg = -k;
        for r in 0..self.u.rows() {
            let d = self.u.get(r, i) * &neg;
            self.u.add_at(r, j, &d);
        }
    }

    /// col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.a.rows() {
            let d = self.a.get(r, j) * k;
            self.a.add_at(r, i, &d);
        }
        let neg = -k;
        for c in 0..self.v.cols() {
            let d = self.v.get(i, c) * &neg;
            self.v.add_at(j, c, &d);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.a.cols() {
            let x = -self.a.get(i, c);
            self.a.set(i, c, x);
        }
        for r in 0..self.u.rows() {
            let x = -self.u.get(r, i);
            self.u.set(r, i, x);
        }
    }

    /// Position of the nonzero entry of least absolute value in the lower-right
    /// block starting at `t`, ties broken by row then column.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` outside the pivot, re-pivoting on remainders.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let p = self.a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..self.a.rows() {
                let x = self.a.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&p);
                self.add_row(i, t, &-q);
                dirty |= !self.a.get(i, t).is_zero();
            }
            for j in t + 1..self.a.cols() {
                let x = self.a.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&p);
                self.add_col(j, t, &-q);
                dirty |= !self.a.get(t, j).is_zero();
            }
            if !dirty {
                return;
            }
            let (i, j) = self.min_cross(t);
            self.swap_rows(t, i);
            self.swap_cols(t, j);
        }
    }

    /// Least nonzero entry of row `t` or column `t`.
    fn min_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        for i in t + 1..self.a.rows() {
            let x = self.a.get(i, t).abs();
            if !x.is_zero() && x < best.2 {
                best = (i, t, x);
            }
        }
        for j in t + 1..self.a.cols() {
            let x = self.a.get(t, j).abs();
            if !x.is_zero() && x < best.2 {
                best = (t, j, x);
            }
        }
        (best.0, best.1)
    }

    fn first_non_multiple(&self, t: usize) -> Option<usize> {
        let p = self.a.get(t, t);
        (t + 1..self.a.rows())
            .find(|&i| (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(p)))
    }
}

/// Computes the Smith normal form by repeated minimal-pivot elimination.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let mut r = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
    };
    let limit = a.rows().min(a.cols());
    let mut divisors = Vec::new();
    for t in 0..limit {
        let Some((i, j)) = r.min_pivot(t) else { break };
        r.swap_rows(t, i);
        r.swap_cols(t, j);
        loop {
            r.clear_cross(t);
            match r.first_non_multiple(t) {
                Some(i) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a.get(t, t).is_negative() {
            r.negate_row(t);
        }
        divisors.push(r.a.get(t, t).clone());
    }
    SmithDecomposition {
        u: r.u,
        s: r.a,
        v: r.v,
        divisors,
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    snf(a).rank()
}
