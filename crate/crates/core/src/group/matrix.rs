use std::fmt;

use crate::cyclotomic::CycNumber;

use super::GroupError;

/// Small square integer matrix, used for elements of the ambient arithmetic group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSquare {
    n: usize,
    e: Vec<i64>,
}

impl IntSquare {
    pub fn new(rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::Malformed(format!(
                "matrix rows {rows:?} do not form a nonempty square"
            )));
        }
        Ok(IntSquare {
            n,
            e: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        IntSquare { n, e }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.n + j]
    }

    pub fn mul(&self, rhs: &IntSquare) -> IntSquare {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.e[i * n + k];
                if a != 0 {
                    for j in 0..n {
                        e[i * n + j] += a * rhs.e[k * n + j];
                    }
                }
            }
        }
        IntSquare { n, e }
    }

    pub fn transpose(&self) -> IntSquare {
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.e[i * n + j];
            }
        }
        IntSquare { n, e }
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> IntSquare {
        let n = self.n - 1;
        let mut e = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != skip_r) {
            for j in (0..self.n).filter(|&j| j != skip_c) {
                e.push(self.get(i, j));
            }
        }
        IntSquare { n, e }
    }

    /// Cofactor expansion; intended for the small sizes used here.
    pub fn det(&self) -> i64 {
        match self.n {
            1 => self.e[0],
            2 => self.e[0] * self.e[3] - self.e[1] * self.e[2],
            _ => (0..self.n)
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * self.get(0, j) * self.minor(0, j).det()
                })
                .sum(),
        }
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse(&self) -> Result<IntSquare, GroupError> {
        let d = self.det();
        if d != 1 && d != -1 {
            return Err(GroupError::NotInvertible(format!("{self} has determinant {d}")));
        }
        if self.n == 1 {
            return Ok(IntSquare { n: 1, e: vec![d] });
        }
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                e[j * n + i] = s * self.minor(i, j).det() * d;
            }
        }
        Ok(IntSquare { n, e })
    }
}

impl fmt::Display for IntSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .e
            .chunks(self.n)
            .map(|r| format!("{r:?}"))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Small square matrix over a cyclotomic field, used to realize covering groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycSquare {
    n: usize,
    e: Vec<CycNumber>,
}

impl CycSquare {
    pub fn new(rows: Vec<Vec<CycNumber>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::Malformed(
                "cyclotomic matrix rows do not form a nonempty square".into(),
            ));
        }
        Ok(CycSquare {
            n,
            e: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let e = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    CycNumber::one()
                } else {
                    CycNumber::zero()
                }
            })
            .collect();
        CycSquare { n, e }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.e[i * self.n + j]
    }

    /// Least common multiple of the entry orders.
    pub fn conductor(&self) -> u32 {
        use num_integer::Integer;
        self.e.iter().fold(1, |acc, x| acc.lcm(&x.order()))
    }

    /// All entries re-expressed at order `m`, so that keys of products compare.
    pub fn lifted(&self, m: u32) -> Result<CycSquare, GroupError> {
        let e = self
            .e
            .iter()
            .map(|x| x.lift(m).map_err(|err| GroupError::Malformed(err.to_string())))
            .collect::<Result<_, _>>()?;
        Ok(CycSquare { n: self.n, e })
    }

    pub fn mul(&self, rhs: &CycSquare) -> CycSquare {
        assert_eq!(self.n, rhs.n, "matrix sizes differ");
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = &self.e[i * n] * &rhs.e[j];
                for k in 1..n {
                    acc = &acc + &(&self.e[i * n + k] * &rhs.e[k * n + j]);
                }
                e.push(acc);
            }
        }
        CycSquare { n, e }
    }

    /// Scalar value if this matrix is a multiple of the identity.
    pub fn scalar(&self) -> Option<&CycNumber> {
        let n = self.n;
        let d = &self.e[0];
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let x = &self.e[i * n + j];
                if i == j {
                    x == d
                } else {
                    x.is_zero()
                }
            })
        });
        ok.then_some(d)
    }

    pub fn key(&self) -> Vec<(u32, Vec<num_rational::BigRational>)> {
        self.e.iter().map(CycNumber::key).collect()
    }
}
