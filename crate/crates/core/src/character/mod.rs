//! Character tables, class functions, restriction, induction and twisted
//! (projective) characters read off covering groups.

mod twist;

pub use twist::TwistData;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclotomic::CycNumber;
use crate::group::{Embedding, EmbeddingKind, FiniteGroup, GroupError};
use crate::linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("table {table}: {reason}")]
    InvalidTable { table: String, reason: String },
    #[error("class function belongs to {found}, expected {expected}")]
    TableMismatch { expected: String, found: String },
    #[error("decomposition into {table}: multiplicity of {label} is {value}, not a non-negative integer")]
    NonIntegral {
        table: String,
        label: String,
        value: String,
    },
    #[error("decomposition into {table}: class function is not in the span of the chosen basis")]
    NotInSpan { table: String },
    #[error("twist {name}: {reason}")]
    InvalidTwist { name: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Abstract character table: values of the irreducible characters on labelled classes.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub name: String,
    pub class_labels: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<CycNumber>>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_algebraic_integer(x: &CycNumber) -> bool {
    // The power basis of Z[ζ_N] is an integral basis.
    x.coeffs().iter().all(BigRational::is_integer)
}

impl CharacterTable {
    /// One-class table of the trivial group.
    pub fn trivial() -> Self {
        CharacterTable {
            name: "trivial".into(),
            class_labels: vec!["1".into()],
            class_sizes: vec![1],
            labels: vec!["1".into()],
            rows: vec![vec![CycNumber::one()]],
        }
    }

    pub fn group_order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    fn invalid(&self, reason: impl Into<String>) -> CharError {
        CharError::InvalidTable {
            table: self.name.clone(),
            reason: reason.into(),
        }
    }

    /// Exact checks: shape, degree sum, row and column orthogonality, and
    /// integrality of values and central characters.
    pub fn verify(&self) -> Result<(), CharError> {
        let k = self.class_labels.len();
        if self.class_sizes.len() != k || self.rows.len() != k || self.labels.len() != k {
            return Err(self.invalid(format!(
                "{} classes, {} sizes, {} rows, {} labels",
                k,
                self.class_sizes.len(),
                self.rows.len(),
                self.labels.len()
            )));
        }
        if let Some((i, _)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(self.invalid(format!("row {} has the wrong length", self.labels[i])));
        }
        if self.class_sizes.first() != Some(&1) {
            return Err(self.invalid("first class must be the identity class of size 1"));
        }
        let order = self.group_order();
        let mut degree_sum = BigInt::zero();
        for (label, row) in self.labels.iter().zip(&self.rows) {
            let d = row[0]
                .as_integer()
                .filter(|d| d.is_positive())
                .ok_or_else(|| self.invalid(format!("{label} has non-positive degree {}", row[0])))?;
            degree_sum += &d * &d;
            for (c, v) in row.iter().enumerate() {
                if !is_algebraic_integer(v) {
                    return Err(self.invalid(format!(
                        "{label} at {} is not an algebraic integer: {v}",
                        self.class_labels[c]
                    )));
                }
                let central = v.scale(&BigRational::new(
                    BigInt::from(self.class_sizes[c]),
                    d.clone(),
                ));
                if !is_algebraic_integer(&central) {
                    return Err(self.invalid(format!(
                        "central character of {label} at {} is not integral",
                        self.class_labels[c]
                    )));
                }
            }
        }
        if degree_sum != BigInt::from(order) {
            return Err(self.invalid(format!(
                "squared degrees sum to {degree_sum}, group order is {order}"
            )));
        }
        for i in 0..k {
            for j in i..k {
                let ip = self.inner_product_values(&self.rows[i], &self.rows[j]);
                let expected = if i == j { CycNumber::one() } else { CycNumber::zero() };
                if ip != expected {
                    return Err(self.invalid(format!(
                        "rows {} and {} have inner product {ip}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for a in 0..k {
            for b in a..k {
                let s: CycNumber = self
                    .rows
                    .iter()
                    .map(|r| &r[a] * &r[b].conj())
                    .sum();
                let expected = if a == b {
                    CycNumber::rational(q(order as i64, self.class_sizes[a] as i64))
                } else {
                    CycNumber::zero()
                };
                if s != expected {
                    return Err(self.invalid(format!(
                        "columns {} and {} are not orthogonal",
                        self.class_labels[a], self.class_labels[b]
                    )));
                }
            }
        }
        Ok(())
    }

    fn inner_product_values(&self, f: &[CycNumber], g: &[CycNumber]) -> CycNumber {
        let order = self.group_order() as i64;
        f.iter()
            .zip(g)
            .zip(&self.class_sizes)
            .map(|((a, b), &s)| (a * &b.conj()).scale(&q(s as i64, order)))
            .sum()
    }
}

/// A character table attached to a concrete group: each column is the class
/// of the element named by a word.
#[derive(Clone, Debug)]
pub struct BoundTable {
    pub name: String,
    pub table: Arc<CharacterTable>,
    pub group: Arc<FiniteGroup>,
    column_of_class: Vec<usize>,
    class_of_column: Vec<usize>,
}

impl BoundTable {
    pub fn bind(
        name: &str,
        table: Arc<CharacterTable>,
        group: Arc<FiniteGroup>,
        class_words: &[String],
    ) -> Result<Self, CharError> {
        let invalid = |reason: String| CharError::InvalidTable {
            table: name.to_string(),
            reason,
        };
        if class_words.len() != table.class_labels.len() {
            return Err(invalid(format!(
                "{} class words for {} columns",
                class_words.len(),
                table.class_labels.len()
            )));
        }
        if table.group_order() != group.order() {
            return Err(invalid(format!(
                "table is for a group of order {}, {} has order {}",
                table.group_order(),
                group.name(),
                group.order()
            )));
        }
        let mut column_of_class = vec![usize::MAX; group.classes().len()];
        let mut class_of_column = Vec::with_capacity(class_words.len());
        for (col, w) in class_words.iter().enumerate() {
            let g = group.evaluate_str(w)?;
            let c = group.class_of(g);
            if column_of_class[c] != usize::MAX {
                return Err(invalid(format!(
                    "words {:?} and {w:?} name the same class",
                    class_words[column_of_class[c]]
                )));
            }
            let size = group.classes()[c].size();
            if size != table.class_sizes[col] {
                return Err(invalid(format!(
                    "class of {w:?} has {size} elements, column {} expects {}",
                    table.class_labels[col], table.class_sizes[col]
                )));
            }
            column_of_class[c] = col;
            class_of_column.push(c);
        }
        if column_of_class.contains(&usize::MAX) {
            return Err(invalid("class words miss some conjugacy class".into()));
        }
        Ok(BoundTable {
            name: name.to_string(),
            table,
            group,
            column_of_class,
            class_of_column,
        })
    }

    /// Implicit table of a trivial group.
    pub fn trivial(name: &str, group: Arc<FiniteGroup>) -> Result<Self, CharError> {
        Self::bind(name, Arc::new(CharacterTable::trivial()), group, &["1".to_string()])
    }

    pub fn column_of_class(&self, class: usize) -> usize {
        self.column_of_class[class]
    }

    pub fn class_of_column(&self, col: usize) -> usize {
        self.class_of_column[col]
    }

    pub fn len(&self) -> usize {
        self.table.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.rows.is_empty()
    }

    pub fn character(&self, row: usize) -> ClassFunction {
        ClassFunction {
            domain: self.name.clone(),
            values: self.table.rows[row].clone(),
        }
    }

    /// Value of row `row` at group element `g`.
    pub fn value_at(&self, row: usize, g: usize) -> &CycNumber {
        &self.table.rows[row][self.column_of_class[self.group.class_of(g)]]
    }
}

/// Values of a class function, one per column of the bound table named by `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub domain: String,
    pub values: Vec<CycNumber>,
}

fn check_domain(f: &ClassFunction, t: &BoundTable) -> Result<(), CharError> {
    if f.domain != t.name || f.values.len() != t.table.class_labels.len() {
        return Err(CharError::TableMismatch {
            expected: t.name.clone(),
            found: f.domain.clone(),
        });
    }
    Ok(())
}

/// `(1/|G|) Σ_g f(g) conj(g(g))`.
pub fn inner_product(
    f: &ClassFunction,
    g: &ClassFunction,
    table: &BoundTable,
) -> Result<CycNumber, CharError> {
    check_domain(f, table)?;
    check_domain(g, table)?;
    Ok(table.table.inner_product_values(&f.values, &g.values))
}

/// Pulls `f` on the big group back to the small group through a class fusion map.
pub fn restrict(
    f: &ClassFunction,
    big: &BoundTable,
    small: &BoundTable,
    fusion: &[usize],
) -> Result<ClassFunction, CharError> {
    check_domain(f, big)?;
    let values = (0..small.table.class_labels.len())
        .map(|col| {
            let target_class = fusion[small.class_of_column(col)];
            f.values[big.column_of_class(target_class)].clone()
        })
        .collect();
    Ok(ClassFunction {
        domain: small.name.clone(),
        values,
    })
}

/// A chosen set of irreducible characters of a bound table: all of them for
/// ordinary coefficients, or only the twisted slice for isotypic ones.
#[derive(Clone, Debug)]
pub struct CoefficientBasis {
    pub table: Arc<BoundTable>,
    pub rows: Vec<usize>,
}

impl CoefficientBasis {
    pub fn full(table: Arc<BoundTable>) -> Self {
        let rows = (0..table.len()).collect();
        CoefficientBasis { table, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| self.table.table.labels[r].clone())
            .collect()
    }
}

fn to_multiplicity(v: &CycNumber, table: &str, label: &str) -> Result<i64, CharError> {
    v.as_integer()
        .filter(|m| !m.is_negative())
        .and_then(|m| m.to_i64())
        .ok_or_else(|| CharError::NonIntegral {
            table: table.to_string(),
            label: label.to_string(),
            value: v.to_string(),
        })
}

/// Multiplicities of the basis characters in `f`. Fails unless `f` is a
/// non-negative integer combination of the basis.
pub fn decompose(f: &ClassFunction, basis: &CoefficientBasis) -> Result<Vec<i64>, CharError> {
    let t = &basis.table;
    check_domain(f, t)?;
    let mut mults = Vec::with_capacity(basis.len());
    let mut rebuilt = vec![CycNumber::zero(); f.values.len()];
    for &r in &basis.rows {
        let psi = &t.table.rows[r];
        let m = to_multiplicity(
            &t.table.inner_product_values(&f.values, psi),
            &t.name,
            &t.table.labels[r],
        )?;
        if m != 0 {
            let mq = q(m, 1);
            for (acc, v) in rebuilt.iter_mut().zip(psi) {
                *acc = &*acc + &v.scale(&mq);
            }
        }
        mults.push(m);
    }
    if rebuilt != f.values {
        return Err(CharError::NotInSpan {
            table: t.name.clone(),
        });
    }
    Ok(mults)
}

fn check_embedding(emb: &Embedding, big: &BoundTable, small: &BoundTable) -> Result<(), CharError> {
    let same = |a: &FiniteGroup, b: &FiniteGroup| a.name() == b.name() && a.order() == b.order();
    if !same(&emb.source, &small.group) || !same(&emb.target, &big.group) {
        return Err(CharError::TableMismatch {
            expected: format!("{} -> {}", small.group.name(), big.group.name()),
            found: format!("{} -> {}", emb.source.name(), emb.target.name()),
        });
    }
    Ok(())
}

/// Integer matrix with one row per basis character of the big group and one
/// column per basis character of the small group: entry `(i, j)` is the
/// multiplicity of the `j`-th small character in the restriction of the `i`-th.
pub fn restriction_matrix(
    big: &CoefficientBasis,
    small: &CoefficientBasis,
    emb: &Embedding,
) -> Result<IntMatrix, CharError> {
    check_embedding(emb, &big.table, &small.table)?;
    let fusion = emb.fusion_map()?;
    let mut out = IntMatrix::zeros(big.len(), small.len());
    for (i, &r) in big.rows.iter().enumerate() {
        let res = restrict(&big.table.character(r), &big.table, &small.table, &fusion)?;
        for (j, m) in decompose(&res, small)?.into_iter().enumerate() {
            out.set(i, j, BigInt::from(m));
        }
    }
    Ok(out)
}

/// Whether [`induction_matrix`] computes induced characters directly for this
/// embedding rather than through Frobenius reciprocity.
pub fn induction_is_direct(emb: &Embedding) -> bool {
    emb.kind == EmbeddingKind::Homomorphism
}

/// Induction from the small group, one row per small basis character and one
/// column per big basis character. For subgroup embeddings the induced
/// character is evaluated from its defining formula; for section lifts and
/// inflations it is read off the restriction matrix by reciprocity.
pub fn induction_matrix(
    big: &CoefficientBasis,
    small: &CoefficientBasis,
    emb: &Embedding,
) -> Result<IntMatrix, CharError> {
    if !induction_is_direct(emb) {
        return Ok(restriction_matrix(big, small, emb)?.transpose());
    }
    check_embedding(emb, &big.table, &small.table)?;
    let h = &big.table.group;
    let k_order = emb.source.order() as i64;
    let mut preimage = vec![None; h.order()];
    for (k, &img) in emb.map.iter().enumerate() {
        preimage[img] = Some(k);
    }
    let big_cols = big.table.table.class_labels.len();
    let mut out = IntMatrix::zeros(small.len(), big.len());
    for (i, &r) in small.rows.iter().enumerate() {
        let values: Vec<CycNumber> = (0..big_cols)
            .map(|col| {
                let rep = h.classes()[big.table.class_of_column(col)].representative;
                let sum: CycNumber = (0..h.order())
                    .filter_map(|x| preimage[h.conjugate(x, rep)])
                    .map(|k| small.table.value_at(r, k).clone())
                    .sum();
                sum.scale(&q(1, k_order))
            })
            .collect();
        let induced = ClassFunction {
            domain: big.table.name.clone(),
            values,
        };
        for (j, &c) in big.rows.iter().enumerate() {
            let ip = inner_product(&induced, &big.table.character(c), &big.table)?;
            let m = to_multiplicity(&ip, &big.table.name, &big.table.table.labels[c])?;
            out.set(i, j, BigInt::from(m));
        }
    }
    Ok(out)
}

/// Degrees of the basis characters.
pub fn degrees(basis: &CoefficientBasis) -> Vec<BigInt> {
    basis
        .rows
        .iter()
        .map(|&r| {
            basis.table.table.rows[r][0]
                .as_integer()
                .unwrap_or_else(BigInt::one)
        })
        .collect()
}
