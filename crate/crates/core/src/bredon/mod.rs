//! Bredon cochain and chain complexes of a proper cocompact G-CW complex with
//! coefficients in (twisted) representation rings, their (co)homology, and the
//! universal coefficient, spectral sequence and duality reports built on top.

mod reports;

pub use reports::{ahss_report, duality_report, uct_check, AhssReport, DualityReport, UctDegree, UctReport};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::character::{restriction_matrix, BoundTable, CharError, CoefficientBasis, TwistData};
use crate::group::{Embedding, FiniteGroup, GroupError, IntSquare};
use crate::linalg::{homology_at, snf, FinAbGroup, IntMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BredonError {
    #[error("composite of differentials {degree} and {next} is nonzero in the block from cell {lower} to cell {upper}")]
    SquareNonzero {
        degree: usize,
        next: usize,
        lower: String,
        upper: String,
    },
    #[error("incidence {id}: {source}")]
    Incidence {
        id: String,
        #[source]
        source: CharError,
    },
    #[error("incidence {id}: {source}")]
    IncidenceGroup {
        id: String,
        #[source]
        source: GroupError,
    },
    #[error("unknown incidence {0}")]
    UnknownIncidence(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Untwisted,
    CoverRing,
    Isotypic,
}

impl Mode {
    pub fn is_twisted(self) -> bool {
        self != Mode::Untwisted
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Untwisted => "untwisted",
            Mode::CoverRing => "cover_ring",
            Mode::Isotypic => "isotypic",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "untwisted" => Ok(Mode::Untwisted),
            "cover_ring" => Ok(Mode::CoverRing),
            "isotypic" => Ok(Mode::Isotypic),
            other => Err(format!(
                "unknown mode {other:?} (expected untwisted, cover_ring or isotypic)"
            )),
        }
    }
}

/// Cochain complexes raise degree, chain complexes lower it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Cochain,
    Chain,
}

/// One orbit of cells with its stabilizer and coefficient data.
#[derive(Clone, Debug)]
pub struct Cell {
    pub name: String,
    pub dim: usize,
    pub stabilizer: Arc<FiniteGroup>,
    pub table: Arc<BoundTable>,
    pub twist: Option<Arc<TwistData>>,
}

/// A face `F = γ⁻¹·face` of the representative of `cell`, with
/// `γ Stab(cell) γ⁻¹ ⊆ Stab(face)` and incidence number `sign`.
#[derive(Clone, Debug)]
pub struct Incidence {
    pub id: String,
    pub cell: usize,
    pub face: usize,
    pub sign: i64,
    pub conjugator: IntSquare,
}

#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    pub cells: Vec<Cell>,
    pub incidences: Vec<Incidence>,
}

impl EquivariantComplex {
    pub fn dimension(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim == d).collect()
    }

    pub fn incidence(&self, id: &str) -> Option<&Incidence> {
        self.incidences.iter().find(|i| i.id == id)
    }

    /// Embedding of coefficient groups along an incidence for the given mode.
    pub fn incidence_embedding(&self, inc: &Incidence, mode: Mode) -> Result<Embedding, BredonError> {
        let wrap = |source: GroupError| BredonError::IncidenceGroup {
            id: inc.id.clone(),
            source,
        };
        let cell = &self.cells[inc.cell];
        let face = &self.cells[inc.face];
        let base = Embedding::by_conjugation(
            &inc.id,
            cell.stabilizer.clone(),
            face.stabilizer.clone(),
            &inc.conjugator,
        )
        .map_err(wrap)?;
        let twist = |c: &Cell| if mode.is_twisted() { c.twist.clone() } else { None };
        match (twist(cell), twist(face)) {
            (None, None) => Ok(base),
            (Some(s), Some(t)) => {
                Embedding::lift_homomorphism(&inc.id, &s.extension, &t.extension, &base).map_err(wrap)
            }
            (None, Some(t)) => {
                Embedding::section_lift(&inc.id, cell.stabilizer.clone(), &t.extension, &base).map_err(wrap)
            }
            (Some(s), None) => Ok(Embedding::inflation(&inc.id, &s.extension, &base)),
        }
    }
}

/// Basis of the coefficient group at each cell for one mode.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    pub mode: Mode,
    pub bases: Vec<CoefficientBasis>,
}

impl CoefficientSystem {
    pub fn new(complex: &EquivariantComplex, mode: Mode) -> Self {
        let bases = complex
            .cells
            .iter()
            .map(|c| match (&c.twist, mode) {
                (Some(t), Mode::CoverRing) => CoefficientBasis::full(t.cover_table.clone()),
                (Some(t), Mode::Isotypic) => CoefficientBasis {
                    table: t.cover_table.clone(),
                    rows: t.twisted_rows().to_vec(),
                },
                _ => CoefficientBasis::full(c.table.clone()),
            })
            .collect();
        CoefficientSystem { mode, bases }
    }
}

/// Restriction matrix for one incidence: rows are the face's basis characters,
/// columns the cell's.
pub fn incidence_matrix(
    complex: &EquivariantComplex,
    coeffs: &CoefficientSystem,
    inc: &Incidence,
) -> Result<IntMatrix, BredonError> {
    let emb = complex.incidence_embedding(inc, coeffs.mode)?;
    restriction_matrix(&coeffs.bases[inc.face], &coeffs.bases[inc.cell], &emb).map_err(|source| {
        BredonError::Incidence {
            id: inc.id.clone(),
            source,
        }
    })
}

/// Placement of one cell's block inside the degree's coefficient group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub cell: String,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct BredonComplex {
    pub variance: Variance,
    pub mode: Mode,
    /// Cell blocks of each degree.
    pub layout: Vec<Vec<Block>>,
    /// `differentials[d - 1]` connects degrees `d - 1` and `d`: the coboundary
    /// `C^{d-1} → C^d` for cochains, the boundary `C_d → C_{d-1}` for chains.
    pub differentials: Vec<IntMatrix>,
}

impl BredonComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.layout
            .iter()
            .map(|blocks| blocks.iter().map(|b| b.len).sum())
            .collect()
    }

    pub fn transpose(&self) -> BredonComplex {
        BredonComplex {
            variance: match self.variance {
                Variance::Cochain => Variance::Chain,
                Variance::Chain => Variance::Cochain,
            },
            mode: self.mode,
            layout: self.layout.clone(),
            differentials: self.differentials.iter().map(IntMatrix::transpose).collect(),
        }
    }

    fn block_at(&self, degree: usize, index: usize) -> &str {
        self.layout[degree]
            .iter()
            .find(|b| index >= b.offset && index < b.offset + b.len)
            .map(|b| b.cell.as_str())
            .unwrap_or("?")
    }

    /// Checks that consecutive differentials compose to zero, naming the
    /// first offending pair of cells.
    pub fn check_square_zero(&self) -> Result<(), BredonError> {
        for d in 1..self.differentials.len() {
            let (lo, hi) = (&self.differentials[d - 1], &self.differentials[d]);
            // Cochain: hi * lo maps C^{d-1} → C^{d+1}; chain: lo * hi maps C_{d+1} → C_{d-1}.
            let (comp, upper_is_rows) = match self.variance {
                Variance::Cochain => (hi * lo, true),
                Variance::Chain => (lo * hi, false),
            };
            for i in 0..comp.rows() {
                for j in 0..comp.cols() {
                    if !num_traits::Zero::is_zero(comp.get(i, j)) {
                        let (u, l) = if upper_is_rows { (i, j) } else { (j, i) };
                        return Err(BredonError::SquareNonzero {
                            degree: d,
                            next: d + 1,
                            lower: self.block_at(d - 1, l).to_string(),
                            upper: self.block_at(d + 1, u).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cochain complex `⊕ R(Stab σ)` over cells of each dimension; the block for
/// an incidence is `sign` times the transpose of its restriction matrix.
pub fn assemble_cochain(
    complex: &EquivariantComplex,
    coeffs: &CoefficientSystem,
) -> Result<BredonComplex, BredonError> {
    let top = complex.dimension();
    let layout: Vec<Vec<Block>> = (0..=top)
        .map(|d| {
            let mut offset = 0;
            complex
                .cells_of_dim(d)
                .into_iter()
                .map(|c| {
                    let len = coeffs.bases[c].len();
                    let b = Block {
                        cell: complex.cells[c].name.clone(),
                        offset,
                        len,
                    };
                    offset += len;
                    b
                })
                .collect()
        })
        .collect();
    let offset_of = |cell: usize| -> usize {
        let name = &complex.cells[cell].name;
        layout[complex.cells[cell].dim]
            .iter()
            .find(|b| &b.cell == name)
            .map(|b| b.offset)
            .expect("every cell has a block")
    };
    let ranks: Vec<usize> = layout
        .iter()
        .map(|bs| bs.iter().map(|b| b.len).sum())
        .collect();
    let mut differentials: Vec<IntMatrix> = (1..=top)
        .map(|d| IntMatrix::zeros(ranks[d], ranks[d - 1]))
        .collect();
    let blocks: Vec<(usize, IntMatrix)> = complex
        .incidences
        .par_iter()
        .enumerate()
        .map(|(k, inc)| incidence_matrix(complex, coeffs, inc).map(|m| (k, m)))
        .collect::<Result<_, _>>()?;
    for (k, m) in blocks {
        let inc = &complex.incidences[k];
        let d = complex.cells[inc.cell].dim;
        debug!("block {} ({}x{}) sign {}", inc.id, m.rows(), m.cols(), inc.sign);
        differentials[d - 1].add_block(offset_of(inc.cell), offset_of(inc.face), &m.transpose(), inc.sign);
    }
    let complex = BredonComplex {
        variance: Variance::Cochain,
        mode: coeffs.mode,
        layout,
        differentials,
    };
    complex.check_square_zero()?;
    Ok(complex)
}

/// Chain complex: the transposes of the cochain differentials.
pub fn assemble_chain(
    complex: &EquivariantComplex,
    coeffs: &CoefficientSystem,
) -> Result<BredonComplex, BredonError> {
    Ok(assemble_cochain(complex, coeffs)?.transpose())
}

/// Rank and elementary divisors of one differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSummary {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub divisors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub variance: Variance,
    pub mode: Mode,
    pub fingerprint: String,
    pub chain_ranks: Vec<usize>,
    pub groups: Vec<FinAbGroup>,
    pub differentials: Vec<DifferentialSummary>,
}

/// Homology of the complex in every degree, computed with [`homology_at`].
pub fn bredon_cohomology(b: &BredonComplex, fingerprint: &str) -> Result<CohomologyResult, BredonError> {
    let ranks = b.ranks();
    let top = ranks.len() - 1;
    let d = &b.differentials;
    let groups = (0..=top)
        .into_par_iter()
        .map(|p| {
            let (incoming, outgoing) = match b.variance {
                Variance::Cochain => (
                    if p >= 1 { d[p - 1].clone() } else { IntMatrix::zeros(ranks[0], 0) },
                    if p < top { d[p].clone() } else { IntMatrix::zeros(0, ranks[top]) },
                ),
                Variance::Chain => (
                    if p < top { d[p].clone() } else { IntMatrix::zeros(ranks[top], 0) },
                    if p >= 1 { d[p - 1].clone() } else { IntMatrix::zeros(0, ranks[0]) },
                ),
            };
            homology_at(&incoming, &outgoing)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let symbol = match b.variance {
        Variance::Cochain => "Phi",
        Variance::Chain => "d",
    };
    let differentials = d
        .par_iter()
        .enumerate()
        .map(|(k, m)| {
            let s = snf(m);
            DifferentialSummary {
                name: format!("{symbol}{}", k + 1),
                rows: m.rows(),
                cols: m.cols(),
                rank: s.rank(),
                divisors: s.divisors.iter().map(ToString::to_string).collect(),
            }
        })
        .collect();
    Ok(CohomologyResult {
        variance: b.variance,
        mode: b.mode,
        fingerprint: fingerprint.to_string(),
        chain_ranks: ranks,
        groups,
        differentials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::BoundTable;

    fn point_complex() -> EquivariantComplex {
        let trivial = Arc::new(
            FiniteGroup::from_matrices("1", vec![("e".into(), IntSquare::identity(1))]).unwrap(),
        );
        let table = Arc::new(BoundTable::trivial("R(1)", trivial.clone()).unwrap());
        EquivariantComplex {
            cells: vec![Cell {
                name: "pt".into(),
                dim: 0,
                stabilizer: trivial,
                table,
                twist: None,
            }],
            incidences: Vec::new(),
        }
    }

    #[test]
    fn single_point() {
        let x = point_complex();
        let c = CoefficientSystem::new(&x, Mode::Untwisted);
        let b = assemble_cochain(&x, &c).unwrap();
        assert_eq!(b.ranks(), vec![1]);
        assert!(b.differentials.is_empty());
        let h = bredon_cohomology(&b, "").unwrap();
        assert_eq!(h.groups, vec![FinAbGroup::free(1)]);
    }

    #[test]
    fn circle_with_trivial_stabilizers() {
        // Z acting on R by translation: one vertex orbit, one edge orbit whose
        // two endpoints are the vertex and its translate.
        let mut x = point_complex();
        let mut edge = x.cells[0].clone();
        edge.name = "e".into();
        edge.dim = 1;
        x.cells.push(edge);
        for (k, sign) in [(0, -1), (1, 1)] {
            x.incidences.push(Incidence {
                id: format!("e->pt#{k}"),
                cell: 1,
                face: 0,
                sign,
                conjugator: IntSquare::identity(1),
            });
        }
        let c = CoefficientSystem::new(&x, Mode::Untwisted);
        let b = assemble_cochain(&x, &c).unwrap();
        let h = bredon_cohomology(&b, "").unwrap();
        assert_eq!(h.groups, vec![FinAbGroup::free(1), FinAbGroup::free(1)]);
        let hom = bredon_cohomology(&b.transpose(), "").unwrap();
        assert_eq!(hom.groups, h.groups);
    }

    #[test]
    fn mode_parsing() {
        for m in [Mode::Untwisted, Mode::CoverRing, Mode::Isotypic] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("twisted".parse::<Mode>().is_err());
    }
}
