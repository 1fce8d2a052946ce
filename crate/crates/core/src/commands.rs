//! The operations behind the command-line front end, returning values rather
//! than printing so they can be driven from tests.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use log::info;
use serde::{Deserialize, Serialize};

use crate::bredon::{
    ahss_report, assemble_cochain, bredon_cohomology, duality_report, uct_check, AhssReport,
    CohomologyResult, DualityReport, Mode, UctReport,
};
use crate::character::{induction_matrix, restriction_matrix};
use crate::dataset::{Dataset, VerifyReport};
use crate::linalg::{snf, IntMatrix};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Cohomology,
    Homology,
    Both,
}

impl Direction {
    fn wants_cohomology(self) -> bool {
        self != Direction::Homology
    }

    fn wants_homology(self) -> bool {
        self != Direction::Cohomology
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cohomology" => Ok(Direction::Cohomology),
            "homology" => Ok(Direction::Homology),
            "both" => Ok(Direction::Both),
            other => Err(format!(
                "unknown direction {other:?} (expected cohomology, homology or both)"
            )),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Cohomology => "cohomology",
            Direction::Homology => "homology",
            Direction::Both => "both",
        })
    }
}

/// Everything `compute` reports. Wall time is kept out of the value so that
/// the machine-readable form is identical across runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub fingerprint: String,
    pub mode: Mode,
    pub direction: Direction,
    pub cohomology: Option<CohomologyResult>,
    pub homology: Option<CohomologyResult>,
    pub uct: UctReport,
    pub ahss: Option<AhssReport>,
    pub duality: Option<DualityReport>,
}

impl RunReport {
    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::parse("report", e))
    }

    pub fn to_text(&self, elapsed: Option<Duration>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset     {}", self.dataset);
        let _ = writeln!(out, "fingerprint {}", self.fingerprint);
        let _ = writeln!(out, "mode        {}", self.mode);
        for (res, sup, dname) in [
            (&self.cohomology, "^", "Bredon cohomology"),
            (&self.homology, "_", "Bredon homology"),
        ] {
            let Some(r) = res else { continue };
            let _ = writeln!(out, "\n{dname}");
            let ranks: Vec<String> = r.chain_ranks.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  chain ranks {}", ranks.join(" "));
            for (p, g) in r.groups.iter().enumerate() {
                let _ = writeln!(out, "  H{sup}{p} = {g}");
            }
            for d in &r.differentials {
                let _ = writeln!(
                    out,
                    "  {}: {}x{}, rank {}, divisors {}",
                    d.name,
                    d.rows,
                    d.cols,
                    d.rank,
                    compress(&d.divisors)
                );
            }
        }
        let _ = writeln!(out, "\nuniversal coefficients: {}", if self.uct.pass { "pass" } else { "FAIL" });
        for d in &self.uct.degrees {
            let _ = writeln!(
                out,
                "  degree {}: H^n = {}, Hom(H_n,Z) + Ext(H_n-1,Z) = {}{}",
                d.degree,
                d.cohomology,
                d.expected,
                if d.pass { "" } else { "  <- mismatch" }
            );
        }
        if let Some(a) = &self.ahss {
            let _ = writeln!(out, "spectral sequence: {}", a.verdict);
        }
        if let Some(d) = &self.duality {
            let _ = writeln!(out, "duality: {}", d.verdict);
        }
        if let Some(t) = elapsed {
            let _ = writeln!(out, "wall time {:.3} s", t.as_secs_f64());
        }
        out
    }
}

/// Run-length form of a divisor list, e.g. `1^18 2`.
fn compress(divisors: &[String]) -> String {
    if divisors.is_empty() {
        return "none".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < divisors.len() {
        let j = (i..divisors.len())
            .find(|&j| divisors[j] != divisors[i])
            .unwrap_or(divisors.len());
        parts.push(if j - i == 1 {
            divisors[i].clone()
        } else {
            format!("{}^{}", divisors[i], j - i)
        });
        i = j;
    }
    parts.join(" ")
}

pub fn cmd_verify(path: impl AsRef<Path>) -> Result<VerifyReport, Error> {
    Dataset::load(path)?.verify()
}

/// Loads and verifies the dataset, then computes the requested (co)homology.
/// Both directions are always computed internally for the coefficient check.
pub fn cmd_compute(
    path: impl AsRef<Path>,
    mode: Option<Mode>,
    direction: Direction,
) -> Result<RunReport, Error> {
    let ds = Dataset::load(path)?;
    ds.verify()?;
    let mode = mode.unwrap_or(ds.mode);
    let coeffs = ds.coefficients(mode)?;
    let cochain = assemble_cochain(&ds.complex, &coeffs)?;
    let chain = cochain.transpose();
    chain.check_square_zero()?;
    let cohom = bredon_cohomology(&cochain, &ds.fingerprint)?;
    let hom = bredon_cohomology(&chain, &ds.fingerprint)?;
    info!("{mode}: H^* = {:?}", cohom.groups.iter().map(ToString::to_string).collect::<Vec<_>>());
    let uct = uct_check(&cohom, &hom);
    Ok(RunReport {
        dataset: ds.name.clone(),
        fingerprint: ds.fingerprint.clone(),
        mode,
        direction,
        ahss: direction.wants_cohomology().then(|| ahss_report(&cohom)),
        duality: direction.wants_homology().then(|| duality_report(&hom)),
        cohomology: direction.wants_cohomology().then_some(cohom),
        homology: direction.wants_homology().then_some(hom),
        uct,
    })
}

/// Which matrix `cmd_matrix` prints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixTarget {
    /// Restriction along an incidence id (`e1->v1`) or a named embedding.
    Embedding(String),
    /// Induction along the same, computed from the induced-character formula
    /// where possible.
    Induction(String),
    /// Coboundary `Phi_d` of the cochain complex.
    Differential(usize),
}

pub fn cmd_matrix(
    path: impl AsRef<Path>,
    target: &MatrixTarget,
    mode: Option<Mode>,
    transpose: bool,
) -> Result<IntMatrix, Error> {
    let ds = Dataset::load(path)?;
    let mode = mode.unwrap_or(ds.mode);
    let m = match target {
        MatrixTarget::Embedding(id) | MatrixTarget::Induction(id) => {
            let (emb, big, small) = ds.restriction_data(id, mode)?;
            let res = if matches!(target, MatrixTarget::Induction(_)) {
                induction_matrix(&big, &small, &emb)
            } else {
                restriction_matrix(&big, &small, &emb)
            };
            res.map_err(|e| Error::from_char(&format!("embedding {id}"), e))?
        }
        MatrixTarget::Differential(d) => {
            let b = assemble_cochain(&ds.complex, &ds.coefficients(mode)?)?;
            b.differentials
                .get(d.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| {
                    Error::validation(
                        "matrix",
                        format!("no differential Phi{d}; the complex has {}", b.differentials.len()),
                    )
                })?
        }
    };
    Ok(if transpose { m.transpose() } else { m })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub divisors: Vec<String>,
}

impl fmt::Display for SnfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.cols)?;
        writeln!(f, "rank {}", self.rank)?;
        writeln!(f, "divisors {}", self.divisors.join(" "))
    }
}

pub fn cmd_snf(path: impl AsRef<Path>) -> Result<SnfReport, Error> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let m: IntMatrix = text
        .parse()
        .map_err(|e| Error::parse(path.display().to_string(), e))?;
    let s = snf(&m);
    Ok(SnfReport {
        rows: m.rows(),
        cols: m.cols(),
        rank: s.rank(),
        divisors: s.divisors.iter().map(ToString::to_string).collect(),
    })
}
