use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk`
/// with `1 < t1 | t2 | ... | tk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn zero() -> Self {
        FinAbGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Validated constructor: torsion coefficients must exceed 1 and form a divisibility chain.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self, LinalgError> {
        if let Some(t) = torsion.iter().find(|t| **t <= BigInt::one()) {
            return Err(LinalgError::InvalidInvariants(format!(
                "torsion coefficient {t} is not greater than 1"
            )));
        }
        if let Some(w) = torsion.windows(2).find(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(LinalgError::InvalidInvariants(format!(
                "{} does not divide {}",
                w[0], w[1]
            )));
        }
        Ok(FinAbGroup { free_rank, torsion })
    }

    /// From a divisibility chain of elementary divisors as produced by Smith
    /// normal form; unit divisors are dropped.
    pub(crate) fn from_chain(free_rank: usize, divisors: &[BigInt]) -> Self {
        FinAbGroup {
            free_rank,
            torsion: divisors
                .iter()
                .filter(|d| !d.abs().is_one())
                .map(|d| d.abs())
                .collect(),
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Hom(G, Z): the free part.
    pub fn hom_to_z(&self) -> FinAbGroup {
        FinAbGroup::free(self.free_rank)
    }

    /// Ext(G, Z): the torsion part.
    pub fn ext_to_z(&self) -> FinAbGroup {
        FinAbGroup {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Direct sum of a free group with a torsion group, as needed by the
    /// universal coefficient sequence. General sums would need re-normalization.
    pub fn free_plus_torsion(free: &FinAbGroup, torsion: &FinAbGroup) -> FinAbGroup {
        FinAbGroup {
            free_rank: free.free_rank + torsion.free_rank,
            torsion: torsion.torsion.clone(),
        }
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FinAbRepr {
    free_rank: usize,
    torsion: Vec<String>,
}

impl Serialize for FinAbGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FinAbRepr {
            free_rank: self.free_rank,
            torsion: self.torsion.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinAbGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FinAbRepr::deserialize(d)?;
        let torsion = r
            .torsion
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        FinAbGroup::new(r.free_rank, torsion).map_err(serde::de::Error::custom)
    }
}
