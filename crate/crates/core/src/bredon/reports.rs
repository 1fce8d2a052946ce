use serde::{Deserialize, Serialize};

use super::{CohomologyResult, Variance};
use crate::linalg::FinAbGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UctDegree {
    pub degree: usize,
    pub cohomology: FinAbGroup,
    pub expected: FinAbGroup,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UctReport {
    pub degrees: Vec<UctDegree>,
    pub pass: bool,
}

/// Compares `H^n` with `Hom(H_n, Z) ⊕ Ext(H_{n-1}, Z)` degree by degree.
pub fn uct_check(cohom: &CohomologyResult, hom: &CohomologyResult) -> UctReport {
    debug_assert_eq!(cohom.variance, Variance::Cochain);
    debug_assert_eq!(hom.variance, Variance::Chain);
    let top = cohom.groups.len().max(hom.groups.len());
    let get = |v: &[FinAbGroup], n: usize| v.get(n).cloned().unwrap_or_else(FinAbGroup::zero);
    let degrees: Vec<UctDegree> = (0..top)
        .map(|n| {
            let free = get(&hom.groups, n).hom_to_z();
            let ext = if n == 0 {
                FinAbGroup::zero()
            } else {
                get(&hom.groups, n - 1).ext_to_z()
            };
            let expected = FinAbGroup::free_plus_torsion(&free, &ext);
            let actual = get(&cohom.groups, n);
            UctDegree {
                degree: n,
                pass: actual == expected,
                cohomology: actual,
                expected,
            }
        })
        .collect();
    UctReport {
        pass: degrees.iter().all(|d| d.pass),
        degrees,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AhssReport {
    /// `E_2^{p,q}` for even `q`, i.e. the cohomology groups.
    pub e2: Vec<FinAbGroup>,
    pub collapses: bool,
    pub k0: Option<FinAbGroup>,
    pub k1: Option<FinAbGroup>,
    pub verdict: String,
}

/// With cohomology concentrated in degrees 0 and 1 no differential of the
/// spectral sequence can be nonzero, so `K^0 = H^0` and `K^1 = H^1`.
pub fn ahss_report(cohom: &CohomologyResult) -> AhssReport {
    let e2 = cohom.groups.clone();
    let collapses = e2.iter().skip(2).all(FinAbGroup::is_zero);
    let pick = |n: usize| e2.get(n).cloned().unwrap_or_else(FinAbGroup::zero);
    if collapses {
        let (k0, k1) = (pick(0), pick(1));
        AhssReport {
            verdict: format!("collapses at E2: K^0 = {k0}, K^1 = {k1}"),
            k0: Some(k0),
            k1: Some(k1),
            e2,
            collapses,
        }
    } else {
        AhssReport {
            e2,
            collapses,
            k0: None,
            k1: None,
            verdict: "no collapse certificate".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub hypotheses_satisfied: bool,
    pub k_even: Option<FinAbGroup>,
    pub k_odd: Option<FinAbGroup>,
    pub verdict: String,
}

/// Duality needs free homology concentrated in degrees 0 and 1.
pub fn duality_report(hom: &CohomologyResult) -> DualityReport {
    let free = hom.groups.iter().all(FinAbGroup::is_free);
    let concentrated = hom.groups.iter().skip(2).all(FinAbGroup::is_zero);
    if free && concentrated {
        let pick = |n: usize| hom.groups.get(n).cloned().unwrap_or_else(FinAbGroup::zero);
        let (k_even, k_odd) = (pick(0), pick(1));
        DualityReport {
            hypotheses_satisfied: true,
            verdict: format!("duality hypotheses satisfied: K_even = {k_even}, K_odd = {k_odd}"),
            k_even: Some(k_even),
            k_odd: Some(k_odd),
        }
    } else {
        let why = if !free {
            "homology has torsion"
        } else {
            "homology is nonzero above degree 1"
        };
        DualityReport {
            hypotheses_satisfied: false,
            k_even: None,
            k_odd: None,
            verdict: format!("duality hypotheses not satisfied: {why}"),
        }
    }
}
