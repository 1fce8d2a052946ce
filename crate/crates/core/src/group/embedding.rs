use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CentralExtension, FiniteGroup, GroupError, IntSquare};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingKind {
    /// Injective homomorphism.
    Homomorphism,
    /// Each element goes to its minimal-order lift in a covering group.
    SectionLift,
    /// A covering group mapped through its projection.
    Inflation,
}

/// Element map between two finite groups, used to restrict class functions.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub id: String,
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub map: Vec<usize>,
    pub kind: EmbeddingKind,
}

fn bad(id: &str, reason: impl Into<String>) -> GroupError {
    GroupError::BadEmbedding {
        id: id.to_string(),
        reason: reason.into(),
    }
}

/// True iff `gamma * cell_stab * gamma^{-1}` lies inside `face_stab`.
pub fn verify_stabilizer_inclusion(
    cell_stab: &FiniteGroup,
    face_stab: &FiniteGroup,
    gamma: &IntSquare,
) -> bool {
    let (Some(cell), Ok(inv)) = (cell_stab.realization(), gamma.inverse()) else {
        return false;
    };
    face_stab.realization().is_some()
        && cell
            .iter()
            .all(|k| face_stab.index_of_matrix(&gamma.mul(k).mul(&inv)).is_some())
}

impl Embedding {
    /// `k ↦ gamma k gamma^{-1}` between two matrix groups.
    pub fn by_conjugation(
        id: &str,
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gamma: &IntSquare,
    ) -> Result<Self, GroupError> {
        let src = source
            .realization()
            .ok_or_else(|| bad(id, "source has no matrix realization"))?;
        if target.realization().is_none() {
            return Err(bad(id, "target has no matrix realization"));
        }
        let inv = gamma.inverse()?;
        let map = src
            .iter()
            .map(|k| {
                let img = gamma.mul(k).mul(&inv);
                target.index_of_matrix(&img).ok_or_else(|| {
                    bad(
                        id,
                        format!(
                            "conjugate {img} of {k} is not in {}",
                            target.name()
                        ),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let e = Embedding {
            id: id.to_string(),
            source,
            target,
            map,
            kind: EmbeddingKind::Homomorphism,
        };
        e.check_homomorphism()?;
        Ok(e)
    }

    /// Builds an embedding from an explicit element map and checks it.
    pub fn from_map(
        id: &str,
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if map.len() != source.order() || map.iter().any(|&t| t >= target.order()) {
            return Err(bad(id, "element map has the wrong shape"));
        }
        let e = Embedding {
            id: id.to_string(),
            source,
            target,
            map,
            kind: EmbeddingKind::Homomorphism,
        };
        e.check_homomorphism()?;
        Ok(e)
    }

    pub fn check_homomorphism(&self) -> Result<(), GroupError> {
        let (s, t) = (&self.source, &self.target);
        for a in 0..s.order() {
            for b in 0..s.order() {
                if self.map[s.mul(a, b)] != t.mul(self.map[a], self.map[b]) {
                    return Err(bad(&self.id, format!("not multiplicative at ({a}, {b})")));
                }
            }
        }
        let mut seen = vec![false; t.order()];
        for &x in &self.map {
            if std::mem::replace(&mut seen[x], true) {
                return Err(bad(&self.id, "not injective"));
            }
        }
        Ok(())
    }

    /// Lifts an embedding of base groups to a homomorphism of covers that sends
    /// the central generator to the central generator. Generator images are
    /// searched over all lifts in a fixed order; the first valid one wins.
    pub fn lift_homomorphism(
        id: &str,
        source: &CentralExtension,
        target: &CentralExtension,
        base: &Embedding,
    ) -> Result<Self, GroupError> {
        if source.n() != target.n() {
            return Err(bad(id, "covers have different central orders"));
        }
        let n = source.n() as usize;
        let st = source.total();
        let tt = target.total();
        let gens: Vec<usize> = st.generators().iter().map(|(_, g)| *g).collect();
        let free: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i] != source.central())
            .collect();
        let combos = n.pow(free.len() as u32);
        for combo in 0..combos {
            let mut images = vec![0usize; gens.len()];
            let mut c = combo;
            for (i, g) in gens.iter().enumerate() {
                if *g == source.central() {
                    images[i] = target.central();
                    continue;
                }
                let h = base.map[source.project(*g)];
                images[i] = target.element(h, (c % n) as u32);
                c /= n;
            }
            if let Some(map) = extend_on_generators(st, tt, &gens, &images) {
                let candidate = Embedding {
                    id: id.to_string(),
                    source: st.clone(),
                    target: tt.clone(),
                    map,
                    kind: EmbeddingKind::Homomorphism,
                };
                let covers_base = (0..st.order())
                    .all(|x| target.project(candidate.map[x]) == base.map[source.project(x)]);
                if covers_base && candidate.check_homomorphism().is_ok() {
                    return Ok(candidate);
                }
            }
        }
        Err(bad(id, "no lift of the base embedding is a homomorphism of covers"))
    }

    /// Sends each element of an untwisted group to the lift of its image with
    /// the smallest order. Lifts of equal order must be conjugate in the cover.
    pub fn section_lift(
        id: &str,
        source: Arc<FiniteGroup>,
        target: &CentralExtension,
        base: &Embedding,
    ) -> Result<Self, GroupError> {
        let tt = target.total();
        let orders = tt.element_orders();
        let mut map = Vec::with_capacity(source.order());
        for k in 0..source.order() {
            let h = base.map[k];
            let lifts: Vec<usize> = (0..target.n()).map(|a| target.element(h, a)).collect();
            let best = lifts.iter().map(|&t| orders[t]).min().expect("n > 0");
            let tied: Vec<usize> = lifts.into_iter().filter(|&t| orders[t] == best).collect();
            if tied.iter().any(|&t| tt.class_of(t) != tt.class_of(tied[0])) {
                return Err(GroupError::AmbiguousLift {
                    id: id.to_string(),
                    element: k,
                });
            }
            map.push(tied[0]);
        }
        Ok(Embedding {
            id: id.to_string(),
            source,
            target: tt.clone(),
            map,
            kind: EmbeddingKind::SectionLift,
        })
    }

    /// Cover elements mapped through the projection and then the base embedding.
    pub fn inflation(id: &str, source: &CentralExtension, base: &Embedding) -> Self {
        let st = source.total();
        Embedding {
            id: id.to_string(),
            source: st.clone(),
            target: base.target.clone(),
            map: (0..st.order()).map(|t| base.map[source.project(t)]).collect(),
            kind: EmbeddingKind::Inflation,
        }
    }

    /// Class of the image of each source class. Every member of a source class
    /// must land in the same target class.
    pub fn fusion_map(&self) -> Result<Vec<usize>, GroupError> {
        self.source
            .classes()
            .iter()
            .map(|c| {
                let t = self.target.class_of(self.map[c.representative]);
                if c.members.iter().any(|&m| self.target.class_of(self.map[m]) != t) {
                    Err(bad(
                        &self.id,
                        format!(
                            "class of element {} is split by the map",
                            c.representative
                        ),
                    ))
                } else {
                    Ok(t)
                }
            })
            .collect()
    }
}

/// Extends generator images to all elements by walking the Cayley graph.
/// Returns `None` when the assignment is inconsistent.
fn extend_on_generators(
    s: &FiniteGroup,
    t: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; s.order()];
    map[0] = 0;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (g, img) in gens.iter().zip(images) {
            let y = s.mul(x, *g);
            let v = t.mul(map[x], *img);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push(y);
            } else if map[y] != v {
                return None;
            }
        }
        i += 1;
    }
    (queue.len() == s.order()).then_some(map)
}
