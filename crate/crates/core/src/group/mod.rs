//! Finite groups given by generators, with conjugacy classes, embeddings and
//! central extensions.

mod embedding;
mod extension;
mod matrix;
mod word;

pub use embedding::{verify_stabilizer_inclusion, Embedding, EmbeddingKind};
pub use extension::CentralExtension;
pub use matrix::{CycSquare, IntSquare};
pub use word::Word;

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

/// Upper bound on the size of a generated group before closure gives up.
pub const MAX_ORDER: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group {name} exceeds {limit} elements; generators probably do not generate a finite group")]
    TooLarge { name: String, limit: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("matrix is not invertible over the integers: {0}")]
    NotInvertible(String),
    #[error("unknown generator {name:?} in word {word:?}")]
    UnknownGenerator { name: String, word: String },
    #[error("cannot parse word {word:?}: {reason}")]
    BadWord { word: String, reason: String },
    #[error("embedding {id}: {reason}")]
    BadEmbedding { id: String, reason: String },
    #[error("extension {name}: {reason}")]
    BadExtension { name: String, reason: String },
    #[error("embedding {id}: lifts of element {element} tie in order but lie in different classes")]
    AmbiguousLift { id: String, element: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// First element of the class in enumeration order.
    pub representative: usize,
    /// Members in enumeration order.
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Finite group stored by its Cayley table. Element 0 is the identity; elements
/// are numbered in the order the closure discovered them.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    generators: Vec<(String, usize)>,
    realization: Option<Vec<IntSquare>>,
    lookup: HashMap<IntSquare, usize>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    element_orders: Vec<usize>,
}

/// Breadth-first closure of `gens` under right multiplication. Returns the
/// elements in discovery order, starting with `identity`.
pub fn closure<E, K: Hash + Eq>(
    name: &str,
    identity: E,
    gens: &[E],
    mul: impl Fn(&E, &E) -> E,
    key: impl Fn(&E) -> K,
) -> Result<Vec<E>, GroupError> {
    let mut seen: HashMap<K, usize> = HashMap::new();
    seen.insert(key(&identity), 0);
    let mut elems = vec![identity];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let y = mul(&elems[i], g);
            let k = key(&y);
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(k) {
                if elems.len() >= MAX_ORDER {
                    return Err(GroupError::TooLarge {
                        name: name.to_string(),
                        limit: MAX_ORDER,
                    });
                }
                slot.insert(elems.len());
                elems.push(y);
            }
        }
        i += 1;
    }
    Ok(elems)
}

/// Cayley table of a list of elements closed under `mul`.
pub fn cayley_table<E, K: Hash + Eq>(
    name: &str,
    elems: &[E],
    mul: impl Fn(&E, &E) -> E,
    key: impl Fn(&E) -> K,
) -> Result<Vec<u32>, GroupError> {
    let index: HashMap<K, usize> = elems.iter().enumerate().map(|(i, e)| (key(e), i)).collect();
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for a in elems {
        for b in elems {
            let p = mul(a, b);
            let idx = index.get(&key(&p)).ok_or_else(|| {
                GroupError::Malformed(format!("{name}: element list is not closed"))
            })?;
            table.push(*idx as u32);
        }
    }
    Ok(table)
}

impl FiniteGroup {
    /// Group generated by named integer matrices.
    pub fn from_matrices(name: &str, gens: Vec<(String, IntSquare)>) -> Result<Self, GroupError> {
        let dim = gens.first().map(|(_, g)| g.dim()).ok_or_else(|| {
            GroupError::Malformed(format!("{name}: no generators given"))
        })?;
        if gens.iter().any(|(_, g)| g.dim() != dim) {
            return Err(GroupError::Malformed(format!(
                "{name}: generators have different sizes"
            )));
        }
        let mats: Vec<IntSquare> = gens.iter().map(|(_, g)| g.clone()).collect();
        let elems = closure(name, IntSquare::identity(dim), &mats, IntSquare::mul, Clone::clone)?;
        let table = cayley_table(name, &elems, IntSquare::mul, Clone::clone)?;
        let lookup: HashMap<IntSquare, usize> =
            elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let generators = gens
            .iter()
            .map(|(n, g)| (n.clone(), lookup[g]))
            .collect();
        let mut grp = Self::from_table(name, table, generators)?;
        grp.lookup = lookup;
        grp.realization = Some(elems);
        Ok(grp)
    }

    /// Group given by a Cayley table whose element 0 is the identity.
    pub fn from_table(
        name: &str,
        table: Vec<u32>,
        generators: Vec<(String, usize)>,
    ) -> Result<Self, GroupError> {
        let order = (table.len() as f64).sqrt().round() as usize;
        let bad = |reason: &str| GroupError::Malformed(format!("{name}: {reason}"));
        if order == 0 || order * order != table.len() {
            return Err(bad("Cayley table is not square"));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(bad("Cayley table entry out of range"));
        }
        for a in 0..order {
            if table[a] as usize != a || table[a * order] as usize != a {
                return Err(bad("element 0 is not the identity"));
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| table[a * order + b] == 0) {
                Some(b) => inverses[a] = b,
                None => return Err(bad("element without inverse")),
            }
        }
        let mut grp = FiniteGroup {
            name: name.to_string(),
            order,
            table,
            inverses,
            generators,
            realization: None,
            lookup: HashMap::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            element_orders: Vec::new(),
        };
        grp.element_orders = (0..order).map(|g| grp.element_order(g)).collect();
        grp.compute_classes();
        Ok(grp)
    }

    fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(ConjugacyClass {
                representative: x,
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g^{-1}`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inverses[g])
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn generators(&self) -> &[(String, usize)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| *g)
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.element_orders
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// Ambient matrix of each element, when the group was generated by matrices.
    pub fn realization(&self) -> Option<&[IntSquare]> {
        self.realization.as_deref()
    }

    pub fn index_of_matrix(&self, m: &IntSquare) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order).filter(|&x| self.commute(a, x)).collect()
    }

    /// Evaluates a word in this group's named generators.
    pub fn evaluate(&self, word: &Word) -> Result<usize, GroupError> {
        word.letters().iter().try_fold(0, |acc, (name, k)| {
            let g = self
                .generator(name)
                .ok_or_else(|| GroupError::UnknownGenerator {
                    name: name.clone(),
                    word: word.to_string(),
                })?;
            Ok(self.mul(acc, self.pow(g, *k)))
        })
    }

    pub fn evaluate_str(&self, word: &str) -> Result<usize, GroupError> {
        self.evaluate(&word.parse()?)
    }

    /// Checks that the listed generators generate the whole group.
    pub fn generators_generate(&self) -> bool {
        let gens: Vec<usize> = self.generators.iter().map(|(_, g)| *g).collect();
        closure(&self.name, 0usize, &gens, |a, b| self.mul(*a, *b), |x| *x)
            .map(|e| e.len() == self.order)
            .unwrap_or(false)
    }
}
