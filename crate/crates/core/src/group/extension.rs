use std::sync::Arc;

use super::{cayley_table, closure, CycSquare, Embedding, FiniteGroup, GroupError};
use crate::cyclotomic::CycNumber;

/// Central extension `1 → Z/n → total → base → 1` given by a normalized
/// 2-cocycle `c`, with multiplication `(g,a)(h,b) = (gh, a+b+c(g,h))`.
/// The pair `(h, a)` is total element `h*n + a`.
#[derive(Clone, Debug)]
pub struct CentralExtension {
    name: String,
    base: Arc<FiniteGroup>,
    n: u32,
    cocycle: Vec<u32>,
    total: Arc<FiniteGroup>,
}

fn bad(name: &str, reason: impl Into<String>) -> GroupError {
    GroupError::BadExtension {
        name: name.to_string(),
        reason: reason.into(),
    }
}

impl CentralExtension {
    /// Builds the extension from a cocycle table indexed `g * |base| + h`.
    /// `lift_names` names the section lifts of the base generators; the
    /// central generator is always called `z`.
    pub fn from_cocycle(
        name: &str,
        base: Arc<FiniteGroup>,
        n: u32,
        cocycle: Vec<u32>,
        lift_names: &[String],
    ) -> Result<Self, GroupError> {
        if lift_names.len() != base.generators().len() {
            return Err(bad(name, "need one lift name per base generator"));
        }
        let gens = lift_names
            .iter()
            .zip(base.generators())
            .map(|(l, (_, g))| (l.clone(), *g as u32, 0))
            .collect();
        Self::assemble(name, base, n, cocycle, gens)
    }

    fn assemble(
        name: &str,
        base: Arc<FiniteGroup>,
        n: u32,
        cocycle: Vec<u32>,
        gens: Vec<(String, u32, u32)>,
    ) -> Result<Self, GroupError> {
        let m = base.order();
        if n == 0 {
            return Err(bad(name, "central subgroup must be nontrivial or Z/1"));
        }
        if cocycle.len() != m * m || cocycle.iter().any(|&c| c >= n) {
            return Err(bad(name, "cocycle table has the wrong shape"));
        }
        let c = |g: usize, h: usize| cocycle[g * m + h];
        for h in 0..m {
            if c(0, h) != 0 || c(h, 0) != 0 {
                return Err(bad(name, "cocycle is not normalized"));
            }
        }
        for g in 0..m {
            for h in 0..m {
                let gh = base.mul(g, h);
                for k in 0..m {
                    let lhs = (c(g, h) + c(gh, k)) % n;
                    let rhs = (c(h, k) + c(g, base.mul(h, k))) % n;
                    if lhs != rhs {
                        return Err(bad(
                            name,
                            format!("cocycle identity fails at ({g}, {h}, {k})"),
                        ));
                    }
                }
            }
        }
        let nn = n as usize;
        let size = m * nn;
        let mut table = Vec::with_capacity(size * size);
        for x in 0..size {
            let (g, a) = (x / nn, x % nn);
            for y in 0..size {
                let (h, b) = (y / nn, y % nn);
                let s = (a + b + c(g, h) as usize) % nn;
                table.push((base.mul(g, h) * nn + s) as u32);
            }
        }
        let mut generators: Vec<(String, usize)> = gens
            .into_iter()
            .map(|(l, h, a)| (l, h as usize * nn + a as usize))
            .collect();
        if n > 1 {
            generators.push(("z".to_string(), 1));
        }
        let total = FiniteGroup::from_table(name, table, generators)?;
        if !total.generators_generate() {
            return Err(bad(name, "lifts do not generate the extension"));
        }
        Ok(CentralExtension {
            name: name.to_string(),
            base,
            n,
            cocycle,
            total: Arc::new(total),
        })
    }

    /// Extension realized by a group of pairs `(matrix, base element)` generated
    /// by the given lifts. The kernel of the projection must consist of scalar
    /// matrices and contain `ζ_n · I`; the section picks the first lift found.
    pub fn from_realization(
        name: &str,
        base: Arc<FiniteGroup>,
        lifts: Vec<(String, usize, CycSquare)>,
    ) -> Result<Self, GroupError> {
        let dim = lifts
            .first()
            .map(|(_, _, m)| m.dim())
            .ok_or_else(|| bad(name, "no lifts given"))?;
        let conductor = lifts.iter().fold(1u32, |acc, (_, _, m)| {
            num_integer::Integer::lcm(&acc, &m.conductor())
        });
        let gens: Vec<(CycSquare, usize)> = lifts
            .iter()
            .map(|(_, h, m)| Ok((m.lifted(conductor)?, *h)))
            .collect::<Result<_, GroupError>>()?;
        let mul = |x: &(CycSquare, usize), y: &(CycSquare, usize)| (x.0.mul(&y.0), base.mul(x.1, y.1));
        let key = |x: &(CycSquare, usize)| (x.0.key(), x.1);
        let identity = (CycSquare::identity(dim).lifted(conductor)?, 0);
        let elems = closure(name, identity, &gens, mul, key)?;
        let table = cayley_table(name, &elems, mul, key)?;
        let size = elems.len();
        let pmul = |a: usize, b: usize| table[a * size + b] as usize;

        let kernel: Vec<usize> = (0..size).filter(|&i| elems[i].1 == 0).collect();
        let n = kernel.len() as u32;
        if size != n as usize * base.order() {
            return Err(bad(name, "lifts do not project onto the base group"));
        }
        let zeta = CycNumber::root_of_unity(n, 1).map_err(|e| bad(name, e.to_string()))?;
        let z = *kernel
            .iter()
            .find(|&&i| elems[i].0.scalar() == Some(&zeta))
            .ok_or_else(|| bad(name, format!("kernel does not contain ζ_{n} · I")))?;
        let mut zpow = vec![0usize; n as usize];
        for a in 1..n as usize {
            zpow[a] = pmul(zpow[a - 1], z);
        }
        let mut section = vec![usize::MAX; base.order()];
        for (i, (_, h)) in elems.iter().enumerate() {
            if section[*h] == usize::MAX {
                section[*h] = i;
            }
        }
        // Write each element as section(h) * z^a.
        let mut coords = vec![(0usize, 0u32); size];
        for h in 0..base.order() {
            for (a, &za) in zpow.iter().enumerate() {
                coords[pmul(section[h], za)] = (h, a as u32);
            }
        }
        let m = base.order();
        let mut cocycle = vec![0u32; m * m];
        for g in 0..m {
            for h in 0..m {
                cocycle[g * m + h] = coords[pmul(section[g], section[h])].1;
            }
        }
        let gen_list = lifts
            .iter()
            .zip(closure_indices(&elems, &gens, key))
            .map(|((l, _, _), idx)| {
                let (h, a) = coords[idx];
                (l.clone(), h as u32, a)
            })
            .collect();
        Self::assemble(name, base, n, cocycle, gen_list)
    }

    /// Restriction of this extension along an injective homomorphism into its base.
    pub fn pullback(
        &self,
        name: &str,
        along: &Embedding,
        lift_names: &[String],
    ) -> Result<Self, GroupError> {
        if !Arc::ptr_eq(&along.target, &self.base) && along.target.name() != self.base.name() {
            return Err(bad(name, "embedding does not land in the base group"));
        }
        let sub = along.source.clone();
        let k = sub.order();
        let mut cocycle = vec![0u32; k * k];
        for x in 0..k {
            for y in 0..k {
                cocycle[x * k + y] = self.cocycle(along.map[x], along.map[y]);
            }
        }
        Self::from_cocycle(name, sub, self.n, cocycle, lift_names)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn total(&self) -> &Arc<FiniteGroup> {
        &self.total
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cocycle(&self, g: usize, h: usize) -> u32 {
        self.cocycle[g * self.base.order() + h]
    }

    pub fn element(&self, h: usize, a: u32) -> usize {
        h * self.n as usize + a as usize
    }

    pub fn project(&self, t: usize) -> usize {
        t / self.n as usize
    }

    pub fn section(&self, h: usize) -> usize {
        self.element(h, 0)
    }

    /// The generator `(e, 1)` of the central subgroup.
    pub fn central(&self) -> usize {
        self.element(0, 1 % self.n)
    }
}

fn closure_indices<E, K: std::hash::Hash + Eq>(
    elems: &[E],
    gens: &[E],
    key: impl Fn(&E) -> K,
) -> Vec<usize> {
    let index: std::collections::HashMap<K, usize> =
        elems.iter().enumerate().map(|(i, e)| (key(e), i)).collect();
    gens.iter().map(|g| index[&key(g)]).collect()
}
