//! Loading and validating dataset files: ambient matrices, stabilizer groups,
//! covers, character tables, twists and the equivariant cell structure.

mod schema;

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, info};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::bredon::{
    assemble_cochain, Cell, CoefficientSystem, EquivariantComplex, Incidence, Mode,
};
use crate::character::{BoundTable, CharacterTable, CoefficientBasis, TwistData};
use crate::cyclotomic::CycNumber;
use crate::error::Error;
use crate::group::{
    verify_stabilizer_inclusion, CentralExtension, CycSquare, Embedding, FiniteGroup, IntSquare,
    Word,
};
use schema::{RawFile, RawFusionCheck};

/// Rational symmetric matrix standing for a point of the symmetric space.
type Form = Vec<Vec<BigRational>>;

/// Conjugation embedding between two tabled groups, outside the cell structure.
#[derive(Clone, Debug)]
pub struct NamedEmbedding {
    pub embedding: Embedding,
    pub source: Arc<BoundTable>,
    pub target: Arc<BoundTable>,
}

/// A fully resolved and structurally validated dataset.
#[derive(Debug)]
pub struct Dataset {
    pub name: String,
    pub fingerprint: String,
    pub sources: Vec<PathBuf>,
    pub matrices: BTreeMap<String, IntSquare>,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub extensions: BTreeMap<String, Arc<CentralExtension>>,
    pub chartables: BTreeMap<String, Arc<CharacterTable>>,
    pub tables: BTreeMap<String, Arc<BoundTable>>,
    pub twists: BTreeMap<String, BTreeMap<String, Arc<TwistData>>>,
    pub complex: EquivariantComplex,
    pub embeddings: BTreeMap<String, NamedEmbedding>,
    pub mode: Mode,
    pub twist: Option<String>,
    fusion_checks: Vec<RawFusionCheck>,
}

/// Summary of a successful verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub fingerprint: String,
    pub checks: Vec<String>,
}

fn read_tree(path: &Path, stack: &mut Vec<PathBuf>, texts: &mut Vec<(PathBuf, String)>) -> Result<RawFile, Error> {
    let canonical = path.canonicalize().map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    if stack.contains(&canonical) {
        return Err(Error::parse(path.display().to_string(), "include cycle"));
    }
    let text = std::fs::read_to_string(&canonical).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut raw: RawFile =
        toml::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e))?;
    stack.push(canonical.clone());
    let dir = canonical.parent().map(Path::to_path_buf).unwrap_or_default();
    let includes = std::mem::take(&mut raw.include);
    let mut merged = RawFile::default();
    for inc in includes {
        let sub = read_tree(&dir.join(&inc), stack, texts)?;
        merged.absorb(sub);
    }
    stack.pop();
    texts.push((canonical, text));
    // The including file's own settings take precedence; its sections follow the included ones.
    let mut own = raw;
    let included = std::mem::take(&mut merged);
    let mut out = RawFile {
        name: own.name.take(),
        coefficients: own.coefficients.take(),
        ..RawFile::default()
    };
    out.absorb(included);
    out.absorb(own);
    Ok(out)
}

fn parse_cyc(s: &str, location: &str) -> Result<CycNumber, Error> {
    s.parse().map_err(|e| Error::parse(location, e))
}

fn parse_word(s: &str, location: &str) -> Result<Word, Error> {
    s.parse().map_err(|e| Error::parse(location, e))
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, key: &str, what: &str, section: &str) -> Result<&'a T, Error> {
    map.get(key)
        .ok_or_else(|| Error::validation(section, format!("unknown {what} {key:?}")))
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, key: &str, value: T, section: &str) -> Result<(), Error> {
    if map.insert(key.to_string(), value).is_some() {
        return Err(Error::validation(section, format!("duplicate name {key:?}")));
    }
    Ok(())
}

fn act_on_form(g: &IntSquare, form: &Form) -> Form {
    // g^T A g, the form translated by g^{-1}.
    let n = g.dim();
    let gi = |i: usize, j: usize| BigRational::from_integer(g.get(i, j).into());
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = BigRational::from_integer(0.into());
                    for (k, row) in form.iter().enumerate() {
                        for (l, a) in row.iter().enumerate() {
                            acc += gi(k, i) * a * gi(l, j);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

impl Dataset {
    /// Reads `path` and its includes, resolves every reference and runs the
    /// structural gates (group orders, table orthogonality, twist data,
    /// stabilizer inclusions and geometric incidences).
    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref();
        let mut texts = Vec::new();
        let raw = read_tree(path, &mut Vec::new(), &mut texts)?;
        let mut hasher = Sha256::new();
        for (_, t) in &texts {
            hasher.update(t.as_bytes());
            hasher.update([0u8]);
        }
        let fingerprint: String = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        let name = raw.name.clone().unwrap_or_else(|| {
            path.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
        info!("loading dataset {name} ({} files)", texts.len());
        Self::build(raw, name, fingerprint, texts.into_iter().map(|(p, _)| p).collect())
    }

    fn build(raw: RawFile, name: String, fingerprint: String, sources: Vec<PathBuf>) -> Result<Self, Error> {
        let mut matrices = BTreeMap::new();
        for m in &raw.matrix {
            let sec = format!("matrix {}", m.name);
            let mat = IntSquare::new(&m.rows).map_err(|e| Error::parse(&sec, e))?;
            if mat.det() != 1 && mat.det() != -1 {
                return Err(Error::validation(&sec, "matrix is not invertible over the integers"));
            }
            insert_unique(&mut matrices, &m.name, mat, &sec)?;
        }
        let eval_ambient = |w: &str, sec: &str| -> Result<IntSquare, Error> {
            let word = parse_word(w, sec)?;
            let dim = matrices.values().next().map(IntSquare::dim).unwrap_or(1);
            word.letters().iter().try_fold(IntSquare::identity(dim), |acc, (n, k)| {
                let g = lookup(&matrices, n, "matrix", sec)?;
                let base = if *k < 0 {
                    g.inverse().map_err(|e| Error::validation(sec, e))?
                } else {
                    g.clone()
                };
                Ok((0..k.unsigned_abs()).fold(acc, |a, _| a.mul(&base)))
            })
        };

        let mut groups: BTreeMap<String, Arc<FiniteGroup>> = BTreeMap::new();
        for g in &raw.group {
            let sec = format!("group {}", g.name);
            let gens = g
                .generators
                .iter()
                .map(|n| Ok((n.clone(), lookup(&matrices, n, "matrix", &sec)?.clone())))
                .collect::<Result<Vec<_>, Error>>()?;
            let grp = FiniteGroup::from_matrices(&g.name, gens).map_err(|e| Error::validation(&sec, e))?;
            if grp.order() != g.order {
                return Err(Error::validation(
                    &sec,
                    format!("generated group has order {}, expected {}", grp.order(), g.order),
                ));
            }
            debug!("group {} of order {}", g.name, grp.order());
            insert_unique(&mut groups, &g.name, Arc::new(grp), &sec)?;
        }

        let mut chartables = BTreeMap::new();
        for t in &raw.chartable {
            let sec = format!("chartable {}", t.name);
            let rows = t
                .characters
                .iter()
                .map(|c| {
                    c.values
                        .iter()
                        .map(|v| parse_cyc(v, &format!("{sec} row {}", c.label)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let table = CharacterTable {
                name: t.name.clone(),
                class_labels: t.classes.clone(),
                class_sizes: t.sizes.clone(),
                labels: t.characters.iter().map(|c| c.label.clone()).collect(),
                rows,
            };
            table.verify().map_err(|e| Error::validation(&sec, e))?;
            insert_unique(&mut chartables, &t.name, Arc::new(table), &sec)?;
        }

        let mut extensions: BTreeMap<String, Arc<CentralExtension>> = BTreeMap::new();
        for x in &raw.extension {
            let sec = format!("extension {}", x.name);
            let base = lookup(&groups, &x.base, "group", &sec)?.clone();
            let ext = match (&x.pullback_of, x.lift.is_empty()) {
                (Some(parent), true) => {
                    let parent = lookup(&extensions, parent, "extension", &sec)?.clone();
                    let gamma = eval_ambient(x.conjugator.as_deref().unwrap_or("1"), &sec)?;
                    let along = Embedding::by_conjugation(&x.name, base, parent.base().clone(), &gamma)
                        .map_err(|e| Error::validation(&sec, e))?;
                    parent
                        .pullback(&x.name, &along, &x.lift_names)
                        .map_err(|e| Error::validation(&sec, e))?
                }
                (None, false) => {
                    let lifts = x
                        .lift
                        .iter()
                        .map(|l| {
                            let loc = format!("{sec} lift {}", l.name);
                            let h = base
                                .evaluate(&parse_word(&l.covers, &loc)?)
                                .map_err(|e| Error::validation(&loc, e))?;
                            let rows = l
                                .matrix
                                .iter()
                                .map(|r| r.iter().map(|v| parse_cyc(v, &loc)).collect())
                                .collect::<Result<Vec<Vec<_>>, _>>()?;
                            let m = CycSquare::new(rows).map_err(|e| Error::parse(&loc, e))?;
                            Ok((l.name.clone(), h, m))
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    CentralExtension::from_realization(&x.name, base, lifts)
                        .map_err(|e| Error::validation(&sec, e))?
                }
                _ => {
                    return Err(Error::validation(
                        &sec,
                        "give either lifts or pullback_of, not both or neither",
                    ))
                }
            };
            if ext.total().order() != x.order {
                return Err(Error::validation(
                    &sec,
                    format!("cover has order {}, expected {}", ext.total().order(), x.order),
                ));
            }
            if groups.contains_key(&x.name) {
                return Err(Error::validation(&sec, "name clashes with a group"));
            }
            groups.insert(x.name.clone(), ext.total().clone());
            insert_unique(&mut extensions, &x.name, Arc::new(ext), &sec)?;
        }

        let mut tables = BTreeMap::new();
        for t in &raw.table {
            let sec = format!("table {}", t.name);
            let group = lookup(&groups, &t.group, "group", &sec)?.clone();
            let ct = lookup(&chartables, &t.chartable, "chartable", &sec)?.clone();
            let bound = BoundTable::bind(&t.name, ct, group, &t.class_words)
                .map_err(|e| Error::validation(&sec, e))?;
            insert_unique(&mut tables, &t.name, Arc::new(bound), &sec)?;
        }

        let mut forms: BTreeMap<String, Form> = BTreeMap::new();
        for v in &raw.vertex {
            let sec = format!("vertex {}", v.name);
            let form = v
                .form
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| x.parse::<BigRational>().map_err(|e| Error::parse(&sec, e)))
                        .collect()
                })
                .collect::<Result<Form, _>>()?;
            let n = form.len();
            if form.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..n).any(|j| form[i][j] != form[j][i])) {
                return Err(Error::validation(&sec, "form is not a symmetric square matrix"));
            }
            insert_unique(&mut forms, &v.name, form, &sec)?;
        }

        let mut cells = Vec::new();
        let mut cell_index: BTreeMap<String, usize> = BTreeMap::new();
        let mut cell_forms: Vec<Vec<Form>> = Vec::new();
        for c in &raw.cell {
            let sec = format!("cell {}", c.name);
            let stab = lookup(&groups, &c.stabilizer, "group", &sec)?.clone();
            if stab.realization().is_none() {
                return Err(Error::validation(&sec, "stabilizer must be a matrix group"));
            }
            let table = match &c.table {
                Some(t) => lookup(&tables, t, "table", &sec)?.clone(),
                None if stab.order() == 1 => Arc::new(
                    BoundTable::trivial(&format!("R({})", c.name), stab.clone())
                        .map_err(|e| Error::validation(&sec, e))?,
                ),
                None => return Err(Error::validation(&sec, "nontrivial stabilizer needs a table")),
            };
            if table.group.name() != stab.name() {
                return Err(Error::validation(
                    &sec,
                    format!("table {} is not a table of {}", table.name, stab.name()),
                ));
            }
            let vforms = c
                .vertices
                .iter()
                .map(|v| lookup(&forms, v, "vertex", &sec).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            for (gname, g) in stab.generators() {
                let m = &stab.realization().expect("checked")[*g];
                for f in &vforms {
                    if !vforms.contains(&act_on_form(m, f)) {
                        return Err(Error::validation(
                            &sec,
                            format!("generator {gname} does not preserve the vertex set"),
                        ));
                    }
                }
            }
            if cell_index.insert(c.name.clone(), cells.len()).is_some() {
                return Err(Error::validation(&sec, "duplicate cell"));
            }
            cells.push(Cell {
                name: c.name.clone(),
                dim: c.dim,
                stabilizer: stab,
                table,
                twist: None,
            });
            cell_forms.push(vforms);
        }

        let mut incidences = Vec::new();
        let mut seen_ids: HashSet<String> = HashSet::new();
        for b in &raw.boundary {
            let base_id = b.id.clone().unwrap_or_else(|| format!("{}->{}", b.cell, b.face));
            let mut id = base_id.clone();
            let mut k = 2;
            while seen_ids.contains(&id) {
                id = format!("{base_id}#{k}");
                k += 1;
            }
            seen_ids.insert(id.clone());
            let sec = format!("boundary {id}");
            let cell = *cell_index
                .get(&b.cell)
                .ok_or_else(|| Error::validation(&sec, format!("unknown cell {:?}", b.cell)))?;
            let face = *cell_index
                .get(&b.face)
                .ok_or_else(|| Error::validation(&sec, format!("unknown cell {:?}", b.face)))?;
            if cells[face].dim + 1 != cells[cell].dim {
                return Err(Error::validation(&sec, "face must have dimension one less than the cell"));
            }
            if b.sign != 1 && b.sign != -1 {
                return Err(Error::validation(&sec, "sign must be 1 or -1"));
            }
            let gamma = eval_ambient(&b.conjugator, &sec)?;
            if !verify_stabilizer_inclusion(&cells[cell].stabilizer, &cells[face].stabilizer, &gamma) {
                return Err(Error::validation(
                    &sec,
                    format!(
                        "conjugator {} does not carry the stabilizer of {} into that of {}",
                        b.conjugator, b.cell, b.face
                    ),
                ));
            }
            if !cell_forms[face].is_empty() {
                for f in &cell_forms[face] {
                    if !cell_forms[cell].contains(&act_on_form(&gamma, f)) {
                        return Err(Error::validation(
                            &sec,
                            "translated face has a vertex outside the cell",
                        ));
                    }
                }
            }
            incidences.push(Incidence {
                id,
                cell,
                face,
                sign: b.sign,
                conjugator: gamma,
            });
        }
        for (i, c) in cells.iter().enumerate() {
            if c.dim > 0 && !incidences.iter().any(|inc| inc.cell == i) {
                return Err(Error::validation(format!("cell {}", c.name), "cell has no faces"));
            }
        }

        let mut twists: BTreeMap<String, BTreeMap<String, Arc<TwistData>>> = BTreeMap::new();
        for t in &raw.twist {
            let mut per_cell = BTreeMap::new();
            for tc in &t.cells {
                let sec = format!("twist {} cell {}", t.name, tc.cell);
                let ci = *cell_index
                    .get(&tc.cell)
                    .ok_or_else(|| Error::validation(&sec, "unknown cell"))?;
                let ext = lookup(&extensions, &tc.extension, "extension", &sec)?.clone();
                if ext.base().name() != cells[ci].stabilizer.name() {
                    return Err(Error::validation(&sec, "cover is not an extension of the cell stabilizer"));
                }
                let table = lookup(&tables, &tc.table, "table", &sec)?.clone();
                let declared = match &tc.twisted {
                    Some(labels) => Some(
                        labels
                            .iter()
                            .map(|l| {
                                table.table.labels.iter().position(|x| x == l).ok_or_else(|| {
                                    Error::validation(&sec, format!("unknown character {l:?}"))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?,
                    ),
                    None => None,
                };
                let data = TwistData::new(&tc.extension, ext, tc.xi, table, declared.as_deref())
                    .map_err(|e| Error::validation(&sec, e))?;
                insert_unique(&mut per_cell, &tc.cell, Arc::new(data), &sec)?;
            }
            insert_unique(&mut twists, &t.name, per_cell, &format!("twist {}", t.name))?;
        }

        let (mode, twist) = match &raw.coefficients {
            Some(c) => (c.mode, c.twist.clone()),
            None => (Mode::Untwisted, None),
        };
        if let Some(t) = &twist {
            let per_cell = lookup(&twists, t, "twist", "coefficients")?;
            for (cell, data) in per_cell {
                cells[cell_index[cell]].twist = Some(data.clone());
            }
        } else if mode.is_twisted() {
            return Err(Error::validation("coefficients", format!("mode {mode} needs a twist")));
        }

        let mut embeddings = BTreeMap::new();
        for e in &raw.embedding {
            let sec = format!("embedding {}", e.name);
            let source = lookup(&tables, &e.source_table, "table", &sec)?.clone();
            let target = lookup(&tables, &e.target_table, "table", &sec)?.clone();
            let gamma = eval_ambient(&e.conjugator, &sec)?;
            let emb = Embedding::by_conjugation(&e.name, source.group.clone(), target.group.clone(), &gamma)
                .map_err(|err| Error::validation(&sec, err))?;
            insert_unique(
                &mut embeddings,
                &e.name,
                NamedEmbedding {
                    embedding: emb,
                    source,
                    target,
                },
                &sec,
            )?;
        }

        Ok(Dataset {
            name,
            fingerprint,
            sources,
            matrices,
            groups,
            extensions,
            chartables,
            tables,
            twists,
            complex: EquivariantComplex { cells, incidences },
            embeddings,
            mode,
            twist,
            fusion_checks: raw.fusion_check,
        })
    }

    /// Modes the dataset can be evaluated in.
    pub fn available_modes(&self) -> Vec<Mode> {
        if self.twist.is_some() {
            vec![Mode::Untwisted, Mode::CoverRing, Mode::Isotypic]
        } else {
            vec![Mode::Untwisted]
        }
    }

    pub fn coefficients(&self, mode: Mode) -> Result<CoefficientSystem, Error> {
        if mode.is_twisted() && self.twist.is_none() {
            return Err(Error::validation("coefficients", format!("mode {mode} needs a twist")));
        }
        Ok(CoefficientSystem::new(&self.complex, mode))
    }

    /// Runs the gates that need assembled complexes: the composite of
    /// consecutive differentials vanishes in every available mode, and every
    /// stated fusion agrees with the computed one.
    pub fn verify(&self) -> Result<VerifyReport, Error> {
        let mut checks = vec![
            format!("{} groups generated with expected orders", self.groups.len()),
            format!("{} character tables orthogonal", self.chartables.len()),
            format!("{} tables bound to groups", self.tables.len()),
            format!(
                "{} incidences pass stabilizer inclusion",
                self.complex.incidences.len()
            ),
        ];
        for mode in self.available_modes() {
            let coeffs = self.coefficients(mode)?;
            let b = assemble_cochain(&self.complex, &coeffs)?;
            checks.push(format!("{mode}: ranks {:?}, composites vanish", b.ranks()));
        }
        for fc in &self.fusion_checks {
            let sec = format!("fusion_check {} {}", fc.incidence, fc.element);
            let inc = self
                .complex
                .incidence(&fc.incidence)
                .ok_or_else(|| Error::validation(&sec, "unknown incidence"))?;
            let emb = self.complex.incidence_embedding(inc, fc.mode)?;
            let x = emb
                .source
                .evaluate(&parse_word(&fc.element, &sec)?)
                .map_err(|e| Error::validation(&sec, e))?;
            let class = emb.target.class_of(emb.map[x]);
            let coeffs = self.coefficients(fc.mode)?;
            let table = &coeffs.bases[inc.face].table;
            let label = &table.table.class_labels[table.column_of_class(class)];
            if label != &fc.class {
                return Err(Error::validation(
                    &sec,
                    format!("element maps to class {label}, expected {}", fc.class),
                ));
            }
        }
        if !self.fusion_checks.is_empty() {
            checks.push(format!("{} stated fusions confirmed", self.fusion_checks.len()));
        }
        Ok(VerifyReport {
            fingerprint: self.fingerprint.clone(),
            checks,
        })
    }

    /// Coefficient bases at both ends of an incidence or named embedding.
    pub fn restriction_data(
        &self,
        id: &str,
        mode: Mode,
    ) -> Result<(Embedding, CoefficientBasis, CoefficientBasis), Error> {
        if let Some(inc) = self.complex.incidence(id) {
            let coeffs = self.coefficients(mode)?;
            let emb = self.complex.incidence_embedding(inc, mode)?;
            return Ok((
                emb,
                coeffs.bases[inc.face].clone(),
                coeffs.bases[inc.cell].clone(),
            ));
        }
        if let Some(e) = self.embeddings.get(id) {
            return Ok((
                e.embedding.clone(),
                CoefficientBasis::full(e.target.clone()),
                CoefficientBasis::full(e.source.clone()),
            ));
        }
        Err(Error::validation("matrix", format!("unknown embedding {id:?}")))
    }
}
