//! Serde mirror of the TOML dataset files, before cross-references are resolved.

use serde::Deserialize;

use crate::bredon::Mode;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFile {
    pub name: Option<String>,
    #[serde(default)]
    pub include: Vec<String>,
    #[serde(default)]
    pub matrix: Vec<RawMatrix>,
    #[serde(default)]
    pub group: Vec<RawGroup>,
    #[serde(default)]
    pub extension: Vec<RawExtension>,
    #[serde(default)]
    pub chartable: Vec<RawCharTable>,
    #[serde(default)]
    pub table: Vec<RawTable>,
    #[serde(default)]
    pub twist: Vec<RawTwist>,
    #[serde(default)]
    pub vertex: Vec<RawVertex>,
    #[serde(default)]
    pub cell: Vec<RawCell>,
    #[serde(default)]
    pub boundary: Vec<RawBoundary>,
    #[serde(default)]
    pub embedding: Vec<RawEmbedding>,
    #[serde(default)]
    pub fusion_check: Vec<RawFusionCheck>,
    pub coefficients: Option<RawCoefficients>,
}

impl RawFile {
    /// Appends the sections of `other`; scalar settings of `self` win.
    pub fn absorb(&mut self, other: RawFile) {
        self.matrix.extend(other.matrix);
        self.group.extend(other.group);
        self.extension.extend(other.extension);
        self.chartable.extend(other.chartable);
        self.table.extend(other.table);
        self.twist.extend(other.twist);
        self.vertex.extend(other.vertex);
        self.cell.extend(other.cell);
        self.boundary.extend(other.boundary);
        self.embedding.extend(other.embedding);
        self.fusion_check.extend(other.fusion_check);
        if self.coefficients.is_none() {
            self.coefficients = other.coefficients;
        }
        if self.name.is_none() {
            self.name = other.name;
        }
    }
}

/// Named integer matrix of the ambient group.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMatrix {
    pub name: String,
    pub rows: Vec<Vec<i64>>,
}

/// Finite subgroup generated by named ambient matrices.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    pub name: String,
    pub generators: Vec<String>,
    pub order: usize,
}

/// Central extension of a stabilizer, either realized by matrices over a
/// cyclotomic field or pulled back from another extension.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExtension {
    pub name: String,
    pub base: String,
    pub order: usize,
    #[serde(default)]
    pub lift: Vec<RawLift>,
    pub pullback_of: Option<String>,
    pub conjugator: Option<String>,
    #[serde(default)]
    pub lift_names: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawLift {
    pub name: String,
    /// Word in the base group's generators naming the element being lifted.
    pub covers: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCharTable {
    pub name: String,
    pub classes: Vec<String>,
    pub sizes: Vec<usize>,
    pub characters: Vec<RawCharacter>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCharacter {
    pub label: String,
    pub values: Vec<String>,
}

/// Binds an abstract table to a group by naming one element per column.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTable {
    pub name: String,
    pub group: String,
    pub chartable: String,
    pub class_words: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTwist {
    pub name: String,
    pub cells: Vec<RawTwistCell>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTwistCell {
    pub cell: String,
    pub extension: String,
    pub table: String,
    /// Central character `z ↦ ζ_n^xi`.
    pub xi: i64,
    pub twisted: Option<Vec<String>>,
}

/// A vertex of the fundamental domain, given by the quadratic form it represents.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVertex {
    pub name: String,
    pub form: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCell {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub vertices: Vec<String>,
    pub stabilizer: String,
    pub table: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBoundary {
    pub cell: String,
    pub face: String,
    pub sign: i64,
    #[serde(default = "identity_word")]
    pub conjugator: String,
    pub id: Option<String>,
}

fn identity_word() -> String {
    "1".to_string()
}

/// Conjugation embedding between two tabled groups, for standalone matrices.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEmbedding {
    pub name: String,
    pub source_table: String,
    pub target_table: String,
    #[serde(default = "identity_word")]
    pub conjugator: String,
}

/// Expected class of the image of one element along an incidence.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFusionCheck {
    pub incidence: String,
    pub mode: Mode,
    pub element: String,
    pub class: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoefficients {
    pub mode: Mode,
    pub twist: Option<String>,
}
