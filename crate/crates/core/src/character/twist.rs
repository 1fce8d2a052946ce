use std::sync::Arc;

use super::{BoundTable, CharError, ClassFunction};
use crate::cyclotomic::CycNumber;
use crate::group::CentralExtension;

/// A twist on one stabilizer: the covering group, its character table, and
/// the central character `ξ(z) = ζ_n^xi` singling out the twisted characters.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub name: String,
    pub extension: Arc<CentralExtension>,
    pub xi: i64,
    pub cover_table: Arc<BoundTable>,
    twisted_rows: Vec<usize>,
}

impl TwistData {
    /// Validates the data and selects the rows with `χ(z) = ξ(z) χ(1)`. When
    /// `declared` is given it must agree with that selection.
    pub fn new(
        name: &str,
        extension: Arc<CentralExtension>,
        xi: i64,
        cover_table: Arc<BoundTable>,
        declared: Option<&[usize]>,
    ) -> Result<Self, CharError> {
        let invalid = |reason: String| CharError::InvalidTwist {
            name: name.to_string(),
            reason,
        };
        if !Arc::ptr_eq(&cover_table.group, extension.total()) {
            return Err(invalid(format!(
                "table {} is not bound to the cover {}",
                cover_table.name,
                extension.name()
            )));
        }
        let n = extension.n();
        let xi_z = CycNumber::root_of_unity(n, xi).map_err(|e| invalid(e.to_string()))?;
        let z = extension.central();
        let twisted_rows: Vec<usize> = (0..cover_table.len())
            .filter(|&r| *cover_table.value_at(r, z) == &xi_z * cover_table.value_at(r, 0))
            .collect();
        if let Some(d) = declared {
            if d != twisted_rows.as_slice() {
                return Err(invalid(format!(
                    "declared twisted rows {d:?} but the central character selects {twisted_rows:?}"
                )));
            }
        }
        let twist = TwistData {
            name: name.to_string(),
            extension,
            xi,
            cover_table,
            twisted_rows,
        };
        let faithful = (1..n as i64).all(|k| (xi * k).rem_euclid(n as i64) != 0);
        if faithful && twist.twisted_rows.len() != twist.alpha_regular_classes().len() {
            return Err(invalid(format!(
                "{} twisted characters but {} regular classes",
                twist.twisted_rows.len(),
                twist.alpha_regular_classes().len()
            )));
        }
        Ok(twist)
    }

    pub fn twisted_rows(&self) -> &[usize] {
        &self.twisted_rows
    }

    /// Base classes whose section lift is not conjugate to any other lift of
    /// the same element. These are exactly the classes on which the cocycle is
    /// symmetric against the whole centralizer.
    pub fn alpha_regular_classes(&self) -> Vec<usize> {
        let ext = &self.extension;
        let total = ext.total();
        ext.base()
            .classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let h = c.representative;
                let own = total.class_of(ext.section(h));
                (1..ext.n()).all(|a| total.class_of(ext.element(h, a)) != own)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Twisted characters evaluated on the section lifts of base class
    /// representatives, one value per base class in class order.
    pub fn rectified_characters(&self) -> Vec<ClassFunction> {
        let ext = &self.extension;
        self.twisted_rows
            .iter()
            .map(|&r| ClassFunction {
                domain: format!("rectified:{}", self.name),
                values: ext
                    .base()
                    .classes()
                    .iter()
                    .map(|c| self.cover_table.value_at(r, ext.section(c.representative)).clone())
                    .collect(),
            })
            .collect()
    }
}
