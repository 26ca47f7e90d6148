//! Bundled examples: polynomials with a hand-derived sums-of-squares pair and
//! the unitary they should reconstruct.

use crate::detrep::{matrix_from_rows, AglerPair, ComplexRows};
use crate::error::{Error, Result};
use crate::poly2::Poly2;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const BUNDLED: &str = include_str!("../data/agler_pairs.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub name: String,
    pub f: Poly2,
    #[serde(rename = "P")]
    pub p: Vec<Poly2>,
    #[serde(rename = "Q")]
    pub q: Vec<Poly2>,
    #[serde(rename = "U_expected", default, skip_serializing_if = "Option::is_none")]
    pub u_expected: Option<ComplexRows>,
}

impl DatasetEntry {
    pub fn pair(&self) -> AglerPair {
        AglerPair::new(self.p.clone(), self.q.clone())
    }

    pub fn expected_unitary(&self) -> Result<Option<DMatrix<Complex64>>> {
        self.u_expected.as_ref().map(matrix_from_rows).transpose()
    }
}

#[derive(Deserialize)]
struct Dataset {
    entries: Vec<DatasetEntry>,
}

pub fn parse_dataset(json: &str) -> Result<Vec<DatasetEntry>> {
    let d: Dataset = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(d.entries)
}

pub fn bundled_dataset() -> Vec<DatasetEntry> {
    parse_dataset(BUNDLED).expect("bundled dataset parses")
}

pub fn dataset_entry(name: &str) -> Result<DatasetEntry> {
    bundled_dataset().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownDatasetEntry(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_entries_load() {
        let all = bundled_dataset();
        assert!(all.len() >= 5);
        let e = dataset_entry("f_a_05").unwrap();
        assert_eq!(e.f.bidegree(), (1, 1));
        assert!(e.expected_unitary().unwrap().is_some());
        assert!(matches!(dataset_entry("nope"), Err(Error::UnknownDatasetEntry(_))));
    }
}
