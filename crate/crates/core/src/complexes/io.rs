use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::complex::Complex;
use crate::error::Result;

/// On-disk form of a complex.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<BTreeMap<String, u32>>,
}

impl From<&Complex> for ComplexFile {
    fn from(c: &Complex) -> Self {
        ComplexFile {
            vertices: c.names().to_vec(),
            facets: c
                .facets()
                .iter()
                .filter(|f| !f.is_empty())
                .map(|f| c.face_names(f))
                .collect(),
            grading: c.named_grading(),
        }
    }
}

impl ComplexFile {
    pub fn to_complex(&self) -> Result<Complex> {
        if self.vertices.is_empty() {
            return Ok(Complex::empty());
        }
        Complex::from_named(&self.vertices, &self.facets, self.grading.as_ref())
    }
}

pub fn to_json(c: &Complex) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ComplexFile::from(c))?)
}

pub fn from_json(s: &str) -> Result<Complex> {
    serde_json::from_str::<ComplexFile>(s)?.to_complex()
}

pub fn read_complex(path: &Path) -> Result<Complex> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_complex(path: &Path, c: &Complex) -> Result<()> {
    std::fs::write(path, to_json(c)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::ops::{barycentric_subdivision, boundary_simplex};

    #[test]
    fn json_keeps_grading() {
        let b = barycentric_subdivision(&boundary_simplex(2).unwrap());
        let back = from_json(&to_json(&b).unwrap()).unwrap();
        assert_eq!(back, b);
        assert!(back.is_graded());
    }

    #[test]
    fn json_rejects_unknown_vertex() {
        let s = r#"{"vertices":["a"],"facets":[["a","b"]]}"#;
        assert!(from_json(s).is_err());
    }
}
