//! Representation file format: a versioned JSON document with the
//! presentation block, field tag, row-major generator matrices (complex
//! entries as `[re, im]` pairs), the optional invariant form, and
//! provenance. Floats serialize with shortest round-trip formatting, so
//! save/load is exact and files diff cleanly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anosov_core::matrix::Matrix;
use anosov_core::rep::Representation;
use anosov_core::symplectic::SymplecticStructure;
use anosov_core::words::{GroupKind, GroupPresentation};
use anosov_core::Cx;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub schema: u32,
    pub presentation: PresentationBlock,
    pub field: FieldTag,
    pub dim: usize,
    pub generators: Vec<GeneratorBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Entry>>,
    pub provenance: Provenance,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PresentationBlock {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

impl std::fmt::Display for FieldTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldTag::Real => f.write_str("real"),
            FieldTag::Complex => f.write_str("complex"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GeneratorBlock {
    pub name: String,
    /// Row-major entries, length dim * dim.
    pub matrix: Vec<Entry>,
}

/// A matrix entry: a bare number over the reals, a `[re, im]` pair over the
/// complex field.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A loaded, validated representation over either base field.
pub enum AnyRepresentation {
    Real(Representation<f64>),
    Complex(Representation<Cx>),
}

impl AnyRepresentation {
    pub fn presentation(&self) -> &GroupPresentation {
        match self {
            AnyRepresentation::Real(r) => r.presentation(),
            AnyRepresentation::Complex(r) => r.presentation(),
        }
    }

    pub fn has_form(&self) -> bool {
        match self {
            AnyRepresentation::Real(r) => r.structure().is_some(),
            AnyRepresentation::Complex(r) => r.structure().is_some(),
        }
    }
}

fn presentation_block(p: &GroupPresentation) -> PresentationBlock {
    match p.kind() {
        GroupKind::Free { rank } => PresentationBlock {
            kind: "free".into(),
            rank: Some(*rank),
            genus: None,
            generators: p.generator_names(),
        },
        GroupKind::Surface { genus } => PresentationBlock {
            kind: "surface".into(),
            rank: None,
            genus: Some(*genus),
            generators: p.generator_names(),
        },
    }
}

fn parse_presentation(block: &PresentationBlock) -> Result<GroupPresentation, CliError> {
    let p = match block.kind.as_str() {
        "free" => {
            let rank = block
                .rank
                .ok_or_else(|| CliError::Format("free presentation needs a rank".into()))?;
            GroupPresentation::free(rank)?
        }
        "surface" => {
            let genus = block
                .genus
                .ok_or_else(|| CliError::Format("surface presentation needs a genus".into()))?;
            GroupPresentation::surface(genus)?
        }
        other => {
            return Err(CliError::Format(format!(
                "unknown presentation kind `{other}`"
            )))
        }
    };
    if block.generators.len() != p.generator_count() {
        return Err(CliError::Format(format!(
            "{} generator names for {} generators",
            block.generators.len(),
            p.generator_count()
        )));
    }
    Ok(p)
}

fn real_entries(m: &Matrix<f64>) -> Vec<Entry> {
    m.data().iter().map(|&x| Entry::Real(x)).collect()
}

fn complex_entries(m: &Matrix<Cx>) -> Vec<Entry> {
    m.data()
        .iter()
        .map(|z| Entry::Complex([z.re, z.im]))
        .collect()
}

fn parse_real_matrix(entries: &[Entry], dim: usize) -> Result<Matrix<f64>, CliError> {
    let data: Result<Vec<f64>, CliError> = entries
        .iter()
        .map(|e| match e {
            Entry::Real(x) => Ok(*x),
            Entry::Complex(_) => Err(CliError::Format(
                "complex entry in a real-field file".into(),
            )),
        })
        .collect();
    Matrix::from_row_major(dim, dim, data?).map_err(CliError::from)
}

fn parse_complex_matrix(entries: &[Entry], dim: usize) -> Result<Matrix<Cx>, CliError> {
    let data: Vec<Cx> = entries
        .iter()
        .map(|e| match e {
            Entry::Real(x) => Complex64::new(*x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(*re, *im),
        })
        .collect();
    Matrix::from_row_major(dim, dim, data).map_err(CliError::from)
}

/// Builds the file document from a validated representation.
pub fn to_file(rep: &AnyRepresentation, provenance: Provenance) -> RepresentationFile {
    let presentation = presentation_block(rep.presentation());
    let names = rep.presentation().generator_names();
    match rep {
        AnyRepresentation::Real(r) => RepresentationFile {
            schema: SCHEMA_VERSION,
            presentation,
            field: FieldTag::Real,
            dim: r.dim(),
            generators: names
                .iter()
                .zip(r.generator_images())
                .map(|(name, m)| GeneratorBlock {
                    name: name.clone(),
                    matrix: real_entries(m),
                })
                .collect(),
            form: r.structure().map(|s| real_entries(s.form_matrix())),
            provenance,
        },
        AnyRepresentation::Complex(r) => RepresentationFile {
            schema: SCHEMA_VERSION,
            presentation,
            field: FieldTag::Complex,
            dim: r.dim(),
            generators: names
                .iter()
                .zip(r.generator_images())
                .map(|(name, m)| GeneratorBlock {
                    name: name.clone(),
                    matrix: complex_entries(m),
                })
                .collect(),
            form: r.structure().map(|s| complex_entries(s.form_matrix())),
            provenance,
        },
    }
}

/// Parses and validates a file document into a representation; the core
/// validation invariants run on load.
pub fn from_file(doc: &RepresentationFile) -> Result<AnyRepresentation, CliError> {
    if doc.schema != SCHEMA_VERSION {
        return Err(CliError::Format(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            doc.schema
        )));
    }
    let presentation = parse_presentation(&doc.presentation)?;
    if doc.generators.len() != presentation.generator_count() {
        return Err(CliError::Format(format!(
            "{} generator matrices for {} generators",
            doc.generators.len(),
            presentation.generator_count()
        )));
    }
    match doc.field {
        FieldTag::Real => {
            let images: Result<Vec<Matrix<f64>>, CliError> = doc
                .generators
                .iter()
                .map(|g| parse_real_matrix(&g.matrix, doc.dim))
                .collect();
            let structure = match &doc.form {
                Some(entries) => Some(SymplecticStructure::new(parse_real_matrix(
                    entries, doc.dim,
                )?)?),
                None => None,
            };
            Ok(AnyRepresentation::Real(Representation::new(
                presentation,
                images?,
                structure,
            )?))
        }
        FieldTag::Complex => {
            let images: Result<Vec<Matrix<Cx>>, CliError> = doc
                .generators
                .iter()
                .map(|g| parse_complex_matrix(&g.matrix, doc.dim))
                .collect();
            let structure = match &doc.form {
                Some(entries) => Some(SymplecticStructure::new(parse_complex_matrix(
                    entries, doc.dim,
                )?)?),
                None => None,
            };
            Ok(AnyRepresentation::Complex(Representation::new(
                presentation,
                images?,
                structure,
            )?))
        }
    }
}

pub fn save(path: &Path, doc: &RepresentationFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Format(format!("serialization failed: {e}")))?;
    text.push('\n');
    crate::report::write_atomic(path, text.as_bytes())
}

pub fn load(path: &Path) -> Result<(RepresentationFile, AnyRepresentation), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let doc: RepresentationFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Format(format!("cannot parse {}: {e}", path.display())))?;
    let rep = from_file(&doc)?;
    Ok((doc, rep))
}
