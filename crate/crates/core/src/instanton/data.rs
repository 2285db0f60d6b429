//! Embedded dataset files and their manifest. Every file's sha256 is pinned
//! in `data/manifest.toml` and verified when the datasets are first loaded.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::exact::{parse_sparse, ExactError, MultiPoly, Rational, VarTable};

use super::InstantonError;

macro_rules! data_file {
    ($rel:literal) => {
        ($rel, include_str!(concat!("../../data/", $rel)))
    };
}

pub(super) const MANIFEST_TEXT: &str = include_str!("../../data/manifest.toml");

const FILES: &[(&str, &str)] = &[
    data_file!("n0/Q.poly"),
    data_file!("n0/q1.poly"),
    data_file!("n0/q2.poly"),
    data_file!("n0/q3.poly"),
    data_file!("n0/b1.poly"),
    data_file!("n0/u1.poly"),
    data_file!("n0/gcanon.poly"),
    data_file!("n0/uplus1.poly"),
    data_file!("n0/gpm.poly"),
    data_file!("n1/Q.poly"),
    data_file!("n1/q1.poly"),
    data_file!("n1/q2.poly"),
    data_file!("n1/q3.poly"),
    data_file!("n1/b1.poly"),
    data_file!("n1/u1.poly"),
    data_file!("n1/gcanon.poly"),
    data_file!("n2/Q.poly"),
    data_file!("n2/q1.poly"),
    data_file!("n2/q2.poly"),
    data_file!("n2/q3.poly"),
    data_file!("n2/b1.poly"),
    data_file!("n2/u1.poly"),
    data_file!("n2/gcanon.poly"),
];

#[derive(Debug, Deserialize)]
pub(super) struct Manifest {
    pub version: u32,
    pub base_w: String,
    pub datasets: BTreeMap<String, DatasetEntry>,
    pub gpm: GpmEntry,
    pub checksums: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
pub(super) struct DatasetEntry {
    pub degree: u32,
    pub k: String,
    pub c: String,
    pub sign_pattern: [i8; 3],
    pub u_partial: bool,
    pub u1_terms: usize,
}

#[derive(Debug, Deserialize)]
pub(super) struct GpmEntry {
    pub kappa: String,
    pub u_plus_degree: u32,
}

pub(super) fn manifest() -> Result<Manifest, InstantonError> {
    let m: Manifest = toml::from_str(MANIFEST_TEXT)
        .map_err(|e| InstantonError::Corrupt(format!("manifest: {e}")))?;
    if m.version != 1 {
        return Err(InstantonError::Corrupt(format!(
            "unsupported manifest version {}",
            m.version
        )));
    }
    Ok(m)
}

pub(super) fn parse_manifest_rational(text: &str) -> Result<Rational, InstantonError> {
    Rational::from_str(text)
        .map_err(|e| InstantonError::Corrupt(format!("bad rational `{text}` in manifest: {e}")))
}

fn file_text(rel: &str) -> Result<&'static str, InstantonError> {
    FILES
        .iter()
        .find(|(name, _)| *name == rel)
        .map(|(_, text)| *text)
        .ok_or_else(|| InstantonError::Corrupt(format!("no embedded file `{rel}`")))
}

/// Load one file's blocks after verifying its pinned checksum.
pub(super) fn load_blocks(
    manifest: &Manifest,
    rel: &str,
    table: &VarTable,
) -> Result<Vec<MultiPoly>, InstantonError> {
    let text = file_text(rel)?;
    let expected = manifest
        .checksums
        .get(rel)
        .ok_or_else(|| InstantonError::Corrupt(format!("no checksum pinned for `{rel}`")))?;
    let digest = Sha256::digest(text.as_bytes());
    let actual = hex_of(&digest);
    if &actual != expected {
        return Err(InstantonError::Corrupt(format!(
            "checksum mismatch for `{rel}`: manifest {expected}, file {actual}"
        )));
    }
    parse_sparse(text, table).map_err(|e: ExactError| {
        InstantonError::Corrupt(format!("while parsing `{rel}`: {e}"))
    })
}

/// As `load_blocks` but insisting on exactly one block.
pub(super) fn load_single(
    manifest: &Manifest,
    rel: &str,
    table: &VarTable,
) -> Result<MultiPoly, InstantonError> {
    let blocks = load_blocks(manifest, rel, table)?;
    if blocks.len() != 1 {
        return Err(InstantonError::Corrupt(format!(
            "`{rel}` holds {} blocks, expected 1",
            blocks.len()
        )));
    }
    Ok(blocks.into_iter().next().unwrap())
}

fn hex_of(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
