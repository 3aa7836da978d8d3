//! Downloads dataset archives and extracts the files the manifest lists.

use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::dataset::DatasetEntry;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FetchedFile {
    pub path: PathBuf,
    pub sha256: String,
    /// `None` when the manifest pins no digest.
    pub verified: Option<bool>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn download(url: &str) -> Result<Vec<u8>> {
    let fail = |message: String| Error::Download {
        url: url.to_owned(),
        message,
    };
    let response = reqwest::blocking::get(url).map_err(|e| fail(e.to_string()))?;
    let status = response.status();
    if !status.is_success() {
        return Err(fail(format!("HTTP {status}")));
    }
    Ok(response.bytes().map_err(|e| fail(e.to_string()))?.to_vec())
}

/// Extracts the manifest's files for `entry` from a zip archive (searching
/// nested archives one level deep) into `dir/<entry.name>/`, checking pinned
/// digests.
pub fn extract(entry: &DatasetEntry, archive: &[u8], dir: &Path) -> Result<Vec<FetchedFile>> {
    let target_dir = dir.join(&entry.name);
    std::fs::create_dir_all(&target_dir).map_err(|e| Error::io(&target_dir, e))?;
    let members = members(archive, &target_dir)?;
    let mut out = Vec::with_capacity(entry.files.len());
    for f in &entry.files {
        let bytes = members
            .iter()
            .find(|(name, _)| base_name(name) == f.name)
            .map(|(_, b)| b)
            .ok_or_else(|| Error::Malformed {
                file: target_dir.clone(),
                message: format!("archive has no member {}", f.name),
            })?;
        let path = target_dir.join(&f.name);
        let digest = sha256_hex(bytes);
        let verified = (!f.sha256.is_empty()).then(|| f.sha256.eq_ignore_ascii_case(&digest));
        if verified == Some(false) {
            return Err(Error::Checksum {
                file: path,
                expected: f.sha256.clone(),
                actual: digest,
            });
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        out.push(FetchedFile {
            path,
            sha256: digest,
            verified,
        });
    }
    Ok(out)
}

pub fn fetch_dataset(entry: &DatasetEntry, dir: &Path) -> Result<Vec<FetchedFile>> {
    let url = entry
        .url
        .as_deref()
        .ok_or_else(|| Error::Config(format!("dataset {} has no url", entry.name)))?;
    extract(entry, &download(url)?, dir)
}

fn base_name(member: &str) -> &str {
    member.rsplit('/').next().unwrap_or(member)
}

/// All file members, with nested `.zip` members expanded.
fn members(archive: &[u8], ctx: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let bad = |e: zip::result::ZipError| Error::Malformed {
        file: ctx.to_owned(),
        message: e.to_string(),
    };
    let mut zip = zip::ZipArchive::new(Cursor::new(archive)).map_err(bad)?;
    let mut out = Vec::new();
    for i in 0..zip.len() {
        let mut file = zip.by_index(i).map_err(bad)?;
        if file.is_dir() {
            continue;
        }
        let name = file.name().to_owned();
        let mut bytes = Vec::with_capacity(file.size() as usize);
        file.read_to_end(&mut bytes).map_err(|e| Error::io(ctx, e))?;
        if name.ends_with(".zip") {
            out.extend(members(&bytes, ctx)?);
        } else {
            out.push((name, bytes));
        }
    }
    Ok(out)
}
