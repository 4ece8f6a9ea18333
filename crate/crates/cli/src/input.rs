//! Reading documents from disk.

use std::path::{Path, PathBuf};

use stacklab::formats::{self, Document, Kind};
use stacklab::gog::{parse_gog, GraphOfGroups};
use stacklab::groupoid::FiniteGroupoid;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: stacklab::Error,
    },
    #[error(transparent)]
    Lib(#[from] stacklab::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_dsl(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "gog")
}

/// Parses a document; error positions are reported against `path`.
pub fn try_load(path: &Path) -> CliResult<stacklab::Result<Document>> {
    let text = read(path)?;
    Ok(if is_dsl(path) {
        parse_gog(&text).map(Document::Gog)
    } else {
        formats::parse(&text, None)
    })
}

pub fn load(path: &Path) -> CliResult<Document> {
    try_load(path)?.map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn wrong_kind(path: &Path, found: Kind, wanted: &str) -> CliError {
    CliError::Usage(format!(
        "{}: expected {wanted}, found a {} document",
        path.display(),
        found.as_str()
    ))
}

/// A groupoid, reading a group as its classifying groupoid.
pub fn groupoid(path: &Path) -> CliResult<FiniteGroupoid> {
    match load(path)? {
        Document::Groupoid(g) => Ok(g),
        Document::Group(g) => Ok(FiniteGroupoid::classifying(&g)),
        d => Err(wrong_kind(path, d.kind(), "a groupoid or group")),
    }
}

pub fn gog(path: &Path) -> CliResult<GraphOfGroups> {
    match load(path)? {
        Document::Gog(g) => Ok(g),
        d => Err(wrong_kind(path, d.kind(), "a graph of groups")),
    }
}

pub fn functor(path: &Path) -> CliResult<stacklab::groupoid::GroupoidFunctor> {
    match load(path)? {
        Document::Functor(f) => Ok(f),
        d => Err(wrong_kind(path, d.kind(), "a functor")),
    }
}

pub fn hom(path: &Path) -> CliResult<stacklab::group::GroupHom> {
    match load(path)? {
        Document::Hom(h) => Ok(h),
        d => Err(wrong_kind(path, d.kind(), "a homomorphism")),
    }
}

pub fn action(path: &Path) -> CliResult<formats::ActionDoc> {
    match load(path)? {
        Document::Action(a) => Ok(a),
        d => Err(wrong_kind(path, d.kind(), "an action")),
    }
}

pub fn cover(path: &Path) -> CliResult<formats::CoverDoc> {
    match load(path)? {
        Document::Cover(c) => Ok(c),
        d => Err(wrong_kind(path, d.kind(), "a cover")),
    }
}
