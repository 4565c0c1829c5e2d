use monolith::construct::{ConstructError, Recipe};
use monolith::group::{GroupFile, DEFAULT_MAX_ORDER};
use monolith::{Elem, FamilySpec, FiniteGroup, GroupError, Permutation};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {reason}")]
    Malformed { path: String, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("no element `{token}` in a group of order {order}")]
    UnknownElement { token: String, order: usize },
}

/// A replayable construction, as written by `construct sample --out-dir`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub recipe: Recipe,
    /// Content hash of the constructed group.
    pub hash: String,
}

fn read(path: &str) -> Result<String, ResolveError> {
    std::fs::read_to_string(path).map_err(|source| ResolveError::Io {
        path: path.to_string(),
        source,
    })
}

/// Resolves a group spec: `replay:<file>`, a permutation list such as
/// `(1 2 3);(1 2)`, a JSON table file, or a named family.
pub fn resolve_group(spec: &str) -> Result<FiniteGroup, ResolveError> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("replay:") {
        return replay_file(path).map(|(g, _)| g);
    }
    if spec.starts_with('(') {
        let gens = Permutation::parse_generators(spec)?;
        return Ok(FiniteGroup::from_permutation_generators(&gens, DEFAULT_MAX_ORDER)?);
    }
    if spec.ends_with(".json") || Path::new(spec).is_file() {
        let file = GroupFile::from_json(&read(spec)?)?;
        return Ok(file.load()?.group);
    }
    Ok(FamilySpec::parse(spec)?.build()?)
}

/// Replays a provenance file and checks the stored hash.
pub fn replay_file(path: &str) -> Result<(FiniteGroup, ProvenanceFile), ResolveError> {
    let file: ProvenanceFile = serde_json::from_str(&read(path)?).map_err(|e| ResolveError::Malformed {
        path: path.to_string(),
        reason: e.to_string(),
    })?;
    let group = file.recipe.replay(&|spec: &str| {
        resolve_group(spec).map_err(|e| ConstructError::Unresolved {
            spec: spec.to_string(),
            reason: e.to_string(),
        })
    })?;
    let found = group.content_hash();
    if found != file.hash {
        return Err(ConstructError::HashMismatch {
            spec: path.to_string(),
            expected: file.hash.clone(),
            found,
        }
        .into());
    }
    Ok((group, file))
}

pub fn resolve_element(g: &FiniteGroup, token: &str) -> Result<Elem, ResolveError> {
    g.resolve(token).ok_or_else(|| ResolveError::UnknownElement {
        token: token.to_string(),
        order: g.order(),
    })
}
