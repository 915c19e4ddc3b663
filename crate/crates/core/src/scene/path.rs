use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("scene path is empty")]
    Empty,
    #[error("scene path {0:?} must start with '/'")]
    NotAbsolute(String),
    #[error("scene path {0:?} has an empty segment")]
    EmptySegment(String),
    #[error("scene path {0:?} has whitespace in a segment")]
    Whitespace(String),
}

/// Canonical slash-separated node address, e.g. `/robot/base/camera`.
///
/// Ordering is plain byte order on the canonical string, so a node sorts
/// before its descendants and siblings sort lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScenePath(String);

impl ScenePath {
    pub fn root() -> Self {
        ScenePath("/".to_owned())
    }

    pub fn parse(raw: &str) -> Result<Self, PathError> {
        if raw.is_empty() {
            return Err(PathError::Empty);
        }
        if !raw.starts_with('/') {
            return Err(PathError::NotAbsolute(raw.to_owned()));
        }
        if raw == "/" {
            return Ok(Self::root());
        }
        for segment in raw[1..].split('/') {
            if segment.is_empty() {
                return Err(PathError::EmptySegment(raw.to_owned()));
            }
            if segment.chars().any(char::is_whitespace) {
                return Err(PathError::Whitespace(raw.to_owned()));
            }
        }
        Ok(ScenePath(raw.to_owned()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0 == "/"
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('/').filter(|s| !s.is_empty())
    }

    pub fn depth(&self) -> usize {
        self.segments().count()
    }

    pub fn name(&self) -> &str {
        self.segments().last().unwrap_or("")
    }

    pub fn parent(&self) -> Option<ScenePath> {
        if self.is_root() {
            return None;
        }
        let cut = self.0.rfind('/').expect("canonical paths contain '/'");
        Some(if cut == 0 {
            Self::root()
        } else {
            ScenePath(self.0[..cut].to_owned())
        })
    }

    /// Appends one segment. The segment must be non-empty, slash-free and
    /// whitespace-free.
    pub fn join(&self, segment: &str) -> Result<ScenePath, PathError> {
        let raw = if self.is_root() {
            format!("/{segment}")
        } else {
            format!("{}/{segment}", self.0)
        };
        if segment.contains('/') {
            return Err(PathError::EmptySegment(raw));
        }
        ScenePath::parse(&raw)
    }

    /// True if `self` equals `other` or lies beneath it.
    pub fn is_within(&self, other: &ScenePath) -> bool {
        path_is_within(&self.0, &other.0)
    }

    /// Ancestors from the root down to, and including, this path.
    pub fn lineage(&self) -> Vec<ScenePath> {
        let mut out = vec![Self::root()];
        let mut acc = String::new();
        for seg in self.segments() {
            acc.push('/');
            acc.push_str(seg);
            out.push(ScenePath(acc.clone()));
        }
        out
    }
}

/// String form of [`ScenePath::is_within`], for keys that store raw paths.
pub fn path_is_within(path: &str, ancestor: &str) -> bool {
    if ancestor == "/" {
        return path.starts_with('/');
    }
    path == ancestor
        || (path.len() > ancestor.len()
            && path.starts_with(ancestor)
            && path.as_bytes()[ancestor.len()] == b'/')
}

impl fmt::Display for ScenePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ScenePath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenePath::parse(s)
    }
}

impl TryFrom<&str> for ScenePath {
    type Error = PathError;

    fn try_from(s: &str) -> Result<Self, Self::Error> {
        ScenePath::parse(s)
    }
}

impl AsRef<str> for ScenePath {
    fn as_ref(&self) -> &str {
        &self.0
    }
}
