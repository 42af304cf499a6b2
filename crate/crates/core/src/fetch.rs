//! Download client for the SuiteSparse Matrix Collection.
//!
//! Archives are `.tar.gz` files containing `<name>/<name>.mtx`. Downloads
//! land in a local cache (written via a temp file and an atomic rename, so
//! concurrent processes cannot observe a partial archive) and warm-cache
//! calls never touch the network.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use thiserror::Error;

use crate::graph::Graph;
use crate::parse::{parse_matrix_market, ParseError};

/// Environment variable overriding the default cache directory.
pub const CACHE_DIR_ENV: &str = "HEXFR_CACHE_DIR";
/// Environment variable overriding the download URL template.
pub const URL_TEMPLATE_ENV: &str = "HEXFR_SUITESPARSE_URL";

const DEFAULT_URL_TEMPLATE: &str = "https://sparse.tamu.edu/MM/{group}/{name}.tar.gz";

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("network error fetching {url}: {source}")]
    Network {
        url: String,
        #[source]
        source: Box<ureq::Error>,
    },
    #[error("unknown matrix {group}/{name}")]
    UnknownMatrix { group: String, name: String },
    #[error("unexpected HTTP status {status} from {url}")]
    HttpStatus { url: String, status: u16 },
    #[error("downloaded {got} bytes but the server declared {expected}")]
    SizeMismatch { expected: u64, got: u64 },
    #[error("corrupt archive: {0}")]
    CorruptArchive(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl FetchError {
    /// Whether retrying the same request could succeed.
    pub fn is_retryable(&self) -> bool {
        match self {
            FetchError::Network { .. } => true,
            FetchError::HttpStatus { status, .. } => *status >= 500,
            _ => false,
        }
    }
}

/// Cache location and URL template (`{group}` / `{name}` placeholders).
#[derive(Clone, Debug)]
pub struct FetchConfig {
    pub cache_dir: PathBuf,
    pub url_template: String,
}

impl FetchConfig {
    /// Cache under `dir`, with the URL template taken from the environment
    /// when set.
    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Self {
        let url_template = std::env::var(URL_TEMPLATE_ENV)
            .unwrap_or_else(|_| DEFAULT_URL_TEMPLATE.to_string());
        FetchConfig { cache_dir: dir.into(), url_template }
    }

    /// Cache directory from [`CACHE_DIR_ENV`], falling back to
    /// `~/.cache/hexfr` (or `./.hexfr-cache` without a home directory).
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| {
            std::env::var_os("HOME")
                .map(|home| PathBuf::from(home).join(".cache").join("hexfr"))
                .unwrap_or_else(|| PathBuf::from(".hexfr-cache"))
        });
        Self::with_cache_dir(dir)
    }

    fn url_for(&self, group: &str, name: &str) -> String {
        self.url_template.replace("{group}", group).replace("{name}", name)
    }

    /// Where the archive for `group/name` lives in the cache.
    pub fn archive_path(&self, group: &str, name: &str) -> PathBuf {
        self.cache_dir.join(group).join(format!("{name}.tar.gz"))
    }
}

/// Fetches (or reuses from cache) the named matrix and parses it as an
/// undirected weighted graph.
pub fn fetch_suitesparse(group: &str, name: &str, cfg: &FetchConfig) -> Result<Graph, FetchError> {
    let path = cfg.archive_path(group, name);
    if !path.exists() {
        download(&cfg.url_for(group, name), &path, group, name)?;
    }
    let mtx = extract_mtx(&path, name)?;
    Ok(parse_matrix_market(&mtx)?)
}

fn download(url: &str, dest: &Path, group: &str, name: &str) -> Result<(), FetchError> {
    if let Some(parent) = dest.parent() {
        fs::create_dir_all(parent)?;
    }
    let response = match ureq::get(url).call() {
        Ok(r) => r,
        Err(ureq::Error::Status(404, _)) => {
            return Err(FetchError::UnknownMatrix { group: group.into(), name: name.into() })
        }
        Err(ureq::Error::Status(status, _)) => {
            return Err(FetchError::HttpStatus { url: url.into(), status })
        }
        Err(e) => return Err(FetchError::Network { url: url.into(), source: Box::new(e) }),
    };
    let declared: Option<u64> =
        response.header("Content-Length").and_then(|v| v.parse().ok());

    let mut body = Vec::new();
    response
        .into_reader()
        .read_to_end(&mut body)
        .map_err(|e| FetchError::Network { url: url.into(), source: Box::new(e.into()) })?;
    if let Some(expected) = declared {
        if expected != body.len() as u64 {
            return Err(FetchError::SizeMismatch { expected, got: body.len() as u64 });
        }
    }

    // Write-and-rename keeps concurrent readers from seeing a partial file.
    let tmp = dest.with_extension(format!("part-{}", std::process::id()));
    fs::write(&tmp, &body)?;
    fs::rename(&tmp, dest)?;
    Ok(())
}

fn extract_mtx(archive: &Path, name: &str) -> Result<String, FetchError> {
    let file = fs::File::open(archive)?;
    let mut tar = tar::Archive::new(GzDecoder::new(file));
    let wanted = format!("{name}.mtx");
    let entries = tar
        .entries()
        .map_err(|e| FetchError::CorruptArchive(format!("{}: {e}", archive.display())))?;
    for entry in entries {
        let mut entry =
            entry.map_err(|e| FetchError::CorruptArchive(format!("{}: {e}", archive.display())))?;
        let is_match = entry
            .path()
            .ok()
            .and_then(|p| p.file_name().map(|f| f == wanted.as_str()))
            .unwrap_or(false);
        if is_match {
            let mut text = String::new();
            entry
                .read_to_string(&mut text)
                .map_err(|e| FetchError::CorruptArchive(format!("reading {wanted}: {e}")))?;
            return Ok(text);
        }
    }
    Err(FetchError::CorruptArchive(format!("{wanted} not found in {}", archive.display())))
}
