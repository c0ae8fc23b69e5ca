use alloc::string::{String, ToString};
use core::fmt;

/// Failure category shared by every layer of the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    BadInput,
    Network,
    UpstreamStatus,
    ParseFailure,
    NotFound,
    RateLimited,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::BadInput => "bad input",
            ErrorKind::Network => "network error",
            ErrorKind::UpstreamStatus => "upstream status",
            ErrorKind::ParseFailure => "parse failure",
            ErrorKind::NotFound => "not found",
            ErrorKind::RateLimited => "rate limited",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToolkitError {
    pub kind: ErrorKind,
    pub detail: String,
    pub url: Option<String>,
    /// HTTP status for `UpstreamStatus` (and rate-limit) failures.
    pub status: Option<u16>,
}

impl ToolkitError {
    pub fn new(kind: ErrorKind, detail: impl Into<String>) -> Self {
        Self {
            kind,
            detail: detail.into(),
            url: None,
            status: None,
        }
    }

    pub fn bad_input(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::BadInput, detail)
    }

    pub fn parse_failure(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::ParseFailure, detail)
    }

    pub fn not_found(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::NotFound, detail)
    }

    pub fn network(detail: impl Into<String>) -> Self {
        Self::new(ErrorKind::Network, detail)
    }

    /// Non-2xx answer from an upstream; the status code is always part of `detail`.
    pub fn upstream_status(status: u16) -> Self {
        let mut err = Self::new(ErrorKind::UpstreamStatus, alloc::format!("HTTP {status}"));
        err.status = Some(status);
        err
    }

    pub fn rate_limited(status: u16) -> Self {
        let mut err = Self::new(
            ErrorKind::RateLimited,
            alloc::format!("HTTP {status} after retry"),
        );
        err.status = Some(status);
        err
    }

    pub fn with_url(mut self, url: impl ToString) -> Self {
        self.url = Some(url.to_string());
        self
    }

    pub fn is(&self, kind: ErrorKind) -> bool {
        self.kind == kind
    }
}

impl fmt::Display for ToolkitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)?;
        if let Some(url) = &self.url {
            write!(f, " ({url})")?;
        }
        Ok(())
    }
}

impl core::error::Error for ToolkitError {}

pub type Result<T, E = ToolkitError> = core::result::Result<T, E>;
