//! HTTP access for every client: canonical request specs, record/replay
//! fixtures, a per-run response cache, and polite rate limiting.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wikitools_core::{ErrorKind, Result, ToolkitError};

/// Everything except RFC 3986 unreserved characters is escaped.
const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

pub const DEFAULT_USER_AGENT: &str =
    concat!("wikitools/", env!("CARGO_PKG_VERSION"), " (Wikipedia toolkit; set --user-agent to add contact details)");

pub fn encode_component(s: &str) -> String {
    utf8_percent_encode(s, COMPONENT).to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Get,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("GET")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Accept {
    Json,
    Xml,
}

impl Accept {
    pub fn mime(self) -> &'static str {
        match self {
            Accept::Json => "application/json",
            Accept::Xml => "application/xml",
        }
    }
}

/// A canonical GET request: path segments and query values are
/// percent-encoded and query keys are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HttpRequestSpec {
    method: Method,
    url: String,
    accept: Accept,
}

impl HttpRequestSpec {
    /// `endpoint` + encoded `segments` + sorted, encoded `params`.
    pub fn get<K, V>(endpoint: &str, segments: &[&str], params: impl IntoIterator<Item = (K, V)>) -> Result<Self>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut url = endpoint.trim_end_matches('/').to_string();
        for seg in segments {
            url.push('/');
            url.push_str(&encode_component(seg));
        }
        let mut pairs: Vec<(String, String)> = params
            .into_iter()
            .map(|(k, v)| (encode_component(k.as_ref()), encode_component(v.as_ref())))
            .collect();
        pairs.sort();
        if !pairs.is_empty() {
            url.push('?');
            let query: Vec<String> = pairs.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
            url.push_str(&query.join("&"));
        }
        validate_url(&url)?;
        Ok(Self {
            method: Method::Get,
            url,
            accept: Accept::Json,
        })
    }

    pub fn with_accept(mut self, accept: Accept) -> Self {
        self.accept = accept;
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn accept(&self) -> Accept {
        self.accept
    }

    pub fn host(&self) -> String {
        url::Url::parse(&self.url)
            .ok()
            .and_then(|u| u.host_str().map(str::to_string))
            .unwrap_or_default()
    }
}

/// HTTPS only; plain HTTP is accepted for loopback stub servers.
fn validate_url(url: &str) -> Result<()> {
    let parsed = url::Url::parse(url)
        .map_err(|e| ToolkitError::bad_input(format!("invalid URL {url:?}: {e}")))?;
    match parsed.scheme() {
        "https" => Ok(()),
        "http" if matches!(parsed.host_str(), Some("localhost" | "127.0.0.1" | "[::1]")) => Ok(()),
        other => Err(ToolkitError::bad_input(format!(
            "URL scheme {other:?} not allowed for {url}"
        ))),
    }
}

/// Hex SHA-256 of `METHOD + " " + url`.
pub fn canonical_key(spec: &HttpRequestSpec) -> String {
    let digest = Sha256::digest(format!("{} {}", spec.method, spec.url).as_bytes());
    hex::encode(digest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: String,
    pub body: String,
}

impl Response {
    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }
}

/// One recorded request/response pair, stored as `<key>.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEnvelope {
    pub key: String,
    pub method: String,
    pub url: String,
    pub status: u16,
    pub content_type: String,
    pub body: String,
}

impl FixtureEnvelope {
    pub fn new(spec: &HttpRequestSpec, response: &Response) -> Self {
        Self {
            key: canonical_key(spec),
            method: spec.method.to_string(),
            url: spec.url.clone(),
            status: response.status,
            content_type: response.content_type.clone(),
            body: response.body.clone(),
        }
    }

    pub fn response(&self) -> Response {
        Response {
            status: self.status,
            content_type: self.content_type.clone(),
            body: self.body.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FixtureMode {
    /// Serve recorded fixtures only; a miss is an error.
    Replay,
    /// Fetch live and persist each response.
    Record,
    /// Fetch live, persist nothing.
    #[default]
    Passthrough,
}

impl FromStr for FixtureMode {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "replay" => Ok(FixtureMode::Replay),
            "record" => Ok(FixtureMode::Record),
            "passthrough" => Ok(FixtureMode::Passthrough),
            other => Err(ToolkitError::bad_input(format!(
                "unknown fixture mode {other:?} (replay|record|passthrough)"
            ))),
        }
    }
}

impl fmt::Display for FixtureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureMode::Replay => "replay",
            FixtureMode::Record => "record",
            FixtureMode::Passthrough => "passthrough",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FixtureArchive {
    root: PathBuf,
}

impl FixtureArchive {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<FixtureEnvelope>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => {
                return Err(ToolkitError::bad_input(format!(
                    "cannot read fixture {}: {e}",
                    path.display()
                )))
            }
        };
        let envelope: FixtureEnvelope = serde_json::from_str(&text).map_err(|e| {
            ToolkitError::parse_failure(format!("corrupt fixture {}: {e}", path.display()))
        })?;
        if envelope.key != key {
            return Err(ToolkitError::parse_failure(format!(
                "fixture {} carries key {}",
                path.display(),
                envelope.key
            )));
        }
        Ok(Some(envelope))
    }

    pub fn store(&self, envelope: &FixtureEnvelope) -> Result<()> {
        let io_err = |e: std::io::Error| {
            ToolkitError::bad_input(format!("cannot write fixture under {}: {e}", self.root.display()))
        };
        fs::create_dir_all(&self.root).map_err(io_err)?;
        let mut text = serde_json::to_string_pretty(envelope).expect("envelope serializes");
        text.push('\n');
        let path = self.path_for(&envelope.key);
        let tmp = path.with_extension("json.tmp");
        let mut file = fs::File::create(&tmp).map_err(io_err)?;
        file.write_all(text.as_bytes()).map_err(io_err)?;
        drop(file);
        fs::rename(&tmp, &path).map_err(io_err)
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.root)
            .map(|dir| {
                dir.filter_map(|e| e.ok())
                    .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
                    .count()
            })
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Performs live HTTP requests. Transport failures are `Network` errors;
/// every HTTP status, success or not, comes back as a [`Response`].
pub trait Fetcher: Send + Sync {
    fn fetch(&self, spec: &HttpRequestSpec, user_agent: &str) -> Result<Response>;
}

pub struct HttpFetcher {
    client: reqwest::blocking::Client,
}

impl HttpFetcher {
    pub fn new() -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .map_err(|e| ToolkitError::network(format!("cannot build HTTP client: {e}")))?;
        Ok(Self { client })
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, spec: &HttpRequestSpec, user_agent: &str) -> Result<Response> {
        let response = self
            .client
            .get(spec.url())
            .header(reqwest::header::USER_AGENT, user_agent)
            .header(reqwest::header::ACCEPT, spec.accept().mime())
            .send()
            .map_err(|e| ToolkitError::network(e.to_string()).with_url(spec.url()))?;
        let status = response.status().as_u16();
        let content_type = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .unwrap_or("")
            .to_string();
        let body = response
            .text()
            .map_err(|e| ToolkitError::network(e.to_string()).with_url(spec.url()))?;
        Ok(Response {
            status,
            content_type,
            body,
        })
    }
}

/// Refuses every request. Used when live access must never happen.
#[derive(Debug, Default)]
pub struct DisabledFetcher;

impl Fetcher for DisabledFetcher {
    fn fetch(&self, spec: &HttpRequestSpec, _user_agent: &str) -> Result<Response> {
        Err(ToolkitError::network("networking is disabled").with_url(spec.url()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateLimitPolicy {
    pub max_requests_per_second: f64,
    pub max_concurrent_per_host: usize,
}

impl Default for RateLimitPolicy {
    fn default() -> Self {
        Self {
            max_requests_per_second: 5.0,
            max_concurrent_per_host: 2,
        }
    }
}

impl RateLimitPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_requests_per_second.is_finite() && self.max_requests_per_second > 0.0) {
            return Err(ToolkitError::bad_input("requests per second must be positive"));
        }
        if self.max_concurrent_per_host == 0 {
            return Err(ToolkitError::bad_input("concurrency per host must be positive"));
        }
        Ok(())
    }
}

/// Token bucket holding at most one second of requests.
struct TokenBucket {
    rate: f64,
    capacity: f64,
    state: Mutex<(f64, Instant)>,
}

impl TokenBucket {
    fn new(rate: f64) -> Self {
        let capacity = rate.max(1.0);
        Self {
            rate,
            capacity,
            state: Mutex::new((capacity, Instant::now())),
        }
    }

    fn acquire(&self) {
        loop {
            let wait = {
                let mut state = self.state.lock().expect("rate limiter poisoned");
                let now = Instant::now();
                let (tokens, last) = *state;
                let tokens = (tokens + now.duration_since(last).as_secs_f64() * self.rate).min(self.capacity);
                if tokens >= 1.0 {
                    *state = (tokens - 1.0, now);
                    return;
                }
                *state = (tokens, now);
                Duration::from_secs_f64((1.0 - tokens) / self.rate)
            };
            thread::sleep(wait);
        }
    }
}

/// Counting semaphore per host.
struct HostSlots {
    limit: usize,
    in_flight: Mutex<HashMap<String, usize>>,
    freed: Condvar,
}

struct SlotGuard<'a> {
    slots: &'a HostSlots,
    host: String,
}

impl HostSlots {
    fn new(limit: usize) -> Self {
        Self {
            limit,
            in_flight: Mutex::new(HashMap::new()),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self, host: &str) -> SlotGuard<'_> {
        let mut in_flight = self.in_flight.lock().expect("host slots poisoned");
        while in_flight.get(host).copied().unwrap_or(0) >= self.limit {
            in_flight = self.freed.wait(in_flight).expect("host slots poisoned");
        }
        *in_flight.entry(host.to_string()).or_insert(0) += 1;
        SlotGuard {
            slots: self,
            host: host.to_string(),
        }
    }
}

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        let mut in_flight = self.slots.in_flight.lock().expect("host slots poisoned");
        if let Some(n) = in_flight.get_mut(&self.host) {
            *n -= 1;
        }
        self.slots.freed.notify_all();
    }
}

#[derive(Debug, Clone)]
pub struct TransportConfig {
    pub mode: FixtureMode,
    pub fixtures: Option<PathBuf>,
    pub user_agent: String,
    pub rate_limit: RateLimitPolicy,
    /// First retry delay for 429/503 answers.
    pub retry_base: Duration,
}

impl Default for TransportConfig {
    fn default() -> Self {
        Self {
            mode: FixtureMode::Passthrough,
            fixtures: None,
            user_agent: DEFAULT_USER_AGENT.to_string(),
            rate_limit: RateLimitPolicy::default(),
            retry_base: Duration::from_millis(500),
        }
    }
}

impl TransportConfig {
    pub fn replay(root: impl Into<PathBuf>) -> Self {
        Self {
            mode: FixtureMode::Replay,
            fixtures: Some(root.into()),
            ..Self::default()
        }
    }
}

/// Shared HTTP entry point. Safe to use from many threads at once.
pub struct Transport {
    mode: FixtureMode,
    archive: Option<FixtureArchive>,
    fetcher: Arc<dyn Fetcher>,
    user_agent: String,
    retry_base: Duration,
    bucket: TokenBucket,
    slots: HostSlots,
    cache: Mutex<HashMap<String, Response>>,
    live_requests: AtomicUsize,
}

impl Transport {
    /// Uses the real HTTP client, or a disabled one in replay mode.
    pub fn new(config: TransportConfig) -> Result<Self> {
        let fetcher: Arc<dyn Fetcher> = match config.mode {
            FixtureMode::Replay => Arc::new(DisabledFetcher),
            _ => Arc::new(HttpFetcher::new()?),
        };
        Self::with_fetcher(config, fetcher)
    }

    pub fn with_fetcher(config: TransportConfig, fetcher: Arc<dyn Fetcher>) -> Result<Self> {
        config.rate_limit.validate()?;
        let archive = config.fixtures.map(FixtureArchive::new);
        if config.mode != FixtureMode::Passthrough && archive.is_none() {
            return Err(ToolkitError::bad_input(format!(
                "{} mode needs a fixture directory",
                config.mode
            )));
        }
        Ok(Self {
            mode: config.mode,
            archive,
            fetcher,
            user_agent: config.user_agent,
            retry_base: config.retry_base,
            bucket: TokenBucket::new(config.rate_limit.max_requests_per_second),
            slots: HostSlots::new(config.rate_limit.max_concurrent_per_host),
            cache: Mutex::new(HashMap::new()),
            live_requests: AtomicUsize::new(0),
        })
    }

    pub fn mode(&self) -> FixtureMode {
        self.mode
    }

    /// Live requests issued so far, retries included.
    pub fn live_requests(&self) -> usize {
        self.live_requests.load(Ordering::SeqCst)
    }

    /// Returns the response for `spec`; any non-2xx status is an
    /// `UpstreamStatus` error carrying the code.
    pub fn fetch(&self, spec: &HttpRequestSpec) -> Result<Response> {
        let response = self.fetch_any_status(spec)?;
        if response.is_success() {
            Ok(response)
        } else {
            Err(ToolkitError::upstream_status(response.status).with_url(spec.url()))
        }
    }

    /// Like [`Transport::fetch`] but hands back non-2xx responses too.
    pub fn fetch_any_status(&self, spec: &HttpRequestSpec) -> Result<Response> {
        let key = canonical_key(spec);
        if let Some(hit) = self.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let response = match self.mode {
            FixtureMode::Replay => {
                let archive = self.archive.as_ref().expect("replay mode has an archive");
                match archive.load(&key)? {
                    Some(envelope) => envelope.response(),
                    None => {
                        return Err(ToolkitError::not_found(format!("no fixture with key {key}"))
                            .with_url(spec.url()))
                    }
                }
            }
            FixtureMode::Record => {
                let response = self.live(spec)?;
                if response.is_success() || response.status == 404 {
                    let archive = self.archive.as_ref().expect("record mode has an archive");
                    archive.store(&FixtureEnvelope::new(spec, &response))?;
                }
                response
            }
            FixtureMode::Passthrough => self.live(spec)?,
        };
        log::debug!("{} {} -> {}", spec.method(), spec.url(), response.status);
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(key, response.clone());
        Ok(response)
    }

    fn live(&self, spec: &HttpRequestSpec) -> Result<Response> {
        let host = spec.host();
        let _slot = self.slots.acquire(&host);
        let mut attempt = 0u32;
        loop {
            self.bucket.acquire();
            self.live_requests.fetch_add(1, Ordering::SeqCst);
            let response = self.fetcher.fetch(spec, &self.user_agent)?;
            let retryable = matches!(response.status, 429 | 503);
            if !retryable {
                return Ok(response);
            }
            if attempt >= 1 {
                if response.status == 429 {
                    return Err(ToolkitError::rate_limited(429).with_url(spec.url()));
                }
                return Ok(response);
            }
            let delay = self.retry_base * 2u32.pow(attempt);
            log::info!("{} answered {}, retrying in {:?}", spec.url(), response.status, delay);
            thread::sleep(delay);
            attempt += 1;
        }
    }
}

/// Maps `UpstreamStatus(404)` to `NotFound`, leaving other errors untouched.
pub fn not_found_on_404(err: ToolkitError) -> ToolkitError {
    if err.kind == ErrorKind::UpstreamStatus && err.status == Some(404) {
        let mut mapped = ToolkitError::not_found(err.detail.clone());
        mapped.url = err.url;
        mapped.status = err.status;
        mapped
    } else {
        err
    }
}
