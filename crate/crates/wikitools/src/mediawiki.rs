//! Client for the MediaWiki action API of the language Wikipedias.

use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::{DateTime, NaiveDate, Utc};
use serde_json::Value;
use wikitools_core::links::dedup_first;
use wikitools_core::title::{LanguageCode, QualifiedTitle, NS_ARTICLE, NS_CATEGORY};
use wikitools_core::{DailyCountSeries, Result, ToolkitError};

use crate::transport::{HttpRequestSpec, Transport};

pub const DEFAULT_MAX_PAGES: usize = 50;

/// `action=query` request against one language wiki. Always JSON
/// (`formatversion=2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionQuery {
    pub language: LanguageCode,
    params: BTreeMap<String, String>,
}

impl ActionQuery {
    pub fn new(language: LanguageCode) -> Self {
        let params = [("action", "query"), ("format", "json"), ("formatversion", "2")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { language, params }
    }

    pub fn param(mut self, key: &str, value: impl Into<String>) -> Self {
        assert!(key != "format" && key != "action", "{key} is fixed");
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }
}

/// Where the records of one response live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultPath {
    /// `query.<name>[]` of a `list=` module.
    List(&'static str),
    /// `query.pages[].<name>[]` of a `prop=` module. Missing pages are `NotFound`.
    PageProp(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberKind {
    Pages,
    Subcategories,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoCoordinate {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoCoordinate {
    pub fn new(latitude: f64, longitude: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&latitude) || !(-180.0..=180.0).contains(&longitude) {
            return Err(ToolkitError::parse_failure(format!(
                "coordinate ({latitude}, {longitude}) out of range"
            )));
        }
        Ok(Self {
            latitude,
            longitude,
        })
    }
}

pub struct MediaWiki {
    transport: Arc<Transport>,
    endpoint_template: String,
    max_pages: usize,
}

impl MediaWiki {
    pub fn new(transport: Arc<Transport>, endpoint_template: impl Into<String>) -> Self {
        Self {
            transport,
            endpoint_template: endpoint_template.into(),
            max_pages: DEFAULT_MAX_PAGES,
        }
    }

    pub fn with_max_pages(mut self, max_pages: usize) -> Self {
        self.max_pages = max_pages.max(1);
        self
    }

    fn endpoint(&self, language: &LanguageCode) -> String {
        self.endpoint_template.replace("{language}", language.as_str())
    }

    /// Runs `query`, following `continue` envelopes, and concatenates the
    /// records found at `path` in arrival order.
    pub fn query_all(&self, query: &ActionQuery, path: ResultPath) -> Result<Vec<Value>> {
        let endpoint = self.endpoint(&query.language);
        let mut continuation: BTreeMap<String, String> = BTreeMap::new();
        let mut records = Vec::new();
        for _ in 0..self.max_pages {
            let mut params = query.params.clone();
            params.extend(continuation.clone());
            let spec = HttpRequestSpec::get(&endpoint, &[], &params)?;
            let response = self.transport.fetch(&spec)?;
            let json: Value = serde_json::from_str(&response.body).map_err(|e| {
                ToolkitError::parse_failure(format!("invalid JSON: {e}")).with_url(spec.url())
            })?;
            if let Some(error) = json.get("error") {
                let code = error.get("code").and_then(Value::as_str).unwrap_or("unknown");
                return Err(ToolkitError::bad_input(code).with_url(spec.url()));
            }
            extract(&json, path, &mut records).map_err(|e| e.with_url(spec.url()))?;
            match json.get("continue").and_then(Value::as_object) {
                Some(tokens) => {
                    continuation = tokens
                        .iter()
                        .map(|(k, v)| (k.clone(), json_scalar(v)))
                        .collect();
                }
                None => return Ok(records),
            }
        }
        log::warn!(
            "stopped after {} continuation rounds for {:?}",
            self.max_pages,
            query.params
        );
        Ok(records)
    }

    fn titles(&self, language: &LanguageCode, records: Vec<Value>) -> Result<Vec<QualifiedTitle>> {
        let titles = records
            .iter()
            .map(|r| {
                let title = r.get("title").and_then(Value::as_str).ok_or_else(|| {
                    ToolkitError::parse_failure("record without a title")
                })?;
                let ns = r.get("ns").and_then(Value::as_i64).unwrap_or(NS_ARTICLE);
                QualifiedTitle::from_api(language.clone(), title, ns)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(dedup_first(titles))
    }

    /// Redirects to the article (`redirects_only`) or true inbound links.
    pub fn backlinks(&self, article: &QualifiedTitle, redirects_only: bool) -> Result<Vec<QualifiedTitle>> {
        article.require_article()?;
        let filter = if redirects_only { "redirects" } else { "nonredirects" };
        let query = ActionQuery::new(article.language.clone())
            .param("list", "backlinks")
            .param("bltitle", article.request_title())
            .param("blnamespace", NS_ARTICLE.to_string())
            .param("blfilterredir", filter)
            .param("bllimit", "max");
        let records = self.query_all(&query, ResultPath::List("backlinks"))?;
        self.titles(&article.language, records)
    }

    pub fn langlinks(&self, article: &QualifiedTitle) -> Result<Vec<QualifiedTitle>> {
        article.require_article()?;
        let query = ActionQuery::new(article.language.clone())
            .param("prop", "langlinks")
            .param("titles", article.request_title())
            .param("lllimit", "max");
        let records = self.query_all(&query, ResultPath::PageProp("langlinks"))?;
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            let (Some(lang), Some(title)) = (
                r.get("lang").and_then(Value::as_str),
                r.get("title").and_then(Value::as_str),
            ) else {
                return Err(ToolkitError::parse_failure("language link without lang/title"));
            };
            if title.trim().is_empty() {
                continue;
            }
            match LanguageCode::new(lang) {
                Ok(code) => out.push(QualifiedTitle::new(code, title)?),
                Err(_) => log::warn!("skipping language link with code {lang:?}"),
            }
        }
        Ok(dedup_first(out))
    }

    pub fn category_members(&self, category: &QualifiedTitle, kind: MemberKind) -> Result<Vec<QualifiedTitle>> {
        category.require_category()?;
        let ns = match kind {
            MemberKind::Pages => NS_ARTICLE,
            MemberKind::Subcategories => NS_CATEGORY,
        };
        let query = ActionQuery::new(category.language.clone())
            .param("list", "categorymembers")
            .param("cmtitle", category.request_title())
            .param("cmnamespace", ns.to_string())
            .param("cmlimit", "max");
        let records = self.query_all(&query, ResultPath::List("categorymembers"))?;
        self.titles(&category.language, records)
    }

    pub fn outbound_links(&self, article: &QualifiedTitle) -> Result<Vec<QualifiedTitle>> {
        article.require_article()?;
        let query = ActionQuery::new(article.language.clone())
            .param("prop", "links")
            .param("titles", article.request_title())
            .param("plnamespace", NS_ARTICLE.to_string())
            .param("pllimit", "max");
        let records = self.query_all(&query, ResultPath::PageProp("links"))?;
        self.titles(&article.language, records)
    }

    /// Primary coordinate of the article; `NotFound` when it has none.
    pub fn geocoordinates(&self, article: &QualifiedTitle) -> Result<GeoCoordinate> {
        self.primary_coordinate(article)?
            .ok_or_else(|| ToolkitError::not_found(format!("{article} has no coordinates")))
    }

    pub fn primary_coordinate(&self, article: &QualifiedTitle) -> Result<Option<GeoCoordinate>> {
        article.require_article()?;
        let query = ActionQuery::new(article.language.clone())
            .param("prop", "coordinates")
            .param("titles", article.request_title());
        let records = self.query_all(&query, ResultPath::PageProp("coordinates"))?;
        let Some(chosen) = records
            .iter()
            .find(|r| r.get("primary").and_then(Value::as_bool) == Some(true))
            .or_else(|| records.first())
        else {
            return Ok(None);
        };
        let (Some(lat), Some(lon)) = (
            chosen.get("lat").and_then(Value::as_f64),
            chosen.get("lon").and_then(Value::as_f64),
        ) else {
            return Err(ToolkitError::parse_failure("coordinate without lat/lon"));
        };
        GeoCoordinate::new(lat, lon).map(Some)
    }

    /// Revisions per UTC day over `[start, end]`, zero-filled.
    pub fn daily_edit_counts(&self, article: &QualifiedTitle, start: NaiveDate, end: NaiveDate) -> Result<DailyCountSeries> {
        article.require_article()?;
        wikitools_core::series::check_range(start, end)?;
        let query = ActionQuery::new(article.language.clone())
            .param("prop", "revisions")
            .param("titles", article.request_title())
            .param("rvprop", "timestamp")
            .param("rvlimit", "max")
            .param("rvdir", "newer")
            .param("rvstart", format!("{}T00:00:00Z", start.format("%Y-%m-%d")))
            .param("rvend", format!("{}T23:59:59Z", end.format("%Y-%m-%d")));
        let records = self.query_all(&query, ResultPath::PageProp("revisions"))?;
        let mut days = Vec::with_capacity(records.len());
        for r in &records {
            let stamp = r
                .get("timestamp")
                .and_then(Value::as_str)
                .ok_or_else(|| ToolkitError::parse_failure("revision without timestamp"))?;
            let at: DateTime<Utc> = DateTime::parse_from_rfc3339(stamp)
                .map_err(|e| ToolkitError::parse_failure(format!("bad timestamp {stamp:?}: {e}")))?
                .with_timezone(&Utc);
            days.push((at.date_naive(), 1));
        }
        DailyCountSeries::dense(start, end, days)
    }
}

fn json_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn extract(json: &Value, path: ResultPath, out: &mut Vec<Value>) -> Result<()> {
    let query = json.get("query");
    match path {
        ResultPath::List(name) => {
            let items = query
                .and_then(|q| q.get(name))
                .and_then(Value::as_array)
                .ok_or_else(|| ToolkitError::parse_failure(format!("response lacks query.{name}")))?;
            out.extend(items.iter().cloned());
        }
        ResultPath::PageProp(name) => {
            let pages = query
                .and_then(|q| q.get("pages"))
                .and_then(Value::as_array)
                .ok_or_else(|| ToolkitError::parse_failure("response lacks query.pages"))?;
            for page in pages {
                let title = page.get("title").and_then(Value::as_str).unwrap_or("?");
                if is_flag_set(page.get("missing")) {
                    return Err(ToolkitError::not_found(format!("page {title:?} is missing")));
                }
                if is_flag_set(page.get("invalid")) {
                    let reason = page.get("invalidreason").and_then(Value::as_str).unwrap_or("invalid title");
                    return Err(ToolkitError::bad_input(format!("{title:?}: {reason}")));
                }
                if let Some(items) = page.get(name) {
                    let items = items.as_array().ok_or_else(|| {
                        ToolkitError::parse_failure(format!("pages[].{name} is not a list"))
                    })?;
                    out.extend(items.iter().cloned());
                }
            }
        }
    }
    Ok(())
}

/// `formatversion=2` uses `true`; version 1 uses an empty string.
fn is_flag_set(v: Option<&Value>) -> bool {
    match v {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => true,
    }
}
