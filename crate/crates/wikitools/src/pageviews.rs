//! Per-article daily pageviews from the Wikimedia REST API.

use std::sync::Arc;

use chrono::{Duration, NaiveDate, Utc};
use serde::Deserialize;
use wikitools_core::title::QualifiedTitle;
use wikitools_core::{DailyCountSeries, Result, ToolkitError};

use crate::transport::{not_found_on_404, HttpRequestSpec, Transport};

/// Earliest day served by the per-article endpoint.
pub const FIRST_AVAILABLE_DAY: (i32, u32, u32) = (2015, 7, 1);

pub fn first_available_day() -> NaiveDate {
    let (y, m, d) = FIRST_AVAILABLE_DAY;
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// Traffic segmentation of the endpoint. The defaults count human traffic
/// from every access method; bots and spiders are excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrafficClass {
    pub access: String,
    pub agent: String,
}

impl Default for TrafficClass {
    fn default() -> Self {
        Self {
            access: "all-access".to_string(),
            agent: "user".to_string(),
        }
    }
}

/// The 30 days ending yesterday (UTC).
pub fn default_window() -> (NaiveDate, NaiveDate) {
    let yesterday = Utc::now().date_naive() - Duration::days(1);
    (yesterday - Duration::days(29), yesterday)
}

#[derive(Debug, Deserialize)]
struct Items {
    items: Vec<Item>,
}

#[derive(Debug, Deserialize)]
struct Item {
    timestamp: String,
    views: u64,
}

pub struct Pageviews {
    transport: Arc<Transport>,
    endpoint: String,
    traffic: TrafficClass,
}

impl Pageviews {
    pub fn new(transport: Arc<Transport>, endpoint: impl Into<String>) -> Self {
        Self {
            transport,
            endpoint: endpoint.into(),
            traffic: TrafficClass::default(),
        }
    }

    pub fn with_traffic(mut self, traffic: TrafficClass) -> Self {
        self.traffic = traffic;
        self
    }

    pub fn request(&self, article: &QualifiedTitle, start: NaiveDate, end: NaiveDate) -> Result<HttpRequestSpec> {
        let project = format!("{}.wikipedia", article.language);
        let title = article.request_title();
        let from = start.format("%Y%m%d").to_string();
        let until = end.format("%Y%m%d").to_string();
        HttpRequestSpec::get(
            &self.endpoint,
            &[
                "metrics",
                "pageviews",
                "per-article",
                &project,
                &self.traffic.access,
                &self.traffic.agent,
                &title,
                "daily",
                &from,
                &until,
            ],
            Vec::<(&str, &str)>::new(),
        )
    }

    /// Dense daily series over `[start, end]`; days the API omits count zero.
    pub fn daily_views(&self, article: &QualifiedTitle, start: NaiveDate, end: NaiveDate) -> Result<DailyCountSeries> {
        article.require_article()?;
        wikitools_core::series::check_range(start, end)?;
        if start < first_available_day() {
            return Err(ToolkitError::bad_input(format!(
                "pageviews start on {}, requested {start}",
                first_available_day()
            )));
        }
        let spec = self.request(article, start, end)?;
        let response = self.transport.fetch(&spec).map_err(not_found_on_404)?;
        let items: Items = serde_json::from_str(&response.body).map_err(|e| {
            ToolkitError::parse_failure(format!("unexpected pageviews payload: {e}")).with_url(spec.url())
        })?;
        let points = items
            .items
            .iter()
            .map(|item| Ok((parse_stamp(&item.timestamp)?, item.views)))
            .collect::<Result<Vec<_>>>()?;
        DailyCountSeries::dense(start, end, points)
    }

    pub fn total_views(&self, article: &QualifiedTitle, start: NaiveDate, end: NaiveDate) -> Result<u64> {
        Ok(self.daily_views(article, start, end)?.total())
    }
}

/// `YYYYMMDDHH` → day.
fn parse_stamp(stamp: &str) -> Result<NaiveDate> {
    stamp
        .get(..8)
        .and_then(|d| NaiveDate::parse_from_str(d, "%Y%m%d").ok())
        .ok_or_else(|| ToolkitError::parse_failure(format!("bad pageviews timestamp {stamp:?}")))
}
