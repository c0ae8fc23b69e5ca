//! Shared helpers: the committed archive, and an in-memory fake web for
//! hand-written responses.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};
use wikitools::config::Endpoints;
use wikitools::transport::{Fetcher, FixtureMode, HttpRequestSpec, RateLimitPolicy, Response, TransportConfig};
use wikitools::{Toolkit, Transport};
use wikitools_core::Result;

pub const WIKI: &str = "https://{language}.wiki.test/w/api.php";
pub const WIKIDATA: &str = "https://data.wiki.test/w/api.php";
pub const PAGEVIEWS: &str = "https://metrics.wiki.test/api/rest_v1";

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn grids_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("grids")
}

/// Toolkit over the committed archive; live fetches are impossible.
pub fn replay() -> Toolkit {
    let transport = Transport::new(TransportConfig::replay(fixtures_dir())).expect("replay transport");
    Toolkit::new(Arc::new(transport), &Endpoints::default())
}

/// Canned responses keyed by canonical URL. Unknown URLs answer 404.
#[derive(Default)]
pub struct FakeWeb {
    routes: Mutex<HashMap<String, (u16, String)>>,
    pub calls: AtomicUsize,
    pub seen: Mutex<Vec<String>>,
}

impl FakeWeb {
    pub fn new() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn route(&self, url: &str, status: u16, body: impl Into<String>) {
        self.routes.lock().unwrap().insert(url.to_string(), (status, body.into()));
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    /// Action API response for `params` (the fixed ones are added).
    pub fn mw(&self, lang: &str, params: &[(&str, &str)], body: Value) {
        let mut all = vec![("action", "query"), ("format", "json"), ("formatversion", "2")];
        all.extend_from_slice(params);
        let url = HttpRequestSpec::get(&WIKI.replace("{language}", lang), &[], all).unwrap();
        self.route(url.url(), 200, body.to_string());
    }

    pub fn wd(&self, params: &[(&str, &str)], body: Value) {
        let mut all = vec![("action", "wbgetentities"), ("format", "json")];
        all.extend_from_slice(params);
        let url = HttpRequestSpec::get(WIKIDATA, &[], all).unwrap();
        self.route(url.url(), 200, body.to_string());
    }

    pub fn backlinks(&self, lang: &str, title: &str, redirects: bool, titles: &[&str]) {
        let filter = if redirects { "redirects" } else { "nonredirects" };
        let records: Vec<Value> = titles.iter().map(|t| json!({"ns": 0, "title": t})).collect();
        self.mw(
            lang,
            &[
                ("list", "backlinks"),
                ("bltitle", title),
                ("blnamespace", "0"),
                ("blfilterredir", filter),
                ("bllimit", "max"),
            ],
            json!({"batchcomplete": true, "query": {"backlinks": records}}),
        );
    }

    pub fn outbound(&self, lang: &str, title: &str, titles: &[&str]) {
        let records: Vec<Value> = titles.iter().map(|t| json!({"ns": 0, "title": t})).collect();
        self.mw(
            lang,
            &[("prop", "links"), ("titles", title), ("plnamespace", "0"), ("pllimit", "max")],
            json!({"batchcomplete": true, "query": {"pages": [{"ns": 0, "title": title, "links": records}]}}),
        );
    }

    pub fn langlinks(&self, lang: &str, title: &str, links: &[(&str, &str)]) {
        let records: Vec<Value> = links.iter().map(|(l, t)| json!({"lang": l, "title": t})).collect();
        self.mw(
            lang,
            &[("prop", "langlinks"), ("titles", title), ("lllimit", "max")],
            json!({"batchcomplete": true, "query": {"pages": [{"ns": 0, "title": title, "langlinks": records}]}}),
        );
    }

    pub fn members(&self, lang: &str, category: &str, ns: &str, titles: &[&str]) {
        let ns_num: i64 = ns.parse().unwrap();
        let records: Vec<Value> = titles.iter().map(|t| json!({"ns": ns_num, "title": t})).collect();
        self.mw(
            lang,
            &[("list", "categorymembers"), ("cmtitle", category), ("cmnamespace", ns), ("cmlimit", "max")],
            json!({"batchcomplete": true, "query": {"categorymembers": records}}),
        );
    }

    pub fn pageviews(&self, lang: &str, title: &str, start: &str, end: &str, items: &[(&str, u64)]) {
        let items: Vec<Value> = items
            .iter()
            .map(|(day, views)| json!({"timestamp": format!("{day}00"), "views": views}))
            .collect();
        let url = pageviews_url(lang, title, start, end);
        self.route(&url, 200, json!({ "items": items }).to_string());
    }
}

pub fn pageviews_url(lang: &str, title: &str, start: &str, end: &str) -> String {
    let project = format!("{lang}.wikipedia");
    let segs = [
        "metrics", "pageviews", "per-article", &project, "all-access", "user", title, "daily", start, end,
    ];
    HttpRequestSpec::get(PAGEVIEWS, &segs, Vec::<(&str, &str)>::new())
        .unwrap()
        .url()
        .to_string()
}

impl Fetcher for FakeWeb {
    fn fetch(&self, spec: &HttpRequestSpec, _user_agent: &str) -> Result<Response> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.seen.lock().unwrap().push(spec.url().to_string());
        let (status, body) = self
            .routes
            .lock()
            .unwrap()
            .get(spec.url())
            .cloned()
            .unwrap_or((404, String::from("{}")));
        Ok(Response {
            status,
            content_type: "application/json".to_string(),
            body,
        })
    }
}

pub fn fast_config() -> TransportConfig {
    TransportConfig {
        mode: FixtureMode::Passthrough,
        rate_limit: RateLimitPolicy {
            max_requests_per_second: 1_000_000.0,
            max_concurrent_per_host: 8,
        },
        ..TransportConfig::default()
    }
}

pub fn fake_endpoints() -> Endpoints {
    Endpoints {
        wikipedia: WIKI.to_string(),
        wikidata: WIKIDATA.to_string(),
        pageviews: PAGEVIEWS.to_string(),
    }
}

/// Toolkit answering from `web` without any network.
pub fn synthetic(web: &Arc<FakeWeb>) -> Toolkit {
    let transport = Transport::with_fetcher(fast_config(), web.clone()).unwrap();
    Toolkit::new(Arc::new(transport), &fake_endpoints())
}
