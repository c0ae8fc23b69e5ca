mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::NaiveDate;
use common::{replay, synthetic, FakeWeb};
use serde_json::json;
use wikitools::mediawiki::{ActionQuery, MemberKind, ResultPath};
use wikitools_core::title::{parse_qualified, LanguageCode};
use wikitools_core::ErrorKind;

fn day(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

fn titles(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix} {i}")).collect()
}

/// Three continuation pages of 10, 10 and 3 redirects.
fn three_pages(web: &FakeWeb) {
    let base = [
        ("list", "backlinks"),
        ("bltitle", "Paged"),
        ("blnamespace", "0"),
        ("blfilterredir", "redirects"),
        ("bllimit", "max"),
    ];
    let page = |names: Vec<String>| -> Vec<serde_json::Value> {
        names.into_iter().map(|t| json!({"ns": 0, "title": t, "redirect": true})).collect()
    };
    web.mw(
        "en",
        &base,
        json!({"continue": {"blcontinue": "0|11", "continue": "-||"}, "query": {"backlinks": page(titles("A", 10))}}),
    );
    let mut second = base.to_vec();
    second.extend([("blcontinue", "0|11"), ("continue", "-||")]);
    web.mw(
        "en",
        &second,
        json!({"continue": {"blcontinue": "0|21", "continue": "-||"}, "query": {"backlinks": page(titles("B", 10))}}),
    );
    let mut third = base.to_vec();
    third.extend([("blcontinue", "0|21"), ("continue", "-||")]);
    web.mw("en", &third, json!({"batchcomplete": true, "query": {"backlinks": page(titles("C", 3))}}));
}

#[test]
fn continuation_concatenates_pages_in_order() {
    let web = FakeWeb::new();
    three_pages(&web);
    let toolkit = synthetic(&web);
    let got = toolkit
        .mediawiki
        .backlinks(&parse_qualified("en:Paged").unwrap(), true)
        .unwrap();
    let expected: Vec<String> = [titles("A", 10), titles("B", 10), titles("C", 3)].concat();
    assert_eq!(got.iter().map(|t| t.title.clone()).collect::<Vec<_>>(), expected);
    assert_eq!(web.calls(), 3);
}

#[test]
fn page_ceiling_stops_continuation() {
    let web = FakeWeb::new();
    three_pages(&web);
    let toolkit = synthetic(&web);
    let mw = wikitools::mediawiki::MediaWiki::new(toolkit.transport().clone(), common::WIKI).with_max_pages(2);
    let got = mw.backlinks(&parse_qualified("en:Paged").unwrap(), true).unwrap();
    assert_eq!(got.len(), 20);
    assert_eq!(web.calls(), 2);
}

#[test]
fn single_page_is_one_fetch() {
    let web = FakeWeb::new();
    web.backlinks("en", "Solo", true, &["Solo (redirect)"]);
    let toolkit = synthetic(&web);
    let got = toolkit.wiki_synonyms("en:Solo").unwrap();
    assert_eq!(got.rows(), &[vec!["en:Solo (redirect)".to_string()]]);
    assert_eq!(web.calls(), 1);
}

#[test]
fn api_error_object_is_bad_input_with_code() {
    let web = FakeWeb::new();
    let query = ActionQuery::new(LanguageCode::new("en").unwrap()).param("list", "nonsense");
    web.mw(
        "en",
        &[("list", "nonsense")],
        json!({"error": {"code": "unknown_action", "info": "Unrecognized value"}}),
    );
    let toolkit = synthetic(&web);
    let err = toolkit.mediawiki.query_all(&query, ResultPath::List("x")).unwrap_err();
    assert_eq!(err.kind, ErrorKind::BadInput);
    assert_eq!(err.detail, "unknown_action");
}

#[test]
fn missing_page_is_not_found() {
    let web = FakeWeb::new();
    web.mw(
        "en",
        &[("prop", "langlinks"), ("titles", "Nowhere"), ("lllimit", "max")],
        json!({"query": {"pages": [{"ns": 0, "title": "Nowhere", "missing": true}]}}),
    );
    let err = synthetic(&web).wiki_translate("en:Nowhere", None).unwrap_err();
    assert_eq!(err.kind, ErrorKind::NotFound);
}

#[test]
fn unexpected_shape_is_parse_failure() {
    let web = FakeWeb::new();
    web.mw(
        "en",
        &[
            ("list", "backlinks"),
            ("bltitle", "Odd"),
            ("blnamespace", "0"),
            ("blfilterredir", "redirects"),
            ("bllimit", "max"),
        ],
        json!({"query": {"somethingelse": []}}),
    );
    let err = synthetic(&web).wiki_synonyms("en:Odd").unwrap_err();
    assert_eq!(err.kind, ErrorKind::ParseFailure);
}

#[test]
fn coordinates_absent_out_of_range_and_present() {
    let web = FakeWeb::new();
    let coords = |title: &str, body: serde_json::Value| {
        web.mw("en", &[("prop", "coordinates"), ("titles", title)], body);
    };
    coords("Idea", json!({"query": {"pages": [{"ns": 0, "title": "Idea"}]}}));
    coords(
        "Broken",
        json!({"query": {"pages": [{"ns": 0, "title": "Broken", "coordinates": [{"lat": 123.0, "lon": 13.0, "primary": true}]}]}}),
    );
    coords(
        "Place",
        json!({"query": {"pages": [{"ns": 0, "title": "Place", "coordinates": [
            {"lat": 1.0, "lon": 2.0},
            {"lat": 48.85, "lon": 2.35, "primary": true}
        ]}]}}),
    );
    let toolkit = synthetic(&web);
    let idea = parse_qualified("en:Idea").unwrap();
    assert_eq!(toolkit.mediawiki.geocoordinates(&idea).unwrap_err().kind, ErrorKind::NotFound);
    let table = toolkit.wiki_geocoordinates("en:Idea").unwrap();
    assert_eq!((table.n_rows(), table.n_cols()), (0, 2));
    assert_eq!(
        toolkit.wiki_geocoordinates("en:Broken").unwrap_err().kind,
        ErrorKind::ParseFailure
    );
    let place = toolkit.wiki_geocoordinates("en:Place").unwrap();
    assert_eq!(place.rows(), &[vec!["48.85".to_string(), "2.35".to_string()]]);
}

fn revisions(web: &FakeWeb, title: &str, start: &str, end: &str, stamps: &[&str]) {
    let rvstart = format!("{start}T00:00:00Z");
    let rvend = format!("{end}T23:59:59Z");
    let revs: Vec<_> = stamps.iter().map(|s| json!({"timestamp": s})).collect();
    web.mw(
        "en",
        &[
            ("prop", "revisions"),
            ("titles", title),
            ("rvprop", "timestamp"),
            ("rvlimit", "max"),
            ("rvdir", "newer"),
            ("rvstart", &rvstart),
            ("rvend", &rvend),
        ],
        json!({"query": {"pages": [{"ns": 0, "title": title, "revisions": revs}]}}),
    );
}

#[test]
fn edit_counts_bucket_by_utc_day() {
    let web = FakeWeb::new();
    revisions(
        &web,
        "Edited",
        "2020-03-01",
        "2020-03-02",
        &["2020-03-01T01:00:00Z", "2020-03-01T12:00:00Z", "2020-03-01T23:59:59Z", "2020-03-02T00:00:00Z"],
    );
    revisions(&web, "Quiet", "2020-03-01", "2020-03-03", &[]);
    let toolkit = synthetic(&web);
    let series = toolkit
        .mediawiki
        .daily_edit_counts(&parse_qualified("en:Edited").unwrap(), day("2020-03-01"), day("2020-03-02"))
        .unwrap();
    assert_eq!(series.points(), &[(day("2020-03-01"), 3), (day("2020-03-02"), 1)]);
    let table = toolkit
        .wiki_page_edits("en:Edited", Some(day("2020-03-01")), Some(day("2020-03-02")))
        .unwrap();
    assert_eq!(table.get(0, 1), Some("3"));
    assert_eq!(table.get(1, 1), Some("1"));

    let quiet = toolkit
        .mediawiki
        .daily_edit_counts(&parse_qualified("en:Quiet").unwrap(), day("2020-03-01"), day("2020-03-03"))
        .unwrap();
    assert_eq!(quiet.len(), 3);
    assert_eq!(quiet.total(), 0);

    let err = toolkit
        .mediawiki
        .daily_edit_counts(&parse_qualified("en:Quiet").unwrap(), day("2020-03-03"), day("2020-03-01"))
        .unwrap_err();
    assert_eq!(err.kind, ErrorKind::BadInput);
}

#[test]
fn category_inputs_are_checked() {
    let web = FakeWeb::new();
    let toolkit = synthetic(&web);
    assert_eq!(
        toolkit.wiki_category_members("en:Berlin").unwrap_err().kind,
        ErrorKind::BadInput
    );
    assert_eq!(
        toolkit.wiki_synonyms("en:Category:Berlin").unwrap_err().kind,
        ErrorKind::BadInput
    );
    assert_eq!(toolkit.wiki_synonyms("en:").unwrap_err().kind, ErrorKind::BadInput);
    assert_eq!(web.calls(), 0);
}

#[test]
fn empty_results_are_empty_tables() {
    let web = FakeWeb::new();
    web.members("en", "Category:Empty", "0", &[]);
    web.members("en", "Category:Empty", "14", &[]);
    web.backlinks("en", "Orphan", false, &[]);
    web.backlinks("en", "Orphan", true, &[]);
    web.outbound("en", "Orphan", &[]);
    let toolkit = synthetic(&web);
    assert!(toolkit.wiki_category_members("en:Category:Empty").unwrap().is_empty());
    assert!(toolkit.wiki_subcategories("en:Category:Empty").unwrap().is_empty());
    assert!(toolkit.wiki_inbound_links("en:Orphan").unwrap().is_empty());
    assert!(toolkit.wiki_synonyms("en:Orphan").unwrap().is_empty());
    assert!(toolkit.wiki_outbound_links("en:Orphan").unwrap().is_empty());
}

#[test]
fn duplicate_records_are_dropped_keeping_first() {
    let web = FakeWeb::new();
    web.outbound("en", "Loopy", &["B", "A", "B", "C", "A"]);
    let got = synthetic(&web).wiki_outbound_links("en:Loopy").unwrap();
    let got: Vec<&str> = got.column_values(0).collect();
    assert_eq!(got, ["en:B", "en:A", "en:C"]);
}

#[test]
fn recorded_berlin_lists() {
    let toolkit = replay();
    let berlin = parse_qualified("en:Berlin").unwrap();

    let translations = toolkit.mediawiki.langlinks(&berlin).unwrap();
    assert!(translations.iter().any(|t| t.to_string() == "de:Berlin"));

    let synonyms = toolkit.mediawiki.backlinks(&berlin, true).unwrap();
    let inbound = toolkit.mediawiki.backlinks(&berlin, false).unwrap();
    let outbound = toolkit.mediawiki.outbound_links(&berlin).unwrap();
    assert!(!synonyms.is_empty() && !inbound.is_empty() && !outbound.is_empty());
    for list in [&synonyms, &inbound, &outbound] {
        assert!(list.iter().all(|t| t.language.as_str() == "en"));
        let unique: BTreeSet<_> = list.iter().collect();
        assert_eq!(unique.len(), list.len());
    }
    let syn: BTreeSet<_> = synonyms.iter().collect();
    assert!(inbound.iter().all(|t| !syn.contains(t)), "redirects and inbound links overlap");
    assert!(outbound.iter().any(|t| t.title == "Germany"));

    let c = toolkit.mediawiki.geocoordinates(&berlin).unwrap();
    assert!(c.latitude > 52.0 && c.latitude < 53.0);
    assert!(c.longitude > 13.0 && c.longitude < 14.0);

    let subcats = toolkit
        .mediawiki
        .category_members(&parse_qualified("en:Category:Berlin").unwrap(), MemberKind::Subcategories)
        .unwrap();
    assert!(!subcats.is_empty());
    for s in &subcats {
        assert!(parse_qualified(&s.to_string()).unwrap().is_category(), "{s}");
    }
}

#[test]
fn recorded_montreal_members_are_alphabetical() {
    let members = replay()
        .category_members("en:Category:Visitor attractions in Montreal")
        .unwrap();
    assert!(members.len() >= 10);
    let names: Vec<_> = members.iter().map(|t| t.title.clone()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn clients_are_shareable_across_threads() {
    let web = FakeWeb::new();
    web.backlinks("en", "Shared", true, &["S1", "S2"]);
    let toolkit = Arc::new(synthetic(&web));
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let t = toolkit.clone();
            std::thread::spawn(move || t.wiki_synonyms("en:Shared").unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap().n_rows(), 2);
    }
}
