mod common;

use std::collections::BTreeSet;

use common::{replay, synthetic, FakeWeb};
use serde_json::json;
use wikitools_core::claims::EntityId;
use wikitools_core::title::{parse_qualified, LanguageCode};
use wikitools_core::ErrorKind;

fn site_lookup(web: &FakeWeb, title: &str, entity: serde_json::Value) {
    web.wd(
        &[("sites", "enwiki"), ("titles", title), ("props", "info")],
        json!({"entities": entity, "success": 1}),
    );
}

#[test]
fn berlin_facts_keep_single_values_only() {
    let facts = replay().facts("en:Berlin").unwrap();
    assert!(facts
        .iter()
        .any(|f| f.predicate == "ISO 3166-2 code" && f.object == "DE-BE"));
    assert!(facts.iter().all(|f| f.predicate != "head of government"));
    assert!(facts.iter().all(|f| f.predicate != "population"));
    let predicates: BTreeSet<_> = facts.iter().map(|f| &f.predicate).collect();
    assert_eq!(predicates.len(), facts.len());
    assert!(facts.iter().all(|f| !f.predicate.is_empty() && !f.object.is_empty()));
    assert!(facts
        .iter()
        .any(|f| f.predicate == "coordinate location" && f.object == "52.516667,13.383333"));
}

#[test]
fn berlin_item_id_and_german_labels() {
    let toolkit = replay();
    let id = toolkit
        .wikidata
        .entity_for_article(&parse_qualified("en:Berlin").unwrap())
        .unwrap();
    assert_eq!(id.to_string(), "Q64");
    let facts = toolkit.facts("de:Berlin").unwrap();
    assert!(facts.iter().any(|f| f.predicate == "Staat" && f.object == "Deutschland"));
}

#[test]
fn skyscraper_height_drops_plus_sign() {
    let facts = replay().facts("en:Burj Khalifa").unwrap();
    assert!(facts.iter().any(|f| f.predicate == "height" && f.object == "828"));
    // Two height claims: discarded.
    let esb = replay().facts("en:Empire State Building").unwrap();
    assert!(esb.iter().all(|f| f.predicate != "height"));
}

#[test]
fn unconnected_page_is_not_found() {
    let web = FakeWeb::new();
    site_lookup(&web, "Lonely", json!({"-1": {"site": "enwiki", "title": "Lonely", "missing": ""}}));
    let toolkit = synthetic(&web);
    assert_eq!(toolkit.facts("en:Lonely").unwrap_err().kind, ErrorKind::NotFound);
    assert_eq!(toolkit.wiki_data_facts("en:Lonely").unwrap_err().kind, ErrorKind::NotFound);
}

#[test]
fn malformed_envelopes_are_parse_failures() {
    let web = FakeWeb::new();
    site_lookup(&web, "Garbled", json!({"Q1": {"type": "item"}}));
    web.wd(
        &[("sites", "enwiki"), ("titles", "Nothing"), ("props", "info")],
        json!({"success": 1}),
    );
    let toolkit = synthetic(&web);
    assert_eq!(toolkit.facts("en:Garbled").unwrap_err().kind, ErrorKind::ParseFailure);
    assert_eq!(toolkit.facts("en:Nothing").unwrap_err().kind, ErrorKind::ParseFailure);
}

#[test]
fn unknown_datavalue_kind_names_the_kind() {
    let web = FakeWeb::new();
    site_lookup(&web, "Exotic", json!({"Q5": {"id": "Q5"}}));
    web.wd(
        &[("ids", "Q5"), ("props", "claims")],
        json!({"entities": {"Q5": {"id": "Q5", "claims": {"P9": [
            {"mainsnak": {"snaktype": "value", "datavalue": {"type": "geo-shape-3d", "value": "x"}}}
        ]}}}}),
    );
    let err = synthetic(&web).facts("en:Exotic").unwrap_err();
    assert_eq!(err.kind, ErrorKind::ParseFailure);
    assert!(err.detail.contains("geo-shape-3d"), "{err}");
}

#[test]
fn only_multi_value_claims_give_no_facts() {
    let web = FakeWeb::new();
    site_lookup(&web, "Plural", json!({"Q7": {"id": "Q7"}}));
    let v = |n: u64| json!({"mainsnak": {"snaktype": "value", "datavalue": {"type": "string", "value": n.to_string()}}});
    web.wd(
        &[("ids", "Q7"), ("props", "claims")],
        json!({"entities": {"Q7": {"id": "Q7", "claims": {"P1": [v(1), v(2)], "P2": [v(3), v(4), v(5)]}}}}),
    );
    let toolkit = synthetic(&web);
    assert!(toolkit.facts("en:Plural").unwrap().is_empty());
    assert!(toolkit.wiki_data_facts("en:Plural").unwrap().is_empty());
}

#[test]
fn label_fallback_chain() {
    let web = FakeWeb::new();
    web.wd(
        &[("ids", "Q1|Q2|Q3"), ("props", "labels"), ("languages", "fr|en")],
        json!({"entities": {
            "Q1": {"id": "Q1", "labels": {"fr": {"language": "fr", "value": "univers"}, "en": {"language": "en", "value": "universe"}}},
            "Q2": {"id": "Q2", "labels": {"en": {"language": "en", "value": "Earth"}}},
            "Q3": {"id": "Q3", "labels": {}}
        }}),
    );
    let toolkit = synthetic(&web);
    let ids: BTreeSet<_> = [1, 2, 3].into_iter().map(EntityId::item).collect();
    let labels = toolkit
        .wikidata
        .resolve_labels(&ids, &LanguageCode::new("fr").unwrap())
        .unwrap();
    let got: Vec<_> = labels.values().cloned().collect();
    assert_eq!(got, ["univers", "Earth", "Q3"]);
    assert!(toolkit
        .wikidata
        .resolve_labels(&BTreeSet::new(), &LanguageCode::new("fr").unwrap())
        .unwrap()
        .is_empty());
}

#[test]
fn labels_are_fetched_in_chunks_of_fifty() {
    let web = FakeWeb::new();
    let ids: Vec<EntityId> = (1..=120).map(EntityId::item).collect();
    for chunk in ids.chunks(50) {
        let joined = chunk.iter().map(ToString::to_string).collect::<Vec<_>>().join("|");
        let entities: serde_json::Map<String, serde_json::Value> = chunk
            .iter()
            .map(|id| {
                (
                    id.to_string(),
                    json!({"labels": {"en": {"value": format!("label {id}")}}}),
                )
            })
            .collect();
        web.wd(
            &[("ids", &joined), ("props", "labels"), ("languages", "en")],
            json!({ "entities": entities }),
        );
    }
    let toolkit = synthetic(&web);
    let set: BTreeSet<_> = ids.iter().copied().collect();
    let labels = toolkit
        .wikidata
        .resolve_labels(&set, &LanguageCode::new("en").unwrap())
        .unwrap();
    assert_eq!(web.calls(), 3);
    assert_eq!(labels.len(), 120);
    assert_eq!(labels[&EntityId::item(77)], "label Q77");
}

#[test]
fn facts_are_deterministic() {
    let a = replay().wiki_data_facts("en:Berlin").unwrap();
    let b = replay().wiki_data_facts("en:Berlin").unwrap();
    assert_eq!(a, b);
}
