mod common;

use std::collections::BTreeSet;

use common::{replay, synthetic, FakeWeb};
use wikitools::Threaded;
use wikitools_core::grid::{evaluate_grid, evaluate_grid_with, Grid, DEFAULT_MAX_CELLS};
use wikitools_core::title::LanguageCode;
use wikitools_core::{print_grid, CellRef, ErrorToken, OutputFormat, ValueTable};

fn set(t: &ValueTable) -> BTreeSet<String> {
    t.column_values(0).map(str::to_string).collect()
}

fn langs(codes: &[&str]) -> Vec<LanguageCode> {
    codes.iter().map(|c| LanguageCode::new(c).unwrap()).collect()
}

fn cell(s: &str) -> CellRef {
    s.parse().unwrap()
}

#[test]
fn translate_filters() {
    let toolkit = replay();
    let de = toolkit.wiki_translate("en:Berlin", Some(&langs(&["de"]))).unwrap();
    assert_eq!(de.rows(), &[vec!["de:Berlin".to_string()]]);
    assert!(toolkit.wiki_translate("en:Berlin", Some(&[])).unwrap().is_empty());

    let all = toolkit.wiki_translate("en:Berlin", None).unwrap();
    let filter = langs(&["ru", "de", "xx", "fr"]);
    let filtered = toolkit.wiki_translate("en:Berlin", Some(&filter)).unwrap();
    let expected: Vec<&str> = all
        .column_values(0)
        .filter(|t| ["ru:", "de:", "fr:"].iter().any(|p| t.starts_with(p)))
        .collect();
    assert_eq!(filtered.column_values(0).collect::<Vec<_>>(), expected);

    let wunderland = toolkit.wiki_translate("en:Miniatur Wunderland", None).unwrap();
    assert_eq!(wunderland.n_rows(), 10);
}

#[test]
fn expand_contains_translations_and_synonyms() {
    let toolkit = replay();
    let expanded = toolkit.wiki_expand("en:Berlin", Some(&langs(&["de"]))).unwrap();
    let synonyms = toolkit.wiki_synonyms("en:Berlin").unwrap();
    let de_synonyms = toolkit.wiki_synonyms("de:Berlin").unwrap();

    let mut expected: Vec<String> = synonyms.column_values(0).map(str::to_string).collect();
    expected.push("de:Berlin".into());
    expected.extend(de_synonyms.column_values(0).map(str::to_string));
    assert_eq!(expanded.column_values(0).collect::<Vec<_>>(), expected);

    let all = toolkit.wiki_expand("en:Berlin", None).unwrap();
    let translations = toolkit.wiki_translate("en:Berlin", None).unwrap();
    assert!(set(&all).is_superset(&set(&translations)));
    assert!(set(&all).is_superset(&set(&synonyms)));
    assert_eq!(set(&all).len(), all.n_rows());
}

#[test]
fn expand_of_isolated_article_is_empty() {
    let web = FakeWeb::new();
    web.langlinks("en", "Island", &[]);
    web.backlinks("en", "Island", true, &[]);
    assert!(synthetic(&web).wiki_expand("en:Island", None).unwrap().is_empty());
}

#[test]
fn mutual_links_hand_case() {
    let web = FakeWeb::new();
    web.backlinks("en", "Hub", false, &["A", "B", "C"]);
    web.outbound("en", "Hub", &["D", "C", "B"]);
    web.backlinks("en", "Apart", false, &["A", "B"]);
    web.outbound("en", "Apart", &["C", "D"]);
    let toolkit = synthetic(&web);
    let got = toolkit.wiki_mutual_links("en:Hub").unwrap();
    // Outbound order.
    assert_eq!(got.column_values(0).collect::<Vec<_>>(), ["en:C", "en:B"]);
    assert!(toolkit.wiki_mutual_links("en:Apart").unwrap().is_empty());
}

#[test]
fn mutual_links_match_component_calls_on_recordings() {
    let toolkit = replay();
    let inbound = set(&toolkit.wiki_inbound_links("en:Berlin").unwrap());
    let outbound = set(&toolkit.wiki_outbound_links("en:Berlin").unwrap());
    let mutual = set(&toolkit.wiki_mutual_links("en:Berlin").unwrap());
    assert_eq!(mutual, &inbound & &outbound);
}

#[test]
fn geocoordinates_reparse_in_range() {
    let geo = replay().wiki_geocoordinates("en:Berlin").unwrap();
    assert_eq!((geo.n_rows(), geo.n_cols()), (1, 2));
    let lat: f64 = geo.get(0, 0).unwrap().parse().unwrap();
    let lon: f64 = geo.get(0, 1).unwrap().parse().unwrap();
    assert!((52.0..53.0).contains(&lat) && (13.0..14.0).contains(&lon));
}

#[test]
fn data_facts_table() {
    let facts = replay().wiki_data_facts("en:Berlin").unwrap();
    assert_eq!(facts.n_cols(), 2);
    assert!(facts
        .rows()
        .iter()
        .any(|r| r[0] == "ISO 3166-2 code" && r[1] == "DE-BE"));
    assert!(facts.rows().iter().all(|r| r[0] != "head of government"));
}

#[test]
fn every_table_is_rectangular_and_repeatable() {
    let toolkit = replay();
    let d = |s| wikitools::functions::parse_date(s).ok();
    let tables = || {
        vec![
            toolkit.wiki_translate("en:Berlin", None).unwrap(),
            toolkit.wiki_synonyms("en:Berlin").unwrap(),
            toolkit.wiki_expand("en:Berlin", None).unwrap(),
            toolkit.wiki_category_members("en:Category:Berlin").unwrap(),
            toolkit.wiki_subcategories("en:Category:Berlin").unwrap(),
            toolkit.wiki_inbound_links("en:Berlin").unwrap(),
            toolkit.wiki_outbound_links("en:Berlin").unwrap(),
            toolkit.wiki_mutual_links("en:Berlin").unwrap(),
            toolkit.wiki_geocoordinates("en:Berlin").unwrap(),
            toolkit.wiki_data_facts("en:Berlin").unwrap(),
            toolkit
                .wiki_pageviews("en:Miniatur Wunderland", d("2016-01-01"), d("2016-01-31"))
                .unwrap(),
            toolkit.wiki_page_edits("en:Berlin", d("2016-01-01"), d("2016-01-07")).unwrap(),
        ]
    };
    let first = tables();
    for t in &first {
        assert!(t.rows().iter().all(|r| r.len() == t.n_cols()));
    }
    assert_eq!(first, tables());
}

#[test]
fn registry_dispatch_and_arguments() {
    use wikitools_core::FunctionRegistry;
    let toolkit = replay();
    assert_eq!(wikitools::FUNCTION_NAMES.len(), 12);
    assert!(wikitools::FUNCTION_NAMES.iter().all(|n| toolkit.has_function(n)));
    assert!(!toolkit.has_function("DOUBLE"));
    let args = |a: &[&str]| a.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let de_fr = toolkit
        .call("WIKITRANSLATE", &args(&["en:Berlin", "de,fr"]))
        .unwrap();
    assert_eq!(de_fr.n_rows(), 2);
    let unfiltered = toolkit.call("WIKITRANSLATE", &args(&["en:Berlin", ""])).unwrap();
    assert_eq!(unfiltered.n_rows(), 12);
    let edits = toolkit
        .call("WIKIPAGEEDITS", &args(&["en:Berlin", "2016-01-01", "2016-01-07"]))
        .unwrap();
    assert_eq!(edits.n_rows(), 7);
    assert!(toolkit.call("WIKISYNONYMS", &args(&[])).is_err());
    assert!(toolkit.call("WIKISYNONYMS", &args(&["en:Berlin", "x"])).is_err());
    assert!(toolkit
        .call("WIKIPAGEVIEWS", &args(&["en:Berlin", "13/01/2016"]))
        .is_err());
}

#[test]
fn grid_spills_coordinates() {
    let toolkit = replay();
    let mut grid = Grid::new();
    grid.set(cell("A1"), "en:Berlin").unwrap();
    grid.set(cell("B1"), "=WIKIGEOCOORDINATES(A1)").unwrap();
    let out = evaluate_grid(&grid, &toolkit, DEFAULT_MAX_CELLS).unwrap();
    assert_eq!(out.text(cell("B1")), "52.52");
    assert_eq!(out.text(cell("C1")), "13.405");
}

#[test]
fn grid_spill_collision_and_clean_variant() {
    let web = FakeWeb::new();
    web.backlinks("en", "Twice", true, &["T1", "T2"]);
    let toolkit = synthetic(&web);

    let mut clean = Grid::new();
    clean.set(cell("A1"), "en:Twice").unwrap();
    clean.set(cell("B1"), "=WIKISYNONYMS(A1)").unwrap();
    clean.set(cell("C1"), "beside").unwrap();
    let out = evaluate_grid(&clean, &toolkit, DEFAULT_MAX_CELLS).unwrap();
    assert_eq!(out.text(cell("B1")), "en:T1");
    assert_eq!(out.text(cell("B2")), "en:T2");
    assert_eq!(out.text(cell("C1")), "beside");

    let mut blocked = clean.clone();
    blocked.set(cell("B2"), "in the way").unwrap();
    let out = evaluate_grid(&blocked, &toolkit, DEFAULT_MAX_CELLS).unwrap();
    assert_eq!(out.get(cell("B1")).unwrap().error(), Some(ErrorToken::Spill));
    assert_eq!(out.text(cell("B2")), "in the way");
}

#[test]
fn grid_errors_become_tokens() {
    let web = FakeWeb::new();
    let toolkit = synthetic(&web);
    let mut grid = Grid::new();
    grid.set(cell("A1"), "Berlin").unwrap();
    grid.set(cell("B1"), "=WIKISYNONYMS(A1)").unwrap();
    grid.set(cell("B2"), "=NOSUCHFN(A1)").unwrap();
    grid.set(cell("B3"), "=WIKISYNONYMS(B1)").unwrap();
    let out = evaluate_grid(&grid, &toolkit, DEFAULT_MAX_CELLS).unwrap();
    assert_eq!(out.text(cell("B1")), "#VALUE");
    assert_eq!(out.text(cell("B2")), "#NAME");
    assert_eq!(out.text(cell("B3")), "#VALUE");
}

#[test]
fn sample_grid_is_deterministic_across_schedulers() {
    let toolkit = replay();
    let text = std::fs::read_to_string(common::grids_dir().join("berlin.tsv")).unwrap();
    let grid = Grid::from_tsv(&text).unwrap();
    let sequential = print_grid(&evaluate_grid(&grid, &toolkit, DEFAULT_MAX_CELLS).unwrap(), OutputFormat::Tsv);
    for _ in 0..5 {
        let threaded = evaluate_grid_with(&grid, &toolkit, DEFAULT_MAX_CELLS, &Threaded).unwrap();
        assert_eq!(print_grid(&threaded, OutputFormat::Tsv), sequential);
    }
    assert!(sequential.contains("ISO 3166-2 code\tDE-BE"));
    assert!(sequential.contains("#NAME"));
}
