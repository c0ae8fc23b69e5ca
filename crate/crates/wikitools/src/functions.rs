//! The twelve `WIKI*` functions, each returning a [`ValueTable`].
//!
//! List-valued functions return one column of `language:Title` strings so
//! their output can feed another function directly. Failures surface as
//! errors here; the formula grid turns them into `#VALUE` cells.

use std::sync::Arc;

use chrono::NaiveDate;
use rayon::prelude::*;
use wikitools_core::links::{dedup_first, filter_languages, mutual};
use wikitools_core::title::{parse_qualified_with, LanguageCode, QualifiedTitle};
use wikitools_core::grid::CellOutcome;
use wikitools_core::{FunctionRegistry, Result, Scheduler, ToolkitError, ValueTable};

use crate::config::{Endpoints, Settings};
use crate::mediawiki::{MediaWiki, MemberKind};
use crate::pageviews::{default_window, Pageviews, TrafficClass};
use crate::transport::Transport;
use crate::wikidata::{FactPair, Wikidata};

/// Builtin names understood by the formula grid.
pub const FUNCTION_NAMES: [&str; 12] = [
    "WIKITRANSLATE",
    "WIKISYNONYMS",
    "WIKIEXPAND",
    "WIKICATEGORYMEMBERS",
    "WIKISUBCATEGORIES",
    "WIKIINBOUNDLINKS",
    "WIKIOUTBOUNDLINKS",
    "WIKIMUTUALLINKS",
    "WIKIGEOCOORDINATES",
    "WIKIDATAFACTS",
    "WIKIPAGEVIEWS",
    "WIKIPAGEEDITS",
];

pub struct Toolkit {
    transport: Arc<Transport>,
    pub mediawiki: MediaWiki,
    pub wikidata: Wikidata,
    pub pageviews: Pageviews,
    category_prefixes: Vec<String>,
}

impl Toolkit {
    pub fn new(transport: Arc<Transport>, endpoints: &Endpoints) -> Self {
        Self {
            mediawiki: MediaWiki::new(transport.clone(), endpoints.wikipedia.clone()),
            wikidata: Wikidata::new(transport.clone(), endpoints.wikidata.clone()),
            pageviews: Pageviews::new(transport.clone(), endpoints.pageviews.clone()),
            transport,
            category_prefixes: Vec::new(),
        }
    }

    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let transport = Arc::new(Transport::new(settings.transport.clone())?);
        let mut toolkit = Self::new(transport, &settings.endpoints);
        toolkit.category_prefixes = settings.category_prefixes.clone();
        if let Some(max) = settings.max_pages {
            toolkit.mediawiki = toolkit.mediawiki.with_max_pages(max);
        }
        Ok(toolkit)
    }

    pub fn with_traffic(mut self, traffic: TrafficClass) -> Self {
        self.pageviews = self.pageviews.with_traffic(traffic);
        self
    }

    pub fn transport(&self) -> &Arc<Transport> {
        &self.transport
    }

    pub fn parse(&self, input: &str) -> Result<QualifiedTitle> {
        let extra: Vec<&str> = self.category_prefixes.iter().map(String::as_str).collect();
        parse_qualified_with(input, &extra)
    }

    pub fn translations(&self, article: &str, targets: Option<&[LanguageCode]>) -> Result<Vec<QualifiedTitle>> {
        let article = self.parse(article)?;
        Ok(filter_languages(self.mediawiki.langlinks(&article)?, targets))
    }

    pub fn wiki_translate(&self, article: &str, targets: Option<&[LanguageCode]>) -> Result<ValueTable> {
        Ok(titles_table(self.translations(article, targets)?))
    }

    pub fn wiki_synonyms(&self, article: &str) -> Result<ValueTable> {
        let article = self.parse(article)?;
        Ok(titles_table(self.mediawiki.backlinks(&article, true)?))
    }

    /// Source synonyms first, then each admitted translation followed by
    /// its own wiki's synonyms.
    pub fn wiki_expand(&self, article: &str, targets: Option<&[LanguageCode]>) -> Result<ValueTable> {
        let source = self.parse(article)?;
        let translations = filter_languages(self.mediawiki.langlinks(&source)?, targets);
        let mut out = self.mediawiki.backlinks(&source, true)?;
        let expanded = translations
            .par_iter()
            .map(|t| Ok((t.clone(), self.mediawiki.backlinks(t, true)?)))
            .collect::<Result<Vec<_>>>()?;
        for (translation, synonyms) in expanded {
            out.push(translation);
            out.extend(synonyms);
        }
        Ok(titles_table(dedup_first(out)))
    }

    pub fn category_members(&self, category: &str) -> Result<Vec<QualifiedTitle>> {
        let category = self.parse(category)?;
        self.mediawiki.category_members(&category, MemberKind::Pages)
    }

    pub fn wiki_category_members(&self, category: &str) -> Result<ValueTable> {
        Ok(titles_table(self.category_members(category)?))
    }

    pub fn wiki_subcategories(&self, category: &str) -> Result<ValueTable> {
        let category = self.parse(category)?;
        Ok(titles_table(
            self.mediawiki.category_members(&category, MemberKind::Subcategories)?,
        ))
    }

    pub fn wiki_inbound_links(&self, article: &str) -> Result<ValueTable> {
        let article = self.parse(article)?;
        Ok(titles_table(self.mediawiki.backlinks(&article, false)?))
    }

    pub fn wiki_outbound_links(&self, article: &str) -> Result<ValueTable> {
        let article = self.parse(article)?;
        Ok(titles_table(self.mediawiki.outbound_links(&article)?))
    }

    /// Inbound ∩ outbound, in outbound order.
    pub fn wiki_mutual_links(&self, article: &str) -> Result<ValueTable> {
        let article = self.parse(article)?;
        let inbound = self.mediawiki.backlinks(&article, false)?;
        let outbound = self.mediawiki.outbound_links(&article)?;
        Ok(titles_table(mutual(&inbound, &outbound)))
    }

    /// One row of latitude and longitude, or no rows without coordinates.
    pub fn wiki_geocoordinates(&self, article: &str) -> Result<ValueTable> {
        let article = self.parse(article)?;
        Ok(match self.mediawiki.primary_coordinate(&article)? {
            Some(c) => ValueTable::pairs([(c.latitude.to_string(), c.longitude.to_string())]),
            None => ValueTable::empty(2),
        })
    }

    pub fn facts(&self, article: &str) -> Result<Vec<FactPair>> {
        let article = self.parse(article)?;
        self.wikidata.facts(&article)
    }

    pub fn wiki_data_facts(&self, article: &str) -> Result<ValueTable> {
        Ok(ValueTable::pairs(
            self.facts(article)?.into_iter().map(|f| (f.predicate, f.object)),
        ))
    }

    pub fn wiki_pageviews(&self, article: &str, start: Option<NaiveDate>, end: Option<NaiveDate>) -> Result<ValueTable> {
        let article = self.parse(article)?;
        let (start, end) = resolve_window(start, end);
        Ok(self.pageviews.daily_views(&article, start, end)?.to_table())
    }

    pub fn wiki_page_edits(&self, article: &str, start: Option<NaiveDate>, end: Option<NaiveDate>) -> Result<ValueTable> {
        let article = self.parse(article)?;
        let (start, end) = resolve_window(start, end);
        Ok(self.mediawiki.daily_edit_counts(&article, start, end)?.to_table())
    }
}

/// Fills missing bounds from the default 30-day window.
pub fn resolve_window(start: Option<NaiveDate>, end: Option<NaiveDate>) -> (NaiveDate, NaiveDate) {
    let (default_start, default_end) = default_window();
    match (start, end) {
        (Some(s), Some(e)) => (s, e),
        (Some(s), None) => (s, default_end),
        (None, Some(e)) => (e - chrono::Duration::days(29), e),
        (None, None) => (default_start, default_end),
    }
}

fn titles_table(titles: Vec<QualifiedTitle>) -> ValueTable {
    ValueTable::column(titles.iter().map(ToString::to_string))
}

/// `de, fr` → languages; blank → no filter.
pub fn parse_language_list(text: &str) -> Result<Option<Vec<LanguageCode>>> {
    if text.trim().is_empty() {
        return Ok(None);
    }
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(LanguageCode::new)
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

pub fn parse_date(text: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d")
        .map_err(|_| ToolkitError::bad_input(format!("{text:?} is not a YYYY-MM-DD date")))
}

fn optional_date(args: &[String], i: usize) -> Result<Option<NaiveDate>> {
    match args.get(i).map(|s| s.trim()) {
        None | Some("") => Ok(None),
        Some(s) => parse_date(s).map(Some),
    }
}

fn arity(name: &str, args: &[String], min: usize, max: usize) -> Result<()> {
    if args.len() < min || args.len() > max {
        return Err(ToolkitError::bad_input(format!(
            "{name} takes {min} to {max} arguments, got {}",
            args.len()
        )));
    }
    Ok(())
}

impl FunctionRegistry for Toolkit {
    fn has_function(&self, name: &str) -> bool {
        FUNCTION_NAMES.contains(&name)
    }

    fn call(&self, name: &str, args: &[String]) -> Result<ValueTable> {
        let article = args.first().map(String::as_str).unwrap_or("");
        match name {
            "WIKITRANSLATE" | "WIKIEXPAND" => {
                arity(name, args, 1, 2)?;
                let targets = parse_language_list(args.get(1).map(String::as_str).unwrap_or(""))?;
                if name == "WIKITRANSLATE" {
                    self.wiki_translate(article, targets.as_deref())
                } else {
                    self.wiki_expand(article, targets.as_deref())
                }
            }
            "WIKIPAGEVIEWS" | "WIKIPAGEEDITS" => {
                arity(name, args, 1, 3)?;
                let (start, end) = (optional_date(args, 1)?, optional_date(args, 2)?);
                if name == "WIKIPAGEVIEWS" {
                    self.wiki_pageviews(article, start, end)
                } else {
                    self.wiki_page_edits(article, start, end)
                }
            }
            _ => {
                arity(name, args, 1, 1)?;
                match name {
                    "WIKISYNONYMS" => self.wiki_synonyms(article),
                    "WIKICATEGORYMEMBERS" => self.wiki_category_members(article),
                    "WIKISUBCATEGORIES" => self.wiki_subcategories(article),
                    "WIKIINBOUNDLINKS" => self.wiki_inbound_links(article),
                    "WIKIOUTBOUNDLINKS" => self.wiki_outbound_links(article),
                    "WIKIMUTUALLINKS" => self.wiki_mutual_links(article),
                    "WIKIGEOCOORDINATES" => self.wiki_geocoordinates(article),
                    "WIKIDATAFACTS" => self.wiki_data_facts(article),
                    other => Err(ToolkitError::bad_input(format!("unknown function {other}"))),
                }
            }
        }
    }
}

/// Runs each wave on the rayon pool; results come back in job order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Threaded;

impl Scheduler for Threaded {
    fn run_wave(&self, jobs: usize, job: &(dyn Fn(usize) -> CellOutcome + Sync)) -> Vec<CellOutcome> {
        (0..jobs).into_par_iter().map(job).collect()
    }
}
