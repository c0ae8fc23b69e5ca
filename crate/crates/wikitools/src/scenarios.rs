//! Multi-article recipes built from the toolkit functions: a ranked
//! category panel, search-ad generation and a campaign before/after view.
//!
//! Fan-out runs on the rayon pool; rows are assembled in a fixed order so
//! output does not depend on completion order. By default a failing
//! article leaves empty fields (or is skipped) instead of aborting; the
//! `fail_fast` policy turns any such failure into an error.

use chrono::NaiveDate;
use log::warn;
use rayon::prelude::*;
use wikitools_core::series::check_range;
use wikitools_core::title::QualifiedTitle;
use wikitools_core::{ErrorKind, Result, ToolkitError, ValueTable};

use crate::functions::Toolkit;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FailurePolicy {
    #[default]
    Continue,
    FailFast,
}

impl FailurePolicy {
    fn absorb<T>(self, what: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if self == FailurePolicy::Continue => {
                warn!("{what}: {e}");
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PanelRow {
    pub rank: usize,
    pub title: QualifiedTitle,
    /// `None` when the member's pageviews could not be fetched.
    pub views: Option<u64>,
    pub image: String,
}

/// Category members ranked by total views over `[start, end]`, ties broken
/// alphabetically, joined with each member's `image` fact.
pub fn category_panel(
    toolkit: &Toolkit,
    category: &str,
    start: NaiveDate,
    end: NaiveDate,
    top_n: usize,
    policy: FailurePolicy,
) -> Result<Vec<PanelRow>> {
    if top_n == 0 {
        return Err(ToolkitError::bad_input("top-n must be at least 1"));
    }
    check_range(start, end)?;
    let members = toolkit.category_members(category)?;
    let views = members
        .par_iter()
        .map(|m| policy.absorb(&m.to_string(), toolkit.pageviews.total_views(m, start, end)))
        .collect::<Result<Vec<_>>>()?;

    let mut ranked: Vec<(QualifiedTitle, Option<u64>)> = members.into_iter().zip(views).collect();
    // Fetched totals descending, then failed members; titles break ties.
    ranked.sort_by(|(ta, va), (tb, vb)| {
        vb.is_some()
            .cmp(&va.is_some())
            .then(vb.cmp(va))
            .then_with(|| ta.title.cmp(&tb.title))
    });
    ranked.truncate(top_n);

    let images = ranked
        .par_iter()
        .map(|(t, _)| {
            let facts = policy.absorb(&t.to_string(), toolkit.facts(&t.to_string()))?;
            Ok(facts
                .unwrap_or_default()
                .into_iter()
                .find(|f| f.predicate == "image")
                .map(|f| f.object)
                .unwrap_or_default())
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ranked
        .into_iter()
        .zip(images)
        .enumerate()
        .map(|(i, ((title, views), image))| PanelRow {
            rank: i + 1,
            title,
            views,
            image,
        })
        .collect())
}

pub fn panel_table(rows: &[PanelRow]) -> ValueTable {
    let mut table = ValueTable::empty(4);
    for row in rows {
        table
            .push_row(vec![
                row.rank.to_string(),
                row.title.to_string(),
                row.views.map(|v| v.to_string()).unwrap_or_default(),
                row.image.clone(),
            ])
            .expect("four columns");
    }
    table
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdRow {
    pub title: QualifiedTitle,
    pub headline: String,
    pub description: String,
    pub keywords: String,
}

pub struct AdTemplates<'a> {
    pub headline: &'a str,
    pub description: &'a str,
}

pub fn fill_template(template: &str, title: &str, fact: &str) -> String {
    template.replace("{title}", title).replace("{fact}", fact)
}

/// One ad per member carrying `predicate`; members without it are skipped.
pub fn search_ads(
    toolkit: &Toolkit,
    category: &str,
    predicate: &str,
    keyword_suffix: &str,
    templates: &AdTemplates<'_>,
    policy: FailurePolicy,
) -> Result<Vec<AdRow>> {
    for t in [templates.headline, templates.description] {
        if !t.contains("{title}") && !t.contains("{fact}") {
            return Err(ToolkitError::bad_input(format!(
                "template {t:?} uses neither {{title}} nor {{fact}}"
            )));
        }
    }
    let members = toolkit.category_members(category)?;
    let rows = members
        .par_iter()
        .map(|m| -> Result<Option<AdRow>> {
            let name = m.to_string();
            let Some(facts) = policy.absorb(&name, toolkit.facts(&name))? else {
                return Ok(None);
            };
            let Some(fact) = facts.into_iter().find(|f| f.predicate == predicate) else {
                return Ok(None);
            };
            let synonyms = policy
                .absorb(&name, toolkit.mediawiki.backlinks(m, true))?
                .unwrap_or_default();
            let keywords = synonyms
                .iter()
                .map(|s| format!("{} {keyword_suffix}", s.title).trim_end().to_string())
                .collect::<Vec<_>>()
                .join(",");
            Ok(Some(AdRow {
                headline: fill_template(templates.headline, &m.title, &fact.object),
                description: fill_template(templates.description, &m.title, &fact.object),
                title: m.clone(),
                keywords,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn ads_table(rows: &[AdRow]) -> ValueTable {
    let mut table = ValueTable::empty(4);
    for row in rows {
        table
            .push_row(vec![
                row.title.to_string(),
                row.headline.clone(),
                row.description.clone(),
                row.keywords.clone(),
            ])
            .expect("four columns");
    }
    table
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignRow {
    pub article: QualifiedTitle,
    /// Days in `[start, event)` and `[event, end]`.
    pub pre_days: usize,
    pub post_days: usize,
    /// `None` for an empty window or a language without data.
    pub pre_mean: Option<f64>,
    pub post_mean: Option<f64>,
    pub total: Option<u64>,
}

impl CampaignRow {
    /// post / pre; undefined when the pre-event mean is missing or zero.
    pub fn ratio(&self) -> Option<f64> {
        match (self.pre_mean, self.post_mean) {
            (Some(pre), Some(post)) if pre > 0.0 => Some(post / pre),
            _ => None,
        }
    }
}

/// Mean daily views before and after `event` for the article and every
/// translation. Languages without pageview data keep empty means.
pub fn campaign(
    toolkit: &Toolkit,
    article: &str,
    start: NaiveDate,
    end: NaiveDate,
    event: NaiveDate,
    policy: FailurePolicy,
) -> Result<Vec<CampaignRow>> {
    check_range(start, end)?;
    if event < start || event > end {
        return Err(ToolkitError::bad_input(format!(
            "event date {event} lies outside {start}..{end}"
        )));
    }
    let source = toolkit.parse(article)?;
    let mut articles = vec![source.clone()];
    articles.extend(toolkit.translations(article, None)?);

    let pre_days = (event - start).num_days() as usize;
    let post_days = (end - event).num_days() as usize + 1;
    let day_after_end = end.succ_opt().unwrap_or(end);

    articles
        .par_iter()
        .map(|a| {
            let series = match toolkit.pageviews.daily_views(a, start, end) {
                Err(e) if e.is(ErrorKind::NotFound) => None,
                r => policy.absorb(&a.to_string(), r)?,
            };
            Ok(CampaignRow {
                article: a.clone(),
                pre_days,
                post_days,
                pre_mean: series.as_ref().and_then(|s| s.mean(start, event)),
                post_mean: series.as_ref().and_then(|s| s.mean(event, day_after_end)),
                total: series.as_ref().map(|s| s.total()),
            })
        })
        .collect()
}

fn decimal(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.3}")).unwrap_or_default()
}

pub fn campaign_table(rows: &[CampaignRow]) -> ValueTable {
    let mut table = ValueTable::empty(4);
    for row in rows {
        table
            .push_row(vec![
                row.article.language.to_string(),
                decimal(row.pre_mean),
                decimal(row.post_mean),
                decimal(row.ratio()),
            ])
            .expect("four columns");
    }
    table
}
