//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a lookup fails, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use wikitools_core::grid::{evaluate_grid_with, Grid, Scheduler, Sequential, DEFAULT_MAX_CELLS};
use wikitools_core::title::parse_qualified;
use wikitools_core::{print_grid, print_table, OutputFormat, Result, ToolkitError, ValueTable};

use crate::config::{env_values, parse_config, Settings};
use crate::functions::{parse_date, parse_language_list, Threaded, Toolkit};
use crate::pageviews::TrafficClass;
use crate::scenarios::{self, AdTemplates, FailurePolicy};

#[derive(Debug, Parser)]
#[command(name = "wikitools", version, about = "Wikipedia, Wikidata and Pageviews lookups")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format: tsv, csv or json.
    #[arg(long, global = true, default_value = "tsv")]
    format: OutputFormat,
    /// Fixture archive directory. Implies `--mode replay` unless a mode is given.
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    /// replay, record or passthrough.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Optional `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    endpoint_wikipedia: Option<String>,
    #[arg(long, global = true)]
    endpoint_wikidata: Option<String>,
    #[arg(long, global = true)]
    endpoint_pageviews: Option<String>,
    #[arg(long, global = true)]
    user_agent: Option<String>,
    /// Requests per second per host.
    #[arg(long, global = true)]
    rate_limit: Option<f64>,
    /// Concurrent requests per host.
    #[arg(long, global = true)]
    max_concurrent: Option<usize>,
    /// Abort scenarios on the first failing article.
    #[arg(long, global = true)]
    fail_fast: bool,
}

#[derive(Debug, Args)]
struct TitleArg {
    /// Qualified title, e.g. `en:Berlin`.
    #[arg(value_parser = qualified)]
    title: String,
}

#[derive(Debug, Args)]
struct LangArgs {
    #[command(flatten)]
    title: TitleArg,
    /// Comma-separated target languages, e.g. `de,fr`.
    #[arg(long)]
    langs: Option<String>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[command(flatten)]
    title: TitleArg,
    /// First day, YYYY-MM-DD. Defaults to the 30 days ending yesterday.
    #[arg(long, value_parser = date)]
    start: Option<NaiveDate>,
    #[arg(long, value_parser = date)]
    end: Option<NaiveDate>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Language links of an article.
    Translate(LangArgs),
    /// Redirects to an article.
    Synonyms(TitleArg),
    /// Synonyms plus translations and their synonyms.
    Expand(LangArgs),
    /// Articles in a category.
    CategoryMembers(TitleArg),
    /// Subcategories of a category.
    Subcategories(TitleArg),
    /// Non-redirect pages linking to an article.
    Inbound(TitleArg),
    /// Articles an article links to.
    Outbound(TitleArg),
    /// Links that go both ways.
    Mutual(TitleArg),
    /// Latitude and longitude.
    Geo(TitleArg),
    /// Single-valued Wikidata facts.
    Facts(TitleArg),
    /// Daily human pageviews.
    Pageviews {
        #[command(flatten)]
        range: RangeArgs,
        /// Pageviews agent class (user, spider, automated, all-agents).
        #[arg(long, default_value = "user")]
        agent: String,
        #[arg(long, default_value = "all-access")]
        access: String,
    },
    /// Daily edit counts.
    Pageedits(RangeArgs),
    /// Formula grids.
    #[command(subcommand)]
    Grid(GridCommand),
    /// Multi-article recipes.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Subcommand)]
enum GridCommand {
    /// Evaluate a TSV grid file and print the result.
    Eval {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: usize,
        /// Evaluate one cell at a time.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    /// Category members ranked by pageviews, with images.
    CategoryPanel {
        #[arg(value_parser = qualified)]
        category: String,
        #[arg(long, value_parser = date)]
        start: NaiveDate,
        #[arg(long, value_parser = date)]
        end: NaiveDate,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Ads for category members carrying a fact.
    SearchAds {
        #[arg(value_parser = qualified)]
        category: String,
        /// Fact predicate label, e.g. `height`.
        #[arg(long)]
        fact: String,
        #[arg(long, default_value = "")]
        suffix: String,
        #[arg(long, default_value = "Visit {title}")]
        headline: String,
        #[arg(long, default_value = "{title}: {fact}")]
        description: String,
    },
    /// Mean daily views before and after an event, per language.
    Campaign {
        #[arg(value_parser = qualified)]
        article: String,
        #[arg(long, value_parser = date)]
        start: NaiveDate,
        #[arg(long, value_parser = date)]
        end: NaiveDate,
        #[arg(long, value_parser = date)]
        event: NaiveDate,
    },
}

fn qualified(s: &str) -> std::result::Result<String, String> {
    parse_qualified(s).map(|_| s.to_string()).map_err(|e| e.detail)
}

fn date(s: &str) -> std::result::Result<NaiveDate, String> {
    parse_date(s).map_err(|e| e.detail)
}

/// Layers defaults < environment < config file < flags.
fn settings(global: &GlobalArgs) -> Result<Settings> {
    let mut values = env_values();
    if let Some(path) = &global.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ToolkitError::bad_input(format!("cannot read config {}: {e}", path.display())))?;
        values.extend(parse_config(&text)?);
    }
    let flags: [(&str, Option<String>); 8] = [
        ("fixtures", global.fixtures.as_ref().map(|p| p.display().to_string())),
        ("mode", global.mode.clone()),
        ("endpoint-wikipedia", global.endpoint_wikipedia.clone()),
        ("endpoint-wikidata", global.endpoint_wikidata.clone()),
        ("endpoint-pageviews", global.endpoint_pageviews.clone()),
        ("user-agent", global.user_agent.clone()),
        ("rate-limit", global.rate_limit.map(|r| r.to_string())),
        ("max-concurrent", global.max_concurrent.map(|r| r.to_string())),
    ];
    values.extend(flags.into_iter().filter_map(|(k, v)| Some((k.to_string(), v?))));
    if !values.contains_key("mode") && values.contains_key("fixtures") {
        values.insert("mode".to_string(), "replay".to_string());
    }
    let mut settings = Settings::default();
    settings.apply(&values)?;
    Ok(settings)
}

fn execute(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    let mut toolkit = Toolkit::from_settings(&settings(g)?)?;
    let policy = if g.fail_fast {
        FailurePolicy::FailFast
    } else {
        FailurePolicy::Continue
    };
    let langs = |a: &LangArgs| -> Result<Option<Vec<_>>> {
        a.langs.as_deref().map(parse_language_list).transpose().map(Option::flatten)
    };
    let table: ValueTable = match &cli.command {
        Command::Translate(a) => toolkit.wiki_translate(&a.title.title, langs(a)?.as_deref())?,
        Command::Expand(a) => toolkit.wiki_expand(&a.title.title, langs(a)?.as_deref())?,
        Command::Synonyms(t) => toolkit.wiki_synonyms(&t.title)?,
        Command::CategoryMembers(t) => toolkit.wiki_category_members(&t.title)?,
        Command::Subcategories(t) => toolkit.wiki_subcategories(&t.title)?,
        Command::Inbound(t) => toolkit.wiki_inbound_links(&t.title)?,
        Command::Outbound(t) => toolkit.wiki_outbound_links(&t.title)?,
        Command::Mutual(t) => toolkit.wiki_mutual_links(&t.title)?,
        Command::Geo(t) => toolkit.wiki_geocoordinates(&t.title)?,
        Command::Facts(t) => toolkit.wiki_data_facts(&t.title)?,
        Command::Pageviews { range, agent, access } => {
            toolkit = toolkit.with_traffic(TrafficClass {
                access: access.clone(),
                agent: agent.clone(),
            });
            toolkit.wiki_pageviews(&range.title.title, range.start, range.end)?
        }
        Command::Pageedits(r) => toolkit.wiki_page_edits(&r.title.title, r.start, r.end)?,
        Command::Grid(GridCommand::Eval {
            file,
            max_cells,
            sequential,
        }) => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| ToolkitError::bad_input(format!("cannot read {}: {e}", file.display())))?;
            let grid = Grid::from_tsv(&text)?;
            let scheduler: &dyn Scheduler = if *sequential { &Sequential } else { &Threaded };
            let evaluated = evaluate_grid_with(&grid, &toolkit, *max_cells, scheduler)?;
            return Ok(print_grid(&evaluated, g.format));
        }
        Command::Scenario(ScenarioCommand::CategoryPanel {
            category,
            start,
            end,
            top,
        }) => scenarios::panel_table(&scenarios::category_panel(&toolkit, category, *start, *end, *top, policy)?),
        Command::Scenario(ScenarioCommand::SearchAds {
            category,
            fact,
            suffix,
            headline,
            description,
        }) => {
            let templates = AdTemplates {
                headline,
                description,
            };
            scenarios::ads_table(&scenarios::search_ads(&toolkit, category, fact, suffix, &templates, policy)?)
        }
        Command::Scenario(ScenarioCommand::Campaign {
            article,
            start,
            end,
            event,
        }) => scenarios::campaign_table(&scenarios::campaign(&toolkit, article, *start, *end, *event, policy)?),
    };
    Ok(print_table(&table, g.format))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "wikitools: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "wikitools: {e}");
            1
        }
    }
}
