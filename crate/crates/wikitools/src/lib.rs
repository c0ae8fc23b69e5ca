//! Wikipedia, Wikidata and Pageviews lookups, recorded fixtures, and a
//! formula grid whose `WIKI*` functions call them.

pub mod cli;
pub mod config;
pub mod functions;
pub mod mediawiki;
pub mod pageviews;
pub mod scenarios;
pub mod transport;
pub mod wikidata;

pub use config::{Endpoints, Settings};
pub use functions::{Threaded, Toolkit, FUNCTION_NAMES};
pub use transport::{FixtureMode, Transport, TransportConfig};
pub use wikitools_core as core;
