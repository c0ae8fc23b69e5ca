//! Language codes and `language:Title` pairs.
//!
//! Titles are kept in the human form returned by the APIs (spaces, not
//! underscores); the underscore form is produced on demand by
//! [`QualifiedTitle::request_title`].

use alloc::borrow::ToOwned;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::error::{Result, ToolkitError};

/// Category namespace prefixes recognized without any configuration.
pub const CATEGORY_PREFIXES: &[&str] = &["Category", "Kategorie", "Catégorie", "Categoría"];

/// MediaWiki namespace numbers used by this toolkit.
pub const NS_ARTICLE: i64 = 0;
pub const NS_CATEGORY: i64 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageCode(String);

impl LanguageCode {
    /// Validates `code` syntactically; ASCII upper case is folded to lower case.
    pub fn new(code: &str) -> Result<Self> {
        let code = code.trim().to_ascii_lowercase();
        let len = code.len();
        if !(2..=12).contains(&len) {
            return Err(ToolkitError::bad_input(alloc::format!(
                "language code {code:?} must be 2 to 12 characters"
            )));
        }
        let mut chars = code.chars();
        let first_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
        let rest_ok = chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-');
        if !first_ok || !rest_ok {
            return Err(ToolkitError::bad_input(alloc::format!(
                "invalid language code {code:?}"
            )));
        }
        Ok(Self(code))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_english(&self) -> bool {
        self.0 == "en"
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LanguageCode {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamespaceHint {
    Article,
    Category,
    Unknown,
}

impl NamespaceHint {
    /// Maps a MediaWiki namespace number onto a hint.
    pub fn from_ns(ns: i64) -> Self {
        match ns {
            NS_ARTICLE => NamespaceHint::Article,
            NS_CATEGORY => NamespaceHint::Category,
            _ => NamespaceHint::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedTitle {
    pub language: LanguageCode,
    pub title: String,
    pub namespace_hint: NamespaceHint,
}

impl QualifiedTitle {
    /// Builds a title, detecting the namespace from the built-in category prefixes.
    pub fn new(language: LanguageCode, title: &str) -> Result<Self> {
        Self::with_prefixes(language, title, &[])
    }

    pub fn with_prefixes(language: LanguageCode, title: &str, extra: &[&str]) -> Result<Self> {
        let title = title.trim();
        if title.is_empty() {
            return Err(ToolkitError::bad_input("empty title"));
        }
        let namespace_hint = if has_category_prefix(title, extra) {
            NamespaceHint::Category
        } else {
            NamespaceHint::Article
        };
        Ok(Self {
            language,
            title: title.to_owned(),
            namespace_hint,
        })
    }

    /// Title as reported by an API together with its namespace number.
    pub fn from_api(language: LanguageCode, title: &str, ns: i64) -> Result<Self> {
        let mut q = Self::new(language, title)?;
        q.namespace_hint = NamespaceHint::from_ns(ns);
        Ok(q)
    }

    pub fn is_category(&self) -> bool {
        self.namespace_hint == NamespaceHint::Category
    }

    /// The underscore form sent to the APIs.
    pub fn request_title(&self) -> String {
        to_request_title(&self.title)
    }

    pub fn require_article(&self) -> Result<()> {
        if self.is_category() {
            return Err(ToolkitError::bad_input(alloc::format!(
                "{self} is a category, expected an article"
            )));
        }
        Ok(())
    }

    pub fn require_category(&self) -> Result<()> {
        if !self.is_category() {
            return Err(ToolkitError::bad_input(alloc::format!(
                "{self} is not a category"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for QualifiedTitle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.language, self.title)
    }
}

impl FromStr for QualifiedTitle {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        parse_qualified(s)
    }
}

fn has_category_prefix(title: &str, extra: &[&str]) -> bool {
    let Some((prefix, rest)) = title.split_once(':') else {
        return false;
    };
    if rest.trim().is_empty() {
        return false;
    }
    let prefix = prefix.trim();
    CATEGORY_PREFIXES
        .iter()
        .chain(extra.iter())
        .any(|known| known.eq_ignore_ascii_case(prefix))
}

/// Splits `language:Title` at the first colon only.
pub fn parse_qualified(input: &str) -> Result<QualifiedTitle> {
    parse_qualified_with(input, &[])
}

/// Like [`parse_qualified`] with additional category prefixes.
pub fn parse_qualified_with(input: &str, extra_prefixes: &[&str]) -> Result<QualifiedTitle> {
    let Some((language, title)) = input.split_once(':') else {
        return Err(ToolkitError::bad_input(alloc::format!(
            "{input:?} is not of the form language:Title"
        )));
    };
    if language.trim().is_empty() {
        return Err(ToolkitError::bad_input(alloc::format!(
            "{input:?} has an empty language"
        )));
    }
    if title.trim().is_empty() {
        return Err(ToolkitError::bad_input(alloc::format!(
            "{input:?} has an empty title"
        )));
    }
    QualifiedTitle::with_prefixes(LanguageCode::new(language)?, title, extra_prefixes)
}

/// Replaces each whitespace character with `_`.
pub fn to_request_title(title: &str) -> String {
    title
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect()
}
