//! Order-preserving list helpers behind the link and translation functions.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::title::{LanguageCode, QualifiedTitle};

/// Drops repeated items, keeping the first occurrence.
pub fn dedup_first<T: Ord + Clone>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut seen = BTreeSet::new();
    items
        .into_iter()
        .filter(|item| seen.insert(item.clone()))
        .collect()
}

/// Items of `outbound` that also occur in `inbound`, in `outbound` order.
pub fn mutual<T: Ord + Clone>(inbound: &[T], outbound: &[T]) -> Vec<T> {
    let inbound: BTreeSet<&T> = inbound.iter().collect();
    dedup_first(outbound.iter().filter(|t| inbound.contains(t)).cloned())
}

/// Keeps titles whose language is in `targets`; `None` admits everything.
pub fn filter_languages(
    titles: Vec<QualifiedTitle>,
    targets: Option<&[LanguageCode]>,
) -> Vec<QualifiedTitle> {
    match targets {
        None => titles,
        Some(targets) => titles
            .into_iter()
            .filter(|t| targets.contains(&t.language))
            .collect(),
    }
}
