use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{Result, ToolkitError};
use crate::table::ValueTable;

/// Daily counts over a closed date interval, one point per day.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailyCountSeries {
    points: Vec<(NaiveDate, u64)>,
}

pub fn check_range(start: NaiveDate, end: NaiveDate) -> Result<()> {
    if start > end {
        return Err(ToolkitError::bad_input(alloc::format!(
            "start {start} is after end {end}"
        )));
    }
    Ok(())
}

/// Number of days in `[start, end]`.
pub fn days_inclusive(start: NaiveDate, end: NaiveDate) -> usize {
    if start > end {
        return 0;
    }
    (end - start).num_days() as usize + 1
}

impl DailyCountSeries {
    /// Sums `counts` per day into a dense series over `[start, end]`.
    /// Entries outside the interval are ignored; missing days count zero.
    pub fn dense<I>(start: NaiveDate, end: NaiveDate, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NaiveDate, u64)>,
    {
        check_range(start, end)?;
        let mut buckets: BTreeMap<NaiveDate, u64> = BTreeMap::new();
        for (day, n) in counts {
            if day >= start && day <= end {
                *buckets.entry(day).or_insert(0) += n;
            }
        }
        let points = start
            .iter_days()
            .take(days_inclusive(start, end))
            .map(|day| (day, buckets.get(&day).copied().unwrap_or(0)))
            .collect();
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(NaiveDate, u64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.points.iter().map(|&(_, n)| n).sum()
    }

    /// Points whose date lies in `[from, until)`.
    pub fn window(&self, from: NaiveDate, until: NaiveDate) -> impl Iterator<Item = &(NaiveDate, u64)> {
        self.points
            .iter()
            .filter(move |(d, _)| *d >= from && *d < until)
    }

    /// Mean daily count over `[from, until)`, `None` for an empty window.
    pub fn mean(&self, from: NaiveDate, until: NaiveDate) -> Option<f64> {
        let (days, sum) = self
            .window(from, until)
            .fold((0u64, 0u64), |(d, s), &(_, n)| (d + 1, s + n));
        (days > 0).then(|| sum as f64 / days as f64)
    }

    /// Two columns: ISO date and count.
    pub fn to_table(&self) -> ValueTable {
        ValueTable::pairs(
            self.points
                .iter()
                .map(|(d, n)| (d.format("%Y-%m-%d").to_string(), n.to_string())),
        )
    }
}
