//! Wikidata claim model and single-value simplification.
//!
//! Only properties that carry exactly one value-bearing claim survive
//! simplification; `somevalue`/`novalue` snaks are ignored when counting and
//! ranks are not consulted at all.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Result, ToolkitError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Item,
    Property,
}

/// `Q…` or `P…` identifier. Orders by kind, then numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId {
    kind: EntityKind,
    number: u64,
}

impl EntityId {
    pub fn item(number: u64) -> Self {
        assert!(number > 0);
        Self {
            kind: EntityKind::Item,
            number,
        }
    }

    pub fn property(number: u64) -> Self {
        assert!(number > 0);
        Self {
            kind: EntityKind::Property,
            number,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || ToolkitError::bad_input(alloc::format!("invalid entity id {s:?}"));
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('Q') => EntityKind::Item,
            Some('P') => EntityKind::Property,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty()
            || digits.starts_with('0')
            || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let number = digits.parse().map_err(|_| bad())?;
        Ok(Self { kind, number })
    }

    pub fn kind(&self) -> EntityKind {
        self.kind
    }

    pub fn number(&self) -> u64 {
        self.number
    }

    pub fn is_property(&self) -> bool {
        self.kind == EntityKind::Property
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            EntityKind::Item => 'Q',
            EntityKind::Property => 'P',
        };
        write!(f, "{prefix}{}", self.number)
    }
}

impl FromStr for EntityId {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Datavalue of a `value` snak, decoded from the Wikibase JSON model.
#[derive(Debug, Clone, PartialEq)]
pub enum DataValue {
    EntityRef(EntityId),
    /// Entity ids outside the Q/P space (lexemes, forms, senses).
    OtherEntity(String),
    Text(String),
    Url(String),
    MonolingualText { text: String, language: String },
    Quantity { amount: String },
    Time { time: String, precision: u8 },
    GlobeCoordinate { latitude: f64, longitude: f64 },
    /// A datavalue type this toolkit cannot render.
    Unrecognized { kind: String },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Snak {
    Value(DataValue),
    SomeValue,
    NoValue,
}

impl Snak {
    pub fn is_value(&self) -> bool {
        matches!(self, Snak::Value(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub mainsnak: Snak,
}

impl Claim {
    pub fn value(v: DataValue) -> Self {
        Self {
            mainsnak: Snak::Value(v),
        }
    }
}

/// Claims of one entity grouped by property.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawClaimSet {
    pub by_property: BTreeMap<EntityId, Vec<Claim>>,
}

impl RawClaimSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, property: EntityId, claims: Vec<Claim>) -> Result<()> {
        if !property.is_property() {
            return Err(ToolkitError::bad_input(alloc::format!(
                "{property} is not a property id"
            )));
        }
        if claims.is_empty() {
            return Err(ToolkitError::bad_input(alloc::format!(
                "{property} has no claims"
            )));
        }
        self.by_property.insert(property, claims);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.by_property.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_property.is_empty()
    }
}

/// Simplified object of a single-value claim. Entity references keep their id
/// until labels are resolved.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SimpleValue {
    Entity(EntityId),
    Text(String),
}

/// Keeps each property with exactly one value-bearing claim and reduces that
/// claim's datavalue to a [`SimpleValue`].
pub fn simplify_claims(raw: &RawClaimSet) -> Result<BTreeMap<EntityId, SimpleValue>> {
    let mut out = BTreeMap::new();
    for (property, claims) in &raw.by_property {
        let mut values = claims.iter().filter_map(|c| match &c.mainsnak {
            Snak::Value(v) => Some(v),
            _ => None,
        });
        let (Some(only), None) = (values.next(), values.next()) else {
            continue;
        };
        out.insert(*property, simplify_value(only)?);
    }
    Ok(out)
}

pub fn simplify_value(value: &DataValue) -> Result<SimpleValue> {
    Ok(match value {
        DataValue::EntityRef(id) => SimpleValue::Entity(*id),
        DataValue::OtherEntity(id) => SimpleValue::Text(id.clone()),
        DataValue::Text(s) | DataValue::Url(s) => SimpleValue::Text(s.clone()),
        DataValue::MonolingualText { text, .. } => SimpleValue::Text(text.clone()),
        DataValue::Quantity { amount } => {
            SimpleValue::Text(amount.strip_prefix('+').unwrap_or(amount).to_string())
        }
        DataValue::Time { time, precision } => SimpleValue::Text(render_time(time, *precision)?),
        DataValue::GlobeCoordinate {
            latitude,
            longitude,
        } => SimpleValue::Text(alloc::format!("{latitude:.6},{longitude:.6}")),
        DataValue::Unrecognized { kind } => {
            return Err(ToolkitError::parse_failure(alloc::format!(
                "unrecognized datavalue type {kind:?}"
            )))
        }
    })
}

/// Wikibase precision codes: 9 = year, 10 = month, 11 = day.
const PRECISION_MONTH: u8 = 10;
const PRECISION_DAY: u8 = 11;

/// Renders a Wikibase timestamp (`+1237-01-01T00:00:00Z`) as an ISO-8601 date
/// truncated to its precision. Coarser than a year still prints the year.
pub fn render_time(time: &str, precision: u8) -> Result<String> {
    let bad = || ToolkitError::parse_failure(alloc::format!("malformed time value {time:?}"));
    let (negative, body) = match time.as_bytes().first() {
        Some(b'+') => (false, &time[1..]),
        Some(b'-') => (true, &time[1..]),
        _ => (false, time),
    };
    let date = body.split('T').next().ok_or_else(bad)?;
    let mut parts = date.splitn(3, '-');
    let (Some(year), Some(month), Some(day)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(year) || !all_digits(month) || !all_digits(day) {
        return Err(bad());
    }
    let trimmed = year.trim_start_matches('0');
    let year = if trimmed.len() >= 4 {
        trimmed.to_string()
    } else {
        alloc::format!("{:0>4}", trimmed)
    };
    let sign = if negative { "-" } else { "" };
    Ok(match precision {
        p if p >= PRECISION_DAY => alloc::format!("{sign}{year}-{month}-{day}"),
        PRECISION_MONTH => alloc::format!("{sign}{year}-{month}"),
        _ => alloc::format!("{sign}{year}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(n: u64) -> EntityId {
        EntityId::property(n)
    }

    #[test]
    fn entity_id_parsing_and_order() {
        assert_eq!(EntityId::parse("Q64").unwrap(), EntityId::item(64));
        assert_eq!(EntityId::parse("P300").unwrap().to_string(), "P300");
        for bad in ["", "Q", "Q0", "Q012", "X1", "q64", "P1a"] {
            assert!(EntityId::parse(bad).is_err(), "{bad}");
        }
        assert!(p(9) < p(10));
        assert!(p(300) < p(1082));
    }

    #[test]
    fn multi_value_property_is_dropped() {
        let mut raw = RawClaimSet::new();
        raw.insert(
            p(6),
            vec![
                Claim::value(DataValue::EntityRef(EntityId::item(1))),
                Claim::value(DataValue::EntityRef(EntityId::item(2))),
            ],
        )
        .unwrap();
        raw.insert(p(300), vec![Claim::value(DataValue::Text("DE-BE".into()))])
            .unwrap();
        let simple = simplify_claims(&raw).unwrap();
        assert!(!simple.contains_key(&p(6)));
        assert_eq!(simple[&p(300)], SimpleValue::Text("DE-BE".into()));
    }

    #[test]
    fn somevalue_and_novalue_do_not_count() {
        let mut raw = RawClaimSet::new();
        raw.insert(
            p(1),
            vec![
                Claim { mainsnak: Snak::NoValue },
                Claim::value(DataValue::Text("kept".into())),
            ],
        )
        .unwrap();
        raw.insert(p(2), vec![Claim { mainsnak: Snak::SomeValue }]).unwrap();
        let simple = simplify_claims(&raw).unwrap();
        assert_eq!(simple.len(), 1);
        assert_eq!(simple[&p(1)], SimpleValue::Text("kept".into()));
    }

    #[test]
    fn empty_set_simplifies_to_empty_map() {
        assert!(simplify_claims(&RawClaimSet::new()).unwrap().is_empty());
    }

    #[test]
    fn rejects_empty_claim_list_and_item_keys() {
        let mut raw = RawClaimSet::new();
        assert!(raw.insert(p(1), vec![]).is_err());
        assert!(raw
            .insert(EntityId::item(1), vec![Claim { mainsnak: Snak::NoValue }])
            .is_err());
    }

    #[test]
    fn value_rendering() {
        let q = DataValue::Quantity { amount: "+368".into() };
        assert_eq!(simplify_value(&q).unwrap(), SimpleValue::Text("368".into()));
        let q = DataValue::Quantity { amount: "-12.5".into() };
        assert_eq!(simplify_value(&q).unwrap(), SimpleValue::Text("-12.5".into()));
        let c = DataValue::GlobeCoordinate {
            latitude: 52.516666666667,
            longitude: 13.383333333333,
        };
        assert_eq!(
            simplify_value(&c).unwrap(),
            SimpleValue::Text("52.516667,13.383333".into())
        );
        let m = DataValue::MonolingualText {
            text: "Berlin".into(),
            language: "de".into(),
        };
        assert_eq!(simplify_value(&m).unwrap(), SimpleValue::Text("Berlin".into()));
    }

    #[test]
    fn unrecognized_kind_is_a_parse_failure_naming_it() {
        let err = simplify_value(&DataValue::Unrecognized {
            kind: "musical-notation".into(),
        })
        .unwrap_err();
        assert!(err.is(crate::ErrorKind::ParseFailure));
        assert!(err.detail.contains("musical-notation"));
    }

    #[test]
    fn time_truncation() {
        assert_eq!(render_time("+1237-01-01T00:00:00Z", 9).unwrap(), "1237");
        assert_eq!(render_time("+2016-01-13T00:00:00Z", 11).unwrap(), "2016-01-13");
        assert_eq!(render_time("+2016-01-00T00:00:00Z", 10).unwrap(), "2016-01");
        assert_eq!(render_time("+00000002016-03-04T00:00:00Z", 11).unwrap(), "2016-03-04");
        assert_eq!(render_time("-0500-00-00T00:00:00Z", 7).unwrap(), "-0500");
        assert_eq!(render_time("+2016-01-13T10:00:00Z", 14).unwrap(), "2016-01-13");
        assert!(render_time("yesterday", 11).is_err());
    }
}
