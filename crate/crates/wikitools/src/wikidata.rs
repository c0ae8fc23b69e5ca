//! Wikidata entity lookup, claim decoding, labels, and single-value facts.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::Value;
use wikitools_core::claims::{simplify_claims, Claim, DataValue, EntityId, RawClaimSet, SimpleValue, Snak};
use wikitools_core::title::{LanguageCode, QualifiedTitle};
use wikitools_core::{Result, ToolkitError};

use crate::transport::{HttpRequestSpec, Transport};

/// Upper bound of ids per `wbgetentities` call.
pub const LABEL_BATCH: usize = 50;

/// One simplified claim: property label and rendered object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactPair {
    pub predicate: String,
    pub object: String,
}

pub struct Wikidata {
    transport: Arc<Transport>,
    endpoint: String,
}

impl Wikidata {
    pub fn new(transport: Arc<Transport>, endpoint: impl Into<String>) -> Self {
        Self {
            transport,
            endpoint: endpoint.into(),
        }
    }

    fn get_entities(&self, params: &[(&str, &str)]) -> Result<serde_json::Map<String, Value>> {
        let mut all = vec![("action", "wbgetentities"), ("format", "json")];
        all.extend_from_slice(params);
        let spec = HttpRequestSpec::get(&self.endpoint, &[], all)?;
        let response = self.transport.fetch(&spec)?;
        let json: Value = serde_json::from_str(&response.body).map_err(|e| {
            ToolkitError::parse_failure(format!("invalid JSON: {e}")).with_url(spec.url())
        })?;
        if let Some(error) = json.get("error") {
            let code = error.get("code").and_then(Value::as_str).unwrap_or("unknown");
            let err = if code == "no-such-entity" {
                ToolkitError::not_found(code)
            } else {
                ToolkitError::bad_input(code)
            };
            return Err(err.with_url(spec.url()));
        }
        json.get("entities")
            .and_then(Value::as_object)
            .cloned()
            .ok_or_else(|| ToolkitError::parse_failure("response lacks entities").with_url(spec.url()))
    }

    /// The item connected to a Wikipedia article.
    pub fn entity_for_article(&self, article: &QualifiedTitle) -> Result<EntityId> {
        article.require_article()?;
        let site = format!("{}wiki", article.language.as_str().replace('-', "_"));
        let title = article.request_title();
        let entities = self.get_entities(&[("sites", &site), ("titles", &title), ("props", "info")])?;
        let entity = entities
            .values()
            .next()
            .ok_or_else(|| ToolkitError::parse_failure("empty entities object"))?;
        if entity.get("missing").is_some() {
            return Err(ToolkitError::not_found(format!("{article} has no Wikidata item")));
        }
        let id = entity
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| ToolkitError::parse_failure("entity without id"))?;
        EntityId::parse(id).map_err(|_| ToolkitError::parse_failure(format!("malformed entity id {id:?}")))
    }

    pub fn claims(&self, id: EntityId) -> Result<RawClaimSet> {
        let id_text = id.to_string();
        let entities = self.get_entities(&[("ids", &id_text), ("props", "claims")])?;
        let entity = entities
            .get(&id_text)
            .ok_or_else(|| ToolkitError::parse_failure(format!("response lacks {id_text}")))?;
        if entity.get("missing").is_some() {
            return Err(ToolkitError::not_found(format!("{id_text} does not exist")));
        }
        match entity.get("claims") {
            None => Ok(RawClaimSet::new()),
            // An entity without statements serializes `claims` as `[]`.
            Some(Value::Array(a)) if a.is_empty() => Ok(RawClaimSet::new()),
            Some(claims) => parse_claims(claims),
        }
    }

    /// Labels in `language`, then English, then the raw id.
    pub fn resolve_labels(&self, ids: &BTreeSet<EntityId>, language: &LanguageCode) -> Result<BTreeMap<EntityId, String>> {
        if ids.is_empty() {
            return Ok(BTreeMap::new());
        }
        let languages = if language.is_english() {
            "en".to_string()
        } else {
            format!("{language}|en")
        };
        let ordered: Vec<EntityId> = ids.iter().copied().collect();
        let chunks: Vec<Result<BTreeMap<EntityId, String>>> = ordered
            .par_chunks(LABEL_BATCH)
            .map(|chunk| {
                let joined = chunk.iter().map(ToString::to_string).collect::<Vec<_>>().join("|");
                let entities =
                    self.get_entities(&[("ids", &joined), ("props", "labels"), ("languages", &languages)])?;
                Ok(chunk
                    .iter()
                    .map(|id| (*id, pick_label(entities.get(&id.to_string()), language, *id)))
                    .collect())
            })
            .collect();
        let mut out = BTreeMap::new();
        for chunk in chunks {
            out.extend(chunk?);
        }
        Ok(out)
    }

    /// Single-value facts of the article's item, labelled in its language and
    /// ordered by property number.
    pub fn facts(&self, article: &QualifiedTitle) -> Result<Vec<FactPair>> {
        let id = self.entity_for_article(article)?;
        let simplified = simplify_claims(&self.claims(id)?)?;
        let mut wanted: BTreeSet<EntityId> = simplified.keys().copied().collect();
        wanted.extend(simplified.values().filter_map(|v| match v {
            SimpleValue::Entity(e) => Some(*e),
            SimpleValue::Text(_) => None,
        }));
        let labels = self.resolve_labels(&wanted, &article.language)?;
        let label = |id: &EntityId| labels.get(id).cloned().unwrap_or_else(|| id.to_string());
        Ok(simplified
            .iter()
            .map(|(property, value)| FactPair {
                predicate: label(property),
                object: match value {
                    SimpleValue::Entity(e) => label(e),
                    SimpleValue::Text(t) => t.clone(),
                },
            })
            .filter(|f| !f.predicate.is_empty() && !f.object.is_empty())
            .collect())
    }
}

fn pick_label(entity: Option<&Value>, language: &LanguageCode, id: EntityId) -> String {
    let labels = entity.and_then(|e| e.get("labels"));
    let lookup = |lang: &str| {
        labels
            .and_then(|l| l.get(lang))
            .and_then(|l| l.get("value"))
            .and_then(Value::as_str)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
    };
    lookup(language.as_str())
        .or_else(|| lookup("en"))
        .unwrap_or_else(|| id.to_string())
}

/// Decodes the `claims` object of a Wikibase entity.
pub fn parse_claims(claims: &Value) -> Result<RawClaimSet> {
    let by_property = claims
        .as_object()
        .ok_or_else(|| ToolkitError::parse_failure("claims is not an object"))?;
    let mut raw = RawClaimSet::new();
    for (property, list) in by_property {
        let property = EntityId::parse(property)
            .ok()
            .filter(EntityId::is_property)
            .ok_or_else(|| ToolkitError::parse_failure(format!("bad property key {property:?}")))?;
        let list = list
            .as_array()
            .ok_or_else(|| ToolkitError::parse_failure(format!("claims of {property} are not a list")))?;
        let claims = list.iter().map(parse_claim).collect::<Result<Vec<_>>>()?;
        if !claims.is_empty() {
            raw.insert(property, claims)?;
        }
    }
    Ok(raw)
}

fn parse_claim(claim: &Value) -> Result<Claim> {
    let snak = claim
        .get("mainsnak")
        .ok_or_else(|| ToolkitError::parse_failure("claim without mainsnak"))?;
    let mainsnak = match snak.get("snaktype").and_then(Value::as_str) {
        Some("value") => {
            let datavalue = snak
                .get("datavalue")
                .ok_or_else(|| ToolkitError::parse_failure("value snak without datavalue"))?;
            Snak::Value(parse_datavalue(datavalue)?)
        }
        Some("somevalue") => Snak::SomeValue,
        Some("novalue") => Snak::NoValue,
        other => {
            return Err(ToolkitError::parse_failure(format!("unknown snaktype {other:?}")))
        }
    };
    Ok(Claim { mainsnak })
}

pub fn parse_datavalue(datavalue: &Value) -> Result<DataValue> {
    let kind = datavalue
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| ToolkitError::parse_failure("datavalue without type"))?;
    let value = datavalue
        .get("value")
        .ok_or_else(|| ToolkitError::parse_failure(format!("{kind} datavalue without value")))?;
    let malformed = || ToolkitError::parse_failure(format!("malformed {kind} datavalue"));
    let text = |v: &Value, key: &str| v.get(key).and_then(Value::as_str).map(str::to_string);
    Ok(match kind {
        "wikibase-entityid" => {
            let id = text(value, "id")
                .or_else(|| {
                    let number = value.get("numeric-id")?.as_u64()?;
                    let prefix = match value.get("entity-type")?.as_str()? {
                        "item" => "Q",
                        "property" => "P",
                        _ => return None,
                    };
                    Some(format!("{prefix}{number}"))
                })
                .ok_or_else(malformed)?;
            match EntityId::parse(&id) {
                Ok(e) => DataValue::EntityRef(e),
                Err(_) => DataValue::OtherEntity(id),
            }
        }
        "string" => DataValue::Text(value.as_str().ok_or_else(malformed)?.to_string()),
        "url" => DataValue::Url(value.as_str().ok_or_else(malformed)?.to_string()),
        "monolingualtext" => DataValue::MonolingualText {
            text: text(value, "text").ok_or_else(malformed)?,
            language: text(value, "language").unwrap_or_default(),
        },
        "quantity" => DataValue::Quantity {
            amount: text(value, "amount").ok_or_else(malformed)?,
        },
        "time" => DataValue::Time {
            time: text(value, "time").ok_or_else(malformed)?,
            precision: value
                .get("precision")
                .and_then(Value::as_u64)
                .and_then(|p| u8::try_from(p).ok())
                .ok_or_else(malformed)?,
        },
        "globecoordinate" => DataValue::GlobeCoordinate {
            latitude: value.get("latitude").and_then(Value::as_f64).ok_or_else(malformed)?,
            longitude: value.get("longitude").and_then(Value::as_f64).ok_or_else(malformed)?,
        },
        other => DataValue::Unrecognized {
            kind: other.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn decodes_every_datavalue_kind() {
        let cases = [
            (json!({"type": "string", "value": "DE-BE"}), DataValue::Text("DE-BE".into())),
            (
                json!({"type": "wikibase-entityid", "value": {"entity-type": "item", "numeric-id": 183, "id": "Q183"}}),
                DataValue::EntityRef(EntityId::item(183)),
            ),
            (
                json!({"type": "wikibase-entityid", "value": {"entity-type": "item", "numeric-id": 183}}),
                DataValue::EntityRef(EntityId::item(183)),
            ),
            (
                json!({"type": "wikibase-entityid", "value": {"entity-type": "lexeme", "id": "L7"}}),
                DataValue::OtherEntity("L7".into()),
            ),
            (
                json!({"type": "quantity", "value": {"amount": "+368", "unit": "http://www.wikidata.org/entity/Q11573"}}),
                DataValue::Quantity { amount: "+368".into() },
            ),
            (
                json!({"type": "time", "value": {"time": "+1237-01-01T00:00:00Z", "precision": 9}}),
                DataValue::Time { time: "+1237-01-01T00:00:00Z".into(), precision: 9 },
            ),
            (
                json!({"type": "globecoordinate", "value": {"latitude": 52.5, "longitude": 13.4}}),
                DataValue::GlobeCoordinate { latitude: 52.5, longitude: 13.4 },
            ),
            (
                json!({"type": "monolingualtext", "value": {"text": "Berlin", "language": "de"}}),
                DataValue::MonolingualText { text: "Berlin".into(), language: "de".into() },
            ),
            (
                json!({"type": "wikibase-form", "value": {}}),
                DataValue::Unrecognized { kind: "wikibase-form".into() },
            ),
        ];
        for (input, expected) in cases {
            assert_eq!(parse_datavalue(&input).unwrap(), expected, "{input}");
        }
        assert!(parse_datavalue(&json!({"type": "time", "value": {"time": "+1"}})).is_err());
    }

    #[test]
    fn decodes_claim_sets() {
        let claims = json!({
            "P300": [{"mainsnak": {"snaktype": "value", "property": "P300", "datavalue": {"type": "string", "value": "DE-BE"}}}],
            "P6": [
                {"mainsnak": {"snaktype": "somevalue", "property": "P6"}},
                {"mainsnak": {"snaktype": "novalue", "property": "P6"}}
            ],
            "P99": []
        });
        let raw = parse_claims(&claims).unwrap();
        assert_eq!(raw.len(), 2);
        assert_eq!(raw.by_property[&EntityId::property(6)][1].mainsnak, Snak::NoValue);
        assert!(parse_claims(&json!({"Q1": []})).is_err());
        assert!(parse_claims(&json!({"P1": [{"mainsnak": {"snaktype": "odd"}}]})).is_err());
    }

    #[test]
    fn label_fallback_chain() {
        let de = LanguageCode::new("de").unwrap();
        let id = EntityId::item(1);
        let both = json!({"labels": {"de": {"language": "de", "value": "Hauptstadt"}, "en": {"language": "en", "value": "capital"}}});
        assert_eq!(pick_label(Some(&both), &de, id), "Hauptstadt");
        let en_only = json!({"labels": {"en": {"language": "en", "value": "capital"}}});
        assert_eq!(pick_label(Some(&en_only), &de, id), "capital");
        assert_eq!(pick_label(Some(&json!({"labels": {}})), &de, id), "Q1");
        assert_eq!(pick_label(None, &de, id), "Q1");
    }
}
