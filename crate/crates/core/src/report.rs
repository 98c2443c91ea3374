//! Line-oriented reports with a JSON mirror.
//!
//! A record renders as `KIND [tag] key=value …`. Values that are empty or
//! contain whitespace, `"` or `=` are written as JSON string literals, so
//! every line parses back unambiguously.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub tag: Option<String>,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record {
            kind: kind.to_string(),
            tag: None,
            fields: Vec::new(),
        }
    }

    pub fn tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_line(&self) -> String {
        let mut out = self.kind.clone();
        if let Some(tag) = &self.tag {
            out.push(' ');
            out.push_str(&quote(tag));
        }
        for (k, v) in &self.fields {
            out.push(' ');
            out.push_str(k);
            out.push('=');
            out.push_str(&quote(v));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let fields: Map<String, Value> = self
            .fields
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::String(self.kind.clone()));
        obj.insert(
            "tag".into(),
            self.tag.clone().map_or(Value::Null, Value::String),
        );
        obj.insert("fields".into(), Value::Object(fields));
        Value::Object(obj)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::BadReference(format!("malformed report record: {what}"));
        let obj = value.as_object().ok_or_else(|| bad("not an object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("kind"))?;
        let tag = match obj.get("tag") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(bad("tag")),
        };
        let fields = obj
            .get("fields")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("fields"))?
            .iter()
            .map(|(k, v)| {
                v.as_str()
                    .map(|s| (k.clone(), s.to_string()))
                    .ok_or_else(|| bad(k))
            })
            .collect::<Result<_>>()?;
        Ok(Record {
            kind: kind.to_string(),
            tag,
            fields,
        })
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let mut rest = line.trim_start();
        let mut tokens: Vec<(Option<String>, String)> = Vec::new();
        while !rest.is_empty() {
            let (token, tail) = next_token(rest)?;
            tokens.push(token);
            rest = tail.trim_start();
        }
        let mut iter = tokens.into_iter();
        let kind = match iter.next() {
            Some((None, k)) => k,
            _ => {
                return Err(Error::BadReference(format!(
                    "report line without a kind: {line}"
                )))
            }
        };
        let mut record = Record::new(&kind);
        for (i, (key, value)) in iter.enumerate() {
            match key {
                Some(k) => record.fields.push((k, value)),
                None if i == 0 => record.tag = Some(value),
                None => {
                    return Err(Error::BadReference(format!(
                        "stray token `{value}` in: {line}"
                    )))
                }
            }
        }
        Ok(record)
    }
}

fn needs_quotes(s: &str) -> bool {
    s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '"' || c == '=')
}

fn quote(s: &str) -> String {
    if needs_quotes(s) {
        Value::String(s.to_string()).to_string()
    } else {
        s.to_string()
    }
}

/// One `[key=]value` token and the unparsed remainder.
fn next_token(s: &str) -> Result<((Option<String>, String), &str)> {
    if s.starts_with('"') {
        let (value, rest) = quoted(s)?;
        return Ok(((None, value), rest));
    }
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    let eq = s[..end].find('=');
    match eq {
        None => Ok(((None, s[..end].to_string()), &s[end..])),
        Some(i) => {
            let key = s[..i].to_string();
            let after = &s[i + 1..];
            if after.starts_with('"') {
                let (value, rest) = quoted(after)?;
                Ok(((Some(key), value), rest))
            } else {
                let end = after.find(char::is_whitespace).unwrap_or(after.len());
                Ok(((Some(key), after[..end].to_string()), &after[end..]))
            }
        }
    }
}

fn quoted(s: &str) -> Result<(String, &str)> {
    let mut stream = serde_json::Deserializer::from_str(s).into_iter::<String>();
    match stream.next() {
        Some(Ok(v)) => Ok((v, &s[stream.byte_offset()..])),
        _ => Err(Error::BadReference(format!("bad quoted value in: {s}"))),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn to_text(&self) -> String {
        self.records.iter().map(|r| r.to_line() + "\n").collect()
    }

    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self.records.iter().map(Record::to_json).collect();
        let mut obj = Map::new();
        obj.insert("records".into(), Value::Array(records));
        serde_json::to_string_pretty(&Value::Object(obj)).expect("report serializes") + "\n"
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(Record::parse_line)
            .collect::<Result<_>>()?;
        Ok(Report { records })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::BadReference(format!("report is not JSON: {e}")))?;
        let records = value
            .get("records")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::BadReference("report has no records array".into()))?
            .iter()
            .map(Record::from_json)
            .collect::<Result<_>>()?;
        Ok(Report { records })
    }
}
