//! `key=value` run parameters. Every getter records the value actually used,
//! defaults included, so reports state their full parameterization.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde_json::Value;

use crate::error::{param_error, Result};

#[derive(Clone, Debug, Default)]
pub struct Params {
    given: BTreeMap<String, String>,
    used: BTreeSet<String>,
    effective: BTreeMap<String, Value>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key=value` pairs; a repeated key is an error.
    pub fn parse<S: AsRef<str>>(pairs: &[S]) -> Result<Self> {
        let mut p = Self::new();
        for pair in pairs {
            let pair = pair.as_ref();
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| param_error(pair, "expected key=value"))?;
            let k = k.trim();
            if p.given.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(param_error(k, "given twice"));
            }
        }
        Ok(p)
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.given.insert(key.to_string(), value.to_string());
        self
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        self.used.insert(key.to_string());
        self.given.get(key).cloned()
    }

    fn typed<T: FromStr + Into<Value> + Clone>(&mut self, key: &str, default: T) -> Result<T> {
        let value = match self.raw(key) {
            Some(s) => s
                .parse::<T>()
                .map_err(|_| param_error(key, format!("cannot parse {s:?}")))?,
            None => default,
        };
        self.effective.insert(key.to_string(), value.clone().into());
        Ok(value)
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        self.typed::<u64>(key, default as u64).map(|v| v as usize)
    }

    pub fn u64(&mut self, key: &str, default: u64) -> Result<u64> {
        self.typed(key, default)
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.typed(key, default)?;
        if !v.is_finite() {
            return Err(param_error(key, "must be finite"));
        }
        Ok(v)
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String> {
        self.typed(key, default.to_string())
    }

    /// Comma-separated list.
    pub fn list<T: FromStr + Into<Value> + Clone>(&mut self, key: &str, default: &[T]) -> Result<Vec<T>> {
        let values = match self.raw(key) {
            Some(s) => s
                .split(',')
                .map(|item| {
                    item.trim()
                        .parse::<T>()
                        .map_err(|_| param_error(key, format!("cannot parse item {item:?}")))
                })
                .collect::<Result<Vec<T>>>()?,
            None => default.to_vec(),
        };
        if values.is_empty() {
            return Err(param_error(key, "empty list"));
        }
        self.effective.insert(
            key.to_string(),
            Value::Array(values.iter().cloned().map(Into::into).collect()),
        );
        Ok(values)
    }

    /// Rejects keys no getter asked for and returns the effective values.
    pub fn finish(self) -> Result<BTreeMap<String, Value>> {
        if let Some(k) = self.given.keys().find(|k| !self.used.contains(*k)) {
            return Err(param_error(k, "not a parameter of this run"));
        }
        Ok(self.effective)
    }
}
