//! Line-oriented machine report format: ordered `key=value` pairs, one per
//! line. Parsing followed by re-rendering is byte-identical, which the
//! golden tests rely on.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pairs: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        debug_assert!(!key.contains('=') && !key.contains('\n'));
        debug_assert!(!value.contains('\n'));
        self.pairs.push((key.to_string(), value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("report line {}: missing `=`", idx + 1)))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        Ok(Report { pairs })
    }
}

pub fn render_vec(field: &Field, v: &[Fe]) -> String {
    v.iter()
        .map(|&c| field.render(c))
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders a ±1 vector as `1`/`-1` tokens; falls back to α-powers if an
/// entry is neither.
pub fn render_pm_vec(field: &Field, v: &[Fe]) -> String {
    let minus_one = field.neg(field.one());
    v.iter()
        .map(|&c| {
            if c == field.one() {
                "1".to_string()
            } else if c == minus_one {
                "-1".to_string()
            } else {
                field.render(c)
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn render_ints(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
