//! Curve configuration ingestion.
//!
//! Line-oriented `key = value` text with `#` comments. Fields: `p`, `k`,
//! `modulus`, `generator` (coefficient lists over GF(p), ascending degree),
//! `m`, `f` (coefficients of f(x), ascending), and an optional repeatable
//! `place_order` listing the evaluation places as `(x,y)` coordinate pairs
//! in α-power notation (ASCII `a` accepted).

use std::sync::Arc;

use crate::curve::{Curve, Place};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, Default)]
pub struct CurveConfig {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
    pub generator: Vec<u64>,
    pub m: i64,
    pub f: Vec<String>,
    pub place_order: Vec<(String, String)>,
}

fn parse_int_list(value: &str, line: usize) -> Result<Vec<u64>> {
    value
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("line {line}: bad integer `{}`", tok.trim())))
        })
        .collect()
}

fn parse_place_tokens(value: &str, line: usize, out: &mut Vec<(String, String)>) -> Result<()> {
    for tok in value.split_whitespace() {
        let inner = tok
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Config(format!("line {line}: place `{tok}` must be (x,y)")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("line {line}: place `{tok}` must be (x,y)")))?;
        out.push((x.trim().to_string(), y.trim().to_string()));
    }
    Ok(())
}

impl CurveConfig {
    pub fn parse(text: &str) -> Result<CurveConfig> {
        let mut cfg = CurveConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "place_order" && !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {line}: duplicate key `{key}`")));
            }
            match key {
                "p" => {
                    cfg.p = value
                        .parse()
                        .map_err(|_| Error::Config(format!("line {line}: bad p")))?
                }
                "k" => {
                    cfg.k = value
                        .parse()
                        .map_err(|_| Error::Config(format!("line {line}: bad k")))?
                }
                "modulus" => cfg.modulus = parse_int_list(value, line)?,
                "generator" => cfg.generator = parse_int_list(value, line)?,
                "m" => {
                    cfg.m = value
                        .parse()
                        .map_err(|_| Error::Config(format!("line {line}: bad m")))?
                }
                "f" => {
                    cfg.f = value.split(',').map(|t| t.trim().to_string()).collect();
                }
                "place_order" => parse_place_tokens(value, line, &mut cfg.place_order)?,
                other => {
                    return Err(Error::Config(format!("line {line}: unknown key `{other}`")))
                }
            }
        }
        for (name, missing) in [
            ("p", cfg.p == 0),
            ("k", cfg.k == 0),
            ("modulus", cfg.modulus.is_empty()),
            ("generator", cfg.generator.is_empty()),
            ("m", cfg.m == 0),
            ("f", cfg.f.is_empty()),
        ] {
            if missing {
                return Err(Error::Config(format!("missing field `{name}`")));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<CurveConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        CurveConfig::parse(&text)
    }

    /// Builds the field and curve this config describes.
    pub fn build(&self) -> Result<(Arc<Field>, Arc<Curve>)> {
        let field = Arc::new(Field::new(self.p, self.k, &self.modulus, &self.generator)?);
        let coeffs = self
            .f
            .iter()
            .map(|tok| field.parse_el(tok))
            .collect::<Result<Vec<_>>>()?;
        let curve = Curve::new(field.clone(), self.m, coeffs)?;
        Ok((field, curve))
    }

    /// Resolves the configured place order against the curve, if present.
    pub fn resolve_places(&self, curve: &Curve) -> Result<Option<Vec<Place>>> {
        if self.place_order.is_empty() {
            return Ok(None);
        }
        let field = curve.field();
        let mut out = Vec::with_capacity(self.place_order.len());
        for (xs, ys) in &self.place_order {
            let x = field.parse_el(xs)?;
            let y = field.parse_el(ys)?;
            let place = if field.is_zero(y) {
                match curve.root_index(x) {
                    Some(i) => Place::Ramified(i),
                    None => {
                        return Err(Error::Config(format!(
                            "({xs},{ys}) has y = 0 but x is not a root of f"
                        )))
                    }
                }
            } else {
                if !curve.on_curve(x, y) {
                    return Err(Error::Config(format!("({xs},{ys}) is not on the curve")));
                }
                Place::Affine { x, y }
            };
            out.push(place);
        }
        Ok(Some(out))
    }
}
