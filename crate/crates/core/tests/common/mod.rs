//! Shared fixture loading for the integration suites.
// each test binary uses its own subset of these helpers
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use agflag::curve::{Curve, PlaceOrdering};
use agflag::evalcode::EvalSet;
use agflag::field::{Fe, Field};
use agflag::CurveConfig;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.curve"))
}

pub struct Fixture {
    pub field: Arc<Field>,
    pub curve: Arc<Curve>,
    pub eval: EvalSet,
}

/// Loads a fixture with its published place ordering and divisor scope.
pub fn load(name: &str, scope: usize) -> Fixture {
    let cfg = CurveConfig::load(&fixture_path(name)).expect("fixture parses");
    let (field, curve) = cfg.build().expect("fixture builds");
    let ordering = match cfg.resolve_places(&curve).expect("fixture places resolve") {
        Some(list) => PlaceOrdering::Explicit(list),
        None => PlaceOrdering::Default,
    };
    let eval = EvalSet::new(curve.clone(), scope, &ordering).expect("eval set");
    Fixture { field, curve, eval }
}

/// Expands run-length-encoded generator exponents into field elements;
/// exponent -1 denotes the zero element.
pub fn expand_rle(field: &Field, rle: &[(i64, usize)]) -> Vec<Fe> {
    let mut out = Vec::new();
    for &(e, count) in rle {
        let v = if e < 0 { field.zero() } else { field.gen_pow(e) };
        out.extend(std::iter::repeat_n(v, count));
    }
    out
}
