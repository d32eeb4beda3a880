//! Shared helpers for the benchmark targets.

use std::path::PathBuf;
use std::sync::Arc;

use agflag::curve::{Curve, PlaceOrdering};
use agflag::evalcode::EvalSet;
use agflag::field::Field;
use agflag::CurveConfig;

pub fn load_fixture(name: &str, scope: usize) -> (Arc<Field>, Arc<Curve>, EvalSet) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.curve"));
    let cfg = CurveConfig::load(&path).expect("fixture parses");
    let (field, curve) = cfg.build().expect("fixture builds");
    let ordering = match cfg.resolve_places(&curve).expect("places resolve") {
        Some(list) => PlaceOrdering::Explicit(list),
        None => PlaceOrdering::Default,
    };
    let eval = EvalSet::new(curve.clone(), scope, &ordering).expect("eval set");
    (field, curve, eval)
}
