//! Complete flags S_β of evaluation codes and the code-level duality
//! primitives.

use std::sync::Arc;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::evalcode::{dual_code, scale_code, sweep, BuildingBasis, Code, EvalSet};
use crate::field::Fe;

/// The complete flag C_0 ⊊ C_1 ⊊ ... ⊊ C_n built from S_β: one code per
/// dimension, with its building basis and the pole numbers a_0(β) and H*_β.
pub struct Flag {
    pub beta: Vec<i64>,
    pub a0: i64,
    pub codes: Vec<Code>,
    pub bb: BuildingBasis,
    n: usize,
}

impl Flag {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pole numbers of the flag steps: a_0(β) followed by H*_β.
    pub fn a_values(&self) -> Vec<i64> {
        let mut out = vec![self.a0];
        out.extend_from_slice(&self.bb.a_values);
        out
    }
}

pub fn build_flag(curve: &Arc<Curve>, beta: &[i64], eval: &EvalSet) -> Result<Flag> {
    let out = sweep(curve, beta, eval.places(), true)?;
    let codes = out.codes.expect("codes requested");
    let bb = out.bb;
    let n = eval.n();
    if bb.n() != n || codes.len() != n + 1 {
        return Err(Error::InternalRankFailure(*bb.a_values.last().unwrap_or(&0)));
    }
    let a0 = bb.a_values[0] - 1;
    Ok(Flag {
        beta: beta.to_vec(),
        a0,
        codes,
        bb,
        n,
    })
}

/// Checks the isometry-dual property of a complete flag against a candidate
/// vector: dual(C_{n-i}) must equal x ∗ C_i for every i = 0..n, compared as
/// canonical RREFs.
pub fn verify_isometry_pair(curve: &Curve, flag: &Flag, x: &[Fe]) -> Result<bool> {
    let field = curve.field();
    let n = flag.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch);
    }
    if let Some(i) = x.iter().position(|&c| field.is_zero(c)) {
        return Err(Error::ZeroComponentInX(i));
    }
    for i in 0..=n {
        let dual = dual_code(field, &flag.codes[n - i]);
        let scaled = scale_code(field, x, &flag.codes[i]);
        if dual != scaled {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::PlaceOrdering;
    use crate::field::Field;
    use crate::linalg::rank_of;

    fn koetter2() -> Arc<Curve> {
        let f = Arc::new(Field::new(2, 4, &[1, 1, 0, 0, 1], &[0, 1]).unwrap());
        let coeffs = vec![f.zero(), f.one(), f.one()];
        Curve::new(f, 5, coeffs).unwrap()
    }

    #[test]
    fn flag_is_complete() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let flag = build_flag(&c, &[2], &eval).unwrap();
        assert_eq!(flag.n(), 31);
        for (i, code) in flag.codes.iter().enumerate() {
            assert_eq!(code.dim(), i);
        }
        // a-values: a_0 = -1 derived as min(H*) - 1, then H*_2 = {0..30}
        assert_eq!(flag.a0, -1);
        assert_eq!(flag.a_values().len(), 32);
        assert_eq!(flag.bb.a_values, (0..=30).collect::<Vec<_>>());
        // the building basis spans the whole space
        assert_eq!(rank_of(c.field(), &flag.bb.vectors), 31);
    }

    #[test]
    fn x_scaling_invariance() {
        let c = koetter2();
        let f = c.field().clone();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let flag = build_flag(&c, &[2], &eval).unwrap();
        // a deliberately wrong candidate: the result must be scaling-invariant
        let x: Vec<Fe> = (0..31).map(|i| f.gen_pow(i as i64 % 15)).collect();
        let r1 = verify_isometry_pair(&c, &flag, &x).unwrap();
        let cx: Vec<Fe> = x.iter().map(|&v| f.mul(v, f.gen_pow(7))).collect();
        let r2 = verify_isometry_pair(&c, &flag, &cx).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn zero_component_rejected() {
        let c = koetter2();
        let f = c.field().clone();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let flag = build_flag(&c, &[2], &eval).unwrap();
        let mut x = vec![f.one(); 31];
        x[4] = f.zero();
        assert!(matches!(
            verify_isometry_pair(&c, &flag, &x),
            Err(Error::ZeroComponentInX(4))
        ));
    }
}
