//! Deciding the isometry-dual property of complete flags.
//!
//! A complete flag with building basis v_1..v_n is isometry-dual exactly
//! when the nullspace of the componentwise products {v_ii ∗ v_jj} over
//! 2 <= ii+jj <= n contains a vector with no zero coordinate. The rows are
//! streamed (deduplicated by symmetry, ii <= jj) into the rank-capped
//! reducer, which never stores more than n of them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};

use crate::curve::{Curve, MonomialTerm, Place};
use crate::error::{Error, Result};
use crate::evalcode::{h_star, BuildingBasis, EvalSet};
use crate::field::{Fe, Field};
use crate::flag::{build_flag, Flag};
use crate::linalg::{hadamard, Row, RowReducer};
use crate::rr::h_set;

/// Outcome of the duality decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsometryStatus {
    /// Isometry-dual with x = 1.
    SelfOrthogonal,
    /// Isometry-dual with the given normalized vector (first component 1).
    Dual(Vec<Fe>),
    NotDual,
    /// The randomized full-weight search exhausted its budget.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct IsometryReport {
    pub status: IsometryStatus,
    pub nullspace_dim: usize,
    pub rows_used: usize,
}

impl IsometryReport {
    pub fn isometry_vector(&self) -> Option<&[Fe]> {
        match &self.status {
            IsometryStatus::Dual(x) => Some(x),
            _ => None,
        }
    }

    /// The certified vector, materializing 1 for self-orthogonal flags.
    pub fn vector_with(&self, field: &Field, n: usize) -> Option<Vec<Fe>> {
        match &self.status {
            IsometryStatus::SelfOrthogonal => Some(vec![field.one(); n]),
            IsometryStatus::Dual(x) => Some(x.clone()),
            _ => None,
        }
    }
}

/// Streams the product rows v_ii ∗ v_jj with 1 <= ii <= jj and
/// ii + jj <= n. The bound is sharp: the ii + jj = n + 1 products pair each
/// v_ii against a vector outside C_{n-ii} and always exclude the isometry
/// vector, so they must not be fed (the acceptance guard pins this).
pub fn product_rows<'a>(
    field: &'a Field,
    bb: &'a BuildingBasis,
) -> impl Iterator<Item = Row> + 'a {
    let n = bb.n();
    (1..=n / 2).flat_map(move |ii| {
        (ii..=n - ii).map(move |jj| hadamard(field, &bb.vectors[ii - 1], &bb.vectors[jj - 1]))
    })
}

/// Number of rows the stream yields for a flag of length n.
pub fn product_row_count(n: usize) -> usize {
    (1..=n / 2).map(|ii| n + 1 - 2 * ii).sum()
}

const PROJECTIVE_SWEEP_LIMIT: u64 = 1 << 20;
const RANDOM_BUDGET: usize = 10_000;

/// Reduces a row stream and searches its nullspace for a weight-n vector.
/// Tiers: empty nullspace is NotDual; dimension 1 tests the generator;
/// small projective spaces are swept exhaustively; beyond that a seeded
/// random search runs within a fixed budget and reports Inconclusive on
/// failure. Any vector found is normalized to first component 1.
pub fn nullspace_full_weight(
    field: &Field,
    rows: impl Iterator<Item = Row>,
    n: usize,
    seed: u64,
) -> IsometryReport {
    let mut red = RowReducer::new(field, n);
    for row in rows {
        red.feed(row);
    }
    let rows_used = red.rows_fed();
    let basis = red.nullspace();
    let dim = basis.len();
    let report = |status| IsometryReport {
        status,
        nullspace_dim: dim,
        rows_used,
    };
    if dim == 0 {
        return report(IsometryStatus::NotDual);
    }
    let full_weight = |v: &[Fe]| v.iter().all(|&c| !field.is_zero(c));
    let classify = |v: &[Fe]| {
        let inv = field.inv(v[0]).expect("full weight");
        let x: Vec<Fe> = v.iter().map(|&c| field.mul(c, inv)).collect();
        if x.iter().all(|&c| c == field.one()) {
            IsometryStatus::SelfOrthogonal
        } else {
            IsometryStatus::Dual(x)
        }
    };
    if dim == 1 {
        let g = &basis[0];
        return if full_weight(g) {
            report(classify(g))
        } else {
            report(IsometryStatus::NotDual)
        };
    }
    let q = field.q();
    let projective = (q as u128).pow(dim as u32).saturating_sub(1) / (q as u128 - 1).max(1);
    if projective <= PROJECTIVE_SWEEP_LIMIT as u128 {
        // leading coefficient fixed to 1, the rest sweep all of GF(q)
        for lead in 0..dim {
            let free = dim - lead - 1;
            let total = (q as u128).pow(free as u32);
            let mut idx = 0u128;
            while idx < total {
                let mut v = basis[lead].clone();
                let mut rest = idx;
                for b in &basis[lead + 1..] {
                    let c = field.from_index((rest % q as u128) as u64).expect("in range");
                    rest /= q as u128;
                    if !field.is_zero(c) {
                        for (vi, &bi) in v.iter_mut().zip(b) {
                            *vi = field.add(*vi, field.mul(c, bi));
                        }
                    }
                }
                if full_weight(&v) {
                    return report(classify(&v));
                }
                idx += 1;
            }
        }
        return report(IsometryStatus::NotDual);
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    for _ in 0..RANDOM_BUDGET {
        let mut v = vec![field.zero(); n];
        for b in &basis {
            let c = field.from_index(rng.random_range(0..q)).expect("in range");
            if !field.is_zero(c) {
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = field.add(*vi, field.mul(c, bi));
                }
            }
        }
        if full_weight(&v) {
            return report(classify(&v));
        }
    }
    report(IsometryStatus::Inconclusive)
}

/// Builds the flag S_β and decides its duality in one call.
pub fn isodual_flag(
    curve: &Arc<Curve>,
    beta: &[i64],
    eval: &EvalSet,
    seed: u64,
) -> Result<(Flag, IsometryReport)> {
    let flag = build_flag(curve, beta, eval)?;
    let report = nullspace_full_weight(
        curve.field(),
        product_rows(curve.field(), &flag.bb),
        eval.n(),
        seed,
    );
    Ok((flag, report))
}

/// The general (not necessarily complete) form: all x, zero coordinates
/// included, with dual(C_{m-i}) = x ∗ C_i for every i, as the nullspace of
/// the pairwise products of the given code bases.
pub fn general_isometry_solutions(
    field: &Field,
    code_bases: &[(usize, Vec<Row>)],
) -> Result<Vec<Row>> {
    let m = code_bases.len().checked_sub(1).ok_or(Error::DimensionMismatch)?;
    let n = code_bases
        .iter()
        .flat_map(|(_, rows)| rows.first())
        .map(|r| r.len())
        .next()
        .unwrap_or(0);
    for (dim, rows) in code_bases {
        if rows.len() != *dim || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch);
        }
    }
    let mut red = RowReducer::new(field, n);
    for i in 0..=m {
        let (_, ui) = &code_bases[i];
        let (_, uj) = &code_bases[m - i];
        for a in ui {
            for b in uj {
                red.feed(hadamard(field, a, b));
            }
        }
    }
    Ok(red.nullspace())
}

/// Result of translating a flag by a function with divisor
/// uP∞ - Σu_i Q_i: the shifted β, the scaling vector τ, and the checked
/// consequences for H, H* and the isometry vectors.
#[derive(Clone, Debug)]
pub struct TranslationReport {
    pub u: i64,
    pub u_vec: Vec<i64>,
    pub beta_prime: Vec<i64>,
    pub tau: Vec<Fe>,
    pub h_shift_ok: bool,
    pub h_star_shift_ok: bool,
    pub x_beta: Option<Vec<Fe>>,
    pub x_predicted: Option<Vec<Fe>>,
    pub x_confirmed: Option<bool>,
}

/// Applies the translation theorem along a monomial f with
/// (f) = uP∞ - Σu_i Q_i (u >= 1, u_i >= 0, support inside the β scope).
pub fn translate_flag(
    curve: &Arc<Curve>,
    beta: &[i64],
    f_term: &MonomialTerm,
    eval: &EvalSet,
    seed: u64,
) -> Result<TranslationReport> {
    let field = curve.field();
    let t = eval.scope();
    let div = curve.term_divisor(f_term);
    let u = div.inf;
    if u < 1 {
        return Err(Error::WrongDivisorShape(format!(
            "zero order at infinity is {u}, need >= 1"
        )));
    }
    let mut u_vec = vec![0i64; t];
    for (k, &c) in div.ram.iter().enumerate() {
        if k < t {
            if c > 0 {
                return Err(Error::WrongDivisorShape(format!(
                    "zero of order {c} at Q{} (poles only allowed there)",
                    k + 1
                )));
            }
            u_vec[k] = -c;
        } else if c != 0 {
            return Err(Error::WrongDivisorShape(format!(
                "support at ramified place {} outside the β scope",
                k + 1
            )));
        }
    }
    let beta_prime: Vec<i64> = (0..t)
        .map(|k| beta.get(k).copied().unwrap_or(0) + u_vec[k])
        .collect();

    let f_func = f_term.clone().into_function();
    let evals = curve.evaluate_all(&f_func, eval.places())?;
    let f_p1 = evals[0];
    if field.is_zero(f_p1) {
        return Err(Error::WrongDivisorShape("f vanishes at P1".into()));
    }
    let inv_p1 = field.inv(f_p1)?;
    let tau: Vec<Fe> = evals.iter().map(|&v| field.mul(v, inv_p1)).collect();
    if let Some(i) = tau.iter().position(|&c| field.is_zero(c)) {
        return Err(Error::WrongDivisorShape(format!(
            "f vanishes at evaluation place {i}"
        )));
    }

    // item i: the windowed H set shifts by exactly u
    let (lo, hi) = (-beta.iter().sum::<i64>() - u - 5, 3 * eval.n() as i64);
    let h_before = h_set(curve, beta, lo + u, hi + u);
    let h_after = h_set(curve, &beta_prime, lo, hi);
    let h_shift_ok = h_before.iter().map(|a| a - u).eq(h_after.iter().copied());

    // item ii: H* shifts by exactly u
    let hs_before = h_star(curve, beta, eval)?;
    let hs_after = h_star(curve, &beta_prime, eval)?;
    let h_star_shift_ok = hs_before.iter().map(|a| a - u).eq(hs_after.iter().copied());

    // item iii: x_{β+u} is x_β / τ², confirmed by an independent decision
    let (_, rep_before) = isodual_flag(curve, beta, eval, seed)?;
    let (x_beta, x_predicted, x_confirmed) = match rep_before.vector_with(field, eval.n()) {
        Some(xb) => {
            let pred: Vec<Fe> = xb
                .iter()
                .zip(&tau)
                .map(|(&x, &tv)| field.div(x, field.mul(tv, tv)))
                .collect::<Result<_>>()?;
            let (_, rep_after) = isodual_flag(curve, &beta_prime, eval, seed)?;
            let confirmed = rep_after.vector_with(field, eval.n()) == Some(pred.clone());
            (Some(xb), Some(pred), Some(confirmed))
        }
        None => (None, None, None),
    };

    Ok(TranslationReport {
        u,
        u_vec,
        beta_prime,
        tau,
        h_shift_ok,
        h_star_shift_ok,
        x_beta,
        x_predicted,
        x_confirmed,
    })
}

/// A witness for the translation: any function with divisor
/// Σu_i(P∞ - Q_i), found through the principality test.
pub fn translation_function(curve: &Curve, u_vec: &[i64], p1: &Place) -> Result<MonomialTerm> {
    let mut div = crate::curve::Divisor::zero(curve);
    for (k, &uk) in u_vec.iter().enumerate() {
        if uk < 0 {
            return Err(Error::Precondition("shift entries must be >= 0".into()));
        }
        div.inf += uk;
        div.ram[k] -= uk;
    }
    if div.inf < 1 {
        return Err(Error::Precondition("total shift must be >= 1".into()));
    }
    let psi = crate::rr::is_principal(curve, &div, Some(p1))?
        .ok_or_else(|| Error::WrongDivisorShape("shift divisor is not principal".into()))?;
    Ok(psi.single_term().expect("principality witnesses are monomials").clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::PlaceOrdering;
    use crate::field::Field;

    fn koetter2() -> Arc<Curve> {
        let f = Arc::new(Field::new(2, 4, &[1, 1, 0, 0, 1], &[0, 1]).unwrap());
        let coeffs = vec![f.zero(), f.one(), f.one()];
        Curve::new(f, 5, coeffs).unwrap()
    }

    fn tiny_bb(field: &Field, vectors: Vec<Row>) -> BuildingBasis {
        let _ = field;
        BuildingBasis {
            a_values: (0..vectors.len() as i64).collect(),
            witnesses: vec![],
            vectors,
        }
    }

    #[test]
    fn product_rows_small_cases() {
        let f = Field::new(2, 4, &[1, 1, 0, 0, 1], &[0, 1]).unwrap();
        // n = 2: only v1 ∗ v1
        let v1 = vec![f.one(), f.gen_pow(3)];
        let v2 = vec![f.gen_pow(5), f.one()];
        let bb = tiny_bb(&f, vec![v1.clone(), v2]);
        let rows: Vec<Row> = product_rows(&f, &bb).collect();
        assert_eq!(rows, vec![hadamard(&f, &v1, &v1)]);
        assert_eq!(product_row_count(2), 1);
        // n = 3: v1∗v1, v1∗v2
        let w1 = vec![f.one(), f.one(), f.gen_pow(2)];
        let w2 = vec![f.gen_pow(1), f.gen_pow(4), f.one()];
        let w3 = vec![f.one(), f.gen_pow(9), f.gen_pow(11)];
        let bb = tiny_bb(&f, vec![w1.clone(), w2.clone(), w3]);
        let rows: Vec<Row> = product_rows(&f, &bb).collect();
        assert_eq!(rows, vec![hadamard(&f, &w1, &w1), hadamard(&f, &w1, &w2)]);
        assert_eq!(product_row_count(3), 2);
    }

    #[test]
    fn row_count_closed_form() {
        for n in 1..40 {
            let expected = (1..=n)
                .flat_map(|ii| (ii..=n).map(move |jj| (ii, jj)))
                .filter(|(ii, jj)| ii + jj <= n)
                .count();
            assert_eq!(product_row_count(n), expected);
        }
        // odd n: (n² - 1)/4
        assert_eq!(product_row_count(63), (63 * 63 - 1) / 4);
    }

    #[test]
    fn koetter_l2_beta2_is_dual() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let (flag, rep) = isodual_flag(&c, &[2], &eval, 0).unwrap();
        assert_eq!(rep.nullspace_dim, 1);
        assert_eq!(rep.rows_used, product_row_count(31));
        let x = rep.vector_with(c.field(), 31).expect("dual");
        assert!(crate::flag::verify_isometry_pair(&c, &flag, &x).unwrap());
    }

    #[test]
    fn general_solutions_match_complete_flag_test() {
        let c = koetter2();
        let f = c.field().clone();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let flag = build_flag(&c, &[2], &eval).unwrap();
        let bases: Vec<(usize, Vec<Row>)> = flag
            .codes
            .iter()
            .map(|code| (code.dim(), code.rows().to_vec()))
            .collect();
        let ns_general = general_isometry_solutions(&f, &bases).unwrap();
        let mut red = RowReducer::new(&f, 31);
        for r in product_rows(&f, &flag.bb) {
            red.feed(r);
        }
        let ns_complete = red.nullspace();
        assert_eq!(
            crate::linalg::rref_of(&f, &ns_general, 31),
            crate::linalg::rref_of(&f, &ns_complete, 31)
        );
    }

    #[test]
    fn general_solutions_trivial_and_hand_cases() {
        // C_0 = {0}, C_1 = GF(q)^n with m = 1: no constraints
        let f = Field::new(2, 2, &[1, 1, 1], &[0, 1]).unwrap();
        let full: Vec<Row> = vec![
            vec![f.one(), f.zero()],
            vec![f.zero(), f.one()],
        ];
        let ns = general_isometry_solutions(&f, &[(0, vec![]), (2, full)]).unwrap();
        assert_eq!(ns.len(), 2);
        // m = 2 over F_4 with C_1 = span{(1,1)}: solutions are x1 + x2 = 0
        let id2: Vec<Row> = vec![
            vec![f.one(), f.zero()],
            vec![f.zero(), f.one()],
        ];
        let ns = general_isometry_solutions(
            &f,
            &[(0, vec![]), (1, vec![vec![f.one(), f.one()]]), (2, id2)],
        )
        .unwrap();
        assert_eq!(ns.len(), 1);
        assert_eq!(f.add(ns[0][0], ns[0][1]), f.zero());
    }

    #[test]
    fn full_weight_tiers() {
        let f = Field::new(2, 4, &[1, 1, 0, 0, 1], &[0, 1]).unwrap();
        // dim 0
        let rows = vec![
            vec![f.one(), f.zero()],
            vec![f.zero(), f.one()],
        ];
        let rep = nullspace_full_weight(&f, rows.into_iter(), 2, 0);
        assert_eq!(rep.status, IsometryStatus::NotDual);
        // dim 1 with a zero coordinate in the generator
        let rows = vec![vec![f.zero(), f.one()]];
        let rep = nullspace_full_weight(&f, rows.into_iter(), 2, 0);
        assert_eq!(rep.status, IsometryStatus::NotDual);
        assert_eq!(rep.nullspace_dim, 1);
        // dim 2, full space: the projective sweep finds the all-ones vector
        let rep = nullspace_full_weight(&f, std::iter::empty(), 2, 0);
        assert_eq!(rep.nullspace_dim, 2);
        assert_eq!(rep.status, IsometryStatus::SelfOrthogonal);
    }

    #[test]
    fn translation_via_shift_witness() {
        // shift by u = 5 along Q_1 on the l=2 curve
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let f_term = translation_function(&c, &[5], eval.first_place()).unwrap();
        let rep = translate_flag(&c, &[2], &f_term, &eval, 0).unwrap();
        assert_eq!(rep.u, 5);
        assert_eq!(rep.beta_prime, vec![7]);
        assert!(rep.h_shift_ok);
        assert!(rep.h_star_shift_ok);
        assert_eq!(rep.x_confirmed, Some(true));
    }

    #[test]
    fn translation_rejects_wrong_shape() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        // a constant has u = 0
        let konst = c.term_one();
        assert!(matches!(
            translate_flag(&c, &[2], &konst, &eval, 0),
            Err(Error::WrongDivisorShape(_))
        ));
        // 1/(x-1) has its pole at the ramified place outside the scope
        let g = c.make_term(c.field().one(), vec![0, -1], 0).unwrap();
        assert!(matches!(
            translate_flag(&c, &[2], &g, &eval, 0),
            Err(Error::WrongDivisorShape(_))
        ));
    }
}
