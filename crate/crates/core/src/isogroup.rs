//! Periods, the principal-divisor lattice T and its box T₀, enumeration of
//! all divisor offsets giving isometry-dual flags, translation
//! equivalences, and the counting bounds on isometry vectors.

use std::sync::Arc;

use rand::{Rng, SeedableRng};

use crate::curve::{Curve, Divisor, MonomialFunction, Place};
use crate::error::{Error, Result};
use crate::evalcode::{scale_code, EvalSet};
use crate::field::Fe;
use crate::flag::build_flag;
use crate::isodual::{isodual_flag, IsometryStatus};
use crate::rr::is_principal;

/// Smallest u in [1, bound] with u(P∞ - Q_i) principal, together with a
/// witness φ satisfying (φ) = u(P∞ - Q_i).
pub fn period(curve: &Curve, i: usize, bound: i64) -> Result<(i64, MonomialFunction)> {
    for u in 1..=bound {
        let mut div = Divisor::zero(curve);
        div.inf = u;
        div.ram[i] = -u;
        if let Some(phi) = is_principal(curve, &div, None)? {
            return Ok((u, phi));
        }
    }
    Err(Error::PeriodNotFoundWithinBound(bound))
}

/// Periods π_i = π(P∞, Q_i) for the first `t` ramified places, with
/// witnesses normalized at `p1`.
pub struct PeriodTable {
    pub periods: Vec<i64>,
    pub witnesses: Vec<MonomialFunction>,
}

impl PeriodTable {
    pub fn compute(curve: &Curve, t: usize, p1: &Place) -> Result<PeriodTable> {
        let m = curve.m();
        let mut periods = Vec::with_capacity(t);
        let mut witnesses = Vec::with_capacity(t);
        for i in 0..t {
            // the period is m whenever 2 <= r < m; widen the search bound
            // only for curves outside that regime
            let mut bound = m;
            let found = loop {
                match period(curve, i, bound) {
                    Ok(res) => break res,
                    Err(Error::PeriodNotFoundWithinBound(_)) if bound < 8 * m => bound *= 2,
                    Err(e) => return Err(e),
                }
            };
            if 2 <= curve.r() && curve.r() < m {
                debug_assert_eq!(found.0, m, "period must equal m under the Kummer hypotheses");
            }
            let val = curve.evaluate(&found.1, p1)?;
            let phi = found.1.scale(curve.field(), curve.field().inv(val)?);
            periods.push(found.0);
            witnesses.push(phi);
        }
        Ok(PeriodTable { periods, witnesses })
    }

    pub fn t(&self) -> usize {
        self.periods.len()
    }
}

/// The box group T₀: tuples θ with 0 <= θ_i < π_i and Σθ_i(P∞ - Q_i)
/// principal, each with a witness ψ_θ normalized at P1. Closed under
/// componentwise addition mod π.
pub struct T0Set {
    pub members: Vec<Vec<i64>>,
    pub witnesses: Vec<MonomialFunction>,
}

impl T0Set {
    pub fn contains(&self, theta: &[i64]) -> bool {
        self.members.iter().any(|m| m == theta)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_t0(curve: &Curve, pt: &PeriodTable, p1: &Place) -> Result<T0Set> {
    let t = pt.t();
    let mut members = Vec::new();
    let mut witnesses = Vec::new();
    let mut theta = vec![0i64; t];
    loop {
        let mut div = Divisor::zero(curve);
        for (i, &th) in theta.iter().enumerate() {
            div.inf += th;
            div.ram[i] -= th;
        }
        if let Some(psi) = is_principal(curve, &div, Some(p1))? {
            members.push(theta.clone());
            witnesses.push(psi);
        }
        // advance the odometer over the box Π[0, π_i)
        let mut pos = 0;
        loop {
            if pos == t {
                return Ok(T0Set { members, witnesses });
            }
            theta[pos] += 1;
            if theta[pos] < pt.periods[pos] {
                break;
            }
            theta[pos] = 0;
            pos += 1;
        }
    }
}

/// One admissible offset γ = β + (θ + λ∘π)/2 with its predicted isometry
/// vector and the outcome of the independent confirmation run.
#[derive(Clone, Debug)]
pub struct GammaReport {
    pub gamma: Vec<i64>,
    pub theta: Vec<i64>,
    pub lambda: Vec<i64>,
    pub x_predicted: Vec<Fe>,
    pub x_confirmed: bool,
}

#[derive(Clone, Debug)]
pub struct OffLatticeSample {
    pub gamma: Vec<i64>,
    pub confirmed_not_dual: bool,
}

pub struct GammaSweep {
    pub reports: Vec<GammaReport>,
    pub off_lattice: Vec<OffLatticeSample>,
}

/// Enumerates every γ in the λ-box with θ ∈ T₀ and θ_i + λ_i π_i even,
/// predicts x_γ = x_β ∗ ev(ψ_θ Πφ_i^{λ_i})^{-1}, and confirms each
/// prediction by a fresh duality decision on S_γ. A sample of off-lattice
/// γ values is checked to be NotDual as well.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_gamma(
    curve: &Arc<Curve>,
    beta: &[i64],
    x_beta: &[Fe],
    pt: &PeriodTable,
    t0: &T0Set,
    lambda_box: &[(i64, i64)],
    eval: &EvalSet,
    seed: u64,
    threads: usize,
) -> Result<GammaSweep> {
    let field = curve.field();
    let t = pt.t();
    if lambda_box.len() != t || beta.len() != t {
        return Err(Error::DimensionMismatch);
    }
    // collect admissible (θ, λ) pairs
    let mut cells: Vec<(usize, Vec<i64>)> = Vec::new();
    for (ti, theta) in t0.members.iter().enumerate() {
        let mut lambda: Vec<i64> = lambda_box.iter().map(|&(lo, _)| lo).collect();
        'cells: loop {
            if theta
                .iter()
                .zip(&lambda)
                .zip(&pt.periods)
                .all(|((&th, &l), &pi)| (th + l * pi) % 2 == 0)
            {
                cells.push((ti, lambda.clone()));
            }
            let mut pos = 0;
            loop {
                if pos == t {
                    break 'cells;
                }
                lambda[pos] += 1;
                if lambda[pos] <= lambda_box[pos].1 {
                    break;
                }
                lambda[pos] = lambda_box[pos].0;
                pos += 1;
            }
        }
    }

    let run_cell = |&(ti, ref lambda): &(usize, Vec<i64>)| -> Result<GammaReport> {
        let theta = &t0.members[ti];
        let gamma: Vec<i64> = (0..t)
            .map(|i| beta[i] + (theta[i] + lambda[i] * pt.periods[i]) / 2)
            .collect();
        let mut w = t0.witnesses[ti].clone();
        for (i, &l) in lambda.iter().enumerate() {
            if l != 0 {
                let phi_pow = pt.witnesses[i].pow(curve, l)?;
                w = w.mul_term(curve, phi_pow.single_term().expect("monomial"))?;
            }
        }
        // x_γ = x_β ∗ ev(ψ_θ Πφ_i^{λ_i})^{-1}: the inverse keeps the
        // prediction consistent with the translation identity
        // x_{β+u} = x_β / τ², which the worked examples pin down
        let w_evals = curve.evaluate_all(&w, eval.places())?;
        let x_predicted: Vec<Fe> = x_beta
            .iter()
            .zip(&w_evals)
            .map(|(&x, &wv)| field.div(x, wv))
            .collect::<Result<_>>()?;
        let (_, rep) = isodual_flag(curve, &gamma, eval, seed)?;
        let x_confirmed = rep.vector_with(field, eval.n()) == Some(x_predicted.clone());
        Ok(GammaReport {
            gamma,
            theta: theta.clone(),
            lambda: lambda.clone(),
            x_predicted,
            x_confirmed,
        })
    };

    let reports: Vec<GammaReport> = if threads > 1 && cells.len() > 1 {
        let chunk = cells.len().div_ceil(threads);
        std::thread::scope(|s| {
            let handles: Vec<_> = cells
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(run_cell).collect::<Result<Vec<_>>>()))
                .collect();
            let mut out = Vec::with_capacity(cells.len());
            for h in handles {
                out.extend(h.join().expect("gamma worker panicked")?);
            }
            Ok::<_, Error>(out)
        })?
    } else {
        cells.iter().map(run_cell).collect::<Result<Vec<_>>>()?
    };

    // negative testing: γ off the lattice must fail the duality test
    let mut off_lattice = Vec::new();
    if !reports.is_empty() {
        let lo: Vec<i64> = (0..t)
            .map(|i| reports.iter().map(|r| r.gamma[i]).min().unwrap() - 2)
            .collect();
        let hi: Vec<i64> = (0..t)
            .map(|i| reports.iter().map(|r| r.gamma[i]).max().unwrap() + 2)
            .collect();
        let box_size: i64 = (0..t).map(|i| hi[i] - lo[i] + 1).product();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed ^ 0x6f66_666c);
        let wanted = 50.min(box_size.max(0) as usize);
        let mut tries = 0;
        while off_lattice.len() < wanted && tries < 40 * wanted.max(1) {
            tries += 1;
            let gamma: Vec<i64> = (0..t).map(|i| rng.random_range(lo[i]..=hi[i])).collect();
            let theta: Vec<i64> = (0..t)
                .map(|i| (2 * (gamma[i] - beta[i])).rem_euclid(pt.periods[i]))
                .collect();
            if t0.contains(&theta) {
                continue; // on the lattice
            }
            let (_, rep) = isodual_flag(curve, &gamma, eval, seed)?;
            off_lattice.push(OffLatticeSample {
                gamma,
                confirmed_not_dual: rep.status == IsometryStatus::NotDual,
            });
        }
    }

    Ok(GammaSweep {
        reports,
        off_lattice,
    })
}

/// Outcome of comparing S_β with its translate by (λ̃_1 π_1/2, ...).
#[derive(Clone, Debug)]
pub struct TranslationEquivalence {
    pub beta_prime: Vec<i64>,
    /// ev_D(Π φ_i^{λ̃_i/2}); all ones in characteristic 2, ±1 otherwise.
    pub v: Vec<Fe>,
    /// Whether the two flags are code-by-code identical.
    pub identical: bool,
    /// Whether every code pair satisfies C_i(β) = v ∗ C_i(β').
    pub verified: bool,
}

/// Theorem-level translation equivalence: requires λ̃_i ≡ 0 (mod q-1) and
/// λ̃_i π_i even. In characteristic 2 the two flags coincide; in odd
/// characteristic they differ by the ±1 vector v.
pub fn translation_equivalence(
    curve: &Arc<Curve>,
    beta: &[i64],
    lambda_tilde: &[i64],
    pt: &PeriodTable,
    eval: &EvalSet,
) -> Result<TranslationEquivalence> {
    let field = curve.field();
    let q = field.q() as i64;
    let t = pt.t();
    if lambda_tilde.len() != t || beta.len() != t {
        return Err(Error::DimensionMismatch);
    }
    for (i, &l) in lambda_tilde.iter().enumerate() {
        if l.rem_euclid(q - 1) != 0 {
            return Err(Error::Precondition(format!(
                "λ̃_{} = {l} is not a multiple of q - 1 = {}",
                i + 1,
                q - 1
            )));
        }
        if (l * pt.periods[i]) % 2 != 0 {
            return Err(Error::Precondition(format!(
                "λ̃_{} π_{} = {} is odd",
                i + 1,
                i + 1,
                l * pt.periods[i]
            )));
        }
    }
    let beta_prime: Vec<i64> = (0..t)
        .map(|i| beta[i] + lambda_tilde[i] * pt.periods[i] / 2)
        .collect();

    // v_j = Π_i φ_i(P_j)^{λ̃_i/2}, computed componentwise; odd λ̃_i only
    // occur in characteristic 2 where the square root is exact
    let mut v = vec![field.one(); eval.n()];
    for (i, &l) in lambda_tilde.iter().enumerate() {
        let phi_vals = curve.evaluate_all(&pt.witnesses[i], eval.places())?;
        for (vj, &pv) in v.iter_mut().zip(&phi_vals) {
            let half = if l % 2 == 0 {
                field.pow(pv, l / 2)?
            } else {
                field.pow(field.sqrt_char2(pv)?, l)?
            };
            *vj = field.mul(*vj, half);
        }
    }

    let flag_a = build_flag(curve, beta, eval)?;
    let flag_b = build_flag(curve, &beta_prime, eval)?;
    let identical = flag_a.codes == flag_b.codes;
    let verified = if field.char2() {
        v.iter().all(|&c| c == field.one()) && identical
    } else {
        let minus_one = field.neg(field.one());
        v.iter().all(|&c| c == field.one() || c == minus_one)
            && flag_a
                .codes
                .iter()
                .zip(&flag_b.codes)
                .all(|(ca, cb)| *ca == scale_code(field, &v, cb))
    };
    Ok(TranslationEquivalence {
        beta_prime,
        v,
        identical,
        verified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBounds {
    pub iso_vector_bound: i128,
    pub flag_bound: i128,
    pub e: usize,
    pub o: usize,
    pub t0_zero: usize,
}

/// Upper bounds on the number of distinct isometry vectors and
/// isometry-dual flags.
pub fn count_bounds(q: u64, pt: &PeriodTable, t0: &T0Set) -> CountBounds {
    let t = pt.t();
    let e = pt.periods.iter().filter(|&&pi| pi % 2 == 0).count();
    let o = t - e;
    let t0_zero = t0
        .members
        .iter()
        .filter(|theta| {
            !theta
                .iter()
                .zip(&pt.periods)
                .any(|(&th, &pi)| th % 2 == 1 && pi % 2 == 0)
        })
        .count();
    let q = q as i128;
    let (iso_vector_bound, flag_bound) = if q % 2 == 0 {
        let b = t0_zero as i128 * (q - 1).pow(t as u32);
        (b, b)
    } else {
        let b = t0_zero as i128 * ((q - 1) / 2).pow(o as u32) * (q - 1).pow(e as u32);
        (b, b * 2i128.pow(t as u32 - 1))
    };
    CountBounds {
        iso_vector_bound,
        flag_bound,
        e,
        o,
        t0_zero,
    }
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

    fn f121_curve() -> Arc<Curve> {
        let f = Arc::new(Field::new(11, 2, &[2, 7, 1], &[0, 1]).unwrap());
        // y^5 = x^2 + x + 1
        let coeffs = vec![f.one(), f.one(), f.one()];
        Curve::new(f, 5, coeffs).unwrap()
    }

    #[test]
    fn koetter_l2_period_is_m() {
        let c = koetter2();
        let (u, phi) = period(&c, 0, 5).unwrap();
        assert_eq!(u, 5);
        assert_eq!(c.term_divisor(phi.single_term().unwrap()), Divisor {
            inf: 5,
            ram: vec![-5, 0],
        });
    }

    #[test]
    fn f121_both_periods_are_five() {
        let c = f121_curve();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.num_roots(), 2);
        for i in 0..2 {
            let (u, _) = period(&c, i, 10).unwrap();
            assert_eq!(u, 5);
        }
    }

    #[test]
    fn t0_trivial_for_one_point_scope() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let pt = PeriodTable::compute(&c, 1, eval.first_place()).unwrap();
        let t0 = enumerate_t0(&c, &pt, eval.first_place()).unwrap();
        assert_eq!(t0.members, vec![vec![0]]);
    }

    #[test]
    fn f121_t0_is_the_diagonal() {
        let c = f121_curve();
        let eval = EvalSet::new(c.clone(), 2, &PlaceOrdering::Default).unwrap();
        assert_eq!(eval.n(), 120);
        let p1 = *eval.first_place();
        let pt = PeriodTable::compute(&c, 2, &p1).unwrap();
        assert_eq!(pt.periods, vec![5, 5]);
        let t0 = enumerate_t0(&c, &pt, &p1).unwrap();
        let expected: Vec<Vec<i64>> = (0..5).map(|j| vec![j, j]).collect();
        assert_eq!(t0.members, expected);
        // |T₀| divides Π π_i
        assert_eq!(25 % t0.len(), 0);
        // ⊕-closure with witness algebra: ψ_{a⊕b} ~ ψ_a ψ_b Πφ_i^{-q_i}
        for a in &t0.members {
            for b in &t0.members {
                let sum: Vec<i64> = a
                    .iter()
                    .zip(b)
                    .zip(&pt.periods)
                    .map(|((&x, &y), &pi)| (x + y).rem_euclid(pi))
                    .collect();
                assert!(t0.contains(&sum));
            }
        }
    }

    #[test]
    fn count_bound_examples() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let pt = PeriodTable::compute(&c, 1, eval.first_place()).unwrap();
        let t0 = enumerate_t0(&c, &pt, eval.first_place()).unwrap();
        let b = count_bounds(16, &pt, &t0);
        assert_eq!(b.t0_zero, 1);
        assert_eq!(b.iso_vector_bound, 15);
        assert_eq!(b.flag_bound, 15);

        let c = f121_curve();
        let eval = EvalSet::new(c.clone(), 2, &PlaceOrdering::Default).unwrap();
        let p1 = *eval.first_place();
        let pt = PeriodTable::compute(&c, 2, &p1).unwrap();
        let t0 = enumerate_t0(&c, &pt, &p1).unwrap();
        let b = count_bounds(121, &pt, &t0);
        assert_eq!((b.e, b.o), (0, 2));
        assert_eq!(b.t0_zero, t0.len());
        assert_eq!(b.iso_vector_bound, t0.len() as i128 * 60 * 60);
        assert_eq!(b.flag_bound, b.iso_vector_bound * 2);
    }

    #[test]
    fn koetter_l2_gamma_lattice() {
        // t = 1, T₀ trivial, π = 5: γ = 2 + 5λ/2 for even λ
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let p1 = *eval.first_place();
        let pt = PeriodTable::compute(&c, 1, &p1).unwrap();
        let t0 = enumerate_t0(&c, &pt, &p1).unwrap();
        let (_, rep) = isodual_flag(&c, &[2], &eval, 0).unwrap();
        let x_beta = rep.vector_with(c.field(), eval.n()).unwrap();
        let sweep =
            enumerate_gamma(&c, &[2], &x_beta, &pt, &t0, &[(0, 4)], &eval, 0, 1).unwrap();
        let gammas: Vec<i64> = sweep.reports.iter().map(|r| r.gamma[0]).collect();
        assert_eq!(gammas, vec![2, 7, 12]); // λ = 0, 2, 4
        assert!(sweep.reports.iter().all(|r| r.x_confirmed));
        assert!(!sweep.off_lattice.is_empty());
        assert!(sweep.off_lattice.iter().all(|s| s.confirmed_not_dual));
    }

    #[test]
    fn translation_preconditions() {
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let p1 = *eval.first_place();
        let pt = PeriodTable::compute(&c, 1, &p1).unwrap();
        // λ̃ = 7 is not a multiple of q - 1 = 15
        assert!(matches!(
            translation_equivalence(&c, &[37], &[7], &pt, &eval),
            Err(Error::Precondition(_))
        ));
        // λ̃ = 15: multiple of q - 1 but λ̃π = 75 is odd
        assert!(matches!(
            translation_equivalence(&c, &[37], &[15], &pt, &eval),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn koetter_l2_translates_to_the_same_flag() {
        // S_37 and S_{37+75} coincide code by code (characteristic 2)
        let c = koetter2();
        let eval = EvalSet::new(c.clone(), 1, &PlaceOrdering::Default).unwrap();
        let p1 = *eval.first_place();
        let pt = PeriodTable::compute(&c, 1, &p1).unwrap();
        let out = translation_equivalence(&c, &[37], &[30], &pt, &eval).unwrap();
        assert_eq!(out.beta_prime, vec![112]);
        assert!(out.identical);
        assert!(out.verified);
        assert!(out.v.iter().all(|&x| x == c.field().one()));
    }
}
