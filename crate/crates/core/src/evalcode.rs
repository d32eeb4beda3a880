//! Evaluation codes C_L(D, aP∞ + G_β), the jump set H*_β and building
//! bases of the complete flags S_β.
//!
//! Everything runs off one upward sweep over pole orders: each a in H_β
//! contributes exactly one new Riemann-Roch basis monomial, its evaluation
//! vector is fed to an incremental row reducer, and the a values whose
//! vector is independent are exactly H*_β. The sweep stops once the code
//! fills GF(q)^n, which the theory guarantees after n jumps.

use std::sync::Arc;

use crate::curve::{Curve, MonomialTerm, Place, PlaceOrdering};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::{Row, RowReducer};
use crate::rr::{self, RrBasis};

/// The ordered evaluation places D: every rational place except infinity
/// and the first `scope` ramified places (the Q_i carrying β).
#[derive(Clone)]
pub struct EvalSet {
    curve: Arc<Curve>,
    scope: usize,
    places: Vec<Place>,
}

impl EvalSet {
    pub fn new(curve: Arc<Curve>, scope: usize, ordering: &PlaceOrdering) -> Result<EvalSet> {
        if scope > curve.num_roots() {
            return Err(Error::DimensionMismatch);
        }
        let eligible: Vec<Place> = curve
            .places(&PlaceOrdering::Default)?
            .into_iter()
            .filter(|p| !Self::excluded(p, scope))
            .collect();
        let places = match ordering {
            PlaceOrdering::Default => eligible,
            PlaceOrdering::Explicit(list) => {
                use std::collections::HashSet;
                let mut seen = HashSet::new();
                for p in list {
                    if Self::excluded(p, scope) {
                        return Err(Error::ExplicitOrderingIncomplete(
                            "evaluation list contains infinity or a divisor-support place".into(),
                        ));
                    }
                    if !seen.insert(*p) {
                        return Err(Error::ExplicitOrderingIncomplete("duplicate place".into()));
                    }
                }
                let want: HashSet<Place> = eligible.iter().copied().collect();
                if seen != want {
                    return Err(Error::ExplicitOrderingIncomplete(format!(
                        "expected the {} eligible places, got {} (set mismatch)",
                        want.len(),
                        seen.len()
                    )));
                }
                list.clone()
            }
        };
        if places.is_empty() {
            return Err(Error::Precondition(
                "no evaluation places remain outside the divisor support".into(),
            ));
        }
        Ok(EvalSet {
            curve,
            scope,
            places,
        })
    }

    fn excluded(p: &Place, scope: usize) -> bool {
        match p {
            Place::Infinity => true,
            Place::Ramified(k) => *k < scope,
            Place::Affine { .. } => false,
        }
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    /// Number of β coordinates this set was built for.
    pub fn scope(&self) -> usize {
        self.scope
    }

    pub fn n(&self) -> usize {
        self.places.len()
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn first_place(&self) -> &Place {
        &self.places[0]
    }

    pub fn eval_term(&self, term: &MonomialTerm) -> Result<Row> {
        let func = term.clone().into_function();
        self.places
            .iter()
            .map(|p| self.curve.evaluate(&func, p))
            .collect()
    }
}

/// A linear code in canonical form: the reduced row echelon generators.
/// Two equal codes have identical representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    rows: Vec<Row>,
}

impl Code {
    pub fn from_reducer(red: &RowReducer) -> Code {
        Code {
            n: red.ncols(),
            rows: red.rref(),
        }
    }

    pub fn from_rows(field: &crate::field::Field, rows: &[Row], n: usize) -> Code {
        Code {
            n,
            rows: crate::linalg::rref_of(field, rows, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }
}

/// Building basis of a complete flag: vectors v_i with v_i ∈ C_i \ C_{i-1},
/// their witness monomials, and the pole numbers a ∈ H*_β that produced
/// them, in increasing order.
#[derive(Clone, Debug)]
pub struct BuildingBasis {
    pub a_values: Vec<i64>,
    pub witnesses: Vec<MonomialTerm>,
    pub vectors: Vec<Row>,
}

impl BuildingBasis {
    pub fn n(&self) -> usize {
        self.vectors.len()
    }
}

pub struct SweepOutput {
    pub bb: BuildingBasis,
    /// Nested codes C_0 ⊊ ... ⊊ C_n when requested; dims 0..=n.
    pub codes: Option<Vec<Code>>,
}

/// Sweeps pole orders upward from -Σβ, feeding each new Riemann-Roch
/// monomial's evaluation vector to an incremental reducer until the code
/// fills the ambient space.
pub fn sweep(curve: &Arc<Curve>, beta: &[i64], places: &[Place], keep_codes: bool) -> Result<SweepOutput> {
    let beta_full = rr::pad_beta(curve, beta)?;
    let n = places.len();
    let field = curve.field();
    let beta_sum: i64 = beta_full.iter().sum();
    let start = -beta_sum;
    let cap = n as i64 + 2 * curve.genus() + beta_sum.abs() + curve.m();
    let mut red = RowReducer::new(field, n);
    let mut bb = BuildingBasis {
        a_values: Vec::with_capacity(n),
        witnesses: Vec::with_capacity(n),
        vectors: Vec::with_capacity(n),
    };
    let mut codes = if keep_codes {
        Some(vec![Code { n, rows: vec![] }])
    } else {
        None
    };
    let mut a = start;
    while red.rank() < n {
        if a > cap {
            return Err(Error::SweepCapExceeded(a));
        }
        if let Some(term) = rr::new_term_at(curve, a, &beta_full) {
            let v: Row = {
                let func = term.clone().into_function();
                places
                    .iter()
                    .map(|p| curve.evaluate(&func, p))
                    .collect::<Result<_>>()?
            };
            if red.feed(v.clone()).is_some() {
                bb.a_values.push(a);
                bb.witnesses.push(term);
                bb.vectors.push(v);
                if let Some(cs) = codes.as_mut() {
                    cs.push(Code::from_reducer(&red));
                }
            }
        }
        a += 1;
    }
    Ok(SweepOutput { bb, codes })
}

/// The evaluation code of a Riemann-Roch basis: RREF of the evaluation
/// matrix at the places of D.
pub fn encode(basis: &RrBasis, eval: &EvalSet) -> Result<Code> {
    let curve = eval.curve();
    let mut red = RowReducer::new(curve.field(), eval.n());
    for t in &basis.terms {
        red.feed(eval.eval_term(t)?);
    }
    Ok(Code::from_reducer(&red))
}

/// H*_β: the n pole numbers where the evaluation code grows.
pub fn h_star(curve: &Arc<Curve>, beta: &[i64], eval: &EvalSet) -> Result<Vec<i64>> {
    Ok(sweep(curve, beta, eval.places(), false)?.bb.a_values)
}

pub fn building_basis(curve: &Arc<Curve>, beta: &[i64], eval: &EvalSet) -> Result<BuildingBasis> {
    Ok(sweep(curve, beta, eval.places(), false)?.bb)
}

/// Componentwise scaling x ∗ C, re-canonicalized.
pub fn scale_code(field: &crate::field::Field, x: &[Fe], code: &Code) -> Code {
    let rows: Vec<Row> = code
        .rows()
        .iter()
        .map(|r| crate::linalg::hadamard(field, x, r))
        .collect();
    Code::from_rows(field, &rows, code.n())
}

/// The dual code: nullspace of the generator matrix, canonicalized.
pub fn dual_code(field: &crate::field::Field, code: &Code) -> Code {
    let ns = crate::linalg::nullspace_of(field, code.rows(), code.n());
    Code::from_rows(field, &ns, code.n())
}
