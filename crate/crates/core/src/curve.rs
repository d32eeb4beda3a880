//! The Kummer function field y^m = f(x) over GF(q).
//!
//! With f separable of degree r and gcd(m, r) = 1 there is a single place
//! at infinity and one totally ramified place over each root of f. All
//! divisors this crate manipulates are supported on those places, where the
//! valuation of a monomial Π(x-α_k)^{i_k}·y^j is exactly computable:
//! m·i_k + j at the k-th ramified place and -(m·Σi_k + j·r) at infinity.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Infinity,
    /// Index into [`Curve::roots`]; the place (α_i, 0).
    Ramified(usize),
    Affine {
        x: Fe,
        y: Fe,
    },
}

#[derive(Clone, Debug)]
pub enum PlaceOrdering {
    /// Lexicographic by discrete log of x then of y, with 0 sorted first.
    Default,
    /// A caller-supplied list, e.g. a fixture pinning a published ordering.
    Explicit(Vec<Place>),
}

pub struct Curve {
    field: Arc<Field>,
    m: i64,
    r: i64,
    f_coeffs: Vec<Fe>,
    lead: Fe,
    roots: Vec<Fe>,
    genus: i64,
    split: bool,
    r_inv_mod_m: i64,
}

fn poly_eval(field: &Field, coeffs: &[Fe], x: Fe) -> Fe {
    let mut acc = field.zero();
    for &c in coeffs.iter().rev() {
        acc = field.add(field.mul(acc, x), c);
    }
    acc
}

fn poly_trim(field: &Field, mut a: Vec<Fe>) -> Vec<Fe> {
    while a.last().is_some_and(|&c| field.is_zero(c)) {
        a.pop();
    }
    a
}

fn poly_derivative(field: &Field, coeffs: &[Fe]) -> Vec<Fe> {
    let d: Vec<Fe> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
        .collect();
    poly_trim(field, d)
}

fn poly_rem(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = field.inv(*b.last().unwrap()).expect("nonzero lead");
    while a.len() > db {
        let c = field.mul(*a.last().unwrap(), lead_inv);
        let da = a.len() - 1;
        if !field.is_zero(c) {
            for i in 0..=db {
                let t = field.mul(c, b[i]);
                a[da - db + i] = field.sub(a[da - db + i], t);
            }
        }
        a.pop();
        a = poly_trim(field, a);
        if a.len() <= db {
            break;
        }
    }
    poly_trim(field, a)
}

fn poly_gcd_degree(field: &Field, a: &[Fe], b: &[Fe]) -> usize {
    let mut a = poly_trim(field, a.to_vec());
    let mut b = poly_trim(field, b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    // extended Euclid; gcd(a, m) = 1
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

impl Curve {
    /// Builds the curve y^m = f(x). `f_coeffs` are ascending-degree
    /// coefficients over GF(q). Requires f separable of degree r >= 2,
    /// gcd(m, r) = 1 and m coprime to the characteristic. Roots of f
    /// outside GF(q) are permitted; only rational roots become ramified
    /// places.
    pub fn new(field: Arc<Field>, m: i64, f_coeffs: Vec<Fe>) -> Result<Arc<Curve>> {
        let f_coeffs = poly_trim(&field, f_coeffs);
        let r = f_coeffs.len() as i64 - 1;
        if r < 2 {
            return Err(Error::Precondition("deg f must be >= 2".into()));
        }
        if m < 2 {
            return Err(Error::Precondition("Kummer exponent m must be >= 2".into()));
        }
        if gcd_i64(m, r) != 1 {
            return Err(Error::GcdViolation(format!("gcd(m, deg f) = gcd({m}, {r}) != 1")));
        }
        if m % field.p() as i64 == 0 {
            return Err(Error::GcdViolation(format!(
                "m = {m} must be coprime to the characteristic {}",
                field.p()
            )));
        }
        let fp = poly_derivative(&field, &f_coeffs);
        if fp.is_empty() || poly_gcd_degree(&field, &f_coeffs, &fp) != 0 {
            return Err(Error::NonSeparable);
        }
        let mut roots: Vec<Fe> = field
            .elements()
            .filter(|&x| field.is_zero(poly_eval(&field, &f_coeffs, x)))
            .collect();
        roots.sort_by_key(|&x| field.dkey(x));
        let split = roots.len() as i64 == r;
        let genus = (m - 1) * (r - 1) / 2;
        let lead = *f_coeffs.last().unwrap();
        let r_inv_mod_m = mod_inverse(r, m);
        Ok(Arc::new(Curve {
            field,
            m,
            r,
            f_coeffs,
            lead,
            roots,
            genus,
            split,
            r_inv_mod_m,
        }))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Degree of f.
    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn roots(&self) -> &[Fe] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Whether f splits completely over GF(q).
    pub fn splits(&self) -> bool {
        self.split
    }

    pub fn f_at(&self, x: Fe) -> Fe {
        poly_eval(&self.field, &self.f_coeffs, x)
    }

    pub fn root_index(&self, x: Fe) -> Option<usize> {
        self.roots.iter().position(|&a| a == x)
    }

    /// j = a·r^{-1} mod m, the unique y-exponent class of pole order a.
    pub fn y_class_of_pole(&self, a: i64) -> i64 {
        (a.rem_euclid(self.m) * self.r_inv_mod_m).rem_euclid(self.m)
    }

    pub fn on_curve(&self, x: Fe, y: Fe) -> bool {
        let f = &self.field;
        f.pow(y, self.m).expect("m > 0") == self.f_at(x)
    }

    /// Coordinates of a place; `None` for Infinity.
    pub fn coords(&self, place: &Place) -> Option<(Fe, Fe)> {
        match *place {
            Place::Infinity => None,
            Place::Ramified(i) => Some((self.roots[i], self.field.zero())),
            Place::Affine { x, y } => Some((x, y)),
        }
    }

    /// All rational places. Default ordering: Infinity first, then
    /// lexicographic by (dkey x, dkey y) with 0 before the powers of the
    /// generator. An explicit ordering must enumerate exactly the same set.
    pub fn places(&self, ordering: &PlaceOrdering) -> Result<Vec<Place>> {
        let all = self.enumerate_default();
        match ordering {
            PlaceOrdering::Default => Ok(all),
            PlaceOrdering::Explicit(list) => {
                validate_explicit(self, list, &all)?;
                Ok(list.clone())
            }
        }
    }

    fn enumerate_default(&self) -> Vec<Place> {
        let f = &self.field;
        let mut out = vec![Place::Infinity];
        let qm1 = f.q() as i64 - 1;
        let d = gcd_i64(self.m, qm1);
        let step = qm1 / d;
        let m_red = (self.m / d).rem_euclid(step.max(1));
        let mut xs: Vec<Fe> = f.elements().collect();
        xs.sort_by_key(|&x| f.dkey(x));
        for x in xs {
            if let Some(i) = self.root_index(x) {
                out.push(Place::Ramified(i));
                continue;
            }
            let c = self.f_at(x);
            if f.is_zero(c) {
                // a non-rational configuration cannot arise: f(x) = 0 only at roots
                continue;
            }
            let e = f.dlog(c).expect("dlog tables required for enumeration") as i64;
            if e % d != 0 {
                continue; // y^m = c has no rational solution
            }
            // solve m·t = e (mod q-1): t0 + s·(q-1)/d for s in 0..d
            let t0 = ((e / d).rem_euclid(step) * mod_inverse(m_red, step)).rem_euclid(step);
            let mut ys: Vec<Fe> = (0..d).map(|s| f.gen_pow(t0 + s * step)).collect();
            ys.sort_by_key(|&y| f.dkey(y));
            for y in ys {
                debug_assert!(self.on_curve(x, y));
                out.push(Place::Affine { x, y });
            }
        }
        out
    }

    /// Valuation of a single monomial term at an infinite or ramified
    /// place. Affine places are not supported (zeros away from the ramified
    /// locus are handled by evaluation, not valuation).
    pub fn term_valuation(&self, term: &MonomialTerm, place: &Place) -> Result<i64> {
        match *place {
            Place::Infinity => {
                let s: i64 = term.x_exps.iter().sum();
                Ok(-(self.m * s + term.y_exp * self.r))
            }
            Place::Ramified(k) => Ok(self.m * term.x_exps[k] + term.y_exp),
            Place::Affine { .. } => Err(Error::UnsupportedPlace),
        }
    }

    /// The principal divisor of a monomial, supported on the infinite and
    /// ramified places. Exact (degree 0) whenever f splits over GF(q).
    pub fn term_divisor(&self, term: &MonomialTerm) -> Divisor {
        let s: i64 = term.x_exps.iter().sum();
        let inf = -(self.m * s + term.y_exp * self.r);
        let ram = term
            .x_exps
            .iter()
            .map(|&i| self.m * i + term.y_exp)
            .collect();
        Divisor { inf, ram }
    }

    fn eval_term(&self, term: &MonomialTerm, place: &Place) -> Result<Fe> {
        let f = &self.field;
        match *place {
            Place::Infinity => Err(Error::UnsupportedPlace),
            Place::Affine { x, y } => {
                let mut acc = term.coeff;
                for (k, &e) in term.x_exps.iter().enumerate() {
                    if e != 0 {
                        acc = f.mul(acc, f.pow(f.sub(x, self.roots[k]), e)?);
                    }
                }
                if term.y_exp != 0 {
                    acc = f.mul(acc, f.pow(y, term.y_exp)?);
                }
                Ok(acc)
            }
            Place::Ramified(k) => {
                let v = self.m * term.x_exps[k] + term.y_exp;
                if v < 0 {
                    return Err(Error::PoleAtPlace);
                }
                if v > 0 {
                    return Ok(f.zero());
                }
                // v = 0 forces x_exps[k] = 0 and y_exp = 0: the term is
                // y-free away from this place
                let xk = self.roots[k];
                let mut acc = term.coeff;
                for (l, &e) in term.x_exps.iter().enumerate() {
                    if l != k && e != 0 {
                        acc = f.mul(acc, f.pow(f.sub(xk, self.roots[l]), e)?);
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates a monomial function at an affine or ramified place. Every
    /// term must be pole-free there.
    pub fn evaluate(&self, func: &MonomialFunction, place: &Place) -> Result<Fe> {
        let f = &self.field;
        let mut acc = f.zero();
        for t in &func.terms {
            acc = f.add(acc, self.eval_term(t, place)?);
        }
        Ok(acc)
    }

    pub fn evaluate_all(&self, func: &MonomialFunction, places: &[Place]) -> Result<Vec<Fe>> {
        places.iter().map(|p| self.evaluate(func, p)).collect()
    }

    /// Normalizes a raw (coeff, exps, j) triple so that 0 <= j < m, folding
    /// excess powers of y through y^m = f(x). Requires a split f whenever
    /// folding is needed.
    pub fn make_term(&self, coeff: Fe, x_exps: Vec<i64>, y_exp: i64) -> Result<MonomialTerm> {
        if x_exps.len() != self.roots.len() {
            return Err(Error::DimensionMismatch);
        }
        let q0 = y_exp.div_euclid(self.m);
        let j = y_exp.rem_euclid(self.m);
        if q0 == 0 {
            return Ok(MonomialTerm { coeff, x_exps, y_exp: j });
        }
        if !self.split {
            return Err(Error::Precondition(
                "y-exponent reduction requires f to split over GF(q)".into(),
            ));
        }
        let coeff = self.field.mul(coeff, self.field.pow(self.lead, q0)?);
        let x_exps = x_exps.into_iter().map(|e| e + q0).collect();
        Ok(MonomialTerm { coeff, x_exps, y_exp: j })
    }

    pub fn term_one(&self) -> MonomialTerm {
        MonomialTerm {
            coeff: self.field.one(),
            x_exps: vec![0; self.roots.len()],
            y_exp: 0,
        }
    }

    pub fn mul_terms(&self, a: &MonomialTerm, b: &MonomialTerm) -> Result<MonomialTerm> {
        let coeff = self.field.mul(a.coeff, b.coeff);
        let x_exps = a
            .x_exps
            .iter()
            .zip(&b.x_exps)
            .map(|(&x, &y)| x + y)
            .collect();
        self.make_term(coeff, x_exps, a.y_exp + b.y_exp)
    }

    pub fn pow_term(&self, a: &MonomialTerm, e: i64) -> Result<MonomialTerm> {
        let coeff = self.field.pow(a.coeff, e)?;
        let x_exps = a.x_exps.iter().map(|&x| x * e).collect();
        self.make_term(coeff, x_exps, a.y_exp * e)
    }

    pub fn render_term(&self, term: &MonomialTerm) -> String {
        let f = &self.field;
        let mut parts = Vec::new();
        if term.coeff != f.one() {
            parts.push(f.render(term.coeff));
        }
        for (k, &e) in term.x_exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if f.is_zero(self.roots[k]) {
                "x".to_string()
            } else {
                format!("(x-{})", f.render(self.roots[k]))
            };
            parts.push(if e == 1 { base } else { format!("{base}^{e}") });
        }
        match term.y_exp {
            0 => {}
            1 => parts.push("y".into()),
            j => parts.push(format!("y^{j}")),
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn render_function(&self, func: &MonomialFunction) -> String {
        if func.terms.is_empty() {
            return "0".into();
        }
        func.terms
            .iter()
            .map(|t| self.render_term(t))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn render_divisor(&self, d: &Divisor) -> String {
        let mut parts = Vec::new();
        if d.inf != 0 {
            parts.push(format!("{}*Pinf", d.inf));
        }
        for (k, &c) in d.ram.iter().enumerate() {
            if c != 0 {
                parts.push(format!("{c}*Q{}", k + 1));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn validate_explicit(curve: &Curve, list: &[Place], expected: &[Place]) -> Result<()> {
    use std::collections::HashSet;
    let mut seen = HashSet::new();
    for p in list {
        if let Place::Affine { x, y } = p {
            if curve.field.is_zero(*y) || !curve.on_curve(*x, *y) {
                return Err(Error::ExplicitOrderingIncomplete(format!(
                    "({}, {}) is not an affine rational place of the curve",
                    curve.field.render(*x),
                    curve.field.render(*y)
                )));
            }
        }
        if !seen.insert(*p) {
            return Err(Error::ExplicitOrderingIncomplete("duplicate place".into()));
        }
    }
    if seen.len() != expected.len() || !expected.iter().all(|p| seen.contains(p)) {
        return Err(Error::ExplicitOrderingIncomplete(format!(
            "expected all {} rational places, got {}",
            expected.len(),
            seen.len()
        )));
    }
    Ok(())
}

/// A monomial c·Π(x-α_k)^{i_k}·y^j with 0 <= j < m. Exponents may be
/// negative; the k-th factor refers to the k-th rational root of f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coeff: Fe,
    pub x_exps: Vec<i64>,
    pub y_exp: i64,
}

impl MonomialTerm {
    pub fn invert(&self, curve: &Curve) -> Result<MonomialTerm> {
        curve.pow_term(self, -1)
    }

    pub fn into_function(self) -> MonomialFunction {
        MonomialFunction { terms: vec![self] }
    }
}

/// A GF(q)-linear combination of monomials with pairwise distinct pole
/// orders at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialFunction {
    terms: Vec<MonomialTerm>,
}

impl MonomialFunction {
    pub fn new(terms: Vec<MonomialTerm>) -> MonomialFunction {
        MonomialFunction { terms }
    }

    pub fn one(curve: &Curve) -> MonomialFunction {
        curve.term_one().into_function()
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn is_single_term(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn single_term(&self) -> Option<&MonomialTerm> {
        if self.terms.len() == 1 {
            Some(&self.terms[0])
        } else {
            None
        }
    }

    /// Largest pole order at infinity over the terms.
    pub fn pole_order_at_infinity(&self, curve: &Curve) -> i64 {
        self.terms
            .iter()
            .map(|t| -curve.term_valuation(t, &Place::Infinity).expect("infinity"))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, field: &Field, c: Fe) -> MonomialFunction {
        MonomialFunction {
            terms: self
                .terms
                .iter()
                .map(|t| MonomialTerm {
                    coeff: field.mul(t.coeff, c),
                    x_exps: t.x_exps.clone(),
                    y_exp: t.y_exp,
                })
                .collect(),
        }
    }

    /// Product with a single monomial.
    pub fn mul_term(&self, curve: &Curve, other: &MonomialTerm) -> Result<MonomialFunction> {
        let terms = self
            .terms
            .iter()
            .map(|t| curve.mul_terms(t, other))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialFunction { terms })
    }

    /// Power of a single-term function.
    pub fn pow(&self, curve: &Curve, e: i64) -> Result<MonomialFunction> {
        let t = self
            .single_term()
            .ok_or_else(|| Error::Precondition("pow requires a single-term function".into()))?;
        Ok(curve.pow_term(t, e)?.into_function())
    }
}

/// An integer divisor supported on the infinite and ramified places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub inf: i64,
    /// Coefficient at the k-th ramified place, aligned with [`Curve::roots`].
    pub ram: Vec<i64>,
}

impl Divisor {
    pub fn zero(curve: &Curve) -> Divisor {
        Divisor {
            inf: 0,
            ram: vec![0; curve.num_roots()],
        }
    }

    /// Divisor from general (place, coefficient) pairs; affine support is
    /// rejected.
    pub fn from_pairs(curve: &Curve, pairs: &[(Place, i64)]) -> Result<Divisor> {
        let mut d = Divisor::zero(curve);
        for (p, c) in pairs {
            match p {
                Place::Infinity => d.inf += c,
                Place::Ramified(k) => d.ram[*k] += c,
                Place::Affine { .. } => return Err(Error::UnsupportedPlace),
            }
        }
        Ok(d)
    }

    pub fn degree(&self) -> i64 {
        self.inf + self.ram.iter().sum::<i64>()
    }

    pub fn coeff(&self, place: &Place) -> i64 {
        match place {
            Place::Infinity => self.inf,
            Place::Ramified(k) => self.ram[*k],
            Place::Affine { .. } => 0,
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor {
            inf: self.inf + other.inf,
            ram: self
                .ram
                .iter()
                .zip(&other.ram)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            inf: -self.inf,
            ram: self.ram.iter().map(|c| -c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.inf == 0 && self.ram.iter().all(|&c| c == 0)
    }
}
