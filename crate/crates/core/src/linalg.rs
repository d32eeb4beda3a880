//! Dense exact linear algebra over GF(q).
//!
//! The workhorse is [`RowReducer`], an incremental reduced-row-echelon
//! state. Rows are fed one at a time and the state never holds more than
//! `rank <= ncols` rows, so row streams far larger than memory (the product
//! matrices of the duality test reach ~n²/2 rows) reduce in place. The
//! pivot rule is deterministic: first nonzero entry in column order, which
//! makes the RREF canonical for the row space regardless of feed order.

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

pub type Row = Vec<Fe>;

pub struct RowReducer<'f> {
    field: &'f Field,
    ncols: usize,
    /// column -> index into `rows` of the pivot row with that pivot column
    pivot_of_col: Vec<Option<usize>>,
    rows: Vec<Row>,
    pivot_cols: Vec<usize>,
    rows_fed: usize,
}

impl<'f> RowReducer<'f> {
    pub fn new(field: &'f Field, ncols: usize) -> Self {
        RowReducer {
            field,
            ncols,
            pivot_of_col: vec![None; ncols],
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            rows_fed: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows_fed(&self) -> usize {
        self.rows_fed
    }

    /// Reduces `row` against the current state. If it is independent, it is
    /// normalized, the column it pivots on is cleared from all other rows,
    /// and `Some(pivot_col)` is returned.
    pub fn feed(&mut self, row: Row) -> Option<usize> {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows_fed += 1;
        let f = self.field;
        let mut row = row;
        let mut lead = None;
        for j in 0..self.ncols {
            if f.is_zero(row[j]) {
                continue;
            }
            match self.pivot_of_col[j] {
                Some(ri) => {
                    let c = row[j];
                    let prow = &self.rows[ri];
                    for jj in j..self.ncols {
                        let t = f.mul(c, prow[jj]);
                        row[jj] = f.sub(row[jj], t);
                    }
                }
                None => {
                    if lead.is_none() {
                        lead = Some(j);
                    }
                }
            }
        }
        let lead = lead?;
        let inv = f.inv(row[lead]).expect("leading entry is nonzero");
        for jj in lead..self.ncols {
            row[jj] = f.mul(row[jj], inv);
        }
        // clear the new pivot column from every stored row
        for ri in 0..self.rows.len() {
            let c = self.rows[ri][lead];
            if !f.is_zero(c) {
                for jj in lead..self.ncols {
                    let t = f.mul(c, row[jj]);
                    self.rows[ri][jj] = f.sub(self.rows[ri][jj], t);
                }
            }
        }
        self.pivot_of_col[lead] = Some(self.rows.len());
        self.rows.push(row);
        self.pivot_cols.push(lead);
        Some(lead)
    }

    /// Whether `row` already lies in the row space.
    pub fn contains(&self, row: &[Fe]) -> bool {
        assert_eq!(row.len(), self.ncols);
        let f = self.field;
        let mut row = row.to_vec();
        for j in 0..self.ncols {
            if !f.is_zero(row[j]) {
                match self.pivot_of_col[j] {
                    Some(ri) => {
                        let c = row[j];
                        let prow = &self.rows[ri];
                        for jj in j..self.ncols {
                            let t = f.mul(c, prow[jj]);
                            row[jj] = f.sub(row[jj], t);
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }

    /// The canonical RREF: pivot rows sorted by pivot column.
    pub fn rref(&self) -> Vec<Row> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivot_cols[i]);
        order.into_iter().map(|i| self.rows[i].clone()).collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols = self.pivot_cols.clone();
        cols.sort_unstable();
        cols
    }

    /// Nullspace basis in free-variable standard form: one vector per free
    /// column (ascending), with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Row> {
        let f = self.field;
        let mut basis = Vec::new();
        for fc in 0..self.ncols {
            if self.pivot_of_col[fc].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.ncols];
            v[fc] = f.one();
            for (ri, &pc) in self.pivot_cols.iter().enumerate() {
                v[pc] = f.neg(self.rows[ri][fc]);
            }
            basis.push(v);
        }
        basis
    }
}

pub fn rank_of(field: &Field, rows: &[Row]) -> usize {
    let mut red = RowReducer::new(field, rows.first().map_or(0, |r| r.len()));
    for r in rows {
        red.feed(r.clone());
    }
    red.rank()
}

pub fn rref_of(field: &Field, rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut red = RowReducer::new(field, ncols);
    for r in rows {
        red.feed(r.clone());
    }
    red.rref()
}

pub fn nullspace_of(field: &Field, rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut red = RowReducer::new(field, ncols);
    for r in rows {
        red.feed(r.clone());
    }
    red.nullspace()
}

pub fn dot(field: &Field, a: &[Fe], b: &[Fe]) -> Fe {
    assert_eq!(a.len(), b.len());
    let mut acc = field.zero();
    for (&x, &y) in a.iter().zip(b) {
        acc = field.add(acc, field.mul(x, y));
    }
    acc
}

/// Componentwise (Schur) product.
pub fn hadamard(field: &Field, a: &[Fe], b: &[Fe]) -> Row {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| field.mul(x, y)).collect()
}

pub fn mat_vec(field: &Field, rows: &[Row], v: &[Fe]) -> Row {
    rows.iter().map(|r| dot(field, r, v)).collect()
}

/// Solves `sum_i lambda_i * basis[i] = target` for `lambda`. Returns `None`
/// when the system is inconsistent; free coefficients are set to zero.
pub fn solve_combination(field: &Field, basis: &[Row], target: &[Fe]) -> Result<Option<Vec<Fe>>> {
    let m = basis.len();
    let n = target.len();
    for b in basis {
        if b.len() != n {
            return Err(Error::DimensionMismatch);
        }
    }
    // augmented system: columns are the coefficients, one equation per place
    let mut red = RowReducer::new(field, m + 1);
    for c in 0..n {
        let mut row: Row = Vec::with_capacity(m + 1);
        for b in basis {
            row.push(b[c]);
        }
        row.push(target[c]);
        red.feed(row);
    }
    if red.pivot_columns().contains(&m) {
        return Ok(None);
    }
    let mut lambda = vec![field.zero(); m];
    let rref = red.rref();
    let pivots = red.pivot_columns();
    for (row, &pc) in rref.iter().zip(pivots.iter()) {
        lambda[pc] = row[m];
    }
    Ok(Some(lambda))
}
