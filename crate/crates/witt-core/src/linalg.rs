//! Exact linear algebra over a field descriptor: rank, kernel, solve, and
//! subspace arithmetic, all by fraction-free Gauss-Jordan elimination.
//!
//! Subspaces are kept in reduced row echelon form. RREF is canonical for a
//! given row space, so subspace equality is plain comparison of bases, and
//! the sparse and dense elimination paths are interchangeable by
//! construction. The pivot rule is "first nonzero entry in column order";
//! there is no magnitude to pivot on in an exact field.
//!
//! The sparse path engages for wide, thin systems (more than
//! [`SPARSE_MIN_AMBIENT`] columns at density below 10%); the derivation-space
//! system of `W_n` is the motivating case.
//!
//! Entries are stored raw as `degree` consecutive limbs per coordinate (the
//! coefficient vector of one field element); [`ExactMatrix::get`] and friends
//! convert at the boundary.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::gf::{Field, FieldElement};

/// Column count above which low-density systems take the sparse path.
pub const SPARSE_MIN_AMBIENT: usize = 500;

/// A sparse row: sorted column indices and the matching coefficients,
/// `m` limbs each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SparseRow {
    cols: Vec<u32>,
    coeffs: Vec<u32>,
}

impl SparseRow {
    fn nnz(&self) -> usize {
        self.cols.len()
    }

    fn coeff(&self, idx: usize, m: usize) -> &[u32] {
        &self.coeffs[idx * m..(idx + 1) * m]
    }

    fn get(&self, col: u32, m: usize) -> Option<&[u32]> {
        self.cols
            .binary_search(&col)
            .ok()
            .map(|idx| self.coeff(idx, m))
    }
}

/// `a - c * b` as sparse rows.
fn row_submul(field: &Field, a: &SparseRow, c: &[u32], b: &SparseRow) -> SparseRow {
    let desc = field.descriptor();
    let m = field.degree();
    let mut cols = Vec::with_capacity(a.nnz() + b.nnz());
    let mut coeffs = Vec::with_capacity((a.nnz() + b.nnz()) * m);
    let (mut i, mut j) = (0, 0);
    let mut scratch = vec![0u32; m];
    while i < a.nnz() || j < b.nnz() {
        if j >= b.nnz() || (i < a.nnz() && a.cols[i] < b.cols[j]) {
            cols.push(a.cols[i]);
            coeffs.extend_from_slice(a.coeff(i, m));
            i += 1;
        } else if i >= a.nnz() || b.cols[j] < a.cols[i] {
            scratch.fill(0);
            desc.submul_assign_raw(&mut scratch, c, b.coeff(j, m));
            if !desc.is_zero_raw(&scratch) {
                cols.push(b.cols[j]);
                coeffs.extend_from_slice(&scratch);
            }
            j += 1;
        } else {
            scratch.copy_from_slice(a.coeff(i, m));
            desc.submul_assign_raw(&mut scratch, c, b.coeff(j, m));
            if !desc.is_zero_raw(&scratch) {
                cols.push(a.cols[i]);
                coeffs.extend_from_slice(&scratch);
            }
            i += 1;
            j += 1;
        }
    }
    SparseRow { cols, coeffs }
}

fn row_normalize(field: &Field, row: &mut SparseRow) {
    let m = field.degree();
    let desc = field.descriptor();
    let lead = row.coeff(0, m).to_vec();
    if desc.is_zero_raw(&lead) {
        unreachable!("leading coefficient of a stored row is nonzero");
    }
    let inv = desc.inv_raw(&lead).expect("nonzero leading coefficient");
    if field.degree() == 1 && inv[0] == 1 {
        return;
    }
    for idx in 0..row.nnz() {
        let prod = desc.mul_raw(row.coeff(idx, m), &inv);
        row.coeffs[idx * m..(idx + 1) * m].copy_from_slice(&prod);
    }
}

/// Reduced row echelon form: pivot columns strictly increasing, pivots
/// normalized to 1, pivot columns cleared elsewhere. Canonical for the row
/// space, whichever elimination path produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Echelon {
    field: Field,
    width: usize,
    pivots: Vec<usize>,
    rows: Vec<SparseRow>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Entry at `(row, col)` as raw limbs, or `None` when structurally zero.
    fn entry(&self, row: usize, col: usize) -> Option<&[u32]> {
        self.rows[row].get(col as u32, self.field.degree())
    }

    /// Kernel vectors of the first `ambient` columns (one per free column,
    /// free columns ascending). Dense, not yet echelonized.
    fn kernel_vectors(&self, ambient: usize) -> Vec<Vec<u32>> {
        let m = self.field.degree();
        let desc = self.field.descriptor();
        let mut is_pivot = vec![false; ambient];
        for &p in &self.pivots {
            if p < ambient {
                is_pivot[p] = true;
            }
        }
        let mut out = Vec::new();
        for f in 0..ambient {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![0u32; ambient * m];
            v[f * m] = 1;
            for (i, &p) in self.pivots.iter().enumerate() {
                if p >= ambient {
                    continue;
                }
                if let Some(c) = self.entry(i, f) {
                    let neg = desc.neg_raw(c);
                    v[p * m..(p + 1) * m].copy_from_slice(&neg);
                }
            }
            out.push(v);
        }
        out
    }

    fn dense_rows(&self, ambient: usize) -> Vec<Vec<u32>> {
        let m = self.field.degree();
        self.rows
            .iter()
            .map(|row| {
                let mut v = vec![0u32; ambient * m];
                for (idx, &col) in row.cols.iter().enumerate() {
                    if (col as usize) < ambient {
                        v[col as usize * m..(col as usize + 1) * m]
                            .copy_from_slice(row.coeff(idx, m));
                    }
                }
                v
            })
            .collect()
    }
}

/// Incremental sparse elimination: insert rows one at a time, discarding the
/// ones that reduce to zero, then back-substitute to RREF.
fn sparse_engine(field: &Field, width: usize, rows: impl Iterator<Item = SparseRow>) -> Echelon {
    let m = field.degree();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut stored: Vec<SparseRow> = Vec::new();
    for mut row in rows {
        while let Some(&lead) = row.cols.first() {
            match pivot_of_col[lead as usize] {
                Some(r) => {
                    let c = row.coeff(0, m).to_vec();
                    row = row_submul(field, &row, &c, &stored[r]);
                }
                None => {
                    row_normalize(field, &mut row);
                    pivot_of_col[lead as usize] = Some(stored.len());
                    stored.push(row);
                    break;
                }
            }
        }
    }
    // Back-substitution, largest pivot first.
    let mut order: Vec<usize> = (0..stored.len()).collect();
    order.sort_by_key(|&i| stored[i].cols[0]);
    for k in (0..order.len()).rev() {
        let pr = stored[order[k]].clone();
        let pcol = pr.cols[0];
        for &j in order.iter().take(k) {
            if let Some(c) = stored[j].get(pcol, m) {
                let c = c.to_vec();
                stored[j] = row_submul(field, &stored[j], &c, &pr);
            }
        }
    }
    let mut rows_sorted: Vec<SparseRow> = Vec::with_capacity(order.len());
    let mut pivots = Vec::with_capacity(order.len());
    for &i in &order {
        pivots.push(stored[i].cols[0] as usize);
        rows_sorted.push(stored[i].clone());
    }
    Echelon {
        field: field.clone(),
        width,
        pivots,
        rows: rows_sorted,
    }
}

/// Dense elimination with the same pivot rule and the same canonical output.
fn dense_engine(field: &Field, width: usize, rows: impl Iterator<Item = Vec<u32>>) -> Echelon {
    let m = field.degree();
    let desc = field.descriptor();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; width];
    let mut stored: Vec<Vec<u32>> = Vec::new();
    let mut stored_pivot: Vec<usize> = Vec::new();
    for mut row in rows {
        debug_assert_eq!(row.len(), width * m);
        let mut col = 0usize;
        loop {
            while col < width && desc.is_zero_raw(&row[col * m..(col + 1) * m]) {
                col += 1;
            }
            if col == width {
                break;
            }
            match pivot_of_col[col] {
                Some(r) => {
                    let c = row[col * m..(col + 1) * m].to_vec();
                    let pr = &stored[r];
                    for j in col..width {
                        let pj = &pr[j * m..(j + 1) * m];
                        if !desc.is_zero_raw(pj) {
                            let mut slot = row[j * m..(j + 1) * m].to_vec();
                            desc.submul_assign_raw(&mut slot, &c, pj);
                            row[j * m..(j + 1) * m].copy_from_slice(&slot);
                        }
                    }
                }
                None => {
                    let inv = desc
                        .inv_raw(&row[col * m..(col + 1) * m])
                        .expect("nonzero pivot");
                    for j in col..width {
                        let prod = desc.mul_raw(&row[j * m..(j + 1) * m], &inv);
                        row[j * m..(j + 1) * m].copy_from_slice(&prod);
                    }
                    pivot_of_col[col] = Some(stored.len());
                    stored.push(row);
                    stored_pivot.push(col);
                    break;
                }
            }
        }
    }
    // Back-substitution.
    let mut order: Vec<usize> = (0..stored.len()).collect();
    order.sort_by_key(|&i| stored_pivot[i]);
    for k in (0..order.len()).rev() {
        let pr = stored[order[k]].clone();
        let pcol = stored_pivot[order[k]];
        for &j in order.iter().take(k) {
            let c = stored[j][pcol * m..(pcol + 1) * m].to_vec();
            if desc.is_zero_raw(&c) {
                continue;
            }
            for t in pcol..width {
                let src = &pr[t * m..(t + 1) * m];
                if !desc.is_zero_raw(src) {
                    let mut slot = stored[j][t * m..(t + 1) * m].to_vec();
                    desc.submul_assign_raw(&mut slot, &c, src);
                    stored[j][t * m..(t + 1) * m].copy_from_slice(&slot);
                }
            }
        }
    }
    let mut rows_sorted = Vec::with_capacity(order.len());
    let mut pivots = Vec::with_capacity(order.len());
    for &i in &order {
        let dense = &stored[i];
        let mut cols = Vec::new();
        let mut coeffs = Vec::new();
        for col in 0..width {
            let e = &dense[col * m..(col + 1) * m];
            if !desc.is_zero_raw(e) {
                cols.push(col as u32);
                coeffs.extend_from_slice(e);
            }
        }
        pivots.push(stored_pivot[i]);
        rows_sorted.push(SparseRow { cols, coeffs });
    }
    Echelon {
        field: field.clone(),
        width,
        pivots,
        rows: rows_sorted,
    }
}

fn densify(field: &Field, width: usize, row: &SparseRow) -> Vec<u32> {
    let m = field.degree();
    let mut v = vec![0u32; width * m];
    for (idx, &col) in row.cols.iter().enumerate() {
        v[col as usize * m..(col as usize + 1) * m].copy_from_slice(row.coeff(idx, m));
    }
    v
}

/// A dense matrix over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ExactMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols * field.degree()],
        }
    }

    pub fn identity(field: &Field, k: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, k, k);
        let deg = field.degree();
        for i in 0..k {
            m.data[(i * k + i) * deg] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn entry_raw(&self, r: usize, c: usize) -> &[u32] {
        let m = self.field.degree();
        let base = (r * self.cols + c) * m;
        &self.data[base..base + m]
    }

    pub(crate) fn set_raw(&mut self, r: usize, c: usize, v: &[u32]) {
        let m = self.field.degree();
        let base = (r * self.cols + c) * m;
        self.data[base..base + m].copy_from_slice(v);
    }

    pub(crate) fn row_raw(&self, r: usize) -> &[u32] {
        let m = self.field.degree();
        let base = r * self.cols * m;
        &self.data[base..base + self.cols * m]
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.element_from_raw(self.entry_raw(r, c).to_vec())
    }

    pub fn set(&mut self, r: usize, c: usize, v: &FieldElement) -> Result<(), Error> {
        if r >= self.rows || c >= self.cols {
            return Err(Error::IndexOutOfRange);
        }
        if v.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        self.set_raw(r, c, v.coeffs());
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn nnz(&self) -> usize {
        let m = self.field.degree();
        (0..self.rows * self.cols)
            .filter(|&i| !self.field.descriptor().is_zero_raw(&self.data[i * m..(i + 1) * m]))
            .count()
    }

    fn ensure_same_shape(&self, other: &ExactMatrix) -> Result<(), Error> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, Error> {
        self.ensure_same_shape(other)?;
        let mut out = self.clone();
        let m = self.field.degree();
        let desc = self.field.descriptor();
        for i in 0..self.rows * self.cols {
            let mut slot = out.data[i * m..(i + 1) * m].to_vec();
            desc.add_assign_raw(&mut slot, &other.data[i * m..(i + 1) * m]);
            out.data[i * m..(i + 1) * m].copy_from_slice(&slot);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, Error> {
        self.ensure_same_shape(other)?;
        let mut out = self.clone();
        let m = self.field.degree();
        let desc = self.field.descriptor();
        for i in 0..self.rows * self.cols {
            let mut slot = out.data[i * m..(i + 1) * m].to_vec();
            desc.sub_assign_raw(&mut slot, &other.data[i * m..(i + 1) * m]);
            out.data[i * m..(i + 1) * m].copy_from_slice(&slot);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Result<ExactMatrix, Error> {
        if c.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = self.clone();
        let m = self.field.degree();
        let desc = self.field.descriptor();
        for i in 0..self.rows * self.cols {
            let prod = desc.mul_raw(&self.data[i * m..(i + 1) * m], c.coeffs());
            out.data[i * m..(i + 1) * m].copy_from_slice(&prod);
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix, Error> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch);
        }
        let m = self.field.degree();
        let desc = self.field.descriptor();
        let mut out = ExactMatrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry_raw(i, j);
                if desc.is_zero_raw(a) {
                    continue;
                }
                for k in 0..other.cols {
                    let b = other.entry_raw(j, k);
                    if desc.is_zero_raw(b) {
                        continue;
                    }
                    let prod = desc.mul_raw(a, b);
                    let base = (i * other.cols + k) * m;
                    let mut slot = out.data[base..base + m].to_vec();
                    desc.add_assign_raw(&mut slot, &prod);
                    out.data[base..base + m].copy_from_slice(&slot);
                }
            }
        }
        Ok(out)
    }

    /// `self^e` for a square matrix, `e >= 0` (the identity at `e = 0`).
    pub fn pow(&self, e: u64) -> Result<ExactMatrix, Error> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch);
        }
        let mut acc = ExactMatrix::identity(&self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.entry_raw(r, c).to_vec();
                out.set_raw(c, r, &v);
            }
        }
        out
    }

    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix, Error> {
        if self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ExactMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub(crate) fn column_raw(&self, c: usize) -> Vec<u32> {
        let m = self.field.degree();
        let mut v = Vec::with_capacity(self.rows * m);
        for r in 0..self.rows {
            v.extend_from_slice(self.entry_raw(r, c));
        }
        v
    }

    fn sparse_rows(&self) -> Vec<SparseRow> {
        let desc = self.field.descriptor();
        (0..self.rows)
            .map(|r| {
                let mut cols = Vec::new();
                let mut coeffs = Vec::new();
                for c in 0..self.cols {
                    let e = self.entry_raw(r, c);
                    if !desc.is_zero_raw(e) {
                        cols.push(c as u32);
                        coeffs.extend_from_slice(e);
                    }
                }
                SparseRow { cols, coeffs }
            })
            .collect()
    }

    pub(crate) fn echelon(&self) -> Echelon {
        let take_sparse = self.cols > SPARSE_MIN_AMBIENT
            && 10 * (self.nnz() as u64) < (self.rows as u64) * (self.cols as u64);
        if take_sparse {
            sparse_engine(&self.field, self.cols, self.sparse_rows().into_iter())
        } else {
            dense_engine(
                &self.field,
                self.cols,
                (0..self.rows).map(|r| self.row_raw(r).to_vec()),
            )
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// The right kernel as an echelonized subspace of `F^cols`.
    pub fn kernel(&self) -> SubspaceBasis {
        let ech = self.echelon();
        span_of_raw(&self.field, self.cols, ech.kernel_vectors(self.cols))
    }

    /// Solve `self * x = b`.
    ///
    /// Returns the canonical particular solution (free coordinates zero,
    /// equivalently minimal pivot support) together with the kernel, or the
    /// first-class [`SolveOutcome::Unsolvable`] value when the system is
    /// inconsistent.
    pub fn solve_raw(&self, b: &[u32]) -> Result<SolveOutcome, Error> {
        let m = self.field.degree();
        if b.len() != self.rows * m {
            return Err(Error::DimensionMismatch);
        }
        let width = self.cols + 1;
        let desc = self.field.descriptor();
        let rows = (0..self.rows).map(|r| {
            let mut row = self.row_raw(r).to_vec();
            row.extend_from_slice(&b[r * m..(r + 1) * m]);
            row
        });
        // The augmented column rides along; density rule keyed on the
        // coefficient columns.
        let take_sparse = self.cols > SPARSE_MIN_AMBIENT
            && 10 * (self.nnz() as u64) < (self.rows as u64) * (self.cols as u64);
        let ech = if take_sparse {
            let sparse = rows.map(|dense| {
                let mut cols = Vec::new();
                let mut coeffs = Vec::new();
                for c in 0..width {
                    let e = &dense[c * m..(c + 1) * m];
                    if !desc.is_zero_raw(e) {
                        cols.push(c as u32);
                        coeffs.extend_from_slice(e);
                    }
                }
                SparseRow { cols, coeffs }
            });
            sparse_engine(&self.field, width, sparse)
        } else {
            dense_engine(&self.field, width, rows)
        };
        if ech.pivots.contains(&self.cols) {
            return Ok(SolveOutcome::Unsolvable);
        }
        let mut particular = vec![0u32; self.cols * m];
        for (i, &p) in ech.pivots.iter().enumerate() {
            if let Some(c) = ech.entry(i, self.cols) {
                particular[p * m..(p + 1) * m].copy_from_slice(c);
            }
        }
        let kernel = span_of_raw(&self.field, self.cols, ech.kernel_vectors(self.cols));
        Ok(SolveOutcome::Solution { particular, kernel })
    }

    pub fn solve(&self, b: &[FieldElement]) -> Result<SolveOutcome, Error> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch);
        }
        let mut raw = Vec::with_capacity(self.rows * self.field.degree());
        for e in b {
            if e.field() != &self.field {
                return Err(Error::DescriptorMismatch);
            }
            raw.extend_from_slice(e.coeffs());
        }
        self.solve_raw(&raw)
    }
}

/// Result of [`ExactMatrix::solve`]: inconsistency is a value, not an error,
/// because callers branch on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution {
        /// Flattened coefficient vector, `degree` limbs per coordinate.
        particular: Vec<u32>,
        kernel: SubspaceBasis,
    },
    Unsolvable,
}

/// An echelonized basis of a subspace of `F^ambient`.
///
/// Rows are in RREF with strictly increasing pivot columns and no zero rows,
/// so two subspaces are equal iff their bases compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: Field,
    ambient: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<u32>>,
}

impl SubspaceBasis {
    pub fn zero_space(field: &Field, ambient: usize) -> SubspaceBasis {
        SubspaceBasis {
            field: field.clone(),
            ambient,
            pivots: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn full_space(field: &Field, ambient: usize) -> SubspaceBasis {
        let m = field.degree();
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0u32; ambient * m];
                v[i * m] = 1;
                v
            })
            .collect();
        SubspaceBasis {
            field: field.clone(),
            ambient,
            pivots: (0..ambient).collect(),
            rows,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row_raw(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        let m = self.field.degree();
        self.field
            .element_from_raw(self.rows[i][j * m..(j + 1) * m].to_vec())
    }

    /// Is `v` (raw, flattened) in the span?
    pub fn contains_raw(&self, v: &[u32]) -> bool {
        let m = self.field.degree();
        debug_assert_eq!(v.len(), self.ambient * m);
        let desc = self.field.descriptor();
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = w[p * m..(p + 1) * m].to_vec();
            if desc.is_zero_raw(&c) {
                continue;
            }
            let row = &self.rows[i];
            for t in 0..self.ambient {
                let src = &row[t * m..(t + 1) * m];
                if !desc.is_zero_raw(src) {
                    let mut slot = w[t * m..(t + 1) * m].to_vec();
                    desc.submul_assign_raw(&mut slot, &c, src);
                    w[t * m..(t + 1) * m].copy_from_slice(&slot);
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

/// Echelonize a list of raw vectors into a canonical subspace basis.
pub fn span_of_raw(field: &Field, ambient: usize, vectors: Vec<Vec<u32>>) -> SubspaceBasis {
    let ech = dense_engine(field, ambient, vectors.into_iter());
    SubspaceBasis {
        field: field.clone(),
        ambient,
        pivots: ech.pivots.clone(),
        rows: ech.dense_rows(ambient),
    }
}

fn ensure_compatible(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<(), Error> {
    if u.field != v.field {
        return Err(Error::DescriptorMismatch);
    }
    if u.ambient != v.ambient {
        return Err(Error::DimensionMismatch);
    }
    Ok(())
}

pub fn subspace_sum(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<SubspaceBasis, Error> {
    ensure_compatible(u, v)?;
    let mut vectors = u.rows.clone();
    vectors.extend(v.rows.iter().cloned());
    Ok(span_of_raw(&u.field, u.ambient, vectors))
}

/// Intersection by the kernel of the stacked coordinate matrix: a vector in
/// both spans is `sum a_i u_i = sum b_j v_j`, so `(a, b)` runs over the kernel
/// of the matrix whose columns are the `u_i` and `-v_j`.
pub fn subspace_intersect(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<SubspaceBasis, Error> {
    ensure_compatible(u, v)?;
    if u.is_zero() || v.is_zero() {
        return Ok(SubspaceBasis::zero_space(&u.field, u.ambient));
    }
    let field = &u.field;
    let m = field.degree();
    let desc = field.descriptor();
    let k = u.dim();
    let l = v.dim();
    let mut mat = ExactMatrix::zeros(field, u.ambient, k + l);
    for (j, row) in u.rows.iter().enumerate() {
        for r in 0..u.ambient {
            mat.set_raw(r, j, &row[r * m..(r + 1) * m]);
        }
    }
    for (j, row) in v.rows.iter().enumerate() {
        for r in 0..u.ambient {
            let neg = desc.neg_raw(&row[r * m..(r + 1) * m]);
            mat.set_raw(r, k + j, &neg);
        }
    }
    let ker = mat.kernel();
    let mut vectors = Vec::with_capacity(ker.dim());
    for i in 0..ker.dim() {
        let coeffs = ker.row_raw(i);
        let mut w = vec![0u32; u.ambient * m];
        for (j, row) in u.rows.iter().enumerate() {
            let c = &coeffs[j * m..(j + 1) * m];
            if desc.is_zero_raw(c) {
                continue;
            }
            let neg_c = desc.neg_raw(c);
            for t in 0..u.ambient {
                let src = &row[t * m..(t + 1) * m];
                if !desc.is_zero_raw(src) {
                    let mut slot = w[t * m..(t + 1) * m].to_vec();
                    desc.submul_assign_raw(&mut slot, &neg_c, src);
                    w[t * m..(t + 1) * m].copy_from_slice(&slot);
                }
            }
        }
        vectors.push(w);
    }
    Ok(span_of_raw(field, u.ambient, vectors))
}

/// Subspace equality is comparison of canonical bases.
pub fn subspace_equal(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<bool, Error> {
    ensure_compatible(u, v)?;
    Ok(u.rows == v.rows)
}

/// Sparse row builder for large homogeneous systems (the Leibniz system for
/// the derivation space is the motivating client).
#[derive(Debug, Clone)]
pub struct SparseSystem {
    field: Field,
    cols: usize,
    rows: Vec<SparseRow>,
    nnz: usize,
}

impl SparseSystem {
    pub fn new(field: &Field, cols: usize) -> SparseSystem {
        SparseSystem {
            field: field.clone(),
            cols,
            rows: Vec::new(),
            nnz: 0,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Append one row given as (column, coefficient) pairs in any order;
    /// duplicate columns are accumulated, zero entries dropped, all-zero rows
    /// ignored.
    pub fn push_row(&mut self, mut entries: Vec<(usize, Vec<u32>)>) {
        let desc = self.field.descriptor();
        entries.sort_by_key(|e| e.0);
        let mut cols: Vec<u32> = Vec::with_capacity(entries.len());
        let mut coeffs: Vec<u32> = Vec::with_capacity(entries.len() * self.field.degree());
        let mut iter = entries.into_iter().peekable();
        while let Some((col, mut coeff)) = iter.next() {
            debug_assert!(col < self.cols);
            while let Some((next_col, _)) = iter.peek() {
                if *next_col != col {
                    break;
                }
                let (_, extra) = iter.next().unwrap();
                desc.add_assign_raw(&mut coeff, &extra);
            }
            if !desc.is_zero_raw(&coeff) {
                cols.push(col as u32);
                coeffs.extend_from_slice(&coeff);
            }
        }
        if cols.is_empty() {
            return;
        }
        self.nnz += cols.len();
        self.rows.push(SparseRow { cols, coeffs });
    }

    pub(crate) fn echelon(&self) -> Echelon {
        let take_sparse = self.cols > SPARSE_MIN_AMBIENT
            && 10 * (self.nnz as u64) < (self.rows.len() as u64) * (self.cols as u64);
        if take_sparse {
            sparse_engine(&self.field, self.cols, self.rows.iter().cloned())
        } else {
            dense_engine(
                &self.field,
                self.cols,
                self.rows.iter().map(|r| densify(&self.field, self.cols, r)),
            )
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel(&self) -> SubspaceBasis {
        let ech = self.echelon();
        span_of_raw(&self.field, self.cols, ech.kernel_vectors(self.cols))
    }
}

/// Factorization of a matrix for repeated solves against fresh right-hand
/// sides: echelonizes `[M | I]` once, keeping the transform rows and the
/// left-kernel rows (the consistency conditions).
#[derive(Debug, Clone)]
pub struct PreparedSolver {
    field: Field,
    rows: usize,
    cols: usize,
    pivots: Vec<usize>,
    /// For each pivot row, the transform row `e` with `e * M = rref_row`.
    transform: Vec<Vec<u32>>,
    /// Rows `e` with `e * M = 0`; `e * b != 0` marks `b` unsolvable.
    left_kernel: Vec<Vec<u32>>,
    kernel: SubspaceBasis,
}

impl PreparedSolver {
    pub fn new(mat: &ExactMatrix) -> PreparedSolver {
        let field = mat.field().clone();
        let m = field.degree();
        let width = mat.cols() + mat.rows();
        let rows = (0..mat.rows()).map(|r| {
            let mut row = mat.row_raw(r).to_vec();
            let mut aug = vec![0u32; mat.rows() * m];
            aug[r * m] = 1;
            row.extend_from_slice(&aug);
            row
        });
        let ech = dense_engine(&field, width, rows);
        let mut pivots = Vec::new();
        let mut transform = Vec::new();
        let mut left_kernel = Vec::new();
        for (i, &p) in ech.pivots.iter().enumerate() {
            let dense = densify(&field, width, &ech.rows[i]);
            let tail = dense[mat.cols() * m..].to_vec();
            if p < mat.cols() {
                pivots.push(p);
                transform.push(tail);
            } else {
                left_kernel.push(tail);
            }
        }
        let kernel = span_of_raw(&field, mat.cols(), ech.kernel_vectors(mat.cols()));
        PreparedSolver {
            field,
            rows: mat.rows(),
            cols: mat.cols(),
            pivots,
            transform,
            left_kernel,
            kernel,
        }
    }

    pub fn kernel(&self) -> &SubspaceBasis {
        &self.kernel
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn dot(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let m = self.field.degree();
        let desc = self.field.descriptor();
        let mut acc = vec![0u32; m];
        for i in 0..self.rows {
            let x = &a[i * m..(i + 1) * m];
            let y = &b[i * m..(i + 1) * m];
            if !desc.is_zero_raw(x) && !desc.is_zero_raw(y) {
                let prod = desc.mul_raw(x, y);
                desc.add_assign_raw(&mut acc, &prod);
            }
        }
        acc
    }

    /// Canonical particular solution for `M x = b`, or `None` when
    /// inconsistent.
    pub fn solve_raw(&self, b: &[u32]) -> Option<Vec<u32>> {
        let m = self.field.degree();
        debug_assert_eq!(b.len(), self.rows * m);
        let desc = self.field.descriptor();
        for lk in &self.left_kernel {
            if !desc.is_zero_raw(&self.dot(lk, b)) {
                return None;
            }
        }
        let mut x = vec![0u32; self.cols * m];
        for (i, &p) in self.pivots.iter().enumerate() {
            let v = self.dot(&self.transform[i], b);
            x[p * m..(p + 1) * m].copy_from_slice(&v);
        }
        Some(x)
    }
}
