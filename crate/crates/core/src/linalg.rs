//! Sparse exact linear algebra: incremental reduced row echelon forms with
//! deterministic pivoting, kernel extraction, and a work budget so oversized
//! computations fail loudly instead of thrashing.

use crate::field::Field;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub detail: String,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "work budget exceeded: {}", self.detail)
    }
}

impl std::error::Error for BudgetExceeded {}

/// Sparse vector: entries sorted by column index, all coefficients nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVec<K> {
    pub entries: Vec<(u32, K)>,
}

impl<K: Field> SparseVec<K> {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: u32) -> Self {
        SparseVec { entries: vec![(col, K::one())] }
    }

    /// Builds from arbitrary (col, coeff) pairs: sorts, merges duplicates,
    /// drops zeros.
    pub fn collect(mut pairs: Vec<(u32, K)>) -> Self {
        pairs.sort_by_key(|e| e.0);
        let mut entries: Vec<(u32, K)> = Vec::with_capacity(pairs.len());
        for (c, v) in pairs {
            match entries.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                _ => entries.push((c, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        SparseVec { entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, col: u32) -> Option<&K> {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(c))).collect(),
        }
    }

    /// self + c * other, merging sorted entry lists.
    pub fn add_scaled(&self, other: &Self, c: &K) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let pick_left = match (self.entries.get(i), other.entries.get(j)) {
                (Some(a), Some(b)) => {
                    if a.0 == b.0 {
                        let v = a.1.add(&b.1.mul(c));
                        if !v.is_zero() {
                            out.push((a.0, v));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.0 < b.0
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_left {
                out.push(self.entries[i].clone());
                i += 1;
            } else {
                let (col, v) = &other.entries[j];
                out.push((*col, v.mul(c)));
                j += 1;
            }
        }
        SparseVec { entries: out }
    }
}

struct Row<K> {
    pivot: u32,
    /// Non-pivot entries, sorted by column; the pivot coefficient is 1 and
    /// stored implicitly.
    tail: SparseVec<K>,
    /// Tracking coordinates (kernel extraction); empty when unused.
    track: SparseVec<K>,
}

/// Incremental reduced row echelon form over a fixed column range.
///
/// Pivot selection is the smallest column index of the reduced vector, so the
/// result is canonical for a given subspace: two `Echelon`s agree row-for-row
/// iff they span the same space. Optional per-column tracking vectors turn
/// insertion into kernel extraction.
pub struct Echelon<K: Field> {
    ncols: usize,
    rows: Vec<Row<K>>,
    /// col -> row index holding that pivot, u32::MAX when none.
    pivot_row: Vec<u32>,
    /// Lazily maintained occupancy: rows that may have an entry at a column.
    occupancy: Vec<Vec<u32>>,
    /// Dense scratch for reductions.
    scratch: Vec<K>,
    scratch_track: Vec<K>,
    entry_count: usize,
    max_entries: usize,
}

pub const DEFAULT_MAX_ENTRIES: usize = 400_000_000;

impl<K: Field> Echelon<K> {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![u32::MAX; ncols],
            occupancy: vec![Vec::new(); ncols],
            scratch: vec![K::zero(); ncols],
            scratch_track: Vec::new(),
            entry_count: 0,
            max_entries: DEFAULT_MAX_ENTRIES,
        }
    }

    pub fn with_budget(ncols: usize, max_entries: usize) -> Self {
        let mut e = Self::new(ncols);
        e.max_entries = max_entries;
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.rows.iter().map(|r| r.pivot).collect();
        p.sort_unstable();
        p
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != u32::MAX
    }

    /// Fully reduces `v` against the current rows. The result has no support
    /// on pivot columns. Single pass: RREF rows only introduce non-pivot
    /// columns.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut acc: Vec<(u32, K)> = Vec::new();
        let mut eliminations: Vec<(u32, K)> = Vec::new(); // (row, coeff)
        for (c, coeff) in &v.entries {
            let r = self.pivot_row[*c as usize];
            if r == u32::MAX {
                acc.push((*c, coeff.clone()));
            } else {
                eliminations.push((r, coeff.clone()));
            }
        }
        for (r, coeff) in &eliminations {
            let tail = &self.rows[*r as usize].tail;
            let nc = coeff.neg();
            for (c, tv) in &tail.entries {
                debug_assert!(self.pivot_row[*c as usize] == u32::MAX);
                acc.push((*c, tv.mul(&nc)));
            }
        }
        SparseVec::collect(acc)
    }

    fn check_budget(&self, added: usize) -> Result<(), BudgetExceeded> {
        if self.entry_count + added > self.max_entries {
            Err(BudgetExceeded {
                detail: format!(
                    "echelon entry count would exceed {} ({} cols, rank {})",
                    self.max_entries,
                    self.ncols,
                    self.rows.len()
                ),
            })
        } else {
            Ok(())
        }
    }

    /// Inserts a vector. Returns the new pivot column if the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> Result<Option<u32>, BudgetExceeded> {
        self.insert_tracked(v, SparseVec::zero()).map(|r| r.map_err(|_| ()).ok())
    }

    /// Inserts with a tracking vector. On rank growth returns Ok(pivot); when
    /// the vector was dependent returns Err(track) where `track` is the
    /// reduced tracking combination (a kernel certificate for the caller).
    #[allow(clippy::type_complexity)]
    pub fn insert_tracked(
        &mut self,
        v: SparseVec<K>,
        track: SparseVec<K>,
    ) -> Result<Result<u32, SparseVec<K>>, BudgetExceeded> {
        // Dense-scratch reduction of both the vector and its tracking part.
        let mut support: Vec<u32> = Vec::with_capacity(v.entries.len());
        for (c, coeff) in &v.entries {
            self.scratch[*c as usize] = coeff.clone();
            support.push(*c);
        }
        let track_dim = self.scratch_track.len();
        let mut tsupport: Vec<u32> = Vec::new();
        for (c, coeff) in &track.entries {
            let c = *c as usize;
            if c >= track_dim {
                self.scratch_track.resize(c + 1, K::zero());
            }
            self.scratch_track[c] = coeff.clone();
            tsupport.push(c as u32);
        }
        // Eliminate pivot coordinates; new fill-in is non-pivot, so one pass
        // over the (growing) support list suffices.
        let mut i = 0;
        while i < support.len() {
            let c = support[i] as usize;
            i += 1;
            let r = self.pivot_row[c];
            if r == u32::MAX {
                continue;
            }
            let coeff = std::mem::replace(&mut self.scratch[c], K::zero());
            if coeff.is_zero() {
                continue;
            }
            let row = &self.rows[r as usize];
            for (tc, tv) in &row.tail.entries {
                let slot = &mut self.scratch[*tc as usize];
                let was_zero = slot.is_zero();
                *slot = slot.sub(&coeff.mul(tv));
                if was_zero {
                    support.push(*tc);
                }
            }
            for (tc, tv) in &row.track.entries {
                let tc = *tc as usize;
                if tc >= self.scratch_track.len() {
                    self.scratch_track.resize(tc + 1, K::zero());
                }
                let was_zero = self.scratch_track[tc].is_zero();
                self.scratch_track[tc] = self.scratch_track[tc].sub(&coeff.mul(tv));
                if was_zero {
                    tsupport.push(tc as u32);
                }
            }
        }
        // Gather the residual.
        support.sort_unstable();
        support.dedup();
        let mut residual: Vec<(u32, K)> = Vec::new();
        for c in &support {
            let v = std::mem::replace(&mut self.scratch[*c as usize], K::zero());
            if !v.is_zero() {
                residual.push((*c, v));
            }
        }
        tsupport.sort_unstable();
        tsupport.dedup();
        let mut tresidual: Vec<(u32, K)> = Vec::new();
        for c in &tsupport {
            let v = std::mem::replace(&mut self.scratch_track[*c as usize], K::zero());
            if !v.is_zero() {
                tresidual.push((*c, v));
            }
        }
        if residual.is_empty() {
            return Ok(Err(SparseVec { entries: tresidual }));
        }
        // Normalize on the smallest column.
        let pivot = residual[0].0;
        let lead_inv = residual[0].1.inv();
        let mut tail: Vec<(u32, K)> = residual[1..]
            .iter()
            .map(|(c, v)| (*c, v.mul(&lead_inv)))
            .collect();
        let ttail: Vec<(u32, K)> = tresidual.iter().map(|(c, v)| (*c, v.mul(&lead_inv))).collect();
        self.check_budget(tail.len() + ttail.len() + 1)?;
        // Back-eliminate the new pivot from existing rows (lazy occupancy).
        let holders = std::mem::take(&mut self.occupancy[pivot as usize]);
        let new_row_idx = self.rows.len() as u32;
        let tail_vec = SparseVec { entries: std::mem::take(&mut tail) };
        let ttail_vec = SparseVec { entries: ttail };
        for h in holders {
            let row = &mut self.rows[h as usize];
            let coeff = match row.tail.get(pivot) {
                Some(c) => c.clone(),
                None => continue, // stale occupancy entry
            };
            let nc = coeff.neg();
            let old_len = row.tail.entries.len() + row.track.entries.len();
            let mut new_tail = row.tail.add_scaled(&tail_vec, &nc);
            // remove the pivot column itself
            if let Ok(p) = new_tail.entries.binary_search_by_key(&pivot, |e| e.0) {
                new_tail.entries.remove(p);
            }
            let new_track = row.track.add_scaled(&ttail_vec, &nc);
            let new_len = new_tail.entries.len() + new_track.entries.len();
            self.check_budget(new_len.saturating_sub(old_len))?;
            self.entry_count = self.entry_count.saturating_add(new_len).saturating_sub(old_len);
            // register occupancy for fill-in
            for (c, _) in &new_tail.entries {
                self.occupancy[*c as usize].push(h);
            }
            let row = &mut self.rows[h as usize];
            row.tail = new_tail;
            row.track = new_track;
        }
        for (c, _) in &tail_vec.entries {
            self.occupancy[*c as usize].push(new_row_idx);
        }
        self.entry_count += tail_vec.entries.len() + ttail_vec.entries.len() + 1;
        self.pivot_row[pivot as usize] = new_row_idx;
        self.rows.push(Row { pivot, tail: tail_vec, track: ttail_vec });
        Ok(Ok(pivot))
    }

    /// True when `v` lies in the row span.
    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Canonical rows (pivot coefficient 1 included), sorted by pivot column.
    pub fn canonical_rows(&self) -> Vec<SparseVec<K>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.rows[i].pivot);
        idx.into_iter()
            .map(|i| {
                let r = &self.rows[i];
                let mut entries = vec![(r.pivot, K::one())];
                entries.extend(r.tail.entries.iter().cloned());
                entries.sort_by_key(|e| e.0);
                SparseVec { entries }
            })
            .collect()
    }

    /// Span equality of two echelons over the same column range.
    pub fn same_span(&self, other: &Echelon<K>) -> bool {
        if self.ncols != other.ncols || self.rank() != other.rank() {
            return false;
        }
        let mut a: Vec<(u32, &Row<K>)> = self.rows.iter().map(|r| (r.pivot, r)).collect();
        let mut b: Vec<(u32, &Row<K>)> = other.rows.iter().map(|r| (r.pivot, r)).collect();
        a.sort_by_key(|e| e.0);
        b.sort_by_key(|e| e.0);
        a.iter()
            .zip(b.iter())
            .all(|((pa, ra), (pb, rb))| pa == pb && ra.tail == rb.tail)
    }
}

/// Kernel of the linear map sending unit vector e_i to columns[i]: returns a
/// basis of relations among the given column vectors. Deterministic: processes
/// columns in order; kernel vectors are reduced against earlier ones only in
/// the sense of echelon tracking.
pub fn kernel_basis<K: Field>(
    ambient_dim: usize,
    columns: impl IntoIterator<Item = SparseVec<K>>,
    max_entries: usize,
) -> Result<Vec<SparseVec<K>>, BudgetExceeded> {
    let mut ech = Echelon::with_budget(ambient_dim, max_entries);
    let mut kernel = Vec::new();
    let mut total: usize = 0;
    for (i, col) in columns.into_iter().enumerate() {
        match ech.insert_tracked(col, SparseVec::unit(i as u32))? {
            Ok(_) => {}
            Err(track) => {
                // rows maintain row_vec = sum track[j] * col_j, so a vanishing
                // residual means its reduced track is itself a relation among
                // the columns (it still carries the e_i coefficient).
                let kv = track;
                total += kv.entries.len();
                if total > max_entries {
                    return Err(BudgetExceeded {
                        detail: format!("kernel basis entries exceed {}", max_entries),
                    });
                }
                kernel.push(kv);
            }
        }
    }
    Ok(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Q};

    fn sv(entries: &[(u32, i64)]) -> SparseVec<Q> {
        SparseVec::collect(entries.iter().map(|&(c, v)| (c, Q::from_i64(v))).collect())
    }

    #[test]
    fn echelon_rank_and_reduce() {
        let mut e = Echelon::<Q>::new(4);
        e.insert(sv(&[(0, 1), (1, 2)])).unwrap();
        e.insert(sv(&[(1, 1), (2, 1)])).unwrap();
        e.insert(sv(&[(0, 1), (1, 1), (2, -1)])).unwrap(); // dependent
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&sv(&[(0, 2), (1, 5), (2, 1)])));
        assert!(!e.contains(&sv(&[(3, 1)])));
        // reduced vectors have no pivot support
        let r = e.reduce(&sv(&[(0, 1), (3, 1)]));
        for (c, _) in &r.entries {
            assert!(!e.is_pivot(*c));
        }
    }

    #[test]
    fn echelon_is_canonical() {
        // same subspace entered in different orders gives identical rows
        let mut a = Echelon::<Q>::new(3);
        a.insert(sv(&[(0, 1), (1, 1)])).unwrap();
        a.insert(sv(&[(1, 2), (2, 1)])).unwrap();
        let mut b = Echelon::<Q>::new(3);
        b.insert(sv(&[(0, 2), (1, 4), (2, 1)])).unwrap();
        b.insert(sv(&[(0, 3), (1, 3)])).unwrap();
        assert!(a.same_span(&b));
        assert_eq!(
            a.canonical_rows(),
            b.canonical_rows()
        );
    }

    #[test]
    fn kernel_of_columns() {
        // columns: c0 = e0, c1 = e1, c2 = e0 + e1, c3 = 0
        let cols = vec![sv(&[(0, 1)]), sv(&[(1, 1)]), sv(&[(0, 1), (1, 1)]), sv(&[])];
        let ker = kernel_basis(2, cols.clone(), usize::MAX).unwrap();
        assert_eq!(ker.len(), 2);
        // verify each kernel vector really kills the columns
        for kv in &ker {
            let mut acc = SparseVec::<Q>::zero();
            for (i, c) in &kv.entries {
                acc = acc.add_scaled(&cols[*i as usize], c);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn budget_trips() {
        let mut e = Echelon::<Fp>::with_budget(100, 5);
        let dense: Vec<(u32, Fp)> = (0..50u32).map(|c| (c, Fp(c as u64 + 1))).collect();
        let r = e.insert(SparseVec::collect(dense));
        assert!(r.is_err());
    }

    #[test]
    fn random_rank_matches_dense_gauss() {
        // cross-check sparse RREF rank against a plain dense elimination
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 8;
            let m = 12;
            let mut dense: Vec<Vec<i64>> = Vec::new();
            let mut e = Echelon::<Q>::new(n);
            for _ in 0..m {
                let row: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..3)).collect();
                dense.push(row.clone());
                let entries: Vec<(u32, Q)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(i, v)| (i as u32, Q::from_i64(*v)))
                    .collect();
                e.insert(SparseVec { entries }).unwrap();
            }
            // dense rank over exact rationals via fraction-free style i128
            let mut mat: Vec<Vec<f64>> = dense
                .iter()
                .map(|r| r.iter().map(|&v| v as f64).collect())
                .collect();
            let mut rank = 0;
            for col in 0..n {
                if let Some(p) = (rank..m).find(|&r| mat[r][col].abs() > 1e-9) {
                    mat.swap(rank, p);
                    for r in 0..m {
                        if r != rank && mat[r][col].abs() > 1e-9 {
                            let f = mat[r][col] / mat[rank][col];
                            for c in 0..n {
                                mat[r][c] -= f * mat[rank][c];
                            }
                        }
                    }
                    rank += 1;
                }
            }
            assert_eq!(e.rank(), rank);
        }
    }
}
