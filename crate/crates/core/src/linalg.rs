//! Column-incremental Gaussian elimination over `F_q`.
//!
//! Columns are inserted one at a time. Each insertion either extends the
//! echelon basis (pivot = first nonzero row of the reduced column) or
//! reports the linear dependency that reduced it to zero, expressed over all
//! columns inserted so far.

use crate::field::{Fe, FieldSpec};

struct BasisVector {
    /// Reduced column, zero above its pivot row and 1 at it.
    values: Vec<Fe>,
    /// Combination of inserted columns that equals `values`.
    combo: Vec<Fe>,
}

pub(crate) struct ColumnEchelon<'a> {
    f: &'a FieldSpec,
    rows: usize,
    basis: Vec<BasisVector>,
    pivot_owner: Vec<Option<usize>>,
    columns: usize,
}

impl<'a> ColumnEchelon<'a> {
    pub(crate) fn new(f: &'a FieldSpec, rows: usize) -> Self {
        ColumnEchelon { f, rows, basis: Vec::new(), pivot_owner: vec![None; rows], columns: 0 }
    }

    pub(crate) fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Inserts a column. Returns `Some(kernel)` with `kernel.len()` equal to
    /// the number of columns inserted (this one included) and
    /// `kernel[last] = 1` when the column is dependent on earlier ones.
    pub(crate) fn push(&mut self, column: &[Fe]) -> Option<Vec<Fe>> {
        debug_assert_eq!(column.len(), self.rows);
        let f = self.f;
        let idx = self.columns;
        self.columns += 1;
        let mut v = column.to_vec();
        let mut combo = vec![Fe::ZERO; self.columns];
        combo[idx] = Fe::ONE;
        for r in 0..self.rows {
            if v[r].is_zero() {
                continue;
            }
            let Some(b) = self.pivot_owner[r] else { continue };
            let factor = v[r];
            let bv = &self.basis[b];
            for k in r..self.rows {
                v[k] = f.sub(v[k], f.mul(factor, bv.values[k]));
            }
            for (k, &c) in bv.combo.iter().enumerate() {
                combo[k] = f.sub(combo[k], f.mul(factor, c));
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => Some(combo),
            Some(pivot) => {
                let inv = f.inv(v[pivot]).expect("pivot is nonzero");
                let values = v.iter().map(|&c| f.mul(c, inv)).collect();
                let combo = combo.iter().map(|&c| f.mul(c, inv)).collect();
                self.pivot_owner[pivot] = Some(self.basis.len());
                self.basis.push(BasisVector { values, combo });
                None
            }
        }
    }

    #[cfg(test)]
    fn pivots(&self) -> Vec<usize> {
        let mut by_vector: Vec<(usize, usize)> =
            self.pivot_owner.iter().enumerate().filter_map(|(row, b)| b.map(|b| (b, row))).collect();
        by_vector.sort();
        by_vector.into_iter().map(|(_, row)| row).collect()
    }
}
