//! Gaussian elimination over any [`FieldSpec`].
//!
//! Rows are plain `Vec<FieldElement>`; all rows of one computation share a
//! field and a length. Used for knowledge-span bookkeeping, so the helpers
//! here answer span questions (rank, membership, left kernel) rather than
//! solve systems.

use crate::field::{FieldElement, FieldSpec};

/// Reduced row echelon form of a set of rows.
#[derive(Debug, Clone)]
pub struct Echelon {
    spec: FieldSpec,
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(spec: FieldSpec, width: usize) -> Self {
        Echelon {
            spec,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a, I>(spec: FieldSpec, width: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<FieldElement>>,
    {
        let mut echelon = Echelon::new(spec, width);
        for row in rows {
            echelon.insert(row);
        }
        echelon
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduce `row` against the current basis; the zero vector means `row`
    /// already lies in the span.
    pub fn reduce(&self, row: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(row.len(), self.width, "row width mismatch");
        let mut residue = row.to_vec();
        for (basis, &pivot) in self.rows.iter().zip(&self.pivots) {
            let factor = residue[pivot];
            if !factor.is_zero() {
                for (r, b) in residue.iter_mut().zip(basis) {
                    *r -= factor * *b;
                }
            }
        }
        residue
    }

    pub fn contains(&self, row: &[FieldElement]) -> bool {
        self.reduce(row).iter().all(FieldElement::is_zero)
    }

    /// Add `row` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, row: &[FieldElement]) -> bool {
        let mut residue = self.reduce(row);
        let Some(pivot) = residue.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let scale = residue[pivot].inv().expect("pivot is nonzero");
        for x in residue.iter_mut() {
            *x *= scale;
        }
        // Keep the basis fully reduced so `reduce` is a single pass.
        for (basis, _) in self.rows.iter_mut().zip(&self.pivots) {
            let factor = basis[pivot];
            if !factor.is_zero() {
                for (b, r) in basis.iter_mut().zip(&residue) {
                    *b -= factor * *r;
                }
            }
        }
        self.rows.push(residue);
        self.pivots.push(pivot);
        true
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }
}

pub fn rank(spec: FieldSpec, width: usize, rows: &[Vec<FieldElement>]) -> usize {
    Echelon::from_rows(spec, width, rows).rank()
}

/// Basis of `{c : sum_m c[m] * rows[m] = 0}`.
pub fn left_kernel(spec: FieldSpec, width: usize, rows: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    // Eliminate on [rows | I]; rows of the identity part whose left part
    // vanished span the kernel.
    let count = rows.len();
    let augmented: Vec<Vec<FieldElement>> = rows
        .iter()
        .enumerate()
        .map(|(m, row)| {
            assert_eq!(row.len(), width, "row width mismatch");
            let mut out = row.clone();
            out.extend((0..count).map(|j| if j == m { spec.one() } else { spec.zero() }));
            out
        })
        .collect();
    let echelon = Echelon::from_rows(spec, width + count, &augmented);
    echelon
        .rows
        .iter()
        .zip(&echelon.pivots)
        .filter(|(_, &pivot)| pivot >= width)
        .map(|(row, _)| row[width..].to_vec())
        .collect()
}
