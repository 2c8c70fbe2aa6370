//! Exact dense matrices over GF(q): reduced row echelon form, rank,
//! stacking, kernels. Matrices are tiny here (at most around 8x8), so
//! everything is plain Gauss-Jordan with leftmost-pivot selection, which
//! makes the RREF unique and all outputs deterministic.

use crate::error::{Error, Result};
use crate::field::Field;

const DIGITS: &[u8; 32] = b"0123456789abcdefghijklmnopqrstuv";

/// Row-major matrix over GF(q); entries are raw encodings tagged with q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixGf {
    rows: usize,
    cols: usize,
    q: u8,
    entries: Vec<u8>,
}

/// Output of [`MatrixGf::rref`].
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: MatrixGf,
    pub rank: usize,
    /// Pivot column per non-zero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl MatrixGf {
    pub fn new(q: u8, rows: usize, cols: usize, entries: Vec<u8>) -> Result<MatrixGf> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&v| v >= q) {
            return Err(Error::EncodingOutOfRange {
                encoding: u64::from(bad),
                q,
            });
        }
        Ok(MatrixGf {
            rows,
            cols,
            q,
            entries,
        })
    }

    pub fn zero(q: u8, rows: usize, cols: usize) -> MatrixGf {
        MatrixGf {
            rows,
            cols,
            q,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u8, n: usize) -> MatrixGf {
        let mut m = MatrixGf::zero(q, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(q: u8, cols: usize, rows: &[Vec<u8>]) -> Result<MatrixGf> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            entries.extend_from_slice(r);
        }
        MatrixGf::new(q, rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c) == 0)
    }

    fn check_field(&self, field: &Field) -> Result<()> {
        if field.q() != self.q {
            return Err(Error::MixedFields {
                left: field.q(),
                right: self.q,
            });
        }
        Ok(())
    }

    /// Vertical concatenation; both operands need the same column count
    /// and field.
    pub fn stack(&self, other: &MatrixGf) -> Result<MatrixGf> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        if self.q != other.q {
            return Err(Error::MixedFields {
                left: self.q,
                right: other.q,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(MatrixGf {
            rows: self.rows + other.rows,
            cols: self.cols,
            q: self.q,
            entries,
        })
    }

    pub fn transpose(&self) -> MatrixGf {
        let mut entries = vec![0u8; self.entries.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        MatrixGf {
            rows: self.cols,
            cols: self.rows,
            q: self.q,
            entries,
        }
    }

    /// Unique reduced row echelon form, with rank and pivot columns.
    pub fn rref(&self, field: &Field) -> Result<Rref> {
        self.check_field(field)?;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = field.invv(m.get(r, c));
            m.scale_row(field, r, inv);
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let factor = m.get(i, c);
                    m.subtract_scaled(field, i, r, factor);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        })
    }

    pub fn rank(&self, field: &Field) -> Result<usize> {
        Ok(self.rref(field)?.rank)
    }

    /// Basis of {v : M v^T = 0} as a canonical (RREF) matrix; the rows of
    /// the result span the right null space.
    pub fn nullspace(&self, field: &Field) -> Result<MatrixGf> {
        let reduced = self.rref(field)?;
        let piv = &reduced.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u8; self.cols];
            v[fc] = 1;
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = field.negv(reduced.matrix.get(i, fc));
            }
            rows.push(v);
        }
        let m = MatrixGf::from_rows(self.q, self.cols, &rows)?;
        Ok(m.rref(field)?.matrix_trimmed())
    }

    /// Matrix product self * other.
    pub fn mat_mul(&self, field: &Field, other: &MatrixGf) -> Result<MatrixGf> {
        self.check_field(field)?;
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixGf::zero(self.q, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let add = field.mulv(a, other.get(k, c));
                    let cur = out.entries[r * other.cols + c];
                    out.entries[r * other.cols + c] = field.addv(cur, add);
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, field: &Field, r: usize, factor: u8) {
        for c in 0..self.cols {
            let v = self.entries[r * self.cols + c];
            self.entries[r * self.cols + c] = field.mulv(v, factor);
        }
    }

    /// row i -= factor * row j
    fn subtract_scaled(&mut self, field: &Field, i: usize, j: usize, factor: u8) {
        for c in 0..self.cols {
            let sub = field.mulv(factor, self.entries[j * self.cols + c]);
            let v = self.entries[i * self.cols + c];
            self.entries[i * self.cols + c] = field.subv(v, sub);
        }
    }

    /// Text form: rows joined by ';', one base-32 digit per entry,
    /// e.g. "102;011". The zero-row matrix renders as "".
    pub fn to_text(&self) -> String {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|&v| DIGITS[v as usize] as char)
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the text form. `cols` disambiguates the empty (zero-row)
    /// matrix.
    pub fn from_text(q: u8, cols: usize, text: &str) -> Result<MatrixGf> {
        if text.is_empty() {
            return Ok(MatrixGf::zero(q, 0, cols));
        }
        let mut rows = Vec::new();
        for part in text.split(';') {
            let mut row = Vec::with_capacity(cols);
            for ch in part.bytes() {
                let v = DIGITS
                    .iter()
                    .position(|&d| d == ch)
                    .ok_or_else(|| Error::InvalidInput(format!("bad digit '{}'", ch as char)))?;
                row.push(v as u8);
            }
            if row.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row '{part}' has {} entries, expected {cols}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        MatrixGf::from_rows(q, cols, &rows)
    }
}

impl Rref {
    /// The RREF with its all-zero rows removed.
    pub fn matrix_trimmed(&self) -> MatrixGf {
        let m = &self.matrix;
        let rows: Vec<Vec<u8>> = (0..self.rank).map(|r| m.row(r).to_vec()).collect();
        MatrixGf::from_rows(m.q, m.cols, &rows).expect("trim preserves shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn rref_scaling() {
        let f = Field::new(3).unwrap();
        let m = MatrixGf::from_rows(3, 2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let r = m.rref(&f).unwrap();
        assert_eq!(r.matrix, MatrixGf::identity(3, 2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_proportional_rows() {
        let f = Field::new(3).unwrap();
        let m = MatrixGf::from_rows(3, 3, &[vec![1, 1, 1], vec![2, 2, 2]]).unwrap();
        let r = m.rref(&f).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.matrix.row(0), &[1, 1, 1]);
        assert_eq!(r.matrix.row(1), &[0, 0, 0]);
    }

    #[test]
    fn rref_idempotent() {
        let f = Field::new(4).unwrap();
        // deterministic pseudo-random fill
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 4) as u8
        };
        for _ in 0..50 {
            let entries: Vec<u8> = (0..24).map(|_| next()).collect();
            let m = MatrixGf::new(4, 4, 6, entries).unwrap();
            let r1 = m.rref(&f).unwrap().matrix;
            let r2 = r1.rref(&f).unwrap().matrix;
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn rank_zero_matrix() {
        let f = Field::new(5).unwrap();
        assert_eq!(MatrixGf::zero(5, 3, 5).rank(&f).unwrap(), 0);
    }

    #[test]
    fn rank_stack_self() {
        let f = Field::new(3).unwrap();
        let m = MatrixGf::from_rows(3, 4, &[vec![1, 0, 2, 1], vec![0, 1, 1, 1]]).unwrap();
        let s = m.stack(&m).unwrap();
        assert_eq!(s.rank(&f).unwrap(), m.rank(&f).unwrap());
    }

    #[test]
    fn stack_column_mismatch() {
        let a = MatrixGf::zero(3, 1, 3);
        let b = MatrixGf::zero(3, 1, 4);
        assert!(a.stack(&b).is_err());
    }

    #[test]
    fn nullspace_orthogonal() {
        let f = Field::new(3).unwrap();
        let m = MatrixGf::from_rows(3, 4, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let ns = m.nullspace(&f).unwrap();
        assert_eq!(ns.rows(), 2);
        // every kernel row is orthogonal to every matrix row
        for kr in 0..ns.rows() {
            for mr in 0..m.rows() {
                let mut dot = 0u8;
                for c in 0..4 {
                    dot = f.addv(dot, f.mulv(ns.get(kr, c), m.get(mr, c)));
                }
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let m = MatrixGf::from_rows(3, 3, &[vec![1, 0, 2], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.to_text(), "102;011");
        assert_eq!(MatrixGf::from_text(3, 3, "102;011").unwrap(), m);
        let z = MatrixGf::zero(3, 0, 4);
        assert_eq!(z.to_text(), "");
        assert_eq!(MatrixGf::from_text(3, 4, "").unwrap(), z);
    }

    #[test]
    fn text_uses_letters_past_nine() {
        let m = MatrixGf::from_rows(13, 2, &[vec![10, 12]]).unwrap();
        assert_eq!(m.to_text(), "ac");
        assert_eq!(MatrixGf::from_text(13, 2, "ac").unwrap(), m);
    }
}
