//! Dense vectors and matrices over a [`Field`].
//!
//! Vectors are rows; a matrix acts on the right (`v * A`), matching the
//! right module actions used throughout the crate.

use crate::field::{Field, FieldElem};

pub type Vector = Vec<FieldElem>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    /// Builds a matrix from small integers reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == FieldElem::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let acc = out[(i, j)];
                    out[(i, j)] = field.add(acc, field.mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn add(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, field: &Field, c: FieldElem) -> Matrix {
        let data = self.data.iter().map(|&a| field.mul(c, a)).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Row vector times matrix.
    pub fn apply(&self, field: &Field, v: &[FieldElem]) -> Vector {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == FieldElem::ZERO {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = field.add(*slot, field.mul(a, self[(i, j)]));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == FieldElem::ZERO)
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self, field: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m[(i, c)] != FieldElem::ZERO) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = field.inv(m[(r, c)]).expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = field.mul(inv, m[(r, j)]);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)] == FieldElem::ZERO {
                    continue;
                }
                let f = m[(i, c)];
                for j in 0..m.cols {
                    let t = field.mul(f, m[(r, j)]);
                    m[(i, j)] = field.sub(m[(i, j)], t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of `{v : M v^T = 0}`, i.e. the right kernel of `M`.
    pub fn nullspace(&self, field: &Field) -> Vec<Vector> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElem::ZERO; self.cols];
                v[f] = FieldElem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(r[(row, f)]);
                }
                v
            })
            .collect()
    }

    /// Basis of `{v : v M = 0}`.
    pub fn left_nullspace(&self, field: &Field) -> Vec<Vector> {
        self.transpose().nullspace(field)
    }

    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = FieldElem::ONE;
        }
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;

    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced echelon basis of the span of `vectors` (canonical for the span).
pub fn span_basis(field: &Field, vectors: &[Vector], dim: usize) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    debug_assert!(vectors.iter().all(|v| v.len() == dim));
    Matrix::from_rows(vectors).rref(field).0.row_vectors()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::new(3, 1).unwrap()
    }

    #[test]
    fn nullspace_examples() {
        let f = f3();
        assert!(Matrix::identity(2).nullspace(&f).is_empty());
        assert_eq!(Matrix::zero(2, 2).nullspace(&f).len(), 2);

        let m = Matrix::from_ints(&f, &[&[1, 1], &[2, 2]]);
        let ker = m.nullspace(&f);
        assert_eq!(ker.len(), 1);
        // (1,2) solves x + y = 0 over F_3
        let expected = vec![f.from_int(1), f.from_int(2)];
        let scaled: Vec<_> = (1..3)
            .map(|c| {
                ker[0]
                    .iter()
                    .map(|&x| f.mul(f.from_int(c), x))
                    .collect::<Vector>()
            })
            .collect();
        assert!(scaled.contains(&expected));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::new(5, 1).unwrap();
        let m = Matrix::from_ints(&f, &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        let singular = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse(&f).is_none());
    }

    #[test]
    fn rank_nullity_over_extension_field() {
        let f = Field::new(2, 2).unwrap();
        let w = f.elem(2);
        let m = Matrix::from_rows(&[
            vec![FieldElem::ONE, w, FieldElem::ZERO],
            vec![w, f.mul(w, w), FieldElem::ZERO],
        ]);
        let ker = m.nullspace(&f);
        assert_eq!(m.rank(&f) + ker.len(), 3);
        for v in &ker {
            let mv = m.mul(&f, &Matrix::from_rows(std::slice::from_ref(v)).transpose());
            assert!(mv.is_zero());
        }
    }
}
