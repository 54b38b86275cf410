//! Sparse integer vectors and column-major sparse integer matrices.

use std::fmt;

use super::integer::{int, is_zero, reduce, Integer};

/// Sorted `(index, value)` pairs with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Integer)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, int(1))],
        }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Integer)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Integer)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => {
                    if let Some((_, w)) = entries.last() {
                        if is_zero(w) {
                            entries.pop();
                        }
                    }
                    entries.push((i, v));
                }
            }
        }
        if let Some((_, w)) = entries.last() {
            if is_zero(w) {
                entries.pop();
            }
        }
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Integer]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !is_zero(v))
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::from_dense(&values.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    pub fn to_dense(&self, len: usize) -> Vec<Integer> {
        let mut out = vec![int(0); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Integer)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Integer)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Integer {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => int(0),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Integer)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, c: &Integer) -> Self {
        if is_zero(c) {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// `a*self + b*other`, computed by a sorted merge.
    pub fn combine(&self, a: &Integer, other: &SparseVec, b: &Integer) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut x, mut y) = (0, 0);
        let (l, r) = (&self.entries, &other.entries);
        while x < l.len() || y < r.len() {
            let v = if y >= r.len() || (x < l.len() && l[x].0 < r[y].0) {
                x += 1;
                (l[x - 1].0, &l[x - 1].1 * a)
            } else if x >= l.len() || r[y].0 < l[x].0 {
                y += 1;
                (r[y - 1].0, &r[y - 1].1 * b)
            } else {
                x += 1;
                y += 1;
                (l[x - 1].0, &l[x - 1].1 * a + &r[y - 1].1 * b)
            };
            if !is_zero(&v.1) {
                out.push(v);
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.combine(&int(1), other, &int(1))
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.combine(&int(1), other, &int(-1))
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Integer, other: &SparseVec) {
        if is_zero(c) || other.is_zero() {
            return;
        }
        *self = self.combine(&int(1), other, c);
    }

    /// Reduces each coordinate into `[0, m_i)` where `m_i > 0`.
    pub fn reduced(&self, moduli: &[Integer]) -> Self {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter_map(|(i, v)| {
                    let r = reduce(v, &moduli[*i]);
                    (!is_zero(&r)).then_some((*i, r))
                })
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec) -> Integer {
        let (mut x, mut y) = (0, 0);
        let mut acc = int(0);
        let (l, r) = (&self.entries, &other.entries);
        while x < l.len() && y < r.len() {
            match l[x].0.cmp(&r[y].0) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    acc += &l[x].1 * &r[y].1;
                    x += 1;
                    y += 1;
                }
            }
        }
        acc
    }

    /// Moves every index through `f`; indices mapped to `None` are dropped.
    pub fn reindexed(&self, f: impl Fn(usize) -> Option<usize>) -> Self {
        SparseVec::from_pairs(
            self.entries
                .iter()
                .filter_map(|(i, v)| f(*i).map(|j| (j, v.clone())))
                .collect(),
        )
    }

    /// Sum of `c * v` over the given terms.
    pub fn linear_combination<'a>(
        terms: impl IntoIterator<Item = (&'a Integer, &'a SparseVec)>,
    ) -> Self {
        let mut pairs = Vec::new();
        for (c, v) in terms {
            if is_zero(c) {
                continue;
            }
            pairs.extend(v.entries.iter().map(|(i, x)| (*i, x * c)));
        }
        SparseVec::from_pairs(pairs)
    }
}

/// Column-major sparse integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols())?;
        for r in self.to_dense_rows() {
            writeln!(
                f,
                "  {:?}",
                r.iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            columns: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.max_index().is_none_or(|i| i < rows)));
        Matrix { rows, columns }
    }

    /// Row-major literal, convenient in tests.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_entries(
            r,
            c,
            rows.iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, int(v)))),
        )
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Integer)>,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, Integer)>> = vec![Vec::new(); cols];
        for (i, j, v) in entries {
            assert!(
                i < rows && j < cols,
                "entry ({i},{j}) outside {rows}x{cols}"
            );
            per_col[j].push((i, v));
        }
        Matrix {
            rows,
            columns: per_col.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.columns.len())
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Integer {
        self.columns[j].get(i)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Integer>> {
        let mut out = vec![vec![int(0); self.cols()]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c.iter() {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        SparseVec::linear_combination(x.iter().map(|(j, c)| (c, &self.columns[*j])))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols(), rhs.rows, "matrix product shape mismatch");
        Matrix {
            rows: self.rows,
            columns: rhs.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .zip(&rhs.columns)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "matrix difference shape mismatch"
        );
        Matrix {
            rows: self.rows,
            columns: self
                .columns
                .iter()
                .zip(&rhs.columns)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            columns: self.columns.iter().map(SparseVec::neg).collect(),
        }
    }

    pub fn scaled(&self, c: &Integer) -> Matrix {
        Matrix {
            rows: self.rows,
            columns: self.columns.iter().map(|x| x.scaled(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_entries(
            self.cols(),
            self.rows,
            self.columns
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.iter().map(move |(i, v)| (j, *i, v.clone()))),
        )
    }

    /// Reduces row `i` modulo `moduli[i]` wherever it is positive.
    pub fn reduced_rows(&self, moduli: &[Integer]) -> Matrix {
        assert_eq!(moduli.len(), self.rows);
        Matrix {
            rows: self.rows,
            columns: self.columns.iter().map(|c| c.reduced(moduli)).collect(),
        }
    }

    /// Block diagonal sum.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = Vec::new();
        let mut offset = 0;
        for b in blocks {
            columns.extend(b.columns.iter().map(|c| c.reindexed(|i| Some(i + offset))));
            offset += b.rows;
        }
        Matrix { rows, columns }
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row mismatch");
        Matrix {
            rows,
            columns: blocks
                .iter()
                .flat_map(|b| b.columns.iter().cloned())
                .collect(),
        }
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols());
        assert!(
            blocks.iter().all(|b| b.cols() == cols),
            "vstack column mismatch"
        );
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut columns = vec![Vec::new(); cols];
        let mut offset = 0;
        for b in blocks {
            for (j, c) in b.columns.iter().enumerate() {
                columns[j].extend(c.iter().map(|(i, v)| (i + offset, v.clone())));
            }
            offset += b.rows;
        }
        Matrix {
            rows,
            columns: columns.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    /// Places `block` at row offset `r0`, column offset `c0` inside a zero matrix.
    pub fn embedded(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Matrix {
        assert!(r0 + self.rows <= rows && c0 + self.cols() <= cols);
        let mut columns = vec![SparseVec::new(); cols];
        for (j, c) in self.columns.iter().enumerate() {
            columns[c0 + j] = c.reindexed(|i| Some(i + r0));
        }
        Matrix { rows, columns }
    }

    pub fn push_column(&mut self, c: SparseVec) {
        debug_assert!(c.max_index().is_none_or(|i| i < self.rows));
        self.columns.push(c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_hand_computation() {
        let a = Matrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), Matrix::from_rows(&[vec![1, 3], vec![2, 4]]));
    }

    #[test]
    fn sparse_vector_algebra() {
        let x = SparseVec::from_i64(&[1, 0, -2]);
        let y = SparseVec::from_i64(&[0, 3, 2]);
        assert_eq!(x.add(&y), SparseVec::from_i64(&[1, 3, 0]));
        assert_eq!(x.dot(&y), int(-4));
        assert_eq!(
            x.reduced(&[int(0), int(0), int(3)]),
            SparseVec::from_i64(&[1, 0, 1])
        );
        assert_eq!(
            SparseVec::from_pairs(vec![(2, int(1)), (0, int(1)), (2, int(-1))]),
            SparseVec::unit(0)
        );
    }

    #[test]
    fn stacking_and_blocks() {
        let a = Matrix::from_rows(&[vec![1]]);
        let b = Matrix::from_rows(&[vec![2, 3]]);
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d, Matrix::from_rows(&[vec![1, 0, 0], vec![0, 2, 3]]));
        assert_eq!(
            Matrix::vstack(&[&b, &b]),
            Matrix::from_rows(&[vec![2, 3], vec![2, 3]])
        );
        assert_eq!(Matrix::hstack(&[&a, &a]), Matrix::from_rows(&[vec![1, 1]]));
    }
}
