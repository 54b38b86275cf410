//! Dense Smith normal form with optional transform tracking.
//!
//! Pivot rule: the nonzero entry of smallest absolute value in the active
//! submatrix, ties broken by lowest (row, column).

use super::integer::{abs, int, is_unit, is_zero, quot, Integer};
use super::matrix::Matrix;

/// `u * m * v == s`, with `s` diagonal, non-negative, and `s_i | s_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Diagonal entries of `s`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Integer> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i))
            .collect()
    }
}

pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let run = SmithRun::new(
        m.to_dense_rows(),
        m.rows(),
        m.cols(),
        Track {
            u: true,
            u_inv: false,
            v: true,
        },
    );
    let (rows, cols) = m.shape();
    let s = Matrix::from_entries(
        rows,
        cols,
        run.diag.iter().enumerate().map(|(i, d)| (i, i, d.clone())),
    );
    SmithForm {
        u: dense_to_matrix(run.u.as_ref().expect("tracked"), rows, rows),
        s,
        v: dense_to_matrix(run.v.as_ref().expect("tracked"), cols, cols),
    }
}

pub(crate) fn dense_to_matrix(d: &[Vec<Integer>], rows: usize, cols: usize) -> Matrix {
    Matrix::from_entries(
        rows,
        cols,
        d.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !is_zero(v))
                .map(move |(j, v)| (i, j, v.clone()))
        }),
    )
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
}

pub(crate) struct SmithRun {
    /// Diagonal of length `min(rows, cols)`.
    pub diag: Vec<Integer>,
    pub u: Option<Vec<Vec<Integer>>>,
    pub u_inv: Option<Vec<Vec<Integer>>>,
    pub v: Option<Vec<Vec<Integer>>>,
}

fn identity(n: usize) -> Vec<Vec<Integer>> {
    (0..n)
        .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
        .collect()
}

struct State {
    a: Vec<Vec<Integer>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<Integer>>>,
    u_inv: Option<Vec<Vec<Integer>>>,
    v: Option<Vec<Vec<Integer>>>,
}

impl State {
    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if let Some(u) = &mut self.u {
            u.swap(i, k);
        }
        if let Some(w) = &mut self.u_inv {
            for row in w.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(j, k);
            }
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &Integer, from_col: usize) {
        let (ri, rt) = two_rows(&mut self.a, i, t);
        for j in from_col..ri.len() {
            if !is_zero(&rt[j]) {
                ri[j] -= q * &rt[j];
            }
        }
        if let Some(u) = &mut self.u {
            let (ui, ut) = two_rows(u, i, t);
            for j in 0..ui.len() {
                if !is_zero(&ut[j]) {
                    ui[j] -= q * &ut[j];
                }
            }
        }
        if let Some(w) = &mut self.u_inv {
            for row in w.iter_mut() {
                if !is_zero(&row[i]) {
                    let d = q * &row[i];
                    row[t] += d;
                }
            }
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &Integer, from_row: usize) {
        for row in self.a[from_row..].iter_mut() {
            if !is_zero(&row[t]) {
                let d = q * &row[t];
                row[j] -= d;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !is_zero(&row[t]) {
                    let d = q * &row[t];
                    row[j] -= d;
                }
            }
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(w) = &mut self.u_inv {
            for row in w.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, Integer)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if is_zero(x) {
                    continue;
                }
                if is_unit(x) {
                    return Some((i, j));
                }
                let ax = abs(x);
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn reduce_at(&mut self, t: usize) {
        loop {
            let p = self.a[t][t].clone();
            for i in t + 1..self.rows {
                if !is_zero(&self.a[i][t]) {
                    let q = quot(&self.a[i][t], &p);
                    if !is_zero(&q) {
                        self.row_sub(i, t, &q, t);
                    }
                }
            }
            for j in t + 1..self.cols {
                if !is_zero(&self.a[t][j]) {
                    let q = quot(&self.a[t][j], &p);
                    if !is_zero(&q) {
                        self.col_sub(j, t, &q, t);
                    }
                }
            }
            // Smallest leftover in the pivot cross becomes the next pivot.
            let mut best: Option<(usize, usize, Integer)> = None;
            for j in t + 1..self.cols {
                let x = &self.a[t][j];
                if !is_zero(x) && best.as_ref().is_none_or(|(_, _, b)| abs(x) < *b) {
                    best = Some((t, j, abs(x)));
                }
            }
            for i in t + 1..self.rows {
                let x = &self.a[i][t];
                if !is_zero(x) && best.as_ref().is_none_or(|(_, _, b)| abs(x) < *b) {
                    best = Some((i, t, abs(x)));
                }
            }
            if let Some((i, j, _)) = best {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                continue;
            }
            if is_unit(&p) {
                return;
            }
            let mut offender = None;
            'scan: for i in t + 1..self.rows {
                for j in t + 1..self.cols {
                    let x = &self.a[i][j];
                    if !is_zero(x) && !is_zero(&(x % &p)) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => self.row_sub(t, i, &int(-1), t),
                None => return,
            }
        }
    }
}

fn two_rows(a: &mut [Vec<Integer>], i: usize, t: usize) -> (&mut Vec<Integer>, &Vec<Integer>) {
    assert_ne!(i, t);
    if i < t {
        let (lo, hi) = a.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(i);
        (&mut hi[0], &lo[t])
    }
}

impl SmithRun {
    pub(crate) fn new(a: Vec<Vec<Integer>>, rows: usize, cols: usize, track: Track) -> SmithRun {
        let mut st = State {
            a,
            rows,
            cols,
            u: track.u.then(|| identity(rows)),
            u_inv: track.u_inv.then(|| identity(rows)),
            v: track.v.then(|| identity(cols)),
        };
        let n = rows.min(cols);
        for t in 0..n {
            let Some((i, j)) = st.find_pivot(t) else {
                break;
            };
            st.swap_rows(t, i);
            st.swap_cols(t, j);
            st.reduce_at(t);
            if st.a[t][t] < int(0) {
                st.negate_row(t);
            }
        }
        let diag = (0..n).map(|i| st.a[i][i].clone()).collect();
        SmithRun {
            diag,
            u: st.u,
            u_inv: st.u_inv,
            v: st.v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s);
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(
                crate::abelian::integer::divides(&w[0], &w[1]),
                "divisibility chain broken: {d:?}"
            );
        }
        f
    }

    #[test]
    fn identity_and_zero() {
        let f = check(&Matrix::identity(2));
        assert_eq!(
            (f.u, f.s, f.v),
            (
                Matrix::identity(2),
                Matrix::identity(2),
                Matrix::identity(2)
            )
        );
        let f = check(&Matrix::zeros(2, 3));
        assert_eq!(
            (f.u, f.s, f.v),
            (
                Matrix::identity(2),
                Matrix::zeros(2, 3),
                Matrix::identity(3)
            )
        );
    }

    #[test]
    fn two_by_two_example() {
        let f = check(&Matrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.diagonal(), vec![int(2), int(4)]);
    }

    #[test]
    fn needs_divisibility_repair() {
        let f = check(&Matrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal(), vec![int(1), int(6)]);
    }

    #[test]
    fn empty_shapes() {
        let f = check(&Matrix::zeros(0, 3));
        assert_eq!(f.v, Matrix::identity(3));
        check(&Matrix::zeros(3, 0));
    }

    #[test]
    fn inverse_tracking_is_consistent() {
        let m = Matrix::from_rows(&[vec![4, 6, 2], vec![3, 9, -5], vec![0, 2, 8]]);
        let run = SmithRun::new(
            m.to_dense_rows(),
            3,
            3,
            Track {
                u: true,
                u_inv: true,
                v: false,
            },
        );
        let u = dense_to_matrix(run.u.as_ref().unwrap(), 3, 3);
        let w = dense_to_matrix(run.u_inv.as_ref().unwrap(), 3, 3);
        assert_eq!(u.mul(&w), Matrix::identity(3));
    }
}
