//! Sparse Gaussian elimination over `Scalar`.

use std::collections::BTreeMap;

use crate::scalar::{tolerance, Scalar};

pub type SparseRow = BTreeMap<usize, Scalar>;

fn clean(row: SparseRow) -> SparseRow {
    row.into_iter()
        .filter_map(|(j, c)| {
            let c = c.canonical();
            (!c.is_zero()).then_some((j, c))
        })
        .collect()
}

/// `row += s * other`.
fn axpy(row: &mut SparseRow, s: &Scalar, other: &SparseRow) {
    for (j, c) in other {
        let v = s * c;
        match row.get_mut(j) {
            Some(x) => *x += &v,
            None => {
                row.insert(*j, v);
            }
        }
    }
}

/// Reduced row echelon form built one row at a time; rows are keyed by pivot column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseRow> {
        self.rows.get(&pivot)
    }

    /// Remainder of `row` modulo the row space, supported off the pivot columns.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut row = clean(row.clone());
        loop {
            let hit = row.keys().find(|j| self.rows.contains_key(j)).copied();
            let Some(p) = hit else { break };
            let s = -row[&p].clone();
            axpy(&mut row, &s, &self.rows[&p]);
            row = clean(row);
        }
        row
    }

    /// Echelon form of all of `rows` at once. Approximate rows are eliminated with complete
    /// pivoting over the columns below `ncols`, and entries below the tolerance relative to
    /// the largest entry count as zero.
    pub fn from_rows(rows: &[SparseRow], ncols: usize) -> Self {
        let mut ech = Echelon::new();
        if rows.iter().flat_map(|r| r.values()).all(Scalar::is_exact) {
            for r in rows {
                ech.insert(r);
            }
            return ech;
        }
        let norm = |c: &Scalar| c.to_complex().norm();
        let scale = rows.iter().flat_map(|r| r.values()).map(norm).fold(0.0, f64::max);
        let eps = tolerance() * scale.max(1.0);
        let prune = |row: SparseRow| -> SparseRow { row.into_iter().filter(|(_, c)| norm(c) > eps).map(|(j, c)| (j, Scalar::approx(c.to_complex()))).collect() };
        let mut rest: Vec<SparseRow> = rows.iter().map(|r| prune(r.clone())).filter(|r| !r.is_empty()).collect();
        loop {
            let best = rest.iter().enumerate().flat_map(|(i, r)| r.range(..ncols).map(move |(j, c)| (i, *j, norm(c)))).max_by(|x, y| x.2.total_cmp(&y.2));
            let Some((i, p, _)) = best else { break };
            let row = rest.swap_remove(i);
            let inv = row[&p].inv().expect("pivot is nonzero");
            let mut row: SparseRow = row.iter().map(|(j, c)| (*j, c * &inv)).collect();
            row.insert(p, Scalar::approx(1.0.into()));
            for other in ech.rows.values_mut().chain(rest.iter_mut()) {
                if let Some(c) = other.get(&p).cloned() {
                    axpy(other, &(-c), &row);
                    other.remove(&p);
                    *other = prune(std::mem::take(other));
                }
            }
            rest.retain(|r| !r.is_empty());
            ech.rows.insert(p, row);
        }
        for r in rest {
            ech.insert(&r);
        }
        ech
    }

    /// Add a row; returns whether it enlarged the row space.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&p, lead)) = row.iter().next() else { return false };
        let inv = lead.inv().expect("pivot is nonzero");
        let row: SparseRow = clean(row.iter().map(|(j, c)| (*j, c * &inv)).collect());
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&p).cloned() {
                axpy(other, &(-c), &row);
                *other = clean(std::mem::take(other));
            }
        }
        self.rows.insert(p, row);
        true
    }

    /// Basis of `{x : A x = 0}` for the inserted rows of `A` with `ncols` columns.
    pub fn nullspace(&self, ncols: usize) -> Vec<SparseRow> {
        let mut out = Vec::new();
        for f in (0..ncols).filter(|j| !self.rows.contains_key(j)) {
            let mut v = SparseRow::new();
            v.insert(f, Scalar::one());
            for (p, row) in &self.rows {
                if let Some(c) = row.get(&f) {
                    v.insert(*p, -c);
                }
            }
            out.push(v);
        }
        out
    }
}

/// One solution of `A x = b` (free variables zero), or `None` if inconsistent.
/// `rows[i]` is row `i` of `A` and `rhs[i]` the matching entry of `b`.
pub fn solve(rows: &[SparseRow], rhs: &[Scalar], ncols: usize) -> Option<Vec<Scalar>> {
    let aug: Vec<SparseRow> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut aug = row.clone();
            if !b.is_zero() {
                aug.insert(ncols, b.clone());
            }
            aug
        })
        .collect();
    let ech = Echelon::from_rows(&aug, ncols);
    if ech.rows.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (p, row) in &ech.rows {
        if let Some(c) = row.get(&ncols) {
            x[*p] = c.clone();
        }
    }
    Some(x)
}

/// Solutions of `A x = b` for several right-hand sides sharing one elimination.
pub fn solve_multi(rows: &[SparseRow], rhs: &[Vec<Scalar>], ncols: usize) -> Option<Vec<Vec<Scalar>>> {
    let aug: Vec<SparseRow> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut aug = row.clone();
            for (k, b) in rhs.iter().enumerate() {
                if !b[i].is_zero() {
                    aug.insert(ncols + k, b[i].clone());
                }
            }
            aug
        })
        .collect();
    let ech = Echelon::from_rows(&aug, ncols);
    if ech.rows.keys().any(|p| *p >= ncols) {
        return None;
    }
    let mut out = vec![vec![Scalar::zero(); ncols]; rhs.len()];
    for (p, row) in &ech.rows {
        for (j, c) in row.range(ncols..) {
            out[j - ncols][*p] = c.clone();
        }
    }
    Some(out)
}

/// Rank of a list of rows.
pub fn rank(rows: &[SparseRow]) -> usize {
    Echelon::from_rows(rows, usize::MAX).rank()
}

/// Dense matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        self.data[i * self.cols + j] += v;
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { data: self.data.iter().zip(&o.data).map(|(a, b)| (a + b).canonical()).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|a| (a * s).canonical()).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows);
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_empty() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_empty() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        out.canonical()
    }

    /// Kronecker product; index `(i, j)` of the result is `i * o.rows + j`.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_empty() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_empty() {
                            out.set(i * o.rows + k, j * o.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum::<Scalar>().canonical()
    }

    pub fn canonical(mut self) -> Matrix {
        for v in &mut self.data {
            *v = v.canonical();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, Scalar::from_int(*c))).collect()
    }

    #[test]
    fn approximate_hilbert_system_keeps_full_rank() {
        let n = 5;
        let rows: Vec<SparseRow> = (0..n).map(|i| (0..n).map(|j| (j, Scalar::approx(num_complex::Complex64::new(1.0 / (i + j + 1) as f64, 0.0)))).collect()).collect();
        assert_eq!(rank(&rows), n);
        let ones: Vec<Scalar> = (0..n).map(|i| (0..n).map(|j| 1.0 / (i + j + 1) as f64).sum::<f64>()).map(|v| Scalar::approx(v.into())).collect();
        let x = solve(&rows, &ones, n).unwrap();
        assert!(x.iter().all(|c| (c.to_complex().re - 1.0).abs() < 1e-4));
    }

    #[test]
    fn solve_small_system() {
        let rows = [row(&[2, 1, 0]), row(&[1, 3, 1]), row(&[0, 1, 4])];
        let rhs = [Scalar::from_int(3), Scalar::from_int(5), Scalar::from_int(5)];
        let x = solve(&rows, &rhs, 3).unwrap();
        for (r, b) in rows.iter().zip(&rhs) {
            let lhs: Scalar = r.iter().map(|(j, c)| c * &x[*j]).sum();
            assert_eq!(lhs, *b);
        }
    }

    #[test]
    fn inconsistent_and_nullspace() {
        let rows = [row(&[1, 1, 0]), row(&[2, 2, 0])];
        assert!(solve(&rows, &[Scalar::from_int(1), Scalar::from_int(3)], 3).is_none());
        let mut ech = Echelon::new();
        for r in &rows {
            ech.insert(r);
        }
        assert_eq!(ech.rank(), 1);
        let ns = ech.nullspace(3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Scalar = rows[0].iter().map(|(j, c)| c * &v.get(j).cloned().unwrap_or_default()).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn cyclotomic_entries() {
        // rows (1, xi) and (xi^2, xi^3) over xi = exp(2 pi i / 5) are dependent
        let rd = crate::scalar::RootData::with_ell(5).unwrap();
        let mk = |a: Scalar, b: Scalar| SparseRow::from([(0, a), (1, b)]);
        let rows = [mk(Scalar::one(), rd.xi_pow_int(1)), mk(rd.xi_pow_int(2), rd.xi_pow_int(3))];
        assert_eq!(rank(&rows), 1);
    }
}
