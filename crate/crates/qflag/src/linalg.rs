//! Exact linear algebra over `Q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Renders `p/q`, or `p` for integers.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            (!b.is_zero()).then(|| Q::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| q_to_string(self.get(r, c))).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Mat::from_rows(rows, cols, data.iter().map(|&x| q(x)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Q) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() {
                    t.set(c, r, x.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.cols, (0..self.rows).map(|r| self.row(r).to_vec())).dim()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let rows = (0..self.rows).map(|r| self.row(r).to_vec());
        Subspace::from_vectors(self.cols, rows).orthogonal_kernel()
    }

    /// Solves `self·x = b` for one solution.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&Mat::from_columns(self.rows, &[b.to_vec()]));
        let sp = Subspace::from_vectors(aug.cols, (0..aug.rows).map(|r| aug.row(r).to_vec()));
        if sp.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &p) in sp.basis.iter().zip(&sp.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::one();
            cols.push(self.solve(&e)?);
        }
        Some(Mat::from_columns(n, &cols))
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// A subspace of `Q^d` kept as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Subspace::zero(ambient);
        for i in 0..ambient {
            let mut e = vec![Q::zero(); ambient];
            e[i] = Q::one();
            s.basis.push(e);
            s.pivots.push(i);
        }
        s
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<Q>>>(ambient: usize, vecs: I) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Q>) -> bool {
        let r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        let r: Vec<Q> = r.into_iter().map(|x| x * &inv).collect();
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v.clone());
        }
        s
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        self.contains(v).then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Coordinates of `v + self` in the quotient `Q^d / self`, using the
    /// non-pivot positions as the basis.
    pub fn quotient_coords(&self, v: &[Q]) -> Vec<Q> {
        let r = self.reduce(v);
        self.free_positions().into_iter().map(|i| r[i].clone()).collect()
    }

    /// Non-pivot positions, in increasing order.
    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| self.pivots.binary_search(i).is_err()).collect()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.dim()
    }

    /// The standard lift of quotient coordinates back to `Q^d`.
    pub fn quotient_section(&self, coords: &[Q]) -> Vec<Q> {
        let free = self.free_positions();
        assert_eq!(coords.len(), free.len());
        let mut v = vec![Q::zero(); self.ambient];
        for (&i, c) in free.iter().zip(coords) {
            v[i] = c.clone();
        }
        v
    }

    /// Kernel of the map `x ↦ (row·x)_rows` for the rows spanning `self`.
    pub fn orthogonal_kernel(&self) -> Vec<Vec<Q>> {
        let free = self.free_positions();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.ambient];
                x[f] = Q::one();
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        x[p] = -row[f].clone();
                    }
                }
                x
            })
            .collect()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = Σ a_i u_i = Σ b_j w_j
        let d = self.ambient;
        let k = self.dim() + other.dim();
        if k == 0 {
            return Subspace::zero(d);
        }
        let mut m = Mat::zeros(d, k);
        for (c, u) in self.basis.iter().enumerate() {
            for r in 0..d {
                m.set(r, c, u[r].clone());
            }
        }
        for (c, w) in other.basis.iter().enumerate() {
            for r in 0..d {
                m.set(r, self.dim() + c, -w[r].clone());
            }
        }
        let vecs = m.kernel().into_iter().map(|coef| {
            let mut x = vec![Q::zero(); d];
            for (a, u) in coef.iter().zip(&self.basis) {
                if a.is_zero() {
                    continue;
                }
                for (xi, ui) in x.iter_mut().zip(u) {
                    *xi += a * ui;
                }
            }
            x
        });
        Subspace::from_vectors(d, vecs)
    }
}

/// Null space of a sparse homogeneous system, one basis vector per free
/// variable with a 1 in that slot and 0 in the other free slots.
pub struct SparseSolver {
    nvars: usize,
    pivots: BTreeMap<usize, Vec<(usize, Q)>>,
}

impl SparseSolver {
    pub fn new(nvars: usize) -> Self {
        SparseSolver { nvars, pivots: BTreeMap::new() }
    }

    pub fn add_equation(&mut self, mut row: Vec<(usize, Q)>) {
        row.retain(|(_, x)| !x.is_zero());
        if row.is_empty() {
            return;
        }
        let mut dense: BTreeMap<usize, Q> = BTreeMap::new();
        for (c, x) in row {
            let e = dense.entry(c).or_insert_with(Q::zero);
            *e += x;
        }
        dense.retain(|_, x| !x.is_zero());
        // pivot rows only carry entries right of their pivot, so clearing the
        // smallest pivot column each round terminates
        while let Some(c) = dense.keys().copied().find(|c| self.pivots.contains_key(c)) {
            let f = dense[&c].clone();
            for (pc, px) in &self.pivots[&c] {
                let e = dense.entry(*pc).or_insert_with(Q::zero);
                *e -= &f * px;
            }
            dense.retain(|_, x| !x.is_zero());
        }
        let Some((&p, lead)) = dense.iter().next() else { return };
        let inv = lead.recip();
        let normalized: Vec<(usize, Q)> = dense.into_iter().map(|(c, x)| (c, x * &inv)).collect();
        self.pivots.insert(p, normalized);
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Returns `(basis, free_variables)`.
    pub fn nullspace(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        // x_p = -Σ r_c x_c, resolved right to left into free variables
        let mut exprs: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut e: BTreeMap<usize, Q> = BTreeMap::new();
            for (c, x) in row.iter().filter(|(c, _)| *c != p) {
                match exprs.get(c) {
                    Some(sub) => {
                        for (fc, fx) in sub {
                            *e.entry(*fc).or_insert_with(Q::zero) -= x * fx;
                        }
                    }
                    None => *e.entry(*c).or_insert_with(Q::zero) -= x,
                }
            }
            e.retain(|_, x| !x.is_zero());
            exprs.insert(p, e);
        }
        let free: Vec<usize> = (0..self.nvars).filter(|c| !self.pivots.contains_key(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.nvars];
                x[f] = Q::one();
                for (&p, expr) in &exprs {
                    if let Some(v) = expr.get(&f) {
                        x[p] = v.clone();
                    }
                }
                x
            })
            .collect();
        (basis, free)
    }
}
