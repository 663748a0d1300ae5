//! Dense matrices over either field level: RREF, rank, determinant,
//! inversion, nullspace bases, linear solves, and random sampling.
//!
//! Everything is value-semantic and deterministic; nullspace bases come out
//! of RREF back-substitution so tests can pin exact outputs.

use rand::Rng;
use thiserror::Error;

use crate::fields::{BaseField, ExtField, Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    NoSolution,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major dense matrix carrying its field handle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, data }
    }

    pub fn identity(field: F, dim: usize) -> Self {
        let mut m = Self::zeros(field, dim, dim);
        for i in 0..dim {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { field, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = self.field.add(a, b);
        }
        out
    }

    /// In characteristic 2 subtraction is addition; alias kept for readability.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(other)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = f.mul(a, other.get(k, j));
                    let cur = f.add(out.get(i, j), &prod);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Concatenate columns: [self | other].
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat rows");
        Self::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Stack rows: [self; other].
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vcat cols");
        Self::from_fn(self.field.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(self.field.clone(), rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn col_range(&self, lo: usize, hi: usize) -> Self {
        self.select_cols(&(lo..hi).collect::<Vec<_>>())
    }

    /// Reduced row echelon form plus the strictly increasing pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = f.add(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<F::Elem, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape(format!("det of {}x{}", self.rows, self.cols)));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                return Ok(f.zero());
            };
            if p != c {
                // char 2: row swap leaves the determinant unchanged
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, c * m.cols + j);
                }
            }
            det = f.mul(&det, m.get(c, c));
            let inv = f.inv(m.get(c, c)).expect("pivot nonzero");
            for i in c + 1..m.rows {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = f.add(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn invert(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::Shape(format!("invert of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hcat(&Self::identity(self.field.clone(), n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(r.col_range(n, 2 * n))
    }

    /// Full-rank K (cols × (cols − rank)) with self·K = 0, from RREF
    /// back-substitution; deterministic.
    pub fn right_nullspace_basis(&self) -> Self {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f.clone(), self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, f.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                // char 2: negation is identity
                k.set(pc, idx, r.get(prow, fc).clone());
            }
        }
        k
    }

    /// Full-rank J ((rows − rank) × rows) with J·self = 0.
    pub fn left_nullspace_basis(&self) -> Self {
        self.transpose().right_nullspace_basis().transpose()
    }

    /// Solve U·G = target for U, returning the solution and whether it is
    /// unique. Free coordinates, when present, are set to zero.
    pub fn solve_left(g: &Self, target: &Self) -> Result<(Self, bool), LinalgError> {
        if g.cols != target.cols {
            return Err(LinalgError::Shape(format!(
                "solve_left: G is {}x{}, target is {}x{}",
                g.rows, g.cols, target.rows, target.cols
            )));
        }
        let f = g.field.clone();
        // Transpose to Gᵀ·Uᵀ = targetᵀ and eliminate once on [Gᵀ | targetᵀ].
        let gt = g.transpose();
        let tt = target.transpose();
        let aug = gt.hcat(&tt);
        let (r, pivots) = aug.rref();
        let sys_pivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < g.rows).collect();
        // Any pivot in the augmented block means an inconsistent system.
        if pivots.iter().any(|&c| c >= g.rows) {
            return Err(LinalgError::NoSolution);
        }
        let unique = sys_pivots.len() == g.rows;
        let mut ut = Self::zeros(f, g.rows, target.rows);
        for (prow, &pc) in sys_pivots.iter().enumerate() {
            for j in 0..target.rows {
                ut.set(pc, j, r.get(prow, g.rows + j).clone());
            }
        }
        Ok((ut.transpose(), unique))
    }

    pub fn random<R: Rng + ?Sized>(field: F, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Matrix { field, rows, cols, data }
    }

    /// Uniform over nonsingular matrices, by rejection.
    pub fn random_nonsingular<R: Rng + ?Sized>(field: F, dim: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field.clone(), dim, dim, rng);
            if m.rank() == dim {
                return m;
            }
        }
    }

    /// L·V with L rows×maxrank and V maxrank×cols, entries uniform.
    pub fn random_rank_bounded<R: Rng + ?Sized>(
        field: F,
        rows: usize,
        cols: usize,
        maxrank: usize,
        rng: &mut R,
    ) -> Self {
        assert!(maxrank <= rows.min(cols), "maxrank exceeds dimensions");
        let l = Self::random(field.clone(), rows, maxrank, rng);
        let v = Self::random(field, maxrank, cols, rng);
        l.matmul(&v)
    }
}

/// Embed a base-field matrix into the extension field entry-wise.
pub fn lift_to_ext(m: &Matrix<BaseField>, ext: &ExtField) -> Matrix<ExtField> {
    Matrix::from_fn(ext.clone(), m.rows(), m.cols(), |i, j| ext.embed(*m.get(i, j)))
}

/// φ_{m,n}: expand each extension-field entry into C base-field columns.
pub fn phi_mn(m: &Matrix<ExtField>) -> Matrix<BaseField> {
    let ext = m.field().clone();
    let c = ext.degree();
    Matrix::from_fn(*ext.base(), m.rows(), m.cols() * c, |i, j| m.get(i, j / c)[j % c])
}

/// φ_{m,n}⁻¹: contract groups of C base-field columns back into one
/// extension-field column. Errors when the width is not a multiple of C.
pub fn phi_mn_inv(m: &Matrix<BaseField>, ext: &ExtField) -> Result<Matrix<ExtField>, LinalgError> {
    let c = ext.degree();
    if m.cols() % c != 0 {
        return Err(LinalgError::Shape(format!(
            "phi_mn_inv: {} columns not divisible by extension degree {}",
            m.cols(),
            c
        )));
    }
    Ok(Matrix::from_fn(ext.clone(), m.rows(), m.cols() / c, |i, j| {
        (0..c).map(|t| *m.get(i, j * c + t)).collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{BaseField, ExtField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn gf2() -> BaseField {
        BaseField::new(1).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = gf2();
        let i3 = Matrix::identity(f, 3);
        let (r, p) = i3.rref();
        assert_eq!(r, i3);
        assert_eq!(p, vec![0, 1, 2]);

        let z = Matrix::zeros(f, 2, 3);
        let (r, p) = z.rref();
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn rref_hand_example_gf2() {
        let f = gf2();
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![1, 1]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_rows(f, vec![vec![1, 1], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_idempotent() {
        let f = BaseField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = Matrix::random(f, 4, 6, &mut rng);
            let (r, _) = m.rref();
            let (r2, _) = r.rref();
            assert_eq!(r, r2);
        }
    }

    /// Brute-force rank oracle: largest k with a nonsingular k×k minor.
    fn rank_by_minors(m: &Matrix<BaseField>) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
            }
            out
        }
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub = m.select_rows(&rs).select_cols(&cs);
                    if sub.det().unwrap() != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_matches_minor_oracle_gf4() {
        let f = BaseField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..25 {
            let m = Matrix::random(f, 4, 4, &mut rng);
            assert_eq!(m.rank(), rank_by_minors(&m));
        }
    }

    #[test]
    fn det_triangular_gf2() {
        let f = gf2();
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(m.det().unwrap(), 1);
    }

    #[test]
    fn invert_roundtrip_and_singular() {
        let f = BaseField::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = Matrix::random_nonsingular(f, 4, &mut rng);
            let inv = m.invert().unwrap();
            assert_eq!(inv.matmul(&m), Matrix::identity(f, 4));
        }
        let z = Matrix::zeros(f, 3, 3);
        assert!(matches!(z.invert(), Err(LinalgError::Singular)));
    }

    #[test]
    fn nullspace_edge_cases() {
        let f = gf2();
        let z = Matrix::zeros(f, 2, 2);
        assert_eq!(z.left_nullspace_basis(), Matrix::identity(f, 2));
        let i2 = Matrix::identity(f, 2);
        assert_eq!(i2.left_nullspace_basis().rows(), 0);
    }

    #[test]
    fn nullspace_annihilation_and_rank() {
        let f = BaseField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let m = Matrix::random_rank_bounded(f, 3, 2, 1, &mut rng);
            let j = m.left_nullspace_basis();
            assert!(j.matmul(&m).is_zero());
            assert_eq!(j.rank(), j.rows());
            assert_eq!(j.rows(), 3 - m.rank());

            let k = m.right_nullspace_basis();
            assert!(m.matmul(&k).is_zero());
            assert_eq!(k.rank(), k.cols());
        }
    }

    #[test]
    fn solve_left_identity_and_infeasible() {
        let f = BaseField::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = Matrix::random(f, 2, 3, &mut rng);
        let (u, unique) = Matrix::solve_left(&Matrix::identity(f, 3), &t).unwrap();
        assert_eq!(u, t);
        assert!(unique);

        let g = Matrix::zeros(f, 3, 3);
        let mut t2 = Matrix::zeros(f, 2, 3);
        t2.set(0, 0, 1);
        assert!(matches!(Matrix::solve_left(&g, &t2), Err(LinalgError::NoSolution)));
    }

    #[test]
    fn solve_left_roundtrip_full_column_rank() {
        let f = BaseField::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            // G with independent rows so U is unique.
            let g = Matrix::random_nonsingular(f, 4, &mut rng).col_range(0, 4);
            let u0 = Matrix::random(f, 2, 4, &mut rng);
            let target = u0.matmul(&g);
            let (u, unique) = Matrix::solve_left(&g, &target).unwrap();
            assert!(unique);
            assert_eq!(u, u0);
        }
    }

    #[test]
    fn rank_bounded_sampler_respects_bound() {
        let f = gf2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(Matrix::random_rank_bounded(f, 3, 4, 0, &mut rng).is_zero());
        for _ in 0..200 {
            let m = Matrix::random_rank_bounded(f, 3, 4, 1, &mut rng);
            assert!(m.rank() <= 1);
        }
    }

    #[test]
    fn rank_subadditive_spot_check() {
        let f = BaseField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let a = Matrix::random(f, 3, 3, &mut rng);
            let b = Matrix::random(f, 3, 3, &mut rng);
            assert!(a.add(&b).rank() <= a.rank() + b.rank());
        }
    }

    #[test]
    fn random_matrix_rank_census_vs_empirical() {
        // Exhaustive census of all 512 3x3 matrices over GF(2) vs 1e5 draws, 3σ band.
        let f = gf2();
        let mut census: HashMap<usize, u64> = HashMap::new();
        for bits in 0u32..512 {
            let m = Matrix::from_fn(f, 3, 3, |i, j| ((bits >> (3 * i + j)) & 1) as u64);
            *census.entry(m.rank()).or_default() += 1;
        }
        let trials = 100_000u64;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts: HashMap<usize, u64> = HashMap::new();
        for _ in 0..trials {
            *counts.entry(Matrix::random(f, 3, 3, &mut rng).rank()).or_default() += 1;
        }
        for (rank, &c) in &census {
            let p = c as f64 / 512.0;
            let expect = p * trials as f64;
            let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
            let got = *counts.get(rank).unwrap_or(&0) as f64;
            assert!(
                (got - expect).abs() <= 3.0 * sigma,
                "rank {rank}: got {got}, expected {expect} ± {}",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn phi_mn_conventions_and_roundtrip() {
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        let z = Matrix::zeros(ext.clone(), 2, 2);
        assert!(phi_mn(&z).is_zero());
        assert_eq!(phi_mn(&z).cols(), 6);

        let one = Matrix::identity(ext.clone(), 1);
        assert_eq!(phi_mn(&one).row(0), &[1, 0, 0]);

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let m = Matrix::random(ext.clone(), 2, 2, &mut rng);
            assert_eq!(phi_mn_inv(&phi_mn(&m), &ext).unwrap(), m);
        }
        let bad = Matrix::zeros(base, 1, 4);
        assert!(phi_mn_inv(&bad, &ext).is_err());
    }

    #[test]
    fn lift_respects_products() {
        let base = BaseField::new(2).unwrap();
        let ext = ExtField::new(base, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = Matrix::random(base, 2, 3, &mut rng);
        let b = Matrix::random(base, 3, 2, &mut rng);
        let lifted = lift_to_ext(&a, &ext).matmul(&lift_to_ext(&b, &ext));
        assert_eq!(lifted, lift_to_ext(&a.matmul(&b), &ext));
    }
}
