//! Gabidulin (MRD) parity-check matrices and their invertible completions.
//!
//! Every coding layer consumes a `SecrecyCodebook`: the parity check H of a
//! [n_code, k_code] linear MRD code over F_Q together with an invertible T
//! whose inverse starts with H. H is a Moore matrix evaluated on the first
//! n_code polynomial-basis elements {1, α, α², ...}, which are linearly
//! independent over the base field whenever n_code ≤ C.

use thiserror::Error;

use crate::fields::{ExtField, Field};
use crate::linalg::{phi_mn, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodebookError {
    #[error("need 0 <= k_code < n_code <= extension degree, got [{n_code}, {k_code}] over degree {degree}")]
    BadParams { n_code: usize, k_code: usize, degree: usize },
}

/// Parity check H and completion T for an MRD code; also used for H_0/T_0.
#[derive(Clone, Debug)]
pub struct SecrecyCodebook {
    n_code: usize,
    k_code: usize,
    h: Matrix<ExtField>,
    t: Matrix<ExtField>,
    t_inv: Matrix<ExtField>,
}

impl SecrecyCodebook {
    /// Build the [n_code, k_code] Gabidulin codebook over the given extension
    /// field. Deterministic: evaluation points are the polynomial-basis
    /// prefix, completion rows are unit rows appended greedily.
    pub fn build(n_code: usize, k_code: usize, ext: &ExtField) -> Result<Self, CodebookError> {
        if k_code >= n_code || n_code > ext.degree() {
            return Err(CodebookError::BadParams { n_code, k_code, degree: ext.degree() });
        }
        let r = n_code - k_code;
        // Moore matrix: H_{i,j} = g_j^(q^i), g_j = α^j.
        let points: Vec<_> = (0..n_code).map(|j| ext.alpha_pow(j)).collect();
        let h = Matrix::from_fn(ext.clone(), r, n_code, |i, j| ext.frobenius_iter(&points[j], i));

        // Complete T⁻¹ by greedily appending unit rows that keep full rank.
        let mut t_inv = h.clone();
        for i in 0..n_code {
            if t_inv.rows() == n_code {
                break;
            }
            let mut e = Matrix::zeros(ext.clone(), 1, n_code);
            e.set(0, i, ext.one());
            let cand = t_inv.vcat(&e);
            if cand.rank() == cand.rows() {
                t_inv = cand;
            }
        }
        debug_assert_eq!(t_inv.rows(), n_code, "H has full row rank, completion always succeeds");
        let t = t_inv.invert().expect("completed matrix is nonsingular");
        Ok(SecrecyCodebook { n_code, k_code, h, t, t_inv })
    }

    /// Assemble a codebook from explicit parts without validation. Intended
    /// for tests that need deliberately broken codebooks.
    #[doc(hidden)]
    pub fn from_parts(n_code: usize, k_code: usize, h: Matrix<ExtField>, t: Matrix<ExtField>) -> Self {
        let t_inv = t.invert().expect("T must at least be invertible");
        SecrecyCodebook { n_code, k_code, h, t, t_inv }
    }

    pub fn n_code(&self) -> usize {
        self.n_code
    }

    pub fn k_code(&self) -> usize {
        self.k_code
    }

    /// n_code − k_code, the number of parity rows.
    pub fn redundancy(&self) -> usize {
        self.n_code - self.k_code
    }

    pub fn h(&self) -> &Matrix<ExtField> {
        &self.h
    }

    pub fn t(&self) -> &Matrix<ExtField> {
        &self.t
    }

    pub fn t_inv(&self) -> &Matrix<ExtField> {
        &self.t_inv
    }

    pub fn ext(&self) -> &ExtField {
        self.h.field()
    }
}

/// Operational MRD check at exhaustive scale (q ≤ 4, C ≤ 3): structural
/// consistency of (H, T), plus distribution equality of the wiretap view
/// B·φ(T[S; N]) over uniform N for every full-rank base-field B with k_code
/// rows and every message S.
pub fn mrd_spotcheck(cb: &SecrecyCodebook) -> bool {
    let ext = cb.ext().clone();
    // Structural part: H full row rank and equal to the top of T⁻¹.
    if cb.h.rank() != cb.redundancy() {
        return false;
    }
    let t_inv = match cb.t.invert() {
        Ok(m) => m,
        Err(_) => return false,
    };
    for i in 0..cb.redundancy() {
        if t_inv.row(i) != cb.h.row(i) {
            return false;
        }
    }

    // Distribution part, exhaustive with n' = 1.
    let base = *ext.base();
    let q = base.size();
    let n_msgs = ext.size().pow(cb.redundancy() as u32);
    let n_noise = ext.size().pow(cb.k_code as u32);
    let n_b = q.pow((cb.k_code * cb.n_code) as u32);

    for b_idx in 0..n_b {
        let b_mat = index_to_matrix(&base, cb.k_code, cb.n_code, b_idx);
        if b_mat.rank() < cb.k_code {
            continue;
        }
        let mut baseline: Option<std::collections::HashMap<Vec<u64>, u64>> = None;
        for s_idx in 0..n_msgs {
            let s = index_to_ext_col(&ext, cb.redundancy(), s_idx);
            let mut dist = std::collections::HashMap::new();
            for n_idx in 0..n_noise {
                let noise = index_to_ext_col(&ext, cb.k_code, n_idx);
                let x = cb.t.matmul(&s.vcat(&noise));
                let view = b_mat.matmul(&phi_mn(&x));
                *dist.entry(view.data().to_vec()).or_insert(0u64) += 1;
            }
            match &baseline {
                None => baseline = Some(dist),
                Some(first) if *first != dist => return false,
                Some(_) => {}
            }
        }
    }
    true
}

pub(crate) fn index_to_matrix(
    base: &crate::fields::BaseField,
    rows: usize,
    cols: usize,
    mut idx: u128,
) -> Matrix<crate::fields::BaseField> {
    let q = base.size();
    Matrix::from_fn(*base, rows, cols, |_, _| {
        let e = base.element(idx % q);
        idx /= q;
        e
    })
}

pub(crate) fn index_to_ext_col(ext: &ExtField, rows: usize, mut idx: u128) -> Matrix<ExtField> {
    let q = ext.size();
    Matrix::from_fn(ext.clone(), rows, 1, |_, _| {
        let e = ext.element(idx % q);
        idx /= q;
        e
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::BaseField;

    fn ext(m: u32, c: usize) -> ExtField {
        ExtField::new(BaseField::new(m).unwrap(), c).unwrap()
    }

    #[test]
    fn moore_rows_are_frobenius_of_first_row() {
        // q = 2, C = 3, [3, 1]: row 0 is (1, α, α²), row 1 its entry-wise square.
        let e = ext(1, 3);
        let cb = SecrecyCodebook::build(3, 1, &e).unwrap();
        let h = cb.h();
        assert_eq!(h.rows(), 2);
        assert_eq!(*h.get(0, 0), e.one());
        assert_eq!(*h.get(0, 1), e.alpha());
        assert_eq!(*h.get(0, 2), e.alpha_pow(2));
        for j in 0..3 {
            for i in 0..1 {
                assert_eq!(*h.get(i + 1, j), e.frobenius(h.get(i, j)));
            }
        }
    }

    #[test]
    fn parity_check_full_rank_and_t_consistent() {
        for (m, c, n_code, k_code) in [(1, 3, 3, 1), (2, 3, 3, 1), (1, 2, 2, 1), (2, 3, 2, 1)] {
            let e = ext(m, c);
            let cb = SecrecyCodebook::build(n_code, k_code, &e).unwrap();
            assert_eq!(cb.h().rank(), n_code - k_code);
            let t_inv = cb.t().invert().unwrap();
            for i in 0..cb.redundancy() {
                assert_eq!(t_inv.row(i), cb.h().row(i), "params {m},{c},{n_code},{k_code}");
            }
            assert_eq!(
                cb.t().matmul(cb.t_inv()),
                Matrix::identity(e.clone(), n_code)
            );
        }
    }

    #[test]
    fn rejects_bad_params() {
        let e = ext(1, 3);
        assert!(SecrecyCodebook::build(4, 1, &e).is_err());
        assert!(SecrecyCodebook::build(3, 3, &e).is_err());
    }

    #[test]
    fn every_maximal_column_subset_nonsingular() {
        // Rank-distance optimality surrogate: any (n−k) columns of H are independent.
        let e = ext(1, 3);
        let cb = SecrecyCodebook::build(3, 1, &e).unwrap();
        let r = cb.redundancy();
        for c0 in 0..3 {
            for c1 in c0 + 1..3 {
                let sub = cb.h().select_cols(&[c0, c1]);
                assert_eq!(sub.rank(), r);
            }
        }
    }

    #[test]
    fn spotcheck_accepts_good_codebooks() {
        assert!(mrd_spotcheck(&SecrecyCodebook::build(2, 1, &ext(1, 2)).unwrap()));
        assert!(mrd_spotcheck(&SecrecyCodebook::build(3, 1, &ext(1, 3)).unwrap()));
    }

    #[test]
    fn spotcheck_rejects_repeated_row_h() {
        let e = ext(1, 3);
        let good = SecrecyCodebook::build(3, 1, &e).unwrap();
        let h_bad = good.h().select_rows(&[0, 0]);
        let bad = SecrecyCodebook::from_parts(3, 1, h_bad, good.t().clone());
        assert!(!mrd_spotcheck(&bad));
    }

    #[test]
    fn spotcheck_rejects_non_mrd_completion() {
        // T = I: the secret block passes straight through, so a wiretap row
        // aligned with it sees the message.
        let e = ext(1, 2);
        let h = Matrix::from_rows(e.clone(), vec![vec![e.one(), e.zero()]]);
        let bad = SecrecyCodebook::from_parts(2, 1, h, Matrix::identity(e, 2));
        assert!(!mrd_spotcheck(&bad));
    }
}
