//! Eavesdrop-only perfectly secret layer: rate C − Z_I via MRD coset coding.
//!
//! Encoding lifts x = T[S; N] to X = [I_C | φ(x)]; the identity header lets
//! the decoder read the transfer matrix straight off the first C received
//! columns, so no side channel is needed. Decoding is exact whenever the
//! channel is jam-free (A nonsingular, Z = 0).

use rand::RngCore;
use thiserror::Error;

use crate::fields::{BaseField, ExtField, Field};
use crate::linalg::{phi_mn, phi_mn_inv, Matrix};
use crate::rank_codes::{index_to_matrix, SecrecyCodebook};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecrecyError {
    #[error("message must be {rows}x{cols}, got {got_rows}x{got_cols}")]
    BadShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("codebook must be [C, Z_I] with C the extension degree")]
    BadCodebook,
    #[error("header columns singular; jamming present outside this layer's contract")]
    SingularHeader,
    #[error("received matrix narrower than the identity header")]
    TooNarrow,
}

fn check_codebook(cb: &SecrecyCodebook) -> Result<(), SecrecyError> {
    if cb.n_code() != cb.ext().degree() {
        return Err(SecrecyError::BadCodebook);
    }
    Ok(())
}

/// Encode S ∈ F_Q^{(C−Z_I)×n'} as X = [I_C | φ(T[S; N])] with N uniform.
pub fn encode(
    s: &Matrix<ExtField>,
    cb: &SecrecyCodebook,
    rng: &mut dyn RngCore,
) -> Result<Matrix<BaseField>, SecrecyError> {
    let noise = Matrix::random(cb.ext().clone(), cb.k_code(), s.cols(), rng);
    encode_with_noise(s, &noise, cb)
}

/// Test hook: encode with a caller-fixed noise matrix. The production path
/// always samples N; fixing it forfeits secrecy.
pub fn encode_with_noise(
    s: &Matrix<ExtField>,
    noise: &Matrix<ExtField>,
    cb: &SecrecyCodebook,
) -> Result<Matrix<BaseField>, SecrecyError> {
    check_codebook(cb)?;
    if s.rows() != cb.redundancy() || noise.rows() != cb.k_code() || noise.cols() != s.cols() {
        return Err(SecrecyError::BadShape {
            rows: cb.redundancy(),
            cols: s.cols(),
            got_rows: s.rows(),
            got_cols: s.cols(),
        });
    }
    let x = cb.t().matmul(&s.vcat(noise));
    let header = Matrix::identity(*cb.ext().base(), cb.n_code());
    Ok(header.hcat(&phi_mn(&x)))
}

/// Recover S from Y = AX: the first C columns are A itself, the rest is Aφ(x).
pub fn decode(y: &Matrix<BaseField>, cb: &SecrecyCodebook) -> Result<Matrix<ExtField>, SecrecyError> {
    check_codebook(cb)?;
    let c = cb.n_code();
    if y.cols() < c {
        return Err(SecrecyError::TooNarrow);
    }
    let a = y.col_range(0, c);
    let a_inv = a.invert().map_err(|_| SecrecyError::SingularHeader)?;
    let payload = a_inv.matmul(&y.col_range(c, y.cols()));
    let x = phi_mn_inv(&payload, cb.ext()).map_err(|_| SecrecyError::TooNarrow)?;
    Ok(cb.h().matmul(&x))
}

/// One violation of wiretap-view distribution equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    pub b_index: u128,
    pub s1_index: u128,
    pub s2_index: u128,
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations: Vec<AuditViolation>,
    pub b_count: u128,
    pub message_count: u128,
}

impl AuditReport {
    pub fn perfectly_secret(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive perfect-secrecy audit with n' = 1: for every B (all Z_I×C
/// base-field matrices) and every message pair, the distribution of
/// W = B·encode(S, N) over uniform N must be identical. Enumerable
/// parameters only (q = 2, C ≤ 3).
pub fn audit(cb: &SecrecyCodebook) -> Result<AuditReport, SecrecyError> {
    check_codebook(cb)?;
    let ext = cb.ext().clone();
    let base = *ext.base();
    let z_i = cb.k_code();
    let c = cb.n_code();
    let n_msgs = ext.size().pow(cb.redundancy() as u32);
    let n_noise = ext.size().pow(z_i as u32);
    let n_b = base.size().pow((z_i * c) as u32);

    let mut report = AuditReport { violations: vec![], b_count: n_b, message_count: n_msgs };
    for b_idx in 0..n_b {
        let b_mat = index_to_matrix(&base, z_i, c, b_idx);
        let mut dists: Vec<std::collections::HashMap<Vec<u64>, u64>> = Vec::new();
        for s_idx in 0..n_msgs {
            let s = crate::rank_codes::index_to_ext_col(&ext, cb.redundancy(), s_idx);
            let mut dist = std::collections::HashMap::new();
            for n_idx in 0..n_noise {
                let noise = crate::rank_codes::index_to_ext_col(&ext, z_i, n_idx);
                let x = encode_with_noise(&s, &noise, cb)?;
                let w = b_mat.matmul(&x);
                *dist.entry(w.data().to_vec()).or_insert(0u64) += 1;
            }
            dists.push(dist);
        }
        for i in 0..dists.len() {
            for j in i + 1..dists.len() {
                if dists[i] != dists[j] {
                    report.violations.push(AuditViolation {
                        b_index: b_idx,
                        s1_index: i as u128,
                        s2_index: j as u128,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::BaseField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(m: u32, c: usize, z_i: usize) -> SecrecyCodebook {
        let ext = ExtField::new(BaseField::new(m).unwrap(), c).unwrap();
        SecrecyCodebook::build(c, z_i, &ext).unwrap()
    }

    #[test]
    fn zero_message_zero_noise_gives_identity_only() {
        let cb = setup(1, 3, 1);
        let s = Matrix::zeros(cb.ext().clone(), 2, 1);
        let n = Matrix::zeros(cb.ext().clone(), 1, 1);
        let x = encode_with_noise(&s, &n, &cb).unwrap();
        let base = *cb.ext().base();
        assert_eq!(x.col_range(0, 3), Matrix::identity(base, 3));
        assert!(x.col_range(3, 6).is_zero());
    }

    #[test]
    fn header_is_identity_and_parity_holds() {
        let cb = setup(2, 3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let s = Matrix::random(cb.ext().clone(), 2, 2, &mut rng);
            let x = encode(&s, &cb, &mut rng).unwrap();
            let base = *cb.ext().base();
            assert_eq!(x.col_range(0, 3), Matrix::identity(base, 3));
            // S = Hx by construction.
            let lifted = phi_mn_inv(&x.col_range(3, x.cols()), cb.ext()).unwrap();
            assert_eq!(cb.h().matmul(&lifted), s);
        }
    }

    #[test]
    fn decode_identity_channel() {
        let cb = setup(2, 3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = Matrix::random(cb.ext().clone(), 2, 3, &mut rng);
        let x = encode(&s, &cb, &mut rng).unwrap();
        assert_eq!(decode(&x, &cb).unwrap(), s);
    }

    #[test]
    fn decode_random_nonsingular_channel_100_trials() {
        let cb = setup(2, 3, 1);
        let base = *cb.ext().base();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = Matrix::random(cb.ext().clone(), 2, 2, &mut rng);
            let x = encode(&s, &cb, &mut rng).unwrap();
            let a = Matrix::random_nonsingular(base, 3, &mut rng);
            assert_eq!(decode(&a.matmul(&x), &cb).unwrap(), s);
        }
    }

    #[test]
    fn singular_header_is_a_decode_error() {
        let cb = setup(2, 3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = Matrix::random(cb.ext().clone(), 2, 1, &mut rng);
        let mut x = encode(&s, &cb, &mut rng).unwrap();
        for i in 0..3 {
            x.set(i, 0, 0);
        }
        assert_eq!(decode(&x, &cb), Err(SecrecyError::SingularHeader));
    }

    #[test]
    fn audit_clean_q2_c2() {
        let report = audit(&setup(1, 2, 1)).unwrap();
        assert!(report.perfectly_secret(), "violations: {:?}", report.violations);
    }

    #[test]
    fn audit_clean_q2_c3() {
        let report = audit(&setup(1, 3, 1)).unwrap();
        assert!(report.perfectly_secret(), "violations: {:?}", report.violations);
    }

    #[test]
    fn audit_flags_sabotaged_codebook() {
        // T = I leaks the message block directly to aligned wiretap rows.
        let ext = ExtField::new(BaseField::new(1).unwrap(), 2).unwrap();
        let h = Matrix::from_rows(ext.clone(), vec![vec![ext.one(), ext.zero()]]);
        let bad = SecrecyCodebook::from_parts(2, 1, h, Matrix::identity(ext, 2));
        let report = audit(&bad).unwrap();
        assert!(!report.perfectly_secret());
    }

    #[test]
    fn rate_accounting() {
        // message symbols per packet symbol → (C−Z_I)/C · (1 − C/n).
        let (c, z_i, n) = (3usize, 1usize, 12usize);
        let n_prime = n / c - 1;
        let message_base_symbols = (c - z_i) * n_prime * c;
        let rate = message_base_symbols as f64 / (c * n) as f64;
        let closed_form = (c - z_i) as f64 / c as f64 * (1.0 - c as f64 / n as f64);
        assert!((rate - closed_form).abs() < 1e-12);
    }
}
