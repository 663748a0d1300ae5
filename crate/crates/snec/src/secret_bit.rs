//! Single-secret-bit scheme: transmit one bit with vanishing error and
//! perfect secrecy whenever C > Z_I + Z_O, with no shared key at all.
//!
//! Bit 0 encodes the all-zero message S = 0 into the coset codebook, bit 1 a
//! uniform S ∈ F_Q^{C'×C'} (C' = C − Z_I). The receiver reduces Y to a
//! (possibly erased/deviated) estimate r of the transmitted x, projects away
//! the directions the adversary could have touched, and tests whether the
//! surviving block of H·r has full rank.

use rand::RngCore;
use thiserror::Error;

use crate::channel::CodeParams;
use crate::fields::{BaseField, ExtField, Field};
use crate::linalg::{lift_to_ext, phi_mn_inv, Matrix};
use crate::rank_codes::SecrecyCodebook;
use crate::secrecy;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecretBitError {
    #[error("scheme requires C > Z_I + Z_O")]
    Infeasible,
    #[error("codebook must be [C, Z_I] over GF(q^C) for these parameters")]
    BadCodebook,
    #[error("received matrix must be C×n with n ≥ C(1+C'), got {rows}×{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("too many erasures/deviations to decide: mu = {mu}, delta = {delta}")]
    Undecodable { mu: usize, delta: usize },
    #[error(transparent)]
    Secrecy(#[from] secrecy::SecrecyError),
}

/// Minimum codeword width C(1 + C'); extra columns are zero padding.
pub fn min_cols(params: &CodeParams) -> usize {
    params.c * (1 + params.c - params.z_i)
}

/// One encoded bit, keeping the internals the tests and the composed scheme
/// need: the coset message S and the pre-φ codeword x = T[S; N].
#[derive(Clone, Debug)]
pub struct BitEncoding {
    pub x: Matrix<BaseField>,
    pub s: Matrix<ExtField>,
    pub x_ext: Matrix<ExtField>,
}

fn check(cb: &SecrecyCodebook, params: &CodeParams) -> Result<(), SecretBitError> {
    if !params.secret_bit_feasible() {
        return Err(SecretBitError::Infeasible);
    }
    if cb.n_code() != params.c || cb.k_code() != params.z_i || cb.ext().base().m() != params.m {
        return Err(SecretBitError::BadCodebook);
    }
    Ok(())
}

/// Bit 0 → S = 0, bit 1 → S uniform; zero-pad to params.n columns.
pub fn encode(
    bit: bool,
    cb: &SecrecyCodebook,
    params: &CodeParams,
    rng: &mut dyn RngCore,
) -> Result<BitEncoding, SecretBitError> {
    check(cb, params)?;
    let cp = cb.redundancy();
    let ext = cb.ext().clone();
    let s = if bit {
        Matrix::random(ext.clone(), cp, cp, rng)
    } else {
        Matrix::zeros(ext.clone(), cp, cp)
    };
    let noise = Matrix::random(ext, cb.k_code(), cp, rng);
    encode_with(&s, &noise, cb, params)
}

/// Test hook: fixed S and N.
pub fn encode_with(
    s: &Matrix<ExtField>,
    noise: &Matrix<ExtField>,
    cb: &SecrecyCodebook,
    params: &CodeParams,
) -> Result<BitEncoding, SecretBitError> {
    check(cb, params)?;
    let x_ext = cb.t().matmul(&s.vcat(noise));
    let x = secrecy::encode_with_noise(s, noise, cb)?;
    let pad = params.n - x.cols();
    let x = if pad > 0 {
        x.hcat(&Matrix::zeros(*cb.ext().base(), params.c, pad))
    } else {
        x
    };
    Ok(BitEncoding { x, s: s.clone(), x_ext })
}

/// Output of the row-reduction step on Y.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    /// Estimate of x, with erased rows zeroed: C×C' over F_Q.
    pub r: Matrix<ExtField>,
    /// Erasure directions, one unit-plus-header column per missing pivot.
    pub l_hat: Matrix<BaseField>,
    /// Deviations: contracted payload of rows whose pivot falls past the
    /// header, δ×C' over F_Q.
    pub v_hat: Matrix<ExtField>,
    pub mu: usize,
    pub delta: usize,
    pub rank: usize,
}

/// Row-reduce Y and split it into the estimate r, erasures L̂ and deviations
/// V̂ of the reduction identity r = x + (adversarial span terms).
pub fn reduce_received(
    y: &Matrix<BaseField>,
    cb: &SecrecyCodebook,
) -> Result<ReductionResult, SecretBitError> {
    let c = cb.n_code();
    let cp = cb.redundancy();
    let ext = cb.ext();
    let field = *ext.base();
    let n_min = c * (1 + cp);
    if y.rows() != c || y.cols() < n_min {
        return Err(SecretBitError::BadShape { rows: y.rows(), cols: y.cols() });
    }
    let (ybar, pivots) = y.col_range(0, n_min).rref();
    let rank = pivots.len();

    // Nonzero rows whose pivot lands inside the header go back to the row
    // the pivot names; the rest of the header positions are erasures.
    let mut placed = Matrix::zeros(field, c, n_min);
    let mut header_pivot = vec![false; c];
    let mut tail_rows = Vec::new();
    for (t, &p) in pivots.iter().enumerate() {
        if p < c {
            header_pivot[p] = true;
            for j in 0..n_min {
                placed.set(p, j, ybar.get(t, j).clone());
            }
        } else {
            tail_rows.push(t);
        }
    }
    let mu = header_pivot.iter().filter(|&&h| !h).count();
    let delta = tail_rows.len();

    let a_hat = placed.col_range(0, c);
    let r = phi_mn_inv(&placed.col_range(c, n_min), ext).expect("payload width is a multiple of C");
    let mut l_hat = Matrix::zeros(field, c, mu);
    for (idx, v) in (0..c).filter(|&v| !header_pivot[v]).enumerate() {
        for i in 0..c {
            l_hat.set(i, idx, a_hat.get(i, v).clone());
        }
        let bumped = field.add(l_hat.get(v, idx), &field.one());
        l_hat.set(v, idx, bumped);
    }
    let v_hat = phi_mn_inv(&ybar.select_rows(&tail_rows).col_range(c, n_min), ext)
        .expect("payload width is a multiple of C");
    Ok(ReductionResult { r, l_hat, v_hat, mu, delta, rank })
}

/// Everything the decoder computed, exposed for diagnostics and invariant
/// checks.
#[derive(Clone, Debug)]
pub struct DecodeTrace {
    pub reduction: ReductionResult,
    /// Left nullspace of Λ̂ = H·L̂.
    pub j: Matrix<ExtField>,
    /// Right nullspace of V̂.
    pub k: Matrix<ExtField>,
    /// J·H·r·K, the rank-tested block.
    pub projected: Matrix<ExtField>,
    pub bit: bool,
}

/// Decode with the full trace. Fails only when erasures or deviations wipe
/// out the whole test block (μ ≥ C' or δ ≥ C', impossible while the
/// adversary respects Z_O < C').
pub fn decode_trace(
    y: &Matrix<BaseField>,
    cb: &SecrecyCodebook,
) -> Result<DecodeTrace, SecretBitError> {
    let cp = cb.redundancy();
    let reduction = reduce_received(y, cb)?;
    if reduction.mu >= cp || reduction.delta >= cp {
        return Err(SecretBitError::Undecodable { mu: reduction.mu, delta: reduction.delta });
    }
    let lambda = cb.h().matmul(&lift_to_ext(&reduction.l_hat, cb.ext()));
    let j = lambda.left_nullspace_basis();
    let k = reduction.v_hat.right_nullspace_basis();
    let projected = j.matmul(&cb.h().matmul(&reduction.r)).matmul(&k);
    let bit = projected.rank() == projected.rows().min(projected.cols());
    Ok(DecodeTrace { reduction, j, k, projected, bit })
}

pub fn decode(y: &Matrix<BaseField>, cb: &SecrecyCodebook) -> Result<bool, SecretBitError> {
    decode_trace(y, cb).map(|t| t.bit)
}

/// rank(J·H·(r − x)·K) for the true transmitted x = T[S; N]: bounded by
/// Z_O − max(μ, δ) whenever the channel contract held.
pub fn residual_rank(trace: &DecodeTrace, x_true: &Matrix<ExtField>, cb: &SecrecyCodebook) -> usize {
    let diff = trace.reduction.r.sub(x_true);
    trace.j.matmul(&cb.h().matmul(&diff)).matmul(&trace.k).rank()
}

/// J and K of the shapes the decoder produces after μ erasures and δ
/// deviations, in canonical position: J = [I | 0], K = [I; 0].
fn canonical_projectors(
    ext: &ExtField,
    cp: usize,
    mu: usize,
    delta: usize,
) -> (Matrix<ExtField>, Matrix<ExtField>) {
    let j = Matrix::from_fn(ext.clone(), cp - mu, cp, |i, jx| {
        if i == jx { ext.one() } else { ext.zero() }
    });
    let k = Matrix::from_fn(ext.clone(), cp, cp - delta, |i, jx| {
        if i == jx { ext.one() } else { ext.zero() }
    });
    (j, k)
}

/// Exhaustive census over all S ∈ F_Q^{C'×C'}: how many keep J·S·K at full
/// rank. Returns (full_rank_count, total). Only viable for tiny Q.
pub fn lemma1_census(ext: &ExtField, cp: usize, mu: usize, delta: usize) -> (u64, u64) {
    let q = ext.size();
    let total = q.pow((cp * cp) as u32);
    assert!(total <= 1 << 24, "census space too large");
    let (j, k) = canonical_projectors(ext, cp, mu, delta);
    let want = (cp - mu).min(cp - delta);
    let mut full = 0u64;
    for idx in 0..total {
        let mut rem = idx;
        let s = Matrix::from_fn(ext.clone(), cp, cp, |_, _| {
            let e = ext.element(rem % q);
            rem /= q;
            e
        });
        if j.matmul(&s).matmul(&k).rank() == want {
            full += 1;
        }
    }
    (full, total as u64)
}

/// Monte Carlo version of the census for larger Q: returns the full-rank
/// count over `trials` uniform draws of S.
pub fn lemma1_mc(
    ext: &ExtField,
    cp: usize,
    mu: usize,
    delta: usize,
    trials: u64,
    rng: &mut dyn RngCore,
) -> u64 {
    let (j, k) = canonical_projectors(ext, cp, mu, delta);
    let want = (cp - mu).min(cp - delta);
    (0..trials)
        .filter(|_| {
            let s = Matrix::random(ext.clone(), cp, cp, &mut *rng);
            j.matmul(&s).matmul(&k).rank() == want
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, AdversaryStrategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(c: usize, z_i: usize, z_o: usize, m: u32) -> (CodeParams, SecrecyCodebook) {
        let cp = c - z_i;
        let params = CodeParams::new(c, z_i, z_o, m, c * (1 + cp)).unwrap();
        let cb = SecrecyCodebook::build(c, z_i, &params.ext_field()).unwrap();
        (params, cb)
    }

    #[test]
    fn lemma1_census_q8_full_square() {
        // 2×2 over GF(8): nonsingular count is (64-1)(64-8) = 3528 of 4096.
        let ext = ExtField::new(crate::fields::BaseField::new(1).unwrap(), 3).unwrap();
        let (full, total) = lemma1_census(&ext, 2, 0, 0);
        assert_eq!((full, total), (3528, 4096));
    }

    #[test]
    fn lemma1_census_respects_bound() {
        // Failure rate ≤ C'/Q for every (μ, δ) the decoder can face.
        let ext = ExtField::new(crate::fields::BaseField::new(1).unwrap(), 3).unwrap();
        for (mu, delta) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let (full, total) = lemma1_census(&ext, 2, mu, delta);
            let fail = (total - full) as f64 / total as f64;
            assert!(fail <= 2.0 / 8.0, "mu={mu} delta={delta} fail={fail}");
        }
    }

    #[test]
    fn clean_channel_roundtrip() {
        let (params, cb) = setup(3, 1, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for bit in [false, true] {
            for _ in 0..50 {
                let enc = encode(bit, &cb, &params, &mut rng).unwrap();
                let (y, _, _) = transmit(&enc.x, &params, &AdversaryStrategy::None, &mut rng).unwrap();
                let tr = decode_trace(&y, &cb).unwrap();
                assert_eq!(tr.reduction.mu, 0);
                assert_eq!(tr.reduction.delta, 0);
                if bit {
                    // May miss with prob ≤ C'/Q; just check the common case
                    // doesn't invert.
                    assert_eq!(tr.projected, cb.h().matmul(&enc.x_ext));
                } else {
                    assert!(!tr.bit);
                }
            }
        }
    }

    #[test]
    fn erased_row_hand_example() {
        // Zeroing row 0 of X models an erasure: μ = 1, δ = 0, L̂ = e_0,
        // r = x with row 0 zeroed, and the residual projects to rank 0.
        let (params, cb) = setup(3, 1, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let enc = encode(true, &cb, &params, &mut rng).unwrap();
        let mut y = enc.x.clone();
        for j in 0..y.cols() {
            y.set(0, j, 0);
        }
        let tr = decode_trace(&y, &cb).unwrap();
        assert_eq!((tr.reduction.mu, tr.reduction.delta), (1, 0));
        let field = *cb.ext().base();
        let e0 = Matrix::from_fn(field, 3, 1, |i, _| u64::from(i == 0));
        assert_eq!(tr.reduction.l_hat, e0);
        let mut x_erased = enc.x_ext.clone();
        for j in 0..x_erased.cols() {
            x_erased.set(0, j, cb.ext().zero());
        }
        assert_eq!(tr.reduction.r, x_erased);
        assert_eq!(residual_rank(&tr, &enc.x_ext, &cb), 0);
    }

    #[test]
    fn bit_zero_never_flips_under_attack() {
        let (params, cb) = setup(3, 1, 1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for strategy in [AdversaryStrategy::RandomJam, AdversaryStrategy::CutAttack] {
            for _ in 0..300 {
                let enc = encode(false, &cb, &params, &mut rng).unwrap();
                let (y, _, _) = transmit(&enc.x, &params, &strategy, &mut rng).unwrap();
                match decode(&y, &cb) {
                    Ok(bit) => assert!(!bit, "false alarm"),
                    Err(SecretBitError::Undecodable { .. }) => {
                        panic!("Z_O < C' should keep every trial decodable")
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn bit_one_error_rate_small() {
        let (params, cb) = setup(3, 1, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let trials = 2000;
        let mut misses = 0u32;
        for _ in 0..trials {
            let enc = encode(true, &cb, &params, &mut rng).unwrap();
            let (y, _, _) = transmit(&enc.x, &params, &AdversaryStrategy::CutAttack, &mut rng).unwrap();
            if !decode(&y, &cb).unwrap() {
                misses += 1;
            }
        }
        // C'/Q = 2/512 ≈ 0.0039; allow generous Monte Carlo slack.
        let rate = f64::from(misses) / f64::from(trials);
        assert!(rate <= 2.0 / 512.0 + 0.01, "miss rate {rate}");
    }

    #[test]
    fn residual_invariant_under_cut_attack() {
        let (params, cb) = setup(3, 1, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for trial in 0..300 {
            let bit = trial % 2 == 0;
            let enc = encode(bit, &cb, &params, &mut rng).unwrap();
            let (y, _, _) = transmit(&enc.x, &params, &AdversaryStrategy::CutAttack, &mut rng).unwrap();
            let tr = decode_trace(&y, &cb).unwrap();
            let worst = tr.reduction.mu.max(tr.reduction.delta);
            assert!(worst <= params.z_o, "mu/delta exceeded Z_O");
            assert!(
                residual_rank(&tr, &enc.x_ext, &cb) <= params.z_o - worst,
                "residual rank out of bound at trial {trial}"
            );
        }
    }

    #[test]
    fn padding_columns_are_ignored() {
        let c = 3;
        let cp = 2;
        let params = CodeParams::new(3, 1, 1, 3, c * (1 + cp) + 5).unwrap();
        let cb = SecrecyCodebook::build(3, 1, &params.ext_field()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let enc = encode(true, &cb, &params, &mut rng).unwrap();
        assert_eq!(enc.x.cols(), params.n);
        let (y, _, _) = transmit(&enc.x, &params, &AdversaryStrategy::None, &mut rng).unwrap();
        assert!(decode(&y, &cb).unwrap());
    }

    #[test]
    fn infeasible_params_rejected() {
        let params = CodeParams::new(3, 2, 1, 3, 12).unwrap();
        let cb = SecrecyCodebook::build(3, 2, &params.ext_field()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        assert_eq!(
            encode(true, &cb, &params, &mut rng).unwrap_err(),
            SecretBitError::Infeasible
        );
    }
}
