//! The earlier public-hash single-bit scheme and the attacks that break it.
//!
//! Alice publishes two Vandermonde hash matrices D₀, D₁ and sends bit I as a
//! random b×C² matrix X (b = C − Z_O) with flatten(X)·D_I = 0. Bob looks for
//! combinations of his received rows that land in either kernel. Because the
//! hashes are public, Calvin can make his injected packets satisfy the D₁
//! condition too — directly when Z_O ≥ b, or with the help of eavesdropped
//! packets when Z_O + Z_I ≥ b — so Bob can never again trust a decoded 1.
//! Kept as a regression exhibit; the keyless scheme in `secret_bit` is the
//! replacement.

use rand::RngCore;
use thiserror::Error;

use crate::channel::{AdversaryStrategy, CodeParams};
use crate::fields::{BaseField, Field};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LegacyError {
    #[error("scheme needs n = C² and 1 ≤ b = C − Z_O, got C = {c}, Z_O = {z_o}, n = {n}")]
    BadParams { c: usize, z_o: usize, n: usize },
    #[error("mimic attack needs Z_O ≥ b or Z_O + Z_I ≥ b (b = {b}, Z_O = {z_o}, Z_I = {z_i})")]
    AttackInfeasible { b: usize, z_o: usize, z_i: usize },
}

/// The public hash pair. Each matrix is C²b × C² with columns
/// h(u) = [u, u², …, u^{C²b}]ᵀ, resampled until the last C² rows invert.
#[derive(Clone, Debug)]
pub struct LegacyHashPair {
    pub d0: Matrix<BaseField>,
    pub d1: Matrix<BaseField>,
    d0_tail_inv: Matrix<BaseField>,
    d1_tail_inv: Matrix<BaseField>,
}

fn data_rows(params: &CodeParams) -> usize {
    params.c - params.z_o
}

fn vandermonde_hash(
    params: &CodeParams,
    rng: &mut dyn RngCore,
) -> (Matrix<BaseField>, Matrix<BaseField>) {
    let field = params.base_field();
    let c2 = params.c * params.c;
    let rows = c2 * data_rows(params);
    loop {
        let gens: Vec<u64> = (0..c2).map(|_| field.sample(&mut *rng)).collect();
        let mut d = Matrix::zeros(field, rows, c2);
        for (j, u) in gens.iter().enumerate() {
            let mut p = *u;
            for i in 0..rows {
                d.set(i, j, p);
                p = field.mul(&p, u);
            }
        }
        let tail_rows: Vec<usize> = (rows - c2..rows).collect();
        if let Ok(inv) = d.select_rows(&tail_rows).invert() {
            return (d, inv);
        }
    }
}

impl LegacyHashPair {
    pub fn build(params: &CodeParams, rng: &mut dyn RngCore) -> Result<Self, LegacyError> {
        let c2 = params.c * params.c;
        if params.z_o >= params.c || params.n != c2 {
            return Err(LegacyError::BadParams { c: params.c, z_o: params.z_o, n: params.n });
        }
        let (d0, d0_tail_inv) = vandermonde_hash(params, rng);
        let (d1, d1_tail_inv) = vandermonde_hash(params, rng);
        Ok(LegacyHashPair { d0, d1, d0_tail_inv, d1_tail_inv })
    }

    fn pick(&self, bit: bool) -> (&Matrix<BaseField>, &Matrix<BaseField>) {
        if bit { (&self.d1, &self.d1_tail_inv) } else { (&self.d0, &self.d0_tail_inv) }
    }
}

/// Row-major flattening; `flatten(X)·D_bit = 0` is the codeword identity.
pub fn flatten(x: &Matrix<BaseField>) -> Matrix<BaseField> {
    Matrix::from_fn(*x.field(), 1, x.rows() * x.cols(), |_, j| {
        x.get(j / x.cols(), j % x.cols()).clone()
    })
}

/// Random codeword in the kernel of D_bit: uniform prefix u, suffix solved
/// through the invertible tail block, reshaped row-major to b×C².
pub fn encode(
    bit: bool,
    pair: &LegacyHashPair,
    params: &CodeParams,
    rng: &mut dyn RngCore,
) -> Matrix<BaseField> {
    let field = params.base_field();
    let c2 = params.c * params.c;
    let b = data_rows(params);
    let (d, tail_inv) = pair.pick(bit);
    let head_len = b * c2 - c2;
    let u = Matrix::random(field, 1, head_len, rng);
    let head = d.select_rows(&(0..head_len).collect::<Vec<_>>());
    let v = u.matmul(&head).matmul(tail_inv);
    let flat = u.hcat(&v);
    Matrix::from_fn(field, b, c2, |i, j| flat.get(0, i * c2 + j).clone())
}

/// Zero-pad a b×C² codeword to the C×C² the channel wants.
pub fn pad_codeword(x: &Matrix<BaseField>, params: &CodeParams) -> Matrix<BaseField> {
    x.vcat(&Matrix::zeros(*x.field(), params.c - x.rows(), x.cols()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegacyOutcome {
    Bit0,
    Bit1,
    /// Both hashes (or neither) are satisfiable — exactly the state the
    /// mimic attack forces.
    Ambiguous,
}

/// Does some nonzero combination [x₁Y, …, x_bY] land in ker(D_I)? The
/// criterion is rank(M_I) < b·rank(Y) for the stacked map M_I, which asks
/// for a kernel vector whose hashed image is itself nonzero; combinations
/// with every x_iY = 0 say nothing about either bit.
fn satisfies(y: &Matrix<BaseField>, d: &Matrix<BaseField>, params: &CodeParams) -> bool {
    let c2 = params.c * params.c;
    let b = data_rows(params);
    let mut m: Option<Matrix<BaseField>> = None;
    for i in 0..b {
        let block = d.select_rows(&(i * c2..(i + 1) * c2).collect::<Vec<_>>());
        let part = y.matmul(&block);
        m = Some(match m {
            Some(acc) => acc.vcat(&part),
            None => part,
        });
    }
    m.expect("b ≥ 1").rank() < b * y.rank()
}

pub fn decode(y: &Matrix<BaseField>, pair: &LegacyHashPair, params: &CodeParams) -> LegacyOutcome {
    match (satisfies(y, &pair.d0, params), satisfies(y, &pair.d1, params)) {
        (true, false) => LegacyOutcome::Bit0,
        (false, true) => LegacyOutcome::Bit1,
        _ => LegacyOutcome::Ambiguous,
    }
}

/// Calvin's forgery as a channel strategy. Direct variant (Z_O ≥ b): inject
/// a fresh bit-1 codeword of his own. Eavesdrop-assisted (Z_O + Z_I ≥ b):
/// recruit t = b − Z_O observed packets as the leading blocks and solve the
/// last injected packet through the D₁ tail block so the combined vector
/// hashes to zero.
pub fn mimic_attack(
    pair: &LegacyHashPair,
    params: &CodeParams,
) -> Result<AdversaryStrategy, LegacyError> {
    let b = data_rows(params);
    let (z_o, z_i) = (params.z_o, params.z_i);
    if z_o < b && z_o + z_i < b {
        return Err(LegacyError::AttackInfeasible { b, z_o, z_i });
    }
    let pair = pair.clone();
    Ok(AdversaryStrategy::Custom(Box::new(move |w, params, rng| {
        let field = params.base_field();
        let c2 = params.c * params.c;
        let b = data_rows(params);
        let mut z = Matrix::zeros(field, params.c, c2);
        if params.z_o >= b {
            let xc = encode(true, &pair, params, rng);
            for i in 0..b {
                for j in 0..c2 {
                    z.set(i, j, xc.get(i, j).clone());
                }
            }
        } else {
            let t = b - params.z_o;
            let mut known = Matrix::zeros(field, 0, 0);
            let mut blocks: Vec<Matrix<BaseField>> = Vec::new();
            for i in 0..t {
                blocks.push(w.select_rows(&[i]));
            }
            for _ in 0..params.z_o - 1 {
                blocks.push(Matrix::random(field, 1, c2, rng));
            }
            for (i, blk) in blocks.iter().enumerate() {
                known = if i == 0 { blk.clone() } else { known.hcat(blk) };
            }
            let head = pair.d1.select_rows(&(0..(b - 1) * c2).collect::<Vec<_>>());
            let v = known.matmul(&head).matmul(&pair.d1_tail_inv);
            for (row, blk) in blocks.iter().skip(t).enumerate() {
                for j in 0..c2 {
                    z.set(row, j, blk.get(0, j).clone());
                }
            }
            for j in 0..c2 {
                z.set(params.z_o - 1, j, v.get(0, j).clone());
            }
        }
        z
    })))
}
