//! Shared-secret error-control layer: rate C − Z_O against a jamming,
//! fully-eavesdropping adversary, given a small out-of-band secret.
//!
//! The secret is α = bC+1 uniform symbols ρ_j plus the hash ℍ = X̄P, where
//! P_{(i,j)} = ρ_j^i with the row index running 1..w (so no all-ones row).
//! The width w is a parameter: the composed scheme reuses this layer at
//! w = b + n'C.

use rand::RngCore;
use thiserror::Error;

use crate::channel::CodeParams;
use crate::fields::{BaseField, Field};
use crate::linalg::{LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcDecodeError {
    #[error("hash system U·(ȲP) = ℍ has no solution")]
    NoSolution,
    #[error("hash system U·(ȲP) = ℍ is underdetermined")]
    NonUnique,
    #[error("recovered X̄ does not start with I_b")]
    MalformedRecovery,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcError {
    #[error("bit string has {got} bits, expected {want}")]
    BadBitLength { got: usize, want: usize },
    #[error("message must have {want} rows (b = C - Z_O), got {got}")]
    BadMessageRows { got: usize, want: usize },
}

/// b = C − Z_O, the number of data rows.
pub fn data_rows(params: &CodeParams) -> usize {
    params.c - params.z_o
}

/// α = bC + 1 secret symbols.
pub fn alpha(params: &CodeParams) -> usize {
    data_rows(params) * params.c + 1
}

/// k = α(b+1)·log₂q, the secret's length in bits.
pub fn secret_bits(params: &CodeParams) -> usize {
    alpha(params) * (data_rows(params) + 1) * params.m as usize
}

/// The out-of-band secret: generators ρ and hash ℍ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashSecret {
    pub rhos: Vec<u64>,
    pub hhash: Matrix<BaseField>,
}

impl HashSecret {
    /// Pack as bits: ρ first (each symbol big-endian, m bits), then ℍ
    /// row-major. The composed scheme depends on this exact layout.
    pub fn to_bits(&self, m: u32) -> Vec<bool> {
        let mut bits = Vec::new();
        let mut push_symbol = |s: u64| {
            for i in (0..m).rev() {
                bits.push((s >> i) & 1 == 1);
            }
        };
        for &rho in &self.rhos {
            push_symbol(rho);
        }
        for e in self.hhash.data() {
            push_symbol(*e);
        }
        bits
    }

    pub fn from_bits(
        bits: &[bool],
        b: usize,
        alpha: usize,
        field: BaseField,
    ) -> Result<Self, EcError> {
        let m = field.m() as usize;
        let want = alpha * (b + 1) * m;
        if bits.len() != want {
            return Err(EcError::BadBitLength { got: bits.len(), want });
        }
        let mut it = bits.iter();
        let mut next_symbol = || {
            let mut s = 0u64;
            for _ in 0..m {
                s = (s << 1) | *it.next().expect("length checked") as u64;
            }
            s
        };
        let rhos: Vec<u64> = (0..alpha).map(|_| next_symbol()).collect();
        let hhash = Matrix::from_fn(field, b, alpha, |_, _| next_symbol());
        Ok(HashSecret { rhos, hhash })
    }
}

/// P ∈ F_q^{w×α} with P_{(i,j)} = ρ_j^i, i = 1..w.
pub fn vandermonde(rhos: &[u64], w: usize, field: BaseField) -> Matrix<BaseField> {
    let mut m = Matrix::zeros(field, w, rhos.len());
    for (j, rho) in rhos.iter().enumerate() {
        let mut p = *rho;
        for i in 0..w {
            m.set(i, j, p);
            p = field.mul(&p, rho);
        }
    }
    m
}

/// Draw ρ and compute ℍ = [I_b M]·P. Width w is b + M's column count.
pub fn hash_message(
    message: &Matrix<BaseField>,
    params: &CodeParams,
    rng: &mut dyn RngCore,
) -> Result<HashSecret, EcError> {
    let b = data_rows(params);
    if message.rows() != b {
        return Err(EcError::BadMessageRows { got: message.rows(), want: b });
    }
    let field = params.base_field();
    let rhos: Vec<u64> = (0..alpha(params)).map(|_| field.sample(&mut *rng)).collect();
    let w = b + message.cols();
    let p = vandermonde(&rhos, w, field);
    let xbar = Matrix::identity(field, b).hcat(message);
    let hhash = xbar.matmul(&p);
    Ok(HashSecret { rhos, hhash })
}

/// X = [I_b M; 0 0]: data rows on top, C − b zero rows below.
pub fn encode(message: &Matrix<BaseField>, params: &CodeParams) -> Result<Matrix<BaseField>, EcError> {
    let b = data_rows(params);
    if message.rows() != b {
        return Err(EcError::BadMessageRows { got: message.rows(), want: b });
    }
    let field = params.base_field();
    let xbar = Matrix::identity(field, b).hcat(message);
    let zeros = Matrix::zeros(field, params.c - b, xbar.cols());
    Ok(xbar.vcat(&zeros))
}

/// Distill M from Y using the shared secret: Ȳ = rref(Y), solve U·(ȲP) = ℍ
/// on the nonzero rows of Ȳ, then read M off X̄ = UȲ.
pub fn decode(
    y: &Matrix<BaseField>,
    secret: &HashSecret,
    params: &CodeParams,
) -> Result<Matrix<BaseField>, EcDecodeError> {
    let b = data_rows(params);
    let field = params.base_field();
    let w = y.cols();
    let (ybar, pivots) = y.rref();
    let ytop = ybar.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
    let p = vandermonde(&secret.rhos, w, field);
    let g = ytop.matmul(&p);
    let (u, unique) = match Matrix::solve_left(&g, &secret.hhash) {
        Ok(pair) => pair,
        Err(LinalgError::NoSolution) => return Err(EcDecodeError::NoSolution),
        Err(e) => unreachable!("solve_left on conformable shapes: {e}"),
    };
    if !unique {
        return Err(EcDecodeError::NonUnique);
    }
    let xbar = u.matmul(&ytop);
    if xbar.col_range(0, b) != Matrix::identity(field, b) {
        return Err(EcDecodeError::MalformedRecovery);
    }
    Ok(xbar.col_range(b, w))
}
