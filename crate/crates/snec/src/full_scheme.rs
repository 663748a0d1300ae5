//! Composed scheme: secret and reliable rate C − Z_O − Z_I with no shared
//! secret, for C > Z_I + Z_O.
//!
//! One codeword spends its columns three ways behind a common I_C header:
//! k single-secret-bit blocks smuggle the k = α(b+1)·log₂q bits of an
//! error-control hash secret to the receiver, and the remaining n' ext
//! columns carry the coset-coded message protected by that secret. The
//! message itself is wrapped in a [b, Z_I] coset code so the Z_I-row wiretap
//! view stays independent of it.

use rand::RngCore;
use thiserror::Error;

use crate::channel::CodeParams;
use crate::error_control::{self, EcDecodeError, EcError, HashSecret};
use crate::fields::{BaseField, ExtField};
use crate::linalg::{phi_mn, phi_mn_inv, Matrix};
use crate::rank_codes::{CodebookError, SecrecyCodebook};
use crate::secret_bit::{self, SecretBitError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FullSchemeError {
    #[error("scheme requires C > Z_I + Z_O")]
    Infeasible,
    #[error("n = {n} must be a multiple of C = {c}")]
    NotColumnAligned { n: usize, c: usize },
    #[error("n = {n} leaves no room for the message: need n/C ≥ {min_blocks}")]
    TooShort { n: usize, min_blocks: usize },
    #[error("message must be {rows}×{cols} over GF(q^C), got {got_rows}×{got_cols}")]
    BadMessageShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error(transparent)]
    Codebook(#[from] CodebookError),
}

/// Which stage of the layered decode gave up.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FullDecodeError {
    #[error("received matrix must be C×n")]
    BadShape,
    #[error("secret-bit block {index}: {source}")]
    Bit { index: usize, source: SecretBitError },
    #[error("hash secret unpack: {0}")]
    HashUnpack(#[from] EcError),
    #[error("error-control layer: {0}")]
    ErrorControl(#[from] EcDecodeError),
}

/// Column budget of one codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullCodeLayout {
    /// b = C − Z_O.
    pub b: usize,
    /// Message rows R = C − Z_O − Z_I.
    pub r_rows: usize,
    /// C' = C − Z_I.
    pub cp: usize,
    /// α = bC + 1.
    pub alpha: usize,
    /// Secret length in bits.
    pub k_bits: usize,
    /// Message width in ext columns.
    pub n_prime: usize,
    /// Error-control width w = b + n'C.
    pub w: usize,
}

impl FullCodeLayout {
    pub fn new(params: &CodeParams) -> Result<Self, FullSchemeError> {
        if !params.secret_bit_feasible() {
            return Err(FullSchemeError::Infeasible);
        }
        let c = params.c;
        if params.n % c != 0 {
            return Err(FullSchemeError::NotColumnAligned { n: params.n, c });
        }
        let b = c - params.z_o;
        let cp = c - params.z_i;
        let alpha = b * c + 1;
        let k_bits = alpha * (b + 1) * params.m as usize;
        let min_blocks = 1 + k_bits * cp + 1;
        let blocks = params.n / c;
        if blocks < min_blocks {
            return Err(FullSchemeError::TooShort { n: params.n, min_blocks });
        }
        let n_prime = blocks - 1 - k_bits * cp;
        Ok(FullCodeLayout {
            b,
            r_rows: c - params.z_o - params.z_i,
            cp,
            alpha,
            k_bits,
            n_prime,
            w: b + n_prime * c,
        })
    }

    /// Net rate as the exact fraction (message base symbols per column,
    /// i.e. R·n'·C / n) plus its float value.
    pub fn rate(&self, params: &CodeParams) -> (u64, u64, f64) {
        let num = (self.r_rows * self.n_prime * params.c) as u64;
        let den = params.n as u64;
        (num, den, num as f64 / den as f64)
    }

    /// Gross rate R, the exact net rate R·n'C/n, and the loss R − net
    /// (which vanishes as n grows at fixed q).
    pub fn rate_report(&self, params: &CodeParams) -> RateReport {
        let (net_num, net_den, net_rate) = self.rate(params);
        let gross = self.r_rows as u64;
        RateReport {
            gross_rate: gross,
            net_num,
            net_den,
            net_rate,
            loss_num: gross * net_den - net_num,
            loss_den: net_den,
        }
    }
}

/// Exact rational rate accounting for one layout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateReport {
    pub gross_rate: u64,
    pub net_num: u64,
    pub net_den: u64,
    pub net_rate: f64,
    pub loss_num: u64,
    pub loss_den: u64,
}

pub struct FullScheme {
    pub params: CodeParams,
    pub layout: FullCodeLayout,
    /// [C, Z_I] codebook for the secret-bit blocks.
    pub cb_bits: SecrecyCodebook,
    /// [b, Z_I] codebook wrapping the message.
    pub cb_msg: SecrecyCodebook,
}

impl FullScheme {
    pub fn new(params: CodeParams) -> Result<Self, FullSchemeError> {
        let layout = FullCodeLayout::new(&params)?;
        let ext = params.ext_field();
        let cb_bits = SecrecyCodebook::build(params.c, params.z_i, &ext)?;
        let cb_msg = SecrecyCodebook::build(layout.b, params.z_i, &ext)?;
        Ok(FullScheme { params, layout, cb_bits, cb_msg })
    }

    fn bit_block(&self, i: usize) -> (usize, usize) {
        let c = self.params.c;
        let width = c * self.layout.cp;
        let lo = c + i * width;
        (lo, lo + width)
    }

    fn payload_start(&self) -> usize {
        self.params.c * (1 + self.layout.k_bits * self.layout.cp)
    }

    /// The columns the i-th secret-bit decoder looks at: header plus block i.
    fn bit_view(&self, y: &Matrix<BaseField>) -> impl Fn(usize) -> Matrix<BaseField> + '_ {
        let header = y.col_range(0, self.params.c);
        let y = y.clone();
        move |i| {
            let (lo, hi) = self.bit_block(i);
            header.hcat(&y.col_range(lo, hi))
        }
    }
}

/// A codeword plus the internals tests need.
#[derive(Clone, Debug)]
pub struct FullEncoding {
    pub x: Matrix<BaseField>,
    pub secret: HashSecret,
    pub bits: Vec<bool>,
    /// The coset-coded message T₀[S; N], b×n' over GF(q^C).
    pub m_ext: Matrix<ExtField>,
}

pub fn encode(
    s_msg: &Matrix<ExtField>,
    scheme: &FullScheme,
    rng: &mut dyn RngCore,
) -> Result<FullEncoding, FullSchemeError> {
    let lay = &scheme.layout;
    let params = &scheme.params;
    if s_msg.rows() != lay.r_rows || s_msg.cols() != lay.n_prime {
        return Err(FullSchemeError::BadMessageShape {
            rows: lay.r_rows,
            cols: lay.n_prime,
            got_rows: s_msg.rows(),
            got_cols: s_msg.cols(),
        });
    }
    let ext = scheme.cb_msg.ext().clone();
    let field = params.base_field();

    // Message layer: coset-code S, then hash the flat b×n'C image.
    let noise = Matrix::random(ext.clone(), params.z_i, lay.n_prime, rng);
    let m_ext = scheme.cb_msg.t().matmul(&s_msg.vcat(&noise));
    let m_flat = phi_mn(&m_ext);
    let secret = error_control::hash_message(&m_flat, params, rng)
        .expect("b data rows by construction");
    let bits = secret.to_bits(params.m);
    debug_assert_eq!(bits.len(), lay.k_bits);

    // Bit blocks: coset codewords with S = 0 or uniform, sharing the header.
    let mut x = Matrix::zeros(field, params.c, params.n);
    let paste = |dst: &mut Matrix<BaseField>, src: &Matrix<BaseField>, at: usize| {
        for i in 0..src.rows() {
            for j in 0..src.cols() {
                dst.set(i, at + j, src.get(i, j).clone());
            }
        }
    };
    paste(&mut x, &Matrix::identity(field, params.c), 0);
    let block_width = params.c * lay.cp;
    for (i, &bit) in bits.iter().enumerate() {
        // Bit 1 uses a full-rank S: the coset code makes the wiretap view
        // independent of S either way, and a nonsingular S means a clean
        // channel can never flip a 1 into a 0.
        let s = if bit {
            Matrix::random_nonsingular(ext.clone(), lay.cp, &mut *rng)
        } else {
            Matrix::zeros(ext.clone(), lay.cp, lay.cp)
        };
        let n_bit = Matrix::random(ext.clone(), params.z_i, lay.cp, &mut *rng);
        let block = scheme.cb_bits.t().matmul(&s.vcat(&n_bit));
        paste(&mut x, &phi_mn(&block), params.c + i * block_width);
    }

    // Payload: [M; 0] padded to C rows.
    let pad = Matrix::zeros(ext, params.c - lay.b, lay.n_prime);
    paste(&mut x, &phi_mn(&m_ext.vcat(&pad)), params.c * (1 + lay.k_bits * lay.cp));
    Ok(FullEncoding { x, secret, bits, m_ext })
}

/// Peel the layers in order: bits → hash secret → error control → coset
/// decode. Every failure names its stage; a silently wrong bit surfaces as
/// an error-control failure downstream.
pub fn decode(
    y: &Matrix<BaseField>,
    scheme: &FullScheme,
) -> Result<Matrix<ExtField>, FullDecodeError> {
    let params = &scheme.params;
    let lay = &scheme.layout;
    if y.rows() != params.c || y.cols() != params.n {
        return Err(FullDecodeError::BadShape);
    }
    let view = scheme.bit_view(y);
    let mut bits = Vec::with_capacity(lay.k_bits);
    for i in 0..lay.k_bits {
        match secret_bit::decode(&view(i), &scheme.cb_bits) {
            Ok(bit) => bits.push(bit),
            Err(source) => return Err(FullDecodeError::Bit { index: i, source }),
        }
    }
    let secret = HashSecret::from_bits(&bits, lay.b, lay.alpha, params.base_field())?;

    let ec_cols: Vec<usize> = (0..lay.b).chain(scheme.payload_start()..params.n).collect();
    let m_flat = error_control::decode(&y.select_cols(&ec_cols), &secret, params)?;
    let m_ext = phi_mn_inv(&m_flat, scheme.cb_msg.ext()).expect("width n'C by construction");
    Ok(scheme.cb_msg.h().matmul(&m_ext))
}
