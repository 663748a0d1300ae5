//! One-shot channel model Y = AX + Z with wiretap W = BX.
//!
//! The network is abstracted to its transfer matrices: A is a uniformly
//! random nonsingular C×C matrix (rejection sampled), B is the adversary's
//! observation map, and Z is the injected error with rank(Z) ≤ Z_O. The
//! error generator only ever sees W, which is the causality contract: the
//! adversary may react to its observation but not to Alice's private
//! randomness.

use rand::RngCore;
use thiserror::Error;

use crate::fields::{BaseField, ExtField, FieldError};
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("X must be {c}x{n}, got {rows}x{cols}")]
    BadShape { c: usize, n: usize, rows: usize, cols: usize },
    #[error("cut attack needs Z_O + Z_I <= C")]
    InfeasibleCut,
    #[error("adversary contract violated: injected error has rank {rank} > Z_O = {z_o}")]
    ContractViolation { rank: usize, z_o: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Channel and code parameter bundle (C, Z_I, Z_O, q = 2^m, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub c: usize,
    pub z_i: usize,
    pub z_o: usize,
    /// Base field is GF(2^m).
    pub m: u32,
    /// Packet length in base-field symbols.
    pub n: usize,
}

impl CodeParams {
    pub fn new(c: usize, z_i: usize, z_o: usize, m: u32, n: usize) -> Result<Self, ChannelError> {
        if c == 0 {
            return Err(ChannelError::BadParams("C must be positive".into()));
        }
        if n < c {
            return Err(ChannelError::BadParams(format!("n = {n} < C = {c}")));
        }
        if m == 0 || m > 32 {
            return Err(ChannelError::BadParams(format!("q = 2^{m} out of range")));
        }
        Ok(CodeParams { c, z_i, z_o, m, n })
    }

    pub fn q(&self) -> u64 {
        1u64 << self.m
    }

    pub fn base_field(&self) -> BaseField {
        BaseField::new(self.m).expect("m validated at construction")
    }

    /// GF(q^C).
    pub fn ext_field(&self) -> ExtField {
        ExtField::new(self.base_field(), self.c).expect("degree validated at construction")
    }

    /// Q = q^C.
    pub fn ext_size(&self) -> u128 {
        (self.q() as u128).pow(self.c as u32)
    }

    /// Theorem regime for the single-bit scheme: C > Z_I + Z_O.
    pub fn secret_bit_feasible(&self) -> bool {
        self.c > self.z_i + self.z_o
    }

    /// C − Z_O − Z_I ≥ 1, the full scheme carries at least one symbol row.
    pub fn positive_rate(&self) -> bool {
        self.c >= self.z_o + self.z_i + 1
    }
}

/// (A, B, Z) for one channel use.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    pub a: Matrix<BaseField>,
    pub b: Matrix<BaseField>,
    pub z: Matrix<BaseField>,
}

/// Error generator for observation-dependent adversaries: receives W and the
/// public parameters, returns Z (C×n, rank ≤ Z_O enforced by `transmit`).
pub type ErrorGenerator =
    Box<dyn Fn(&Matrix<BaseField>, &CodeParams, &mut dyn RngCore) -> Matrix<BaseField>>;

pub enum AdversaryStrategy {
    /// No injected error; eavesdropping only.
    None,
    /// Uniform rank-bounded error, observation-independent; B uniform.
    RandomJam,
    /// The converse attack: jam rows 0..Z_O of the received flow with uniform
    /// packets, eavesdrop the (disjoint) rows Z_O..Z_O+Z_I, i.e. B is those
    /// rows of A.
    CutAttack,
    /// Arbitrary W-dependent generator, jamming rows 0..Z_O like the cut
    /// attack and eavesdropping the same disjoint rows.
    Custom(ErrorGenerator),
}

impl AdversaryStrategy {
    fn eavesdrops_cut_rows(&self) -> bool {
        !matches!(self, AdversaryStrategy::None | AdversaryStrategy::RandomJam)
    }
}

/// One channel use: sample A (nonsingular) and B, compute W = BX first, then
/// Z from the strategy, then Y = AX + Z.
pub fn transmit(
    x: &Matrix<BaseField>,
    params: &CodeParams,
    strategy: &AdversaryStrategy,
    rng: &mut dyn RngCore,
) -> Result<(Matrix<BaseField>, Matrix<BaseField>, ChannelRealization), ChannelError> {
    let (c, n) = (params.c, params.n);
    if x.rows() != c || x.cols() != n {
        return Err(ChannelError::BadShape { c, n, rows: x.rows(), cols: x.cols() });
    }
    let field = params.base_field();
    let a = Matrix::random_nonsingular(field, c, rng);

    let b = if strategy.eavesdrops_cut_rows() {
        if params.z_o + params.z_i > c {
            return Err(ChannelError::InfeasibleCut);
        }
        a.select_rows(&(params.z_o..params.z_o + params.z_i).collect::<Vec<_>>())
    } else {
        Matrix::random(field, params.z_i, c, rng)
    };
    let w = b.matmul(x);

    let z = match strategy {
        AdversaryStrategy::None => Matrix::zeros(field, c, n),
        AdversaryStrategy::RandomJam => {
            Matrix::random_rank_bounded(field, c, n, params.z_o, rng)
        }
        AdversaryStrategy::CutAttack => {
            let mut z = Matrix::zeros(field, c, n);
            for i in 0..params.z_o {
                for j in 0..n {
                    use crate::fields::Field;
                    let e = field.sample(&mut *rng);
                    z.set(i, j, e);
                }
            }
            z
        }
        AdversaryStrategy::Custom(gen) => {
            let z = gen(&w, params, rng);
            if z.rows() != c || z.cols() != n {
                return Err(ChannelError::BadShape { c, n, rows: z.rows(), cols: z.cols() });
            }
            let rank = z.rank();
            if rank > params.z_o {
                return Err(ChannelError::ContractViolation { rank, z_o: params.z_o });
            }
            z
        }
    };

    let y = a.matmul(x).add(&z);
    Ok((y, w, ChannelRealization { a, b, z }))
}
