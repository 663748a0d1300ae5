//! Arithmetic for GF(2^m) base fields and GF(q^C) extension fields.
//!
//! Base-field elements are stored as polynomial bitmasks (bit i = coefficient
//! of x^i), extension-field elements as length-C coordinate vectors over the
//! base field in the polynomial basis {1, α, ..., α^{C-1}}. The lifting maps
//! `phi` / `phi_inv` read those coordinates off directly, so `phi(1) = (1,0,...,0)`.

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("multiplicative inverse of zero")]
    ZeroInverse,
    #[error("field degree {0} out of supported range 1..=32")]
    BadDegree(u32),
    #[error("modulus 0x{modulus:x} is not a degree-{degree} irreducible polynomial")]
    BadModulus { degree: u32, modulus: u64 },
    #[error("element 0x{0:x} outside the field")]
    NotAnElement(u64),
    #[error("coordinate vector has length {got}, extension degree is {want}")]
    CoordLength { got: usize, want: usize },
}

/// Common surface for the two field levels, so matrix code is generic.
///
/// Characteristic is always 2, so subtraction equals addition throughout.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Number of elements (q or Q = q^C).
    fn size(&self) -> u128;
    /// Element with the given enumeration index in 0..size(); index 0 is
    /// zero, index 1 is one. Used by exhaustive audits.
    fn element(&self, index: u128) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// GF(2) polynomial helpers (bitmask encoding, degree ≤ 63)
// ---------------------------------------------------------------------------

fn gf2_deg(p: u64) -> i32 {
    63 - p.leading_zeros() as i32 // p == 0 gives -1 via the caller's guard
}

fn gf2_mul(a: u64, b: u64) -> u128 {
    let mut acc: u128 = 0;
    let a = a as u128;
    for i in 0..64 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}

fn gf2_rem(mut a: u128, f: u64) -> u64 {
    let df = gf2_deg(f);
    while a != 0 {
        let da = 127 - a.leading_zeros() as i32;
        if da < df {
            break;
        }
        a ^= (f as u128) << (da - df);
    }
    a as u64
}

fn gf2_mulmod(a: u64, b: u64, f: u64) -> u64 {
    gf2_rem(gf2_mul(a, b), f)
}

fn gf2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        if a == 0 {
            return b;
        }
        if gf2_deg(a) < gf2_deg(b) {
            std::mem::swap(&mut a, &mut b);
        } else {
            let shift = gf2_deg(a) - gf2_deg(b);
            a ^= b << shift;
        }
    }
    a
}

/// Irreducibility over GF(2): x^(2^m) ≡ x (mod f) plus the gcd condition for
/// every maximal proper subfield.
fn gf2_irreducible(f: u64, m: u32) -> bool {
    if f & 1 == 0 {
        return false; // divisible by x
    }
    // x^(2^j) mod f by repeated squaring, checking subfield conditions along the way.
    let x = gf2_rem(2, f);
    let mut r = x;
    for j in 1..=m {
        r = gf2_mulmod(r, r, f);
        if j < m && m % j == 0 && (m / j).is_prime_small() {
            // j = m/p for prime p  <=>  p = m/j prime and j | m
            if gf2_gcd(r ^ x, f) != 1 {
                return false;
            }
        }
    }
    r == x
}

trait PrimeSmall {
    fn is_prime_small(self) -> bool;
}
impl PrimeSmall for u32 {
    fn is_prime_small(self) -> bool {
        if self < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= self {
            if self % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Base field GF(2^m)
// ---------------------------------------------------------------------------

/// GF(2^m) with a fixed irreducible modulus. Elements are bitmasks below 2^m.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BaseField {
    m: u32,
    /// Degree-m irreducible polynomial, including the x^m bit.
    modulus: u64,
}

impl BaseField {
    /// GF(2^m) with the lexicographically smallest irreducible modulus of
    /// degree m, found by deterministic search.
    pub fn new(m: u32) -> Result<Self, FieldError> {
        if m == 0 || m > 32 {
            return Err(FieldError::BadDegree(m));
        }
        let lo = 1u64 << m;
        for f in lo + 1..2 * lo {
            if gf2_irreducible(f, m) {
                return Ok(BaseField { m, modulus: f });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    /// GF(2^m) with an explicit modulus bitmask (must include the x^m bit).
    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self, FieldError> {
        if m == 0 || m > 32 {
            return Err(FieldError::BadDegree(m));
        }
        if gf2_deg(modulus) != m as i32 || !gf2_irreducible(modulus, m) {
            return Err(FieldError::BadModulus { degree: m, modulus });
        }
        Ok(BaseField { m, modulus })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// q = 2^m.
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.order()
    }
}

impl Field for BaseField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        a ^ b
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        gf2_rem(gf2_mul(*a, *b), self.modulus)
    }

    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, (self.order() - 2) as u128))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.order())
    }

    fn size(&self) -> u128 {
        self.order() as u128
    }

    fn element(&self, index: u128) -> u64 {
        debug_assert!(index < self.size());
        index as u64
    }
}

// ---------------------------------------------------------------------------
// Extension field GF(q^C)
// ---------------------------------------------------------------------------

/// Coordinate vector over the base field, length = extension degree.
pub type ExtElem = Vec<u64>;

/// GF(q^C) built as F_q[α]/(modulus), modulus the lexicographically smallest
/// irreducible monic polynomial of degree C over F_q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtField {
    base: BaseField,
    degree: usize,
    /// Monic modulus coefficients, length degree + 1, low degree first.
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(base: BaseField, degree: usize) -> Result<Self, FieldError> {
        if degree == 0 {
            return Err(FieldError::BadDegree(0));
        }
        if degree == 1 {
            // F_q itself; modulus x + 1 keeps the representation uniform.
            return Ok(ExtField { base, degree, modulus: vec![1, 1] });
        }
        // Candidates in lexicographic order on (c_{C-1}, ..., c_0).
        let q = base.order();
        let total = (q as u128).pow(degree as u32);
        for idx in 0..total {
            let mut coeffs = vec![0u64; degree + 1];
            coeffs[degree] = 1;
            let mut rest = idx;
            for d in 0..degree {
                coeffs[degree - 1 - d] = (rest / (q as u128).pow((degree - 1 - d) as u32)) as u64;
                rest %= (q as u128).pow((degree - 1 - d) as u32);
            }
            let cand = ExtField { base, degree, modulus: coeffs };
            if cand.modulus[0] != 0 && cand.modulus_irreducible() {
                return Ok(cand);
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The polynomial-basis generator α.
    pub fn alpha(&self) -> ExtElem {
        let mut e = vec![0; self.degree];
        if self.degree == 1 {
            // α reduces to a base element under x + 1
            e[0] = 1;
        } else {
            e[1] = 1;
        }
        e
    }

    /// α^k reduced into the field; the first C of these form the polynomial basis.
    pub fn alpha_pow(&self, k: usize) -> ExtElem {
        self.pow(&self.alpha(), k as u128)
    }

    /// Embed a base-field element as the constant-coordinate element.
    pub fn embed(&self, a: u64) -> ExtElem {
        let mut e = vec![0; self.degree];
        e[0] = a;
        e
    }

    /// Frobenius x ↦ x^q.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        self.pow(a, self.base.order() as u128)
    }

    /// x ↦ x^(q^i).
    pub fn frobenius_iter(&self, a: &ExtElem, i: usize) -> ExtElem {
        let mut r = a.clone();
        for _ in 0..i {
            r = self.frobenius(&r);
        }
        r
    }

    fn modulus_irreducible(&self) -> bool {
        // x^(q^C) ≡ x (mod f), and gcd(x^(q^(C/p)) - x, f) = 1 for prime p | C.
        let d = self.degree;
        let x = self.poly_x();
        let mut r = x.clone();
        for j in 1..=d {
            r = self.poly_pow_q(&r);
            if j < d && d % j == 0 && ((d / j) as u32).is_prime_small() {
                let diff = self.poly_sub(&r, &x);
                if self.poly_gcd_deg(&diff) != 0 {
                    return false;
                }
            }
        }
        r == x
    }

    // -- internal dense-poly arithmetic modulo `modulus` (coeff vecs of length degree) --

    fn poly_x(&self) -> Vec<u64> {
        let mut p = vec![0; self.degree];
        if self.degree == 1 {
            p[0] = 1; // x ≡ 1 mod (x + 1)
        } else {
            p[1] = 1;
        }
        p
    }

    fn poly_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }

    fn poly_mulmod(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree;
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if *bj != 0 {
                    prod[i + j] ^= self.base.mul(ai, bj);
                }
            }
        }
        // Reduce by the monic modulus from the top down.
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (t, f_t) in self.modulus.iter().enumerate().take(d) {
                if *f_t != 0 {
                    prod[k - d + t] ^= self.base.mul(&c, f_t);
                }
            }
        }
        prod.truncate(d);
        prod
    }

    fn poly_pow_q(&self, a: &[u64]) -> Vec<u64> {
        // a^q by m squarings (q = 2^m).
        let mut r = a.to_vec();
        for _ in 0..self.base.m() {
            r = self.poly_mulmod(&r, &r);
        }
        r
    }

    fn poly_gcd_deg(&self, a: &[u64]) -> usize {
        // deg gcd(a, modulus); only the degree is needed by the irreducibility test.
        let mut f: Vec<u64> = self.modulus.clone();
        let mut g: Vec<u64> = a.to_vec();
        loop {
            let dg = match poly_deg(&g) {
                None => return poly_deg(&f).unwrap_or(0),
                Some(d) => d,
            };
            let df = match poly_deg(&f) {
                None => return dg,
                Some(d) => d,
            };
            if df < dg {
                std::mem::swap(&mut f, &mut g);
                continue;
            }
            // f -= lead(f)/lead(g) * x^(df-dg) * g
            let coef = self
                .base
                .mul(&f[df], &self.base.inv(&g[dg]).expect("nonzero lead"));
            let shift = df - dg;
            for (t, gt) in g.iter().enumerate() {
                if *gt != 0 {
                    f[t + shift] ^= self.base.mul(&coef, gt);
                }
            }
        }
    }
}

fn poly_deg(p: &[u64]) -> Option<usize> {
    p.iter().rposition(|c| *c != 0)
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        vec![0; self.degree]
    }

    fn one(&self) -> ExtElem {
        self.embed(1)
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|c| *c == 0)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        debug_assert_eq!(a.len(), self.degree);
        debug_assert_eq!(b.len(), self.degree);
        a.iter().zip(b).map(|(x, y)| x ^ y).collect()
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.poly_mulmod(a, b)
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        (0..self.degree).map(|_| self.base.sample(rng)).collect()
    }

    fn size(&self) -> u128 {
        (self.base.order() as u128).pow(self.degree as u32)
    }

    fn element(&self, mut index: u128) -> ExtElem {
        debug_assert!(index < self.size());
        let q = self.base.order() as u128;
        let mut e = vec![0u64; self.degree];
        for c in e.iter_mut() {
            *c = (index % q) as u64;
            index /= q;
        }
        e
    }
}

/// φ: F_Q → F_q^{1×C}, the polynomial-basis coordinate map.
pub fn phi(x: &ExtElem) -> Vec<u64> {
    x.clone()
}

/// φ⁻¹ back from a length-C coordinate row.
pub fn phi_inv(row: &[u64], ext: &ExtField) -> Result<ExtElem, FieldError> {
    if row.len() != ext.degree() {
        return Err(FieldError::CoordLength { got: row.len(), want: ext.degree() });
    }
    Ok(row.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_moduli_match_known_tables() {
        // Standard lexicographically-smallest irreducibles.
        assert_eq!(BaseField::new(1).unwrap().modulus(), 0b11);
        assert_eq!(BaseField::new(2).unwrap().modulus(), 0b111);
        assert_eq!(BaseField::new(3).unwrap().modulus(), 0b1011);
        assert_eq!(BaseField::new(4).unwrap().modulus(), 0b10011);
        assert_eq!(BaseField::new(8).unwrap().modulus(), 0x11b);
    }

    #[test]
    fn gf2_add_is_xor() {
        let f = BaseField::new(1).unwrap();
        assert_eq!(f.add(&1, &1), 0);
    }

    #[test]
    fn gf4_alpha_squared() {
        // GF(4), modulus x^2 + x + 1: α·α = α + 1.
        let f = BaseField::with_modulus(2, 0b111).unwrap();
        assert_eq!(f.mul(&0b10, &0b10), 0b11);
    }

    #[test]
    fn gf16_inverses_exhaustive() {
        let f = BaseField::new(4).unwrap();
        for a in 1..16u64 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1, "a = {a}");
        }
        assert!(f.inv(&0).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_gf16() {
        let f = BaseField::new(4).unwrap();
        for a in 0..16u64 {
            for b in 0..16u64 {
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                for c in 0..16u64 {
                    assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
                    assert_eq!(
                        f.mul(&a, &f.add(&b, &c)),
                        f.add(&f.mul(&a, &b), &f.mul(&a, &c))
                    );
                }
            }
        }
    }

    #[test]
    fn ext_field_axioms_exhaustive_q2_c3() {
        // GF(8) as a degree-3 extension of GF(2): all 8 elements.
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        assert_eq!(ext.size(), 8);
        let elems: Vec<_> = (0..8).map(|i| ext.element(i)).collect();
        for a in &elems {
            if !ext.is_zero(a) {
                let ai = ext.inv(a).unwrap();
                assert_eq!(ext.mul(a, &ai), ext.one());
            }
            for b in &elems {
                assert_eq!(ext.mul(a, b), ext.mul(b, a));
                for c in &elems {
                    assert_eq!(ext.mul(a, &ext.mul(b, c)), ext.mul(&ext.mul(a, b), c));
                    assert_eq!(
                        ext.mul(a, &ext.add(b, c)),
                        ext.add(&ext.mul(a, b), &ext.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn ext_field_axioms_exhaustive_q4_ext_to_4096() {
        // Q = 4096 = 4^6 is the spec's exhaustiveness ceiling; spot the group laws
        // on a smaller but non-prime base: GF(4)^3 = GF(64).
        let base = BaseField::new(2).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        assert_eq!(ext.size(), 64);
        for i in 1..64 {
            let a = ext.element(i);
            assert_eq!(ext.mul(&a, &ext.inv(&a).unwrap()), ext.one());
        }
    }

    #[test]
    fn phi_basis_convention() {
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        assert_eq!(phi(&ext.zero()), vec![0, 0, 0]);
        assert_eq!(phi(&ext.one()), vec![1, 0, 0]);
    }

    #[test]
    fn phi_roundtrip_exhaustive_q8() {
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        for i in 0..8 {
            let x = ext.element(i);
            assert_eq!(phi_inv(&phi(&x), &ext).unwrap(), x);
        }
        assert!(phi_inv(&[0, 0], &ext).is_err());
    }

    #[test]
    fn phi_is_linear_over_base_scalars() {
        // q = 2, C = 3: exhaustive.
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let (x, y) = (ext.element(i), ext.element(j));
                let lhs = phi(&ext.add(&x, &y));
                let rhs: Vec<u64> = phi(&x).iter().zip(phi(&y)).map(|(a, b)| a ^ b).collect();
                assert_eq!(lhs, rhs);
            }
            for c in 0..2u64 {
                let x = ext.element(i);
                let cx = ext.mul(&ext.embed(c), &x);
                let scaled: Vec<u64> = phi(&x).iter().map(|a| base.mul(a, &c)).collect();
                assert_eq!(phi(&cx), scaled);
            }
        }
    }

    #[test]
    fn frobenius_is_additive_q8() {
        let base = BaseField::new(1).unwrap();
        let ext = ExtField::new(base, 3).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let (a, b) = (ext.element(i), ext.element(j));
                assert_eq!(
                    ext.frobenius(&ext.add(&a, &b)),
                    ext.add(&ext.frobenius(&a), &ext.frobenius(&b))
                );
            }
        }
    }

    #[test]
    fn large_base_field_mul_inv() {
        let f = BaseField::new(32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = f.sample(&mut rng);
            if a == 0 {
                continue;
            }
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn explicit_modulus_rejects_reducible() {
        // x^4 + 1 = (x+1)^4 over GF(2).
        assert!(BaseField::with_modulus(4, 0b10001).is_err());
    }
}
