//! Arithmetic in prime fields `F_p` with `p` a 30- or 31-bit prime.
//!
//! All exact counting in this crate happens over such a field. Elements are
//! stored as canonical `u32` representatives; products are formed in `u64`,
//! which cannot overflow since `(p - 1)^2 < 2^62`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("{0} is not a prime in the supported range [2^29, 2^31)")]
    BadModulus(u64),
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime modulus of 30 or 31 bits, `2^29 <= p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !((1 << 29)..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Uniformly samples a prime of exactly `bits` bits (30 or 31).
pub fn random_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> PrimeModulus {
    assert!((30..=31).contains(&bits), "prime bit length must be 30 or 31");
    let (lo, hi) = (1u64 << (bits - 1), 1u64 << bits);
    loop {
        let candidate = rng.gen_range(lo..hi) | 1;
        if is_prime(candidate) {
            return PrimeModulus(candidate);
        }
    }
}

/// Canonical representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_p` as an arithmetic context for [`FieldElement`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(modulus: PrimeModulus) -> Self {
        PrimeField { p: modulus.0 }
    }

    /// Field over an arbitrary prime; used by small-prime brute-force checks.
    pub fn with_small_prime(p: u64) -> Result<Self, FieldError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn element(self, v: u64) -> FieldElement {
        FieldElement((v % self.p) as u32)
    }

    pub fn from_i64(self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn to_i64(self, x: FieldElement) -> i64 {
        let v = x.0 as i64;
        if v > (self.p as i64) / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn add(self, x: FieldElement, y: FieldElement) -> FieldElement {
        let s = x.0 as u64 + y.0 as u64;
        FieldElement(if s >= self.p { s - self.p } else { s } as u32)
    }

    #[inline]
    pub fn sub(self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 >= y.0 {
            FieldElement(x.0 - y.0)
        } else {
            FieldElement((x.0 as u64 + self.p - y.0 as u64) as u32)
        }
    }

    #[inline]
    pub fn neg(self, x: FieldElement) -> FieldElement {
        if x.0 == 0 {
            x
        } else {
            FieldElement((self.p - x.0 as u64) as u32)
        }
    }

    #[inline]
    pub fn mul(self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(((x.0 as u64 * y.0 as u64) % self.p) as u32)
    }

    pub fn pow(self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        let (mut r0, mut r1) = (self.p as i64, x.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(t0))
    }

    pub fn div(self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.p) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.p) as u32)
    }
}
