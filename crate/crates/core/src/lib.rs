//! Characteristic numbers, chromatic polynomials and relative chromatic
//! polynomials of tensors `T in C^a (x) C^n (x) C^n`, computed by counting the
//! solutions of generic zero-dimensional polynomial systems over random
//! prime fields.
//!
//! The tensor is viewed through its contraction, the span of its `n x n`
//! slices. Every invariant is a count of invertible matrices in that span
//! cut out by generic linear conditions on minors; counts are taken as the
//! number of standard monomials of a Groebner basis and certified by
//! agreement across independent primes and coefficient draws.

pub mod field;
pub mod groebner;
pub mod poly;
pub mod rng;
pub mod linalg;
pub mod tensor;
pub mod invariants;
pub mod constructors;
pub mod oracles;
pub mod format;
