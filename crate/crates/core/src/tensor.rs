//! Tensors `T in C^a (x) C^n (x) C^n`, their contraction spaces over `F_p`,
//! matrix pencils `M(x) = sum_j x_j B_j`, and the symbolic minors, cofactors
//! and gradient components built from a pencil.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElement, PrimeField, PrimeModulus};
use crate::linalg::{exact_rank, independent_rows, FpMatrix};
use crate::poly::{MultiPoly, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("empty contraction: every slice vanishes")]
    EmptyContraction,
    #[error("tensor needs at least one slice")]
    NoSlices,
    #[error("matrix size must be at least 1, got {0}")]
    TooSmall(usize),
    #[error("slice {slice} has {found} entries, expected {expected}")]
    Ragged { slice: usize, found: usize, expected: usize },
    #[error("slices are not linearly independent over F_p")]
    DependentBasis,
}

/// A tensor given by its `a` integer slices of size `n x n` (row-major).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    n: usize,
    slices: Vec<Vec<i64>>,
}

impl Tensor {
    pub fn new(n: usize, slices: Vec<Vec<i64>>) -> Result<Self, TensorError> {
        if n == 0 {
            return Err(TensorError::TooSmall(n));
        }
        if slices.is_empty() {
            return Err(TensorError::NoSlices);
        }
        for (k, s) in slices.iter().enumerate() {
            if s.len() != n * n {
                return Err(TensorError::Ragged { slice: k, found: s.len(), expected: n * n });
            }
        }
        if slices.iter().all(|s| s.iter().all(|&v| v == 0)) {
            return Err(TensorError::EmptyContraction);
        }
        Ok(Tensor { n, slices })
    }

    /// Slices given as nested rows.
    pub fn from_matrices(matrices: &[Vec<Vec<i64>>]) -> Result<Self, TensorError> {
        let n = matrices.first().map_or(0, Vec::len);
        let mut slices = Vec::with_capacity(matrices.len());
        for (k, m) in matrices.iter().enumerate() {
            if m.len() != n {
                return Err(TensorError::Ragged { slice: k, found: m.len() * n, expected: n * n });
            }
            let mut flat = Vec::with_capacity(n * n);
            for row in m {
                if row.len() != n {
                    return Err(TensorError::Ragged { slice: k, found: row.len() * n, expected: n * n });
                }
                flat.extend_from_slice(row);
            }
            slices.push(flat);
        }
        Self::new(n, slices)
    }

    pub fn a(&self) -> usize {
        self.slices.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slices(&self) -> &[Vec<i64>] {
        &self.slices
    }

    pub fn entry(&self, slice: usize, row: usize, col: usize) -> i64 {
        self.slices[slice][row * self.n + col]
    }

    /// `dim C^a(T)` over the rationals.
    pub fn contraction_dim(&self) -> usize {
        exact_rank(&self.slices)
    }

    /// Indices of the slices kept as a basis of the contraction: the first
    /// maximal independent subset in slice order.
    pub fn basis_slices(&self) -> Vec<usize> {
        independent_rows(&self.slices)
    }
}

/// The contraction `C^a(T)` reduced modulo a prime, with a basis
/// `B_0, ..., B_d` of independent slices.
#[derive(Debug, Clone)]
pub struct ContractionSpace {
    field: PrimeField,
    n: usize,
    basis: Vec<FpMatrix>,
}

impl ContractionSpace {
    /// Reduces the rationally independent slices of `tensor` modulo `p`.
    /// Fails when the prime collapses the dimension.
    pub fn contract(tensor: &Tensor, p: PrimeModulus) -> Result<Self, TensorError> {
        let field = PrimeField::new(p);
        let n = tensor.n();
        let basis: Vec<FpMatrix> = tensor
            .basis_slices()
            .into_iter()
            .map(|k| FpMatrix::from_i64(field, n, n, &tensor.slices()[k]))
            .collect();
        if basis.is_empty() {
            return Err(TensorError::EmptyContraction);
        }
        Self::from_matrices(field, n, basis)
    }

    /// A space spanned by given `F_p` matrices, which must be independent.
    pub fn from_matrices(field: PrimeField, n: usize, basis: Vec<FpMatrix>) -> Result<Self, TensorError> {
        if basis.is_empty() {
            return Err(TensorError::EmptyContraction);
        }
        let mut flat = FpMatrix::zeros(field, basis.len(), n * n);
        for (i, b) in basis.iter().enumerate() {
            assert_eq!((b.rows(), b.cols()), (n, n));
            for (j, &v) in b.entries().iter().enumerate() {
                flat.set(i, j, v);
            }
        }
        if flat.rank() < basis.len() {
            return Err(TensorError::DependentBasis);
        }
        Ok(ContractionSpace { field, n, basis })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Projective dimension `d = dim C^a(T) - 1`.
    pub fn d(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self) -> &[FpMatrix] {
        &self.basis
    }

    pub fn member(&self, coeffs: &[FieldElement]) -> FpMatrix {
        FpMatrix::linear_combination(coeffs, &self.basis)
    }

    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> FpMatrix {
        let coeffs: Vec<FieldElement> = (0..self.basis.len()).map(|_| self.field.random(rng)).collect();
        self.member(&coeffs)
    }

    /// `M(x) = sum_j x_j B_j` in variables `x_0..x_d`, inside a ring with
    /// `ring_vars` variables.
    pub fn pencil(&self, ring_vars: usize) -> Pencil {
        Pencil::linear(self.field, self.n, None, &self.basis, ring_vars)
    }
}

/// True as soon as a random member of `space` has rank at least `n - 2`;
/// false after `trials` failed draws.
pub fn check_rank_precondition<R: Rng + ?Sized>(space: &ContractionSpace, trials: usize, rng: &mut R) -> bool {
    let need = space.n().saturating_sub(2);
    (0..trials.max(1)).any(|_| space.random_member(rng).rank() >= need)
}

/// An `n x n` matrix of polynomials of degree at most one.
#[derive(Debug, Clone)]
pub struct Pencil {
    field: PrimeField,
    n: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl Pencil {
    /// `constant + sum_k y_k directions[k]` in a ring of `ring_vars` variables.
    pub fn linear(
        field: PrimeField,
        n: usize,
        constant: Option<&FpMatrix>,
        directions: &[FpMatrix],
        ring_vars: usize,
    ) -> Pencil {
        assert!(directions.len() <= ring_vars && ring_vars <= MAX_VARS);
        let entries = (0..n * n)
            .map(|idx| {
                let (r, c) = (idx / n, idx % n);
                let coeffs: Vec<FieldElement> = directions.iter().map(|b| b.get(r, c)).collect();
                let k = constant.map_or(FieldElement::ZERO, |m| m.get(r, c));
                MultiPoly::linear(field, ring_vars, &coeffs, k)
            })
            .collect();
        Pencil { field, n, nvars: ring_vars, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn entry(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.n + c]
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.field, self.n, self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m.set(r, c, self.entry(r, c).evaluate(point));
            }
        }
        m
    }

    pub fn minor_table(&self) -> MinorTable<'_> {
        MinorTable { pencil: self, memo: HashMap::new() }
    }

    /// All `i x i` minors, row subsets outermost, both in lexicographic order.
    pub fn minors(&self, size: usize) -> Vec<MultiPoly> {
        assert!(size >= 1 && size <= self.n, "minor size out of range");
        let subsets = subsets_of_size(self.n, size);
        let mut table = self.minor_table();
        let mut out = Vec::with_capacity(subsets.len() * subsets.len());
        for &rows in &subsets {
            for &cols in &subsets {
                out.push(table.minor(rows, cols));
            }
        }
        out
    }

    pub fn determinant(&self) -> MultiPoly {
        let full = (1u32 << self.n) - 1;
        self.minor_table().minor(full, full)
    }

    /// Signed cofactors `C_kl = (-1)^(k+l) det(M without row k, column l)`,
    /// row-major.
    pub fn cofactors(&self) -> Vec<MultiPoly> {
        let mut table = self.minor_table();
        cofactors_from(&mut table)
    }

    /// `sum_{kl} D_kl C_kl(M)` for each direction `D`: the derivative of
    /// `det M` along `D`.
    pub fn directional_derivatives(&self, directions: &[FpMatrix]) -> Vec<MultiPoly> {
        let cof = self.cofactors();
        directions.iter().map(|d| pair_with(d, &cof, self.field, self.nvars)).collect()
    }
}

fn cofactors_from(table: &mut MinorTable<'_>) -> Vec<MultiPoly> {
    let n = table.pencil.n;
    let full = (1u32 << n) - 1;
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            let m = table.minor(full & !(1 << k), full & !(1 << l));
            out.push(if (k + l) % 2 == 0 { m } else { m.neg() });
        }
    }
    out
}

/// `sum_{kl} weights_kl * polys_kl`.
pub fn pair_with(weights: &FpMatrix, polys: &[MultiPoly], field: PrimeField, nvars: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(field, nvars);
    for (w, p) in weights.entries().iter().zip(polys) {
        if !w.is_zero() {
            acc = acc.add(&p.scale(*w));
        }
    }
    acc
}

/// Gradient of `x -> det(sum_j x_j B_j)`: component `j` is the derivative
/// of the determinant along `B_j`, computed from the cofactors of `pencil`.
pub fn gradient_components(pencil: &Pencil, space: &ContractionSpace) -> Vec<MultiPoly> {
    pencil.directional_derivatives(space.basis())
}

pub fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..(1 << n)).filter(|s| s.count_ones() as usize == k).collect();
    // lexicographic on the sorted element lists
    out.sort_by_key(|&s| (0..n).filter(|&i| s & (1 << i) != 0).collect::<Vec<_>>());
    out
}

/// Minors of a pencil by Laplace expansion along the first row, memoized on
/// (row subset, column subset).
pub struct MinorTable<'a> {
    pencil: &'a Pencil,
    memo: HashMap<(u32, u32), MultiPoly>,
}

impl MinorTable<'_> {
    pub fn minor(&mut self, rows: u32, cols: u32) -> MultiPoly {
        debug_assert_eq!(rows.count_ones(), cols.count_ones());
        if rows == 0 {
            return MultiPoly::one(self.pencil.field, self.pencil.nvars);
        }
        if let Some(m) = self.memo.get(&(rows, cols)) {
            return m.clone();
        }
        let r0 = rows.trailing_zeros() as usize;
        let rest = rows & (rows - 1);
        let mut acc = MultiPoly::zero(self.pencil.field, self.pencil.nvars);
        let mut position = 0;
        for c in 0..self.pencil.n {
            if cols & (1 << c) == 0 {
                continue;
            }
            let e = self.pencil.entry(r0, c);
            if !e.is_zero() {
                let sub = self.minor(rest, cols & !(1 << c));
                if !sub.is_zero() {
                    let t = e.mul(&sub);
                    acc = if position % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            position += 1;
        }
        self.memo.insert((rows, cols), acc.clone());
        acc
    }

    pub fn cofactors(&mut self) -> Vec<MultiPoly> {
        cofactors_from(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::with_small_prime(2_147_483_647).unwrap()
    }

    fn modulus() -> PrimeModulus {
        PrimeModulus::new(2_147_483_647).unwrap()
    }

    fn diag(n: usize, d: &[i64]) -> Vec<i64> {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = d[i];
        }
        m
    }

    fn unit(n: usize, entries: &[(usize, usize)]) -> Vec<i64> {
        let mut m = vec![0; n * n];
        for &(r, c) in entries {
            m[r * n + c] += 1;
        }
        m
    }

    /// The block space [[a, b, 0], [b, c, 0], [0, 0, d]].
    fn block_space() -> Tensor {
        Tensor::new(
            3,
            vec![unit(3, &[(0, 0)]), unit(3, &[(0, 1), (1, 0)]), unit(3, &[(1, 1)]), unit(3, &[(2, 2)])],
        )
        .unwrap()
    }

    /// Determinant by cofactor expansion along row 0 over plain polynomials,
    /// independent of the memoized table.
    fn det_by_row_zero(entries: &[MultiPoly], n: usize) -> MultiPoly {
        if n == 1 {
            return entries[0].clone();
        }
        let f = entries[0].field();
        let nv = entries[0].nvars();
        let mut acc = MultiPoly::zero(f, nv);
        for c in 0..n {
            let sub: Vec<MultiPoly> = (1..n)
                .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                .map(|(r, cc)| entries[r * n + cc].clone())
                .collect();
            let t = entries[c].mul(&det_by_row_zero(&sub, n - 1));
            acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        acc
    }

    #[test]
    fn contraction_dimensions() {
        let p = modulus();
        let ident = Tensor::new(3, vec![diag(3, &[1, 1, 1])]).unwrap();
        let s = ContractionSpace::contract(&ident, p).unwrap();
        assert_eq!(s.d(), 0);
        assert_eq!(s.basis()[0], FpMatrix::identity(s.field(), 3));

        let prop = Tensor::new(2, vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8]]).unwrap();
        assert_eq!(ContractionSpace::contract(&prop, p).unwrap().d(), 0);

        assert_eq!(Tensor::new(2, vec![vec![0; 4]]), Err(TensorError::EmptyContraction));
        assert!(matches!(Tensor::new(2, vec![vec![1; 3]]), Err(TensorError::Ragged { .. })));
        assert_eq!(Tensor::new(0, vec![vec![]]), Err(TensorError::TooSmall(0)));
        assert!(Tensor::new(1, vec![vec![1]]).is_ok());
    }

    #[test]
    fn rank_precondition_examples() {
        let p = modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ident = ContractionSpace::contract(&Tensor::new(4, vec![diag(4, &[1, 1, 1, 1])]).unwrap(), p).unwrap();
        assert!(check_rank_precondition(&ident, 5, &mut rng));
        let rank_one = ContractionSpace::contract(&Tensor::new(4, vec![unit(4, &[(0, 0)])]).unwrap(), p).unwrap();
        assert!(!check_rank_precondition(&rank_one, 20, &mut rng));
        // traceless diagonal 6x6
        let slices: Vec<Vec<i64>> = (0..5)
            .map(|k| {
                let mut d = vec![0; 6];
                d[k] = 1;
                d[5] = -1;
                diag(6, &d)
            })
            .collect();
        let traceless = ContractionSpace::contract(&Tensor::new(6, slices).unwrap(), p).unwrap();
        assert_eq!(traceless.d(), 4);
        assert!(check_rank_precondition(&traceless, 5, &mut rng));
    }

    #[test]
    fn diagonal_pencil_minors() {
        let f = field();
        let basis: Vec<FpMatrix> = (0..6)
            .map(|k| {
                let mut d = vec![0; 6];
                d[k] = 1;
                FpMatrix::from_i64(f, 6, 6, &diag(6, &d))
            })
            .collect();
        let space = ContractionSpace::from_matrices(f, 6, basis).unwrap();
        let pencil = space.pencil(6);
        let minors = pencil.minors(5);
        assert_eq!(minors.len(), 36);
        let nonzero: Vec<&MultiPoly> = minors.iter().filter(|m| !m.is_zero()).collect();
        assert_eq!(nonzero.len(), 6);
        for m in nonzero {
            assert_eq!(m.len(), 1);
            let (mono, c) = m.terms()[0];
            assert_eq!(c, FieldElement::ONE);
            assert_eq!(mono.degree(), 5);
            assert!((0..6).all(|v| mono.exponent(v) <= 1));
        }
        // off-diagonal position subsets vanish for every minor size
        let subsets = subsets_of_size(6, 3);
        for (idx, m) in pencil.minors(3).iter().enumerate() {
            let (r, c) = (subsets[idx / subsets.len()], subsets[idx % subsets.len()]);
            assert_eq!(m.is_zero(), r != c);
        }
    }

    #[test]
    fn identity_pencil_determinant() {
        let f = field();
        let space = ContractionSpace::from_matrices(f, 2, vec![FpMatrix::identity(f, 2)]).unwrap();
        let pencil = space.pencil(1);
        assert_eq!(pencil.minors(2), vec![MultiPoly::var(f, 1, 0).pow(2)]);
        let g = gradient_components(&pencil, &space);
        assert_eq!(g, vec![MultiPoly::var(f, 1, 0).scale(f.element(2))]);
    }

    #[test]
    fn block_space_determinant_and_gradient() {
        let space = ContractionSpace::contract(&block_space(), modulus()).unwrap();
        let f = space.field();
        let pencil = space.pencil(4);
        let x = |i| MultiPoly::var(f, 4, i);
        let expected = x(0).mul(&x(2)).sub(&x(1).mul(&x(1))).mul(&x(3));
        let det = pencil.determinant();
        assert_eq!(det, expected);
        assert_eq!(pencil.minors(3), vec![expected.clone()]);
        let g = gradient_components(&pencil, &space);
        for (j, gj) in g.iter().enumerate() {
            assert_eq!(gj, &expected.partial_derivative(j));
        }
    }

    #[test]
    fn gradient_identities_on_random_spaces() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (n, dim) in [(2, 2), (3, 3), (3, 5), (4, 3), (4, 5), (5, 3)] {
            let basis: Vec<FpMatrix> = (0..dim).map(|_| FpMatrix::random(f, n, n, &mut rng)).collect();
            let space = ContractionSpace::from_matrices(f, n, basis).unwrap();
            let pencil = space.pencil(dim);
            let det = pencil.determinant();
            assert!(det.is_homogeneous());
            assert_eq!(det.total_degree(), Some(n as u32));

            let entries: Vec<MultiPoly> = (0..n * n).map(|i| pencil.entry(i / n, i % n).clone()).collect();
            assert_eq!(det, det_by_row_zero(&entries, n));

            let g = gradient_components(&pencil, &space);
            assert_eq!(g.len(), dim);
            let mut euler = MultiPoly::zero(f, dim);
            for (j, gj) in g.iter().enumerate() {
                assert_eq!(gj, &det.partial_derivative(j));
                assert!(gj.is_zero() || gj.total_degree() == Some(n as u32 - 1));
                euler = euler.add(&gj.mul(&MultiPoly::var(f, dim, j)));
            }
            assert_eq!(euler, det.scale(f.element(n as u64)));

            // M(e_j) = B_j
            for j in 0..dim {
                let mut e = vec![FieldElement::ZERO; dim];
                e[j] = FieldElement::ONE;
                assert_eq!(pencil.evaluate(&e), space.basis()[j]);
            }
            // every i-minor is homogeneous of degree i
            for i in 1..=n {
                for m in pencil.minors(i) {
                    assert!(m.is_zero() || (m.is_homogeneous() && m.total_degree() == Some(i as u32)));
                }
            }
        }
    }

    #[test]
    fn affine_pencil_evaluates_pointwise() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a0 = FpMatrix::random(f, 3, 3, &mut rng);
        let dirs: Vec<FpMatrix> = (0..2).map(|_| FpMatrix::random(f, 3, 3, &mut rng)).collect();
        let pencil = Pencil::linear(f, 3, Some(&a0), &dirs, 3);
        let pt = [f.element(5), f.element(7), f.element(11)];
        let expected = FpMatrix::linear_combination(&[FieldElement::ONE, pt[0], pt[1]], &[a0, dirs[0].clone(), dirs[1].clone()]);
        assert_eq!(pencil.evaluate(&pt), expected);
        // the aux variable never appears
        let det = pencil.determinant();
        assert!(det.terms().iter().all(|t| t.0.exponent(2) == 0));
        assert!(det.terms().iter().any(|t| t.0 == Monomial::ONE));
    }
}
