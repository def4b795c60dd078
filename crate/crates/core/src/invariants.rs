//! Characteristic numbers, chromatic and relative chromatic polynomials of a
//! tensor, each entry obtained by counting the solutions of a generic
//! zero-dimensional system over a random prime field.
//!
//! Coefficient vectors are indexed by the number of conditions imposed on the
//! "inverse" side: entry `k` of the chromatic vector is the characteristic
//! number with `d - k` generic linear conditions on the matrix and `k`
//! generic conditions on its `(n-1) x (n-1)` minors. Entry `0` is therefore
//! always `1` and entry `d` is the degree of the closure of the inverted
//! space. The relative vector is indexed the same way, with gradient
//! conditions in place of minor conditions.
//!
//! Two ways of writing the system are available. `Minors` slices the space
//! with random hyperplanes and imposes random combinations of minors, with a
//! Rabinowitsch variable keeping the determinant nonzero. `Inverse` works on
//! pairs `(M, Y)` with `M Y = I`, where `Y` ranges over the span of inverses
//! and conditions on the inverse side become linear in `Y`; it needs no
//! saturation and stays small for larger `n`. `Auto` picks between them.
//!
//! Every count is repeated with fresh primes and coefficients until
//! `trials` independent draws agree.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{random_prime, FieldElement, PrimeModulus};
use crate::groebner::{buchberger, count_standard_monomials, GroebnerError, GroebnerLimits};
use crate::linalg::FpMatrix;
use crate::poly::{Monomial, MultiPoly, MAX_VARS};
use crate::rng::{stream_rng, Purpose, StreamKey};
use crate::tensor::{check_rank_precondition, pair_with, subsets_of_size, ContractionSpace, Pencil, Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("{what} = {value} exceeds the configured limit {limit}")]
    LimitExceeded { what: &'static str, value: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid condition vector: {0}")]
    BadConditions(String),
    #[error("invalid trial configuration: {0}")]
    BadConfig(String),
    #[error("degenerate input: the system for coefficient {index} is not zero-dimensional (observed {observed:?})")]
    Degenerate { index: usize, observed: Vec<TrialOutcome> },
    #[error("unstable count for coefficient {index}: no value reached agreement, observed {observed:?}")]
    Unstable { index: usize, observed: Vec<TrialOutcome> },
    #[error(transparent)]
    Resource(#[from] GroebnerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub n_max: usize,
    pub d_max: usize,
    pub groebner: GroebnerLimits,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { n_max: 6, d_max: 9, groebner: GroebnerLimits::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub prime_bits: u32,
    /// Number of agreeing trials required.
    pub trials: usize,
    /// Total trials allowed before giving up.
    pub max_trials: usize,
    /// Random draws used to confirm the rank precondition.
    pub rank_checks: usize,
    pub limits: Limits,
    pub formulation: Formulation,
}

/// How the polynomial system for a count is written down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Inverse formulation whenever it applies and fits, minors otherwise.
    #[default]
    Auto,
    /// Random combinations of minors; invertibility through an auxiliary
    /// variable `t` with `t det - 1`.
    Minors,
    /// Bilinear equations `M(x) Y = I` with `Y` ranging over the span of
    /// the inverses of the contraction. Only for conditions on the entries
    /// and on the `(n-1) x (n-1)` minors.
    Inverse,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            prime_bits: 31,
            trials: 3,
            max_trials: 6,
            rank_checks: 16,
            limits: Limits::default(),
            formulation: Formulation::Auto,
        }
    }
}

impl TrialConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrialConfig { seed, ..Self::default() }
    }

    fn validate(&self) -> Result<(), InvariantError> {
        if self.trials == 0 || self.trials > self.max_trials {
            return Err(InvariantError::BadConfig(format!(
                "need 1 <= trials <= max_trials, got trials={} max_trials={}",
                self.trials, self.max_trials
            )));
        }
        if !(30..=31).contains(&self.prime_bits) {
            return Err(InvariantError::BadConfig(format!("prime bits must be 30 or 31, got {}", self.prime_bits)));
        }
        Ok(())
    }
}

/// Multiplicities `b_1, ..., b_{n-1}` of conditions on the `i x i` minors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BVector(Vec<usize>);

impl BVector {
    pub fn new(b: Vec<usize>) -> Self {
        BVector(b)
    }

    /// `b_1 = d - k`, `b_{n-1} = k`; for `n = 2` both name the same entry
    /// and for `n = 1` the vector is empty (then `d = 0`).
    pub fn chromatic(n: usize, d: usize, k: usize) -> Self {
        if n == 1 {
            return BVector(Vec::new());
        }
        let mut b = vec![0; n - 1];
        b[0] += d - k;
        b[n - 2] += k;
        BVector(b)
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// Conditions on `i x i` minors, `i` counted from one.
    pub fn get(&self, i: usize) -> usize {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    fn check(&self, n: usize, d: usize) -> Result<(), InvariantError> {
        if self.0.len() != n - 1 {
            return Err(InvariantError::BadConditions(format!("expected {} entries, got {}", n - 1, self.0.len())));
        }
        if self.total() != d {
            return Err(InvariantError::BadConditions(format!(
                "entries must sum to the projective dimension {d}, got {}",
                self.total()
            )));
        }
        Ok(())
    }
}

/// What a single trial produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Count(u64),
    NotZeroDimensional,
    /// The random linear data was itself degenerate (probability ~1/p).
    DegenerateDraw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub prime: PrimeModulus,
    pub outcome: TrialOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientReport {
    pub index: usize,
    pub value: u64,
    pub trials: Vec<TrialRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    Chromatic,
    Relative,
    CharacteristicNumber,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub kind: InvariantKind,
    pub n: usize,
    pub d: usize,
    pub m: Vec<u64>,
    /// `C(d, k) * m_k`, the coefficients of the displayed polynomial.
    pub binomial_form: Vec<u64>,
    pub trials_used: usize,
    pub primes: Vec<PrimeModulus>,
    pub coefficients: Vec<CoefficientReport>,
}

impl InvariantResult {
    fn assemble(kind: InvariantKind, n: usize, d: usize, coefficients: Vec<CoefficientReport>) -> Self {
        let m: Vec<u64> = coefficients.iter().map(|c| c.value).collect();
        let binomial_form = m.iter().enumerate().map(|(k, &v)| binomial(d as u64, k as u64) * v).collect();
        let trials_used = coefficients.iter().map(|c| c.trials.len()).sum();
        let primes = coefficients.iter().flat_map(|c| c.trials.iter().map(|t| t.prime)).collect();
        InvariantResult { kind, n, d, m, binomial_form, trials_used, primes, coefficients }
    }

    /// The bivariate polynomial `sum_k C(d,k) m_k a^(d-k) b^k`, written with
    /// both factors visible, e.g. `a^4 + 2*4*a^3*b + ...`.
    pub fn render(&self) -> String {
        render_polynomial(&self.m)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn render_polynomial(m: &[u64]) -> String {
    let d = m.len().saturating_sub(1);
    let power = |var: char, e: usize| match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    };
    let mut out = String::new();
    for (k, &mk) in m.iter().enumerate() {
        if mk == 0 {
            continue;
        }
        let c = binomial(d as u64, k as u64);
        let vars: Vec<String> = [power('a', d - k), power('b', k)].into_iter().filter(|s| !s.is_empty()).collect();
        let mut factors: Vec<String> = Vec::new();
        if mk != 1 || c != 1 {
            factors.push(mk.to_string());
        }
        if c != 1 {
            factors.push(c.to_string());
        }
        factors.extend(vars);
        if !out.is_empty() {
            out.push_str(" + ");
        }
        let term = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
        let _ = write!(out, "{term}");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Shared validation and exact dimension of the contraction.
struct Prepared<'a> {
    tensor: &'a Tensor,
    n: usize,
    d: usize,
}

fn prepare<'a>(tensor: &'a Tensor, cfg: &TrialConfig) -> Result<Prepared<'a>, InvariantError> {
    cfg.validate()?;
    let n = tensor.n();
    if n > cfg.limits.n_max {
        return Err(InvariantError::LimitExceeded { what: "n", value: n, limit: cfg.limits.n_max });
    }
    let dim = tensor.contraction_dim();
    if dim == 0 {
        return Err(TensorError::EmptyContraction.into());
    }
    let d = dim - 1;
    if d > cfg.limits.d_max {
        return Err(InvariantError::LimitExceeded { what: "d", value: d, limit: cfg.limits.d_max });
    }
    let mut rng = stream_rng(cfg.seed, StreamKey::new(Purpose::RankCheck, 0, 0));
    let space = contract_good_prime(tensor, dim, cfg.prime_bits, &mut rng);
    if !check_rank_precondition(&space, cfg.rank_checks, &mut rng) {
        return Err(InvariantError::Precondition(format!(
            "no member of rank at least n-2 = {} found in {} random draws",
            n.saturating_sub(2),
            cfg.rank_checks
        )));
    }
    Ok(Prepared { tensor, n, d })
}

/// Draws primes until the reduction keeps the full contraction dimension.
fn contract_good_prime(tensor: &Tensor, dim: usize, bits: u32, rng: &mut ChaCha8Rng) -> ContractionSpace {
    loop {
        let p = random_prime(bits, rng);
        if let Ok(space) = ContractionSpace::contract(tensor, p) {
            if space.d() + 1 == dim {
                return space;
            }
        }
    }
}

fn random_vec(space: &ContractionSpace, len: usize, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    (0..len).map(|_| space.field().random(rng)).collect()
}

/// Affine pencil `A_0 + sum_i x_i A_i` cut from `P(L)` by a random affine
/// chart and the given linear forms in the basis coordinates `x_0..x_d`.
struct AffineSlice {
    constant: FpMatrix,
    directions: Vec<FpMatrix>,
}

impl AffineSlice {
    fn draw(space: &ContractionSpace, forms: &[Vec<FieldElement>], rng: &mut ChaCha8Rng) -> Option<Self> {
        let f = space.field();
        let dim = space.d() + 1;
        let mut sys = FpMatrix::zeros(f, forms.len() + 1, dim);
        let mut rhs = vec![FieldElement::ZERO; forms.len() + 1];
        for j in 0..dim {
            sys.set(0, j, f.random_nonzero(rng));
        }
        rhs[0] = FieldElement::ONE;
        for (i, form) in forms.iter().enumerate() {
            for (j, &c) in form.iter().enumerate() {
                sys.set(i + 1, j, c);
            }
        }
        let (particular, kernel) = sys.solve_affine(&rhs)?;
        if kernel.len() + forms.len() + 1 != dim {
            return None;
        }
        Some(AffineSlice {
            constant: space.member(&particular),
            directions: kernel.iter().map(|v| space.member(v)).collect(),
        })
    }

    fn pencil(&self, extra_vars: usize) -> Pencil {
        let f = self.constant.field();
        let n = self.constant.rows();
        Pencil::linear(f, n, Some(&self.constant), &self.directions, self.directions.len() + extra_vars)
    }
}

/// `aux * h - 1` with `aux` the last ring variable.
fn rabinowitsch(h: &MultiPoly) -> MultiPoly {
    let f = h.field();
    let t = h.nvars() - 1;
    h.mul_term(&Monomial::var(t), FieldElement::ONE).sub(&MultiPoly::one(f, h.nvars()))
}

fn count(gens: &[MultiPoly], limits: &GroebnerLimits) -> Result<TrialOutcome, InvariantError> {
    let basis = buchberger(gens, limits)?;
    let c = count_standard_monomials(&basis);
    Ok(match c.standard_monomial_count {
        Some(v) => TrialOutcome::Count(v),
        None => TrialOutcome::NotZeroDimensional,
    })
}

/// Which side the inverse-side conditions live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InverseSide {
    /// Generic linear forms on the inverse matrix (the `(n-1) x (n-1)`
    /// minors up to scale).
    Generic,
    /// Forms `Y -> tr(D Y)` with `D` in the contraction: conditions on the
    /// gradient of the determinant.
    Gradient,
}

/// Minor formulation: `b_i` random combinations of all `i x i` minors, the
/// determinant kept nonzero by an auxiliary variable.
fn minor_trial(
    space: &ContractionSpace,
    b: &BVector,
    rng: &mut ChaCha8Rng,
    limits: &GroebnerLimits,
) -> Result<TrialOutcome, InvariantError> {
    let f = space.field();
    let n = space.n();
    let dim = space.d() + 1;
    let forms: Vec<Vec<FieldElement>> = (0..b.get(1)).map(|_| random_vec(space, dim, rng)).collect();
    let Some(slice) = AffineSlice::draw(space, &forms, rng) else {
        return Ok(TrialOutcome::DegenerateDraw);
    };
    let pencil = slice.pencil(1);
    let nvars = pencil.nvars();
    let mut table = pencil.minor_table();
    let mut gens = Vec::new();
    for i in 2..n {
        if b.get(i) == 0 {
            continue;
        }
        let subsets = subsets_of_size(n, i);
        let minors: Vec<MultiPoly> = subsets
            .iter()
            .flat_map(|&r| subsets.iter().map(move |&c| (r, c)))
            .map(|(r, c)| table.minor(r, c))
            .collect();
        for _ in 0..b.get(i) {
            let mut eq = MultiPoly::zero(f, nvars);
            for m in &minors {
                eq = eq.add(&m.scale(f.random(rng)));
            }
            gens.push(eq);
        }
    }
    let full = (1u32 << n) - 1;
    gens.push(rabinowitsch(&table.minor(full, full)));
    count(&gens, limits)
}

/// Minor formulation of the relative system: `k` directional derivatives of
/// the determinant along random members of the contraction, one more kept
/// nonzero by an auxiliary variable.
fn gradient_minor_trial(
    space: &ContractionSpace,
    k: usize,
    rng: &mut ChaCha8Rng,
    limits: &GroebnerLimits,
) -> Result<TrialOutcome, InvariantError> {
    let f = space.field();
    let dim = space.d() + 1;
    let forms: Vec<Vec<FieldElement>> = (0..space.d() - k).map(|_| random_vec(space, dim, rng)).collect();
    let Some(slice) = AffineSlice::draw(space, &forms, rng) else {
        return Ok(TrialOutcome::DegenerateDraw);
    };
    let pencil = slice.pencil(1);
    let nvars = pencil.nvars();
    let cof = pencil.cofactors();
    // sum_j lambda_j g_j is the derivative along sum_j lambda_j B_j
    let direction = |rng: &mut ChaCha8Rng| space.member(&random_vec(space, dim, rng));
    let mut gens: Vec<MultiPoly> = (0..k).map(|_| pair_with(&direction(rng), &cof, f, nvars)).collect();
    let guard = pair_with(&direction(rng), &cof, f, nvars);
    gens.push(rabinowitsch(&guard));
    count(&gens, limits)
}

/// Consecutive random inverses that must fail to enlarge the span before it
/// is accepted as complete.
const SPAN_PATIENCE: usize = 4;

/// Basis of the span of `M^{-1}` over invertible `M` in the contraction,
/// from random members. Empty when no sampled member is invertible.
fn inverse_span(space: &ContractionSpace, rng: &mut ChaCha8Rng) -> Vec<FpMatrix> {
    let f = space.field();
    let n = space.n();
    let mut echelon: Vec<(usize, Vec<FieldElement>)> = Vec::new();
    let mut basis = Vec::new();
    let mut idle = 0;
    while idle < SPAN_PATIENCE && basis.len() < n * n {
        let Some(inv) = space.random_member(rng).inverse() else {
            idle += 1;
            continue;
        };
        let mut v = inv.entries().to_vec();
        for (pivot, row) in &echelon {
            let c = v[*pivot];
            if !c.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                let scale = f.inv(v[pivot]).expect("nonzero pivot");
                let row: Vec<FieldElement> = v.iter().map(|&x| f.mul(x, scale)).collect();
                echelon.push((pivot, row));
                basis.push(inv);
                idle = 0;
            }
            None => idle += 1,
        }
    }
    basis
}

/// Inverse formulation: unknowns `x` on the affine slice and `Y` in the span
/// of inverses cut by `k` conditions, subject to `M(x) Y = I`. Returns `None`
/// if the system needs more than `MAX_VARS` variables.
fn inverse_trial(
    space: &ContractionSpace,
    k: usize,
    side: InverseSide,
    rng: &mut ChaCha8Rng,
    limits: &GroebnerLimits,
) -> Result<Option<TrialOutcome>, InvariantError> {
    let f = space.field();
    let n = space.n();
    let dim = space.d() + 1;
    let span = inverse_span(space, rng);
    let forms: Vec<Vec<FieldElement>> = (0..space.d() - k).map(|_| random_vec(space, dim, rng)).collect();
    let Some(slice) = AffineSlice::draw(space, &forms, rng) else {
        return Ok(Some(TrialOutcome::DegenerateDraw));
    };
    if span.is_empty() {
        // no invertible member at all
        return Ok(Some(TrialOutcome::Count(0)));
    }
    let mut conditions = FpMatrix::zeros(f, k, span.len());
    for r in 0..k {
        let weight = match side {
            InverseSide::Generic => FpMatrix::random(f, n, n, rng),
            InverseSide::Gradient => space.random_member(rng).transpose(),
        };
        for (i, w) in span.iter().enumerate() {
            conditions.set(r, i, weight.pairing(w));
        }
    }
    let (_, kernel) = conditions.solve_affine(&vec![FieldElement::ZERO; k]).expect("homogeneous system");
    let nvars = k + kernel.len();
    if nvars > MAX_VARS {
        return Ok(None);
    }
    let ys: Vec<FpMatrix> = kernel.iter().map(|v| FpMatrix::linear_combination(v, &span)).collect();
    // (A_0 + sum_i x_i A_i) (sum_j z_j Y_j) - I, with x_i -> var i, z_j -> var k + j
    let const_products: Vec<FpMatrix> = ys.iter().map(|y| slice.constant.mul(y)).collect();
    let products: Vec<Vec<FpMatrix>> =
        slice.directions.iter().map(|a| ys.iter().map(|y| a.mul(y)).collect()).collect();
    let mut gens = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let mut terms = Vec::new();
            if r == c {
                terms.push((Monomial::ONE, f.neg(FieldElement::ONE)));
            }
            for (j, p) in const_products.iter().enumerate() {
                terms.push((Monomial::var(k + j), p.get(r, c)));
            }
            for (i, row) in products.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    terms.push((Monomial::var(i).mul(&Monomial::var(k + j)), p.get(r, c)));
                }
            }
            let eq = MultiPoly::from_terms(f, nvars.max(1), terms);
            if !eq.is_zero() {
                gens.push(eq);
            }
        }
    }
    count(&gens, limits).map(Some)
}

/// Largest matrix size for which `Formulation::Auto` prefers minors; their
/// degree grows with `n`, the inverse system only in its variable count.
const AUTO_MINORS_MAX_N: usize = 4;

fn prefers_inverse(formulation: Formulation, n: usize) -> bool {
    match formulation {
        Formulation::Auto => n > AUTO_MINORS_MAX_N,
        Formulation::Minors => false,
        Formulation::Inverse => true,
    }
}

fn too_many_variables() -> InvariantError {
    InvariantError::LimitExceeded { what: "variables", value: MAX_VARS + 1, limit: MAX_VARS }
}

/// Characteristic-number trial for `b`, choosing the formulation.
fn characteristic_trial(
    space: &ContractionSpace,
    b: &BVector,
    formulation: Formulation,
    rng: &mut ChaCha8Rng,
    limits: &GroebnerLimits,
) -> Result<TrialOutcome, InvariantError> {
    let n = space.n();
    let middle = (2..n.saturating_sub(1)).any(|i| b.get(i) > 0);
    if middle && formulation == Formulation::Inverse {
        return Err(InvariantError::BadConfig("the inverse formulation only handles conditions on entries and (n-1)-minors".into()));
    }
    if !middle && prefers_inverse(formulation, n) {
        // for n <= 2 every condition is linear in the matrix entries
        let k = if n >= 3 { b.get(n - 1) } else { 0 };
        match inverse_trial(space, k, InverseSide::Generic, rng, limits)? {
            Some(outcome) => return Ok(outcome),
            None if formulation == Formulation::Inverse => return Err(too_many_variables()),
            None => {}
        }
    }
    minor_trial(space, b, rng, limits)
}

fn relative_trial(
    space: &ContractionSpace,
    k: usize,
    formulation: Formulation,
    rng: &mut ChaCha8Rng,
    limits: &GroebnerLimits,
) -> Result<TrialOutcome, InvariantError> {
    if prefers_inverse(formulation, space.n()) {
        match inverse_trial(space, k, InverseSide::Gradient, rng, limits)? {
            Some(outcome) => return Ok(outcome),
            None if formulation == Formulation::Inverse => return Err(too_many_variables()),
            None => {}
        }
    }
    gradient_minor_trial(space, k, rng, limits)
}

/// Runs trials keyed by `(purpose, index, trial)` until `cfg.trials` of them
/// agree, at most `cfg.max_trials` in total.
fn agree<F>(cfg: &TrialConfig, prep: &Prepared<'_>, purpose: Purpose, index: usize, one: F) -> Result<CoefficientReport, InvariantError>
where
    F: Fn(&ContractionSpace, &mut ChaCha8Rng) -> Result<TrialOutcome, InvariantError> + Sync,
{
    let dim = prep.d + 1;
    let run = |trial: usize| -> Result<TrialRecord, InvariantError> {
        let mut rng = stream_rng(cfg.seed, StreamKey::new(purpose, index as u32, trial as u32));
        let space = contract_good_prime(prep.tensor, dim, cfg.prime_bits, &mut rng);
        let prime = PrimeModulus::new(space.field().modulus()).expect("sampled modulus is valid");
        let outcome = one(&space, &mut rng)?;
        log::debug!("{purpose:?} index {index} trial {trial}: p = {prime}, {outcome:?}");
        Ok(TrialRecord { trial: trial as u32, prime, outcome })
    };
    let mut records: Vec<TrialRecord> = (0..cfg.trials).into_par_iter().map(run).collect::<Result<_, _>>()?;
    loop {
        let mut tally: BTreeMap<TrialOutcome, usize> = BTreeMap::new();
        for r in &records {
            *tally.entry(r.outcome).or_default() += 1;
        }
        let observed = || records.iter().map(|r| r.outcome).collect::<Vec<_>>();
        if let Some((&winner, _)) = tally.iter().find(|(_, &c)| c >= cfg.trials) {
            return match winner {
                TrialOutcome::Count(value) => Ok(CoefficientReport { index, value, trials: records }),
                _ => Err(InvariantError::Degenerate { index, observed: observed() }),
            };
        }
        if records.len() >= cfg.max_trials {
            return Err(InvariantError::Unstable { index, observed: observed() });
        }
        records.push(run(records.len())?);
    }
}

/// `T(b_1, ..., b_{n-1})`: the number of invertible matrices in `P(C^a(T))`
/// satisfying `b_i` generic linear conditions on the `i x i` minors.
pub fn characteristic_number(tensor: &Tensor, b: &BVector, cfg: &TrialConfig) -> Result<CoefficientReport, InvariantError> {
    let prep = prepare(tensor, cfg)?;
    b.check(prep.n, prep.d)?;
    let limits = cfg.limits.groebner;
    agree(cfg, &prep, Purpose::CharacteristicNumber, 0, |space, rng| characteristic_trial(space, b, cfg.formulation, rng, &limits))
}

/// Coefficients `m_k = T(d-k, 0, ..., 0, k)` for `k = 0..=d`.
pub fn chromatic(tensor: &Tensor, cfg: &TrialConfig) -> Result<InvariantResult, InvariantError> {
    let prep = prepare(tensor, cfg)?;
    let (n, d) = (prep.n, prep.d);
    let limits = cfg.limits.groebner;
    let coefficients = (0..=d)
        .into_par_iter()
        .map(|k| {
            let b = BVector::chromatic(n, d, k);
            agree(cfg, &prep, Purpose::Chromatic, k, |space, rng| characteristic_trial(space, &b, cfg.formulation, rng, &limits))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InvariantResult::assemble(InvariantKind::Chromatic, n, d, coefficients))
}

/// Multidegree of the graph of the gradient of `det` restricted to the
/// contraction; entry `k` has `d - k` linear and `k` gradient conditions.
pub fn relative_chromatic(tensor: &Tensor, cfg: &TrialConfig) -> Result<InvariantResult, InvariantError> {
    let prep = prepare(tensor, cfg)?;
    let (n, d) = (prep.n, prep.d);
    let limits = cfg.limits.groebner;
    let coefficients = (0..=d)
        .into_par_iter()
        .map(|k| agree(cfg, &prep, Purpose::Relative, k, |space, rng| relative_trial(space, k, cfg.formulation, rng, &limits)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(InvariantResult::assemble(InvariantKind::Relative, n, d, coefficients))
}

/// Only the top chromatic coefficient `T(0, ..., 0, d)`, the degree of the
/// closure of the inverted space.
pub fn top_chromatic_coefficient(tensor: &Tensor, cfg: &TrialConfig) -> Result<CoefficientReport, InvariantError> {
    let prep = prepare(tensor, cfg)?;
    let (n, d) = (prep.n, prep.d);
    let b = BVector::chromatic(n, d, d);
    let limits = cfg.limits.groebner;
    agree(cfg, &prep, Purpose::Chromatic, d, |space, rng| characteristic_trial(space, &b, cfg.formulation, rng, &limits))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerReport {
    /// Euler characteristic of `P(L) \ V(det)`.
    pub complement: i64,
    /// Euler characteristic of `X = P(L) ∩ V(det)`.
    pub hypersurface: i64,
    pub relative: InvariantResult,
}

/// Signed sum of the relative coefficients, and the complementary value for
/// the determinantal hypersurface itself.
pub fn euler_complement(tensor: &Tensor, cfg: &TrialConfig) -> Result<EulerReport, InvariantError> {
    let relative = relative_chromatic(tensor, cfg)?;
    let complement = signed_sum(&relative.m);
    let hypersurface = (relative.d as i64 + 1) - complement;
    Ok(EulerReport { complement, hypersurface, relative })
}

pub fn signed_sum(m: &[u64]) -> i64 {
    m.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) }).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticComparison {
    pub equal: bool,
    pub differing: Vec<usize>,
    pub chromatic: InvariantResult,
    pub relative: InvariantResult,
}

pub fn compare_chromatic(tensor: &Tensor, cfg: &TrialConfig) -> Result<ChromaticComparison, InvariantError> {
    let chromatic = chromatic(tensor, cfg)?;
    let relative = relative_chromatic(tensor, cfg)?;
    let differing: Vec<usize> = (0..chromatic.m.len()).filter(|&k| chromatic.m[k] != relative.m[k]).collect();
    Ok(ChromaticComparison { equal: differing.is_empty(), differing, chromatic, relative })
}

/// Random `F_p` combinations of slices, used to restrict a tensor to a
/// generic subspace of its contraction (integer coefficients, small range).
pub fn generic_restriction<R: Rng + ?Sized>(tensor: &Tensor, slices: usize, rng: &mut R) -> Result<Tensor, TensorError> {
    let n = tensor.n();
    let out = (0..slices)
        .map(|_| {
            let w: Vec<i64> = (0..tensor.a()).map(|_| rng.gen_range(-99..=99)).collect();
            (0..n * n).map(|e| tensor.slices().iter().zip(&w).map(|(s, c)| s[e] * c).sum()).collect()
        })
        .collect();
    Tensor::new(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_rendering() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(render_polynomial(&[1, 2, 4, 4, 2]), "a^4 + 2*4*a^3*b + 4*6*a^2*b^2 + 4*4*a*b^3 + 2*b^4");
        assert_eq!(render_polynomial(&[1, 2, 2, 1]), "a^3 + 2*3*a^2*b + 2*3*a*b^2 + b^3");
        assert_eq!(render_polynomial(&[1]), "1");
        assert_eq!(render_polynomial(&[1, 0]), "a");
    }

    #[test]
    fn signed_sums() {
        assert_eq!(signed_sum(&[1, 2, 2, 1]), 0);
        assert_eq!(signed_sum(&[1, 2, 4, 4, 2]), 1);
        assert_eq!(signed_sum(&[1]), 1);
    }

    #[test]
    fn chromatic_condition_vectors() {
        assert_eq!(BVector::chromatic(4, 7, 0).entries(), &[7, 0, 0]);
        assert_eq!(BVector::chromatic(4, 7, 7).entries(), &[0, 0, 7]);
        assert_eq!(BVector::chromatic(2, 3, 1).entries(), &[3]);
        assert!(BVector::new(vec![1, 1]).check(3, 3).is_err());
        assert!(BVector::new(vec![1, 1, 1]).check(3, 3).is_err());
        assert!(BVector::new(vec![2, 1]).check(3, 3).is_ok());
    }

    #[test]
    fn config_validation() {
        let cfg = TrialConfig { trials: 4, max_trials: 3, ..TrialConfig::default() };
        assert!(cfg.validate().is_err());
        assert!(TrialConfig::default().validate().is_ok());
    }
}
