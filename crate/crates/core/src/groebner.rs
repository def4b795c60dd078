//! Buchberger's algorithm over `F_p` in grevlex order, and solution counting
//! through the standard monomials of a zero-dimensional ideal.
//!
//! Pairs are selected by the normal strategy (smallest lcm first). Useless
//! pairs are discarded with Buchberger's coprime criterion and the chain
//! criterion, both applied through the Gebauer-Moeller update.

use std::cmp::Ordering;

use thiserror::Error;

use crate::field::PrimeField;
use crate::poly::{grevlex_cmp, merge_into, Monomial, MultiPoly, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("no generators given")]
    EmptyInput,
    #[error("resource limit exceeded: {what} reached {value} (limit {limit})")]
    ResourceLimit { what: &'static str, value: usize, limit: usize },
}

/// Caps that abort a computation which has grown beyond practical size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GroebnerLimits {
    pub max_basis: usize,
    pub max_pairs: usize,
    pub max_terms: usize,
    pub selection: Selection,
}

/// Critical pair selection: smallest lcm first (normal), or smallest sugar
/// degree first with ties broken by the lcm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    #[default]
    Normal,
    Sugar,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits { max_basis: 20_000, max_pairs: 2_000_000, max_terms: 2_000_000, selection: Selection::Normal }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct GroebnerStats {
    pub pairs_created: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub coprime_skips: usize,
    pub chain_skips: usize,
    pub peak_basis: usize,
}

/// A reduced Groebner basis: monic generators, sorted by ascending leading
/// monomial, no leading monomial dividing any term of another generator.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    generators: Vec<MultiPoly>,
    field: PrimeField,
    nvars: usize,
    pub stats: GroebnerStats,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().filter_map(MultiPoly::leading_monomial).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        reduce(f, &self.generators)
    }
}

fn find_reducer<'a>(m: &Monomial, basis: &[&'a MultiPoly]) -> Option<&'a MultiPoly> {
    basis
        .iter()
        .copied()
        .filter(|g| g.leading_monomial().is_some_and(|lm| lm.divides(m)))
        .min_by_key(|g| g.len())
}

/// Normal form of `f` modulo `basis`: no term of the result is divisible by
/// any leading monomial of the basis.
pub fn reduce(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let refs: Vec<&MultiPoly> = basis.iter().filter(|g| !g.is_zero()).collect();
    reduce_refs(f, &refs)
}

fn reduce_refs(f: &MultiPoly, basis: &[&MultiPoly]) -> MultiPoly {
    let field = f.field();
    let mut cur: Vec<Term> = f.terms().to_vec();
    let mut buf: Vec<Term> = Vec::new();
    let mut rem: Vec<Term> = Vec::new();
    let mut pos = 0;
    while pos < cur.len() {
        let (m, c) = cur[pos];
        match find_reducer(&m, basis) {
            Some(g) => {
                let (lm, lc) = *g.leading_term().expect("nonzero reducer");
                let q = m.div(&lm).expect("leading monomial divides");
                let factor = field.neg(field.div(c, lc).expect("nonzero leading coefficient"));
                buf.clear();
                merge_into(field, &cur[pos + 1..], &g.terms()[1..], factor, &q, &mut buf);
                std::mem::swap(&mut cur, &mut buf);
                pos = 0;
            }
            None => {
                rem.push((m, c));
                pos += 1;
            }
        }
    }
    // remainder terms were emitted in decreasing order already
    MultiPoly::from_sorted_terms(field, f.nvars(), rem)
}

pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let field = f.field();
    let (fm, fc) = *f.leading_term().expect("nonzero");
    let (gm, gc) = *g.leading_term().expect("nonzero");
    let l = fm.lcm(&gm);
    let a = f.mul_term(&l.div(&fm).unwrap(), field.inv(fc).unwrap());
    let b = g.mul_term(&l.div(&gm).unwrap(), field.inv(gc).unwrap());
    a.sub(&b)
}

#[derive(Debug, Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn pair_order(selection: Selection, a: &Pair, b: &Pair) -> Ordering {
    let first = match selection {
        Selection::Normal => Ordering::Equal,
        Selection::Sugar => a.sugar.cmp(&b.sugar),
    };
    first.then_with(|| grevlex_cmp(&a.lcm, &b.lcm)).then(a.j.cmp(&b.j)).then(a.i.cmp(&b.i))
}

struct Engine {
    polys: Vec<MultiPoly>,
    sugars: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    limits: GroebnerLimits,
    stats: GroebnerStats,
}

impl Engine {
    fn lm(&self, i: usize) -> Monomial {
        self.polys[i].leading_monomial().expect("basis elements are nonzero")
    }

    fn reduce_by_active(&self, f: &MultiPoly) -> MultiPoly {
        let refs: Vec<&MultiPoly> = self.active.iter().map(|&i| &self.polys[i]).collect();
        reduce_refs(f, &refs)
    }

    /// Gebauer-Moeller update for a new, fully reduced, monic element.
    fn insert(&mut self, h: MultiPoly, sugar: u32) -> Result<(), GroebnerError> {
        if h.len() > self.limits.max_terms {
            return Err(GroebnerError::ResourceLimit {
                what: "polynomial terms",
                value: h.len(),
                limit: self.limits.max_terms,
            });
        }
        let hi = self.polys.len();
        let hm = h.leading_monomial().expect("nonzero");
        self.polys.push(h);
        self.sugars.push(sugar);

        let mut cands: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let gm = self.lm(g);
                (g, hm.lcm(&gm), hm.is_coprime(&gm))
            })
            .collect();
        self.stats.pairs_created += cands.len();

        // chain criterion among the new pairs
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some(c) = cands.pop() {
            let dominated = |o: &(usize, Monomial, bool)| o.1.divides(&c.1);
            if c.2 || (!cands.iter().any(dominated) && !kept.iter().any(dominated)) {
                kept.push(c);
            } else {
                self.stats.chain_skips += 1;
            }
        }

        // chain criterion on old pairs
        let before = self.pairs.len();
        let polys = &self.polys;
        let lm = |i: usize| polys[i].leading_monomial().unwrap();
        self.pairs.retain(|p| {
            !hm.divides(&p.lcm) || lm(p.i).lcm(&hm) == p.lcm || lm(p.j).lcm(&hm) == p.lcm
        });
        self.stats.chain_skips += before - self.pairs.len();

        for (g, lcm, coprime) in kept {
            if coprime {
                self.stats.coprime_skips += 1;
            } else {
                let gm = self.lm(g);
                let sugar = (self.sugars[g] + lcm.degree() - gm.degree()).max(sugar + lcm.degree() - hm.degree());
                self.pairs.push(Pair { i: g, j: hi, lcm, sugar });
            }
        }
        if self.pairs.len() > self.limits.max_pairs {
            return Err(GroebnerError::ResourceLimit {
                what: "pair queue",
                value: self.pairs.len(),
                limit: self.limits.max_pairs,
            });
        }

        self.active.retain(|&g| !hm.divides(&lm(g)));
        self.active.push(hi);
        self.stats.peak_basis = self.stats.peak_basis.max(self.active.len());
        if self.active.len() > self.limits.max_basis {
            return Err(GroebnerError::ResourceLimit {
                what: "basis size",
                value: self.active.len(),
                limit: self.limits.max_basis,
            });
        }
        Ok(())
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let sel = self.limits.selection;
        let best = (0..self.pairs.len()).min_by(|&a, &b| pair_order(sel, &self.pairs[a], &self.pairs[b]))?;
        Some(self.pairs.swap_remove(best))
    }
}

fn unit_basis(field: PrimeField, nvars: usize, stats: GroebnerStats) -> GroebnerBasis {
    GroebnerBasis { generators: vec![MultiPoly::one(field, nvars)], field, nvars, stats }
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[MultiPoly], limits: &GroebnerLimits) -> Result<GroebnerBasis, GroebnerError> {
    let first = gens.first().ok_or(GroebnerError::EmptyInput)?;
    let (field, nvars) = (first.field(), first.nvars());
    let mut eng = Engine {
        polys: Vec::new(),
        sugars: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        limits: *limits,
        stats: GroebnerStats::default(),
    };

    // lower degree generators first makes the initial reductions cheap
    let mut order: Vec<&MultiPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    order.sort_by(|a, b| {
        let (am, bm) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        grevlex_cmp(&am, &bm).then(a.len().cmp(&b.len()))
    });
    for g in order {
        assert_eq!((g.field(), g.nvars()), (field, nvars), "generators must share a ring");
        let mut h = eng.reduce_by_active(g);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(field, nvars, eng.stats));
        }
        h.make_monic();
        let sugar = g.total_degree().expect("nonzero");
        eng.insert(h, sugar)?;
    }
    if eng.active.is_empty() {
        // only zero generators: the zero ideal
        return Ok(GroebnerBasis { generators: Vec::new(), field, nvars, stats: eng.stats });
    }

    while let Some(pair) = eng.next_pair() {
        eng.stats.pairs_reduced += 1;
        let s = s_polynomial(&eng.polys[pair.i], &eng.polys[pair.j]);
        let mut h = eng.reduce_by_active(&s);
        if h.is_zero() {
            eng.stats.zero_reductions += 1;
            continue;
        }
        if h.is_constant() {
            return Ok(unit_basis(field, nvars, eng.stats));
        }
        h.make_monic();
        eng.insert(h, pair.sugar)?;
        if eng.stats.pairs_reduced % 500 == 0 {
            log::trace!(
                "buchberger: {} pairs reduced, {} queued, basis {}",
                eng.stats.pairs_reduced,
                eng.pairs.len(),
                eng.active.len()
            );
        }
    }

    // interreduce the minimal basis
    let minimal: Vec<MultiPoly> = eng.active.iter().map(|&i| eng.polys[i].clone()).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (k, g) in minimal.iter().enumerate() {
        let others: Vec<&MultiPoly> = minimal.iter().enumerate().filter(|&(o, _)| o != k).map(|(_, p)| p).collect();
        let (lm, lc) = *g.leading_term().unwrap();
        let tail = MultiPoly::from_sorted_terms(field, nvars, g.terms()[1..].to_vec());
        let tail = reduce_refs(&tail, &others);
        let mut r = tail.add(&MultiPoly::monomial(field, nvars, lm, lc));
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| grevlex_cmp(&a.leading_monomial().unwrap(), &b.leading_monomial().unwrap()));
    log::debug!(
        "buchberger: {} vars, basis {}, pairs created {}, reduced {}, zero {}, coprime skips {}, chain skips {}",
        nvars,
        reduced.len(),
        eng.stats.pairs_created,
        eng.stats.pairs_reduced,
        eng.stats.zero_reductions,
        eng.stats.coprime_skips,
        eng.stats.chain_skips
    );
    Ok(GroebnerBasis { generators: reduced, field, nvars, stats: eng.stats })
}

/// Outcome of counting standard monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct StaircaseCount {
    pub is_zero_dimensional: bool,
    pub standard_monomial_count: Option<u64>,
}

/// Counts monomials outside the leading-term ideal; for a zero-dimensional
/// ideal this is the number of solutions counted with multiplicity.
pub fn count_standard_monomials(basis: &GroebnerBasis) -> StaircaseCount {
    let lms = basis.leading_monomials();
    if lms.iter().any(|m| m.degree() == 0) {
        return StaircaseCount { is_zero_dimensional: true, standard_monomial_count: Some(0) };
    }
    let nvars = basis.nvars();
    let mut bounds = vec![u16::MAX; nvars];
    for m in &lms {
        if let Some(v) = m.pure_power_var() {
            bounds[v] = bounds[v].min(m.exponent(v));
        }
    }
    if bounds.contains(&u16::MAX) {
        return StaircaseCount { is_zero_dimensional: false, standard_monomial_count: None };
    }
    let mut exps = vec![0u16; nvars];
    let count = count_below(&lms, &bounds, &mut exps, 0);
    StaircaseCount { is_zero_dimensional: true, standard_monomial_count: Some(count) }
}

fn count_below(lms: &[Monomial], bounds: &[u16], exps: &mut [u16], var: usize) -> u64 {
    if var == exps.len() {
        return 1;
    }
    let mut total = 0;
    for e in 0..bounds[var] {
        exps[var] = e;
        let m = Monomial::from_exponents(exps);
        // divisibility is monotone in e, so the first hit ends this row
        if lms.iter().any(|lm| lm.divides(&m)) {
            break;
        }
        total += count_below(lms, bounds, exps, var + 1);
    }
    exps[var] = 0;
    total
}

/// Helper for tests and diagnostics: every S-polynomial reduces to zero.
pub fn is_groebner_basis(gens: &[MultiPoly]) -> bool {
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if !reduce(&s_polynomial(&gens[i], &gens[j]), gens).is_zero() {
                return false;
            }
        }
    }
    true
}
