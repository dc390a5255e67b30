//! Exhaustive search for an FMB of a small group algebra.
//!
//! An FMB is `{1}` together with the distinct nonzero words in its depth-one
//! elements `b_1, …, b_n`, so the search ranges over the `b_k`. They are fixed
//! one filtration layer at a time: once all `b_k` are known modulo `I^L`,
//! every word of length at least two is known modulo `I^{L+1}`, which is
//! enough to test degrees `2..=L`. At each tested degree the words of that
//! depth must have pairwise equal-or-independent classes spanning the layer,
//! and words with equal classes must agree on everything known.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{weight_one_generators, LeadingMatrix, MatrixRecord, MAX_MATRIX_SPACE};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldSpec, Scalar};
use crate::fmb::{self, BasisCandidate, BasisFile};
use crate::linalg::{self, Echelon};
use crate::modalg::Structure;
use crate::pgroup::GroupDescriptor;

pub const MAX_SEARCH_ORDER: usize = 16;
pub const MAX_SEARCH_FIELD: usize = 4;
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Leading matrices searched concurrently; results merge in index order.
const BATCH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Found,
    Exhausted,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub group: GroupDescriptor,
    pub field: FieldSpec,
    pub budget: u64,
    pub nodes: u64,
    /// Invertible leading matrices whose subtrees were entered.
    pub matrices_examined: u64,
    pub outcome: SearchOutcome,
    pub matrix: Option<MatrixRecord>,
    pub basis: Option<BasisFile>,
    /// Leaves that passed every pruning test but failed verification.
    pub verification_failures: u64,
}

pub struct SearchResult {
    pub report: SearchReport,
    pub basis: Option<BasisCandidate>,
}

/// Products of regular basis elements in regular coordinates.
struct RegularMul {
    dim: usize,
    table: Vec<Vec<Scalar>>,
}

impl RegularMul {
    fn new(s: &Structure) -> Self {
        let alg = s.algebra();
        let reg = &s.regular().elements;
        let dim = reg.len();
        let table = (0..dim * dim).map(|ij| s.regular_coords(&alg.mul(&reg[ij / dim], &reg[ij % dim]))).collect();
        RegularMul { dim, table }
    }

    fn mul(&self, field: &Field, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::ZERO; self.dim];
        for (i, &xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                linalg::axpy(field, &mut out, field.mul(xi, yj), &self.table[i * self.dim + j]);
            }
        }
        out
    }
}

enum Step {
    Found(Vec<Vec<Scalar>>),
    Exhausted,
    Budget,
}

struct Searcher {
    structure: Arc<Structure>,
    field: Field,
    mul: RegularMul,
    weights: Vec<usize>,
    nilpotency: usize,
    /// Regular coordinate of `u_{1i} - 1` for each weight-one generator.
    leading_coords: Vec<usize>,
}

impl Searcher {
    fn new(structure: Arc<Structure>) -> Self {
        let field = structure.field().clone();
        let mul = RegularMul::new(&structure);
        let reg = structure.regular();
        let reps = &structure.jennings().representatives;
        let leading_coords = weight_one_generators(&structure)
            .iter()
            .map(|&g| {
                let pos = reps.iter().position(|&(w, r)| w == 1 && r == g).expect("weight-one representative");
                (0..reg.exponents.len())
                    .find(|&i| reg.weights[i] == 1 && reg.exponents[i][pos] == 1)
                    .expect("regular element of a weight-one representative")
            })
            .collect();
        Searcher { weights: reg.weights.clone(), nilpotency: structure.nilpotency_index(), field, mul, leading_coords, structure }
    }

    fn truncate(&self, x: &mut [Scalar], modulus: usize) {
        for (c, &w) in x.iter_mut().zip(&self.weights) {
            if w >= modulus {
                *c = Scalar::ZERO;
            }
        }
    }

    /// Distinct nonzero images modulo `I^{level+1}` of the words of length
    /// at least two, given `bs` modulo `I^level`; `None` once they outnumber
    /// what a consistent assignment allows.
    fn words(&self, bs: &[Vec<Scalar>], level: usize) -> Option<Vec<Vec<Scalar>>> {
        let cap: usize = (2..=level).map(|d| self.structure.quotient_dim(d)).sum();
        let mut seen = HashSet::new();
        let mut out: Vec<Vec<Scalar>> = Vec::new();
        let mut frontier: Vec<Vec<Scalar>> = bs.to_vec();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for b in bs {
                    let mut x = self.mul.mul(&self.field, w, b);
                    self.truncate(&mut x, level + 1);
                    if linalg::is_zero(&x) || !seen.insert(x.clone()) {
                        continue;
                    }
                    if seen.len() > cap {
                        return None;
                    }
                    out.push(x.clone());
                    next.push(x);
                }
            }
            frontier = next;
        }
        Some(out)
    }

    /// Degrees `2..=level` pass, with `bs` known modulo `I^level`.
    fn consistent(&self, bs: &[Vec<Scalar>], level: usize) -> Option<Vec<Vec<Scalar>>> {
        let words = self.words(bs, level)?;
        let s = &self.structure;
        let mut by_class: Vec<HashMap<Vec<Scalar>, usize>> = vec![HashMap::new(); level + 1];
        for (idx, w) in words.iter().enumerate() {
            let d = s.depth_of_coords(w).expect("nonzero word");
            let class: Vec<Scalar> = s.weight_indices(d).iter().map(|&i| w[i]).collect();
            if let Some(&other) = by_class[d].get(&class) {
                if words[other] != *w {
                    return None;
                }
            } else {
                by_class[d].insert(class, idx);
            }
        }
        for (d, classes) in by_class.iter().enumerate().skip(2) {
            let width = s.quotient_dim(d);
            if classes.len() != width {
                return None;
            }
            let mut ech = Echelon::new(&self.field, width);
            if !classes.keys().all(|c| ech.insert(c.clone())) {
                return None;
            }
        }
        Some(words)
    }

    fn descend(&self, level: usize, bs: &mut Vec<Vec<Scalar>>, nodes: &mut u64, budget: u64) -> Step {
        if level >= self.nilpotency {
            return Step::Found(bs.clone());
        }
        let slots = self.structure.weight_indices(level).to_vec();
        let q = self.field.order();
        let n = bs.len();
        let free = n * slots.len();
        let total = (q as u64).saturating_pow(free as u32);
        let mut digits = vec![0usize; free];
        for step in 0..total {
            if step > 0 {
                // advance the base-q counter, last slot fastest
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < q {
                        break;
                    }
                    *d = 0;
                }
            }
            *nodes += 1;
            if *nodes > budget {
                return Step::Budget;
            }
            for (t, &digit) in digits.iter().enumerate() {
                bs[t / slots.len()][slots[t % slots.len()]] = self.field.scalar(digit).expect("digit below q");
            }
            if self.consistent(bs, level + 1).is_none() {
                continue;
            }
            match self.descend(level + 1, bs, nodes, budget) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        for b in bs.iter_mut() {
            for &i in &slots {
                b[i] = Scalar::ZERO;
            }
        }
        Step::Exhausted
    }

    /// Basis `{1} ∪ {b_k} ∪ words` from exact depth-one elements.
    fn assemble(&self, bs: &[Vec<Scalar>]) -> BasisCandidate {
        let s = &self.structure;
        let words = self.words(bs, self.nilpotency).unwrap_or_default();
        let mut elements = vec![s.algebra().one()];
        elements.extend(bs.iter().chain(&words).map(|c| s.from_regular_coords(c)));
        BasisCandidate::new(elements)
    }

    /// Searches below one leading matrix.
    fn run(&self, a: &LeadingMatrix, budget: u64) -> Result<(Step, u64, u64, Option<BasisCandidate>)> {
        let dim = self.mul.dim;
        let mut bs: Vec<Vec<Scalar>> = (0..a.n())
            .map(|k| {
                let mut v = vec![Scalar::ZERO; dim];
                for (i, &c) in self.leading_coords.iter().enumerate() {
                    v[c] = a.get(k, i);
                }
                v
            })
            .collect();
        let mut nodes = 1;
        let mut failures = 0;
        if self.consistent(&bs, 2).is_none() {
            return Ok((Step::Exhausted, nodes, failures, None));
        }
        match self.descend(2, &mut bs, &mut nodes, budget) {
            Step::Found(exact) => {
                let cand = self.assemble(&exact);
                if fmb::verify(&self.structure, &cand)?.pass {
                    return Ok((Step::Found(exact), nodes, failures, Some(cand)));
                }
                // unreachable if the pruning tests are necessary conditions
                failures += 1;
                Ok((Step::Exhausted, nodes, failures, None))
            }
            other => Ok((other, nodes, failures, None)),
        }
    }
}

/// Depth-first search over all invertible leading matrices in index order.
pub fn full_search(s: &Arc<Structure>, budget: u64) -> Result<SearchResult> {
    full_search_with_cap(s, budget, MAX_SEARCH_ORDER)
}

/// [`full_search`] with a caller-chosen bound on `|G|`.
pub fn full_search_with_cap(s: &Arc<Structure>, budget: u64, max_order: usize) -> Result<SearchResult> {
    let field = s.field().clone();
    if s.dim() > max_order || field.order() > MAX_SEARCH_FIELD {
        return Err(Error::ParameterOutOfRange(format!(
            "full search needs |G| <= {max_order} and q <= {MAX_SEARCH_FIELD}, got {} and {}",
            s.dim(),
            field.order()
        )));
    }
    let searcher = Searcher::new(s.clone());
    let n = searcher.leading_coords.len();
    let q = field.order() as u64;
    let space = q.pow((n * n) as u32);
    if space > MAX_MATRIX_SPACE {
        return Err(Error::BudgetExceeded(format!("{space} leading matrices")));
    }
    let matrices: Vec<(u64, LeadingMatrix)> =
        (0..space).map(|i| (i, LeadingMatrix::from_index(&field, n, i))).filter(|(_, a)| !a.det(&field).is_zero()).collect();

    let mut nodes = 0u64;
    let mut examined = 0u64;
    let mut verification_failures = 0u64;
    let mut found = None;
    let mut outcome = SearchOutcome::Exhausted;
    'batches: for batch in matrices.chunks(BATCH) {
        let remaining = budget - nodes;
        let results: Vec<_> = batch.par_iter().map(|(i, a)| (*i, a, searcher.run(a, remaining))).collect();
        for (index, a, result) in results {
            let (step, used, failures, cand) = result?;
            nodes += used;
            examined += 1;
            verification_failures += failures;
            if nodes > budget || matches!(step, Step::Budget) {
                nodes = nodes.min(budget);
                outcome = SearchOutcome::BudgetExhausted;
                break 'batches;
            }
            if let Step::Found(_) = step {
                found = Some((index, a.clone(), cand.expect("verified candidate")));
                outcome = SearchOutcome::Found;
                break 'batches;
            }
        }
    }
    let g = s.group();
    let (matrix, basis_file, basis) = match found {
        Some((index, a, cand)) => (Some(a.record(&field, index)), Some(BasisFile::from_candidate(s, &cand)), Some(cand)),
        None => (None, None, None),
    };
    Ok(SearchResult {
        report: SearchReport {
            group: g.descriptor().clone(),
            field: field.spec(),
            budget,
            nodes,
            matrices_examined: examined,
            outcome,
            matrix,
            basis: basis_file,
            verification_failures,
        },
        basis,
    })
}
