//! Verification of filtered multiplicative bases and the basis file format.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, Scalar};
use crate::linalg::Echelon;
use crate::modalg::{AlgebraElement, Structure};
use crate::pgroup::GroupDescriptor;

/// Number of closure violations itemized in a verdict.
pub const MAX_LISTED_VIOLATIONS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCandidate {
    pub elements: Vec<AlgebraElement>,
}

impl BasisCandidate {
    pub fn new(elements: Vec<AlgebraElement>) -> Self {
        BasisCandidate { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureViolation {
    pub i: usize,
    pub j: usize,
    pub product: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub n: usize,
    /// `rank(B ∩ I^n)`
    pub basis_rank: usize,
    pub ideal_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyI {
    pub ok: bool,
    pub levels: Vec<LevelCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyII {
    pub ok: bool,
    pub pairs_scanned: usize,
    pub violations: usize,
    /// `(i, j, k)`: distinct members outside `I^k` congruent mod `I^k`.
    pub first: Option<(usize, usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyIII {
    pub ok: bool,
    /// Members in `I \ I^2`.
    pub generators: Vec<usize>,
    pub generated_rank: usize,
    pub ideal_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub size: usize,
    pub is_linear_basis: bool,
    pub rank: usize,
    pub closure_ok: bool,
    pub closure_violation_count: usize,
    pub closure_violations: Vec<ClosureViolation>,
    /// `B ∩ I` spans `I`.
    pub condition2_ok: bool,
    pub filtration_ok: bool,
    pub first_failing_level: Option<usize>,
    pub property_i: PropertyI,
    pub property_ii: PropertyII,
    pub property_iii: PropertyIII,
}

fn index_of(elements: &[AlgebraElement]) -> HashMap<&[Scalar], usize> {
    let mut map = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        map.entry(e.coeffs()).or_insert(i);
    }
    map
}

fn check_shape(s: &Structure, b: &BasisCandidate) -> Result<()> {
    if b.len() != s.dim() {
        return Err(Error::WrongCardinality { expected: s.dim(), got: b.len() });
    }
    for e in &b.elements {
        s.algebra().check(e)?;
    }
    Ok(())
}

/// Products `b_i b_j` looked up in `B`: `Ok(Some(k))`, `Ok(None)` for zero,
/// `Err(product)` outside `B ∪ {0}`. Rows are computed in parallel.
fn products(s: &Structure, b: &BasisCandidate) -> Vec<Vec<std::result::Result<Option<usize>, AlgebraElement>>> {
    let alg = s.algebra();
    let index = index_of(&b.elements);
    b.elements
        .par_iter()
        .map(|x| {
            b.elements
                .iter()
                .map(|y| {
                    let xy = alg.mul(x, y);
                    if xy.is_zero() {
                        Ok(None)
                    } else {
                        index.get(xy.coeffs()).map(|&k| Some(k)).ok_or(xy)
                    }
                })
                .collect()
        })
        .collect()
}

/// Decides whether `b` is a filtered multiplicative basis of `KG`.
pub fn verify(s: &Structure, b: &BasisCandidate) -> Result<Verdict> {
    check_shape(s, b)?;
    let field = s.field();
    let dim = s.dim();
    let rank = Echelon::from_vectors(field, dim, b.elements.iter().map(|e| e.coeffs().to_vec())).rank();
    let is_linear_basis = rank == dim;

    let mut closure_violation_count = 0;
    let mut closure_violations = Vec::new();
    for (i, row) in products(s, b).into_iter().enumerate() {
        for (j, entry) in row.into_iter().enumerate() {
            if let Err(xy) = entry {
                closure_violation_count += 1;
                if closure_violations.len() < MAX_LISTED_VIOLATIONS {
                    closure_violations.push(ClosureViolation { i, j, product: s.algebra().display(&xy) });
                }
            }
        }
    }
    let closure_ok = closure_violation_count == 0;

    let depths: Vec<Option<usize>> = b.elements.iter().map(|e| s.depth(e)).collect();
    let property_i = property_i(s, b, &depths);
    let condition2_ok = property_i.levels.first().is_some_and(|l| l.basis_rank == l.ideal_rank);
    let first_failing_level = property_i.levels.iter().find(|l| l.basis_rank != l.ideal_rank).map(|l| l.n);
    let filtration_ok = first_failing_level.is_none();
    let property_ii = property_ii(s, b, &depths);
    let property_iii = property_iii(s, b, &depths);

    let pass = is_linear_basis && closure_ok && condition2_ok && filtration_ok;
    Ok(Verdict {
        pass,
        size: b.len(),
        is_linear_basis,
        rank,
        closure_ok,
        closure_violation_count,
        closure_violations,
        condition2_ok,
        filtration_ok,
        first_failing_level,
        property_i,
        property_ii,
        property_iii,
    })
}

fn property_i(s: &Structure, b: &BasisCandidate, depths: &[Option<usize>]) -> PropertyI {
    let mut levels = Vec::new();
    for n in 1..=s.nilpotency_index() {
        let members = b.elements.iter().zip(depths).filter(|(_, d)| d.is_some_and(|d| d >= n)).map(|(e, _)| e.coeffs().to_vec());
        let basis_rank = Echelon::from_vectors(s.field(), s.dim(), members).rank();
        levels.push(LevelCheck { n, basis_rank, ideal_rank: s.ideal_rank(n) });
    }
    let ok = levels.iter().all(|l| l.basis_rank == l.ideal_rank);
    PropertyI { ok, levels }
}

/// Distinct `u, v` outside `I^k` with `u ≡ v (mod I^k)` exist iff
/// `depth(u - v) > max(depth u, depth v)`.
fn property_ii(s: &Structure, b: &BasisCandidate, depths: &[Option<usize>]) -> PropertyII {
    let alg = s.algebra();
    let n = b.len();
    let mut violations = 0;
    let mut first = None;
    for i in 0..n {
        for j in i + 1..n {
            let (Some(du), Some(dv)) = (depths[i], depths[j]) else { continue };
            let diff = alg.sub(&b.elements[i], &b.elements[j]);
            if let Some(dd) = s.depth(&diff) {
                if dd > du.max(dv) {
                    violations += 1;
                    first.get_or_insert((i, j, dd));
                }
            }
        }
    }
    PropertyII { ok: violations == 0, pairs_scanned: n * n.saturating_sub(1) / 2, violations, first }
}

/// The members in `I \ I^2` generate `I` as an algebra.
fn property_iii(s: &Structure, b: &BasisCandidate, depths: &[Option<usize>]) -> PropertyIII {
    let alg = s.algebra();
    let generators: Vec<usize> = (0..b.len()).filter(|&i| depths[i] == Some(1)).collect();
    let gens: Vec<&AlgebraElement> = generators.iter().map(|&i| &b.elements[i]).collect();
    let mut span = Echelon::new(s.field(), s.dim());
    let mut frontier: Vec<AlgebraElement> = Vec::new();
    for g in &gens {
        if span.insert(g.coeffs().to_vec()) {
            frontier.push((*g).clone());
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let xg = alg.mul(x, g);
                if span.insert(xg.coeffs().to_vec()) {
                    next.push(xg);
                }
            }
        }
        frontier = next;
    }
    let ideal_rank = s.ideal_rank(1);
    PropertyIII { ok: span.rank() == ideal_rank, generators, generated_rank: span.rank(), ideal_rank }
}

/// `table[i][j]` is the index of `b_i b_j` in `B`, or `None` for zero.
pub fn closure_table(s: &Structure, b: &BasisCandidate) -> Result<Vec<Vec<Option<usize>>>> {
    check_shape(s, b)?;
    products(s, b)
        .into_iter()
        .enumerate()
        .map(|(i, row)| row.into_iter().enumerate().map(|(j, e)| e.map_err(|_| Error::ClosureViolated(i, j))).collect())
        .collect()
}

/// Number of zero entries of a closure table.
pub fn zero_products(table: &[Vec<Option<usize>>]) -> usize {
    table.iter().flatten().filter(|e| e.is_none()).count()
}

/// On-disk basis: each element is a list of `[exponent tuple, scalar]` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisFile {
    pub group: GroupDescriptor,
    pub field: FieldSpec,
    pub elements: Vec<Vec<(Vec<u32>, Vec<u32>)>>,
}

impl BasisFile {
    pub fn from_candidate(s: &Structure, b: &BasisCandidate) -> BasisFile {
        let g = s.group();
        let f = s.field();
        let elements =
            b.elements.iter().map(|e| e.support().map(|(x, c)| (g.exponents(x).to_vec(), f.to_json_coeffs(c))).collect()).collect();
        BasisFile { group: g.descriptor().clone(), field: f.spec(), elements }
    }

    pub fn to_candidate(&self, s: &Structure) -> Result<BasisCandidate> {
        if self.field != s.field().spec() {
            return Err(Error::AlgebraMismatch);
        }
        let g = s.group();
        let alg = s.algebra();
        let elements = self
            .elements
            .iter()
            .map(|terms| {
                let mut x = alg.zero();
                for (t, c) in terms {
                    let e = g.from_exponents(t)?;
                    let c = s.field().from_json_coeffs(c)?;
                    alg.add_scaled(&mut x, c, &alg.basis(e));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisCandidate::new(elements))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<BasisFile> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("basis file: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::pgroup::catalog;
    use std::sync::Arc;

    fn structure(spec: &str, p: u32) -> Arc<Structure> {
        let g = Arc::new(catalog::group_kv(spec, &[]).unwrap());
        Structure::for_group(g, Field::new(p, 1).unwrap()).unwrap()
    }

    #[test]
    fn c2_basis_and_table() {
        let s = structure("C2", 2);
        let alg = s.algebra();
        let b = BasisCandidate::new(vec![alg.one(), alg.one_plus(1)]);
        let v = verify(&s, &b).unwrap();
        assert!(v.pass, "{v:?}");
        let t = closure_table(&s, &b).unwrap();
        assert_eq!(t, vec![vec![Some(0), Some(1)], vec![Some(1), None]]);
        assert_eq!(zero_products(&t), 1);
    }

    #[test]
    fn group_basis_fails_condition_two() {
        let s = structure("C4", 2);
        let alg = s.algebra();
        let b = BasisCandidate::new(s.group().elements().map(|g| alg.basis(g)).collect());
        let v = verify(&s, &b).unwrap();
        assert!(v.is_linear_basis && v.closure_ok);
        assert!(!v.condition2_ok && !v.pass);
    }

    #[test]
    fn wrong_cardinality() {
        let s = structure("C4", 2);
        let b = BasisCandidate::new(vec![s.algebra().one()]);
        assert!(matches!(verify(&s, &b), Err(Error::WrongCardinality { expected: 4, got: 1 })));
    }

    #[test]
    fn basis_file_round_trip() {
        let s = structure("C4", 2);
        let alg = s.algebra();
        let x = alg.g_minus_one(1);
        let b = BasisCandidate::new((0..4).map(|n| alg.pow(&x, n)).collect());
        let file = BasisFile::from_candidate(&s, &b);
        let text = file.to_json().unwrap();
        let back = BasisFile::from_json(&text).unwrap().to_candidate(&s).unwrap();
        assert_eq!(back, b);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["field"], serde_json::json!({"p": 2, "k": 1}));
        assert_eq!(v["elements"][1][0], serde_json::json!([[0], [1]]));
    }
}
