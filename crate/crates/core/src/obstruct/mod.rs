//! Nonexistence certificates.
//!
//! Every candidate FMB `B` has exactly `n = dim I/I²` elements of depth one,
//! `b_k ≡ Σ α_ki (u_i - 1) mod I²` with `det(α) ≠ 0`. The class of a product
//! of `d` of them in `I^d/I^{d+1}` depends on `α` alone, so each invertible
//! `α` can be tested against conditions every FMB must satisfy. No survivor
//! means no FMB over the given field.

pub mod search;
pub mod symbolic;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Field, FieldSpec, Scalar};
use crate::linalg::{self, Echelon};
use crate::modalg::Structure;
use crate::pgroup::{Elem, GroupDescriptor};

/// Largest `n` handled by matrix enumeration.
pub const MAX_RANK: usize = 4;
/// Cap on `q^{n²}`, the size of the enumerated matrix space.
pub const MAX_MATRIX_SPACE: u64 = 100_000_000;
/// Per-matrix failure tags are listed when at most this many matrices exist.
pub const MAX_LISTED_MATRICES: u64 = 4096;
const CHUNK: u64 = 1 << 15;

/// Necessary conditions, in evaluation order N1, N4, N3, N2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// Degree-2 classes of length-2 words span `I²/I³`.
    N1,
    /// Equal nonzero degree-2 classes have equal one-letter extensions in degree 3.
    N2,
    /// Degree-3 classes of length-3 words span `I³/I⁴`.
    N3,
    /// Some pair `b_k, b_s` fails to commute to leading order.
    N4,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which form of the span conditions N1 and N3 is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rules {
    /// Spanning only.
    Span,
    /// Spanning, and distinct nonzero classes are linearly independent:
    /// equal classes are one basis element, distinct depth-`d` basis
    /// elements are independent modulo `I^{d+1}`.
    #[default]
    Independence,
}

/// `n × n` matrix over the field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeadingMatrix {
    n: usize,
    entries: Vec<Scalar>,
}

impl LeadingMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Scalar::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Scalar::ONE;
        }
        LeadingMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("leading matrix must be square".into()));
        }
        Ok(LeadingMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    /// The matrix with base-`q` digits of `index`, first entry most significant.
    pub fn from_index(field: &Field, n: usize, mut index: u64) -> Self {
        let q = field.order() as u64;
        let mut entries = vec![Scalar::ZERO; n * n];
        for e in entries.iter_mut().rev() {
            *e = field.scalar((index % q) as usize).expect("digit below q");
            index /= q;
        }
        LeadingMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize) -> Scalar {
        self.entries[k * self.n + i]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.n.max(1)).map(<[Scalar]>::to_vec).collect()
    }

    pub fn det(&self, field: &Field) -> Scalar {
        let n = self.n;
        let mut m = self.rows();
        let mut det = Scalar::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Scalar::ZERO;
            };
            if piv != col {
                m.swap(piv, col);
                det = field.neg(det);
            }
            let pv = m[col][col];
            det = field.mul(det, pv);
            let inv = field.inv(pv).expect("nonzero pivot");
            for r in col + 1..n {
                let t = field.mul(m[r][col], inv);
                if !t.is_zero() {
                    let (top, bottom) = m.split_at_mut(r);
                    linalg::axpy(field, &mut bottom[0], field.neg(t), &top[col]);
                }
            }
        }
        det
    }

    pub fn record(&self, field: &Field, index: u64) -> MatrixRecord {
        MatrixRecord {
            index,
            rows: self.rows().iter().map(|r| r.iter().map(|&x| field.to_json_coeffs(x)).collect()).collect(),
            det: field.to_json_coeffs(self.det(field)),
        }
    }
}

/// A leading matrix in report form; scalars as coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub index: u64,
    pub rows: Vec<Vec<Vec<u32>>>,
    pub det: Vec<u32>,
}

/// `|GL_n(q)| = Π_{i<n} (q^n - q^i)`
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

/// Weight-one Jennings representatives `u_{11}, …, u_{1n}`.
pub fn weight_one_generators(s: &Structure) -> Vec<Elem> {
    s.jennings().representatives.iter().filter(|(w, _)| *w == 1).map(|&(_, g)| g).collect()
}

/// Class of `b_{k_1} ⋯ b_{k_d}` in `I^d/I^{d+1}`, computed by multiplying the
/// leading parts `Σ α_ki (u_i - 1)` in `KG`.
pub fn graded_word_class(s: &Structure, gens: &[Elem], a: &LeadingMatrix, word: &[usize], d: usize) -> Result<Vec<Scalar>> {
    if !(2..=3).contains(&d) || word.len() != d {
        return Err(Error::ParameterOutOfRange(format!(
            "graded classes are defined for words of length 2 or 3, got {} at degree {d}",
            word.len()
        )));
    }
    let alg = s.algebra();
    let leading: Vec<_> = (0..a.n())
        .map(|k| {
            let mut x = alg.zero();
            for (i, &g) in gens.iter().enumerate() {
                alg.add_scaled(&mut x, a.get(k, i), &alg.g_minus_one(g));
            }
            x
        })
        .collect();
    let mut product = alg.one();
    for &k in word {
        product = alg.mul(&product, leading.get(k).ok_or_else(|| Error::ParameterOutOfRange(format!("word letter {k}")))?);
    }
    s.class_in_quotient(&product, d)
}

/// Classes of generator words, contracted against leading matrices.
pub struct Engine {
    structure: Arc<Structure>,
    gens: Vec<Elem>,
    degree: usize,
    rules: Rules,
    /// `tensors[d - 2][i_1 n^{d-1} + … + i_d]` is the class of `Π (u_{i_j} - 1)`.
    tensors: Vec<Vec<Vec<Scalar>>>,
}

impl Engine {
    pub fn new(structure: Arc<Structure>, degree: usize, rules: Rules) -> Result<Self> {
        if !(2..=3).contains(&degree) {
            return Err(Error::ParameterOutOfRange(format!("degree must be 2 or 3, got {degree}")));
        }
        if structure.group().is_abelian() {
            return Err(Error::EngineInapplicable(format!("{} is abelian", structure.group().label())));
        }
        let gens = weight_one_generators(&structure);
        let n = gens.len();
        if n > MAX_RANK {
            return Err(Error::BudgetExceeded(format!("{n} generators exceed the enumeration limit of {MAX_RANK}")));
        }
        let alg = structure.algebra();
        let mut tensors = Vec::new();
        for d in 2..=degree {
            let mut t = Vec::with_capacity(n.pow(d as u32));
            for flat in 0..n.pow(d as u32) {
                let mut x = alg.one();
                for j in (0..d).rev() {
                    let i = flat / n.pow(j as u32) % n;
                    x = alg.mul(&x, &alg.g_minus_one(gens[i]));
                }
                t.push(structure.class_in_quotient(&x, d)?);
            }
            tensors.push(t);
        }
        Ok(Engine { structure, gens, degree, rules, tensors })
    }

    pub fn structure(&self) -> &Arc<Structure> {
        &self.structure
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rules(&self) -> Rules {
        self.rules
    }

    /// Classes of all `n^d` words, indexed by `k_1 n^{d-1} + … + k_d`,
    /// for `2 <= d <= degree`.
    pub fn word_classes(&self, a: &LeadingMatrix, d: usize) -> Vec<Vec<Scalar>> {
        assert!((2..=self.degree).contains(&d), "word classes are tabulated for degrees 2..={}", self.degree);
        let field = self.structure.field();
        let n = self.rank();
        let mut cur = self.tensors[d - 2].clone();
        let width = self.structure.quotient_dim(d);
        // contract generator positions right to left; the layout
        // (prefix, letter, suffix) is preserved at each step
        for m in (1..=d).rev() {
            let ns = n.pow((d - m) as u32);
            let np = n.pow((m - 1) as u32);
            let mut next = vec![vec![Scalar::ZERO; width]; cur.len()];
            for p in 0..np {
                for suf in 0..ns {
                    for k in 0..n {
                        let dst = &mut next[(p * n + k) * ns + suf];
                        for i in 0..n {
                            let t = a.get(k, i);
                            if !t.is_zero() {
                                linalg::axpy(field, dst, t, &cur[(p * n + i) * ns + suf]);
                            }
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// First violated condition, or `None` if `a` survives.
    pub fn check(&self, a: &LeadingMatrix) -> Option<Condition> {
        let n = self.rank();
        let c2 = self.word_classes(a, 2);
        if !self.spans(&c2, 2) {
            return Some(Condition::N1);
        }
        let commuting = (0..n).all(|k| (k + 1..n).all(|s| c2[k * n + s] == c2[s * n + k] && !linalg::is_zero(&c2[k * n + s])));
        if commuting {
            return Some(Condition::N4);
        }
        if self.degree < 3 {
            return None;
        }
        let c3 = self.word_classes(a, 3);
        if !self.spans(&c3, 3) {
            return Some(Condition::N3);
        }
        for w1 in 0..n * n {
            for w2 in w1 + 1..n * n {
                if c2[w1] != c2[w2] || linalg::is_zero(&c2[w1]) {
                    continue;
                }
                for r in 0..n {
                    if c3[w1 * n + r] != c3[w2 * n + r] || c3[r * n * n + w1] != c3[r * n * n + w2] {
                        return Some(Condition::N2);
                    }
                }
            }
        }
        None
    }

    fn spans(&self, classes: &[Vec<Scalar>], d: usize) -> bool {
        let field = self.structure.field();
        let width = self.structure.quotient_dim(d);
        let rank = linalg::rank_of(field, width, classes.iter());
        if rank < width {
            return false;
        }
        match self.rules {
            Rules::Span => true,
            Rules::Independence => distinct_nonzero_independent(field, width, classes),
        }
    }
}

/// Whether the distinct nonzero vectors among `classes` are independent.
pub(crate) fn distinct_nonzero_independent(field: &Field, width: usize, classes: &[Vec<Scalar>]) -> bool {
    let mut seen = HashSet::new();
    let mut ech = Echelon::new(field, width);
    classes.iter().filter(|c| !linalg::is_zero(c) && seen.insert(c.as_slice())).all(|c| ech.insert(c.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateVerdict {
    #[serde(rename = "OBSTRUCTED")]
    Obstructed,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for CertificateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateVerdict::Obstructed => "OBSTRUCTED",
            CertificateVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub group: GroupDescriptor,
    pub field: FieldSpec,
    pub degree: usize,
    pub rules: Rules,
    pub n: usize,
    pub generators: Vec<String>,
    pub matrices_examined: u64,
    pub survivors: Vec<MatrixRecord>,
    pub verdict: CertificateVerdict,
    /// Count of matrices per first failed condition.
    pub failures: BTreeMap<Condition, u64>,
    /// First failed condition of each invertible matrix in enumeration
    /// order, `None` for survivors; omitted for large enumerations.
    pub per_matrix: Option<Vec<Option<Condition>>>,
}

/// Tests every invertible leading matrix over the field of `s`.
pub fn certify(s: &Arc<Structure>, degree: usize, rules: Rules) -> Result<ObstructionReport> {
    let engine = Engine::new(s.clone(), degree, rules)?;
    let field = s.field();
    let n = engine.rank();
    let q = field.order() as u64;
    let space = q
        .checked_pow((n * n) as u32)
        .filter(|&x| x <= MAX_MATRIX_SPACE)
        .ok_or_else(|| Error::BudgetExceeded(format!("{q}^{} leading matrices exceed {MAX_MATRIX_SPACE}", n * n)))?;
    let mut outcomes: Vec<(u64, Option<Condition>)> = Vec::new();
    let mut start = 0;
    while start < space {
        let end = (start + CHUNK).min(space);
        let chunk: Vec<(u64, Option<Condition>)> = (start..end)
            .into_par_iter()
            .filter_map(|index| {
                let a = LeadingMatrix::from_index(field, n, index);
                (!a.det(field).is_zero()).then(|| (index, engine.check(&a)))
            })
            .collect();
        outcomes.extend(chunk);
        start = end;
    }
    let examined = outcomes.len() as u64;
    debug_assert_eq!(examined, gl_order(n, q));
    let mut failures = BTreeMap::new();
    let mut survivors = Vec::new();
    for &(index, outcome) in &outcomes {
        match outcome {
            Some(c) => *failures.entry(c).or_insert(0) += 1,
            None => survivors.push(LeadingMatrix::from_index(field, n, index).record(field, index)),
        }
    }
    let per_matrix = (examined <= MAX_LISTED_MATRICES).then(|| outcomes.iter().map(|&(_, c)| c).collect());
    let g = s.group();
    Ok(ObstructionReport {
        group: g.descriptor().clone(),
        field: field.spec(),
        degree,
        rules,
        n,
        generators: engine.generators().iter().map(|&x| g.display(x)).collect(),
        matrices_examined: examined,
        verdict: if survivors.is_empty() { CertificateVerdict::Obstructed } else { CertificateVerdict::Inconclusive },
        survivors,
        failures,
        per_matrix,
    })
}
