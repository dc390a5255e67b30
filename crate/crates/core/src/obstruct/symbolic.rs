//! Graded classes with indeterminate leading coefficients.
//!
//! Over a prime field the class of `b_{k_1} ⋯ b_{k_d}` is a polynomial in the
//! entries `x_{ki}` of the leading matrix. Coordinates are taken against a
//! caller-chosen basis of `I^d/I^{d+1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CoordinateSolver;
use crate::modalg::{AlgebraElement, Structure};
use crate::pgroup::Elem;

/// Polynomial over `GF(p)` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    vars: usize,
    /// exponent vector -> nonzero coefficient in `1..p`
    terms: BTreeMap<Vec<u8>, u32>,
}

impl Poly {
    pub fn zero(p: u32, vars: usize) -> Self {
        Poly { p, vars, terms: BTreeMap::new() }
    }

    pub fn constant(p: u32, vars: usize, c: i64) -> Self {
        let mut out = Poly::zero(p, vars);
        out.add_term(vec![0; vars], c.rem_euclid(p as i64) as u32);
        out
    }

    pub fn var(p: u32, vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut out = Poly::zero(p, vars);
        out.add_term(e, 1);
        out
    }

    fn add_term(&mut self, e: Vec<u8>, c: u32) {
        let slot = self.terms.entry(e).or_insert(0);
        *slot = (*slot + c) % self.p;
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: u32) -> Poly {
        let mut out = Poly::zero(self.p, self.vars);
        for (e, &x) in &self.terms {
            out.add_term(e.clone(), x * c % self.p);
        }
        out
    }

    /// Renders with the given variable names, highest-degree terms first.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<(usize, String)> = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut factors = Vec::new();
                if c != 1 || e.iter().all(|&x| x == 0) {
                    factors.push(c.to_string());
                }
                for (i, &x) in e.iter().enumerate() {
                    match x {
                        0 => {}
                        1 => factors.push(names[i].to_string()),
                        _ => factors.push(format!("{}^{x}", names[i])),
                    }
                }
                (e.iter().map(|&x| x as usize).sum(), factors.join("*"))
            })
            .collect();
        parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        parts.into_iter().map(|(_, s)| s).collect::<Vec<_>>().join(" + ")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.p - 1)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.p, self.vars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &rhs.terms {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2 % self.p);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.vars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.render(&refs))
    }
}

/// Variable `x_{ki}` of an `n × n` leading matrix has index `k n + i`.
pub fn leading_var(p: u32, n: usize, k: usize, i: usize) -> Poly {
    Poly::var(p, n * n, k * n + i)
}

/// For each word, the coordinates of its degree-`d` class against `basis`
/// as polynomials in the leading-matrix entries, with `b_k ≡ Σ x_{ki}(g_i - 1)`.
pub fn class_table(s: &Structure, gens: &[Elem], basis: &[AlgebraElement], words: &[Vec<usize>], d: usize) -> Result<Vec<Vec<Poly>>> {
    let field = s.field();
    if field.degree() != 1 {
        return Err(Error::UnsupportedField("symbolic classes need a prime field".into()));
    }
    let p = field.characteristic();
    let n = gens.len();
    let width = s.quotient_dim(d);
    let rows = basis.iter().map(|x| s.class_in_quotient(x, d)).collect::<Result<Vec<_>>>()?;
    if basis.len() != width {
        return Err(Error::WrongCardinality { expected: width, got: basis.len() });
    }
    let solver = CoordinateSolver::new(field, width, &rows)
        .ok_or_else(|| Error::Malformed("the given elements are not a basis of the graded piece".into()))?;
    let alg = s.algebra();
    // coordinates of every generator word against `basis`
    let mut gen_coords = Vec::with_capacity(n.pow(d as u32));
    for flat in 0..n.pow(d as u32) {
        let mut x = alg.one();
        for j in (0..d).rev() {
            x = alg.mul(&x, &alg.g_minus_one(gens[flat / n.pow(j as u32) % n]));
        }
        let class = s.class_in_quotient(&x, d)?;
        gen_coords.push(solver.solve(&class).expect("class lies in the span of a basis"));
    }
    let mut out = Vec::with_capacity(words.len());
    for word in words {
        if word.len() != d || word.iter().any(|&k| k >= n) {
            return Err(Error::Malformed(format!("word {word:?} does not have length {d} over {n} letters")));
        }
        let mut row = vec![Poly::zero(p, n * n); width];
        for (flat, coords) in gen_coords.iter().enumerate() {
            let mut monomial = Poly::constant(p, n * n, 1);
            for (j, &k) in word.iter().enumerate() {
                let i = flat / n.pow((d - 1 - j) as u32) % n;
                monomial = &monomial * &leading_var(p, n, k, i);
            }
            for (c, entry) in coords.iter().zip(row.iter_mut()) {
                if !c.is_zero() {
                    *entry = &*entry + &monomial.scale(c.index() as u32);
                }
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// One row of a table comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowComparison {
    pub label: String,
    pub expected: Vec<String>,
    pub computed: Vec<String>,
    pub matches: bool,
    /// Columns that differ.
    pub mismatched_columns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableComparison {
    pub rows: Vec<RowComparison>,
    pub matching_rows: usize,
    pub mismatches: Vec<String>,
}

pub fn compare(labels: &[&str], expected: &[Vec<Poly>], computed: &[Vec<Poly>], names: &[&str]) -> TableComparison {
    let rows: Vec<RowComparison> = labels
        .iter()
        .zip(expected.iter().zip(computed))
        .map(|(label, (e, c))| {
            let mismatched_columns: Vec<usize> = (0..e.len().max(c.len())).filter(|&j| e.get(j) != c.get(j)).collect();
            RowComparison {
                label: label.to_string(),
                expected: e.iter().map(|x| x.render(names)).collect(),
                computed: c.iter().map(|x| x.render(names)).collect(),
                matches: mismatched_columns.is_empty(),
                mismatched_columns,
            }
        })
        .collect();
    let mismatches = rows
        .iter()
        .flat_map(|r| {
            r.mismatched_columns.iter().map(move |&j| {
                format!(
                    "{} col {}: expected {}, computed {}",
                    r.label,
                    j + 1,
                    r.expected.get(j).map_or("-", String::as_str),
                    r.computed.get(j).map_or("-", String::as_str)
                )
            })
        })
        .collect();
    TableComparison { matching_rows: rows.iter().filter(|r| r.matches).count(), rows, mismatches }
}
