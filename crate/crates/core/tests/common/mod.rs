//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's linear algebra or ideal machinery; only group
//! multiplication is borrowed from the library.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use fmb_core::ffield::Field;
use fmb_core::fmb::BasisCandidate;
use fmb_core::modalg::{AlgebraElement, Structure};
use fmb_core::pgroup::{catalog, Group};

pub fn group(spec: &str, kv: &[(&str, i64)]) -> Arc<Group> {
    Arc::new(catalog::group_kv(spec, kv).unwrap_or_else(|e| panic!("{spec}{kv:?}: {e}")))
}

pub fn structure(spec: &str, kv: &[(&str, i64)], p: u32, k: u32) -> Arc<Structure> {
    Structure::for_group(group(spec, kv), Field::new(p, k).unwrap()).unwrap()
}

/// Row-reduced span over `GF(p)`, `p` prime, vectors as `u32` residues.
#[derive(Clone, Debug)]
pub struct Span {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue")
}

impl Span {
    pub fn new(p: u32) -> Self {
        Span { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (self.p - c) * r) % self.p;
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        let v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[piv], self.p);
        let v: Vec<u32> = v.iter().map(|x| x * inv % self.p).collect();
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + (self.p - c) * r) % self.p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.rows.iter().map(|(_, r)| r)
    }
}

/// Plain convolution in `GF(p)G`.
pub fn convolve(g: &Group, p: u32, x: &[u32], y: &[u32]) -> Vec<u32> {
    let mut out = vec![0; g.order()];
    for (a, &ca) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
        for (b, &cb) in y.iter().enumerate().filter(|(_, c)| **c != 0) {
            let ab = g.mul(a, b);
            out[ab] = (out[ab] + ca * cb) % p;
        }
    }
    out
}

pub fn g_minus_one(g: &Group, p: u32, x: usize) -> Vec<u32> {
    let mut v = vec![0; g.order()];
    v[x] = (v[x] + 1) % p;
    v[0] = (v[0] + p - 1) % p;
    v
}

/// `I, I², …` until zero, using `I^n = I^{n-1}·(g_i - 1)` over generators.
pub fn ideal_powers(g: &Group, p: u32) -> Vec<Span> {
    let mut first = Span::new(p);
    for x in 1..g.order() {
        first.insert(g_minus_one(g, p, x));
    }
    let gens: Vec<Vec<u32>> = g.generators().iter().map(|&x| g_minus_one(g, p, x)).collect();
    let mut out = vec![first];
    while out.last().unwrap().rank() > 0 {
        let mut next = Span::new(p);
        for v in out.last().unwrap().vectors() {
            for h in &gens {
                next.insert(convolve(g, p, v, h));
            }
        }
        out.push(next);
    }
    out
}

/// Residues of a prime-field algebra element.
pub fn residues(x: &AlgebraElement) -> Vec<u32> {
    x.coeffs().iter().map(|c| c.index() as u32).collect()
}

/// Brute-force FMB check over a prime field: a linear basis closed under
/// products up to zero whose members in `I^n` span `I^n` for every `n`.
pub fn oracle_is_fmb(s: &Structure, b: &BasisCandidate) -> bool {
    let g = s.group();
    let p = g.p();
    let vecs: Vec<Vec<u32>> = b.elements.iter().map(residues).collect();
    let mut span = Span::new(p);
    if vecs.iter().any(|v| !span.insert(v.clone())) || span.rank() != g.order() {
        return false;
    }
    let set: HashSet<&Vec<u32>> = vecs.iter().collect();
    for x in &vecs {
        for y in &vecs {
            let xy = convolve(g, p, x, y);
            if xy.iter().any(|&c| c != 0) && !set.contains(&xy) {
                return false;
            }
        }
    }
    ideal_powers(g, p).iter().all(|power| {
        let mut inside = Span::new(p);
        for v in vecs.iter().filter(|v| power.contains(v)) {
            inside.insert(v.clone());
        }
        inside.rank() == power.rank()
    })
}

/// Partitions of `n` with parts at most `max`, largest part first.
pub fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n.min(max))
        .rev()
        .flat_map(|first| {
            partitions(n - first, first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Every abelian `p`-group of order `p^1 … p^max_exp`, as product specs.
pub fn abelian_specs(p: u32, max_exp: u32) -> Vec<String> {
    (1..=max_exp)
        .flat_map(|n| partitions(n, n))
        .map(|parts| parts.iter().map(|e| format!("C(p={p},n={e})")).collect::<Vec<_>>().join("x"))
        .collect()
}
