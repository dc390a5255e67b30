//! Realizes a presentation as a permutation action on the right cosets of
//! the trivial subgroup (Hasse–Lagrange–Todd–Coxeter, HLT strategy).
//!
//! Catalog presentations may put earlier generators on the right-hand side
//! of commutator relations (`(c,a) = a²d`), so the generator order need not
//! be a polycyclic series. Enumeration has no such requirement; the normal
//! form is read off and checked afterwards.

use crate::error::{Error, Result};

use super::presentation::Resolved;

const UNDEF: u32 = u32::MAX;

/// Default limit on the number of cosets ever defined.
pub const COSET_BUDGET: usize = 1_000_000;

/// Right action of each generator on the cosets, indexed `[gen][coset]`.
#[derive(Debug)]
pub(crate) struct Action {
    pub cosets: usize,
    pub forward: Vec<Vec<u32>>,
}

/// Columns `2i` and `2i+1` are `g_i` and `g_i^{-1}`.
fn letters(word: &[(usize, i64)]) -> Vec<usize> {
    let mut out = Vec::new();
    for &(g, e) in word {
        let col = if e >= 0 { 2 * g } else { 2 * g + 1 };
        out.extend(std::iter::repeat_n(col, e.unsigned_abs() as usize));
    }
    out
}

fn inverse_letters(word: &[usize]) -> Vec<usize> {
    word.iter().rev().map(|&x| x ^ 1).collect()
}

pub(crate) fn relators(rel: &Resolved) -> Vec<Vec<usize>> {
    let r = rel.orders.len();
    let mut out = Vec::new();
    for i in 0..r {
        let mut w = vec![2 * i; rel.orders[i] as usize];
        w.extend(inverse_letters(&letters(&rel.powers[i])));
        out.push(w);
    }
    for hi in 0..r {
        for lo in 0..hi {
            let mut w = vec![2 * hi + 1, 2 * lo + 1, 2 * hi, 2 * lo];
            if let Some(rhs) = rel.commutators.get(&(hi, lo)) {
                w.extend(inverse_letters(&letters(rhs)));
            }
            out.push(w);
        }
    }
    out
}

struct Table {
    cols: usize,
    data: Vec<u32>,
    parent: Vec<u32>,
    budget: usize,
}

impl Table {
    fn new(cols: usize, budget: usize) -> Self {
        Table { cols, data: vec![UNDEF; cols], parent: vec![0], budget }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.data[c as usize * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.data[c as usize * self.cols + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        if self.len() >= self.budget {
            return Err(Error::EnumerationBudget(self.budget));
        }
        let n = self.len() as u32;
        self.parent.push(n);
        self.data.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        Ok(())
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi as usize] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != UNDEF {
                    self.merge(f1, ex, &mut queue);
                } else {
                    let fx = self.get(f1, x ^ 1);
                    if fx != UNDEF {
                        self.merge(e1, fx, &mut queue);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, x ^ 1, e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// Enumerates the cosets of the trivial subgroup; coset 0 is the identity.
pub(crate) fn enumerate(rel: &Resolved, budget: usize) -> Result<Action> {
    let gens = rel.orders.len();
    let cols = 2 * gens;
    let rels = relators(rel);
    let mut t = Table::new(cols, budget);
    let mut c = 0u32;
    while (c as usize) < t.len() {
        if t.live(c) {
            for r in &rels {
                t.scan_and_fill(c, r)?;
                if !t.live(c) {
                    break;
                }
            }
            if t.live(c) {
                for x in 0..cols {
                    if t.get(c, x) == UNDEF {
                        t.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    // compact the live cosets
    let mut index = vec![UNDEF; t.len()];
    let mut live = Vec::new();
    for c in 0..t.len() as u32 {
        if t.live(c) {
            index[c as usize] = live.len() as u32;
            live.push(c);
        }
    }
    let mut forward = vec![vec![0u32; live.len()]; gens];
    for (new, &old) in live.iter().enumerate() {
        for (g, row) in forward.iter_mut().enumerate() {
            let target = t.get(old, 2 * g);
            debug_assert_ne!(target, UNDEF, "incomplete coset table");
            let target = t.rep(target);
            row[new] = index[target as usize];
        }
    }
    Ok(Action { cosets: live.len(), forward })
}
