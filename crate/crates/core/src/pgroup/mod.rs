//! Finite p-groups realized from power-commutator presentations.
//!
//! Elements are indices into the lexicographic enumeration of normal-form
//! exponent tuples (first generator most significant); index 0 is the
//! identity. Multiplication and inversion are eager lookup tables.

pub mod catalog;
mod enumerate;
pub mod presentation;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use enumerate::COSET_BUDGET;
pub use presentation::{CommutatorRelation, GeneratorSpec, PcPresentation, PowerRelation, Word};

/// Largest group order the table representation accepts.
pub const MAX_ORDER: usize = 4096;

/// Exhaustive associativity is used up to this order; above it, sampling.
pub const EXHAUSTIVE_ASSOCIATIVITY: usize = 64;
pub const SAMPLED_TRIPLES: usize = 100_000;

/// Index of an element in the group's enumeration.
pub type Elem = usize;

/// Names a catalog group together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
}

impl GroupDescriptor {
    pub fn new(name: &str) -> Self {
        GroupDescriptor { name: name.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.name.clone();
        }
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.name, ps.join(","))
    }
}

/// A set of elements closed under the group operation, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<Elem>,
}

impl Subgroup {
    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

#[derive(Debug)]
pub struct Group {
    descriptor: GroupDescriptor,
    presentation: PcPresentation,
    p: u32,
    orders: Vec<u32>,
    /// Exponent tuples, in enumeration order.
    tuples: Vec<Vec<u32>>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<Elem>,
}

impl Group {
    /// Realizes `pres`; fails unless the realized order equals the product of
    /// the relative orders and `p^m`, with every tuple a distinct element.
    pub fn from_presentation(pres: &PcPresentation, descriptor: GroupDescriptor) -> Result<Group> {
        Self::with_budget(pres, descriptor, COSET_BUDGET)
    }

    pub fn with_budget(pres: &PcPresentation, descriptor: GroupDescriptor, budget: usize) -> Result<Group> {
        let resolved = pres.resolve()?;
        let nominal = pres
            .nominal_order()
            .filter(|&n| n <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidPresentation(format!("order {}^{} exceeds the limit {MAX_ORDER}", pres.p, pres.m)))?;
        let product: usize = resolved.orders.iter().map(|&o| o as usize).product();
        if product != nominal {
            return Err(Error::InvalidPresentation(format!("relative orders multiply to {product}, expected {nominal}")));
        }
        let action = enumerate::enumerate(&resolved, budget)?;
        if action.cosets != nominal {
            return Err(Error::OrderMismatch { expected: nominal, realized: action.cosets });
        }
        let tuples = all_tuples(&resolved.orders);
        let r = resolved.orders.len();
        // coset reached from the identity by each normal-form word
        let apply = |mut c: u32, t: &[u32]| {
            for (g, &e) in t.iter().enumerate() {
                for _ in 0..e {
                    c = action.forward[g][c as usize];
                }
            }
            c
        };
        let mut coset_of = Vec::with_capacity(nominal);
        let mut elem_of = vec![u16::MAX; nominal];
        for (i, t) in tuples.iter().enumerate() {
            let c = apply(0, t);
            if elem_of[c as usize] != u16::MAX {
                return Err(Error::InvalidPresentation(format!(
                    "normal forms {:?} and {:?} coincide",
                    tuples[elem_of[c as usize] as usize], t
                )));
            }
            elem_of[c as usize] = i as u16;
            coset_of.push(c);
        }
        let mut mul = vec![0u16; nominal * nominal];
        for x in 0..nominal {
            for (y, t) in tuples.iter().enumerate() {
                mul[x * nominal + y] = elem_of[apply(coset_of[x], t) as usize];
            }
        }
        let mut inv = vec![0u16; nominal];
        for x in 0..nominal {
            let y = (0..nominal).find(|&y| mul[x * nominal + y] == 0).expect("group has inverses");
            inv[x] = y as u16;
        }
        let generators = (0..r)
            .map(|g| {
                let mut t = vec![0u32; r];
                t[g] = 1;
                tuple_index(&resolved.orders, &t)
            })
            .collect();
        Ok(Group { descriptor, presentation: pres.clone(), p: pres.p, orders: resolved.orders, tuples, mul, inv, generators })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn label(&self) -> String {
        self.descriptor.label()
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.tuples.len()
    }

    pub fn relative_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn exponents(&self, x: Elem) -> &[u32] {
        &self.tuples[x]
    }

    pub fn from_exponents(&self, t: &[u32]) -> Result<Elem> {
        if t.len() != self.orders.len() || t.iter().zip(&self.orders).any(|(e, o)| e >= o) {
            return Err(Error::Malformed(format!("exponent tuple {t:?} is not a normal form")));
        }
        Ok(tuple_index(&self.orders, t))
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<Elem> {
        self.presentation.generator_index(name).map(|i| self.generators[i]).ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.order() + y] as Elem
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x] as Elem
    }

    pub fn pow(&self, x: Elem, n: i64) -> Elem {
        let base = if n < 0 { self.inv(x) } else { x };
        let mut acc = 0;
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `x⁻¹y⁻¹xy`
    pub fn commutator(&self, x: Elem, y: Elem) -> Elem {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut n = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    /// Evaluates a word in the generators.
    pub fn collect(&self, word: &[(&str, i64)]) -> Result<Elem> {
        let mut acc = 0;
        for &(name, e) in word {
            acc = self.mul(acc, self.pow(self.generator(name)?, e));
        }
        Ok(acc)
    }

    pub fn collect_word(&self, word: &Word) -> Result<Elem> {
        let w: Vec<(&str, i64)> = word.iter().map(|(g, e)| (g.as_str(), *e)).collect();
        self.collect(&w)
    }

    /// Renders an element as `a^3 c d`, or `1`.
    pub fn display(&self, x: Elem) -> String {
        let names = self.presentation.generator_names();
        let parts: Vec<String> = self.tuples[x]
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, n)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&x| self.generators.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: self.elements().collect() }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Smallest subgroup containing `gens`. In a finite group closure under
    /// multiplication suffices.
    pub fn closure<I: IntoIterator<Item = Elem>>(&self, gens: I) -> Subgroup {
        let gens: Vec<Elem> = gens.into_iter().filter(|&g| g != 0).collect();
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = vec![0];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        queue.sort_unstable();
        Subgroup { members: queue }
    }

    /// `⟨(h, k) : h ∈ H, k ∈ K⟩`
    pub fn commutator_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut gens = Vec::new();
        for &x in h.members() {
            for &y in k.members() {
                gens.push(self.commutator(x, y));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        self.closure(gens)
    }

    /// `⟨h^n : h ∈ H⟩`
    pub fn power_subgroup(&self, h: &Subgroup, n: u64) -> Subgroup {
        let mut gens: Vec<Elem> = h.members().iter().map(|&x| self.pow(x, n as i64)).collect();
        gens.sort_unstable();
        gens.dedup();
        self.closure(gens)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    /// `G^{p^n}`, generated by the `p^n`-th powers.
    pub fn agemo(&self, n: u32) -> Subgroup {
        self.power_subgroup(&self.whole(), (self.p as u64).pow(n))
    }

    /// `G'G^p`
    pub fn frattini(&self) -> Subgroup {
        let mut gens = self.derived_subgroup().members;
        gens.extend(self.agemo(1).members);
        self.closure(gens)
    }

    pub fn center(&self) -> Subgroup {
        let members = self.elements().filter(|&x| self.generators.iter().all(|&g| self.mul(x, g) == self.mul(g, x))).collect();
        Subgroup { members }
    }

    /// `G' ⊆ G⁴` for `p = 2`, `G' ⊆ G^p` for odd `p`.
    pub fn is_powerful(&self) -> bool {
        let n = if self.p == 2 { 2 } else { 1 };
        self.derived_subgroup().is_subset(&self.agemo(n))
    }

    /// The Lazard–Jennings series `M_1 = G`,
    /// `M_i = ⟨(M_{i-1}, G), M_{⌈i/p⌉}^p⟩`, up to and including the first
    /// trivial term.
    pub fn jennings_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let p = self.p as usize;
        // index 0 is unused so that series[i] = M_i
        let mut series = vec![g.clone(), g.clone()];
        while !series.last().expect("nonempty").is_trivial() {
            let i = series.len();
            let comm = self.commutator_subgroup(&series[i - 1], &g);
            let pw = self.power_subgroup(&series[i.div_ceil(p)], p as u64);
            let mut gens = comm.members;
            gens.extend(pw.members);
            series.push(self.closure(gens));
        }
        series.remove(0);
        series
    }

    /// Number of elements of each order, keyed by order.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for x in self.elements() {
            *out.entry(self.element_order(x)).or_insert(0) += 1;
        }
        out
    }
}

fn all_tuples(orders: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..o).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn tuple_index(orders: &[u32], t: &[u32]) -> usize {
    t.iter().zip(orders).fold(0, |acc, (&e, &o)| acc * o as usize + e as usize)
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub expected_order: Option<usize>,
    pub realized_order: Option<usize>,
    /// `"exhaustive"` or `"sampled"`.
    pub associativity: Option<String>,
    pub triples_checked: usize,
    pub relations_checked: usize,
    /// Element order → number of elements of that order.
    pub element_orders: BTreeMap<usize, usize>,
    pub failure: Option<String>,
    pub failure_code: Option<String>,
}

/// Realizes and checks a presentation; failures are report content.
pub fn validate(pres: &PcPresentation) -> ValidationReport {
    let mut report = ValidationReport {
        pass: false,
        expected_order: pres.nominal_order(),
        realized_order: None,
        associativity: None,
        triples_checked: 0,
        relations_checked: 0,
        element_orders: BTreeMap::new(),
        failure: None,
        failure_code: None,
    };
    let group = match Group::from_presentation(pres, GroupDescriptor::new("presentation")) {
        Ok(g) => g,
        Err(e) => {
            if let Error::OrderMismatch { realized, .. } = e {
                report.realized_order = Some(realized);
            }
            report.failure_code = Some(e.code().into());
            report.failure = Some(e.to_string());
            return report;
        }
    };
    report.realized_order = Some(group.order());
    let (assoc, failure) = group.check_associativity(0x5eed);
    report.associativity = Some(assoc.mode.into());
    report.triples_checked = assoc.triples;
    if let Some((x, y, z)) = failure {
        report.failure_code = Some("not_associative".into());
        report.failure = Some(format!(
            "({}·{})·{} != {}·({}·{})",
            group.display(x),
            group.display(y),
            group.display(z),
            group.display(x),
            group.display(y),
            group.display(z)
        ));
        return report;
    }
    match group.check_relations() {
        Ok(n) => report.relations_checked = n,
        Err(msg) => {
            report.failure_code = Some("relation_violated".into());
            report.failure = Some(msg);
            return report;
        }
    }
    report.element_orders = group.order_statistics();
    report.pass = true;
    report
}

pub(crate) struct AssociativityRun {
    pub mode: &'static str,
    pub triples: usize,
}

impl Group {
    /// Exhaustive up to [`EXHAUSTIVE_ASSOCIATIVITY`], otherwise
    /// [`SAMPLED_TRIPLES`] seeded random triples.
    pub(crate) fn check_associativity(&self, seed: u64) -> (AssociativityRun, Option<(Elem, Elem, Elem)>) {
        let n = self.order();
        let holds = |x, y, z| self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z));
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !holds(x, y, z) {
                            return (AssociativityRun { mode: "exhaustive", triples: n * n * n }, Some((x, y, z)));
                        }
                    }
                }
            }
            (AssociativityRun { mode: "exhaustive", triples: n * n * n }, None)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..SAMPLED_TRIPLES {
                let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !holds(x, y, z) {
                    return (AssociativityRun { mode: "sampled", triples: SAMPLED_TRIPLES }, Some((x, y, z)));
                }
            }
            (AssociativityRun { mode: "sampled", triples: SAMPLED_TRIPLES }, None)
        }
    }

    /// Evaluates both sides of every presented relation, including the
    /// implicit trivial ones. Returns the number checked.
    pub(crate) fn check_relations(&self) -> std::result::Result<usize, String> {
        let pres = &self.presentation;
        let names = pres.generator_names();
        let mut checked = 0;
        for (i, g) in pres.generators.iter().enumerate() {
            let lhs = self.pow(self.generators[i], g.order as i64);
            let rhs = match pres.powers.iter().find(|r| r.gen == g.name) {
                Some(r) => self.collect_word(&r.word).map_err(|e| e.to_string())?,
                None => 0,
            };
            if lhs != rhs {
                return Err(format!("{}^{} = {} but relation says {}", g.name, g.order, self.display(lhs), self.display(rhs)));
            }
            checked += 1;
        }
        for hi in 0..names.len() {
            for lo in 0..hi {
                let lhs = self.commutator(self.generators[hi], self.generators[lo]);
                let rhs = match pres.commutators.iter().find(|r| r.hi == names[hi] && r.lo == names[lo]) {
                    Some(r) => self.collect_word(&r.word).map_err(|e| e.to_string())?,
                    None => 0,
                };
                if lhs != rhs {
                    return Err(format!("({},{}) = {} but relation says {}", names[hi], names[lo], self.display(lhs), self.display(rhs)));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

#[cfg(test)]
mod tests {
    use super::presentation::Builder;
    use super::*;

    fn d8() -> Group {
        let p = Builder::new(2, 3).gen("a", 4).gen("b", 2).comm("b", "a", &[("a", 2)]).build();
        Group::from_presentation(&p, GroupDescriptor::new("D8")).unwrap()
    }

    fn q8() -> Group {
        let p = Builder::new(2, 3).gen("a", 4).gen("b", 2).power("b", &[("a", 2)]).comm("b", "a", &[("a", 2)]).build();
        Group::from_presentation(&p, GroupDescriptor::new("Q8")).unwrap()
    }

    /// Independent oracle: D8 as permutations of the square's vertices.
    #[test]
    fn d8_matches_permutation_model() {
        type Perm = [u8; 4];
        fn compose(x: &Perm, y: &Perm) -> Perm {
            // apply x then y
            let mut out = [0; 4];
            for i in 0..4 {
                out[i] = y[x[i] as usize];
            }
            out
        }
        let rot: Perm = [1, 2, 3, 0];
        let refl: Perm = [0, 3, 2, 1];
        let id: Perm = [0, 1, 2, 3];
        let g = d8();
        let perm_of = |x: Elem| {
            let t = g.exponents(x);
            let mut p = id;
            for _ in 0..t[0] {
                p = compose(&p, &rot);
            }
            for _ in 0..t[1] {
                p = compose(&p, &refl);
            }
            p
        };
        let perms: Vec<Perm> = g.elements().map(perm_of).collect();
        let mut distinct = perms.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 8);
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(perms[g.mul(x, y)], compose(&perms[x], &perms[y]));
            }
        }
        // b·a = a³b
        let ba = g.collect(&[("b", 1), ("a", 1)]).unwrap();
        assert_eq!(g.exponents(ba), &[3, 1]);
        assert_eq!(g.collect(&[]).unwrap(), 0);
    }

    #[test]
    fn q8_powers_and_orders() {
        let g = q8();
        let b = g.generator("b").unwrap();
        let a = g.generator("a").unwrap();
        assert_eq!(g.pow(b, 2), g.pow(a, 2));
        assert_eq!(g.order_statistics().get(&4), Some(&6));
        assert_eq!(g.inv(a), g.pow(a, 3));
        assert_eq!(g.mul(a, 0), a);
    }

    #[test]
    fn subgroups_of_d8() {
        let g = d8();
        let a2 = g.collect(&[("a", 2)]).unwrap();
        assert_eq!(g.derived_subgroup().members(), &[0, a2]);
        assert_eq!(g.frattini().members(), &[0, a2]);
        assert_eq!(g.center().members(), &[0, a2]);
        assert!(!g.is_powerful());
        assert!(!g.is_abelian());
        assert_eq!(g.closure([0]).members(), &[0]);
        let m = g.jennings_series();
        assert_eq!(m.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![8, 2, 1]);
    }

    #[test]
    fn inconsistent_presentation_is_rejected() {
        // a^2 = 1 with (b,a) = a forces a = 1
        let p = Builder::new(2, 2).gen("a", 2).gen("b", 2).comm("b", "a", &[("a", 1)]).build();
        let err = Group::from_presentation(&p, GroupDescriptor::new("bad")).unwrap_err();
        assert!(matches!(err, Error::OrderMismatch { expected: 4, realized: 2 }), "{err}");
        let report = validate(&p);
        assert!(!report.pass);
        assert_eq!(report.failure_code.as_deref(), Some("order_mismatch"));
    }

    #[test]
    fn validate_reports_unknown_generator() {
        let p = Builder::new(2, 3).gen("a", 2).gen("c", 2).comm("c", "a", &[("d", 1)]).build();
        let report = validate(&p);
        assert!(!report.pass);
        assert_eq!(report.failure_code.as_deref(), Some("unknown_generator"));
    }
}
