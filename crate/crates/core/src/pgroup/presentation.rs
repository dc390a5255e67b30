//! Power-commutator presentations and their JSON file format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word as `(generator name, exponent)` syllables; serialized as
/// `[["a", 2], ["d", 1]]`.
pub type Word = Vec<(String, i64)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    /// Relative order: `gen^order` is rewritten by the power relation.
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRelation {
    pub gen: String,
    pub word: Word,
}

/// `(hi, lo) = word` with `hi` after `lo` in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorRelation {
    pub hi: String,
    pub lo: String,
    pub word: Word,
}

/// A presented p-group of nominal order `p^m`.
///
/// Power relations default to `gen^order = 1` and commutator relations to
/// the identity when omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcPresentation {
    pub p: u32,
    pub m: u32,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub powers: Vec<PowerRelation>,
    #[serde(default)]
    pub commutators: Vec<CommutatorRelation>,
}

/// Relations resolved to generator indices.
#[derive(Clone, Debug)]
pub(crate) struct Resolved {
    pub orders: Vec<u32>,
    /// `powers[i]` is the right-hand side of `g_i^{o_i}`.
    pub powers: Vec<Vec<(usize, i64)>>,
    /// `(hi, lo) -> rhs`, only the nontrivial ones.
    pub commutators: BTreeMap<(usize, usize), Vec<(usize, i64)>>,
}

impl PcPresentation {
    pub fn nominal_order(&self) -> Option<usize> {
        (self.p as usize).checked_pow(self.m)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub(crate) fn resolve_word(&self, word: &Word) -> Result<Vec<(usize, i64)>> {
        word.iter()
            .map(|(name, e)| self.generator_index(name).map(|i| (i, *e)).ok_or_else(|| Error::UnknownGenerator(name.clone())))
            .collect()
    }

    /// Structural checks: names, orders, relation shapes.
    pub(crate) fn resolve(&self) -> Result<Resolved> {
        if !crate::ffield::is_prime(self.p) {
            return Err(Error::InvalidPresentation(format!("p = {} is not prime", self.p)));
        }
        if self.generators.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        let mut orders = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{}`", g.name)));
            }
            if !is_power_of(g.order, self.p) || g.order < self.p {
                return Err(Error::InvalidPresentation(format!("relative order {} of `{}` is not a power of {}", g.order, g.name, self.p)));
            }
            orders.push(g.order);
        }
        let mut powers = vec![Vec::new(); orders.len()];
        let mut seen = vec![false; orders.len()];
        for rel in &self.powers {
            let i = self.generator_index(&rel.gen).ok_or_else(|| Error::UnknownGenerator(rel.gen.clone()))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPresentation(format!("two power relations for `{}`", rel.gen)));
            }
            powers[i] = self.resolve_word(&rel.word)?;
        }
        let mut commutators = BTreeMap::new();
        for rel in &self.commutators {
            let hi = self.generator_index(&rel.hi).ok_or_else(|| Error::UnknownGenerator(rel.hi.clone()))?;
            let lo = self.generator_index(&rel.lo).ok_or_else(|| Error::UnknownGenerator(rel.lo.clone()))?;
            if hi <= lo {
                return Err(Error::InvalidPresentation(format!("commutator ({}, {}) must list the later generator first", rel.hi, rel.lo)));
            }
            let w = self.resolve_word(&rel.word)?;
            if commutators.insert((hi, lo), w).is_some() {
                return Err(Error::InvalidPresentation(format!("two commutator relations for ({}, {})", rel.hi, rel.lo)));
            }
        }
        Ok(Resolved { orders, powers, commutators })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<PcPresentation> {
        Ok(serde_json::from_str(text)?)
    }
}

pub(crate) fn is_power_of(mut n: u32, p: u32) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Assembles presentations with relators in catalog order.
#[derive(Debug)]
pub(crate) struct Builder {
    pres: PcPresentation,
}

impl Builder {
    pub fn new(p: u32, m: u32) -> Self {
        Builder { pres: PcPresentation { p, m, generators: vec![], powers: vec![], commutators: vec![] } }
    }

    pub fn gen(mut self, name: &str, order: u64) -> Self {
        self.pres.generators.push(GeneratorSpec { name: name.into(), order: order as u32 });
        self
    }

    pub fn power(mut self, gen: &str, word: &[(&str, i64)]) -> Self {
        self.pres.powers.push(PowerRelation { gen: gen.into(), word: to_word(word) });
        self
    }

    pub fn comm(mut self, hi: &str, lo: &str, word: &[(&str, i64)]) -> Self {
        self.pres.commutators.push(CommutatorRelation { hi: hi.into(), lo: lo.into(), word: to_word(word) });
        self
    }

    pub fn build(self) -> PcPresentation {
        self.pres
    }
}

pub(crate) fn to_word(w: &[(&str, i64)]) -> Word {
    w.iter().filter(|(_, e)| *e != 0).map(|(g, e)| (g.to_string(), *e)).collect()
}
