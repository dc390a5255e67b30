//! Explicit filtered multiplicative bases.
//!
//! The word families are evaluated for growing exponents until the word
//! vanishes, which nilpotency of the augmentation ideal guarantees; zero
//! and repeated words are dropped and the rest is the candidate.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::Scalar;
use crate::fmb::{self, BasisCandidate, Verdict};
use crate::linalg::Echelon;
use crate::modalg::{AlgebraElement, GroupAlgebra, Structure};
use crate::pgroup::{Elem, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Abelian,
    Product,
    G4,
    #[serde(rename = "typeA")]
    TypeA,
    #[serde(rename = "typeB")]
    TypeB,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Abelian => "abelian",
            Family::Product => "product",
            Family::G4 => "g4",
            Family::TypeA => "typeA",
            Family::TypeB => "typeB",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "abelian" => Ok(Family::Abelian),
            "product" => Ok(Family::Product),
            "g4" | "G4" => Ok(Family::G4),
            "typeA" | "typea" | "A" => Ok(Family::TypeA),
            "typeB" | "typeb" | "B" => Ok(Family::TypeB),
            _ => Err(Error::Malformed(format!("unknown basis family `{s}`"))),
        }
    }
}

/// Whether `family` is stated for the catalog group `name` with parameter `m`.
pub fn applicable(family: Family, name: &str, m: Option<i64>) -> bool {
    match (family, name, m) {
        (Family::TypeA, "G5", Some(m)) => m >= 4,
        (Family::TypeA, "G17", Some(m)) => m >= 5,
        (Family::TypeA, "G22", Some(m)) => m >= 6,
        (Family::TypeA, "G25", Some(m)) => m == 5,
        (Family::TypeB, "G13" | "G14", Some(m)) => m >= 5,
        (Family::TypeB, "G18", Some(m)) => m >= 4,
        (Family::TypeB, "G23" | "G24", Some(m)) => m >= 6,
        (Family::TypeB, "G25", Some(m)) => m > 5,
        (Family::G4, "G4", Some(4)) => true,
        _ => false,
    }
}

fn require_char2(s: &Structure) -> Result<()> {
    if s.field().characteristic() == 2 {
        Ok(())
    } else {
        Err(Error::NotApplicable("this family is defined in characteristic 2".into()))
    }
}

fn require_family(s: &Structure, family: Family) -> Result<()> {
    require_char2(s)?;
    let d = s.group().descriptor();
    if applicable(family, &d.name, d.params.get("m").copied()) {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("{family} basis is not defined for {}", d.label())))
    }
}

/// Generators of an abelian group with their orders, if the presentation
/// is a direct product of the cyclic groups they generate.
pub fn generator_decomposition(g: &Group) -> Result<Vec<(Elem, u32)>> {
    let out: Vec<(Elem, u32)> = g.generators().iter().map(|&x| (x, g.element_order(x) as u32)).collect();
    check_decomposition(g, &out)?;
    Ok(out)
}

fn check_decomposition(g: &Group, decomposition: &[(Elem, u32)]) -> Result<()> {
    if !g.is_abelian() {
        return Err(Error::NotApplicable(format!("{} is not abelian", g.label())));
    }
    let product: usize = decomposition.iter().map(|&(_, o)| o as usize).product();
    let orders_ok = decomposition.iter().all(|&(x, o)| g.element_order(x) == o as usize);
    // the products Π x_i^{e_i} are distinct iff the decomposition is direct
    let mut seen = HashSet::new();
    let mut elems = vec![0];
    for &(x, o) in decomposition {
        elems = elems.iter().flat_map(|&y| (0..o as i64).map(move |e| (y, e))).map(|(y, e)| g.mul(y, g.pow(x, e))).collect();
    }
    for e in &elems {
        seen.insert(*e);
    }
    if !orders_ok || product != g.order() || seen.len() != g.order() {
        return Err(Error::NotApplicable("not a decomposition into cyclic factors".into()));
    }
    Ok(())
}

/// `{Π (a_i - 1)^{n_i} : 0 ≤ n_i < |a_i|}`
pub fn abelian_basis(s: &Structure, decomposition: &[(Elem, u32)]) -> Result<BasisCandidate> {
    check_decomposition(s.group(), decomposition)?;
    let alg = s.algebra();
    let mut elements = vec![alg.one()];
    for &(x, o) in decomposition {
        let f = alg.g_minus_one(x);
        let mut next = Vec::with_capacity(elements.len() * o as usize);
        for e in &elements {
            let mut t = e.clone();
            for _ in 0..o {
                next.push(t.clone());
                t = alg.mul(&t, &f);
            }
        }
        elements = next;
    }
    Ok(BasisCandidate::new(elements))
}

/// `B_1 × B_2` on `K[G_1 × G_2]`, where `s` realizes the product with
/// element index `i_1·|G_2| + i_2`.
pub fn product_basis(s: &Structure, s1: &Structure, b1: &BasisCandidate, s2: &Structure, b2: &BasisCandidate) -> Result<BasisCandidate> {
    if s1.field() != s2.field() || s.field() != s1.field() {
        return Err(Error::AlgebraMismatch);
    }
    let n2 = s2.dim();
    if s.dim() != s1.dim() * n2 {
        return Err(Error::NotApplicable(format!("|G| = {} is not {}·{}", s.dim(), s1.dim(), n2)));
    }
    let f = s.field();
    let alg = s.algebra();
    let mut elements = Vec::with_capacity(b1.len() * b2.len());
    for x in &b1.elements {
        s1.algebra().check(x)?;
        for y in &b2.elements {
            s2.algebra().check(y)?;
            let mut z = alg.zero();
            let mut terms = Vec::new();
            for (g1, c1) in x.support() {
                for (g2, c2) in y.support() {
                    terms.push((g1 * n2 + g2, f.mul(c1, c2)));
                }
            }
            for (g, c) in terms {
                alg.add_scaled(&mut z, c, &alg.basis(g));
            }
            elements.push(z);
        }
    }
    Ok(BasisCandidate::new(elements))
}

/// Distinct nonzero values in order of first appearance.
fn dedup_nonzero(words: impl IntoIterator<Item = AlgebraElement>) -> Vec<AlgebraElement> {
    let mut seen = HashSet::new();
    words.into_iter().filter(|w| !w.is_zero() && seen.insert(w.clone())).collect()
}

/// `{b_2^i b_1^j b_2^k b_3^l : i, k ∈ {0,1}, j, l ∈ {0..3}}` with
/// `b_1 = (1+a) + (1+c)`, `b_2 = 1+c`, `b_3 = 1+d`.
pub fn g4_basis(s: &Structure) -> Result<BasisCandidate> {
    require_family(s, Family::G4)?;
    let alg = s.algebra();
    let g = s.group();
    let (a, c, d) = (alg.one_plus(g.generator("a")?), alg.one_plus(g.generator("c")?), alg.one_plus(g.generator("d")?));
    let b1 = alg.add(&a, &c);
    let (b2, b3) = (c, d);
    let mut words = Vec::new();
    for i in 0..2 {
        for j in 0..4 {
            for k in 0..2 {
                for l in 0..4 {
                    let w = alg.mul(&alg.mul(&alg.pow(&b2, i), &alg.pow(&b1, j)), &alg.mul(&alg.pow(&b2, k), &alg.pow(&b3, l)));
                    words.push(w);
                }
            }
        }
    }
    let elements = dedup_nonzero(words);
    if elements.len() != s.dim() {
        return Err(Error::WrongCardinality { expected: s.dim(), got: elements.len() });
    }
    Ok(BasisCandidate::new(elements))
}

/// `u = (1+a) + μ(1+c)`, `v = 1+c`.
pub fn uv(s: &Structure, mu: Scalar) -> Result<(AlgebraElement, AlgebraElement)> {
    let alg = s.algebra();
    let g = s.group();
    let a = alg.one_plus(g.generator("a")?);
    let v = alg.one_plus(g.generator("c")?);
    let u = alg.add(&a, &alg.scale(mu, &v));
    Ok((u, v))
}

/// `prefix · repeat^n · suffix` for `n = 0, 1, …` until the word vanishes.
fn family_words(
    alg: &GroupAlgebra,
    limit: usize,
    prefix: &AlgebraElement,
    repeat: &AlgebraElement,
    suffix: &AlgebraElement,
) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    let mut left = prefix.clone();
    for _ in 0..=limit {
        let w = alg.mul(&left, suffix);
        if w.is_zero() {
            break;
        }
        out.push(w);
        left = alg.mul(&left, repeat);
    }
    out
}

/// Type-A words `{1, u^i, vu^j, vuvu^k, uvu^l}`.
pub fn type_a_words(s: &Structure, mu: Scalar) -> Result<Vec<AlgebraElement>> {
    let alg = s.algebra();
    let (u, v) = uv(s, mu)?;
    let one = alg.one();
    let limit = s.nilpotency_index();
    let vuv = alg.product([&v, &u, &v]);
    let uvw = alg.mul(&u, &v);
    let mut words = vec![one.clone()];
    for prefix in [&one, &v, &vuv, &uvw] {
        words.extend(family_words(alg, limit, prefix, &u, &one));
    }
    Ok(dedup_nonzero(words))
}

/// Type-B words `{(uv)^i u, (vu)^i v, (uv)^i, (vu)^i, u²v(uv)^j,
/// u³(vu)^j, u²(vu)^j, u²(uv)^j}`.
pub fn type_b_words(s: &Structure, mu: Scalar) -> Result<Vec<AlgebraElement>> {
    let alg = s.algebra();
    let (u, v) = uv(s, mu)?;
    let one = alg.one();
    let limit = s.nilpotency_index();
    let uvw = alg.mul(&u, &v);
    let vuw = alg.mul(&v, &u);
    let u2 = alg.mul(&u, &u);
    let u3 = alg.mul(&u2, &u);
    let u2v = alg.mul(&u2, &v);
    let mut words = Vec::new();
    for (prefix, repeat, suffix) in [
        (&one, &uvw, &u),
        (&one, &vuw, &v),
        (&one, &uvw, &one),
        (&one, &vuw, &one),
        (&u2v, &uvw, &one),
        (&u3, &vuw, &one),
        (&u2, &vuw, &one),
        (&u2, &uvw, &one),
    ] {
        words.extend(family_words(alg, limit, prefix, repeat, suffix));
    }
    Ok(dedup_nonzero(words))
}

fn family_basis(s: &Structure, family: Family, mu: Scalar) -> Result<BasisCandidate> {
    require_family(s, family)?;
    let words = match family {
        Family::TypeA => type_a_words(s, mu)?,
        Family::TypeB => type_b_words(s, mu)?,
        _ => unreachable!("only word families"),
    };
    if words.len() != s.dim() {
        return Err(Error::MuUnsuitable(format!(
            "mu = {} gives {} distinct nonzero words, |G| = {}",
            s.field().display(mu),
            words.len(),
            s.dim()
        )));
    }
    Ok(BasisCandidate::new(words))
}

pub fn type_a_basis(s: &Structure, mu: Scalar) -> Result<BasisCandidate> {
    family_basis(s, Family::TypeA, mu)
}

pub fn type_b_basis(s: &Structure, mu: Scalar) -> Result<BasisCandidate> {
    family_basis(s, Family::TypeB, mu)
}

/// Outcome for one value of μ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuTrial {
    pub mu: Vec<u32>,
    pub words: usize,
    pub pass: bool,
    pub reason: Option<String>,
    #[serde(skip)]
    pub basis: Option<BasisCandidate>,
    #[serde(skip)]
    pub verdict: Option<Verdict>,
}

/// Tries every μ ∈ K in enumeration order.
pub fn try_all_mu(s: &Structure, family: Family) -> Result<Vec<MuTrial>> {
    require_family(s, family)?;
    let f = s.field();
    let mut out = Vec::new();
    for mu in f.elements() {
        let words = match family {
            Family::TypeA => type_a_words(s, mu)?,
            _ => type_b_words(s, mu)?,
        };
        let mut trial = MuTrial { mu: f.to_json_coeffs(mu), words: words.len(), pass: false, reason: None, basis: None, verdict: None };
        match family_basis(s, family, mu) {
            Ok(b) => {
                let v = fmb::verify(s, &b)?;
                trial.pass = v.pass;
                if !v.pass {
                    trial.reason = Some("verification failed".into());
                }
                trial.basis = Some(b);
                trial.verdict = Some(v);
            }
            Err(e) => trial.reason = Some(e.to_string()),
        }
        out.push(trial);
    }
    Ok(out)
}

/// Whether `xs` are linearly independent modulo `I^n`.
pub fn independent_mod(s: &Structure, xs: &[AlgebraElement], n: usize) -> bool {
    // quotient coordinates: regular coordinates of weight < n
    let keep: Vec<usize> = (0..s.dim()).filter(|&i| s.regular().weights[i] < n).collect();
    let rows = xs.iter().map(|x| {
        let c = s.regular_coords(x);
        keep.iter().map(|&i| c[i]).collect::<Vec<_>>()
    });
    Echelon::from_vectors(s.field(), keep.len(), rows).rank() == xs.len()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndependenceCheck {
    pub degree: usize,
    pub modulus: usize,
    pub independent: bool,
}

/// `{u^i, vu^{i-1}, uvu^{i-2}, vuvu^{i-3}}` modulo `I^{i+1}` for each `i > 3`
/// with `dim I^i/I^{i+1} = 4`.
pub fn type_a_independence(s: &Structure, mu: Scalar) -> Result<Vec<IndependenceCheck>> {
    let alg = s.algebra();
    let (u, v) = uv(s, mu)?;
    let up = |k: usize| alg.pow(&u, k as u32);
    let mut out = Vec::new();
    for i in 4..s.nilpotency_index() {
        if s.quotient_dim(i) != 4 {
            continue;
        }
        let set = [up(i), alg.mul(&v, &up(i - 1)), alg.product([&u, &v, &up(i - 2)]), alg.product([&v, &u, &v, &up(i - 3)])];
        out.push(IndependenceCheck { degree: i, modulus: i + 1, independent: independent_mod(s, &set, i + 1) });
    }
    Ok(out)
}

/// For each `k > 1`, the odd set `{(uv)^k u, u²v(uv)^{k-1}, (vu)^k v,
/// u³(vu)^{k-1}}` and the even set `{(uv)^k, u²(vu)^{k-1}, (vu)^k,
/// u²(uv)^{k-1}}`, each tested modulo `I^{2k+1}` and `I^{2k+2}`.
pub fn type_b_independence(s: &Structure, mu: Scalar) -> Result<Vec<(String, IndependenceCheck)>> {
    let alg = s.algebra();
    let (u, v) = uv(s, mu)?;
    let uvw = alg.mul(&u, &v);
    let vuw = alg.mul(&v, &u);
    let u2 = alg.mul(&u, &u);
    let u3 = alg.mul(&u2, &u);
    let u2v = alg.mul(&u2, &v);
    let mut out = Vec::new();
    for k in 2.. {
        let (uvk, vuk) = (alg.pow(&uvw, k as u32), alg.pow(&vuw, k as u32));
        let (uvk1, vuk1) = (alg.pow(&uvw, k as u32 - 1), alg.pow(&vuw, k as u32 - 1));
        let odd = [alg.mul(&uvk, &u), alg.mul(&u2v, &uvk1), alg.mul(&vuk, &v), alg.mul(&u3, &vuk1)];
        let even = [uvk.clone(), alg.mul(&u2, &vuk1), vuk.clone(), alg.mul(&u2, &uvk1)];
        if odd.iter().chain(&even).all(AlgebraElement::is_zero) || 2 * k + 1 > s.nilpotency_index() {
            break;
        }
        for (name, set) in [("odd", &odd), ("even", &even)] {
            for modulus in [2 * k + 1, 2 * k + 2] {
                out.push((
                    format!("{name} k={k}"),
                    IndependenceCheck {
                        degree: if name == "odd" { 2 * k + 1 } else { 2 * k },
                        modulus,
                        independent: independent_mod(s, set, modulus),
                    },
                ));
            }
        }
    }
    Ok(out)
}
