//! Named p-group presentations.
//!
//! Two-group families use generators `a, c, d` in that collection order with
//! `|a| = 2^{m-2}` unless noted; the odd families use the same letters with
//! `p` in place of 2. A group is addressed by a spec string: a family name
//! with parameters (`G5` plus `m=4`, or inline `G5(m=4)`), an alias (`Q8`,
//! `D16`, `M27`), or a direct product of these joined by `x` (`Q8xC2`).

use std::collections::BTreeMap;

use serde::Serialize;

use super::presentation::{Builder, PcPresentation};
use super::{Group, GroupDescriptor};
use crate::error::{Error, Result};

pub type Params = BTreeMap<String, i64>;

/// Parameter ranges of one family, for `catalog list`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: Vec<&'static str>,
    pub range: &'static str,
    pub order: &'static str,
}

pub fn families() -> Vec<FamilyInfo> {
    let f = |name, params: &[&'static str], range, order| FamilyInfo { name, params: params.to_vec(), range, order };
    vec![
        f("C", &["p", "n"], "p prime <= 13, n >= 1", "p^n"),
        f("D", &["n"], "n >= 3", "2^n"),
        f("Q", &["n"], "n >= 3", "2^n"),
        f("M", &["p", "n"], "n >= 4 for p = 2, n >= 3 for odd p", "p^n"),
        f("G1", &["p", "m"], "p odd, m >= 3", "p^m"),
        f("H", &["p", "m", "r"], "p odd, m >= 4, r = 1 or a nonresidue mod p", "p^m"),
        f("G7", &["p", "m"], "p odd, m >= 4", "p^m"),
        f("G11odd", &[], "p = 3", "81"),
        f("G4", &["m"], "m >= 4", "2^m"),
        f("G5", &["m"], "m >= 4", "2^m"),
        f("G11", &["m"], "m >= 4", "2^(m+1)"),
        f("G12", &["m"], "m >= 5", "2^m"),
        f("G13", &["m"], "m >= 5", "2^m"),
        f("G14", &["m"], "m >= 5", "2^m"),
        f("G15", &["m"], "m >= 5", "2^m"),
        f("G16", &["m"], "m >= 5", "2^m"),
        f("G17", &["m"], "m >= 5", "2^m"),
        f("G18", &["m"], "m >= 5 (m = 4 collapses to order 8)", "2^m"),
        f("G22", &["m"], "m >= 6", "2^m"),
        f("G23", &["m"], "m >= 6", "2^m"),
        f("G24", &["m"], "m >= 6", "2^m"),
        f("G25", &["m"], "m >= 5", "2^m"),
        f("miech", &["p", "m1", "m2", "m3", "R", "r", "S", "s"], "any; rejected by validation if inconsistent", "p^(m1+m2+m3)"),
    ]
}

/// Aliases accepted in spec strings, with the family they expand to.
pub fn aliases() -> Vec<(&'static str, &'static str, Params)> {
    let ps = |kv: &[(&str, i64)]| kv.iter().map(|(k, v)| (k.to_string(), *v)).collect::<Params>();
    let mut out = vec![
        ("Q8", "Q", ps(&[("n", 3)])),
        ("Q16", "Q", ps(&[("n", 4)])),
        ("D8", "D", ps(&[("n", 3)])),
        ("D16", "D", ps(&[("n", 4)])),
        ("D32", "D", ps(&[("n", 5)])),
        ("M16", "M", ps(&[("p", 2), ("n", 4)])),
        ("M32", "M", ps(&[("p", 2), ("n", 5)])),
        ("M27", "M", ps(&[("p", 3), ("n", 3)])),
    ];
    for (name, p, n) in [("C2", 2, 1), ("C4", 2, 2), ("C8", 2, 3), ("C16", 2, 4), ("C3", 3, 1), ("C9", 3, 2), ("C27", 3, 3), ("C5", 5, 1)] {
        out.push((name, "C", ps(&[("p", p), ("n", n)])));
    }
    out
}

fn param(params: &Params, key: &str, default: i64) -> i64 {
    params.get(key).copied().unwrap_or(default)
}

fn need(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(what()))
    }
}

fn pow_i(p: i64, e: i64) -> i64 {
    p.pow(e as u32)
}

/// Parameters with the family's defaults filled in.
pub fn normalize(family: &str, params: &Params) -> Result<Params> {
    let info = families().into_iter().find(|f| f.name == family).ok_or_else(|| Error::UnknownGroup(family.into()))?;
    for k in params.keys() {
        if !info.params.contains(&k.as_str()) {
            return Err(Error::ParameterOutOfRange(format!("{family} takes no parameter `{k}`")));
        }
    }
    let defaults: &[(&str, i64)] = match family {
        "C" => &[("p", 2), ("n", 1)],
        "D" | "Q" => &[("n", 3)],
        "M" => &[("p", 2), ("n", 4)],
        "G1" => &[("p", 3), ("m", 3)],
        "H" => &[("p", 3), ("m", 4), ("r", 1)],
        "G7" => &[("p", 3), ("m", 4)],
        "G11odd" => &[],
        "G4" | "G5" | "G11" => &[("m", 4)],
        "G12" | "G13" | "G14" | "G15" | "G16" | "G17" | "G18" | "G25" => &[("m", 5)],
        "G22" | "G23" | "G24" => &[("m", 6)],
        _ => &[],
    };
    let mut out = params.clone();
    for (k, v) in defaults {
        out.entry(k.to_string()).or_insert(*v);
    }
    for k in &info.params {
        if !out.contains_key(*k) {
            return Err(Error::ParameterOutOfRange(format!("{family} requires parameter `{k}`")));
        }
    }
    Ok(out)
}

/// The presentation of a family member.
pub fn presentation(family: &str, params: &Params) -> Result<PcPresentation> {
    let ps = normalize(family, params)?;
    let get = |k: &str| param(&ps, k, 0);
    let two_group = |min: i64| -> Result<i64> {
        let m = get("m");
        need((min..=12).contains(&m), || format!("{family} requires {min} <= m <= 12, got m = {m}"))?;
        Ok(m)
    };
    let odd_prime = |min: i64| -> Result<(i64, i64)> {
        let (p, m) = (get("p"), get("m"));
        need(p > 2 && crate::ffield::is_prime(p as u32) && p <= 13, || format!("{family} requires an odd prime p <= 13, got {p}"))?;
        need(m >= min && pow_i(p, m) <= super::MAX_ORDER as i64, || {
            format!("{family} requires m >= {min} and p^m <= {}", super::MAX_ORDER)
        })?;
        Ok((p, m))
    };
    let abc = |m: u32, a_order: i64| Builder::new(2, m).gen("a", a_order as u64).gen("c", 2).gen("d", 2);
    let pres = match family {
        "C" => {
            let (p, n) = (get("p"), get("n"));
            need(crate::ffield::is_prime(p as u32) && p <= 13, || format!("C requires a prime p <= 13, got {p}"))?;
            need(n >= 1 && pow_i(p, n) <= super::MAX_ORDER as i64, || format!("C requires n >= 1 and p^n <= {}", super::MAX_ORDER))?;
            Builder::new(p as u32, n as u32).gen("a", pow_i(p, n) as u64).build()
        }
        "D" | "Q" => {
            let n = get("n");
            need((3..=12).contains(&n), || format!("{family} requires 3 <= n <= 12, got n = {n}"))?;
            let b = Builder::new(2, n as u32).gen("a", 1 << (n - 1)).gen("b", 2);
            let b = if family == "Q" { b.power("b", &[("a", 1 << (n - 2))]) } else { b };
            b.comm("b", "a", &[("a", 2)]).build()
        }
        "M" => {
            let (p, n) = (get("p"), get("n"));
            need(crate::ffield::is_prime(p as u32) && p <= 13, || format!("M requires a prime p <= 13, got {p}"))?;
            let min = if p == 2 { 4 } else { 3 };
            need(n >= min && pow_i(p, n) <= super::MAX_ORDER as i64, || format!("M requires n >= {min}, got n = {n}"))?;
            Builder::new(p as u32, n as u32)
                .gen("a", pow_i(p, n - 1) as u64)
                .gen("b", p as u64)
                .comm("b", "a", &[("a", pow_i(p, n - 2))])
                .build()
        }
        "G1" | "H" | "G7" => {
            let (p, m) = odd_prime(if family == "G1" { 3 } else { 4 })?;
            let b = Builder::new(p as u32, m as u32).gen("a", pow_i(p, m - 2) as u64).gen("c", p as u64).gen("d", p as u64).comm(
                "c",
                "a",
                &[("d", 1)],
            );
            match family {
                "G1" => b.build(),
                "G7" => b.comm("d", "a", &[("a", pow_i(p, m - 3))]).build(),
                _ => {
                    let r = get("r");
                    need(r == 1 || is_nonresidue(r, p), || format!("H requires r = 1 or a nonresidue mod {p}, got r = {r}"))?;
                    b.comm("d", "c", &[("a", -r * pow_i(p, m - 3))]).build()
                }
            }
        }
        "G11odd" => Builder::new(3, 4)
            .gen("a", 9)
            .gen("c", 3)
            .gen("d", 3)
            .power("c", &[("a", 3)])
            .comm("c", "a", &[("d", 1)])
            .comm("d", "c", &[("a", 3)])
            .build(),
        "G4" => {
            let m = two_group(4)?;
            abc(m as u32, 1 << (m - 2)).comm("d", "c", &[("a", 1 << (m - 3))]).build()
        }
        "G5" => {
            let m = two_group(4)?;
            abc(m as u32, 1 << (m - 2)).comm("c", "a", &[("d", 1)]).build()
        }
        "G11" => {
            let m = two_group(4)?;
            // |a| = 2^{m-1}: the group has order 2^{m+1}
            Builder::new(2, m as u32 + 1)
                .gen("a", 1 << (m - 1))
                .gen("c", 2)
                .gen("d", 2)
                .comm("c", "a", &[("a", 2 + (1 << (m - 2)))])
                .build()
        }
        "G12" => {
            let m = two_group(5)?;
            abc(m as u32, 1 << (m - 2)).comm("d", "c", &[("a", 1 << (m - 3))]).comm("c", "a", &[("a", 2)]).build()
        }
        "G13" | "G14" => {
            let m = two_group(5)?;
            let b = abc(m as u32, 1 << (m - 2)).comm("c", "a", &[("a", 2), ("d", 1)]);
            if family == "G14" {
                b.power("c", &[("a", 1 << (m - 3))]).build()
            } else {
                b.build()
            }
        }
        "G15" | "G16" => {
            let m = two_group(5)?;
            let b = abc(m as u32, 1 << (m - 2)).comm("d", "a", &[("a", 1 << (m - 3))]).comm("c", "a", &[("a", 2 + (1 << (m - 3)))]);
            if family == "G16" {
                b.comm("d", "c", &[("a", 1 << (m - 3))]).build()
            } else {
                b.build()
            }
        }
        "G17" => {
            let m = two_group(5)?;
            abc(m as u32, 1 << (m - 2)).comm("d", "a", &[("a", 1 << (m - 3))]).comm("c", "a", &[("d", 1)]).build()
        }
        "G18" => {
            let m = two_group(4)?;
            abc(m as u32, 1 << (m - 2))
                .power("c", &[("d", 1)])
                .comm("d", "a", &[("a", 1 << (m - 3))])
                .comm("c", "a", &[("a", 2), ("d", 1)])
                .build()
        }
        "G22" | "G23" => {
            let m = two_group(6)?;
            let lead = if family == "G22" { -(1 << (m - 4)) } else { 2 - (1 << (m - 4)) };
            abc(m as u32, 1 << (m - 2)).comm("d", "c", &[("a", 1 << (m - 3))]).comm("c", "a", &[("a", lead), ("d", 1)]).build()
        }
        "G24" => {
            let m = two_group(6)?;
            abc(m as u32, 1 << (m - 2))
                .comm("d", "a", &[("a", 1 << (m - 3))])
                .comm("c", "a", &[("a", 2 - (1 << (m - 4))), ("d", 1)])
                .build()
        }
        "G25" => {
            let m = two_group(5)?;
            abc(m as u32, 1 << (m - 2))
                .power("c", &[("a", 1 << (m - 3))])
                .comm("d", "a", &[("a", 1 << (m - 3))])
                .comm("c", "a", &[("a", 2 - (1 << (m - 4))), ("d", 1)])
                .build()
        }
        "miech" => {
            let p = get("p");
            need(p > 2 && crate::ffield::is_prime(p as u32) && p <= 13, || format!("miech requires an odd prime p <= 13, got {p}"))?;
            let (m1, m2, m3) = (get("m1"), get("m2"), get("m3"));
            need(m1 >= 1 && m2 >= 1 && m3 >= 1, || "miech requires m1, m2, m3 >= 1".into())?;
            let m = m1 + m2 + m3;
            need(pow_i(p, m) <= super::MAX_ORDER as i64, || format!("miech order {p}^{m} exceeds {}", super::MAX_ORDER))?;
            let (rr, r, ss, s) = (get("R"), get("r"), get("S"), get("s"));
            need(r >= 0 && s >= 0, || "miech requires r, s >= 0".into())?;
            Builder::new(p as u32, m as u32)
                .gen("a", pow_i(p, m1) as u64)
                .gen("c", pow_i(p, m2) as u64)
                .gen("d", pow_i(p, m3) as u64)
                .power("a", &[("d", rr * pow_i(p, r))])
                .power("c", &[("d", ss * pow_i(p, s))])
                .comm("c", "a", &[("d", 1)])
                .build()
        }
        _ => return Err(Error::UnknownGroup(family.into())),
    };
    Ok(pres)
}

fn is_nonresidue(r: i64, p: i64) -> bool {
    let r = r.rem_euclid(p);
    r != 0 && (1..p).all(|x| (x * x) % p != r)
}

/// Concatenates generators; cross commutators are trivial. Clashing names
/// in the second factor get a numeric suffix.
pub fn direct_product(x: &PcPresentation, y: &PcPresentation) -> Result<PcPresentation> {
    if x.p != y.p {
        return Err(Error::InvalidPresentation(format!("direct product of a {}-group and a {}-group", x.p, y.p)));
    }
    let taken: Vec<String> = x.generators.iter().map(|g| g.name.clone()).collect();
    let mut rename = BTreeMap::new();
    for g in &y.generators {
        let mut name = g.name.clone();
        let mut k = 2;
        while taken.contains(&name) || rename.values().any(|v: &String| *v == name) {
            name = format!("{}{}", g.name, k);
            k += 1;
        }
        rename.insert(g.name.clone(), name);
    }
    let rn = |n: &String| rename[n].clone();
    let rw = |w: &super::Word| w.iter().map(|(g, e)| (rn(g), *e)).collect::<super::Word>();
    let mut out = x.clone();
    out.m += y.m;
    for g in &y.generators {
        out.generators.push(super::GeneratorSpec { name: rn(&g.name), order: g.order });
    }
    for r in &y.powers {
        out.powers.push(super::PowerRelation { gen: rn(&r.gen), word: rw(&r.word) });
    }
    for r in &y.commutators {
        out.commutators.push(super::CommutatorRelation { hi: rn(&r.hi), lo: rn(&r.lo), word: rw(&r.word) });
    }
    Ok(out)
}

/// Splits `NAME` or `NAME(k=v,...)` into its name and inline parameters.
fn split_inline(token: &str) -> Result<(String, Params)> {
    let token = token.trim();
    let Some(open) = token.find('(') else {
        return Ok((token.to_string(), Params::new()));
    };
    let inner = token[open + 1..].strip_suffix(')').ok_or_else(|| Error::Malformed(format!("unbalanced parentheses in `{token}`")))?;
    let mut params = Params::new();
    for kv in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = parse_param(kv)?;
        params.insert(k, v);
    }
    Ok((token[..open].to_string(), params))
}

/// Parses `k=v` with an integer value.
pub fn parse_param(kv: &str) -> Result<(String, i64)> {
    let (k, v) = kv.split_once('=').ok_or_else(|| Error::Malformed(format!("expected k=v, got `{kv}`")))?;
    let v = v.trim().parse().map_err(|_| Error::Malformed(format!("parameter `{kv}` is not an integer")))?;
    Ok((k.trim().to_string(), v))
}

/// Presentation and descriptor of one factor (no `x`).
fn factor(token: &str, outer: &Params) -> Result<(PcPresentation, GroupDescriptor)> {
    let (name, mut params) = split_inline(token)?;
    if let Some((_, family, ps)) = aliases().into_iter().find(|(a, _, _)| *a == name) {
        if !params.is_empty() {
            return Err(Error::Malformed(format!("alias `{name}` takes no parameters")));
        }
        return Ok((presentation(family, &ps)?, GroupDescriptor::new(&name)));
    }
    for (k, v) in outer {
        params.entry(k.clone()).or_insert(*v);
    }
    let params = normalize(&name, &params)?;
    let pres = presentation(&name, &params)?;
    Ok((pres, GroupDescriptor { name, params }))
}

/// Resolves a spec string to a presentation and descriptor. `params` apply
/// to a single non-alias family; products take inline parameters only.
pub fn resolve(spec: &str, params: &Params) -> Result<(PcPresentation, GroupDescriptor)> {
    let tokens: Vec<&str> = split_product(spec);
    if tokens.iter().any(|t| t.trim().is_empty()) {
        return Err(Error::Malformed(format!("empty factor in `{spec}`")));
    }
    if tokens.len() == 1 {
        return factor(tokens[0], params);
    }
    if !params.is_empty() {
        return Err(Error::Malformed("parameters of a product must be given inline, e.g. G5(m=4)xC2".into()));
    }
    let (mut pres, _) = factor(tokens[0], params)?;
    for t in &tokens[1..] {
        let (next, _) = factor(t, params)?;
        pres = direct_product(&pres, &next)?;
    }
    Ok((pres, GroupDescriptor::new(spec.trim())))
}

/// Factor specs of a product, split on `x` outside parentheses.
pub fn split_product(spec: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in spec.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            'x' if depth == 0 => {
                out.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&spec[start..]);
    out
}

/// Realizes a spec string.
pub fn group(spec: &str, params: &Params) -> Result<Group> {
    let (pres, descriptor) = resolve(spec, params)?;
    Group::from_presentation(&pres, descriptor)
}

/// Re-realizes the group a descriptor names.
pub fn from_descriptor(d: &GroupDescriptor) -> Result<Group> {
    group(&d.name, &d.params)
}

pub fn group_kv(spec: &str, kv: &[(&str, i64)]) -> Result<Group> {
    let params = kv.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    group(spec, &params)
}

/// One small representative per family and alias, as spec strings with
/// parameters, ordered by family. Every entry realizes.
pub fn standard_instances() -> Vec<(String, Params)> {
    let mut out: Vec<(String, Params)> = Vec::new();
    let mut push = |name: &str, kv: &[(&str, i64)]| out.push((name.to_string(), kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()));
    for (p, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)] {
        push("C", &[("p", p), ("n", n)]);
    }
    for n in 3..=6 {
        push("D", &[("n", n)]);
        push("Q", &[("n", n)]);
    }
    for n in 4..=6 {
        push("M", &[("p", 2), ("n", n)]);
    }
    push("M", &[("p", 3), ("n", 3)]);
    push("M", &[("p", 3), ("n", 4)]);
    push("M", &[("p", 5), ("n", 3)]);
    push("G1", &[("p", 3), ("m", 3)]);
    push("G1", &[("p", 3), ("m", 4)]);
    push("G1", &[("p", 5), ("m", 3)]);
    push("H", &[("p", 3), ("m", 4), ("r", 1)]);
    push("H", &[("p", 3), ("m", 4), ("r", 2)]);
    push("G7", &[("p", 3), ("m", 4)]);
    push("G11odd", &[]);
    for m in 4..=6 {
        push("G4", &[("m", m)]);
        push("G5", &[("m", m)]);
    }
    push("G11", &[("m", 4)]);
    for fam in ["G12", "G13", "G14", "G15", "G16", "G17", "G18", "G25"] {
        push(fam, &[("m", 5)]);
        push(fam, &[("m", 6)]);
    }
    for fam in ["G22", "G23", "G24"] {
        push(fam, &[("m", 6)]);
    }
    push("miech", &[("p", 3), ("m1", 2), ("m2", 1), ("m3", 1), ("R", 1), ("r", 0), ("S", 0), ("s", 0)]);
    push("Q8xC2", &[]);
    push("D8xC2", &[]);
    push("D16xC2", &[]);
    push("C2xC4", &[]);
    push("C2xC2", &[]);
    push("C3xC9", &[]);
    out
}
