//! Command-line front end. Every invocation prints one JSON document with a
//! run manifest; `--json` writes the same document without the wall-clock
//! field, so repeated runs produce identical files.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::construct::{self, Family};
use crate::error::{Error, Result};
use crate::ffield::{Field, FieldSpec};
use crate::fmb::{self, BasisCandidate, BasisFile, Verdict};
use crate::modalg::Structure;
use crate::obstruct::search::{self, SearchOutcome};
use crate::obstruct::{self, CertificateVerdict, Rules};
use crate::pgroup::{self, catalog, Group};

pub const SCHEMA_VERSION: u32 = 1;
/// Seed of the sampled associativity check.
pub const VALIDATION_SEED: u64 = 0x5eed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "fmb", version, about = "Filtered multiplicative bases of modular group algebras")]
pub struct Cli {
    /// Also write the result document (without wall-clock time) to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Catalog name, alias or product such as `G5(m=4)xC2`.
    #[arg(long)]
    pub group: String,
    /// Catalog parameter `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// `p` or `p,k` for GF(p^k).
    #[arg(long, default_value = "2", value_parser = parse_field)]
    pub field: FieldSpec,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group families and aliases.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Realize a group and report invariants or validation.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Jennings series, ideal ranks and regular basis weights.
    Jennings {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Check a basis file.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        basis: PathBuf,
    },
    /// Build an explicit basis and verify it.
    Construct {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Coefficients `c0[,c1]` of mu for typeA/typeB; all values are tried if omitted.
        #[arg(long)]
        mu: Option<String>,
        /// Where to write the basis file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate leading matrices against the graded necessary conditions.
    Obstruct {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = RulesArg::Independence)]
        rules: RulesArg,
    },
    /// Exhaustive basis search for groups of order at most 16.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Existence verdicts for every catalog family at pinned parameters.
    Matrix,
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    Show {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupAction {
    Info {
        #[command(flatten)]
        group: GroupArgs,
    },
    Validate {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RulesArg {
    Span,
    Independence,
}

impl From<RulesArg> for Rules {
    fn from(r: RulesArg) -> Rules {
        match r {
            RulesArg::Span => Rules::Span,
            RulesArg::Independence => Rules::Independence,
        }
    }
}

fn parse_param(s: &str) -> std::result::Result<(String, i64), String> {
    catalog::parse_param(s).map_err(|e| e.to_string())
}

pub fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<u32>().map_err(|_| format!("bad field `{s}`"));
    let spec = match parts.as_slice() {
        [p] => FieldSpec { p: num(p)?, k: 1 },
        [p, k] => FieldSpec { p: num(p)?, k: num(k)? },
        _ => return Err(format!("field must be `p` or `p,k`, got `{s}`")),
    };
    Field::from_spec(spec).map_err(|e| e.to_string())?;
    Ok(spec)
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Identification block printed with every result.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(flatten)]
    pub params: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub version: String,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        RunManifest { command: command.into(), version: env!("CARGO_PKG_VERSION").into(), ..Default::default() }
    }

    fn with_group(mut self, g: &GroupArgs) -> Self {
        self.group = Some(g.group.clone());
        self.params = g.params.iter().cloned().collect();
        self
    }
}

/// Result of one command before rendering.
struct Outcome {
    manifest: RunManifest,
    result: Value,
    exit: i32,
}

fn realize(g: &GroupArgs) -> Result<Arc<Group>> {
    let params: catalog::Params = g.params.iter().cloned().collect();
    Ok(Arc::new(catalog::group(&g.group, &params)?))
}

fn structure(g: &GroupArgs, f: &FieldArgs) -> Result<Arc<Structure>> {
    Structure::for_group(realize(g)?, Field::from_spec(f.field)?)
}

/// Parses argv, runs the command and prints the document; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        // help and version stay plain text; real usage errors also get a document
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let _ = e.print();
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "manifest": { "command": null, "outcome": "error", "version": env!("CARGO_PKG_VERSION") },
                "error": { "code": "usage", "message": e.kind().to_string() },
            });
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"));
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let pool = match cli.workers {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    let (mut manifest, outcome) = pool.install(|| dispatch(&cli.command));
    let (document, exit) = match outcome {
        Ok(o) => {
            manifest = o.manifest;
            (json!({ "schema": SCHEMA_VERSION, "manifest": manifest, "result": o.result }), o.exit)
        }
        Err(e) => {
            manifest.outcome = "error".into();
            (json!({ "schema": SCHEMA_VERSION, "manifest": manifest, "error": { "code": e.code(), "message": e.to_string() } }), EXIT_USAGE)
        }
    };
    if let Some(path) = &cli.json {
        if let Err(e) = write_document(path, &document) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let mut printed = document;
    printed["manifest"]["wall_clock_ms"] = json!(start.elapsed().as_millis() as u64);
    let text = serde_json::to_string_pretty(&printed).expect("JSON values serialize");
    // a closed stdout is not an error of the computation
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    exit
}

fn write_document(path: &Path, doc: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(doc)? + "\n")?;
    Ok(())
}

fn dispatch(cmd: &Command) -> (RunManifest, Result<Outcome>) {
    let manifest = match cmd {
        Command::Catalog { action: CatalogAction::List } => RunManifest::new("catalog list"),
        Command::Catalog { action: CatalogAction::Show { group } } => RunManifest::new("catalog show").with_group(group),
        Command::Group { action: GroupAction::Info { group } } => RunManifest::new("group info").with_group(group),
        Command::Group { action: GroupAction::Validate { group } } => RunManifest::new("group validate").with_group(group),
        Command::Jennings { group, .. } => RunManifest::new("jennings").with_group(group),
        Command::Verify { group, .. } => RunManifest::new("verify").with_group(group),
        Command::Construct { group, .. } => RunManifest::new("construct").with_group(group),
        Command::Obstruct { group, .. } => RunManifest::new("obstruct").with_group(group),
        Command::Search { group, .. } => RunManifest::new("search").with_group(group),
        Command::Matrix => RunManifest::new("matrix"),
    };
    let out = execute(cmd, manifest.clone());
    (manifest, out)
}

fn execute(cmd: &Command, mut m: RunManifest) -> Result<Outcome> {
    let done = |mut m: RunManifest, outcome: &str, result: Value, exit: i32| {
        m.outcome = outcome.into();
        Ok(Outcome { manifest: m, result, exit })
    };
    match cmd {
        Command::Catalog { action: CatalogAction::List } => {
            let families: Vec<Value> = catalog::families()
                .iter()
                .map(|f| json!({ "name": f.name, "params": f.params, "range": f.range, "order": f.order }))
                .collect();
            let aliases: Vec<Value> =
                catalog::aliases().iter().map(|(a, fam, p)| json!({ "alias": a, "family": fam, "params": p })).collect();
            done(m, "ok", json!({ "families": families, "aliases": aliases }), EXIT_OK)
        }
        Command::Catalog { action: CatalogAction::Show { group } } => {
            let params: catalog::Params = group.params.iter().cloned().collect();
            let (pres, descriptor) = catalog::resolve(&group.group, &params)?;
            let result = json!({
                "descriptor": descriptor,
                "label": descriptor.label(),
                "nominal_order": pres.nominal_order(),
                "presentation": serde_json::from_str::<Value>(&pres.to_json()?)?,
            });
            done(m, "ok", result, EXIT_OK)
        }
        Command::Group { action: GroupAction::Info { group } } => {
            let g = realize(group)?;
            done(m, "ok", group_info(&g), EXIT_OK)
        }
        Command::Group { action: GroupAction::Validate { group } } => {
            m.seed = Some(VALIDATION_SEED);
            let params: catalog::Params = group.params.iter().cloned().collect();
            let (pres, _) = catalog::resolve(&group.group, &params)?;
            let report = pgroup::validate(&pres);
            let (outcome, exit) = if report.pass { ("pass", EXIT_OK) } else { ("fail", EXIT_FAIL) };
            done(m, outcome, serde_json::to_value(&report)?, exit)
        }
        Command::Jennings { group, field } => {
            m.field = Some(field.field);
            let s = structure(group, field)?;
            done(m, "ok", jennings_info(&s), EXIT_OK)
        }
        Command::Verify { group, field, basis } => {
            m.field = Some(field.field);
            let s = structure(group, field)?;
            let file = BasisFile::from_json(&std::fs::read_to_string(basis)?)?;
            let candidate = file.to_candidate(&s)?;
            let v = fmb::verify(&s, &candidate)?;
            let (outcome, exit) = if v.pass { ("pass", EXIT_OK) } else { ("fail", EXIT_FAIL) };
            done(m, outcome, serde_json::to_value(&v)?, exit)
        }
        Command::Construct { group, field, family, mu, out } => {
            m.field = Some(field.field);
            let s = structure(group, field)?;
            let (basis, detail) = build(&s, &group.group, *family, mu.as_deref())?;
            let v = fmb::verify(&s, &basis)?;
            let file = BasisFile::from_candidate(&s, &basis);
            if let Some(path) = out {
                std::fs::write(path, file.to_json()?)?;
            }
            let (outcome, exit) = if v.pass { ("pass", EXIT_OK) } else { ("fail", EXIT_FAIL) };
            done(m, outcome, json!({ "family": family, "detail": detail, "verdict": v, "basis": file }), exit)
        }
        Command::Obstruct { group, field, degree, rules } => {
            m.field = Some(field.field);
            m.degree = Some(*degree);
            let s = structure(group, field)?;
            let r = obstruct::certify(&s, *degree, (*rules).into())?;
            let exit = if r.verdict == CertificateVerdict::Obstructed { EXIT_OK } else { EXIT_FAIL };
            let outcome = r.verdict.to_string();
            done(m, &outcome, serde_json::to_value(&r)?, exit)
        }
        Command::Search { group, field, budget } => {
            m.field = Some(field.field);
            m.budget = Some(*budget);
            let s = structure(group, field)?;
            let r = search::full_search(&s, *budget)?;
            let exit = if r.report.outcome == SearchOutcome::Found { EXIT_OK } else { EXIT_FAIL };
            let outcome = serde_json::to_value(r.report.outcome)?.as_str().unwrap_or("").to_string();
            done(m, &outcome, serde_json::to_value(&r.report)?, exit)
        }
        Command::Matrix => {
            m.budget = Some(search::DEFAULT_BUDGET);
            let report = matrix()?;
            let exit = if report.rows.iter().all(|r| r.agree) { EXIT_OK } else { EXIT_FAIL };
            let outcome = format!("{}/{} rows agree", report.agreeing, report.rows.len());
            done(m, &outcome, serde_json::to_value(&report)?, exit)
        }
    }
}

fn group_info(g: &Group) -> Value {
    let elems = |h: &pgroup::Subgroup| h.order();
    json!({
        "descriptor": g.descriptor(),
        "label": g.label(),
        "p": g.p(),
        "order": g.order(),
        "generators": g.generators().iter().map(|&x| g.display(x)).collect::<Vec<_>>(),
        "relative_orders": g.relative_orders(),
        "abelian": g.is_abelian(),
        "powerful": g.is_powerful(),
        "center_order": elems(&g.center()),
        "derived_order": elems(&g.derived_subgroup()),
        "frattini_order": elems(&g.frattini()),
        "element_orders": g.order_statistics(),
        "jennings_orders": g.jennings_series().iter().map(elems).collect::<Vec<_>>(),
    })
}

fn jennings_info(s: &Structure) -> Value {
    let g = s.group();
    let j = s.jennings();
    let membership_agrees = (1..=j.series.len()).all(|n| {
        let by_membership = s.dimension_subgroup_by_membership(n);
        j.dimension_subgroup(n).map_or(by_membership.len() == 1, |d| d.members() == by_membership.as_slice())
    });
    json!({
        "group": g.descriptor(),
        "field": s.field().spec(),
        "series_orders": j.series.iter().map(|h| h.order()).collect::<Vec<_>>(),
        "multiplicities": j.multiplicities,
        "representatives": j.representatives.iter().map(|&(w, x)| json!({ "weight": w, "element": g.display(x) })).collect::<Vec<_>>(),
        "ideal_ranks": s.ideal_ranks(),
        "quotient_dims": (1..s.nilpotency_index()).map(|n| s.quotient_dim(n)).collect::<Vec<_>>(),
        "nilpotency_index": s.nilpotency_index(),
        "membership_agrees": membership_agrees,
    })
}

/// A basis of the given family; typeA/typeB try every mu unless one is given.
pub fn build(s: &Arc<Structure>, spec: &str, family: Family, mu: Option<&str>) -> Result<(BasisCandidate, String)> {
    match family {
        Family::Abelian => {
            let dec = construct::generator_decomposition(s.group())?;
            Ok((construct::abelian_basis(s, &dec)?, "generators of the presentation".into()))
        }
        Family::G4 => Ok((construct::g4_basis(s)?, "b2^i b1^j b2^k b3^l".into())),
        Family::Product => product_of_factors(s, spec),
        Family::TypeA | Family::TypeB => {
            let f = s.field();
            if let Some(text) = mu {
                let coeffs = text
                    .split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidScalar(text.into()))?;
                let mu = f.from_json_coeffs(&coeffs)?;
                let b = if family == Family::TypeA { construct::type_a_basis(s, mu)? } else { construct::type_b_basis(s, mu)? };
                return Ok((b, format!("mu = {}", f.display(mu))));
            }
            let trials = construct::try_all_mu(s, family)?;
            let summary: Vec<String> = trials.iter().map(|t| format!("mu={:?}: {}", t.mu, t.reason.as_deref().unwrap_or("pass"))).collect();
            let pick = trials.iter().find(|t| t.pass).or_else(|| trials.iter().find(|t| t.basis.is_some()));
            match pick.and_then(|t| t.basis.clone()) {
                Some(b) => Ok((b, summary.join("; "))),
                None => Err(Error::MuUnsuitable(summary.join("; "))),
            }
        }
    }
}

/// A basis for a factor: abelian bases for abelian groups, otherwise a
/// searched basis.
fn factor_basis(s: &Arc<Structure>) -> Result<BasisCandidate> {
    if s.group().is_abelian() {
        let dec = construct::generator_decomposition(s.group())?;
        return construct::abelian_basis(s, &dec);
    }
    let r = search::full_search(s, search::DEFAULT_BUDGET)?;
    r.basis.ok_or_else(|| Error::NotApplicable(format!("no basis found for factor {}", s.group().label())))
}

fn product_of_factors(s: &Arc<Structure>, spec: &str) -> Result<(BasisCandidate, String)> {
    let factors = catalog::split_product(spec);
    if factors.len() < 2 {
        return Err(Error::NotApplicable(format!("`{spec}` is not a direct product")));
    }
    let field = s.field().clone();
    let at = |name: &str| -> Result<Arc<Structure>> {
        Structure::for_group(Arc::new(catalog::group(name, &catalog::Params::new())?), field.clone())
    };
    let mut left_spec = factors[0].to_string();
    let mut left = at(&left_spec)?;
    let mut basis = factor_basis(&left)?;
    for f in &factors[1..] {
        let right = at(f)?;
        let rb = factor_basis(&right)?;
        left_spec = format!("{left_spec}x{f}");
        let joint = at(&left_spec)?;
        basis = construct::product_basis(&joint, &left, &basis, &right, &rb)?;
        left = joint;
    }
    if left.dim() != s.dim() {
        return Err(Error::AlgebraMismatch);
    }
    Ok((basis, format!("product over factors {}", factors.join(", "))))
}

/// Existence of an FMB as claimed or as observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Existence {
    #[serde(rename = "FMB")]
    Fmb,
    #[serde(rename = "NO_FMB")]
    NoFmb,
    #[serde(rename = "UNDETERMINED")]
    Undetermined,
    #[serde(rename = "ERROR")]
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub group: String,
    pub params: BTreeMap<String, i64>,
    pub field: FieldSpec,
    pub expected: Existence,
    pub method: String,
    pub observed: Existence,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub rows: Vec<MatrixRow>,
    pub agreeing: usize,
}

#[derive(Clone, Copy, Debug)]
enum Method {
    Search,
    Product,
    Construct(Family),
    Certify(usize),
}

struct Entry {
    spec: &'static str,
    params: &'static [(&'static str, i64)],
    field: (u32, u32),
    expected: Existence,
    method: Method,
}

const fn entry(
    spec: &'static str,
    params: &'static [(&'static str, i64)],
    field: (u32, u32),
    expected: Existence,
    method: Method,
) -> Entry {
    Entry { spec, params, field, expected, method }
}

/// The pinned rows, smallest legal parameters per family.
fn matrix_entries() -> Vec<Entry> {
    use Existence::{Fmb, NoFmb};
    use Family::{TypeA, TypeB};
    use Method::{Certify, Construct, Product, Search};
    vec![
        entry("D8", &[], (2, 1), Fmb, Search),
        entry("D16", &[], (2, 1), Fmb, Search),
        entry("D8xC2", &[], (2, 1), Fmb, Product),
        entry("G4", &[("m", 4)], (2, 1), Fmb, Construct(Family::G4)),
        entry("Q8", &[], (2, 2), Fmb, Search),
        entry("Q8xC2", &[], (2, 2), Fmb, Product),
        entry("Q8", &[], (2, 1), NoFmb, Search),
        entry("G5", &[("m", 4)], (2, 1), Fmb, Construct(TypeA)),
        entry("G17", &[("m", 5)], (2, 1), Fmb, Construct(TypeA)),
        entry("G22", &[("m", 6)], (2, 1), Fmb, Construct(TypeA)),
        entry("G25", &[("m", 5)], (2, 1), Fmb, Construct(TypeA)),
        entry("G13", &[("m", 5)], (2, 1), Fmb, Construct(TypeB)),
        entry("G14", &[("m", 5)], (2, 1), Fmb, Construct(TypeB)),
        entry("G18", &[("m", 4)], (2, 1), Fmb, Construct(TypeB)),
        entry("G18", &[("m", 5)], (2, 1), Fmb, Construct(TypeB)),
        entry("G23", &[("m", 6)], (2, 1), Fmb, Construct(TypeB)),
        entry("G24", &[("m", 6)], (2, 1), Fmb, Construct(TypeB)),
        entry("G25", &[("m", 6)], (2, 1), Fmb, Construct(TypeB)),
        entry("G11", &[("m", 4)], (2, 1), NoFmb, Certify(2)),
        entry("G12", &[("m", 5)], (2, 1), NoFmb, Certify(2)),
        entry("G15", &[("m", 5)], (2, 1), NoFmb, Certify(2)),
        entry("G16", &[("m", 5)], (2, 1), NoFmb, Certify(2)),
        entry("M16", &[], (2, 1), NoFmb, Certify(2)),
        entry("M32", &[], (2, 1), NoFmb, Certify(2)),
        entry("G4", &[("m", 5)], (2, 1), NoFmb, Certify(2)),
        entry("M27", &[], (3, 1), NoFmb, Certify(2)),
        entry("G1", &[("p", 3), ("m", 3)], (3, 1), NoFmb, Certify(3)),
        entry("G7", &[("p", 3), ("m", 4)], (3, 1), NoFmb, Certify(3)),
        entry("H", &[("p", 3), ("m", 4), ("r", 1)], (3, 1), NoFmb, Certify(3)),
        entry("H", &[("p", 3), ("m", 4), ("r", 2)], (3, 1), NoFmb, Certify(3)),
        entry("G11odd", &[], (3, 1), NoFmb, Certify(3)),
    ]
}

/// Certify at increasing degree for nonabelian groups, then search if small.
fn settle(s: &Arc<Structure>, notes: &mut Vec<String>) -> Result<Existence> {
    if !s.group().is_abelian() {
        for degree in 2..=3 {
            let r = obstruct::certify(s, degree, Rules::Independence)?;
            notes.push(format!("certify t={degree}: {} ({} of {} survive)", r.verdict, r.survivors.len(), r.matrices_examined));
            if r.verdict == CertificateVerdict::Obstructed {
                return Ok(Existence::NoFmb);
            }
        }
    }
    if s.dim() <= search::MAX_SEARCH_ORDER && s.field().order() <= search::MAX_SEARCH_FIELD {
        let r = search::full_search(s, search::DEFAULT_BUDGET)?;
        notes.push(format!("search: {:?} after {} nodes", r.report.outcome, r.report.nodes));
        return Ok(match r.report.outcome {
            SearchOutcome::Found => Existence::Fmb,
            SearchOutcome::Exhausted => Existence::NoFmb,
            SearchOutcome::BudgetExhausted => Existence::Undetermined,
        });
    }
    Ok(Existence::Undetermined)
}

fn observe(e: &Entry, s: &Arc<Structure>, notes: &mut Vec<String>) -> Result<Existence> {
    match e.method {
        Method::Search | Method::Certify(_) => settle(s, notes),
        Method::Product => {
            let (b, detail) = product_of_factors(s, e.spec)?;
            let v = fmb::verify(s, &b)?;
            notes.push(format!("{detail}: {}", verdict_summary(&v)));
            if v.pass {
                Ok(Existence::Fmb)
            } else {
                settle(s, notes)
            }
        }
        Method::Construct(family) => {
            match build(s, e.spec, family, None) {
                Ok((b, detail)) => {
                    let v = fmb::verify(s, &b)?;
                    notes.push(format!("{family} [{detail}]: {}", verdict_summary(&v)));
                    if v.pass {
                        return Ok(Existence::Fmb);
                    }
                }
                Err(err) => notes.push(format!("{family}: {err}")),
            }
            settle(s, notes)
        }
    }
}

fn verdict_summary(v: &Verdict) -> String {
    if v.pass {
        "verified".into()
    } else {
        format!("not an FMB (linear basis {}, {} closure violations)", v.is_linear_basis, v.closure_violation_count)
    }
}

/// Runs every pinned row. Rows are independent and computed in order.
pub fn matrix() -> Result<MatrixReport> {
    let mut rows = Vec::new();
    for e in matrix_entries() {
        let params: catalog::Params = e.params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let field = FieldSpec { p: e.field.0, k: e.field.1 };
        let method = match e.method {
            Method::Search => "search".to_string(),
            Method::Product => "product".to_string(),
            Method::Construct(f) => format!("construct {f}"),
            Method::Certify(t) => format!("certify t={t}"),
        };
        let mut notes = Vec::new();
        let observed = catalog::group(e.spec, &params)
            .and_then(|g| Structure::for_group(Arc::new(g), Field::from_spec(field)?))
            .and_then(|s| observe(&e, &s, &mut notes))
            .unwrap_or_else(|err| {
                notes.push(format!("{}: {err}", err.code()));
                Existence::Error
            });
        let label = pgroup::GroupDescriptor { name: e.spec.into(), params: params.clone() }.label();
        rows.push(MatrixRow {
            group: label,
            params,
            field,
            expected: e.expected,
            method,
            observed,
            agree: observed == e.expected,
            detail: notes.join("; "),
        });
    }
    Ok(MatrixReport { agreeing: rows.iter().filter(|r| r.agree).count(), rows })
}
