//! chowforge: matroid Chow rings, Koszul certificates, and lattice quotients
//! from the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use chowforge::building::{
    dlg_presentation, maximal_building_set, minimal_building_set, nested_complex_nonfaces,
    BuildingError,
};
use chowforge::chow::{ChowError, NestedElt, NestedRing};
use chowforge::corpus;
use chowforge::engine::{Engine, EngineError, Monomial};
use chowforge::field::{Field, Fp, Q};
use chowforge::koszul::{koszul_certificate, verify_filtration, KoszulError};
use chowforge::lattice::{FlatLattice, RawLattice};
use chowforge::matroid::Matroid;

#[derive(Parser)]
#[command(name = "chowforge", version, about = "Chow rings of matroids: bases, Gröbner arithmetic, colon ideals, Koszul certificates")]
struct Cli {
    /// Coefficient field: "rational" (default) or "fp" (a large word-size prime).
    /// Falls back to the CHOWFORGE_FIELD environment variable.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Write the full report as JSON to this file (text still goes to stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect a matroid: rank, flats, bases.
    Matroid {
        #[command(subcommand)]
        cmd: MatroidCmd,
    },
    /// Lattice of flats: elements, the built-in total coatom order.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Chow ring of a matroid (atom-free presentation).
    Chow {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Augmented Chow ring of a matroid.
    Achow {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Koszulness: Betti tables, certificates, filtration walks.
    Koszul {
        #[command(subcommand)]
        cmd: KoszulCmd,
    },
    /// Quotient rings D(L,G) of an atomic lattice with a building set.
    Dlg {
        #[command(subcommand)]
        cmd: DlgCmd,
    },
    /// Batch checks over the built-in matroid corpus.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum MatroidCmd {
    Info {
        #[command(flatten)]
        src: MatroidSrc,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// List all flats by rank.
    Show {
        #[command(flatten)]
        src: MatroidSrc,
    },
    /// Print the flats in the built-in total coatom order (greatest first).
    Order {
        #[command(flatten)]
        src: MatroidSrc,
    },
    /// Verify the two cover-compatibility properties of the built-in order.
    VerifyOrder {
        #[command(flatten)]
        src: MatroidSrc,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    /// Hilbert function, printed as a polynomial in t.
    Hilbert {
        #[command(flatten)]
        src: MatroidSrc,
    },
    /// Nested-monomial basis, one degree or all.
    Basis {
        #[command(flatten)]
        src: MatroidSrc,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Multiply two elements and print the normal form.
    /// Elements look like "x_12*x_125 + 2*x_1234^2"; the x_ prefix is optional.
    Multiply {
        #[command(flatten)]
        src: MatroidSrc,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Print the explicit lex Gröbner basis of the defining ideal.
    Groebner {
        #[command(flatten)]
        src: MatroidSrc,
    },
    /// Colon ideal (x_G | G in --gens) : x_F, computed degree by degree,
    /// with the closed-form prediction when one applies.
    Colon {
        #[command(flatten)]
        src: MatroidSrc,
        /// Comma-separated flat labels generating the ideal; omit for (0 : x_F).
        #[arg(long)]
        gens: Option<String>,
        /// Flat label of the divisor variable.
        #[arg(long)]
        by: String,
    },
}

#[derive(Subcommand)]
enum KoszulCmd {
    /// Betti-table Koszul certificate to homological degree --imax.
    Certify {
        #[command(flatten)]
        src: MatroidSrc,
        #[arg(long, default_value_t = 3)]
        imax: usize,
        #[arg(long)]
        augmented: bool,
    },
    /// Walk the Koszul filtration witness and verify each colon step.
    Filtration {
        #[command(flatten)]
        src: MatroidSrc,
        #[arg(long)]
        augmented: bool,
        /// Cap on the number of distinct filtration ideals visited.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Graded Betti numbers of the residue field.
    Betti {
        #[command(flatten)]
        src: MatroidSrc,
        #[arg(long, default_value_t = 3)]
        imax: usize,
        #[arg(long)]
        jmax: Option<usize>,
        #[arg(long)]
        augmented: bool,
    },
}

#[derive(Subcommand)]
enum DlgCmd {
    /// Build the presentation of D(L,G) and print its Hilbert function.
    Build {
        #[command(flatten)]
        src: LatticeSrc,
        #[command(flatten)]
        bset: BuildingArg,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
    /// Koszul certificate for D(L,G).
    Certify {
        #[command(flatten)]
        src: LatticeSrc,
        #[command(flatten)]
        bset: BuildingArg,
        #[arg(long, default_value_t = 3)]
        imax: usize,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Run invariant checks over every corpus matroid.
    Run {
        /// Also run Koszul certificates to this homological degree (0 = skip).
        #[arg(long, default_value_t = 0)]
        imax: usize,
    },
}

/// A matroid given exactly one way.
#[derive(Args)]
struct MatroidSrc {
    /// Uniform matroid, e.g. --uniform 3,3.
    #[arg(long)]
    uniform: Option<String>,
    /// Built-in example: figure-matrix, c4, b3, u56.
    #[arg(long)]
    name: Option<String>,
    /// Matroid as inline JSON or a path to a JSON file.
    #[arg(long)]
    matroid: Option<String>,
}

/// An atomic lattice: either a matroid source (lattice of flats), a raw
/// lattice file, or the built-in "pinched" example.
#[derive(Args)]
struct LatticeSrc {
    #[command(flatten)]
    matroid: MatroidSrc,
    /// Raw lattice as inline JSON or a path ({"elements": [...], "covers": [[lo,hi],...]}).
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Args)]
struct BuildingArg {
    /// Comma-separated element labels of the building set.
    #[arg(long)]
    building: Option<String>,
    /// Use the minimal building set (irreducibles).
    #[arg(long)]
    minimal: bool,
    /// Use the maximal building set (everything above the bottom). Default.
    #[arg(long)]
    maximal: bool,
}

// ---------- errors and exit codes ----------

enum CliError {
    Usage(String),
    Fail(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Fail(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Fail(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> CliError {
        match e {
            EngineError::Budget(m) => CliError::Budget(m.to_string()),
            other => CliError::Fail(format!("{:?}", other)),
        }
    }
}

impl From<ChowError> for CliError {
    fn from(e: ChowError) -> CliError {
        match e {
            ChowError::Engine(EngineError::Budget(m)) => CliError::Budget(m.to_string()),
            other => CliError::Fail(format!("{:?}", other)),
        }
    }
}

impl From<KoszulError> for CliError {
    fn from(e: KoszulError) -> CliError {
        match e {
            KoszulError::Budget(m) => CliError::Budget(m.to_string()),
            KoszulError::Engine(EngineError::Budget(m)) => CliError::Budget(m.to_string()),
            other => CliError::Fail(format!("{:?}", other)),
        }
    }
}

impl From<BuildingError> for CliError {
    fn from(e: BuildingError) -> CliError {
        CliError::Fail(format!("{:?}", e))
    }
}

// ---------- report plumbing ----------

struct Report {
    lines: Vec<String>,
    json: Value,
    /// The computation succeeded but the verification did not: exit 2.
    failed: bool,
}

impl Report {
    fn new(command: &str) -> Report {
        Report { lines: Vec::new(), json: json!({ "command": command }), failed: false }
    }
    fn fail(&mut self) {
        self.failed = true;
        self.json["pass"] = json!(false);
    }
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
    fn set(&mut self, key: &str, v: Value) {
        self.json[key] = v;
    }
    fn emit(&self, path: Option<&PathBuf>) -> Result<(), CliError> {
        for l in &self.lines {
            println!("{}", l);
        }
        if let Some(p) = path {
            let text = serde_json::to_string_pretty(&self.json)
                .map_err(|e| CliError::Fail(e.to_string()))?;
            fs::write(p, text + "\n")
                .map_err(|e| CliError::Usage(format!("cannot write {}: {}", p.display(), e)))?;
        }
        Ok(())
    }
}

// ---------- sources ----------

fn json_or_file(s: &str) -> Result<Value, CliError> {
    let text = if s.trim_start().starts_with('{') {
        s.to_string()
    } else {
        fs::read_to_string(s)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {}", s, e)))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad JSON: {}", e)))
}

impl MatroidSrc {
    fn count(&self) -> usize {
        [self.uniform.is_some(), self.name.is_some(), self.matroid.is_some()]
            .iter()
            .filter(|b| **b)
            .count()
    }

    fn load(&self) -> Result<Matroid, CliError> {
        if self.count() != 1 {
            return Err(CliError::Usage(
                "give exactly one matroid source (--uniform, --name, --matroid)".into(),
            ));
        }
        if let Some(u) = &self.uniform {
            let parts: Vec<&str> = u.split(',').collect();
            let bad = || CliError::Usage(format!("--uniform wants r,n; got {}", u));
            if parts.len() != 2 {
                return Err(bad());
            }
            let r: usize = parts[0].trim().parse().map_err(|_| bad())?;
            let n: usize = parts[1].trim().parse().map_err(|_| bad())?;
            if r > n || n == 0 || n > 20 {
                return Err(bad());
            }
            return Ok(Matroid::uniform(r, n));
        }
        if let Some(name) = &self.name {
            return match name.as_str() {
                "figure-matrix" => Ok(corpus::figure_lattice_matroid()),
                "c4" => Ok(corpus::four_cycle()),
                "b3" => Ok(Matroid::uniform(3, 3)),
                "u56" => Ok(Matroid::uniform(5, 6)),
                other => Err(CliError::Usage(format!(
                    "unknown matroid name {:?}; try figure-matrix, c4, b3, u56",
                    other
                ))),
            };
        }
        let v = json_or_file(self.matroid.as_ref().unwrap())?;
        Matroid::from_json(&v).map_err(|e| CliError::Usage(format!("{:?}", e)))
    }
}

impl LatticeSrc {
    fn load(&self) -> Result<RawLattice, CliError> {
        match (&self.lattice, self.matroid.count()) {
            (Some(_), c) if c > 0 => Err(CliError::Usage(
                "give either --lattice or a matroid source, not both".into(),
            )),
            (Some(s), _) => {
                if s == "pinched" {
                    return Ok(corpus::pinched_lattice());
                }
                let v = json_or_file(s)?;
                RawLattice::from_json(&v).map_err(|e| CliError::Usage(format!("{:?}", e)))
            }
            (None, _) => {
                let m = self.matroid.load()?;
                Ok(FlatLattice::build(&m).to_raw())
            }
        }
    }
}

impl BuildingArg {
    fn resolve(&self, l: &RawLattice) -> Result<Vec<usize>, CliError> {
        let chosen = [self.building.is_some(), self.minimal, self.maximal]
            .iter()
            .filter(|b| **b)
            .count();
        if chosen > 1 {
            return Err(CliError::Usage(
                "pick one of --building, --minimal, --maximal".into(),
            ));
        }
        if self.minimal {
            return Ok(minimal_building_set(l)?);
        }
        if let Some(spec) = &self.building {
            let mut out = Vec::new();
            for label in spec.split(',') {
                let label = label.trim();
                let idx = l
                    .names
                    .iter()
                    .position(|n| n == label)
                    .ok_or_else(|| CliError::Usage(format!("no lattice element {:?}", label)))?;
                out.push(idx);
            }
            out.sort_unstable();
            out.dedup();
            return Ok(out);
        }
        Ok(maximal_building_set(l))
    }
}

// ---------- field dispatch ----------

#[derive(Clone, Copy)]
enum FieldKind {
    Rational,
    Prime,
}

fn field_kind(flag: &Option<String>) -> Result<FieldKind, CliError> {
    let chosen = flag
        .clone()
        .or_else(|| std::env::var("CHOWFORGE_FIELD").ok())
        .unwrap_or_else(|| "rational".into());
    match chosen.as_str() {
        "rational" | "q" => Ok(FieldKind::Rational),
        "fp" => Ok(FieldKind::Prime),
        other => Err(CliError::Usage(format!(
            "unknown field {:?}; use rational or fp",
            other
        ))),
    }
}

// ---------- element parsing ----------

/// Parse "x_12*x_125 + 2*x_1234^2 - x_12" against the ring's variable labels.
fn parse_element<K: Field>(
    ring: &NestedRing<K>,
    input: &str,
) -> Result<NestedElt<K>, CliError> {
    let names = ring.var_names();
    let lookup = |label: &str| -> Result<u16, CliError> {
        let full = if label.starts_with("x_") {
            label.to_string()
        } else {
            format!("x_{}", label)
        };
        names
            .iter()
            .position(|n| *n == full)
            .map(|i| i as u16)
            .ok_or_else(|| CliError::Usage(format!("no variable {:?}", label)))
    };
    // split into signed terms
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                }
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur));
    }
    if terms.is_empty() {
        return Err(CliError::Usage("empty element expression".into()));
    }
    let mut out: NestedElt<K> = BTreeMap::new();
    for (sgn, term) in terms {
        let mut coeff: i64 = sgn;
        let mut mono = Monomial::one();
        for factor in term.split(['*', ' ']).filter(|f| !f.trim().is_empty()) {
            let factor = factor.trim();
            if let Ok(n) = factor.parse::<i64>() {
                coeff *= n;
                continue;
            }
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<u8>()
                        .map_err(|_| CliError::Usage(format!("bad exponent in {:?}", factor)))?,
                ),
                None => (factor, 1),
            };
            let v = lookup(base)?;
            for _ in 0..exp {
                mono = mono.mul_var(v);
            }
        }
        let c = K::from_i64(coeff);
        let entry = out.entry(mono).or_insert_with(|| K::from_i64(0));
        *entry = entry.add(&c);
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn elt_display<K: Field>(ring: &NestedRing<K>, e: &NestedElt<K>) -> String {
    let names = ring.var_names();
    if e.is_empty() {
        return "0".into();
    }
    // largest monomial first, matching the Gröbner order
    let mut parts: Vec<String> = Vec::new();
    for (m, c) in e.iter().rev() {
        let cs = format!("{}", c);
        if cs == "1" && m.deg() > 0 {
            parts.push(m.display(&names));
        } else if m.deg() == 0 {
            parts.push(cs);
        } else {
            parts.push(format!("{}*{}", cs, m.display(&names)));
        }
    }
    parts.join(" + ")
}

fn hilbert_poly_string(hf: &[usize]) -> String {
    let mut parts = Vec::new();
    for (d, &c) in hf.iter().enumerate() {
        if c == 0 {
            continue;
        }
        parts.push(match (d, c) {
            (0, c) => format!("{}", c),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{}t", c),
            (d, 1) => format!("t^{}", d),
            (d, c) => format!("{}t^{}", c, d),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

// ---------- commands ----------

fn cmd_matroid_info(src: &MatroidSrc) -> Result<Report, CliError> {
    let m = src.load()?;
    let lat = FlatLattice::build(&m);
    let mut rep = Report::new("matroid info");
    rep.line(format!("ground set: {} elements", m.n()));
    rep.line(format!("rank: {}", m.rank_full()));
    rep.line(format!("simple: {}", m.is_simple()));
    rep.line(format!("flats: {}", lat.len()));
    rep.line(format!("bases: {}", m.bases().len()));
    for r in 0..=lat.top_rank() {
        let row: Vec<String> = lat.by_rank(r).iter().map(|&f| lat.label(f)).collect();
        rep.line(format!("rank {}: {}", r, row.join(" ")));
    }
    rep.set("matroid", m.to_json());
    rep.set("flat_count", json!(lat.len()));
    rep.set("basis_count", json!(m.bases().len()));
    Ok(rep)
}

fn cmd_lattice(cmd: &LatticeCmd) -> Result<Report, CliError> {
    match cmd {
        LatticeCmd::Show { src } => {
            let m = src.load()?;
            let lat = FlatLattice::build(&m);
            let mut rep = Report::new("lattice show");
            for f in lat.all() {
                rep.line(format!("{:3}  rank {}  {}", f, lat.rank(f), lat.label(f)));
            }
            rep.set("lattice", lat.to_json());
            Ok(rep)
        }
        LatticeCmd::Order { src } => {
            let m = src.load()?;
            let lat = FlatLattice::build(&m);
            let mut rep = Report::new("lattice order");
            // ids ascend in the order, so print greatest first
            let labels: Vec<String> =
                (0..lat.len() as u32).rev().map(|f| lat.label(f)).collect();
            rep.line(labels.join(" > "));
            rep.set("descending", json!(labels));
            Ok(rep)
        }
        LatticeCmd::VerifyOrder { src } => {
            let m = src.load()?;
            let lat = FlatLattice::build(&m);
            let mut rep = Report::new("lattice verify-order");
            match lat.verify_builtin_coatom_order() {
                Ok(checked) => {
                    rep.line(format!("total coatom order: OK ({} cover checks)", checked));
                    rep.set("pass", json!(true));
                    Ok(rep)
                }
                Err(v) => Err(CliError::Fail(format!("order violation: {:?}", v))),
            }
        }
    }
}

fn cmd_ring<K: Field>(augmented: bool, cmd: &RingCmd) -> Result<Report, CliError> {
    let tag = if augmented { "achow" } else { "chow" };
    match cmd {
        RingCmd::Hilbert { src } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, augmented)?;
            let hf = ring.hilbert_function();
            let mut rep = Report::new(&format!("{} hilbert", tag));
            rep.line(hilbert_poly_string(&hf));
            rep.set("hilbert_function", json!(hf));
            Ok(rep)
        }
        RingCmd::Basis { src, degree } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, augmented)?;
            let names = ring.var_names();
            let mut rep = Report::new(&format!("{} basis", tag));
            let degrees: Vec<usize> = match degree {
                Some(d) => vec![*d],
                None => (0..=ring.top_degree()).collect(),
            };
            let mut js = Vec::new();
            for d in degrees {
                let basis = ring.nested_basis(d);
                let words: Vec<String> =
                    basis.iter().map(|m| m.display(&names)).collect();
                rep.line(format!("degree {} ({}): {}", d, basis.len(), words.join(" ")));
                js.push(json!({ "degree": d, "monomials": words }));
            }
            rep.set("basis", json!(js));
            Ok(rep)
        }
        RingCmd::Multiply { src, a, b } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, augmented)?;
            let ea = ring.normal_form(&parse_element(&ring, a)?);
            let eb = ring.normal_form(&parse_element(&ring, b)?);
            let prod = ring.multiply(&ea, &eb);
            let mut rep = Report::new(&format!("{} multiply", tag));
            rep.line(format!("a      = {}", elt_display(&ring, &ea)));
            rep.line(format!("b      = {}", elt_display(&ring, &eb)));
            rep.line(format!("a * b  = {}", elt_display(&ring, &prod)));
            rep.set("product", ring.element_to_json(&prod));
            Ok(rep)
        }
        RingCmd::Groebner { src } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, augmented)?;
            let names = ring.var_names();
            let gb = ring.groebner_basis();
            let mut rep = Report::new(&format!("{} groebner", tag));
            rep.line(format!("{} elements", gb.len()));
            let mut js = Vec::new();
            for g in &gb {
                let s = g.display(&names);
                rep.line(s.clone());
                js.push(json!(s));
            }
            rep.set("groebner_basis", json!(js));
            Ok(rep)
        }
        RingCmd::Colon { src, gens, by } => cmd_colon::<K>(augmented, src, gens, by),
    }
}

/// Resolve a comma-separated list of flat labels to lattice ids.
fn flats_by_label<K: Field>(
    ring: &NestedRing<K>,
    lat: &FlatLattice,
    spec: &str,
) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for label in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let label = label.trim().trim_start_matches("x_");
        let f = (0..lat.len() as u32)
            .find(|&f| lat.label(f) == label)
            .ok_or_else(|| CliError::Usage(format!("no flat {:?}", label)))?;
        if ring.var(f).is_none() {
            return Err(CliError::Usage(format!("flat {} carries no variable", label)));
        }
        out.push(f);
    }
    Ok(out)
}

fn cmd_colon<K: Field>(
    augmented: bool,
    src: &MatroidSrc,
    gens: &Option<String>,
    by: &str,
) -> Result<Report, CliError> {
    let m = src.load()?;
    let ring: NestedRing<K> = NestedRing::new(&m, augmented)?;
    let lat = FlatLattice::build(&m);
    let gen_flats = match gens {
        Some(spec) => flats_by_label(&ring, &lat, spec)?,
        None => Vec::new(),
    };
    let by_flat = *flats_by_label(&ring, &lat, by)?
        .first()
        .ok_or_else(|| CliError::Usage("--by wants one flat label".into()))?;
    let eng = ring.engine()?;
    let as_elt = |f: u32| ring.to_engine_element(&eng, &ring.var_elt(f));
    let j = eng.ideal_span(
        &gen_flats.iter().map(|&f| as_elt(f)).collect::<Result<Vec<_>, _>>()?,
    )?;
    let colon = eng.colon(&j, &[as_elt(by_flat)?])?;
    let linear = eng.is_generated_by_linear_forms(&colon)?;
    let mingens: Vec<usize> = (0..=eng.top_degree().unwrap_or(eng.d_max()))
        .map(|d| eng.minimal_generators_dim(&colon, d))
        .collect::<Result<_, _>>()?;

    let tag = if augmented { "achow" } else { "chow" };
    let mut rep = Report::new(&format!("{} colon", tag));
    let gen_labels: Vec<String> = gen_flats.iter().map(|&f| lat.label(f)).collect();
    rep.line(format!(
        "({}) : x_{}",
        gen_labels.iter().map(|l| format!("x_{}", l)).collect::<Vec<_>>().join(", "),
        lat.label(by_flat)
    ));
    rep.line(format!("dimensions by degree: {:?}", colon.dims()));
    rep.line(format!("minimal generators by degree: {:?}", mingens));
    rep.line(format!("generated by linear forms: {}", linear));
    rep.set("dims", json!(colon.dims()));
    rep.set("minimal_generators", json!(mingens));
    rep.set("linear", json!(linear));

    // closed-form prediction, when one of the stated shapes applies
    let top_rank = lat.top_rank();
    let all_hyper = |fs: &[u32]| fs.iter().all(|&f| lat.rank(f) == top_rank - 1);
    let closed: Option<Result<Vec<u32>, ChowError>> = if gen_flats.is_empty() {
        Some(ring.hyperplane_annihilator(&[by_flat]).or_else(|_| {
            if by_flat == lat.top() && !augmented {
                Ok(ring.truncation_colon())
            } else {
                Err(ChowError::Invalid("no annihilator closed form".into()))
            }
        }))
    } else if all_hyper(&gen_flats) && lat.rank(by_flat) == top_rank - 1 {
        Some(ring.hyperplane_colon(&gen_flats, by_flat))
    } else {
        None
    };
    match closed {
        Some(Ok(vars)) => {
            let span = eng.ideal_span(
                &vars.iter().map(|&f| as_elt(f)).collect::<Result<Vec<_>, _>>()?,
            )?;
            let agrees = span.equals(&colon);
            let labels: Vec<String> = vars.iter().map(|&f| format!("x_{}", lat.label(f))).collect();
            rep.line(format!("closed form: ({})", labels.join(", ")));
            rep.line(format!("closed form matches: {}", agrees));
            rep.set("closed_form", json!(labels));
            rep.set("closed_form_matches", json!(agrees));
            if !agrees {
                rep.fail();
            }
        }
        Some(Err(e)) => {
            rep.line(format!("closed form: not applicable ({:?})", e));
            rep.set("closed_form", json!(null));
        }
        None => {}
    }
    Ok(rep)
}

fn cmd_koszul<K: Field>(cmd: &KoszulCmd) -> Result<Report, CliError> {
    match cmd {
        KoszulCmd::Certify { src, imax, augmented } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, *augmented)?;
            let eng = ring.engine()?;
            let cert = koszul_certificate(&eng, *imax)?;
            let mut rep = Report::new("koszul certify");
            rep.line(format!("hilbert function: {}", hilbert_poly_string(&cert.hilbert)));
            rep.line(cert.betti.to_text());
            rep.line(format!(
                "betti totals: {}",
                cert.betti.totals().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
            ));
            rep.line(format!("poincare coefficients: {:?}", cert.poincare));
            rep.line(format!(
                "linear to i <= {}: {}   series identity: {}",
                imax, cert.linear, cert.series_identity
            ));
            for &(i, j, v) in &cert.nonlinear_witnesses {
                rep.line(format!("nonlinear witness: beta_{{{},{}}} = {}", i, j, v));
            }
            rep.line(format!("certificate: {}", if cert.pass() { "PASS" } else { "FAIL" }));
            rep.set("certificate", cert.to_json());
            if !cert.pass() {
                rep.fail();
            }
            Ok(rep)
        }
        KoszulCmd::Filtration { src, augmented, budget } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, *augmented)?;
            let eng = ring.engine()?;
            let report = verify_filtration(&ring, &eng, *budget)?;
            let mut rep = Report::new("koszul filtration");
            rep.line(format!(
                "filtration ideals visited: {}   colon steps checked: {}",
                report.visited, report.steps
            ));
            for v in &report.violations {
                rep.line(format!("violation: {}", v));
            }
            rep.line(format!(
                "filtration walk: {}",
                if report.violations.is_empty() { "PASS" } else { "FAIL" }
            ));
            rep.set("visited", json!(report.visited));
            rep.set("steps", json!(report.steps));
            rep.set("violations", json!(report.violations));
            if !report.violations.is_empty() {
                rep.fail();
            }
            Ok(rep)
        }
        KoszulCmd::Betti { src, imax, jmax, augmented } => {
            let ring: NestedRing<K> = NestedRing::new(&src.load()?, *augmented)?;
            let eng = ring.engine()?;
            let jm = jmax.unwrap_or(imax + 1);
            let betti = eng.betti_of_residue_field(*imax, jm)?;
            let mut rep = Report::new("koszul betti");
            rep.line(betti.to_text());
            rep.set("betti", betti.to_json());
            Ok(rep)
        }
    }
}

fn cmd_dlg<K: Field>(cmd: &DlgCmd) -> Result<Report, CliError> {
    let (src, bset, imax, dmax) = match cmd {
        DlgCmd::Build { src, bset, dmax } => (src, bset, None, *dmax),
        DlgCmd::Certify { src, bset, imax, dmax } => (src, bset, Some(*imax), *dmax),
    };
    let l = src.load()?;
    let g = bset.resolve(&l)?;
    let labels: Vec<String> = g.iter().map(|&i| l.names[i].clone()).collect();
    let pres = dlg_presentation::<K>(&l, &g)?;
    let nonfaces = nested_complex_nonfaces(&l, &g)?;
    let build_to = match imax {
        Some(i) => dmax.max(i + 1),
        None => dmax,
    };
    let eng = Engine::build(pres.var_names.clone(), pres.relations.clone(), build_to)?;
    let mut rep = Report::new(if imax.is_some() { "dlg certify" } else { "dlg build" });
    rep.line(format!("building set ({}): {}", g.len(), labels.join(" ")));
    rep.line(format!(
        "surviving variables ({}): {}",
        pres.var_names.len(),
        pres.var_names.join(" ")
    ));
    rep.line(format!(
        "minimal non-faces: {}   relations after elimination: {}",
        nonfaces.len(),
        pres.relations.len()
    ));
    let hf = eng.hilbert_series_poly()?;
    rep.line(format!("hilbert function: {}", hilbert_poly_string(&hf)));
    rep.set("building_set", json!(labels));
    rep.set("variables", json!(pres.var_names));
    rep.set("hilbert_function", json!(hf));
    if let Some(i) = imax {
        let cert = koszul_certificate(&eng, i)?;
        rep.line(cert.betti.to_text());
        for &(i, j, v) in &cert.nonlinear_witnesses {
            rep.line(format!("nonlinear witness: beta_{{{},{}}} = {}", i, j, v));
        }
        rep.line(format!("certificate: {}", if cert.pass() { "PASS" } else { "FAIL" }));
        rep.set("certificate", cert.to_json());
        if !cert.pass() {
            rep.fail();
        }
    }
    Ok(rep)
}

fn cmd_corpus<K: Field>(imax: usize) -> Result<Report, CliError> {
    let entries = corpus::full_corpus();
    // one thread per matroid, merged back in corpus order
    let results: Vec<Result<(String, Value), CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = entries
            .iter()
            .map(|(name, m)| {
                let name = name.clone();
                let m = m.clone();
                scope.spawn(move || corpus_entry::<K>(&name, &m, imax))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("corpus job panicked")).collect()
    });
    let mut rep = Report::new("corpus run");
    let mut js = Vec::new();
    let mut failed = false;
    for r in results {
        match r {
            Ok((line, v)) => {
                rep.line(line);
                js.push(v);
            }
            Err(e) => {
                failed = true;
                rep.line(format!("FAIL: {}", e.message()));
            }
        }
    }
    rep.set("entries", json!(js));
    rep.line(format!(
        "corpus: {} matroids, {}",
        entries.len(),
        if failed { "FAIL" } else { "all checks passed" }
    ));
    if failed {
        rep.fail();
    }
    Ok(rep)
}

/// Checks for one corpus matroid: coatom order, nested-basis counts against
/// the engine, socle dimension, optional Koszul certificates.
fn corpus_entry<K: Field>(
    name: &str,
    m: &Matroid,
    imax: usize,
) -> Result<(String, Value), CliError> {
    let lat = FlatLattice::build(m);
    lat.verify_builtin_coatom_order()
        .map_err(|v| CliError::Fail(format!("{}: coatom order violation {:?}", name, v)))?;
    let mut hfs = Vec::new();
    let mut certs = Vec::new();
    for augmented in [false, true] {
        let ring: NestedRing<K> = NestedRing::new(m, augmented)?;
        let eng = ring.engine()?;
        let hf = eng.hilbert_series_poly()?;
        if hf != ring.hilbert_function() {
            return Err(CliError::Fail(format!(
                "{}: nested basis count disagrees with the engine (augmented={})",
                name, augmented
            )));
        }
        let socle: usize = eng.socle()?.dims().iter().sum();
        if socle != 1 {
            return Err(CliError::Fail(format!(
                "{}: socle dimension {} (augmented={})",
                name, socle, augmented
            )));
        }
        if imax > 0 {
            let cert = koszul_certificate(&eng, imax)?;
            if !cert.pass() {
                return Err(CliError::Fail(format!(
                    "{}: certificate failed (augmented={})",
                    name, augmented
                )));
            }
            certs.push(json!(cert.pass()));
        }
        hfs.push(hf);
    }
    let line = format!(
        "{:24} chow {:?}  achow {:?}{}",
        name,
        hfs[0],
        hfs[1],
        if imax > 0 { "  certified" } else { "" }
    );
    let v = json!({
        "name": name,
        "chow_hilbert": &hfs[0],
        "achow_hilbert": &hfs[1],
        "certified": imax > 0,
    });
    Ok((line, v))
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let kind = field_kind(&cli.field)?;
    macro_rules! with_field {
        ($f:ident, $($a:expr),*) => {
            match kind {
                FieldKind::Rational => $f::<Q>($($a),*),
                FieldKind::Prime => $f::<Fp>($($a),*),
            }
        };
    }
    match &cli.cmd {
        Cmd::Matroid { cmd: MatroidCmd::Info { src } } => cmd_matroid_info(src),
        Cmd::Lattice { cmd } => cmd_lattice(cmd),
        Cmd::Chow { cmd } => with_field!(cmd_ring, false, cmd),
        Cmd::Achow { cmd } => with_field!(cmd_ring, true, cmd),
        Cmd::Koszul { cmd } => with_field!(cmd_koszul, cmd),
        Cmd::Dlg { cmd } => with_field!(cmd_dlg, cmd),
        Cmd::Corpus { cmd: CorpusCmd::Run { imax } } => with_field!(cmd_corpus, *imax),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            if let Err(e) = rep.emit(cli.json.as_ref()) {
                eprintln!("error: {}", e.message());
                return ExitCode::from(e.code());
            }
            if rep.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
