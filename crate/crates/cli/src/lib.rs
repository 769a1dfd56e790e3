//! The `cqh` command-line tool: loads `.cqh` files, runs checks and reports.

pub mod bundle;
pub mod catalog;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cqh_core::bialgebroid::{associativity_witness, build_l, coinvariants_l_action, equivalence_round_trip, unit_constraint, LModule, TwoSidedModule};
use cqh_core::comodule::{coinvariant_associativity, coinvariants, verify_comodule_algebra, verify_rel_hopf_module, ComoduleAlgebra};
use cqh_core::coquasi::{opposite_variants, verify_all, CoquasiHopf};
use cqh_core::cqhfile::{emit_cqh, parse_cqh, CqhDocument, Kind};
use cqh_core::exactlin::{Field, Scalar};
use cqh_core::galois::{
    build_can, cleft_from_galois_nb, normal_basis_search, seed_from_env, theorem_big_battery, translation_map, twist_invariance, verify_cleft,
    CleftData, Verdict,
};
use cqh_core::twist::{compute_drinfeld_twist, twist_bialgebra, verify_gauge_twist, GaugeTwist, DRINFELD_IDENTITIES};
use cqh_core::{CheckReport, Error};

pub use bundle::ReportBundle;
use catalog::{catalog, find, Role};

#[derive(Debug, Parser)]
#[command(name = "cqh", version, about = "Exact checks for coquasi-Hopf algebras, comodule algebras and Galois extensions")]
pub struct Cli {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Run the full axiom suite on every loaded input first.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Axiom suite for a host, optionally followed by a comodule algebra (or twist) and a Hopf module.
    Verify {
        #[arg(required = true, num_args = 1..=3)]
        files: Vec<PathBuf>,
    },
    /// The coinvariant subalgebra B.
    Coinvariants { host: PathBuf, algebra: PathBuf },
    /// Rank of the canonical map A⊗_B A → A⊗H.
    Galois { host: PathBuf, algebra: PathBuf },
    /// Translation map identities.
    Translation { host: PathBuf, algebra: PathBuf },
    /// Verify a cleaving map γ with convolution inverse δ, both given as `kind linmap` files.
    Cleft { host: PathBuf, algebra: PathBuf, gamma: PathBuf, delta: PathBuf },
    /// Build cleft data from a normal basis search.
    Cleftify {
        host: PathBuf,
        algebra: PathBuf,
        /// Write `<prefix>_gamma.cqh` and `<prefix>_delta.cqh`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a normal basis A ≅ B⊗H (seeded by CQH_SEED).
    Normalbasis { host: PathBuf, algebra: PathBuf },
    /// Gauge twist axioms, the twisted host, and (with an algebra) twist invariance of the Galois map.
    Twist { host: PathBuf, twist: PathBuf, algebra: Option<PathBuf> },
    /// Drinfeld twist identities of a host with bijective antipode.
    Drinfeld { host: PathBuf },
    /// The algebra L ⊆ A⊗A and the module equivalence it governs.
    Bialgebroid { host: PathBuf, algebra: PathBuf },
    /// Instance-level evaluation of the structure theorem conditions.
    Battery { host: PathBuf, algebra: PathBuf },
    /// Emit a built-in example as a `.cqh` file.
    Example {
        name: Option<String>,
        /// Write every example into this directory.
        #[arg(long, conflicts_with = "name")]
        all: Option<PathBuf>,
        #[arg(long)]
        list: bool,
    },
    /// Axiom suite and file round trip for every built-in example.
    Selftest,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    File { path: String, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for usage, I/O and malformed input; 1 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Usage(_) | CliError::Io { .. } => return 2,
            CliError::File { source, .. } | CliError::Core(source) => source,
        };
        match core {
            Error::ParseError { .. } | Error::InvalidStructure(_) | Error::DimensionMismatch(_) | Error::FieldMismatch | Error::HostMismatch(_) | Error::DuplicateLabel(_) | Error::InvalidField(_) => 2,
            _ => 1,
        }
    }
}

/// Exit code plus the text written to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome { code, stdout: text, stderr: String::new() } } else { Outcome { code, stdout: String::new(), stderr: text } };
        }
    };
    let started = Instant::now();
    match execute(&cli) {
        Ok(Output::Text(text)) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Ok(Output::Report(mut bundle)) => {
            bundle.timing_ms = started.elapsed().as_millis() as u64;
            let stdout = if cli.json { bundle.to_json() + "\n" } else { bundle.to_text() };
            Outcome { code: bundle.exit_code(), stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

enum Output {
    Text(String),
    Report(ReportBundle),
}

fn read_doc(path: &Path) -> Result<CqhDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_cqh(&text).map_err(|source| CliError::File { path: path.display().to_string(), source })
}

fn in_file<T>(path: &Path, r: Result<T, Error>) -> Result<T, CliError> {
    r.map_err(|source| CliError::File { path: path.display().to_string(), source })
}

/// Loaded inputs with their optional axiom reports.
struct Loader<'a> {
    cli: &'a Cli,
    bundle: ReportBundle,
}

impl<'a> Loader<'a> {
    fn new(cli: &'a Cli, command: &str) -> Self {
        Loader { cli, bundle: ReportBundle::new(command) }
    }

    fn note_input(&mut self, path: &Path, field: Field) {
        self.bundle.inputs.push(path.display().to_string());
        self.bundle.field.get_or_insert_with(|| field.to_string());
    }

    fn host(&mut self, path: &Path) -> Result<Arc<CoquasiHopf>, CliError> {
        let doc = read_doc(path)?;
        if doc.kind != Kind::CoquasiHopf {
            return Err(CliError::Usage(format!("{}: expected a coquasihopf file, found {}", path.display(), doc.kind)));
        }
        let h = in_file(path, doc.to_coquasi_hopf())?;
        self.note_input(path, h.field());
        if self.cli.verify {
            self.bundle.section(format!("axioms {}", path.display()), verify_all(&h));
        }
        Ok(Arc::new(h))
    }

    fn algebra(&mut self, host: &Path, path: &Path) -> Result<Arc<ComoduleAlgebra>, CliError> {
        let h = self.host(host)?;
        self.algebra_over(h, path)
    }

    fn algebra_over(&mut self, h: Arc<CoquasiHopf>, path: &Path) -> Result<Arc<ComoduleAlgebra>, CliError> {
        let a = in_file(path, read_doc(path)?.to_algebra(h))?;
        self.note_input(path, a.field());
        if self.cli.verify {
            self.bundle.section(format!("axioms {}", path.display()), verify_comodule_algebra(&a));
        }
        Ok(Arc::new(a))
    }

    fn twist(&mut self, h: &CoquasiHopf, path: &Path) -> Result<GaugeTwist, CliError> {
        let t = in_file(path, read_doc(path)?.to_twist(h))?;
        self.note_input(path, h.field());
        Ok(t)
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    use Command::*;
    let bundle = match &cli.command {
        Verify { files } => verify(cli, files)?,
        Coinvariants { host, algebra } => {
            let mut l = Loader::new(cli, "coinvariants");
            let a = l.algebra(host, algebra)?;
            let b = coinvariants(&a);
            l.bundle.section("coinvariant subalgebra", coinvariant_associativity(&b));
            l.bundle.verdict("b_dim", b.dim());
            l.bundle.line(format!("B dim={}", b.dim()));
            for k in 0..b.dim() {
                l.bundle.line(format!("  b{} = {}", k + 1, show_vector(b.element(k), a.space().labels())));
            }
            l.bundle
        }
        Galois { host, algebra } => {
            let mut l = Loader::new(cli, "galois");
            let a = l.algebra(host, algebra)?;
            let g = build_can(&a);
            l.bundle.section("can", g.report.clone());
            galois_verdict(&mut l.bundle, g.verdict, g.rank, g.source_dim(), g.target_dim());
            l.bundle
        }
        Translation { host, algebra } => {
            let mut l = Loader::new(cli, "translation");
            let a = l.algebra(host, algebra)?;
            let t = translation_map(&build_can(&a))?;
            l.bundle.section("translation map", t.report.clone());
            l.bundle.line(if t.report.all_pass() { "TRANSLATION MAP verified" } else { "TRANSLATION MAP failed" });
            l.bundle
        }
        Cleft { host, algebra, gamma, delta } => {
            let mut l = Loader::new(cli, "cleft");
            let a = l.algebra(host, algebra)?;
            let gamma = in_file(gamma, read_doc(gamma)?.to_linmap())?;
            let delta = in_file(delta, read_doc(delta)?.to_linmap())?;
            let r = verify_cleft(&CleftData { algebra: a, gamma, delta });
            let ok = r.all_pass();
            l.bundle.section("cleft", r);
            l.bundle.verdict("cleft", ok);
            l.bundle.line(if ok { "CLEFT" } else { "NOT CLEFT" });
            l.bundle
        }
        Cleftify { host, algebra, out } => cleftify(cli, host, algebra, out.as_deref())?,
        Normalbasis { host, algebra } => {
            let mut l = Loader::new(cli, "normalbasis");
            let a = l.algebra(host, algebra)?;
            let seed = seed_from_env();
            l.bundle.seed = Some(seed);
            let search = normal_basis_search(&a, seed);
            l.bundle.verdict("solution_dim", search.solution_dim);
            l.bundle.verdict("tries", search.tries);
            l.bundle.verdict("inconclusive", search.inconclusive);
            match &search.data {
                Some(nb) => {
                    l.bundle.section("normal basis", nb.report.clone());
                    l.bundle.line("NORMAL BASIS found");
                }
                None => {
                    l.bundle.fail();
                    l.bundle.line(if search.inconclusive { format!("INCONCLUSIVE after {} tries", search.tries) } else { "NO NORMAL BASIS".to_string() });
                }
            }
            l.bundle
        }
        Twist { host, twist, algebra } => {
            let mut l = Loader::new(cli, "twist");
            let h = l.host(host)?;
            let t = l.twist(&h, twist)?;
            l.bundle.section("gauge twist", verify_gauge_twist(h.bialgebra(), &t));
            let twisted = twist_bialgebra(&h, &t)?;
            l.bundle.section("twisted host", verify_all(&twisted));
            if let Some(path) = algebra {
                let a = l.algebra_over(h.clone(), path)?;
                l.bundle.section("twist invariance", twist_invariance(&a, &t)?);
            }
            l.bundle.line(if l.bundle.passed { "TWIST verified" } else { "TWIST failed" });
            l.bundle
        }
        Drinfeld { host } => {
            let mut l = Loader::new(cli, "drinfeld");
            let h = l.host(host)?;
            let data = compute_drinfeld_twist(&h)?;
            let required: &[&str] = if h.antipode_inv().is_some() { &DRINFELD_IDENTITIES } else { &DRINFELD_IDENTITIES[..5] };
            let (mut main, mut readings) = (CheckReport::new(), CheckReport::new());
            for e in data.report.entries {
                if required.contains(&e.name.as_str()) || e.name.starts_with("f: ") {
                    main.entries.push(e);
                } else {
                    readings.entries.push(e);
                }
            }
            l.bundle.section("drinfeld twist", main);
            l.bundle.info("drinfeld readings", readings);
            let trivial = data.f.tau().same_matrix(GaugeTwist::trivial(h.bialgebra()).tau());
            l.bundle.verdict("f_trivial", trivial);
            l.bundle.line(format!("DRINFELD {} f{}", if l.bundle.passed { "verified" } else { "failed" }, if trivial { " = counit⊗counit" } else { " nontrivial" }));
            l.bundle
        }
        Bialgebroid { host, algebra } => bialgebroid(cli, host, algebra)?,
        Battery { host, algebra } => {
            let mut l = Loader::new(cli, "battery");
            let a = l.algebra(host, algebra)?;
            let seed = seed_from_env();
            l.bundle.seed = Some(seed);
            let r = theorem_big_battery(&a, seed)?;
            l.bundle.section("structure theorem", r.report.clone());
            for (key, value) in [
                ("total_integral", serde_json::json!(r.total_integral)),
                ("can_surjective", serde_json::json!(r.can_surjective)),
                ("counit_bijective", serde_json::json!(r.counit_bijective)),
                ("unit_bijective", serde_json::json!(r.unit_bijective)),
                ("condition_1", serde_json::json!(r.condition_1)),
                ("condition_2_proxy", serde_json::json!(r.condition_2_proxy)),
                ("condition_4", serde_json::json!(r.condition_4)),
                ("flatness", serde_json::to_value(r.flatness).expect("serializes")),
            ] {
                l.bundle.line(format!("{key}={value}"));
                l.bundle.verdicts.insert(key.to_string(), value);
            }
            galois_verdict(&mut l.bundle, r.verdict, 0, 0, 0);
            l.bundle
        }
        Example { name, all, list } => return example(name.as_deref(), all.as_deref(), *list),
        Selftest => selftest()?,
    };
    Ok(Output::Report(bundle))
}

fn galois_verdict(b: &mut ReportBundle, v: Verdict, rank: usize, source: usize, target: usize) {
    match v {
        Verdict::Galois => {
            b.verdict("galois", true);
            if target > 0 {
                b.verdict("rank", rank);
                b.line(format!("GALOIS rank={source}/{target}"));
            } else {
                b.line("GALOIS");
            }
        }
        Verdict::NotGalois { rank, corank } => {
            b.verdict("galois", false);
            b.verdict("rank", rank);
            b.verdict("corank", corank);
            b.fail();
            b.line(format!("NOT GALOIS corank={corank}"));
        }
    }
}

fn show_vector(v: &[(usize, Scalar)], labels: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(i, c)| format!("({c})*{}", labels[*i])).collect::<Vec<_>>().join(" + ")
}

fn verify(cli: &Cli, files: &[PathBuf]) -> Result<ReportBundle, CliError> {
    let mut l = Loader::new(cli, "verify");
    let h = l.host(&files[0])?;
    if !cli.verify {
        l.bundle.section(format!("axioms {}", files[0].display()), verify_all(&h));
    }
    let Some(second) = files.get(1) else {
        return Ok(finish_verify(l.bundle));
    };
    match read_doc(second)?.kind {
        Kind::Twist => {
            if files.len() > 2 {
                return Err(CliError::Usage("a twist file takes no further inputs".into()));
            }
            let t = l.twist(&h, second)?;
            l.bundle.section(format!("axioms {}", second.display()), verify_gauge_twist(h.bialgebra(), &t));
            l.bundle.section("twisted host", verify_all(&twist_bialgebra(&h, &t)?));
        }
        Kind::ComoduleAlgebra => {
            let a = l.algebra_over(h, second)?;
            if !cli.verify {
                l.bundle.section(format!("axioms {}", second.display()), verify_comodule_algebra(&a));
            }
            if let Some(third) = files.get(2) {
                let m = in_file(third, read_doc(third)?.to_module(a))?;
                l.note_input(third, m.field());
                l.bundle.section(format!("axioms {}", third.display()), verify_rel_hopf_module(&m));
            }
        }
        other => return Err(CliError::Usage(format!("{}: cannot verify a {other} file in second position", second.display()))),
    }
    Ok(finish_verify(l.bundle))
}

fn finish_verify(mut b: ReportBundle) -> ReportBundle {
    let line = if b.passed { "VERIFIED" } else { "AXIOMS FAILED" };
    b.line(line);
    b
}

fn cleftify(cli: &Cli, host: &Path, algebra: &Path, out: Option<&Path>) -> Result<ReportBundle, CliError> {
    let mut l = Loader::new(cli, "cleftify");
    let a = l.algebra(host, algebra)?;
    let seed = seed_from_env();
    l.bundle.seed = Some(seed);
    let g = build_can(&a);
    let search = normal_basis_search(&a, seed);
    let Some(nb) = search.data else {
        l.bundle.fail();
        l.bundle.verdict("cleft", false);
        l.bundle.line(if search.inconclusive { "NOT CLEFT (normal basis search inconclusive)" } else { "NOT CLEFT (no normal basis)" });
        return Ok(l.bundle);
    };
    if !g.verdict.is_galois() {
        l.bundle.fail();
        l.bundle.verdict("cleft", false);
        l.bundle.line("NOT CLEFT (not Galois)");
        return Ok(l.bundle);
    }
    l.bundle.section("normal basis", nb.report.clone());
    let cleft = cleft_from_galois_nb(&g, &nb)?;
    l.bundle.section("cleft", verify_cleft(&cleft));
    if let Some(prefix) = out {
        for (suffix, map) in [("gamma", &cleft.gamma), ("delta", &cleft.delta)] {
            let path = PathBuf::from(format!("{}_{suffix}.cqh", prefix.display()));
            fs::write(&path, emit_cqh(&CqhDocument::from_linmap(map))).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            l.bundle.line(format!("wrote {}", path.display()));
        }
    }
    let ok = l.bundle.passed;
    l.bundle.verdict("cleft", ok);
    l.bundle.line(if ok { "CLEFT" } else { "NOT CLEFT" });
    Ok(l.bundle)
}

fn bialgebroid(cli: &Cli, host: &Path, algebra: &Path) -> Result<ReportBundle, CliError> {
    let mut l = Loader::new(cli, "bialgebroid");
    let a = l.algebra(host, algebra)?;
    let lb = Arc::new(build_l(&a));
    l.bundle.section("L", lb.report.clone());
    l.bundle.verdict("l_dim", lb.dim());
    l.bundle.line(format!("L dim={}", lb.dim()));
    let witness = associativity_witness(&a);
    l.bundle.verdict("a_associativity_witness", witness);
    l.bundle.line(match witness {
        Some([i, j, k]) => format!("A not associative at ({}, {}, {})", i + 1, j + 1, k + 1),
        None => "A associative".to_string(),
    });
    l.bundle.section("unit constraint", unit_constraint(&a)?);
    let g = build_can(&a);
    if g.verdict.is_galois() {
        let regular = TwoSidedModule::regular(a.clone());
        let n = coinvariants_l_action(&lb, &regular)?.module;
        let l_reg = LModule::new(lb.clone(), lb.carrier.space.clone(), lb.mult.clone())?;
        l.bundle.section("equivalence", equivalence_round_trip(&lb, &g, &[n, l_reg], &[regular])?);
    } else {
        l.bundle.line("equivalence skipped: not Galois");
    }
    Ok(l.bundle)
}

fn example(name: Option<&str>, all: Option<&Path>, list: bool) -> Result<Output, CliError> {
    let examples = catalog(Field::Rational)?;
    if list {
        return Ok(Output::Text(examples.iter().map(|e| format!("{}\n", e.name)).collect()));
    }
    if let Some(dir) = all {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        let mut out = String::new();
        for e in &examples {
            let path = dir.join(format!("{}.cqh", e.name));
            fs::write(&path, emit_cqh(&e.doc)).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            out.push_str(&format!("wrote {}\n", path.display()));
        }
        return Ok(Output::Text(out));
    }
    let name = name.ok_or_else(|| CliError::Usage("example needs a name, --list or --all <dir>".into()))?;
    let e = find(&examples, name).ok_or_else(|| CliError::Usage(format!("unknown example `{name}` (see --list)")))?;
    Ok(Output::Text(emit_cqh(&e.doc)))
}

fn selftest() -> Result<ReportBundle, CliError> {
    let mut b = ReportBundle::new("selftest");
    b.field = Some(Field::Rational.to_string());
    let examples = catalog(Field::Rational)?;
    let mut round_trip = CheckReport::new();
    let mut hosts: Vec<(&str, Arc<CoquasiHopf>)> = Vec::new();
    for e in &examples {
        let text = emit_cqh(&e.doc);
        let again = parse_cqh(&text).map(|d| emit_cqh(&d));
        round_trip.check(format!("{} round trip", e.name), again.as_deref() == Ok(text.as_str()));
        let host_of = |name: &str| hosts.iter().find(|(n, _)| *n == name).map(|(_, h)| h.clone()).expect("hosts precede their dependents");
        match e.role {
            Role::Host => {
                let h = Arc::new(e.doc.to_coquasi_hopf()?);
                b.section(format!("{} axioms", e.name), verify_all(&h));
                hosts.push((e.name, h));
            }
            Role::Algebra { host } => b.section(format!("{} axioms", e.name), verify_comodule_algebra(&e.doc.to_algebra(host_of(host))?)),
            Role::Twist { host } => {
                let h = host_of(host);
                b.section(format!("{} axioms", e.name), verify_gauge_twist(h.bialgebra(), &e.doc.to_twist(&h)?));
            }
        }
    }
    let cq = hosts.iter().find(|(n, _)| *n == "cq_z2").map(|(_, h)| h.clone()).expect("cq_z2 is built in");
    let variants = opposite_variants(&cq)?;
    for (name, h) in [("cq_z2 op", &variants.op), ("cq_z2 cop", &variants.cop), ("cq_z2 op-cop", &variants.op_cop)] {
        b.section(format!("{name} axioms"), verify_all(h));
    }
    b.section("file round trip", round_trip);
    b.verdict("examples", examples.len());
    let line = if b.passed { format!("SELFTEST passed ({} examples)", examples.len()) } else { "SELFTEST failed".to_string() };
    b.line(line);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        let parse = Error::ParseError { line: 1, col: 1, reason: String::new() };
        assert_eq!(CliError::File { path: "x".into(), source: parse }.exit_code(), 2);
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::NotGalois { rank: 2, corank: 2 }).exit_code(), 1);
        assert_eq!(CliError::Core(Error::AxiomError(CheckReport::new())).exit_code(), 1);
    }

    #[test]
    fn help_goes_to_stdout() {
        let out = run_cli(["cqh", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("selftest"));
    }

    #[test]
    fn examples_are_listed() {
        let out = run_cli(["cqh", "example", "--list"]);
        assert!(out.stdout.lines().any(|l| l == "oct_a"));
    }
}
