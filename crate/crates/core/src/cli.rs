//! Command-line front end. The `gruppen` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 failed self-check (`demo-leak`), 2 usage or
//! validation error, 3 recovery refused by the gate, 4 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::analysis::{rank_report, verify_perfectness, EntropyOracle, RankReport, SchemeModel};
use crate::codec::{decode_secrets_for, BundleFile, CodecError};
use crate::field::{FieldElement, FieldSpec};
use crate::harness::{adversary_view, derive_party_seeds, DeliveryOrder, HarnessError, Simulation, Transcript};
use crate::recovery::{demo_leak, GatePolicy, RecoveryError, RecoveryMode};
use crate::scheme::{deal_random, deal_with_secrets, reconstruct_all, LayoutId, Params, PointLayout};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Refused(String),
    Io(String),
    SelfCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfCheck(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Refused(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Refused(m) | CliError::Io(m) | CliError::SelfCheck(m) => m,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Recovery(RecoveryError::Refused(_)) => CliError::Refused(e.to_string()),
            other => invalid(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gruppen", version, about = "k-out-of-n gruppen secret sharing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SchemeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// `p=<prime>` or `gf2=<s>`
    #[arg(long)]
    field: FieldSpec,
    #[arg(long, default_value = "participant-major")]
    layout: LayoutId,
}

impl SchemeArgs {
    fn layout(&self) -> Result<PointLayout, CliError> {
        let params = Params::new(self.n, self.k, self.field).map_err(invalid)?;
        Ok(PointLayout::new(params, self.layout))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deal shares and write one bundle file per participant.
    Deal {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// One hex secret per line; random secrets when absent.
        #[arg(long)]
        secrets: Option<PathBuf>,
    },
    /// Pool at least k bundle files and print every secret.
    Reconstruct {
        #[arg(required = true)]
        bundles: Vec<PathBuf>,
    },
    /// Recover a participant's secret (or full state) from a quorum.
    Recover {
        #[arg(long)]
        requester: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        quorum: Vec<usize>,
        #[arg(long, default_value = "masked")]
        mode: RecoveryMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Created if missing; earlier sessions in it feed the gate.
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long, default_value = "secret-span")]
        gate: GatePolicy,
        /// Write the requester's restored bundle here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        bundles: Vec<PathBuf>,
    },
    /// Dealerless setup from a secrets file.
    Setup {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        secrets: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to `<out>/setup.transcript`.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Rank, entropy or perfectness analysis.
    Analyze(AnalyzeArgs),
    /// Walk through the naive-recovery leak on the three-party example.
    DemoLeak {
        #[arg(long, default_value_t = 2)]
        seed: u64,
        #[arg(long, default_value = "p=13")]
        field: FieldSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Check {
    Rank,
    Entropy,
    Perfectness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Model {
    Gruppen,
    XorSabotage,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum, default_value = "rank")]
    check: Check,
    /// Source of sessions and messages for the rank check.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Bundle files whose header fixes the parameters.
    #[arg(long = "bundle")]
    bundles: Vec<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    field: Option<FieldSpec>,
    #[arg(long, default_value = "participant-major")]
    layout: LayoutId,
    #[arg(long, value_delimiter = ',')]
    coalition: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    grant: Vec<usize>,
    #[arg(long, value_enum, default_value = "gruppen")]
    model: Model,
    #[arg(long)]
    json: bool,
}

/// Parse `args` (program name first) and execute. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Deal {
            scheme,
            seed,
            out: dir,
            secrets,
        } => deal(&scheme, seed, &dir, secrets.as_deref(), out),
        Command::Reconstruct { bundles } => reconstruct(&bundles, out),
        Command::Recover {
            requester,
            quorum,
            mode,
            seed,
            transcript,
            gate,
            out: bundle_out,
            bundles,
        } => recover(
            RecoverArgs {
                requester,
                quorum,
                mode,
                seed,
                gate,
            },
            &transcript,
            bundle_out.as_deref(),
            &bundles,
            out,
        ),
        Command::Setup {
            scheme,
            secrets,
            seed,
            out: dir,
            transcript,
        } => setup(&scheme, &secrets, seed, &dir, transcript, out),
        Command::Analyze(args) => analyze(&args, out),
        Command::DemoLeak { seed, field } => demo(seed, field, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn say(out: &mut dyn Write, line: impl std::fmt::Display) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

fn bundle_path(dir: &Path, i: usize) -> PathBuf {
    dir.join(format!("participant-{i}.bundle"))
}

fn write_bundles(dir: &Path, layout: &PointLayout, bundles: &[crate::scheme::ParticipantBundle]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    for b in bundles {
        let file = BundleFile {
            layout: layout.clone(),
            bundle: b.clone(),
        };
        write_file(&bundle_path(dir, b.participant), &file.encode())?;
    }
    Ok(())
}

fn share_summary(layout: &PointLayout) -> String {
    let params = layout.params();
    let element_bits = match params.spec().order() {
        Some(o) => (o as f64).log2(),
        None => 128.0,
    };
    let bits = element_bits * params.share_len() as f64;
    let bits = format!("{bits:.2}");
    let bits = bits.trim_end_matches('0').trim_end_matches('.');
    format!("share size: {} elements/participant, {bits} bits", params.share_len())
}

fn deal(
    scheme: &SchemeArgs,
    seed: u64,
    dir: &Path,
    secrets: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let layout = scheme.layout()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let dealing = match secrets {
        Some(path) => {
            let secrets = decode_secrets_for(layout.params(), &read(path)?).map_err(invalid)?;
            deal_with_secrets(&layout, &secrets, &mut rng).map_err(invalid)?
        }
        None => deal_random(&layout, &mut rng),
    };
    write_bundles(dir, &layout, &dealing.bundles)?;
    let params = layout.params();
    say(
        out,
        format!(
            "dealt n={} k={} over {} ({}) into {}",
            params.n(),
            params.k(),
            params.spec(),
            layout.id(),
            dir.display()
        ),
    )?;
    say(out, share_summary(&layout))
}

fn load_bundles(paths: &[PathBuf]) -> Result<(PointLayout, Vec<crate::scheme::ParticipantBundle>), CliError> {
    let mut layout: Option<PointLayout> = None;
    let mut bundles = Vec::new();
    for path in paths {
        let file = BundleFile::decode(&read(path)?)
            .map_err(|e: CodecError| CliError::Validation(format!("{}: {e}", path.display())))?;
        match &layout {
            Some(l) if *l != file.layout => {
                return Err(CliError::Validation(format!(
                    "{}: parameters or layout differ from the other bundles",
                    path.display()
                )))
            }
            Some(_) => {}
            None => layout = Some(file.layout.clone()),
        }
        bundles.push(file.bundle);
    }
    let layout = layout.ok_or_else(|| CliError::Validation("no bundle files given".into()))?;
    Ok((layout, bundles))
}

fn reconstruct(paths: &[PathBuf], out: &mut dyn Write) -> Result<(), CliError> {
    let (layout, bundles) = load_bundles(paths)?;
    let rec = reconstruct_all(&layout, &bundles).map_err(invalid)?;
    for (i, s) in rec.secrets.iter().enumerate() {
        say(out, format!("participant {}: {}", i + 1, s.to_hex()))?;
    }
    Ok(())
}

struct RecoverArgs {
    requester: usize,
    quorum: Vec<usize>,
    mode: RecoveryMode,
    seed: u64,
    gate: GatePolicy,
}

fn recover(
    args: RecoverArgs,
    transcript_path: &Path,
    bundle_out: Option<&Path>,
    paths: &[PathBuf],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (layout, bundles) = load_bundles(paths)?;
    let mut sim = if transcript_path.exists() {
        let transcript = Transcript::parse(&read(transcript_path)?)?;
        if transcript.point_layout() != layout {
            return Err(CliError::Validation(format!(
                "{} was recorded for different parameters",
                transcript_path.display()
            )));
        }
        Simulation::resume(transcript, bundles)?
    } else {
        Simulation::from_bundles(&layout, bundles, DeliveryOrder::default())?
    };
    sim.set_gate_policy(args.gate)?;
    sim.forget(args.requester, args.mode == RecoveryMode::FullState)?;
    let recovered = sim.run_recovery(args.requester, &args.quorum, args.mode, args.seed)?;
    write_file(transcript_path, &sim.transcript().to_string())?;

    say(
        out,
        format!("recovered secret of participant {}: {}", args.requester, recovered.secret.to_hex()),
    )?;
    if !recovered.share.is_empty() {
        let shares: Vec<String> = recovered.share.iter().map(FieldElement::to_hex).collect();
        say(
            out,
            format!("recovered share of participant {}: {}", args.requester, shares.join(" ")),
        )?;
    }
    say(
        out,
        format!(
            "transcript: {} ({} sessions)",
            transcript_path.display(),
            sim.transcript().sessions.len()
        ),
    )?;
    if let Some(path) = bundle_out {
        let bundle = sim.bundles()[args.requester - 1].clone().expect("just recovered");
        write_file(path, &BundleFile { layout, bundle }.encode())?;
    }
    Ok(())
}

fn setup(
    scheme: &SchemeArgs,
    secrets: &Path,
    seed: u64,
    dir: &Path,
    transcript: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let layout = scheme.layout()?;
    let secrets = decode_secrets_for(layout.params(), &read(secrets)?).map_err(invalid)?;
    let seeds = derive_party_seeds(seed, layout.params().n());
    let sim = Simulation::run_setup(&layout, &secrets, &seeds, DeliveryOrder::default())?;
    let bundles: Vec<_> = sim.bundles().into_iter().flatten().collect();
    write_bundles(dir, &layout, &bundles)?;
    let transcript = transcript.unwrap_or_else(|| dir.join("setup.transcript"));
    write_file(&transcript, &sim.transcript().to_string())?;
    say(
        out,
        format!(
            "setup complete: {} bundles in {}, {} messages in {}",
            bundles.len(),
            dir.display(),
            sim.transcript().messages.len(),
            transcript.display()
        ),
    )?;
    say(out, share_summary(&layout))
}

fn analysis_layout(args: &AnalyzeArgs, transcript: Option<&Transcript>) -> Result<PointLayout, CliError> {
    if let Some(t) = transcript {
        return Ok(t.point_layout());
    }
    if !args.bundles.is_empty() {
        return Ok(load_bundles(&args.bundles)?.0);
    }
    match (args.n, args.k, args.field) {
        (Some(n), Some(k), Some(field)) => Ok(PointLayout::new(
            Params::new(n, k, field).map_err(invalid)?,
            args.layout,
        )),
        _ => Err(CliError::Validation(
            "give --transcript, --bundle files, or --n, --k and --field".into(),
        )),
    }
}

fn emit_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    say(out, text)
}

fn list(items: &[usize]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

/// `- r(1) + r(2)` style rendering of a combination of secrets.
fn combination_text(layout: &PointLayout, combo: &[(usize, String)]) -> String {
    let f = layout.spec();
    let mut text = String::new();
    for (i, hex) in combo {
        let c = f.parse_hex(hex).expect("produced by to_hex");
        let point = format!("r({})", layout.secret_point(*i).to_hex());
        let term = if c == f.one() {
            format!("+ {point}")
        } else if c == -f.one() {
            format!("- {point}")
        } else {
            format!("+ {hex}*{point}")
        };
        if !text.is_empty() {
            text.push(' ');
        }
        text.push_str(&term);
    }
    text.strip_prefix("+ ").map(str::to_string).unwrap_or(text)
}

#[derive(Serialize)]
struct RankOutput {
    coalition: Vec<usize>,
    granted: Vec<usize>,
    view: RankReport,
    with_grants: Option<RankReport>,
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match args.check {
        Check::Rank => analyze_rank(args, out),
        Check::Entropy => analyze_entropy(args, out),
        Check::Perfectness => analyze_perfectness(args, out),
    }
}

fn analyze_rank(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let transcript = match &args.transcript {
        Some(path) => Some(Transcript::parse(&read(path)?)?),
        None => None,
    };
    let layout = analysis_layout(args, transcript.as_ref())?;
    let transcript = transcript.unwrap_or_else(|| Transcript::new(&layout, DeliveryOrder::default()));
    let view = adversary_view(&transcript, &args.coalition, &[])?;
    let base = rank_report(&view).map_err(invalid)?;
    let with_grants = if args.grant.is_empty() {
        None
    } else {
        let granted = adversary_view(&transcript, &args.coalition, &args.grant)?;
        Some(rank_report(&granted).map_err(invalid)?)
    };
    let output = RankOutput {
        coalition: args.coalition.clone(),
        granted: args.grant.clone(),
        view: base,
        with_grants,
    };
    if args.json {
        return emit_json(&output, out);
    }
    say(out, format!("coalition: {}", list(&output.coalition)))?;
    let describe = |r: &RankReport| -> Vec<String> {
        let mut lines = vec![
            format!("  known values: {}", r.rows),
            format!("  rank: {} of {}", r.rank, r.dim),
            format!("  codim: {}", r.codim),
            format!("  determined secrets: {}", list(&r.determined_secrets)),
        ];
        match &r.leaked_combination {
            Some(c) => {
                let who: Vec<usize> = c.iter().map(|(i, _)| *i).collect();
                lines.push(format!(
                    "  leaked combination: {} (secrets of {})",
                    combination_text(&layout, c),
                    list(&who)
                ));
            }
            None => lines.push("  leaked combination: none".into()),
        }
        lines
    };
    say(out, "view:")?;
    for line in describe(&output.view) {
        say(out, line)?;
    }
    if let Some(r) = &output.with_grants {
        say(out, format!("with granted secrets {}:", list(&output.granted)))?;
        for line in describe(r) {
            say(out, line)?;
        }
    }
    Ok(())
}

fn model(args: &AnalyzeArgs) -> Result<SchemeModel, CliError> {
    match args.model {
        Model::Gruppen => {
            let transcript = match &args.transcript {
                Some(path) => Some(Transcript::parse(&read(path)?)?),
                None => None,
            };
            Ok(SchemeModel::gruppen(&analysis_layout(args, transcript.as_ref())?))
        }
        Model::XorSabotage => {
            let field = args
                .field
                .ok_or_else(|| CliError::Validation("--field is required for the xor-sabotage model".into()))?;
            Ok(SchemeModel::xor_sabotage(field))
        }
    }
}

#[derive(Serialize)]
struct EntropyOutput {
    report: crate::analysis::EntropyReport,
    axioms: crate::analysis::AxiomCheck,
    share_bound: Vec<crate::analysis::ShareBoundCheck>,
}

fn analyze_entropy(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = model(args)?;
    let mut oracle = EntropyOracle::new(&model).map_err(invalid)?;
    if model.variables().len() <= 6 {
        oracle.fill_lattice().map_err(invalid)?;
    } else {
        for v in 0..model.variables().len() {
            oracle.entropy(&[v]).map_err(invalid)?;
        }
    }
    let share_bound = oracle.share_bound_checks().map_err(invalid)?;
    let report = oracle.report();
    let axioms = report.check_axioms();
    if args.json {
        return emit_json(&EntropyOutput { report, axioms, share_bound }, out);
    }
    say(out, format!("model: {} over {}", report.model, report.field))?;
    say(out, format!("unit: log2|F| = {:.6} bits", report.unit_bits))?;
    for v in 0..model.variables().len() {
        let bits = report.value(&[v]).expect("queried");
        say(
            out,
            format!(
                "H({}) = {bits:.6} bits = {:.6} units",
                model.variables()[v].label,
                bits / report.unit_bits
            ),
        )?;
    }
    let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    say(
        out,
        format!(
            "entropy axioms over {} queried sets: positivity {}, monotonicity {}, additivity {}",
            report.entries.len(),
            verdict(axioms.positivity),
            verdict(axioms.monotonicity),
            verdict(axioms.additivity)
        ),
    )?;
    for c in &share_bound {
        say(
            out,
            format!(
                "coalition {} with a={}, others {}: H(s{a}) + H(share{a}) = {:.6} >= H(s{a}, others) = {:.6} {}; determines others: {}; independent of secrets: {}",
                list(&c.coalition),
                c.a,
                list(&c.others),
                c.lhs,
                c.rhs,
                verdict(c.holds),
                if c.determines { "yes" } else { "no" },
                if c.independent { "yes" } else { "no" },
                a = c.a,
            ),
        )?;
    }
    Ok(())
}

fn analyze_perfectness(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = model(args)?;
    let report = verify_perfectness(&model).map_err(invalid)?;
    if args.json {
        return emit_json(&report, out);
    }
    say(out, format!("model: {} over {}", report.model, report.field))?;
    for c in &report.checks {
        say(
            out,
            format!(
                "H(s{} | coalition {} data, other secrets) = {:.9} bits {}",
                c.target,
                list(&c.coalition),
                c.bits,
                if c.pass { "ok" } else { "LEAK" }
            ),
        )?;
    }
    say(
        out,
        format!(
            "perfectness: {} (expected {:.9} bits, tolerance {:e})",
            if report.pass { "PASS" } else { "FAIL" },
            report.expected_bits,
            report.tolerance
        ),
    )
}

fn demo(seed: u64, field: FieldSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let params = Params::new(3, 2, field).map_err(invalid)?;
    let layout = PointLayout::new(params, LayoutId::SecretsFirst);
    let dealing = deal_random(&layout, &mut ChaCha20Rng::seed_from_u64(seed));
    let demo = demo_leak(&dealing).map_err(invalid)?;
    let s = &demo.secrets;
    let lines = [
        format!("Three participants over {field}: secrets at x = 0, 1, 2, shares at x = 3, 4, 5."),
        format!(
            "Alice r(0) = {}, Bob r(1) = {}, Cecil r(2) = {}; Alice's share r(3) = {}.",
            s[0].to_hex(),
            s[1].to_hex(),
            s[2].to_hex(),
            demo.share.to_hex()
        ),
        "Alice lost her secret and asks Bob and Cecil for naive partial sums.".into(),
        format!("Bob sends   t_b = (10/3) r(1) + (5/3) r(4) = {}", demo.t_b.to_hex()),
        format!("Cecil sends t_c = -(10/3) r(2) - (2/3) r(5) = {}", demo.t_c.to_hex()),
        format!("Alice adds them: r(0) = t_b + t_c = {}", demo.recovered.to_hex()),
        format!(
            "She also computes (2/3)(r(3) - (2/5) t_b - (1/4) t_c) = {}",
            demo.extracted.to_hex()
        ),
        format!(
            "and -r(1) + r(2) = {}, a combination of Bob's and Cecil's secrets.",
            demo.expected.to_hex()
        ),
    ];
    for line in lines {
        say(out, line)?;
    }
    if demo.holds() {
        say(out, "identity holds")
    } else {
        Err(CliError::SelfCheck("the extracted value does not match -r(1) + r(2)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("gruppen").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn combination_rendering() {
        let layout = PointLayout::new(Params::new(3, 2, "p=13".parse().unwrap()).unwrap(), LayoutId::SecretsFirst);
        let text = combination_text(&layout, &[(2, "c".into()), (3, "1".into())]);
        assert_eq!(text, "- r(1) + r(2)");
        assert_eq!(combination_text(&layout, &[(1, "5".into())]), "5*r(0)");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["deal"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("demo-leak"));
    }

    #[test]
    fn demo_leak_output() {
        let (code, out, _) = run_capture(&["demo-leak", "--seed", "3"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("identity holds\n"));
        assert_eq!(run_capture(&["demo-leak", "--seed", "3"]).1, out);
        assert_eq!(run_capture(&["demo-leak", "--field", "gf2=4"]).0, 2);
    }
}
