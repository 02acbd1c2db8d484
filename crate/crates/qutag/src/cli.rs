//! Command line surface: construction, analysis, search, simulation, and
//! verification with stable on-disk formats.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::constructions::{
    hall_ds, residue_ds, singer_difference_set, twin_prime_ds, verify_difference_set,
    verify_ooc, ResidueFamily,
};
use crate::error::{Error, Result};
use crate::search::{
    search_header_set, search_min_aperiodic_header, search_ooc, search_optimal_tag,
    SearchLimits, SearchReport,
};
use crate::sim::{
    campaign_csv, run_campaign, CampaignCell, CellScheme, NoiseKind,
};
use crate::syncdec::LocateMode;
use crate::tagfile::{self, TagFileRecord};
use crate::tags::{
    autocorrelation_profile, code_metrics, comma_free_upper_bound, OrthogonalTagSet,
    TagVector,
};

const EXIT_HELP: &str = "Exit codes:
  0  success
  2  usage error
  3  parameter error
  4  verification failure
  5  infeasible, or a search cap was exceeded
  6  malformed file
  7  I/O failure";

/// Parses argv, runs the requested command, and returns the process exit
/// code. Failures print one line: `error[<category>]: <message>`.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category().name());
            e.category().exit_code()
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qutag",
    version,
    about = "Constant-weight self-synchronizing tags for framing qutrit streams",
    after_help = EXIT_HELP,
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate, analyze, or search for tags
    #[command(subcommand)]
    Tag(TagCmd),
    /// Orthogonal (v,k,1) code search
    #[command(subcommand)]
    Ooc(OocCmd),
    /// Header searches: minimal aperiodic sidelobes
    #[command(subcommand)]
    Header(HeaderCmd),
    /// Synchronization campaigns; results as CSV
    #[command(subcommand)]
    Sim(SimCmd),
    /// Re-verify every claim stored in a tag file
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum TagCmd {
    /// Build a tag from a construction family and write a tag file
    Gen(GenArgs),
    /// Report metrics for each record of a tag file
    Analyze(AnalyzeArgs),
    /// Exhaustively maximize the comma-free index for (v, k)
    Search(TagSearchArgs),
}

#[derive(Subcommand)]
enum OocCmd {
    /// Backtracking search for a (v,k,1) orthogonal code
    Search(OocSearchArgs),
}

#[derive(Subcommand)]
enum HeaderCmd {
    /// Minimize worst-case aperiodic correlations for headers
    Search(HeaderSearchArgs),
}

#[derive(Subcommand)]
enum SimCmd {
    /// Nearest-shift synchronization trials for each stored tag
    Sync(SimSyncArgs),
    /// Digit recovery and splice rejection for an orthogonal tag file
    Orthogonal(SimOrthogonalArgs),
    /// Header location over noisy variable-length streams
    Header(SimHeaderArgs),
    /// The single-marker baseline scheme
    Naive(SimNaiveArgs),
}

#[derive(Args)]
struct GenArgs {
    /// singer | quadratic | quartic | quartic_zero | octic | octic_zero |
    /// hall | twin_prime | external
    #[arg(long)]
    family: String,
    /// Prime power (singer)
    #[arg(long)]
    q: Option<u64>,
    /// Extension degree m >= 2 (singer); v = (q^(m+1) - 1)/(q - 1)
    #[arg(long)]
    m: Option<u32>,
    /// Prime parameter (residue, hall, and twin_prime families)
    #[arg(long)]
    p: Option<u64>,
    /// Modulus (external family)
    #[arg(long)]
    v: Option<usize>,
    /// Comma-separated support (external family)
    #[arg(long, value_delimiter = ',')]
    support: Option<Vec<usize>>,
    /// Free-form note stored with the record
    #[arg(long, default_value = "")]
    notes: String,
    /// Tag file to write (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Tag file to read
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct TagSearchArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    k: usize,
    /// Report file to write (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OocSearchArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    k: usize,
    /// Stop after this many codewords (default: the Johnson bound)
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeaderSearchArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    k: usize,
    /// Number of headers wanted
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Pairwise Hamming distance floor when count > 1
    #[arg(long, default_value_t = 0)]
    min_distance: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NoiseArgs {
    /// Probability a payload qubit reads 1 (iid noise)
    #[arg(long, default_value_t = 0.0, conflicts_with = "exact")]
    p_erasure: f64,
    /// Probability a marker reads 0 (iid noise)
    #[arg(long, default_value_t = 0.0, conflicts_with = "exact")]
    p_incursion: f64,
    /// Exact adversarial counts as "ERASURES,INCURSIONS"; placements are
    /// exhausted when few enough, sampled otherwise
    #[arg(long, value_parser = parse_exact)]
    exact: Option<(usize, usize)>,
}

impl NoiseArgs {
    fn kind(&self) -> NoiseKind {
        match self.exact {
            Some((erasures, incursions)) => NoiseKind::Adversarial { erasures, incursions },
            None => NoiseKind::Iid {
                p_erasure: self.p_erasure,
                p_incursion: self.p_incursion,
            },
        }
    }
}

fn parse_exact(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected ERASURES,INCURSIONS, got {s:?}"))?;
    let e = a.trim().parse().map_err(|_| format!("bad erasure count {a:?}"))?;
    let i = b.trim().parse().map_err(|_| format!("bad incursion count {b:?}"))?;
    Ok((e, i))
}

#[derive(Args)]
struct SimSyncArgs {
    /// Tag file whose records to simulate
    #[arg(long)]
    input: PathBuf,
    /// Master seed; required so results are reproducible
    #[arg(long)]
    seed: u64,
    /// Trials per cell (exhaustive adversarial cells ignore this)
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Comma-separated window misalignments
    #[arg(long, value_delimiter = ',', default_value = "0")]
    offsets: Vec<usize>,
    /// Frames per simulated stream
    #[arg(long, default_value_t = 2)]
    frames: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    /// CSV file to write (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimOrthogonalArgs {
    /// Tag file whose records form the orthogonal set
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    offsets: Vec<usize>,
    /// Per-frame digits; defaults to "0,1" (or "0,0" for a single tag)
    #[arg(long, value_delimiter = ',')]
    digits: Option<Vec<usize>>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimHeaderArgs {
    /// Tag file whose first record is the header
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Comma-separated payload lengths, one frame each (each >= v)
    #[arg(long, value_delimiter = ',')]
    payloads: Vec<usize>,
    /// Use the erasure-only locator instead of the symmetric one
    #[arg(long)]
    erasure_only: bool,
    /// Dissimilarity budget; defaults to the record's stored delta
    #[arg(long)]
    delta: Option<usize>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimNaiveArgs {
    /// Frame length
    #[arg(long)]
    v: usize,
    /// Frames per simulated stream
    #[arg(long, default_value_t = 16)]
    frames: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Tag file to check
    #[arg(long)]
    input: PathBuf,
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Tag(TagCmd::Gen(args)) => tag_gen(args),
        Cmd::Tag(TagCmd::Analyze(args)) => tag_analyze(args),
        Cmd::Tag(TagCmd::Search(args)) => {
            let report = search_optimal_tag(args.v, args.k, &SearchLimits::default())?;
            emit_report(&report, args.out.as_deref())
        }
        Cmd::Ooc(OocCmd::Search(args)) => {
            let report = search_ooc(args.v, args.k, args.size, &SearchLimits::default())?;
            emit_report(&report, args.out.as_deref())
        }
        Cmd::Header(HeaderCmd::Search(args)) => {
            let limits = SearchLimits::default();
            let report = if args.count == 1 {
                search_min_aperiodic_header(args.v, args.k, &limits)?
            } else {
                search_header_set(args.v, args.k, args.count, args.min_distance, &limits)?
            };
            emit_report(&report, args.out.as_deref())
        }
        Cmd::Sim(SimCmd::Sync(args)) => sim_sync(args),
        Cmd::Sim(SimCmd::Orthogonal(args)) => sim_orthogonal(args),
        Cmd::Sim(SimCmd::Header(args)) => sim_header(args),
        Cmd::Sim(SimCmd::Naive(args)) => sim_naive(args),
        Cmd::Verify(args) => verify_file(args),
    }
}

fn require<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("{what} is required")))
}

fn tag_gen(args: GenArgs) -> Result<()> {
    let record = match args.family.as_str() {
        "singer" => {
            let q = require(args.q, "--q")?;
            let m = require(args.m, "--m")?;
            let built = singer_difference_set(q, m)?;
            TagFileRecord::from_constructed(&built, "singer", &args.notes)
        }
        name if ResidueFamily::parse(name).is_some() => {
            let family = ResidueFamily::parse(name).expect("matched");
            let p = require(args.p, "--p")?;
            let built = residue_ds(p, family)?;
            TagFileRecord::from_constructed(&built, name, &args.notes)
        }
        "hall" => {
            let p = require(args.p, "--p")?;
            let built = hall_ds(p)?;
            TagFileRecord::from_constructed(&built, "hall", &args.notes)
        }
        "twin_prime" => {
            let p = require(args.p, "--p")?;
            let built = twin_prime_ds(p)?;
            TagFileRecord::from_constructed(&built, "twin_prime", &args.notes)
        }
        "external" => {
            let v = require(args.v, "--v")?;
            let support = require(args.support, "--support")?;
            let tag = crate::tags::QuantumTag::new(v, &support)?;
            let mut record = TagFileRecord::from_tag(&tag, "external", &args.notes);
            // attach the difference-set certificate when one happens to hold
            if let Some(mu) = verify_difference_set(&support, v).unwrap_or(None) {
                record.mu = Some(mu);
                record.delta = Some(tag.k() - mu);
            }
            record
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family {other:?}; see qutag tag gen --help"
            )))
        }
    };
    match args.out {
        Some(path) => tagfile::save(&path, &[record])?,
        None => print!("{}", tagfile::render_records(&[record])),
    }
    Ok(())
}

fn tag_analyze(args: AnalyzeArgs) -> Result<()> {
    let records = tagfile::load(&args.input)?;
    for (i, r) in records.iter().enumerate() {
        let bound = comma_free_upper_bound(r.v, r.k)?;
        let optimal = r.rho == bound && r.rho >= 1;
        println!("record {i}: family={} v={} k={}", r.family, r.v, r.k);
        println!("  support={:?}", r.support);
        println!(
            "  rho={} bound={bound} optimal={optimal} threshold={}",
            r.rho,
            if r.rho >= 1 { ((r.rho - 1) / 2).to_string() } else { "-".into() }
        );
        if let (Some(mu), Some(delta)) = (r.mu, r.delta) {
            println!("  mu={mu} delta={delta}");
        }
        println!("  autocorrelation={:?}", autocorrelation_profile(&r.support, r.v)?);
        if !r.notes.is_empty() {
            println!("  notes: {}", r.notes);
        }
    }
    Ok(())
}

fn emit_report(report: &SearchReport, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::MalformedRecord(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_csv(cells: &[CampaignCell], trials: u64, seed: u64, out: Option<&Path>) -> Result<()> {
    let rows = run_campaign(cells, trials, seed)?;
    let csv = campaign_csv(&rows);
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn sim_sync(args: SimSyncArgs) -> Result<()> {
    let records = tagfile::load(&args.input)?;
    let mut cells = Vec::new();
    for (ti, record) in records.iter().enumerate() {
        let tag = record.to_tag()?;
        for &offset in &args.offsets {
            cells.push(CampaignCell {
                id: format!("t{ti}-r{offset}"),
                family: record.family.clone(),
                scheme: CellScheme::SingleTag { tag: tag.clone(), frames: args.frames },
                noise: args.noise.kind(),
                offset,
            });
        }
    }
    emit_csv(&cells, args.trials, args.seed, args.out.as_deref())
}

fn sim_orthogonal(args: SimOrthogonalArgs) -> Result<()> {
    let records = tagfile::load(&args.input)?;
    let v = records[0].v;
    let supports: Vec<Vec<usize>> = records.iter().map(|r| r.support.clone()).collect();
    let set = OrthogonalTagSet::new(v, &supports)?;
    let digits = match args.digits {
        Some(d) => d,
        None if set.len() >= 2 => vec![0, 1],
        None => vec![0, 0],
    };
    let cells: Vec<CampaignCell> = args
        .offsets
        .iter()
        .map(|&offset| CampaignCell {
            id: format!("orth-r{offset}"),
            family: "orthogonal".into(),
            scheme: CellScheme::Orthogonal { set: set.clone(), digits: digits.clone() },
            noise: args.noise.kind(),
            offset,
        })
        .collect();
    emit_csv(&cells, args.trials, args.seed, args.out.as_deref())
}

fn sim_header(args: SimHeaderArgs) -> Result<()> {
    let records = tagfile::load(&args.input)?;
    let record = &records[0];
    let header = record.to_tag()?;
    let delta = args
        .delta
        .or(record.delta)
        .or_else(|| record.mu.map(|mu| record.k - mu))
        .ok_or_else(|| {
            Error::InvalidParameter(
                "record stores no delta; pass --delta explicitly".into(),
            )
        })?;
    let mode = if args.erasure_only { LocateMode::ErasureOnly } else { LocateMode::General };
    let cells = vec![CampaignCell {
        id: "header".into(),
        family: record.family.clone(),
        scheme: CellScheme::Header {
            header,
            mode,
            delta,
            payload_lengths: args.payloads.clone(),
        },
        noise: args.noise.kind(),
        offset: 0,
    }];
    emit_csv(&cells, args.trials, args.seed, args.out.as_deref())
}

fn sim_naive(args: SimNaiveArgs) -> Result<()> {
    let cells = vec![CampaignCell {
        id: "naive".into(),
        family: "naive".into(),
        scheme: CellScheme::Naive { v: args.v, frames: args.frames },
        noise: args.noise.kind(),
        offset: 0,
    }];
    emit_csv(&cells, args.trials, args.seed, args.out.as_deref())
}

fn verify_file(args: VerifyArgs) -> Result<()> {
    let records = tagfile::load(&args.input)?;
    for (i, r) in records.iter().enumerate() {
        let mut line = format!(
            "ok: record {i} family={} v={} k={} rho={}",
            r.family, r.v, r.k, r.rho
        );
        if let Some(mu) = r.mu {
            line.push_str(&format!(" mu={mu} (difference set verified)"));
        }
        if let Some(delta) = r.delta {
            line.push_str(&format!(" delta={delta}"));
        }
        println!("{line}");
    }
    let v = records[0].v;
    let k = records[0].k;
    if records.len() >= 2 && records.iter().all(|r| r.v == v && r.k == k) {
        let vectors: Vec<TagVector> = records
            .iter()
            .map(|r| TagVector::from_support(r.v, &r.support))
            .collect::<Result<_>>()?;
        let (rho_c, d) = code_metrics(&vectors)?;
        let threshold = (rho_c.min(d).saturating_sub(1)) / 2;
        println!("code: size={} rho_c={rho_c} d={d} threshold={threshold}", records.len());
        let supports: Vec<Vec<usize>> = records.iter().map(|r| r.support.clone()).collect();
        let orthogonal = verify_ooc(&supports, v, 1, 1)?;
        println!("orthogonal (v,k,1) code: {orthogonal}");
    }
    Ok(())
}
