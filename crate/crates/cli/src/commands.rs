//! Command implementations. Each builds one report value, wraps it in
//! the self-describing envelope, and emits it before deciding the exit
//! status, so degraded outcomes still leave a full report behind.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use ldpc_anchor::alist::{read_bundle_files, read_matrix_file, sidecar_path, write_bundle_files};
use ldpc_anchor::anchor::{select_orthogonal, select_until_rank};
use ldpc_anchor::decode::{bit_flip_decode, ThresholdPolicy};
use ldpc_anchor::entropy::EntropyCertificate;
use ldpc_anchor::geometry::{
    bundle_from_specs_with_ceiling, BaseMatrixBundle, BundleSource, GeometrySpec,
    DEFAULT_POINT_CEILING,
};
use ldpc_anchor::gf2::BitVector;
use ldpc_anchor::puf::{
    anchor_init, code_offset_init, code_offset_reproduce, anchor_reproduce, sample_response,
    screen_device, DeviceRecord, Scheme, ScreenOutcome, SelectionPolicy,
};
use ldpc_anchor::report::AnchorReport;
use ldpc_anchor::sim::{
    end_to_end_key_experiment, entropy_bound_experiment, row_count_experiment,
    success_probability, RowCountStats,
};

use crate::{
    AnchorArgs, CertifyArgs, DecodeArgs, EndtoendArgs, EnrollArgs, Failure, GenArgs, GeometryArgs,
    ReproduceArgs, RowcountArgs, ScreenArgs, SourceArgs, TrialArgs,
};

/// Environment override for the default seed; explicit --seed flags win.
pub const SEED_ENV: &str = "LDPC_ANCHOR_SEED";
const DEFAULT_SEED: u64 = 7;

/// Wrapper around every machine-readable output.
#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    command: String,
    version: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    seed: Option<u64>,
    report: T,
}

fn envelope<T: Serialize>(command: &str, n: usize, seed: Option<u64>, report: T) -> Envelope<T> {
    Envelope {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        n,
        seed,
        report,
    }
}

/// Prints without panicking when the reader hangs up mid-stream.
fn write_stdout(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    match std::io::stdout().write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::Format(e.to_string())),
    }
}

fn emit<T: Serialize>(out: Option<&Path>, envelope: &Envelope<T>) -> Result<(), Failure> {
    let mut json = serde_json::to_string_pretty(envelope)
        .map_err(|e| Failure::Format(e.to_string()))?;
    json.push('\n');
    match out {
        Some(path) => fs::write(path, json)
            .map_err(|e| Failure::Format(format!("{}: {e}", path.display()))),
        None => write_stdout(&json),
    }
}

fn read_envelope<T: DeserializeOwned>(path: &Path) -> Result<Envelope<T>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Usage(format!("{SEED_ENV} must be a 64-bit integer, got {text:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(Failure::Usage(format!("{SEED_ENV}: {e}"))),
    }
}

fn specs_of(geometry: &GeometryArgs) -> Vec<GeometrySpec> {
    let mut specs = Vec::with_capacity(geometry.eg.len() + geometry.pg.len());
    for &(m, s) in &geometry.eg {
        specs.push(GeometrySpec::eg(m, s, geometry.type1));
    }
    for &(m, s) in &geometry.pg {
        specs.push(GeometrySpec::pg(m, s));
    }
    specs
}

fn bundle_from_geometry(geometry: &GeometryArgs) -> Result<BaseMatrixBundle, Failure> {
    let specs = specs_of(geometry);
    if specs.is_empty() {
        return Err(Failure::Usage(
            "a base matrix is required: pass --matrix or at least one --eg/--pg".into(),
        ));
    }
    let ceiling = geometry.ceiling.unwrap_or(DEFAULT_POINT_CEILING);
    Ok(bundle_from_specs_with_ceiling(&specs, ceiling)?)
}

fn load_bundle(source: &SourceArgs) -> Result<BaseMatrixBundle, Failure> {
    let Some(path) = &source.matrix else {
        return bundle_from_geometry(&source.geometry);
    };
    if !source.geometry.eg.is_empty() || !source.geometry.pg.is_empty() {
        return Err(Failure::Usage(
            "pass either --matrix or geometry flags, not both".into(),
        ));
    }
    if sidecar_path(path).exists() {
        return Ok(read_bundle_files(path)?);
    }
    let matrix = read_matrix_file(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".into());
    Ok(BaseMatrixBundle::from_matrix(&label, matrix)?)
}

#[derive(Serialize)]
struct GenReport {
    path: String,
    nrows: usize,
    ncols: usize,
    rank: usize,
    sources: Vec<BundleSource>,
}

pub fn gen(args: &GenArgs) -> Result<(), Failure> {
    let bundle = bundle_from_geometry(&args.geometry)?;
    write_bundle_files(&args.out, &bundle)?;
    let report = GenReport {
        path: args.out.display().to_string(),
        nrows: bundle.nrows(),
        ncols: bundle.ncols(),
        rank: bundle.rank(),
        sources: bundle.sources().to_vec(),
    };
    emit(None, &envelope("gen", bundle.ncols(), None, report))
}

pub fn anchor(args: &AnchorArgs) -> Result<(), Failure> {
    let bundle = load_bundle(&args.source)?;
    let n = bundle.ncols();
    let r = BitVector::from_hex(&args.r, n)?;
    let res = match args.k_target {
        Some(k_target) => select_until_rank(&bundle, &r, k_target)?,
        None => select_orthogonal(&bundle, &r)?,
    };
    let report = AnchorReport::from_result(&res);
    let deficit = report.rank_base - report.rank_selected;
    let degraded = !report.construction_success;
    emit(args.out.as_deref(), &envelope("anchor", n, None, report))?;
    if degraded {
        return Err(Failure::Degraded(format!(
            "construction degraded: rank deficit {deficit} exceeds 1"
        )));
    }
    Ok(())
}

pub fn certify(args: &CertifyArgs) -> Result<(), Failure> {
    let stored: Envelope<AnchorReport> = read_envelope(&args.report)?;
    let certificate: EntropyCertificate = stored.report.certificate;
    emit(
        args.out.as_deref(),
        &envelope("certify", certificate.n, None, certificate),
    )
}

#[derive(Serialize)]
struct DecodeReport {
    word: String,
    converged: bool,
    iterations: usize,
    flips: usize,
}

pub fn decode(args: &DecodeArgs) -> Result<(), Failure> {
    if args.max_iters == 0 {
        return Err(Failure::Usage("--max-iters must be at least 1".into()));
    }
    let matrix = read_matrix_file(&args.matrix)?;
    let n = matrix.ncols();
    let word = BitVector::from_hex(&args.word, n)?;
    let policy = match args.threshold {
        Some(count) => ThresholdPolicy::FixedCount(count),
        None => ThresholdPolicy::StrictMajority,
    };
    let outcome = bit_flip_decode(&matrix, &word, args.max_iters, policy)?;
    let report = DecodeReport {
        word: outcome.word.to_hex(),
        converged: outcome.converged,
        iterations: outcome.iterations,
        flips: outcome.flips,
    };
    emit(args.out.as_deref(), &envelope("decode", n, None, report))?;
    if !outcome.converged {
        return Err(Failure::Decode(format!(
            "decoder did not converge after {} iterations",
            outcome.iterations
        )));
    }
    Ok(())
}

fn require_trials(trials: usize) -> Result<(), Failure> {
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    Ok(())
}

fn cdf_table(stats: &RowCountStats) -> String {
    let mut table = String::from("# selected_rows cumulative_fraction\n");
    for &(value, fraction) in &stats.cdf {
        table.push_str(&format!("{value} {fraction}\n"));
    }
    table
}

pub fn simulate_rowcount(args: &RowcountArgs) -> Result<(), Failure> {
    require_trials(args.trials)?;
    let bundle = load_bundle(&args.source)?;
    let seed = resolve_seed(args.seed)?;
    let report = row_count_experiment(&bundle, args.trials, seed);
    let table = cdf_table(report.row_count.as_ref().expect("row-count section"));
    let n = report.n;
    emit(
        args.out.as_deref(),
        &envelope("simulate rowcount", n, Some(seed), report),
    )?;
    match &args.cdf_out {
        Some(path) => fs::write(path, table)
            .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))?,
        None => {
            if args.out.is_none() {
                write_stdout("\n")?;
            }
            write_stdout(&table)?;
        }
    }
    Ok(())
}

pub fn simulate_success(args: &TrialArgs) -> Result<(), Failure> {
    require_trials(args.trials)?;
    let bundle = load_bundle(&args.source)?;
    let seed = resolve_seed(args.seed)?;
    let report = success_probability(&bundle, args.trials, seed);
    let n = report.n;
    emit(
        args.out.as_deref(),
        &envelope("simulate success", n, Some(seed), report),
    )
}

pub fn simulate_entropy(args: &TrialArgs) -> Result<(), Failure> {
    require_trials(args.trials)?;
    let bundle = load_bundle(&args.source)?;
    let seed = resolve_seed(args.seed)?;
    let report = entropy_bound_experiment(&bundle, args.trials, seed);
    let n = report.n;
    emit(
        args.out.as_deref(),
        &envelope("simulate entropy", n, Some(seed), report),
    )
}

pub fn simulate_endtoend(args: &EndtoendArgs) -> Result<(), Failure> {
    require_trials(args.trials)?;
    let bundle = load_bundle(&args.source)?;
    let seed = resolve_seed(args.seed)?;
    let report = end_to_end_key_experiment(&bundle, args.scheme, args.p, args.trials, seed)?;
    let n = report.n;
    emit(
        args.out.as_deref(),
        &envelope("simulate endtoend", n, Some(seed), report),
    )
}

pub fn puf_enroll(args: &EnrollArgs) -> Result<(), Failure> {
    let bundle = load_bundle(&args.source)?;
    let n = bundle.ncols();
    let seed = resolve_seed(args.seed)?;
    let response = match &args.response {
        Some(hex) => BitVector::from_hex(hex, n)?,
        None => sample_response(n, seed),
    };
    let record = match args.scheme {
        Scheme::CodeOffset => {
            if args.k_target.is_some() {
                return Err(Failure::Usage(
                    "--k-target applies to the codeword-anchor scheme".into(),
                ));
            }
            let helper = code_offset_init(&response, bundle.matrix(), seed)?;
            DeviceRecord::new(&helper, None, seed)
        }
        Scheme::CodewordAnchor => {
            let policy = match args.k_target {
                Some(k_target) => SelectionPolicy::UntilRank(k_target),
                None => SelectionPolicy::Full,
            };
            let (helper, certificate) = anchor_init(&response, &bundle, policy)?;
            DeviceRecord::new(&helper, Some(certificate), seed)
        }
    };
    let degraded = record
        .certificate
        .as_ref()
        .is_some_and(|cert| !cert.success);
    emit(
        args.out.as_deref(),
        &envelope("puf enroll", n, Some(seed), &record),
    )?;
    if degraded {
        return Err(Failure::Degraded(
            "construction degraded: selected rows lost more than one rank".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct KeyReport {
    key: String,
    scheme: Scheme,
}

pub fn puf_reproduce(args: &ReproduceArgs) -> Result<(), Failure> {
    let stored: Envelope<DeviceRecord> = read_envelope(&args.record)?;
    let record = stored.report;
    let helper = record.helper().map_err(|e| Failure::Format(e.to_string()))?;
    let r_prime = BitVector::from_hex(&args.response, record.n)?;
    let key = match record.scheme {
        Scheme::CodeOffset => code_offset_reproduce(&r_prime, &helper)?,
        Scheme::CodewordAnchor => anchor_reproduce(&r_prime, &helper)?,
    };
    let report = KeyReport {
        key: key.to_hex(),
        scheme: record.scheme,
    };
    emit(
        args.out.as_deref(),
        &envelope("puf reproduce", record.n, None, report),
    )
}

#[derive(Serialize)]
struct ScreenReport {
    outcome: ScreenOutcome,
    lower_bound: usize,
    k_min: usize,
}

pub fn puf_screen(args: &ScreenArgs) -> Result<(), Failure> {
    let stored: Envelope<DeviceRecord> = read_envelope(&args.record)?;
    let record = stored.report;
    let certificate = record.certificate.as_ref().ok_or_else(|| {
        Failure::Format("record has no certificate; only codeword-anchor enrollments are screenable".into())
    })?;
    let response = BitVector::from_hex(&args.response, record.n)?;
    let outcome = screen_device(certificate, args.k_min, &response);
    let report = ScreenReport {
        outcome,
        lower_bound: certificate.lower_bound,
        k_min: args.k_min,
    };
    emit(
        args.out.as_deref(),
        &envelope("puf screen", record.n, None, report),
    )?;
    if outcome == ScreenOutcome::Reject {
        return Err(Failure::Degraded(format!(
            "device rejected: lower bound {} against k_min {}",
            certificate.lower_bound, args.k_min
        )));
    }
    Ok(())
}
