//! Command implementations behind the `tailpremium` binary.
//!
//! Exit codes: `0` success, `2` malformed input, `3` a domain guard of the
//! estimators tripped, `4` an output could not be written.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::asymptotics::{
    asym_mean, asym_variance, confidence_interval, normalization_factor, AsymptoticParams, ConfidenceInterval,
    NormalLimit,
};
use crate::error::Error;
use crate::estimators::{kaplan_meier_curve, php_estimate, PremiumEstimate};
use crate::sample::{build_sorted_sample, CensoredObservation, EstimationSettings, Retention, SortedCensoredSample};
use crate::study::{run_study, CellReport, StudyConfig};
use crate::threshold::{reiss_thomas_k, DEFAULT_BETA};

pub const STUDY_CSV_HEADER: &str = "p,rho,n,pi_true,pi_hat,abs_bias,rmse,failures";
pub const KM_CSV_HEADER: &str = "x,survival";
pub const ESTIMATE_CSV_HEADER: &str = "n,k,p_hat,gamma_hill,gamma1_hat,retention,rho,premium,ci_level,ci_lo,ci_hi";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Domain(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Domain(_) => 3,
            Self::Io(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Rounds to 12 significant digits and prints the shorter of the plain and
/// scientific renderings.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let plain = format!("{rounded}");
    let sci = format!("{rounded:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

/// Reads a `z,delta` claim file.
pub fn read_claims(path: &Path) -> CliResult<SortedCensoredSample> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_claims(&text)
}

pub fn parse_claims(text: &str) -> CliResult<SortedCensoredSample> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::Input(format!("cannot read header: {e}")))?;
    if header.iter().collect::<Vec<_>>() != ["z", "delta"] {
        let found = header.iter().collect::<Vec<_>>().join(",");
        return Err(CliError::Input(format!("line 1: header must be `z,delta` (found `{found}`)")));
    }
    let mut observations = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Input(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let z: f64 = record[0]
            .parse()
            .map_err(|_| CliError::Input(format!("line {line}: z is not a number (`{}`)", &record[0])))?;
        let delta = match &record[1] {
            "0" => 0,
            "1" => 1,
            other => return Err(CliError::Input(format!("line {line}: delta must be 0 or 1 (found `{other}`)"))),
        };
        let obs = CensoredObservation::new(z, delta).map_err(|e| {
            CliError::Input(format!("line {line}: {}", e.to_string().trim_start_matches("observation 0: ")))
        })?;
        observations.push(obs);
    }
    if observations.is_empty() {
        return Err(CliError::Input("no observations after the header".into()));
    }
    build_sorted_sample(&observations).map_err(|e| CliError::Input(e.to_string()))
}

fn write_to(out: Option<&Path>, stdout: &mut dyn Write, body: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| io_err(path, e)),
        None => stdout.write_all(body.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KChoice {
    Fixed(usize),
    /// Reiss–Thomas selection with the given weight exponent.
    Auto {
        beta: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOptions {
    pub rho: f64,
    pub k: KChoice,
    pub retention: Retention,
    pub tau1: Option<f64>,
    pub lambda1: Option<f64>,
    pub level: f64,
    pub out: Option<PathBuf>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            rho: 1.0,
            k: KChoice::Auto { beta: DEFAULT_BETA },
            retention: Retention::Threshold,
            tau1: None,
            lambda1: None,
            level: 0.95,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub n: usize,
    pub estimate: PremiumEstimate,
    pub limit: Option<NormalLimit>,
    pub interval: Option<ConfidenceInterval>,
}

/// Plug-in Gaussian limit: `h ≈ Z_{n−k:n}`, `F̄(h) ≈ F̄ₙ(Z_{n−k:n})`,
/// `γ₁ ≈ γ̂₁`, `p ≈ p̂`.
fn plug_in_limit(est: &PremiumEstimate, tau1: Option<f64>, lambda1: Option<f64>) -> CliResult<NormalLimit> {
    let lambda1 = lambda1.unwrap_or(0.0);
    let gamma1 = est.tail.gamma1_hat;
    let p = est.tail.p_hat;
    let mu = match tau1 {
        Some(tau1) => asym_mean(&AsymptoticParams::new(gamma1, p, est.rho, tau1, lambda1)?)?,
        None if lambda1 == 0.0 => 0.0,
        None => return Err(CliError::Input("--tau1 is required when --lambda1 is nonzero".into())),
    };
    Ok(NormalLimit {
        mu,
        sigma2: asym_variance(gamma1, p, est.rho)?,
        normalization: normalization_factor(est.retention, est.threshold, est.km_at_threshold, gamma1, est.rho)?,
    })
}

pub fn run_estimate(
    input: &Path,
    opts: &EstimateOptions,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<EstimateReport> {
    let sample = read_claims(input)?;
    let k = match opts.k {
        KChoice::Fixed(k) => k,
        KChoice::Auto { beta } => reiss_thomas_k(&sample, beta)?.k_star,
    };
    let estimate = php_estimate(&sample, EstimationSettings::new(k, opts.rho, opts.retention))?;

    let mut limit = None;
    let mut interval = None;
    if opts.tau1.is_some() || opts.lambda1.is_some() {
        let l = plug_in_limit(&estimate, opts.tau1, opts.lambda1)?;
        match confidence_interval(&estimate, &l, k, opts.level) {
            Ok(ci) => interval = Some(ci),
            Err(e @ Error::NonPositiveVariance { .. }) => {
                writeln!(stderr, "warning: {e}").ok();
            }
            Err(e) => return Err(e.into()),
        }
        limit = Some(l);
    }

    let report = EstimateReport { n: sample.n(), estimate, limit, interval };
    let t = &estimate.tail;
    let mut text = String::new();
    for (key, value) in [
        ("n", report.n.to_string()),
        ("k", k.to_string()),
        ("p_hat", format_number(t.p_hat)),
        ("gamma_hill", format_number(t.gamma_hill)),
        ("gamma1_hat", format_number(t.gamma1_hat)),
        ("retention", format_number(estimate.retention)),
        ("rho", format_number(estimate.rho)),
        ("premium", format_number(estimate.value)),
    ] {
        text.push_str(&format!("{key:<11}{value}\n"));
    }
    if let Some(l) = &limit {
        text.push_str(&format!("{:<11}{}\n{:<11}{}\n", "mu", format_number(l.mu), "sigma2", format_number(l.sigma2)));
    }
    if let Some(ci) = &interval {
        text.push_str(&format!(
            "{:<11}[{}, {}] at level {}\n",
            "ci",
            format_number(ci.lo),
            format_number(ci.hi),
            format_number(ci.level)
        ));
    }
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;

    if let Some(path) = &opts.out {
        let (lvl, lo, hi) = match &interval {
            Some(ci) => (format_number(ci.level), format_number(ci.lo), format_number(ci.hi)),
            None => Default::default(),
        };
        let row = [
            report.n.to_string(),
            k.to_string(),
            format_number(t.p_hat),
            format_number(t.gamma_hill),
            format_number(t.gamma1_hat),
            format_number(estimate.retention),
            format_number(estimate.rho),
            format_number(estimate.value),
            lvl,
            lo,
            hi,
        ]
        .join(",");
        fs::write(path, format!("{ESTIMATE_CSV_HEADER}\n{row}\n")).map_err(|e| io_err(path, e))?;
    }
    Ok(report)
}

/// Parses the flat `key = value` study configuration.
pub fn parse_study_config(text: &str) -> CliResult<StudyConfig> {
    const KEYS: [&str; 8] =
        ["gamma1", "eta", "p_values", "rho_values", "n_values", "replicates", "master_seed", "beta"];
    let mut values: [Option<(usize, String)>; 8] = Default::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| CliError::Input(format!("line {line_no}: expected `key = value`")))?;
        let key = key.trim();
        let slot = KEYS
            .iter()
            .position(|&k| k == key)
            .ok_or_else(|| CliError::Input(format!("line {line_no}: unknown key `{key}`")))?;
        if values[slot].is_some() {
            return Err(CliError::Input(format!("line {line_no}: duplicate key `{key}`")));
        }
        values[slot] = Some((line_no, value.trim().to_string()));
    }

    fn get<'a>(values: &'a [Option<(usize, String)>; 8], slot: usize, key: &str) -> CliResult<&'a (usize, String)> {
        values[slot].as_ref().ok_or_else(|| CliError::Input(format!("missing required key `{key}`")))
    }
    fn scalar<T: std::str::FromStr>(entry: &(usize, String), key: &str) -> CliResult<T> {
        entry.1.parse().map_err(|_| CliError::Input(format!("line {}: bad value for `{key}`: `{}`", entry.0, entry.1)))
    }
    fn list<T: std::str::FromStr>(entry: &(usize, String), key: &str) -> CliResult<Vec<T>> {
        entry
            .1
            .split(',')
            .map(|item| {
                item.trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("line {}: bad entry in `{key}`: `{}`", entry.0, item.trim())))
            })
            .collect()
    }

    let config = StudyConfig {
        gamma1: scalar(get(&values, 0, KEYS[0])?, KEYS[0])?,
        eta: scalar(get(&values, 1, KEYS[1])?, KEYS[1])?,
        p_values: list(get(&values, 2, KEYS[2])?, KEYS[2])?,
        rho_values: list(get(&values, 3, KEYS[3])?, KEYS[3])?,
        n_values: list(get(&values, 4, KEYS[4])?, KEYS[4])?,
        replicates: scalar(get(&values, 5, KEYS[5])?, KEYS[5])?,
        master_seed: scalar(get(&values, 6, KEYS[6])?, KEYS[6])?,
        beta: match &values[7] {
            Some(entry) => scalar(entry, KEYS[7])?,
            None => DEFAULT_BETA,
        },
    };
    config.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(config)
}

pub fn read_study_config(path: &Path) -> CliResult<StudyConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_study_config(&text)
}

/// Renders study results as CSV. Cells without successful replicates are
/// written with `nan` statistics.
pub fn study_csv(config: &StudyConfig, reports: &[CellReport]) -> String {
    let mut out = String::from(STUDY_CSV_HEADER);
    out.push('\n');
    for report in reports {
        let c = &report.cell;
        let (stats, failures) = match &report.row {
            Ok(r) => ([r.mean_pi_true, r.mean_pi_hat, r.abs_bias, r.rmse], r.failure_count),
            Err(_) => ([f64::NAN; 4], config.replicates),
        };
        let mut fields = vec![format_number(c.p), format_number(c.rho), c.n.to_string()];
        fields.extend(stats.iter().map(|&v| format_number(v)));
        fields.push(failures.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn run_simulate(
    config_path: &Path,
    out: Option<&Path>,
    workers: usize,
    seed: Option<u64>,
    stdout: &mut dyn Write,
) -> CliResult<Vec<CellReport>> {
    let mut config = read_study_config(config_path)?;
    if let Some(seed) = seed {
        config.master_seed = seed;
    }
    let reports = run_study(&config, workers)?;
    write_to(out, stdout, &study_csv(&config, &reports))?;
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsOptions {
    pub gamma1: f64,
    pub p: f64,
    pub rho: f64,
    pub tau1: f64,
    pub lambda1: f64,
}

impl Default for AsymptoticsOptions {
    fn default() -> Self {
        Self { gamma1: 0.1, p: 1.0, rho: 1.0, tau1: 0.0, lambda1: 0.0 }
    }
}

/// Prints `μ` and `σ²`, warning when `σ² ≤ 0`.
pub fn run_asymptotics(
    opts: &AsymptoticsOptions,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<(f64, f64)> {
    let params = AsymptoticParams::new(opts.gamma1, opts.p, opts.rho, opts.tau1, opts.lambda1)?;
    let mu = asym_mean(&params)?;
    let sigma2 = asym_variance(opts.gamma1, opts.p, opts.rho)?;
    writeln!(stdout, "mu     {}\nsigma2 {}", format_number(mu), format_number(sigma2))
        .map_err(|e| CliError::Io(e.to_string()))?;
    if sigma2 <= 0.0 {
        writeln!(
            stderr,
            "warning: asymptotic variance is non-positive ({}); no confidence interval is available",
            format_number(sigma2)
        )
        .ok();
    }
    Ok((mu, sigma2))
}

pub fn run_km(input: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<Vec<(f64, f64)>> {
    let sample = read_claims(input)?;
    let curve = kaplan_meier_curve(&sample);
    let mut body = format!("{KM_CSV_HEADER}\n");
    for (x, s) in &curve {
        body.push_str(&format!("{},{}\n", format_number(*x), format_number(*s)));
    }
    write_to(out, stdout, &body)?;
    Ok(curve)
}

/// Default worker count for simulations.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, 1.218796, 2.5e-5, -0.0023228, 123456789.123, 1e-300, 0.1 + 0.2, 7.8125e-5] {
            let s = format_number(x);
            let back: f64 = s.parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs(), "{x} -> {s}");
        }
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(2.5e-5), "2.5e-5");
        assert_eq!(format_number(1500.0), "1500");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn claims_parsing() {
        let s = parse_claims("z,delta\n3,1\n1,0\n2,1\n").unwrap();
        assert_eq!(s.z_sorted(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.delta_concomitant(), &[0, 1, 1]);

        let err = parse_claims("z,censored\n1,1\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("z,censored"), "{err}");

        let err = parse_claims("z,delta\n1,1\n2,x\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = parse_claims("z,delta\n1,1\n-2,1\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_claims("z,delta\n1\n").is_err());
        assert!(parse_claims("z,delta\n").is_err());
    }

    #[test]
    fn config_parsing() {
        let text = "# protocol\ngamma1 = 0.1\neta = 0.25\np_values = 0.4, 0.6,0.8\nrho_values = 1, 1.1\n\
                    n_values = 500,1000,1500\nreplicates = 1000\nmaster_seed = 42\n";
        let c = parse_study_config(text).unwrap();
        assert_eq!(c, StudyConfig { master_seed: 42, ..StudyConfig::burr_protocol(0.1, 0) });

        let err = parse_study_config(&format!("{text}colour = red\n")).unwrap_err();
        assert!(err.to_string().contains("unknown key `colour`"), "{err}");
        let err = parse_study_config(&text.replace("eta = 0.25\n", "")).unwrap_err();
        assert!(err.to_string().contains("missing required key `eta`"), "{err}");
        assert!(parse_study_config(&format!("{text}beta = 0.2\n")).unwrap().beta == 0.2);
        assert!(parse_study_config(&text.replace("500,1000", "50,1000")).is_err());
        assert!(parse_study_config(&format!("{text}gamma1 = 0.2\n")).is_err());
    }

    #[test]
    fn asymptotics_report() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let opts = AsymptoticsOptions { gamma1: 0.1, p: 0.8, ..Default::default() };
        let (mu, s2) = run_asymptotics(&opts, &mut out, &mut err).unwrap();
        assert_eq!(mu, 0.0);
        assert!((s2 + 0.0023228).abs() < 1e-6);
        assert!(String::from_utf8(err).unwrap().contains("warning"));

        let opts = AsymptoticsOptions { gamma1: 0.1, rho: 1.9, lambda1: 1.0, ..Default::default() };
        let e = run_asymptotics(&opts, &mut Vec::new(), &mut Vec::new()).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("(2−ρ−γ₁) vanishes"));
    }
}
