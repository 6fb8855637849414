//! `arlab`: class dimensions, learners and sample-complexity sweeps from the
//! command line. Every command writes CSV with a fixed header to stdout.

mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use arlab::classes::product::part_prefix;
use arlab::classes::{make_taxonomy_class, normalize_rate, rate_to_set, RateTable};
use arlab::dims::{
    atdim_realized, dual_vc_dimension, littlestone_dimension, natarajan_dimension, restrict_base,
    restrict_cot, restrict_e2e, vc_dimension, Domain, DEFAULT_DEPTH_CAP,
};
use arlab::harness::{sweep_t, Distribution, Learner, SweepRow, Target, TrialConfig, DEFAULT_M_CAP};
use arlab::learners::{
    cot_compress, cot_reconstruct, erm, erm_e2e, inflate, stable_compress_cot, stable_reconstruct_cot,
    CompressConfig, CotSample,
};
use arlab::spec::ClassSpec;
use arlab::suites::run_suite;
use arlab::{cot_trace, e2e_output, BitString, Error, FiniteClass, DEFAULT_CAP};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

#[derive(Parser)]
#[command(name = "arlab", version, about = "Autoregressive learning laboratory")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Restricted dimensions of a class on a finite domain.
    Dims {
        spec: PathBuf,
        /// `chain:K` for 0^1..0^K, or a comma-separated list of prompts.
        #[arg(long, default_value = "chain:8")]
        domain: String,
        #[arg(long = "T", alias = "t", default_value_t = 1)]
        t: usize,
        /// Comma-separated dimension names, or `all`.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Brute-force check of the e2e VC sandwich `r(T) ≤ VC ≤ r(T) + r(1)`.
    Taxonomy {
        /// Comma-separated rate values r(1), r(2), …
        #[arg(long)]
        rate: String,
        /// Defaults to the table length.
        #[arg(long = "Tmax", alias = "tmax")]
        t_max: Option<usize>,
        /// Defaults to twice `Tmax`.
        #[arg(long = "smax")]
        s_max: Option<u64>,
        /// Prompts per copy; defaults to twice `Tmax`.
        #[arg(long)]
        chain: Option<usize>,
    },
    /// Fits a learner to a CSV sample (columns prompt, trace).
    Learn {
        spec: PathBuf,
        #[arg(long)]
        sample: PathBuf,
        #[arg(long, value_enum)]
        learner: LearnerName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inflated draws per boosting round; defaults to 12 × base VC.
        #[arg(long)]
        s: Option<usize>,
        /// Feature window of `linear_stable`; defaults to the spec's `d`.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Estimated sample complexity per `T` under the uniform distribution on a domain.
    Sweep {
        spec: PathBuf,
        #[arg(long, default_value = "chain:8")]
        domain: String,
        #[arg(long = "Ts", alias = "ts", default_value = "1,2,4,8")]
        ts: String,
        /// Comma-separated learners, or a mode: `cot`, `e2e`, `both`.
        #[arg(long, default_value = "both")]
        learners: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_M_CAP)]
        m_cap: usize,
        /// Class index of the target, or `random` to redraw it per trial.
        #[arg(long, default_value = "random")]
        target: String,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write an m̂-vs-T line chart here.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Runs a named property suite: lemmas, compression, parity, sauer.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LearnerName {
    #[value(name = "erm_e2e")]
    ErmE2e,
    #[value(name = "erm_cot")]
    ErmCot,
    #[value(name = "cot_compress")]
    CotCompress,
    #[value(name = "linear_stable")]
    LinearStable,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::HorizonExceeded { .. }
            | Error::HorizonTooSmall { .. } => 2,
            Error::EnumerationTooLarge { .. }
            | Error::SearchCapExceeded(_)
            | Error::DepthCapExceeded { .. }
            | Error::Unlearnable { .. } => 3,
            Error::RateInvalid(_) | Error::RateNotNormalized(_) => 4,
            Error::NotRealizable | Error::NotSeparable => 5,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: 2, message: format!("csv: {e}") }
    }
}

fn parse_err(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> CliResult<u8> {
    let stdout = io::stdout();
    let mut out = csv::Writer::from_writer(stdout.lock());
    let code = match cmd {
        Command::Dims { spec, domain, t, which } => {
            cmd_dims(&mut out, &spec, &domain, t, &which)?;
            0
        }
        Command::Taxonomy { rate, t_max, s_max, chain } => {
            cmd_taxonomy(&mut out, &rate, t_max, s_max, chain)?;
            0
        }
        Command::Learn { spec, sample, learner, seed, s, d } => {
            cmd_learn(&mut out, &spec, &sample, learner, seed, s, d)?;
            0
        }
        Command::Sweep {
            spec,
            domain,
            ts,
            learners,
            eps,
            delta,
            trials,
            m_cap,
            target,
            s,
            d,
            seed,
            svg,
        } => {
            let rows = cmd_sweep(
                &spec, &domain, &ts, &learners, &eps, &delta, trials, m_cap, &target, s, d, seed,
            )?;
            out.write_record(["T", "mode", "learner", "m_hat", "failure_rate"])?;
            for r in &rows {
                out.write_record([
                    r.t.to_string(),
                    r.mode.to_string(),
                    r.learner.to_string(),
                    r.m_hat.to_string(),
                    format!("{:.4}", r.failure_rate),
                ])?;
            }
            if let Some(path) = svg {
                fs::write(path, svg::chart(&rows))?;
            }
            0
        }
        Command::Verify { suite, seed } => {
            let checks = run_suite(&suite, seed)?;
            out.write_record(["check", "status", "detail"])?;
            for c in &checks {
                out.write_record([c.name.as_str(), if c.passed { "PASS" } else { "FAIL" }, &c.detail])?;
            }
            u8::from(!checks.iter().all(|c| c.passed))
        }
    };
    out.flush()?;
    Ok(code)
}

fn load_spec(path: &Path) -> CliResult<ClassSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    Ok(ClassSpec::parse(&text)?)
}

fn parse_domain(text: &str) -> CliResult<Domain> {
    if let Some(k) = text.strip_prefix("chain:") {
        let k: usize = k.trim().parse().map_err(|_| parse_err(format!("bad chain length {k:?}")))?;
        return Ok(Domain::chain(k));
    }
    let prompts = text
        .split(',')
        .map(|p| p.trim().parse::<BitString>())
        .collect::<arlab::Result<Vec<_>>>()?;
    Ok(Domain::new(prompts)?)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| parse_err(format!("bad {what} {s:?}"))))
        .collect()
}

/// `a/b`, an integer, or a decimal such as `0.05`.
fn parse_rational(text: &str) -> CliResult<Rational64> {
    let bad = || parse_err(format!("bad rational {text:?}"));
    let t = text.trim();
    if t.contains('/') {
        return t.parse().map_err(|_| bad());
    }
    match t.split_once('.') {
        None => Ok(Rational64::from_integer(t.parse().map_err(|_| bad())?)),
        Some((int, frac)) => {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10i64.pow(frac.len() as u32);
            let whole: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let f: i64 = frac.parse().map_err(|_| bad())?;
            Ok(Rational64::new(whole * den + f, den))
        }
    }
}

const DIMENSIONS: [&str; 7] = [
    "atdim_realized",
    "dual_vc",
    "littlestone",
    "natarajan_cot",
    "vc_base",
    "vc_cot_first",
    "vc_e2e",
];

fn cmd_dims<W: Write>(out: &mut csv::Writer<W>, spec: &Path, domain: &str, t: usize, which: &str) -> CliResult<()> {
    let spec = load_spec(spec)?;
    let d = parse_domain(domain)?;
    let mut names: Vec<&str> = if which.trim() == "all" {
        DIMENSIONS.to_vec()
    } else {
        which.split(',').map(str::trim).collect()
    };
    if let Some(bad) = names.iter().find(|n| !DIMENSIONS.contains(n)) {
        return Err(parse_err(format!("unknown dimension {bad:?}; expected one of {}", DIMENSIONS.join(", "))));
    }
    names.sort_unstable();
    names.dedup();
    let class = spec.build()?;
    let mut rows = Vec::with_capacity(names.len());
    for name in names {
        let start = Instant::now();
        let value = dimension(&class, &d, t, name)?;
        rows.push([name.to_string(), value.to_string(), format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)]);
    }
    out.write_record(["dimension", "value", "wall_time_ms"])?;
    for r in rows {
        out.write_record(r)?;
    }
    Ok(())
}

fn dimension(class: &FiniteClass, d: &Domain, t: usize, name: &str) -> arlab::Result<usize> {
    Ok(match name {
        "vc_base" => vc_dimension(&restrict_base(class, d)?),
        "vc_e2e" => vc_dimension(&restrict_e2e(class, d, t)?),
        "vc_cot_first" => vc_dimension(&restrict_cot(class, d, t)?.first_bit_projection()),
        "natarajan_cot" => natarajan_dimension(&restrict_cot(class, d, t)?),
        "dual_vc" => dual_vc_dimension(class, d)?,
        "littlestone" => littlestone_dimension(class, d, DEFAULT_DEPTH_CAP)?.value,
        "atdim_realized" => atdim_realized(class, d, t)?,
        _ => unreachable!("validated"),
    })
}

fn cmd_taxonomy<W: Write>(
    out: &mut csv::Writer<W>,
    rate: &str,
    t_max: Option<usize>,
    s_max: Option<u64>,
    chain: Option<usize>,
) -> CliResult<()> {
    let values: Vec<u64> = parse_list(rate, "rate value")?;
    let table = RateTable::new(values)?;
    let t_max = t_max.unwrap_or(table.t_max());
    if t_max == 0 || t_max > table.t_max() {
        return Err(parse_err(format!("Tmax must be in 1..={}", table.t_max())));
    }
    let s_max = s_max.unwrap_or(2 * t_max as u64);
    let k = chain.unwrap_or(2 * t_max);
    let copies = table.values()[0] as usize;
    let n = rate_to_set(&normalize_rate(&table))?;
    let top = n.max().unwrap_or(1) as usize;
    let mut horizon = k + t_max + s_max as usize + top + 1;
    let prompts: Vec<BitString> = if copies == 1 {
        Domain::chain(k).prompts().to_vec()
    } else {
        horizon += copies + 2;
        (1..=copies)
            .flat_map(|i| (1..=k).map(move |j| part_prefix(i).concat(&BitString::zeros(j))))
            .collect()
    };
    let class = make_taxonomy_class(&table, s_max, horizon, DEFAULT_CAP)?;
    let d = Domain::new(prompts)?;
    let r1 = table.values()[0];
    out.write_record(["T", "r_T", "vc_e2e_restricted", "lower_ok", "upper_ok"])?;
    for t in 1..=t_max {
        let r = table.values()[t - 1];
        let vc = vc_dimension(&restrict_e2e(&class, &d, t)?) as u64;
        out.write_record([
            t.to_string(),
            r.to_string(),
            vc.to_string(),
            (vc >= r).to_string(),
            (vc <= r + r1).to_string(),
        ])?;
    }
    Ok(())
}

fn read_sample(path: &Path) -> CliResult<CotSample> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| parse_err(format!("sample file lacks a {name:?} column")))
    };
    let (pi, ti) = (col("prompt")?, col("trace")?);
    let mut examples = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").trim().parse::<BitString>();
        examples.push((field(pi)?, field(ti)?));
    }
    let t = examples.first().map_or(1, |(_, tr)| tr.len());
    Ok(CotSample::new(t, examples)?)
}

fn default_s(class: &FiniteClass, s: &CotSample) -> arlab::Result<usize> {
    let mut prompts: Vec<BitString> = inflate(s).iter().map(|e| e.x.clone()).collect();
    prompts.sort();
    prompts.dedup();
    let vc = if prompts.is_empty() {
        0
    } else {
        vc_dimension(&restrict_base(class, &Domain::new(prompts)?)?)
    };
    Ok(12 * vc.max(1))
}

fn cmd_learn<W: Write>(
    out: &mut csv::Writer<W>,
    spec: &Path,
    sample: &Path,
    learner: LearnerName,
    seed: u64,
    s: Option<usize>,
    d: Option<usize>,
) -> CliResult<()> {
    let spec = load_spec(spec)?;
    let sample = read_sample(sample)?;
    let t = sample.t();
    let linear_d = d.or(spec.linear_d());
    let class = spec.build()?;
    let predict: Box<dyn Fn(&BitString) -> arlab::Result<BitString>>;
    let report: String;
    match learner {
        LearnerName::ErmE2e => {
            let pairs: Vec<(BitString, arlab::Bit)> = sample
                .examples()
                .iter()
                .map(|(x, tr)| (x.clone(), tr.last().expect("T ≥ 1")))
                .collect();
            let h = erm_e2e(&class, &pairs, t)?.clone();
            report = format!("learner=erm_e2e sample={}", sample.len());
            predict = Box::new(move |x| Ok(BitString::from_bits([e2e_output(&h, x, t)?])));
        }
        LearnerName::ErmCot => {
            let h = erm(&class, &inflate(&sample))?.clone();
            report = format!("learner=erm_cot sample={}", sample.len());
            predict = Box::new(move |x| cot_trace(&h, x, t));
        }
        LearnerName::CotCompress => {
            erm(&class, &inflate(&sample))?;
            let draws = match s {
                Some(s) => s,
                None => default_s(&class, &sample)?,
            };
            let c = cot_compress(&class, &sample, &CompressConfig::new(draws, seed))?;
            report = format!(
                "learner=cot_compress sample={} kernel={} rounds={} side_info_bits={:.1}",
                sample.len(),
                c.kernel.len(),
                c.rounds(),
                c.side_info_bits()
            );
            let h = cot_reconstruct(&class, &c)?;
            predict = Box::new(move |x| h.cot(x, t));
        }
        LearnerName::LinearStable => {
            let d = linear_d.ok_or_else(|| parse_err("linear_stable needs --d or a linear_grid spec"))?;
            let (k, _) = stable_compress_cot(&sample, d)?;
            report = format!("learner=linear_stable sample={} kernel={} bound={}", sample.len(), k.len(), d + 1);
            let h = stable_reconstruct_cot(&k, d, class.horizon())?;
            predict = Box::new(move |x| cot_trace(&h, x, t));
        }
    }
    out.write_record(["prompt", "trace", "predicted", "correct"])?;
    let mut correct = 0;
    for (x, tr) in sample.examples() {
        let p = predict(x)?;
        let ok = match learner {
            LearnerName::ErmE2e => p.last() == tr.last(),
            _ => &p == tr,
        };
        correct += ok as usize;
        out.write_record([x.to_string(), tr.to_string(), p.to_string(), ok.to_string()])?;
    }
    eprintln!("{report} correct={correct}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    spec: &Path,
    domain: &str,
    ts: &str,
    learners: &str,
    eps: &str,
    delta: &str,
    trials: usize,
    m_cap: usize,
    target: &str,
    s: Option<usize>,
    d: Option<usize>,
    seed: u64,
) -> CliResult<Vec<SweepRow>> {
    let spec = load_spec(spec)?;
    let dom = parse_domain(domain)?;
    let ts: Vec<usize> = parse_list(ts, "T")?;
    if ts.contains(&0) {
        return Err(parse_err("T must be ≥ 1"));
    }
    let (eps, delta) = (parse_rational(eps)?, parse_rational(delta)?);
    let target = match target.trim() {
        "random" => Target::Random,
        i => Target::Index(i.parse().map_err(|_| parse_err(format!("bad target {i:?}")))?),
    };
    let class = Arc::new(spec.build()?);
    let s = match s {
        Some(s) => s,
        None => 12 * vc_dimension(&restrict_base(&class, &dom)?).max(1),
    };
    let linear_d = d.or(spec.linear_d());
    let mut chosen = Vec::new();
    for name in learners.split(',').map(str::trim) {
        match name {
            "cot" => chosen.push(Learner::CotCompress { s }),
            "e2e" | "erm_e2e" => chosen.push(Learner::ErmE2e),
            "both" => chosen.extend([Learner::CotCompress { s }, Learner::ErmE2e]),
            "cot_compress" => chosen.push(Learner::CotCompress { s }),
            "erm_cot" => chosen.push(Learner::ErmCot),
            "linear_stable" => chosen.push(Learner::LinearStable {
                d: linear_d.ok_or_else(|| parse_err("linear_stable needs --d or a linear_grid spec"))?,
            }),
            other => return Err(parse_err(format!("unknown learner {other:?}"))),
        }
    }
    chosen.dedup();
    let distribution = Distribution::uniform(dom.prompts().to_vec())?;
    let mut rows = Vec::new();
    for learner in chosen {
        let base = TrialConfig {
            class: Arc::clone(&class),
            target,
            t: 1,
            learner,
            m: 0,
            distribution: distribution.clone(),
            seed,
        };
        rows.extend(sweep_t(&base, &ts, eps, delta, trials, m_cap)?);
    }
    rows.sort_by(|a, b| (a.t, a.learner).cmp(&(b.t, b.learner)));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("0.1").ok(), Some(Rational64::new(1, 10)));
        assert_eq!(parse_rational("1/4").ok(), Some(Rational64::new(1, 4)));
        assert_eq!(parse_rational("2").ok(), Some(Rational64::from_integer(2)));
        assert_eq!(parse_rational(".25").ok(), Some(Rational64::new(1, 4)));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("0.").is_err());
    }

    #[test]
    fn domains() {
        assert_eq!(parse_domain("chain:3").ok().map(|d| d.len()), Some(3));
        let d = parse_domain("01, 1,\"\"").ok().unwrap();
        assert_eq!(d.len(), 3);
        assert!(parse_domain("chain:x").is_err());
        assert!(parse_domain("012").is_err());
    }
}
