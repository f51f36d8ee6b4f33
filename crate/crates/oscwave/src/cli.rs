//! Command dispatch for the `oscwave` binary.
//!
//! Every command writes its data files and a `manifest.json` into the output
//! directory. Data files depend only on the configuration; timings and the
//! outcome go to the manifest alone.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use oscwave_core::kernels::{
    heat_row, k_function, k_function_row, mehler_heat, mehler_schrodinger, schrodinger_row,
    KernelValue,
};
use oscwave_core::transforms::{QuadratureGrid, SpectralCoefficients, SpectralTransform};
use oscwave_core::{OperatorParams, SpectralSet};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{KernelKind, RunConfig};
use crate::error::{Error, Result};
use crate::io::{create, fmt_f64, open, write_json, write_table, SpectralSetDocument};
use crate::verify::{self, EstimateReport, ScanGrid, WaveSample};

pub const ESTIMATE_IDS: [&str; 10] = [
    "schrodinger-dispersive",
    "heat-gaussian",
    "k-function",
    "multiplier-decay",
    "bernstein",
    "block-interaction",
    "besov-equivalence",
    "halfwave-decay",
    "wave-dispersive",
    "strichartz",
];

#[derive(Debug, Parser)]
#[command(
    name = "oscwave",
    version,
    about = "Kernels, spectral calculus and estimate scans for -Δ + a/|x|² + |x|²/4"
)]
pub struct Cli {
    /// JSON configuration; omitted keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `out` in the configuration).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads (overrides `workers`).
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    /// Also write data on the refined grid where a command supports it.
    #[arg(long, global = true)]
    pub refine: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Kernel values on the tensor grid of the `kernel` section.
    EvalKernel,
    /// `K(ρ, u)` on the grid of the `k_scan` section.
    ScanK,
    /// Eigenvalues and modes up to `spectrum.lambda_max`.
    Spectrum,
    /// Run one estimate scan.
    Verify {
        /// One of: schrodinger-dispersive, heat-gaussian, k-function, multiplier-decay, bernstein,
        /// block-interaction, besov-equivalence, halfwave-decay, wave-dispersive, strichartz.
        id: String,
    },
    /// Strichartz quotients for the sample data.
    Strichartz,
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::EvalKernel => "eval-kernel".into(),
            Command::ScanK => "scan-k".into(),
            Command::Spectrum => "spectrum".into(),
            Command::Verify { id } => format!("verify {id}"),
            Command::Strichartz => "strichartz".into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Versions {
    pub oscwave: &'static str,
    pub oscwave_core: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
    pub config_sha256: String,
    pub config: RunConfig,
    pub refine: bool,
    pub versions: Versions,
    pub outputs: Vec<String>,
    /// Seconds per phase.
    pub timings: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ld_verify_seed: Option<String>,
}

/// Reads the configuration and applies the command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// SHA-256 of the compact JSON form of the effective configuration.
pub fn config_hash(cfg: &RunConfig) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(cfg)?)))
}

/// Runs `cli` and returns the process exit code; errors are reported on stderr.
pub fn main_with(cli: Cli) -> i32 {
    let seed = std::env::var("LD_VERIFY_SEED").ok();
    if let Some(s) = &seed {
        log::info!("LD_VERIFY_SEED={s} is ignored: every computation is deterministic");
    }
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let start = Instant::now();
    let mut outputs = Vec::new();
    let mut timings = BTreeMap::new();
    let result = fs::create_dir_all(&cfg.out)
        .map_err(|e| Error::io(&cfg.out, e))
        .and_then(|_| {
            with_workers(cfg.workers, || {
                dispatch(&cli, &cfg, &mut outputs, &mut timings)
            })
        });
    timings.insert("total".to_owned(), start.elapsed().as_secs_f64());
    let code = match &result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if cfg.out.is_dir() {
        let manifest = Manifest {
            command: cli.command.name(),
            status: if code == 0 { "ok" } else { "error" },
            error: result.as_ref().err().map(ToString::to_string),
            exit_code: code,
            config_sha256: config_hash(&cfg).unwrap_or_default(),
            config: cfg.clone(),
            refine: cli.refine,
            versions: Versions {
                oscwave: env!("CARGO_PKG_VERSION"),
                oscwave_core: oscwave_core::VERSION,
            },
            outputs,
            timings,
            ld_verify_seed: seed,
        };
        if let Err(e) = write_json(&cfg.out.join("manifest.json"), &manifest) {
            eprintln!("error: {e}");
            return if code == 0 { e.exit_code() } else { code };
        }
    }
    code
}

fn with_workers<T: Send>(
    workers: Option<usize>,
    job: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match workers {
        None => job(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config(format!("cannot start {n} workers: {e}")))?;
            pool.install(job)
        }
    }
}

struct Run<'a> {
    cfg: &'a RunConfig,
    refine: bool,
    outputs: &'a mut Vec<String>,
    timings: &'a mut BTreeMap<String, f64>,
}

impl Run<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        self.outputs.push(name.to_owned());
        self.cfg.out.join(name)
    }

    fn timed<T>(&mut self, phase: &str, job: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let r = job();
        *self.timings.entry(phase.to_owned()).or_insert(0.0) += t.elapsed().as_secs_f64();
        r
    }

    fn table(&mut self, name: &str, header: &[&str], rows: Vec<Vec<f64>>) -> Result<()> {
        let path = self.path(name);
        let mut w = create(&path)?;
        write_table(&mut w, header, rows)?;
        std::io::Write::flush(&mut w).map_err(|e| Error::io(&path, e))
    }

    fn reports(&mut self, stem: &str, reports: &[EstimateReport]) -> Result<()> {
        let json = self.path(&format!("{stem}.json"));
        if let [one] = reports {
            write_json(&json, one)?;
        } else {
            write_json(&json, &reports)?;
        }
        let rows = reports.iter().map(EstimateReport::csv_row).collect();
        self.table(&format!("{stem}.csv"), &EstimateReport::CSV_HEADER, rows)
    }
}

fn dispatch(
    cli: &Cli,
    cfg: &RunConfig,
    outputs: &mut Vec<String>,
    timings: &mut BTreeMap<String, f64>,
) -> Result<()> {
    let mut run = Run {
        cfg,
        refine: cli.refine,
        outputs,
        timings,
    };
    match &cli.command {
        Command::EvalKernel => eval_kernel(&mut run),
        Command::ScanK => scan_k(&mut run),
        Command::Spectrum => spectrum(&mut run),
        Command::Verify { id } => verify_estimate(&mut run, id),
        Command::Strichartz => verify_estimate(&mut run, "strichartz"),
    }
}

pub const KERNEL_HEADER: [&str; 10] = [
    "t", "r1", "r2", "u", "re", "im", "k_used", "error", "free_re", "free_im",
];

fn eval_kernel(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let k = &cfg.kernel;
    let times: &[f64] = if k.kind == KernelKind::K {
        &[0.0]
    } else {
        &k.t
    };
    if times.is_empty() || k.r.is_empty() || k.u.is_empty() {
        return Err(Error::config(
            "eval-kernel: the kernel grid is empty (t, r and u each need at least one value)",
        ));
    }
    let params = cfg.params()?;
    let free_params = OperatorParams::new(0.0)?;
    let policy = cfg.truncation.policy()?;
    let rows: Vec<(f64, f64, f64)> = times
        .iter()
        .flat_map(|&t| {
            k.r.iter()
                .flat_map(move |&r1| k.r.iter().map(move |&r2| (t, r1, r2)))
        })
        .collect();
    let blocks = run.timed("compute", || {
        let parts: Vec<Result<Vec<Vec<f64>>>> = rows
            .par_iter()
            .map(|&(t, r1, r2)| {
                let row = match k.kind {
                    KernelKind::Heat => heat_row(t, r1, r2, &params, &policy)?,
                    KernelKind::Schrodinger => schrodinger_row(t, r1, r2, &params, &policy)?,
                    KernelKind::K => k_function_row(r1, 0, &params, &policy)?,
                };
                if row.truncated() {
                    return Err(Error::Truncated {
                        what: "the requested kernel",
                        cap: policy.k_max_cap(),
                    });
                }
                let mut out = Vec::with_capacity(k.u.len());
                for &u in &k.u {
                    let v: KernelValue = row.at(u)?;
                    let free = match k.kind {
                        KernelKind::Heat => Complex64::new(mehler_heat(t, r1, r2, u), 0.0),
                        KernelKind::Schrodinger => mehler_schrodinger(t, r1, r2, u),
                        KernelKind::K => k_function(r1, u, &free_params, &policy)?.value,
                    };
                    let (c1, c2) = if k.kind == KernelKind::K {
                        (r1, f64::NAN)
                    } else {
                        (r1, r2)
                    };
                    out.push(vec![
                        t,
                        c1,
                        c2,
                        u,
                        v.value.re,
                        v.value.im,
                        v.k_used as f64,
                        v.error_estimate(),
                        free.re,
                        free.im,
                    ]);
                }
                Ok(out)
            })
            .collect();
        parts.into_iter().collect::<Result<Vec<_>>>()
    })?;
    let body: Vec<Vec<f64>> = if k.kind == KernelKind::K {
        // the r₂ loop is redundant for K: keep the first copy of each ρ
        blocks.into_iter().step_by(k.r.len()).flatten().collect()
    } else {
        blocks.into_iter().flatten().collect()
    };
    run.table("kernel.csv", &KERNEL_HEADER, body)
}

pub const K_SCAN_HEADER: [&str; 7] = ["rho", "u", "re", "im", "abs", "k_used", "error"];

fn k_scan_rows(scan: &verify::KScan) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(scan.values.len());
    for (i, &rho) in scan.rho.iter().enumerate() {
        for (j, &u) in scan.u.iter().enumerate() {
            let v = scan.at(i, j);
            rows.push(vec![
                rho,
                u,
                v.value.re,
                v.value.im,
                v.value.norm(),
                v.k_used as f64,
                v.error_estimate(),
            ]);
        }
    }
    rows
}

fn scan_k(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let ks = cfg.k_scan;
    let params = cfg.params()?;
    let policy = cfg.truncation.policy()?;
    let coarse = run.timed("compute", || {
        verify::scan_k_function(&params, ks.rho_max, ks.rho_count, ks.u_count, &policy)
    })?;
    run.table("k_scan.csv", &K_SCAN_HEADER, k_scan_rows(&coarse))?;
    if run.refine {
        if ks.refine < 2 || ks.rho_count < 2 {
            return Err(Error::config(
                "k_scan.refine must be at least 2 and rho_count at least 2",
            ));
        }
        let (nr, nu) = (
            (ks.rho_count - 1) * ks.refine + 1,
            (ks.u_count - 1) * ks.refine + 1,
        );
        let fine = run.timed("compute", || {
            verify::scan_k_function(&params, ks.rho_max, nr, nu, &policy)
        })?;
        run.table("k_scan_refined.csv", &K_SCAN_HEADER, k_scan_rows(&fine))?;
        let report = verify::k_function_report(&params, &coarse, &fine);
        run.reports("k-function", &[report])?;
    }
    Ok(())
}

fn spectrum(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let set = SpectralSet::new(cfg.params()?, cfg.spectrum.lambda_max)?;
    let doc = SpectralSetDocument::from_set(&set);
    let rows = doc
        .modes
        .iter()
        .map(|&(m, k, n, lam)| vec![m as f64, k as f64, n as f64, lam])
        .collect();
    run.table("spectrum.csv", &["m", "k", "n", "lambda"], rows)?;
    let path = run.path("spectrum.json");
    write_json(&path, &doc)
}

struct SampleData {
    transform: SpectralTransform,
    data: Vec<SpectralCoefficients>,
    velocities: Vec<SpectralCoefficients>,
}

fn sample_data(cfg: &RunConfig) -> Result<SampleData> {
    let s = cfg.samples;
    let set = Arc::new(SpectralSet::new(cfg.params()?, s.lambda_max)?);
    let transform =
        SpectralTransform::new(QuadratureGrid::shared(cfg.grid.to_spec()?)?, set.clone())?;
    let data = verify::random_band_limited(&set, s.count, s.seed, 0);
    let velocities = verify::random_band_limited(&set, s.count, s.seed, 1);
    Ok(SampleData {
        transform,
        data,
        velocities,
    })
}

fn verify_estimate(run: &mut Run, id: &str) -> Result<()> {
    if !ESTIMATE_IDS.contains(&id) {
        return Err(Error::UnknownEstimate(id.to_owned()));
    }
    let cfg = run.cfg;
    let v = &cfg.verify;
    let params = cfg.params()?;
    let policy = cfg.truncation.policy()?;
    let partition = cfg.partition.build()?;
    let refine = run.refine;
    let reports = run.timed("compute", || -> Result<Vec<EstimateReport>> {
        let one = |r: EstimateReport| Ok(vec![r]);
        match id {
            "schrodinger-dispersive" => one(verify::verify_schrodinger_dispersive(
                &v.scan, &params, &policy,
            )?),
            "heat-gaussian" => one(verify::verify_heat_gaussian(
                &v.heat_scan,
                &params,
                &policy,
            )?),
            "k-function" => {
                let ks = cfg.k_scan;
                one(verify::verify_k_function(
                    &params,
                    ks.rho_max,
                    ks.rho_count,
                    ks.u_count,
                    ks.refine,
                    &policy,
                )?)
            }
            "multiplier-decay" => one(verify::verify_multiplier_decay(
                v.j, v.order, &v.scan, &params, &partition,
            )?),
            "bernstein" => one(verify::verify_bernstein(
                v.j, v.p.0, v.q.0, v.s, &v.scan, &params, &partition,
            )?),
            "block-interaction" => {
                let alt = v.alt_partition.build()?;
                one(verify::verify_block_interaction(
                    v.j, v.k, v.p.0, v.order, &v.scan, &params, &partition, &alt,
                )?)
            }
            "halfwave-decay" => {
                let grid = v.halfwave_scan.unwrap_or_else(|| ScanGrid::halfwave(v.j));
                one(verify::verify_halfwave_decay(
                    v.j, &grid, &params, &partition,
                )?)
            }
            "besov-equivalence" => {
                let alt = v.alt_partition.build()?;
                let d = sample_data(cfg)?;
                let fine = if refine && v.p.0 != 2.0 {
                    let grid = QuadratureGrid::shared(cfg.grid.to_spec()?.refined())?;
                    Some(SpectralTransform::new(grid, d.transform.set().clone())?)
                } else {
                    None
                };
                one(verify::verify_besov_equivalence(
                    &partition,
                    &alt,
                    v.s,
                    v.p.0,
                    v.q.0,
                    &d.data,
                    &d.transform,
                    fine.as_ref(),
                )?)
            }
            "wave-dispersive" => {
                let d = sample_data(cfg)?;
                let samples: Vec<WaveSample> = d
                    .data
                    .into_iter()
                    .zip(d.velocities)
                    .map(|(f, g)| WaveSample { f, g })
                    .collect();
                one(verify::verify_wave_dispersive(
                    &samples,
                    &v.wave_times,
                    &d.transform,
                    &partition,
                )?)
            }
            "strichartz" => {
                let st = cfg.strichartz;
                if !verify::admissible(st.q.0, st.r.0).admissible {
                    return Err(Error::Inadmissible {
                        q: st.q.0,
                        r: st.r.0,
                    });
                }
                let d = sample_data(cfg)?;
                d.data
                    .iter()
                    .zip(&d.velocities)
                    .map(|(f, g)| {
                        verify::verify_strichartz(
                            st.q.0,
                            st.r.0,
                            f,
                            g,
                            st.interval,
                            st.time_nodes,
                            &d.transform,
                        )
                    })
                    .collect()
            }
            _ => unreachable!("checked against ESTIMATE_IDS"),
        }
    })?;
    for r in &reports {
        log::info!(
            "{}: sup {} refined {} stable {}",
            r.id,
            fmt_f64(r.sup),
            fmt_f64(r.refined_sup),
            r.stable
        );
    }
    run.reports(id, &reports)
}

/// Reads a report written by `verify`.
pub fn read_report(path: &Path) -> Result<EstimateReport> {
    Ok(serde_json::from_reader(std::io::BufReader::new(open(
        path,
    )?))?)
}
