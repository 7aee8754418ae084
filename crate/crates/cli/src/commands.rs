//! Command-line surface and the implementation of each subcommand.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use heavymp_core::boundary::{boundary_modified_poisson, boundary_moment_alpha0};
use heavymp_core::combinatorics::{count_c0, count_norun_paths, stirling2, stirling2_assoc};
use heavymp_core::delta::{build_delta, contributing_sets_with, Generation};
use heavymp_core::moments::TermSource;
use heavymp_core::paths::{
    classify, count_irreducible_with_limits, enumerate_canonical_paths, Path, PathClass,
};
use heavymp_core::simulation::{Distribution, SimulationConfig};
use heavymp_core::{Limits, DEFAULT_K_MAX};

use crate::error::{CliError, CliResult};
use crate::experiment::{compare, Experiment, HistSpec, Target};
use crate::format::{csv_row, float, write_json, Format};
use crate::parallel;
use crate::records::*;

#[derive(Debug, Parser)]
#[command(
    name = "heavymp",
    version,
    about = "Exact and simulated spectral moments of heavy-tailed sample correlation matrices"
)]
pub struct Cli {
    /// Worker threads (defaults to one per core). Outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest path length exhaustive enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_K_MAX)]
    pub k_limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stirling, associated Stirling, no-run, completely reducible and irreducible counts.
    Counts {
        /// Largest path length k.
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Canonical r-paths of length k, one per line.
    Paths {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Keep only one reducibility class.
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Edges, edge degrees and parity/tree flags of the graph of a path pair.
    Delta {
        /// Index path I, e.g. `1,2,1,2`.
        #[arg(long)]
        i: Path,
        /// Index path T of the same length.
        #[arg(long)]
        t: Path,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Contributing sets of an irreducible canonical path and their depth t*.
    Contributing {
        #[arg(long)]
        i: Path,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Exact moments: Marčenko–Pastur part, heavy-tail gap and their sum.
    Moments {
        /// Tail index in (0, 2).
        #[arg(long)]
        alpha: f64,
        /// Dimension ratio p/n.
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The α → 0 limit: modified Poisson pmf and its moments.
    Boundary {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Monte Carlo replicates written to a directory.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Pooled eigenvalue histogram, `BINS:LO:HI`.
        #[arg(long)]
        hist: Option<HistSpec>,
        /// Also write every replicate's spectrum.
        #[arg(long)]
        save_eigenvalues: bool,
    },
    /// Replicate means against the exact limits, with z-scores.
    Compare {
        #[command(flatten)]
        sim: SimArgs,
        /// Limit to compare with (default: mu for heavy data, beta for gaussian).
        #[arg(long, value_enum)]
        target: Option<Target>,
        /// Exit with status 2 when some |z| reaches this value.
        #[arg(long, default_value_t = 3.0)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    C0,
    C1,
    C2,
}

impl ClassArg {
    fn class(self) -> PathClass {
        match self {
            Self::C0 => PathClass::CompletelyReducible,
            Self::C1 => PathClass::Irreducible,
            Self::C2 => PathClass::PartiallyReducible,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::C0 => "c0",
            Self::C1 => "c1",
            Self::C2 => "c2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ModeArg {
    #[default]
    Refine,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    T,
    Pareto,
    Gaussian,
}

/// Simulation parameters shared by `simulate` and `compare`.
#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Rows (variables) [default: 500, or 1000 with --full-scale].
    #[arg(long)]
    pub p: Option<usize>,
    /// Columns (observations) [default: 2500, or 5000 with --full-scale].
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "t")]
    pub dist: DistArg,
    /// Tail index for t and pareto.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Highest moment order.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Number of replicates [default: 50, or 1000 with --full-scale].
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use p = 1000, n = 5000 and 1000 replicates unless given explicitly.
    #[arg(long)]
    pub full_scale: bool,
}

impl SimArgs {
    pub fn experiment(
        &self,
        target: Option<Target>,
        hist: Option<HistSpec>,
    ) -> CliResult<Experiment> {
        let (p, n, l) = if self.full_scale {
            (1000, 5000, 1000)
        } else {
            (500, 2500, 50)
        };
        let name = match self.dist {
            DistArg::T => "t",
            DistArg::Pareto => "pareto",
            DistArg::Gaussian => "gaussian",
        };
        let dist = Distribution::from_name(name, self.alpha)?;
        let config = SimulationConfig {
            p: self.p.unwrap_or(p),
            n: self.n.unwrap_or(n),
            dist,
            k_max: self.k,
            seed: self.seed,
        };
        config.validate()?;
        let replicates = self.replicates.unwrap_or(l);
        if replicates == 0 {
            return Err(heavymp_core::Error::argument("replicates", "must be positive").into());
        }
        Ok(Experiment {
            config,
            replicates,
            hist,
            target: target.unwrap_or_else(|| Target::default_for(dist)),
        })
    }
}

/// Runs the parsed command, writing its main output to `out`.
pub fn run(cli: &Cli, out: &mut (dyn Write + Send)) -> CliResult<()> {
    if cli.k_limit == 0 {
        return Err(heavymp_core::Error::argument("k-limit", "must be positive").into());
    }
    match cli.threads {
        Some(0) => Err(heavymp_core::Error::argument("threads", "must be positive").into()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?;
            pool.install(|| dispatch(cli, out))
        }
        None => dispatch(cli, out),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let limits = Limits::new(cli.k_limit);
    match &cli.command {
        Command::Counts { kmax, format } => counts(*kmax, *format, &limits, out),
        Command::Paths {
            k,
            r,
            class,
            format,
        } => paths(*k, *r, *class, *format, out),
        Command::Delta { i, t, format } => delta(i, t, *format, out),
        Command::Contributing { i, mode, format } => contributing(i, *mode, *format, &limits, out),
        Command::Moments {
            alpha,
            gamma,
            kmax,
            format,
        } => moments(*alpha, *gamma, *kmax, *format, &limits, out),
        Command::Boundary {
            gamma,
            kmax,
            format,
        } => boundary(*gamma, *kmax, *format, out),
        Command::Simulate {
            sim,
            out: dir,
            hist,
            save_eigenvalues,
        } => simulate(sim, dir, *hist, *save_eigenvalues, &limits, out),
        Command::Compare {
            sim,
            target,
            threshold,
            format,
        } => compare_cmd(sim, *target, *threshold, *format, &limits, out),
    }
}

fn counts(kmax: usize, format: Format, limits: &Limits, out: &mut dyn Write) -> CliResult<()> {
    if kmax == 0 {
        return Err(heavymp_core::Error::argument("kmax", "must be at least 1").into());
    }
    limits.check(kmax)?;
    let mut rows = Vec::new();
    for k in 1..=kmax {
        for r in 1..=k {
            rows.push(CountRow {
                k,
                r,
                b: stirling2(k, r)?.to_string(),
                b2: stirling2_assoc(k, r).to_string(),
                norun: count_norun_paths(k, r)?.to_string(),
                c0: count_c0(k, r)?.to_string(),
                m: count_irreducible_with_limits(k, r, limits)?.to_string(),
            });
        }
    }
    match format {
        Format::Json => write_json(out, &CountsReport { k_max: kmax, rows }),
        Format::Csv => (|| {
            csv_row(out, &["k", "r", "B", "B2", "norun", "C0", "M"])?;
            for row in &rows {
                csv_row(
                    out,
                    &[
                        row.k.to_string(),
                        row.r.to_string(),
                        row.b.clone(),
                        row.b2.clone(),
                        row.norun.clone(),
                        row.c0.clone(),
                        row.m.clone(),
                    ],
                )?;
            }
            Ok(())
        })(),
    }
    .map_err(stdout_err)
}

fn paths(
    k: usize,
    r: usize,
    class: Option<ClassArg>,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let stream = enumerate_canonical_paths(k, r)?
        .filter(move |p| class.is_none_or(|c| classify(p) == c.class()));
    match format {
        // streamed: the caller bounds the size through k
        Format::Csv => {
            for p in stream {
                writeln!(out, "{p}").map_err(stdout_err)?;
            }
            Ok(())
        }
        Format::Json => {
            let report = PathsReport {
                k,
                r,
                class: class.map(|c| c.name().to_string()),
                paths: stream.map(Path::into_vertices).collect(),
            };
            write_json(out, &report).map_err(stdout_err)
        }
    }
}

fn delta(i: &Path, t: &Path, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let g = build_delta(i, t)?;
    let report = DeltaReport {
        i: i.vertices().to_vec(),
        t: t.vertices().to_vec(),
        edges: g
            .edge_degrees()
            .iter()
            .map(|(&(i, t), &degree)| EdgeRecord { i, t, degree })
            .collect(),
        n_e: g.num_edges(),
        even: g.is_even(),
        connected: g.is_connected(),
        tree: g.is_tree_skeleton(),
    };
    match format {
        Format::Json => write_json(out, &report),
        Format::Csv => (|| {
            csv_row(out, &["record", "i", "t", "value"])?;
            for e in &report.edges {
                csv_row(
                    out,
                    &[
                        "edge".to_string(),
                        e.i.to_string(),
                        e.t.to_string(),
                        e.degree.to_string(),
                    ],
                )?;
            }
            csv_row(out, &["n_e", "", "", &report.n_e.to_string()])?;
            csv_row(out, &["even", "", "", &report.even.to_string()])?;
            csv_row(out, &["connected", "", "", &report.connected.to_string()])?;
            csv_row(out, &["tree", "", "", &report.tree.to_string()])
        })(),
    }
    .map_err(stdout_err)
}

fn contributing(
    i: &Path,
    mode: ModeArg,
    format: Format,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<()> {
    let (generation, name) = match mode {
        ModeArg::Refine => (Generation::Refinement, "refine"),
        ModeArg::Brute => (Generation::BruteForce, "brute"),
    };
    let sets = contributing_sets_with(i, generation, limits)?;
    match format {
        Format::Json => {
            let report = ContributingReport {
                i: i.vertices().to_vec(),
                mode: name.to_string(),
                levels: sets
                    .levels
                    .iter()
                    .map(|level| level.iter().map(|p| p.vertices().to_vec()).collect())
                    .collect(),
                t_star: sets.t_star(),
            };
            write_json(out, &report)
        }
        Format::Csv => (|| {
            csv_row(out, &["record", "s", "t"])?;
            for (j, level) in sets.levels.iter().enumerate() {
                for p in level {
                    csv_row(
                        out,
                        &["level".to_string(), (j + 1).to_string(), p.to_string()],
                    )?;
                }
            }
            csv_row(
                out,
                &[
                    "t_star".to_string(),
                    sets.t_star().to_string(),
                    String::new(),
                ],
            )
        })(),
    }
    .map_err(stdout_err)
}

fn moments(
    alpha: f64,
    gamma: f64,
    kmax: usize,
    format: Format,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<()> {
    let table = parallel::moment_table(alpha, gamma, kmax, limits)?;
    let rows: Vec<MomentRow> = (0..kmax)
        .map(|j| {
            let (source, paths) = match table.sources[j] {
                TermSource::ClosedForm => ("closed_form", None),
                TermSource::PathEnumeration { paths, .. } => ("enumeration", Some(paths)),
            };
            MomentRow {
                k: j + 1,
                beta_k: table.beta[j],
                d_k: table.d[j],
                mu_k: table.mu[j],
                source: source.to_string(),
                paths,
            }
        })
        .collect();
    match format {
        Format::Json => write_json(
            out,
            &MomentsReport {
                alpha,
                gamma,
                k_max: kmax,
                rows,
            },
        ),
        Format::Csv => (|| {
            csv_row(out, &["k", "beta_k", "d_k", "mu_k"])?;
            for r in &rows {
                csv_row(
                    out,
                    &[
                        r.k.to_string(),
                        float(r.beta_k),
                        float(r.d_k),
                        float(r.mu_k),
                    ],
                )?;
            }
            Ok(())
        })(),
    }
    .map_err(stdout_err)
}

/// Most pmf entries listed by `boundary`.
const MAX_PMF_ROWS: usize = 200;

fn boundary(gamma: f64, kmax: usize, format: Format, out: &mut dyn Write) -> CliResult<()> {
    let law = boundary_modified_poisson(gamma)?;
    if kmax == 0 {
        return Err(heavymp_core::Error::argument("kmax", "must be at least 1").into());
    }
    let mut pmf = Vec::new();
    let mut mass = 0.0;
    while pmf.len() < MAX_PMF_ROWS && mass < 1.0 - 1e-15 {
        let q = law.pmf(pmf.len()).expect("modified Poisson has a pmf");
        mass += q;
        pmf.push(q);
    }
    let moments = (1..=kmax)
        .map(|k| boundary_moment_alpha0(gamma, k))
        .collect::<heavymp_core::Result<Vec<_>>>()?;
    let report = BoundaryReport {
        gamma,
        tail_mass: (1.0 - mass).max(0.0),
        pmf,
        moments,
    };
    match format {
        Format::Json => write_json(out, &report),
        Format::Csv => (|| {
            csv_row(out, &["quantity", "index", "value"])?;
            for (j, q) in report.pmf.iter().enumerate() {
                csv_row(out, &["pmf".to_string(), j.to_string(), float(*q)])?;
            }
            for (j, m) in report.moments.iter().enumerate() {
                csv_row(out, &["moment".to_string(), (j + 1).to_string(), float(*m)])?;
            }
            Ok(())
        })(),
    }
    .map_err(stdout_err)
}

fn create_file(path: &FsPath) -> CliResult<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_file(
    path: &FsPath,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> CliResult<()> {
    let mut f = create_file(path)?;
    body(&mut f)
        .and_then(|()| f.flush())
        .map_err(|e| CliError::io(path, e))
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, float)
}

fn simulate(
    sim: &SimArgs,
    dir: &FsPath,
    hist: Option<HistSpec>,
    save_eigenvalues: bool,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<()> {
    let exp = sim.experiment(None, hist)?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let report = exp.run(limits)?;
    let k_max = exp.config.k_max;

    write_file(&dir.join("moments.csv"), |f| {
        let mut header = vec!["replicate".to_string()];
        header.extend((1..=k_max).map(|k| format!("m_{k}")));
        header.extend(["lambda_min", "lambda_max", "trace"].map(String::from));
        csv_row(f, &header)?;
        for s in &report.samples {
            let mut row = vec![s.stream.to_string()];
            row.extend(s.moments.iter().map(|&v| float(v)));
            row.extend([s.lambda_min(), s.lambda_max(), s.trace()].map(float));
            csv_row(f, &row)?;
        }
        Ok(())
    })?;
    write_file(&dir.join("summary.json"), |f| {
        write_json(f, &report.summary)
    })?;
    if let Some(h) = &report.histogram {
        write_file(&dir.join("hist.csv"), |f| {
            csv_row(f, &["bin", "lo", "hi", "count", "density"])?;
            for (b, (count, density)) in h.counts.iter().zip(h.density()).enumerate() {
                let hi = if b + 1 == h.bins() {
                    h.hi
                } else {
                    h.edge(b + 1)
                };
                csv_row(
                    f,
                    &[
                        b.to_string(),
                        float(h.edge(b)),
                        float(hi),
                        count.to_string(),
                        float(density),
                    ],
                )?;
            }
            Ok(())
        })?;
    }
    if save_eigenvalues {
        for s in &report.samples {
            write_file(&dir.join(format!("eigenvalues_{}.csv", s.stream)), |f| {
                csv_row(f, &["index", "eigenvalue"])?;
                for (j, v) in s.eigenvalues.iter().enumerate() {
                    csv_row(f, &[j.to_string(), float(*v)])?;
                }
                Ok(())
            })?;
        }
    }

    (|| {
        csv_row(out, &["k", "mean", "stddev", "stderr", "exact"])?;
        for m in &report.summary.moments {
            csv_row(
                out,
                &[
                    m.k.to_string(),
                    float(m.mean),
                    float(m.stddev),
                    float(m.stderr),
                    opt(m.exact),
                ],
            )?;
        }
        Ok(())
    })()
    .map_err(stdout_err)
}

fn compare_cmd(
    sim: &SimArgs,
    target: Option<Target>,
    threshold: f64,
    format: Format,
    limits: &Limits,
    out: &mut dyn Write,
) -> CliResult<()> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(heavymp_core::Error::argument("threshold", "must be positive").into());
    }
    let exp = sim.experiment(target, None)?;
    if exp.target == Target::Mu && exp.config.dist.alpha().is_none() {
        return Err(heavymp_core::Error::argument(
            "target",
            "mu needs a heavy-tailed distribution",
        )
        .into());
    }
    let report = exp.run(limits)?;
    let cmp = compare(&report.summary, threshold);
    match format {
        Format::Json => write_json(out, &cmp),
        Format::Csv => (|| {
            csv_row(out, &["k", "exact", "mean", "stderr", "z"])?;
            for r in &cmp.rows {
                csv_row(
                    out,
                    &[
                        r.k.to_string(),
                        float(r.exact),
                        float(r.mean),
                        float(r.stderr),
                        float(r.z),
                    ],
                )?;
            }
            Ok(())
        })(),
    }
    .map_err(stdout_err)?;
    if cmp.pass {
        Ok(())
    } else {
        let worst = cmp.rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max);
        Err(CliError::Threshold(format!(
            "largest |z| = {worst} reaches the threshold {threshold}"
        )))
    }
}
