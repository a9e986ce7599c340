use std::path::{Path, PathBuf};

use ridge_shrink::application::{
    bundled, evaluate_real_with, load_dataset, standardized_model, ResponseScaling, BUNDLED_IDS,
};
use ridge_shrink::estimators::{estimate, EstimatorId};
use ridge_shrink::regression::{canonicalize, mse_ols, mse_scalar, ridge_fit};
use ridge_shrink::report::{
    figure_slices, fmt4, long_csv, real_data_banner, real_data_csv, real_data_markdown, wide_tables,
};
use ridge_shrink::simulation::{run_cells, standard_grid, SimulationCell};
use ridge_shrink::stochastics::derive_seed;
use ridge_shrink::Error;
use serde::{Deserialize, Serialize};

use crate::manifest::{now, RunManifest};
use crate::{FitArgs, Format, RealdataArgs, SimulateArgs};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            _ if e.is_numerical() => EXIT_NUMERICAL,
            Error::InvalidArgument(_) | Error::UnknownEstimator(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn write_file(dir: &Path, name: &str, contents: &str, written: &mut Vec<String>) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    written.push(name.to_string());
    Ok(())
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::data(format!("{}: {e}", dir.display())))
}

#[derive(Debug, Deserialize)]
struct ConfigRow {
    rho: f64,
    n: usize,
    p: usize,
    sigma2: f64,
    replications: Option<usize>,
    seed: Option<u64>,
}

fn read_config(path: &Path, reps: usize, base_seed: u64) -> CliResult<Vec<SimulationCell>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut cells = Vec::new();
    for (i, row) in reader.deserialize::<ConfigRow>().enumerate() {
        let row = row.map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        cells.push(SimulationCell {
            rho: row.rho,
            n: row.n,
            p: row.p,
            sigma2: row.sigma2,
            replications: row.replications.unwrap_or(reps),
            seed: row.seed.unwrap_or_else(|| derive_seed(base_seed, i as u64)),
        });
    }
    if cells.is_empty() {
        return Err(CliError::usage(format!("{}: no cells", path.display())));
    }
    Ok(cells)
}

fn resolve_cells(args: &SimulateArgs) -> CliResult<Vec<SimulationCell>> {
    let cells = if args.paper_grid {
        standard_grid(args.seed, args.reps)
    } else if let Some(path) = &args.config {
        read_config(path, args.reps, args.seed)?
    } else {
        match (args.rho, args.n, args.p, args.sigma2) {
            (Some(rho), Some(n), Some(p), Some(sigma2)) => vec![SimulationCell {
                rho,
                n,
                p,
                sigma2,
                replications: args.reps,
                seed: derive_seed(args.seed, 0),
            }],
            _ => {
                return Err(CliError::usage(
                    "give --paper-grid, --config FILE, or all of --rho --n --p --sigma2",
                ))
            }
        }
    };
    for (i, c) in cells.iter().enumerate() {
        c.validate()
            .map_err(|e| CliError::usage(format!("cell {i}: {e}")))?;
    }
    Ok(cells)
}

#[derive(Serialize)]
struct SimulateConfig<'a> {
    threads: usize,
    cells: &'a [SimulationCell],
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let started = now();
    let cells = resolve_cells(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    let outcomes = pool.install(|| run_cells(&cells));

    let mut results = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(r) => results.push(r),
            Err(e) => failures.push(e),
        }
    }

    ensure_dir(&args.out)?;
    let mut written = Vec::new();
    for table in wide_tables(&results) {
        match args.format {
            Format::Csv => write_file(
                &args.out,
                &format!("{}.csv", table.file_stem()),
                &table.to_csv(),
                &mut written,
            )?,
            Format::Markdown => write_file(
                &args.out,
                &format!("{}.md", table.file_stem()),
                &table.to_markdown(),
                &mut written,
            )?,
        }
    }
    write_file(
        &args.out,
        "amse_long.csv",
        &long_csv(&results),
        &mut written,
    )?;
    if args.paper_grid {
        for fig in figure_slices(&results) {
            write_file(
                &args.out,
                &format!("{}.csv", fig.name),
                &fig.csv,
                &mut written,
            )?;
        }
    }
    let config = SimulateConfig {
        threads: args.threads,
        cells: &cells,
    };
    let mut manifest = RunManifest::new("simulate", config, Some(args.seed), started);
    manifest.outputs = written.clone();
    manifest
        .write(&args.out)
        .map_err(|e| CliError::data(format!("manifest: {e}")))?;

    eprintln!(
        "{} of {} cells completed; wrote {} files to {}",
        results.len(),
        cells.len(),
        written.len() + 1,
        args.out.display()
    );
    if let Some(first) = failures.into_iter().next() {
        return Err(first.into());
    }
    Ok(())
}

fn resolve_estimators(args: &FitArgs) -> CliResult<Vec<EstimatorId>> {
    if args.all || args.estimators.is_empty() {
        return Ok(EstimatorId::ALL.to_vec());
    }
    args.estimators
        .iter()
        .map(|s| s.parse::<EstimatorId>().map_err(CliError::from))
        .collect()
}

struct FitRow {
    id: EstimatorId,
    k: f64,
    mse: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

pub fn fit(args: &FitArgs) -> CliResult<()> {
    let started = now();
    let ids = resolve_estimators(args)?;
    let nd = load_dataset(&args.data)?;
    let model = if args.raw {
        canonicalize(&nd.dataset)?
    } else {
        standardized_model(&nd.dataset, ResponseScaling::UnitLength)?
    };
    let lambdas = model.lambdas();
    let alpha = model.alpha_ols().as_slice();
    let s2 = model.sigma2_hat();

    let mut rows = Vec::new();
    for &id in &ids {
        let k = estimate(id, &model)?.k;
        let alpha_r = ridge_fit(&model, k)?;
        let beta_r = model.to_original(&alpha_r);
        let mse = if id == EstimatorId::OLS {
            mse_ols(lambdas, s2)?
        } else {
            mse_scalar(k, lambdas, alpha, s2)?
        };
        rows.push(FitRow {
            id,
            k,
            mse,
            alpha: alpha_r.as_slice().to_vec(),
            beta: beta_r.as_slice().to_vec(),
        });
    }

    let labels = nd.dataset.labels();
    let p = labels.len();
    let eig: Vec<String> = lambdas.iter().map(|v| format!("{v:.6}")).collect();
    let banner = format!(
        "dataset {} (n = {}, p = {}, {})\nsigma2_hat: {:.6e} on {} df\neigenvalues of X'X: {}\ncondition number: {:.4}\n",
        nd.id,
        model.n(),
        p,
        if args.raw { "raw" } else { "standardized" },
        s2,
        model.residual_df(),
        eig.join(", "),
        model.eig().condition_number()?
    );

    let text = match args.format {
        Format::Csv => {
            let mut out = String::from("estimator,k,mse");
            for j in 1..=p {
                out.push_str(&format!(",alpha_{j}"));
            }
            for l in labels {
                out.push_str(&format!(",beta_{l}"));
            }
            out.push('\n');
            for r in &rows {
                out.push_str(&format!("{},{},{}", r.id, r.k, r.mse));
                for v in r.alpha.iter().chain(&r.beta) {
                    out.push_str(&format!(",{v}"));
                }
                out.push('\n');
            }
            out
        }
        Format::Markdown => {
            let mut out = banner.clone();
            out.push_str("\n| estimator | k | MSE |");
            for l in labels {
                out.push_str(&format!(" beta {l} |"));
            }
            out.push_str("\n|---|---:|---:|");
            out.push_str(&"---:|".repeat(p));
            out.push('\n');
            for r in &rows {
                out.push_str(&format!("| {} | {} | {} |", r.id, fmt4(r.k), fmt4(r.mse)));
                for v in &r.beta {
                    out.push_str(&format!(" {v:.6} |"));
                }
                out.push('\n');
            }
            out
        }
    };

    match &args.out {
        None => {
            if args.format == Format::Csv {
                eprint!("{banner}");
            }
            print!("{text}");
        }
        Some(dir) => {
            ensure_dir(dir)?;
            let ext = match args.format {
                Format::Csv => "csv",
                Format::Markdown => "md",
            };
            let mut written = Vec::new();
            write_file(dir, &format!("fit_{}.{ext}", nd.id), &text, &mut written)?;
            let config = serde_json::json!({
                "data": args.data,
                "estimators": ids.iter().map(|id| id.name()).collect::<Vec<_>>(),
                "raw": args.raw,
            });
            let mut manifest = RunManifest::new("fit", config, None, started);
            manifest.outputs = written;
            manifest
                .write(dir)
                .map_err(|e| CliError::data(format!("manifest: {e}")))?;
        }
    }
    Ok(())
}

pub fn realdata(args: &RealdataArgs) -> CliResult<()> {
    let started = now();
    let nd = bundled(&args.dataset).ok_or_else(|| {
        CliError::usage(format!(
            "unknown dataset '{}'; valid ids: {}",
            args.dataset,
            BUNDLED_IDS.join(", ")
        ))
    })?;
    let scaling = if args.centered_y {
        ResponseScaling::CenteredOnly
    } else {
        ResponseScaling::UnitLength
    };
    let report = evaluate_real_with(&nd, scaling)?;
    match &args.out {
        None => match args.format {
            Format::Markdown => print!("{}", real_data_markdown(&report)),
            Format::Csv => {
                eprint!("{}", real_data_banner(&report));
                print!("{}", real_data_csv(&report));
            }
        },
        Some(dir) => {
            let dir: PathBuf = dir.clone();
            ensure_dir(&dir)?;
            let mut written = Vec::new();
            let stem = format!("realdata_{}", report.id);
            write_file(
                &dir,
                &format!("{stem}.csv"),
                &real_data_csv(&report),
                &mut written,
            )?;
            write_file(
                &dir,
                &format!("{stem}.md"),
                &real_data_markdown(&report),
                &mut written,
            )?;
            let config = serde_json::json!({ "dataset": report.id, "scaling": scaling });
            let mut manifest = RunManifest::new("realdata", config, None, started);
            manifest.outputs = written;
            manifest
                .write(&dir)
                .map_err(|e| CliError::data(format!("manifest: {e}")))?;
            print!("{}", real_data_markdown(&report));
        }
    }
    Ok(())
}
