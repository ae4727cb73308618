use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use jumpact::estimators::{asymptotic_variance, REPORT_CSV_HEADER};
use jumpact::harness::{run_study, study_csv};
use jumpact::io::{fmt_machine, qq_svg, RunConfig, RunManifest, TickSeries};
use jumpact::stable::{stable_constants, PhiSpec, StableLaw, DEFAULT_MC_SEED};
use jumpact::{estimate, simulate_replication, Error, Result, VarianceSource};

use crate::{Command, EstimatorFlags, VarianceArg};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            config,
            out,
            seed,
            manifest,
        } => {
            let cfg = load(config.as_deref())?;
            let seed = seed.unwrap_or(cfg.study.seed);
            let manifest = manifest.unwrap_or_else(|| out.with_extension("manifest.ini"));
            simulate(&cfg, seed, &out, &manifest)
        }
        Command::Estimate {
            input,
            config,
            flags,
            true_beta,
            csv_out,
            manifest,
        } => {
            let mut cfg = load(config.as_deref())?;
            apply_flags(&mut cfg, &flags);
            estimate_cmd(
                &cfg,
                &input,
                true_beta,
                csv_out.as_deref(),
                manifest.as_deref(),
            )
        }
        Command::McTable {
            config,
            out_dir,
            svg,
            reps,
            seed,
            workers,
        } => {
            let mut cfg = load(config.as_deref())?;
            if let Some(r) = reps {
                cfg.study.reps = r;
            }
            if let Some(s) = seed {
                cfg.study.seed = s;
            }
            mc_table(&cfg, &out_dir, svg, workers)
        }
        Command::Constants {
            beta,
            p,
            scale,
            config,
            phi_rate,
            phi_floor,
            mc_size,
            seed,
            rho,
        } => {
            let mut phi = load(config.as_deref())?.scheme.phi;
            if phi_rate.is_some() || phi_floor.is_some() {
                phi = PhiSpec::truncated_exponential(
                    phi_rate.unwrap_or(1.0),
                    phi_floor.unwrap_or(0.1),
                )?;
            }
            print!("{}", constants(p, beta, scale, &phi, mc_size, seed, rho)?);
            Ok(())
        }
        Command::Replay { manifest, out_dir } => replay(&manifest, out_dir.as_deref()),
    }
}

fn load(path: Option<&Path>) -> Result<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::read)
}

fn apply_flags(cfg: &mut RunConfig, f: &EstimatorFlags) {
    let est = &mut cfg.estimator;
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut est.p, f.p);
    set(&mut est.rho, f.rho);
    set(&mut est.u_exponent, f.u_exponent);
    set(&mut est.u_scale, f.u_scale);
    set(&mut est.k_exponent, f.k_exponent);
    set(&mut est.r_exponent, f.r_exponent);
    est.debias |= f.debias;
    if let Some(m) = f.mc_size {
        est.mc_size = m;
    }
    match f.variance {
        Some(VarianceArg::Data) => est.variance_source = VarianceSource::DataDriven,
        Some(VarianceArg::KnownPhi) => {
            est.variance_source = VarianceSource::KnownPhi {
                phi: cfg.scheme.phi.clone(),
                seed: DEFAULT_MC_SEED,
            }
        }
        None => {}
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn simulate(cfg: &RunConfig, seed: u64, out: &Path, manifest: &Path) -> Result<()> {
    let start = Instant::now();
    let path = simulate_replication(&cfg.model, &cfg.scheme, seed)?;
    let ticks = TickSeries::new(
        path.observed_times().to_vec(),
        path.observed_values().to_vec(),
        format!("simulate seed {seed}"),
    )?;
    ticks.write(out)?;

    let mut m = RunManifest::new("simulate", seed, cfg.clone());
    m.outputs.push(("ticks".into(), path_str(out)));
    m.wall_clock_secs = start.elapsed().as_secs_f64();
    m.write(manifest)?;
    println!(
        "wrote {} observations to {}",
        path.times.n_obs,
        out.display()
    );
    Ok(())
}

fn estimate_cmd(
    cfg: &RunConfig,
    input: &Path,
    true_beta: Option<f64>,
    csv_out: Option<&Path>,
    manifest: Option<&Path>,
) -> Result<()> {
    let start = Instant::now();
    let ticks = TickSeries::read(input)?;
    let report = estimate(&ticks.times, &ticks.prices, &cfg.estimator, true_beta)?;
    print!("{}", report.to_record());
    if let Some(p) = csv_out {
        write(
            p,
            &format!("{REPORT_CSV_HEADER}\n{}\n", report.to_csv_row()),
        )?;
    }
    if let Some(mpath) = manifest {
        let mut m = RunManifest::new("estimate", 0, cfg.clone());
        m.args.push(("input".into(), path_str(input)));
        if let Some(b) = true_beta {
            m.args.push(("true_beta".into(), fmt_machine(b)));
        }
        if let Some(p) = csv_out {
            m.outputs.push(("csv".into(), path_str(p)));
        }
        m.wall_clock_secs = start.elapsed().as_secs_f64();
        m.write(mpath)?;
    }
    Ok(())
}

fn mc_table(cfg: &RunConfig, out_dir: &Path, svg: bool, workers: Option<usize>) -> Result<()> {
    let start = Instant::now();
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let mut study = cfg.study_config();
    if let Some(w) = workers {
        study.workers = w;
    }
    let cells = run_study(&study)?;

    let mut m = RunManifest::new("mc-table", cfg.study.seed, cfg.clone());
    m.args.push(("svg".into(), svg.to_string()));
    let table = out_dir.join("study.csv");
    write(
        &table,
        &study_csv(&cells.iter().map(|c| c.row.clone()).collect::<Vec<_>>()),
    )?;
    m.outputs.push(("study".into(), path_str(&table)));

    println!(
        "{:>5} {:>5} {:>7} {:>8} {:>9} {:>9} {:>6} {:>9}",
        "beta", "rho", "1/delta", "mean", "emp_var", "theo_var", "failed", "mean_n"
    );
    for c in &cells {
        println!("{}", c.row.to_table_line());
        let Some(qq) = &c.qq else { continue };
        let csv = out_dir.join(format!("qq_{}.csv", c.slug()));
        write(&csv, &qq.to_csv())?;
        m.outputs.push((format!("qq_{}", c.slug()), path_str(&csv)));
        if svg {
            let file = out_dir.join(format!("qq_{}.svg", c.slug()));
            write(&file, &qq_svg(&qq.pairs, &c.label()))?;
            m.outputs
                .push((format!("svg_{}", c.slug()), path_str(&file)));
        }
    }
    m.wall_clock_secs = start.elapsed().as_secs_f64();
    m.write(&out_dir.join("manifest.ini"))
}

fn constants(
    p: f64,
    beta: f64,
    scale: f64,
    phi: &PhiSpec,
    mc_size: usize,
    seed: u64,
    rho: Option<f64>,
) -> Result<String> {
    let law = StableLaw::new(beta, scale)?;
    let c = stable_constants(p, &law, phi, mc_size, seed)?;
    let mut s = String::new();
    let _ = writeln!(s, "a_beta = {}", fmt_machine(c.a_beta));
    let _ = writeln!(s, "mu_p_beta = {}", fmt_machine(c.mu_p_beta));
    let _ = writeln!(s, "kappa_p_beta = {}", fmt_machine(c.kappa_p_beta));
    let _ = writeln!(s, "kappa_beta_beta = {}", fmt_machine(c.kappa_beta_beta));
    let _ = writeln!(s, "c_p_beta = {}", fmt_machine(c.c_p_beta));
    if let Some(rho) = rho {
        let v = asymptotic_variance(beta, rho, c.kappa_beta_beta, c.c_p_beta)?;
        let _ = writeln!(s, "asymptotic_variance = {}", fmt_machine(v));
    }
    Ok(s)
}

/// Recorded path, or its file name inside `out_dir`.
fn relocate(recorded: &str, out_dir: Option<&Path>) -> PathBuf {
    let p = PathBuf::from(recorded);
    match (out_dir, p.file_name()) {
        (Some(dir), Some(name)) => dir.join(name),
        _ => p,
    }
}

fn replay(manifest: &Path, out_dir: Option<&Path>) -> Result<()> {
    let m = RunManifest::read(manifest)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    let missing = |what: &str| Error::Config {
        line: 0,
        key: what.to_string(),
        reason: format!("manifest of `{}` has no {what}", m.command),
    };
    match m.command.as_str() {
        "simulate" => {
            let out = relocate(m.output("ticks").ok_or_else(|| missing("ticks"))?, out_dir);
            simulate(&m.config, m.seed, &out, &out.with_extension("manifest.ini"))
        }
        "estimate" => {
            let input = PathBuf::from(m.arg("input").ok_or_else(|| missing("input"))?);
            let true_beta = m
                .arg("true_beta")
                .map(|v| {
                    v.parse::<f64>().map_err(|_| Error::Config {
                        line: 0,
                        key: "true_beta".into(),
                        reason: format!("cannot parse `{v}`"),
                    })
                })
                .transpose()?;
            let csv = m.output("csv").map(|p| relocate(p, out_dir));
            estimate_cmd(&m.config, &input, true_beta, csv.as_deref(), None)
        }
        "mc-table" => {
            let study = m.output("study").ok_or_else(|| missing("study"))?;
            let dir = match out_dir {
                Some(d) => d.to_path_buf(),
                None => Path::new(study)
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_default(),
            };
            mc_table(&m.config, &dir, m.arg("svg") == Some("true"), None)
        }
        other => Err(Error::Config {
            line: 0,
            key: "command".into(),
            reason: format!("cannot replay `{other}`"),
        }),
    }
}
