//! Batch front end for the Jacobi spectral calculus library: evaluation,
//! kernels, transforms, square functions, norms, the equivalence harnesses,
//! and the acceptance selftest. Outputs are CSV/JSON with a metadata header
//! and are byte-identical for a fixed configuration and seed.

mod config;
mod output;

use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};

use jacobi_spectral::jacobi::{coefficients, eval_phi, synthesize, SpectralFunction};
use jacobi_spectral::multiplier::{self, MultiplierSpec};
use jacobi_spectral::paley::{build_bump, g_fractional, g_function, j_max_for, TimeGrid};
use jacobi_spectral::quad::{build_quadrature, GridFunction};
use jacobi_spectral::selfcheck::{run_all, SelfCheckConfig};
use jacobi_spectral::semigroup::{
    heat_kernel, poisson_kernel_series, poisson_kernel_subordinated, KernelMatrix,
};
use jacobi_spectral::spaces::{
    block_norm, potential_norm, sobolev_norm, square_function_norm, verify_theorem1,
    verify_theorem2, verify_theorem3, verify_theorem_z, HarnessConfig, TestSuite,
};
use jacobi_spectral::JacobiParams;

use config::{ConfigMerge, EffectiveConfig, FileConfig};
use output::{num, Artifact, Csv};

#[derive(Parser)]
#[command(name = "jspec", version, about = "Jacobi spectral calculus workbench")]
struct Cli {
    /// JSON configuration file; flags override file values
    #[arg(long, global = true)]
    config: Option<String>,

    /// Worker threads (falls back to the JS_THREADS variable, then all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Exponent preset: const:<p>, two:<l>:<r>[:<split>], sin, ramp, logsmooth
    #[arg(long = "p")]
    exponent: Option<String>,
    /// Quadrature order (total nodes, rounded up to full panels)
    #[arg(long, alias = "grid")]
    order: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path base ("-" for stdout)
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate eigenfunctions, eigenvalues, or a heat-kernel slice
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluate phi_n on the grid
        #[arg(long)]
        phi: Option<usize>,
        /// Tabulate eigenvalues up to this index
        #[arg(long)]
        lambdas: Option<usize>,
        /// Assemble the heat kernel at this time
        #[arg(long)]
        heat_kernel: Option<f64>,
    },
    /// Expansion coefficients of a preset function
    Coeffs {
        #[command(flatten)]
        common: CommonArgs,
        /// Function preset: mode:<n>, decay:<power>, random
        #[arg(long, default_value = "decay:1")]
        preset: String,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
    /// Assemble a kernel matrix
    Kernel {
        #[command(flatten)]
        common: CommonArgs,
        /// heat | poisson-series | poisson-sub
        #[arg(long, default_value = "heat")]
        kind: String,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },
    /// Apply the order-k Riesz transform to a preset function
    Riesz {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "decay:1")]
        preset: String,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
    /// Evaluate a named multiplier on the spectrum, or its smoothness table
    Multiplier {
        #[command(flatten)]
        common: CommonArgs,
        /// eqT10 | Y | Meps | Heps | meps_ell | M_ell | R_ell | Rfrac | imaginary_power
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 12)]
        ell: usize,
        /// Largest mode index to evaluate at
        #[arg(long, default_value_t = 40)]
        spectrum_max: usize,
        /// Emit the per-order smoothness sup table up to this order instead
        #[arg(long)]
        mihlin: Option<usize>,
    },
    /// Square functions on the grid
    Gfunc {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "mode:3")]
        preset: String,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        /// Use the fractional variant (otherwise integer order k)
        #[arg(long)]
        fractional: bool,
    },
    /// The four norms over the seeded suite
    Norms {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Run an equivalence or inversion harness
    Verify {
        /// theorem1 | theoremZ | theorem2 | theorem3
        target: String,
        #[command(flatten)]
        common: CommonArgs,
        /// Reduced degrees and orders
        #[arg(long)]
        quick: bool,
    },
    /// Run the acceptance criteria and print a pass/fail matrix
    Selftest {
        #[command(flatten)]
        common: CommonArgs,
        /// Reduced orders and suite sizes
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = config::resolve_threads(cli.threads);
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn merge(cli_config: &Option<String>) -> Result<ConfigMerge> {
    let file = match cli_config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    Ok(ConfigMerge { file })
}

fn effective(merge: &ConfigMerge, c: &CommonArgs) -> EffectiveConfig {
    merge.effective(
        c.alpha,
        c.beta,
        c.gamma,
        c.k,
        c.r,
        c.exponent.clone(),
        c.order,
        c.seed,
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    let merged = merge(&cli.config)?;
    match cli.command {
        Command::Eval {
            common,
            phi,
            lambdas,
            heat_kernel: hk,
        } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_eval(&cfg, phi, lambdas, hk, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeffs {
            common,
            preset,
            n_max,
        } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_coeffs(&cfg, &preset, n_max, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel { common, kind, t } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_kernel(&cfg, &kind, t, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Riesz {
            common,
            preset,
            n_max,
        } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_riesz(&cfg, &preset, n_max, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Multiplier {
            common,
            name,
            eps,
            ell,
            spectrum_max,
            mihlin,
        } => {
            let cfg = effective(&merged, &common);
            let artifacts =
                cmd_multiplier(&cfg, &name, eps, ell, spectrum_max, mihlin, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gfunc {
            common,
            preset,
            n_max,
            fractional,
        } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_gfunc(&cfg, &preset, n_max, fractional, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Norms { common, degree } => {
            let cfg = effective(&merged, &common);
            let artifacts = cmd_norms(&cfg, degree, &common.out)?;
            output::write_all(&artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            target,
            common,
            quick,
        } => {
            let cfg = effective(&merged, &common);
            cmd_verify(&cfg, &target, quick, &common.out)
        }
        Command::Selftest { common, quick } => {
            let cfg = effective(&merged, &common);
            cmd_selftest(&cfg, quick, &common.out)
        }
    }
}

/// Parses function presets: `mode:<n>`, `decay:<power>`, `random`.
fn parse_preset(
    cfg: &EffectiveConfig,
    params: JacobiParams,
    preset: &str,
    n_max: usize,
) -> Result<SpectralFunction> {
    let parts: Vec<&str> = preset.split(':').collect();
    match parts[0] {
        "mode" => {
            let n: usize = parts
                .get(1)
                .ok_or_else(|| anyhow!("mode preset needs an index, e.g. mode:3"))?
                .parse()?;
            Ok(SpectralFunction::mode(params, n, 1.0))
        }
        "decay" => {
            let power: f64 = parts.get(1).map_or(Ok(1.0), |s| s.parse())?;
            let coeffs: Vec<f64> = (0..=n_max)
                .map(|n| params.lambda(n).max(1e-6).powf(-power))
                .collect();
            Ok(SpectralFunction::from_real(params, &coeffs))
        }
        "random" => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
            let coeffs: Vec<f64> = (0..=n_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Ok(SpectralFunction::from_real(params, &coeffs))
        }
        other => bail!(
            "unknown function preset '{other}' (expected mode:<n>, decay:<power>, random)"
        ),
    }
}

fn cmd_eval(
    cfg: &EffectiveConfig,
    phi: Option<usize>,
    lambdas: Option<usize>,
    heat_t: Option<f64>,
    out: &str,
) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    if let Some(n) = phi {
        let quad = build_quadrature(cfg.order).map_err(|e| anyhow!("{e}"))?;
        let mut csv = Csv::new(cfg, &[("content", format!("phi_{n}"))], "theta,value");
        for &theta in quad.nodes() {
            let v = eval_phi(params, n, theta).map_err(|e| anyhow!("{e}"))?;
            csv.row(&[num(theta), num(v)]);
        }
        return Ok(vec![Artifact {
            path: path_for(out, "csv"),
            content: csv.finish(),
        }]);
    }
    if let Some(n_max) = lambdas {
        let mut csv = Csv::new(cfg, &[("content", "eigenvalues".into())], "n,lambda");
        for n in 0..=n_max {
            csv.row(&[n.to_string(), num(params.lambda(n))]);
        }
        return Ok(vec![Artifact {
            path: path_for(out, "csv"),
            content: csv.finish(),
        }]);
    }
    if let Some(t) = heat_t {
        return kernel_artifact(cfg, "heat", t, out);
    }
    bail!("eval needs one of --phi, --lambdas, --heat-kernel");
}

fn kernel_artifact(cfg: &EffectiveConfig, kind: &str, t: f64, out: &str) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    // kernel grids are dense matrices; default to a modest grid when the
    // configured order is the quadrature default
    let grid_order = if cfg.order > 256 { 48 } else { cfg.order };
    let quad = build_quadrature(grid_order).map_err(|e| anyhow!("{e}"))?;
    let kernel: KernelMatrix = match kind {
        "heat" => heat_kernel(params, t, &quad).map_err(|e| anyhow!("{e}"))?,
        "poisson-series" => poisson_kernel_series(params, t, &quad).map_err(|e| anyhow!("{e}"))?,
        "poisson-sub" => {
            poisson_kernel_subordinated(params, t, &quad).map_err(|e| anyhow!("{e}"))?
        }
        other => bail!("unknown kernel kind '{other}' (heat, poisson-series, poisson-sub)"),
    };
    let extra = vec![
        ("content", format!("kernel_{kind}")),
        ("t", num(t)),
        ("grid", quad.len().to_string()),
        ("symmetry_max_dev", num(kernel.symmetry_deviation())),
        ("truncation_modes", kernel.truncation_modes.to_string()),
        ("tail_bound", num(kernel.tail_bound)),
    ];
    let mut csv = Csv::new(cfg, &extra, "theta,phi,value");
    for (i, &ti) in quad.nodes().iter().enumerate() {
        for (j, &tj) in quad.nodes().iter().enumerate() {
            csv.row(&[num(ti), num(tj), num(kernel.values[(i, j)])]);
        }
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn cmd_kernel(cfg: &EffectiveConfig, kind: &str, t: f64, out: &str) -> Result<Vec<Artifact>> {
    kernel_artifact(cfg, kind, t, out)
}

fn cmd_coeffs(
    cfg: &EffectiveConfig,
    preset: &str,
    n_max: usize,
    out: &str,
) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    let f = parse_preset(cfg, params, preset, n_max)?;
    let quad = Arc::new(build_quadrature(cfg.order).map_err(|e| anyhow!("{e}"))?);
    // round-trip through the grid so the output reflects the quadrature path
    let grid = synthesize(&f, &quad);
    let c = coefficients(&grid, params, n_max).map_err(|e| anyhow!("{e}"))?;
    let mut csv = Csv::new(
        cfg,
        &[("content", format!("coefficients of {preset}"))],
        "n,re,im",
    );
    for n in 0..=n_max {
        csv.row(&[n.to_string(), num(c.coeff(n).re), num(c.coeff(n).im)]);
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn cmd_riesz(
    cfg: &EffectiveConfig,
    preset: &str,
    n_max: usize,
    out: &str,
) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    let f = parse_preset(cfg, params, preset, n_max)?;
    let g = multiplier::riesz(&f, cfg.k).map_err(|e| anyhow!("{e}"))?;
    let extra = vec![
        ("content", format!("riesz_k{} of {preset}", cfg.k)),
        (
            "output_system",
            format!("({}, {})", g.params().alpha(), g.params().beta()),
        ),
    ];
    let mut csv = Csv::new(cfg, &extra, "n,in_re,in_im,out_re,out_im");
    let deg = n_max.max(g.degree().unwrap_or(0));
    for n in 0..=deg {
        csv.row(&[
            n.to_string(),
            num(f.coeff(n).re),
            num(f.coeff(n).im),
            num(g.coeff(n).re),
            num(g.coeff(n).im),
        ]);
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn make_multiplier(
    cfg: &EffectiveConfig,
    params: JacobiParams,
    name: &str,
    eps: f64,
    ell: usize,
) -> Result<MultiplierSpec> {
    let bump = build_bump();
    let spec = match name {
        "eqT10" => multiplier::riesz_inversion(params, cfg.k).map_err(|e| anyhow!("{e}"))?,
        "Y" => multiplier::y_eps(eps, cfg.r),
        "Meps" => multiplier::m_eps(eps, cfg.r, cfg.gamma),
        "Heps" => multiplier::h_eps(eps, cfg.r, cfg.gamma).map_err(|e| anyhow!("{e}"))?,
        "meps_ell" => {
            // deterministic signs from the seed
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
            let signs: Vec<f64> = (0..=ell)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();
            multiplier::sign_window_sum(cfg.gamma, signs, bump)
        }
        "M_ell" => multiplier::window_sum(cfg.gamma, ell, bump),
        "R_ell" => multiplier::window_sum_reciprocal(params, cfg.gamma, ell, bump)
            .map_err(|e| anyhow!("{e}"))?,
        "Rfrac" => multiplier::frac_ratio(cfg.gamma),
        "imaginary_power" => multiplier::imaginary_power(cfg.gamma),
        other => bail!(
            "unknown multiplier '{other}' (eqT10, Y, Meps, Heps, meps_ell, M_ell, R_ell, Rfrac, imaginary_power)"
        ),
    };
    Ok(spec)
}

fn cmd_multiplier(
    cfg: &EffectiveConfig,
    name: &str,
    eps: f64,
    ell: usize,
    spectrum_max: usize,
    mihlin: Option<usize>,
    out: &str,
) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    let spec = make_multiplier(cfg, params, name, eps, ell)?;
    if let Some(ell_max) = mihlin {
        let sups = multiplier::mihlin_check(&spec, ell_max);
        let mut csv = Csv::new(
            cfg,
            &[("content", format!("mihlin sups of {name}"))],
            "order,sup",
        );
        for (l, s) in sups.iter().enumerate() {
            csv.row(&[l.to_string(), num(*s)]);
        }
        return Ok(vec![Artifact {
            path: path_for(out, "csv"),
            content: csv.finish(),
        }]);
    }
    let mut csv = Csv::new(
        cfg,
        &[("content", format!("multiplier {name} on the spectrum"))],
        "n,lambda,re,im",
    );
    for n in 0..=spectrum_max {
        let lambda = params.lambda(n);
        let v = spec.eval(lambda - spec.shift);
        csv.row(&[n.to_string(), num(lambda), num(v.re), num(v.im)]);
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn cmd_gfunc(
    cfg: &EffectiveConfig,
    preset: &str,
    n_max: usize,
    fractional: bool,
    out: &str,
) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    let f = parse_preset(cfg, params, preset, n_max)?;
    let quad = Arc::new(build_quadrature(cfg.order).map_err(|e| anyhow!("{e}"))?);
    let tg = TimeGrid::for_function(&f)
        .ok_or_else(|| anyhow!("no positive eigenvalue active; the square function vanishes"))?;
    let g: GridFunction = if fractional {
        g_fractional(&f, cfg.gamma, &tg, &quad).map_err(|e| anyhow!("{e}"))?
    } else {
        g_function(&f, cfg.gamma, cfg.k, &tg, &quad).map_err(|e| anyhow!("{e}"))?
    };
    let label = if fractional {
        format!("g^{} of {preset}", cfg.gamma)
    } else {
        format!("g^({},{}) of {preset}", cfg.gamma, cfg.k)
    };
    let mut csv = Csv::new(cfg, &[("content", label)], "theta,value");
    for (i, &theta) in quad.nodes().iter().enumerate() {
        csv.row(&[num(theta), num(g.values[i].re)]);
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn cmd_norms(cfg: &EffectiveConfig, degree: usize, out: &str) -> Result<Vec<Artifact>> {
    let params = cfg.params()?;
    let (p, p_name) = cfg.exponent_function()?;
    let quad = Arc::new(build_quadrature(cfg.order).map_err(|e| anyhow!("{e}"))?);
    let suite = TestSuite::build(params, &[degree], cfg.seed);
    let bump = build_bump();
    let gamma = cfg.gamma;
    let k = cfg.k.max(1);
    if !(gamma > 0.0 && gamma < k as f64) {
        bail!("norms needs 0 < gamma < k (got gamma = {gamma}, k = {k})");
    }
    let mut csv = Csv::new(
        cfg,
        &[("content", format!("norms over suite, p = {p_name}"))],
        "function_id,w,h,t,f",
    );
    for member in suite.members_for_degree(degree) {
        let w = sobolev_norm(&member.f, k, &p, &quad).map_err(|e| anyhow!("{e}"))?;
        let h = potential_norm(&member.f, 0.5 * gamma, &p, &quad).map_err(|e| anyhow!("{e}"))?;
        let t = square_function_norm(&member.f, gamma, k, &p, &quad).map_err(|e| anyhow!("{e}"))?;
        let j_max = j_max_for(&member.f);
        let fb =
            block_norm(&member.f, gamma, &p, &quad, j_max, &bump).map_err(|e| anyhow!("{e}"))?;
        csv.row(&[member.id.clone(), num(w), num(h), num(t), num(fb)]);
    }
    Ok(vec![Artifact {
        path: path_for(out, "csv"),
        content: csv.finish(),
    }])
}

fn cmd_verify(cfg: &EffectiveConfig, target: &str, quick: bool, out: &str) -> Result<ExitCode> {
    let params = cfg.params()?;
    let (p, p_name) = cfg.exponent_function()?;
    let mut harness = HarnessConfig::new(params, p, &p_name);
    harness.seed = cfg.seed;
    if quick {
        harness = harness.quick();
    }
    let (csv, json, identities_pass, windows_pass) = match target {
        "theorem1" => {
            let report = verify_theorem1(&harness, cfg.k).map_err(|e| anyhow!("{e}"))?;
            (
                report.to_csv(),
                report.to_json(),
                report.identities_pass,
                report.windows_pass,
            )
        }
        "theorem2" => {
            let report = verify_theorem2(&harness, cfg.gamma, cfg.k).map_err(|e| anyhow!("{e}"))?;
            (
                report.to_csv(),
                report.to_json(),
                report.identities_pass,
                report.windows_pass,
            )
        }
        "theorem3" => {
            let report = verify_theorem3(&harness, cfg.gamma).map_err(|e| anyhow!("{e}"))?;
            (
                report.to_csv(),
                report.to_json(),
                report.identities_pass,
                report.windows_pass,
            )
        }
        "theoremZ" => {
            let degrees: Vec<usize> = if quick { vec![8] } else { vec![8, 16, 32] };
            let report = verify_theorem_z(params, cfg.gamma, cfg.r, &degrees, cfg.seed)
                .map_err(|e| anyhow!("{e}"))?;
            let mut csv = Csv::new(
                cfg,
                &[("content", "inversion residuals".into())],
                "function_id,spectral_residual,extrapolated_residual",
            );
            for row in &report.rows {
                csv.row(&[
                    row.function_id.clone(),
                    num(row.spectral_residual),
                    num(row.extrapolated_residual),
                ]);
            }
            let json = serde_json::to_string_pretty(&report)?;
            return finish_verify(target, csv.finish(), json, report.pass, true, out, cfg);
        }
        other => bail!("unknown verify target '{other}' (theorem1, theoremZ, theorem2, theorem3)"),
    };
    let mut prefixed = output::metadata_header(cfg, &[("target", target.to_string())]);
    prefixed.push_str(&csv);
    finish_verify(target, prefixed, json, identities_pass, windows_pass, out, cfg)
}

fn finish_verify(
    target: &str,
    csv: String,
    json: String,
    identities_pass: bool,
    windows_pass: bool,
    out: &str,
    _cfg: &EffectiveConfig,
) -> Result<ExitCode> {
    let artifacts = vec![
        Artifact {
            path: path_for(out, "csv"),
            content: csv,
        },
        Artifact {
            path: path_for(out, "json"),
            content: json,
        },
    ];
    output::write_all(&artifacts)?;
    if identities_pass && windows_pass {
        println!("verify {target}: all identities and ratio windows pass");
        Ok(ExitCode::SUCCESS)
    } else if !identities_pass {
        eprintln!("verify {target}: identity failure (bug)");
        Ok(ExitCode::from(1))
    } else {
        eprintln!("verify {target}: ratio-window breach (flag for review)");
        Ok(ExitCode::from(2))
    }
}

fn cmd_selftest(cfg: &EffectiveConfig, quick: bool, out: &str) -> Result<ExitCode> {
    let check = SelfCheckConfig {
        quick,
        seed: cfg.seed,
    };
    let results = run_all(&check);
    let mut all_pass = true;
    let mut csv = Csv::new(
        cfg,
        &[("content", "selftest matrix".into())],
        "index,name,pass,observed,tolerance,detail",
    );
    for r in &results {
        println!("{}", r.line());
        all_pass &= r.pass;
        csv.row(&[
            r.index.to_string(),
            r.name.clone(),
            r.pass.to_string(),
            num(r.observed),
            num(r.tolerance),
            format!("\"{}\"", r.detail.replace('"', "'")),
        ]);
    }
    if out != "-" {
        output::write_all(&[Artifact {
            path: path_for(out, "csv"),
            content: csv.finish(),
        }])?;
    }
    println!(
        "selftest: {}",
        if all_pass {
            "all criteria pass"
        } else {
            "FAILURES present"
        }
    );
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// `-` stays stdout; otherwise append the extension unless already present.
fn path_for(base: &str, ext: &str) -> String {
    if base == "-" {
        "-".into()
    } else if base.ends_with(&format!(".{ext}")) {
        base.to_string()
    } else {
        format!("{base}.{ext}")
    }
}
