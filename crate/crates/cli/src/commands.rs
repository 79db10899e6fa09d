use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use milac::beamopt::{
    expected_power_milac_mc, optimize_milac_mc, optimize_milac_nomc, power_milac_mc, power_milac_nomc, received_power, to_db, MilacDesign,
    MisoChannel,
};
use milac::coupling::{build_coupling_matrix, build_geometry, CouplingMatrix, PhysicalConstants, Z0};
use milac::montecarlo::{config_hash, grid_columns, run_experiment, sample_channel, trial_rng};

use crate::config::{OptimizeMode, RunFile};
use crate::output::{provenance_line, OutputDir};

pub fn array_coupling(run: &RunFile) -> Result<CouplingMatrix> {
    let a = &run.array;
    let geom = build_geometry(a.n_t, grid_columns(a.n_t, a.n_x), a.spacing, a.frequency_hz, a.dipole_length)
        .context("invalid array geometry (check array.n_t, array.n_x, array.spacing)")?;
    build_coupling_matrix(&geom, &PhysicalConstants::for_geometry(&geom), a.quad_order)
        .context("coupling matrix construction failed")
}

pub fn cmd_coupling(run: &RunFile, out: &Path) -> Result<()> {
    let coupling = array_coupling(run)?;
    let ratio = coupling.trace_ratio().context("trace of Re{Z}^-1")?;
    let hash = config_hash(run);
    let mut dir = OutputDir::create(out)?;
    let path = dir.write("coupling.csv", &(provenance_line(&hash, run.seed) + &coupling.to_csv()))?;
    dir.finish("coupling", hash, run)?;
    println!(
        "coupling: N_T={} spacing={} lambda -> {} ({0}x{0})",
        run.array.n_t,
        run.array.spacing,
        path.display()
    );
    println!("trace ratio Tr(Re{{Z}}^-1)/(Y0 N_T) = {ratio:.6}");
    Ok(())
}

struct OptimizeOutcome {
    design: MilacDesign,
    /// Power the design delivers on the array it is deployed on.
    achieved: f64,
    /// Best achievable on that array.
    bound: f64,
    no_coupling_reference: f64,
}

fn optimize(run: &RunFile) -> Result<OptimizeOutcome> {
    let n_t = run.array.n_t;
    let z_rt = sample_channel(n_t, run.channel.rho, &mut trial_rng(run.seed, 0, 0)).context("stage channel")?;
    let coupling = match run.optimize.mode {
        OptimizeMode::NoCoupling => None,
        _ => Some(array_coupling(run).context("stage coupling")?),
    };
    let ch = MisoChannel::new(z_rt, coupling, run.channel.p_t, run.channel.rho, run.z0()).context("stage channel")?;
    let no_coupling_reference = power_milac_nomc(&ch);
    Ok(match run.optimize.mode {
        OptimizeMode::Aware | OptimizeMode::NoCoupling => {
            let design = optimize_milac_mc(&ch).context("stage design")?;
            let bound = power_milac_mc(&ch).context("stage bound")?;
            OptimizeOutcome { achieved: design.achieved_power, bound, design, no_coupling_reference }
        }
        OptimizeMode::Unaware => {
            let design = optimize_milac_nomc(&ch).context("stage design")?;
            let achieved = received_power(&design.b, &ch).context("stage evaluation on the coupled array")?;
            let bound = power_milac_mc(&ch).context("stage bound")?;
            OptimizeOutcome { design, achieved, bound, no_coupling_reference }
        }
    })
}

pub fn cmd_optimize(run: &RunFile, out: &Path) -> Result<()> {
    let r = optimize(run)?;
    let d = &r.design.diagnostics;
    let mut report = String::new();
    let mode = serde_json::to_value(run.optimize.mode).expect("mode serializes");
    let _ = writeln!(report, "mode = {}", mode.as_str().unwrap_or_default());
    let _ = writeln!(report, "n_t = {}", run.array.n_t);
    if run.optimize.mode != OptimizeMode::NoCoupling {
        let _ = writeln!(report, "spacing_over_lambda = {}", run.array.spacing);
    }
    let _ = writeln!(report, "achieved_power_W = {:e}", r.achieved);
    let _ = writeln!(report, "bound_W = {:e}", r.bound);
    let _ = writeln!(report, "relative_gap = {:e}", (r.bound - r.achieved) / r.bound);
    let _ = writeln!(report, "loss_dB = {:.6}", to_db(r.bound, r.achieved));
    let _ = writeln!(report, "power_vs_no_coupling_dB = {:.6}", to_db(r.achieved, r.no_coupling_reference));
    let _ = writeln!(report, "theta_unitarity_residual = {:e}", d.theta.unitary);
    let _ = writeln!(report, "theta_symmetry_residual = {:e}", d.theta.symmetry);
    let _ = writeln!(report, "b_bar_imag_residue = {:e}", d.b_bar_imag_residue);
    let _ = writeln!(report, "b_imag_residue = {:e}", d.b_imag_residue);
    let _ = writeln!(report, "cayley_rcond = {:e}", d.cayley_rcond);
    let _ = writeln!(report, "phase_retries = {}", d.phase_retries);

    let hash = config_hash(run);
    let head = provenance_line(&hash, run.seed);
    let mut dir = OutputDir::create(out)?;
    dir.write("susceptance.csv", &(head.clone() + &r.design.susceptance_csv()))?;
    dir.write("report.txt", &(head + &report))?;
    dir.finish("optimize", hash, run)?;
    print!("{report}");
    Ok(())
}

pub fn cmd_experiment(run: &RunFile, out: &Path) -> Result<()> {
    let cfg = run.experiment_config();
    let stats = run_experiment(&cfg).context("experiment")?;
    let mut dir = OutputDir::create(out)?;
    let name = format!("{}.csv", cfg.experiment_kind.name());
    let path = dir.write(&name, &stats.to_csv())?;
    dir.finish("experiment", cfg.hash(), run)?;

    println!(
        "{:>5} {:>8} {:<20} {:>12} {:>12} {:>12} {:>8}",
        "n_t", "d/lambda", "strategy", "mean_W", "stderr_W", "theory_W", "dB_ref"
    );
    let mut failures = 0;
    for p in &stats.points {
        if let Some(e) = &p.error {
            failures += 1;
            eprintln!("warning: point n_t={} spacing={} failed: {e}", p.n_t, p.spacing);
            continue;
        }
        let theory = p.theory.map_or_else(|| "-".to_string(), |t| format!("{t:.6e}"));
        // reference: no-coupling MiLAC expectation for the same N_T
        let reference = expected_power_milac_mc(&CouplingMatrix::uncoupled(p.n_t, Z0), cfg.p_t, cfg.rho)?;
        println!(
            "{:>5} {:>8.4} {:<20} {:>12.6e} {:>12.3e} {:>12} {:>8.3}",
            p.n_t,
            p.spacing,
            p.strategy,
            p.mean,
            p.stderr,
            theory,
            to_db(p.mean, reference)
        );
    }
    println!("wrote {}", path.display());
    if failures == stats.points.len() {
        bail!("every point of the sweep failed");
    }
    Ok(())
}
