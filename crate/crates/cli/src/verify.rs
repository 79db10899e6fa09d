//! Invariant checks on a coupling fixture.

use anyhow::{bail, Context, Result};
use milac::beamopt::{
    optimize_milac_mc, optimize_milac_nomc, power_digital_matching, power_digital_nomatching, power_milac_mc,
    MisoChannel,
};
use milac::coupling::{matrix_from_csv, CouplingMatrix};
use milac::matrixkit::{c, identity, rel_frobenius, CMatrix, RMatrix};
use milac::montecarlo::{pipeline_power, sample_channel, trial_rng};
use milac::netmodels::{
    build_model, channel_milac_rx, channel_milac_tx, end_to_end_impedance_form, Architecture, MilacPorts,
    ScenarioSpec, Side,
};
use rand::Rng;

use crate::commands::array_coupling;
use crate::config::RunFile;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, residual: f64, tol: f64) -> Self {
        Check { name, pass: residual <= tol, detail: format!("max residual {residual:.2e} (tol {tol:.0e})") }
    }

    fn failed(name: &'static str, why: impl std::fmt::Display) -> Self {
        Check { name, pass: false, detail: why.to_string() }
    }
}

/// The fixture's impedance matrix and a label for it.
pub fn fixture(run: &RunFile) -> Result<(String, CMatrix)> {
    let z0 = run.z0();
    let n = run.array.n_t;
    Ok(match run.verify.fixture.as_str() {
        "default" => ("dipole array".into(), array_coupling(run)?.into_matrix()),
        "identity" => ("Z0 I".into(), identity(n) * c(z0, 0.0)),
        "asymmetric" => {
            if n < 2 {
                bail!("the asymmetric fixture needs array.n_t >= 2");
            }
            let mut z = array_coupling(run)?.into_matrix();
            let z01 = z[(0, 1)];
            z[(0, 1)] = z01 + c(0.1 * z01.norm() + 1.0, 0.0);
            ("dipole array with Z[1,2] != Z[2,1]".into(), z)
        }
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read fixture {path}"))?;
            let z = matrix_from_csv(&text).with_context(|| format!("fixture {path}"))?;
            if !z.is_square() || z.nrows() == 0 {
                bail!("fixture {path} is {}x{}, expected a nonempty square matrix", z.nrows(), z.ncols());
            }
            (path.to_string(), z)
        }
    })
}

fn random_susceptance<R: Rng>(rng: &mut R, n: usize) -> RMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| rng.random_range(-0.05..0.05));
    (&a + a.transpose()) * 0.5
}

/// Runs every check; each uses its own seeded streams.
pub fn run_checks(run: &RunFile, z: &CMatrix) -> Vec<Check> {
    let z0 = run.z0();
    let n = z.nrows();
    let count = run.verify.instances.max(1);
    let draw = |check: usize, k: usize| sample_channel(n, 1.0, &mut trial_rng(run.seed, check, k)).expect("rho = 1");
    let mut checks = Vec::new();

    // role swap: H_Tx^T must equal H_Rx of the mirrored scenario
    let mut worst = 0.0f64;
    let mut error = None;
    for k in 0..count {
        let spec = ScenarioSpec::new(Architecture::MilacTx, draw(0, k), z0).with_coupling_tx(z.clone());
        match (channel_milac_tx(&spec), channel_milac_rx(&spec.swapped())) {
            (Ok(tx), Ok(rx)) => worst = worst.max(rel_frobenius(&tx.transpose(), &rx)),
            (Err(e), _) | (_, Err(e)) => error = Some(e),
        }
    }
    checks.push(match error {
        Some(e) => Check::failed("reciprocity", e),
        None => Check::within("reciprocity", worst, 1e-12),
    });

    // admittance form against impedance form, all MiLAC architectures
    let mut rng = trial_rng(run.seed, 1, 0);
    let mut worst = 0.0f64;
    let mut error = None;
    for k in 0..count {
        let arch = [Architecture::MilacTx, Architecture::MilacRx, Architecture::MilacBoth][k % 3];
        let z_rt = CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let spec = ScenarioSpec::new(arch, z_rt, z0).with_coupling_tx(z.clone()).with_coupling_rx(z.clone());
        let y_f = MilacPorts::from_susceptance(&random_susceptance(&mut rng, 2 * n), Side::Tx);
        let y_g = MilacPorts::from_susceptance(&random_susceptance(&mut rng, 2 * n), Side::Rx);
        let result = (|| {
            let (y_f, y_g) = (y_f?, y_g?);
            let model = build_model(&spec, Some(&y_f), Some(&y_g))?;
            let imp = end_to_end_impedance_form(&spec, Some(&y_f.impedance()?), Some(&y_g.impedance()?))?;
            Ok::<f64, milac::Error>(rel_frobenius(&model.end_to_end(), &imp))
        })();
        match result {
            Ok(r) => worst = worst.max(r),
            Err(e) => error = Some(e),
        }
    }
    checks.push(match error {
        Some(e) => Check::failed("dual form", e),
        None => Check::within("dual form", worst, 1e-10),
    });

    // Y Re{Y}^-1 Y^H = Re{Z}^-1
    checks.push(match yyy_residual(z) {
        Some(r) => Check::within("YYY identity", r, 1e-10),
        None => Check::failed("YYY identity", "Z or Re{Y} is singular"),
    });

    // everything below needs a valid coupling matrix
    let coupling = match CouplingMatrix::from_matrix(z.clone(), z0) {
        Ok(cm) => cm,
        Err(e) => {
            for name in ["unitarity", "bound attainment", "trace ratio", "matching equals MiLAC", "MiLAC beats digital"] {
                checks.push(Check::failed(name, format!("fixture rejected as coupling matrix: {e}")));
            }
            return checks;
        }
    };
    let channels: Vec<MisoChannel> = (0..count)
        .map(|k| MisoChannel::new(draw(2, k), Some(coupling.clone()), 1.0, 1.0, z0).expect("valid channel"))
        .collect();

    let (mut theta, mut imag, mut attain) = (0.0f64, 0.0f64, 0.0f64);
    let mut error = None;
    for ch in &channels {
        match (optimize_milac_mc(ch), optimize_milac_nomc(ch)) {
            (Ok(aware), Ok(unaware)) => {
                for d in [&aware, &unaware] {
                    theta = theta.max(d.diagnostics.theta.unitary).max(d.diagnostics.theta.symmetry);
                    imag = imag.max(d.diagnostics.b_bar_imag_residue);
                }
                match (pipeline_power(&aware, ch), power_milac_mc(ch)) {
                    (Ok(p), Ok(b)) => attain = attain.max((p - b).abs() / b),
                    (Err(e), _) | (_, Err(e)) => error = Some(e),
                }
            }
            (Err(e), _) | (_, Err(e)) => error = Some(e),
        }
    }
    if let Some(e) = error {
        checks.push(Check::failed("unitarity", &e));
        checks.push(Check::failed("bound attainment", e));
    } else {
        checks.push(Check {
            name: "unitarity",
            pass: theta <= 1e-10 && imag <= 1e-9,
            detail: format!("Theta residual {theta:.2e} (tol 1e-10), B_bar imaginary residue {imag:.2e} (tol 1e-9)"),
        });
        checks.push(Check::within("bound attainment", attain, 1e-8));
    }

    checks.push(match coupling.trace_ratio() {
        Ok(ratio) => Check {
            name: "trace ratio",
            pass: ratio >= 1.0 - 1e-12,
            detail: format!("Tr(Re{{Z}}^-1)/(Y0 N_T) = {ratio:.6} (must be >= 1)"),
        },
        Err(e) => Check::failed("trace ratio", e),
    });

    let mut matching_gap = 0.0f64;
    let mut violations = 0;
    let mut equality = 0.0f64;
    let mut error = None;
    for ch in &channels {
        match (power_milac_mc(ch), power_digital_matching(ch), power_digital_nomatching(ch)) {
            (Ok(mc), Ok(mn), Ok(dig)) => {
                matching_gap = matching_gap.max((mc - mn).abs() / mc);
                if dig > mc * (1.0 + 1e-12) {
                    violations += 1;
                }
                equality = equality.max((mc - dig).abs() / mc);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => error = Some(e),
        }
    }
    if let Some(e) = error {
        checks.push(Check::failed("matching equals MiLAC", &e));
        checks.push(Check::failed("MiLAC beats digital", e));
        return checks;
    }
    checks.push(Check::within("matching equals MiLAC", matching_gap, 1e-12));
    let uncoupled = *z == identity(n) * c(z0, 0.0);
    checks.push(if uncoupled {
        Check {
            name: "MiLAC beats digital",
            pass: equality <= 1e-12,
            detail: format!("equality branch (Z = Z0 I): max relative difference {equality:.2e} (tol 1e-12)"),
        }
    } else {
        Check {
            name: "MiLAC beats digital",
            pass: violations == 0,
            detail: format!("{violations} of {count} channels with digital above MiLAC"),
        }
    });
    checks
}

fn yyy_residual(z: &CMatrix) -> Option<f64> {
    let y = z.clone().try_inverse()?;
    let re_y_inv = y.map(|v| c(v.re, 0.0)).try_inverse()?;
    let re_z_inv = z.map(|v| c(v.re, 0.0)).try_inverse()?;
    Some(rel_frobenius(&(&y * re_y_inv * y.adjoint()), &re_z_inv))
}

/// Prints one line per check; returns whether all passed.
pub fn cmd_verify(run: &RunFile) -> Result<bool> {
    let (label, z) = fixture(run)?;
    println!("fixture: {label} ({0}x{0}), {1} instances per check", z.nrows(), run.verify.instances.max(1));
    let checks = run_checks(run, &z);
    for check in &checks {
        println!("{} {:<18} {}", if check.pass { "PASS" } else { "FAIL" }, check.name, check.detail);
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("verify: {passed}/{} checks passed", checks.len());
    Ok(passed == checks.len())
}
