//! Received-power-optimal MiLAC design for a MISO link (one RF chain, one
//! matched receive antenna), with and without transmit mutual coupling, and
//! the digital baselines it is compared against.

use nalgebra::Cholesky;

use crate::coupling::{trace_real_inverse, CouplingMatrix};
use crate::error::{Error, Result};
use crate::matrixkit::{
    block_diag, c, factor_checked, identity, imag_part, is_unitary_symmetric, matmul, real_part,
    right_singular_frame, symmetric_power, to_complex, CMatrix, HermitianExponent, RMatrix, UnitarySymmetryResiduals,
};
use crate::netmodels::{
    channel_milac_tx, channel_milac_tx_loaded, end_to_end_impedance_form, precoder_milac_tx, precoder_milac_tx_loaded, Architecture, ArrayLoad,
    MilacPorts, ScenarioSpec, Side,
};

/// Relative tolerance between the pipeline power and the closed-form bound.
pub const BOUND_TOL: f64 = 1e-8;

/// `I + Theta` is treated as singular below this reciprocal condition number.
pub const CAYLEY_RCOND: f64 = 1e-12;

/// Phase rotations of `v` tried before giving up on a singular `I + Theta`.
pub const MAX_PHASE_RETRIES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct MisoChannel {
    /// Transmission impedance row `z_RT`, Ohm.
    pub z_rt: CMatrix,
    /// Transmit array impedance; `None` means `Z0 I`.
    pub coupling: Option<CouplingMatrix>,
    /// Transmit power, W.
    pub p_t: f64,
    /// Path gain, used by the expectation formulas only.
    pub rho: f64,
    pub z0: f64,
}

impl MisoChannel {
    pub fn new(z_rt: CMatrix, coupling: Option<CouplingMatrix>, p_t: f64, rho: f64, z0: f64) -> Result<Self> {
        if z_rt.nrows() != 1 || z_rt.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "z_RT must be a nonempty row, got {}x{}",
                z_rt.nrows(),
                z_rt.ncols()
            )));
        }
        crate::matrixkit::ensure_finite(&z_rt, "z_RT")?;
        if !(p_t > 0.0 && p_t.is_finite()) {
            return Err(Error::InvalidParameter(format!("transmit power must be positive, got {p_t}")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("path gain must be positive, got {rho}")));
        }
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(Error::InvalidParameter(format!("reference impedance must be positive, got {z0}")));
        }
        if let Some(m) = &coupling {
            if m.dim() != z_rt.ncols() {
                return Err(Error::DimensionMismatch(format!(
                    "coupling is {0}x{0} but z_RT has {1} entries",
                    m.dim(),
                    z_rt.ncols()
                )));
            }
            if m.z0() != z0 {
                return Err(Error::InvalidParameter(format!(
                    "coupling reference impedance {} differs from {z0}",
                    m.z0()
                )));
            }
        }
        Ok(MisoChannel { z_rt, coupling, p_t, rho, z0 })
    }

    pub fn n_t(&self) -> usize {
        self.z_rt.ncols()
    }

    pub fn y0(&self) -> f64 {
        1.0 / self.z0
    }

    /// Same channel seen by a designer who ignores coupling.
    pub fn without_coupling(&self) -> Self {
        MisoChannel { coupling: None, ..self.clone() }
    }

    fn coupling_matrix(&self) -> CMatrix {
        match &self.coupling {
            Some(m) => m.matrix().clone(),
            None => identity(self.n_t()) * c(self.z0, 0.0),
        }
    }

    fn scenario(&self) -> ScenarioSpec {
        let spec = ScenarioSpec::new(Architecture::MilacTx, self.z_rt.clone(), self.z0).with_tx_chains(1);
        match &self.coupling {
            Some(m) => spec.with_coupling_tx(m.matrix().clone()),
            None => spec,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DesignDiagnostics {
    /// `||Im B_bar||_F / ||B_bar||_F` before the imaginary part was dropped.
    pub b_bar_imag_residue: f64,
    /// Same ratio for `B`.
    pub b_imag_residue: f64,
    /// `||B - B^T||_F / ||B||_F` before symmetrization.
    pub b_asymmetry: f64,
    pub theta: UnitarySymmetryResiduals,
    pub cayley_rcond: f64,
    pub phase_retries: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilacDesign {
    /// Susceptance matrix, `(N_T + 1)` square, exactly symmetric.
    pub b: RMatrix,
    /// The unitary symmetric matrix the design was derived from.
    pub theta_bar: CMatrix,
    /// `P_T |h f(B)|^2` evaluated through the network model, W.
    pub achieved_power: f64,
    /// Closed-form optimum the design is checked against, W.
    pub bound: f64,
    pub diagnostics: DesignDiagnostics,
}

impl MilacDesign {
    /// `Y = jB`.
    pub fn admittance(&self) -> CMatrix {
        to_complex(&self.b) * c(0.0, 1.0)
    }

    /// One matrix row per line, comma separated, Siemens.
    pub fn susceptance_csv(&self) -> String {
        let mut out = String::new();
        for row in self.b.row_iter() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// `Re{Z}`, symmetrized.
fn real_sym(z: &CMatrix) -> RMatrix {
    let re = real_part(z);
    (&re + re.transpose()) * 0.5
}

/// `Re{Z}^{-1/2}` for the transmit array.
fn real_inv_sqrt(z: &CMatrix) -> Result<RMatrix> {
    symmetric_power(&real_sym(z), HermitianExponent::NegHalf)
}

/// `Y_TT = Z_TT^{-1}`, symmetrized.
fn array_admittance(z: &CMatrix) -> Result<CMatrix> {
    let lu = factor_checked(z, crate::netmodels::SINGULAR_RCOND).map_err(|rcond| Error::SingularCoupling { rcond })?;
    let y = lu.solve(&identity(z.nrows()));
    Ok((&y + y.transpose()) * c(0.5, 0.0))
}

fn row_norm_sqr(r: &CMatrix) -> f64 {
    r.iter().map(|z| z.norm_sqr()).sum()
}

/// Unitary symmetric `[[0, v^T], [v, V V^T]]` with `v` rotated by `e^{j phi}`.
fn theta_from_frame(v: &CMatrix, v_perp: &CMatrix, phi: f64) -> CMatrix {
    let n = v.nrows();
    let v = v * c(phi.cos(), phi.sin());
    let mut theta = CMatrix::zeros(n + 1, n + 1);
    theta.view_mut((0, 1), (1, n)).copy_from(&v.transpose());
    theta.view_mut((1, 0), (n, 1)).copy_from(&v);
    theta.view_mut((1, 1), (n, n)).copy_from(&matmul(v_perp, &v_perp.transpose()));
    theta
}

fn relative_imag(m: &CMatrix) -> f64 {
    let scale = m.norm();
    if scale == 0.0 {
        0.0
    } else {
        imag_part(m).norm() / scale
    }
}

/// Factors of a coupled array that the design needs.
#[derive(Debug, Clone)]
struct ArrayFactors {
    /// `Y_TT = Z_TT^{-1}`.
    y_tt: CMatrix,
    /// `Re{Y_TT}^{-1/2}`.
    whiten: CMatrix,
    /// `Re{Y_hat}^{1/2}` and `Im{Y_hat}` with `Y_hat = blockdiag(Y0, Y_TT)`.
    re_half_hat: CMatrix,
    im_hat: CMatrix,
    /// `Re{Z_TT}^{-1/2}`, for the closed-form bound.
    z_inv_sqrt: CMatrix,
}

/// Coupling-dependent part of the design, computed once per array and
/// reused across channel draws.
#[derive(Debug, Clone)]
pub struct DesignContext {
    y0: f64,
    n_t: usize,
    /// `None` for a matched, uncoupled array, where every factor is a scaled
    /// identity.
    array: Option<ArrayFactors>,
    load: ArrayLoad,
}

fn design_scenario(n_t: usize, z0: f64, coupling: Option<&CouplingMatrix>) -> ScenarioSpec {
    let spec = ScenarioSpec::new(Architecture::MilacTx, CMatrix::zeros(1, n_t), z0).with_tx_chains(1);
    match coupling {
        Some(m) => spec.with_coupling_tx(m.matrix().clone()),
        None => spec,
    }
}

impl DesignContext {
    pub fn new(coupling: &CouplingMatrix) -> Result<Self> {
        let y0 = 1.0 / coupling.z0();
        let n_t = coupling.dim();
        let y_tt = array_admittance(coupling.matrix())?;
        let whiten = to_complex(&symmetric_power(&real_sym(&y_tt), HermitianExponent::NegHalf)?);
        let y_hat = block_diag(&CMatrix::from_element(1, 1, c(y0, 0.0)), &y_tt);
        let re_half_hat = to_complex(&symmetric_power(&real_sym(&y_hat), HermitianExponent::Half)?);
        debug_assert!({
            let mut e = CMatrix::zeros(n_t + 1, 1);
            e[0] = c(1.0, 0.0);
            ((&re_half_hat * &e).unscale(y0.sqrt()) - &e).norm() < 1e-12
        });
        let im = imag_part(&y_hat);
        let im_hat = to_complex(&((&im + im.transpose()) * 0.5));
        let z_inv_sqrt = to_complex(&real_inv_sqrt(coupling.matrix())?);
        let load = ArrayLoad::tx(&design_scenario(n_t, coupling.z0(), Some(coupling)))?;
        let array = ArrayFactors { y_tt, whiten, re_half_hat, im_hat, z_inv_sqrt };
        Ok(DesignContext { y0, n_t, array: Some(array), load })
    }

    /// Matched, uncoupled array.
    pub fn uncoupled(n_t: usize, z0: f64) -> Self {
        let load = ArrayLoad::tx(&design_scenario(n_t, z0, None)).expect("uncoupled scenario is valid");
        DesignContext { y0: 1.0 / z0, n_t, array: None, load }
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    fn check_channel(&self, ch: &MisoChannel) -> Result<()> {
        if ch.n_t() != self.n_t {
            return Err(Error::DimensionMismatch(format!(
                "context built for {} antennas, channel has {}",
                self.n_t,
                ch.n_t()
            )));
        }
        if ch.coupling.is_some() != self.array.is_some() {
            return Err(Error::InvalidParameter(format!(
                "context built for {} array, channel {} coupling",
                if self.array.is_some() { "a coupled" } else { "an uncoupled" },
                if ch.coupling.is_some() { "has" } else { "has no" }
            )));
        }
        Ok(())
    }

    /// `(P_T Y0 / 16) ||z_RT Re{Z_TT}^{-1/2}||^2` with the cached factor.
    pub fn bound(&self, ch: &MisoChannel) -> f64 {
        let whitened = match &self.array {
            Some(a) => row_norm_sqr(&(&ch.z_rt * &a.z_inv_sqrt)),
            None => self.y0 * row_norm_sqr(&ch.z_rt),
        };
        ch.p_t * self.y0 * whitened / 16.0
    }

    /// [`received_power`] with the array load taken from the context. `ch`
    /// must be on the array this context was built from.
    pub fn received_power(&self, b: &RMatrix, ch: &MisoChannel) -> Result<f64> {
        self.check_channel(ch)?;
        let spec = ch.scenario();
        check_susceptance_shape(b, ch.n_t())?;
        let h = channel_milac_tx_loaded(&spec, &self.load)?;
        let f = precoder_milac_tx_loaded(&MilacPorts::from_susceptance(b, Side::Tx)?, &spec, &self.load)?;
        Ok(ch.p_t * (h * f)[(0, 0)].norm_sqr())
    }

    /// Optimal design for `ch`, whose coupling must be the one this context
    /// was built from. `phase` rotates `v` before the retry schedule.
    pub fn optimize(&self, ch: &MisoChannel, phase: f64) -> Result<MilacDesign> {
        self.check_channel(ch)?;
        let g = match &self.array {
            Some(a) => matmul(&matmul(&ch.z_rt, &a.y_tt), &a.whiten) * c(0.5, 0.0),
            // Re{Y_TT}^{-1/2} = sqrt(Z0)
            None => &ch.z_rt * c(0.5 * self.y0 / self.y0.sqrt(), 0.0),
        };
        let (b, theta_bar, diagnostics) = self.design_from_whitened(&g, &phase_schedule(phase))?;
        let achieved_power = self.received_power(&b, ch)?;
        let bound = self.bound(ch);
        check_bound(achieved_power, bound)?;
        Ok(MilacDesign { b, theta_bar, achieved_power, bound, diagnostics })
    }

    fn design_from_whitened(&self, g: &CMatrix, phases: &[f64]) -> Result<(RMatrix, CMatrix, DesignDiagnostics)> {
        let (v, v_perp) = right_singular_frame(g)?;
        let n = self.n_t + 1;
        let y0 = self.y0;

        let mut found = None;
        for (attempt, &phi) in phases.iter().enumerate() {
            let theta = theta_from_frame(&v, &v_perp, phi);
            let lu = crate::matrixkit::Lu::new(&(identity(n) + &theta));
            let rcond = lu.rcond();
            if rcond >= CAYLEY_RCOND {
                found = Some((theta, lu, rcond, attempt));
                break;
            }
        }
        let Some((theta, lu, rcond, retries)) = found else {
            return Err(Error::ThetaPlusIdentitySingular { attempts: phases.len().saturating_sub(1) });
        };

        // B_bar = -j Y0 (I - Theta)(I + Theta)^{-1}
        let b_bar = lu.solve_right(&(identity(n) - &theta)) * c(0.0, -y0);
        let b_full = match &self.array {
            Some(a) => matmul(&matmul(&a.re_half_hat, &b_bar), &a.re_half_hat).unscale(y0) - &a.im_hat,
            // Re{Y_hat}^{1/2} = sqrt(Y0) I and Im{Y_hat} = 0
            None => b_bar.clone(),
        };

        let b_re = real_part(&b_full);
        let b_asymmetry = {
            let scale = b_re.norm();
            if scale == 0.0 {
                0.0
            } else {
                (&b_re - b_re.transpose()).norm() / scale
            }
        };
        let b = (&b_re + b_re.transpose()) * 0.5;

        let diagnostics = DesignDiagnostics {
            b_bar_imag_residue: relative_imag(&b_bar),
            b_imag_residue: relative_imag(&b_full),
            b_asymmetry,
            theta: is_unitary_symmetric(&theta),
            cayley_rcond: rcond,
            phase_retries: retries,
        };
        Ok((b, theta, diagnostics))
    }
}

/// Phase sequence: no rotation, then `pi/2, pi/4, ...`.
fn phase_schedule(base: f64) -> Vec<f64> {
    std::iter::once(base)
        .chain((1..=MAX_PHASE_RETRIES).map(|k| base + std::f64::consts::PI / f64::from(1u32 << k)))
        .collect()
}

fn check_susceptance_shape(b: &RMatrix, n_t: usize) -> Result<()> {
    if b.shape() != (n_t + 1, n_t + 1) {
        return Err(Error::DimensionMismatch(format!(
            "susceptance is {}x{}, expected {1}x{1}",
            b.nrows(),
            n_t + 1
        )));
    }
    Ok(())
}

/// `P_T |h f(B)|^2` for a susceptance matrix deployed on `ch`.
pub fn received_power(b: &RMatrix, ch: &MisoChannel) -> Result<f64> {
    let spec = ch.scenario();
    check_susceptance_shape(b, ch.n_t())?;
    let h = channel_milac_tx(&spec)?;
    let f = precoder_milac_tx(&MilacPorts::from_susceptance(b, Side::Tx)?, &spec)?;
    Ok(ch.p_t * (h * f)[(0, 0)].norm_sqr())
}

fn check_bound(achieved: f64, bound: f64) -> Result<()> {
    if (achieved - bound).abs() <= BOUND_TOL * bound {
        Ok(())
    } else {
        Err(Error::BoundMismatch { achieved, bound })
    }
}

/// Coupling-aware optimum with `v` rotated by `e^{j phase}`.
pub fn optimize_milac_mc_phased(ch: &MisoChannel, phase: f64) -> Result<MilacDesign> {
    match &ch.coupling {
        Some(coupling) => DesignContext::new(coupling)?.optimize(ch, phase),
        None => DesignContext::uncoupled(ch.n_t(), ch.z0).optimize(ch, phase),
    }
}

/// Coupling-aware optimum. Without coupling this coincides with
/// [`optimize_milac_nomc`].
pub fn optimize_milac_mc(ch: &MisoChannel) -> Result<MilacDesign> {
    optimize_milac_mc_phased(ch, 0.0)
}

/// Design that assumes uncoupled, matched antennas regardless of `ch.coupling`.
/// `achieved_power` and `bound` refer to that uncoupled model; use
/// [`received_power`] to evaluate it on the real array.
pub fn optimize_milac_nomc(ch: &MisoChannel) -> Result<MilacDesign> {
    DesignContext::uncoupled(ch.n_t(), ch.z0).optimize(&ch.without_coupling(), 0.0)
}

/// No-coupling optimum `P_T Y0^2 ||z_RT||^2 / 16`, also the dB reference.
pub fn power_milac_nomc(ch: &MisoChannel) -> f64 {
    ch.p_t * ch.y0() * ch.y0() * row_norm_sqr(&ch.z_rt) / 16.0
}

/// `(P_T Y0 / 16) ||z_RT Re{Z_TT}^{-1/2}||^2`.
pub fn power_milac_mc(ch: &MisoChannel) -> Result<f64> {
    let Some(coupling) = &ch.coupling else {
        return Ok(power_milac_nomc(ch));
    };
    let w = &ch.z_rt * to_complex(&real_inv_sqrt(coupling.matrix())?);
    Ok(ch.p_t * ch.y0() * row_norm_sqr(&w) / 16.0)
}

/// `(P_T Y0 / 16) z_RT Re{Z_TT}^{-1} z_RT^H` via a real Cholesky solve.
pub fn power_milac_mc_quadratic(ch: &MisoChannel) -> Result<f64> {
    let re = real_sym(&ch.coupling_matrix());
    let chol = Cholesky::new(re.clone()).ok_or_else(|| Error::NotPositiveDefinite {
        min_eigenvalue: re.clone().symmetric_eigenvalues().min(),
    })?;
    let a = real_part(&ch.z_rt).transpose();
    let b = imag_part(&ch.z_rt).transpose();
    let q = a.dot(&chol.solve(&a)) + b.dot(&chol.solve(&b));
    Ok(ch.p_t * ch.y0() * q / 16.0)
}

fn check_expectation_args(p_t: f64, rho: f64) -> Result<()> {
    if !(p_t > 0.0 && p_t.is_finite() && rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("need positive power and path gain, got P_T={p_t}, rho={rho}")));
    }
    Ok(())
}

/// `E[P] = (P_T Y0 rho / 16) Tr(Re{Z_TT}^{-1})` under `z_RT ~ CN(0, rho I)`.
pub fn expected_power_milac_mc(coupling: &CouplingMatrix, p_t: f64, rho: f64) -> Result<f64> {
    check_expectation_args(p_t, rho)?;
    Ok(p_t * rho * trace_real_inverse(coupling.matrix())? / (16.0 * coupling.z0()))
}

/// Lossless reciprocal matching network, `2 N_T` ports:
/// `[[0, -j sqrt(Z0) Re{Z}^{1/2}], [-j sqrt(Z0) Re{Z}^{1/2}, -j Im{Z}]]`.
pub fn matching_network_impedance(coupling: &CouplingMatrix) -> Result<CMatrix> {
    let z = coupling.matrix();
    let n = z.nrows();
    let half = to_complex(&symmetric_power(&real_sym(z), HermitianExponent::Half)?);
    let off = half * c(0.0, -coupling.z0().sqrt());
    let im = imag_part(z);
    let lower = to_complex(&((&im + im.transpose()) * 0.5)) * c(0.0, -1.0);
    let mut z_f = CMatrix::zeros(2 * n, 2 * n);
    z_f.view_mut((0, n), (n, n)).copy_from(&off);
    z_f.view_mut((n, 0), (n, n)).copy_from(&off);
    z_f.view_mut((n, n), (n, n)).copy_from(&lower);
    Ok(z_f)
}

/// Channel seen by the digital transmitter behind the matching network,
/// `h = -j / (4 sqrt(Z0)) z_RT Re{Z_TT}^{-1/2}`.
pub fn matched_channel(ch: &MisoChannel) -> Result<CMatrix> {
    let inv_sqrt = to_complex(&real_inv_sqrt(&ch.coupling_matrix())?);
    Ok((&ch.z_rt * inv_sqrt) * c(0.0, -0.25 / ch.z0.sqrt()))
}

/// MRT power of the digital array with matching network, `P_T ||h_mn||^2`.
pub fn power_digital_matching(ch: &MisoChannel) -> Result<f64> {
    Ok(ch.p_t * row_norm_sqr(&matched_channel(ch)?))
}

/// As [`power_digital_matching`], but with the matched channel obtained by
/// running the matching network impedance through the network model.
pub fn power_digital_matching_network(ch: &MisoChannel) -> Result<f64> {
    let coupling = ch.coupling.clone().unwrap_or_else(|| CouplingMatrix::uncoupled(ch.n_t(), ch.z0));
    let z_f = matching_network_impedance(&coupling)?;
    let spec = ScenarioSpec::new(Architecture::MilacTx, ch.z_rt.clone(), ch.z0)
        .with_tx_chains(ch.n_t())
        .with_coupling_tx(coupling.into_matrix());
    let h = end_to_end_impedance_form(&spec, Some(&z_f), None)?;
    Ok(ch.p_t * row_norm_sqr(&h))
}

fn shifted_inverse(ch_z: &CMatrix, z0: f64) -> Result<crate::matrixkit::Lu> {
    let m = ch_z + identity(ch_z.nrows()) * c(z0, 0.0);
    factor_checked(&m, crate::netmodels::SINGULAR_RCOND).map_err(|rcond| Error::SingularSystem { rcond })
}

/// MRT power without matching network, `(P_T / 4) ||z_RT (Z_TT + Z0 I)^{-1}||^2`.
pub fn power_digital_nomatching(ch: &MisoChannel) -> Result<f64> {
    let lu = shifted_inverse(&ch.coupling_matrix(), ch.z0)?;
    Ok(ch.p_t * row_norm_sqr(&lu.solve_right(&ch.z_rt)) / 4.0)
}

/// `E[P] = (P_T rho / 4) ||(Z_TT + Z0 I)^{-1}||_F^2`.
pub fn expected_power_digital_nomatching(coupling: &CouplingMatrix, p_t: f64, rho: f64) -> Result<f64> {
    check_expectation_args(p_t, rho)?;
    let lu = shifted_inverse(coupling.matrix(), coupling.z0())?;
    let inv = lu.solve(&identity(coupling.dim()));
    Ok(p_t * rho * inv.norm_squared() / 4.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub milac_mc: f64,
    pub milac_nomc: f64,
    pub digital_matching: f64,
    pub digital_nomatching: f64,
    pub expected_milac_mc: f64,
    pub expected_milac_nomc: f64,
    pub expected_digital_matching: f64,
    pub expected_digital_nomatching: f64,
}

pub fn power_report(ch: &MisoChannel) -> Result<PowerReport> {
    let coupling = ch.coupling.clone().unwrap_or_else(|| CouplingMatrix::uncoupled(ch.n_t(), ch.z0));
    let uncoupled = CouplingMatrix::uncoupled(ch.n_t(), ch.z0);
    let expected_milac_mc = expected_power_milac_mc(&coupling, ch.p_t, ch.rho)?;
    Ok(PowerReport {
        milac_mc: power_milac_mc(ch)?,
        milac_nomc: power_milac_nomc(ch),
        digital_matching: power_digital_matching(ch)?,
        digital_nomatching: power_digital_nomatching(ch)?,
        expected_milac_mc,
        expected_milac_nomc: expected_power_milac_mc(&uncoupled, ch.p_t, ch.rho)?,
        expected_digital_matching: expected_milac_mc,
        expected_digital_nomatching: expected_power_digital_nomatching(&coupling, ch.p_t, ch.rho)?,
    })
}

/// `10 log10(p / p_ref)`.
pub fn to_db(p: f64, p_ref: f64) -> f64 {
    10.0 * (p / p_ref).log10()
}

pub fn from_db(db: f64, p_ref: f64) -> f64 {
    p_ref * 10f64.powf(db / 10.0)
}
