//! Channel, precoder, and combiner matrices of digital and MiLAC-aided MIMO
//! links, derived from multiport network theory under the unilateral
//! approximation (no receiver-to-transmitter feedback block).
//!
//! Absent coupling (`None`) means perfectly matched, uncoupled antennas
//! (`Z = Z0 I`); those paths reduce to scalar factors without any inversion.

use crate::error::{Error, Result};
use crate::matrixkit::{
    block, block_diag, c, ensure_finite, factor_checked, identity, max_abs, to_complex, CMatrix, IndexRange, Lu,
    RMatrix,
};

/// Reciprocal condition number below which a system is treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-14;

/// Relative tolerance for the lossless-reciprocal check on MiLAC admittances.
pub const LOSSLESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Architecture {
    DigitalMimo,
    MilacTx,
    MilacRx,
    MilacBoth,
}

impl Architecture {
    pub fn name(self) -> &'static str {
        match self {
            Architecture::DigitalMimo => "DigitalMimo",
            Architecture::MilacTx => "MilacTx",
            Architecture::MilacRx => "MilacRx",
            Architecture::MilacBoth => "MilacBoth",
        }
    }

    fn has_tx_milac(self) -> bool {
        matches!(self, Architecture::MilacTx | Architecture::MilacBoth)
    }

    fn has_rx_milac(self) -> bool {
        matches!(self, Architecture::MilacRx | Architecture::MilacBoth)
    }
}

/// One link: counts, reference impedance, array couplings, and the
/// transmission impedance `Z_RT` (N_R x N_T, Ohm).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub architecture: Architecture,
    /// RF chains feeding a transmit MiLAC.
    pub n_s: usize,
    pub n_t: usize,
    pub n_r: usize,
    /// RF chains behind a receive MiLAC.
    pub n_z: usize,
    pub z0: f64,
    pub coupling_tx: Option<CMatrix>,
    pub coupling_rx: Option<CMatrix>,
    pub z_rt: CMatrix,
}

impl ScenarioSpec {
    /// Uncoupled link with one RF chain per antenna on both sides.
    pub fn new(architecture: Architecture, z_rt: CMatrix, z0: f64) -> Self {
        let (n_r, n_t) = z_rt.shape();
        ScenarioSpec { architecture, n_s: n_t, n_t, n_r, n_z: n_r, z0, coupling_tx: None, coupling_rx: None, z_rt }
    }

    pub fn with_tx_chains(mut self, n_s: usize) -> Self {
        self.n_s = n_s;
        self
    }

    pub fn with_rx_chains(mut self, n_z: usize) -> Self {
        self.n_z = n_z;
        self
    }

    pub fn with_coupling_tx(mut self, z_tt: CMatrix) -> Self {
        self.coupling_tx = Some(z_tt);
        self
    }

    pub fn with_coupling_rx(mut self, z_rr: CMatrix) -> Self {
        self.coupling_rx = Some(z_rr);
        self
    }

    pub fn with_architecture(mut self, architecture: Architecture) -> Self {
        self.architecture = architecture;
        self
    }

    pub fn y0(&self) -> f64 {
        1.0 / self.z0
    }

    /// The same physical link with transmitter and receiver roles exchanged.
    pub fn swapped(&self) -> Self {
        let architecture = match self.architecture {
            Architecture::MilacTx => Architecture::MilacRx,
            Architecture::MilacRx => Architecture::MilacTx,
            a => a,
        };
        ScenarioSpec {
            architecture,
            n_s: self.n_z,
            n_t: self.n_r,
            n_r: self.n_t,
            n_z: self.n_s,
            z0: self.z0,
            coupling_tx: self.coupling_rx.clone(),
            coupling_rx: self.coupling_tx.clone(),
            z_rt: self.z_rt.transpose(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return Err(Error::InvalidParameter(format!("reference impedance must be positive, got {}", self.z0)));
        }
        if self.z_rt.shape() != (self.n_r, self.n_t) {
            return Err(Error::DimensionMismatch(format!(
                "Z_RT is {}x{} but N_R x N_T = {}x{}",
                self.z_rt.nrows(),
                self.z_rt.ncols(),
                self.n_r,
                self.n_t
            )));
        }
        ensure_finite(&self.z_rt, "Z_RT")?;
        for (name, m, n) in [("Z_TT", &self.coupling_tx, self.n_t), ("Z_RR", &self.coupling_rx, self.n_r)] {
            if let Some(m) = m {
                if m.shape() != (n, n) {
                    return Err(Error::DimensionMismatch(format!(
                        "{name} is {}x{}, expected {n}x{n}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                ensure_finite(m, "coupling matrix")?;
            }
        }
        if self.architecture.has_tx_milac() && self.n_s == 0 {
            return Err(Error::DimensionMismatch("transmit MiLAC needs at least one RF chain".into()));
        }
        if self.architecture.has_rx_milac() && self.n_z == 0 {
            return Err(Error::DimensionMismatch("receive MiLAC needs at least one RF chain".into()));
        }
        Ok(())
    }

    fn require(&self, ok: bool, what: &'static str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::WrongArchitecture { what, actual: self.architecture.name() })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Tx,
    Rx,
}

/// Admittance matrix of a MiLAC (Siemens) and the side it sits on.
#[derive(Debug, Clone, PartialEq)]
pub struct MilacPorts {
    pub y: CMatrix,
    pub side: Side,
}

impl MilacPorts {
    pub fn from_admittance(y: CMatrix, side: Side) -> Result<Self> {
        if !y.is_square() {
            return Err(Error::DimensionMismatch(format!("MiLAC admittance is {}x{}", y.nrows(), y.ncols())));
        }
        ensure_finite(&y, "MiLAC admittance")?;
        Ok(MilacPorts { y, side })
    }

    /// Lossless reciprocal network `Y = jB`.
    pub fn from_susceptance(b: &RMatrix, side: Side) -> Result<Self> {
        Self::from_admittance(to_complex(b) * c(0.0, 1.0), side)
    }

    pub fn from_impedance(z: &CMatrix, side: Side) -> Result<Self> {
        let lu = factor_checked(z, SINGULAR_RCOND).map_err(|rcond| Error::SingularSystem { rcond })?;
        Self::from_admittance(lu.solve(&identity(z.nrows())), side)
    }

    pub fn dim(&self) -> usize {
        self.y.nrows()
    }

    /// `Y = jB` with `B` real symmetric, within [`LOSSLESS_TOL`] relative.
    pub fn is_lossless_reciprocal(&self) -> bool {
        let scale = self.y.norm().max(f64::MIN_POSITIVE);
        let real = self.y.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let asym = max_abs(&(&self.y - self.y.transpose()));
        real <= LOSSLESS_TOL * scale && asym <= LOSSLESS_TOL * scale
    }

    /// Impedance matrix `Z = Y^{-1}`.
    pub fn impedance(&self) -> Result<CMatrix> {
        let lu = factor_checked(&self.y, SINGULAR_RCOND).map_err(|rcond| Error::SingularSystem { rcond })?;
        Ok(lu.solve(&identity(self.dim())))
    }
}

/// `H`, and `F`/`G` where the architecture has them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioModel {
    pub h: CMatrix,
    pub f: Option<CMatrix>,
    pub g: Option<CMatrix>,
}

impl ScenarioModel {
    /// `G H F`, absent factors treated as identity.
    pub fn end_to_end(&self) -> CMatrix {
        let mut out = self.h.clone();
        if let Some(f) = &self.f {
            out *= f;
        }
        if let Some(g) = &self.g {
            out = g * out;
        }
        out
    }
}

fn coupling_factor(m: &CMatrix) -> Result<Lu> {
    factor_checked(m, SINGULAR_RCOND).map_err(|rcond| Error::SingularCoupling { rcond })
}

fn shifted(m: &CMatrix, z0: f64) -> CMatrix {
    m + identity(m.nrows()) * c(z0, 0.0)
}

/// `scale * L^{-1} Z_RT R^{-1}` with optional factors on either side.
fn sandwich(z_rt: &CMatrix, scale: f64, left: Option<CMatrix>, right: Option<CMatrix>) -> Result<CMatrix> {
    let mut x = z_rt.clone();
    if let Some(l) = left {
        x = coupling_factor(&l)?.solve(&x);
    }
    if let Some(r) = right {
        x = coupling_factor(&r)?.solve_right(&x);
    }
    Ok(x * c(scale, 0.0))
}

/// Digital MIMO: `H = Z0 (Z_RR + Z0 I)^{-1} Z_RT (Z_TT + Z0 I)^{-1}`.
pub fn channel_digital(spec: &ScenarioSpec) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture == Architecture::DigitalMimo, "digital channel")?;
    let z0 = spec.z0;
    match (&spec.coupling_rx, &spec.coupling_tx) {
        (None, None) => Ok(spec.z_rt.unscale(4.0 * z0)),
        (rx, tx) => {
            let scale = z0 * if rx.is_none() { 0.5 / z0 } else { 1.0 } * if tx.is_none() { 0.5 / z0 } else { 1.0 };
            sandwich(&spec.z_rt, scale, rx.as_ref().map(|m| shifted(m, z0)), tx.as_ref().map(|m| shifted(m, z0)))
        }
    }
}

/// Transmit MiLAC: `H = Z0 (Z_RR + Z0 I)^{-1} Z_RT Z_TT^{-1}`.
pub fn channel_milac_tx(spec: &ScenarioSpec) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture == Architecture::MilacTx, "transmit-MiLAC channel")?;
    let z0 = spec.z0;
    match (&spec.coupling_rx, &spec.coupling_tx) {
        (None, None) => Ok(spec.z_rt.unscale(2.0 * z0)),
        (rx, tx) => {
            let scale = z0 * if rx.is_none() { 0.5 / z0 } else { 1.0 } * if tx.is_none() { 1.0 / z0 } else { 1.0 };
            sandwich(&spec.z_rt, scale, rx.as_ref().map(|m| shifted(m, z0)), tx.clone())
        }
    }
}

/// [`channel_milac_tx`] reusing the `Z_TT^{-1}` held by a transmit load.
pub fn channel_milac_tx_loaded(spec: &ScenarioSpec, load: &ArrayLoad) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture == Architecture::MilacTx, "transmit-MiLAC channel")?;
    load.check(Side::Tx, spec.n_s + spec.n_t)?;
    let z0 = spec.z0;
    // the load's array block is Z0 Z_TT^{-1} (the identity when uncoupled)
    let y_tt = load.m.view((spec.n_s, spec.n_s), (spec.n_t, spec.n_t));
    let x = &spec.z_rt * y_tt;
    match &spec.coupling_rx {
        None => Ok(x.unscale(2.0 * z0)),
        Some(rx) => Ok(coupling_factor(&shifted(rx, z0))?.solve(&x)),
    }
}

/// Receive MiLAC: `H = Z0 Z_RR^{-1} Z_RT (Z_TT + Z0 I)^{-1}`.
pub fn channel_milac_rx(spec: &ScenarioSpec) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture == Architecture::MilacRx, "receive-MiLAC channel")?;
    let z0 = spec.z0;
    match (&spec.coupling_rx, &spec.coupling_tx) {
        (None, None) => Ok(spec.z_rt.unscale(2.0 * z0)),
        (rx, tx) => {
            let scale = z0 * if rx.is_none() { 1.0 / z0 } else { 1.0 } * if tx.is_none() { 0.5 / z0 } else { 1.0 };
            sandwich(&spec.z_rt, scale, rx.clone(), tx.as_ref().map(|m| shifted(m, z0)))
        }
    }
}

/// MiLACs on both ends: `H = Z0 Z_RR^{-1} Z_RT Z_TT^{-1}`.
pub fn channel_milac_both(spec: &ScenarioSpec) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture == Architecture::MilacBoth, "two-sided MiLAC channel")?;
    let z0 = spec.z0;
    match (&spec.coupling_rx, &spec.coupling_tx) {
        (None, None) => Ok(spec.z_rt.unscale(z0)),
        (rx, tx) => {
            let scale = z0 * if rx.is_none() { 1.0 / z0 } else { 1.0 } * if tx.is_none() { 1.0 / z0 } else { 1.0 };
            sandwich(&spec.z_rt, scale, rx.clone(), tx.clone())
        }
    }
}

/// `Z0 Z^{-1}`, i.e. `Z^{-1} / Y0`, or the identity without coupling.
fn normalized_array_admittance(coupling: &Option<CMatrix>, n: usize, z0: f64) -> Result<CMatrix> {
    match coupling {
        None => Ok(identity(n)),
        Some(m) => Ok(coupling_factor(m)?.solve(&identity(n)) * c(z0, 0.0)),
    }
}

/// Selector `[M^{-1}]_{offset + (1:len), 1:k}` computed by solving `M X = [I_k; 0]`.
fn inverse_selector(m: &CMatrix, k: usize, offset: usize, len: usize) -> Result<CMatrix> {
    let lu = factor_checked(m, SINGULAR_RCOND).map_err(|rcond| Error::SingularSystem { rcond })?;
    let mut rhs = CMatrix::zeros(m.nrows(), k);
    for i in 0..k {
        rhs[(i, i)] = c(1.0, 0.0);
    }
    let x = lu.solve(&rhs);
    block(&x, IndexRange::after(offset, len), IndexRange::new(1, k))
}

/// Array-side termination seen by a MiLAC, normalized by `Y0`:
/// `blockdiag(I, Z_TT^{-1}/Y0)` on the transmit side and
/// `blockdiag(Z_RR^{-1}/Y0, I)` on the receive side. It depends only on the
/// coupling, so it can be reused across channel draws.
#[derive(Debug, Clone)]
pub struct ArrayLoad {
    side: Side,
    m: CMatrix,
}

impl ArrayLoad {
    pub fn tx(spec: &ScenarioSpec) -> Result<Self> {
        spec.validate()?;
        let m = block_diag(&identity(spec.n_s), &normalized_array_admittance(&spec.coupling_tx, spec.n_t, spec.z0)?);
        Ok(ArrayLoad { side: Side::Tx, m })
    }

    pub fn rx(spec: &ScenarioSpec) -> Result<Self> {
        spec.validate()?;
        let m = block_diag(&normalized_array_admittance(&spec.coupling_rx, spec.n_r, spec.z0)?, &identity(spec.n_z));
        Ok(ArrayLoad { side: Side::Rx, m })
    }

    fn check(&self, side: Side, dim: usize) -> Result<()> {
        if self.side != side || self.m.nrows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{:?} load of dimension {} used where a {side:?} load of dimension {dim} is needed",
                self.side,
                self.m.nrows()
            )));
        }
        Ok(())
    }
}

/// Transmit MiLAC precoder
/// `F = [(Y_F/Y0 + blockdiag(I, Z_TT^{-1}/Y0))^{-1}]_{N_S+(1:N_T), 1:N_S}`.
pub fn precoder_milac_tx(y_f: &MilacPorts, spec: &ScenarioSpec) -> Result<CMatrix> {
    precoder_milac_tx_loaded(y_f, spec, &ArrayLoad::tx(spec)?)
}

/// [`precoder_milac_tx`] with a precomputed load, which must come from
/// `ArrayLoad::tx` on the same array.
pub fn precoder_milac_tx_loaded(y_f: &MilacPorts, spec: &ScenarioSpec, load: &ArrayLoad) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture.has_tx_milac(), "transmit-MiLAC precoder")?;
    let (n_s, n_t) = (spec.n_s, spec.n_t);
    if y_f.dim() != n_s + n_t {
        return Err(Error::DimensionMismatch(format!(
            "transmit MiLAC has {} ports, expected N_S + N_T = {}",
            y_f.dim(),
            n_s + n_t
        )));
    }
    load.check(Side::Tx, n_s + n_t)?;
    let m = y_f.y.unscale(spec.y0()) + &load.m;
    inverse_selector(&m, n_s, n_s, n_t)
}

/// Receive MiLAC combiner
/// `G = [(Y_G/Y0 + blockdiag(Z_RR^{-1}/Y0, I))^{-1}]_{N_R+(1:N_Z), 1:N_R}`.
pub fn combiner_milac_rx(y_g: &MilacPorts, spec: &ScenarioSpec) -> Result<CMatrix> {
    spec.validate()?;
    spec.require(spec.architecture.has_rx_milac(), "receive-MiLAC combiner")?;
    let (n_r, n_z) = (spec.n_r, spec.n_z);
    if y_g.dim() != n_r + n_z {
        return Err(Error::DimensionMismatch(format!(
            "receive MiLAC has {} ports, expected N_R + N_Z = {}",
            y_g.dim(),
            n_r + n_z
        )));
    }
    let load = ArrayLoad::rx(spec)?;
    let m = y_g.y.unscale(spec.y0()) + load.m;
    inverse_selector(&m, n_r, n_r, n_z)
}

/// Channel plus whichever MiLAC maps the architecture includes.
pub fn build_model(spec: &ScenarioSpec, y_f: Option<&MilacPorts>, y_g: Option<&MilacPorts>) -> Result<ScenarioModel> {
    let missing = |what| Error::InvalidParameter(format!("{what} admittance required for {}", spec.architecture.name()));
    let h = match spec.architecture {
        Architecture::DigitalMimo => channel_digital(spec)?,
        Architecture::MilacTx => channel_milac_tx(spec)?,
        Architecture::MilacRx => channel_milac_rx(spec)?,
        Architecture::MilacBoth => channel_milac_both(spec)?,
    };
    let f = if spec.architecture.has_tx_milac() {
        Some(precoder_milac_tx(y_f.ok_or_else(|| missing("transmit MiLAC"))?, spec)?)
    } else {
        None
    };
    let g = if spec.architecture.has_rx_milac() {
        Some(combiner_milac_rx(y_g.ok_or_else(|| missing("receive MiLAC"))?, spec)?)
    } else {
        None
    };
    Ok(ScenarioModel { h, f, g })
}

fn split_blocks(z: &CMatrix, n1: usize, n2: usize) -> Result<[CMatrix; 4]> {
    if z.shape() != (n1 + n2, n1 + n2) {
        return Err(Error::DimensionMismatch(format!(
            "network impedance is {}x{}, expected {}x{}",
            z.nrows(),
            z.ncols(),
            n1 + n2,
            n1 + n2
        )));
    }
    let r1 = IndexRange::new(1, n1);
    let r2 = IndexRange::after(n1, n2);
    Ok([block(z, r1, r1)?, block(z, r1, r2)?, block(z, r2, r1)?, block(z, r2, r2)?])
}

fn coupling_or_matched(coupling: &Option<CMatrix>, n: usize, z0: f64) -> CMatrix {
    coupling.clone().unwrap_or_else(|| identity(n) * c(z0, 0.0))
}

/// Matching-network form of a transmit network:
/// `J_T = Z_F12 (Z_F22 + Z_TT)^{-1}`, `Z_T = Z_F11 - J_T Z_F21`.
pub fn matching_form_tx(z_f: &CMatrix, spec: &ScenarioSpec) -> Result<(CMatrix, CMatrix)> {
    spec.validate()?;
    let [z11, z12, z21, z22] = split_blocks(z_f, spec.n_s, spec.n_t)?;
    let z_tt = coupling_or_matched(&spec.coupling_tx, spec.n_t, spec.z0);
    let lu = factor_checked(&(z22 + z_tt), SINGULAR_RCOND).map_err(|rcond| Error::SingularBlock { rcond })?;
    let j_t = lu.solve_right(&z12);
    let z_t = z11 - &j_t * z21;
    Ok((z_t, j_t))
}

/// Matching-network form of a receive network:
/// `J_R = Z_G21 (Z_G11 + Z_RR)^{-1}`, `Z_R = Z_G22 - J_R Z_G12`.
pub fn matching_form_rx(z_g: &CMatrix, spec: &ScenarioSpec) -> Result<(CMatrix, CMatrix)> {
    spec.validate()?;
    let [z11, z12, z21, z22] = split_blocks(z_g, spec.n_r, spec.n_z)?;
    let z_rr = coupling_or_matched(&spec.coupling_rx, spec.n_r, spec.z0);
    let lu = factor_checked(&(z11 + z_rr), SINGULAR_RCOND).map_err(|rcond| Error::SingularBlock { rcond })?;
    let j_r = lu.solve_right(&z21);
    let z_r = z22 - &j_r * z12;
    Ok((z_r, j_r))
}

/// End-to-end map written with matching-network impedances instead of MiLAC
/// admittances:
/// `Z0 (Z_R + Z0 I)^{-1} J_R Z_RT J_T^T (Z_T + Z0 I)^{-1}`, where a side without
/// a MiLAC contributes `(Z + Z0 I)^{-1}` (digital) in place of its `J`/`Z` pair.
pub fn end_to_end_impedance_form(
    spec: &ScenarioSpec,
    z_f: Option<&CMatrix>,
    z_g: Option<&CMatrix>,
) -> Result<CMatrix> {
    spec.validate()?;
    let z0 = spec.z0;
    let missing = |what| Error::InvalidParameter(format!("{what} impedance required for {}", spec.architecture.name()));
    let mut x = spec.z_rt.clone();

    // transmit side, applied on the right
    if spec.architecture.has_tx_milac() {
        let (z_t, j_t) = matching_form_tx(z_f.ok_or_else(|| missing("transmit MiLAC"))?, spec)?;
        x *= j_t.transpose();
        x = coupling_factor(&shifted(&z_t, z0))?.solve_right(&x);
    } else {
        let z_tt = coupling_or_matched(&spec.coupling_tx, spec.n_t, z0);
        x = coupling_factor(&shifted(&z_tt, z0))?.solve_right(&x);
    }

    // receive side, applied on the left
    if spec.architecture.has_rx_milac() {
        let (z_r, j_r) = matching_form_rx(z_g.ok_or_else(|| missing("receive MiLAC"))?, spec)?;
        x = &j_r * x;
        x = coupling_factor(&shifted(&z_r, z0))?.solve(&x);
    } else {
        let z_rr = coupling_or_matched(&spec.coupling_rx, spec.n_r, z0);
        x = coupling_factor(&shifted(&z_rr, z0))?.solve(&x);
    }
    Ok(x * c(z0, 0.0))
}
