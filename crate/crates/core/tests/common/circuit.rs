//! Brute-force linear-system oracles for the network models: every port
//! voltage and current is an unknown and each defining equation is one block
//! row.

use super::{random_cmatrix, random_coupling, random_symmetric};
use milac::matrixkit::{block, c, identity, CMatrix, IndexRange, Lu};
use milac::netmodels::{Architecture, MilacPorts, ScenarioSpec, Side};
use rand_chacha::ChaCha8Rng;

const Z0: f64 = 50.0;

/// Brute-force circuit: unknown port voltages and currents stacked in one
/// vector, one block row per defining equation, sources `s` on the right.
pub struct Circuit {
    vars: Vec<(&'static str, usize, usize)>,
    n_src: usize,
    rows: Vec<(Vec<(&'static str, CMatrix)>, Option<CMatrix>)>,
}

impl Circuit {
    pub fn new(vars: &[(&'static str, usize)], n_src: usize) -> Self {
        let mut off = 0;
        let vars = vars
            .iter()
            .map(|&(name, n)| {
                let v = (name, off, n);
                off += n;
                v
            })
            .collect();
        Circuit { vars, n_src, rows: Vec::new() }
    }

    fn var(&self, name: &str) -> (usize, usize) {
        let v = self.vars.iter().find(|v| v.0 == name).unwrap();
        (v.1, v.2)
    }

    pub fn eq(&mut self, terms: Vec<(&'static str, CMatrix)>, src: Option<CMatrix>) {
        self.rows.push((terms, src));
    }

    /// Map from sources to the named unknown.
    pub fn solve_for(&self, name: &str) -> CMatrix {
        let n: usize = self.vars.iter().map(|v| v.2).sum();
        let mut a = CMatrix::zeros(n, n);
        let mut b = CMatrix::zeros(n, self.n_src);
        let mut row = 0;
        for (terms, src) in &self.rows {
            let m = terms[0].1.nrows();
            for (var, coeff) in terms {
                let (off, len) = self.var(var);
                assert_eq!(coeff.shape(), (m, len), "term {var}");
                a.view_mut((row, off), (m, len)).copy_from(coeff);
            }
            if let Some(s) = src {
                b.view_mut((row, 0), (m, self.n_src)).copy_from(s);
            }
            row += m;
        }
        assert_eq!(row, n, "system must be square");
        let u = Lu::new(&a).solve(&b);
        let (off, len) = self.var(name);
        u.rows(off, len).into_owned()
    }
}

pub fn eye(n: usize) -> CMatrix {
    identity(n)
}

pub fn scaled(n: usize, s: f64) -> CMatrix {
    identity(n) * c(s, 0.0)
}

pub fn split(z: &CMatrix, n1: usize, n2: usize) -> [CMatrix; 4] {
    let r1 = IndexRange::new(1, n1);
    let r2 = IndexRange::after(n1, n2);
    [
        block(z, r1, r1).unwrap(),
        block(z, r1, r2).unwrap(),
        block(z, r2, r1).unwrap(),
        block(z, r2, r2).unwrap(),
    ]
}

/// Random MiLAC admittance: lossless reciprocal or, for oracle purposes only,
/// a generic complex matrix.
pub fn random_milac(rng: &mut ChaCha8Rng, n: usize, lossless: bool, side: Side) -> MilacPorts {
    if lossless {
        MilacPorts::from_susceptance(&random_symmetric(rng, n, 0.05), side).unwrap()
    } else {
        MilacPorts::from_admittance(random_cmatrix(rng, n, n, 0.05), side).unwrap()
    }
}

pub fn random_spec(rng: &mut ChaCha8Rng, arch: Architecture, dims: [usize; 4]) -> ScenarioSpec {
    let [n_s, n_t, n_r, n_z] = dims;
    ScenarioSpec::new(arch, random_cmatrix(rng, n_r, n_t, 10.0), Z0)
        .with_tx_chains(n_s)
        .with_rx_chains(n_z)
        .with_coupling_tx(random_coupling(rng, n_t, Z0))
        .with_coupling_rx(random_coupling(rng, n_r, Z0))
}

pub fn oracle_digital(spec: &ScenarioSpec) -> CMatrix {
    let (n_t, n_r) = (spec.n_t, spec.n_r);
    let z_tt = spec.coupling_tx.clone().unwrap();
    let z_rr = spec.coupling_rx.clone().unwrap();
    let mut ckt = Circuit::new(&[("x", n_t), ("ix", n_t), ("z", n_r), ("iz", n_r)], n_t);
    ckt.eq(vec![("x", eye(n_t)), ("ix", -z_tt)], None);
    ckt.eq(vec![("z", eye(n_r)), ("ix", -spec.z_rt.clone()), ("iz", -z_rr)], None);
    ckt.eq(vec![("x", eye(n_t)), ("ix", scaled(n_t, Z0))], Some(eye(n_t)));
    ckt.eq(vec![("z", eye(n_r)), ("iz", scaled(n_r, Z0))], None);
    ckt.solve_for("z")
}

/// Returns (s -> x, s -> z).
pub fn oracle_tx(spec: &ScenarioSpec, z_f: &CMatrix) -> (CMatrix, CMatrix) {
    let (n_s, n_t, n_r) = (spec.n_s, spec.n_t, spec.n_r);
    let z_tt = spec.coupling_tx.clone().unwrap();
    let z_rr = spec.coupling_rx.clone().unwrap();
    let [f11, f12, f21, f22] = split(z_f, n_s, n_t);
    let mut ckt =
        Circuit::new(&[("w", n_s), ("iw", n_s), ("x", n_t), ("ix", n_t), ("z", n_r), ("iz", n_r)], n_s);
    ckt.eq(vec![("x", eye(n_t)), ("ix", z_tt)], None);
    ckt.eq(vec![("z", eye(n_r)), ("ix", spec.z_rt.clone()), ("iz", -z_rr)], None);
    ckt.eq(vec![("w", eye(n_s)), ("iw", scaled(n_s, Z0))], Some(eye(n_s)));
    ckt.eq(vec![("w", eye(n_s)), ("iw", -f11), ("ix", -f12)], None);
    ckt.eq(vec![("x", eye(n_t)), ("iw", -f21), ("ix", -f22)], None);
    ckt.eq(vec![("z", eye(n_r)), ("iz", scaled(n_r, Z0))], None);
    (ckt.solve_for("x"), ckt.solve_for("z"))
}

pub fn oracle_rx(spec: &ScenarioSpec, z_g: &CMatrix) -> CMatrix {
    let (n_t, n_r, n_z) = (spec.n_t, spec.n_r, spec.n_z);
    let z_tt = spec.coupling_tx.clone().unwrap();
    let z_rr = spec.coupling_rx.clone().unwrap();
    let [g11, g12, g21, g22] = split(z_g, n_r, n_z);
    let mut ckt =
        Circuit::new(&[("x", n_t), ("ix", n_t), ("y", n_r), ("iy", n_r), ("z", n_z), ("iz", n_z)], n_t);
    ckt.eq(vec![("x", eye(n_t)), ("ix", -z_tt)], None);
    ckt.eq(vec![("y", eye(n_r)), ("ix", -spec.z_rt.clone()), ("iy", z_rr)], None);
    ckt.eq(vec![("x", eye(n_t)), ("ix", scaled(n_t, Z0))], Some(eye(n_t)));
    ckt.eq(vec![("y", eye(n_r)), ("iy", -g11), ("iz", -g12)], None);
    ckt.eq(vec![("z", eye(n_z)), ("iy", -g21), ("iz", -g22)], None);
    ckt.eq(vec![("z", eye(n_z)), ("iz", scaled(n_z, Z0))], None);
    ckt.solve_for("z")
}

/// Returns (s -> x, s -> z).
pub fn oracle_both(spec: &ScenarioSpec, z_f: &CMatrix, z_g: &CMatrix) -> (CMatrix, CMatrix) {
    let (n_s, n_t, n_r, n_z) = (spec.n_s, spec.n_t, spec.n_r, spec.n_z);
    let z_tt = spec.coupling_tx.clone().unwrap();
    let z_rr = spec.coupling_rx.clone().unwrap();
    let [f11, f12, f21, f22] = split(z_f, n_s, n_t);
    let [g11, g12, g21, g22] = split(z_g, n_r, n_z);
    let mut ckt = Circuit::new(
        &[("w", n_s), ("iw", n_s), ("x", n_t), ("ix", n_t), ("y", n_r), ("iy", n_r), ("z", n_z), ("iz", n_z)],
        n_s,
    );
    ckt.eq(vec![("x", eye(n_t)), ("ix", z_tt)], None);
    ckt.eq(vec![("y", eye(n_r)), ("ix", spec.z_rt.clone()), ("iy", z_rr)], None);
    ckt.eq(vec![("w", eye(n_s)), ("iw", scaled(n_s, Z0))], Some(eye(n_s)));
    ckt.eq(vec![("w", eye(n_s)), ("iw", -f11), ("ix", -f12)], None);
    ckt.eq(vec![("x", eye(n_t)), ("iw", -f21), ("ix", -f22)], None);
    ckt.eq(vec![("y", eye(n_r)), ("iy", -g11), ("iz", -g12)], None);
    ckt.eq(vec![("z", eye(n_z)), ("iy", -g21), ("iz", -g22)], None);
    ckt.eq(vec![("z", eye(n_z)), ("iz", scaled(n_z, Z0))], None);
    (ckt.solve_for("x"), ckt.solve_for("z"))
}

pub fn all_dims() -> impl Iterator<Item = [usize; 4]> {
    (0..256).map(|k| [k % 4 + 1, (k / 4) % 4 + 1, (k / 16) % 4 + 1, k / 64 + 1])
}
