//! Benchmark functions: a rational test function and three waveguide
//! dispersion determinants.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

pub use crate::phase::AnalyticFunction;
use crate::specials::{bessel_jy, SpecialsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuncsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Bessel(#[from] SpecialsError),
}

const NAN: C64 = C64::new(f64::NAN, f64::NAN);

/// `(z−1)(z−i)²(z+1)³/(z+i)`: simple root at 1, double root at i, triple
/// root at −1 and a simple pole at −i.
pub fn demo_rational(z: C64) -> C64 {
    let i = C64::i();
    (z - 1.0) * (z - i).powu(2) * (z + 1.0).powu(3) / (z + i)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DemoRational;

impl AnalyticFunction<f64> for DemoRational {
    fn evaluate(&self, z: C64) -> C64 {
        demo_rational(z)
    }

    fn name(&self) -> String {
        "demo".into()
    }
}

/// Determinant of `m` by Gaussian elimination with partial pivoting.
pub fn determinant<const N: usize>(mut m: [[C64; N]; N]) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap_or(col);
        if m[pivot][col] == C64::new(0.0, 0.0) {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..N {
            let factor = m[row][col] / p;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for k in col..N {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    det
}

/// Which version of the coaxially loaded waveguide matrix to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WaveguideForm {
    /// Azimuthal coupling terms scaled by `k0·a`, `k0·b`; the last row's
    /// derivative entries divided by `κ2`. Dimensionally consistent.
    #[default]
    Consistent,
    /// Coupling terms with bare `a`, `b` and an unscaled last row. Not
    /// dimensionally consistent; kept for comparison.
    Unscaled,
}

/// Dielectric-loaded circular waveguide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveguideParams {
    /// dielectric rod radius (m)
    pub a: f64,
    /// metal wall radius (m)
    pub b: f64,
    pub eps_r: f64,
    /// azimuthal mode index
    pub m: usize,
    /// Hz
    pub freq: f64,
    /// speed of light used for `k0` (m/s)
    pub c: f64,
    /// wave impedance (Ω)
    pub eta0: f64,
    pub form: WaveguideForm,
}

impl Default for WaveguideParams {
    fn default() -> Self {
        Self {
            a: 6.35e-3,
            b: 10e-3,
            eps_r: 10.0,
            m: 1,
            freq: 5e9,
            c: 3e8,
            eta0: 120.0 * PI,
            form: WaveguideForm::Consistent,
        }
    }
}

impl WaveguideParams {
    pub fn validate(&self) -> Result<(), FuncsError> {
        let bad = |s: &str| Err(FuncsError::InvalidParameter(s.into()));
        if !(self.a > 0.0 && self.a < self.b && self.b.is_finite()) {
            return bad("waveguide needs 0 < a < b");
        }
        if !(self.eps_r >= 1.0 && self.eps_r.is_finite()) {
            return bad("waveguide needs eps_r >= 1");
        }
        if !(self.freq > 0.0 && self.freq.is_finite() && self.c > 0.0 && self.eta0 > 0.0) {
            return bad("waveguide needs freq, c, eta0 > 0");
        }
        Ok(())
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI * self.freq / self.c
    }
}

/// Dispersion determinant of the dielectric-loaded circular waveguide at
/// normalized propagation coefficient `z`.
pub fn circular_waveguide_det(z: C64, p: &WaveguideParams) -> Result<C64, FuncsError> {
    let i = C64::i();
    let k0 = p.k0();
    let k1 = (z * z + p.eps_r).sqrt();
    let k2 = (z * z + 1.0).sqrt();
    let m = p.m;
    let zm = z * m as f64;
    let b1 = bessel_jy(m, k1 * (k0 * p.a))?;
    let b2 = bessel_jy(m, k2 * (k0 * p.a))?;
    let b3 = bessel_jy(m, k2 * (k0 * p.b))?;
    let (la, lb) = match p.form {
        WaveguideForm::Consistent => (k0 * p.a, k0 * p.b),
        WaveguideForm::Unscaled => (p.a, p.b),
    };
    let d6 = match p.form {
        WaveguideForm::Consistent => k2,
        WaveguideForm::Unscaled => C64::new(1.0, 0.0),
    };
    let e = p.eta0;
    let z0 = C64::new(0.0, 0.0);
    let c1 = zm / (k1 * k1 * la);
    let c2 = zm / (k2 * k2 * la);
    let c3 = zm / (k2 * lb);
    let mat = [
        [-b1.j, z0, b2.j, b2.y, z0, z0],
        [z0, b1.j, z0, z0, -b2.j, -b2.y],
        [-c1 * b1.j, -i * e * b1.jp / k1, c2 * b2.j, c2 * b2.y, i * e * b2.jp / k2, i * e * b2.yp / k2],
        [-i * p.eps_r * b1.jp / (k1 * e), -c1 * b1.j, i * b2.jp / (k2 * e), i * b2.yp / (k2 * e), c2 * b2.j, c2 * b2.y],
        [z0, z0, b3.j, b3.y, z0, z0],
        [z0, z0, c3 * b3.j, c3 * b3.y, i * e * b3.jp / d6, i * e * b3.yp / d6],
    ];
    Ok(determinant(mat))
}

/// The waveguide determinant in the scaled variable `z̄ = z / scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircularWaveguide {
    pub params: WaveguideParams,
    pub scale: f64,
}

impl Default for CircularWaveguide {
    fn default() -> Self {
        Self { params: WaveguideParams::default(), scale: 10.0 }
    }
}

impl AnalyticFunction<f64> for CircularWaveguide {
    fn evaluate(&self, zbar: C64) -> C64 {
        circular_waveguide_det(zbar * self.scale, &self.params).unwrap_or(NAN)
    }

    fn name(&self) -> String {
        "cwg".into()
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.params;
        vec![
            ("a".into(), format!("{:e}", p.a)),
            ("b".into(), format!("{:e}", p.b)),
            ("eps_r".into(), p.eps_r.to_string()),
            ("m".into(), p.m.to_string()),
            ("freq".into(), format!("{:e}", p.freq)),
            ("c".into(), format!("{:e}", p.c)),
            ("eta0".into(), p.eta0.to_string()),
            ("scale".into(), self.scale.to_string()),
            ("form".into(), format!("{:?}", p.form)),
        ]
    }
}

/// Three-layer planar guide: film of index `n1` on substrate `n_s`, cover `n_c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultilayerParams {
    pub n1: C64,
    pub n_s: C64,
    pub n_c: C64,
    /// film thickness (µm)
    pub d1: f64,
    /// free-space wavelength (µm)
    pub lambda0: f64,
}

impl Default for MultilayerParams {
    fn default() -> Self {
        Self {
            n1: C64::new(1.5835, 0.0),
            n_s: C64::new(0.065, -4.0),
            n_c: C64::new(1.0, 0.0),
            d1: 1.81,
            lambda0: 0.6328,
        }
    }
}

impl MultilayerParams {
    pub fn validate(&self) -> Result<(), FuncsError> {
        if !(self.d1 > 0.0 && self.lambda0 > 0.0 && self.d1.is_finite() && self.lambda0.is_finite()) {
            return Err(FuncsError::InvalidParameter("multilayer needs d1 > 0 and lambda0 > 0".into()));
        }
        Ok(())
    }
}

/// Dispersion determinant of the lossy three-layer guide.
pub fn multilayer_det(z: C64, p: &MultilayerParams) -> C64 {
    let i = C64::i();
    let k0 = 2.0 * PI / p.lambda0;
    let k1 = (p.n1 * p.n1 - z * z).sqrt();
    let gs = (z * z - p.n_s * p.n_s).sqrt();
    let gc = (z * z - p.n_c * p.n_c).sqrt();
    let phase = k1 * (k0 * p.d1);
    let (s, c) = (phase.sin(), phase.cos());
    let m12 = -c - gc * s / k1;
    let m22 = -i * k1 * s + i * gc * c;
    m22 - m12 * (i * gs)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MultilayerWaveguide {
    pub params: MultilayerParams,
}

impl AnalyticFunction<f64> for MultilayerWaveguide {
    fn evaluate(&self, z: C64) -> C64 {
        multilayer_det(z, &self.params)
    }

    fn name(&self) -> String {
        "mlwg".into()
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.params;
        vec![
            ("n1".into(), p.n1.to_string()),
            ("nS".into(), p.n_s.to_string()),
            ("nC".into(), p.n_c.to_string()),
            ("d1".into(), p.d1.to_string()),
            ("lambda0".into(), p.lambda0.to_string()),
        ]
    }
}

pub mod constants {
    /// elementary charge (C)
    pub const Q_E: f64 = 1.602_176_634e-19;
    /// Boltzmann constant (J/K)
    pub const K_B: f64 = 1.380_649e-23;
    /// reduced Planck constant (J·s)
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// speed of light (m/s)
    pub const C: f64 = 299_792_458.0;
    /// vacuum wave impedance μ0·c (Ω)
    pub const ETA0: f64 = 376.730_313_668;
}

/// Graphene sheet on a dielectric substrate, TM modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrapheneParams {
    /// K
    pub temperature: f64,
    /// relaxation time (s)
    pub tau: f64,
    /// chemical potential (J)
    pub mu_c: f64,
    /// Fermi velocity (m/s)
    pub v_f: f64,
    /// Hz
    pub freq: f64,
    pub eps_r1: f64,
    pub eps_r2: f64,
    pub q_e: f64,
    pub k_b: f64,
    pub hbar: f64,
    pub c: f64,
    pub eta0: f64,
}

impl Default for GrapheneParams {
    fn default() -> Self {
        use constants::*;
        Self {
            temperature: 300.0,
            tau: 0.135e-12,
            mu_c: 0.05 * Q_E,
            v_f: 1e6,
            freq: 1e12,
            eps_r1: 1.0,
            eps_r2: 11.9,
            q_e: Q_E,
            k_b: K_B,
            hbar: HBAR,
            c: C,
            eta0: ETA0,
        }
    }
}

impl GrapheneParams {
    pub fn validate(&self) -> Result<(), FuncsError> {
        let all = [
            self.temperature,
            self.tau,
            self.v_f,
            self.freq,
            self.eps_r1,
            self.eps_r2,
            self.q_e,
            self.k_b,
            self.hbar,
            self.c,
            self.eta0,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) || !self.mu_c.is_finite() {
            return Err(FuncsError::InvalidParameter("graphene parameters must be positive and finite".into()));
        }
        Ok(())
    }

    fn damping(&self) -> C64 {
        C64::new(2.0 * PI * self.freq, -1.0 / self.tau)
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI * self.freq / self.c
    }

    /// Intraband (low-order) surface conductivity (S).
    pub fn sigma_lo(&self) -> C64 {
        let kt = self.k_b * self.temperature;
        let log = (2.0 * (1.0 + (self.mu_c / kt).cosh())).ln();
        -C64::i() * self.q_e * self.q_e * kt / (PI * self.hbar * self.hbar * self.damping()) * log
    }

    /// First spatial-dispersion coefficient.
    pub fn alpha_sd(&self) -> C64 {
        let d = self.damping();
        -3.0 * self.v_f * self.v_f * self.sigma_lo() / (4.0 * d * d)
    }

    pub fn beta_sd(&self) -> C64 {
        self.alpha_sd() / 3.0
    }
}

/// Branch signs of `√(εr1+z²)` and `√(εr2+z²)`.
pub type Sheet = (bool, bool);

/// The TM dispersion function on one Riemann sheet; `true` selects the
/// principal root, `false` its negative.
pub fn graphene_tm(z: C64, p: &GrapheneParams, sheet: Sheet) -> C64 {
    let sign = |s: bool| if s { 1.0 } else { -1.0 };
    let z2 = z * z;
    let r1 = (z2 + p.eps_r1).sqrt() * sign(sheet.0);
    let r2 = (z2 + p.eps_r2).sqrt() * sign(sheet.1);
    let k0 = p.k0();
    p.eps_r1 / (p.eta0 * r1) + p.eps_r2 / (p.eta0 * r2) + (p.sigma_lo() - z2 * k0 * k0 * (p.alpha_sd() + p.beta_sd()))
}

pub const SHEETS: [Sheet; 4] = [(true, true), (true, false), (false, true), (false, false)];

/// Product of [`graphene_tm`] over all four sheets, single-valued in `z`.
pub fn graphene_sheet_product(z: C64, p: &GrapheneParams) -> C64 {
    SHEETS.iter().map(|&s| graphene_tm(z, p, s)).product()
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GrapheneLine {
    pub params: GrapheneParams,
}

impl AnalyticFunction<f64> for GrapheneLine {
    fn evaluate(&self, z: C64) -> C64 {
        graphene_sheet_product(z, &self.params)
    }

    fn name(&self) -> String {
        "gtl".into()
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.params;
        vec![
            ("T".into(), p.temperature.to_string()),
            ("tau".into(), format!("{:e}", p.tau)),
            ("mu_c".into(), format!("{:e}", p.mu_c)),
            ("v_F".into(), format!("{:e}", p.v_f)),
            ("freq".into(), format!("{:e}", p.freq)),
            ("eps_r1".into(), p.eps_r1.to_string()),
            ("eps_r2".into(), p.eps_r2.to_string()),
            ("eta0".into(), p.eta0.to_string()),
        ]
    }
}
