//! Bessel functions of integer order and complex argument by ascending series.

use num_complex::Complex;
use thiserror::Error;

use crate::Scalar;

/// Largest `|z|` the series are trusted for.
pub const MAX_ARG: f64 = 30.0;
const MAX_TERMS: usize = 200;
const REL_CUTOFF: f64 = 1e-18;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialsError {
    #[error("|z| = {0} is outside the validated range |z| <= 30")]
    OutOfRange(f64),
    #[error("Y_n is singular at z = 0")]
    Singular,
    #[error("argument is not finite")]
    NonFinite,
}

/// `J_m, Y_m` and their derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPair<T> {
    pub j: Complex<T>,
    pub y: Complex<T>,
    pub jp: Complex<T>,
    pub yp: Complex<T>,
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy)]
struct Kahan<T> {
    sum: Complex<T>,
    comp: Complex<T>,
}

impl<T: Scalar> Kahan<T> {
    fn new() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { sum: z, comp: z }
    }

    fn add(&mut self, x: Complex<T>) {
        fn step<T: Scalar>(s: T, c: &mut T, x: T) -> T {
            let t = s + x;
            *c = *c + if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
            t
        }
        self.sum.re = step(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = step(self.sum.im, &mut self.comp.im, x.im);
    }

    fn value(&self) -> Complex<T> {
        self.sum + self.comp
    }
}

fn check<T: Scalar>(z: Complex<T>) -> Result<(), SpecialsError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecialsError::NonFinite);
    }
    let r = z.norm().as_f64();
    if r > MAX_ARG {
        return Err(SpecialsError::OutOfRange(r));
    }
    Ok(())
}

fn factorial<T: Scalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

/// Sums `Σ_k w_k (−z²/4)^k / (k!(n+k)!)` with `w_k = weight(k)`, without the
/// `(z/2)^n` prefactor.
fn series<T: Scalar>(n: usize, z: Complex<T>, weight: impl Fn(usize) -> T) -> Complex<T> {
    let quarter = T::lit(0.25);
    let x = -(z * z) * quarter;
    let mut term = Complex::new(T::one() / factorial::<T>(n), T::zero());
    let mut acc = Kahan::new();
    let mut peak = T::zero();
    let cutoff = T::lit(REL_CUTOFF);
    for k in 0..MAX_TERMS {
        if k > 0 {
            term = term * x / (T::from_usize_lossy(k) * T::from_usize_lossy(n + k));
        }
        let w = term * weight(k);
        acc.add(w);
        let mag = term.norm();
        peak = peak.max(mag);
        if mag <= cutoff * peak && k > 0 {
            break;
        }
    }
    acc.value()
}

fn half_pow<T: Scalar>(z: Complex<T>, n: usize) -> Complex<T> {
    (z * T::lit(0.5)).powu(n as u32)
}

/// `J_n(z)` for `|z| ≤ 30`.
pub fn bessel_j<T: Scalar>(n: usize, z: Complex<T>) -> Result<Complex<T>, SpecialsError> {
    check(z)?;
    Ok(half_pow(z, n) * series(n, z, |_| T::one()))
}

/// `Y_n(z)` for `0 < |z| ≤ 30`, principal branch of the logarithm.
pub fn bessel_y<T: Scalar>(n: usize, z: Complex<T>) -> Result<Complex<T>, SpecialsError> {
    let j = bessel_j(n, z)?;
    y_with_j(n, z, j)
}

fn y_with_j<T: Scalar>(n: usize, z: Complex<T>, j: Complex<T>) -> Result<Complex<T>, SpecialsError> {
    if z.norm_sqr() == T::zero() {
        return Err(SpecialsError::Singular);
    }
    let pi = T::PI();
    let half = z * T::lit(0.5);
    let log_term = j * half.ln() * (T::lit(2.0) / pi);

    let mut finite = Kahan::new();
    if n > 0 {
        // Σ_{k<n} (n−k−1)!/k! (z/2)^{2k−n}
        let inv = half.inv();
        let mut p = inv.powu(n as u32);
        let h2 = half * half;
        for k in 0..n {
            finite.add(p * (factorial::<T>(n - k - 1) / factorial::<T>(k)));
            p = p * h2;
        }
    }

    // ψ(k+1) + ψ(n+k+1), with ψ(m+1) = −γ + H_m
    let gamma = T::lit(EULER_GAMMA);
    let harmonic = |m: usize| (1..=m).fold(T::zero(), |acc, i| acc + T::one() / T::from_usize_lossy(i));
    let psi_sum = |k: usize| harmonic(k) + harmonic(n + k) - gamma - gamma;
    let digamma = half_pow(z, n) * series(n, z, psi_sum);

    Ok(log_term - (finite.value() + digamma) / pi)
}

/// `J_m, Y_m, J′_m, Y′_m` at `z`, with `J′_m = (J_{m−1} − J_{m+1})/2`
/// (`J′_0 = −J_1`) and likewise for `Y`.
pub fn bessel_jy<T: Scalar>(m: usize, z: Complex<T>) -> Result<BesselPair<T>, SpecialsError> {
    let j = bessel_j(m, z)?;
    let y = y_with_j(m, z, j)?;
    let j1 = bessel_j(m + 1, z)?;
    let y1 = y_with_j(m + 1, z, j1)?;
    let half = T::lit(0.5);
    let (jp, yp) = if m == 0 {
        (-j1, -y1)
    } else {
        let j0 = bessel_j(m - 1, z)?;
        let y0 = y_with_j(m - 1, z, j0)?;
        ((j0 - j1) * half, (y0 - y1) * half)
    };
    Ok(BesselPair { j, y, jp, yp })
}
