//! Seeded generation of positive definite test matrices.
//!
//! Every draw comes from a ChaCha20 stream keyed by a 64-bit seed (expanded
//! with `SeedableRng::seed_from_u64`) and a 64-bit stream id, so a config
//! reproduces the same matrices on every call. Campaigns derive per-trial
//! seeds with [`trial_seed`].

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{congruence, hermitian_eigen, Matrix, SpdMatrix};

pub const MAX_DIMENSION: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Structure {
    Generic,
    Commuting,
    /// Pairs satisfying `B^t <= A^{t-2}`.
    FurutaPremise(f64),
    /// Spectrum split into two tight clusters at the ends of the range.
    IllConditioned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub condition_target: f64,
    pub seed: u64,
    pub structure: Structure,
}

impl SamplerConfig {
    pub fn new(n: usize, condition_target: f64, seed: u64) -> Result<Self> {
        SamplerConfig { n, condition_target, seed, structure: Structure::Generic }.validated()
    }

    pub fn with_structure(mut self, structure: Structure) -> Result<Self> {
        self.structure = structure;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if self.n == 0 || self.n > MAX_DIMENSION {
            return Err(Error::ParamOutOfRange { name: "n", value: self.n as f64, range: "[1, 16]" });
        }
        if !(self.condition_target >= 1.0 && self.condition_target.is_finite()) {
            return Err(Error::ParamOutOfRange {
                name: "condition_target",
                value: self.condition_target,
                range: "[1, inf)",
            });
        }
        if let Structure::FurutaPremise(t) = self.structure {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::TOutOfRange { t, range: "(0, 1]" });
            }
        }
        Ok(self)
    }

    fn rng(&self) -> ChaCha20Rng {
        stream(self.seed, 0)
    }
}

/// ChaCha20 generator for `(seed, stream)`.
pub fn stream(seed: u64, stream_id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Seed of trial `index` under `master`: the first word of stream `index`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    stream(master, index).random()
}

fn gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-like random unitary: Gram-Schmidt on a complex Gaussian matrix, then
/// each column rotated so its first nonzero entry is real positive.
pub fn random_unitary(rng: &mut ChaCha20Rng, n: usize) -> Matrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
    for j in 0..n {
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let first = cols[j].iter().copied().find(|z| z.norm() > 0.0).unwrap_or(Complex64::new(1.0, 0.0));
        let phase = first.conj() / first.norm();
        let lead = cols[j].iter().position(|z| z.norm() > 0.0);
        for v in cols[j].iter_mut() {
            *v = *v * phase / norm;
        }
        if let Some(i) = lead {
            cols[j][i] = Complex64::new(cols[j][i].norm(), 0.0);
        }
    }
    let mut u = Matrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// Spectrum with extremes pinned at `kappa^{+-1/2}` and the interior
/// log-uniform in between, in random order.
fn log_uniform_spectrum(rng: &mut ChaCha20Rng, n: usize, kappa: f64) -> Vec<f64> {
    let half = 0.5 * kappa.ln();
    let mut values: Vec<f64> = match n {
        1 => vec![1.0],
        _ => {
            let mut v = vec![half.exp(), (-half).exp()];
            v.extend((2..n).map(|_| (rng.random_range(-half..=half)).exp()));
            v
        }
    };
    values.shuffle(rng);
    values
}

fn clustered_spectrum(rng: &mut ChaCha20Rng, n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let (hi, lo) = (kappa.sqrt(), kappa.sqrt().recip());
    // The two extremes are exact so the target is met; the rest sit just
    // inside them, clamped so small targets cannot push them outside.
    let mut values: Vec<f64> = (0..n)
        .map(|i| {
            let jitter = if i < 2 { 1.0 } else { 1.0 + 1e-3 * rng.random::<f64>() };
            if i % 2 == 0 {
                (hi / jitter).max(lo)
            } else {
                (lo * jitter).min(hi)
            }
        })
        .collect();
    values.shuffle(rng);
    values
}

fn assemble(u: &Matrix, spectrum: &[f64]) -> Result<SpdMatrix> {
    let d = Matrix::from_diag(spectrum);
    let m = &(u * &d) * &u.adjoint();
    SpdMatrix::new(m.hermitian_part())
}

fn draw_spd(rng: &mut ChaCha20Rng, n: usize, kappa: f64, structure: Structure) -> Result<SpdMatrix> {
    let u = random_unitary(rng, n);
    let spectrum = match structure {
        Structure::IllConditioned => clustered_spectrum(rng, n, kappa),
        _ => log_uniform_spectrum(rng, n, kappa),
    };
    assemble(&u, &spectrum)
}

/// One random positive definite matrix with condition number equal to the
/// target (up to rounding).
pub fn random_spd(config: &SamplerConfig) -> Result<SpdMatrix> {
    let mut rng = config.rng();
    draw_spd(&mut rng, config.n, config.condition_target, config.structure)
}

/// Pair drawn according to `config.structure`.
pub fn random_pair(config: &SamplerConfig) -> Result<(SpdMatrix, SpdMatrix)> {
    match config.structure {
        Structure::Commuting => random_commuting_pair(config),
        Structure::FurutaPremise(t) => random_furuta_pair(config, t),
        s => {
            let mut rng = config.rng();
            let a = draw_spd(&mut rng, config.n, config.condition_target, s)?;
            let b = draw_spd(&mut rng, config.n, config.condition_target, s)?;
            Ok((a, b))
        }
    }
}

/// `m` matrices, sharing one eigenbasis when `config.structure` is
/// `Commuting`.
pub fn random_family(config: &SamplerConfig, m: usize) -> Result<Vec<SpdMatrix>> {
    let mut rng = config.rng();
    match config.structure {
        Structure::Commuting => {
            let u = random_unitary(&mut rng, config.n);
            (0..m).map(|_| assemble(&u, &log_uniform_spectrum(&mut rng, config.n, config.condition_target))).collect()
        }
        s => (0..m).map(|_| draw_spd(&mut rng, config.n, config.condition_target, s)).collect(),
    }
}

/// Two matrices with a shared random eigenbasis and independent spectra.
pub fn random_commuting_pair(config: &SamplerConfig) -> Result<(SpdMatrix, SpdMatrix)> {
    let mut rng = config.rng();
    let u = random_unitary(&mut rng, config.n);
    let a = assemble(&u, &log_uniform_spectrum(&mut rng, config.n, config.condition_target))?;
    let b = assemble(&u, &log_uniform_spectrum(&mut rng, config.n, config.condition_target))?;
    Ok((a, b))
}

/// Pair satisfying the premise `B^t <= A^{t-2}`, `0 < t <= 1`.
///
/// `A` and `B0` are drawn with the target condition number, then
/// `B = c B0` with `c^t = u / lambda_max(A^{1-t/2} B0^t A^{1-t/2})` and `u`
/// uniform in `(0, 1]`, so that `A^{1-t/2} B^t A^{1-t/2} <= u I`, which is
/// the premise congruence-transformed by `A^{1-t/2}`.
pub fn random_furuta_pair(config: &SamplerConfig, t: f64) -> Result<(SpdMatrix, SpdMatrix)> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::TOutOfRange { t, range: "(0, 1]" });
    }
    let mut rng = config.rng();
    let a = draw_spd(&mut rng, config.n, config.condition_target, Structure::Generic)?;
    let b0 = draw_spd(&mut rng, config.n, config.condition_target, Structure::Generic)?;
    let u = 1.0 - rng.random::<f64>();
    let inner = congruence(b0.power(t)?.matrix(), a.power(1.0 - t / 2.0)?.matrix())?;
    let top = hermitian_eigen(&inner)?.values()[0];
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::ConstructionFailed(format!("premise scale undefined (largest eigenvalue {top:e})")));
    }
    let b = b0.scale((u / top).powf(1.0 / t))?;
    Ok((a, b))
}
