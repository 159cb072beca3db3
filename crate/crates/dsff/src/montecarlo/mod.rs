//! Monte Carlo estimate of the DSFF from sampled elliptic Ginibre matrices.
//!
//! Draws are reproducible: `(seed, stream_id, trial, entry)` fixes the position in a ChaCha
//! stream, and every matrix entry consumes exactly two 64-bit words.

mod eig;

pub use eig::{eigenvalues, CMatrix, SWEEPS_PER_DIM};

use std::f64::consts::TAU;
use std::io::{self, Read, Write};

use num_complex::Complex64;
use rand::RngCore;
use rand_chacha::ChaCha20Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::error::{domain, DsffError, Result};
use crate::finite_n::{ComplexTime, Provenance};
use crate::quad::KahanSum;

/// 64-bit words consumed per complex Gaussian.
pub const WORDS_PER_ENTRY: u64 = 2;
/// Sum-rule tolerance, relative to `N ||X||_F`.
pub const SUM_RULE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n: usize,
    pub tau: f64,
    pub trials: usize,
    pub seed: u64,
    pub stream_id: u64,
}

impl SamplerConfig {
    pub fn new(n: usize, tau: f64, trials: usize, seed: u64, stream_id: u64) -> Result<Self> {
        if n == 0 {
            return domain("SamplerConfig: N must be positive");
        }
        if !(0.0..1.0).contains(&tau) {
            return domain(format!("SamplerConfig: tau = {tau} outside [0, 1)"));
        }
        if trials == 0 {
            return domain("SamplerConfig: trials must be at least 1");
        }
        Ok(Self { n, tau, trials, seed, stream_id })
    }
}

/// Uniform on `(0, 1]` from the top 53 bits.
fn open_unit(w: u64) -> f64 {
    ((w >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Box–Muller pair from two words: a complex Gaussian with `E|g|^2 = 2 sigma^2`.
fn gaussian_pair(w1: u64, w2: u64, sigma: f64) -> Complex64 {
    let r = (-2.0 * open_unit(w1).ln()).sqrt() * sigma;
    let (s, c) = (TAU * open_unit(w2)).sin_cos();
    Complex64::new(r * c, r * s)
}

/// Ginibre matrix `G` with entries of variance `1/N` for one trial.
pub fn sample_ginibre(config: &SamplerConfig, trial: u64) -> CMatrix {
    let n = config.n;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    rng.set_stream(config.stream_id);
    // ChaCha words are 32-bit; each entry uses two u64 draws.
    let words = trial as u128 * (n * n) as u128 * WORDS_PER_ENTRY as u128 * 2;
    rng.set_word_pos(words);
    let sigma = (0.5 / n as f64).sqrt();
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (rng.next_u64(), rng.next_u64());
            g[(i, j)] = gaussian_pair(a, b, sigma);
        }
    }
    g
}

/// `X = sqrt(1+tau)/2 (G + G^*) + sqrt(1-tau)/2 (G - G^*)`.
pub fn elliptic_from_ginibre(g: &CMatrix, tau: f64) -> CMatrix {
    let n = g.dim();
    let (a, b) = ((1.0 + tau).sqrt() / 2.0, (1.0 - tau).sqrt() / 2.0);
    let mut x = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (gij, gji) = (g[(i, j)], g[(j, i)].conj());
            x[(i, j)] = (gij + gji) * a + (gij - gji) * b;
        }
    }
    x
}

pub fn sample_eginue(config: &SamplerConfig, trial: u64) -> CMatrix {
    elliptic_from_ginibre(&sample_ginibre(config, trial), config.tau)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `|sum lambda - tr X|`.
    pub trace_defect: f64,
    /// `|sum lambda^2 - tr X^2|`.
    pub second_moment_defect: f64,
    pub frobenius: f64,
}

impl Spectrum {
    /// Both sum-rule defects are within `SUM_RULE_TOL * N * ||X||_F`.
    pub fn check(&self) -> Result<()> {
        let bound = SUM_RULE_TOL * self.eigenvalues.len() as f64 * self.frobenius;
        if self.trace_defect > bound || self.second_moment_defect > bound {
            return Err(DsffError::Integrity(format!(
                "spectrum: sum-rule defects ({:e}, {:e}) exceed {:e}",
                self.trace_defect, self.second_moment_defect, bound
            )));
        }
        Ok(())
    }
}

pub fn spectrum(x: &CMatrix) -> Result<Spectrum> {
    if !x.is_finite() {
        return domain("spectrum: matrix has non-finite entries");
    }
    let ev = eigenvalues(x)?;
    let s1: Complex64 = ev.iter().sum();
    let s2: Complex64 = ev.iter().map(|z| z * z).sum();
    Ok(Spectrum {
        trace_defect: (s1 - x.trace()).norm(),
        second_moment_defect: (s2 - x.trace_of_square()).norm(),
        frobenius: x.frobenius(),
        eigenvalues: ev,
    })
}

/// `Z_N = sum_j exp(i t x_j + i s y_j)` for eigenvalues `z_j = x_j + i y_j`.
pub fn z_n(eigs: &[Complex64], time: &ComplexTime) -> Complex64 {
    let (t, s) = (time.t(), time.s());
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for z in eigs {
        let (sn, cs) = (t * z.re + s * z.im).sin_cos();
        re.add(cs);
        im.add(sn);
    }
    Complex64::new(re.value(), im.value())
}

/// Checked spectrum of trial `trial`.
pub fn trial_spectrum(config: &SamplerConfig, trial: u64) -> Result<Spectrum> {
    let sp = spectrum(&sample_eginue(config, trial))?;
    sp.check()?;
    Ok(sp)
}

/// Checked spectra of all trials, in trial order.
pub fn sample_spectra(config: &SamplerConfig) -> Result<Vec<Vec<Complex64>>> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|k| trial_spectrum(config, k).map(|s| s.eigenvalues))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DsffEstimate {
    pub disconnected: f64,
    pub connected: f64,
    pub total: f64,
    pub stderr_disconnected: f64,
    pub stderr_connected: f64,
    pub stderr_total: f64,
    pub trials_used: usize,
}

impl DsffEstimate {
    pub fn provenance(&self) -> Provenance {
        Provenance::MonteCarlo
    }
}

fn mean_and_stderr(v: impl Iterator<Item = f64> + Clone, m: usize) -> (f64, f64) {
    let mut s = KahanSum::default();
    for x in v.clone() {
        s.add(x);
    }
    let mean = s.value() / m as f64;
    let mut q = KahanSum::default();
    for x in v {
        q.add((x - mean) * (x - mean));
    }
    let var = q.value() / (m as f64 - 1.0);
    (mean, (var / m as f64).sqrt())
}

/// Disconnected `|<Z>|^2`, connected `<|Z - <Z>|^2>` with the `m/(m-1)` correction, and
/// standard errors (delta method for the disconnected part).
pub fn estimate_from_samples(z: &[Complex64]) -> Result<DsffEstimate> {
    let m = z.len();
    if m < 2 {
        return domain(format!("estimate: need at least 2 trials, got {m}"));
    }
    let (mut re, mut im) = (KahanSum::default(), KahanSum::default());
    for w in z {
        re.add(w.re);
        im.add(w.im);
    }
    let mean = Complex64::new(re.value(), im.value()) / m as f64;
    let dev = |w: &Complex64| (w - mean).norm_sqr();
    let proj = |w: &Complex64| 2.0 * (mean.conj() * w).re;
    let (conn_biased, se_c) = mean_and_stderr(z.iter().map(dev), m);
    let (_, se_d) = mean_and_stderr(z.iter().map(proj), m);
    let (_, se_t) = mean_and_stderr(z.iter().map(|w| proj(w) + dev(w)), m);
    let disc = mean.norm_sqr();
    let conn = conn_biased * m as f64 / (m as f64 - 1.0);
    Ok(DsffEstimate {
        disconnected: disc,
        connected: conn,
        total: disc + conn,
        stderr_disconnected: se_d,
        stderr_connected: se_c,
        stderr_total: se_t,
        trials_used: m,
    })
}

pub fn estimate_dsff(config: &SamplerConfig, time: &ComplexTime) -> Result<DsffEstimate> {
    Ok(estimate_dsff_grid(config, std::slice::from_ref(time))?.remove(0))
}

/// One set of spectra reused for every time on the grid.
pub fn estimate_dsff_grid(config: &SamplerConfig, times: &[ComplexTime]) -> Result<Vec<DsffEstimate>> {
    if config.trials < 2 {
        return domain(format!("estimate_dsff: need at least 2 trials, got {}", config.trials));
    }
    let spectra = sample_spectra(config)?;
    times
        .iter()
        .map(|t| {
            let z: Vec<Complex64> = spectra.iter().map(|e| z_n(e, t)).collect();
            estimate_from_samples(&z)
        })
        .collect()
}

/// Mean and standard error over trials of `sum |z_j|^2 / N`.
pub fn second_moment(spectra: &[Vec<Complex64>]) -> Result<(f64, f64)> {
    if spectra.len() < 2 {
        return domain("second_moment: need at least 2 trials");
    }
    let v = spectra.iter().map(|e| e.iter().map(|z| z.norm_sqr()).sum::<f64>() / e.len() as f64);
    Ok(mean_and_stderr(v, spectra.len()))
}

const DUMP_MAGIC: &[u8; 4] = b"DSFF";
pub const DUMP_VERSION: u32 = 1;

/// Per-trial `Z_N` as little-endian: magic, version, N, trials, then `(re, im)` pairs.
pub fn write_zn_dump(mut w: impl Write, n: usize, z: &[Complex64]) -> io::Result<()> {
    let too_big = |what: &str| io::Error::new(io::ErrorKind::InvalidInput, format!("{what} exceeds u32"));
    let n32 = u32::try_from(n).map_err(|_| too_big("N"))?;
    let m32 = u32::try_from(z.len()).map_err(|_| too_big("trial count"))?;
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&DUMP_VERSION.to_le_bytes())?;
    w.write_all(&n32.to_le_bytes())?;
    w.write_all(&m32.to_le_bytes())?;
    for v in z {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

/// Inverse of [`write_zn_dump`]: `(N, samples)`.
pub fn read_zn_dump(mut r: impl Read) -> io::Result<(usize, Vec<Complex64>)> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(bad("not a DSFF dump"));
    }
    let mut word = [0u8; 4];
    let mut next_u32 = |r: &mut dyn Read| -> io::Result<u32> {
        r.read_exact(&mut word)?;
        Ok(u32::from_le_bytes(word))
    };
    let version = next_u32(&mut r)?;
    if version != DUMP_VERSION {
        return Err(bad("unsupported dump version"));
    }
    let n = next_u32(&mut r)? as usize;
    let m = next_u32(&mut r)? as usize;
    let mut out = Vec::with_capacity(m);
    let mut b = [0u8; 8];
    for _ in 0..m {
        r.read_exact(&mut b)?;
        let re = f64::from_le_bytes(b);
        r.read_exact(&mut b)?;
        out.push(Complex64::new(re, f64::from_le_bytes(b)));
    }
    Ok((n, out))
}
