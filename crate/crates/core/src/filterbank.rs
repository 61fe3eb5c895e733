//! q-band wavelet filter banks built from the columns of `R_q`.
//!
//! Everything lives on `Z_N` with circular boundaries and 0-based indices.
//! Analysis of one stage is `D(z * ũ_i)`, synthesis is `sum_i U(y_i) * u_i`.
//! The analysis filters of a bank built by [`FilterBank::from_orpt`] are the
//! normalized columns of `R_q` padded with zeros, so `u_1` is the averaging
//! filter and `u_2..u_q` carry detail.
//!
//! The DFT here is the plain `O(N^2)` sum and only backs verification; the
//! transforms themselves run in the time domain.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{check_divides, check_len, Error, Result};
use crate::orpt::OrptBasis;

/// Default tolerance for the DFT-domain checks.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Scalar sample type for the generic sequence operations.
pub trait Sample: Copy + Add<Output = Self> + Mul<Output = Self> + PartialEq {
    fn zero() -> Self;
    fn conj(self) -> Self;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }

    fn conj(self) -> Self {
        self
    }
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

/// Circular convolution `(a * b)(n) = sum_m a((n - m) mod N) b(m)`.
pub fn circular_convolve<T: Sample>(a: &[T], b: &[T]) -> Result<Vec<T>> {
    check_len(a.len(), b.len())?;
    let n = a.len();
    let mut out = vec![T::zero(); n];
    for (m, &bm) in b.iter().enumerate() {
        if bm == T::zero() {
            continue;
        }
        // out[i] += a[(i - m) mod n] * bm
        for (i, o) in out.iter_mut().enumerate() {
            *o = *o + a[(i + n - m) % n] * bm;
        }
    }
    Ok(out)
}

/// `ã(n) = conj(a((N - n) mod N))`.
pub fn tilde<T: Sample>(a: &[T]) -> Vec<T> {
    let n = a.len();
    (0..n).map(|i| a[(n - i) % n].conj()).collect()
}

/// Cyclic delay `(S_d z)(n) = z((n - d) mod N)`.
pub fn shift<T: Copy>(z: &[T], d: usize) -> Vec<T> {
    let n = z.len();
    if n == 0 {
        return Vec::new();
    }
    (0..n).map(|i| z[(i + n - d % n) % n]).collect()
}

/// `D^l(z)(n) = z(q^l n)`; requires `q^l | len(z)`.
pub fn downsample<T: Copy>(z: &[T], q: usize, l: u32) -> Result<Vec<T>> {
    let step = q.pow(l);
    check_divides(step, z.len())?;
    Ok(z.iter().step_by(step).copied().collect())
}

/// `U^l(x)(n) = x(n / q^l)` when `q^l | n`, zero elsewhere.
pub fn upsample<T: Sample>(x: &[T], q: usize, l: u32) -> Vec<T> {
    let step = q.pow(l);
    let mut out = vec![T::zero(); x.len() * step];
    for (i, &v) in x.iter().enumerate() {
        out[i * step] = v;
    }
    out
}

/// Direct DFT `â(n) = sum_l a(l) exp(-j 2 pi n l / N)`.
pub fn dft<T: Copy + Into<Complex64>>(a: &[T]) -> Vec<Complex64> {
    let n = a.len();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
        .collect();
    (0..n)
        .map(|f| {
            a.iter()
                .enumerate()
                .map(|(l, &v)| v.into() * twiddle[(f * l) % n])
                .sum()
        })
        .collect()
}

/// Largest deviation of `sum_k exp(-j 2 pi n k / q) z(n)` from `q z(n)` at
/// `q | n` and from zero elsewhere.
pub fn modulation_identity_deviation(z: &[f64], q: usize) -> Result<f64> {
    check_divides(q, z.len())?;
    let mut worst: f64 = 0.0;
    for (n, &v) in z.iter().enumerate() {
        let lhs: Complex64 = (0..q)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * ((n * k) % q) as f64 / q as f64) * v)
            .sum();
        let rhs = if n % q == 0 { q as f64 * v } else { 0.0 };
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

pub fn modulation_identity_check(z: &[f64], q: usize) -> Result<bool> {
    let scale = z.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(modulation_identity_deviation(z, q)? <= VERIFY_TOLERANCE * scale)
}

/// Outcome of the system-matrix test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryReport {
    pub passed: bool,
    /// Worst deviation over both conditions and all frequencies.
    pub max_deviation: f64,
}

/// One analysis stage: smooth band `x` and detail bands `y_2..y_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Subbands {
    pub smooth: Vec<f64>,
    pub details: Vec<Vec<f64>>,
}

/// Analysis filters `u_1..u_q` of length `N`, synthesis `s_i = ũ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    q: usize,
    len: usize,
    analysis: Vec<Vec<f64>>,
}

impl FilterBank {
    /// Filters from the normalized columns of `R_q`, zero-padded to `len`.
    pub fn from_orpt(q: usize, len: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::OutOfRange {
                what: "q",
                value: q,
                min: 2,
                max: usize::MAX,
            });
        }
        check_divides(q, len)?;
        let basis = OrptBasis::new(q)?;
        let analysis = basis
            .columns()
            .iter()
            .map(|c| {
                let norm = (c.sq_norm() as f64).sqrt();
                let mut u = vec![0.0; len];
                for (dst, &s) in u.iter_mut().zip(c.samples()) {
                    *dst = s as f64 / norm;
                }
                u
            })
            .collect();
        Ok(FilterBank { q, len, analysis })
    }

    /// A bank from arbitrary analysis filters (used to test non-orthogonal banks).
    pub fn from_filters(q: usize, filters: Vec<Vec<f64>>) -> Result<Self> {
        check_len(q, filters.len())?;
        let len = filters.first().map_or(0, Vec::len);
        check_divides(q, len)?;
        for f in &filters {
            check_len(len, f.len())?;
        }
        Ok(FilterBank {
            q,
            len,
            analysis: filters,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn analysis_filters(&self) -> &[Vec<f64>] {
        &self.analysis
    }

    pub fn into_filters(self) -> Vec<Vec<f64>> {
        self.analysis
    }

    pub fn synthesis_filters(&self) -> Vec<Vec<f64>> {
        self.analysis.iter().map(|u| tilde(u)).collect()
    }

    /// Checks that `P(n)` is unitary for every `n < N/q`:
    /// `sum_i |û_j(n + iM)|^2 = q` and `sum_i û_j(n + iM) conj(û_k(n + iM)) = 0`.
    pub fn verify_unitary(&self) -> UnitaryReport {
        let m = self.len / self.q;
        let spectra: Vec<Vec<Complex64>> = self.analysis.iter().map(|u| dft(u)).collect();
        let mut worst: f64 = 0.0;
        for n in 0..m {
            for j in 0..self.q {
                for k in j..self.q {
                    let s: Complex64 = (0..self.q)
                        .map(|i| spectra[j][n + i * m] * spectra[k][n + i * m].conj())
                        .sum();
                    let expected = if j == k { self.q as f64 } else { 0.0 };
                    worst = worst.max((s - expected).norm());
                }
            }
        }
        UnitaryReport {
            passed: worst < VERIFY_TOLERANCE,
            max_deviation: worst,
        }
    }

    /// For each `n < N/q`, the vector `P(n) ŝ(n)` with `s_i = ũ_i`.
    /// Perfect reconstruction needs it to be `[sqrt(q), 0, ..., 0]`.
    pub fn reconstruction_vectors(&self) -> Vec<Vec<Complex64>> {
        let m = self.len / self.q;
        let u_hat: Vec<Vec<Complex64>> = self.analysis.iter().map(|u| dft(u)).collect();
        let s_hat: Vec<Vec<Complex64>> = self.synthesis_filters().iter().map(|s| dft(s)).collect();
        let norm = 1.0 / (self.q as f64).sqrt();
        (0..m)
            .map(|n| {
                (0..self.q)
                    .map(|r| {
                        (0..self.q)
                            .map(|i| u_hat[i][n + r * m] * s_hat[i][n])
                            .sum::<Complex64>()
                            * norm
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest distance of a [`reconstruction_vectors`](Self::reconstruction_vectors)
    /// entry from `[sqrt(q), 0, ..., 0]`.
    pub fn reconstruction_deviation(&self) -> f64 {
        let target = (self.q as f64).sqrt();
        self.reconstruction_vectors()
            .iter()
            .flat_map(|v| {
                v.iter()
                    .enumerate()
                    .map(move |(r, &c)| (c - if r == 0 { target } else { 0.0 }).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Matrix `B` with columns `S_{qk} u_j`, band-major (`j * M + k`), so
    /// that the row vector `y = x B` lists the bands one after another.
    pub fn analysis_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.len / self.q;
        let cols: Vec<Vec<f64>> = self
            .analysis
            .iter()
            .flat_map(|u| (0..m).map(move |k| shift(u, self.q * k)))
            .collect();
        (0..self.len)
            .map(|n| cols.iter().map(|c| c[n]).collect())
            .collect()
    }

    /// One analysis stage, `y_i = D(z * ũ_i)`.
    pub fn analyze(&self, z: &[f64]) -> Result<Subbands> {
        check_len(self.len, z.len())?;
        let mut bands = self
            .analysis
            .iter()
            .map(|u| downsample(&circular_convolve(z, &tilde(u))?, self.q, 1))
            .collect::<Result<Vec<_>>>()?;
        let smooth = bands.remove(0);
        Ok(Subbands {
            smooth,
            details: bands,
        })
    }

    /// The same stage computed as `y = z B`.
    pub fn analyze_with_matrix(&self, z: &[f64]) -> Result<Subbands> {
        check_len(self.len, z.len())?;
        let b = self.analysis_matrix();
        let y: Vec<f64> = (0..self.len)
            .map(|c| z.iter().zip(&b).map(|(&zn, row)| zn * row[c]).sum())
            .collect();
        let m = self.len / self.q;
        let mut bands: Vec<Vec<f64>> = y.chunks(m).map(<[f64]>::to_vec).collect();
        let smooth = bands.remove(0);
        Ok(Subbands {
            smooth,
            details: bands,
        })
    }

    /// `z = U(x) * u_1 + sum_i U(y_i) * u_i`.
    pub fn synthesize(&self, bands: &Subbands) -> Result<Vec<f64>> {
        let m = self.len / self.q;
        check_len(self.q - 1, bands.details.len())?;
        let mut z = vec![0.0; self.len];
        for (band, u) in std::iter::once(&bands.smooth)
            .chain(&bands.details)
            .zip(&self.analysis)
        {
            check_len(m, band.len())?;
            let part = circular_convolve(&upsample(band, self.q, 1), u)?;
            for (zn, p) in z.iter_mut().zip(part) {
                *zn += p;
            }
        }
        Ok(z)
    }
}

/// Output of a `p`-stage cascade. `details[l - 1][i - 2]` is `y_i^l`
/// (length `N / q^l`) and `smooth` is `x^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    pub q: usize,
    pub len: usize,
    pub details: Vec<Vec<Vec<f64>>>,
    pub smooth: Vec<f64>,
}

impl WaveletDecomposition {
    pub fn stages(&self) -> usize {
        self.details.len()
    }

    /// Total sample count over all bands; equals `len` when consistent.
    pub fn sample_count(&self) -> usize {
        self.smooth.len()
            + self
                .details
                .iter()
                .flat_map(|stage| stage.iter().map(Vec::len))
                .sum::<usize>()
    }

    pub fn energy(&self) -> f64 {
        self.smooth.iter().map(|v| v * v).sum::<f64>()
            + self
                .details
                .iter()
                .flatten()
                .flatten()
                .map(|v| v * v)
                .sum::<f64>()
    }

    /// Packs the bands coarsest first: `x^p, y_2^p..y_q^p, y_2^(p-1), .., y_q^1`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = self.smooth.clone();
        for stage in self.details.iter().rev() {
            for band in stage {
                out.extend_from_slice(band);
            }
        }
        out
    }

    /// Inverse of [`to_flat`](Self::to_flat).
    pub fn from_flat(q: usize, stages: u32, data: &[f64]) -> Result<Self> {
        let len = data.len();
        check_divides(q.pow(stages), len)?;
        let mut offset = len / q.pow(stages);
        let smooth = data[..offset].to_vec();
        let mut details = Vec::with_capacity(stages as usize);
        for l in (1..=stages).rev() {
            let m = len / q.pow(l);
            let stage: Vec<Vec<f64>> = (0..q - 1)
                .map(|i| data[offset + i * m..offset + (i + 1) * m].to_vec())
                .collect();
            offset += (q - 1) * m;
            details.push(stage);
        }
        details.reverse();
        Ok(WaveletDecomposition {
            q,
            len,
            details,
            smooth,
        })
    }

    fn check_shape(&self, q: usize, len: usize, stages: usize) -> Result<()> {
        if self.q != q || self.len != len {
            return Err(Error::Invalid(format!(
                "decomposition is for q = {}, N = {}; expected q = {q}, N = {len}",
                self.q, self.len
            )));
        }
        check_len(stages, self.stages())?;
        for (l, stage) in self.details.iter().enumerate() {
            check_len(q - 1, stage.len())?;
            for band in stage {
                check_len(len / q.pow(l as u32 + 1), band.len())?;
            }
        }
        check_len(len / q.pow(stages as u32), self.smooth.len())
    }
}

/// The recursive `p`-stage cascade, one bank per stage (`u_i^l` has length
/// `N / q^(l-1)`).
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    q: usize,
    len: usize,
    banks: Vec<FilterBank>,
}

impl Cascade {
    pub fn new(q: usize, len: usize, stages: u32) -> Result<Self> {
        if stages == 0 {
            return Err(Error::Zero { what: "stages" });
        }
        check_divides(q.pow(stages), len)?;
        let banks = (0..stages)
            .map(|l| FilterBank::from_orpt(q, len / q.pow(l)))
            .collect::<Result<_>>()?;
        Ok(Cascade { q, len, banks })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stages(&self) -> usize {
        self.banks.len()
    }

    /// Stage `l` bank (`l` starting at 1).
    pub fn bank(&self, l: usize) -> &FilterBank {
        &self.banks[l - 1]
    }

    pub fn analyze(&self, z: &[f64]) -> Result<WaveletDecomposition> {
        check_len(self.len, z.len())?;
        let mut smooth = z.to_vec();
        let mut details = Vec::with_capacity(self.banks.len());
        for bank in &self.banks {
            let bands = bank.analyze(&smooth)?;
            details.push(bands.details);
            smooth = bands.smooth;
        }
        Ok(WaveletDecomposition {
            q: self.q,
            len: self.len,
            details,
            smooth,
        })
    }

    pub fn synthesize(&self, dec: &WaveletDecomposition) -> Result<Vec<f64>> {
        dec.check_shape(self.q, self.len, self.banks.len())?;
        let mut smooth = dec.smooth.clone();
        for (bank, details) in self.banks.iter().zip(&dec.details).rev() {
            smooth = bank.synthesize(&Subbands {
                smooth,
                details: details.clone(),
            })?;
        }
        Ok(smooth)
    }
}

pub fn analyze_multistage(z: &[f64], q: usize, stages: u32) -> Result<WaveletDecomposition> {
    Cascade::new(q, z.len(), stages)?.analyze(z)
}

pub fn synthesize_multistage(dec: &WaveletDecomposition) -> Result<Vec<f64>> {
    Cascade::new(dec.q, dec.len, dec.stages() as u32)?.synthesize(dec)
}

/// Single-filter equivalents of the cascade: `g^l` for the smooth path and
/// `f_i^l` for the details, all of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentFilters {
    pub q: usize,
    pub len: usize,
    /// `smooth[l - 1] = g^l`.
    pub smooth: Vec<Vec<f64>>,
    /// `details[l - 1][i - 2] = f_i^l`.
    pub details: Vec<Vec<Vec<f64>>>,
}

/// `g^1 = u_1^1`, `f_i^1 = u_i^1`, then
/// `g^l = g^(l-1) * U^(l-1)(u_1^l)` and `f_i^l = g^(l-1) * U^(l-1)(u_i^l)`.
pub fn equivalent_filters(q: usize, len: usize, stages: u32) -> Result<EquivalentFilters> {
    let cascade = Cascade::new(q, len, stages)?;
    let mut smooth: Vec<Vec<f64>> = Vec::with_capacity(stages as usize);
    let mut details = Vec::with_capacity(stages as usize);
    for l in 1..=stages {
        let filters = cascade.bank(l as usize).analysis_filters();
        let lifted: Vec<Vec<f64>> = filters.iter().map(|u| upsample(u, q, l - 1)).collect();
        let (g, f) = match smooth.last() {
            None => (lifted[0].clone(), lifted[1..].to_vec()),
            Some(prev) => (
                circular_convolve(prev, &lifted[0])?,
                lifted[1..]
                    .iter()
                    .map(|u| circular_convolve(prev, u))
                    .collect::<Result<_>>()?,
            ),
        };
        smooth.push(g);
        details.push(f);
    }
    Ok(EquivalentFilters {
        q,
        len,
        smooth,
        details,
    })
}

impl EquivalentFilters {
    pub fn stages(&self) -> usize {
        self.smooth.len()
    }

    /// `x^p = D^p(z * g̃^p)`, `y_i^l = D^l(z * f̃_i^l)`.
    pub fn analyze(&self, z: &[f64]) -> Result<WaveletDecomposition> {
        check_len(self.len, z.len())?;
        let p = self.stages() as u32;
        let details = self
            .details
            .iter()
            .enumerate()
            .map(|(l, fs)| {
                fs.iter()
                    .map(|f| downsample(&circular_convolve(z, &tilde(f))?, self.q, l as u32 + 1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let g = &self.smooth[self.stages() - 1];
        let smooth = downsample(&circular_convolve(z, &tilde(g))?, self.q, p)?;
        Ok(WaveletDecomposition {
            q: self.q,
            len: self.len,
            details,
            smooth,
        })
    }

    /// `z = sum_{l,i} f_i^l * U^l(y_i^l) + g^p * U^p(x^p)`.
    pub fn synthesize(&self, dec: &WaveletDecomposition) -> Result<Vec<f64>> {
        dec.check_shape(self.q, self.len, self.stages())?;
        let p = self.stages() as u32;
        let mut z = circular_convolve(
            &self.smooth[p as usize - 1],
            &upsample(&dec.smooth, self.q, p),
        )?;
        for (l, (fs, ys)) in self.details.iter().zip(&dec.details).enumerate() {
            for (f, y) in fs.iter().zip(ys) {
                let part = circular_convolve(f, &upsample(y, self.q, l as u32 + 1))?;
                for (zn, v) in z.iter_mut().zip(part) {
                    *zn += v;
                }
            }
        }
        Ok(z)
    }

    /// `{S_(q^l k) f_i^l}` for every level and band, then `{S_(q^p k) g^p}`.
    /// For an orthonormal cascade these `N` vectors form an orthonormal basis.
    pub fn shifted_basis(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len);
        for (l, fs) in self.details.iter().enumerate() {
            let step = self.q.pow(l as u32 + 1);
            for f in fs {
                out.extend((0..self.len / step).map(|k| shift(f, step * k)));
            }
        }
        let step = self.q.pow(self.stages() as u32);
        let g = &self.smooth[self.stages() - 1];
        out.extend((0..self.len / step).map(|k| shift(g, step * k)));
        out
    }
}

pub fn synthesize_nonrecursive(
    dec: &WaveletDecomposition,
    filters: &EquivalentFilters,
) -> Result<Vec<f64>> {
    filters.synthesize(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn energy(a: &[f64]) -> f64 {
        a.iter().map(|v| v * v).sum()
    }

    #[test]
    fn convolution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random(7, &mut rng);
        let mut delta = vec![0.0; 7];
        delta[0] = 1.0;
        assert_eq!(circular_convolve(&delta, &b).unwrap(), b);
        assert_eq!(
            circular_convolve(&[1.0, 1.0], &[1.0, -1.0]).unwrap(),
            vec![0.0, 0.0]
        );
        assert!(circular_convolve(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn convolution_theorem() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random(12, &mut rng);
        let b = random(12, &mut rng);
        let lhs = dft(&circular_convolve(&a, &b).unwrap());
        let (fa, fb) = (dft(&a), dft(&b));
        for i in 0..12 {
            assert!((lhs[i] - fa[i] * fb[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn dft_examples() {
        let ones = dft(&[1.0, 0.0, 0.0, 0.0]);
        assert!(ones.iter().all(|c| (c - 1.0).norm() < 1e-15));
        let dc = dft(&[1.0; 4]);
        assert!((dc[0] - 4.0).norm() < 1e-12);
        assert!(dc[1..].iter().all(|c| c.norm() < 1e-12));
        let alt = dft(&[1.0, -1.0]);
        assert!(alt[0].norm() < 1e-15 && (alt[1] - 2.0).norm() < 1e-15);
    }

    #[test]
    fn sampler_examples() {
        let z: Vec<f64> = (0..8).map(f64::from).collect();
        assert_eq!(downsample(&z, 2, 1).unwrap(), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(downsample(&z, 2, 2).unwrap(), vec![0.0, 4.0]);
        let z9: Vec<f64> = (0..9).map(f64::from).collect();
        assert_eq!(downsample(&z9, 3, 1).unwrap(), vec![0.0, 3.0, 6.0]);
        assert!(downsample(&z9, 2, 1).is_err());

        assert_eq!(upsample(&[1.0, 2.0], 2, 1), vec![1.0, 0.0, 2.0, 0.0]);
        assert_eq!(upsample(&[5.0], 3, 1), vec![5.0, 0.0, 0.0]);
        assert_eq!(
            upsample(&[1.0, 2.0], 2, 2),
            vec![1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn tilde_and_shift() {
        assert_eq!(tilde(&[1.0, 2.0, 3.0, 4.0]), vec![1.0, 4.0, 3.0, 2.0]);
        let c = [Complex64::new(1.0, 1.0), Complex64::new(2.0, -3.0)];
        assert_eq!(
            tilde(&c),
            vec![Complex64::new(1.0, -1.0), Complex64::new(2.0, 3.0)]
        );
        assert_eq!(shift(&[1, 2, 3, 4], 1), vec![4, 1, 2, 3]);
        assert_eq!(shift(&[1, 2, 3, 4], 6), vec![3, 4, 1, 2]);
    }

    #[test]
    fn three_band_filters() {
        let bank = FilterBank::from_orpt(3, 12).unwrap();
        let u = bank.analysis_filters();
        let s3 = 3f64.sqrt().recip();
        let s6 = 6f64.sqrt().recip();
        let s2 = 2f64.sqrt().recip();
        let expected = [[s3, s3, s3], [2.0 * s6, -s6, -s6], [0.0, s2, -s2]];
        for (f, e) in u.iter().zip(expected) {
            assert!(max_diff(&f[..3], &e) < 1e-15);
            assert!(f[3..].iter().all(|&v| v == 0.0));
            assert!((energy(f) - 1.0).abs() < 1e-12);
        }
        assert!(FilterBank::from_orpt(3, 10).is_err());
        assert!(FilterBank::from_orpt(1, 10).is_err());
    }

    #[test]
    fn haar_pair() {
        let bank = FilterBank::from_orpt(2, 8).unwrap();
        let h = 2f64.sqrt().recip();
        assert!(max_diff(&bank.analysis_filters()[0][..2], &[h, h]) < 1e-15);
        assert!(max_diff(&bank.analysis_filters()[1][..2], &[h, -h]) < 1e-15);
    }

    #[test]
    fn unitary_checks() {
        let r = FilterBank::from_orpt(2, 4).unwrap().verify_unitary();
        assert!(r.passed && r.max_deviation < 1e-12);
        assert!(
            FilterBank::from_orpt(3, 12)
                .unwrap()
                .verify_unitary()
                .passed
        );
        assert!(
            FilterBank::from_orpt(5, 10)
                .unwrap()
                .verify_unitary()
                .passed
        );

        let mut filters = FilterBank::from_orpt(3, 12).unwrap().into_filters();
        filters[1] = filters[0].clone();
        let broken = FilterBank::from_filters(3, filters).unwrap();
        assert!(!broken.verify_unitary().passed);
    }

    #[test]
    fn reconstruction_vector_is_scaled_unit() {
        for (q, n) in [(2, 8), (3, 12), (5, 10), (6, 12)] {
            let bank = FilterBank::from_orpt(q, n).unwrap();
            assert!(bank.reconstruction_deviation() < 1e-9, "q={q}");
        }
    }

    #[test]
    fn analysis_of_constant_and_filter() {
        let bank = FilterBank::from_orpt(3, 12).unwrap();
        let out = bank.analyze(&[2.0; 12]).unwrap();
        assert!(max_diff(&out.smooth, &[2.0 * 3f64.sqrt(); 4]) < 1e-12);
        assert!(out.details.iter().flatten().all(|v| v.abs() < 1e-12));

        let u2 = bank.analysis_filters()[1].clone();
        let out = bank.analyze(&u2).unwrap();
        assert!(max_diff(&out.details[0], &[1.0, 0.0, 0.0, 0.0]) < 1e-12);
        assert!(out
            .smooth
            .iter()
            .chain(&out.details[1])
            .all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn matrix_route_matches_convolution_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q, n) in [(2, 8), (3, 12), (5, 10), (6, 18)] {
            let bank = FilterBank::from_orpt(q, n).unwrap();
            let z = random(n, &mut rng);
            let a = bank.analyze(&z).unwrap();
            let b = bank.analyze_with_matrix(&z).unwrap();
            assert!(max_diff(&a.smooth, &b.smooth) < 1e-12);
            for (x, y) in a.details.iter().zip(&b.details) {
                assert!(max_diff(x, y) < 1e-12);
            }
        }
    }

    #[test]
    fn single_stage_round_trip_and_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (q, n) in [(2, 8), (3, 12), (5, 10)] {
            let bank = FilterBank::from_orpt(q, n).unwrap();
            for _ in 0..20 {
                let z = random(n, &mut rng);
                let bands = bank.analyze(&z).unwrap();
                let e =
                    energy(&bands.smooth) + bands.details.iter().map(|d| energy(d)).sum::<f64>();
                assert!((e - energy(&z)).abs() < 1e-9 * energy(&z));
                assert!(max_diff(&bank.synthesize(&bands).unwrap(), &z) < 1e-9);
            }
        }
    }

    #[test]
    fn synthesis_examples() {
        let bank = FilterBank::from_orpt(3, 12).unwrap();
        let zero = Subbands {
            smooth: vec![0.0; 4],
            details: vec![vec![0.0; 4]; 2],
        };
        assert_eq!(bank.synthesize(&zero).unwrap(), vec![0.0; 12]);
        let dc = Subbands {
            smooth: vec![3f64.sqrt(); 4],
            details: vec![vec![0.0; 4]; 2],
        };
        assert!(max_diff(&bank.synthesize(&dc).unwrap(), &[1.0; 12]) < 1e-12);
        let bad = Subbands {
            smooth: vec![0.0; 3],
            details: vec![vec![0.0; 4]; 2],
        };
        assert!(bank.synthesize(&bad).is_err());
    }

    #[test]
    fn multistage_constant() {
        for (q, p, n) in [(2u32, 3u32, 16usize), (3, 2, 27), (5, 1, 10)] {
            let dec = analyze_multistage(&vec![1.5; n], q as usize, p).unwrap();
            let expect = 1.5 * (q as f64).powf(p as f64 / 2.0);
            assert!(dec.smooth.iter().all(|v| (v - expect).abs() < 1e-12));
            assert!(dec
                .details
                .iter()
                .flatten()
                .flatten()
                .all(|v| v.abs() < 1e-12));
            assert_eq!(dec.sample_count(), n);
        }
        assert!(analyze_multistage(&[0.0; 12], 2, 3).is_err());
        assert!(analyze_multistage(&[0.0; 12], 2, 0).is_err());
    }

    #[test]
    fn multistage_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (q, n, p) in [(2, 8, 3), (3, 27, 3), (5, 25, 2)] {
            let z = random(n, &mut rng);
            let dec = analyze_multistage(&z, q, p).unwrap();
            assert!((dec.energy() - energy(&z)).abs() < 1e-9 * energy(&z));
            assert!(max_diff(&synthesize_multistage(&dec).unwrap(), &z) < 1e-9);
            let flat = dec.to_flat();
            assert_eq!(WaveletDecomposition::from_flat(q, p, &flat).unwrap(), dec);
        }
    }

    #[test]
    fn inconsistent_decomposition_rejected() {
        let mut dec = analyze_multistage(&[1.0; 8], 2, 2).unwrap();
        dec.details[1][0].push(0.0);
        assert!(synthesize_multistage(&dec).is_err());
    }

    #[test]
    fn equivalent_filters_base_case() {
        let f = equivalent_filters(3, 12, 1).unwrap();
        let bank = FilterBank::from_orpt(3, 12).unwrap();
        assert_eq!(f.smooth[0], bank.analysis_filters()[0]);
        assert_eq!(f.details[0], bank.analysis_filters()[1..].to_vec());
    }

    #[test]
    fn nonrecursive_matches_recursive() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let filters = equivalent_filters(2, 8, 2).unwrap();
        let cascade = Cascade::new(2, 8, 2).unwrap();
        for _ in 0..100 {
            let z = random(8, &mut rng);
            let a = cascade.analyze(&z).unwrap();
            let b = filters.analyze(&z).unwrap();
            assert!(max_diff(&a.to_flat(), &b.to_flat()) < 1e-9);
            let za = cascade.synthesize(&a).unwrap();
            let zb = synthesize_nonrecursive(&a, &filters).unwrap();
            assert!(max_diff(&za, &zb) < 1e-9);
        }
    }

    #[test]
    fn modulation_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(modulation_identity_check(&[1.0, 2.0, 3.0, 4.0], 2).unwrap());
        let z = random(9, &mut rng);
        assert!(modulation_identity_deviation(&z, 3).unwrap() < 1e-12);
        let mut delta = vec![0.0; 5];
        delta[0] = 1.0;
        assert!(modulation_identity_deviation(&delta, 5).unwrap() < 1e-12);
        assert!(modulation_identity_check(&z, 2).is_err());
    }
}
