//! Separable 2-D transform for grayscale images.
//!
//! Every row goes through the full `p`-stage cascade, then every column of
//! the result does. Each axis is packed coarsest first (see
//! [`WaveletDecomposition::to_flat`]), so the smooth-smooth band sits in the
//! top-left corner and the finest details at the bottom-right.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_divides, check_len, Error, Result};
use crate::filterbank::{Cascade, WaveletDecomposition};

/// Row-major `height x width` grid of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    pub height: usize,
    pub width: usize,
    /// Peak value of the source format (255 for 8-bit).
    pub maxval: u32,
    pub samples: Vec<f64>,
}

impl ImagePlane {
    pub fn new(height: usize, width: usize, maxval: u32, samples: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Zero {
                what: "image dimension",
            });
        }
        check_len(height * width, samples.len())?;
        Ok(ImagePlane {
            height,
            width,
            maxval,
            samples,
        })
    }

    pub fn filled(height: usize, width: usize, maxval: u32, value: f64) -> Self {
        ImagePlane {
            height,
            width,
            maxval,
            samples: vec![value; height * width],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.samples[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.samples[row * self.width..(row + 1) * self.width]
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum()
    }

    pub fn transpose(&self) -> ImagePlane {
        let mut samples = Vec::with_capacity(self.samples.len());
        for c in 0..self.width {
            samples.extend((0..self.height).map(|r| self.get(r, c)));
        }
        ImagePlane {
            height: self.width,
            width: self.height,
            maxval: self.maxval,
            samples,
        }
    }

    fn map_rows(&self, f: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<ImagePlane> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for r in 0..self.height {
            let out = f(self.row(r))?;
            check_len(self.width, out.len())?;
            samples.extend(out);
        }
        Ok(ImagePlane {
            samples,
            ..self.clone()
        })
    }

    fn map_cols(&self, f: impl Fn(&[f64]) -> Result<Vec<f64>>) -> Result<ImagePlane> {
        Ok(self.transpose().map_rows(f)?.transpose())
    }
}

/// One band along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandSegment {
    /// Stage `1..=p`.
    pub stage: usize,
    /// `1` for the smooth band, `2..=q` for details.
    pub band: usize,
    pub offset: usize,
    pub len: usize,
}

/// Where each subband lives in a coefficient plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandLayout {
    pub height: usize,
    pub width: usize,
    /// Band count along rows (horizontal) and columns (vertical).
    pub q_rows: usize,
    pub q_cols: usize,
    pub stages: u32,
}

impl BandLayout {
    /// Bands along the horizontal axis, in storage order.
    pub fn row_segments(&self) -> Vec<BandSegment> {
        axis_segments(self.width, self.q_rows, self.stages)
    }

    pub fn col_segments(&self) -> Vec<BandSegment> {
        axis_segments(self.height, self.q_cols, self.stages)
    }
}

fn axis_segments(len: usize, q: usize, stages: u32) -> Vec<BandSegment> {
    let coarse = len / q.pow(stages);
    let mut out = vec![BandSegment {
        stage: stages as usize,
        band: 1,
        offset: 0,
        len: coarse,
    }];
    let mut offset = coarse;
    for l in (1..=stages).rev() {
        let m = len / q.pow(l);
        for band in 2..=q {
            out.push(BandSegment {
                stage: l as usize,
                band,
                offset,
                len: m,
            });
            offset += m;
        }
    }
    out
}

/// Coefficient plane and its band layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform2d {
    pub coeffs: ImagePlane,
    pub layout: BandLayout,
}

fn cascades(
    height: usize,
    width: usize,
    q_rows: usize,
    q_cols: usize,
    stages: u32,
) -> Result<(Cascade, Cascade)> {
    check_divides(q_rows.pow(stages), width)?;
    check_divides(q_cols.pow(stages), height)?;
    Ok((
        Cascade::new(q_rows, width, stages)?,
        Cascade::new(q_cols, height, stages)?,
    ))
}

fn analyze_flat(cascade: &Cascade, x: &[f64]) -> Result<Vec<f64>> {
    Ok(cascade.analyze(x)?.to_flat())
}

fn synthesize_flat(cascade: &Cascade, x: &[f64]) -> Result<Vec<f64>> {
    let dec = WaveletDecomposition::from_flat(cascade.q(), cascade.stages() as u32, x)?;
    cascade.synthesize(&dec)
}

pub fn forward2d(img: &ImagePlane, q: usize, stages: u32) -> Result<Transform2d> {
    forward2d_axes(img, q, q, stages)
}

/// Rows use `q_rows` bands, columns `q_cols`.
pub fn forward2d_axes(
    img: &ImagePlane,
    q_rows: usize,
    q_cols: usize,
    stages: u32,
) -> Result<Transform2d> {
    let (rows, cols) = cascades(img.height, img.width, q_rows, q_cols, stages)?;
    let coeffs = img
        .map_rows(|r| analyze_flat(&rows, r))?
        .map_cols(|c| analyze_flat(&cols, c))?;
    Ok(Transform2d {
        coeffs,
        layout: BandLayout {
            height: img.height,
            width: img.width,
            q_rows,
            q_cols,
            stages,
        },
    })
}

/// Same transform with the column pass first.
pub fn forward2d_columns_first(img: &ImagePlane, q: usize, stages: u32) -> Result<Transform2d> {
    let (rows, cols) = cascades(img.height, img.width, q, q, stages)?;
    let coeffs = img
        .map_cols(|c| analyze_flat(&cols, c))?
        .map_rows(|r| analyze_flat(&rows, r))?;
    Ok(Transform2d {
        coeffs,
        layout: BandLayout {
            height: img.height,
            width: img.width,
            q_rows: q,
            q_cols: q,
            stages,
        },
    })
}

pub fn inverse2d(t: &Transform2d) -> Result<ImagePlane> {
    let l = &t.layout;
    if t.coeffs.height != l.height || t.coeffs.width != l.width {
        return Err(Error::Invalid(format!(
            "coefficient plane is {}x{}, layout expects {}x{}",
            t.coeffs.height, t.coeffs.width, l.height, l.width
        )));
    }
    let (rows, cols) = cascades(l.height, l.width, l.q_rows, l.q_cols, l.stages)?;
    t.coeffs
        .map_cols(|c| synthesize_flat(&cols, c))?
        .map_rows(|r| synthesize_flat(&rows, r))
}

/// Squared magnitudes sorted descending, accumulated and divided by the
/// total. Nondecreasing, last entry exactly 1.
pub fn cumulative_energy(coeffs: &[f64]) -> Result<Vec<f64>> {
    let mut sq: Vec<f64> = coeffs.iter().map(|v| v * v).collect();
    sq.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut out: Vec<f64> = sq
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect();
    if acc == 0.0 {
        return Err(Error::Invalid(
            "cumulative energy of an all-zero plane".into(),
        ));
    }
    for v in &mut out {
        *v /= acc;
    }
    Ok(out)
}

/// Number of leading entries of a cumulative-energy curve needed to reach
/// `fraction`.
pub fn coefficients_to_reach(curve: &[f64], fraction: f64) -> usize {
    curve
        .iter()
        .position(|&v| v >= fraction)
        .map_or(curve.len(), |i| i + 1)
}

pub fn psnr(original: &ImagePlane, other: &ImagePlane) -> Result<f64> {
    check_len(original.samples.len(), other.samples.len())?;
    let mse = original
        .samples
        .iter()
        .zip(&other.samples)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / original.samples.len() as f64;
    let peak = original.maxval as f64;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopK {
    pub image: ImagePlane,
    /// Infinite when the discarded coefficients carry no energy.
    pub psnr: f64,
    pub exact: bool,
}

/// Keeps the `k` largest-magnitude coefficients, zeroes the rest and inverts.
pub fn topk_reconstruct(img: &ImagePlane, q: usize, stages: u32, k: usize) -> Result<TopK> {
    let total = img.samples.len();
    if k == 0 || k > total {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 1,
            max: total,
        });
    }
    let mut t = forward2d(img, q, stages)?;
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| {
        t.coeffs.samples[b]
            .abs()
            .total_cmp(&t.coeffs.samples[a].abs())
    });
    let mut discarded = 0.0;
    for &i in &order[k..] {
        discarded += t.coeffs.samples[i] * t.coeffs.samples[i];
        t.coeffs.samples[i] = 0.0;
    }
    let image = inverse2d(&t)?;
    // Anything below this is rounding noise from the forward pass.
    let exact = discarded <= 1e-24 * img.energy();
    let psnr = if exact {
        f64::INFINITY
    } else {
        psnr(img, &image)?
    };
    Ok(TopK { image, psnr, exact })
}

/// Largest deviation of the 2-D modulation sum
/// `sum_{k1,k2} exp(-j 2 pi (n1 k1 / q1 + n2 k2 / q2)) z(n1, n2)` from
/// `q1 q2 z(n1, n2)` when `q1 | n1` and `q2 | n2`, and from zero elsewhere.
pub fn modulation_identity_deviation_2d(img: &ImagePlane, q1: usize, q2: usize) -> Result<f64> {
    check_divides(q1, img.height)?;
    check_divides(q2, img.width)?;
    let mut worst: f64 = 0.0;
    for n1 in 0..img.height {
        for n2 in 0..img.width {
            let z = img.get(n1, n2);
            let mut lhs = Complex64::new(0.0, 0.0);
            for k1 in 0..q1 {
                for k2 in 0..q2 {
                    let phase =
                        ((n1 * k1) % q1) as f64 / q1 as f64 + ((n2 * k2) % q2) as f64 / q2 as f64;
                    lhs += Complex64::from_polar(1.0, -2.0 * PI * phase) * z;
                }
            }
            let rhs = if n1 % q1 == 0 && n2 % q2 == 0 {
                (q1 * q2) as f64 * z
            } else {
                0.0
            };
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Deterministic 8-bit test image: a diagonal ramp with a bright rectangle
/// and a dark disc, giving smooth regions separated by sharp edges.
pub fn synthetic_gradient_image(height: usize, width: usize) -> ImagePlane {
    let mut samples = Vec::with_capacity(height * width);
    let (h, w) = (height as f64, width as f64);
    for r in 0..height {
        for c in 0..width {
            let (y, x) = (r as f64 / h, c as f64 / w);
            let mut v = 30.0 + 110.0 * x + 60.0 * y;
            if (0.15..0.45).contains(&y) && (0.55..0.85).contains(&x) {
                v += 70.0;
            }
            let (dy, dx) = (y - 0.68, x - 0.3);
            if dy * dy + dx * dx < 0.04 {
                v -= 25.0;
            }
            samples.push(v.round().clamp(0.0, 255.0));
        }
    }
    ImagePlane {
        height,
        width,
        maxval: 255,
        samples,
    }
}
