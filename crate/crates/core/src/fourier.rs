//! Discrete Fourier transforms of indicator functions on `Z/pZ`.
//!
//! `1̂_A(r) = Σ_{a∈A} exp(2πi·a·r/p)`, evaluated by direct summation against a
//! table of p-th roots of unity. Each frequency is accumulated over the
//! elements in increasing order with compensated summation, so the result does
//! not depend on how the frequency range is split across threads.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::WTable;
use crate::error::{Error, Result};
use crate::residue::ResidueSet;

/// Frequencies per parallel work unit.
const CHUNK: usize = 4096;

/// Magnitudes within this relative distance of the bias count as ties.
const TIE_REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn mul(self, o: Complex) -> Complex {
        Complex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn conj(self) -> Complex {
        Complex {
            re: self.re,
            im: -self.im,
        }
    }
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn roots_of_unity(p: usize) -> Vec<Complex> {
    (0..p)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / p as f64;
            Complex {
                re: theta.cos(),
                im: theta.sin(),
            }
        })
        .collect()
}

/// Transforms frequencies `0..=p/2` and fills the rest from
/// `1̂_A(p − r) = conj(1̂_A(r))`.
fn direct_transform(p: usize, elements: &[u64], roots: &[Complex]) -> Vec<Complex> {
    let half = p / 2 + 1;
    let mut out = vec![Complex::default(); p];
    out[..half].par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let r0 = ci * CHUNK;
        let mut re = vec![Kahan::default(); chunk.len()];
        let mut im = vec![Kahan::default(); chunk.len()];
        for &a in elements {
            let a = a as usize;
            let mut idx = ((a as u128 * r0 as u128) % p as u128) as usize;
            for j in 0..chunk.len() {
                let w = roots[idx];
                re[j].add(w.re);
                im[j].add(w.im);
                idx += a;
                if idx >= p {
                    idx -= p;
                }
            }
        }
        for (j, z) in chunk.iter_mut().enumerate() {
            *z = Complex {
                re: re[j].sum,
                im: im[j].sum,
            };
        }
    });
    for r in half..p {
        out[r] = out[p - r].conj();
    }
    out
}

/// The complex transform `1̂_A(r)` for `r = 0..p−1`.
///
/// Sets larger than `p/2` are transformed through their complement, using
/// `1̂_A(r) = −1̂_{A^c}(r)` for `r ≠ 0`.
pub fn indicator_transform(a: &ResidueSet) -> Vec<Complex> {
    let p = a.modulus() as usize;
    let roots = roots_of_unity(p);
    let mut out = if 2 * a.len() <= p {
        direct_transform(p, a.elements(), &roots)
    } else {
        let complement: Vec<u64> = (0..p as u64).filter(|&x| !a.contains(x)).collect();
        let mut z = direct_transform(p, &complement, &roots);
        for v in z.iter_mut() {
            v.re = -v.re;
            v.im = -v.im;
        }
        z
    };
    out[0] = Complex {
        re: a.len() as f64,
        im: 0.0,
    };
    out
}

/// `|1̂_A(r)|` for one frequency, summed directly in `O(|A|)`.
pub fn coefficient_magnitude(a: &ResidueSet, r: u64) -> f64 {
    let p = a.modulus();
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for &x in a.elements() {
        let k = ((x as u128 * r as u128) % p as u128) as f64;
        let theta = 2.0 * PI * k / p as f64;
        re.add(theta.cos());
        im.add(theta.sin());
    }
    re.sum.hypot(im.sum)
}

/// Magnitudes of the indicator transform with the Fourier bias.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierSpectrum {
    pub modulus: u64,
    pub size: u64,
    pub magnitudes: Vec<f64>,
    /// `max_{1 ≤ r ≤ p−1} |1̂_A(r)|`.
    pub bias: f64,
    /// Smallest frequency attaining the bias.
    pub bias_argmax: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasSummary {
    pub p: u64,
    #[serde(rename = "sizeA")]
    pub size_a: u64,
    pub bias: f64,
    pub argmax: u64,
    /// `|1̂_A(1)| / |A|`.
    pub eta: f64,
}

impl FourierSpectrum {
    pub fn parseval_residual(&self) -> f64 {
        let mut acc = Kahan::default();
        for &m in &self.magnitudes {
            acc.add(m * m);
        }
        let expect = (self.modulus * self.size) as f64;
        (acc.sum - expect).abs() / expect
    }

    /// `η = |1̂_A(1)| / |A|`.
    pub fn eta_at_one(&self) -> f64 {
        if self.modulus < 2 {
            return 0.0;
        }
        self.magnitudes[1] / self.size as f64
    }

    pub fn summary(&self) -> BiasSummary {
        BiasSummary {
            p: self.modulus,
            size_a: self.size,
            bias: self.bias,
            argmax: self.bias_argmax,
            eta: self.eta_at_one(),
        }
    }
}

pub fn indicator_dft(a: &ResidueSet) -> Result<FourierSpectrum> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let magnitudes: Vec<f64> = indicator_transform(a).into_iter().map(Complex::norm).collect();
    let bias = magnitudes.iter().skip(1).fold(0.0f64, |acc, &m| acc.max(m));
    let tie = bias * (1.0 - TIE_REL_TOL);
    let bias_argmax = (1..magnitudes.len()).find(|&r| magnitudes[r] >= tie).unwrap_or(1) as u64;
    Ok(FourierSpectrum {
        modulus: a.modulus(),
        size: a.len() as u64,
        magnitudes,
        bias,
        bias_argmax,
    })
}

/// Relative residual of `p|A|² = Σ_r 1̂_A(r)·1̂_{t·A}(r)·conj(1̂_S(r))` with
/// `S = A + t·A`, all three transforms summed directly.
pub fn counting_identity_residual(a: &ResidueSet, t: i64) -> Result<f64> {
    let s = a.sum_of_dilates(t)?;
    let fa = indicator_transform(a);
    let fta = indicator_transform(&a.dilate(t));
    let fs = indicator_transform(&s);
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    for r in 0..fa.len() {
        let z = fa[r].mul(fta[r]).mul(fs[r].conj());
        re.add(z.re);
        im.add(z.im);
    }
    let expect = a.modulus() as f64 * (a.len() as f64).powi(2);
    Ok((re.sum - expect).hypot(im.sum) / expect)
}

/// `x = (|A + t·A| + w(t)) / |A|`.
pub fn sumset_ratio(size_s: u64, size_a: u64, w: i64) -> f64 {
    (size_s as f64 + w as f64) / size_a as f64
}

/// `(1 − xc)/√x`, the lower bound on `bias/|A|`.
pub fn eta_lower_bound(x: f64, c: f64) -> f64 {
    (1.0 - x * c) / x.sqrt()
}

/// `((1 − xc)/√x)·|A|` with `x = (|A + t·A| + w(t))/|A|` and `c = |A|/p`.
/// Negative values are returned as they are.
pub fn bias_lower_bound(a: &ResidueSet, t: i64) -> Result<f64> {
    bias_lower_bound_with(a, t, &WTable::default())
}

pub fn bias_lower_bound_with(a: &ResidueSet, t: i64, table: &WTable) -> Result<f64> {
    let s = a.sum_of_dilates(t)?;
    let w = table.get(t)?;
    let x = sumset_ratio(s.len() as u64, a.len() as u64, w);
    Ok(eta_lower_bound(x, a.density()) * a.len() as f64)
}

/// Dilates `A` by the bias frequency `r*` so that `|1̂_{r*·A}(1)|` equals the bias.
pub fn normalize_bias_to_one(a: &ResidueSet) -> Result<(ResidueSet, u64)> {
    let spectrum = indicator_dft(a)?;
    Ok(normalize_with(a, &spectrum))
}

pub fn normalize_with(a: &ResidueSet, spectrum: &FourierSpectrum) -> (ResidueSet, u64) {
    let u = spectrum.bias_argmax;
    if u == 1 {
        (a.clone(), 1)
    } else {
        (a.dilate(u as i64), u)
    }
}
