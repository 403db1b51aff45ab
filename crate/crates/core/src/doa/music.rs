use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io;

use nalgebra::SymmetricEigen;

use super::{CMatrix, Complex64};
use crate::coarray::{difference_coarray, summarize};
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

pub const DEFAULT_GRID_SIZE: usize = 8192;

/// Covariance averaged onto the difference coarray, keyed by lag.
#[derive(Debug, Clone, PartialEq)]
pub struct Autocorrelation {
    values: BTreeMap<i64, Complex64>,
}

impl Autocorrelation {
    pub fn get(&self, lag: i64) -> Option<Complex64> {
        self.values.get(&lag).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Averages `r[i, j]` over every ordered pair with `pᵢ − pⱼ = k`.
///
/// Negative lags are stored as conjugates of the positive ones.
pub fn coarray_autocorrelation(r: &CMatrix, s: &SensorArray) -> Result<Autocorrelation> {
    let n = s.len();
    if r.nrows() != n || r.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "covariance is {}x{} but the array has {n} sensors",
            r.nrows(),
            r.ncols()
        )));
    }
    let p = s.positions();
    let mut sums: BTreeMap<i64, (Complex64, u32)> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let lag = p[i] - p[j];
            if lag >= 0 {
                let e = sums.entry(lag).or_insert((Complex64::new(0.0, 0.0), 0));
                e.0 += r[(i, j)];
                e.1 += 1;
            }
        }
    }
    let mut values = BTreeMap::new();
    for (lag, (sum, count)) in sums {
        let mean = sum / count as f64;
        if lag == 0 {
            values.insert(0, Complex64::new(mean.re, 0.0));
        } else {
            values.insert(lag, mean);
            values.insert(-lag, mean.conj());
        }
    }
    Ok(Autocorrelation { values })
}

/// `(u+1)×(u+1)` Hermitian Toeplitz matrix `T[p, q] = ac(p − q)`.
pub fn toeplitz_augment(ac: &Autocorrelation, u: usize) -> Result<CMatrix> {
    let dim = u + 1;
    let mut t = CMatrix::zeros(dim, dim);
    for p in 0..dim {
        for q in 0..dim {
            let lag = p as i64 - q as i64;
            t[(p, q)] = ac.get(lag).ok_or(Error::HoleInSegment { lag: lag.abs() })?;
        }
    }
    Ok(t)
}

/// Uniform grid `θ'ᵢ = −0.5 + i/G`, `i = 0..G`. The point `+0.5` is omitted
/// because it aliases `−0.5`.
pub fn theta_grid(grid_size: usize) -> Vec<f64> {
    (0..grid_size)
        .map(|i| -0.5 + i as f64 / grid_size as f64)
        .collect()
}

/// Normalized pseudospectrum on a grid; the maximum is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub grid: Vec<f64>,
    pub power: Vec<f64>,
}

/// MUSIC pseudospectrum `1 / ‖Eₙᴴ a(θ')‖²` of a Hermitian matrix, where `Eₙ`
/// spans the eigenvectors of the `dim − m` smallest eigenvalues.
pub fn music_spectrum(t: &CMatrix, m: usize, grid_size: usize) -> Result<Spectrum> {
    let dim = t.nrows();
    if t.ncols() != dim {
        return Err(Error::InvalidParameter("matrix must be square".into()));
    }
    if m == 0 || m >= dim {
        return Err(Error::InvalidParameter(format!(
            "source count must satisfy 1 <= m < {dim}, got {m}"
        )));
    }
    if grid_size < 3 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 3 points, got {grid_size}"
        )));
    }

    let eig = SymmetricEigen::new(t.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let noise = eig.eigenvectors.select_columns(&order[..dim - m]);

    let grid = theta_grid(grid_size);
    let mut a = vec![Complex64::new(0.0, 0.0); dim];
    let mut power: Vec<f64> = grid
        .iter()
        .map(|&theta| {
            for (p, ap) in a.iter_mut().enumerate() {
                *ap = Complex64::cis(2.0 * PI * p as f64 * theta);
            }
            let distance: f64 = noise
                .column_iter()
                .map(|e| {
                    e.iter()
                        .zip(&a)
                        .map(|(ei, ai)| ei.conj() * ai)
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .sum();
            1.0 / distance.max(f64::MIN_POSITIVE)
        })
        .collect();

    let peak = power.iter().copied().fold(0.0, f64::max);
    for v in &mut power {
        *v /= peak;
    }
    Ok(Spectrum { grid, power })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakPick {
    /// Grid DOAs of the selected peaks, ascending.
    pub estimates: Vec<f64>,
    /// Grid indices of the selected peaks, ascending.
    pub indices: Vec<usize>,
    /// Fewer than `m` local maxima were available.
    pub under_resolved: bool,
}

/// The `m` largest strict local maxima of a spectrum. The grid is circular.
/// Equal heights are ordered by grid index.
pub fn pick_peaks(spectrum: &Spectrum, m: usize) -> PeakPick {
    let p = &spectrum.power;
    let g = p.len();
    let mut maxima: Vec<usize> = (0..g)
        .filter(|&i| {
            let prev = p[(i + g - 1) % g];
            let next = p[(i + 1) % g];
            p[i] > prev && p[i] > next
        })
        .collect();
    maxima.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    let under_resolved = maxima.len() < m;
    maxima.truncate(m);
    maxima.sort_unstable();
    PeakPick {
        estimates: maxima.iter().map(|&i| spectrum.grid[i]).collect(),
        indices: maxima,
        under_resolved,
    }
}

/// Root-mean-square error with estimates matched to truth in sorted order.
/// `None` when the counts differ.
pub fn rmse(estimates: &[f64], truth: &[f64]) -> Option<f64> {
    if estimates.len() != truth.len() || truth.is_empty() {
        return None;
    }
    let mut e = estimates.to_vec();
    let mut t = truth.to_vec();
    e.sort_by(f64::total_cmp);
    t.sort_by(f64::total_cmp);
    let sq: f64 = e.iter().zip(&t).map(|(a, b)| (a - b).powi(2)).sum();
    Some((sq / t.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MusicOptions {
    pub grid_size: usize,
    /// Run with more sources than the coarray segment supports; the signal
    /// subspace is then truncated and the result flagged under-resolved.
    pub allow_over_capacity: bool,
}

impl Default for MusicOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            allow_over_capacity: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MusicResult {
    pub spectrum: Spectrum,
    pub estimates: Vec<f64>,
    pub under_resolved: bool,
    /// Present when truth was supplied and every source produced a peak.
    pub rmse: Option<f64>,
}

/// Full coarray MUSIC on a covariance estimate of array `s`.
pub fn estimate_doas(
    s: &SensorArray,
    covariance: &CMatrix,
    m: usize,
    truth: Option<&[f64]>,
    options: MusicOptions,
) -> Result<MusicResult> {
    let max_sources = summarize(&difference_coarray(s)).max_sources;
    if m > max_sources && !options.allow_over_capacity {
        return Err(Error::Capacity {
            sources: m,
            max_sources,
        });
    }
    if max_sources == 0 {
        return Err(Error::Capacity {
            sources: m,
            max_sources,
        });
    }
    let ac = coarray_autocorrelation(covariance, s)?;
    let t = toeplitz_augment(&ac, max_sources)?;
    let signal_dim = m.min(max_sources);
    let spectrum = music_spectrum(&t, signal_dim, options.grid_size)?;
    let peaks = pick_peaks(&spectrum, m);
    let under_resolved = peaks.under_resolved || m > max_sources;
    let rmse = match truth {
        Some(truth) if !under_resolved => rmse(&peaks.estimates, truth),
        _ => None,
    };
    Ok(MusicResult {
        spectrum,
        estimates: peaks.estimates,
        under_resolved,
        rmse,
    })
}

/// `theta_norm,power` rows.
pub fn write_spectrum_csv<W: io::Write>(out: W, spectrum: &Spectrum) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["theta_norm", "power"])?;
    for (theta, power) in spectrum.grid.iter().zip(&spectrum.power) {
        w.write_record([format!("{theta:.8}"), format!("{power:.10e}")])?;
    }
    w.flush()?;
    Ok(())
}
