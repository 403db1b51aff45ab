use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uncorrelated far-field sources with individual powers plus white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceScene {
    doas: Vec<f64>,
    powers: Vec<f64>,
    noise_power: f64,
}

const MAX_REJECTION_ATTEMPTS: usize = 10_000;

/// Distance on the unit circle of normalized DOAs.
fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

impl SourceScene {
    /// Sources are reordered by ascending DOA, powers follow their source.
    pub fn new(doas: Vec<f64>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        if doas.is_empty() {
            return Err(Error::InvalidScene(
                "scene needs at least one source".into(),
            ));
        }
        if doas.len() != powers.len() {
            return Err(Error::InvalidScene(format!(
                "{} DOAs but {} powers",
                doas.len(),
                powers.len()
            )));
        }
        if let Some(d) = doas.iter().find(|d| !(-0.5..=0.5).contains(*d)) {
            return Err(Error::InvalidScene(format!(
                "normalized DOA {d} outside [-0.5, 0.5]"
            )));
        }
        if powers.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidScene("source powers must be positive".into()));
        }
        if !(noise_power.is_finite() && noise_power >= 0.0) {
            return Err(Error::InvalidScene(
                "noise power must be non-negative".into(),
            ));
        }
        let mut pairs: Vec<(f64, f64)> = doas.into_iter().zip(powers).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidScene("DOAs must be distinct".into()));
        }
        let (doas, powers) = pairs.into_iter().unzip();
        Ok(Self {
            doas,
            powers,
            noise_power,
        })
    }

    /// Unit-power sources with noise power `10^(−snr_db/10)`.
    pub fn equal_power(doas: Vec<f64>, snr_db: f64) -> Result<Self> {
        let m = doas.len();
        Self::new(doas, vec![1.0; m], 10f64.powf(-snr_db / 10.0))
    }

    pub fn noiseless(doas: Vec<f64>) -> Result<Self> {
        let m = doas.len();
        Self::new(doas, vec![1.0; m], 0.0)
    }

    /// One source per cell of width `1/m`, displaced uniformly by at most
    /// `jitter · (1/m)` from the cell centre. `jitter` must lie in `[0, 0.5)`.
    pub fn well_separated<R: Rng + ?Sized>(
        m: usize,
        jitter: f64,
        snr_db: Option<f64>,
        rng: &mut R,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidScene(
                "scene needs at least one source".into(),
            ));
        }
        if !(0.0..0.5).contains(&jitter) {
            return Err(Error::InvalidScene(format!(
                "jitter {jitter} outside [0, 0.5)"
            )));
        }
        let cell = 1.0 / m as f64;
        let doas = (0..m)
            .map(|i| {
                let offset = if jitter > 0.0 {
                    rng.random_range(-jitter..jitter)
                } else {
                    0.0
                };
                -0.5 + (i as f64 + 0.5 + offset) * cell
            })
            .collect();
        Self::with_snr(doas, snr_db)
    }

    /// `m` DOAs uniform on `[−0.5, 0.5)`, redrawn until every pair (on the
    /// circle) is at least `min_separation` apart.
    pub fn random_uniform<R: Rng + ?Sized>(
        m: usize,
        min_separation: f64,
        snr_db: Option<f64>,
        rng: &mut R,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidScene(
                "scene needs at least one source".into(),
            ));
        }
        if min_separation * m as f64 >= 1.0 {
            return Err(Error::InvalidScene(format!(
                "{m} sources cannot be {min_separation} apart"
            )));
        }
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let mut doas: Vec<f64> = (0..m).map(|_| rng.random_range(-0.5..0.5)).collect();
            doas.sort_by(f64::total_cmp);
            let ok = doas
                .iter()
                .zip(doas.iter().cycle().skip(1))
                .take(if m > 1 { m } else { 0 })
                .all(|(a, b)| circular_distance(*a, *b) >= min_separation);
            if ok {
                return Self::with_snr(doas, snr_db);
            }
        }
        Err(Error::InvalidScene(format!(
            "no draw of {m} sources with separation {min_separation} after {MAX_REJECTION_ATTEMPTS} attempts"
        )))
    }

    /// `m` sources placed exactly on points of a `grid_size`-point grid,
    /// spread evenly over the grid.
    pub fn on_grid(m: usize, grid_size: usize, snr_db: Option<f64>) -> Result<Self> {
        if m == 0 || grid_size < 2 * m {
            return Err(Error::InvalidScene(format!(
                "cannot place {m} sources on a {grid_size}-point grid"
            )));
        }
        let doas = (0..m)
            .map(|i| {
                let index = ((2 * i + 1) * grid_size) / (2 * m);
                -0.5 + index as f64 / grid_size as f64
            })
            .collect();
        Self::with_snr(doas, snr_db)
    }

    fn with_snr(doas: Vec<f64>, snr_db: Option<f64>) -> Result<Self> {
        match snr_db {
            Some(snr) => Self::equal_power(doas, snr),
            None => Self::noiseless(doas),
        }
    }

    pub fn doas(&self) -> &[f64] {
        &self.doas
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn len(&self) -> usize {
        self.doas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doas.is_empty()
    }

    /// SNR of the weakest source in dB; `None` for a noiseless scene.
    pub fn snr_db(&self) -> Option<f64> {
        if self.noise_power == 0.0 {
            return None;
        }
        let weakest = self.powers.iter().copied().fold(f64::INFINITY, f64::min);
        Some(10.0 * (weakest / self.noise_power).log10())
    }
}

/// How the source DOAs of a scene are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "kebab-case")]
pub enum SceneLayout {
    /// See [`SourceScene::well_separated`].
    WellSeparated { jitter: f64 },
    /// See [`SourceScene::random_uniform`].
    Random { min_separation: f64 },
    /// See [`SourceScene::on_grid`].
    OnGrid { grid_size: usize },
}

impl SceneLayout {
    /// Draws a scene of `m` equal-power sources; `snr_db = None` means noiseless.
    pub fn generate(&self, m: usize, snr_db: Option<f64>, seed: u64) -> Result<SourceScene> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match *self {
            SceneLayout::WellSeparated { jitter } => {
                SourceScene::well_separated(m, jitter, snr_db, &mut rng)
            }
            SceneLayout::Random { min_separation } => {
                SourceScene::random_uniform(m, min_separation, snr_db, &mut rng)
            }
            SceneLayout::OnGrid { grid_size } => SourceScene::on_grid(m, grid_size, snr_db),
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn validation() {
        assert!(SourceScene::new(vec![], vec![], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1], vec![1.0, 1.0], 1.0).is_err());
        assert!(SourceScene::new(vec![0.7], vec![1.0], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1, 0.1], vec![1.0, 1.0], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1], vec![0.0], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1], vec![1.0], -1.0).is_err());
    }

    #[test]
    fn sorted_with_powers() {
        let s = SourceScene::new(vec![0.3, -0.2], vec![2.0, 5.0], 1.0).unwrap();
        assert_eq!(s.doas(), &[-0.2, 0.3]);
        assert_eq!(s.powers(), &[5.0, 2.0]);
    }

    #[test]
    fn snr() {
        let s = SourceScene::equal_power(vec![0.0], 0.0).unwrap();
        assert_eq!(s.noise_power(), 1.0);
        assert_eq!(s.snr_db(), Some(0.0));
        let s = SourceScene::equal_power(vec![0.0], 10.0).unwrap();
        assert!((s.noise_power() - 0.1).abs() < 1e-15);
        assert_eq!(SourceScene::noiseless(vec![0.0]).unwrap().snr_db(), None);
    }

    #[test]
    fn well_separated_spacing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = SourceScene::well_separated(24, 0.2, Some(0.0), &mut rng).unwrap();
            assert_eq!(s.len(), 24);
            for w in s.doas().windows(2) {
                assert!(w[1] - w[0] >= 0.6 / 24.0 - 1e-12);
            }
            assert!(s.doas().iter().all(|d| (-0.5..0.5).contains(d)));
        }
    }

    #[test]
    fn random_uniform_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sep = 2.0 / 8192.0;
        for _ in 0..20 {
            let s = SourceScene::random_uniform(24, sep, Some(0.0), &mut rng).unwrap();
            let d = s.doas();
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    assert!(circular_distance(d[i], d[j]) >= sep);
                }
            }
        }
        assert!(SourceScene::random_uniform(10, 0.1, None, &mut rng).is_err());
    }

    #[test]
    fn layouts_are_seeded() {
        let layout = SceneLayout::WellSeparated { jitter: 0.2 };
        let a = layout.generate(10, Some(0.0), 5).unwrap();
        assert_eq!(a, layout.generate(10, Some(0.0), 5).unwrap());
        assert_ne!(a, layout.generate(10, Some(0.0), 6).unwrap());
    }

    #[test]
    fn on_grid_points() {
        let s = SourceScene::on_grid(5, 8192, None).unwrap();
        for d in s.doas() {
            let idx = (d + 0.5) * 8192.0;
            assert_eq!(idx, idx.round());
        }
    }
}
