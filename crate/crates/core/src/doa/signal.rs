use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, CVector, Complex64, SourceScene};
use crate::error::{Error, Result};
use crate::geometry::SensorArray;

/// `exp(2πj·n·θ')` for every sensor position `n`.
pub fn steering_vector(s: &SensorArray, theta: f64) -> CVector {
    CVector::from_iterator(
        s.len(),
        s.positions()
            .iter()
            .map(|&n| Complex64::cis(2.0 * PI * n as f64 * theta)),
    )
}

/// Steering vector of the virtual ULA `{0, 1, …, len−1}`.
pub fn ula_steering(len: usize, theta: f64) -> CVector {
    CVector::from_iterator(
        len,
        (0..len).map(|n| Complex64::cis(2.0 * PI * n as f64 * theta)),
    )
}

/// Sensor outputs for `T` snapshots, one column per snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotBatch {
    pub data: CMatrix,
    pub seed: u64,
}

impl SnapshotBatch {
    pub fn snapshot_count(&self) -> usize {
        self.data.ncols()
    }

    pub fn sensor_count(&self) -> usize {
        self.data.nrows()
    }
}

/// Circular complex Gaussian sample with variance `variance`.
fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// Draws `t` snapshots `y = Σ a(θ'ᵢ) sᵢ + n`. Identical seeds give identical batches.
pub fn simulate(
    s: &SensorArray,
    scene: &SourceScene,
    t: usize,
    seed: u64,
) -> Result<SnapshotBatch> {
    if t == 0 {
        return Err(Error::InvalidParameter(
            "snapshot count must be >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steering = CMatrix::from_columns(
        &scene
            .doas()
            .iter()
            .map(|&theta| steering_vector(s, theta))
            .collect::<Vec<_>>(),
    );
    let signals = CMatrix::from_fn(scene.len(), t, |i, _| {
        complex_normal(&mut rng, scene.powers()[i])
    });
    let mut data = &steering * signals;
    if scene.noise_power() > 0.0 {
        for y in data.iter_mut() {
            *y += complex_normal(&mut rng, scene.noise_power());
        }
    }
    Ok(SnapshotBatch { data, seed })
}

/// Fills the lower triangle with conjugates of the upper one and makes the
/// diagonal real, so the result is Hermitian bit for bit.
fn hermitian_from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Complex64) -> CMatrix {
    let mut r = CMatrix::zeros(n, n);
    for i in 0..n {
        r[(i, i)] = Complex64::new(upper(i, i).re, 0.0);
        for j in i + 1..n {
            let v = upper(i, j);
            r[(i, j)] = v;
            r[(j, i)] = v.conj();
        }
    }
    r
}

/// `R' = (1/T) Σ y(t) y(t)ᴴ`.
pub fn sample_covariance(b: &SnapshotBatch) -> CMatrix {
    let t = b.snapshot_count() as f64;
    let y = &b.data;
    hermitian_from_upper(b.sensor_count(), |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..y.ncols() {
            acc += y[(i, k)] * y[(j, k)].conj();
        }
        acc / t
    })
}

/// Model covariance `Σ σᵢ² a(θ'ᵢ) a(θ'ᵢ)ᴴ + σ² I`.
pub fn expected_covariance(s: &SensorArray, scene: &SourceScene) -> CMatrix {
    let p = s.positions();
    hermitian_from_upper(s.len(), |i, j| {
        let lag = (p[i] - p[j]) as f64;
        let mut acc: Complex64 = scene
            .doas()
            .iter()
            .zip(scene.powers())
            .map(|(&theta, &power)| Complex64::cis(2.0 * PI * lag * theta) * power)
            .sum();
        if i == j {
            acc += scene.noise_power();
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::fixtures;

    #[test]
    fn steering_examples() {
        let pair = SensorArray::custom([0, 1]).unwrap();
        let a0 = steering_vector(&pair, 0.0);
        assert!(a0.iter().all(|z| *z == Complex64::new(1.0, 0.0)));

        let a = steering_vector(&pair, 0.25);
        assert_abs_diff_eq!(a[0].re, 1.0);
        assert_abs_diff_eq!(a[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a[1].im, 1.0, epsilon = 1e-15);

        let nfa = fixtures::NFA.build().unwrap();
        let a = steering_vector(&nfa, 0.1);
        let expected = Complex64::cis(2.0 * PI * 2.5);
        assert_abs_diff_eq!(a[11].re, expected.re, epsilon = 1e-12);
        assert_abs_diff_eq!(a[11].im, expected.im, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_single_source_is_rank_one() {
        let nfa = fixtures::NFA.build().unwrap();
        let scene = SourceScene::new(vec![0.17], vec![2.0], 0.0).unwrap();
        let b = simulate(&nfa, &scene, 20, 1).unwrap();
        let a = steering_vector(&nfa, 0.17);
        for col in b.data.column_iter() {
            // col = a·s for a scalar s; recover s from the first sensor.
            let scalar = col[0] / a[0];
            for (y, ai) in col.iter().zip(a.iter()) {
                assert_abs_diff_eq!((y - ai * scalar).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn seeded_determinism() {
        let nfa = fixtures::NFA.build().unwrap();
        let scene = SourceScene::equal_power(vec![-0.1, 0.2], 0.0).unwrap();
        let a = simulate(&nfa, &scene, 50, 42).unwrap();
        let b = simulate(&nfa, &scene, 50, 42).unwrap();
        let c = simulate(&nfa, &scene, 50, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.data, c.data);
        assert!(simulate(&nfa, &scene, 0, 1).is_err());
    }

    #[test]
    fn single_snapshot_covariance() {
        let s = SensorArray::custom([0, 2, 5]).unwrap();
        let scene = SourceScene::equal_power(vec![0.3], 0.0).unwrap();
        let b = simulate(&s, &scene, 1, 7).unwrap();
        let r = sample_covariance(&b);
        let y = b.data.column(0);
        let outer = y * y.adjoint();
        assert_abs_diff_eq!((r.clone() - outer).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(r, r.adjoint());
    }

    #[test]
    fn large_sample_covariance_converges() {
        // theta = 0: a = 1, so R = 11ᴴ + I.
        let s = SensorArray::custom([0, 1, 3]).unwrap();
        let scene = SourceScene::equal_power(vec![0.0], 0.0).unwrap();
        let b = simulate(&s, &scene, 1_000_000, 11).unwrap();
        let r = sample_covariance(&b);
        let expected = expected_covariance(&s, &scene);
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 2.0 } else { 1.0 };
                assert_eq!(expected[(i, j)], Complex64::new(target, 0.0));
                assert!(
                    (r[(i, j)] - expected[(i, j)]).norm() < 0.01 * target,
                    "entry ({i},{j}) = {}",
                    r[(i, j)]
                );
            }
        }
    }
}
