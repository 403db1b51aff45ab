//! Coarray MUSIC direction-of-arrival estimation.
//!
//! Pipeline: simulate narrowband far-field snapshots, form the sample
//! covariance, average it onto the difference coarray, build the Hermitian
//! Toeplitz matrix on the central segment, and scan the MUSIC pseudospectrum
//! over normalized DOAs `θ' = (d/λ) sin θ ∈ [−0.5, 0.5)`.

mod music;
mod scene;
mod signal;
mod trials;

pub use music::{
    coarray_autocorrelation, estimate_doas, music_spectrum, pick_peaks, rmse, theta_grid,
    toeplitz_augment, write_spectrum_csv, Autocorrelation, MusicOptions, MusicResult, PeakPick,
    Spectrum, DEFAULT_GRID_SIZE,
};
pub use scene::{SceneLayout, SourceScene};
pub use signal::{
    expected_covariance, sample_covariance, simulate, steering_vector, ula_steering, SnapshotBatch,
};
pub use trials::{
    run_trial_batch, trial_seed, TrialBatchResult, TrialOptions, TrialOutcome, TrialReport,
};

pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;
pub type CMatrix = nalgebra::DMatrix<Complex64>;
pub type CVector = nalgebra::DVector<Complex64>;
