//! Simulation of the photonic matrix-element measurement: program a 2x2
//! unitary into a Mach-Zehnder interferometer, register noisy detector
//! powers, normalize to the total output power, and estimate the magnitude
//! of the target matrix element across a range of levels `k`.
//!
//! The interferometer model is `M(theta) = BS * diag(e^{i theta}, 1) * BS`
//! with balanced beamsplitters `BS = (1/sqrt(2)) [[1, i], [i, 1]]`, for
//! which `|M(theta)_11| = |sin(theta/2)|`. External phases do not affect
//! measured powers and are not modeled.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use thiserror::Error;

use crate::braidval::Chirality;
use crate::operators::{tnd_dagger_numeric, tnd_numeric, CouplingParams, Mat2, ParamError};

/// Interferometer configuration: the internal relative phase between the
/// arms, in `[0, pi]`. Light always enters the single input port X.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MziSettings {
    pub theta: f64,
    pub input_port: InputPort,
}

/// The chip has one laser input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputPort {
    X,
}

impl MziSettings {
    pub fn new(theta: f64) -> Self {
        assert!(
            (0.0..=PI).contains(&theta),
            "theta must lie in [0, pi], got {theta}"
        );
        Self {
            theta,
            input_port: InputPort::X,
        }
    }
}

/// Gaussian phase-setting and detector-power errors, with a repeat count and
/// a seed; identical inputs always produce identical outputs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub sigma_theta: f64,
    pub sigma_det: f64,
    pub repeats: u32,
    pub seed: u64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            sigma_theta: 0.0,
            sigma_det: 0.0,
            repeats: 1,
            seed: 0,
        }
    }
}

/// Mean normalized power at detector D1, the matrix-element estimate
/// `sqrt(p1_norm)`, and the standard error of the mean over repeats.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimResult {
    pub p1_norm: f64,
    pub estimate_abs: f64,
    pub std_error: f64,
}

/// One level of the measured-versus-theory curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub k: i64,
    pub theory_abs: f64,
    pub p1_norm: f64,
    pub estimated_abs: f64,
    pub std_error: f64,
}

/// Errors from the interferometer simulation.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SimError {
    #[error("NotUnitary: deviation {deviation:e} from unitarity")]
    NotUnitary { deviation: f64 },
    #[error("AllZeroPower: both detectors read zero in 100 consecutive draws")]
    AllZeroPower,
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("InvalidRange: need k_min <= k_max, got [{k_min}, {k_max}]")]
    InvalidRange { k_min: i64, k_max: i64 },
}

/// Transfer matrix of the balanced interferometer at internal phase `theta`.
pub fn mzi_transfer(theta: f64) -> [[Complex64; 2]; 2] {
    let bs = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
        [Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
    ];
    let phase = Complex64::from_polar(1.0, theta);
    let mut mid = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        mid[i][0] = bs[i][0] * phase;
        mid[i][1] = bs[i][1];
    }
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (mid[i][0] * bs[0][j] + mid[i][1] * bs[1][j]) * 0.5;
        }
    }
    out
}

/// Phase setting that reproduces `|U_11|` on detector D1:
/// `theta = 2 asin(|U_11|)`.
pub fn decompose_unitary(u: &Mat2<Complex64>) -> Result<MziSettings, SimError> {
    let deviation = u.unitarity_deviation();
    if deviation > 1e-10 {
        return Err(SimError::NotUnitary { deviation });
    }
    let target = u.entry(0, 0).norm().min(1.0);
    Ok(MziSettings::new(2.0 * target.asin()))
}

/// Normalized D1 power for one draw; `None` when both detectors clamp to
/// zero and the draw must be repeated.
fn normalized_power(theta: f64, eps: f64, eta1: f64, eta2: f64) -> Option<f64> {
    let half = (theta + eps) / 2.0;
    let p1 = half.sin().powi(2);
    let p2 = half.cos().powi(2);
    let d1 = (p1 * (1.0 + eta1)).max(0.0);
    let d2 = (p2 * (1.0 + eta2)).max(0.0);
    if d1 + d2 > 0.0 {
        Some(d1 / (d1 + d2))
    } else {
        None
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream key for repeat `r` of the measurement salted with `salt`
/// (the level `k` inside a curve); keyed streams make parallel evaluation
/// order irrelevant.
fn repeat_rng(seed: u64, salt: u64, repeat: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ salt) ^ repeat);
    ChaCha8Rng::seed_from_u64(key)
}

fn simulate_keyed(
    settings: &MziSettings,
    noise: &NoiseModel,
    salt: u64,
) -> Result<SimResult, SimError> {
    assert!(noise.repeats >= 1, "need at least one repeat");
    assert!(noise.sigma_theta >= 0.0 && noise.sigma_det >= 0.0);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for r in 0..noise.repeats {
        let mut rng = repeat_rng(noise.seed, salt, r as u64);
        let mut p = None;
        for _ in 0..100 {
            // Draw counts are independent of the sigmas, so a fixed seed
            // couples runs at different noise levels.
            let z_theta: f64 = StandardNormal.sample(&mut rng);
            let z1: f64 = StandardNormal.sample(&mut rng);
            let z2: f64 = StandardNormal.sample(&mut rng);
            p = normalized_power(
                settings.theta,
                noise.sigma_theta * z_theta,
                noise.sigma_det * z1,
                noise.sigma_det * z2,
            );
            if p.is_some() {
                break;
            }
        }
        let p = p.ok_or(SimError::AllZeroPower)?;
        sum += p;
        sumsq += p * p;
    }
    let n = noise.repeats as f64;
    let mean = sum / n;
    let std_error = if noise.repeats >= 2 {
        let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(SimResult {
        p1_norm: mean,
        estimate_abs: mean.sqrt(),
        std_error,
    })
}

/// Repeated noisy measurement of the configured interferometer. Powers are
/// normalized per repeat to the total over both detectors, so
/// `p1 + p2 = 1` holds exactly.
pub fn simulate(settings: &MziSettings, noise: &NoiseModel) -> Result<SimResult, SimError> {
    simulate_keyed(settings, noise, 0)
}

fn target_unitary(n: u32, params: &CouplingParams, chirality: Chirality) -> Mat2<Complex64> {
    let base = match chirality {
        Chirality::Positive => tnd_numeric(params),
        Chirality::Negative => tnd_dagger_numeric(params),
    };
    base.pow(n).expect("closure basis is square")
}

/// `|((T_nd)^n)_11|` from a direct numeric matrix power.
pub fn theory_abs(n: u32, params: &CouplingParams, chirality: Chirality) -> f64 {
    target_unitary(n, params, chirality).entry(0, 0).norm()
}

fn measure_element_keyed(
    n: u32,
    params: &CouplingParams,
    chirality: Chirality,
    noise: &NoiseModel,
    salt: u64,
) -> Result<SimResult, SimError> {
    let u = target_unitary(n, params, chirality);
    let settings = decompose_unitary(&u)?;
    simulate_keyed(&settings, noise, salt)
}

/// Programs `(T_nd)^n` into the interferometer and estimates `|element_11|`
/// from the normalized detector powers.
pub fn measure_element(
    n: u32,
    params: &CouplingParams,
    chirality: Chirality,
    noise: &NoiseModel,
) -> Result<SimResult, SimError> {
    measure_element_keyed(n, params, chirality, noise, 0)
}

/// Theory and estimate for every integer level in `[k_min, k_max]`, in
/// ascending order. Random streams are keyed by `(seed, k, repeat)`.
pub fn curve(
    n: u32,
    rank: i64,
    k_min: i64,
    k_max: i64,
    chirality: Chirality,
    noise: &NoiseModel,
) -> Result<Vec<CurvePoint>, SimError> {
    if k_max < k_min {
        return Err(SimError::InvalidRange { k_min, k_max });
    }
    let mut points = Vec::with_capacity((k_max - k_min + 1) as usize);
    for k in k_min..=k_max {
        let params = CouplingParams::new(rank, k)?;
        let theory = theory_abs(n, &params, chirality);
        let sim = measure_element_keyed(n, &params, chirality, noise, k as u64)?;
        points.push(CurvePoint {
            k,
            theory_abs: theory,
            p1_norm: sim.p1_norm,
            estimated_abs: sim.estimate_abs,
            std_error: sim.std_error,
        });
    }
    Ok(points)
}
