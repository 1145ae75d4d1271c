use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Generator for one trial: ChaCha8 keyed by the run seed, on a stream derived
/// from the experiment cell and trial index.
///
/// Normal variates come from `rand_distr::StandardNormal` (Ziggurat), so tables
/// are reproducible for a fixed seed across platforms and worker counts.
pub fn trial_rng(seed: u64, cell: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((cell as u64) << 40) | (trial as u64 & ((1 << 40) - 1)));
    rng
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "sigma must be positive and finite, got {sigma}"
        )))
    }
}

pub(crate) fn normal_values<R: Rng + ?Sized>(
    n: usize,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            mu + sigma * z
        })
        .collect()
}

pub fn sample_normal<R: Rng + ?Sized>(
    n: usize,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<SampleSet> {
    check_sigma(sigma)?;
    SampleSet::from_values(normal_values(n, mu, sigma, rng))
}

/// `exp` of `N(mu, sigma^2)` draws.
pub fn sample_lognormal<R: Rng + ?Sized>(
    n: usize,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<SampleSet> {
    check_sigma(sigma)?;
    let mut v = normal_values(n, mu, sigma, rng);
    v.iter_mut().for_each(|x| *x = x.exp());
    SampleSet::from_values(v)
}
