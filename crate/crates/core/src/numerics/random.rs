use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, Normal, StandardNormal};

use crate::error::{domain, Result};

/// Distributions the simulation code draws from. Gamma is parameterised by
/// shape and rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    Uniform,
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
}

/// One reproducible random stream.
///
/// Streams are ChaCha8 keyed by `seed` with the 64-bit ChaCha stream
/// selector set to `stream_id`, so replication `i` of an experiment always
/// sees the same variates no matter which worker thread runs it.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn sample(&mut self, dist: Dist) -> Result<f64> {
        match dist {
            Dist::Uniform => Ok(self.uniform()),
            Dist::Normal { mean, sd } => {
                if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
                    return Err(domain("sd", sd, "(0, inf)"));
                }
                let n = Normal::new(mean, sd).map_err(|_| domain("sd", sd, "(0, inf)"))?;
                Ok(n.sample(&mut self.rng))
            }
            Dist::Exponential { rate } => {
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(domain("rate", rate, "(0, inf)"));
                }
                let e = Exp::new(rate).map_err(|_| domain("rate", rate, "(0, inf)"))?;
                Ok(e.sample(&mut self.rng))
            }
            Dist::Gamma { shape, rate } => {
                if !(shape > 0.0 && shape.is_finite()) {
                    return Err(domain("shape", shape, "(0, inf)"));
                }
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(domain("rate", rate, "(0, inf)"));
                }
                // Marsaglia-Tsang squeeze; shape < 1 handled by the power boost.
                let g = Gamma::new(shape, 1.0 / rate)
                    .map_err(|_| domain("shape", shape, "(0, inf)"))?;
                Ok(g.sample(&mut self.rng))
            }
        }
    }

    /// Fill `out` with draws from `dist`.
    pub fn fill(&mut self, dist: Dist, out: &mut [f64]) -> Result<()> {
        for v in out.iter_mut() {
            *v = self.sample(dist)?;
        }
        Ok(())
    }
}
