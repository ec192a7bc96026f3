//! Seeded channel models producing channel LLRs.
//!
//! Randomness comes from ChaCha8 streams keyed by `(seed, stream)`, so a
//! Monte-Carlo trial draws the same numbers no matter which worker runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bits::BitVec;
use crate::decoder::LlrVec;
use crate::error::{invalid, Result};

/// LLR magnitude given to unerased BEC symbols.
pub const BEC_RELIABLE_LLR: f64 = 100.0;

/// Independent stream number `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Eb/N0 operating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPoint {
    pub ebn0_db: f64,
}

impl SnrPoint {
    pub fn new(ebn0_db: f64) -> Result<Self> {
        if !ebn0_db.is_finite() {
            return Err(invalid(format!("Eb/N0 {ebn0_db} dB is not finite")));
        }
        Ok(SnrPoint { ebn0_db })
    }

    /// Noise standard deviation for BPSK at code rate `rate`:
    /// `sqrt(1 / (2 R 10^(Eb/N0 / 10)))`.
    pub fn sigma(&self, rate: f64) -> f64 {
        (1.0 / (2.0 * rate * 10f64.powf(self.ebn0_db / 10.0))).sqrt()
    }

    /// `points` evenly spaced values from `start` to `stop` inclusive.
    pub fn sweep(start_db: f64, stop_db: f64, points: usize) -> Result<Vec<SnrPoint>> {
        if points == 0 {
            return Err(invalid("an SNR sweep needs at least one point"));
        }
        if start_db.is_nan() || stop_db.is_nan() || start_db > stop_db {
            return Err(invalid(format!(
                "SNR sweep start {start_db} above stop {stop_db}"
            )));
        }
        if points == 1 {
            return Ok(vec![SnrPoint::new(start_db)?]);
        }
        let step = (stop_db - start_db) / (points - 1) as f64;
        (0..points)
            .map(|k| {
                SnrPoint::new(if k + 1 == points {
                    stop_db
                } else {
                    start_db + step * k as f64
                })
            })
            .collect()
    }
}

/// BPSK over additive white Gaussian noise: bit 0 maps to +1, bit 1 to -1,
/// and the LLR of `y = s + noise` is `2y / sigma^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AwgnChannel {
    sigma: f64,
    seed: u64,
}

impl AwgnChannel {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid(format!("noise deviation {sigma} must be positive")));
        }
        Ok(AwgnChannel { sigma, seed })
    }

    pub fn at(point: SnrPoint, rate: f64, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(invalid(format!("code rate {rate} outside (0, 1]")));
        }
        Self::new(point.sigma(rate), seed)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Noise from stream `stream` of this channel's seed.
    pub fn llrs_for_stream(&self, x: &BitVec, stream: u64) -> LlrVec {
        self.llrs_with(x, &mut stream_rng(self.seed, stream))
    }

    pub fn llrs_with<R: Rng + ?Sized>(&self, x: &BitVec, rng: &mut R) -> LlrVec {
        let values = x
            .iter()
            .map(|b| bpsk_llr(b, rng.sample(StandardNormal), self.sigma))
            .collect::<Vec<_>>();
        LlrVec::try_from(values).expect("finite noise")
    }
}

/// LLR of one BPSK symbol carrying `bit` with standard-normal draw `noise`.
#[inline]
pub fn bpsk_llr(bit: u8, noise: f64, sigma: f64) -> f64 {
    let symbol = if bit == 0 { 1.0 } else { -1.0 };
    2.0 * (symbol + sigma * noise) / (sigma * sigma)
}

/// LLRs of `x` through `ch`, drawn from stream 0 of the channel's seed.
pub fn bpsk_awgn_llrs(x: &BitVec, ch: &AwgnChannel) -> LlrVec {
    ch.llrs_for_stream(x, 0)
}

/// Binary erasure channel: erased symbols get LLR 0, the others
/// `±BEC_RELIABLE_LLR`.
pub fn bec_llrs_with<R: Rng + ?Sized>(x: &BitVec, epsilon: f64, rng: &mut R) -> Result<LlrVec> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(invalid(format!(
            "erasure probability {epsilon} outside [0, 1)"
        )));
    }
    let values = x
        .iter()
        .map(|b| {
            if rng.random::<f64>() < epsilon {
                0.0
            } else if b == 0 {
                BEC_RELIABLE_LLR
            } else {
                -BEC_RELIABLE_LLR
            }
        })
        .collect::<Vec<_>>();
    LlrVec::try_from(values)
}

pub fn bec_llrs(x: &BitVec, epsilon: f64, seed: u64) -> Result<LlrVec> {
    bec_llrs_with(x, epsilon, &mut stream_rng(seed, 0))
}
