//! Throughput, refined/original ratio and Jain fairness, all in exact
//! rationals. Conversion to floating point happens only when reporting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scheduler::TrafficStats;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no measured slots")]
    NoMeasuredSlots,
    #[error("ratio undefined: original throughput is zero")]
    UndefinedRatio,
    #[error("fairness undefined for an empty or all-zero vector")]
    UndefinedFairness,
    #[error("negative traffic count")]
    NegativeCount,
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Delivered packets per slot over the measured window.
pub fn throughput(stats: &TrafficStats) -> Result<BigRational, MetricsError> {
    if stats.measured_slots == 0 {
        return Err(MetricsError::NoMeasuredSlots);
    }
    Ok(BigRational::new(
        BigInt::from(stats.delivered_measured()),
        BigInt::from(stats.measured_slots),
    ))
}

/// Refined throughput over original throughput.
pub fn sigma(refined: &BigRational, original: &BigRational) -> Result<BigRational, MetricsError> {
    if original.is_zero() {
        return Err(MetricsError::UndefinedRatio);
    }
    Ok(refined / original)
}

/// `(sum x)^2 / (m * sum x^2)` over nonnegative values, at least one positive.
pub fn jain_index(x: &[BigRational]) -> Result<BigRational, MetricsError> {
    let zero = BigRational::zero();
    if x.iter().any(|v| *v < zero) {
        return Err(MetricsError::NegativeCount);
    }
    let sum: BigRational = x.iter().sum();
    if x.is_empty() || sum.is_zero() {
        return Err(MetricsError::UndefinedFairness);
    }
    let squares: BigRational = x.iter().map(|v| v * v).sum();
    let m = int(x.len() as u64);
    Ok(&sum * &sum / (m * squares))
}

/// Fairness over per-path delivery counts, idle paths included.
pub fn fairness_paths(x: &[u64]) -> Result<BigRational, MetricsError> {
    let v: Vec<BigRational> = x.iter().map(|&c| int(c)).collect();
    jain_index(&v)
}

/// Fairness over per-OD-pair delivery counts.
pub fn fairness_od(x: &[u64]) -> Result<BigRational, MetricsError> {
    fairness_paths(x)
}

/// Number of OD pairs that delivered nothing during the measured window.
pub fn zero_traffic_pairs(stats: &TrafficStats) -> usize {
    stats.per_od.iter().filter(|o| o.delivered == 0).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputReport {
    pub packets_per_slot: f64,
    pub packets_per_second: f64,
    pub sigma: Option<f64>,
    pub theta: f64,
}

impl ThroughputReport {
    pub fn new(
        per_slot: &BigRational,
        slot_seconds: f64,
        sigma: Option<&BigRational>,
        theta: f64,
    ) -> Self {
        let pps = to_f64(per_slot);
        Self {
            packets_per_slot: pps,
            packets_per_second: pps / slot_seconds,
            sigma: sigma.map(to_f64),
            theta,
        }
    }
}

/// Sample mean with a 95% normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanCi {
    pub count: usize,
    pub mean: f64,
    pub half_width: f64,
}

impl MeanCi {
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let half_width = if samples.len() > 1 {
            let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
            1.96 * (var / n).sqrt()
        } else {
            0.0
        };
        Some(Self {
            count: samples.len(),
            mean,
            half_width,
        })
    }
}
