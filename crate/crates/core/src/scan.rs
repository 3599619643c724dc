//! One row of a many-body scan, the unit of every CSV the CLI writes.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub backend: String,
    #[serde(rename = "L")]
    pub l: usize,
    /// Transverse field for chain scans, measurement rate for circuits.
    pub h: f64,
    /// 1-based site index of the second qubit; the first is site 1.
    pub r: usize,
    pub axis: Option<char>,
    pub measure_name: String,
    pub value: f64,
    pub stderr: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl ScanRecord {
    pub fn new(backend: &str, l: usize, h: f64, r: usize, measure_name: &str, value: f64) -> Self {
        Self {
            backend: backend.to_string(),
            l,
            h,
            r,
            axis: None,
            measure_name: measure_name.to_string(),
            value,
            stderr: None,
            n_samples: None,
            seed: None,
        }
    }

    pub fn with_axis(mut self, axis: char) -> Self {
        self.axis = Some(axis);
        self
    }

    pub fn with_stats(mut self, stderr: f64, n_samples: usize) -> Self {
        self.stderr = Some(stderr);
        self.n_samples = Some(n_samples);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// `(r, value)` pairs of the records named `measure`, in input order.
pub fn series(records: &[ScanRecord], measure: &str) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.measure_name == measure)
        .map(|r| (r.r as f64, r.value))
        .collect()
}

/// Streaming mean and variance, mergeable in any grouping.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    n: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n * other.n) as f64 / n as f64,
        }
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for RunningStats {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.push(x);
        }
        s
    }
}
