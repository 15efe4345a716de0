use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GaError, Result};

pub const CANON_MIN: u64 = 5_000;
pub const CANON_MAX: u64 = 30_000;
pub const S0_MIN: u64 = 1_000;
pub const S0_MAX: u64 = 10_000;
/// Bounds on `canon_year_size * mu`, the expected innovations per canon year.
pub const THETA_MIN: f64 = 5.0;
pub const THETA_MAX: f64 = 90.0;

/// The three free parameters of a calibration run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub canon_year_size: u64,
    pub mu: f64,
    pub s0: u64,
}

impl Genome {
    pub fn theta(&self) -> f64 {
        self.canon_year_size as f64 * self.mu
    }

    pub fn in_bounds(&self) -> bool {
        (CANON_MIN..=CANON_MAX).contains(&self.canon_year_size)
            && (S0_MIN..=S0_MAX).contains(&self.s0)
            && self.mu > 0.0
            && self.mu < 1.0
            // Slack for the rounding in `canon * (THETA / canon)`.
            && (THETA_MIN * (1.0 - 1e-12)..=THETA_MAX * (1.0 + 1e-12)).contains(&self.theta())
    }

    pub fn check(&self) -> Result<()> {
        if self.in_bounds() {
            Ok(())
        } else {
            Err(GaError::OutOfBounds(*self))
        }
    }

    /// Uniform `canon_year_size` and `s0`, log-uniform `mu` within the
    /// admissible band for that canon size.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let canon_year_size = rng.random_range(CANON_MIN..=CANON_MAX);
        let s0 = rng.random_range(S0_MIN..=S0_MAX);
        Self { canon_year_size, mu: random_mu(canon_year_size, rng), s0 }
    }

    /// Per-parameter uniform crossover.
    pub fn crossover<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> Self {
        let mut pick = |x, y| if rng.random_bool(0.5) { x } else { y };
        let canon_year_size = pick(a.canon_year_size, b.canon_year_size);
        let s0 = pick(a.s0, b.s0);
        let mu = if rng.random_bool(0.5) { a.mu } else { b.mu };
        Self { canon_year_size, mu, s0 }
    }

    /// Redraws one parameter, chosen uniformly, within its bounds.
    pub fn mutate<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        match rng.random_range(0..3) {
            0 => self.canon_year_size = rng.random_range(CANON_MIN..=CANON_MAX),
            1 => self.mu = random_mu(self.canon_year_size, rng),
            _ => self.s0 = rng.random_range(S0_MIN..=S0_MAX),
        }
    }

    /// Resamples `mu` when the innovation band is violated (e.g. after
    /// crossover paired a `mu` with a different canon size).
    pub fn enforce_bounds<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.canon_year_size = self.canon_year_size.clamp(CANON_MIN, CANON_MAX);
        self.s0 = self.s0.clamp(S0_MIN, S0_MAX);
        if !self.in_bounds() {
            self.mu = random_mu(self.canon_year_size, rng);
        }
    }
}

fn random_mu<R: Rng + ?Sized>(canon: u64, rng: &mut R) -> f64 {
    let n = canon as f64;
    let (lo, hi) = (THETA_MIN / n, THETA_MAX / n);
    let mu = (rng.random_range(lo.ln()..=hi.ln())).exp();
    // exp(ln x) can land an ulp outside the band.
    mu.clamp(lo, hi)
}
