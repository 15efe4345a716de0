use serde::{Deserialize, Serialize};

use super::{Result, StatsError};

/// `B_{2j} / (2j)!` for `j = 1..=7`.
const EULER_MACLAURIN: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// Hurwitz zeta `sum_{k >= 0} (q + k)^(-s)` for `s > 1`, `q > 0`.
///
/// Direct summation until the shifted argument reaches 10, then the
/// Euler–Maclaurin tail. Relative error is below 1e-14 for `s` up to ~20.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let direct = if q < 10.0 { (10.0 - q.floor()) as usize } else { 0 };
    let mut sum = 0.0;
    for k in 0..direct {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + direct as f64;
    let a_pow = a.powf(-s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // Pochhammer (s)_{2j-1} * a^(-s-2j+1), updated two factors at a time.
    let mut term = s * a_pow / a;
    let a2 = a * a;
    for (j, c) in EULER_MACLAURIN.iter().enumerate() {
        sum += c * term;
        let m = 2.0 * (j as f64 + 1.0);
        term *= (s + m - 1.0) * (s + m) / a2;
    }
    sum
}

/// `P(X >= x)` for the discrete power law with exponent `alpha` and lower
/// cutoff `xmin`.
pub fn power_law_ccdf(alpha: f64, xmin: u64, x: u64) -> f64 {
    if x <= xmin {
        1.0
    } else {
        hurwitz_zeta(alpha, x as f64) / hurwitz_zeta(alpha, xmin as f64)
    }
}

/// Maximum-likelihood discrete power-law fit of a count distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent of the frequency distribution, `P(x) ~ x^(-alpha)`.
    pub alpha_pdf: f64,
    /// Rank exponent, `f ~ k^(-gamma)`, with `alpha = 1 + 1/gamma`.
    pub gamma_zipf: f64,
    pub xmin: u64,
    pub n_tail: usize,
    pub loglik: f64,
    pub ks_stat: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfOptions {
    /// Fixed lower cutoff. `None` selects it by minimum KS distance.
    pub xmin: Option<u64>,
    /// Smallest admissible tail.
    pub min_tail: usize,
}

impl Default for ZipfOptions {
    fn default() -> Self {
        Self { xmin: None, min_tail: 50 }
    }
}

const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 20.0;

/// Sorted tail `>= xmin` with its log-sum.
struct Tail<'a> {
    values: &'a [u64],
    log_sum: f64,
}

impl Tail<'_> {
    fn loglik(&self, alpha: f64, xmin: u64) -> f64 {
        -(self.values.len() as f64) * hurwitz_zeta(alpha, xmin as f64).ln() - alpha * self.log_sum
    }

    /// Golden-section maximisation; the log-likelihood is concave in alpha.
    fn mle(&self, xmin: u64) -> Result<(f64, f64)> {
        if self.values.windows(2).all(|w| w[0] == w[1]) {
            return Err(StatsError::Degenerate("every tail value is equal".into()));
        }
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (ALPHA_LO, ALPHA_HI);
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let (mut fc, mut fd) = (self.loglik(c, xmin), self.loglik(d, xmin));
        while b - a > 1e-10 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.loglik(c, xmin);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.loglik(d, xmin);
            }
        }
        let alpha = 0.5 * (a + b);
        if alpha > ALPHA_HI - 1e-3 {
            return Err(StatsError::Degenerate("exponent diverges".into()));
        }
        Ok((alpha, self.loglik(alpha, xmin)))
    }

    /// Largest gap between the empirical and fitted CDFs, evaluated just
    /// below each distinct tail value.
    fn ks(&self, alpha: f64, xmin: u64) -> f64 {
        let n = self.values.len() as f64;
        let z_min = hurwitz_zeta(alpha, xmin as f64);
        let mut z_x = z_min;
        let mut x_prev = xmin;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < self.values.len() {
            let x = self.values[i];
            if x != x_prev {
                // Short gaps: peel terms off the previous zeta value.
                z_x = if x - x_prev <= 16 {
                    (x_prev..x).fold(z_x, |z, m| z - (m as f64).powf(-alpha))
                } else {
                    hurwitz_zeta(alpha, x as f64)
                };
                x_prev = x;
            }
            let model_below = 1.0 - z_x / z_min;
            d = d.max((i as f64 / n - model_below).abs());
            while i < self.values.len() && self.values[i] == x {
                i += 1;
            }
        }
        d
    }
}

/// Discrete power-law MLE of the tail of `counts`.
///
/// With a fixed `xmin` the exponent is fitted to every count `>= xmin`.
/// Otherwise each distinct count leaving at least `min_tail` samples is
/// tried as the cutoff and the one with the smallest KS distance wins
/// (ties go to the smaller cutoff). Input order does not matter.
pub fn fit_zipf_mle(counts: &[u64], options: ZipfOptions) -> Result<PowerLawFit> {
    let mut sorted: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
    if sorted.len() != counts.len() {
        return Err(StatsError::InvalidInput("counts must be positive".into()));
    }
    sorted.sort_unstable();
    // Suffix sums of ln x, so any tail's log-sum is O(1).
    let mut log_suffix = vec![0.0; sorted.len() + 1];
    for i in (0..sorted.len()).rev() {
        log_suffix[i] = log_suffix[i + 1] + (sorted[i] as f64).ln();
    }
    let fit_at = |start: usize, xmin: u64| -> Result<PowerLawFit> {
        let tail = Tail { values: &sorted[start..], log_sum: log_suffix[start] };
        let (alpha, loglik) = tail.mle(xmin)?;
        Ok(PowerLawFit {
            alpha_pdf: alpha,
            gamma_zipf: 1.0 / (alpha - 1.0),
            xmin,
            n_tail: tail.values.len(),
            loglik,
            ks_stat: tail.ks(alpha, xmin),
        })
    };

    match options.xmin {
        Some(xmin) => {
            let start = sorted.partition_point(|&x| x < xmin.max(1));
            let n_tail = sorted.len() - start;
            if n_tail < options.min_tail || n_tail == 0 {
                return Err(StatsError::InsufficientData(format!(
                    "{n_tail} samples at or above xmin = {xmin}, need {}",
                    options.min_tail
                )));
            }
            fit_at(start, xmin.max(1))
        }
        None => {
            let mut best: Option<PowerLawFit> = None;
            let mut start = 0;
            while start < sorted.len() && sorted.len() - start >= options.min_tail.max(1) {
                match fit_at(start, sorted[start]) {
                    Ok(fit) if best.is_none_or(|b| fit.ks_stat < b.ks_stat) => best = Some(fit),
                    Ok(_) | Err(StatsError::Degenerate(_)) => {}
                    Err(e) => return Err(e),
                }
                let x = sorted[start];
                start += sorted[start..].partition_point(|&v| v == x);
            }
            best.ok_or_else(|| {
                if sorted.len() < options.min_tail.max(1) {
                    StatsError::InsufficientData(format!(
                        "{} samples, need at least {}",
                        sorted.len(),
                        options.min_tail
                    ))
                } else {
                    StatsError::Degenerate("no cutoff admits a finite exponent".into())
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Zeta};

    #[test]
    fn zeta_known_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((hurwitz_zeta(2.0, 1.0) - pi2 / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0) - pi2 * pi2 / 90.0).abs() < 1e-13);
        // zeta(2, 1/2) = (2^2 - 1) zeta(2) = pi^2 / 2.
        assert!((hurwitz_zeta(2.0, 0.5) - pi2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_shift_identity_and_brute_force() {
        for &s in &[1.05, 1.5, 1.75, 2.5, 7.0] {
            for &q in &[1.0, 2.0, 9.5, 10.0, 37.0, 1e4, 3.3e6] {
                let (z0, z1) = (hurwitz_zeta(s, q), hurwitz_zeta(s, q + 1.0));
                let rhs = q.powf(-s);
                // The difference cancels catastrophically; bound by the operands.
                assert!((z0 - z1 - rhs).abs() <= 1e-10 * rhs + 1e-14 * z0, "s={s} q={q}");
            }
        }
        // Partial sum plus integral bounds on the remainder.
        let (s, q) = (1.75, 3.0);
        let m = 200_000;
        let partial: f64 = (0..m).map(|k| (q + k as f64).powf(-s)).sum();
        let rest_lo = (q + m as f64).powf(1.0 - s) / (s - 1.0);
        let rest_hi = (q + m as f64 - 1.0).powf(1.0 - s) / (s - 1.0);
        let z = hurwitz_zeta(s, q);
        assert!(z >= partial + rest_lo - 1e-12 && z <= partial + rest_hi + 1e-12);
    }

    fn zeta_samples(alpha: f64, n: usize, seed: u64) -> Vec<u64> {
        let dist = Zeta::new(alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| dist.sample(&mut rng).min(1e18) as u64).collect()
    }

    #[test]
    fn recovers_synthetic_exponent_with_fixed_xmin() {
        let xs = zeta_samples(1.75, 100_000, 17);
        let fit = fit_zipf_mle(&xs, ZipfOptions { xmin: Some(1), min_tail: 50 }).unwrap();
        assert!((fit.alpha_pdf - 1.75).abs() < 0.02, "{}", fit.alpha_pdf);
        assert!((fit.alpha_pdf - (1.0 + 1.0 / fit.gamma_zipf)).abs() < 1e-12);
        assert_eq!(fit.n_tail, 100_000);
        assert!(fit.ks_stat < 0.01);
    }

    #[test]
    fn fixed_cutoff_below_the_data_normalises_at_the_cutoff() {
        let xs = zeta_samples(2.0, 20_000, 5);
        let shifted: Vec<u64> = xs.iter().filter(|&&x| x >= 3).copied().collect();
        let at3 = fit_zipf_mle(&shifted, ZipfOptions { xmin: Some(3), min_tail: 50 }).unwrap();
        let at2 = fit_zipf_mle(&shifted, ZipfOptions { xmin: Some(2), min_tail: 50 }).unwrap();
        assert_eq!(at2.xmin, 2);
        assert_ne!(at2.alpha_pdf, at3.alpha_pdf);
        assert!((at3.alpha_pdf - 2.0).abs() < 0.05);
    }

    #[test]
    fn all_equal_counts_are_degenerate() {
        let xs = vec![4u64; 200];
        assert!(matches!(
            fit_zipf_mle(&xs, ZipfOptions { xmin: Some(1), min_tail: 50 }),
            Err(StatsError::Degenerate(_))
        ));
        assert!(fit_zipf_mle(&xs, ZipfOptions::default()).is_err());
    }

    #[test]
    fn too_few_tail_samples() {
        let xs: Vec<u64> = (1..=30).collect();
        assert!(matches!(
            fit_zipf_mle(&xs, ZipfOptions::default()),
            Err(StatsError::InsufficientData(_))
        ));
    }

    #[test]
    fn zero_counts_rejected() {
        assert!(fit_zipf_mle(&[0, 1, 2], ZipfOptions::default()).is_err());
    }

    #[test]
    fn ccdf_is_one_at_xmin_and_decreasing() {
        assert_eq!(power_law_ccdf(2.0, 3, 3), 1.0);
        let a = power_law_ccdf(2.0, 3, 4);
        let b = power_law_ccdf(2.0, 3, 10);
        assert!(1.0 > a && a > b && b > 0.0);
    }
}
