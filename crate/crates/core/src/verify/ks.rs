//! Kolmogorov–Smirnov statistics and marginal CDFs computed from a density by
//! nested quadrature.

use super::quad::{gauss_legendre, integrate_box, QuadConfig};
use super::support::Layout;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// P(K > λ) for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi theta form of the CDF converges fast for small λ.
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|j| (-((2 * j - 1) as f64).powi(2) * c).exp()).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        s += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Effective λ for sample size n (Stephens' finite-n correction).
fn lambda(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    (sn + 0.12 + 0.11 / sn) * d
}

/// Largest D with P(D_n > D) ≥ alpha, found by bisection on the correction.
pub fn ks_critical_value(n: usize, alpha: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(lambda(mid, n as f64)) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One-sample KS test of `samples` against `cdf`; sorts `samples` in place.
pub fn ks_one_sample(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> KsResult {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    KsResult { statistic: d, p_value: kolmogorov_sf(lambda(d, nf)), n }
}

/// Two-sample KS test; sorts both inputs in place.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> KsResult {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let x = a[i].min(b[j]);
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    let ne = (na * nb) as f64 / (na + nb) as f64;
    KsResult { statistic: d, p_value: kolmogorov_sf(lambda(d, ne)), n: na.min(nb) }
}

/// CDF of the outer support coordinate of a layout, tabulated on
/// Gauss–Legendre panels of its mapped variable and interpolated inside each
/// panel.
#[derive(Debug, Clone)]
pub struct MarginalCdf {
    domain: super::quad::Domain,
    breaks: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<Vec<f64>>,
    cumulative: Vec<f64>,
    total: f64,
    evaluations: usize,
}

impl MarginalCdf {
    /// `density` takes support coordinates.
    pub fn build(
        density: &dyn Fn(&[f64]) -> Result<f64>,
        layout: &Layout,
        panels: usize,
        order: usize,
        cfg: &QuadConfig,
    ) -> Result<Self> {
        let domain = layout.outer_domain();
        let (lo, hi) = domain.t_range();
        let (box_lo, box_hi) = layout.bounds();
        let boxed = layout.pull_back(density);
        let (nodes, weights) = gauss_legendre(order);
        let bary = barycentric_weights(&nodes);
        let width = (hi - lo) / panels as f64;
        let breaks: Vec<f64> = (0..=panels).map(|p| lo + width * p as f64).collect();
        let mut values = Vec::with_capacity(panels);
        let mut cumulative = vec![0.0];
        let mut evaluations = 0;
        for p in 0..panels {
            let (a, b) = (breaks[p], breaks[p + 1]);
            let mut vals = Vec::with_capacity(order);
            let mut mass = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                let t = a + 0.5 * (b - a) * (x + 1.0);
                let inner = integrate_box(
                    &|rest: &[f64]| {
                        let mut u = Vec::with_capacity(rest.len() + 1);
                        u.push(t);
                        u.extend_from_slice(rest);
                        boxed(&u)
                    },
                    &box_lo[1..],
                    &box_hi[1..],
                    cfg,
                )?;
                evaluations += inner.nodes;
                vals.push(inner.value);
                mass += w * inner.value * 0.5 * (b - a);
            }
            values.push(vals);
            cumulative.push(cumulative[p] + mass);
        }
        let total = *cumulative.last().expect("nonempty");
        Ok(Self { domain, breaks, nodes, weights, bary, values, cumulative, total, evaluations })
    }

    /// Total mass; equals 1 for a normalized density.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    fn interpolate(&self, panel: usize, s: f64) -> f64 {
        // s in [−1, 1] is the panel-local variable.
        let mut num = 0.0;
        let mut den = 0.0;
        for ((x, w), v) in self.nodes.iter().zip(&self.bary).zip(&self.values[panel]) {
            let d = s - x;
            if d == 0.0 {
                return *v;
            }
            num += w / d * v;
            den += w / d;
        }
        num / den
    }

    /// Normalized CDF at x.
    pub fn cdf(&self, x: f64) -> f64 {
        let t = self.domain.inverse(x);
        let (lo, hi) = (self.breaks[0], *self.breaks.last().expect("nonempty"));
        if t <= lo {
            return 0.0;
        }
        if t >= hi {
            return 1.0;
        }
        let panels = self.values.len();
        let p = (((t - lo) / (hi - lo) * panels as f64) as usize).min(panels - 1);
        let (a, b) = (self.breaks[p], self.breaks[p + 1]);
        let s_end = 2.0 * (t - a) / (b - a) - 1.0;
        // ∫_{−1}^{s_end} of the interpolant, by Gauss–Legendre on that sub-range.
        let half = 0.5 * (s_end + 1.0);
        let mut part = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let s = -1.0 + half * (x + 1.0);
            part += w * self.interpolate(p, s);
        }
        part *= half * 0.5 * (b - a);
        ((self.cumulative[p] + part) / self.total).clamp(0.0, 1.0)
    }
}

fn barycentric_weights(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|j| 1.0 / (0..x.len()).filter(|&k| k != j).map(|k| x[j] - x[k]).product::<f64>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::verify::support::Support;
    use rand::Rng;
    use rand_distr::StandardNormal;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn kolmogorov_tail_values() {
        // Reference values of the Kolmogorov survival function.
        assert!((kolmogorov_sf(1.0) - 0.269_999_671_677_355_3).abs() < 1e-9);
        assert!((kolmogorov_sf(1.36) - 0.049_485_876_755_377_9).abs() < 1e-12);
        assert!((kolmogorov_sf(0.5) - 0.963_945_243_664_307_6).abs() < 1e-9);
        let d = ks_critical_value(100_000, 0.001);
        assert!((kolmogorov_sf(lambda(d, 1e5)) - 0.001).abs() < 1e-9);
    }

    #[test]
    fn normal_samples_pass_and_shifted_fail() {
        let mut rng = RngStream::new(1, 0);
        let mut xs: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = Normal::new(0.0, 1.0).unwrap();
        assert!(ks_one_sample(&mut xs, |x| n.cdf(x)).p_value > 0.001);
        let shifted = Normal::new(0.05, 1.0).unwrap();
        assert!(ks_one_sample(&mut xs, |x| shifted.cdf(x)).p_value < 0.001);
        let mut ys: Vec<f64> = (0..20_000).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        assert!(ks_two_sample(&mut xs, &mut ys).p_value > 0.001);
    }

    #[test]
    fn marginal_of_correlated_gaussian() {
        // (x, y) with density ∝ exp(−(x² − xy + y²)); x has variance 2/3.
        let support = Support::euclid(vec![0.0, 0.0], vec![1.0, 1.0]);
        let layout = support.layout(0);
        let c = 3f64.sqrt() / (2.0 * std::f64::consts::PI);
        let f = |v: &[f64]| Ok(c * (-(v[0] * v[0] - v[0] * v[1] + v[1] * v[1])).exp());
        let m = MarginalCdf::build(&f, &layout, 16, 8, &QuadConfig::with_tol(1e-9, 1e-13)).unwrap();
        assert!((m.total() - 1.0).abs() < 1e-8, "{}", m.total());
        let n = Normal::new(0.0, (2.0f64 / 3.0).sqrt()).unwrap();
        for x in [-2.0, -0.7, 0.0, 0.3, 1.9] {
            assert!((m.cdf(x) - n.cdf(x)).abs() < 1e-7, "{x}: {} vs {}", m.cdf(x), n.cdf(x));
        }
    }
}
