use std::f64::consts::PI;

use serde::Serialize;

use super::plan::{SamplingPlan, Strategy};
use crate::concurrence::ConcurrenceSeries;
use crate::{Error, Result};

const GRID_POINTS: usize = 201;
const GOLDEN_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyEstimate {
    /// Estimated coupling combination `ω`.
    pub omega_hat: f64,
    pub delta_f_over_f: f64,
    /// Bin-center frequency of the spectral peak, about `4ω`.
    pub raw_peak_omega: f64,
    /// False when the fit left its search window and the coarse estimate
    /// was kept.
    pub converged: bool,
}

/// `δf/f = 4/(nt·√Ne)`.
pub fn fractional_uncertainty(nt: usize, ne: u64) -> f64 {
    4.0 / (nt as f64 * (ne as f64).sqrt())
}

struct Samples {
    t: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Samples {
    fn from_points(series: &ConcurrenceSeries, range: std::ops::Range<usize>) -> Self {
        let points = &series.points()[range];
        Self {
            t: points.iter().map(|p| p.time).collect(),
            y: points.iter().map(|p| p.c2_estimate).collect(),
            w: points.iter().map(|p| p.shots().max(1) as f64).collect(),
        }
    }

    /// Weighted residual of `a·sin²(ω̃t) + b` with `a`, `b` solved linearly.
    fn free_cost(&self, wt: f64) -> f64 {
        let (mut sw, mut ss, mut sss, mut sy, mut ssy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for ((t, y), w) in self.t.iter().zip(&self.y).zip(&self.w) {
            let s = (wt * t).sin().powi(2);
            sw += w;
            ss += w * s;
            sss += w * s * s;
            sy += w * y;
            ssy += w * s * y;
            syy += w * y * y;
        }
        let det = sw * sss - ss * ss;
        let base = syy - sy * sy / sw;
        if det <= 1e-14 * sw * sw {
            return base;
        }
        let a = (sw * ssy - ss * sy) / det;
        let b = (sy - a * ss) / sw;
        syy - a * ssy - b * sy
    }

    /// Weighted residual of `sin²(ω̃t)` with unit contrast and no offset.
    fn fixed_cost(&self, wt: f64) -> f64 {
        self.t
            .iter()
            .zip(&self.y)
            .zip(&self.w)
            .map(|((t, y), w)| w * (y - (wt * t).sin().powi(2)).powi(2))
            .sum()
    }
}

/// Grid search followed by golden-section polishing. The flag reports
/// whether the best grid point lay on the window edge.
fn minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, bool) {
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid = |i: usize| lo + step * i as f64;
    let best = (0..GRID_POINTS)
        .map(|i| (i, f(grid(i))))
        .fold(
            (0, f64::INFINITY),
            |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
        )
        .0;
    let on_edge = best == 0 || best == GRID_POINTS - 1;
    let (mut a, mut b) = (
        grid(best.saturating_sub(1)),
        grid((best + 1).min(GRID_POINTS - 1)),
    );
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
        if b - a <= 1e-15 * b.abs() {
            break;
        }
    }
    (0.5 * (a + b), on_edge)
}

/// Least-squares fit of `a·sin²(ω̃t) + b`, seeded by the spectral peak
/// `coarse ≈ 2ω̃`, reported as `omega_hat = ω̃/2`.
///
/// The uniform strategy fits all points with shot-count weights inside a
/// window of one DFT bin around the peak. The endpoint strategy first fits
/// the two-shot interior the same way, then refines the phase with the two
/// high-shot endpoint blocks alone, using a unit-contrast model inside a
/// half-period window around the interior fit. A fit ending on a window
/// edge falls back to the coarse peak with a one-bin uncertainty and clears
/// `converged`.
pub fn refine_frequency(
    series: &ConcurrenceSeries,
    coarse: f64,
    plan: &SamplingPlan,
) -> Result<FrequencyEstimate> {
    if !(coarse > 0.0 && coarse.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coarse peak must be positive, got {coarse}"
        )));
    }
    if series.len() != plan.nt() || (series.dt() - plan.dt()).abs() > 1e-9 * plan.dt() {
        return Err(Error::InvalidPlan(
            "series does not follow the sampling plan".into(),
        ));
    }
    let resolution = plan.resolution();
    let lo = ((coarse - resolution) / 2.0).max(0.25 * resolution);
    let hi = (coarse + resolution) / 2.0;
    let nt = plan.nt();

    let fitted = match plan.strategy() {
        Strategy::Uniform => {
            let all = Samples::from_points(series, 0..nt);
            let (wt, edge) = minimize(|w| all.free_cost(w), lo, hi);
            (!edge).then_some(wt)
        }
        Strategy::Endpoint => {
            let interior = Samples::from_points(series, 0..nt - 2);
            let (wt1, edge) = minimize(|w| interior.free_cost(w), lo, hi);
            if edge {
                None
            } else {
                let ends = Samples::from_points(series, nt - 2..nt);
                let half = PI / (2.0 * plan.time(nt - 1));
                let (wt2, edge) = minimize(|w| ends.fixed_cost(w), wt1 - half, wt1 + half);
                (!edge).then_some(wt2)
            }
        }
    };

    Ok(match fitted {
        Some(wt) => FrequencyEstimate {
            omega_hat: wt / 2.0,
            delta_f_over_f: fractional_uncertainty(nt, plan.effective_ne()),
            raw_peak_omega: coarse,
            converged: true,
        },
        None => FrequencyEstimate {
            omega_hat: coarse / 4.0,
            delta_f_over_f: resolution / coarse,
            raw_peak_omega: coarse,
            converged: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::{ConcurrencePoint, ConcurrenceSeries};

    fn series(plan: &SamplingPlan, omega: f64) -> ConcurrenceSeries {
        let points = (0..plan.nt())
            .map(|n| {
                let t = plan.time(n);
                ConcurrencePoint {
                    time: t,
                    c2_estimate: (2.0 * omega * t).sin().powi(2),
                    shots_zz: plan.shots_at(n),
                    shots_xz: 0,
                }
            })
            .collect();
        ConcurrenceSeries::new(plan.dt(), points).unwrap()
    }

    #[test]
    fn eq8_value() {
        assert!((fractional_uncertainty(10, 100) - 0.04).abs() < 1e-15);
    }

    #[test]
    fn exact_data_recovers_frequency() {
        for strategy in [Strategy::Uniform, Strategy::Endpoint] {
            for omega in [0.6, 0.77, 1.8] {
                let plan = super::super::plan_observation(omega * 1.1, 64, 100, strategy).unwrap();
                let s = series(&plan, omega);
                let peak = super::super::find_peak(&super::super::dft(&s).unwrap()).unwrap();
                let est = refine_frequency(&s, peak.omega, &plan).unwrap();
                assert!(est.converged);
                assert!(
                    (est.omega_hat / omega - 1.0).abs() < 1e-6,
                    "{strategy:?} {omega} {est:?}"
                );
            }
        }
    }

    #[test]
    fn far_coarse_guess_falls_back() {
        let plan = SamplingPlan::uniform(64, 0.2, 10).unwrap();
        let s = series(&plan, 0.5);
        let coarse = 2.0 + 1.3 * plan.resolution();
        let est = refine_frequency(&s, coarse, &plan).unwrap();
        assert!(!est.converged);
        assert_eq!(est.omega_hat, coarse / 4.0);
        assert!((est.delta_f_over_f - plan.resolution() / coarse).abs() < 1e-15);
    }
}
