//! Closed-form least-squares line fit, y = m x + b.

use crate::error::{LaneError, Result};
use crate::estimation::{ensure_finite, Point2};

/// Fitted line minimizing the squared vertical residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub m: f64,
    pub b: f64,
    pub n: usize,
}

impl LineFit {
    pub fn y_at(&self, x: f64) -> f64 {
        self.m * x + self.b
    }

    /// x where the line crosses the given y; `None` for a flat line.
    pub fn x_at(&self, y: f64) -> Option<f64> {
        if self.m.abs() < 1e-9 {
            None
        } else {
            Some((y - self.b) / self.m)
        }
    }
}

/// m = (n Σxy − Σx Σy) / (n Σx² − (Σx)²), b = (Σy − m Σx) / n.
///
/// All-equal x values make the denominator vanish; that surfaces as
/// [`LaneError::VerticalLine`] so callers can substitute their own fallback.
pub fn fit_least_squares(points: &[Point2]) -> Result<LineFit> {
    if points.len() < 2 {
        return Err(LaneError::Parameter(format!(
            "least-squares fit needs >= 2 points, got {}",
            points.len()
        )));
    }
    ensure_finite(points)?;
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.x).sum();
    let sy: f64 = points.iter().map(|p| p.y).sum();
    let sxy: f64 = points.iter().map(|p| p.x * p.y).sum();
    let sxx: f64 = points.iter().map(|p| p.x * p.x).sum();

    let den = n * sxx - sx * sx;
    // Relative degeneracy test: den is O(n² var(x) ...); compare against
    // the magnitude of its ingredients.
    if den.abs() <= 1e-12 * (n * sxx).abs().max(1e-300) {
        return Err(LaneError::VerticalLine);
    }
    let m = (n * sxy - sx * sy) / den;
    let b = (sy - m * sx) / n;
    Ok(LineFit {
        m,
        b,
        n: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
        raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    /// Independent oracle: mean-centered form
    /// m = Σ(x-x̄)(y-ȳ) / Σ(x-x̄)², b = ȳ - m x̄.
    fn centered_fit(points: &[Point2]) -> (f64, f64) {
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
        let my = points.iter().map(|p| p.y).sum::<f64>() / n;
        let num: f64 = points.iter().map(|p| (p.x - mx) * (p.y - my)).sum();
        let den: f64 = points.iter().map(|p| (p.x - mx).powi(2)).sum();
        let m = num / den;
        (m, my - m * mx)
    }

    #[test]
    fn exact_collinear_points() {
        let fit = fit_least_squares(&pts(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)])).unwrap();
        assert!((fit.m - 2.0).abs() < 1e-12);
        assert!((fit.b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_tent() {
        // Σx=3, Σy=1, Σxy=1, Σx²=5, n=3: m = (3-3)/(15-9) = 0, b = 1/3.
        let fit = fit_least_squares(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])).unwrap();
        assert!(fit.m.abs() < 1e-12);
        assert!((fit.b - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_points_signal_vertical_line() {
        let err = fit_least_squares(&pts(&[(0.0, 0.0), (0.0, 1.0)])).unwrap_err();
        assert!(matches!(err, LaneError::VerticalLine));
    }

    #[test]
    fn needs_two_points() {
        assert!(fit_least_squares(&pts(&[(1.0, 2.0)])).is_err());
    }

    #[test]
    fn matches_centered_oracle_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(123);
        for _ in 0..500 {
            let n = rng.gen_range(2..=500);
            let mut points = Vec::with_capacity(n);
            // Spread x so the fit is well-conditioned; allow any y.
            for _ in 0..n {
                points.push(Point2::new(
                    rng.gen_range(0.0..1000.0),
                    rng.gen_range(-500.0..500.0),
                ));
            }
            let Ok(fit) = fit_least_squares(&points) else {
                continue; // degenerate x draw, astronomically unlikely
            };
            let (om, ob) = centered_fit(&points);
            assert!(
                (fit.m - om).abs() <= 1e-9 * om.abs().max(1.0),
                "m {} vs {om}",
                fit.m
            );
            assert!(
                (fit.b - ob).abs() <= 1e-9 * ob.abs().max(1.0),
                "b {} vs {ob}",
                fit.b
            );
        }
    }

    #[test]
    fn residuals_orthogonal_to_design_columns() {
        let mut rng = StdRng::seed_from_u64(55);
        for _ in 0..50 {
            let n = rng.gen_range(3..=100);
            let points: Vec<Point2> = (0..n)
                .map(|_| Point2::new(rng.gen_range(0.0..100.0), rng.gen_range(-50.0..50.0)))
                .collect();
            let Ok(fit) = fit_least_squares(&points) else {
                continue;
            };
            let res: Vec<f64> = points.iter().map(|p| p.y - fit.y_at(p.x)).collect();
            let dot_ones: f64 = res.iter().sum();
            let dot_x: f64 = points.iter().zip(&res).map(|(p, r)| p.x * r).sum();
            let scale: f64 = points.iter().map(|p| p.y.abs()).sum::<f64>() + 1.0;
            assert!(dot_ones.abs() <= 1e-9 * scale);
            assert!(dot_x.abs() <= 1e-9 * scale * 100.0);
        }
    }
}
