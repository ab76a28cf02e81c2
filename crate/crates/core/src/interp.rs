//! Piecewise-linear and monotone piecewise-cubic interpolation.

/// Piecewise-linear curve through `(x, y)` knots with constant extension
/// beyond the first and last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Knots must be finite with strictly increasing `x`; at least two.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, String> {
        if knots.len() < 2 {
            return Err(format!("needs at least 2 knots, got {}", knots.len()));
        }
        for w in knots.windows(2) {
            // Comparison phrased so a NaN position also fails the check.
            let strictly_up = w[1].0 > w[0].0;
            if !strictly_up {
                return Err(format!("knot positions must strictly increase ({} then {})", w[0].0, w[1].0));
            }
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err("knots must be finite".into());
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn first_x(&self) -> f64 {
        self.knots[0].0
    }

    pub fn last_x(&self) -> f64 {
        self.knots[self.knots.len() - 1].0
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        if x >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        // First knot strictly right of x, then interpolate on the segment before it.
        let j = k.partition_point(|&(xj, _)| xj <= x);
        let (x0, y0) = k[j - 1];
        let (x1, y1) = k[j];
        let t = (x - x0) / (x1 - x0);
        y0 + t * (y1 - y0)
    }

    pub fn max_value(&self) -> f64 {
        self.knots.iter().map(|&(_, y)| y).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.knots.iter().map(|&(_, y)| y).fold(f64::INFINITY, f64::min)
    }
}

/// Monotone piecewise-cubic curve (Fritsch–Carlson slopes) through
/// nondecreasing `(x, y)` knots.
///
/// Both end slopes are forced to zero so the constant extension beyond the
/// knot range keeps the curve continuously differentiable; zero is always an
/// admissible monotone slope, so the interpolant stays nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Knots must be finite, strictly increasing in `x`, nondecreasing in `y`.
    pub fn new(knots: &[(f64, f64)]) -> Result<Self, String> {
        if knots.len() < 2 {
            return Err(format!("needs at least 2 knots, got {}", knots.len()));
        }
        for w in knots.windows(2) {
            // Comparison phrased so a NaN position also fails the check.
            let strictly_up = w[1].0 > w[0].0;
            if !strictly_up {
                return Err(format!("knot positions must strictly increase ({} then {})", w[0].0, w[1].0));
            }
            if w[1].1 < w[0].1 {
                return Err(format!("knot values must be nondecreasing ({} then {})", w[0].1, w[1].1));
            }
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err("knots must be finite".into());
        }

        let xs: Vec<f64> = knots.iter().map(|&(x, _)| x).collect();
        let ys: Vec<f64> = knots.iter().map(|&(_, y)| y).collect();
        let m = xs.len();
        let secants: Vec<f64> = (0..m - 1)
            .map(|j| (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]))
            .collect();

        let mut slopes = vec![0.0; m];
        for j in 1..m - 1 {
            slopes[j] = if secants[j - 1] == 0.0 || secants[j] == 0.0 {
                0.0
            } else {
                0.5 * (secants[j - 1] + secants[j])
            };
        }
        // Fritsch–Carlson limiter keeps every segment monotone.
        for j in 0..m - 1 {
            if secants[j] == 0.0 {
                slopes[j] = 0.0;
                slopes[j + 1] = 0.0;
            } else {
                let alpha = slopes[j] / secants[j];
                let beta = slopes[j + 1] / secants[j];
                let r2 = alpha * alpha + beta * beta;
                if r2 > 9.0 {
                    let tau = 3.0 / r2.sqrt();
                    slopes[j] = tau * alpha * secants[j];
                    slopes[j + 1] = tau * beta * secants[j];
                }
            }
        }
        slopes[0] = 0.0;
        slopes[m - 1] = 0.0;

        Ok(Self { xs, ys, slopes })
    }

    pub fn first_x(&self) -> f64 {
        self.xs[0]
    }

    pub fn last_x(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn last_value(&self) -> f64 {
        self.ys[self.ys.len() - 1]
    }

    fn segment(&self, x: f64) -> usize {
        let j = self.xs.partition_point(|&xj| xj <= x);
        j.clamp(1, self.xs.len() - 1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[self.xs.len() - 1] {
            return self.ys[self.ys.len() - 1];
        }
        let j = self.segment(x);
        let h = self.xs[j + 1] - self.xs[j];
        let t = (x - self.xs[j]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[j] + h10 * h * self.slopes[j] + h01 * self.ys[j + 1] + h11 * h * self.slopes[j + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x <= self.xs[0] || x >= self.xs[last] {
            return 0.0;
        }
        let j = self.segment(x);
        let h = self.xs[j + 1] - self.xs[j];
        let t = (x - self.xs[j]) / h;
        let t2 = t * t;
        (6.0 * t2 - 6.0 * t) * (self.ys[j] - self.ys[j + 1]) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.slopes[j]
            + (3.0 * t2 - 2.0 * t) * self.slopes[j + 1]
    }
}
