//! Limited-memory BFGS with Armijo backtracking, used for the smoothed
//! objectives of the scaling and interpolation solvers.

use std::collections::VecDeque;

pub(crate) struct Lbfgs {
    pub memory: usize,
    pub max_iter: usize,
    /// Stop when the relative decrease over one step falls below this.
    pub ftol: f64,
}

impl Default for Lbfgs {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iter: 500,
            ftol: 1e-13,
        }
    }
}

#[cfg_attr(not(test), allow(dead_code))]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Lbfgs {
    /// Minimizes `f`, which returns the value and gradient. Non-finite values
    /// are treated as `+∞` by the line search.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> (f64, Vec<f64>), x0: Vec<f64>) -> Minimum {
        let mut x = x0;
        let (mut fx, mut g) = f(&x);
        let mut hist: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
        let mut iterations = 0;
        if !fx.is_finite() {
            return Minimum { x, value: fx, iterations };
        }
        for it in 0..self.max_iter {
            iterations = it + 1;
            // two-loop recursion
            let mut q = g.clone();
            let mut alphas = Vec::with_capacity(hist.len());
            for (s, y, rho) in hist.iter().rev() {
                let a = rho * dot(s, &q);
                q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
                alphas.push(a);
            }
            if let Some((s, y, _)) = hist.back() {
                let gamma = dot(s, y) / dot(y, y);
                q.iter_mut().for_each(|qi| *qi *= gamma);
            } else {
                let gn = dot(&g, &g).sqrt();
                if gn > 0.0 {
                    let scale = 1.0f64.min(1.0 / gn);
                    q.iter_mut().for_each(|qi| *qi *= scale);
                }
            }
            for ((s, y, rho), a) in hist.iter().zip(alphas.into_iter().rev()) {
                let b = rho * dot(y, &q);
                q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
            }
            let mut dir: Vec<f64> = q.into_iter().map(|v| -v).collect();
            let mut slope = dot(&g, &dir);
            if !(slope < 0.0) {
                hist.clear();
                dir = g.iter().map(|v| -v).collect();
                slope = -dot(&g, &g);
                if slope == 0.0 {
                    break;
                }
            }
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let xn: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
                let (fn_, gn) = f(&xn);
                if fn_.is_finite() && fn_ <= fx + 1e-4 * step * slope {
                    accepted = Some((xn, fn_, gn));
                    break;
                }
                step *= 0.5;
            }
            let Some((xn, fn_, gn)) = accepted else {
                if hist.is_empty() {
                    break;
                }
                hist.clear();
                continue;
            };
            let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-300 {
                hist.push_back((s, y, 1.0 / sy));
                if hist.len() > self.memory {
                    hist.pop_front();
                }
            }
            let decrease = fx - fn_;
            x = xn;
            g = gn;
            fx = fn_;
            if decrease <= self.ftol * fx.abs().max(1.0) {
                break;
            }
        }
        Minimum { x, value: fx, iterations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let v = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            (v, g)
        };
        let m = Lbfgs { max_iter: 2000, ftol: 0.0, ..Default::default() }.minimize(f, vec![-1.2, 1.0]);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{:?}", m.x);
    }

    #[test]
    fn quadratic_in_few_steps() {
        let d = [1.0, 10.0, 100.0];
        let f = |x: &[f64]| {
            let v = x.iter().zip(&d).map(|(a, w)| 0.5 * w * a * a).sum();
            (v, x.iter().zip(&d).map(|(a, w)| w * a).collect())
        };
        let m = Lbfgs::default().minimize(f, vec![1.0, 1.0, 1.0]);
        assert!(m.value < 1e-12 && m.iterations < 50);
    }
}
