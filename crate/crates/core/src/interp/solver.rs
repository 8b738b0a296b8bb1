//! Polynomial competitors `f(z) = x + (z − ξ) g(z)` for the interpolation
//! norm, scored by the harmonic log-mean `exp ∫ log ‖f(z)‖_z dμ^ξ`.

use rayon::prelude::*;

use super::outer::poisson_weights;
use crate::linalg::{C64, ZERO};
use crate::norms::Norm;
use crate::optim::Lbfgs;

/// Evaluation grid for the reported log-mean.
pub(crate) const FINE_GRID: usize = 8192;
const POLYAK_ITERS: usize = 300;
const SMOOTHING: [f64; 4] = [0.3, 0.1, 0.03, 0.01];
const LBFGS_ITERS: usize = 500;

pub(crate) type Gamma<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

/// A piecewise constant family, optionally multiplied by `γ(z)` or `1/γ(z)`.
pub(crate) struct View<'a> {
    pub bounds: Vec<(f64, f64)>,
    pub norms: Vec<&'a dyn Norm>,
    pub gamma: Option<Gamma<'a>>,
    pub invert_gamma: bool,
}

impl View<'_> {
    fn arc_at(&self, t: f64) -> usize {
        self.bounds
            .iter()
            .position(|&(a, b)| t >= a && t < b)
            .unwrap_or(self.bounds.len() - 1)
    }

    fn mult(&self, t: f64) -> f64 {
        match self.gamma {
            None => 1.0,
            Some(g) if self.invert_gamma => 1.0 / g(t),
            Some(g) => g(t),
        }
    }
}

pub(crate) struct Grid<'a> {
    view: &'a View<'a>,
    pub w: Vec<f64>,
    arc: Vec<usize>,
    mult: Vec<f64>,
    /// `(z_m − ξ) z_m^k`, row-major in `(m, k)`.
    basis: Vec<C64>,
    d: usize,
}

impl<'a> Grid<'a> {
    /// Midpoint nodes of `m` equal cells, with any cell that straddles an arc
    /// endpoint split there so that each arc carries its exact share.
    pub fn new(view: &'a View<'a>, xi: C64, m: usize, d: usize) -> Self {
        let h = std::f64::consts::TAU / m as f64;
        let cuts: Vec<f64> = view.bounds.iter().map(|b| b.0).collect();
        let mut t = Vec::with_capacity(m + cuts.len());
        let mut len = Vec::with_capacity(m + cuts.len());
        for k in 0..m {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            let mut edges: Vec<f64> = cuts.iter().copied().filter(|&c| c > a && c < b).collect();
            edges.sort_by(f64::total_cmp);
            let mut lo = a;
            for hi in edges.into_iter().chain([b]) {
                t.push(0.5 * (lo + hi));
                len.push(hi - lo);
                lo = hi;
            }
        }
        let mut w: Vec<f64> = poisson_weights(xi, &t).into_iter().zip(&len).map(|(p, l)| p * l).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        let arc = t.iter().map(|&a| view.arc_at(a)).collect();
        let mult = t.iter().map(|&a| view.mult(a)).collect();
        let mut basis = Vec::with_capacity(t.len() * d);
        for &a in &t {
            let z = C64::from_polar(1.0, a);
            let mut p = z - xi;
            for _ in 0..d {
                basis.push(p);
                p *= z;
            }
        }
        Self {
            view,
            w,
            arc,
            mult,
            basis,
            d,
        }
    }

    fn len(&self) -> usize {
        self.w.len()
    }

    /// `f(z_m)` for coefficients laid out as `c[k·n + l]`, only the first
    /// `self.d` degrees being used.
    fn point(&self, m: usize, x: &[C64], c: &[C64]) -> Vec<C64> {
        let n = x.len();
        let mut y = x.to_vec();
        let row = &self.basis[m * self.d..(m + 1) * self.d];
        for (k, &b) in row.iter().enumerate() {
            for (yl, &cl) in y.iter_mut().zip(&c[k * n..(k + 1) * n]) {
                *yl += b * cl;
            }
        }
        y
    }

    fn norm(&self, m: usize, y: &[C64]) -> f64 {
        self.mult[m] * self.view.norms[self.arc[m]].eval(y)
    }

    fn norming(&self, m: usize, y: &[C64]) -> Vec<C64> {
        let s = self.mult[m];
        self.view.norms[self.arc[m]].norming(y).into_iter().map(|z| z * s).collect()
    }

    /// `exp Σ w_m log ‖f(z_m)‖`, infinite when `f` vanishes at a grid point.
    pub fn log_mean(&self, x: &[C64], c: &[C64]) -> f64 {
        let logs: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|m| self.w[m] * self.norm(m, &self.point(m, x, c)).ln())
            .collect();
        let s: f64 = logs.iter().sum();
        if s.is_finite() {
            s.exp()
        } else {
            f64::INFINITY
        }
    }

    /// `max_m ‖f(z_m)‖` with its index.
    fn sup(&self, x: &[C64], c: &[C64]) -> (f64, usize) {
        let vals: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|m| self.norm(m, &self.point(m, x, c)))
            .collect();
        vals.iter()
            .enumerate()
            .fold((f64::NEG_INFINITY, 0), |acc, (m, &v)| if v > acc.0 { (v, m) } else { acc })
    }

    /// Adds `s · conj(b_mk) ψ_l` to the gradient, which is the derivative of
    /// `‖f(z_m)‖` with respect to `c_kl` in the real sense.
    fn accumulate(&self, g: &mut [C64], m: usize, psi: &[C64], s: f64) {
        let n = psi.len();
        let row = &self.basis[m * self.d..(m + 1) * self.d];
        for (k, b) in row.iter().enumerate() {
            let bc = b.conj() * s;
            for (gl, &pl) in g[k * n..(k + 1) * n].iter_mut().zip(psi) {
                *gl += bc * pl;
            }
        }
    }

    /// The bilinear functional `φ = Σ w_m conj(ψ_m)/‖f(z_m)‖`, `ψ_m` norming `f(z_m)`.
    pub fn dual_functional(&self, x: &[C64], c: &[C64]) -> Vec<C64> {
        let parts: Vec<Vec<C64>> = (0..self.len())
            .into_par_iter()
            .map(|m| {
                let y = self.point(m, x, c);
                let nm = self.norm(m, &y);
                if nm == 0.0 {
                    return vec![ZERO; x.len()];
                }
                self.norming(m, &y).into_iter().map(|p| p.conj() * (self.w[m] / nm)).collect()
            })
            .collect();
        let mut phi = vec![ZERO; x.len()];
        for p in parts {
            phi.iter_mut().zip(p).for_each(|(a, b)| *a += b);
        }
        phi
    }
}

/// Subgradient descent on `max_m ‖f(z_m)‖` with Polyak steps toward a
/// target below the best value, lowered whenever progress stalls.
fn polyak(grid: &Grid, x: &[C64]) -> (f64, Vec<C64>) {
    let n = x.len();
    let mut c = vec![ZERO; grid.d * n];
    let (mut best, _) = grid.sup(x, &c);
    let mut best_c = c.clone();
    if grid.d == 0 {
        return (best, c);
    }
    let mut gap = 0.1 * best;
    let mut stall = 0;
    for _ in 0..POLYAK_ITERS {
        let (val, m) = grid.sup(x, &c);
        if val < best {
            best = val;
            best_c.clone_from(&c);
            stall = 0;
        } else {
            stall += 1;
            if stall >= 20 {
                gap *= 0.5;
                stall = 0;
                c.clone_from(&best_c);
                continue;
            }
        }
        let y = grid.point(m, x, &c);
        let psi = grid.norming(m, &y);
        let mut g = vec![ZERO; c.len()];
        grid.accumulate(&mut g, m, &psi, 1.0);
        let gn2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        if gn2 == 0.0 {
            break;
        }
        let step = (val - (best - gap)) / gn2;
        c.iter_mut().zip(&g).for_each(|(a, b)| *a -= b * step);
    }
    (best, best_c)
}

/// L-BFGS on `Σ w_m ½ log(‖f(z_m)‖²/η² + 1)` from `c0`.
fn smoothed(grid: &Grid, x: &[C64], c0: &[C64], eta: f64) -> Vec<C64> {
    let len = c0.len();
    let e2 = eta * eta;
    let to_c = |v: &[f64]| -> Vec<C64> { (0..len).map(|i| C64::new(v[i], v[len + i])).collect() };
    let obj = |v: &[f64]| -> (f64, Vec<f64>) {
        let c = to_c(v);
        let parts: Vec<(f64, f64, Vec<C64>)> = (0..grid.len())
            .into_par_iter()
            .map(|m| {
                let y = grid.point(m, x, &c);
                let nm = grid.norm(m, &y);
                let s = grid.w[m] * nm / (nm * nm + e2);
                (grid.w[m] * 0.5 * (nm * nm / e2).ln_1p(), s, grid.norming(m, &y))
            })
            .collect();
        let mut g = vec![ZERO; len];
        let mut f = 0.0;
        for (m, (fm, s, psi)) in parts.into_iter().enumerate() {
            f += fm;
            grid.accumulate(&mut g, m, &psi, s);
        }
        let mut grad: Vec<f64> = g.iter().map(|z| z.re).collect();
        grad.extend(g.iter().map(|z| z.im));
        (f, grad)
    };
    let mut v0: Vec<f64> = c0.iter().map(|z| z.re).collect();
    v0.extend(c0.iter().map(|z| z.im));
    let r = Lbfgs {
        max_iter: LBFGS_ITERS,
        ..Default::default()
    }
    .minimize(obj, v0);
    to_c(&r.x)
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub value: f64,
    pub minimax: f64,
    pub minimax_log_mean: f64,
    pub constant: f64,
    /// `D · n` coefficients, `c[k·n + l]` multiplying `(z − ξ) z^k e_l`.
    pub coeffs: Vec<C64>,
    pub fine_grid: usize,
}

/// Stages `(D >> s, M >> s)`, coarse to fine, while `D >> s ≥ 1` and `M >> s ≥ 8`.
fn ladder(d: usize, m: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..usize::BITS as usize)
        .map(|s| (d >> s, m >> s))
        .take_while(|&(ds, ms)| ds >= 1 && ms >= 8)
        .collect();
    out.reverse();
    out
}

pub(crate) fn fine_size(m: usize) -> usize {
    FINE_GRID.max(4 * m)
}

/// Best competitor found for `x` at degree `d` and grid `m`; candidates are
/// compared by their log-mean on the fine grid.
pub(crate) fn solve(view: &View, x: &[C64], xi: C64, d: usize, m: usize) -> Solution {
    let n = x.len();
    let fine = Grid::new(view, xi, fine_size(m), d);
    let zero = vec![ZERO; d * n];
    let constant = fine.log_mean(x, &zero);
    let mut best = (constant, zero.clone());
    let top = Grid::new(view, xi, m, 0);
    let mut minimax = top.sup(x, &[]).0;
    let mut minimax_log_mean = constant;
    let pad = |c: &[C64]| -> Vec<C64> {
        let mut v = c.to_vec();
        v.resize(d * n, ZERO);
        v
    };
    let mut warm = Vec::new();
    for (ds, ms) in ladder(d, m) {
        let grid = Grid::new(view, xi, ms, ds);
        let (mm, cm) = polyak(&grid, x);
        let cm = pad(&cm);
        let lm = fine.log_mean(x, &cm);
        if lm < best.0 {
            best = (lm, cm);
        }
        if (ds, ms) == (d, m) {
            minimax = mm;
            minimax_log_mean = lm;
        }
        let mut c = warm.clone();
        c.resize(ds * n, ZERO);
        for eta in SMOOTHING {
            c = smoothed(&grid, x, &c, eta * constant);
            let cand = pad(&c);
            let lm = fine.log_mean(x, &cand);
            if lm < best.0 {
                best = (lm, cand);
            }
        }
        warm = c;
    }
    Solution {
        value: best.0,
        minimax,
        minimax_log_mean,
        constant,
        coeffs: best.1,
        fine_grid: fine_size(m),
    }
}

/// `φ` from the competitor, evaluated on the fine grid.
pub(crate) fn dual_functional(view: &View, x: &[C64], xi: C64, sol: &Solution) -> Vec<C64> {
    let d = sol.coeffs.len() / x.len().max(1);
    Grid::new(view, xi, sol.fine_grid, d).dual_functional(x, &sol.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_nests() {
        assert_eq!(ladder(32, 256), vec![(1, 8), (2, 16), (4, 32), (8, 64), (16, 128), (32, 256)]);
        assert_eq!(ladder(4, 8), vec![(4, 8)]);
        let a = ladder(8, 64);
        let b = ladder(16, 128);
        assert_eq!(&b[..b.len() - 1], &a[..]);
        assert!(ladder(0, 64).is_empty());
    }
}
