//! Unconstrained minimization of a smooth-ish scalar function of real
//! parameters: L-BFGS on central finite-difference gradients with Armijo
//! backtracking, and a Nelder-Mead simplex for small parameter counts.

use std::collections::VecDeque;

const HISTORY: usize = 8;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;
/// Consecutive sub-tolerance improvements required to declare convergence.
const STALL_ITERS: usize = 3;
/// Gradient-free fallback is only attempted up to this many parameters.
pub(crate) const NELDER_MEAD_MAX_PARAMS: usize = 32;

#[derive(Clone, Copy, Debug)]
pub(crate) struct MinimizeSettings {
    pub max_iters: usize,
    pub tol: f64,
    pub fd_step: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + h;
            let up = f(&probe);
            probe[i] = orig - h;
            let down = f(&probe);
            probe[i] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Two-loop recursion for `-H g`.
fn lbfgs_direction(g: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|qi| *qi = -*qi);
    q
}

/// L-BFGS descent from `x0`, with a simplex polish when it fails to settle
/// on a small problem.
pub(crate) fn minimize(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, settings: MinimizeSettings) -> Minimum {
    let result = lbfgs(f, x0, settings);
    if result.converged || result.x.len() > NELDER_MEAD_MAX_PARAMS || !result.value.is_finite() {
        return result;
    }
    let polished = nelder_mead(f, result.x.clone(), settings);
    if polished.value <= result.value {
        Minimum { iterations: result.iterations + polished.iterations, ..polished }
    } else {
        result
    }
}

pub(crate) fn lbfgs(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, settings: MinimizeSettings) -> Minimum {
    let mut x = x0;
    let mut fx = f(&x);
    if x.is_empty() || !fx.is_finite() {
        return Minimum { converged: fx.is_finite(), x, value: fx, iterations: 0 };
    }
    let mut g = gradient(f, &x, settings.fd_step);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(HISTORY);
    let mut stalls = 0;

    for iter in 0..settings.max_iters {
        if max_norm(&g) < 1e-12 {
            return Minimum { x, value: fx, iterations: iter, converged: true };
        }
        let mut dir = lbfgs_direction(&g, &history);
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            history.clear();
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }
        let mut step = if history.is_empty() { (1.0 / max_norm(&dir)).min(1.0) } else { 1.0 };

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let ft = f(&trial);
            if ft.is_finite() && ft <= fx + ARMIJO * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            if !history.is_empty() {
                history.clear();
                continue;
            }
            // no descent along the steepest direction at finite-difference resolution
            return Minimum { x, value: fx, iterations: iter + 1, converged: true };
        };

        let g_new = gradient(f, &x_new, settings.fd_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let improvement = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        if improvement < settings.tol {
            stalls += 1;
            if stalls >= STALL_ITERS {
                return Minimum { x, value: fx, iterations: iter + 1, converged: true };
            }
        } else {
            stalls = 0;
        }
    }
    Minimum { x, value: fx, iterations: settings.max_iters, converged: false }
}

/// Standard Nelder-Mead with an axis-aligned initial simplex.
pub(crate) fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: Vec<f64>, settings: MinimizeSettings) -> Minimum {
    let n = x0.len();
    if n == 0 {
        let value = f(&x0);
        return Minimum { x: x0, value, iterations: 0, converged: true };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = f(&x0);
    simplex.push((x0.clone(), v0));
    for i in 0..n {
        let mut p = x0.clone();
        p[i] += 0.05;
        let v = f(&p);
        simplex.push((p, v));
    }
    let budget = settings.max_iters * (n + 1);
    for iter in 0..budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        if (worst - best).abs() < settings.tol {
            let (x, value) = simplex.swap_remove(0);
            return Minimum { x, value, iterations: iter, converged: true };
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|p| p.0[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = if fr < worst { along(-0.5) } else { along(0.5) };
            let fc = f(&xc);
            if fc < worst.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best_x = simplex[0].0.clone();
                for p in simplex.iter_mut().skip(1) {
                    p.0 = best_x.iter().zip(&p.0).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    p.1 = f(&p.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations: budget, converged: false }
}
