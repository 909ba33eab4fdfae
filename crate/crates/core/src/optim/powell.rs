//! Powell's direction-set minimization with a bounded bracketing + Brent
//! line search. No gradients; every evaluation stays inside the box.

use crate::optim::{BoxDomain, MinimizeOutcome, Objective, StopReason};

#[derive(Debug, Clone, PartialEq)]
pub struct PowellParams {
    /// Relative objective decrease over a full sweep that counts as
    /// converged.
    pub tol: f64,
    /// Sweep budget.
    pub max_sweeps: usize,
    /// First bracketing step as a fraction of the box edge along the
    /// search direction.
    pub initial_step: f64,
}

impl Default for PowellParams {
    fn default() -> Self {
        PowellParams { tol: 1e-10, max_sweeps: 200, initial_step: 0.1 }
    }
}

enum LineOutcome {
    Moved(f64, f64),
    Stuck,
}

struct LineSearcher<'a, 'b> {
    obj: &'a Objective<'b>,
    domain: &'a BoxDomain,
}

impl LineSearcher<'_, '_> {
    fn eval_along(&self, p: &[f64], u: &[f64], t: f64) -> f64 {
        let mut x: Vec<f64> = p.iter().zip(u).map(|(pi, ui)| pi + t * ui).collect();
        self.domain.clamp(&mut x);
        self.obj.value(&x)
    }

    fn t_bounds(&self, p: &[f64], u: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..p.len() {
            if u[i].abs() < 1e-300 {
                continue;
            }
            let a = (self.domain.lower[i] - p[i]) / u[i];
            let b = (self.domain.upper[i] - p[i]) / u[i];
            let (l, h) = if a <= b { (a, b) } else { (b, a) };
            lo = lo.max(l);
            hi = hi.min(h);
        }
        (lo.min(0.0), hi.max(0.0))
    }

    /// Minimizes along p + t u, returns the step and its value.
    fn minimize(&self, p: &[f64], u: &[f64], f0: f64, h0: f64) -> LineOutcome {
        let (t_lo, t_hi) = self.t_bounds(p, u);
        if t_hi - t_lo < 1e-300 {
            return LineOutcome::Stuck;
        }
        let f = |t: f64| self.eval_along(p, u, t);

        // Bracket the minimum starting from t = 0.
        let mut bracket: Option<(f64, f64, f64, f64)> = None;
        let mut side_vals: Vec<(f64, f64)> = Vec::new();
        for dir in [1.0f64, -1.0] {
            let step = h0 * dir;
            let t1 = step.clamp(t_lo, t_hi);
            if t1 == 0.0 {
                continue;
            }
            let f1 = f(t1);
            side_vals.push((t1, f1));
            if f1 <= f0 {
                // Expand until the function turns up or the box edge stops us.
                let (mut a, mut b, mut fb) = (0.0, t1, f1);
                loop {
                    let c = (b + 2.0 * (b - a)).clamp(t_lo, t_hi);
                    if (c - b).abs() < 1e-300 {
                        // Ran into the boundary while still decreasing.
                        return self.polish_boundary(&f, a, b, fb, t_lo, t_hi);
                    }
                    let fc = f(c);
                    if fc >= fb {
                        bracket = Some((a, b, c, fb));
                        break;
                    }
                    a = b;
                    b = c;
                    fb = fc;
                }
                break;
            }
        }
        let (a, b, c, fb) = match bracket {
            Some(br) => br,
            None => {
                // Both first steps went up: the minimum sits between them.
                if side_vals.is_empty() {
                    return LineOutcome::Stuck;
                }
                let left = side_vals.iter().map(|v| v.0).fold(0.0f64, f64::min);
                let right = side_vals.iter().map(|v| v.0).fold(0.0f64, f64::max);
                if left == 0.0 || right == 0.0 {
                    // One-sided situation at a boundary point.
                    let (t1, f1) = side_vals[0];
                    if f1 < f0 {
                        return LineOutcome::Moved(t1, f1);
                    }
                    return LineOutcome::Stuck;
                }
                (left, 0.0, right, f0)
            }
        };
        let (t, ft) = brent(&f, a, b, c, fb);
        if ft < f0 {
            LineOutcome::Moved(t, ft)
        } else {
            LineOutcome::Stuck
        }
    }

    fn polish_boundary(
        &self,
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fb: f64,
        _t_lo: f64,
        _t_hi: f64,
    ) -> LineOutcome {
        // b sits on the box edge with f still decreasing toward it; refine
        // between the last interior point and the edge.
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm < fb {
            let (t, ft) = brent(f, a, mid, b, fm);
            LineOutcome::Moved(t, ft)
        } else {
            LineOutcome::Moved(b, fb)
        }
    }
}

/// Classic Brent parabolic/golden minimization on a bracket (a, b, c) with
/// f(b) = fb already known.
fn brent(f: &dyn Fn(f64) -> f64, ax: f64, bx: f64, cx: f64, fb: f64) -> (f64, f64) {
    const GOLD: f64 = 0.381_966_011_250_105;
    const MAX_ITER: usize = 100;
    let (mut a, mut b) = (ax.min(cx), ax.max(cx));
    let (mut x, mut w, mut v) = (bx, bx, bx);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d = 0.0f64;
    let mut e = 0.0f64;
    for _ in 0..MAX_ITER {
        let xm = 0.5 * (a + b);
        let tol1 = 1e-10 * x.abs() + 1e-14;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabolic fit through x, w, v.
            let r = (x - w) * (fx - fv);
            let q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            let mut q2 = 2.0 * (q - r);
            if q2 > 0.0 {
                p = -p;
            }
            q2 = q2.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q2 * etemp).abs() && p > q2 * (a - x) && p < q2 * (b - x) {
                d = p / q2;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

/// Direction-set minimization inside a box. Starts from `start`, sweeps all
/// directions with the bounded line search, applies the standard direction
/// replacement, and stops when a full sweep no longer decreases the
/// objective relative to `tol` (or the sweep budget runs out).
pub fn powell_minimize(
    obj: &Objective,
    start: &[f64],
    domain: &BoxDomain,
    params: &PowellParams,
) -> MinimizeOutcome {
    let n = obj.dim();
    let evals0 = obj.evals();
    let mut p = start.to_vec();
    domain.project(&mut p);
    let mut fret = obj.value(&p);

    if n == 0 {
        return MinimizeOutcome {
            best_point: p,
            best_value: fret,
            stability_index: None,
            iterations: 0,
            evals: obj.evals() - evals0,
            seed: 0,
            stopped_by: StopReason::Tolerance,
        };
    }

    let searcher = LineSearcher { obj, domain };
    let edges: Vec<f64> = domain
        .lower
        .iter()
        .zip(&domain.upper)
        .map(|(l, u)| (u - l).max(1e-12))
        .collect();
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let mut stopped_by = StopReason::Budget;
    let mut sweeps = 0usize;
    for sweep in 1..=params.max_sweeps {
        sweeps = sweep;
        let f0 = fret;
        let p0 = p.clone();
        let mut del = 0.0f64;
        let mut ibig = 0usize;
        for (i, dir) in dirs.iter().enumerate() {
            let h = params.initial_step
                * dir
                    .iter()
                    .zip(&edges)
                    .map(|(d, e)| d.abs() * e)
                    .sum::<f64>()
                    .max(1e-12);
            let before = fret;
            if let LineOutcome::Moved(t, ft) = searcher.minimize(&p, dir, fret, h) {
                for (pj, dj) in p.iter_mut().zip(dir) {
                    *pj += t * dj;
                }
                domain.clamp(&mut p);
                fret = ft;
            }
            if before - fret > del {
                del = before - fret;
                ibig = i;
            }
        }
        // Canonical projection once per sweep; re-evaluate if it moved p.
        let mut projected = p.clone();
        domain.project(&mut projected);
        if projected != p {
            p = projected;
            fret = obj.value(&p);
        }

        if 2.0 * (f0 - fret) <= params.tol * (f0.abs() + fret.abs()) + 1e-300 {
            stopped_by = StopReason::Tolerance;
            break;
        }
        if sweep == params.max_sweeps {
            break;
        }
        // Direction replacement test on the extrapolated point.
        let mut pe: Vec<f64> = p.iter().zip(&p0).map(|(a, b)| 2.0 * a - b).collect();
        domain.clamp(&mut pe);
        let fe = obj.value(&pe);
        if fe < f0 {
            let t = 2.0 * (f0 - 2.0 * fret + fe) * (f0 - fret - del).powi(2)
                - del * (f0 - fe).powi(2);
            if t < 0.0 {
                let mut new_dir: Vec<f64> = p.iter().zip(&p0).map(|(a, b)| a - b).collect();
                let norm = new_dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-300 {
                    for v in new_dir.iter_mut() {
                        *v /= norm;
                    }
                    let h = params.initial_step
                        * new_dir
                            .iter()
                            .zip(&edges)
                            .map(|(d, e)| d.abs() * e)
                            .sum::<f64>()
                            .max(1e-12);
                    if let LineOutcome::Moved(t, ft) = searcher.minimize(&p, &new_dir, fret, h) {
                        for (pj, dj) in p.iter_mut().zip(&new_dir) {
                            *pj += t * dj;
                        }
                        domain.clamp(&mut p);
                        fret = ft;
                    }
                    dirs[ibig] = dirs[n - 1].clone();
                    dirs[n - 1] = new_dir;
                }
            }
        }
    }
    let mut final_p = p.clone();
    domain.project(&mut final_p);
    MinimizeOutcome {
        best_point: final_p,
        best_value: fret,
        stability_index: None,
        iterations: sweeps,
        evals: obj.evals() - evals0,
        seed: 0,
        stopped_by,
    }
}
