//! Minimal dense complex linear algebra: a column-major matrix, a one-sided
//! Jacobi singular value decomposition, and the spectral-cutoff least squares
//! solve shared by the boundary-fitting solver and the sampling indicators.
//!
//! The one-sided Jacobi iteration works directly on matrix columns, which
//! keeps it accurate for the tall, moderately sized systems produced here
//! (boundary nodes x expansion terms, or direction grids of a far-field
//! operator). No attempt is made at large-scale performance.

use crate::C64;
use crate::error::{Error, Result};

/// Dense complex matrix, column-major storage.
#[derive(Debug, Clone)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// y = A x.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for j in 0..self.cols {
            let xj = x[j];
            if xj.norm_sqr() == 0.0 {
                continue;
            }
            for (yi, aij) in y.iter_mut().zip(self.col(j)) {
                *yi += aij * xj;
            }
        }
        y
    }

    /// y = A^H x.
    pub fn matvec_adj(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                self.col(j)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a.conj() * b)
                    .sum()
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Economy singular value decomposition A = U diag(s) V^H.
#[derive(Debug, Clone)]
pub struct Svd {
    /// rows x r, orthonormal columns (zero columns for vanished directions).
    pub u: CMat,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// r x cols.
    pub vh: CMat,
}

/// One-sided Jacobi SVD. Handles any shape; cost is O(min(m,n)^2 max(m,n))
/// per sweep.
pub fn svd(a: &CMat) -> Svd {
    if a.rows >= a.cols {
        svd_tall(a)
    } else {
        // A^H = U2 S V2^H  =>  A = V2 S U2^H.
        let t = svd_tall(&a.adjoint());
        Svd { u: t.vh.adjoint(), s: t.s, vh: t.u.adjoint() }
    }
}

fn svd_tall(a: &CMat) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = CMat::from_fn(n, n, |i, j| {
        if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });

    let tol = 1e-14;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let (hpp, hqq, hpq) = column_gram(&w, p, q);
                if hpp == 0.0 || hqq == 0.0 {
                    continue;
                }
                let scale = (hpp * hqq).sqrt();
                let mag = hpq.norm();
                if mag <= tol * scale {
                    continue;
                }
                off = off.max(mag / scale);
                // Phase of the coupling and the real Jacobi angle; t is the
                // stable small-magnitude root of g t^2 + 2 t - g = 0 with
                // g = 2|hpq| / (hpp - hqq).
                let phase = hpq / mag;
                let denom = hpp - hqq;
                let t = if denom == 0.0 {
                    1.0
                } else {
                    let g = 2.0 * mag / denom;
                    g / (1.0 + (1.0 + g * g).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut w, p, q, c, s, phase);
                rotate_pair(&mut v, p, q, c, s, phase);
            }
        }
        if off < tol {
            break;
        }
    }

    // Column norms are the singular values.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| w.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = CMat::zeros(m, n);
    let mut vh = CMat::zeros(n, n);
    let mut svals = vec![0.0; n];
    for (dst, &src) in order.iter().enumerate() {
        let sv = norms[src];
        svals[dst] = sv;
        if sv > 0.0 {
            for i in 0..m {
                u.set(i, dst, w.get(i, src) / sv);
            }
        }
        for i in 0..n {
            // V column src becomes row dst of V^H (conjugated).
            vh.set(dst, i, v.get(i, src).conj());
        }
    }
    Svd { u, s: svals, vh }
}

fn column_gram(w: &CMat, p: usize, q: usize) -> (f64, f64, C64) {
    let (cp, cq) = (w.col(p), w.col(q));
    let mut hpp = 0.0;
    let mut hqq = 0.0;
    let mut hpq = C64::new(0.0, 0.0);
    for (a, b) in cp.iter().zip(cq) {
        hpp += a.norm_sqr();
        hqq += b.norm_sqr();
        hpq += a.conj() * b;
    }
    (hpp, hqq, hpq)
}

/// Applies the unitary column rotation
/// [a_p, a_q] <- [a_p, a_q] [[c, -s*phase], [s*conj(phase), c]].
fn rotate_pair(w: &mut CMat, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let rows = w.rows;
    let (pp, qq) = if p < q { (p, q) } else { (q, p) };
    let (head, tail) = w.data.split_at_mut(qq * rows);
    let cp = &mut head[pp * rows..pp * rows + rows];
    let cq = &mut tail[..rows];
    let sp = s * phase.conj();
    let sq = s * phase;
    for (ap, aq) in cp.iter_mut().zip(cq.iter_mut()) {
        let new_p = c * *ap + sp * *aq;
        let new_q = -sq * *ap + c * *aq;
        *ap = new_p;
        *aq = new_q;
    }
}

/// Minimizes ||b + A c|| over complex coefficients c using the SVD
/// pseudo-inverse with singular values below `w_min` discarded.
///
/// Columns are equilibrated to unit norm before the decomposition (outgoing
/// wave columns can span hundreds of orders of magnitude), so the cutoff
/// acts on the equilibrated spectrum. Strongly rectangular systems go
/// through the Gram matrix, whose Jacobi diagonalization delivers the same
/// singular triplets at a fraction of the column-rotation cost.
///
/// Returns the coefficients and the attained residual in the node-averaged
/// norm sqrt(mean |r_i|^2); a fit that fails to beat c = 0 is discarded, so
/// the returned residual never exceeds the norm of `b`.
pub fn svd_min(design: &CMat, b: &[C64], w_min: f64) -> (Vec<C64>, f64) {
    let n = design.cols();
    let scales: Vec<f64> = (0..n)
        .map(|j| {
            let s = design.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if s > 0.0 { s } else { 1.0 }
        })
        .collect();
    let scaled = CMat::from_fn(design.rows(), n, |i, j| design.get(i, j) / scales[j]);

    let mut coeffs = if design.rows() >= 3 * n {
        let gram = CMat::from_fn(n, n, |i, j| {
            scaled
                .col(i)
                .iter()
                .zip(scaled.col(j))
                .map(|(a, c)| a.conj() * c)
                .sum()
        });
        let dec = svd(&gram);
        // A = U S V^H  =>  A^H A = V S^2 V^H, so the Gram's singular
        // vectors are V and its values are S^2.
        let mut proj = dec.vh.matvec(&scaled.matvec_adj(b));
        for (p, s2) in proj.iter_mut().zip(&dec.s) {
            let s = s2.sqrt();
            if s >= w_min && s > 0.0 {
                *p = -*p / s2;
            } else {
                *p = C64::new(0.0, 0.0);
            }
        }
        let mut c = vec![C64::new(0.0, 0.0); n];
        for r in 0..n {
            let pr = proj[r];
            if pr.norm_sqr() == 0.0 {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                *cj += dec.vh.get(r, j).conj() * pr;
            }
        }
        c
    } else {
        let dec = svd(&scaled);
        pseudo_solve(&dec, n, b, w_min)
    };
    for (c, s) in coeffs.iter_mut().zip(&scales) {
        *c /= s;
    }
    let fit = design.matvec(&coeffs);
    let m = design.rows().max(1);
    let resid = (b
        .iter()
        .zip(&fit)
        .map(|(bi, fi)| (bi + fi).norm_sqr())
        .sum::<f64>()
        / m as f64)
        .sqrt();
    let zero_resid = mean_norm(b);
    if !resid.is_finite() || resid > zero_resid {
        return (vec![C64::new(0.0, 0.0); n], zero_resid);
    }
    (coeffs, resid)
}

/// c = -V S^+ U^H b with the cutoff applied to S.
pub fn pseudo_solve(dec: &Svd, ncols: usize, b: &[C64], w_min: f64) -> Vec<C64> {
    let mut proj = dec.u.matvec_adj(b);
    for (p, s) in proj.iter_mut().zip(&dec.s) {
        if *s >= w_min && *s > 0.0 {
            *p = -*p / *s;
        } else {
            *p = C64::new(0.0, 0.0);
        }
    }
    let mut c = vec![C64::new(0.0, 0.0); ncols];
    for r in 0..dec.vh.rows() {
        let pr = proj[r];
        if pr.norm_sqr() == 0.0 {
            continue;
        }
        for (j, cj) in c.iter_mut().enumerate() {
            // column j of V is conj of row j of V^H at (r, j)
            *cj += dec.vh.get(r, j).conj() * pr;
        }
    }
    c
}

/// Node-averaged norm sqrt(mean |b_i|^2) used for boundary discrepancies.
pub fn mean_norm(b: &[C64]) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    (b.iter().map(|z| z.norm_sqr()).sum::<f64>() / b.len() as f64).sqrt()
}

/// Solves the symmetric positive definite system M x = rhs in place by
/// Cholesky factorization. `m` is n x n row-major and is overwritten.
pub fn cholesky_solve(m: &mut [f64], rhs: &mut [f64], n: usize) -> Result<()> {
    assert_eq!(m.len(), n * n);
    assert_eq!(rhs.len(), n);
    // Factor M = L L^T, L in the lower triangle.
    for j in 0..n {
        let mut d = m[j * n + j];
        for k in 0..j {
            d -= m[j * n + k] * m[j * n + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::Singular(format!(
                "cholesky pivot {d:.3e} at index {j}"
            )));
        }
        let d = d.sqrt();
        m[j * n + j] = d;
        for i in (j + 1)..n {
            let mut v = m[i * n + j];
            for k in 0..j {
                v -= m[i * n + k] * m[j * n + k];
            }
            m[i * n + j] = v / d;
        }
    }
    // Forward then backward substitution.
    for i in 0..n {
        let mut v = rhs[i];
        for k in 0..i {
            v -= m[i * n + k] * rhs[k];
        }
        rhs[i] = v / m[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = rhs[i];
        for k in (i + 1)..n {
            v -= m[k * n + i] * rhs[k];
        }
        rhs[i] = v / m[i * n + i];
    }
    Ok(())
}
