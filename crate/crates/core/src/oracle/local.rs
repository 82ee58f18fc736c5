//! Local `f64` numerics: projection onto constraint sets, Newton on the
//! Lagrange system, multiplier estimates, and Krawczyk existence boxes.

use nalgebra::{DMatrix, DVector};

use super::fpoly::FPoly;
use crate::interval::Interval;
use crate::polycore::IntPolynomial;

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub p: FPoly,
    pub grad: Vec<FPoly>,
    pub hess: Vec<Vec<FPoly>>,
    pub equality: bool,
}

impl Constraint {
    fn new(p: &IntPolynomial, equality: bool) -> Self {
        let p = FPoly::from_int(p);
        let grad = p.gradient();
        let hess = grad.iter().map(FPoly::gradient).collect();
        Constraint {
            p,
            grad,
            hess,
            equality,
        }
    }
}

/// An objective over equalities and `>= 0` inequalities, compiled for evaluation.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n: usize,
    pub g: FPoly,
    pub g_grad: Vec<FPoly>,
    pub g_hess: Vec<Vec<FPoly>>,
    /// Equalities first, then inequalities.
    pub cons: Vec<Constraint>,
}

const SVD_EPS: f64 = 1e-13;

impl Compiled {
    pub fn new(n: usize, g: &IntPolynomial, eqs: &[IntPolynomial], ineqs: &[IntPolynomial]) -> Self {
        let gf = FPoly::from_int(g);
        let g_grad = gf.gradient();
        let g_hess = g_grad.iter().map(FPoly::gradient).collect();
        let cons = eqs
            .iter()
            .map(|p| Constraint::new(p, true))
            .chain(ineqs.iter().map(|p| Constraint::new(p, false)))
            .collect();
        Compiled {
            n,
            g: gf,
            g_grad,
            g_hess,
            cons,
        }
    }

    pub fn equalities(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cons.len()).filter(|&i| self.cons[i].equality)
    }

    /// Largest constraint violation at `x`.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.cons
            .iter()
            .map(|c| {
                let v = c.p.eval(x);
                if c.equality {
                    v.abs()
                } else {
                    (-v).max(0.0)
                }
            })
            .fold(0.0, f64::max)
    }

    fn jacobian(&self, active: &[usize], x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(active.len(), self.n, |r, j| self.cons[active[r]].grad[j].eval(x))
    }

    /// Gauss-Newton with minimum-norm steps onto the equalities and every
    /// inequality that becomes violated on the way.
    pub fn project(&self, start: &[f64], tol: f64) -> Option<Vec<f64>> {
        let mut x = start.to_vec();
        let mut active: Vec<usize> = self.equalities().collect();
        for _ in 0..80 {
            for (i, c) in self.cons.iter().enumerate() {
                if !c.equality && !active.contains(&i) && c.p.eval(&x) < 0.0 {
                    active.push(i);
                }
            }
            if self.violation(&x) <= tol {
                return Some(x);
            }
            if active.is_empty() {
                return Some(x);
            }
            let r = DVector::from_iterator(active.len(), active.iter().map(|&i| self.cons[i].p.eval(&x)));
            let j = self.jacobian(&active, &x);
            let step = j.svd(true, true).solve(&(-r), SVD_EPS).ok()?;
            if step.iter().any(|v| !v.is_finite()) {
                return None;
            }
            for (xi, s) in x.iter_mut().zip(step.iter()) {
                *xi += s;
            }
        }
        (self.violation(&x) <= tol).then_some(x)
    }

    /// Least-squares `λ` with `∇g = Σ λ_i ∇f_i` over `active`.
    pub fn multipliers(&self, active: &[usize], x: &[f64]) -> Vec<f64> {
        if active.is_empty() {
            return Vec::new();
        }
        let jt = self.jacobian(active, x).transpose();
        let gg = DVector::from_iterator(self.n, self.g_grad.iter().map(|p| p.eval(x)));
        match jt.svd(true, true).solve(&gg, SVD_EPS) {
            Ok(l) if l.iter().all(|v| v.is_finite()) => l.iter().copied().collect(),
            _ => vec![0.0; active.len()],
        }
    }

    fn lagrange_residual(&self, active: &[usize], x: &[f64], lam: &[f64]) -> DVector<f64> {
        let n = self.n;
        let mut r = DVector::zeros(n + active.len());
        for j in 0..n {
            let mut v = self.g_grad[j].eval(x);
            for (k, &i) in active.iter().enumerate() {
                v -= lam[k] * self.cons[i].grad[j].eval(x);
            }
            r[j] = v;
        }
        for (k, &i) in active.iter().enumerate() {
            r[n + k] = self.cons[i].p.eval(x);
        }
        r
    }

    /// Damped Newton on `∇g - Σ λ_i ∇f_i = 0, f_i = 0 (i ∈ active)`.
    pub fn kkt_newton(&self, active: &[usize], start: &[f64], iters: usize) -> Option<(Vec<f64>, Vec<f64>)> {
        let n = self.n;
        let s = active.len();
        let mut x = start.to_vec();
        let mut lam = self.multipliers(active, &x);
        let mut r = self.lagrange_residual(active, &x, &lam);
        let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        for _ in 0..iters {
            let norm = r.amax();
            if norm <= 1e-14 * scale {
                return Some((x, lam));
            }
            let mut jac = DMatrix::zeros(n + s, n + s);
            for a in 0..n {
                for b in 0..n {
                    let mut v = self.g_hess[a][b].eval(&x);
                    for (k, &i) in active.iter().enumerate() {
                        v -= lam[k] * self.cons[i].hess[a][b].eval(&x);
                    }
                    jac[(a, b)] = v;
                }
                for (k, &i) in active.iter().enumerate() {
                    let gi = self.cons[i].grad[a].eval(&x);
                    jac[(a, n + k)] = -gi;
                    jac[(n + k, a)] = gi;
                }
            }
            let step = jac.svd(true, true).solve(&(-&r), SVD_EPS).ok()?;
            if step.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let xn: Vec<f64> = (0..n).map(|j| x[j] + t * step[j]).collect();
                let ln: Vec<f64> = (0..s).map(|k| lam[k] + t * step[n + k]).collect();
                let rn = self.lagrange_residual(active, &xn, &ln);
                if rn.amax() < norm || (t < 1e-6 && rn.amax() <= norm) {
                    x = xn;
                    lam = ln;
                    r = rn;
                    accepted = true;
                    break;
                }
                t /= 2.0;
            }
            if !accepted {
                break;
            }
        }
        (r.amax() <= 1e-9 * scale).then_some((x, lam))
    }

    /// Box around `w` certified by the Krawczyk test to contain a common zero
    /// of all equalities. Coordinates outside the pivot columns stay fixed at `w`.
    pub fn krawczyk_box(&self, w: &[f64]) -> Option<Vec<Interval>> {
        let eqs: Vec<usize> = self.equalities().collect();
        let k = eqs.len();
        let mut point: Vec<Interval> = w.iter().map(|&v| Interval::point(v)).collect();
        if k == 0 {
            return Some(point);
        }
        if k > self.n {
            return None;
        }
        let jac = self.jacobian(&eqs, w);
        let cols = pivot_columns(&jac)?;
        let sub = DMatrix::from_fn(k, k, |r, c| jac[(r, cols[c])]);
        let y = sub.try_inverse()?;
        let fc: Vec<Interval> = eqs.iter().map(|&i| self.cons[i].p.eval_box(&point)).collect();
        let yf: Vec<Interval> = (0..k)
            .map(|r| {
                (0..k).fold(Interval::point(0.0), |acc, c| &acc + &(&Interval::point(y[(r, c)]) * &fc[c]))
            })
            .collect();
        let mut rad = yf.iter().fold(0.0f64, |a, v| a.max(v.lo().abs()).max(v.hi().abs()));
        let scale = 1.0 + cols.iter().fold(0.0f64, |a, &c| a.max(w[c].abs()));
        rad = (4.0 * rad).max(1e-13 * scale);
        for _ in 0..6 {
            let mut bx = point.clone();
            for &c in &cols {
                bx[c] = Interval::new(w[c] - rad, w[c] + rad);
            }
            // J over the box, restricted to pivot columns
            let jb: Vec<Vec<Interval>> = eqs
                .iter()
                .map(|&i| cols.iter().map(|&c| self.cons[i].grad[c].eval_box(&bx)).collect())
                .collect();
            let mut inside = true;
            let mut kbox = Vec::with_capacity(k);
            for r in 0..k {
                // c - (Y F(c))_r + Σ_c (I - Y J(X))_{r,c} (X_c - c)
                let mut acc = &Interval::point(w[cols[r]]) - &yf[r];
                for cc in 0..k {
                    let mut m = Interval::point(if r == cc { 1.0 } else { 0.0 });
                    for q in 0..k {
                        m = &m - &(&Interval::point(y[(r, q)]) * &jb[q][cc]);
                    }
                    let dx = &bx[cols[cc]] - &Interval::point(w[cols[cc]]);
                    acc = &acc + &(&m * &dx);
                }
                let xr = bx[cols[r]];
                if !(acc.lo() > xr.lo() && acc.hi() < xr.hi()) {
                    inside = false;
                }
                kbox.push(acc);
            }
            if inside {
                for (r, &c) in cols.iter().enumerate() {
                    point[c] = kbox[r];
                }
                return Some(point);
            }
            rad *= 8.0;
        }
        None
    }
}

/// Columns of a well-conditioned square block, by complete pivoting.
fn pivot_columns(j: &DMatrix<f64>) -> Option<Vec<usize>> {
    let (k, n) = j.shape();
    let mut a = j.clone();
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols_left: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best = (0usize, 0usize, 0.0f64);
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols_left.iter().enumerate() {
                if a[(r, c)].abs() > best.2 {
                    best = (ri, ci, a[(r, c)].abs());
                }
            }
        }
        if best.2 <= 1e-300 {
            return None;
        }
        let pr = rows.remove(best.0);
        let pc = cols_left.remove(best.1);
        for &r in &rows {
            let f = a[(r, pc)] / a[(pr, pc)];
            for c in 0..n {
                a[(r, c)] -= f * a[(pr, c)];
            }
        }
        chosen.push(pc);
    }
    // keep the block in equation order matched to increasing columns
    chosen.sort_unstable();
    Some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{default_names, parse_polynomial};

    fn circle(g: &str) -> Compiled {
        let names = default_names(2);
        Compiled::new(
            2,
            &parse_polynomial(g, &names).unwrap(),
            &[parse_polynomial("x1^2 + x2^2 - 1", &names).unwrap()],
            &[],
        )
    }

    #[test]
    fn projection_lands_on_circle() {
        let c = circle("x1");
        let x = c.project(&[0.3, 0.2], 1e-14).unwrap();
        assert!((x[0] * x[0] + x[1] * x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn newton_finds_minimum() {
        let c = circle("x1");
        let (x, lam) = c.kkt_newton(&[0], &[-0.9, 0.3], 50).unwrap();
        assert!((x[0] + 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
        assert!((lam[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn krawczyk_contains_root() {
        let c = circle("x1");
        let w = [0.6000000001, 0.8];
        let b = c.krawczyk_box(&w).unwrap();
        // x1 is pivot-free here only if |∂f/∂x2| > |∂f/∂x1|: x2 is solved
        assert_eq!(b[0], Interval::point(w[0]));
        let x2 = (1.0f64 - w[0] * w[0]).sqrt();
        assert!(b[1].contains(x2));
        assert!(b[1].width() < 1e-9);
    }
}
