//! Polynomials with interval coefficients, for box enclosures and `f64` Newton steps.

use std::collections::BTreeMap;

use crate::interval::Interval;
use crate::polycore::IntPolynomial;

#[derive(Clone, Debug)]
pub(crate) struct FPoly {
    n: usize,
    terms: Vec<(Vec<u32>, Interval)>,
}

impl FPoly {
    pub fn from_int(p: &IntPolynomial) -> Self {
        FPoly {
            n: p.num_vars(),
            terms: p
                .terms()
                .map(|(m, c)| (m.exponents().to_vec(), Interval::from_bigint(c)))
                .collect(),
        }
    }

    /// `g - Σ λ_i f_i`.
    pub fn lagrangian(g: &FPoly, fs: &[&FPoly], lambda: &[f64]) -> FPoly {
        let mut acc: BTreeMap<Vec<u32>, Interval> = BTreeMap::new();
        for (e, c) in &g.terms {
            acc.insert(e.clone(), *c);
        }
        for (f, &l) in fs.iter().zip(lambda) {
            if l == 0.0 {
                continue;
            }
            let nl = Interval::point(-l);
            for (e, c) in &f.terms {
                let term = &nl * c;
                let slot = acc.entry(e.clone()).or_insert(Interval::point(0.0));
                *slot = &*slot + &term;
            }
        }
        FPoly {
            n: g.n,
            terms: acc.into_iter().collect(),
        }
    }

    pub fn derivative(&self, j: usize) -> FPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[j] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[j] -= 1;
                (e2, c.scale(e[j] as f64))
            })
            .collect();
        FPoly { n: self.n, terms }
    }

    pub fn gradient(&self) -> Vec<FPoly> {
        (0..self.n).map(|j| self.derivative(j)).collect()
    }

    /// Natural interval extension over a box.
    pub fn eval_box(&self, b: &[Interval]) -> Interval {
        let mut acc = Interval::point(0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (x, &k) in b.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.powi(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Mean-value form `p(c) + Σ ∂_j p(B) (B_j - c_j)` around the box midpoint.
    pub fn eval_centered(&self, grad: &[FPoly], b: &[Interval]) -> Interval {
        let c: Vec<Interval> = b.iter().map(|x| Interval::point(x.mid())).collect();
        let mut acc = self.eval_box(&c);
        for (j, gj) in grad.iter().enumerate() {
            let dx = &b[j] - &c[j];
            acc = &acc + &(&gj.eval_box(b) * &dx);
        }
        acc
    }

    /// Intersection of the natural and mean-value enclosures.
    pub fn enclose(&self, grad: &[FPoly], b: &[Interval]) -> Interval {
        let a = self.eval_box(b);
        let m = self.eval_centered(grad, b);
        let lo = a.lo().max(m.lo());
        let hi = a.hi().min(m.hi());
        if lo <= hi {
            Interval::new(lo, hi)
        } else {
            a
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.mid(), |acc, (&k, &v)| acc * v.powi(k as i32))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{default_names, parse_polynomial};

    #[test]
    fn enclosures_contain_values() {
        let names = default_names(2);
        let p = FPoly::from_int(&parse_polynomial("x1^2 + x2^2 - 1", &names).unwrap());
        let g = p.gradient();
        let b = [Interval::new(0.5, 0.75), Interval::new(-0.25, 0.5)];
        let e = p.enclose(&g, &b);
        for (x, y) in [(0.5, -0.25), (0.75, 0.5), (0.6, 0.0), (0.7, 0.3)] {
            assert!(e.contains(p.eval(&[x, y])));
        }
        assert!(e.lo() >= -0.75 - 1e-12);
        assert_eq!(p.derivative(0).eval(&[3.0, 1.0]), 6.0);
    }

    #[test]
    fn lagrangian_cancels() {
        let names = default_names(2);
        let g = FPoly::from_int(&parse_polynomial("x1^2 + x2^2", &names).unwrap());
        let f = FPoly::from_int(&parse_polynomial("x1^2 + x2^2 - 1", &names).unwrap());
        let l = FPoly::lagrangian(&g, &[&f], &[1.0]);
        let b = [Interval::new(-3.0, 3.0), Interval::new(-3.0, 3.0)];
        let e = l.eval_box(&b);
        assert!(e.contains(1.0) && e.width() < 1e-13);
    }
}
