//! Restarted, right-preconditioned GMRES on complex vectors.

use num_complex::Complex64;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOutcome {
    pub iterations: usize,
    /// Final relative residual `|b − A x| / |b|`.
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct GmresParams {
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `A x = b` starting from the contents of `x`. `apply(v, out)` computes
/// `A v`; `precond(v, out)` applies an approximate inverse on the right.
pub fn gmres(
    mut apply: impl FnMut(&[C], &mut [C]),
    precond: impl Fn(&[C], &mut [C]),
    b: &[C],
    x: &mut [C],
    p: GmresParams,
) -> KrylovOutcome {
    let n = b.len();
    let m = p.restart.max(1);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = C::default());
        return KrylovOutcome {
            iterations: 0,
            residual: 0.0,
            converged: true,
        };
    }
    let mut basis: Vec<Vec<C>> = Vec::with_capacity(m + 1);
    let mut h = vec![vec![C::default(); m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![C::default(); m];
    let mut g = vec![C::default(); m + 1];
    let mut w = vec![C::default(); n];
    let mut z = vec![C::default(); n];
    let mut total = 0;
    loop {
        apply(x, &mut w);
        let mut r: Vec<C> = b.iter().zip(&w).map(|(bi, wi)| bi - wi).collect();
        let beta = norm(&r);
        let rel = beta / bnorm;
        if rel <= p.tol || total >= p.max_iter || !rel.is_finite() {
            return KrylovOutcome {
                iterations: total,
                residual: rel,
                converged: rel <= p.tol,
            };
        }
        r.iter_mut().for_each(|v| *v /= beta);
        basis.clear();
        basis.push(r);
        g.iter_mut().for_each(|v| *v = C::default());
        g[0] = C::new(beta, 0.0);
        let mut k = 0;
        for j in 0..m {
            precond(&basis[j], &mut z);
            apply(&z, &mut w);
            total += 1;
            for i in 0..=j {
                let hij = dot(&basis[i], &w);
                h[i][j] = hij;
                for (wv, bv) in w.iter_mut().zip(&basis[i]) {
                    *wv -= hij * bv;
                }
            }
            let hn = norm(&w);
            h[j + 1][j] = C::new(hn, 0.0);
            for i in 0..j {
                let (a, bb) = (h[i][j], h[i + 1][j]);
                h[i][j] = cs[i] * a + sn[i] * bb;
                h[i + 1][j] = -sn[i].conj() * a + cs[i] * bb;
            }
            let (a, bb) = (h[j][j], h[j + 1][j]);
            let t = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if a.norm() == 0.0 {
                cs[j] = 0.0;
                sn[j] = C::new(1.0, 0.0);
            } else {
                cs[j] = a.norm() / t;
                sn[j] = (a / a.norm()) * bb.conj() / t;
            }
            h[j][j] = cs[j] * a + sn[j] * bb;
            h[j + 1][j] = C::default();
            g[j + 1] = -sn[j].conj() * g[j];
            g[j] *= cs[j];
            k = j + 1;
            let est = g[j + 1].norm() / bnorm;
            if est <= p.tol || total >= p.max_iter || hn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }
        let mut y = vec![C::default(); k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for l in i + 1..k {
                acc -= h[i][l] * y[l];
            }
            y[i] = acc / h[i][i];
        }
        let mut comb = vec![C::default(); n];
        for (yi, v) in y.iter().zip(&basis) {
            for (c, vi) in comb.iter_mut().zip(v) {
                *c += yi * vi;
            }
        }
        precond(&comb, &mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
    }
}
