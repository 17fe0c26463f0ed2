//! Restarted GMRES with right preconditioning.

use num_complex::Complex64 as C;

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).fold(C::new(0.0, 0.0), |s, (x, y)| s + x.conj() * y)
}

fn norm(a: &[C]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub struct GmresOutcome {
    pub x: Vec<C>,
    pub relative_residual: f64,
    pub iterations: usize,
}

/// Solves A x = b with A applied through `apply` and M^{-1} through `prec`.
pub fn gmres(
    apply: impl Fn(&[C], &mut [C]),
    prec: impl Fn(&[C], &mut [C]),
    b: &[C],
    restart: usize,
    max_iter: usize,
    tol: f64,
) -> GmresOutcome {
    let n = b.len();
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    let mut x = vec![C::new(0.0, 0.0); n];
    let mut r = vec![C::new(0.0, 0.0); n];
    let mut w = vec![C::new(0.0, 0.0); n];
    let mut z = vec![C::new(0.0, 0.0); n];
    let mut total = 0;
    let mut rel = f64::INFINITY;
    while total < max_iter {
        apply(&x, &mut r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= tol {
            break;
        }
        let mut v: Vec<Vec<C>> = vec![r.iter().map(|x| x / beta).collect()];
        let mut h = vec![vec![C::new(0.0, 0.0); restart]; restart + 1];
        let (mut cs, mut sn) = (vec![C::new(0.0, 0.0); restart], vec![C::new(0.0, 0.0); restart]);
        let mut g = vec![C::new(0.0, 0.0); restart + 1];
        g[0] = C::new(beta, 0.0);
        let mut k_used = 0;
        for k in 0..restart {
            prec(&v[k], &mut z);
            apply(&z, &mut w);
            for (i, vi) in v.iter().enumerate() {
                let hik = dot(vi, &w);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(vi) {
                    *wj -= hik * vj;
                }
            }
            let hn = norm(&w);
            h[k + 1][k] = C::new(hn, 0.0);
            for i in 0..k {
                let t = cs[i].conj() * h[i][k] + sn[i].conj() * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let (a, bb) = (h[k][k], h[k + 1][k]);
            let den = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if den == 0.0 {
                k_used = k;
                break;
            }
            cs[k] = a / den;
            sn[k] = bb / den;
            h[k][k] = C::new(den, 0.0);
            h[k + 1][k] = C::new(0.0, 0.0);
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k].conj() * g[k];
            total += 1;
            k_used = k + 1;
            rel = g[k + 1].norm() / bnorm;
            if rel <= tol || total >= max_iter || hn == 0.0 {
                break;
            }
            v.push(w.iter().map(|x| x / hn).collect());
        }
        // back substitution and update x += M^{-1} V y
        let mut y = vec![C::new(0.0, 0.0); k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * y[j];
            }
            y[i] = s / h[i][i];
        }
        let mut u = vec![C::new(0.0, 0.0); n];
        for (yi, vi) in y.iter().zip(&v) {
            for (uj, vj) in u.iter_mut().zip(vi) {
                *uj += yi * vj;
            }
        }
        prec(&u, &mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi += zi;
        }
        if rel <= tol {
            // confirm with the true residual
            apply(&x, &mut r);
            let res: Vec<C> = r.iter().zip(b).map(|(ri, bi)| bi - ri).collect();
            rel = norm(&res) / bnorm;
            if rel <= tol * 10.0 {
                break;
            }
        }
    }
    GmresOutcome { x, relative_residual: rel, iterations: total }
}
