//! Compressed-row complex matrices and the dense kernels the oracle needs.
//! Dense matrices are row-major `n x n` slices.

use num_complex::Complex64 as C;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    n: usize,
    ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<C>,
}

impl Csr {
    /// Sums duplicate entries and drops exact zeros.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, C)>) -> Self {
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut ptr = vec![0; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<C> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col.push(c);
                val.push(v);
                last = Some((r, c));
            }
        }
        let mut keep_col = Vec::with_capacity(col.len());
        let mut keep_val = Vec::with_capacity(col.len());
        for ((r, c), v) in rows.into_iter().zip(col).zip(val) {
            if v != C::new(0.0, 0.0) {
                ptr[r + 1] += 1;
                keep_col.push(c);
                keep_val.push(v);
            }
        }
        for i in 0..n {
            ptr[i + 1] += ptr[i];
        }
        Self { n, ptr, col: keep_col, val: keep_val }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, ptr: vec![0; n + 1], col: Vec::new(), val: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        (0..self.n).flat_map(move |r| (self.ptr[r]..self.ptr[r + 1]).map(move |p| (r, self.col[p], self.val[p])))
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C)> + '_ {
        (self.ptr[r]..self.ptr[r + 1]).map(move |p| (self.col[p], self.val[p]))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.n, self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect())
    }

    pub fn scale(&self, s: C) -> Self {
        Self { val: self.val.iter().map(|v| v * s).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_triplets(self.n, self.triplets().chain(o.triplets()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut t = Vec::new();
        for r in 0..self.n {
            for (k, a) in self.row(r) {
                for (c, b) in o.row(k) {
                    t.push((r, c, a * b));
                }
            }
        }
        Self::from_triplets(self.n, t)
    }

    pub fn diagonal(&self) -> Vec<C> {
        (0..self.n)
            .map(|r| self.row(r).find(|(c, _)| *c == r).map_or(C::new(0.0, 0.0), |(_, v)| v))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<C> {
        let mut d = vec![C::new(0.0, 0.0); self.n * self.n];
        for (r, c, v) in self.triplets() {
            d[r * self.n + c] += v;
        }
        d
    }

    /// out += s * (self x).
    pub fn left_mul_acc(&self, x: &[C], s: C, out: &mut [C]) {
        let n = self.n;
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (l, v) in self.row(i) {
                let f = v * s;
                let src = &x[l * n..(l + 1) * n];
                for (o, xv) in row.iter_mut().zip(src) {
                    *o += f * xv;
                }
            }
        });
    }

    /// out = x self^dag.
    pub fn right_mul_adj(&self, x: &[C], out: &mut [C]) {
        let n = self.n;
        out.par_chunks_mut(n).zip(x.par_chunks(n)).for_each(|(row, xr)| {
            for (k, o) in row.iter_mut().enumerate() {
                let mut acc = C::new(0.0, 0.0);
                for (l, v) in self.row(k) {
                    acc += xr[l] * v.conj();
                }
                *o = acc;
            }
        });
    }

    /// tr(self x).
    pub fn trace_with(&self, x: &[C]) -> C {
        self.triplets().fold(C::new(0.0, 0.0), |a, (r, c, v)| a + v * x[c * self.n + r])
    }
}

pub fn trace(x: &[C], n: usize) -> C {
    (0..n).fold(C::new(0.0, 0.0), |a, i| a + x[i * n + i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Csr {
        Csr::from_triplets(
            3,
            vec![(0, 1, C::new(1.0, 2.0)), (2, 0, C::new(-0.5, 0.0)), (1, 1, C::new(0.0, 3.0)), (0, 1, C::new(1.0, 0.0))],
        )
    }

    fn dense_mul(a: &[C], b: &[C], n: usize) -> Vec<C> {
        let mut o = vec![C::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    o[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        o
    }

    #[test]
    fn kernels_match_dense() {
        let s = sample();
        assert_eq!(s.nnz(), 3);
        let d = s.to_dense();
        assert_eq!(d[1], C::new(2.0, 2.0));
        let x: Vec<C> = (0..9).map(|i| C::new(i as f64, 1.0 - i as f64)).collect();
        let mut out = vec![C::new(0.0, 0.0); 9];
        s.left_mul_acc(&x, C::new(1.0, 0.0), &mut out);
        assert_eq!(out, dense_mul(&d, &x, 3));
        s.right_mul_adj(&x, &mut out);
        assert_eq!(out, dense_mul(&x, &s.adjoint().to_dense(), 3));
        let sx = dense_mul(&d, &x, 3);
        assert!((s.trace_with(&x) - trace(&sx, 3)).norm() < 1e-14);
        assert_eq!(s.mul(&s).to_dense(), dense_mul(&d, &d, 3));
    }
}
