//! Eigenvalues of dense symmetric matrices: Householder reduction to
//! tridiagonal form on the lower triangle, then implicit QL with Wilkinson
//! shifts. No eigenvectors are formed.

use nalgebra::DMatrix;

/// Reduces the symmetric matrix (column-major, only the lower triangle is
/// read) to tridiagonal form; returns the diagonal and the subdiagonal,
/// with `e[i]` coupling `d[i]` and `d[i + 1]` and `e[n - 1] = 0`.
fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let col = k * n;
        let x = &a[col + k + 1..col + n];
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let m = n - k - 1;
        let v = &mut v[..m];
        v.copy_from_slice(x);
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|t| t * t).sum();
        e[k] = alpha;
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;
        // p = beta · A22 · v from the lower triangle of A22
        let p = &mut p[..m];
        p.fill(0.0);
        for j in 0..m {
            let cj = (k + 1 + j) * n + k + 1;
            let colj = &a[cj + j..cj + m];
            let vj = v[j];
            let (below, vb) = (&colj[1..], &v[j + 1..m]);
            // four partial sums keep the reduction off the critical path
            let mut acc = [0.0; 4];
            let (ca, cr) = (below.chunks_exact(4), below.chunks_exact(4).remainder());
            let (va, vr) = (vb.chunks_exact(4), vb.chunks_exact(4).remainder());
            for (c4, v4) in ca.zip(va) {
                for t in 0..4 {
                    acc[t] += c4[t] * v4[t];
                }
            }
            let mut dot = colj[0] * vj + (acc[0] + acc[1]) + (acc[2] + acc[3]);
            for (c, x) in cr.iter().zip(vr) {
                dot += c * x;
            }
            for (pi, &aij) in p[j + 1..m].iter_mut().zip(below) {
                *pi += aij * vj;
            }
            p[j] += dot;
        }
        for t in p.iter_mut() {
            *t *= beta;
        }
        let kk = 0.5 * beta * p.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>();
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= kk * vi;
        }
        let w = &*p;
        // A22 -= v wᵀ + w vᵀ on the lower triangle
        for j in 0..m {
            let cj = (k + 1 + j) * n + k + 1;
            let (vj, wj) = (v[j], w[j]);
            let colj = &mut a[cj + j..cj + m];
            for ((aij, &vi), &wi) in colj.iter_mut().zip(&v[j..]).zip(&w[j..]) {
                *aij -= vi * wj + wi * vj;
            }
        }
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[i * n + i];
    }
    if n >= 2 {
        e[n - 2] = a[(n - 2) * n + n - 1];
    }
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL; `None` if
/// some eigenvalue fails to converge.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Option<Vec<f64>> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                // entries are prescaled to order one, so the plain form cannot overflow
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some(d)
}

fn library_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let amax = m.amax();
    if amax == 0.0 {
        return vec![0.0; n];
    }
    if !amax.is_finite() {
        return library_eigenvalues(m);
    }
    // scaling by a power of two is exact
    let k = amax.log2().round() as i32;
    let (down, up) = (2f64.powi(-k), 2f64.powi(k));
    let scaled: Vec<f64> = m.as_slice().iter().map(|x| x * down).collect();
    let (d, e) = tridiagonalize(scaled, n);
    let Some(mut vals) = tridiagonal_eigenvalues(d, e) else { return library_eigenvalues(m) };
    for v in vals.iter_mut() {
        *v *= up;
    }
    vals.sort_by(f64::total_cmp);
    vals
}
