//! Eigenvalues of dense complex matrices: balancing, Householder reduction to upper
//! Hessenberg form, then single-shift QR with deflation.

use num_complex::Complex64;

use crate::error::{DsffError, Result};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "CMatrix::from_rows: row {i} has wrong length");
            m.data[i * n..(i + 1) * n].copy_from_slice(r);
        }
        m
    }

    pub fn from_diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// `tr(X^2) = sum_{ij} x_ij x_ji`.
    pub fn trace_of_square(&self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                s += self[(i, j)] * self[(j, i)];
            }
        }
        s
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|x_ij - conj(x_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                m = m.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Sweeps allowed per matrix dimension before giving up.
pub const SWEEPS_PER_DIM: usize = 30;

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two equalizing row and column norms.
fn balance(a: &mut CMatrix) {
    let n = a.n;
    const RADIX: f64 = 2.0;
    let sq = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += cabs1(a[(j, i)]);
                    r += cabs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sq;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sq;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut CMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vn = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] /= vn;
        }
        // left: A <- (I - 2 v v^H) A
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * a[(i, j)];
            }
            s *= 2.0;
            for i in k + 1..n {
                let d = v[i] * s;
                a[(i, j)] -= d;
            }
        }
        // right: A <- A (I - 2 v v^H)
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                s += a[(i, j)] * v[j];
            }
            s *= 2.0;
            for j in k + 1..n {
                let d = s * v[j].conj();
                a[(i, j)] -= d;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` sending `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(b.norm());
    (na / r, (a / na) * b.conj() / r)
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m = (a + d) * 0.5;
    let (l1, l2) = (m + disc, m - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of `x`, in no particular order. On non-convergence after
/// `SWEEPS_PER_DIM * N` sweeps the error carries the eigenvalues deflated so far.
pub fn eigenvalues(x: &CMatrix) -> Result<Vec<Complex64>> {
    let n = x.n;
    let mut h = x.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(out);
    }
    let norm = h.frobenius();
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64) / eps;
    let max_sweeps = SWEEPS_PER_DIM * n;
    let mut sweeps = 0usize;
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut deflated = 0usize;
    loop {
        // find the start of the unreduced block ending at hi
        let mut l = hi;
        while l > 0 {
            let sub = cabs1(h[(l, l - 1)]);
            let mut tst = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
            if tst == 0.0 {
                tst = norm;
            }
            if sub <= eps * tst || sub <= small {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            deflated += 1;
            its = 0;
            if hi == 0 {
                return Ok(out);
            }
            hi -= 1;
            continue;
        }
        if sweeps >= max_sweeps {
            let partial = out[hi + 1..].to_vec();
            return Err(DsffError::Convergence { sweeps, deflated, n, partial });
        }
        sweeps += 1;
        its += 1;
        let mu = if its % 10 == 0 {
            // exceptional shift
            h[(hi, hi)] + Complex64::new(0.75 * cabs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rot = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let (p, q) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = p * c + s * q;
                h[(k + 1, j)] = -s.conj() * p + q * c;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let (p, q) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = p * c + q * s.conj();
                h[(i, k + 1)] = -p * s + q * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_is_exact() {
        let d = [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)];
        let ev = eigenvalues(&CMatrix::from_diagonal(&d)).unwrap();
        assert_eq!(ev, d.to_vec());
    }

    #[test]
    fn rotation_generator() {
        let m = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]);
        let ev = sorted(eigenvalues(&m).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn companion_matrix_roots() {
        // roots 1..=6 of prod (z - k)
        let mut coef = vec![c(1.0, 0.0)];
        for k in 1..=6 {
            let mut next = vec![c(0.0, 0.0); coef.len() + 1];
            for (i, &a) in coef.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * k as f64;
            }
            coef = next;
        }
        let n = 6;
        let mut m = CMatrix::zeros(n);
        for j in 0..n {
            m[(0, j)] = -coef[j + 1];
        }
        for i in 1..n {
            m[(i, i - 1)] = c(1.0, 0.0);
        }
        let ev = sorted(eigenvalues(&m).unwrap());
        for (k, z) in ev.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, 0.0)).norm() < 1e-9, "{z}");
        }
    }

    #[test]
    fn upper_triangular_and_badly_scaled() {
        let mut m = CMatrix::zeros(4);
        for i in 0..4 {
            for j in i..4 {
                m[(i, j)] = c((i + 1) as f64 * 10f64.powi(3 * j as i32 - 3 * i as i32), j as f64);
            }
        }
        let ev = sorted(eigenvalues(&m).unwrap());
        for (k, z) in ev.iter().enumerate() {
            assert!((z - c(k as f64 + 1.0, k as f64)).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn hessenberg_preserves_trace() {
        let mut m = CMatrix::zeros(5);
        for i in 0..5 {
            for j in 0..5 {
                m[(i, j)] = c(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64);
            }
        }
        let mut h = m.clone();
        hessenberg(&mut h);
        assert!((h.trace() - m.trace()).norm() < 1e-12);
        assert!((h.frobenius() - m.frobenius()).abs() < 1e-12);
        for i in 2..5 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], c(0.0, 0.0));
            }
        }
    }
}
