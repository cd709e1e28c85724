//! Small dense complex matrices: products, log-magnitude LU determinants and
//! modified Gram–Schmidt.

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

/// Determinant as `phase · exp(log_abs)`; `log_abs = -inf` when singular.
#[derive(Clone, Copy, Debug)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: Complex64,
}

impl LogDet {
    pub fn value(&self) -> Complex64 {
        if self.log_abs == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            self.phase * self.log_abs.exp()
        }
    }
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator 2-norm estimate by power iteration on `A^*A`.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.n;
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + i as f64 * 0.1, 0.3))
            .collect();
        let mut est = 0.0;
        for _ in 0..200 {
            let av: Vec<Complex64> = (0..n)
                .map(|i| (0..n).map(|j| self.get(i, j) * v[j]).sum())
                .collect();
            let aav: Vec<Complex64> = (0..n)
                .map(|j| (0..n).map(|i| self.get(i, j).conj() * av[i]).sum())
                .collect();
            let nrm = aav.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if nrm == 0.0 {
                return 0.0;
            }
            let new_est = nrm.sqrt();
            v = aav.iter().map(|c| c / nrm).collect();
            if (new_est - est).abs() <= 1e-14 * new_est {
                return new_est;
            }
            est = new_est;
        }
        est
    }

    /// LU with partial pivoting, accumulating `log|det|` and the phase.
    pub fn log_det(&self) -> LogDet {
        let n = self.n;
        let mut a = self.data.clone();
        let mut log_abs = 0.0;
        let mut phase = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, a[i * n + k].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax == 0.0 {
                return LogDet {
                    log_abs: f64::NEG_INFINITY,
                    phase: Complex64::new(0.0, 0.0),
                };
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                phase = -phase;
            }
            let piv = a[k * n + k];
            log_abs += piv.norm().ln();
            phase *= piv / piv.norm();
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
        LogDet { log_abs, phase }
    }

    pub fn det(&self) -> Complex64 {
        self.log_det().value()
    }

    /// Modified Gram–Schmidt on the columns: returns `(Q, diag(R))`.
    pub fn mgs(&self) -> (CMatrix, Vec<f64>) {
        let n = self.n;
        let mut q = self.clone();
        let mut r = vec![0.0; n];
        for j in 0..n {
            for i in 0..j {
                let dot: Complex64 = (0..n).map(|k| q.get(k, i).conj() * q.get(k, j)).sum();
                for k in 0..n {
                    let v = q.get(k, j) - dot * q.get(k, i);
                    q.set(k, j, v);
                }
            }
            let nrm = (0..n).map(|k| q.get(k, j).norm_sqr()).sum::<f64>().sqrt();
            r[j] = nrm;
            if nrm > 0.0 {
                for k in 0..n {
                    let v = q.get(k, j) / nrm;
                    q.set(k, j, v);
                }
            }
        }
        (q, r)
    }

    /// Eigenvalues via the characteristic polynomial (Faddeev–LeVerrier);
    /// meant for the small companion matrices used here.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.n;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        let mut m = CMatrix::zeros(n);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next.data[i * n + i] += coeffs[n - k + 1];
            }
            m = next;
            let am = self.mul(&m);
            let tr: Complex64 = (0..n).map(|i| am.get(i, i)).sum();
            coeffs[n - k] = -tr / k as f64;
        }
        match crate::numeric::poly_roots(&coeffs) {
            Ok(r) => r.complex_roots(),
            Err(_) => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_small() {
        let m = CMatrix {
            n: 2,
            data: vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)],
        };
        assert!((m.det() - c(-2.0, 0.0)).norm() < 1e-14);
        let s = CMatrix {
            n: 2,
            data: vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
        };
        assert_eq!(s.log_det().log_abs, f64::NEG_INFINITY);
    }

    #[test]
    fn log_det_does_not_overflow() {
        let mut m = CMatrix::identity(400);
        for i in 0..400 {
            m.set(i, i, c(1e3, 0.0));
        }
        let ld = m.log_det();
        assert!((ld.log_abs - 400.0 * 1e3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn mgs_reconstructs() {
        let m = CMatrix {
            n: 2,
            data: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        };
        let (q, r) = m.mgs();
        assert!((r[0] * r[1] - m.det().norm()).abs() < 1e-14);
        let qh = q.mul(&CMatrix::identity(2));
        assert!((qh.get(0, 0).norm_sqr() + qh.get(1, 0).norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_fibonacci_matrix() {
        let m = CMatrix {
            n: 2,
            data: vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        };
        let mut ev: Vec<f64> = m.eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[1] - 1.618033988749895).abs() < 1e-12);
    }
}
