//! Compressed sparse rows, ILU(0) and preconditioned BiCGSTAB.

#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub n: usize,
    pub indptr: Vec<usize>,
    /// Sorted within each row.
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl Csr {
    /// Builds from per-row `(col, value)` lists; duplicates are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (c, v) in row {
                if indices.len() > *indptr.last().unwrap() && *indices.last().unwrap() == c {
                    *data.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            n,
            indptr,
            indices,
            data,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[k] * x[self.indices[k]];
            }
            *yi = acc;
        }
    }
}

/// Incomplete LU with the sparsity pattern of the matrix.
pub(crate) struct Ilu0 {
    lu: Csr,
    diag: Vec<usize>,
}

impl Ilu0 {
    pub fn new(a: &Csr) -> Self {
        let mut lu = a.clone();
        let n = lu.n;
        let diag: Vec<usize> = (0..n)
            .map(|i| {
                (lu.indptr[i]..lu.indptr[i + 1])
                    .find(|&k| lu.indices[k] == i)
                    .expect("ILU(0) needs a structurally nonzero diagonal")
            })
            .collect();
        let mut pos = vec![usize::MAX; n];
        for i in 0..n {
            let (start, end) = (lu.indptr[i], lu.indptr[i + 1]);
            for k in start..end {
                pos[lu.indices[k]] = k;
            }
            for k in start..diag[i] {
                let j = lu.indices[k];
                let lij = lu.data[k] / lu.data[diag[j]];
                lu.data[k] = lij;
                for kk in diag[j] + 1..lu.indptr[j + 1] {
                    let p = pos[lu.indices[kk]];
                    if p != usize::MAX {
                        lu.data[p] -= lij * lu.data[kk];
                    }
                }
            }
            for k in start..end {
                pos[lu.indices[k]] = usize::MAX;
            }
        }
        Self { lu, diag }
    }

    /// `z = (LU)⁻¹ r`.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let lu = &self.lu;
        for i in 0..lu.n {
            let mut acc = r[i];
            for k in lu.indptr[i]..self.diag[i] {
                acc -= lu.data[k] * z[lu.indices[k]];
            }
            z[i] = acc;
        }
        for i in (0..lu.n).rev() {
            let mut acc = z[i];
            for k in self.diag[i] + 1..lu.indptr[i + 1] {
                acc -= lu.data[k] * z[lu.indices[k]];
            }
            z[i] = acc / lu.data[self.diag[i]];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned BiCGSTAB. `x` holds the initial guess on entry.
/// Returns the iteration count, or `None` without convergence to
/// `‖b − A x‖ ≤ tol ‖b‖`.
pub(crate) fn bicgstab(a: &Csr, pre: &Ilu0, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Option<usize> {
    let n = a.n;
    let bnorm = norm2(b).max(f64::MIN_POSITIVE);
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    if norm2(&r) <= tol * bnorm {
        return Some(0);
    }
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut p_hat = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut s_hat = vec![0.0; n];
    let mut t = vec![0.0; n];
    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return None;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        pre.apply(&p, &mut p_hat);
        a.matvec(&p_hat, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm2(&s) <= tol * bnorm {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            return Some(it);
        }
        pre.apply(&s, &mut s_hat);
        a.matvec(&s_hat, &mut t);
        let tt = dot(&t, &t);
        if tt == 0.0 {
            return None;
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm2(&r) <= tol * bnorm {
            return Some(it);
        }
        if omega == 0.0 {
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace_1d(n: usize, shift: f64) -> Csr {
        Csr::from_rows(
            (0..n)
                .map(|i| {
                    let mut row = vec![(i, 2.0 + shift)];
                    if i > 0 {
                        row.push((i - 1, -1.0));
                    }
                    if i + 1 < n {
                        row.push((i + 1, -1.3));
                    }
                    row
                })
                .collect(),
        )
    }

    #[test]
    fn ilu_is_exact_for_tridiagonal() {
        let a = laplace_1d(30, 0.1);
        let ilu = Ilu0::new(&a);
        let x: Vec<f64> = (0..30).map(|i| (i as f64).sin()).collect();
        let mut b = vec![0.0; 30];
        a.matvec(&x, &mut b);
        let mut z = vec![0.0; 30];
        ilu.apply(&b, &mut z);
        for (u, v) in z.iter().zip(&x) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn bicgstab_solves_with_duplicates_summed() {
        let mut rows: Vec<Vec<(usize, f64)>> = (0..50)
            .map(|i| vec![(i, 3.0), ((i + 7) % 50, -1.0), ((i * 3) % 50, 0.5)])
            .collect();
        rows[0].push((0, 1.0));
        let a = Csr::from_rows(rows);
        let ilu = Ilu0::new(&a);
        let want: Vec<f64> = (0..50).map(|i| 1.0 + i as f64 * 0.1).collect();
        let mut b = vec![0.0; 50];
        a.matvec(&want, &mut b);
        let mut x = vec![0.0; 50];
        let its = bicgstab(&a, &ilu, &b, &mut x, 1e-13, 200).unwrap();
        assert!(its > 0);
        for (u, v) in x.iter().zip(&want) {
            assert!((u - v).abs() < 1e-9);
        }
    }
}
