use super::{dot, norm2, DenseMatrix, DEFAULT_REL_CUTOFF};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `m = U · diag(sigma) · Vᵀ`.
///
/// For an `r x c` input, `U` is `r x k`, `V` is `c x k` and `sigma` has
/// `k = min(r, c)` entries sorted in non-increasing order.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let (r, c, k) = (self.u.rows(), self.v.rows(), self.sigma.len());
        DenseMatrix::from_fn(r, c, |i, j| {
            (0..k)
                .map(|l| self.u[(i, l)] * self.sigma[l] * self.v[(j, l)])
                .sum()
        })
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// `σ_max / σ_min`; infinite for a singular matrix.
    pub fn condition(&self) -> f64 {
        match self.sigma.last() {
            Some(&s) if s > 0.0 => self.sigma_max() / s,
            Some(_) => f64::INFINITY,
            None => 1.0,
        }
    }

    /// Minimum-norm least-squares solution, dropping singular values below
    /// `rel_cutoff · σ_max`.
    pub fn solve(&self, rhs: &[f64], rel_cutoff: f64) -> Result<Vec<f64>> {
        if rhs.len() != self.u.rows() {
            return Err(Error::dims(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.u.rows()
            )));
        }
        let threshold = rel_cutoff * self.sigma_max();
        let mut x = vec![0.0; self.v.rows()];
        for (l, &s) in self.sigma.iter().enumerate() {
            if s <= threshold || s == 0.0 {
                break;
            }
            let coef = (0..rhs.len()).map(|i| self.u[(i, l)] * rhs[i]).sum::<f64>() / s;
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += coef * self.v[(j, l)];
            }
        }
        Ok(x)
    }
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn svd(m: &DenseMatrix) -> Result<SvdResult> {
    let (r, c) = (m.rows(), m.cols());
    if r < c {
        let t = svd(&m.transpose())?;
        return Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }
    if r > c {
        let qr = HouseholderQr::new(m);
        let inner = jacobi(&qr.r_columns(), c, c)?;
        let u = qr.q_times(&inner.u);
        return Ok(SvdResult {
            u,
            sigma: inner.sigma,
            v: inner.v,
        });
    }
    jacobi(&columns_of(m), r, c)
}

/// Minimum-ℓ²-norm least-squares solution of `m · x ≈ rhs` with singular
/// values below `rel_cutoff · σ_max` treated as zero.
pub fn pinv_solve(m: &DenseMatrix, rhs: &[f64], rel_cutoff: f64) -> Result<Vec<f64>> {
    if rhs.len() != m.rows() {
        return Err(Error::dims(format!(
            "right-hand side of length {} for a {}x{} matrix",
            rhs.len(),
            m.rows(),
            m.cols()
        )));
    }
    if !(0.0..1.0).contains(&rel_cutoff) {
        return Err(Error::invalid(format!(
            "rel_cutoff must lie in [0, 1), got {rel_cutoff}"
        )));
    }
    if m.rows() > m.cols() {
        // Qᵀ·rhs restricted to the range of Q; the remaining components only
        // contribute to the residual.
        let qr = HouseholderQr::new(m);
        let y = qr.qt_times(rhs);
        let inner = jacobi(&qr.r_columns(), m.cols(), m.cols())?;
        return inner.solve(&y[..m.cols()], rel_cutoff);
    }
    svd(m)?.solve(rhs, rel_cutoff)
}

/// Least-squares solve for a tall (or square) system.
pub fn lstsq(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if m.rows() < m.cols() {
        return Err(Error::dims(format!(
            "lstsq needs rows >= cols, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    pinv_solve(m, rhs, DEFAULT_REL_CUTOFF)
}

fn columns_of(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

/// One-sided Jacobi on the columns of an `r x c` matrix with `r >= c`.
fn jacobi(cols: &[Vec<f64>], r: usize, c: usize) -> Result<SvdResult> {
    let mut w: Vec<Vec<f64>> = cols.to_vec();
    let mut v: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let mut e = vec![0.0; c];
            e[j] = 1.0;
            e
        })
        .collect();
    let tol = f64::EPSILON * (r.max(1) as f64);
    let mut norms: Vec<f64> = w.iter().map(|col| dot(col, col)).collect();

    let mut converged = c < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut w, p, q, cs, sn);
                rotate(&mut v, p, q, cs, sn);
                norms[p] = dot(&w[p], &w[p]);
                norms[q] = dot(&w[q], &w[q]);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence {
            rows: r,
            cols: c,
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..c).collect();
    let sig: Vec<f64> = w.iter().map(|col| norm2(col)).collect();
    order.sort_by(|&a, &b| sig[b].total_cmp(&sig[a]));
    let smax = order.first().map_or(0.0, |&j| sig[j]);

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(c);
    let mut sigma = Vec::with_capacity(c);
    let mut v_cols = Vec::with_capacity(c);
    let mut deficient = Vec::new();
    for &j in &order {
        let s = sig[j];
        v_cols.push(v[j].clone());
        if s > smax * f64::EPSILON * (r as f64) && s > 0.0 {
            u_cols.push(w[j].iter().map(|x| x / s).collect());
            sigma.push(s);
        } else {
            // Numerically zero: keep the value but complete U below.
            deficient.push(u_cols.len());
            u_cols.push(vec![0.0; r]);
            sigma.push(if s > 0.0 { s } else { 0.0 });
        }
    }
    for idx in deficient {
        u_cols[idx] = orthonormal_complement(&u_cols, idx, r);
    }

    let u = DenseMatrix::from_fn(r, c, |i, j| u_cols[j][i]);
    let vm = DenseMatrix::from_fn(c, c, |i, j| v_cols[j][i]);
    Ok(SvdResult { u, sigma, v: vm })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (wp, wq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in wp.iter_mut().zip(wq.iter_mut()) {
        let x = *a;
        let y = *b;
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// A unit vector orthogonal to every non-zero column of `cols` other than `skip`.
fn orthonormal_complement(cols: &[Vec<f64>], skip: usize, r: usize) -> Vec<f64> {
    for e in 0..r {
        let mut cand = vec![0.0; r];
        cand[e] = 1.0;
        for _ in 0..2 {
            for (j, col) in cols.iter().enumerate() {
                if j == skip {
                    continue;
                }
                let d = dot(col, &cand);
                for (x, y) in cand.iter_mut().zip(col) {
                    *x -= d * y;
                }
            }
        }
        let n = norm2(&cand);
        if n > 0.5 {
            return cand.into_iter().map(|x| x / n).collect();
        }
    }
    vec![0.0; r]
}

/// Householder QR of a tall matrix, kept in factored form.
struct HouseholderQr {
    rows: usize,
    /// Working columns; the upper triangle holds R.
    cols: Vec<Vec<f64>>,
    /// Unit reflector vectors, `reflectors[k]` acts on rows `k..`.
    reflectors: Vec<Vec<f64>>,
}

impl HouseholderQr {
    fn new(m: &DenseMatrix) -> Self {
        let (r, c) = (m.rows(), m.cols());
        let mut cols = columns_of(m);
        let mut reflectors = Vec::with_capacity(c);
        for k in 0..c {
            let x = &cols[k][k..];
            let nx = norm2(x);
            let mut v = x.to_vec();
            if nx == 0.0 {
                reflectors.push(vec![0.0; r - k]);
                continue;
            }
            let alpha = if x[0] >= 0.0 { -nx } else { nx };
            v[0] -= alpha;
            let nv = norm2(&v);
            if nv == 0.0 {
                reflectors.push(vec![0.0; r - k]);
                continue;
            }
            v.iter_mut().for_each(|vi| *vi /= nv);
            for col in cols.iter_mut().skip(k) {
                reflect(&v, &mut col[k..]);
            }
            reflectors.push(v);
        }
        Self {
            rows: r,
            cols,
            reflectors,
        }
    }

    fn r_columns(&self) -> Vec<Vec<f64>> {
        let c = self.cols.len();
        self.cols
            .iter()
            .enumerate()
            .map(|(j, col)| (0..c).map(|i| if i <= j { col[i] } else { 0.0 }).collect())
            .collect()
    }

    fn qt_times(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            reflect(v, &mut y[k..]);
        }
        y
    }

    /// `Q · m` for an `c x k` matrix `m`, with `Q` the thin `rows x c` factor.
    fn q_times(&self, m: &DenseMatrix) -> DenseMatrix {
        let c = self.cols.len();
        let k = m.cols();
        let mut out: Vec<Vec<f64>> = (0..k)
            .map(|j| {
                let mut col = vec![0.0; self.rows];
                for i in 0..c {
                    col[i] = m[(i, j)];
                }
                col
            })
            .collect();
        for (kk, v) in self.reflectors.iter().enumerate().rev() {
            for col in out.iter_mut() {
                reflect(v, &mut col[kk..]);
            }
        }
        DenseMatrix::from_fn(self.rows, k, |i, j| out[j][i])
    }
}

fn reflect(v: &[f64], x: &mut [f64]) {
    let s = 2.0 * dot(v, x);
    if s != 0.0 {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= s * vi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_defect(m: &DenseMatrix) -> f64 {
        let g = m.transpose().matmul(m).unwrap();
        g.max_abs_diff(&DenseMatrix::identity(g.rows()))
    }

    #[test]
    fn identity_singular_values() {
        let s = svd(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(s.sigma, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_with_zero() {
        let s = svd(&DenseMatrix::from_diag(&[3.0, 0.0])).unwrap();
        assert_eq!(s.sigma, vec![3.0, 0.0]);
        assert!(orthonormality_defect(&s.u) < 1e-14);
        assert!(orthonormality_defect(&s.v) < 1e-14);
    }

    #[test]
    fn swap_matrix_reconstructs() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 1.0).abs() < 1e-15 && (s.sigma[1] - 1.0).abs() < 1e-15);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn tall_and_wide_paths_reconstruct() {
        let tall = DenseMatrix::from_fn(7, 3, |i, j| ((i * 3 + j) as f64).sin() + 0.1 * j as f64);
        for m in [tall.clone(), tall.transpose()] {
            let s = svd(&m).unwrap();
            let rel = {
                let r = s.reconstruct();
                let mut d = r.clone();
                for i in 0..r.rows() {
                    for j in 0..r.cols() {
                        d[(i, j)] -= m[(i, j)];
                    }
                }
                d.frobenius_norm() / m.frobenius_norm()
            };
            assert!(rel < 1e-12, "relative reconstruction error {rel:e}");
            assert!(orthonormality_defect(&s.u) < 1e-12);
            assert!(orthonormality_defect(&s.v) < 1e-12);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn min_norm_examples() {
        let row = DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        assert_eq!(pinv_solve(&row, &[2.0], 1e-12).unwrap(), vec![2.0, 0.0]);

        let row = DenseMatrix::from_rows(&[vec![0.25, -0.5]]).unwrap();
        let x = pinv_solve(&row, &[1.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] + 1.6).abs() < 1e-14);

        let dup = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let x = pinv_solve(&dup, &[1.0, 1.0], 1e-12).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && x[1].abs() < 1e-14);
    }

    #[test]
    fn lstsq_examples() {
        let m = DenseMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let x = lstsq(&m, &[0.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);

        let sq = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = lstsq(&sq, &[3.0, 5.0]).unwrap();
        let r = sq.matvec(&x).unwrap();
        assert!((r[0] - 3.0).abs() < 1e-12 && (r[1] - 5.0).abs() < 1e-12);

        let wide = DenseMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            lstsq(&wide, &[1.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn pinv_validates_inputs() {
        let m = DenseMatrix::identity(2);
        assert!(pinv_solve(&m, &[1.0], 1e-12).is_err());
        assert!(pinv_solve(&m, &[1.0, 1.0], 1.0).is_err());
    }
}
