use super::{norm2, LinearOperator};
use crate::error::{Error, Result};

/// Applies `p(A)` to `b` for `p = Σ_j coeffs[j] · T_{2j+1}`, using only
/// matrix-vector products with `A`.
///
/// The odd Chebyshev polynomials satisfy `T_{2j+3} = 2·T_2·T_{2j+1} - T_{2j-1}`,
/// so the series is summed by Clenshaw's recurrence in `M = 2·T_2(A) = 4A² - 2I`:
///
/// ```text
/// y_k = c_k·b + M·y_{k+1} - y_{k+2},     p(A)·b = A·(y_0 - y_1)
/// ```
///
/// For a symmetric `A` with spectrum in `[-1, 1]` each `y_k` is bounded by
/// `Σ_{i≥k} |c_i|·(i - k + 1)·‖b‖`; exceeding that bound means the operator was
/// not normalized.
pub fn clenshaw_matrix_apply<O: LinearOperator + ?Sized>(
    coeffs: &[f64],
    op: &O,
    b: &[f64],
) -> Result<Vec<f64>> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::dims(format!(
            "load vector of length {} for an operator of dimension {n}",
            b.len()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("load vector has non-finite entries"));
    }
    if coeffs.is_empty() {
        return Ok(vec![0.0; n]);
    }

    // bounds[k] = Σ_{i≥k} |c_i| (i - k + 1), accumulated from the top.
    let mut bounds = vec![0.0; coeffs.len() + 1];
    let mut tail_abs = 0.0;
    for k in (0..coeffs.len()).rev() {
        tail_abs += coeffs[k].abs();
        bounds[k] = bounds[k + 1] + tail_abs;
    }
    let b_norm = norm2(b);
    let slack = 1.0 + 1e-6;

    let mut y1 = vec![0.0; n];
    let mut y2 = vec![0.0; n];
    let mut ay = vec![0.0; n];
    let mut aay = vec![0.0; n];
    for k in (0..coeffs.len()).rev() {
        op.apply_into(&y1, &mut ay);
        op.apply_into(&ay, &mut aay);
        let ck = coeffs[k];
        let mut y0 = vec![0.0; n];
        for i in 0..n {
            y0[i] = ck * b[i] + 4.0 * aay[i] - 2.0 * y1[i] - y2[i];
        }
        let yn = norm2(&y0);
        if !yn.is_finite() || yn > slack * bounds[k] * b_norm + f64::MIN_POSITIVE {
            return Err(Error::SpectralRadius { step: k });
        }
        y2 = std::mem::replace(&mut y1, y0);
    }
    // y1 now holds y_0 and y2 holds y_1.
    let diff: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a - b).collect();
    let out = op.apply(&diff);
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    if norm2(&out) > slack * total * b_norm + f64::MIN_POSITIVE {
        return Err(Error::SpectralRadius { step: 0 });
    }
    Ok(out)
}
