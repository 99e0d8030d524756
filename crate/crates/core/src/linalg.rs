//! Fixed-size dense solves used by the Newton iterations.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Solves `m y = b` for a complex 2x2 system.
pub fn solve2(m: [[C64; 2]; 2], b: [C64; 2]) -> Result<[C64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    if !(det.norm() > 1e-300 && det.norm() > 1e-14 * scale * scale) {
        return Err(Error::Caustic);
    }
    Ok([(m[1][1] * b[0] - m[0][1] * b[1]) / det, (m[0][0] * b[1] - m[1][0] * b[0]) / det])
}

/// Solves `m y = b` for a real 3x3 system by partial pivoting.
pub fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Result<[f64; 3]> {
    let scale = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs())).unwrap();
        if m[piv][col].abs() <= 1e-14 * scale {
            return Err(Error::Caustic);
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..3 {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut y = [0.0; 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for c in r + 1..3 {
            s -= m[r][c] * y[c];
        }
        y[r] = s / m[r][r];
    }
    Ok(y)
}
