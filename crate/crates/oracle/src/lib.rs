//! Reference implementations for the test suites.
//!
//! Everything here is written as directly as possible from the governing
//! equations: full 3x3(x3x3) tensors, explicit index loops, the Levi-Civita
//! symbol as a function, and no shared code with the `glmclean` kernels. Speed
//! is irrelevant. Flat state vectors use the documented storage order, decoded
//! here independently.

pub mod ccz4;
pub mod curvature;
pub mod dual;
pub mod sample;
pub mod toy;

pub type M3 = [[f64; 3]; 3];
pub type T3 = [[[f64; 3]; 3]; 3];
pub type T4 = [[[[f64; 3]; 3]; 3]; 3];

pub fn eps(i: usize, j: usize, k: usize) -> f64 {
    // sign of the permutation (i, j, k) of (0, 1, 2)
    if i == j || j == k || i == k {
        return 0.0;
    }
    let inversions = (i > j) as i32 + (i > k) as i32 + (j > k) as i32;
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Packed slot of a symmetric pair in the order 11, 12, 13, 22, 23, 33.
pub fn sym_slot(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    // rows start at 0, 3, 5
    let row_start = [0, 3, 5][a];
    row_start + (b - a)
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse(m: &M3) -> M3 {
    let mut a = [[0.0; 6]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = m[i][j];
        }
        a[i][3 + i] = 1.0;
    }
    for col in 0..3 {
        let mut piv = col;
        for r in col + 1..3 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        let d = a[col][col];
        for x in a[col].iter_mut() {
            *x /= d;
        }
        for r in 0..3 {
            if r != col {
                let f = a[r][col];
                for c in 0..6 {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = a[i][3 + j];
        }
    }
    inv
}

pub fn det(m: &M3) -> f64 {
    // cofactor expansion along every row, averaged: plain Leibniz formula
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                s += eps(i, j, k) * m[0][i] * m[1][j] * m[2][k];
            }
        }
    }
    s
}

/// Largest absolute difference between two vectors, scaled by `1 + max|b|`.
pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_civita() {
        assert_eq!(eps(0, 1, 2), 1.0);
        assert_eq!(eps(1, 2, 0), 1.0);
        assert_eq!(eps(2, 1, 0), -1.0);
        assert_eq!(eps(0, 0, 2), 0.0);
    }

    #[test]
    fn slots() {
        let expect = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sym_slot(i, j), expect[i][j]);
            }
        }
    }

    #[test]
    fn gauss_jordan() {
        let m = [[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]];
        let inv = inverse(&m);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m[i][k] * inv[k][j];
                }
                assert!((s - delta(i, j)).abs() < 1e-14);
            }
        }
    }
}
