//! Periodic banded matrices and their O(n) direct solver.
//!
//! A periodic banded matrix of half-width `w` has entries only at columns
//! `(i + k) mod n` for `|k| ≤ w`. Writing it as `A = B + U Vᴴ`, where `B` is
//! an ordinary band matrix and `U Vᴴ` is a rank-`w` term absorbing the two
//! wrap corners, the solve reduces to one band LU plus a `w × w` Woodbury
//! correction:
//!
//! ```text
//! U  = [Γ; 0; C_l]        Vᴴ = [I, 0, Γ⁻¹C_u]        Γ = −diag(A_TT)
//! B  = A − U Vᴴ           (only the two diagonal corner blocks change)
//! A⁻¹y = B⁻¹y − Z (I + Vᴴ Z)⁻¹ Vᴴ B⁻¹y,   Z = B⁻¹U
//! ```
//!
//! `B` is factorized without pivoting; callers guarantee diagonal dominance.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square matrix with entries on the periodic diagonals `−w..=w`.
///
/// When `dim` is small two offsets may reach the same column; their
/// coefficients add.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicBanded {
    dim: usize,
    half_width: usize,
    coeffs: Vec<Complex64>,
}

impl PeriodicBanded {
    /// Panics unless `dim ≥ 2·half_width` and `half_width ≥ 1`.
    pub fn zeros(dim: usize, half_width: usize) -> Self {
        assert!(half_width >= 1 && dim >= 2 * half_width, "dimension too small for band");
        PeriodicBanded {
            dim,
            half_width,
            coeffs: vec![ZERO; dim * (2 * half_width + 1)],
        }
    }

    pub fn identity(dim: usize, half_width: usize) -> Self {
        let mut m = Self::zeros(dim, half_width);
        for i in 0..dim {
            m.add(i, 0, ONE);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    fn slot(&self, row: usize, offset: isize) -> usize {
        let w = self.half_width as isize;
        assert!(offset.abs() <= w, "offset {offset} outside band");
        row * (2 * self.half_width + 1) + (offset + w) as usize
    }

    /// Adds `value` at `(row, (row + offset) mod dim)`.
    pub fn add(&mut self, row: usize, offset: isize, value: Complex64) {
        let s = self.slot(row, offset);
        self.coeffs[s] += value;
    }

    pub fn get(&self, row: usize, offset: isize) -> Complex64 {
        self.coeffs[self.slot(row, offset)]
    }

    fn column(&self, row: usize, offset: isize) -> usize {
        (row as isize + offset).rem_euclid(self.dim as isize) as usize
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let w = self.half_width as isize;
        let stride = 2 * self.half_width + 1;
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.coeffs[i * stride..(i + 1) * stride];
            let mut acc = ZERO;
            if i >= self.half_width && i + self.half_width < self.dim {
                let base = i - self.half_width;
                for (c, xv) in row.iter().zip(&x[base..base + stride]) {
                    acc += c * xv;
                }
            } else {
                for (k, c) in (-w..=w).zip(row) {
                    acc += c * x[self.column(i, k)];
                }
            }
            *yi = acc;
        }
    }

    /// `alpha · self + beta · I`.
    pub fn affine(&self, alpha: Complex64, beta: Complex64) -> PeriodicBanded {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= alpha;
        }
        for i in 0..self.dim {
            out.add(i, 0, beta);
        }
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let n = self.dim;
        let w = self.half_width as isize;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in -w..=w {
                out[i * n + self.column(i, k)] += self.get(i, k);
            }
        }
        out
    }

    /// Largest |A − Aᴴ| entry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let d = self.to_dense();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((d[i * n + j] - d[j * n + i].conj()).norm());
            }
        }
        worst
    }
}

/// Factorization of a [`PeriodicBanded`] matrix for repeated solves.
#[derive(Debug, Clone)]
pub struct PeriodicBandedLu {
    dim: usize,
    w: usize,
    /// Band LU of `B`, unit lower factor implicit; same slot layout as the matrix.
    lu: Vec<Complex64>,
    /// `Γ⁻¹ C_u`, w × w row-major.
    g_cu: Vec<Complex64>,
    /// `Z = B⁻¹U`, column-major (w columns of length dim).
    z: Vec<Complex64>,
    /// `(I + Vᴴ Z)⁻¹`, w × w row-major.
    capacitance_inv: Vec<Complex64>,
}

impl PeriodicBandedLu {
    /// Factorizes `a`. Supports half-widths up to 4.
    pub fn new(a: &PeriodicBanded) -> Result<Self> {
        let n = a.dim;
        let w = a.half_width;
        assert!(w <= 4, "half-width {w} not supported");
        let stride = 2 * w + 1;
        let wi = w as isize;

        // Split A into the in-band part and the two wrap corners.
        let mut lu = vec![ZERO; n * stride];
        let mut cu = vec![ZERO; w * w];
        let mut cl = vec![ZERO; w * w];
        for i in 0..n {
            for k in -wi..=wi {
                let v = a.get(i, k);
                let j = i as isize + k;
                if j < 0 {
                    cu[i * w + (j + n as isize) as usize - (n - w)] += v;
                } else if j >= n as isize {
                    cl[(i - (n - w)) * w + (j as usize - n)] += v;
                } else {
                    lu[i * stride + (k + wi) as usize] += v;
                }
            }
        }

        let gamma: Vec<Complex64> = (0..w).map(|j| -lu[j * stride + w]).collect();
        if gamma.iter().any(|g| g.norm() == 0.0) {
            return Err(Error::numeric(f64::NAN, "zero diagonal in periodic corner block"));
        }
        let mut g_cu = vec![ZERO; w * w];
        for r in 0..w {
            for c in 0..w {
                g_cu[r * w + c] = cu[r * w + c] / gamma[r];
            }
        }

        // B = A − U Vᴴ: TT block −= Γ, BB block −= C_l Γ⁻¹ C_u.
        for j in 0..w {
            lu[j * stride + w] -= gamma[j];
        }
        for r in 0..w {
            for c in 0..w {
                let mut acc = ZERO;
                for k in 0..w {
                    acc += cl[r * w + k] * g_cu[k * w + c];
                }
                let (row, col) = (n - w + r, n - w + c);
                lu[row * stride + (col + w - row)] -= acc;
            }
        }

        band_factor(&mut lu, n, w)?;

        let mut z = vec![ZERO; n * w];
        for j in 0..w {
            let col = &mut z[j * n..(j + 1) * n];
            col[j] = gamma[j];
            for r in 0..w {
                col[n - w + r] += cl[r * w + j];
            }
            band_solve(&lu, n, w, col);
        }

        // Capacitance I + Vᴴ Z.
        let mut cap = vec![ZERO; w * w];
        for r in 0..w {
            for c in 0..w {
                let zc = &z[c * n..(c + 1) * n];
                let mut acc = zc[r];
                for k in 0..w {
                    acc += g_cu[r * w + k] * zc[n - w + k];
                }
                cap[r * w + c] = acc + if r == c { ONE } else { ZERO };
            }
        }
        let capacitance_inv = small_inverse(&cap, w)?;

        Ok(PeriodicBandedLu { dim: n, w, lu, g_cu, z, capacitance_inv })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Solves `A x = rhs` into `out`.
    pub fn solve_into(&self, rhs: &[Complex64], out: &mut [Complex64]) {
        let (n, w) = (self.dim, self.w);
        out.copy_from_slice(rhs);
        band_solve(&self.lu, n, w, out);

        let mut v = [ZERO; 4];
        let mut c = [ZERO; 4];
        for r in 0..w {
            let mut acc = out[r];
            for k in 0..w {
                acc += self.g_cu[r * w + k] * out[n - w + k];
            }
            v[r] = acc;
        }
        for r in 0..w {
            c[r] = (0..w).map(|k| self.capacitance_inv[r * w + k] * v[k]).sum();
        }
        for j in 0..w {
            let zj = &self.z[j * n..(j + 1) * n];
            let cj = c[j];
            for (o, zv) in out.iter_mut().zip(zj) {
                *o -= zv * cj;
            }
        }
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; rhs.len()];
        self.solve_into(rhs, &mut out);
        out
    }
}

fn band_factor(lu: &mut [Complex64], n: usize, w: usize) -> Result<()> {
    let stride = 2 * w + 1;
    let at = |i: usize, j: usize| i * stride + (j + w - i);
    for k in 0..n {
        let piv = lu[at(k, k)];
        if !(piv.norm() > 1e-300) || !piv.re.is_finite() || !piv.im.is_finite() {
            return Err(Error::numeric(f64::NAN, format!("vanishing pivot at row {k}")));
        }
        let last = (k + w).min(n - 1);
        for i in k + 1..=last {
            let l = lu[at(i, k)] / piv;
            lu[at(i, k)] = l;
            for j in k + 1..=last {
                let u = lu[at(k, j)];
                lu[at(i, j)] -= l * u;
            }
        }
    }
    Ok(())
}

fn band_solve(lu: &[Complex64], n: usize, w: usize, x: &mut [Complex64]) {
    let stride = 2 * w + 1;
    for i in 1..n {
        let row = &lu[i * stride..];
        let lo = i.saturating_sub(w);
        let mut acc = x[i];
        for k in lo..i {
            acc -= row[k + w - i] * x[k];
        }
        x[i] = acc;
    }
    for i in (0..n).rev() {
        let row = &lu[i * stride..];
        let hi = (i + w).min(n - 1);
        let mut acc = x[i];
        for j in i + 1..=hi {
            acc -= row[j + w - i] * x[j];
        }
        x[i] = acc / row[w];
    }
}

/// Inverse of a tiny dense matrix by Gauss–Jordan with partial pivoting.
fn small_inverse(a: &[Complex64], w: usize) -> Result<Vec<Complex64>> {
    let mut m = a.to_vec();
    let mut inv = vec![ZERO; w * w];
    for i in 0..w {
        inv[i * w + i] = ONE;
    }
    for col in 0..w {
        let piv = (col..w)
            .max_by(|&x, &y| m[x * w + col].norm().total_cmp(&m[y * w + col].norm()))
            .unwrap_or(col);
        if !(m[piv * w + col].norm() > 1e-300) {
            return Err(Error::numeric(f64::NAN, "singular wrap-correction matrix"));
        }
        for k in 0..w {
            m.swap(col * w + k, piv * w + k);
            inv.swap(col * w + k, piv * w + k);
        }
        let d = m[col * w + col];
        for k in 0..w {
            m[col * w + k] /= d;
            inv[col * w + k] /= d;
        }
        for r in 0..w {
            if r != col {
                let f = m[r * w + col];
                for k in 0..w {
                    let (mc, ic) = (m[col * w + k], inv[col * w + k]);
                    m[r * w + k] -= f * mc;
                    inv[r * w + k] -= f * ic;
                }
            }
        }
    }
    Ok(inv)
}
