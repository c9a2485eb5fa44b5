//! Small dense complex matrices, tensor-product bookkeeping, and the
//! Hermitian eigensolver behind every negativity computation.
//!
//! Spin basis convention used throughout the crate: index 0 = up, 1 = down,
//! two-qubit basis ordered (up-up, up-down, down-up, down-down).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Max entry deviation allowed by [`hermitian_eigenvalues`].
const EIG_HERMITICITY_TOL: f64 = 1e-10;
/// Eigenvalue-sum-vs-trace guarantee of the eigensolver.
#[allow(dead_code)]
const EIG_TRACE_TOL: f64 = 1e-10;
/// Validation tolerances for [`SpinDensity`].
const DENSITY_HERMITICITY_TOL: f64 = 1e-12;
const DENSITY_TRACE_TOL: f64 = 1e-12;
const DENSITY_PSD_FLOOR: f64 = -1e-10;
/// Norm tolerance for [`JointState`].
const STATE_NORM_TOL: f64 = 1e-12;

/// Square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension (must be >= 1).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from explicit rows; all rows must have length equal to the row count.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(dim >= 1, "matrix dimension must be >= 1");
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, z) in row.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Rank-one projector |v><v| (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len());
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sum dimension mismatch");
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(other.data.iter()) {
            *x += *y;
        }
        m
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x *= z;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix comparison dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise |A - A^dagger|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut m = ComplexMatrix::zeros(da * db);
    for ia in 0..da {
        for ja in 0..da {
            let f = a[(ia, ja)];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    m[(ia * db + ib, ja * db + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    m
}

/// Decompose a flat index into a multi-index over `dims` (row-major).
fn multi_index(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
    idx
}

/// Partial trace over all subsystems *not* listed in `keep`.
///
/// `dims` are the subsystem dimensions in tensor order; `keep` lists the
/// indices of the subsystems to retain (ascending order of `keep` defines the
/// tensor order of the result). Trace is preserved.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if rho.dim() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix dimension {} != product of subsystem dims {}",
            rho.dim(),
            total
        )));
    }
    if keep.is_empty() {
        return Err(Error::DimensionMismatch(
            "partial trace must keep at least one subsystem".into(),
        ));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || *keep_sorted.last().unwrap() >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "invalid keep list {keep:?} for {} subsystems",
            dims.len()
        )));
    }

    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(out_dim);

    // O(total^2) sweep: fold every entry whose traced-out indices agree on
    // the row and column sides. Matrix dimensions here stay <= ~1024.
    for r in 0..total {
        let ri = multi_index(r, dims);
        for c in 0..total {
            let ci = multi_index(c, dims);
            let mut traced_match = true;
            for k in 0..dims.len() {
                if !keep_sorted.contains(&k) && ri[k] != ci[k] {
                    traced_match = false;
                    break;
                }
            }
            if !traced_match {
                continue;
            }
            let mut ro = 0usize;
            let mut co = 0usize;
            for &k in &keep_sorted {
                ro = ro * dims[k] + ri[k];
                co = co * dims[k] + ci[k];
            }
            out[(ro, co)] += rho[(r, c)];
        }
    }
    Ok(out)
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Transpose one tensor factor of a bipartite matrix with dimensions
/// `dims = (d_a, d_b)`. Applying it twice restores the input exactly.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: (usize, usize),
    on: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if rho.dim() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "matrix dimension {} != {}x{}",
            rho.dim(),
            da,
            db
        )));
    }
    let mut out = ComplexMatrix::zeros(da * db);
    for a in 0..da {
        for b in 0..db {
            for ap in 0..da {
                for bp in 0..db {
                    let (r, c) = (a * db + b, ap * db + bp);
                    let (sr, sc) = match on {
                        Subsystem::A => (ap * db + b, a * db + bp),
                        Subsystem::B => (a * db + bp, ap * db + b),
                    };
                    out[(r, c)] = rho[(sr, sc)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi iteration with complex rotations; converges when the
/// off-diagonal Frobenius mass falls below 1e-14 relative to the matrix
/// norm. Matrices here are tiny (<= ~64), so no pivot ordering is needed.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let dev = h.hermiticity_deviation();
    if dev > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: EIG_HERMITICITY_TOL,
        });
    }
    let n = h.dim();
    let mut a = h.clone();
    // Symmetrize: exact Hermiticity keeps the update formulas stable.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }

    let scale = a.frobenius_norm().max(1.0);
    let target = 1e-14 * scale;
    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    // Rotations smaller than this cannot matter for the target.
    let skip = target / ((n * n) as f64 + 1.0);
    let mut sweeps = 0usize;
    while off_norm(&a) > target {
        sweeps += 1;
        if sweeps > 500 {
            return Err(Error::InvalidParameter(format!(
                "Jacobi eigensolver failed to converge: off-diagonal norm {:.3e}",
                off_norm(&a)
            )));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[(p, q)];
                let abs_z = z.norm();
                if abs_z <= skip {
                    continue;
                }
                let phase = z / abs_z; // e^{i phi} of the pivot entry
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let theta = (beta - alpha) / (2.0 * abs_z);
                // Smaller-angle root of t^2 + 2 theta t - 1 = 0.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * phase.conj() * s;
                    a[(k, q)] = akp * phase * s + akq * c;
                    a[(p, k)] = a[(k, p)].conj();
                    a[(q, k)] = a[(k, q)].conj();
                }
                let shift = 2.0 * c * s * abs_z;
                a[(p, p)] = Complex64::new(c * c * alpha + s * s * beta - shift, 0.0);
                a[(q, q)] = Complex64::new(s * s * alpha + c * c * beta + shift, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigs)
}

/// Validated 4x4 two-spin density matrix, basis (up-up, up-down, down-up,
/// down-down) with particle A's spin as the leading factor.
#[derive(Debug, Clone)]
pub struct SpinDensity {
    mat: ComplexMatrix,
}

impl SpinDensity {
    /// Validates Hermiticity (1e-12 max entry), unit trace (1e-12), and
    /// positive semidefiniteness up to a -1e-10 floor for quadrature noise.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "spin density must be 4x4, got {}x{}",
                mat.dim(),
                mat.dim()
            )));
        }
        let dev = mat.hermiticity_deviation();
        if dev > DENSITY_HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: DENSITY_HERMITICITY_TOL,
            });
        }
        let tr = mat.trace();
        let tr_dev = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_dev > DENSITY_TRACE_TOL {
            return Err(Error::TraceNotOne { deviation: tr_dev });
        }
        let eigs = hermitian_eigenvalues(&mat)?;
        if eigs[0] < DENSITY_PSD_FLOOR {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: eigs[0],
            });
        }
        Ok(SpinDensity { mat })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Pure two-particle state over (momentum x spin) x (momentum x spin).
///
/// Amplitudes are indexed (p_a, s_a, p_b, s_b) row-major with spin index
/// 0 = up, 1 = down; length is 4 * n_a * n_b.
#[derive(Debug, Clone)]
pub struct JointState {
    n_a: usize,
    n_b: usize,
    amps: Vec<Complex64>,
}

impl JointState {
    /// Accepts amplitudes already normalized to 1e-12.
    pub fn new(n_a: usize, n_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n_a == 0 || n_b == 0 || amps.len() != 4 * n_a * n_b {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector length {} != 4*{}*{}",
                amps.len(),
                n_a,
                n_b
            )));
        }
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        let dev = (norm2.sqrt() - 1.0).abs();
        if dev > STATE_NORM_TOL {
            return Err(Error::NormNotOne { deviation: dev });
        }
        Ok(JointState { n_a, n_b, amps })
    }

    /// Renormalizes, then validates. Zero vectors are rejected.
    pub fn from_unnormalized(n_a: usize, n_b: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero state vector".into(),
            ));
        }
        let inv = 1.0 / norm2.sqrt();
        for z in amps.iter_mut() {
            *z *= inv;
        }
        Self::new(n_a, n_b, amps)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, p_a: usize, s_a: usize, p_b: usize, s_b: usize) -> Complex64 {
        self.amps[((p_a * 2 + s_a) * self.n_b + p_b) * 2 + s_b]
    }

    /// Full pure-state density matrix |psi><psi|.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps)
    }
}

/// Entanglement negativity N = max{0, -2 lambda_min} of the partial
/// transpose. Zero for separable states, one for a maximally entangled
/// two-qubit state. The PT side is irrelevant to the spectrum; B is used.
pub fn negativity(rho: &SpinDensity) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), (2, 2), Subsystem::B)?;
    let eigs = hermitian_eigenvalues(&pt)?;
    Ok((-2.0 * eigs[0]).max(0.0))
}
