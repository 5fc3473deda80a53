//! Dense complex linear algebra for small quantum states.
//!
//! Everything here is sized for a handful of 4-dimensional Dirac modes
//! (dim ≤ 64), so all storage is dense row-major `Vec<Complex64>` and the
//! eigensolver is a cyclic Jacobi iteration, which is exact enough at these
//! sizes and fully deterministic.
//!
//! Composite-index convention: row-major, left factor slowest. The composite
//! index of factor indices (i₀, i₁, …) with dims (d₀, d₁, …) is
//! ((i₀·d₁ + i₁)·d₂ + i₂)…

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Elementwise Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix in [-PSD_CLAMP, 0) are treated as 0;
/// anything below is a hard error.
pub const PSD_CLAMP: f64 = 1e-10;
/// Squared-norm tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;
/// V†V = I tolerance for isometries.
pub const ISOMETRY_TOL: f64 = 1e-12;
/// Hermiticity tolerance accepted by the general spectral routine.
pub const SPECTRUM_HERMITICITY_TOL: f64 = 1e-10;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// raw dense helpers (row-major)
// ---------------------------------------------------------------------------

pub(crate) fn mat_mul(
    n: usize,
    m: usize,
    k: usize,
    a: &[Complex64],
    b: &[Complex64],
) -> Vec<Complex64> {
    debug_assert_eq!(a.len(), n * m);
    debug_assert_eq!(b.len(), m * k);
    let mut out = vec![Complex64::ZERO; n * k];
    for i in 0..n {
        for l in 0..m {
            let ail = a[i * m + l];
            if ail == Complex64::ZERO {
                continue;
            }
            for j in 0..k {
                out[i * k + j] += ail * b[l * k + j];
            }
        }
    }
    out
}

pub(crate) fn adjoint(rows: usize, cols: usize, a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            out[j * rows + i] = a[i * cols + j].conj();
        }
    }
    out
}

pub(crate) fn kron(
    ar: usize,
    ac: usize,
    a: &[Complex64],
    br: usize,
    bc: usize,
    b: &[Complex64],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; ar * br * ac * bc];
    let cols = ac * bc;
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[i * ac + j];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k) * cols + (j * bc + l)] = aij * b[k * bc + l];
                }
            }
        }
    }
    out
}

pub(crate) fn identity(n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        out[i * n + i] = Complex64::ONE;
    }
    out
}

fn hermiticity_defect(dim: usize, m: &[Complex64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in i..dim {
            let d = (m[i * dim + j] - m[j * dim + i].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

fn trace_of(dim: usize, m: &[Complex64]) -> Complex64 {
    (0..dim).map(|i| m[i * dim + i]).sum()
}

/// Builds I_left ⊗ op ⊗ I_right for the factor layout `dims` with `op`
/// replacing factor `target`. `op` is op_rows × op_cols.
pub(crate) fn embed_operator(
    dims: &[usize],
    target: usize,
    op_rows: usize,
    op_cols: usize,
    op: &[Complex64],
) -> Vec<Complex64> {
    let left: usize = dims[..target].iter().product();
    let right: usize = dims[target + 1..].iter().product();
    let with_left = kron(left, left, &identity(left), op_rows, op_cols, op);
    kron(
        left * op_rows,
        left * op_cols,
        &with_left,
        right,
        right,
        &identity(right),
    )
}

/// Partial trace over the complement of `keep` (ascending factor indices)
/// for a square matrix with factor layout `dims`.
pub(crate) fn partial_trace_raw(
    dims: &[usize],
    entries: &[Complex64],
    keep: &[usize],
) -> (Vec<Complex64>, Vec<usize>) {
    let dim: usize = dims.iter().product();
    let kept_dims: Vec<usize> = keep.iter().map(|&f| dims[f]).collect();
    let kept_dim: usize = kept_dims.iter().product();
    let nfactors = dims.len();
    let keep_mask: Vec<bool> = (0..nfactors).map(|f| keep.contains(&f)).collect();

    let split = |mut idx: usize| -> (usize, usize) {
        // returns (kept composite, traced composite) for a full composite index
        let mut parts = vec![0usize; nfactors];
        for f in (0..nfactors).rev() {
            parts[f] = idx % dims[f];
            idx /= dims[f];
        }
        let mut kept = 0usize;
        let mut traced = 0usize;
        for f in 0..nfactors {
            if keep_mask[f] {
                kept = kept * dims[f] + parts[f];
            } else {
                traced = traced * dims[f] + parts[f];
            }
        }
        (kept, traced)
    };

    let mut out = vec![Complex64::ZERO; kept_dim * kept_dim];
    for row in 0..dim {
        let (kr, tr) = split(row);
        for col in 0..dim {
            let (kc, tc) = split(col);
            if tr == tc {
                out[kr * kept_dim + kc] += entries[row * dim + col];
            }
        }
    }
    (out, kept_dims)
}

// ---------------------------------------------------------------------------
// cyclic Jacobi eigensolver for complex Hermitian matrices
// ---------------------------------------------------------------------------

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations. Returns the
/// unsorted diagonal and, if requested, the accumulated unitary (columns are
/// eigenvectors, row-major).
fn jacobi_hermitian(
    dim: usize,
    entries: &[Complex64],
    with_vectors: bool,
) -> (Vec<f64>, Option<Vec<Complex64>>) {
    // work on the exactly Hermitian part so roundoff in the input cannot leak
    let mut a: Vec<Complex64> = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i * dim + j] = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
        }
    }
    let mut v = with_vectors.then(|| identity(dim));

    let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = (1e-15 * fro.max(1e-300)).powi(2);

    for _sweep in 0..100 {
        let off: f64 = (0..dim)
            .flat_map(|p| ((p + 1)..dim).map(move |q| (p, q)))
            .map(|(p, q)| a[p * dim + q].norm_sqr())
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                let beta = apq.norm();
                if beta <= 1e-300 {
                    a[p * dim + q] = Complex64::ZERO;
                    a[q * dim + p] = Complex64::ZERO;
                    continue;
                }
                let phase = apq / beta; // e^{iφ}: apq = β e^{iφ}
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // block unitary U = [[c, s], [-e^{-iφ} s, e^{-iφ} c]];
                // A <- U† A U zeroes the (p,q) element
                let u10 = -phase.conj() * s;
                let u11 = phase.conj() * c;
                for r in 0..dim {
                    let arp = a[r * dim + p];
                    let arq = a[r * dim + q];
                    a[r * dim + p] = arp * c + arq * u10;
                    a[r * dim + q] = arp * s + arq * u11;
                }
                for r in 0..dim {
                    let apr = a[p * dim + r];
                    let aqr = a[q * dim + r];
                    a[p * dim + r] = apr * c + aqr * u10.conj();
                    a[q * dim + r] = apr * s + aqr * u11.conj();
                }
                a[p * dim + q] = Complex64::ZERO;
                a[q * dim + p] = Complex64::ZERO;
                a[p * dim + p] = c64(a[p * dim + p].re, 0.0);
                a[q * dim + q] = c64(a[q * dim + q].re, 0.0);
                if let Some(vm) = v.as_mut() {
                    for r in 0..dim {
                        let vrp = vm[r * dim + p];
                        let vrq = vm[r * dim + q];
                        vm[r * dim + p] = vrp * c + vrq * u10;
                        vm[r * dim + q] = vrp * s + vrq * u11;
                    }
                }
            }
        }
    }

    let diag: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
    (diag, v)
}

/// Spectral decomposition of a Hermitian matrix: descending eigenvalues,
/// paired orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors paired with [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    /// Σ λ_k |v_k⟩⟨v_k| as a row-major matrix.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let dim = self.eigenvectors.first().map_or(0, Vec::len);
        let mut out = vec![Complex64::ZERO; dim * dim];
        for (lam, vec) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..dim {
                for j in 0..dim {
                    out[i * dim + j] += lam * vec[i] * vec[j].conj();
                }
            }
        }
        out
    }
}

/// Fixes the global phase so that the largest-magnitude component is real
/// and positive (first such component wins on ties).
fn phase_fix(vec: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in vec.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let ph = vec[best] / best_mag;
        for z in vec.iter_mut() {
            *z /= ph;
        }
        vec[best] = c64(vec[best].re.abs(), 0.0);
    }
}

fn normalize(vec: &mut [Complex64]) {
    let n = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in vec.iter_mut() {
            *z /= n;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix (row-major `entries`, `dim`×`dim`).
///
/// Eigenvalues come out descending; degenerate clusters are re-orthonormalized
/// by Gram–Schmidt in sorted order and every vector gets the deterministic
/// phase convention, so repeated runs produce identical output.
pub fn hermitian_spectrum(dim: usize, entries: &[Complex64]) -> Result<Spectrum> {
    if entries.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            context: "hermitian_spectrum entries",
            expected: dim * dim,
            got: entries.len(),
        });
    }
    let defect = hermiticity_defect(dim, entries);
    if defect > SPECTRUM_HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }

    let (diag, v) = jacobi_hermitian(dim, entries, true);
    let v = v.expect("vectors requested");

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap().then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| (0..dim).map(|r| v[r * dim + col]).collect())
        .collect();

    // Gram–Schmidt polish inside (near-)degenerate clusters, in sorted order
    let scale = eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let cluster_tol = 1e-9 * scale;
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim && (eigenvalues[end - 1] - eigenvalues[end]).abs() <= cluster_tol {
            end += 1;
        }
        for j in (start + 1)..end {
            for i in start..j {
                let overlap: Complex64 = eigenvectors[i]
                    .iter()
                    .zip(&eigenvectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let prev = eigenvectors[i].clone();
                for (zj, zi) in eigenvectors[j].iter_mut().zip(&prev) {
                    *zj -= overlap * zi;
                }
            }
            normalize(&mut eigenvectors[j]);
        }
        start = end;
    }
    for vec in &mut eigenvectors {
        phase_fix(vec);
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

// ---------------------------------------------------------------------------
// state vector
// ---------------------------------------------------------------------------

/// A pure state: complex amplitudes over the composite basis of its factors.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    factor_dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

fn check_factor_dims(factor_dims: &[usize], len: usize) -> Result<usize> {
    if factor_dims.is_empty() || factor_dims.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "factor dims must be nonempty and positive, got {factor_dims:?}"
        )));
    }
    let dim: usize = factor_dims.iter().product();
    if dim != len {
        return Err(Error::DimensionMismatch {
            context: "factor dims product",
            expected: len,
            got: dim,
        });
    }
    Ok(dim)
}

impl StateVector {
    /// Wraps already-normalized amplitudes; errors if |ψ|² is off by more
    /// than `NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex64>, factor_dims: Vec<usize>) -> Result<Self> {
        check_factor_dims(&factor_dims, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            factor_dims,
            amplitudes,
        })
    }

    /// Normalizing constructor: rescales any nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>, factor_dims: Vec<usize>) -> Result<Self> {
        check_factor_dims(&factor_dims, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq < 1e-280 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let inv = 1.0 / norm_sq.sqrt();
        for z in &mut amplitudes {
            *z *= inv;
        }
        Ok(Self {
            factor_dims,
            amplitudes,
        })
    }

    /// Computational basis state |i₀ i₁ …⟩.
    pub fn basis_state(factor_dims: &[usize], indices: &[usize]) -> Result<Self> {
        if indices.len() != factor_dims.len()
            || indices.iter().zip(factor_dims).any(|(&i, &d)| i >= d)
        {
            return Err(Error::InvalidParameter(format!(
                "basis indices {indices:?} out of range for dims {factor_dims:?}"
            )));
        }
        let dim: usize = factor_dims.iter().product();
        let idx = indices
            .iter()
            .zip(factor_dims)
            .fold(0usize, |acc, (&i, &d)| acc * d + i);
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[idx] = Complex64::ONE;
        Ok(Self {
            factor_dims: factor_dims.to_vec(),
            amplitudes,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Kronecker product; left operand varies slowest.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        Self {
            factor_dims,
            amplitudes,
        }
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            factor_dims: self.factor_dims.clone(),
            dim,
            entries,
        }
    }

    /// Replaces factor `target` by the isometry's output space.
    pub fn apply_isometry(&self, iso: &Isometry, target: usize) -> Result<Self> {
        if target >= self.factor_dims.len() {
            return Err(Error::InvalidFactorIndices {
                indices: vec![target],
                nfactors: self.factor_dims.len(),
            });
        }
        if self.factor_dims[target] != iso.input_dim {
            return Err(Error::DimensionMismatch {
                context: "isometry input vs target factor",
                expected: self.factor_dims[target],
                got: iso.input_dim,
            });
        }
        let op = embed_operator(
            &self.factor_dims,
            target,
            iso.output_dim(),
            iso.input_dim,
            &iso.matrix,
        );
        let out_dim = self.dim() / iso.input_dim * iso.output_dim();
        let mut amplitudes = vec![Complex64::ZERO; out_dim];
        for (i, amp) in amplitudes.iter_mut().enumerate() {
            for (j, x) in self.amplitudes.iter().enumerate() {
                *amp += op[i * self.dim() + j] * x;
            }
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.splice(target..=target, iso.output_dims.iter().copied());
        StateVector::new(amplitudes, factor_dims)
    }
}

// ---------------------------------------------------------------------------
// density matrix
// ---------------------------------------------------------------------------

/// A density matrix with its tensor-factor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    factor_dims: Vec<usize>,
    dim: usize,
    entries: Vec<Complex64>, // row-major dim×dim
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(entries: Vec<Complex64>, factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "factor dims must be nonempty and positive, got {factor_dims:?}"
            )));
        }
        let dim: usize = factor_dims.iter().product();
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "density matrix entries",
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let defect = hermiticity_defect(dim, &entries);
        if !defect.is_finite() || defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = trace_of(dim, &entries);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: tr.re });
        }
        let (diag, _) = jacobi_hermitian(dim, &entries, false);
        let min_eigenvalue = diag.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_CLAMP {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self {
            factor_dims,
            dim,
            entries,
        })
    }

    /// |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    /// I/d on the given factor layout.
    pub fn maximally_mixed(factor_dims: &[usize]) -> Self {
        let dim: usize = factor_dims.iter().product();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c64(1.0 / dim as f64, 0.0);
        }
        Self {
            factor_dims: factor_dims.to_vec(),
            dim,
            entries,
        }
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_diagonal(diag: &[f64], factor_dims: Vec<usize>) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (i, &p) in diag.iter().enumerate() {
            entries[i * dim + i] = c64(p, 0.0);
        }
        Self::new(entries, factor_dims)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        trace_of(self.dim, &self.entries)
    }

    /// Kronecker product; left operand varies slowest.
    pub fn tensor(&self, other: &Self) -> Self {
        let entries = kron(
            self.dim,
            self.dim,
            &self.entries,
            other.dim,
            other.dim,
            &other.entries,
        );
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        Self {
            factor_dims,
            dim: self.dim * other.dim,
            entries,
        }
    }

    /// Reduced state on the kept factors (ascending index order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let nfactors = self.factor_dims.len();
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let valid = !sorted.is_empty()
            && sorted.len() == keep.len()
            && sorted.len() < nfactors
            && sorted.iter().all(|&f| f < nfactors);
        if !valid {
            return Err(Error::InvalidFactorIndices {
                indices: keep.to_vec(),
                nfactors,
            });
        }
        let (entries, kept_dims) = partial_trace_raw(&self.factor_dims, &self.entries, &sorted);
        DensityMatrix::new(entries, kept_dims)
    }

    /// Replaces factor `target` by the isometry's output space; trace is
    /// preserved.
    pub fn apply_isometry(&self, iso: &Isometry, target: usize) -> Result<Self> {
        if target >= self.factor_dims.len() {
            return Err(Error::InvalidFactorIndices {
                indices: vec![target],
                nfactors: self.factor_dims.len(),
            });
        }
        if self.factor_dims[target] != iso.input_dim {
            return Err(Error::DimensionMismatch {
                context: "isometry input vs target factor",
                expected: self.factor_dims[target],
                got: iso.input_dim,
            });
        }
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.splice(target..=target, iso.output_dims.iter().copied());
        let entries = apply_operator_raw(
            &self.factor_dims,
            target,
            iso.output_dim(),
            iso.input_dim,
            &iso.matrix,
            &self.entries,
        );
        DensityMatrix::new(entries, factor_dims)
    }

    /// Clamped spectral decomposition: eigenvalues in [-1e-10, 0) become 0,
    /// anything below is a "not positive semidefinite" error.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut spec = hermitian_spectrum(self.dim, &self.entries)?;
        clamp_density_eigenvalues(&mut spec.eigenvalues)?;
        Ok(spec)
    }

    /// Clamped eigenvalues only (descending), skipping eigenvector work.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (diag, _) = jacobi_hermitian(self.dim, &self.entries, false);
        let mut ev = diag;
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        clamp_density_eigenvalues(&mut ev)?;
        Ok(ev)
    }

    /// Largest elementwise |difference| against another matrix of the same dim.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn clamp_density_eigenvalues(ev: &mut [f64]) -> Result<()> {
    for lam in ev.iter_mut() {
        if *lam < -PSD_CLAMP {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: *lam,
            });
        }
        if *lam < 0.0 {
            *lam = 0.0;
        }
    }
    Ok(())
}

/// M ρ M† with M acting on factor `target` of the layout `dims`.
pub(crate) fn apply_operator_raw(
    dims: &[usize],
    target: usize,
    op_rows: usize,
    op_cols: usize,
    op: &[Complex64],
    rho: &[Complex64],
) -> Vec<Complex64> {
    let dim: usize = dims.iter().product();
    let out_dim = dim / op_cols * op_rows;
    let full = embed_operator(dims, target, op_rows, op_cols, op);
    let tmp = mat_mul(out_dim, dim, dim, &full, rho);
    let full_dag = adjoint(out_dim, dim, &full);
    mat_mul(out_dim, dim, out_dim, &tmp, &full_dag)
}

// ---------------------------------------------------------------------------
// isometry
// ---------------------------------------------------------------------------

/// A V: ℂ^in → ℂ^out with V†V = I, carrying the factor layout of its output.
#[derive(Debug, Clone)]
pub struct Isometry {
    input_dim: usize,
    output_dims: Vec<usize>,
    matrix: Vec<Complex64>, // (prod output_dims) × input_dim, row-major
}

impl Isometry {
    pub fn new(matrix: Vec<Complex64>, output_dims: Vec<usize>, input_dim: usize) -> Result<Self> {
        let out_dim: usize = output_dims.iter().product();
        if matrix.len() != out_dim * input_dim || input_dim == 0 || out_dim < input_dim {
            return Err(Error::DimensionMismatch {
                context: "isometry matrix shape",
                expected: out_dim * input_dim,
                got: matrix.len(),
            });
        }
        let vdag = adjoint(out_dim, input_dim, &matrix);
        let gram = mat_mul(input_dim, out_dim, input_dim, &vdag, &matrix);
        let mut defect = 0.0f64;
        for i in 0..input_dim {
            for j in 0..input_dim {
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                defect = defect.max((gram[i * input_dim + j] - expect).norm());
            }
        }
        if defect > ISOMETRY_TOL {
            return Err(Error::NotIsometry { defect });
        }
        Ok(Self {
            input_dim,
            output_dims,
            matrix,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            input_dim: dim,
            output_dims: vec![dim],
            matrix: identity(dim),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dims(&self) -> &[usize] {
        &self.output_dims
    }

    pub fn output_dim(&self) -> usize {
        self.output_dims.iter().product()
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }
}
