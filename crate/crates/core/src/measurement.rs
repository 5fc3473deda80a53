//! Observables, projective measurements, post-measurement ensembles and the
//! Holevo quantity.
//!
//! Measuring factor A of ρ_AB in the basis {|u_j⟩} leaves the memory in
//! ρ_{B|u_j} = ⟨u_j|ρ_AB|u_j⟩ / p_j with p_j = tr⟨u_j|ρ_AB|u_j⟩, and the
//! accessible information is bounded by the Holevo quantity
//! J(B|M) = H(B) - Σ_j p_j H(ρ_{B|u_j}).

use num_complex::Complex64;

use crate::entropy::{self, shannon_entropy, von_neumann_entropy, ProbDist};
use crate::error::{Error, Result};
use crate::matrix::{c64, hermitian_spectrum, DensityMatrix};

/// A named Hermitian observable.
#[derive(Debug, Clone)]
pub struct Observable {
    name: String,
    dim: usize,
    matrix: Vec<Complex64>,
}

impl Observable {
    /// Validates Hermiticity within 1e-12 elementwise.
    pub fn new(name: impl Into<String>, matrix: Vec<Complex64>, dim: usize) -> Result<Self> {
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "observable matrix",
                expected: dim * dim,
                got: matrix.len(),
            });
        }
        let mut defect = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                defect = defect.max((matrix[i * dim + j] - matrix[j * dim + i].conj()).norm());
            }
        }
        if defect > 1e-12 {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self {
            name: name.into(),
            dim,
            matrix,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim + col]
    }
}

/// The three spin-3/2 component observables on a 4-dim Dirac mode.
#[rustfmt::skip]
pub fn spin_observables() -> (Observable, Observable, Observable) {
    let h = 3.0f64.sqrt() / 2.0;
    let z = Complex64::ZERO;

    let sx = vec![
        z,            c64(h, 0.0),   z,             z,
        c64(h, 0.0),  z,             c64(1.0, 0.0), z,
        z,            c64(1.0, 0.0), z,             c64(h, 0.0),
        z,            z,             c64(h, 0.0),   z,
    ];
    let sy = vec![
        z,            c64(0.0, -h),  z,              z,
        c64(0.0, h),  z,             c64(0.0, -1.0), z,
        z,            c64(0.0, 1.0), z,              c64(0.0, -h),
        z,            z,             c64(0.0, h),    z,
    ];
    let sz = vec![
        c64(1.5, 0.0), z,             z,              z,
        z,             c64(0.5, 0.0), z,              z,
        z,             z,             c64(-0.5, 0.0), z,
        z,             z,             z,              c64(-1.5, 0.0),
    ];

    (
        Observable::new("x", sx, 4).expect("sx is Hermitian"),
        Observable::new("y", sy, 4).expect("sy is Hermitian"),
        Observable::new("z", sz, 4).expect("sz is Hermitian"),
    )
}

/// A complete orthonormal measurement basis.
#[derive(Debug, Clone)]
pub struct ProjectiveBasis {
    vectors: Vec<Vec<Complex64>>,
    source: String,
}

impl ProjectiveBasis {
    /// Validates completeness (d vectors in dim d) and pairwise
    /// orthonormality within 1e-10.
    pub fn from_vectors(vectors: Vec<Vec<Complex64>>, source: impl Into<String>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                context: "projective basis vectors",
                expected: dim,
                got: vectors.first().map_or(0, Vec::len),
            });
        }
        for i in 0..dim {
            for j in i..dim {
                let ip: Complex64 = vectors[i]
                    .iter()
                    .zip(&vectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                if (ip - expect).norm() > 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "basis vectors {i},{j} not orthonormal: <i|j> = {ip}"
                    )));
                }
            }
        }
        Ok(Self {
            vectors,
            source: source.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &[Complex64] {
        &self.vectors[j]
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Eigenbasis of an observable, ordered by descending eigenvalue.
pub fn eigenbasis(obs: &Observable) -> Result<ProjectiveBasis> {
    let spec = hermitian_spectrum(obs.dim, &obs.matrix)?;
    ProjectiveBasis::from_vectors(spec.eigenvectors().to_vec(), obs.name.clone())
}

/// The table c_jk = |⟨u_j|v_k⟩|² and its maximum c₁.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    c: Vec<Vec<f64>>,
    c1: f64,
}

impl OverlapTable {
    pub fn c(&self) -> &[Vec<f64>] {
        &self.c
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }
}

/// Overlap table between two bases of equal dimension. The matrix is doubly
/// stochastic for complete orthonormal bases; that is checked on the way out.
pub fn overlap_table(b1: &ProjectiveBasis, b2: &ProjectiveBasis) -> Result<OverlapTable> {
    let dim = b1.dim();
    if b2.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "overlap table bases",
            expected: dim,
            got: b2.dim(),
        });
    }
    let mut c = vec![vec![0.0f64; dim]; dim];
    let mut c1 = 0.0f64;
    for (j, u) in b1.vectors.iter().enumerate() {
        for (k, v) in b2.vectors.iter().enumerate() {
            let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let val = ip.norm_sqr();
            c[j][k] = val;
            c1 = c1.max(val);
        }
    }
    for j in 0..dim {
        let row: f64 = c[j].iter().sum();
        let col: f64 = c.iter().map(|r| r[j]).sum();
        if (row - 1.0).abs() > 1e-10 || (col - 1.0).abs() > 1e-10 {
            return Err(Error::InternalConsistency(format!(
                "overlap table not doubly stochastic: row/col {j} sums {row}, {col}"
            )));
        }
    }
    Ok(OverlapTable { c, c1 })
}

/// Outcome probabilities and conditional memory states of a projective
/// measurement; zero-probability outcomes carry `None`.
#[derive(Debug, Clone)]
pub struct MeasuredEnsemble {
    outcome_probs: ProbDist,
    conditional_states: Vec<Option<DensityMatrix>>,
}

impl MeasuredEnsemble {
    pub fn outcome_probs(&self) -> &ProbDist {
        &self.outcome_probs
    }

    pub fn conditional_states(&self) -> &[Option<DensityMatrix>] {
        &self.conditional_states
    }

    /// Average conditional entropy Σ_j p_j H(ρ_{B|u_j}) in bits.
    pub fn average_conditional_entropy(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (p, cond) in self
            .outcome_probs
            .probabilities()
            .iter()
            .zip(&self.conditional_states)
        {
            if let Some(rho) = cond {
                acc += p * von_neumann_entropy(rho)?;
            }
        }
        Ok(acc)
    }
}

/// Measures factor `measured` of `rho` in `basis`; the conditional states
/// live on the remaining factors.
pub fn measure_ensemble(
    rho: &DensityMatrix,
    basis: &ProjectiveBasis,
    measured: usize,
) -> Result<MeasuredEnsemble> {
    let dims = rho.factor_dims();
    if measured >= dims.len() {
        return Err(Error::InvalidFactorIndices {
            indices: vec![measured],
            nfactors: dims.len(),
        });
    }
    if dims.len() < 2 {
        return Err(Error::NotBipartite {
            nfactors: dims.len(),
        });
    }
    let d_t = dims[measured];
    if basis.dim() != d_t {
        return Err(Error::DimensionMismatch {
            context: "measurement basis vs factor",
            expected: d_t,
            got: basis.dim(),
        });
    }
    let left: usize = dims[..measured].iter().product();
    let right: usize = dims[measured + 1..].iter().product();
    let other_dim = left * right;
    let dim = rho.dim();
    let mut rest_dims: Vec<usize> = dims.to_vec();
    rest_dims.remove(measured);

    let full_index = |other: usize, a: usize| -> usize {
        let l = other / right;
        let x = other % right;
        (l * d_t + a) * right + x
    };

    let mut probs = Vec::with_capacity(d_t);
    let mut conds: Vec<Option<DensityMatrix>> = Vec::with_capacity(d_t);
    for u in &basis.vectors {
        let mut bop = vec![Complex64::ZERO; other_dim * other_dim];
        for m in 0..other_dim {
            for n in 0..other_dim {
                let mut s = Complex64::ZERO;
                for (a, ua) in u.iter().enumerate() {
                    let row = full_index(m, a);
                    for (b, ub) in u.iter().enumerate() {
                        let col = full_index(n, b);
                        s += ua.conj() * rho.entries()[row * dim + col] * ub;
                    }
                }
                bop[m * other_dim + n] = s;
            }
        }
        let p: f64 = (0..other_dim).map(|i| bop[i * other_dim + i].re).sum();
        if p < entropy::ZERO_PROB {
            probs.push(p.max(0.0));
            conds.push(None);
            continue;
        }
        for z in bop.iter_mut() {
            *z /= p;
        }
        probs.push(p);
        conds.push(Some(DensityMatrix::new(bop, rest_dims.clone())?));
    }

    let outcome_probs = ProbDist::new(probs)?;

    // Σ_j p_j ρ_{B|u_j} must reproduce the memory marginal
    let keep: Vec<usize> = (0..dims.len()).filter(|&f| f != measured).collect();
    let rho_b = rho.partial_trace(&keep)?;
    let mut mix = vec![Complex64::ZERO; other_dim * other_dim];
    for (p, cond) in outcome_probs.probabilities().iter().zip(&conds) {
        if let Some(c) = cond {
            for (acc, e) in mix.iter_mut().zip(c.entries()) {
                *acc += e * p;
            }
        }
    }
    let worst = mix
        .iter()
        .zip(rho_b.entries())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    if worst > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "measured ensemble does not average to the marginal (defect {worst:.3e})"
        )));
    }

    Ok(MeasuredEnsemble {
        outcome_probs,
        conditional_states: conds,
    })
}

/// Block-diagonal classical-quantum state Σ_j p_j |u_j⟩⟨u_j| ⊗ ρ_{B|u_j}.
pub fn classical_quantum_state(
    ens: &MeasuredEnsemble,
    basis: &ProjectiveBasis,
) -> Result<DensityMatrix> {
    let d_m = basis.dim();
    if ens.conditional_states.len() != d_m {
        return Err(Error::DimensionMismatch {
            context: "ensemble outcomes vs basis",
            expected: d_m,
            got: ens.conditional_states.len(),
        });
    }
    let first = ens
        .conditional_states
        .iter()
        .flatten()
        .next()
        .ok_or_else(|| Error::InvalidParameter("ensemble has no nonzero outcome".into()))?;
    let d_b = first.dim();
    let b_dims = first.factor_dims().to_vec();
    let dim = d_m * d_b;
    let mut entries = vec![Complex64::ZERO; dim * dim];
    for ((p, cond), u) in ens
        .outcome_probs
        .probabilities()
        .iter()
        .zip(&ens.conditional_states)
        .zip(&basis.vectors)
    {
        let Some(rho_j) = cond else { continue };
        for a in 0..d_m {
            for b in 0..d_m {
                let proj = u[a] * u[b].conj() * p;
                if proj == Complex64::ZERO {
                    continue;
                }
                for m in 0..d_b {
                    for n in 0..d_b {
                        entries[(a * d_b + m) * dim + (b * d_b + n)] += proj * rho_j.entry(m, n);
                    }
                }
            }
        }
    }
    let mut factor_dims = vec![d_m];
    factor_dims.extend_from_slice(&b_dims);
    DensityMatrix::new(entries, factor_dims)
}

/// Holevo quantity J(B|M) = H(B) - Σ_j p_j H(ρ_{B|u_j}) in bits.
pub fn holevo_quantity(
    rho: &DensityMatrix,
    basis: &ProjectiveBasis,
    measured: usize,
) -> Result<f64> {
    let ens = measure_ensemble(rho, basis, measured)?;
    let keep: Vec<usize> = (0..rho.factor_dims().len())
        .filter(|&f| f != measured)
        .collect();
    let h_b = von_neumann_entropy(&rho.partial_trace(&keep)?)?;
    Ok(h_b - ens.average_conditional_entropy()?)
}

/// Shannon entropy of the outcome distribution of `basis` on a single-system
/// state: H(M) of {⟨u_j|ρ|u_j⟩}.
pub fn outcome_entropy(rho_a: &DensityMatrix, basis: &ProjectiveBasis) -> Result<f64> {
    if rho_a.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            context: "outcome entropy basis vs state",
            expected: rho_a.dim(),
            got: basis.dim(),
        });
    }
    let dim = rho_a.dim();
    let mut probs = Vec::with_capacity(dim);
    for u in &basis.vectors {
        let mut p = Complex64::ZERO;
        for (a, ua) in u.iter().enumerate() {
            for (b, ub) in u.iter().enumerate() {
                p += ua.conj() * rho_a.entries()[a * dim + b] * ub;
            }
        }
        probs.push(p.re);
    }
    Ok(shannon_entropy(&ProbDist::new(probs)?))
}
