//! Entropy functionals, all in bits (base-2 logarithms).
//!
//! Shannon entropy H(p) = -Σ p log₂ p, von Neumann entropy
//! H(ρ) = -tr(ρ log₂ ρ), conditional entropy H(A|B) = H(AB) - H(B), and
//! mutual information I(A:B) = H(A) + H(B) - H(AB).

use crate::error::{Error, Result};
use crate::matrix::DensityMatrix;

/// Cutoff below which an outcome counts as probability zero.
pub const ZERO_PROB: f64 = 1e-14;

/// A discrete probability distribution (sums to 1 within 1e-10).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Validates and stores; negatives within -1e-12 are rounding noise and
    /// get clamped to zero.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -1e-12 || *p > 1.0 + 1e-10 {
                return Err(Error::InvalidProbabilities {
                    reason: format!("entry {p} outside [0, 1]"),
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities {
                reason: format!("sum {sum} is not 1"),
            });
        }
        Ok(Self { probs })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// -p log₂ p with the 0·log 0 := 0 branch.
pub(crate) fn h_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    p.probs.iter().copied().map(h_term).sum()
}

/// Shannon entropy of a clamped eigenvalue list (no distribution check).
pub(crate) fn entropy_of_eigenvalues(ev: &[f64]) -> f64 {
    ev.iter().copied().map(h_term).sum()
}

/// Von Neumann entropy in bits; 0 for pure states.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_eigenvalues(&rho.eigenvalues()?))
}

fn require_bipartite(rho: &DensityMatrix) -> Result<()> {
    if rho.factor_dims().len() != 2 {
        return Err(Error::NotBipartite {
            nfactors: rho.factor_dims().len(),
        });
    }
    Ok(())
}

/// H(AB) - H(ρ_condition_on); negative for entangled inputs.
pub fn conditional_entropy(rho_ab: &DensityMatrix, condition_on: usize) -> Result<f64> {
    require_bipartite(rho_ab)?;
    if condition_on > 1 {
        return Err(Error::InvalidFactorIndices {
            indices: vec![condition_on],
            nfactors: 2,
        });
    }
    let joint = von_neumann_entropy(rho_ab)?;
    let marginal = von_neumann_entropy(&rho_ab.partial_trace(&[condition_on])?)?;
    Ok(joint - marginal)
}

/// I(A:B) = H(A) + H(B) - H(AB), nonnegative.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    require_bipartite(rho_ab)?;
    let h_a = von_neumann_entropy(&rho_ab.partial_trace(&[0])?)?;
    let h_b = von_neumann_entropy(&rho_ab.partial_trace(&[1])?)?;
    let h_ab = von_neumann_entropy(rho_ab)?;
    Ok(h_a + h_b - h_ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c64, StateVector};
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn bell_like() -> DensityMatrix {
        let mut amps = vec![Complex64::ZERO; 16];
        amps[0] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[6] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        StateVector::new(amps, vec![4, 4]).unwrap().to_density()
    }

    #[test]
    fn shannon_entropy_values() {
        let h = shannon_entropy(&ProbDist::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap());
        assert!(close(h, 1.0, 1e-15));
        let h = shannon_entropy(&ProbDist::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(close(h, 0.0, 1e-15));
        // log2(3) - 2/3 for the (2/3, 1/3) split
        let h = shannon_entropy(&ProbDist::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap());
        assert!(close(h, 0.9182958340544896, 1e-14));
    }

    #[test]
    fn prob_dist_rejects_bad_input() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![1.2, -0.2]).is_err());
        assert!(ProbDist::new(vec![f64::NAN, 1.0]).is_err());
        // tiny negative noise is clamped
        let p = ProbDist::new(vec![1.0, -1e-13]).unwrap();
        assert_eq!(p.probabilities()[1], 0.0);
    }

    #[test]
    fn von_neumann_entropy_values() {
        let rho = DensityMatrix::maximally_mixed(&[4]);
        assert!(close(von_neumann_entropy(&rho).unwrap(), 2.0, 1e-12));

        let psi = StateVector::normalized(
            vec![c64(1.0, 0.5), c64(-0.25, 0.3), c64(0.0, 0.0), c64(0.7, 0.0)],
            vec![4],
        )
        .unwrap();
        assert!(close(
            von_neumann_entropy(&psi.to_density()).unwrap(),
            0.0,
            1e-10
        ));

        let rho = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0], vec![4]).unwrap();
        assert!(close(von_neumann_entropy(&rho).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn conditional_entropy_of_product_is_h_a() {
        let a = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0], vec![4]).unwrap();
        let b = DensityMatrix::from_diagonal(&[0.9, 0.1, 0.0, 0.0], vec![4]).unwrap();
        let ab = a.tensor(&b);
        let h = conditional_entropy(&ab, 1).unwrap();
        assert!(close(h, 1.0, 1e-10));
    }

    #[test]
    fn conditional_entropy_of_maximally_entangled_is_minus_one() {
        let h = conditional_entropy(&bell_like(), 1).unwrap();
        assert!(close(h, -1.0, 1e-10));
    }

    #[test]
    fn conditional_entropy_of_classical_quantum_state() {
        // Σ p_j |j><j| ⊗ ρ_j with the joint entropy theorem as oracle
        let p = [0.25, 0.75];
        let rho0 = DensityMatrix::from_diagonal(&[1.0, 0.0], vec![2]).unwrap();
        let rho1 = DensityMatrix::maximally_mixed(&[2]);
        let mut entries = vec![Complex64::ZERO; 16];
        for (j, rho) in [&rho0, &rho1].iter().enumerate() {
            for r in 0..2 {
                for cidx in 0..2 {
                    entries[(j * 2 + r) * 4 + (j * 2 + cidx)] = rho.entry(r, cidx) * p[j];
                }
            }
        }
        let cq = DensityMatrix::new(entries, vec![2, 2]).unwrap();
        let h_b = von_neumann_entropy(&cq.partial_trace(&[1]).unwrap()).unwrap();
        let expect = shannon_entropy(&ProbDist::new(p.to_vec()).unwrap())
            + p[0] * von_neumann_entropy(&rho0).unwrap()
            + p[1] * von_neumann_entropy(&rho1).unwrap()
            - h_b;
        let got = conditional_entropy(&cq, 1).unwrap();
        assert!(close(got, expect, 1e-10));
    }

    #[test]
    fn mutual_information_values() {
        let a = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0], vec![4]).unwrap();
        let b = DensityMatrix::maximally_mixed(&[4]);
        assert!(close(
            mutual_information(&a.tensor(&b)).unwrap(),
            0.0,
            1e-10
        ));
        assert!(close(mutual_information(&bell_like()).unwrap(), 2.0, 1e-10));
    }

    mod properties {
        use super::*;
        use crate::random::{random_density, random_unitary};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn entropy_is_unitarily_invariant(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let rho = random_density(&mut rng, &[4]);
                let u = random_unitary(&mut rng, 4);
                let mut rotated = vec![Complex64::new(0.0, 0.0); 16];
                for i in 0..4 {
                    for j in 0..4 {
                        let mut s = Complex64::new(0.0, 0.0);
                        for k in 0..4 {
                            for l in 0..4 {
                                s += u[i * 4 + k] * rho.entry(k, l) * u[j * 4 + l].conj();
                            }
                        }
                        rotated[i * 4 + j] = s;
                    }
                }
                let rotated = DensityMatrix::new(rotated, vec![4]).unwrap();
                let gap = von_neumann_entropy(&rotated).unwrap() - von_neumann_entropy(&rho).unwrap();
                prop_assert!(gap.abs() < 1e-9);
            }

            #[test]
            fn entropy_is_subadditive(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let rho = random_density(&mut rng, &[4, 4]);
                let h_ab = von_neumann_entropy(&rho).unwrap();
                let h_a = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap()).unwrap();
                let h_b = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap()).unwrap();
                prop_assert!(h_ab <= h_a + h_b + 1e-9);
            }

            #[test]
            fn mutual_information_is_nonnegative(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let rho = random_density(&mut rng, &[4, 4]);
                prop_assert!(mutual_information(&rho).unwrap() >= -1e-9);
            }

            #[test]
            fn conditioning_on_a_product_memory_changes_nothing(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_density(&mut rng, &[4]);
                let b = random_density(&mut rng, &[4]);
                let gap = conditional_entropy(&a.tensor(&b), 1).unwrap()
                    - von_neumann_entropy(&a).unwrap();
                prop_assert!(gap.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn non_bipartite_inputs_are_rejected() {
        let rho = DensityMatrix::maximally_mixed(&[2, 2, 2]);
        assert!(matches!(
            conditional_entropy(&rho, 1),
            Err(Error::NotBipartite { .. })
        ));
        assert!(matches!(
            mutual_information(&rho),
            Err(Error::NotBipartite { .. })
        ));
    }
}
