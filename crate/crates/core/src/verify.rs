//! Seeded, deterministic invariant suites.
//!
//! Each suite exercises one family of invariants and reports pass counts,
//! failures (with serialized inputs for replay) and informational notes.
//! Given the same seed, trials and tolerance the output is identical from
//! run to run.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{lhs_uncertainty, u1_bound, u2_bound};
use crate::entropy::{
    conditional_entropy, mutual_information, shannon_entropy, von_neumann_entropy,
};
use crate::horizon::{
    mode_isometry, state_bell_like, state_w_traced, transform_memory, DiracState, HorizonParams,
};
use crate::matrix::{hermitian_spectrum, DensityMatrix, StateVector};
use crate::measurement::{
    classical_quantum_state, eigenbasis, holevo_quantity, measure_ensemble, overlap_table,
    spin_observables,
};
use crate::random::{random_basis, random_density, random_hermitian, random_isometry, random_pure};

/// Configuration for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    /// Adds a deliberately invalid state to exercise the failure path.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 100,
            tolerance: 1e-9,
            inject_fault: false,
        }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }
}

fn rng_for(cfg: &VerifyConfig, suite_index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(suite_index.wrapping_mul(0x9e37_79b9)))
}

fn serialize_matrix(dim: usize, entries: &[Complex64]) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| [entries[i * dim + j].re, entries[i * dim + j].im])
                .collect()
        })
        .collect();
    serde_json::json!({ "dim": dim, "entries": rows }).to_string()
}

fn grid_r0(points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| 1.001 + (1.05 - 1.001) * k as f64 / (points - 1) as f64)
        .collect()
}

/// Runs every suite and returns the reports in a fixed order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    let tol = cfg.tolerance;
    let trials = cfg.trials.max(1);
    let mut suites = Vec::new();

    let (sx, sy, sz) = spin_observables();
    let bx = eigenbasis(&sx).expect("sx eigenbasis");
    let by = eigenbasis(&sy).expect("sy eigenbasis");
    let bz = eigenbasis(&sz).expect("sz eigenbasis");

    // --- spectral kernel ---
    {
        let mut s = SuiteReport::new("spectrum-reconstruction");
        let mut rng = rng_for(cfg, 1);
        for t in 0..trials {
            let dim = if t % 2 == 0 { 4 } else { 16 };
            let m = random_hermitian(&mut rng, dim);
            let spec = hermitian_spectrum(dim, &m).expect("random Hermitian");
            let rec = spec.reconstruct();
            let defect = rec
                .iter()
                .zip(&m)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            let mut ortho = 0.0f64;
            for (i, vi) in spec.eigenvectors().iter().enumerate() {
                for (j, vj) in spec.eigenvectors().iter().enumerate() {
                    let ip: Complex64 = vi.iter().zip(vj).map(|(a, b)| a.conj() * b).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((ip - Complex64::new(expect, 0.0)).norm());
                }
            }
            s.check(defect < 1e-10 && ortho < 1e-10, || {
                format!(
                    "{{\"case\":{t},\"reconstruction_defect\":{defect:e},\"orthonormality_defect\":{ortho:e},\"input\":{}}}",
                    serialize_matrix(dim, &m)
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("tensor-partial-trace");
        let mut rng = rng_for(cfg, 2);
        for t in 0..trials {
            let a = random_density(&mut rng, &[4]);
            let b = random_density(&mut rng, &[4]);
            let red = a.tensor(&b).partial_trace(&[0]).expect("keep left");
            let defect = red.max_abs_diff(&a);
            s.check(defect < 1e-12, || {
                format!(
                    "{{\"case\":{t},\"defect\":{defect:e},\"left\":{}}}",
                    serialize_matrix(4, a.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("isometry-trace-preservation");
        let mut rng = rng_for(cfg, 3);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4]);
            let iso = random_isometry(&mut rng, 4, &[4, 4]);
            let out = rho.apply_isometry(&iso, 0).expect("apply isometry");
            let defect = (out.trace().re - 1.0).abs();
            s.check(defect < 1e-12, || {
                format!(
                    "{{\"case\":{t},\"trace_defect\":{defect:e},\"input\":{}}}",
                    serialize_matrix(4, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("tensor-associativity");
        let mut rng = rng_for(cfg, 4);
        for t in 0..trials.min(50) {
            let a = random_density(&mut rng, &[2]);
            let b = random_density(&mut rng, &[2]);
            let c = random_density(&mut rng, &[2]);
            let left = a.tensor(&b).tensor(&c);
            let right = a.tensor(&b.tensor(&c));
            let defect = left.max_abs_diff(&right);
            s.check(defect < 1e-14, || {
                format!("{{\"case\":{t},\"defect\":{defect:e}}}")
            });
        }
        suites.push(s);
    }

    // --- entropies ---
    {
        let mut s = SuiteReport::new("entropy-unitary-invariance");
        let mut rng = rng_for(cfg, 5);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4]);
            let u = crate::random::random_unitary(&mut rng, 4);
            let mut rotated = vec![Complex64::new(0.0, 0.0); 16];
            for i in 0..4 {
                for j in 0..4 {
                    let mut sum = Complex64::new(0.0, 0.0);
                    for k in 0..4 {
                        for l in 0..4 {
                            sum += u[i * 4 + k] * rho.entry(k, l) * u[j * 4 + l].conj();
                        }
                    }
                    rotated[i * 4 + j] = sum;
                }
            }
            let rotated = DensityMatrix::new(rotated, vec![4]).expect("unitary conjugate");
            let gap =
                (von_neumann_entropy(&rotated).unwrap() - von_neumann_entropy(&rho).unwrap()).abs();
            s.check(gap < tol, || {
                format!(
                    "{{\"case\":{t},\"gap\":{gap:e},\"input\":{}}}",
                    serialize_matrix(4, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("entropy-subadditivity");
        let mut rng = rng_for(cfg, 6);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let h_ab = von_neumann_entropy(&rho).unwrap();
            let h_a = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap()).unwrap();
            let h_b = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap()).unwrap();
            s.check(h_ab <= h_a + h_b + tol, || {
                format!(
                    "{{\"case\":{t},\"h_ab\":{h_ab},\"h_a\":{h_a},\"h_b\":{h_b},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("mutual-information-nonnegative");
        let mut rng = rng_for(cfg, 7);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let mi = mutual_information(&rho).unwrap();
            s.check(mi >= -tol, || {
                format!(
                    "{{\"case\":{t},\"mutual_info\":{mi},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("conditional-entropy-product");
        let mut rng = rng_for(cfg, 8);
        for t in 0..trials {
            let a = random_density(&mut rng, &[4]);
            let b = random_density(&mut rng, &[4]);
            let gap = (conditional_entropy(&a.tensor(&b), 1).unwrap()
                - von_neumann_entropy(&a).unwrap())
            .abs();
            s.check(gap < tol, || format!("{{\"case\":{t},\"gap\":{gap:e}}}"));
        }
        suites.push(s);
    }

    // --- measurements ---
    {
        let mut s = SuiteReport::new("information-identity");
        let mut rng = rng_for(cfg, 9);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let mut decrease = 0.0;
            let mut increase = 0.0;
            for basis in [&bx, &by] {
                let ens = measure_ensemble(&rho, basis, 0).unwrap();
                let cq = classical_quantum_state(&ens, basis).unwrap();
                decrease +=
                    shannon_entropy(ens.outcome_probs()) - conditional_entropy(&cq, 1).unwrap();
                increase += holevo_quantity(&rho, basis, 0).unwrap();
            }
            let gap = (decrease - increase).abs();
            s.check(gap < tol, || {
                format!(
                    "{{\"case\":{t},\"gap\":{gap:e},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("holevo-bounds");
        let mut rng = rng_for(cfg, 10);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let basis = random_basis(&mut rng, 4, "random");
            let j = holevo_quantity(&rho, &basis, 0).unwrap();
            let h_b = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap()).unwrap();
            let mi = mutual_information(&rho).unwrap();
            s.check(j >= -tol && j <= h_b + tol && j <= mi + tol, || {
                format!(
                    "{{\"case\":{t},\"holevo\":{j},\"h_b\":{h_b},\"mutual_info\":{mi},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("measurement-route-equality");
        let mut rng = rng_for(cfg, 11);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let basis = random_basis(&mut rng, 4, "random");
            let ens = measure_ensemble(&rho, &basis, 0).unwrap();
            let cq = classical_quantum_state(&ens, &basis).unwrap();
            let channel = conditional_entropy(&cq, 1).unwrap();
            let identity =
                shannon_entropy(ens.outcome_probs()) - holevo_quantity(&rho, &basis, 0).unwrap();
            let gap = (channel - identity).abs();
            s.check(gap < tol, || {
                format!(
                    "{{\"case\":{t},\"gap\":{gap:e},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("overlap-double-stochastic");
        for (name, a, b) in [("xy", &bx, &by), ("xz", &bx, &bz), ("yz", &by, &bz)] {
            // overlap_table re-checks double stochasticity internally
            let t = overlap_table(a, b);
            s.check(t.is_ok(), || format!("{{\"pair\":\"{name}\"}}"));
            if let Ok(t) = t {
                let gap = (t.c1() - 0.375).abs();
                s.check(gap < 1e-10, || {
                    format!("{{\"pair\":\"{name}\",\"c1\":{}}}", t.c1())
                });
            }
        }
        suites.push(s);
    }

    // --- horizon map ---
    {
        let mut s = SuiteReport::new("dilation-monotonic");
        for &r0 in &[1.005, 1.01, 1.02, 1.05] {
            let mut prev = f64::INFINITY;
            for k in 0..20 {
                let omega = 1.0 + 3.0 * k as f64;
                let q = HorizonParams::new(omega, r0).unwrap().dilation_angle();
                s.check(q < prev, || {
                    format!("{{\"omega\":{omega},\"r0\":{r0},\"q\":{q},\"prev\":{prev}}}")
                });
                prev = q;
            }
        }
        for &omega in &[5.0, 10.0, 30.0] {
            let mut prev = f64::INFINITY;
            for k in 0..20 {
                let r0 = 1.0 + 0.05 * k as f64 / 19.0;
                let q = HorizonParams::new(omega, r0).unwrap().dilation_angle();
                s.check(q <= prev, || {
                    format!("{{\"omega\":{omega},\"r0\":{r0},\"q\":{q},\"prev\":{prev}}}")
                });
                prev = q;
            }
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("bogoliubov-isometry");
        for k in 0..50 {
            let q = std::f64::consts::FRAC_PI_4 * k as f64 / 49.0;
            let defect = mode_isometry(q).unwrap().isometry_defect();
            s.check(defect < 1e-12, || {
                format!("{{\"q\":{q},\"defect\":{defect:e}}}")
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("memory-locality");
        let mut rng = rng_for(cfg, 12);
        for t in 0..trials {
            let raw = random_pure(&mut rng, &[4, 4]);
            let mut amps = raw.amplitudes().to_vec();
            for (i, z) in amps.iter_mut().enumerate() {
                if i % 4 == DiracState::Pair.index() {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
            let rho = StateVector::normalized(amps, vec![4, 4])
                .unwrap()
                .to_density();
            let omega = 2.0 + 28.0 * rng.gen::<f64>();
            let r0 = 1.0 + 0.05 * rng.gen::<f64>();
            let params = HorizonParams::new(omega, r0).unwrap();
            let out = transform_memory(&rho, 1, &params).unwrap();
            let defect = out
                .partial_trace(&[0])
                .unwrap()
                .max_abs_diff(&rho.partial_trace(&[0]).unwrap());
            s.check(defect < 1e-10, || {
                format!(
                    "{{\"case\":{t},\"omega\":{omega},\"r0\":{r0},\"defect\":{defect:e},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("zero-angle-identity");
        let bell = state_bell_like().to_density();
        let w = state_w_traced();
        let params = HorizonParams::new(1e6, 1.05).unwrap();
        for (label, rho) in [("bell", &bell), ("w", &w)] {
            let out = transform_memory(rho, 1, &params).unwrap();
            let defect = out.max_abs_diff(rho);
            s.check(defect < 1e-12, || {
                format!("{{\"state\":\"{label}\",\"defect\":{defect:e}}}")
            });
        }
        suites.push(s);
    }
    {
        let mut s = SuiteReport::new("bell-mi-monotone");
        let bell = state_bell_like().to_density();
        for &omega in &[10.0, 30.0] {
            let mut prev = -1.0f64;
            for &r0 in grid_r0(25).iter() {
                let params = HorizonParams::new(omega, r0).unwrap();
                let mi = mutual_information(&transform_memory(&bell, 1, &params).unwrap()).unwrap();
                s.check(mi >= prev - tol, || {
                    format!("{{\"omega\":{omega},\"r0\":{r0},\"mi\":{mi},\"prev\":{prev}}}")
                });
                prev = mi;
            }
        }
        suites.push(s);
    }

    // --- bounds on the builder states ---
    {
        let bell = state_bell_like().to_density();
        let w = state_w_traced();
        let states: [(&str, &DensityMatrix); 2] = [("bell", &bell), ("w", &w)];
        let omegas = [10.0, 30.0];
        let r0s = grid_r0(25);

        let mut constancy = SuiteReport::new("delta2-constancy");
        let mut tighter = SuiteReport::new("u2-tighter-grid");
        let mut validity = SuiteReport::new("bound-validity");
        let mut decrease = SuiteReport::new("uncertainty-decrease-identity");
        let mut lhs_monotone = SuiteReport::new("bell-lhs-monotone");

        for (label, rho) in states {
            for &omega in &omegas {
                let mut d2_min = f64::INFINITY;
                let mut d2_max = f64::NEG_INFINITY;
                let mut prev_lhs = f64::INFINITY;
                for &r0 in &r0s {
                    let params = HorizonParams::new(omega, r0).unwrap();
                    let r = crate::bounds::full_report(label, rho, &bx, &by, &params)
                        .expect("builder state report");
                    d2_min = d2_min.min(r.delta2);
                    d2_max = d2_max.max(r.delta2);
                    tighter.check(r.u2 >= r.u1 - tol, || {
                        format!(
                            "{{\"state\":\"{label}\",\"omega\":{omega},\"r0\":{r0},\"u1\":{},\"u2\":{}}}",
                            r.u1, r.u2
                        )
                    });
                    validity.check(r.lhs >= r.u1 - tol && r.lhs >= r.u2 - tol, || {
                        format!(
                            "{{\"state\":\"{label}\",\"omega\":{omega},\"r0\":{r0},\"lhs\":{},\"u1\":{},\"u2\":{}}}",
                            r.lhs, r.u1, r.u2
                        )
                    });
                    let gap = (r.h_m1 + r.h_m2 - r.lhs) - (r.holevo_m1 + r.holevo_m2);
                    decrease.check(gap.abs() < tol, || {
                        format!(
                            "{{\"state\":\"{label}\",\"omega\":{omega},\"r0\":{r0},\"gap\":{gap:e}}}"
                        )
                    });
                    if label == "bell" {
                        lhs_monotone.check(r.lhs <= prev_lhs + tol, || {
                            format!(
                                "{{\"omega\":{omega},\"r0\":{r0},\"lhs\":{},\"prev\":{prev_lhs}}}",
                                r.lhs
                            )
                        });
                        prev_lhs = r.lhs;
                    }
                }
                let spread = d2_max - d2_min;
                constancy.check(spread < tol, || {
                    format!(
                        "{{\"state\":\"{label}\",\"omega\":{omega},\"delta2_spread\":{spread:e}}}"
                    )
                });
            }
        }
        suites.push(constancy);
        suites.push(tighter);
        suites.push(validity);
        suites.push(decrease);
        suites.push(lhs_monotone);
    }

    // --- random exploration of bounds ---
    {
        let mut s = SuiteReport::new("bound-validity-random");
        let mut rng = rng_for(cfg, 13);
        for t in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let b1 = random_basis(&mut rng, 4, "m1");
            let b2 = random_basis(&mut rng, 4, "m2");
            let lhs = lhs_uncertainty(&rho, &b1, &b2).unwrap();
            let u1 = u1_bound(&rho, &b1, &b2).unwrap();
            let u2 = u2_bound(&rho, &b1, &b2).unwrap();
            s.check(lhs >= u1 - tol && lhs >= u2 - tol, || {
                format!(
                    "{{\"case\":{t},\"lhs\":{lhs},\"u1\":{u1},\"u2\":{u2},\"input\":{}}}",
                    serialize_matrix(16, rho.entries())
                )
            });
        }
        suites.push(s);
    }
    {
        // u2 >= u1 is an observation about the example states, not a theorem;
        // random violations are reported, never failed
        let mut s = SuiteReport::new("u2-vs-u1-random");
        let mut rng = rng_for(cfg, 14);
        let mut violations = 0usize;
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let rho = random_density(&mut rng, &[4, 4]);
            let b1 = random_basis(&mut rng, 4, "m1");
            let b2 = random_basis(&mut rng, 4, "m2");
            let u1 = u1_bound(&rho, &b1, &b2).unwrap();
            let u2 = u2_bound(&rho, &b1, &b2).unwrap();
            s.cases += 1;
            if u2 < u1 - tol {
                violations += 1;
                worst = worst.max(u1 - u2);
            }
        }
        if violations > 0 {
            s.notes.push(format!(
                "u2 < u1 on {violations}/{trials} random states (largest gap {worst:.6e}); the tightness claim is specific to the example states"
            ));
        }
        suites.push(s);
    }

    if cfg.inject_fault {
        let mut s = SuiteReport::new("injected-fault");
        // a Hermitian, unit-trace matrix with an eigenvalue well below the
        // clamp window; construction must refuse it
        let diag = [0.5, 0.5 + 1e-6, -1e-6, 0.0];
        let mut entries = vec![Complex64::new(0.0, 0.0); 16];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * 4 + i] = Complex64::new(d, 0.0);
        }
        let outcome = DensityMatrix::new(entries.clone(), vec![4]);
        s.cases += 1;
        s.failures.push(format!(
            "{{\"injected\":true,\"constructor_error\":\"{}\",\"input\":{}}}",
            outcome
                .err()
                .map_or_else(|| "accepted invalid state".to_string(), |e| e.to_string()),
            serialize_matrix(4, &entries)
        ));
        suites.push(s);
    }

    suites
}
