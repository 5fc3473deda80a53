//! Near-horizon Schwarzschild physics for a single Dirac mode.
//!
//! A static observer at radius r₀ outside a Schwarzschild black hole of mass
//! M sees the freely-falling (Hartle-Hawking) vacuum as thermally excited.
//! With Ω = ω/T_H = 8πωM and R₀ = r₀/2M, the mixing is set by the dilation
//! angle tan q = exp(-(Ω/2)√(1-1/R₀)), and the mode transforms by an isometry
//! from the 4-dim freely-falling basis into region-I ⊗ region-IV:
//!
//!   |0⟩  ↦ cos²q |0,0⟩ + sin q cos q (|↑,↓⟩ + |↓,↑⟩) + sin²q |p,p⟩
//!   |↑⟩  ↦ cos q |↑,0⟩ + sin q |p,↑⟩
//!   |↓⟩  ↦ cos q |↓,0⟩ - sin q |p,↓⟩
//!
//! The |p⟩ column of the map is intentionally not provided; inputs with pair
//! support on the transformed mode are rejected.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    apply_operator_raw, c64, embed_operator, partial_trace_raw, DensityMatrix, StateVector,
};

/// Dimension of one Dirac mode.
pub const MODE_DIM: usize = 4;

/// Largest R₀ for which the near-horizon (Rindler) approximation is trusted.
pub const RINDLER_R0_MAX: f64 = 1.05;

/// Basis labels of a Dirac mode, in the fixed global order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracState {
    Vacuum,
    Up,
    Down,
    Pair,
}

impl DiracState {
    pub const ALL: [DiracState; 4] = [
        DiracState::Vacuum,
        DiracState::Up,
        DiracState::Down,
        DiracState::Pair,
    ];

    pub fn index(self) -> usize {
        match self {
            DiracState::Vacuum => 0,
            DiracState::Up => 1,
            DiracState::Down => 2,
            DiracState::Pair => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DiracState::Vacuum => "0",
            DiracState::Up => "up",
            DiracState::Down => "down",
            DiracState::Pair => "pair",
        }
    }
}

/// Dimensionless horizon parameters Ω = ω/T_H and R₀ = r₀/2M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorizonParams {
    omega_ratio: f64,
    r_ratio: f64,
}

impl HorizonParams {
    pub fn new(omega_ratio: f64, r_ratio: f64) -> Result<Self> {
        if !omega_ratio.is_finite() || omega_ratio <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Omega must be > 0, got {omega_ratio}"
            )));
        }
        if !r_ratio.is_finite() || r_ratio < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "R0 must be >= 1, got {r_ratio}"
            )));
        }
        Ok(Self {
            omega_ratio,
            r_ratio,
        })
    }

    /// From physical inputs in geometric units: Ω = 8πωM, R₀ = r₀/2M.
    pub fn from_physical(mass: f64, frequency: f64, radius: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be > 0, got {mass}"
            )));
        }
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "frequency must be > 0, got {frequency}"
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be > 0, got {radius}"
            )));
        }
        Self::new(
            8.0 * std::f64::consts::PI * frequency * mass,
            radius / (2.0 * mass),
        )
    }

    pub fn omega_ratio(&self) -> f64 {
        self.omega_ratio
    }

    pub fn r_ratio(&self) -> f64 {
        self.r_ratio
    }

    /// q = arctan(exp(-(Ω/2)√(1-1/R₀))) ∈ (0, π/4].
    pub fn dilation_angle(&self) -> f64 {
        (-(self.omega_ratio / 2.0) * (1.0 - 1.0 / self.r_ratio).sqrt())
            .exp()
            .atan()
    }

    /// False when R₀ exceeds the near-horizon approximation domain.
    pub fn within_rindler_domain(&self) -> bool {
        self.r_ratio <= RINDLER_R0_MAX + 1e-12
    }
}

/// Free-function form of [`HorizonParams::dilation_angle`].
pub fn dilation_angle(params: &HorizonParams) -> f64 {
    params.dilation_angle()
}

/// The single-mode Bogoliubov isometry at dilation angle `q`: a 16×4 matrix
/// from the freely-falling mode basis into region-I ⊗ region-IV, with the
/// |p⟩ column unsupported (all zero).
#[derive(Debug, Clone)]
pub struct BogoliubovMap {
    q: f64,
    matrix: Vec<Complex64>, // 16×4 row-major; rows indexed by (region I)·4 + (region IV)
}

impl BogoliubovMap {
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Row-major 16×4 matrix; the |p⟩ input column is all zero.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn is_supported(&self, input: DiracState) -> bool {
        input != DiracState::Pair
    }

    /// The 16 amplitudes the given input state maps to.
    pub fn column(&self, input: DiracState) -> Result<Vec<Complex64>> {
        if !self.is_supported(input) {
            return Err(Error::UnsupportedPairState { support: 1.0 });
        }
        let j = input.index();
        Ok((0..16).map(|r| self.matrix[r * 4 + j]).collect())
    }

    /// Max |(V†V - I)| over the three supported columns.
    pub fn isometry_defect(&self) -> f64 {
        let cols = [0usize, 1, 2];
        let mut worst = 0.0f64;
        for (i, &ci) in cols.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                let ip: Complex64 = (0..16)
                    .map(|r| self.matrix[r * 4 + ci].conj() * self.matrix[r * 4 + cj])
                    .sum();
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((ip - expect).norm());
            }
        }
        worst
    }

    /// Applies the map to factor `target` of a pure state; the factor is
    /// replaced by the region-I ⊗ region-IV pair.
    pub fn apply_vector(&self, psi: &StateVector, target: usize) -> Result<StateVector> {
        let dims = psi.factor_dims();
        check_target(dims, target)?;
        let support = pair_support_vector(psi, target);
        if support > 1e-12 {
            return Err(Error::UnsupportedPairState { support });
        }
        let op = embed_operator(dims, target, 16, 4, &self.matrix);
        let in_dim = psi.dim();
        let out_dim = in_dim * 4;
        let mut amps = vec![Complex64::ZERO; out_dim];
        for (i, amp) in amps.iter_mut().enumerate() {
            for (j, x) in psi.amplitudes().iter().enumerate() {
                *amp += op[i * in_dim + j] * x;
            }
        }
        let mut factor_dims = dims.to_vec();
        factor_dims.splice(target..=target, [4usize, 4]);
        StateVector::new(amps, factor_dims)
    }
}

/// Builds the Bogoliubov map for a dilation angle q ∈ [0, π/4].
pub fn mode_isometry(q: f64) -> Result<BogoliubovMap> {
    if !q.is_finite() || !(-1e-12..=FRAC_PI_4 + 1e-12).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "dilation angle must lie in [0, pi/4], got {q}"
        )));
    }
    let q = q.clamp(0.0, FRAC_PI_4);
    let (s, c) = q.sin_cos();
    let mut m = vec![Complex64::ZERO; 16 * 4];
    let mut set = |region_i: DiracState, region_iv: DiracState, input: DiracState, v: f64| {
        m[(region_i.index() * 4 + region_iv.index()) * 4 + input.index()] = c64(v, 0.0);
    };
    use DiracState::{Down, Pair, Up, Vacuum};
    // |0⟩: cos²q |0,0⟩ + sin q cos q (|↑,↓⟩ + |↓,↑⟩) + sin²q |p,p⟩
    set(Vacuum, Vacuum, Vacuum, c * c);
    set(Up, Down, Vacuum, s * c);
    set(Down, Up, Vacuum, s * c);
    set(Pair, Pair, Vacuum, s * s);
    // |↑⟩: cos q |↑,0⟩ + sin q |p,↑⟩
    set(Up, Vacuum, Up, c);
    set(Pair, Up, Up, s);
    // |↓⟩: cos q |↓,0⟩ - sin q |p,↓⟩
    set(Down, Vacuum, Down, c);
    set(Pair, Down, Down, -s);
    Ok(BogoliubovMap { q, matrix: m })
}

fn check_target(dims: &[usize], target: usize) -> Result<()> {
    if target >= dims.len() {
        return Err(Error::InvalidFactorIndices {
            indices: vec![target],
            nfactors: dims.len(),
        });
    }
    if dims[target] != MODE_DIM {
        return Err(Error::DimensionMismatch {
            context: "transformed factor must be a Dirac mode",
            expected: MODE_DIM,
            got: dims[target],
        });
    }
    Ok(())
}

fn pair_support_vector(psi: &StateVector, target: usize) -> f64 {
    let dims = psi.factor_dims();
    let right: usize = dims[target + 1..].iter().product();
    let d_t = dims[target];
    psi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i / right) % d_t == DiracState::Pair.index())
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

fn pair_support_density(rho: &DensityMatrix, target: usize) -> f64 {
    let dims = rho.factor_dims();
    let right: usize = dims[target + 1..].iter().product();
    let d_t = dims[target];
    (0..rho.dim())
        .filter(|i| (i / right) % d_t == DiracState::Pair.index())
        .map(|i| rho.entry(i, i).re)
        .sum()
}

/// Sends factor `target` through the Bogoliubov map at the parameters'
/// dilation angle and traces out the inaccessible region-IV factor. The
/// output layout matches the input (the mode is replaced by its region-I
/// restriction).
pub fn transform_memory(
    rho: &DensityMatrix,
    target: usize,
    params: &HorizonParams,
) -> Result<DensityMatrix> {
    let dims = rho.factor_dims();
    check_target(dims, target)?;
    let support = pair_support_density(rho, target);
    if support > 1e-12 {
        return Err(Error::UnsupportedPairState { support });
    }
    let map = mode_isometry(params.dilation_angle())?;
    let big = apply_operator_raw(dims, target, 16, 4, &map.matrix, rho.entries());
    let mut big_dims = dims.to_vec();
    big_dims.splice(target..=target, [4usize, 4]);
    let keep: Vec<usize> = (0..big_dims.len()).filter(|&f| f != target + 1).collect();
    let (reduced, kept_dims) = partial_trace_raw(&big_dims, &big, &keep);
    DensityMatrix::new(reduced, kept_dims)
}

/// [`transform_memory`] for a pure input.
pub fn transform_memory_pure(
    psi: &StateVector,
    target: usize,
    params: &HorizonParams,
) -> Result<DensityMatrix> {
    transform_memory(&psi.to_density(), target, params)
}

/// (|0⟩_A|0⟩_B + |↑⟩_A|↓⟩_B)/√2 on two Dirac modes.
pub fn state_bell_like() -> StateVector {
    let mut amps = vec![Complex64::ZERO; 16];
    amps[0] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[6] = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps, vec![4, 4]).expect("normalized by construction")
}

/// The three-party W state (|00↑⟩ + |0↑0⟩ + |↑00⟩)/√3.
pub fn state_w() -> StateVector {
    let a = c64(1.0 / 3.0f64.sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; 64];
    amps[1] = a; // |0,0,up>
    amps[4] = a; // |0,up,0>
    amps[16] = a; // |up,0,0>
    StateVector::new(amps, vec![4, 4, 4]).expect("normalized by construction")
}

/// The W state with the third party traced out:
/// (1/3)|00⟩⟨00| + (2/3)|ψ⁺⟩⟨ψ⁺| with |ψ⁺⟩ = (|0↑⟩ + |↑0⟩)/√2.
pub fn state_w_traced() -> DensityMatrix {
    state_w()
        .to_density()
        .partial_trace(&[0, 1])
        .expect("valid reduction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::mutual_information;
    use crate::matrix::StateVector;
    use crate::random::random_pure;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // 40-digit evaluations of arctan(exp(-(Ω/2)√(1-1/R₀))), rounded to f64
    const Q_10_105: f64 = 0.3240142027361807;
    const Q_10_102: f64 = 0.4608563387478382;
    const Q_30_101: f64 = 0.2211215838790332;

    #[test]
    fn dilation_angle_reference_values() {
        let p = HorizonParams::new(10.0, 1.0).unwrap();
        assert!(close(p.dilation_angle(), FRAC_PI_4, 1e-15));
        let p = HorizonParams::new(10.0, 1.05).unwrap();
        assert!(close(p.dilation_angle(), Q_10_105, 1e-14));
        let p = HorizonParams::new(10.0, 1.02).unwrap();
        assert!(close(p.dilation_angle(), Q_10_102, 1e-14));
        let p = HorizonParams::new(30.0, 1.01).unwrap();
        assert!(close(p.dilation_angle(), Q_30_101, 1e-14));
        // vanishing thermal mixing at large Ω
        let p = HorizonParams::new(1e4, 1.05).unwrap();
        assert!(p.dilation_angle() < 1e-300);
    }

    #[test]
    fn params_validate_domains() {
        let err = HorizonParams::new(10.0, 0.9).unwrap_err();
        assert!(err.to_string().contains("R0 must be >= 1"));
        assert!(HorizonParams::new(0.0, 1.2).is_err());
        assert!(HorizonParams::new(-3.0, 1.2).is_err());
        assert!(HorizonParams::new(f64::NAN, 1.2).is_err());
        assert!(HorizonParams::new(10.0, 1.2).unwrap().r_ratio() == 1.2);
    }

    #[test]
    fn physical_parameters_convert_to_ratios() {
        // Ω = 8πωM, R₀ = r₀/2M
        let p =
            HorizonParams::from_physical(1.0, 10.0 / (8.0 * std::f64::consts::PI), 2.1).unwrap();
        assert!(close(p.omega_ratio(), 10.0, 1e-12));
        assert!(close(p.r_ratio(), 1.05, 1e-12));
        assert!(HorizonParams::from_physical(-1.0, 1.0, 2.0).is_err());
        assert!(HorizonParams::from_physical(1.0, 1.0, 1.9).is_err()); // inside horizon
    }

    #[test]
    fn rindler_domain_flag() {
        assert!(HorizonParams::new(10.0, 1.05)
            .unwrap()
            .within_rindler_domain());
        assert!(!HorizonParams::new(10.0, 1.06)
            .unwrap()
            .within_rindler_domain());
    }

    #[test]
    fn dilation_angle_is_monotone() {
        for &r0 in &[1.01, 1.03, 1.05] {
            let mut prev = f64::INFINITY;
            for &om in &[1.0, 5.0, 10.0, 20.0, 50.0] {
                let q = HorizonParams::new(om, r0).unwrap().dilation_angle();
                assert!(q < prev, "q not decreasing in Omega at R0={r0}");
                prev = q;
            }
        }
        for &om in &[5.0, 10.0, 30.0] {
            let mut prev = f64::INFINITY;
            for &r0 in &[1.0, 1.005, 1.01, 1.02, 1.05] {
                let q = HorizonParams::new(om, r0).unwrap().dilation_angle();
                assert!(q <= prev, "q not decreasing in R0 at Omega={om}");
                prev = q;
            }
        }
    }

    #[test]
    fn zero_angle_map_is_an_embedding() {
        let map = mode_isometry(0.0).unwrap();
        for state in [DiracState::Vacuum, DiracState::Up, DiracState::Down] {
            let col = map.column(state).unwrap();
            for (r, z) in col.iter().enumerate() {
                let expect = if r == state.index() * 4 { 1.0 } else { 0.0 };
                assert!(close(z.re, expect, 1e-15));
            }
        }
        assert!(map.column(DiracState::Pair).is_err());
    }

    #[test]
    fn horizon_limit_vacuum_column() {
        let map = mode_isometry(FRAC_PI_4).unwrap();
        let col = map.column(DiracState::Vacuum).unwrap();
        for (r, z) in col.iter().enumerate() {
            let expect = match r {
                0 | 6 | 9 | 15 => 0.5,
                _ => 0.0,
            };
            assert!(close(z.re, expect, 1e-15), "row {r}: {z}");
        }
    }

    #[test]
    fn supported_columns_are_isometric() {
        for k in 0..50 {
            let q = FRAC_PI_4 * (k as f64) / 49.0;
            let map = mode_isometry(q).unwrap();
            assert!(map.isometry_defect() < 1e-12, "defect at q={q}");
        }
        assert!(mode_isometry(-0.2).is_err());
        assert!(mode_isometry(1.0).is_err());
    }

    #[test]
    fn applying_the_map_to_the_vacuum() {
        let map = mode_isometry(FRAC_PI_4).unwrap();
        let psi = StateVector::basis_state(&[4], &[0]).unwrap();
        let out = map.apply_vector(&psi, 0).unwrap();
        assert_eq!(out.factor_dims(), &[4, 4]);
        assert!(close(out.amplitudes()[0].re, 0.5, 1e-15)); // ⟨0,0|ψ⟩ = cos²(π/4)
    }

    #[test]
    fn pair_support_is_rejected() {
        let psi = StateVector::basis_state(&[4, 4], &[0, 3]).unwrap();
        let params = HorizonParams::new(10.0, 1.02).unwrap();
        let err = transform_memory_pure(&psi, 1, &params).unwrap_err();
        assert!(matches!(err, Error::UnsupportedPairState { .. }));
        // pair support on the *other* factor is fine
        let psi = StateVector::basis_state(&[4, 4], &[3, 0]).unwrap();
        assert!(transform_memory_pure(&psi, 1, &params).is_ok());
    }

    #[test]
    fn infinite_frequency_limit_is_the_identity_channel() {
        let params = HorizonParams::new(1e4, 1.05).unwrap();
        let rho = state_bell_like().to_density();
        let out = transform_memory(&rho, 1, &params).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn transform_preserves_trace_and_alice_marginal() {
        let params = HorizonParams::new(10.0, 1.05).unwrap();
        let rho = state_bell_like().to_density();
        let out = transform_memory(&rho, 1, &params).unwrap();
        assert!(close(out.trace().re, 1.0, 1e-12));
        let before = rho.partial_trace(&[0]).unwrap();
        let after = out.partial_trace(&[0]).unwrap();
        assert!(after.max_abs_diff(&before) < 1e-10);
        let ev = after.eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!(close(*got, want, 1e-12));
        }
    }

    #[test]
    fn bell_state_amplitudes() {
        let psi = state_bell_like();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for (i, z) in psi.amplitudes().iter().enumerate() {
            let expect = if i == 0 || i == 6 { inv_sqrt2 } else { 0.0 };
            assert!(close(z.re, expect, 1e-15) && z.im == 0.0);
        }
    }

    #[test]
    fn traced_w_state_structure() {
        let rho = state_w_traced();
        assert!(close(rho.trace().re, 1.0, 1e-13));
        let ev = rho.eigenvalues().unwrap();
        assert!(close(ev[0], 2.0 / 3.0, 1e-12));
        assert!(close(ev[1], 1.0 / 3.0, 1e-12));
        for lam in &ev[2..] {
            assert!(close(*lam, 0.0, 1e-12));
        }
        let marginal = rho.partial_trace(&[0]).unwrap();
        let ev = marginal.eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0]) {
            assert!(close(*got, want, 1e-12));
        }
    }

    #[test]
    fn tracing_charlie_commutes_with_transforming_bob() {
        let params = HorizonParams::new(10.0, 1.03).unwrap();
        let traced_first = transform_memory(&state_w_traced(), 1, &params).unwrap();
        let transformed_first = transform_memory(&state_w().to_density(), 1, &params)
            .unwrap()
            .partial_trace(&[0, 1])
            .unwrap();
        assert!(traced_first.max_abs_diff(&transformed_first) < 1e-12);
    }

    #[test]
    fn horizon_limit_mutual_information_is_one_bit() {
        // 40-digit evaluation of I(A:R) for the transformed Bell-like state
        // at q = π/4 gives exactly 1
        let params = HorizonParams::new(10.0, 1.0).unwrap();
        let out = transform_memory(&state_bell_like().to_density(), 1, &params).unwrap();
        assert!(close(mutual_information(&out).unwrap(), 1.0, 1e-9));
    }

    #[test]
    fn mutual_information_grows_with_distance() {
        let rho = state_bell_like().to_density();
        let mut prev = -1.0;
        for &r0 in &[1.0, 1.01, 1.02, 1.03, 1.05] {
            let params = HorizonParams::new(10.0, r0).unwrap();
            let mi = mutual_information(&transform_memory(&rho, 1, &params).unwrap()).unwrap();
            assert!(mi >= prev - 1e-9, "MI not nondecreasing in R0");
            prev = mi;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn transform_is_trace_preserving_and_local(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // random pure two-mode state with no pair support on the memory
            let raw = random_pure(&mut rng, &[4, 4]);
            let mut amps = raw.amplitudes().to_vec();
            for (i, z) in amps.iter_mut().enumerate() {
                if i % 4 == DiracState::Pair.index() {
                    *z = Complex64::ZERO;
                }
            }
            let psi = StateVector::normalized(amps, vec![4, 4]).unwrap();
            let rho = psi.to_density();
            let params = HorizonParams::new(8.0, 1.04).unwrap();
            let out = transform_memory(&rho, 1, &params).unwrap();
            prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
            let before = rho.partial_trace(&[0]).unwrap();
            let after = out.partial_trace(&[0]).unwrap();
            prop_assert!(after.max_abs_diff(&before) < 1e-10);
        }
    }
}
