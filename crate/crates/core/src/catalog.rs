//! Worked examples: the thermal Gibbs family with controlled-phase evolution,
//! the transpose and repolarizer maps with their SWAP subspaces, the
//! depolarizing channel, and the trace-norm and relative-entropy checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::consistency::UnitaryFamily;
use crate::dynmap::{self, SubsystemMap};
use crate::operator::{self, bloch_state, paulis, pauli_x, pauli_z, qubit_identity, tensor, Operator, RelativeEntropy, SpaceLayout};
use crate::opspace::OperatorSubspace;
use crate::random;
use crate::{Error, Result, ToleranceConfig, C64};

/// Parameters of the thermal state `rho(theta, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsParams {
    pub theta: f64,
    pub beta: f64,
}

impl GibbsParams {
    pub fn new(theta: f64, beta: f64) -> Result<Self> {
        if !theta.is_finite() || !beta.is_finite() {
            return Err(Error::input("Gibbs parameters must be finite"));
        }
        Ok(Self { theta, beta })
    }

    /// `lambda = sqrt(2 theta^2 + 2 theta + 1)`.
    pub fn lambda(&self) -> f64 {
        (2.0 * self.theta * self.theta + 2.0 * self.theta + 1.0).sqrt()
    }

    /// `gamma = sqrt(2 theta^2 - 2 theta + 1)`.
    pub fn gamma(&self) -> f64 {
        (2.0 * self.theta * self.theta - 2.0 * self.theta + 1.0).sqrt()
    }
}

fn sb() -> SpaceLayout {
    SpaceLayout::bipartite(2, 2)
}

fn kron(a: &Operator, b: &Operator) -> Operator {
    tensor(a, b)
}

/// `H(theta) = theta (X + Z) (x) 1 + X (x) X`.
pub fn gibbs_hamiltonian(theta: f64) -> Operator {
    let xz = &pauli_x() + &pauli_z();
    &kron(&xz, &qubit_identity()).scale_real(theta) + &kron(&pauli_x(), &pauli_x())
}

/// The six-term closed form of `exp(-beta H) / Tr exp(-beta H)`.
pub fn gibbs_state_closed_form(p: GibbsParams) -> Operator {
    let (t, b) = (p.theta, p.beta);
    let (l, g) = (p.lambda(), p.gamma());
    let (shl, shg) = ((b * l).sinh(), (b * g).sinh());
    let (chl, chg) = ((b * l).cosh(), (b * g).cosh());
    let den = chl + chg;
    let lg = l * g;
    let i = qubit_identity();
    let (x, z) = (pauli_x(), pauli_z());
    let terms = [
        (1.0, kron(&i, &i)),
        (-(t / lg) * (g * shl + l * shg) / den, kron(&z, &i)),
        (-(1.0 / lg) * ((t + 1.0) * g * shl + (t - 1.0) * l * shg) / den, kron(&x, &i)),
        ((chl - chg) / den, kron(&i, &x)),
        (-(1.0 / lg) * ((t + 1.0) * g * shl - (t - 1.0) * l * shg) / den, kron(&x, &x)),
        (-(t / lg) * (g * shl - l * shg) / den, kron(&z, &x)),
    ];
    terms
        .iter()
        .fold(Operator::zeros(sb()), |acc, (c, op)| &acc + &op.scale_real(c / 4.0))
}

/// `Span{1, X(x)1, Z(x)1, 1(x)X, X(x)X, Z(x)X}`.
pub fn gibbs_subspace(tol: ToleranceConfig) -> OperatorSubspace {
    let i = qubit_identity();
    let (x, z) = (pauli_x(), pauli_z());
    let gens = [kron(&i, &i), kron(&x, &i), kron(&z, &i), kron(&i, &x), kron(&x, &x), kron(&z, &x)];
    OperatorSubspace::span_from_generators(&gens, tol).expect("fixed generators")
}

/// `n_theta x n_beta` grid over `theta in [-2, 2]`, `beta in [0.1, 2]`.
pub fn gibbs_grid(n_theta: usize, n_beta: usize) -> Vec<GibbsParams> {
    let lin = |lo: f64, hi: f64, n: usize, k: usize| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 };
    let mut out = Vec::with_capacity(n_theta * n_beta);
    for a in 0..n_theta {
        for b in 0..n_beta {
            out.push(GibbsParams { theta: lin(-2.0, 2.0, n_theta, a), beta: lin(0.1, 2.0, n_beta, b) });
        }
    }
    out
}

/// Span of thermal states sampled on a grid.
pub fn gibbs_sampled_subspace(n_theta: usize, n_beta: usize, tol: ToleranceConfig) -> Result<OperatorSubspace> {
    let states: Vec<Operator> = gibbs_grid(n_theta, n_beta).into_iter().map(gibbs_state_closed_form).collect();
    OperatorSubspace::span_from_generators(&states, tol)
}

/// `K = (1 + Z(x)1 + 1(x)Z - Z(x)Z) / 2`.
pub fn controlled_phase_generator() -> Operator {
    let i = qubit_identity();
    let z = pauli_z();
    let sum = &(&(&kron(&i, &i) + &kron(&z, &i)) + &kron(&i, &z)) - &kron(&z, &z);
    sum.scale_real(0.5)
}

/// `U(t) = exp(-i t K)`.
pub fn controlled_phase_unitary(t: f64) -> Operator {
    controlled_phase_generator().evolution(t, 1e-12).expect("K is Hermitian")
}

/// `n` samples `t_k = 2 pi (k + 1/2) / n` of the controlled-phase group, with
/// the generator attached.
pub fn controlled_phase_family(n: usize) -> Result<UnitaryFamily> {
    if n == 0 {
        return Err(Error::input("family needs at least one sample"));
    }
    let members = (0..n)
        .map(|k| controlled_phase_unitary(2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64))
        .collect();
    UnitaryFamily::new(members, format!("controlled-phase exp(-itK), {n}-point t-grid"))?
        .with_generator(controlled_phase_generator())
}

fn example1_action(t: f64, a: &Operator) -> Operator {
    let z = pauli_z();
    let (s, c) = t.sin_cos();
    let dephased = (a + &operator::conjugate(&z, a)).scale_real(0.5);
    let comm = a.commutator(&z).scale(C64::new(0.0, s * c * 0.5));
    &(&a.scale_real(c * c) + &dephased.scale_real(s * s)) + &comm
}

/// The closed-form Example-1 map on `R = Span{1, X, Z}`.
pub fn example1_map(t: f64) -> SubsystemMap {
    let full = SubsystemMap::from_fn(2, "example1", |a| example1_action(t, a)).expect("qubit map");
    let r = OperatorSubspace::span_from_generators(&[qubit_identity(), pauli_x(), pauli_z()], ToleranceConfig::default())
        .expect("fixed generators");
    full.restricted_to(&r).expect("subspace of B(C^2)").with_provenance(format!("example1(t={t})"))
}

/// Kraus pair of the Example-1 map:
/// `E_1 = sqrt((1+cos t)/2) (cos(t/2) 1 - i sin(t/2) Z)`,
/// `E_2 = sqrt((1-cos t)/2) (sin(t/2) 1 + i cos(t/2) Z)`.
///
/// These are the eigenvectors of the map's process matrix in the `{1, Z}`
/// basis, so `E_1 A E_1^dagger + E_2 A E_2^dagger` equals [`example1_map`].
pub fn example1_kraus(t: f64) -> (Operator, Operator) {
    example1_kraus_with_sign(t, 1.0)
}

/// The same pair with `-i cos(t/2) Z` in `E_2`. It is complete, but its
/// commutator term is `i sin(t)/2 [A, Z]` instead of `i sin(t) cos(t)/2 [A, Z]`,
/// so it does not reproduce the Example-1 map away from `t = k pi / 2`.
pub fn example1_kraus_minus_variant(t: f64) -> (Operator, Operator) {
    example1_kraus_with_sign(t, -1.0)
}

fn example1_kraus_with_sign(t: f64, sign: f64) -> (Operator, Operator) {
    let i = qubit_identity();
    let z = pauli_z();
    let (sh, ch) = (t / 2.0).sin_cos();
    let e1 = (&i.scale_real(ch) - &z.scale(C64::new(0.0, sh))).scale_real(((1.0 + t.cos()) / 2.0).sqrt());
    let e2 = (&i.scale_real(sh) + &z.scale(C64::new(0.0, sign * ch))).scale_real(((1.0 - t.cos()) / 2.0).sqrt());
    (e1, e2)
}

/// Transpose map on `B(C^d)`.
pub fn transpose_map(d: usize) -> SubsystemMap {
    SubsystemMap::from_fn(d, "transpose", |a| a.transpose()).expect("transpose")
}

/// The ten-element basis of `Span{rho (x) rho^T}`.
pub fn transpose_subspace_generators() -> Vec<Operator> {
    let [i, x, y, z] = paulis();
    vec![
        kron(&i, &i),
        &kron(&x, &i) + &kron(&i, &x),
        &kron(&y, &i) - &kron(&i, &y),
        &kron(&z, &i) + &kron(&i, &z),
        kron(&x, &x),
        kron(&y, &y),
        kron(&z, &z),
        &kron(&x, &y) - &kron(&y, &x),
        &kron(&y, &z) - &kron(&z, &y),
        &kron(&z, &x) + &kron(&x, &z),
    ]
}

pub fn transpose_subspace(tol: ToleranceConfig) -> OperatorSubspace {
    OperatorSubspace::span_from_generators(&transpose_subspace_generators(), tol).expect("fixed generators")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepolarizerParams {
    pub epsilon: f64,
}

impl RepolarizerParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::input(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        Ok(Self { epsilon })
    }
}

/// `Phi(A) = A / eps - ((1 - eps) / (2 eps)) Tr(A) 1`.
pub fn repolarizer(p: RepolarizerParams) -> SubsystemMap {
    let eps = p.epsilon;
    SubsystemMap::from_fn(2, format!("repolarizer(epsilon={eps})"), |a| {
        &a.scale_real(1.0 / eps) - &qubit_identity().scale(a.trace() * ((1.0 - eps) / (2.0 * eps)))
    })
    .expect("qubit map")
}

/// `A -> eps A + (1 - eps) Tr(A) 1/2`.
pub fn depolarizer(p: RepolarizerParams) -> SubsystemMap {
    let eps = p.epsilon;
    SubsystemMap::from_fn(2, format!("depolarizer(epsilon={eps})"), |a| {
        &a.scale_real(eps) + &qubit_identity().scale(a.trace() * ((1.0 - eps) / 2.0))
    })
    .expect("qubit map")
}

/// `M_0 = sqrt(1+3 eps)/2 1`, `M_i = sqrt(1-eps)/2 sigma_i`.
pub fn depolarizer_kraus(p: RepolarizerParams) -> Vec<Operator> {
    let eps = p.epsilon;
    let [i, x, y, z] = paulis();
    let w = (1.0 - eps).sqrt() / 2.0;
    vec![i.scale_real((1.0 + 3.0 * eps).sqrt() / 2.0), x.scale_real(w), y.scale_real(w), z.scale_real(w)]
}

/// Amplitude damping `{[[1,0],[0,sqrt(1-g)]], [[0,sqrt(g)],[0,0]]}`.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<Vec<Operator>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::input(format!("damping rate must lie in [0, 1], got {gamma}")));
    }
    let l = SpaceLayout::single(2);
    let c = |x: f64| C64::new(x, 0.0);
    let k0 = Operator::from_rows(l.clone(), &[&[c(1.0), c(0.0)], &[c(0.0), c((1.0 - gamma).sqrt())]])?;
    let k1 = Operator::from_rows(l, &[&[c(0.0), c(gamma.sqrt())], &[c(0.0), c(0.0)]])?;
    Ok(vec![k0, k1])
}

/// The ten-element basis of `Span{rho (x) Phi(rho) : rho in Omega}` for the
/// repolarizer.
pub fn repolarizer_subspace_generators(p: RepolarizerParams) -> Vec<Operator> {
    let [i, x, y, z] = paulis();
    let inv = 1.0 / p.epsilon;
    let single = |s: &Operator| &kron(s, &i) + &kron(&i, s).scale_real(inv);
    vec![
        kron(&i, &i),
        single(&x),
        single(&y),
        single(&z),
        kron(&x, &x),
        kron(&y, &y),
        kron(&z, &z),
        &kron(&x, &y) + &kron(&y, &x),
        &kron(&y, &z) + &kron(&z, &y),
        &kron(&z, &x) + &kron(&x, &z),
    ]
}

pub fn repolarizer_subspace(p: RepolarizerParams, tol: ToleranceConfig) -> OperatorSubspace {
    OperatorSubspace::span_from_generators(&repolarizer_subspace_generators(p), tol).expect("fixed generators")
}

/// The six axis states at Bloch radius `r`.
pub fn axis_states_at_radius(r: f64) -> Vec<Operator> {
    let mut out = Vec::with_capacity(6);
    for k in 0..3 {
        for sign in [1.0, -1.0] {
            let mut a = [0.0; 3];
            a[k] = sign * r;
            out.push(bloch_state(a));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Distinguishability checks

/// `delta_p(Phi r1, Phi r2) / delta_p(r1, r2)`; `ratio` is `None` when the
/// inputs coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractivityRatio {
    pub input_distance: f64,
    pub output_distance: f64,
    pub ratio: Option<f64>,
}

pub fn contractivity_ratio(phi: &SubsystemMap, r1: &Operator, r2: &Operator, p: f64) -> Result<ContractivityRatio> {
    let o1 = phi.apply(r1)?;
    let o2 = phi.apply(r2)?;
    let input_distance = operator::schatten_distance(r1, r2, p)?;
    let output_distance = operator::schatten_distance(&o1, &o2, p)?;
    let ratio = if input_distance > 1e-14 { Some(output_distance / input_distance) } else { None };
    Ok(ContractivityRatio { input_distance, output_distance, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UhlmannReport {
    pub s_in: RelativeEntropy,
    pub s_out: RelativeEntropy,
    /// `S_out / S_in` when both are finite and `S_in > 0`.
    pub ratio: Option<f64>,
}

/// Relative entropy before and after `phi`. Both inputs must be states in
/// the positive domain of `phi`.
pub fn uhlmann_check(phi: &SubsystemMap, r1: &Operator, r2: &Operator) -> Result<UhlmannReport> {
    let tol = phi.tol();
    for (name, r) in [("first", r1), ("second", r2)] {
        if !dynmap::positive_domain_membership(phi, r) {
            return Err(Error::input(format!("{name} state is not in the positive domain of the map")));
        }
    }
    let s_in = operator::relative_entropy(r1, r2, tol)?;
    let o1 = phi.apply(r1)?.hermitian_part();
    let o2 = phi.apply(r2)?.hermitian_part();
    let s_out = operator::relative_entropy(&o1, &o2, tol)?;
    let ratio = match (s_in, s_out) {
        (RelativeEntropy::Finite(a), RelativeEntropy::Finite(b)) if a > 0.0 => Some(b / a),
        _ => None,
    };
    Ok(UhlmannReport { s_in, s_out, ratio })
}

/// Outcome of the repolarizer violation suite.
#[derive(Debug, Clone, Serialize)]
pub struct ViolationSuite {
    pub epsilon: f64,
    /// Trace-norm ratios on random pairs of the epsilon-ball.
    pub contractivity_ratios: Vec<f64>,
    /// Relative-entropy ratios on interior pairs at Bloch radius epsilon/2.
    pub uhlmann_ratios: Vec<f64>,
    /// Minimum output eigenvalue found by the positivity scan.
    pub positivity_min_eigenvalue: Option<f64>,
}

/// Runs both distinguishability checks on `pairs` random pairs and a
/// positivity scan for the repolarizer.
pub fn violation_suite(p: RepolarizerParams, pairs: usize, seed: u64) -> Result<ViolationSuite> {
    if pairs == 0 {
        return Err(Error::input("need at least one pair"));
    }
    let eps = p.epsilon;
    let phi = repolarizer(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut contractivity_ratios = Vec::with_capacity(pairs);
    while contractivity_ratios.len() < pairs {
        let r1 = random::bloch_state_in_ball(&mut rng, eps);
        let r2 = random::bloch_state_in_ball(&mut rng, eps);
        if let Some(r) = contractivity_ratio(&phi, &r1, &r2, 1.0)?.ratio {
            contractivity_ratios.push(r);
        }
    }
    let mut uhlmann_ratios = Vec::with_capacity(pairs);
    while uhlmann_ratios.len() < pairs {
        let r1 = random::bloch_state_at_radius(&mut rng, eps / 2.0);
        let r2 = random::bloch_state_at_radius(&mut rng, eps / 2.0);
        if let Some(r) = uhlmann_check(&phi, &r1, &r2)?.ratio {
            uhlmann_ratios.push(r);
        }
    }
    let positivity_min_eigenvalue = match dynmap::positivity_scan(&phi, 16, seed)? {
        dynmap::PositivityScan::Counterexample { min_eigenvalue, .. } => Some(min_eigenvalue),
        dynmap::PositivityScan::NoViolationFound { .. } => None,
    };
    Ok(ViolationSuite { epsilon: eps, contractivity_ratios, uhlmann_ratios, positivity_min_eigenvalue })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn hamiltonian_square_and_spectrum() {
        let theta = 0.7;
        let h = gibbs_hamiltonian(theta);
        let h2 = &h * &h;
        let expected = &Operator::identity(sb()).scale_real(2.0 * theta * theta + 1.0)
            + &kron(&qubit_identity(), &pauli_x()).scale_real(2.0 * theta);
        assert!((&h2 - &expected).hs_norm() < 1e-13);

        let ev = gibbs_hamiltonian(1.0).eigenvalues().unwrap();
        let s5 = 5f64.sqrt();
        for (a, b) in ev.iter().zip([-s5, -1.0, 1.0, s5]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((&gibbs_hamiltonian(0.0) - &kron(&pauli_x(), &pauli_x())).hs_norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_exponential() {
        for p in gibbs_grid(7, 7) {
            let oracle = operator::gibbs_state(&gibbs_hamiltonian(p.theta), p.beta, 1e-12).unwrap();
            let closed = gibbs_state_closed_form(p);
            assert!(closed.max_abs_diff(&oracle) < 1e-12, "{p:?}");
        }
        let b: f64 = 0.8;
        let theta0 = gibbs_state_closed_form(GibbsParams { theta: 0.0, beta: b });
        let expected = (&Operator::identity(sb()) - &kron(&pauli_x(), &pauli_x()).scale_real(b.tanh())).scale_real(0.25);
        assert!((&theta0 - &expected).hs_norm() < 1e-14);
        let beta0 = gibbs_state_closed_form(GibbsParams { theta: 1.3, beta: 0.0 });
        assert!((&beta0 - &Operator::maximally_mixed(sb())).hs_norm() < 1e-15);
    }

    #[test]
    fn lambda_gamma_bounds() {
        for t in [-3.0, -0.5, 0.0, 0.5, 2.0] {
            let p = GibbsParams { theta: t, beta: 1.0 };
            assert!(p.lambda() >= std::f64::consts::FRAC_1_SQRT_2 - 1e-15);
            assert!(p.gamma() >= std::f64::consts::FRAC_1_SQRT_2 - 1e-15);
        }
    }

    #[test]
    fn sampled_gibbs_family_spans_six_dims() {
        let sampled = gibbs_sampled_subspace(5, 5, tol()).unwrap();
        assert_eq!(sampled.dim(), 6);
        assert!(sampled.same_as(&gibbs_subspace(tol())).unwrap());
        let v0 = gibbs_subspace(tol()).kernel_of_partial_trace().unwrap();
        assert_eq!(v0.dim(), 3);
    }

    #[test]
    fn controlled_phase_generator_squares_to_one() {
        let k = controlled_phase_generator();
        assert!((&(&k * &k) - &Operator::identity(sb())).hs_norm() < 1e-15);
        let t: f64 = 0.9;
        let closed = &Operator::identity(sb()).scale_real(t.cos()) - &k.scale(C64::new(0.0, t.sin()));
        assert!((&controlled_phase_unitary(t) - &closed).hs_norm() < 1e-13);
    }

    #[test]
    fn example1_kraus_is_complete_and_matches_closed_form() {
        for t in [0.0, 0.3, 1.0, 2.5, 4.0] {
            let (e1, e2) = example1_kraus(t);
            let sum = &(&e1.dagger() * &e1) + &(&e2.dagger() * &e2);
            assert!((&sum - &qubit_identity()).hs_norm() < 1e-14);
            let kraus = SubsystemMap::from_kraus(&[e1, e2]).unwrap();
            let closed = SubsystemMap::from_fn(2, "closed", |a| example1_action(t, a)).unwrap();
            assert!(kraus.deviation(&closed).unwrap() < 1e-13, "t = {t}");

            let (f1, f2) = example1_kraus_minus_variant(t);
            let sum = &(&f1.dagger() * &f1) + &(&f2.dagger() * &f2);
            assert!((&sum - &qubit_identity()).hs_norm() < 1e-14);
            let variant = SubsystemMap::from_kraus(&[f1, f2]).unwrap();
            let gap = (t.sin() * (1.0 - t.cos())).abs();
            let dev = variant.apply(&pauli_x()).unwrap() - closed.apply(&pauli_x()).unwrap();
            assert!((dev.hs_norm() - 2f64.sqrt() * gap).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn example1_dephases_at_quarter_period() {
        let phi = example1_map(std::f64::consts::FRAC_PI_2);
        assert!(phi.apply(&pauli_x()).unwrap().hs_norm() < 1e-15);
        assert!(example1_map(0.0).deviation(&SubsystemMap::identity(2).restricted_to(example1_map(0.0).domain()).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn transpose_subspace_matches_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples: Vec<Operator> = (0..20)
            .map(|_| {
                let rho = random::mixed_state(&mut rng, 2);
                kron(&rho, &rho.transpose())
            })
            .collect();
        let sampled = OperatorSubspace::span_from_generators(&samples, tol()).unwrap();
        assert_eq!(sampled.dim(), 10);
        assert!(sampled.same_as(&transpose_subspace(tol())).unwrap());
        let [i, _, y, _] = paulis();
        assert!(transpose_subspace(tol()).contains(&(&kron(&y, &i) - &kron(&i, &y))).unwrap());
    }

    #[test]
    fn repolarizer_pair() {
        let p = RepolarizerParams::new(0.1).unwrap();
        let composed = depolarizer(p).compose(&repolarizer(p)).unwrap();
        assert!(composed.deviation(&SubsystemMap::identity(2)).unwrap() < 1e-12);
        let kraus = SubsystemMap::from_kraus(&depolarizer_kraus(p)).unwrap();
        assert!(kraus.deviation(&depolarizer(p)).unwrap() < 1e-14);
        let [i, x, ..] = paulis();
        let elem = &kron(&x, &i) + &kron(&i, &x).scale_real(10.0);
        assert!(repolarizer_subspace(p, tol()).contains(&elem).unwrap());
        assert!(RepolarizerParams::new(0.0).is_err());
        assert!(RepolarizerParams::new(1.5).is_err());
    }

    #[test]
    fn catalog_subspaces_are_state_spanned() {
        let p = RepolarizerParams::new(0.2).unwrap();
        let witness = kron(&bloch_state([0.1, 0.0, 0.0]), &repolarizer(p).apply(&bloch_state([0.1, 0.0, 0.0])).unwrap());
        let mixed = Operator::maximally_mixed(sb());
        assert!(transpose_subspace(tol()).check_state_spanned(Some(&mixed)).is_verified());
        assert!(repolarizer_subspace(p, tol()).check_state_spanned(Some(&witness)).is_verified());
        let gibbs_witness = gibbs_state_closed_form(GibbsParams { theta: 1.0, beta: 0.5 });
        assert!(gibbs_subspace(tol()).check_state_spanned(Some(&gibbs_witness)).is_verified());
    }

    #[test]
    fn contractivity_examples() {
        let p = RepolarizerParams::new(0.1).unwrap();
        let phi = repolarizer(p);
        let r1 = bloch_state([0.05, 0.0, 0.02]);
        let r2 = bloch_state([-0.03, 0.04, 0.0]);
        let ratio = contractivity_ratio(&phi, &r1, &r2, 1.0).unwrap().ratio.unwrap();
        assert!((ratio - 10.0).abs() < 1e-9);
        assert!(contractivity_ratio(&phi, &r1, &r1, 1.0).unwrap().ratio.is_none());
        let id = SubsystemMap::identity(2);
        assert!((contractivity_ratio(&id, &r1, &r2, 2.0).unwrap().ratio.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uhlmann_examples() {
        let p = RepolarizerParams::new(0.1).unwrap();
        let r1 = bloch_state([0.05, 0.0, 0.0]);
        let r2 = bloch_state([0.0, 0.0, -0.05]);
        let rep = uhlmann_check(&repolarizer(p), &r1, &r2).unwrap();
        assert!(rep.ratio.unwrap() >= 10.0);
        let same = uhlmann_check(&repolarizer(p), &r1, &r1).unwrap();
        assert!(same.s_in.finite().unwrap().abs() < 1e-12);
        assert!(same.s_out.finite().unwrap().abs() < 1e-12);
        let a = bloch_state([0.3, 0.2, 0.1]);
        let b = bloch_state([-0.4, 0.0, 0.5]);
        let dep = uhlmann_check(&depolarizer(p), &a, &b).unwrap();
        assert!(dep.s_out.finite().unwrap() <= dep.s_in.finite().unwrap());
        // Outside the positive domain.
        assert!(uhlmann_check(&repolarizer(p), &a, &b).is_err());
    }

    #[test]
    fn violation_suite_values() {
        let suite = violation_suite(RepolarizerParams::new(0.1).unwrap(), 5, 7).unwrap();
        assert!(suite.contractivity_ratios.iter().all(|r| (r - 10.0).abs() < 1e-6));
        assert!(suite.uhlmann_ratios.iter().all(|&r| r >= 10.0 - 1e-6));
        assert!((suite.positivity_min_eigenvalue.unwrap() + 4.5).abs() < 1e-9);
    }
}
