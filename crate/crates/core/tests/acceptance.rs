//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use beyondcp::catalog::{self, RepolarizerParams};
use beyondcp::consistency::{self, UnitaryFamily};
use beyondcp::dilation::{self, Representation};
use beyondcp::dynmap::{self, PositivityScan, SubsystemMap};
use beyondcp::operator::{self, bloch_state, tensor, Operator, SpaceLayout};
use beyondcp::{random, OperatorSubspace, Result, ToleranceConfig, C64, CVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PROPERTY_TRIALS: usize = 200;
const PROPERTY_SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn criterion_1() -> Result<Outcome> {
    let v = catalog::gibbs_subspace(tol());
    let mut worst: f64 = 0.0;
    let mut completeness: f64 = 0.0;
    for t in [0.0, PI / 6.0, PI / 4.0, PI / 2.0] {
        let derived = dynmap::derive_map(&v, &catalog::controlled_phase_unitary(t))?;
        let closed = catalog::example1_map(t);
        worst = worst.max(derived.deviation(&closed)?);
        for a in closed.domain().basis() {
            let diff = derived.apply(a)?.max_abs_diff(&closed.apply(a)?);
            worst = worst.max(diff);
        }
        let (e1, e2) = catalog::example1_kraus(t);
        completeness = completeness.max(dilation::kraus_completeness_residual(&[e1, e2])?);
    }
    outcome(
        worst <= 1e-9 && completeness <= 1e-12,
        format!("max map deviation {worst:.2e}, Kraus completeness residual {completeness:.2e}"),
    )
}

fn criterion_2() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in catalog::gibbs_grid(7, 7) {
        let oracle = operator::gibbs_state(&catalog::gibbs_hamiltonian(p.theta), p.beta, 1e-12)?;
        worst = worst.max(oracle.max_abs_diff(&catalog::gibbs_state_closed_form(p)));
    }
    let sampled = catalog::gibbs_sampled_subspace(7, 7, tol())?;
    let printed = catalog::gibbs_subspace(tol());
    let containment = sampled.equivalence_residual(&printed)?;
    outcome(
        worst <= 1e-10 && sampled.dim() == 6 && containment <= 1e-9,
        format!("closed form vs expm {worst:.2e}, sampled span dim {}, containment {containment:.2e}", sampled.dim()),
    )
}

fn criterion_3() -> Result<Outcome> {
    let phi = catalog::transpose_map(2);
    let rep = dilation::swap_representation(&phi, &dynmap::axis_states(2))?;
    let sm = catalog::transpose_subspace(tol());
    let containment = rep.subspace().equivalence_residual(&sm)?;
    let derived = rep.derived_map()?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random::mixed_state(&mut rng, 2);
        worst = worst.max(derived.apply(&rho)?.max_abs_diff(&rho.transpose()));
    }
    let cp = dynmap::is_cp(&phi)?;
    let pass = rep.subspace().dim() == 10
        && containment <= 1e-9
        && worst <= 1e-10
        && !cp.completely_positive
        && (cp.min_choi_eigenvalue + 1.0).abs() <= 1e-9;
    outcome(
        pass,
        format!(
            "dim V = {}, containment {containment:.2e}, rho -> rho^T error {worst:.2e}, CP = {}, min Choi eigenvalue {:.10}",
            rep.subspace().dim(),
            cp.completely_positive,
            cp.min_choi_eigenvalue
        ),
    )
}

fn membership_boundary(phi: &SubsystemMap, axis: [f64; 3]) -> f64 {
    let at = |r: f64| bloch_state([r * axis[0], r * axis[1], r * axis[2]]);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dynmap::positive_domain_membership(phi, &at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn criterion_4() -> Result<Outcome> {
    let eps = 0.1;
    let p = RepolarizerParams::new(eps)?;
    let phi = catalog::repolarizer(p);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut axes: Vec<[f64; 3]> = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]];
    axes.extend((0..6).map(|_| random::random_axis(&mut rng)));
    let boundary_err = axes
        .iter()
        .map(|a| (membership_boundary(&phi, *a) - eps).abs())
        .fold(0.0, f64::max);

    let rep = dilation::swap_representation(&phi, &catalog::axis_states_at_radius(eps))?;
    let sm = catalog::repolarizer_subspace(p, tol());
    let containment = rep.subspace().equivalence_residual(&sm)?;

    let suite = catalog::violation_suite(p, 20, 4)?;
    let contractivity_err = suite
        .contractivity_ratios
        .iter()
        .map(|r| (r - 1.0 / eps).abs())
        .fold(0.0, f64::max);
    let uhlmann_min = suite.uhlmann_ratios.iter().copied().fold(f64::INFINITY, f64::min);

    let scan = dynmap::positivity_scan(&phi, 100, 4)?;
    let scan_min = match scan {
        PositivityScan::Counterexample { min_eigenvalue, .. } => Some(min_eigenvalue),
        PositivityScan::NoViolationFound { .. } => None,
    };
    let expected = -(1.0 - eps) / (2.0 * eps);
    let pass = boundary_err <= 1e-8
        && containment <= 1e-9
        && suite.contractivity_ratios.len() == 20
        && contractivity_err <= 1e-6
        && suite.uhlmann_ratios.len() == 20
        && uhlmann_min >= 1.0 / eps - 1e-6
        && scan_min.is_some_and(|m| (m - expected).abs() <= 1e-9);
    outcome(
        pass,
        format!(
            "boundary error {boundary_err:.2e}, SM containment {containment:.2e}, max |ratio - 1/eps| {contractivity_err:.2e}, \
             min Uhlmann ratio {uhlmann_min:.4}, counterexample eigenvalue {scan_min:?}"
        ),
    )
}

fn criterion_5() -> Result<Outcome> {
    let p = RepolarizerParams::new(0.1)?;
    let depol = catalog::depolarizer(p);
    let rep = dilation::kraus_dilation(&catalog::depolarizer_kraus(p), &tol())?;
    let unitarity = rep.unitary().unitarity_residual();
    let kraus_dev = rep.derived_map()?.deviation(&depol)?;

    let repol = catalog::repolarizer(p);
    let swap_rep = dilation::swap_representation(&repol, &catalog::axis_states_at_radius(p.epsilon))?;
    let inv = dilation::inverse_representation(&swap_rep, &repol)?;
    let inv_dev = inv.derived_map()?.deviation(&depol)?;
    outcome(
        unitarity <= 1e-10 && kraus_dev <= 1e-10 && inv_dev <= 1e-9,
        format!("||U^dag U - 1|| {unitarity:.2e}, Kraus dilation deviation {kraus_dev:.2e}, inverse representation deviation {inv_dev:.2e}"),
    )
}

fn bell() -> Operator {
    let mut v = CVector::zeros(4);
    v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[3] = v[0];
    Operator::projector(SpaceLayout::bipartite(2, 2), &v).expect("dims")
}

fn kraus_corpus() -> Result<Vec<(String, Representation)>> {
    let p = RepolarizerParams::new(0.3)?;
    let (e1, e2) = catalog::example1_kraus(0.7);
    let lists = [
        ("depolarizer(0.3)", catalog::depolarizer_kraus(p)),
        ("amplitude damping(0.4)", catalog::amplitude_damping_kraus(0.4)?),
        ("example1(t=0.7)", vec![e1, e2]),
    ];
    lists
        .into_iter()
        .map(|(name, k)| Ok((name.to_owned(), dilation::kraus_dilation(&k, &tol())?)))
        .collect()
}

fn criterion_6() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let members = (0..20)
        .map(|_| random::haar_unitary(&mut rng, 4).with_layout(SpaceLayout::bipartite(2, 2)))
        .collect::<Result<Vec<_>>>()?;
    let family = UnitaryFamily::new(members, "20 Haar-random unitaries")?;
    let kernel_dim = consistency::consistent_kernel(&family, tol())?.dim();

    let mut cases: Vec<(String, OperatorSubspace, UnitaryFamily)> = kraus_corpus()?
        .into_iter()
        .map(|(name, rep)| {
            let fam = UnitaryFamily::new(vec![rep.unitary().clone()], name.clone())?;
            Ok((name, rep.subspace().clone(), fam))
        })
        .collect::<Result<_>>()?;
    cases.push(("gibbs".into(), catalog::gibbs_subspace(tol()), catalog::controlled_phase_family(6)?));
    let mut failures = Vec::new();
    for (name, v, fam) in &cases {
        for d_w in 1..=3 {
            if !consistency::witness_extension_consistent(v, fam, d_w)?.consistent {
                failures.push(format!("{name}/d_W={d_w}"));
            }
        }
    }

    let rho_s = bloch_state([0.2, -0.1, 0.4]);
    let entangled = consistency::witness_counterexample(&rho_s, &bell(), &tol())?.mismatch;
    let product = tensor(&bloch_state([0.5, 0.0, 0.0]), &bloch_state([0.0, 0.3, 0.3]));
    let product_mismatch = consistency::witness_counterexample(&rho_s, &product, &tol())?.mismatch;
    outcome(
        kernel_dim == 0 && failures.is_empty() && (entangled - 0.75).abs() <= 1e-10 && product_mismatch <= 1e-10,
        format!(
            "Haar kernel dim {kernel_dim}, witness failures {failures:?} of {} cases, Bell mismatch {entangled:.12}, product mismatch {product_mismatch:.2e}",
            cases.len() * 3
        ),
    )
}

fn random_combinations(rng: &mut ChaCha8Rng, basis: &[Operator], n: usize) -> Vec<Operator> {
    (0..n)
        .map(|_| {
            basis.iter().fold(Operator::zeros(basis[0].layout().clone()), |acc, b| {
                &acc + &b.scale(C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            })
        })
        .collect()
}

fn weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Six near-mixed axis states; the mixing weight is halved until all are in
/// the positive domain.
fn interior_axis_states(phi: &SubsystemMap) -> Option<Vec<Operator>> {
    let mixed = Operator::maximally_mixed(SpaceLayout::single(2));
    let mut s = 1.0;
    while s > 1e-9 {
        let states: Vec<Operator> = dynmap::axis_states(2)
            .iter()
            .map(|a| &mixed.scale_real(1.0 - s) + &a.scale_real(s))
            .collect();
        if states.iter().all(|r| dynmap::positive_domain_membership(phi, r)) {
            return Some(states);
        }
        s *= 0.5;
    }
    None
}

fn property_trial(rng: &mut ChaCha8Rng) -> Result<Vec<&'static str>> {
    let mut failed = Vec::new();
    let check = 1e-9;

    // Product subspace B(H_S) (x) rho_B under a random joint unitary.
    let d_b = rng.random_range(1..=3);
    let rho_b = random::mixed_state(rng, d_b);
    let v = OperatorSubspace::full(SpaceLayout::single(2), tol()).tensor_with(&rho_b)?;
    let u = random::haar_unitary(rng, 2 * d_b).with_layout(SpaceLayout::bipartite(2, d_b))?;
    let phi = dynmap::derive_map(&v, &u)?;

    let elems = random_combinations(rng, v.basis(), 6);
    if dynmap::commutation_residual(&phi, &u, &elems)? > check {
        failed.push("diagram commutation");
    }
    let regenerated = random_combinations(rng, v.basis(), v.dim() + 2);
    if dynmap::derive_map_from_elements(&v, &u, &regenerated)?.deviation(&phi)? > check {
        failed.push("derivation uniqueness");
    }
    if phi.trace_preservation_residual() > check || phi.hermiticity_residual(&tol())? > check {
        failed.push("trace/Hermiticity preservation");
    }

    // Gibbs subspace under exp(-itK): mixtures of thermal states.
    let t = rng.random_range(0.0..2.0 * PI);
    let uk = catalog::controlled_phase_unitary(t);
    let gibbs_phi = dynmap::derive_map(&catalog::gibbs_subspace(tol()), &uk)?;
    let gens: Vec<Operator> = (0..4)
        .map(|_| {
            let p = catalog::GibbsParams::new(rng.random_range(-2.0..2.0), rng.random_range(0.1..2.0))?;
            Ok(catalog::gibbs_state_closed_form(p))
        })
        .collect::<Result<_>>()?;
    let w = weights(rng, gens.len());
    let rho = gens
        .iter()
        .zip(&w)
        .fold(Operator::zeros(SpaceLayout::bipartite(2, 2)), |acc, (g, x)| &acc + &g.scale_real(*x));
    let truth = operator::trace_bath(&operator::conjugate(&uk, &rho))?;
    let via_map = gibbs_phi.apply(&operator::trace_bath(&rho)?)?;
    if truth.max_abs_diff(&via_map) > check {
        failed.push("brute-force oracle");
    }

    // SWAP representation of a random map whose positive domain spans B(H_S).
    let target = random::map_with_spanning_positive_domain(rng, 2, 1e-3);
    let round_trip = interior_axis_states(&target)
        .map(|states| -> Result<f64> {
            let rep = dilation::swap_representation(&target, &states)?;
            rep.derived_map()?.deviation(&target)
        })
        .transpose();
    match round_trip {
        Ok(Some(dev)) if dev <= check => {}
        _ => failed.push("representation round trip"),
    }

    // Positive control: CPTP maps contract the trace distance.
    let rank = rng.random_range(1..=4);
    let cp = random::cptp_map(rng, 2, rank);
    let (r1, r2) = (random::mixed_state(rng, 2), random::mixed_state(rng, 2));
    match catalog::contractivity_ratio(&cp, &r1, &r2, 1.0)?.ratio {
        Some(r) if r > 1.0 + 1e-9 => failed.push("CP contractivity"),
        _ => {}
    }
    Ok(failed)
}

fn criterion_7() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let mut failures = Vec::new();
    for trial in 0..PROPERTY_TRIALS {
        match property_trial(&mut rng) {
            Ok(f) if f.is_empty() => {}
            Ok(f) => failures.push(format!("trial {trial}: {}", f.join(", "))),
            Err(e) => failures.push(format!("trial {trial}: {e}")),
        }
    }
    let shown: Vec<&String> = failures.iter().take(3).collect();
    outcome(
        failures.is_empty(),
        format!("{PROPERTY_TRIALS} trials (seed {PROPERTY_SEED:#x}), {} failing; first: {shown:?}", failures.len()),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("example1 equivalence", criterion_1),
        ("thermal closed form", criterion_2),
        ("transpose representation", criterion_3),
        ("repolarizer", criterion_4),
        ("Kraus and inverse dilation", criterion_5),
        ("kernel and witness suite", criterion_6),
        ("property suite", criterion_7),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {detail} ({:.2}s)", i + 1, start.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
