//! Representations `(H_B, U, V)` of a map as subsystem dynamics: the SWAP
//! construction, Kraus dilations with unitary completion, and inverse
//! representations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::consistency;
use crate::dynmap::{self, SubsystemMap};
use crate::linalg;
use crate::operator::{self, Operator, SpaceLayout};
use crate::opspace::OperatorSubspace;
use crate::{CMatrix, Error, Result, ToleranceConfig, C64};

/// A consistent pair `(V, U)` on `H_S (x) H_B` with `Tr_B V = R`.
#[derive(Debug, Clone)]
pub struct Representation {
    bath_dim: usize,
    unitary: Operator,
    subspace: OperatorSubspace,
    target_domain: OperatorSubspace,
}

impl Representation {
    /// Checks that `V` is `U`-consistent and records `R = Tr_B V`.
    pub fn new(unitary: Operator, subspace: OperatorSubspace) -> Result<Self> {
        let dims = subspace.layout().dims();
        if dims.len() != 2 {
            return Err(Error::input("representation subspace must live on a [d_S, d_B] layout"));
        }
        let bath_dim = dims[1];
        let verdict = consistency::is_u_consistent(&subspace, &unitary)?;
        if !verdict.consistent {
            let kernel_element = verdict
                .violating_pair
                .map(|p| p.kernel_element)
                .unwrap_or_else(|| Operator::zeros(subspace.layout().clone()));
            return Err(Error::Inconsistent { residual: verdict.worst_residual, kernel_element: Box::new(kernel_element) });
        }
        let unitary = unitary.with_layout(subspace.layout().clone())?;
        let target_domain = subspace.bath_trace_image()?;
        Ok(Self { bath_dim, unitary, subspace, target_domain })
    }

    /// Assembles a representation without any checks; used to examine
    /// deliberately broken triples.
    pub fn new_unchecked(unitary: Operator, subspace: OperatorSubspace) -> Result<Self> {
        let dims = subspace.layout().dims();
        if dims.len() != 2 || unitary.dim() != subspace.layout().total() {
            return Err(Error::input("unitary and subspace layouts do not match"));
        }
        let bath_dim = dims[1];
        let unitary = unitary.with_layout(subspace.layout().clone())?;
        let target_domain = subspace.bath_trace_image()?;
        Ok(Self { bath_dim, unitary, subspace, target_domain })
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn subspace(&self) -> &OperatorSubspace {
        &self.subspace
    }

    pub fn target_domain(&self) -> &OperatorSubspace {
        &self.target_domain
    }

    /// The map induced by the pair.
    pub fn derived_map(&self) -> Result<SubsystemMap> {
        dynmap::derive_map(&self.subspace, &self.unitary)
    }

    /// Points of the physical domain `Tr_B[V ∩ D_SB]`, obtained as random
    /// convex mixtures of the generators of `V` that are states.
    pub fn sample_physical_domain(&self, n: usize, seed: u64) -> Result<Vec<Operator>> {
        let tol = *self.subspace.tol();
        let states: Vec<&Operator> = self
            .subspace
            .generators()
            .iter()
            .filter(|g| g.is_density(tol.residual_tol.max(tol.psd_slack)))
            .collect();
        if states.is_empty() {
            return Err(Error::Refused("no generator of V is a state".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let weights: Vec<f64> = states.iter().map(|_| -rng.random::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
            let total: f64 = weights.iter().sum();
            let mix = states
                .iter()
                .zip(&weights)
                .fold(Operator::zeros(self.subspace.layout().clone()), |acc, (s, w)| &acc + &s.scale_real(w / total));
            out.push(operator::trace_bath(&mix)?);
        }
        Ok(out)
    }
}

/// Residuals of the three representation conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RepresentationCheck {
    pub consistency_residual: f64,
    pub domain_residual: f64,
    pub map_residual: f64,
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks that `V` is `U`-consistent, `Tr_B V = R`, and that the induced map
/// equals `phi` on `R`.
pub fn verify_representation(rep: &Representation, phi: &SubsystemMap) -> Result<RepresentationCheck> {
    let tol = *phi.tol();
    let consistency_residual = consistency::is_u_consistent(&rep.subspace, &rep.unitary)?.worst_residual;
    let domain_residual = rep.target_domain.equivalence_residual(phi.domain())?;
    let map_residual = if rep.subspace.dim() == 0 {
        f64::INFINITY
    } else {
        let derived = dynmap::synthesize(rep.subspace.basis(), &rep.unitary, rep.subspace.tol())?;
        derived.deviation(phi)?
    };
    let max_residual = consistency_residual.max(domain_residual).max(map_residual);
    Ok(RepresentationCheck {
        consistency_residual,
        domain_residual,
        map_residual,
        max_residual,
        pass: max_residual <= tol.residual_tol,
    })
}

fn ensure_tp_hp(phi: &SubsystemMap) -> Result<()> {
    let tol = phi.tol();
    let scale = linalg::frobenius(phi.coords()).max(1.0);
    let tp = phi.trace_preservation_residual();
    if tp > tol.residual_tol * scale {
        return Err(Error::input(format!("map is not trace preserving (residual {tp:.3e})")));
    }
    let hp = phi.hermiticity_residual(tol)?;
    if hp > tol.residual_tol * scale {
        return Err(Error::input(format!("map is not Hermiticity preserving (residual {hp:.3e})")));
    }
    Ok(())
}

/// The SWAP representation: bath a copy of the system,
/// `V = span{ rho (x) Phi(rho) : rho in Omega }`, `U = SWAP`.
///
/// The given positive-domain states must span the domain of `phi`. Because
/// `rho -> rho (x) Phi(rho)` is quadratic, `V` is then the polarized span
/// `{ e_a (x) Phi(e_b) + e_b (x) Phi(e_a) }` over any basis of the domain; it is
/// built from the orthonormal domain basis, which stays well conditioned when
/// the states sit close together. The result is verified before it is returned.
pub fn swap_representation(phi: &SubsystemMap, omega_gens: &[Operator]) -> Result<Representation> {
    ensure_tp_hp(phi)?;
    let tol = *phi.tol();
    if omega_gens.is_empty() {
        return Err(Error::input("no positive-domain states supplied"));
    }
    let d = phi.system_dim();
    let slayout = SpaceLayout::single(d);
    let gens: Vec<Operator> = omega_gens
        .iter()
        .map(|g| g.clone().with_layout(slayout.clone()))
        .collect::<Result<_>>()?;
    for (i, g) in gens.iter().enumerate() {
        if !dynmap::positive_domain_membership(phi, g) {
            return Err(Error::Refused(format!("state {i} is not in the positive domain of the map")));
        }
    }
    let span = OperatorSubspace::span_from_generators(&gens, tol)?;
    if !span.same_as(phi.domain())? {
        return Err(Error::Refused(format!(
            "positive-domain states span a {}-dimensional space but the map domain is {}-dimensional; \
             the positive domain must span the domain",
            span.dim(),
            phi.domain().dim()
        )));
    }
    let basis = phi.domain().basis();
    let images: Vec<Operator> = (0..basis.len()).map(|k| phi.basis_image(k)).collect();
    let mut elems = Vec::with_capacity(basis.len() * (basis.len() + 1) / 2);
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let ab = operator::tensor(&basis[a], &images[b]);
            elems.push(if a == b { ab } else { &ab + &operator::tensor(&basis[b], &images[a]) });
        }
    }
    let v = OperatorSubspace::span_from_generators(&elems, tol)?;
    let rep = Representation::new(operator::swap(d), v)?;
    let check = verify_representation(&rep, phi)?;
    if !check.pass {
        return Err(Error::Numerical(format!("SWAP representation failed verification (residual {:.3e})", check.max_residual)));
    }
    Ok(rep)
}

/// `Phi` restricted to the span of sampled positive-domain states.
pub fn restrict_to_physical(phi: &SubsystemMap, n: usize, seed: u64) -> Result<SubsystemMap> {
    if !phi.is_full_domain() {
        return Err(Error::Refused("restriction expects a map on all of B(H_S)".into()));
    }
    let sample = match dynmap::sample_positive_domain(phi, n, seed) {
        Ok(s) => s,
        Err(Error::EmptySample { .. }) => {
            return Err(Error::Refused(format!("positive domain not found at budget {n}")));
        }
        Err(e) => return Err(e),
    };
    let r = sample.span(*phi.tol())?;
    phi.restricted_to(&r)
}

/// `(H_B, U^dagger, Ad_U V)` represents `Phi^{-1}`. Verified against the
/// inverse of `phi` before returning.
pub fn inverse_representation(rep: &Representation, phi: &SubsystemMap) -> Result<Representation> {
    let inverse = phi.inverse()?;
    let v = rep.subspace.conjugated_by(&rep.unitary)?;
    let out = Representation::new(rep.unitary.dagger(), v)?;
    let check = verify_representation(&out, &inverse)?;
    if !check.pass {
        return Err(Error::Numerical(format!("inverse representation failed verification (residual {:.3e})", check.max_residual)));
    }
    Ok(out)
}

/// Largest entry of `|sum_i M_i^dagger M_i - 1|` in Frobenius norm.
pub fn kraus_completeness_residual(kraus: &[Operator]) -> Result<f64> {
    let first = kraus.first().ok_or_else(|| Error::input("empty Kraus list"))?;
    let d = first.dim();
    if kraus.iter().any(|m| m.dim() != d) {
        return Err(Error::input("Kraus operators have mixed dimensions"));
    }
    let mut sum = CMatrix::zeros(d, d);
    for m in kraus {
        sum += m.matrix().adjoint() * m.matrix();
    }
    Ok(linalg::frobenius(&(sum - CMatrix::identity(d, d))))
}

/// Unitary on `[d, k]` with `<i|U|0> = M_i`; the remaining block columns are an
/// orthonormal completion.
pub fn kraus_unitary(kraus: &[Operator], tol: &ToleranceConfig) -> Result<Operator> {
    let residual = kraus_completeness_residual(kraus)?;
    if residual > tol.residual_tol {
        return Err(Error::input(format!("Kraus operators are not complete (residual {residual:.3e})")));
    }
    let d = kraus[0].dim();
    let k = kraus.len();
    let n = d * k;
    let mut iso = CMatrix::zeros(n, d);
    for (i, m) in kraus.iter().enumerate() {
        for s in 0..d {
            for sp in 0..d {
                iso[(s * k + i, sp)] = m.matrix()[(s, sp)];
            }
        }
    }
    let complement = linalg::null_basis(&iso.adjoint(), tol.rank_cut.max(1e-12))?;
    if complement.ncols() != n - d {
        return Err(Error::Numerical("could not complete the Kraus isometry to a unitary".into()));
    }
    let mut u = CMatrix::zeros(n, n);
    let mut next = 0;
    for col in 0..n {
        if col % k == 0 {
            u.set_column(col, &iso.column(col / k));
        } else {
            u.set_column(col, &complement.column(next));
            next += 1;
        }
    }
    Operator::new(SpaceLayout::bipartite(d, k), u)
}

/// Kraus dilation: bath of dimension `k`, `U` from [`kraus_unitary`] and
/// `V = B(H_S) (x) |0><0|`, so that the induced map is `A -> sum_i M_i A M_i^dagger`.
pub fn kraus_dilation(kraus: &[Operator], tol: &ToleranceConfig) -> Result<Representation> {
    let u = kraus_unitary(kraus, tol)?;
    let d = kraus[0].dim();
    let k = kraus.len();
    let blayout = SpaceLayout::single(k);
    let v = OperatorSubspace::full(SpaceLayout::single(d), *tol).tensor_with(&Operator::matrix_unit(blayout, 0, 0))?;
    let rep = Representation::new(u, v)?;
    let phi = SubsystemMap::from_kraus(kraus)?.with_tol(*tol);
    let check = verify_representation(&rep, &phi)?;
    if !check.pass {
        return Err(Error::Numerical(format!("Kraus dilation failed verification (residual {:.3e})", check.max_residual)));
    }
    Ok(rep)
}

/// `{ sum_ij M_i A M_j^dagger (x) |i><j| : A in B(H_S) }`, the image of
/// `B(H_S) (x) |0><0|` under the Kraus unitary. Paired with `U^dagger` it
/// represents the inverse of the Kraus map.
pub fn kraus_image_subspace(kraus: &[Operator], tol: &ToleranceConfig) -> Result<OperatorSubspace> {
    let first = kraus.first().ok_or_else(|| Error::input("empty Kraus list"))?;
    let d = first.dim();
    let k = kraus.len();
    let blayout = SpaceLayout::single(k);
    let mut elems = Vec::with_capacity(d * d);
    for a in OperatorSubspace::full(SpaceLayout::single(d), *tol).basis() {
        let mut x = Operator::zeros(SpaceLayout::bipartite(d, k));
        for (i, mi) in kraus.iter().enumerate() {
            for (j, mj) in kraus.iter().enumerate() {
                let block = mi.matrix() * a.matrix() * mj.matrix().adjoint();
                let block = Operator::new(SpaceLayout::single(d), block)?;
                x = &x + &operator::tensor(&block, &Operator::matrix_unit(blayout.clone(), i, j));
            }
        }
        elems.push(x);
    }
    OperatorSubspace::span_from_generators(&elems, *tol)
}

/// `U exp(i delta H)` for a random Hermitian `H` of unit norm; used to
/// exercise verification failures.
pub fn perturb_unitary<R: Rng + ?Sized>(rng: &mut R, u: &Operator, delta: f64) -> Result<Operator> {
    let h = crate::random::hermitian(rng, u.dim());
    let h = h.scale_real(1.0 / h.hs_norm());
    let kick = h.exp_hermitian(C64::new(0.0, delta), 1e-10)?;
    let m = u.matrix() * kick.matrix();
    Operator::new(u.layout().clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{bloch_state, paulis, qubit_identity};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn axis_states() -> Vec<Operator> {
        dynmap::axis_states(2)
    }

    #[test]
    fn identity_swap_representation_is_symmetric_sector() {
        let phi = SubsystemMap::identity(2);
        let rep = swap_representation(&phi, &axis_states()).unwrap();
        assert_eq!(rep.subspace().dim(), 10);
        let sector = OperatorSubspace::full(SpaceLayout::single(2), tol()).symmetric_sector().unwrap();
        assert!(rep.subspace().same_as(&sector).unwrap());
        assert!(rep.derived_map().unwrap().deviation(&phi).unwrap() < 1e-10);
    }

    #[test]
    fn swap_representation_refuses_non_spanning_states() {
        let phi = SubsystemMap::identity(2);
        let gens = vec![bloch_state([0.0, 0.0, 1.0]), bloch_state([0.0, 0.0, -1.0])];
        assert!(matches!(swap_representation(&phi, &gens), Err(Error::Refused(_))));
    }

    #[test]
    fn kraus_unitary_first_block_column() {
        let eps: f64 = 0.3;
        let [i, x, y, z] = paulis();
        let m = vec![
            i.scale_real((1.0 + 3.0 * eps).sqrt() / 2.0),
            x.scale_real((1.0 - eps).sqrt() / 2.0),
            y.scale_real((1.0 - eps).sqrt() / 2.0),
            z.scale_real((1.0 - eps).sqrt() / 2.0),
        ];
        let u = kraus_unitary(&m, &tol()).unwrap();
        assert!(u.unitarity_residual() < 1e-12);
        for (k, mk) in m.iter().enumerate() {
            for s in 0..2 {
                for sp in 0..2 {
                    assert_eq!(u.matrix()[(s * 4 + k, sp * 4)], mk.matrix()[(s, sp)]);
                }
            }
        }
    }

    #[test]
    fn kraus_dilation_single_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = crate::random::haar_unitary(&mut rng, 2);
        let rep = kraus_dilation(std::slice::from_ref(&v), &tol()).unwrap();
        assert_eq!(rep.bath_dim(), 1);
        let rho = bloch_state([0.1, 0.5, -0.2]);
        let out = rep.derived_map().unwrap().apply(&rho).unwrap();
        assert!((&out - &operator::conjugate(&v, &rho)).hs_norm() < 1e-12);
    }

    #[test]
    fn kraus_dilation_rejects_incomplete_lists() {
        let err = kraus_dilation(&[qubit_identity().scale_real(0.5)], &tol()).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn kraus_image_subspace_represents_inverse() {
        let eps: f64 = 0.4;
        let [i, x, y, z] = paulis();
        let m = vec![
            i.scale_real((1.0 + 3.0 * eps).sqrt() / 2.0),
            x.scale_real((1.0 - eps).sqrt() / 2.0),
            y.scale_real((1.0 - eps).sqrt() / 2.0),
            z.scale_real((1.0 - eps).sqrt() / 2.0),
        ];
        let u = kraus_unitary(&m, &tol()).unwrap();
        let v = kraus_image_subspace(&m, &tol()).unwrap();
        assert_eq!(v.dim(), 4);
        let rep = Representation::new(u.dagger(), v).unwrap();
        let inv = SubsystemMap::from_kraus(&m).unwrap().inverse().unwrap();
        assert!(verify_representation(&rep, &inv).unwrap().pass);
    }

    #[test]
    fn perturbed_unitary_fails_verification() {
        let phi = SubsystemMap::from_fn(2, "transpose", |a| a.transpose()).unwrap();
        let rep = swap_representation(&phi, &axis_states()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let delta = 1e-2;
        let bad_u = perturb_unitary(&mut rng, rep.unitary(), delta).unwrap();
        let bad = Representation::new_unchecked(bad_u, rep.subspace().clone()).unwrap();
        let check = verify_representation(&bad, &phi).unwrap();
        assert!(!check.pass);
        assert!(check.max_residual > 1e-4 && check.max_residual < 1e-1, "{check:?}");
    }

    #[test]
    fn restriction_of_identity_is_unchanged() {
        let phi = SubsystemMap::identity(2);
        let r = restrict_to_physical(&phi, 50, 1).unwrap();
        assert!(r.is_full_domain() || r.domain().dim() == 4);
        assert!(r.deviation(&phi).unwrap() < 1e-12);
    }

    #[test]
    fn physical_domain_samples_are_states_of_the_domain() {
        let phi = SubsystemMap::from_fn(2, "transpose", |a| a.transpose()).unwrap();
        let rep = swap_representation(&phi, &axis_states()).unwrap();
        for rho in rep.sample_physical_domain(20, 4).unwrap() {
            assert!(dynmap::positive_domain_membership(&phi, &rho));
        }
    }
}
