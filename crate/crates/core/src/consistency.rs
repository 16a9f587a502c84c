//! Consistency of operator subspaces under joint unitaries and unitary
//! families, the family-consistent kernel, and witness extensions.

use serde::Serialize;

use crate::dynmap;
use crate::linalg;
use crate::operator::{self, Operator, SpaceLayout};
use crate::opspace::OperatorSubspace;
use crate::{CMatrix, Error, Result, ToleranceConfig};

/// A finite set of joint unitaries, optionally with a Hermitian generator
/// `K` of the continuous group the members were sampled from.
#[derive(Debug, Clone)]
pub struct UnitaryFamily {
    members: Vec<Operator>,
    description: String,
    generator: Option<Operator>,
}

impl UnitaryFamily {
    pub fn new(members: Vec<Operator>, description: impl Into<String>) -> Result<Self> {
        Self::with_tol(members, description, &ToleranceConfig::default())
    }

    pub fn with_tol(members: Vec<Operator>, description: impl Into<String>, tol: &ToleranceConfig) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::input("unitary family is empty"))?;
        let dims = first.layout().dims().to_vec();
        for (i, u) in members.iter().enumerate() {
            if u.layout().dims() != dims.as_slice() {
                return Err(Error::input(format!("family member {i} has a different layout")));
            }
            operator::ensure_unitary(u, tol.residual_tol.max(1e-10))
                .map_err(|e| Error::input(format!("family member {i}: {e}")))?;
        }
        Ok(Self { members, description: description.into(), generator: None })
    }

    /// Attaches the generator `K` of `exp(-itK)`; consistency checks then also
    /// certify the `ad_K`-closure of the kernel.
    pub fn with_generator(mut self, k: Operator) -> Result<Self> {
        if k.layout().dims() != self.members[0].layout().dims() {
            return Err(Error::input("generator layout does not match the family"));
        }
        operator::ensure_hermitian(&k, 1e-10)?;
        self.generator = Some(k);
        Ok(self)
    }

    pub fn members(&self) -> &[Operator] {
        &self.members
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn generator(&self) -> Option<&Operator> {
        self.generator.as_ref()
    }

    pub fn layout(&self) -> &SpaceLayout {
        self.members[0].layout()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Appends another unitary.
    pub fn push(&mut self, u: Operator) -> Result<()> {
        if u.layout().dims() != self.layout().dims() {
            return Err(Error::input("family member has a different layout"));
        }
        operator::ensure_unitary(&u, 1e-10)?;
        self.members.push(u);
        Ok(())
    }

    /// `{ U (x) 1_W }`, with generator `K (x) 1_W`.
    pub fn tensor_identity(&self, d_w: usize) -> Result<Self> {
        if d_w == 0 {
            return Err(Error::input("witness dimension must be at least 1"));
        }
        let id = Operator::identity(SpaceLayout::single(d_w));
        Ok(Self {
            members: self.members.iter().map(|u| operator::tensor(u, &id)).collect(),
            description: format!("{} (x) 1_{d_w}", self.description),
            generator: self.generator.as_ref().map(|k| operator::tensor(k, &id)),
        })
    }
}

/// Where the worst residual was found.
#[derive(Debug, Clone)]
pub struct ViolatingPair {
    pub kernel_element: Operator,
    /// The offending unitary, or the generator when `member` is `None`.
    pub unitary: Operator,
    pub member: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ConsistencyVerdict {
    pub consistent: bool,
    pub worst_residual: f64,
    pub violating_pair: Option<ViolatingPair>,
}

impl ConsistencyVerdict {
    fn trivially_consistent() -> Self {
        Self { consistent: true, worst_residual: 0.0, violating_pair: None }
    }
}

/// Largest singular value of `X -> Tr_B(f(X))` on an orthonormal basis of the
/// kernel, with the maximizing kernel element.
fn kernel_leak<F>(v0: &OperatorSubspace, f: F) -> Result<(f64, Operator)>
where
    F: Fn(&Operator) -> Operator,
{
    let images: Vec<Operator> = v0.basis().iter().map(|x| operator::trace_bath(&f(x))).collect::<Result<_>>()?;
    let rows = images[0].dim().pow(2);
    let mut m = CMatrix::zeros(rows, images.len());
    for (j, y) in images.iter().enumerate() {
        m.set_column(j, &y.vectorize());
    }
    let svd = linalg::svd(&m)?;
    let sigma = svd.singular.first().copied().unwrap_or(0.0);
    let coeffs = svd.v_t.row(0).adjoint();
    Ok((sigma, v0.element(&coeffs)))
}

fn check_unitary_for(v: &OperatorSubspace, u: &Operator) -> Result<()> {
    if u.dim() != v.layout().total() {
        return Err(Error::input(format!(
            "unitary dimension {} does not match subspace dimension {}",
            u.dim(),
            v.layout().total()
        )));
    }
    operator::ensure_unitary(u, v.tol().residual_tol.max(1e-10))
}

/// Condition (iii): `Tr_B(U X U^dagger) = 0` for every `X` in `V_0`. The
/// residual is the largest such norm over unit-norm kernel elements.
pub fn is_u_consistent(v: &OperatorSubspace, u: &Operator) -> Result<ConsistencyVerdict> {
    check_unitary_for(v, u)?;
    let v0 = v.kernel_of_partial_trace()?;
    member_verdict(&v0, u, Some(0), v.tol())
}

fn member_verdict(v0: &OperatorSubspace, u: &Operator, member: Option<usize>, tol: &ToleranceConfig) -> Result<ConsistencyVerdict> {
    if v0.dim() == 0 {
        return Ok(ConsistencyVerdict::trivially_consistent());
    }
    let (sigma, elem) = kernel_leak(v0, |x| operator::conjugate(u, x))?;
    Ok(ConsistencyVerdict {
        consistent: sigma <= tol.residual_tol,
        worst_residual: sigma,
        violating_pair: Some(ViolatingPair { kernel_element: elem, unitary: u.clone(), member }),
    })
}

/// Residual of the generator certificate: the `ad_K`-invariant closure of
/// `V_0` must lie in `ker Tr_B`. This covers every `exp(-itK)`, not only the
/// sampled grid.
pub fn generator_residual(v0: &OperatorSubspace, k: &Operator) -> Result<(f64, Operator)> {
    let mut closure = v0.clone();
    // Commutator images are compared against the closure in absolute terms;
    // round-off images must not be renormalized into new directions.
    let floor = v0.tol().rank_cut * (1.0 + k.hs_norm());
    loop {
        let mut fresh = Vec::new();
        for x in closure.basis() {
            let y = k.commutator(x);
            let r = &y - &closure.project(&y)?;
            if r.hs_norm() > floor {
                fresh.push(r);
            }
        }
        if fresh.is_empty() {
            break;
        }
        let next = closure.sum(&OperatorSubspace::span_from_generators(&fresh, *v0.tol())?)?;
        if next.dim() == closure.dim() {
            break;
        }
        closure = next;
    }
    kernel_leak(&closure, |x| x.clone())
}

/// Consistency for every member of the family (and the generator, if any).
/// Ties keep the earliest member, so the verdict is order-deterministic.
pub fn is_family_consistent(v: &OperatorSubspace, family: &UnitaryFamily) -> Result<ConsistencyVerdict> {
    if family.layout().total() != v.layout().total() {
        return Err(Error::input("family dimension does not match subspace"));
    }
    let v0 = v.kernel_of_partial_trace()?;
    let tol = v.tol();
    let mut worst = ConsistencyVerdict::trivially_consistent();
    if v0.dim() == 0 {
        return Ok(worst);
    }
    for (i, u) in family.members().iter().enumerate() {
        let verdict = member_verdict(&v0, u, Some(i), tol)?;
        if verdict.worst_residual > worst.worst_residual || worst.violating_pair.is_none() {
            worst = verdict;
        }
    }
    if let Some(k) = family.generator() {
        let (sigma, elem) = generator_residual(&v0, k)?;
        if sigma > worst.worst_residual {
            worst = ConsistencyVerdict {
                consistent: false,
                worst_residual: sigma,
                violating_pair: Some(ViolatingPair { kernel_element: elem, unitary: k.clone(), member: None }),
            };
        }
    }
    worst.consistent = worst.worst_residual <= tol.residual_tol;
    Ok(worst)
}

/// `V̂_0 = ker Tr_B ∩ ⋂_U Ad_{U^dagger}(ker Tr_B)`.
pub fn consistent_kernel(family: &UnitaryFamily, tol: ToleranceConfig) -> Result<OperatorSubspace> {
    let layout = family.layout().clone();
    let ker = OperatorSubspace::full(layout, tol).kernel_of_partial_trace()?;
    let mut acc = ker.clone();
    for u in family.members() {
        if acc.dim() == 0 {
            break;
        }
        acc = acc.intersect(&ker.conjugated_by(&u.dagger())?)?;
    }
    Ok(acc)
}

/// `V' = V + V̂_0` with its per-member verification.
#[derive(Debug, Clone)]
pub struct TransformationSpace {
    pub space: OperatorSubspace,
    pub kernel: OperatorSubspace,
    /// Whether `V̂_0 ⊆ V` already holds. Reported, not enforced.
    pub kernel_contained: bool,
    /// Largest `||Tr_B(U A U^dagger) - Psi_U(Tr_B A)||` over the basis of `V'`.
    pub worst_residual: f64,
}

/// Every element of `V'` evolves like its `V`-representative under every
/// member of the family.
pub fn transformation_space(v: &OperatorSubspace, family: &UnitaryFamily) -> Result<TransformationSpace> {
    let verdict = is_family_consistent(v, family)?;
    if !verdict.consistent {
        return Err(Error::input(format!(
            "subspace is not consistent for the family (residual {:.3e})",
            verdict.worst_residual
        )));
    }
    let kernel = consistent_kernel(family, *v.tol())?;
    let space = v.sum(&kernel)?;
    let kernel_contained = v.contains_subspace(&kernel)?;
    let mut worst: f64 = 0.0;
    for u in family.members() {
        let psi = dynmap::synthesize(v.basis(), u, v.tol())?;
        for a in space.basis() {
            let lhs = operator::trace_bath(&operator::conjugate(u, a))?;
            let rhs = psi.apply(&operator::trace_bath(a)?)?;
            worst = worst.max((&lhs - &rhs).hs_norm());
        }
    }
    Ok(TransformationSpace { space, kernel, kernel_contained, worst_residual: worst })
}

/// Per-state maximality probe: is `V + C rho` still consistent? This does not
/// certify maximality of `V`.
pub fn extension_is_consistent(v: &OperatorSubspace, rho: &Operator, family: &UnitaryFamily) -> Result<bool> {
    if rho.layout().dims() != v.layout().dims() {
        return Err(Error::input("state layout does not match subspace"));
    }
    operator::ensure_density(rho, v.tol(), "extension state")?;
    let mut gens: Vec<Operator> = v.basis().to_vec();
    gens.push(rho.clone());
    let extended = OperatorSubspace::span_from_generators(&gens, *v.tol())?;
    Ok(is_family_consistent(&extended, family)?.consistent)
}

/// `V (x) B(H_W)` against `{ U (x) 1_W }`.
pub fn witness_extension_consistent(v: &OperatorSubspace, family: &UnitaryFamily, d_w: usize) -> Result<ConsistencyVerdict> {
    if d_w == 0 {
        return Err(Error::input("witness dimension must be at least 1"));
    }
    let witness = OperatorSubspace::full(SpaceLayout::single(d_w), *v.tol());
    let extended = v.tensor(&witness)?;
    let ext_family = family.tensor_identity(d_w)?;
    is_family_consistent(&extended, &ext_family)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub evolved_true: Operator,
    pub evolved_factored: Operator,
    /// `delta_1` between the two evolved system-witness states.
    pub mismatch: f64,
}

/// Compares the true reduced evolution of `rho_s (x) rho_BW` under
/// `SWAP (x) 1_W` with `Psi (x) id` applied to the reduced state, where `Psi`
/// is derived from `V = B(H_S) (x) Tr_W rho_BW`.
pub fn witness_counterexample(rho_s: &Operator, rho_bw: &Operator, tol: &ToleranceConfig) -> Result<WitnessReport> {
    let d = rho_s.dim();
    let dims = rho_bw.layout().dims();
    if dims.len() != 2 || dims[0] != d {
        return Err(Error::input(format!("bath-witness state must have layout [{d}, d_W], got {dims:?}")));
    }
    let d_w = dims[1];
    let rho_s = rho_s.clone().with_layout(SpaceLayout::single(d))?;
    operator::ensure_density(&rho_s, tol, "system state")?;
    operator::ensure_density(rho_bw, tol, "bath-witness state")?;

    let joint = operator::tensor(&rho_s, rho_bw);
    let u = operator::tensor(&operator::swap(d), &Operator::identity(SpaceLayout::single(d_w)));
    let evolved_true = operator::trace_bath(&operator::conjugate(&u, &joint))?;

    let rho_b = operator::partial_trace(rho_bw, &[0])?;
    let v = OperatorSubspace::full(SpaceLayout::single(d), *tol).tensor_with(&rho_b)?;
    let psi = dynmap::derive_map(&v, &operator::swap(d))?;
    let reduced = operator::trace_bath(&joint)?;
    let evolved_factored = psi.apply_tensor_identity(&reduced)?;
    let mismatch = operator::schatten_distance(&evolved_true, &evolved_factored, 1.0)?;
    Ok(WitnessReport { evolved_true, evolved_factored, mismatch })
}
