//! Subsystem dynamical maps: synthesis from a consistent pair `(V, U)` and
//! analysis of linear maps on operator domains.
//!
//! A [`SubsystemMap`] stores the images of an orthonormal basis of its domain
//! `R`: column `k` of the coordinate matrix is the vectorized `Phi(r_k)`. Maps
//! on all of `B(H_S)` use the matrix-unit basis, so their coordinate matrix is
//! the column-stacking superoperator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::consistency;
use crate::linalg;
use crate::operator::{self, Operator, SpaceLayout};
use crate::opspace::OperatorSubspace;
use crate::random;
use crate::{CMatrix, CVector, Error, Result, ToleranceConfig, C64};

#[derive(Debug, Clone)]
pub struct SubsystemMap {
    domain: OperatorSubspace,
    coords: CMatrix,
    provenance: String,
}

impl SubsystemMap {
    pub fn new(domain: OperatorSubspace, coords: CMatrix, provenance: impl Into<String>) -> Result<Self> {
        if domain.layout().num_factors() != 1 {
            return Err(Error::input("map domain must live on a single-factor layout"));
        }
        if coords.nrows() != domain.ambient_dim() || coords.ncols() != domain.dim() {
            return Err(Error::input(format!(
                "coordinate matrix is {}x{}, expected {}x{}",
                coords.nrows(),
                coords.ncols(),
                domain.ambient_dim(),
                domain.dim()
            )));
        }
        Ok(Self { domain, coords, provenance: provenance.into() })
    }

    /// Full-domain map from its column-stacking superoperator.
    pub fn from_superoperator(d: usize, superop: CMatrix, provenance: impl Into<String>) -> Result<Self> {
        Self::from_superoperator_with_tol(d, superop, provenance, ToleranceConfig::default())
    }

    pub fn from_superoperator_with_tol(
        d: usize,
        superop: CMatrix,
        provenance: impl Into<String>,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        let domain = OperatorSubspace::full(SpaceLayout::single(d), tol);
        Self::new(domain, superop, provenance)
    }

    /// Full-domain map defined by its action on operators.
    pub fn from_fn<F>(d: usize, provenance: impl Into<String>, f: F) -> Result<Self>
    where
        F: Fn(&Operator) -> Operator,
    {
        let domain = OperatorSubspace::full(SpaceLayout::single(d), ToleranceConfig::default());
        let mut coords = CMatrix::zeros(d * d, d * d);
        for (k, e) in domain.basis().iter().enumerate() {
            let out = f(e);
            if out.dim() != d {
                return Err(Error::input("map output has the wrong dimension"));
            }
            coords.set_column(k, &out.vectorize());
        }
        Self::new(domain, coords, provenance)
    }

    /// `A -> sum_i K_i A K_i^dagger` on all of `B(H_S)`.
    pub fn from_kraus(kraus: &[Operator]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::input("empty Kraus list"))?;
        let d = first.dim();
        if kraus.iter().any(|k| k.dim() != d) {
            return Err(Error::input("Kraus operators have mixed dimensions"));
        }
        let layout = SpaceLayout::single(d);
        let ks: Vec<Operator> = kraus.iter().map(|k| k.clone().with_layout(layout.clone())).collect::<Result<_>>()?;
        Self::from_fn(d, "kraus", |a| {
            ks.iter()
                .fold(Operator::zeros(layout.clone()), |acc, k| &acc + &operator::conjugate(k, a))
        })
    }

    pub fn identity(d: usize) -> Self {
        let domain = OperatorSubspace::full(SpaceLayout::single(d), ToleranceConfig::default());
        Self { domain, coords: CMatrix::identity(d * d, d * d), provenance: "identity".into() }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn with_tol(mut self, tol: ToleranceConfig) -> Self {
        self.domain = self.domain.with_tol(tol);
        self
    }

    pub fn domain(&self) -> &OperatorSubspace {
        &self.domain
    }

    pub fn coords(&self) -> &CMatrix {
        &self.coords
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn tol(&self) -> &ToleranceConfig {
        self.domain.tol()
    }

    /// Hilbert-space dimension `d_S`.
    pub fn system_dim(&self) -> usize {
        self.domain.layout().total()
    }

    pub fn is_full_domain(&self) -> bool {
        self.domain.is_full()
    }

    /// Column-stacking superoperator `coords * Q_R^dagger` (annihilates `R^perp`).
    pub fn superoperator(&self) -> CMatrix {
        &self.coords * self.domain.frame().adjoint()
    }

    /// Image of the `k`-th domain basis element.
    pub fn basis_image(&self, k: usize) -> Operator {
        Operator::from_vectorized(self.domain.layout().clone(), self.coords.column(k).as_slice()).expect("rows")
    }

    /// `Phi(A)`; fails with a domain error when `A` is not in `R`.
    pub fn apply(&self, a: &Operator) -> Result<Operator> {
        let residual = self.domain.residual(a)?;
        if residual > self.domain.tol().residual_tol {
            return Err(Error::Domain { residual });
        }
        Ok(self.apply_projected(a))
    }

    /// `Phi(proj_R(A))` without the membership check.
    pub(crate) fn apply_projected(&self, a: &Operator) -> Operator {
        let coords = self.domain.frame().adjoint() * a.vectorize();
        let out = &self.coords * coords;
        Operator::from_vectorized(self.domain.layout().clone(), out.as_slice()).expect("rows")
    }

    /// Largest `|Tr Phi(r_k) - Tr r_k|` over the domain basis.
    pub fn trace_preservation_residual(&self) -> f64 {
        (0..self.domain.dim())
            .map(|k| (self.basis_image(k).trace() - self.domain.basis()[k].trace()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `||Phi(r^dagger) - Phi(r)^dagger||` over the domain basis; the
    /// domain must be closed under adjoints.
    pub fn hermiticity_residual(&self, tol: &ToleranceConfig) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (k, r) in self.domain.basis().iter().enumerate() {
            let rd = r.dagger();
            let res = self.domain.residual(&rd)?;
            if res > tol.residual_tol {
                return Err(Error::Refused("map domain is not closed under adjoints".into()));
            }
            let lhs = self.apply_projected(&rd);
            let rhs = self.basis_image(k).dagger();
            worst = worst.max((&lhs - &rhs).hs_norm());
        }
        Ok(worst)
    }

    /// Basis-independent distance between two maps: the larger of the domain
    /// mutual-containment residual and `max_k ||Phi(r_k) - Phi'(r_k)||`.
    pub fn deviation(&self, other: &SubsystemMap) -> Result<f64> {
        let dom = self.domain.equivalence_residual(&other.domain)?;
        let mut worst = dom;
        for (k, r) in self.domain.basis().iter().enumerate() {
            let mine = self.basis_image(k);
            let theirs = other.apply_projected(r);
            worst = worst.max((&mine - &theirs).hs_norm());
        }
        Ok(worst)
    }

    /// `a * self + b * other` on a common domain.
    pub fn linear_combination(&self, a: f64, other: &SubsystemMap, b: f64) -> Result<SubsystemMap> {
        if !self.domain.same_as(&other.domain)? {
            return Err(Error::input("maps have different domains"));
        }
        // Express other's action in self's domain basis.
        let change = other.domain.frame().adjoint() * self.domain.frame();
        let coords = &self.coords * C64::new(a, 0.0) + &other.coords * change * C64::new(b, 0.0);
        SubsystemMap::new(self.domain.clone(), coords, format!("{a}*({}) + {b}*({})", self.provenance, other.provenance))
    }

    /// Restriction `Phi|_{R'}` to a subspace `R'` of the domain.
    pub fn restricted_to(&self, sub: &OperatorSubspace) -> Result<SubsystemMap> {
        if !self.domain.contains_subspace(sub)? {
            return Err(Error::input("restriction domain is not contained in the map domain"));
        }
        let change = self.domain.frame().adjoint() * sub.frame();
        SubsystemMap::new(sub.clone(), &self.coords * change, format!("{} restricted", self.provenance))
    }

    /// Inverse of a full-domain map.
    pub fn inverse(&self) -> Result<SubsystemMap> {
        if !self.is_full_domain() {
            return Err(Error::Refused("inverse is only defined here for full-domain maps".into()));
        }
        let s = self.superoperator();
        let sv = linalg::singular_values(&s)?;
        let (smax, smin) = (sv.first().copied().unwrap_or(0.0), sv.last().copied().unwrap_or(0.0));
        if smin <= self.tol().rank_cut * smax {
            return Err(Error::Refused(format!("map is singular (smallest singular value {smin:.3e})")));
        }
        let inv = s.try_inverse().ok_or_else(|| Error::Refused("map is singular".into()))?;
        SubsystemMap::from_superoperator_with_tol(self.system_dim(), inv, format!("inverse of {}", self.provenance), *self.tol())
    }

    /// `self ∘ other` for full-domain maps only. Experimental: composing maps
    /// that act on restricted domains has no well-defined meaning here.
    pub fn compose(&self, other: &SubsystemMap) -> Result<SubsystemMap> {
        if !self.is_full_domain() || !other.is_full_domain() || self.system_dim() != other.system_dim() {
            return Err(Error::Refused("composition is only provided for full-domain maps of equal dimension".into()));
        }
        SubsystemMap::from_superoperator_with_tol(
            self.system_dim(),
            self.superoperator() * other.superoperator(),
            format!("({}) after ({})", self.provenance, other.provenance),
            *self.tol(),
        )
    }

    /// `(Phi (x) id)(X)` for `X` on a `[d_S, d_W]` layout.
    pub fn apply_tensor_identity(&self, x: &Operator) -> Result<Operator> {
        let d = self.system_dim();
        let dims = x.layout().dims();
        if dims.len() != 2 || dims[0] != d {
            return Err(Error::input(format!("expected a [{d}, d_W] operator, got {dims:?}")));
        }
        let dw = dims[1];
        let slayout = SpaceLayout::single(d);
        let mut out = Operator::zeros(x.layout().clone());
        for k in 0..dw {
            for l in 0..dw {
                let block = CMatrix::from_fn(d, d, |s, sp| x.matrix()[(s * dw + k, sp * dw + l)]);
                let a = Operator::new(slayout.clone(), block)?;
                let img = self.apply(&a)?;
                let unit = Operator::matrix_unit(SpaceLayout::single(dw), k, l);
                out = &out + &operator::tensor(&img, &unit);
            }
        }
        Ok(out)
    }

    /// `(id (x) Phi)(X)` for `X` on a `[d_A, d_S]` layout.
    pub fn apply_identity_tensor(&self, x: &Operator) -> Result<Operator> {
        let d = self.system_dim();
        let dims = x.layout().dims();
        if dims.len() != 2 || dims[1] != d {
            return Err(Error::input(format!("expected a [d_A, {d}] operator, got {dims:?}")));
        }
        let da = dims[0];
        let slayout = SpaceLayout::single(d);
        let mut out = Operator::zeros(x.layout().clone());
        for k in 0..da {
            for l in 0..da {
                let block = CMatrix::from_fn(d, d, |s, sp| x.matrix()[(k * d + s, l * d + sp)]);
                let b = Operator::new(slayout.clone(), block)?;
                let img = self.apply(&b)?;
                let unit = Operator::matrix_unit(SpaceLayout::single(da), k, l);
                out = &out + &operator::tensor(&unit, &img);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Synthesis

/// The unique map `Psi` with `Psi(Tr_B A) = Tr_B(U A U^dagger)` for all `A` in `V`.
///
/// Refuses with [`Error::Inconsistent`] when `V` is not `U`-consistent.
pub fn derive_map(v: &OperatorSubspace, u: &Operator) -> Result<SubsystemMap> {
    derive_map_from_elements(v, u, v.basis())
}

/// As [`derive_map`], selecting the independent subset from `elems`, a
/// spanning list of elements of `V` (e.g. its generators in some order).
pub fn derive_map_from_elements(v: &OperatorSubspace, u: &Operator, elems: &[Operator]) -> Result<SubsystemMap> {
    if v.dim() == 0 {
        return Err(Error::input("cannot derive a map from the zero subspace"));
    }
    let verdict = consistency::is_u_consistent(v, u)?;
    if !verdict.consistent {
        let kernel_element = verdict
            .violating_pair
            .map(|p| p.kernel_element)
            .unwrap_or_else(|| Operator::zeros(v.layout().clone()));
        return Err(Error::Inconsistent { residual: verdict.worst_residual, kernel_element: Box::new(kernel_element) });
    }
    for e in elems {
        let r = v.residual(e)?;
        if r > v.tol().residual_tol {
            return Err(Error::input(format!("element outside V (residual {r:.3e})")));
        }
    }
    synthesize(elems, u, v.tol())
}

/// Builds `Psi` from a maximal independent subset of `{Tr_B e}` without
/// checking consistency.
pub(crate) fn synthesize(elems: &[Operator], u: &Operator, tol: &ToleranceConfig) -> Result<SubsystemMap> {
    let traced: Vec<Operator> = elems.iter().map(operator::trace_bath).collect::<Result<_>>()?;
    let evolved: Vec<Operator> = elems
        .iter()
        .map(|e| operator::trace_bath(&operator::conjugate(u, e)))
        .collect::<Result<_>>()?;
    let slayout = traced.first().ok_or_else(|| Error::input("no elements"))?.layout().clone();
    if slayout.num_factors() != 1 {
        return Err(Error::input("map synthesis expects a system-bath layout"));
    }
    let domain = OperatorSubspace::span_from_generators(&traced, *tol)?;
    let d = domain.dim();
    if d == 0 {
        return Err(Error::input("Tr_B V is zero; no map to derive"));
    }
    // Domain coordinates of every traced element.
    let m = traced.len();
    let mut c = CMatrix::zeros(d, m);
    for (j, t) in traced.iter().enumerate() {
        c.set_column(j, &domain.coordinates(t)?);
    }
    let pivots = pivot_columns(&c, d);
    let c_sel = CMatrix::from_fn(d, d, |i, j| c[(i, pivots[j])]);
    let n2 = domain.ambient_dim();
    let o_sel = CMatrix::from_fn(n2, d, |i, j| evolved[pivots[j]].vectorize()[i]);
    let inv = c_sel
        .try_inverse()
        .ok_or_else(|| Error::Numerical("selected traced elements are not independent".into()))?;
    SubsystemMap::new(domain, o_sel * inv, "derived from (V, U)")
}

/// Greedy column pivoting (modified Gram-Schmidt): indices of `count`
/// columns of `c` that are maximally independent.
fn pivot_columns(c: &CMatrix, count: usize) -> Vec<usize> {
    let mut work = c.clone();
    let mut chosen = Vec::with_capacity(count);
    for _ in 0..count {
        let (best, _) = (0..work.ncols())
            .filter(|j| !chosen.contains(j))
            .map(|j| (j, work.column(j).norm()))
            .fold((usize::MAX, -1.0), |acc, (j, n)| if n > acc.1 { (j, n) } else { acc });
        if best == usize::MAX {
            break;
        }
        chosen.push(best);
        let q: CVector = work.column(best).into_owned();
        let qn = q.norm();
        if qn == 0.0 {
            continue;
        }
        let q = q / C64::new(qn, 0.0);
        for j in 0..work.ncols() {
            if chosen.contains(&j) {
                continue;
            }
            let proj = q.dotc(&work.column(j));
            let update = &q * proj;
            let mut col = work.column_mut(j);
            col -= update;
        }
    }
    chosen
}

/// Largest `||Psi(Tr_B A) - Tr_B(U A U^dagger)|| / max(1, ||A||)` over the
/// given elements of `V`.
pub fn commutation_residual(phi: &SubsystemMap, u: &Operator, elems: &[Operator]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for a in elems {
        let lhs = phi.apply(&operator::trace_bath(a)?)?;
        let rhs = operator::trace_bath(&operator::conjugate(u, a))?;
        worst = worst.max((&lhs - &rhs).hs_norm() / a.hs_norm().max(1.0));
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Analysis

/// Unnormalized Choi matrix `sum_ij |i><j| (x) Phi(|i><j|)`.
pub fn choi_matrix(phi: &SubsystemMap) -> Result<Operator> {
    if !phi.is_full_domain() {
        return Err(Error::Refused("Choi undefined on proper subspace".into()));
    }
    let d = phi.system_dim();
    let layout = SpaceLayout::single(d);
    let mut choi = Operator::zeros(SpaceLayout::bipartite(d, d));
    for i in 0..d {
        for j in 0..d {
            let unit = Operator::matrix_unit(layout.clone(), i, j);
            let img = phi.apply_projected(&unit);
            choi = &choi + &operator::tensor(&unit, &img);
        }
    }
    Ok(choi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub completely_positive: bool,
    /// Minimum eigenvalue of the unnormalized Choi matrix.
    pub min_choi_eigenvalue: f64,
}

/// CP iff the minimum Choi eigenvalue is at least `-psd_slack`.
pub fn is_cp(phi: &SubsystemMap) -> Result<CpVerdict> {
    let choi = choi_matrix(phi)?;
    let min = choi.min_eigenvalue()?;
    Ok(CpVerdict { completely_positive: min >= -phi.tol().psd_slack, min_choi_eigenvalue: min })
}

/// Kraus operators from the spectral decomposition of the Choi matrix:
/// `<a|K_k|i> = sqrt(lambda_k) v_k[i d + a]`. Eigenvalues at or below
/// `psd_slack` are dropped; refused when the map is not CP.
pub fn kraus_from_choi(phi: &SubsystemMap) -> Result<Vec<Operator>> {
    let choi = choi_matrix(phi)?;
    let slack = phi.tol().psd_slack;
    let (vals, vecs) = choi.eigh()?;
    if vals.first().is_some_and(|&m| m < -slack) {
        return Err(Error::Refused(format!("map is not CP (min Choi eigenvalue {:.3e})", vals[0])));
    }
    let d = phi.system_dim();
    let layout = SpaceLayout::single(d);
    let kraus: Vec<Operator> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > slack)
        .map(|(k, &l)| {
            let root = C64::new(l.sqrt(), 0.0);
            let m = CMatrix::from_fn(d, d, |a, i| vecs[(i * d + a, k)] * root);
            Operator::new(layout.clone(), m).expect("square")
        })
        .collect();
    if kraus.is_empty() {
        return Err(Error::Refused("map has a zero Choi matrix".into()));
    }
    Ok(kraus)
}

/// Outcome of a sampled positivity scan. Absence of a counterexample is not a
/// proof of positivity.
#[derive(Debug, Clone)]
pub enum PositivityScan {
    NoViolationFound { states_checked: usize },
    Counterexample { state: Operator, min_eigenvalue: f64, states_checked: usize },
}

impl PositivityScan {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, PositivityScan::Counterexample { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            PositivityScan::NoViolationFound { states_checked } => {
                format!("no violation found in {states_checked} states (not a proof of positivity)")
            }
            PositivityScan::Counterexample { min_eigenvalue, states_checked, .. } => {
                format!("counterexample after {states_checked} states: output min eigenvalue {min_eigenvalue:.6e}")
            }
        }
    }
}

/// Pure states along the axes: `|i>`, `(|i> ± |j>)/√2`, `(|i> ± i|j>)/√2`.
/// For a qubit these are the six Bloch-axis states.
pub fn axis_states(d: usize) -> Vec<Operator> {
    let layout = SpaceLayout::single(d);
    let mut out = Vec::new();
    let one = C64::new(1.0, 0.0);
    for i in 0..d {
        let mut v = CVector::zeros(d);
        v[i] = one;
        out.push(Operator::projector(layout.clone(), &v).expect("dims"));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            for phase in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut v = CVector::zeros(d);
                v[i] = C64::new(s, 0.0);
                v[j] = phase * s;
                out.push(Operator::projector(layout.clone(), &v).expect("dims"));
            }
        }
    }
    out
}

/// Maps a candidate state into the domain: Hermitian projection onto `R`
/// followed by trace normalization. `None` if the result is not a state.
fn project_to_domain_state(domain: &OperatorSubspace, rho: &Operator, tol: &ToleranceConfig) -> Option<Operator> {
    if domain.is_full() {
        return Some(rho.clone());
    }
    let p = domain.project(rho).ok()?.hermitian_part();
    let tr = p.trace().re;
    if tr <= tol.residual_tol {
        return None;
    }
    let p = p.scale_real(1.0 / tr);
    if domain.contains(&p).ok()? && p.is_density(tol.psd_slack.max(1e-12)) {
        Some(p)
    } else {
        None
    }
}

/// Evaluates `Phi` on the axis states and `n_samples` Haar-random pure states
/// (projected into the domain when it is proper) and reports the first output
/// with an eigenvalue below `-psd_slack`.
pub fn positivity_scan(phi: &SubsystemMap, n_samples: usize, seed: u64) -> Result<PositivityScan> {
    if n_samples == 0 {
        return Err(Error::input("positivity scan needs at least one sample"));
    }
    let tol = *phi.tol();
    let d = phi.system_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = axis_states(d)
        .into_iter()
        .chain((0..n_samples).map(|_| random::pure_state(&mut rng, d)));
    let mut checked = 0;
    for cand in candidates {
        let Some(state) = project_to_domain_state(phi.domain(), &cand, &tol) else {
            continue;
        };
        checked += 1;
        let min = phi.apply_projected(&state).min_eigenvalue()?;
        if min < -tol.psd_slack {
            return Ok(PositivityScan::Counterexample { state, min_eigenvalue: min, states_checked: checked });
        }
    }
    Ok(PositivityScan::NoViolationFound { states_checked: checked })
}

/// `rho ∈ R ∩ D_S` and `Phi(rho) >= -psd_slack`.
pub fn positive_domain_membership(phi: &SubsystemMap, rho: &Operator) -> bool {
    let tol = phi.tol();
    match phi.domain().residual(rho) {
        Ok(r) if r <= tol.residual_tol => {}
        _ => return false,
    }
    if !rho.is_density(tol.residual_tol.max(tol.psd_slack)) {
        return false;
    }
    matches!(phi.apply_projected(rho).min_eigenvalue(), Ok(m) if m >= -tol.psd_slack)
}

/// Accepted members of the positive domain and the dimension of their span.
#[derive(Debug, Clone)]
pub struct PositiveDomainSample {
    pub members: Vec<Operator>,
    pub span_dim: usize,
    pub candidates: usize,
}

impl PositiveDomainSample {
    pub fn span(&self, tol: ToleranceConfig) -> Result<OperatorSubspace> {
        OperatorSubspace::span_from_generators(&self.members, tol)
    }
}

/// Rejection-samples states of `R` and keeps those mapped to states.
///
/// A deterministic grid comes first: the maximally mixed state and mixtures
/// `(1-s) 1/d + s * axis` for `s = 2^0 .. 2^-12`. Then `n` random candidates
/// `(1-s) 1/d + s * psi` with `s` log-uniform in `[1e-3, 1]` when `Phi(1/d)` is
/// positive, or uniform in `[0, 1]` otherwise.
pub fn sample_positive_domain(phi: &SubsystemMap, n: usize, seed: u64) -> Result<PositiveDomainSample> {
    if n == 0 {
        return Err(Error::input("sample budget must be at least 1"));
    }
    let tol = *phi.tol();
    let d = phi.system_dim();
    let layout = SpaceLayout::single(d);
    let mixed = Operator::maximally_mixed(layout);
    let mix = |s: f64, psi: &Operator| &mixed.scale_real(1.0 - s) + &psi.scale_real(s);
    let biased = matches!(phi.apply_projected(&mixed).min_eigenvalue(), Ok(m) if m >= -tol.psd_slack);

    let mut candidates = vec![mixed.clone()];
    for axis in axis_states(d) {
        for k in 0..=12 {
            candidates.push(mix(0.5f64.powi(k), &axis));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n {
        let psi = random::pure_state(&mut rng, d);
        let s = if biased { 10f64.powf(-3.0 * rng.random::<f64>()) } else { rng.random::<f64>() };
        candidates.push(mix(s, &psi));
    }

    let total = candidates.len();
    let members: Vec<Operator> = candidates
        .iter()
        .filter_map(|c| project_to_domain_state(phi.domain(), c, &tol))
        .filter(|rho| positive_domain_membership(phi, rho))
        .collect();
    if members.is_empty() {
        return Err(Error::EmptySample { budget: n });
    }
    let span_dim = OperatorSubspace::span_from_generators(&members, tol)?.dim();
    Ok(PositiveDomainSample { members, span_dim, candidates: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{bloch_state, pauli_x, pauli_y, pauli_z, qubit_identity, tensor};

    fn transpose() -> SubsystemMap {
        SubsystemMap::from_fn(2, "transpose", |a| a.transpose()).unwrap()
    }

    fn repolarizer(eps: f64) -> SubsystemMap {
        SubsystemMap::from_fn(2, "repolarizer", |a| {
            &a.scale_real(1.0 / eps) - &qubit_identity().scale(a.trace() * ((1.0 - eps) / (2.0 * eps)))
        })
        .unwrap()
    }

    #[test]
    fn apply_identity_and_domain_error() {
        let id = SubsystemMap::identity(2);
        let x = pauli_x();
        assert!((id.apply(&x).unwrap() - x.clone()).hs_norm() < 1e-15);

        let r = OperatorSubspace::span_from_generators(&[qubit_identity(), pauli_x()], ToleranceConfig::default()).unwrap();
        let restricted = id.restricted_to(&r).unwrap();
        assert!(matches!(restricted.apply(&pauli_z()), Err(Error::Domain { .. })));
        assert!((restricted.apply(&x).unwrap() - x).hs_norm() < 1e-14);
    }

    #[test]
    fn repolarizer_fixes_maximally_mixed() {
        let phi = repolarizer(0.1);
        let half = Operator::maximally_mixed(SpaceLayout::single(2));
        assert!((phi.apply(&half).unwrap() - half).hs_norm() < 1e-14);
    }

    #[test]
    fn choi_examples() {
        // Identity: d * |Phi+><Phi+|, eigenvalues {2, 0, 0, 0}.
        let choi = choi_matrix(&SubsystemMap::identity(2)).unwrap();
        let ev = choi.eigenvalues().unwrap();
        assert!((ev[3] - 2.0).abs() < 1e-12 && ev[..3].iter().all(|e| e.abs() < 1e-12));

        // Transpose: the Choi matrix is SWAP, eigenvalues {-1, 1, 1, 1}.
        let choi = choi_matrix(&transpose()).unwrap();
        assert!((choi.matrix() - operator::swap(2).matrix()).norm() < 1e-14);
        let verdict = is_cp(&transpose()).unwrap();
        assert!(!verdict.completely_positive);
        assert!((verdict.min_choi_eigenvalue + 1.0).abs() < 1e-12);

        assert!(!is_cp(&repolarizer(0.1)).unwrap().completely_positive);

        let r = OperatorSubspace::span_from_generators(&[qubit_identity()], ToleranceConfig::default()).unwrap();
        let restricted = SubsystemMap::identity(2).restricted_to(&r).unwrap();
        assert!(matches!(choi_matrix(&restricted), Err(Error::Refused(_))));
    }

    #[test]
    fn choi_is_linear() {
        let a = transpose();
        let b = repolarizer(0.3);
        let alpha = 0.7;
        let combo = a.linear_combination(alpha, &b, 1.0).unwrap();
        let lhs = choi_matrix(&combo).unwrap();
        let rhs = &choi_matrix(&a).unwrap().scale_real(alpha) + &choi_matrix(&b).unwrap();
        assert!((&lhs - &rhs).hs_norm() < 1e-12);
    }

    #[test]
    fn positivity_scan_examples() {
        let scan = positivity_scan(&SubsystemMap::identity(2), 50, 1).unwrap();
        assert!(!scan.is_counterexample());
        let scan = positivity_scan(&transpose(), 200, 2).unwrap();
        assert!(!scan.is_counterexample());

        let eps = 0.1;
        match positivity_scan(&repolarizer(eps), 10, 3).unwrap() {
            PositivityScan::Counterexample { min_eigenvalue, .. } => {
                assert!((min_eigenvalue + (1.0 - eps) / (2.0 * eps)).abs() < 1e-9);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
        assert!(positivity_scan(&transpose(), 0, 0).is_err());
    }

    #[test]
    fn positive_domain_membership_repolarizer() {
        let eps = 0.2;
        let phi = repolarizer(eps);
        assert!(positive_domain_membership(&phi, &bloch_state([eps, 0.0, 0.0])));
        assert!(positive_domain_membership(&phi, &bloch_state([0.0, 0.0, -eps * 0.5])));
        assert!(!positive_domain_membership(&phi, &bloch_state([0.0, 2.0 * eps, 0.0])));
        // Not a state.
        assert!(!positive_domain_membership(&phi, &qubit_identity()));

        let id = SubsystemMap::identity(2);
        assert!(positive_domain_membership(&id, &bloch_state([0.6, 0.0, 0.8])));
    }

    #[test]
    fn positive_domain_sampling() {
        let sample = sample_positive_domain(&repolarizer(0.1), 200, 5).unwrap();
        assert_eq!(sample.span_dim, 4);
        let sample = sample_positive_domain(&SubsystemMap::identity(3), 50, 6).unwrap();
        assert_eq!(sample.span_dim, 9);
        assert!(sample_positive_domain(&SubsystemMap::identity(2), 0, 0).is_err());
    }

    #[test]
    fn empty_positive_domain() {
        // Phi(rho) = rho + 2*Tr(rho)*X/... has no positive outputs: Bloch shift of length 3.
        let phi = SubsystemMap::from_fn(2, "shift", |a| &a.clone() + &pauli_x().scale(a.trace() * 1.5)).unwrap();
        assert!(matches!(sample_positive_domain(&phi, 100, 1), Err(Error::EmptySample { .. })));
    }

    #[test]
    fn tensor_identity_application() {
        let phi = transpose();
        let a = pauli_y();
        let w = pauli_z();
        let out = phi.apply_tensor_identity(&tensor(&a, &w)).unwrap();
        assert!((&out - &tensor(&a.transpose(), &w)).hs_norm() < 1e-14);
        let out = phi.apply_identity_tensor(&tensor(&w, &a)).unwrap();
        assert!((&out - &tensor(&w, &a.transpose())).hs_norm() < 1e-14);
    }

    #[test]
    fn inverse_and_compose() {
        let phi = repolarizer(0.25);
        let inv = phi.inverse().unwrap();
        let id = phi.compose(&inv).unwrap();
        assert!(id.deviation(&SubsystemMap::identity(2)).unwrap() < 1e-12);
        let singular = SubsystemMap::from_fn(2, "trace", |a| qubit_identity().scale(a.trace() * 0.5)).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Refused(_))));
    }

    #[test]
    fn kraus_map_matches_direct_sum() {
        let s = (0.5f64).sqrt();
        let k = [qubit_identity().scale_real(s), pauli_x().scale_real(s)];
        let phi = SubsystemMap::from_kraus(&k).unwrap();
        let rho = bloch_state([0.1, 0.2, 0.3]);
        let direct = &operator::conjugate(&k[0], &rho) + &operator::conjugate(&k[1], &rho);
        assert!((phi.apply(&rho).unwrap() - direct).hs_norm() < 1e-14);
        assert!(phi.trace_preservation_residual() < 1e-14);
    }

    #[test]
    fn kraus_from_choi_reproduces_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let phi = random::cptp_map(&mut rng, 3, 2);
        let kraus = kraus_from_choi(&phi).unwrap();
        assert_eq!(kraus.len(), 2);
        assert!(SubsystemMap::from_kraus(&kraus).unwrap().deviation(&phi).unwrap() < 1e-12);
        let transpose = SubsystemMap::from_fn(2, "t", |a| a.transpose()).unwrap();
        assert!(matches!(kraus_from_choi(&transpose), Err(Error::Refused(_))));
    }
}
