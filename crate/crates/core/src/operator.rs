//! Dense operators on small multipartite Hilbert spaces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{CMatrix, CVector, Error, Result, ToleranceConfig, C64};

/// Ordered tensor-factor dimensions, e.g. `[d_s, d_b]` or `[d_s, d_b, d_w]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceLayout {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl SpaceLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::input("layout needs at least one factor"));
        }
        if dims.contains(&0) {
            return Err(Error::input(format!("layout dims must be >= 1, got {dims:?}")));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::input("layout dimension overflows"))?;
        Ok(Self { dims, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dims.len() {
            return Err(Error::input("one label per factor required"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Single-factor layout of dimension `d`.
    pub fn single(d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        Self { dims: vec![d], labels: None }
    }

    /// System-bath layout `[d_s, d_b]`.
    pub fn bipartite(d_s: usize, d_b: usize) -> Self {
        assert!(d_s >= 1 && d_b >= 1, "dimension must be positive");
        Self { dims: vec![d_s, d_b], labels: None }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    /// Ambient Hilbert-space dimension (product of factor dimensions).
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &SpaceLayout) -> SpaceLayout {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        SpaceLayout { dims, labels }
    }

    /// Layout left after tracing out the factors not in `keep`.
    pub fn keep(&self, keep: &[usize]) -> SpaceLayout {
        SpaceLayout {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
            labels: self.labels.as_ref().map(|l| keep.iter().map(|&k| l[k].clone()).collect()),
        }
    }

    /// Layout with the bath (factor 1) removed.
    pub fn without_bath(&self) -> Result<SpaceLayout> {
        Ok(self.keep(&bath_complement(self)?))
    }
}

/// Factor indices kept by the bath partial trace: every factor except index 1.
pub(crate) fn bath_complement(layout: &SpaceLayout) -> Result<Vec<usize>> {
    if layout.num_factors() < 2 {
        return Err(Error::input("partial trace over the bath needs at least two factors"));
    }
    Ok((0..layout.num_factors()).filter(|&k| k != 1).collect())
}

/// A square complex matrix tagged with its tensor-factor layout.
#[derive(Clone, PartialEq)]
pub struct Operator {
    layout: SpaceLayout,
    matrix: CMatrix,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator{:?}{}", self.layout.dims, self.matrix)
    }
}

impl Operator {
    pub fn new(layout: SpaceLayout, matrix: CMatrix) -> Result<Self> {
        let n = layout.total();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::input(format!(
                "matrix is {}x{} but layout {:?} needs {n}x{n}",
                matrix.nrows(),
                matrix.ncols(),
                layout.dims
            )));
        }
        Ok(Self { layout, matrix })
    }

    /// Wraps a square matrix in a single-factor layout.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::input("operator matrix must be square and non-empty"));
        }
        let layout = SpaceLayout::single(matrix.nrows());
        Ok(Self { layout, matrix })
    }

    /// Row-major real/imaginary construction; handy for fixtures.
    pub fn from_rows(layout: SpaceLayout, rows: &[&[C64]]) -> Result<Self> {
        let n = rows.len();
        let flat: Vec<C64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        if flat.len() != n * n {
            return Err(Error::input("rows do not form a square matrix"));
        }
        Self::new(layout, CMatrix::from_row_slice(n, n, &flat))
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let n = layout.total();
        Self { layout, matrix: CMatrix::identity(n, n) }
    }

    pub fn zeros(layout: SpaceLayout) -> Self {
        let n = layout.total();
        Self { layout, matrix: CMatrix::zeros(n, n) }
    }

    /// Maximally mixed state `1/N`.
    pub fn maximally_mixed(layout: SpaceLayout) -> Self {
        let n = layout.total() as f64;
        Self::identity(layout).scale(C64::new(1.0 / n, 0.0))
    }

    /// Matrix unit `|row><col|`.
    pub fn matrix_unit(layout: SpaceLayout, row: usize, col: usize) -> Self {
        let mut op = Self::zeros(layout);
        op.matrix[(row, col)] = C64::new(1.0, 0.0);
        op
    }

    /// `|psi><psi|` for a (not necessarily normalized) ket.
    pub fn projector(layout: SpaceLayout, ket: &CVector) -> Result<Self> {
        Self::new(layout, ket * ket.adjoint())
    }

    /// Rebuilds an operator from its column-stacked vectorization.
    pub fn from_vectorized(layout: SpaceLayout, v: &[C64]) -> Result<Self> {
        let n = layout.total();
        if v.len() != n * n {
            return Err(Error::input("vectorized operator has the wrong length"));
        }
        Ok(Self { matrix: linalg::unvectorize(v, n), layout })
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_layout(self, layout: SpaceLayout) -> Result<Self> {
        Self::new(layout, self.matrix)
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> CVector {
        linalg::vectorize(&self.matrix)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn dagger(&self) -> Self {
        Self { layout: self.layout.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { layout: self.layout.clone(), matrix: self.matrix.transpose() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { layout: self.layout.clone(), matrix: &self.matrix * c }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Hilbert-Schmidt inner product `Tr(self^dagger other)`.
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        self.matrix.iter().zip(other.matrix.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        linalg::frobenius(&self.matrix)
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        self * other - other * self
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    pub fn hermiticity_residual(&self) -> f64 {
        linalg::frobenius(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        linalg::frobenius(&(self.matrix.adjoint() * &self.matrix - CMatrix::identity(n, n)))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Density-matrix predicate: Hermitian, `A >= -tol`, `|Tr A - 1| <= tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(1e-12) * self.hs_norm().max(1.0)) {
            return false;
        }
        if (self.trace() - C64::new(1.0, 0.0)).norm() > tol.max(1e-12) {
            return false;
        }
        matches!(self.min_eigenvalue(), Ok(m) if m >= -tol)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::eigh(&self.matrix)?.0)
    }

    /// Eigen-decomposition of the Hermitian part: ascending values, eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, CMatrix)> {
        linalg::eigh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        linalg::singular_values(&self.matrix)
    }

    /// `exp(c * H)` for Hermitian `H`, computed in the eigenbasis of `H`.
    pub fn exp_hermitian(&self, c: C64, tol: f64) -> Result<Self> {
        ensure_hermitian(self, tol)?;
        let (vals, vecs) = self.eigh()?;
        let diag = CVector::from_iterator(vals.len(), vals.iter().map(|&e| (c * e).exp()));
        let m = &vecs * CMatrix::from_diagonal(&diag) * vecs.adjoint();
        Ok(Self { layout: self.layout.clone(), matrix: m })
    }

    /// Unitary `exp(-i t H)` generated by a Hermitian `H`.
    pub fn evolution(&self, t: f64, tol: f64) -> Result<Self> {
        self.exp_hermitian(C64::new(0.0, -t), tol)
    }

    /// Largest absolute entry difference; layouts are ignored.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same_dim(&self, other: &Operator, what: &str) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "{what}: dimension mismatch ({} vs {})",
            self.dim(),
            other.dim()
        );
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs, "add");
        Operator { layout: self.layout.clone(), matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs, "sub");
        Operator { layout: self.layout.clone(), matrix: &self.matrix - &rhs.matrix }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs, "mul");
        Operator { layout: self.layout.clone(), matrix: &self.matrix * &rhs.matrix }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

pub(crate) fn ensure_hermitian(op: &Operator, tol: f64) -> Result<()> {
    let r = op.hermiticity_residual();
    if r > tol * op.hs_norm().max(1.0) {
        return Err(Error::input(format!("operator is not Hermitian (residual {r:.3e})")));
    }
    Ok(())
}

pub(crate) fn ensure_unitary(op: &Operator, tol: f64) -> Result<()> {
    let r = op.unitarity_residual();
    if r > tol {
        return Err(Error::input(format!("operator is not unitary (residual {r:.3e})")));
    }
    Ok(())
}

pub(crate) fn ensure_density(op: &Operator, tol: &ToleranceConfig, what: &str) -> Result<()> {
    let slack = tol.residual_tol.max(tol.psd_slack);
    if !op.is_density(slack) {
        return Err(Error::input(format!("{what} is not a density matrix")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Standard operators

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> Operator {
    let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    Operator { layout: SpaceLayout::single(2), matrix: m }
}

pub fn pauli_y() -> Operator {
    let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    Operator { layout: SpaceLayout::single(2), matrix: m }
}

pub fn pauli_z() -> Operator {
    let m = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    Operator { layout: SpaceLayout::single(2), matrix: m }
}

pub fn qubit_identity() -> Operator {
    Operator::identity(SpaceLayout::single(2))
}

/// `[1, X, Y, Z]`.
pub fn paulis() -> [Operator; 4] {
    [qubit_identity(), pauli_x(), pauli_y(), pauli_z()]
}

/// Qubit state `(1 + a . sigma) / 2` for a Bloch vector `a`.
pub fn bloch_state(a: [f64; 3]) -> Operator {
    let [_, x, y, z] = paulis();
    let m = qubit_identity().matrix + x.matrix * c(a[0], 0.) + y.matrix * c(a[1], 0.) + z.matrix * c(a[2], 0.);
    Operator { layout: SpaceLayout::single(2), matrix: m * c(0.5, 0.) }
}

/// Bloch vector `(Tr X rho, Tr Y rho, Tr Z rho)` of a qubit operator.
pub fn bloch_vector(rho: &Operator) -> [f64; 3] {
    let [_, x, y, z] = paulis();
    [x.hs_inner(rho).re, y.hs_inner(rho).re, z.hs_inner(rho).re]
}

/// SWAP on `C^d (x) C^d`.
pub fn swap(d: usize) -> Operator {
    let n = d * d;
    let mut m = CMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            m[(b * d + a, a * d + b)] = c(1., 0.);
        }
    }
    Operator { layout: SpaceLayout::bipartite(d, d), matrix: m }
}

// ---------------------------------------------------------------------------
// Core operations

/// Kronecker product with concatenated layout.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator { layout: a.layout.concat(&b.layout), matrix: a.matrix.kronecker(&b.matrix) }
}

/// Tensor product of several operators, left to right.
pub fn tensor_all(ops: &[&Operator]) -> Operator {
    let (first, rest) = ops.split_first().expect("at least one operator");
    rest.iter().fold((*first).clone(), |acc, op| tensor(&acc, op))
}

/// Partial trace keeping the factors listed in `keep` (in ascending order).
pub fn partial_trace(a: &Operator, keep: &[usize]) -> Result<Operator> {
    let dims = a.layout.dims();
    let nf = dims.len();
    if keep.is_empty() {
        return Err(Error::input("partial trace must keep at least one factor"));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&k| k >= nf) {
        return Err(Error::input(format!("factor index {bad} out of range for {nf} factors")));
    }
    let traced: Vec<usize> = (0..nf).filter(|k| !keep.contains(k)).collect();
    if traced.is_empty() {
        return Ok(a.clone());
    }

    let mut strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &f in factors {
            let mut next = Vec::with_capacity(offs.len() * dims[f]);
            for &o in &offs {
                for i in 0..dims[f] {
                    next.push(o + i * strides[f]);
                }
            }
            offs = next;
        }
        offs
    };
    let kept_off = offsets(&keep);
    let traced_off = offsets(&traced);

    let nk = kept_off.len();
    let mut out = CMatrix::zeros(nk, nk);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (col, &co) in kept_off.iter().enumerate() {
            out[(r, col)] = traced_off.iter().map(|&t| a.matrix[(ro + t, co + t)]).sum();
        }
    }
    Ok(Operator { layout: a.layout.keep(&keep), matrix: out })
}

/// Partial trace over the bath (factor 1), keeping every other factor.
pub fn trace_bath(a: &Operator) -> Result<Operator> {
    partial_trace(a, &bath_complement(&a.layout)?)
}

/// `U A U^dagger`; `U` must be unitary within `tol`.
pub fn adjoint_action(u: &Operator, a: &Operator, tol: f64) -> Result<Operator> {
    if u.dim() != a.dim() {
        return Err(Error::input(format!("unitary is {}-dimensional, operator {}", u.dim(), a.dim())));
    }
    ensure_unitary(u, tol)?;
    Ok(conjugate(u, a))
}

/// `U A U^dagger` without checks; keeps the layout of `a`.
pub fn conjugate(u: &Operator, a: &Operator) -> Operator {
    Operator { layout: a.layout.clone(), matrix: &u.matrix * &a.matrix * u.matrix.adjoint() }
}

/// `exp(-beta H) / Tr exp(-beta H)` for Hermitian `H`.
pub fn gibbs_state(h: &Operator, beta: f64, tol: f64) -> Result<Operator> {
    if !beta.is_finite() {
        return Err(Error::input("inverse temperature must be finite"));
    }
    ensure_hermitian(h, tol)?;
    let (vals, vecs) = h.eigh()?;
    // Shift by the extreme eigenvalue so the largest Boltzmann weight is 1.
    let shift = if beta >= 0.0 { vals[0] } else { vals[vals.len() - 1] };
    let weights: Vec<f64> = vals.iter().map(|&e| (-beta * (e - shift)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let diag = CVector::from_iterator(weights.len(), weights.iter().map(|&w| c(w / z, 0.)));
    let m = &vecs * CMatrix::from_diagonal(&diag) * vecs.adjoint();
    Ok(Operator { layout: h.layout.clone(), matrix: m })
}

/// Normalized Schatten distance `2^(-1/p) ||t1 - t2||_p`; `p = f64::INFINITY`
/// gives the spectral norm.
pub fn schatten_distance(t1: &Operator, t2: &Operator, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::input(format!("Schatten index must satisfy p >= 1, got {p}")));
    }
    if t1.dim() != t2.dim() {
        return Err(Error::input("Schatten distance between operators of different dimension"));
    }
    let sv = (t1 - t2).singular_values()?;
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    let norm = sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p);
    Ok(2f64.powf(-1.0 / p) * norm)
}

/// Relative entropy value; `Infinite` when the support condition fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }
}

/// `S(t1 || t2) = Tr t1 (log t1 - log t2)` in natural-log units.
pub fn relative_entropy(t1: &Operator, t2: &Operator, tol: &ToleranceConfig) -> Result<RelativeEntropy> {
    if t1.dim() != t2.dim() {
        return Err(Error::input("relative entropy between operators of different dimension"));
    }
    ensure_density(t1, tol, "first argument")?;
    ensure_density(t2, tol, "second argument")?;
    let cut = tol.entropy_support_tol;
    let (p, a) = t1.eigh()?;
    let (q, b) = t2.eigh()?;
    // overlap[i][j] = |<a_i|b_j>|^2
    let overlap = (a.adjoint() * &b).map(|z| z.norm_sqr());

    let mut s = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi <= cut {
            continue;
        }
        s += pi * pi.ln();
        for (j, &qj) in q.iter().enumerate() {
            let w = pi * overlap[(i, j)];
            if qj <= cut {
                if w > cut {
                    return Ok(RelativeEntropy::Infinite);
                }
                continue;
            }
            s -= w * qj.ln();
        }
    }
    Ok(RelativeEntropy::Finite(s.max(0.0)))
}
