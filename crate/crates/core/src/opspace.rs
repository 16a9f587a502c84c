//! Operator subspaces with Hilbert-Schmidt orthonormal bases.
//!
//! A subspace is stored as an `N^2 x d` frame whose columns are the
//! column-stacked vectorizations of an orthonormal basis. All rank decisions go
//! through the [`ToleranceConfig`] carried by the subspace.

use std::fmt;

use crate::linalg;
use crate::operator::{self, Operator, SpaceLayout};
use crate::{CMatrix, CVector, Error, Result, ToleranceConfig};

#[derive(Clone)]
pub struct OperatorSubspace {
    layout: SpaceLayout,
    basis: Vec<Operator>,
    generators: Vec<Operator>,
    frame: CMatrix,
    tol: ToleranceConfig,
}

impl fmt::Debug for OperatorSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorSubspace")
            .field("dims", &self.layout.dims())
            .field("dim", &self.dim())
            .field("generators", &self.generators.len())
            .finish()
    }
}

fn same_dims(a: &SpaceLayout, b: &SpaceLayout) -> bool {
    a.dims() == b.dims()
}

impl OperatorSubspace {
    /// Orthonormal basis of `span(gens)` from the SVD of the stacked,
    /// vectorized generators; singular values at or below
    /// `rank_cut * sigma_max` are discarded.
    pub fn span_from_generators(gens: &[Operator], tol: ToleranceConfig) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::input("cannot span an empty generator list"))?;
        let layout = first.layout().clone();
        if let Some(bad) = gens.iter().find(|g| !same_dims(g.layout(), &layout)) {
            return Err(Error::input(format!(
                "mixed layouts in generator list: {:?} vs {:?}",
                layout.dims(),
                bad.layout().dims()
            )));
        }
        if gens.iter().any(|g| !g.is_finite()) {
            return Err(Error::input("generator has non-finite entries"));
        }
        let n2 = layout.total().pow(2);
        let mut stacked = CMatrix::zeros(n2, gens.len());
        for (j, g) in gens.iter().enumerate() {
            stacked.set_column(j, &g.vectorize());
        }
        let frame = linalg::range_basis(&stacked, tol.rank_cut)?;
        Ok(Self::from_frame(layout, frame, gens.to_vec(), tol))
    }

    /// Builds a subspace from an already orthonormal basis, checking the Gram matrix.
    pub fn from_orthonormal_basis(
        layout: SpaceLayout,
        basis: Vec<Operator>,
        generators: Option<Vec<Operator>>,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        let n2 = layout.total().pow(2);
        if basis.iter().any(|b| !same_dims(b.layout(), &layout)) {
            return Err(Error::input("basis element layout does not match subspace layout"));
        }
        if basis.len() > n2 {
            return Err(Error::input("more basis elements than the ambient dimension"));
        }
        let mut frame = CMatrix::zeros(n2, basis.len());
        for (j, b) in basis.iter().enumerate() {
            frame.set_column(j, &b.vectorize());
        }
        let gram = frame.adjoint() * &frame;
        let dev = linalg::frobenius(&(gram - CMatrix::identity(basis.len(), basis.len())));
        let bound = tol.residual_tol.max(1e-12) * (basis.len().max(1) as f64);
        if dev.is_nan() || dev > bound {
            return Err(Error::input(format!("basis is not orthonormal (Gram deviation {dev:.3e})")));
        }
        let generators = generators.unwrap_or_else(|| basis.clone());
        let space = Self { layout, basis, generators, frame, tol };
        if let Some(g) = space.generators.iter().find(|g| !space.contains_unchecked(g)) {
            return Err(Error::input(format!(
                "generator outside the span of the basis (residual {:.3e})",
                space.residual_unchecked(g)
            )));
        }
        Ok(space)
    }

    fn from_frame(layout: SpaceLayout, frame: CMatrix, generators: Vec<Operator>, tol: ToleranceConfig) -> Self {
        let basis = frame
            .column_iter()
            .map(|col| Operator::from_vectorized(layout.clone(), col.as_slice()).expect("frame column length"))
            .collect();
        Self { layout, basis, generators, frame, tol }
    }

    /// The zero subspace.
    pub fn zero(layout: SpaceLayout, tol: ToleranceConfig) -> Self {
        let n2 = layout.total().pow(2);
        Self::from_frame(layout, CMatrix::zeros(n2, 0), Vec::new(), tol)
    }

    /// All of `B(H)`, with matrix units ordered by their vectorization index so
    /// that coordinates coincide with the column-stacked vector.
    pub fn full(layout: SpaceLayout, tol: ToleranceConfig) -> Self {
        let n2 = layout.total().pow(2);
        Self::from_frame(layout, CMatrix::identity(n2, n2), Vec::new(), tol).with_basis_as_generators()
    }

    fn with_basis_as_generators(mut self) -> Self {
        self.generators = self.basis.clone();
        self
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn basis(&self) -> &[Operator] {
        &self.basis
    }

    pub fn generators(&self) -> &[Operator] {
        &self.generators
    }

    pub fn tol(&self) -> &ToleranceConfig {
        &self.tol
    }

    pub fn with_tol(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    /// Columns are the vectorized basis elements.
    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    fn check_layout(&self, a: &Operator) -> Result<()> {
        if !same_dims(a.layout(), &self.layout) {
            return Err(Error::input(format!(
                "layout mismatch: subspace {:?}, operator {:?}",
                self.layout.dims(),
                a.layout().dims()
            )));
        }
        Ok(())
    }

    fn check_same_layout(&self, other: &OperatorSubspace) -> Result<()> {
        if !same_dims(&other.layout, &self.layout) {
            return Err(Error::input(format!(
                "layout mismatch: {:?} vs {:?}",
                self.layout.dims(),
                other.layout.dims()
            )));
        }
        Ok(())
    }

    /// Coordinates of the orthogonal projection of `a` in the orthonormal basis.
    pub fn coordinates(&self, a: &Operator) -> Result<CVector> {
        self.check_layout(a)?;
        Ok(self.frame.adjoint() * a.vectorize())
    }

    /// Element with the given basis coordinates.
    pub fn element(&self, coords: &CVector) -> Operator {
        let v = &self.frame * coords;
        Operator::from_vectorized(self.layout.clone(), v.as_slice()).expect("frame rows")
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, a: &Operator) -> Result<Operator> {
        let coords = self.coordinates(a)?;
        Ok(self.element(&coords))
    }

    fn residual_unchecked(&self, a: &Operator) -> f64 {
        let v = a.vectorize();
        let r = &v - &self.frame * (self.frame.adjoint() * &v);
        r.norm() / a.hs_norm().max(1.0)
    }

    fn contains_unchecked(&self, a: &Operator) -> bool {
        self.residual_unchecked(a) <= self.tol.residual_tol
    }

    /// `||A - proj(A)||_2 / max(1, ||A||_2)`.
    pub fn residual(&self, a: &Operator) -> Result<f64> {
        self.check_layout(a)?;
        Ok(self.residual_unchecked(a))
    }

    pub fn contains(&self, a: &Operator) -> Result<bool> {
        Ok(self.residual(a)? <= self.tol.residual_tol)
    }

    /// Largest residual of `other`'s basis elements against `self`
    /// (zero when `other` is contained in `self`).
    pub fn containment_residual(&self, other: &OperatorSubspace) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok(other.basis.iter().map(|b| self.residual_unchecked(b)).fold(0.0, f64::max))
    }

    pub fn contains_subspace(&self, other: &OperatorSubspace) -> Result<bool> {
        Ok(self.containment_residual(other)? <= self.tol.residual_tol)
    }

    /// Mutual-containment residual; subspace equality does not depend on basis choice.
    pub fn equivalence_residual(&self, other: &OperatorSubspace) -> Result<f64> {
        Ok(self.containment_residual(other)?.max(other.containment_residual(self)?))
    }

    pub fn same_as(&self, other: &OperatorSubspace) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.equivalence_residual(other)? <= self.tol.residual_tol)
    }

    /// `V + W`.
    pub fn sum(&self, other: &OperatorSubspace) -> Result<OperatorSubspace> {
        self.check_same_layout(other)?;
        let elems: Vec<Operator> = self.basis.iter().chain(&other.basis).cloned().collect();
        if elems.is_empty() {
            return Ok(Self::zero(self.layout.clone(), self.tol));
        }
        let mut out = Self::span_from_generators(&elems, self.tol)?;
        out.generators = self.generators.iter().chain(&other.generators).cloned().collect();
        Ok(out)
    }

    /// `V ∩ W`: coordinates `a` with `(1 - P_W) Q_V a = 0`.
    pub fn intersect(&self, other: &OperatorSubspace) -> Result<OperatorSubspace> {
        self.check_same_layout(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.layout.clone(), self.tol));
        }
        let complement = &self.frame - &other.frame * (other.frame.adjoint() * &self.frame);
        let null = linalg::null_basis(&complement, self.tol.rank_cut)?;
        let frame = &self.frame * null;
        Ok(Self::from_frame(self.layout.clone(), frame, Vec::new(), self.tol).with_basis_as_generators())
    }

    /// Image of the subspace under a linear map on operators.
    pub fn map_elements<F>(&self, f: F) -> Result<OperatorSubspace>
    where
        F: Fn(&Operator) -> Result<Operator>,
    {
        let images: Vec<Operator> = self.basis.iter().map(&f).collect::<Result<_>>()?;
        if images.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Self::span_from_generators(&images, self.tol)?;
        if !self.generators.is_empty() {
            out.generators = self.generators.iter().map(&f).collect::<Result<_>>()?;
        }
        Ok(out)
    }

    /// `Ad_U V = { U A U^dagger : A in V }`.
    pub fn conjugated_by(&self, u: &Operator) -> Result<OperatorSubspace> {
        if u.dim() != self.layout.total() {
            return Err(Error::input("unitary dimension does not match subspace"));
        }
        operator::ensure_unitary(u, self.tol.residual_tol.max(1e-10))?;
        self.map_elements(|a| Ok(operator::conjugate(u, a)))
    }

    /// `Tr_B V` as a subspace of the bath-free layout.
    pub fn bath_trace_image(&self) -> Result<OperatorSubspace> {
        let layout = self.layout.without_bath()?;
        let mut traced: Vec<Operator> = self.basis.iter().map(operator::trace_bath).collect::<Result<_>>()?;
        if traced.is_empty() {
            return Ok(Self::zero(layout, self.tol));
        }
        let mut out = Self::span_from_generators(&traced, self.tol)?;
        if !self.generators.is_empty() {
            traced = self.generators.iter().map(operator::trace_bath).collect::<Result<_>>()?;
            out.generators = traced;
        }
        Ok(out)
    }

    /// `V_0 = { X in V : Tr_B X = 0 }`, the nullspace of the bath trace restricted
    /// to the coordinates of `V`.
    pub fn kernel_of_partial_trace(&self) -> Result<OperatorSubspace> {
        let _ = operator::bath_complement(&self.layout)?;
        if self.dim() == 0 {
            return Ok(self.clone());
        }
        let traced: Vec<Operator> = self.basis.iter().map(operator::trace_bath).collect::<Result<_>>()?;
        let rows = traced[0].dim().pow(2);
        let mut t = CMatrix::zeros(rows, self.dim());
        for (j, x) in traced.iter().enumerate() {
            t.set_column(j, &x.vectorize());
        }
        let scale = linalg::spectral_norm(&t)?.max(1.0);
        let null = linalg::null_basis(&t, self.tol.rank_cut * scale)?;
        let frame = &self.frame * null;
        Ok(Self::from_frame(self.layout.clone(), frame, Vec::new(), self.tol).with_basis_as_generators())
    }

    /// `span{ A (x) B : A in self, B in other }` on the concatenated layout.
    pub fn tensor(&self, other: &OperatorSubspace) -> Result<OperatorSubspace> {
        let layout = self.layout.concat(&other.layout);
        let elems: Vec<Operator> = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| operator::tensor(a, b)))
            .collect();
        if elems.is_empty() {
            return Ok(Self::zero(layout, self.tol));
        }
        Self::span_from_generators(&elems, self.tol)
    }

    /// `V (x) rho`, e.g. the Kraus subspace `B(H_S) (x) rho_B`.
    pub fn tensor_with(&self, op: &Operator) -> Result<OperatorSubspace> {
        let elems: Vec<Operator> = self.basis.iter().map(|a| operator::tensor(a, op)).collect();
        if elems.is_empty() {
            return Ok(Self::zero(self.layout.concat(op.layout()), self.tol));
        }
        let mut out = Self::span_from_generators(&elems, self.tol)?;
        out.generators = self.generators.iter().map(|a| operator::tensor(a, op)).collect();
        Ok(out)
    }

    /// Symmetric sector `span{ A_i (x) A_j + A_j (x) A_i : i <= j }` of `R (x) R`.
    pub fn symmetric_sector(&self) -> Result<OperatorSubspace> {
        let layout = self.layout.concat(&self.layout);
        let mut elems = Vec::with_capacity(self.dim() * (self.dim() + 1) / 2);
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let ab = operator::tensor(&self.basis[i], &self.basis[j]);
                let ba = operator::tensor(&self.basis[j], &self.basis[i]);
                elems.push(&ab + &ba);
            }
        }
        if elems.is_empty() {
            return Ok(Self::zero(layout, self.tol));
        }
        Self::span_from_generators(&elems, self.tol)
    }

    /// True when `B^dagger` lies in the subspace for every basis element `B`.
    pub fn is_adjoint_closed(&self) -> bool {
        self.basis.iter().all(|b| self.contains_unchecked(&b.dagger()))
    }

    /// Sufficient test for being spanned by states: the subspace is closed under
    /// adjoints and contains a strictly positive element (the supplied witness,
    /// or the identity).
    pub fn check_state_spanned(&self, positive_witness: Option<&Operator>) -> StateSpanVerdict {
        if !self.is_adjoint_closed() {
            return StateSpanVerdict::NotVerified { reason: "subspace is not closed under adjoints".into() };
        }
        if let Some(w) = positive_witness {
            if !same_dims(w.layout(), &self.layout) {
                return StateSpanVerdict::NotVerified { reason: "witness layout mismatch".into() };
            }
            if !self.contains_unchecked(w) {
                return StateSpanVerdict::NotVerified { reason: "witness lies outside the subspace".into() };
            }
            if !w.is_hermitian(self.tol.residual_tol * w.hs_norm().max(1.0)) {
                return StateSpanVerdict::NotVerified { reason: "witness is not Hermitian".into() };
            }
            return match w.min_eigenvalue() {
                Ok(m) if m > self.tol.psd_slack => StateSpanVerdict::Verified { positive_element: w.clone() },
                Ok(m) => StateSpanVerdict::NotVerified {
                    reason: format!("witness is not strictly positive (min eigenvalue {m:.3e})"),
                },
                Err(e) => StateSpanVerdict::NotVerified { reason: e.to_string() },
            };
        }
        let id = Operator::identity(self.layout.clone());
        if self.contains_unchecked(&id) {
            return StateSpanVerdict::Verified { positive_element: id };
        }
        StateSpanVerdict::NotVerified { reason: "no strictly positive element supplied or found".into() }
    }

    /// Hermitian elements of the basis-coordinate combination; used to build
    /// states in the subspace.
    pub fn hermitian_projection(&self, a: &Operator) -> Result<Operator> {
        Ok(self.project(&a.hermitian_part())?.hermitian_part())
    }
}

/// Outcome of [`OperatorSubspace::check_state_spanned`]. `Verified` is a
/// sufficient condition only.
#[derive(Debug, Clone)]
pub enum StateSpanVerdict {
    Verified { positive_element: Operator },
    NotVerified { reason: String },
}

impl StateSpanVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, StateSpanVerdict::Verified { .. })
    }
}
