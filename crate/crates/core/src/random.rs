//! Seeded random operators, states, unitaries and maps.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::dynmap::SubsystemMap;
use crate::operator::{Operator, SpaceLayout};
use crate::{CMatrix, CVector, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    Operator::new(SpaceLayout::single(d), gaussian_matrix(rng, d, d)).expect("square")
}

/// Random Hermitian operator (GUE-like).
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    ginibre(rng, d).hermitian_part()
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    let g = gaussian_matrix(rng, d, d);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    Operator::new(SpaceLayout::single(d), q).expect("square")
}

/// Uniformly random unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    Operator::projector(SpaceLayout::single(d), &unit_vector(rng, d)).expect("square")
}

/// Full-rank mixed state `G G^dagger / Tr(G G^dagger)` (Hilbert-Schmidt measure).
pub fn mixed_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    let g = gaussian_matrix(rng, d, d);
    let m = &g * g.adjoint();
    let tr = m.trace();
    Operator::new(SpaceLayout::single(d), m / tr).expect("square")
}

/// Qubit state with Bloch vector of length `radius` along a uniformly random axis.
pub fn bloch_state_at_radius<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Operator {
    crate::operator::bloch_state(random_axis(rng).map(|x| x * radius))
}

/// Qubit state uniformly distributed in the ball of the given radius.
pub fn bloch_state_in_ball<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Operator {
    let r = radius * rng.random::<f64>().cbrt();
    bloch_state_at_radius(rng, r)
}

pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

/// Kraus operators of a random channel of Kraus rank `k` (blocks of a Haar isometry).
pub fn kraus_operators<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Vec<Operator> {
    let u = haar_unitary(rng, d * k);
    // Rows (s, i) with index s*k + i, columns s' in the first block: <i|U|0>.
    (0..k)
        .map(|i| {
            let m = CMatrix::from_fn(d, d, |s, sp| u.matrix()[(s * k + i, sp * k)]);
            Operator::new(SpaceLayout::single(d), m).expect("square")
        })
        .collect()
}

/// Random CPTP map with Kraus rank `k`.
pub fn cptp_map<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> SubsystemMap {
    SubsystemMap::from_kraus(&kraus_operators(rng, d, k)).expect("complete Kraus family")
}

/// Orthonormal Hermitian basis of `B(C^d)`: `1/sqrt(d)` followed by traceless elements.
pub fn hermitian_basis(d: usize) -> Vec<Operator> {
    let layout = SpaceLayout::single(d);
    let mut out = vec![Operator::identity(layout.clone()).scale_real(1.0 / (d as f64).sqrt())];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let ejk = Operator::matrix_unit(layout.clone(), j, k);
            let ekj = Operator::matrix_unit(layout.clone(), k, j);
            out.push((&ejk + &ekj).scale_real(s));
            out.push((&ejk - &ekj).scale(C64::new(0.0, -s)));
        }
    }
    // Diagonal traceless elements (generalized Gell-Mann).
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(Operator::new(layout.clone(), m).expect("square"));
    }
    out
}

/// Random Hermiticity- and trace-preserving map on `B(C^d)`: identity component
/// fixed to trace preservation, every other real coefficient Gaussian.
pub fn hptp_map<R: Rng + ?Sized>(rng: &mut R, d: usize) -> SubsystemMap {
    let basis = hermitian_basis(d);
    let n = basis.len();
    // Real matrix T with Phi(G_k) = sum_j T[j][k] G_j; trace preservation pins row 0.
    let mut t = vec![vec![0.0; n]; n];
    t[0][0] = 1.0;
    for row in t.iter_mut().skip(1) {
        for v in row.iter_mut() {
            *v = rng.sample::<f64, _>(StandardNormal);
        }
    }
    let images: Vec<Operator> = (0..n)
        .map(|k| {
            basis
                .iter()
                .enumerate()
                .fold(Operator::zeros(SpaceLayout::single(d)), |acc, (j, g)| &acc + &g.scale_real(t[j][k]))
        })
        .collect();
    // Superoperator S = sum_k vec(Phi(G_k)) vec(G_k)^dagger.
    let mut s = CMatrix::zeros(d * d, d * d);
    for (g, img) in basis.iter().zip(&images) {
        s += img.vectorize() * g.vectorize().adjoint();
    }
    SubsystemMap::from_superoperator(d, s, "random hptp").expect("square superoperator")
}

/// `(1 - s) * cp + s * hptp`, with `s` halved from 1 until `Phi(1/d)` has
/// minimum eigenvalue above `slack`. The positive domain of the result contains
/// a neighbourhood of the maximally mixed state, so it spans `B(C^d)`.
pub fn map_with_spanning_positive_domain<R: Rng + ?Sized>(rng: &mut R, d: usize, slack: f64) -> SubsystemMap {
    let cp = cptp_map(rng, d, d.max(2));
    let hp = hptp_map(rng, d);
    let mixed = Operator::maximally_mixed(SpaceLayout::single(d));
    let mut s = 1.0;
    loop {
        let phi = cp.linear_combination(1.0 - s, &hp, s).expect("same domain");
        let out = phi.apply(&mixed).expect("full domain");
        if out.min_eigenvalue().map(|m| m > slack).unwrap_or(false) || s < 1e-12 {
            return phi.with_provenance("random mixture of cptp and hptp");
        }
        s *= 0.5;
    }
}
