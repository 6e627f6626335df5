//! Exact state-vector engine for up to [`MAX_DENSE_QUBITS`] qubits.
//!
//! Used as the independent oracle for tableau results and as the only engine
//! that can evaluate non-Pauli observables such as the witness settings.
//! Qubit `k` is bit `k` of the basis index, so `|q_0 q_1 …⟩` has index
//! `Σ q_k 2^k`. Computational `|0⟩` plays the role of `|H⟩` and `|1⟩` of `|V⟩`.

use num_complex::Complex64;
use rand::Rng;

use crate::cluster::InteractionGraph;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::Gate;

pub const MAX_DENSE_QUBITS: usize = 20;

const UNITARY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[c0(1.0), c0(0.0)], [c0(0.0), c0(1.0)]]);
    pub const X: Mat2 = Mat2([[c0(0.0), c0(1.0)], [c0(1.0), c0(0.0)]]);
    pub const Y: Mat2 = Mat2([
        [c0(0.0), Complex64::new(0.0, -1.0)],
        [Complex64::new(0.0, 1.0), c0(0.0)],
    ]);
    pub const Z: Mat2 = Mat2([[c0(1.0), c0(0.0)], [c0(0.0), c0(-1.0)]]);
    pub const S: Mat2 = Mat2([[c0(1.0), c0(0.0)], [c0(0.0), Complex64::new(0.0, 1.0)]]);
    /// `|0⟩⟨0|`, i.e. `|H⟩⟨H|`.
    pub const PROJ_0: Mat2 = Mat2([[c0(1.0), c0(0.0)], [c0(0.0), c0(0.0)]]);
    /// `|1⟩⟨1|`, i.e. `|V⟩⟨V|`.
    pub const PROJ_1: Mat2 = Mat2([[c0(0.0), c0(0.0)], [c0(0.0), c0(1.0)]]);

    pub fn hadamard() -> Mat2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Mat2([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]])
    }

    pub fn pauli(p: Pauli) -> Mat2 {
        match p {
            Pauli::I => Self::IDENTITY,
            Pauli::X => Self::X,
            Pauli::Y => Self::Y,
            Pauli::Z => Self::Z,
        }
    }

    /// `cos(φ) X + sin(φ) Y`.
    pub fn equatorial(phi: f64) -> Mat2 {
        let (s, co) = phi.sin_cos();
        Mat2([[c(0.0, 0.0), c(co, -s)], [c(co, s), c(0.0, 0.0)]])
    }

    pub fn scale(&self, k: f64) -> Mat2 {
        let m = self.0;
        Mat2([[m[0][0] * k, m[0][1] * k], [m[1][0] * k, m[1][1] * k]])
    }

    pub fn dagger(&self) -> Mat2 {
        let m = self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.dagger().mul(self).max_abs_diff(&Self::IDENTITY) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.dagger().max_abs_diff(self) <= tol
    }
}

const fn c0(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    if n == 0 {
        return Err(Error::domain("a state needs at least one qubit"));
    }
    Ok(())
}

impl StateVector {
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_capacity(n)?;
        if index >= 1 << n {
            return Err(Error::Index {
                index,
                len: 1 << n,
            });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis_state(n, 0)
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        check_capacity(n)?;
        let a = (1.0 / (1u64 << n) as f64).sqrt();
        Ok(Self {
            n,
            amps: vec![c(a, 0.0); 1 << n],
        })
    }

    /// Builds a state from explicit amplitudes; they must already be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::Validation(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        check_capacity(n)?;
        let state = Self { n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("state has squared norm {norm}")));
        }
        Ok(state)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_target(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::Index {
                index: q,
                len: self.n,
            });
        }
        Ok(())
    }

    fn check_same_size(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }

    /// Applies any 2×2 matrix, unitary or not.
    fn apply_matrix(&mut self, m: &Mat2, q: usize) {
        let bit = 1usize << q;
        let m = m.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_local_unitary(&mut self, u: &Mat2, target: usize) -> Result<()> {
        self.check_target(target)?;
        if !u.is_unitary(UNITARY_TOL) {
            return Err(Error::Validation(format!("matrix {u:?} is not unitary")));
        }
        self.apply_matrix(u, target);
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        match gate {
            Gate::H(q) => self.apply_matrix(&Mat2::hadamard(), q),
            Gate::S(q) => self.apply_matrix(&Mat2::S, q),
            Gate::X(q) => self.apply_matrix(&Mat2::X, q),
            Gate::Z(q) => self.apply_matrix(&Mat2::Z, q),
            Gate::Cz(a, b) => {
                let mask = (1 << a) | (1 << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot(ctl, tgt) => {
                let (cb, tb) = (1 << ctl, 1 << tgt);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies a Pauli string including its phase.
    pub fn apply_pauli(&mut self, op: &PauliOperator) -> Result<()> {
        self.check_same_size(op.num_qubits())?;
        for q in op.support() {
            self.apply_matrix(&Mat2::pauli(op.get(q)), q);
        }
        let phase = op.phase_factor();
        if phase != c(1.0, 0.0) {
            self.amps.iter_mut().for_each(|a| *a *= phase);
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn expectation_pauli(&self, op: &PauliOperator) -> Result<f64> {
        if !op.is_hermitian() {
            return Err(Error::domain(format!("{op} is not Hermitian")));
        }
        let mut image = self.clone();
        image.apply_pauli(op)?;
        Ok(self.inner(&image)?.re)
    }

    /// Projects onto the `outcome` eigenspace of `op` and renormalizes.
    /// Returns the Born probability of that outcome.
    pub fn project_pauli(&mut self, op: &PauliOperator, outcome: i8) -> Result<f64> {
        if op.is_identity_up_to_phase() {
            return Err(Error::domain("cannot project onto an identity eigenspace"));
        }
        let expectation = self.expectation_pauli(op)?;
        let prob = (1.0 + outcome as f64 * expectation) / 2.0;
        if prob <= 1e-12 {
            return Err(Error::domain(format!(
                "outcome {outcome} of {op} has zero probability"
            )));
        }
        let mut image = self.clone();
        image.apply_pauli(op)?;
        let s = outcome as f64;
        let scale = 1.0 / (2.0 * prob.sqrt());
        for (a, b) in self.amps.iter_mut().zip(&image.amps) {
            *a = (*a + *b * s) * scale;
        }
        Ok(prob)
    }

    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, op: &PauliOperator, rng: &mut R) -> Result<i8> {
        let p_plus = (1.0 + self.expectation_pauli(op)?) / 2.0;
        let outcome = if rng.random::<f64>() < p_plus { 1 } else { -1 };
        self.project_pauli(op, outcome)?;
        Ok(outcome)
    }

    /// Draws a computational-basis index with Born probabilities.
    pub fn sample_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.norm_sqr();
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += a.norm_sqr();
            if u < acc {
                return i;
            }
        }
        // rounding at the top end
        self.amps
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(0)
    }

    /// Image of the state under a product of single-qubit matrices (identity where `None`).
    fn apply_product(&self, factors: &[Option<Mat2>]) -> StateVector {
        let mut image = self.clone();
        for (q, f) in factors.iter().enumerate() {
            if let Some(m) = f {
                image.apply_matrix(m, q);
            }
        }
        image
    }
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Graph state: CZ over every edge applied to `|+⟩^{⊗n}`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Result<StateVector> {
    let mut s = StateVector::plus(n)?;
    for &(a, b) in edges {
        s.apply_gate(Gate::Cz(a, b))?;
    }
    Ok(s)
}

pub fn build_graph_state_dense(graph: &InteractionGraph) -> Result<StateVector> {
    graph_state(graph.num_vertices(), graph.edges())
}

/// One tensor-product term `coefficient · ⊗_q factor_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm {
    pub coefficient: f64,
    /// `None` is the identity.
    pub factors: Vec<Option<Mat2>>,
}

impl ProductTerm {
    fn trace_over_dim(&self) -> Complex64 {
        self.factors
            .iter()
            .map(|f| f.map_or(c(1.0, 0.0), |m| m.trace() / 2.0))
            .product::<Complex64>()
            * self.coefficient
    }
}

/// Real linear combination of products of single-qubit Hermitian matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalObservable {
    n: usize,
    terms: Vec<ProductTerm>,
}

impl LocalObservable {
    pub fn new(n: usize, terms: Vec<ProductTerm>) -> Result<Self> {
        for t in &terms {
            if t.factors.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: t.factors.len(),
                });
            }
            for (q, f) in t.factors.iter().enumerate() {
                if let Some(m) = f {
                    if !m.is_hermitian(HERMITIAN_TOL) {
                        return Err(Error::Validation(format!(
                            "factor on qubit {q} is not Hermitian"
                        )));
                    }
                }
            }
        }
        Ok(Self { n, terms })
    }

    pub fn product(factors: Vec<Option<Mat2>>) -> Result<Self> {
        Self::new(
            factors.len(),
            vec![ProductTerm {
                coefficient: 1.0,
                factors,
            }],
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// `tr(O) / 2^n`.
    pub fn normalized_trace(&self) -> f64 {
        self.terms.iter().map(|t| t.trace_over_dim().re).sum()
    }

    fn expectation_complex(&self, s: &StateVector) -> Result<Complex64> {
        s.check_same_size(self.n)?;
        let mut total = c(0.0, 0.0);
        for t in &self.terms {
            total += s.inner(&s.apply_product(&t.factors))? * t.coefficient;
        }
        Ok(total)
    }

    /// Explicit `2^n × 2^n` matrix.
    pub fn to_matrix(&self) -> DenseOperator {
        let dim = 1usize << self.n;
        let mut op = DenseOperator::zeros(self.n);
        for r in 0..dim {
            for col in 0..dim {
                let mut entry = c(0.0, 0.0);
                for t in &self.terms {
                    let mut prod = c(t.coefficient, 0.0);
                    for (q, f) in t.factors.iter().enumerate() {
                        let (rb, cb) = ((r >> q) & 1, (col >> q) & 1);
                        match f {
                            Some(m) => prod *= m.0[rb][cb],
                            None if rb != cb => prod = c(0.0, 0.0),
                            None => {}
                        }
                        if prod == c(0.0, 0.0) {
                            break;
                        }
                    }
                    entry += prod;
                }
                op.data[r * dim + col] = entry;
            }
        }
        op
    }
}

/// Explicit square operator on `n` qubits, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![c(0.0, 0.0); 1 << (2 * n)],
        }
    }

    pub fn scaled_identity(n: usize, k: f64) -> Self {
        let mut op = Self::zeros(n);
        let dim = 1 << n;
        for i in 0..dim {
            op.data[i * dim + i] = c(k, 0.0);
        }
        op
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// `self += k |s⟩⟨s|`.
    pub fn add_projector(&mut self, k: f64, s: &StateVector) -> Result<()> {
        s.check_same_size(self.n)?;
        let dim = self.dim();
        for r in 0..dim {
            for col in 0..dim {
                self.data[r * dim + col] += s.amps[r] * s.amps[col].conj() * k;
            }
        }
        Ok(())
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, k: f64, other: &DenseOperator) -> Result<()> {
        if other.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b * k;
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> Result<f64> {
        if other.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let dim = self.dim();
        (0..dim).all(|r| (0..dim).all(|col| (self.entry(r, col) - self.entry(col, r).conj()).norm() <= tol))
    }

    pub fn expectation(&self, s: &StateVector) -> Result<Complex64> {
        s.check_same_size(self.n)?;
        let dim = self.dim();
        let mut total = c(0.0, 0.0);
        for r in 0..dim {
            let row: Complex64 = (0..dim).map(|col| self.data[r * dim + col] * s.amps[col]).sum();
            total += s.amps[r].conj() * row;
        }
        Ok(total)
    }
}

/// Ensemble `Σ w_k |ψ_k⟩⟨ψ_k| + w_mix · 1/2^n`. The maximally mixed part is
/// kept symbolic and evaluated through normalized traces.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityModel {
    n: usize,
    components: Vec<(f64, StateVector)>,
    mixed_weight: f64,
}

const WEIGHT_TOL: f64 = 1e-12;

impl DensityModel {
    pub fn new(n: usize, components: Vec<(f64, StateVector)>, mixed_weight: f64) -> Result<Self> {
        check_capacity(n)?;
        let mut total = mixed_weight;
        if mixed_weight < 0.0 {
            return Err(Error::Validation("negative ensemble weight".into()));
        }
        for (w, s) in &components {
            if *w < 0.0 {
                return Err(Error::Validation("negative ensemble weight".into()));
            }
            s.check_same_size(n)?;
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Validation(format!("ensemble weights sum to {total}")));
        }
        Ok(Self {
            n,
            components,
            mixed_weight,
        })
    }

    pub fn pure(state: StateVector) -> Self {
        Self {
            n: state.n,
            components: vec![(1.0, state)],
            mixed_weight: 0.0,
        }
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::new(n, Vec::new(), 1.0)
    }

    /// `w · a + (1 - w) · b`.
    pub fn mix(a: &DensityModel, b: &DensityModel, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::domain(format!("mixing weight {w} outside [0, 1]")));
        }
        if a.n != b.n {
            return Err(Error::Dimension {
                expected: a.n,
                found: b.n,
            });
        }
        let components = a
            .components
            .iter()
            .map(|(x, s)| (w * x, s.clone()))
            .chain(b.components.iter().map(|(x, s)| ((1.0 - w) * x, s.clone())))
            .collect();
        Self::new(
            a.n,
            components,
            w * a.mixed_weight + (1.0 - w) * b.mixed_weight,
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[(f64, StateVector)] {
        &self.components
    }

    pub fn mixed_weight(&self) -> f64 {
        self.mixed_weight
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, psi: &StateVector) -> Result<f64> {
        psi.check_same_size(self.n)?;
        let mut f = self.mixed_weight / (1u64 << self.n) as f64;
        for (w, s) in &self.components {
            f += w * fidelity(psi, s)?;
        }
        Ok(f)
    }

    /// Ensemble average of an arbitrary explicit operator.
    pub fn expectation_operator(&self, op: &DenseOperator) -> Result<f64> {
        if op.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: op.n,
            });
        }
        let dim = op.dim();
        let trace: Complex64 = (0..dim).map(|i| op.entry(i, i)).sum();
        let mut total = trace * (self.mixed_weight / dim as f64);
        for (w, s) in &self.components {
            total += op.expectation(s)? * *w;
        }
        real_part(total)
    }
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-10 * z.re.abs().max(1.0) {
        return Err(Error::Validation(format!(
            "expectation has imaginary part {}",
            z.im
        )));
    }
    Ok(z.re)
}

pub fn expectation_observable(model: &DensityModel, obs: &LocalObservable) -> Result<f64> {
    if obs.n != model.n {
        return Err(Error::Dimension {
            expected: model.n,
            found: obs.n,
        });
    }
    let mut total = c(model.mixed_weight * obs.normalized_trace(), 0.0);
    for (w, s) in &model.components {
        total += obs.expectation_complex(s)? * *w;
    }
    real_part(total)
}

/// Expectation of a single product `⊗_q factor_q` (identity where `None`).
pub fn expectation_product(model: &DensityModel, factors: &[Option<Mat2>]) -> Result<f64> {
    expectation_observable(model, &LocalObservable::product(factors.to_vec())?)
}
