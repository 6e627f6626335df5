//! Topological error correction on the eight-qubit cluster.
//!
//! Qubits are labelled `1..=8`: faces `f1..f6` are `1..6` and the two
//! edge-qubits are `7` and `8`. Errors flip face qubits, the four volume
//! correlations form the syndrome, and the protected quantity is the
//! defect-enclosing product `λ5·λ6`. Decoding is a total lookup table built by
//! minimum-weight completion of the single-error signatures.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cell_complex::build_g8_complex;
use crate::cluster::{build_cluster, interaction_graph, measure_all, Basis, ClusterState, Engine, OutcomeRecord};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::rng::{trial_rng, Purpose};
use crate::tableau::Gate;

pub const NUM_QUBITS: usize = 8;
pub const NUM_FACE_QUBITS: usize = 6;

/// Qubit-label pairs whose outcome products make up the syndrome, in order
/// `(C12, C25, C36, C34)`.
pub const SYNDROME_PAIRS: [(usize, usize); 4] = [(1, 2), (2, 5), (3, 6), (3, 4)];

/// Labels of the two qubits carrying the protected correlation.
pub const PROTECTED_PAIR: (usize, usize) = (5, 6);

/// Flip probability produced by a rotation of angle `θ`: `sin²(2θ)`.
pub fn theta_to_p(theta: f64) -> f64 {
    (2.0 * theta).sin().powi(2)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Which Pauli an error applies and in which basis the qubits are read out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorFrame {
    /// Z errors on the cluster state, X readout.
    ClusterZ,
    /// X errors on the Hadamard-rotated state, Z readout.
    ExperimentX,
}

impl ErrorFrame {
    pub fn error_pauli(self) -> Pauli {
        match self {
            ErrorFrame::ClusterZ => Pauli::Z,
            ErrorFrame::ExperimentX => Pauli::X,
        }
    }

    pub fn readout_basis(self) -> Basis {
        match self {
            ErrorFrame::ClusterZ => Basis::X,
            ErrorFrame::ExperimentX => Basis::Z,
        }
    }
}

/// Subset of qubit labels `1..=8`, bit `q - 1` set when qubit `q` is flipped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorPattern(u8);

impl ErrorPattern {
    pub const EMPTY: ErrorPattern = ErrorPattern(0);

    pub fn from_mask(mask: u8) -> Self {
        Self(mask)
    }

    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &q in labels {
            if !(1..=NUM_QUBITS).contains(&q) {
                return Err(Error::Index {
                    index: q,
                    len: NUM_QUBITS,
                });
            }
            mask |= 1 << (q - 1);
        }
        Ok(Self(mask))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, label: usize) -> bool {
        (1..=NUM_QUBITS).contains(&label) && self.0 >> (label - 1) & 1 == 1
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn labels(self) -> Vec<usize> {
        (1..=NUM_QUBITS).filter(|&q| self.contains(q)).collect()
    }

    /// Pauli operator applying `pauli` on every flipped qubit.
    pub fn operator(self, pauli: Pauli) -> PauliOperator {
        let qubits: Vec<usize> = self.labels().into_iter().map(|q| q - 1).collect();
        PauliOperator::uniform(NUM_QUBITS, &qubits, pauli).expect("labels are in range")
    }

    /// Probability of this exact pattern when each of `targets` flips independently with `p`.
    pub fn probability(self, p: f64, targets: u32) -> f64 {
        let k = self.weight() as i32;
        p.powi(k) * (1.0 - p).powi(targets as i32 - k)
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|q| q.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    p: f64,
    targets: ErrorPattern,
    frame: ErrorFrame,
}

impl NoiseModel {
    /// Flip probability `p` on each face qubit `1..=6`, cluster frame.
    pub fn new(p: f64) -> Result<Self> {
        Self::with_targets(p, &[1, 2, 3, 4, 5, 6], ErrorFrame::ClusterZ)
    }

    pub fn with_targets(p: f64, targets: &[usize], frame: ErrorFrame) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            p,
            targets: ErrorPattern::from_labels(targets)?,
            frame,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn targets(&self) -> ErrorPattern {
        self.targets
    }

    pub fn frame(&self) -> ErrorFrame {
        self.frame
    }
}

/// Each target qubit flips independently with probability `p`, in label order.
pub fn sample_errors<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> ErrorPattern {
    let mut mask = 0u8;
    for q in model.targets.labels() {
        if rng.random_bool(model.p) {
            mask |= 1 << (q - 1);
        }
    }
    ErrorPattern(mask)
}

/// `(C12, C25, C36, C34)`, each `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SyndromeVector(pub [i8; 4]);

impl SyndromeVector {
    pub const TRIVIAL: SyndromeVector = SyndromeVector([1; 4]);

    /// Syndrome produced by flipping the outcomes in `pattern`.
    pub fn of_pattern(pattern: ErrorPattern) -> Self {
        let mut s = [1i8; 4];
        for (slot, &(a, b)) in s.iter_mut().zip(&SYNDROME_PAIRS) {
            if pattern.contains(a) != pattern.contains(b) {
                *slot = -1;
            }
        }
        Self(s)
    }

    /// All 16 syndromes, `+1` before `-1` in each slot, first slot slowest.
    pub fn all() -> impl Iterator<Item = SyndromeVector> {
        (0u8..16).map(|bits| {
            let mut s = [1i8; 4];
            for (j, slot) in s.iter_mut().enumerate() {
                if bits >> (3 - j) & 1 == 1 {
                    *slot = -1;
                }
            }
            SyndromeVector(s)
        })
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }
}

impl fmt::Display for SyndromeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&v| if v > 0 { "+1" } else { "-1" }).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Outcome record keys are qubit indices, i.e. label − 1.
pub fn extract_syndrome(outcomes: &OutcomeRecord) -> Result<SyndromeVector> {
    let mut s = [1i8; 4];
    for (slot, &(a, b)) in s.iter_mut().zip(&SYNDROME_PAIRS) {
        *slot = outcomes.product(&[a - 1, b - 1])?;
    }
    Ok(SyndromeVector(s))
}

/// Total map from syndrome to its unique minimum-weight face-qubit explanation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeTable {
    entries: BTreeMap<SyndromeVector, ErrorPattern>,
}

impl DecodeTable {
    pub fn correction(&self, s: SyndromeVector) -> ErrorPattern {
        self.entries[&s]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SyndromeVector, ErrorPattern)> + '_ {
        self.entries.iter().map(|(&s, &c)| (s, c))
    }
}

/// Minimum-weight completion over all 64 face-qubit patterns. Fails if any
/// syndrome is unreachable or has two minimum-weight explanations.
pub fn build_decode_table() -> Result<DecodeTable> {
    let mut best: BTreeMap<SyndromeVector, (u32, Vec<ErrorPattern>)> = BTreeMap::new();
    for mask in 0u8..(1 << NUM_FACE_QUBITS) {
        let pattern = ErrorPattern(mask);
        let s = SyndromeVector::of_pattern(pattern);
        let entry = best.entry(s).or_insert((u32::MAX, Vec::new()));
        match pattern.weight().cmp(&entry.0) {
            std::cmp::Ordering::Less => *entry = (pattern.weight(), vec![pattern]),
            std::cmp::Ordering::Equal => entry.1.push(pattern),
            std::cmp::Ordering::Greater => {}
        }
    }
    let mut entries = BTreeMap::new();
    for s in SyndromeVector::all() {
        let Some((_, candidates)) = best.get(&s) else {
            return Err(Error::Validation(format!("syndrome {s} is unreachable")));
        };
        if candidates.len() != 1 {
            return Err(Error::Validation(format!(
                "syndrome {s} has {} minimum-weight explanations",
                candidates.len()
            )));
        }
        entries.insert(s, candidates[0]);
    }
    Ok(DecodeTable { entries })
}

pub fn decode_table() -> &'static DecodeTable {
    static TABLE: OnceLock<DecodeTable> = OnceLock::new();
    TABLE.get_or_init(|| build_decode_table().expect("face signatures admit a unique minimum-weight decoder"))
}

/// Raw protected product `λ5·λ6`.
pub fn protected_product(outcomes: &OutcomeRecord) -> Result<i8> {
    outcomes.product(&[PROTECTED_PAIR.0 - 1, PROTECTED_PAIR.1 - 1])
}

/// Decodes the syndrome and applies the correction classically to `λ5·λ6`.
pub fn decode_and_correct(outcomes: &OutcomeRecord) -> Result<(i8, ErrorPattern)> {
    let correction = decode_table().correction(extract_syndrome(outcomes)?);
    let mut product = protected_product(outcomes)?;
    for q in [PROTECTED_PAIR.0, PROTECTED_PAIR.1] {
        if correction.contains(q) {
            product = -product;
        }
    }
    Ok((product, correction))
}

/// Error rate of the protected correlation without correction, `2p(1−p)`.
pub fn analytic_unprotected(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(1.0 - (1.0 - p).powi(2) - p.powi(2))
}

/// Residual error rate after minimum-weight correction.
pub fn analytic_protected(p: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(1.0
        - (q.powi(6) + p.powi(6))
        - (6.0 * p * q.powi(5) + 6.0 * q * p.powi(5))
        - (9.0 * p.powi(2) * q.powi(4) + 9.0 * q.powi(2) * p.powi(4)))
}

/// Ideal X-readout of every qubit (all `+1`) with the flipped qubits negated.
pub fn classical_outcomes(pattern: ErrorPattern, basis: Basis) -> OutcomeRecord {
    let mut r = OutcomeRecord::uniform(0..NUM_QUBITS, basis);
    for q in pattern.labels() {
        r.flip(q - 1).expect("pattern labels are in range");
    }
    r
}

/// Failure probability summed over all 64 face-qubit patterns, each run
/// through inject → syndrome → decode → correct.
pub fn exact_enumeration(p: f64) -> Result<f64> {
    check_probability(p)?;
    let mut total = 0.0;
    for mask in 0u8..(1 << NUM_FACE_QUBITS) {
        let pattern = ErrorPattern(mask);
        let (product, _) = decode_and_correct(&classical_outcomes(pattern, Basis::X))?;
        if product < 0 {
            total += pattern.probability(p, NUM_FACE_QUBITS as u32);
        }
    }
    Ok(total)
}

/// Number of face-qubit patterns of each weight `0..=6` that decode successfully.
pub fn success_profile() -> [usize; NUM_FACE_QUBITS + 1] {
    let mut counts = [0; NUM_FACE_QUBITS + 1];
    for mask in 0u8..(1 << NUM_FACE_QUBITS) {
        let pattern = ErrorPattern(mask);
        let (product, _) =
            decode_and_correct(&classical_outcomes(pattern, Basis::X)).expect("complete record");
        if product > 0 {
            counts[pattern.weight() as usize] += 1;
        }
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialEngine {
    /// Flip ideal `+1` outcomes classically.
    Fast,
    Tableau,
    Dense,
}

/// Noise-free eight-qubit state in the given frame.
pub fn ideal_state(engine: Engine, frame: ErrorFrame) -> Result<ClusterState> {
    let graph = interaction_graph(&build_g8_complex())?;
    let mut state = build_cluster(&graph, engine)?;
    if frame == ErrorFrame::ExperimentX {
        for q in 0..NUM_QUBITS {
            state.apply_gate(Gate::H(q))?;
        }
    }
    Ok(state)
}

/// Runs one trial of the full pipeline for a fixed error pattern.
pub struct TrialRunner {
    engine: TrialEngine,
    frame: ErrorFrame,
    template: Option<ClusterState>,
}

impl TrialRunner {
    pub fn new(engine: TrialEngine, frame: ErrorFrame) -> Result<Self> {
        let template = match engine {
            TrialEngine::Fast => None,
            TrialEngine::Tableau => Some(ideal_state(Engine::Tableau, frame)?),
            TrialEngine::Dense => Some(ideal_state(Engine::Dense, frame)?),
        };
        Ok(Self {
            engine,
            frame,
            template,
        })
    }

    pub fn engine(&self) -> TrialEngine {
        self.engine
    }

    /// Readout record after injecting `pattern`. The fast path draws nothing from `rng`.
    pub fn outcomes<R: Rng + ?Sized>(&self, pattern: ErrorPattern, rng: &mut R) -> Result<OutcomeRecord> {
        let basis = self.frame.readout_basis();
        match &self.template {
            None => Ok(classical_outcomes(pattern, basis)),
            Some(t) => {
                let mut state = t.clone();
                if !pattern.is_empty() {
                    state.apply_pauli(&pattern.operator(self.frame.error_pauli()))?;
                }
                measure_all(&mut state, basis, rng)
            }
        }
    }

    /// `(unprotected failed, protected failed)` for one trial.
    pub fn run<R: Rng + ?Sized>(&self, pattern: ErrorPattern, rng: &mut R) -> Result<(bool, bool)> {
        let record = self.outcomes(pattern, rng)?;
        let raw = protected_product(&record)?;
        let (corrected, _) = decode_and_correct(&record)?;
        Ok((raw < 0, corrected < 0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub p_values: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub engine: TrialEngine,
    pub frame: ErrorFrame,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub trials: u64,
    pub protected_failures: u64,
    pub unprotected_failures: u64,
    pub mc_protected: f64,
    pub se_protected: f64,
    pub mc_unprotected: f64,
    pub se_unprotected: f64,
    pub analytic_protected: f64,
    pub analytic_unprotected: f64,
}

/// `√(P̂(1−P̂)/N)`.
pub fn binomial_standard_error(estimate: f64, trials: u64) -> f64 {
    (estimate * (1.0 - estimate) / trials as f64).sqrt()
}

fn sigma_distance(estimate: f64, se: f64, reference: f64) -> f64 {
    let diff = (estimate - reference).abs();
    if diff == 0.0 {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        diff / se
    }
}

impl SweepRow {
    /// Largest `|MC − analytic|` over both columns in standard-error units.
    /// Infinite if an estimate with zero spread misses its analytic value.
    pub fn max_sigma_deviation(&self) -> f64 {
        sigma_distance(self.mc_protected, self.se_protected, self.analytic_protected).max(sigma_distance(
            self.mc_unprotected,
            self.se_unprotected,
            self.analytic_unprotected,
        ))
    }
}

/// Monte-Carlo estimate of both error rates at every `p`. Trial `t` at point
/// `i` draws its errors from `trial_rng(seed, i, t, Errors)` and its readout
/// from the matching `Readout` stream, so results do not depend on scheduling.
pub fn monte_carlo_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let runner = TrialRunner::new(config.engine, config.frame)?;
    let mut rows = Vec::with_capacity(config.p_values.len());
    for (point, &p) in config.p_values.iter().enumerate() {
        let model = NoiseModel::with_targets(p, &[1, 2, 3, 4, 5, 6], config.frame)?;
        let (unprotected, protected) = (0..config.trials)
            .into_par_iter()
            .map(|trial| -> Result<(u64, u64)> {
                let mut errors = trial_rng(config.seed, point as u64, trial, Purpose::Errors);
                let pattern = sample_errors(&model, &mut errors);
                let mut readout = trial_rng(config.seed, point as u64, trial, Purpose::Readout);
                let (u, pr) = runner.run(pattern, &mut readout)?;
                Ok((u as u64, pr as u64))
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        let n = config.trials;
        let mc_protected = protected as f64 / n as f64;
        let mc_unprotected = unprotected as f64 / n as f64;
        rows.push(SweepRow {
            p,
            trials: n,
            protected_failures: protected,
            unprotected_failures: unprotected,
            mc_protected,
            se_protected: binomial_standard_error(mc_protected, n),
            mc_unprotected,
            se_unprotected: binomial_standard_error(mc_unprotected, n),
            analytic_protected: analytic_protected(p)?,
            analytic_unprotected: analytic_unprotected(p)?,
        });
    }
    Ok(rows)
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn p_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    check_probability(min)?;
    check_probability(max)?;
    if min > max {
        return Err(Error::domain(format!("p range [{min}, {max}] is empty")));
    }
    match steps {
        0 => Err(Error::domain("grid needs at least one step")),
        1 => Ok(vec![min]),
        _ => Ok((0..steps)
            .map(|i| min + (max - min) * i as f64 / (steps - 1) as f64)
            .collect()),
    }
}

/// Decimal rendering with 12 significant digits and no trailing zeros.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub const CSV_HEADER: &str =
    "p,mc_protected,se_protected,mc_unprotected,se_unprotected,analytic_protected,analytic_unprotected";

/// CSV with a leading `# <version>` comment line.
pub fn sweep_to_csv(rows: &[SweepRow], version: &str) -> String {
    let mut out = format!("# {version}\n{CSV_HEADER}\n");
    for r in rows {
        let cols = [
            r.p,
            r.mc_protected,
            r.se_protected,
            r.mc_unprotected,
            r.se_unprotected,
            r.analytic_protected,
            r.analytic_unprotected,
        ];
        let cols: Vec<String> = cols.iter().map(|&v| format_significant(v)).collect();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}
