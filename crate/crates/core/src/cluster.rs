//! Cluster states built from cell complexes.
//!
//! A complex yields an interaction graph with one qubit per face and one per
//! edge cell, faces first. The cluster state is the joint `+1` eigenstate of
//! `K_i = X_i ⊗ Z_{neighbors(i)}` and can be held by either the stabilizer
//! tableau or the dense state vector.

use std::collections::{BTreeMap, HashMap, HashSet};

use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cell_complex::{CellComplex, EDGE, FACE};
use crate::dense::{graph_state, StateVector};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::{Gate, StabilizerTableau};

const ROUNDING_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitKind {
    Face,
    Edge,
    /// A vertex not derived from a complex.
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    labels: Vec<String>,
    kinds: Vec<QubitKind>,
    lookup: HashMap<String, usize>,
    /// Normalized so that `a < b`, in insertion order.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    kind: QubitKind,
    neighbors: Vec<String>,
}

impl InteractionGraph {
    pub fn new(vertices: Vec<(String, QubitKind)>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = vertices.len();
        let mut lookup = HashMap::with_capacity(n);
        for (i, (label, _)) in vertices.iter().enumerate() {
            if lookup.insert(label.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate qubit label `{label}`")));
            }
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            for q in [a, b] {
                if q >= n {
                    return Err(Error::Index { index: q, len: n });
                }
            }
            if a == b {
                return Err(Error::Validation(format!("self-loop on `{}`", vertices[a].0)));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::Validation(format!(
                    "duplicate edge `{}`-`{}`",
                    vertices[e.0].0, vertices[e.1].0
                )));
            }
            normalized.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let (labels, kinds) = vertices.into_iter().unzip();
        Ok(Self {
            labels,
            kinds,
            lookup,
            edges: normalized,
            adjacency,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self, q: usize) -> &str {
        &self.labels[q]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self, q: usize) -> QubitKind {
        self.kinds[q]
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn qubit(&self, label: &str) -> Result<usize> {
        self.lookup
            .get(label)
            .copied()
            .ok_or_else(|| Error::lookup("qubit", label))
    }

    pub fn qubits_of_kind(&self, kind: QubitKind) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&q| self.kinds[q] == kind).collect()
    }

    /// True when every edge joins a face-qubit to an edge-qubit.
    pub fn is_face_edge_bipartite(&self) -> bool {
        self.edges.iter().all(|&(a, b)| {
            matches!(
                (self.kinds[a], self.kinds[b]),
                (QubitKind::Face, QubitKind::Edge) | (QubitKind::Edge, QubitKind::Face)
            )
        })
    }

    /// `{label: {"kind": ..., "neighbors": [...]}}` in qubit order.
    pub fn to_json(&self) -> String {
        let map: IndexMap<&str, VertexJson> = (0..self.num_vertices())
            .map(|q| {
                let v = VertexJson {
                    kind: self.kinds[q],
                    neighbors: self.adjacency[q].iter().map(|&n| self.labels[n].clone()).collect(),
                };
                (self.labels[q].as_str(), v)
            })
            .collect();
        serde_json::to_string_pretty(&map).expect("graph serializes")
    }

    /// Inverse of [`to_json`](Self::to_json). Adjacency must be symmetric.
    pub fn from_json(text: &str) -> Result<Self> {
        let map: IndexMap<String, VertexJson> = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
        let index: HashMap<&str, usize> = map.keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
        let mut listed = HashSet::new();
        for (i, v) in map.values().enumerate() {
            for n in &v.neighbors {
                let j = *index.get(n.as_str()).ok_or_else(|| Error::lookup("qubit", n.as_str()))?;
                if !listed.insert((i, j)) {
                    return Err(Error::Validation(format!("neighbor `{n}` listed twice")));
                }
            }
        }
        let mut edges = Vec::new();
        for &(i, j) in &listed {
            if !listed.contains(&(j, i)) {
                return Err(Error::Validation(format!(
                    "adjacency of `{}` and `{}` is not symmetric",
                    map.get_index(i).unwrap().0,
                    map.get_index(j).unwrap().0
                )));
            }
            if i <= j {
                edges.push((i, j));
            }
        }
        edges.sort_unstable();
        let vertices = map.iter().map(|(k, v)| (k.clone(), v.kind)).collect();
        Self::new(vertices, &edges)
    }
}

/// One qubit per face then one per edge cell; face `f` is joined to edge `e` iff `e ∈ ∂f`.
pub fn interaction_graph(complex: &CellComplex) -> Result<InteractionGraph> {
    let faces = complex.num_cells(FACE);
    if faces == 0 {
        return Err(Error::domain("complex has no faces"));
    }
    let vertices = complex
        .names(FACE)
        .iter()
        .map(|n| (n.clone(), QubitKind::Face))
        .chain(complex.names(EDGE).iter().map(|n| (n.clone(), QubitKind::Edge)))
        .collect();
    let edges: Vec<(usize, usize)> = (0..faces)
        .flat_map(|f| complex.cell_boundary(FACE, f).iter().map(move |&e| (f, faces + e)))
        .collect();
    InteractionGraph::new(vertices, &edges)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGenerator {
    pub center: usize,
    pub operator: PauliOperator,
}

pub fn stabilizer_generators(graph: &InteractionGraph) -> Vec<StabilizerGenerator> {
    let n = graph.num_vertices();
    (0..n)
        .map(|center| {
            let mut op = PauliOperator::identity(n);
            op.set(center, Pauli::X);
            for &nb in graph.neighbors(center) {
                op.set(nb, Pauli::Z);
            }
            StabilizerGenerator { center, operator: op }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Tableau,
    Dense,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    Tableau(StabilizerTableau),
    Dense(StateVector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterState {
    graph: InteractionGraph,
    backend: Backend,
}

pub fn build_cluster(graph: &InteractionGraph, engine: Engine) -> Result<ClusterState> {
    let n = graph.num_vertices();
    let backend = match engine {
        Engine::Tableau => {
            let mut t = StabilizerTableau::new(n)?;
            for q in 0..n {
                t.apply(Gate::H(q))?;
            }
            for &(a, b) in graph.edges() {
                t.apply(Gate::Cz(a, b))?;
            }
            Backend::Tableau(t)
        }
        Engine::Dense => Backend::Dense(graph_state(n, graph.edges())?),
    };
    Ok(ClusterState {
        graph: graph.clone(),
        backend,
    })
}

impl ClusterState {
    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn qubit(&self, label: &str) -> Result<usize> {
        self.graph.qubit(label)
    }

    pub fn apply_pauli(&mut self, op: &PauliOperator) -> Result<()> {
        match &mut self.backend {
            Backend::Tableau(t) => t.apply_pauli(op),
            Backend::Dense(s) => s.apply_pauli(op),
        }
    }

    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        match &mut self.backend {
            Backend::Tableau(t) => t.apply(gate),
            Backend::Dense(s) => s.apply_gate(gate),
        }
    }

    /// Exact expectation of a Hermitian Pauli. Dense values are rounded to
    /// `{-1, 0, 1}` and rejected if they are not within `1e-9` of one.
    pub fn expectation(&self, op: &PauliOperator) -> Result<i8> {
        match &self.backend {
            Backend::Tableau(t) => t.expectation(op),
            Backend::Dense(s) => {
                let v = s.expectation_pauli(op)?;
                let r = v.round();
                if (v - r).abs() > ROUNDING_TOL {
                    return Err(Error::Validation(format!("{op} has expectation {v}, not a stabilizer value")));
                }
                Ok(r as i8)
            }
        }
    }

    /// Real-valued expectation, exact for the dense engine.
    pub fn expectation_value(&self, op: &PauliOperator) -> Result<f64> {
        match &self.backend {
            Backend::Tableau(t) => Ok(t.expectation(op)? as f64),
            Backend::Dense(s) => s.expectation_pauli(op),
        }
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, op: &PauliOperator, rng: &mut R) -> Result<i8> {
        match &mut self.backend {
            Backend::Tableau(t) => t.measure(op, rng),
            Backend::Dense(s) => s.measure_pauli(op, rng),
        }
    }

    fn resolve<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.qubit(l.as_ref())).collect()
    }
}

/// `⟨⊗_{f∈F} X_f⟩` over the listed qubits.
pub fn surface_correlation<S: AsRef<str>>(state: &ClusterState, labels: &[S]) -> Result<i8> {
    if labels.is_empty() {
        return Err(Error::domain("surface must contain at least one qubit"));
    }
    let qubits = state.resolve(labels)?;
    let op = PauliOperator::uniform(state.num_qubits(), &qubits, Pauli::X)?;
    state.expectation(&op)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    pub fn pauli(self) -> Pauli {
        match self {
            Basis::X => Pauli::X,
            Basis::Z => Pauli::Z,
        }
    }
}

/// Single-qubit measurement results keyed by qubit index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutcomeRecord {
    entries: BTreeMap<usize, (Basis, i8)>,
}

impl OutcomeRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, qubit: usize, basis: Basis, outcome: i8) -> Result<()> {
        if outcome != 1 && outcome != -1 {
            return Err(Error::domain(format!("outcome {outcome} is not ±1")));
        }
        if self.entries.insert(qubit, (basis, outcome)).is_some() {
            return Err(Error::domain(format!("qubit {qubit} measured twice")));
        }
        Ok(())
    }

    /// Record with every qubit measured in `basis` and outcome `+1`.
    pub fn uniform(qubits: impl IntoIterator<Item = usize>, basis: Basis) -> Self {
        Self {
            entries: qubits.into_iter().map(|q| (q, (basis, 1))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn outcome(&self, qubit: usize) -> Result<i8> {
        self.entries
            .get(&qubit)
            .map(|e| e.1)
            .ok_or_else(|| Error::lookup("qubit", qubit.to_string()))
    }

    pub fn basis(&self, qubit: usize) -> Option<Basis> {
        self.entries.get(&qubit).map(|e| e.0)
    }

    pub fn flip(&mut self, qubit: usize) -> Result<()> {
        let e = self
            .entries
            .get_mut(&qubit)
            .ok_or_else(|| Error::lookup("qubit", qubit.to_string()))?;
        e.1 = -e.1;
        Ok(())
    }

    /// `R(F) = ∏ λ_q`.
    pub fn product(&self, qubits: &[usize]) -> Result<i8> {
        qubits.iter().try_fold(1i8, |acc, &q| Ok(acc * self.outcome(q)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Basis, i8)> + '_ {
        self.entries.iter().map(|(&q, &(b, o))| (q, b, o))
    }
}

/// Destructive readout of every qubit in one basis, in qubit order.
pub fn measure_all<R: Rng + ?Sized>(state: &mut ClusterState, basis: Basis, rng: &mut R) -> Result<OutcomeRecord> {
    let n = state.num_qubits();
    let mut record = OutcomeRecord::new();
    for q in 0..n {
        let op = PauliOperator::from_sparse(n, &[(q, basis.pauli())])?;
        record.insert(q, basis, state.measure(&op, rng)?)?;
    }
    Ok(record)
}

pub fn measure_all_x<R: Rng + ?Sized>(state: &mut ClusterState, rng: &mut R) -> Result<OutcomeRecord> {
    measure_all(state, Basis::X, rng)
}

/// Measures each listed qubit in Z, removing it from the entangled region.
/// No outcome-dependent correction is applied.
pub fn carve_defect<S: AsRef<str>, R: Rng + ?Sized>(
    state: &mut ClusterState,
    labels: &[S],
    rng: &mut R,
) -> Result<OutcomeRecord> {
    let qubits = state.resolve(labels)?;
    let mut seen = HashSet::new();
    for (q, l) in qubits.iter().zip(labels) {
        if !seen.insert(*q) {
            return Err(Error::domain(format!("qubit `{}` listed twice", l.as_ref())));
        }
    }
    let n = state.num_qubits();
    let mut record = OutcomeRecord::new();
    for q in qubits {
        let op = PauliOperator::from_sparse(n, &[(q, Pauli::Z)])?;
        record.insert(q, Basis::Z, state.measure(&op, rng)?)?;
    }
    Ok(record)
}

/// X-product over the two edge-qubits: the single dual syndrome bit of the
/// eight-qubit state.
pub fn dual_syndrome_check(state: &ClusterState) -> Result<i8> {
    let edges = state.graph.qubits_of_kind(QubitKind::Edge);
    if edges.len() != 2 {
        return Err(Error::domain(format!(
            "dual syndrome needs exactly two edge-qubits, found {}",
            edges.len()
        )));
    }
    let op = PauliOperator::uniform(state.num_qubits(), &edges, Pauli::X)?;
    state.expectation(&op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{build_elementary_cell, build_g8_complex};
    use crate::pauli::pauli_from_text;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g8(engine: Engine) -> ClusterState {
        build_cluster(&interaction_graph(&build_g8_complex()).unwrap(), engine).unwrap()
    }

    #[test]
    fn g8_graph_shape() {
        let g = interaction_graph(&build_g8_complex()).unwrap();
        assert_eq!(g.num_vertices(), 8);
        assert_eq!(g.edges().len(), 12);
        assert!(g.is_face_edge_bipartite());
        for f in 0..6 {
            assert_eq!(g.neighbors(f), [6, 7]);
        }
        assert_eq!(g.label(6), "e7");
    }

    #[test]
    fn elementary_cell_graph_shape() {
        let g = interaction_graph(&build_elementary_cell()).unwrap();
        assert_eq!(g.num_vertices(), 18);
        for f in g.qubits_of_kind(QubitKind::Face) {
            assert_eq!(g.neighbors(f).len(), 4);
        }
        for e in g.qubits_of_kind(QubitKind::Edge) {
            assert_eq!(g.neighbors(e).len(), 2);
        }
    }

    #[test]
    fn star_graph_from_single_face() {
        let cx = CellComplex::from_incidence::<&str>(
            &[],
            &[("f", vec!["a", "b", "c", "d"])],
            &[("a", vec!["1", "2"]), ("b", vec!["2", "3"]), ("c", vec!["3", "4"]), ("d", vec!["4", "1"])],
        )
        .unwrap();
        let g = interaction_graph(&cx).unwrap();
        assert_eq!(g.neighbors(0), [1, 2, 3, 4]);
        assert_eq!(g.edges().len(), 4);
    }

    #[test]
    fn graph_validation() {
        let v = |n: usize| (0..n).map(|i| (format!("q{i}"), QubitKind::Plain)).collect::<Vec<_>>();
        assert!(matches!(InteractionGraph::new(v(2), &[(0, 0)]), Err(Error::Validation(_))));
        assert!(matches!(InteractionGraph::new(v(2), &[(0, 1), (1, 0)]), Err(Error::Validation(_))));
        assert!(matches!(InteractionGraph::new(v(2), &[(0, 2)]), Err(Error::Index { .. })));
    }

    #[test]
    fn generators_match_examples() {
        let g = interaction_graph(&build_g8_complex()).unwrap();
        let gens = stabilizer_generators(&g);
        assert_eq!(gens[6].operator, pauli_from_text("ZZZZZZXI").unwrap());
        assert_eq!(gens[0].operator, pauli_from_text("XIIIIIZZ").unwrap());
        for a in &gens {
            for b in &gens {
                assert!(a.operator.commutes(&b.operator).unwrap());
            }
        }
        let single = InteractionGraph::new(vec![("a".into(), QubitKind::Plain)], &[]).unwrap();
        assert_eq!(stabilizer_generators(&single)[0].operator, pauli_from_text("X").unwrap());
    }

    #[test]
    fn clusters_satisfy_generators() {
        for engine in [Engine::Tableau, Engine::Dense] {
            let s = g8(engine);
            for k in stabilizer_generators(s.graph()) {
                assert_eq!(s.expectation(&k.operator).unwrap(), 1);
            }
        }
        let single = InteractionGraph::new(vec![("a".into(), QubitKind::Plain)], &[]).unwrap();
        let s = build_cluster(&single, Engine::Dense).unwrap();
        assert_eq!(s.expectation(&pauli_from_text("X").unwrap()).unwrap(), 1);
    }

    #[test]
    fn surface_correlation_examples() {
        for engine in [Engine::Tableau, Engine::Dense] {
            let s = g8(engine);
            assert_eq!(surface_correlation(&s, &["f5", "f6"]).unwrap(), 1);
            assert_eq!(surface_correlation(&s, &["f2", "f5"]).unwrap(), 1);
            assert_eq!(surface_correlation(&s, &["f1"]).unwrap(), 0);
            assert!(matches!(surface_correlation(&s, &["f9"]), Err(Error::Lookup { .. })));
            assert!(matches!(surface_correlation::<&str>(&s, &[]), Err(Error::Domain(_))));
        }
        let cube = build_cluster(&interaction_graph(&build_elementary_cell()).unwrap(), Engine::Tableau).unwrap();
        assert_eq!(
            surface_correlation(&cube, &["f1", "f2", "f3", "f4", "f5", "f6"]).unwrap(),
            1
        );
    }

    #[test]
    fn dense_capacity_error() {
        let cx = crate::cell_complex::build_cuboid_complex(2, 1, 1).unwrap();
        let g = interaction_graph(&cx).unwrap();
        assert!(matches!(build_cluster(&g, Engine::Dense), Err(Error::Capacity { .. })));
        assert!(build_cluster(&g, Engine::Tableau).is_ok());
    }

    #[test]
    fn x_readout_closed_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut s = g8(Engine::Tableau);
            let r = measure_all_x(&mut s, &mut rng).unwrap();
            assert_eq!(r.len(), 8);
            assert_eq!(r.product(&[4, 5]).unwrap(), 1);
            assert_eq!(r.product(&[0, 1]).unwrap(), 1);
        }
    }

    #[test]
    fn carving_edges_leaves_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mut s = g8(Engine::Tableau);
            let mut d = g8(Engine::Dense);
            let zs = carve_defect(&mut s, &["e7", "e8"], &mut rng).unwrap();
            for (q, _, o) in zs.iter() {
                let z = PauliOperator::from_sparse(8, &[(q, Pauli::Z)]).unwrap();
                let Backend::Dense(v) = &mut d.backend else { unreachable!() };
                v.project_pauli(&z, o).unwrap();
            }
            let sign = zs.product(&[6, 7]).unwrap();
            for f in 0..6 {
                let x = PauliOperator::from_sparse(8, &[(f, Pauli::X)]).unwrap();
                assert_eq!(s.expectation(&x).unwrap(), sign);
                assert_eq!(d.expectation(&x).unwrap(), sign);
            }
        }
    }

    #[test]
    fn carving_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = g8(Engine::Tableau);
        let before = s.clone();
        assert!(carve_defect::<&str, _>(&mut s, &[], &mut rng).unwrap().is_empty());
        assert_eq!(s, before);
        assert!(matches!(carve_defect(&mut s, &["e7", "e7"], &mut rng), Err(Error::Domain(_))));

        let mut cube = build_cluster(&interaction_graph(&build_elementary_cell()).unwrap(), Engine::Tableau).unwrap();
        carve_defect(&mut cube, &["f1"], &mut rng).unwrap();
        assert_eq!(surface_correlation(&cube, &["f2", "f3", "f4", "f5", "f6"]).unwrap(), 0);
    }

    #[test]
    fn dual_syndrome() {
        let mut s = g8(Engine::Tableau);
        assert_eq!(dual_syndrome_check(&s).unwrap(), 1);
        s.apply_pauli(&PauliOperator::from_sparse(8, &[(2, Pauli::Z)]).unwrap()).unwrap();
        assert_eq!(dual_syndrome_check(&s).unwrap(), 1);
        s.apply_pauli(&PauliOperator::from_sparse(8, &[(6, Pauli::Z)]).unwrap()).unwrap();
        assert_eq!(dual_syndrome_check(&s).unwrap(), -1);
        let cube = build_cluster(&interaction_graph(&build_elementary_cell()).unwrap(), Engine::Tableau).unwrap();
        assert!(matches!(dual_syndrome_check(&cube), Err(Error::Domain(_))));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = interaction_graph(&build_elementary_cell()).unwrap();
        let back = InteractionGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.labels(), g.labels());
        let mut a: Vec<_> = g.edges().to_vec();
        let mut b: Vec<_> = back.edges().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        let bad = r#"{"a": {"kind": "plain", "neighbors": ["b"]}, "b": {"kind": "plain", "neighbors": []}}"#;
        assert!(matches!(InteractionGraph::from_json(bad), Err(Error::Validation(_))));
    }
}
