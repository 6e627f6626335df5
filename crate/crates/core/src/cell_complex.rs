//! Three-dimensional cell complexes with GF(2) boundary maps.
//!
//! Cells of dimension 0..=3 (vertices, edges, faces, volumes) carry stable
//! names. A [`Chain`] is a GF(2) vector over the cells of one dimension and
//! its boundary is the sum of the boundaries of its cells. Homological
//! equivalence of closed `d`-chains is decided by Gaussian elimination over
//! the `(#d-cells × #(d+1)-cells)` boundary matrix.

use std::collections::HashMap;
use std::ops::Add;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitRow, EliminationBasis};

/// Face + edge cells allowed in a generated cuboid unless overridden.
pub const DEFAULT_QUBIT_CAP: usize = 4096;

pub const VERTEX: usize = 0;
pub const EDGE: usize = 1;
pub const FACE: usize = 2;
pub const VOLUME: usize = 3;

const KIND: [&str; 4] = ["vertex", "edge", "face", "volume"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub volumes: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl CellCounts {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.volumes, self.faces, self.edges, self.vertices)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    names: [Vec<String>; 4],
    lookup: [HashMap<String, usize>; 4],
    /// `boundary[d][i]`: sorted indices of the `(d-1)`-cells bounding cell `i`.
    boundary: [Vec<Vec<usize>>; 4],
}

/// Wire format: `{"volumes": {name: [faces]}, "faces": {name: [edges]}, "edges": {name: [vertices]}}`.
/// Vertices are implied and ordered by first appearance among the edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub volumes: IndexMap<String, Vec<String>>,
    pub faces: IndexMap<String, Vec<String>>,
    pub edges: IndexMap<String, Vec<String>>,
}

/// A GF(2) combination of the cells of one dimension of some complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    dim: usize,
    bits: BitRow,
}

impl Chain {
    pub fn zero(dim: usize, len: usize) -> Self {
        Self {
            dim,
            bits: BitRow::zeros(len),
        }
    }

    pub fn from_bits(dim: usize, bits: BitRow) -> Self {
        Self { dim, bits }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> &BitRow {
        &self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    /// Number of cells in the support.
    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn support(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn cell_names<'a>(&self, complex: &'a CellComplex) -> Vec<&'a str> {
        self.bits
            .iter_ones()
            .map(|i| complex.names[self.dim][i].as_str())
            .collect()
    }

    pub fn add_assign(&mut self, other: &Chain) -> Result<()> {
        if self.dim != other.dim || self.bits.len() != other.bits.len() {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        self.bits.xor_assign(&other.bits);
        Ok(())
    }
}

impl Add for &Chain {
    type Output = Chain;

    /// GF(2) sum. Panics if the chains live on different cell sets.
    fn add(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_assign(rhs).expect("adding chains of different dimension");
        out
    }
}

impl CellComplex {
    /// Builds a complex from named incidences. Every listed boundary must be
    /// nonempty for faces and volumes and may not repeat a cell.
    pub fn from_incidence<S: AsRef<str>>(
        volumes: &[(S, Vec<S>)],
        faces: &[(S, Vec<S>)],
        edges: &[(S, Vec<S>)],
    ) -> Result<Self> {
        let mut names: [Vec<String>; 4] = Default::default();
        let mut lookup: [HashMap<String, usize>; 4] = Default::default();
        let mut boundary: [Vec<Vec<usize>>; 4] = Default::default();

        // vertices first, in order of first appearance
        for (_, verts) in edges {
            for v in verts {
                let v = v.as_ref();
                if !lookup[VERTEX].contains_key(v) {
                    lookup[VERTEX].insert(v.to_string(), names[VERTEX].len());
                    names[VERTEX].push(v.to_string());
                }
            }
        }
        boundary[VERTEX] = vec![Vec::new(); names[VERTEX].len()];

        for (dim, cells) in [(EDGE, edges), (FACE, faces), (VOLUME, volumes)] {
            for (name, bd) in cells {
                let name = name.as_ref();
                if lookup[dim].contains_key(name) {
                    return Err(Error::domain(format!("duplicate {} `{name}`", KIND[dim])));
                }
                if bd.is_empty() && dim >= FACE {
                    return Err(Error::domain(format!("{} `{name}` has an empty boundary", KIND[dim])));
                }
                let mut indices = Vec::with_capacity(bd.len());
                for b in bd {
                    let b = b.as_ref();
                    let idx = *lookup[dim - 1]
                        .get(b)
                        .ok_or_else(|| Error::lookup(KIND[dim - 1], b))?;
                    indices.push(idx);
                }
                indices.sort_unstable();
                if indices.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::domain(format!(
                        "{} `{name}` lists a boundary cell twice",
                        KIND[dim]
                    )));
                }
                lookup[dim].insert(name.to_string(), names[dim].len());
                names[dim].push(name.to_string());
                boundary[dim].push(indices);
            }
        }
        Ok(Self {
            names,
            lookup,
            boundary,
        })
    }

    pub fn counts(&self) -> CellCounts {
        CellCounts {
            volumes: self.names[VOLUME].len(),
            faces: self.names[FACE].len(),
            edges: self.names[EDGE].len(),
            vertices: self.names[VERTEX].len(),
        }
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.names[dim].len()
    }

    pub fn names(&self, dim: usize) -> &[String] {
        &self.names[dim]
    }

    pub fn index_of(&self, dim: usize, name: &str) -> Result<usize> {
        self.lookup
            .get(dim)
            .and_then(|m| m.get(name))
            .copied()
            .ok_or_else(|| Error::lookup(KIND.get(dim).copied().unwrap_or("cell"), name))
    }

    /// Indices of the `(dim-1)`-cells on the boundary of one cell.
    pub fn cell_boundary(&self, dim: usize, index: usize) -> &[usize] {
        &self.boundary[dim][index]
    }

    pub fn empty_chain(&self, dim: usize) -> Chain {
        Chain::zero(dim, self.num_cells(dim))
    }

    pub fn chain<S: AsRef<str>>(&self, dim: usize, cells: &[S]) -> Result<Chain> {
        if dim > VOLUME {
            return Err(Error::domain(format!("no cells of dimension {dim}")));
        }
        let mut chain = self.empty_chain(dim);
        for name in cells {
            let i = self.index_of(dim, name.as_ref())?;
            chain.bits.flip(i);
        }
        Ok(chain)
    }

    fn check_chain(&self, c: &Chain) -> Result<()> {
        if c.dim > VOLUME || c.bits.len() != self.num_cells(c.dim) {
            return Err(Error::Dimension {
                expected: self.num_cells(c.dim.min(VOLUME)),
                found: c.bits.len(),
            });
        }
        Ok(())
    }

    pub fn boundary(&self, c: &Chain) -> Result<Chain> {
        self.check_chain(c)?;
        if c.dim == VERTEX {
            return Err(Error::domain("vertices have no boundary"));
        }
        let mut out = self.empty_chain(c.dim - 1);
        for i in c.bits.iter_ones() {
            for &b in &self.boundary[c.dim][i] {
                out.bits.flip(b);
            }
        }
        Ok(out)
    }

    pub fn is_closed(&self, c: &Chain) -> Result<bool> {
        Ok(self.boundary(c)?.is_empty())
    }

    /// `∂∂ = 0` checked cell by cell for every face and volume.
    pub fn boundary_squared_vanishes(&self) -> bool {
        (FACE..=VOLUME).all(|dim| {
            (0..self.num_cells(dim)).all(|i| {
                let mut c = self.empty_chain(dim);
                c.bits.flip(i);
                let once = self.boundary(&c).expect("valid chain");
                self.boundary(&once).expect("valid chain").is_empty()
            })
        })
    }

    /// Column space of `∂_{dim+1}` inside the `dim`-chains.
    pub fn boundary_space(&self, dim: usize) -> Result<BoundarySpace> {
        if dim >= VOLUME {
            return Err(Error::domain(format!(
                "no cells of dimension {} bound {dim}-chains",
                dim + 1
            )));
        }
        let columns: Vec<BitRow> = self.boundary[dim + 1]
            .iter()
            .map(|bd| BitRow::from_indices(self.num_cells(dim), bd.iter().copied()))
            .collect();
        Ok(BoundarySpace {
            dim,
            basis: EliminationBasis::from_columns(self.num_cells(dim), &columns),
        })
    }

    /// Returns a set of `(d+1)`-cells `V` with `a + b = ∂V`, or `None` if the
    /// closed chains lie in different homology classes.
    pub fn homologically_equivalent(&self, a: &Chain, b: &Chain) -> Result<Option<Chain>> {
        if a.dim != b.dim {
            return Err(Error::Dimension {
                expected: a.dim,
                found: b.dim,
            });
        }
        for c in [a, b] {
            if !self.is_closed(c)? {
                return Err(Error::domain(format!(
                    "chain {{{}}} is not closed",
                    c.cell_names(self).join(", ")
                )));
            }
        }
        self.boundary_space(a.dim)?.witness(&(a + b))
    }

    /// Rank of `∂_dim` (zero for vertices).
    pub fn boundary_rank(&self, dim: usize) -> usize {
        if dim == VERTEX || dim > VOLUME {
            return 0;
        }
        let columns: Vec<BitRow> = self.boundary[dim]
            .iter()
            .map(|bd| BitRow::from_indices(self.num_cells(dim - 1), bd.iter().copied()))
            .collect();
        EliminationBasis::from_columns(self.num_cells(dim - 1), &columns).rank()
    }

    /// Dimension of the `dim`-th Z2 homology group.
    pub fn betti(&self, dim: usize) -> usize {
        let cycles = self.num_cells(dim) - self.boundary_rank(dim);
        cycles - self.boundary_rank(dim + 1)
    }

    pub fn to_json_model(&self) -> ComplexJson {
        let level = |dim: usize| -> IndexMap<String, Vec<String>> {
            self.names[dim]
                .iter()
                .zip(&self.boundary[dim])
                .map(|(name, bd)| {
                    let cells = bd.iter().map(|&i| self.names[dim - 1][i].clone()).collect();
                    (name.clone(), cells)
                })
                .collect()
        };
        ComplexJson {
            volumes: level(VOLUME),
            faces: level(FACE),
            edges: level(EDGE),
        }
    }

    pub fn from_json_model(model: &ComplexJson) -> Result<Self> {
        let flat = |m: &IndexMap<String, Vec<String>>| -> Vec<(String, Vec<String>)> {
            m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
        };
        Self::from_incidence(&flat(&model.volumes), &flat(&model.faces), &flat(&model.edges))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_model()).expect("string maps serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ComplexJson = serde_json::from_str(text).map_err(|e| Error::from_json(&e))?;
        Self::from_json_model(&model)
    }
}

/// Image of a boundary map, ready for membership tests and coset reduction.
#[derive(Clone, Debug)]
pub struct BoundarySpace {
    dim: usize,
    basis: EliminationBasis,
}

impl BoundarySpace {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// `(d+1)`-cells whose boundary is `c`, if any.
    pub fn witness(&self, c: &Chain) -> Result<Option<Chain>> {
        if c.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: c.dim,
            });
        }
        Ok(self
            .basis
            .solve(&c.bits)
            .map(|bits| Chain::from_bits(self.dim + 1, bits)))
    }

    /// Canonical representative of the homology class of a closed chain.
    pub fn class_key(&self, c: &Chain) -> BitRow {
        self.basis.reduce(&c.bits).0
    }
}

fn owned(pairs: Vec<(&str, Vec<&str>)>) -> Vec<(String, Vec<String>)> {
    pairs
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.into_iter().map(str::to_string).collect()))
        .collect()
}

/// The single cube: 1 volume, 6 faces `f1..f6`, 12 edges `e7..e18`, 8 vertices `s1..s8`.
///
/// Vertex `s{k+1}` sits at `(k & 1, k >> 1 & 1, k >> 2 & 1)`. Faces come in
/// axis order, `f1`/`f2` at `x = 0`/`x = 1`, then `y`, then `z`.
pub fn build_elementary_cell() -> CellComplex {
    let coord = |k: usize| [k & 1, (k >> 1) & 1, (k >> 2) & 1];
    let mut edges: Vec<(String, Vec<String>)> = Vec::new();
    let mut edge_ends: Vec<(usize, usize)> = Vec::new();
    for axis in 0..3 {
        for a in 0..8 {
            if coord(a)[axis] == 0 {
                let b = a | (1 << axis);
                edge_ends.push((a, b));
                edges.push((
                    format!("e{}", 7 + edges.len()),
                    vec![format!("s{}", a + 1), format!("s{}", b + 1)],
                ));
            }
        }
    }
    let mut faces: Vec<(String, Vec<String>)> = Vec::new();
    for axis in 0..3 {
        for side in 0..2 {
            let bd = edge_ends
                .iter()
                .zip(&edges)
                .filter(|((a, b), _)| coord(*a)[axis] == side && coord(*b)[axis] == side)
                .map(|(_, (name, _))| name.clone())
                .collect();
            faces.push((format!("f{}", 2 * axis + side + 1), bd));
        }
    }
    let volumes = vec![(
        "cube".to_string(),
        faces.iter().map(|(n, _)| n.clone()).collect(),
    )];
    CellComplex::from_incidence(&volumes, &faces, &edges).expect("cube incidences are consistent")
}

/// The four-volume complex carrying the eight-qubit cluster: all six faces
/// share the boundary `e7 + e8`, and `v, w, y, z` are bounded by
/// `{f1,f2}, {f2,f5}, {f3,f6}, {f3,f4}`. The central volume is absent.
pub fn build_g8_complex() -> CellComplex {
    let volumes = owned(vec![
        ("v", vec!["f1", "f2"]),
        ("w", vec!["f2", "f5"]),
        ("y", vec!["f3", "f6"]),
        ("z", vec!["f3", "f4"]),
    ]);
    let faces = owned(
        ["f1", "f2", "f3", "f4", "f5", "f6"]
            .into_iter()
            .map(|f| (f, vec!["e7", "e8"]))
            .collect(),
    );
    let edges = owned(vec![("e7", vec!["s", "t"]), ("e8", vec!["s", "t"])]);
    CellComplex::from_incidence(&volumes, &faces, &edges).expect("fixture incidences are consistent")
}

/// Face and edge counts of an `l × w × t` box of unit cubes.
pub fn cuboid_counts(l: usize, w: usize, t: usize) -> CellCounts {
    CellCounts {
        volumes: l * w * t,
        faces: 3 * l * w * t + l * w + w * t + l * t,
        edges: 3 * l * w * t + 2 * (l * w + w * t + l * t) + l + w + t,
        vertices: (l + 1) * (w + 1) * (t + 1),
    }
}

pub fn build_cuboid_complex(l: usize, w: usize, t: usize) -> Result<CellComplex> {
    build_cuboid_complex_with_cap(l, w, t, DEFAULT_QUBIT_CAP)
}

/// Box of `l × w × t` unit cubes. Cells are named by doubled integer
/// coordinates, e.g. `f(1,1,0)`; a coordinate is odd exactly along the
/// directions the cell extends in.
pub fn build_cuboid_complex_with_cap(l: usize, w: usize, t: usize, qubit_cap: usize) -> Result<CellComplex> {
    if l == 0 || w == 0 || t == 0 {
        return Err(Error::domain(format!("cuboid dimensions must be positive, got {l}x{w}x{t}")));
    }
    let counts = cuboid_counts(l, w, t);
    let qubits = counts.faces + counts.edges;
    if qubits > qubit_cap {
        return Err(Error::Capacity {
            requested: qubits,
            limit: qubit_cap,
        });
    }
    let extent = [2 * l, 2 * w, 2 * t];
    const PREFIX: [char; 4] = ['p', 'e', 'f', 'c'];
    let name = |c: [usize; 3]| {
        let dim = c.iter().filter(|&&x| x % 2 == 1).count();
        format!("{}({},{},{})", PREFIX[dim], c[0], c[1], c[2])
    };
    let mut levels: [Vec<(String, Vec<String>)>; 4] = Default::default();
    for x in 0..=extent[0] {
        for y in 0..=extent[1] {
            for z in 0..=extent[2] {
                let c = [x, y, z];
                let dim = c.iter().filter(|&&v| v % 2 == 1).count();
                if dim == 0 {
                    continue;
                }
                let mut bd = Vec::with_capacity(2 * dim);
                for axis in 0..3 {
                    if c[axis] % 2 == 1 {
                        for delta in [-1isize, 1] {
                            let mut n = c;
                            n[axis] = (c[axis] as isize + delta) as usize;
                            bd.push(name(n));
                        }
                    }
                }
                levels[dim].push((name(c), bd));
            }
        }
    }
    CellComplex::from_incidence(&levels[VOLUME], &levels[FACE], &levels[EDGE])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(c: &Chain, cx: &CellComplex) -> Vec<String> {
        c.cell_names(cx).into_iter().map(String::from).collect()
    }

    #[test]
    fn elementary_cell_counts() {
        let cx = build_elementary_cell();
        assert_eq!(cx.counts().as_tuple(), (1, 6, 12, 8));
        for f in 0..6 {
            assert_eq!(cx.cell_boundary(FACE, f).len(), 4);
        }
        let vol = cx.chain(VOLUME, &["cube"]).unwrap();
        let bd = cx.boundary(&vol).unwrap();
        assert_eq!(bd.weight(), 6);
        assert!(cx.is_closed(&bd).unwrap());
        assert!(cx.boundary_squared_vanishes());
    }

    #[test]
    fn g8_complex_incidences() {
        let cx = build_g8_complex();
        assert_eq!(cx.counts().as_tuple(), (4, 6, 2, 2));
        let f3 = cx.chain(FACE, &["f3"]).unwrap();
        assert_eq!(names(&cx.boundary(&f3).unwrap(), &cx), ["e7", "e8"]);
        let v = cx.chain(VOLUME, &["v"]).unwrap();
        assert_eq!(names(&cx.boundary(&v).unwrap(), &cx), ["f1", "f2"]);
        for e in ["e7", "e8"] {
            let c = cx.chain(EDGE, &[e]).unwrap();
            assert_eq!(names(&cx.boundary(&c).unwrap(), &cx), ["s", "t"]);
        }
        assert!(cx.boundary_squared_vanishes());
    }

    #[test]
    fn boundary_examples_and_errors() {
        let cx = build_g8_complex();
        let f12 = cx.chain(FACE, &["f1", "f2"]).unwrap();
        assert!(cx.boundary(&f12).unwrap().is_empty());
        assert!(cx.boundary(&cx.empty_chain(FACE)).unwrap().is_empty());
        assert!(matches!(
            cx.boundary(&cx.chain(VERTEX, &["s"]).unwrap()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(cx.chain(FACE, &["f9"]), Err(Error::Lookup { .. })));
    }

    #[test]
    fn closed_surfaces() {
        let g8 = build_g8_complex();
        assert!(g8.is_closed(&g8.chain(FACE, &["f5", "f6"]).unwrap()).unwrap());
        assert!(!g8.is_closed(&g8.chain(FACE, &["f1"]).unwrap()).unwrap());
        let cube = build_elementary_cell();
        let all = cube.chain(FACE, &["f1", "f2", "f3", "f4", "f5", "f6"]).unwrap();
        assert!(cube.is_closed(&all).unwrap());
    }

    #[test]
    fn homology_examples() {
        let cx = build_g8_complex();
        let s = |a: &str, b: &str| cx.chain(FACE, &[a, b]).unwrap();
        let w = cx.homologically_equivalent(&s("f1", "f2"), &s("f2", "f5")).unwrap();
        assert_eq!(names(&w.unwrap(), &cx), ["v", "w"]);
        let w = cx.homologically_equivalent(&s("f5", "f6"), &s("f1", "f3")).unwrap();
        assert_eq!(names(&w.unwrap(), &cx), ["v", "w", "y"]);
        assert!(cx
            .homologically_equivalent(&s("f1", "f2"), &s("f5", "f6"))
            .unwrap()
            .is_none());
        assert!(matches!(
            cx.homologically_equivalent(&s("f1", "f2"), &cx.chain(FACE, &["f1"]).unwrap()),
            Err(Error::Domain(_))
        ));
        assert_eq!(cx.betti(FACE), 1);
    }

    /// Exhaustive scan of all 16 volume subsets: `{f1,f2} + {f5,f6}` is never a boundary.
    #[test]
    fn inequivalence_by_enumeration() {
        let cx = build_g8_complex();
        let target = cx.chain(FACE, &["f1", "f2", "f5", "f6"]).unwrap();
        for mask in 0u32..16 {
            let mut vols = cx.empty_chain(VOLUME);
            for i in 0..4 {
                if mask >> i & 1 == 1 {
                    vols.bits.flip(i);
                }
            }
            assert_ne!(cx.boundary(&vols).unwrap(), target);
        }
    }

    #[test]
    fn cuboid_counts_match_enumeration() {
        for (l, w, t) in [(1, 1, 1), (2, 1, 1), (2, 2, 2), (3, 1, 2), (1, 4, 1)] {
            let cx = build_cuboid_complex(l, w, t).unwrap();
            assert_eq!(cx.counts(), cuboid_counts(l, w, t), "{l}x{w}x{t}");
            assert!(cx.boundary_squared_vanishes());
        }
        let c = build_cuboid_complex(2, 1, 1).unwrap().counts();
        assert_eq!((c.faces, c.edges), (11, 20));
        assert_eq!(build_cuboid_complex(2, 2, 2).unwrap().counts().volumes, 8);
        assert!(matches!(
            build_cuboid_complex_with_cap(5, 5, 5, 100),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(build_cuboid_complex(0, 1, 1), Err(Error::Domain(_))));
    }

    /// Explicit isomorphism between the unit cuboid and the named cube, built
    /// from vertex coordinates and checked to preserve every incidence.
    #[test]
    fn unit_cuboid_is_the_elementary_cell() {
        let cube = build_elementary_cell();
        let cuboid = build_cuboid_complex(1, 1, 1).unwrap();
        let mut vmap = HashMap::new();
        for k in 0..8 {
            let c = [k & 1, (k >> 1) & 1, (k >> 2) & 1];
            let from = cube.index_of(VERTEX, &format!("s{}", k + 1)).unwrap();
            let to = cuboid
                .index_of(VERTEX, &format!("p({},{},{})", 2 * c[0], 2 * c[1], 2 * c[2]))
                .unwrap();
            vmap.insert(from, to);
        }
        let mut maps = vec![vmap];
        for dim in EDGE..=VOLUME {
            let lower = &maps[dim - 1];
            let mut by_boundary: HashMap<Vec<usize>, usize> = HashMap::new();
            for i in 0..cuboid.num_cells(dim) {
                by_boundary.insert(cuboid.cell_boundary(dim, i).to_vec(), i);
            }
            let mut map = HashMap::new();
            for i in 0..cube.num_cells(dim) {
                let mut image: Vec<usize> = cube.cell_boundary(dim, i).iter().map(|b| lower[b]).collect();
                image.sort_unstable();
                map.insert(i, by_boundary[&image]);
            }
            let mut targets: Vec<_> = map.values().copied().collect();
            targets.sort_unstable();
            targets.dedup();
            assert_eq!(targets.len(), cube.num_cells(dim));
            assert_eq!(targets.len(), cuboid.num_cells(dim));
            maps.push(map);
        }
    }

    #[test]
    fn json_round_trip_and_errors() {
        for cx in [
            build_elementary_cell(),
            build_g8_complex(),
            build_cuboid_complex(2, 1, 1).unwrap(),
        ] {
            let text = cx.to_json();
            assert_eq!(CellComplex::from_json(&text).unwrap(), cx);
        }
        let text = build_g8_complex().to_json();
        assert!(text.find("\"volumes\"").unwrap() < text.find("\"faces\"").unwrap());

        let err = CellComplex::from_json("{\"volumes\": {}, \"faces\": {\n  \"f1\": [\"e1\"]\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
        let err = CellComplex::from_json(r#"{"volumes": {"v": ["f2"]}, "faces": {"f1": ["e1"]}, "edges": {"e1": ["a", "b"]}}"#)
            .unwrap_err();
        assert_eq!(err, Error::Lookup { kind: "face", name: "f2".into() });
        let err = CellComplex::from_json(r#"{"volumes": {}, "faces": {"f1": []}, "edges": {}}"#).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }
}
