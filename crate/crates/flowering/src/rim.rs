//! Regular indexed multigraphs and words on their edges.
//!
//! An `n`-RIM assigns every vertex `n` indexed half-edges; a pairing
//! involution glues half-edges into edges. Petals are self-paired
//! half-edges (single-element orbits), produced either at construction or
//! by cutting. Pairing is stored per half-edge rather than as one global
//! return permutation: cutting can send `E(v,j)` outside the kept subset
//! while `E(v, j-bar)` stays inside, and per-half-edge pairing keeps the
//! cut graph well defined in that case (the severed half-edge simply
//! becomes a self-paired petal).
//!
//! All distances are exact rationals; nothing in this module touches
//! floating point.

use crate::field::FieldElement;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RimError {
    #[error("pairing is not an involution at half-edge ({0}, {1})")]
    NotInvolution(u32, u32),
    #[error("pairing incompatible with neighbor map at half-edge ({0}, {1})")]
    PairingViolation(u32, u32),
    #[error("neighbor or pairing table has the wrong length")]
    BadTableLength,
    #[error("vertex id out of range")]
    VertexOutOfRange,
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset contains duplicates or out-of-range vertices")]
    BadSubset,
    #[error("vertex sets have different sizes")]
    SizeMismatch,
    #[error("words or graphs have mismatched shapes")]
    ShapeMismatch,
    #[error("cut subsets do not cover the parent vertex set")]
    CoverageGap,
    #[error("cut {0} is not isomorphic to cut 0 under the supplied map")]
    NotIsomorphic(usize),
    #[error("multiplicity is not invariant under isomorphism {0}")]
    MultiplicityAsymmetry(usize),
    #[error("isomorphism 0 must be the identity on the first subset")]
    NonIdentityBaseIso,
    #[error("weights must be strictly positive")]
    NonPositiveWeight,
}

/// One edge of a RIM: the quotient of a pairing orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Lexicographically least half-edge of the orbit, packed `v * n + j`.
    pub rep: u32,
    /// Single-element orbit.
    pub is_petal: bool,
}

/// An `n`-regular indexed multigraph with half-edge pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rim {
    vertex_count: usize,
    arity: usize,
    /// `neighbor[v*n + j]` is `E(v, j)`.
    neighbor: Vec<u32>,
    /// `pairing[v*n + j]` is the partner half-edge, packed; fixed points are petals.
    pairing: Vec<u32>,
    /// Half-edge to edge id.
    edge_of: Vec<u32>,
    edges: Vec<Edge>,
    petal_count: usize,
}

impl Rim {
    /// Validates the tables and materializes the edge set.
    pub fn new(arity: usize, neighbor: Vec<u32>, pairing: Vec<u32>) -> Result<Rim, RimError> {
        if arity == 0 || neighbor.len() != pairing.len() || neighbor.len() % arity != 0 {
            return Err(RimError::BadTableLength);
        }
        let vertex_count = neighbor.len() / arity;
        let half_edges = neighbor.len();
        for h in 0..half_edges {
            if (neighbor[h] as usize) >= vertex_count {
                return Err(RimError::VertexOutOfRange);
            }
            if (pairing[h] as usize) >= half_edges {
                return Err(RimError::VertexOutOfRange);
            }
        }
        for h in 0..half_edges {
            let (v, j) = ((h / arity) as u32, (h % arity) as u32);
            let p = pairing[h] as usize;
            if pairing[p] as usize != h {
                return Err(RimError::NotInvolution(v, j));
            }
            let pv = p / arity;
            if p == h {
                // petal: fixed point with a self-neighbor
                if neighbor[h] != v {
                    return Err(RimError::PairingViolation(v, j));
                }
            } else if neighbor[h] as usize != pv || neighbor[p] != v {
                return Err(RimError::PairingViolation(v, j));
            }
        }

        let mut edge_of = vec![u32::MAX; half_edges];
        let mut edges = Vec::new();
        let mut petal_count = 0usize;
        for h in 0..half_edges {
            if edge_of[h] != u32::MAX {
                continue;
            }
            let id = edges.len() as u32;
            let p = pairing[h] as usize;
            edge_of[h] = id;
            edge_of[p] = id;
            let is_petal = p == h;
            if is_petal {
                petal_count += 1;
            }
            edges.push(Edge { rep: h as u32, is_petal });
        }

        Ok(Rim { vertex_count, arity, neighbor, pairing, edge_of, edges, petal_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn petal_count(&self) -> usize {
        self.petal_count
    }

    pub fn neighbor(&self, v: u32, j: usize) -> u32 {
        self.neighbor[v as usize * self.arity + j]
    }

    /// Partner half-edge of `(v, j)` as a `(vertex, index)` pair.
    pub fn partner(&self, v: u32, j: usize) -> (u32, usize) {
        let p = self.pairing[v as usize * self.arity + j] as usize;
        ((p / self.arity) as u32, p % self.arity)
    }

    pub fn edge_id(&self, v: u32, j: usize) -> usize {
        self.edge_of[v as usize * self.arity + j] as usize
    }

    pub fn is_petal_halfedge(&self, v: u32, j: usize) -> bool {
        let h = v as usize * self.arity + j;
        self.pairing[h] as usize == h
    }

    /// Number of petals attached to `v`.
    pub fn petals_at(&self, v: u32) -> usize {
        (0..self.arity).filter(|&j| self.is_petal_halfedge(v, j)).count()
    }

    /// Number of original loops at `v` (two half-edges, one edge).
    pub fn loops_at(&self, v: u32) -> usize {
        (0..self.arity)
            .filter(|&j| {
                let (pv, pj) = self.partner(v, j);
                pv == v && pj != j
            })
            .count()
            / 2
    }

    /// Raw tables, used by digests and the text format.
    pub fn tables(&self) -> (&[u32], &[u32]) {
        (&self.neighbor, &self.pairing)
    }

    /// Restriction to `subset` per the cut semantics: edges leaving the
    /// subset become self-paired petals. Vertex `i` of the result is the
    /// `i`-th smallest member of `subset`.
    pub fn cut_graph(&self, subset: &[u32]) -> Result<Rim, RimError> {
        let sorted = check_subset(subset, self.vertex_count)?;
        let n = self.arity;
        let local = local_index_map(&sorted, self.vertex_count);
        let mut neighbor = Vec::with_capacity(sorted.len() * n);
        let mut pairing = Vec::with_capacity(sorted.len() * n);
        for (li, &v) in sorted.iter().enumerate() {
            for j in 0..n {
                let target = self.neighbor(v, j);
                let (pv, pj) = self.partner(v, j);
                if self.is_petal_halfedge(v, j)
                    || local[target as usize] == u32::MAX
                    || local[pv as usize] == u32::MAX
                {
                    // kept petal, or severed half-edge turned petal
                    neighbor.push(li as u32);
                    pairing.push((li * n + j) as u32);
                } else {
                    neighbor.push(local[target as usize]);
                    pairing.push(local[pv as usize] * n as u32 + pj as u32);
                }
            }
        }
        Rim::new(n, neighbor, pairing)
    }
}

fn check_subset(subset: &[u32], vertex_count: usize) -> Result<Vec<u32>, RimError> {
    if subset.is_empty() {
        return Err(RimError::EmptySubset);
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted[sorted.len() - 1] as usize >= vertex_count
    {
        return Err(RimError::BadSubset);
    }
    Ok(sorted)
}

fn local_index_map(sorted: &[u32], vertex_count: usize) -> Vec<u32> {
    let mut local = vec![u32::MAX; vertex_count];
    for (i, &v) in sorted.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    local
}

/// A word: one field element per edge of a fixed RIM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWord {
    pub values: Vec<FieldElement>,
}

impl EdgeWord {
    pub fn zero(rim: &Rim) -> EdgeWord {
        EdgeWord { values: vec![FieldElement::ZERO; rim.edge_count()] }
    }

    pub fn from_values(rim: &Rim, values: Vec<FieldElement>) -> Result<EdgeWord, RimError> {
        if values.len() != rim.edge_count() {
            return Err(RimError::ShapeMismatch);
        }
        Ok(EdgeWord { values })
    }

    pub fn value_at(&self, rim: &Rim, v: u32, j: usize) -> FieldElement {
        self.values[rim.edge_id(v, j)]
    }

    /// The local view `f(v, 1..n)`.
    pub fn local_view(&self, rim: &Rim, v: u32) -> Vec<FieldElement> {
        (0..rim.arity()).map(|j| self.value_at(rim, v, j)).collect()
    }

    /// Restriction of the word to a cut of its graph.
    pub fn cut_word(&self, rim: &Rim, subset: &[u32]) -> Result<EdgeWord, RimError> {
        if self.values.len() != rim.edge_count() {
            return Err(RimError::ShapeMismatch);
        }
        let sorted = check_subset(subset, rim.vertex_count())?;
        let cut = rim.cut_graph(&sorted)?;
        let mut values = vec![FieldElement::ZERO; cut.edge_count()];
        for e in cut.edges() {
            let lv = (e.rep as usize / cut.arity()) as u32;
            let j = e.rep as usize % cut.arity();
            let parent_v = sorted[lv as usize];
            values[cut.edge_id(lv, j)] = self.value_at(rim, parent_v, j);
        }
        Ok(EdgeWord { values })
    }
}

/// Strictly positive rational weights on the vertices of a RIM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFn {
    pub weights: Vec<BigRational>,
}

impl WeightFn {
    pub fn uniform(rim: &Rim) -> WeightFn {
        WeightFn { weights: vec![BigRational::one(); rim.vertex_count()] }
    }

    pub fn new(weights: Vec<BigRational>) -> Result<WeightFn, RimError> {
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(RimError::NonPositiveWeight);
        }
        Ok(WeightFn { weights })
    }

    /// Total mass `|V|_w`.
    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }
}

/// `true` iff `mapping` carries `a`'s neighbor map onto `b`'s:
/// `mapping[E_a(v,j)] == E_b(mapping[v], j)` everywhere.
pub fn check_isomorphism(a: &Rim, b: &Rim, mapping: &[u32]) -> Result<bool, RimError> {
    if a.vertex_count() != b.vertex_count() || mapping.len() != a.vertex_count() {
        return Err(RimError::SizeMismatch);
    }
    if a.arity() != b.arity() {
        return Err(RimError::ShapeMismatch);
    }
    let mut seen = vec![false; b.vertex_count()];
    for &img in mapping {
        if img as usize >= b.vertex_count() || seen[img as usize] {
            return Err(RimError::SizeMismatch);
        }
        seen[img as usize] = true;
    }
    for v in 0..a.vertex_count() as u32 {
        for j in 0..a.arity() {
            if mapping[a.neighbor(v, j) as usize] != b.neighbor(mapping[v as usize], j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Stricter check that also transports the pairing; folding needs edge
/// classes, not just the neighbor map.
pub fn check_isomorphism_with_pairing(
    a: &Rim,
    b: &Rim,
    mapping: &[u32],
) -> Result<bool, RimError> {
    if !check_isomorphism(a, b, mapping)? {
        return Ok(false);
    }
    for v in 0..a.vertex_count() as u32 {
        for j in 0..a.arity() {
            let (pv, pj) = a.partner(v, j);
            let (qv, qj) = b.partner(mapping[v as usize], j);
            if (mapping[pv as usize], pj) != (qv, qj) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact `num / den`.
pub fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Relative Hamming distance: differing edges over total edges.
pub fn hamming_distance(rim: &Rim, f: &EdgeWord, g: &EdgeWord) -> Result<BigRational, RimError> {
    if f.values.len() != rim.edge_count() || g.values.len() != rim.edge_count() {
        return Err(RimError::ShapeMismatch);
    }
    let d = f.values.iter().zip(&g.values).filter(|(a, b)| a != b).count();
    Ok(ratio(d, rim.edge_count()))
}

/// Relative vertex distance: fraction of vertices with differing local views.
pub fn vertex_distance(rim: &Rim, f: &EdgeWord, g: &EdgeWord) -> Result<BigRational, RimError> {
    if f.values.len() != rim.edge_count() || g.values.len() != rim.edge_count() {
        return Err(RimError::ShapeMismatch);
    }
    let d = (0..rim.vertex_count() as u32)
        .filter(|&v| (0..rim.arity()).any(|j| f.value_at(rim, v, j) != g.value_at(rim, v, j)))
        .count();
    Ok(ratio(d, rim.vertex_count()))
}

/// Relative `w`-weighted vertex distance `D_w / |V|_w`.
pub fn weighted_vertex_distance(
    rim: &Rim,
    f: &EdgeWord,
    g: &EdgeWord,
    w: &WeightFn,
) -> Result<BigRational, RimError> {
    if f.values.len() != rim.edge_count()
        || g.values.len() != rim.edge_count()
        || w.weights.len() != rim.vertex_count()
    {
        return Err(RimError::ShapeMismatch);
    }
    let mut mass = BigRational::zero();
    for v in 0..rim.vertex_count() as u32 {
        if (0..rim.arity()).any(|j| f.value_at(rim, v, j) != g.value_at(rim, v, j)) {
            mass += &w.weights[v as usize];
        }
    }
    Ok(mass / w.total())
}

/// Certified constant with `vertex_distance >= mu * hamming_distance`.
///
/// With `c(v)` the petal count at `v`, any vertex set `W` spans at most
/// `(n|W| + sum_{v in W} c(v)) / 2` edges, so the differing edges of a word
/// pair number at most `|W| (n + max c) / 2` for `W` the differing
/// vertices, while `|E| = (n|V| + P) / 2`. The quotient gives
/// `mean(n + c(v)) / max(n + c(v))`, equal to 1 exactly when all vertices
/// carry the same number of petals.
pub fn mu_lower_bound(rim: &Rim) -> BigRational {
    let n = rim.arity();
    let counts: Vec<usize> = (0..rim.vertex_count() as u32).map(|v| n + rim.petals_at(v)).collect();
    let sum: usize = counts.iter().sum();
    let max = *counts.iter().max().expect("rim has at least one vertex");
    ratio(sum, rim.vertex_count() * max)
}

/// The cuts, isomorphisms, and multiplicities of one folding step.
///
/// Subsets hold parent vertex ids sorted ascending. `isos[i]`, indexed by
/// position in `subsets[0]`, gives the parent id of the image under the
/// `i`-th isomorphism; `isos[0]` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCollection {
    pub parent_vertices: usize,
    pub subsets: Vec<Vec<u32>>,
    pub isos: Vec<Vec<u32>>,
    pub multiplicity: Vec<u32>,
}

impl CutCollection {
    /// Validates everything: coverage, isomorphism of every cut (with
    /// pairing transport), and multiplicity invariance under every iso.
    pub fn new(
        parent: &Rim,
        subsets: Vec<Vec<u32>>,
        isos: Vec<Vec<u32>>,
    ) -> Result<CutCollection, RimError> {
        if subsets.is_empty() || subsets.len() != isos.len() {
            return Err(RimError::ShapeMismatch);
        }
        let mut sorted_subsets = Vec::with_capacity(subsets.len());
        for s in &subsets {
            sorted_subsets.push(check_subset(s, parent.vertex_count())?);
        }
        let base = sorted_subsets[0].clone();
        let mut multiplicity = vec![0u32; parent.vertex_count()];
        for s in &sorted_subsets {
            for &v in s {
                multiplicity[v as usize] += 1;
            }
        }
        if multiplicity.iter().any(|&m| m == 0) {
            return Err(RimError::CoverageGap);
        }

        let base_cut = parent.cut_graph(&base)?;
        for (i, (s, iso)) in sorted_subsets.iter().zip(&isos).enumerate() {
            if iso.len() != base.len() || s.len() != base.len() {
                return Err(RimError::SizeMismatch);
            }
            if i == 0 && iso.as_slice() != base.as_slice() {
                return Err(RimError::NonIdentityBaseIso);
            }
            let local = local_index_map(s, parent.vertex_count());
            let mut mapping = Vec::with_capacity(base.len());
            for &img in iso {
                if img as usize >= parent.vertex_count() || local[img as usize] == u32::MAX {
                    return Err(RimError::NotIsomorphic(i));
                }
                mapping.push(local[img as usize]);
            }
            let cut_i = parent.cut_graph(s)?;
            if !check_isomorphism_with_pairing(&base_cut, &cut_i, &mapping)? {
                return Err(RimError::NotIsomorphic(i));
            }
            for (pos, &v0) in base.iter().enumerate() {
                if multiplicity[v0 as usize] != multiplicity[iso[pos] as usize] {
                    return Err(RimError::MultiplicityAsymmetry(i));
                }
            }
        }

        Ok(CutCollection {
            parent_vertices: parent.vertex_count(),
            subsets: sorted_subsets,
            isos,
            multiplicity,
        })
    }

    /// Order `m` of the collection.
    pub fn order(&self) -> usize {
        self.subsets.len()
    }

    /// Parent id of the image of the `pos`-th base vertex under iso `i`.
    pub fn image(&self, i: usize, pos: usize) -> u32 {
        self.isos[i][pos]
    }

    /// Cut indices `i` with `parent_vertex` in subset `i`, ascending.
    pub fn cuts_containing(&self, parent_vertex: u32) -> Vec<usize> {
        (0..self.subsets.len())
            .filter(|&i| self.subsets[i].binary_search(&parent_vertex).is_ok())
            .collect()
    }

    /// Base position `pos` with `isos[i][pos] == parent_vertex`, if any.
    pub fn preimage(&self, i: usize, parent_vertex: u32) -> Option<usize> {
        self.isos[i].iter().position(|&x| x == parent_vertex)
    }
}

/// One refinement step: `w'(v) = w(v) / #v` restricted to the base subset,
/// indexed in cut-local order.
pub fn refine_weights(w: &WeightFn, c: &CutCollection) -> Result<WeightFn, RimError> {
    if w.weights.len() != c.parent_vertices {
        return Err(RimError::ShapeMismatch);
    }
    let weights = c.subsets[0]
        .iter()
        .map(|&v| {
            &w.weights[v as usize] / BigRational::from(BigInt::from(c.multiplicity[v as usize]))
        })
        .collect();
    WeightFn::new(weights)
}

/// K_k as a (k-1)-RIM: index `j` at `v` points at the `j`-th other vertex
/// in increasing order.
pub fn complete_graph_rim(k: usize) -> Rim {
    let n = k - 1;
    let mut neighbor = Vec::new();
    for v in 0..k {
        for u in 0..k {
            if u != v {
                neighbor.push(u as u32);
            }
        }
    }
    let index_of = |v: usize, u: usize| -> usize {
        if u < v {
            u
        } else {
            u - 1
        }
    };
    let mut pairing = vec![0u32; k * n];
    for v in 0..k {
        for j in 0..n {
            let u = neighbor[v * n + j] as usize;
            pairing[v * n + j] = (u * n + index_of(u, v)) as u32;
        }
    }
    Rim::new(n, neighbor, pairing).unwrap()
}
