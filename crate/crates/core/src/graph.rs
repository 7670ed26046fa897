//! Finite graphs of groups with free-abelian edge groups.
//!
//! Vertices carry abelian groups Z^n on input; pipeline outputs may also
//! carry polycyclic groups `Z^n x| Z` (collapsed loops and 2-2 edges) and
//! opaque vertices holding a collapsed subgraph (bounded-rank outputs).
//! Edges carry a rank and two injective attachment matrices. All iteration
//! is in sorted id order, so every derived artifact is deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::lattice::{hnf_basis, Index, Sublattice};
use crate::matrix::{IntMatrix, UnimodularAuto};
use crate::snf::smith;

/// Identifier of a vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub String);

/// Identifier of an edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub String);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v\"{}\"", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e\"{}\"", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_string())
    }
}

/// The group carried by a vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexGroup {
    /// Z^rank; the only kind admitted on pipeline inputs.
    Abelian { rank: usize },
    /// `Z^fiber_rank x| Z` twisted by `automorphism`; attachments of
    /// adjacent edges land in the fiber coordinates. Produced by collapses.
    Polycyclic { fiber_rank: usize, automorphism: UnimodularAuto },
    /// A collapsed subgraph, kept whole. Produced by bounded-rank collapses;
    /// edges anchoring here name an interior vertex via the edge anchors.
    Opaque { subgraph: GraphOfGroups },
}

impl VertexGroup {
    pub fn abelian(rank: usize) -> Self {
        VertexGroup::Abelian { rank }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            VertexGroup::Abelian { .. } => "abelian",
            VertexGroup::Polycyclic { .. } => "polycyclic",
            VertexGroup::Opaque { .. } => "opaque",
        }
    }
}

/// An edge of the graph of groups: a rank-r free abelian edge group with
/// injective attachments into both endpoint groups. Loops are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub rank: usize,
    /// n_from x rank attachment into the `from` endpoint.
    pub att_from: IntMatrix,
    /// n_to x rank attachment into the `to` endpoint.
    pub att_to: IntMatrix,
    /// Interior anchor when `from` is an opaque vertex.
    pub anchor_from: Option<VertexId>,
    /// Interior anchor when `to` is an opaque vertex.
    pub anchor_to: Option<VertexId>,
}

impl Edge {
    pub fn new(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        rank: usize,
        att_from: IntMatrix,
        att_to: IntMatrix,
    ) -> Self {
        Edge {
            id: EdgeId(id.into()),
            from: VertexId(from.into()),
            to: VertexId(to.into()),
            rank,
            att_from,
            att_to,
            anchor_from: None,
            anchor_to: None,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    /// The two (endpoint, attachment) sides; loops yield both sides at the
    /// same vertex.
    pub fn sides(&self) -> [(&VertexId, &IntMatrix); 2] {
        [(&self.from, &self.att_from), (&self.to, &self.att_to)]
    }
}

/// A diagnostic from validation, naming the offending location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Invariants of a finitely generated abelian group: free rank and torsion
/// divisors greater than one, in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

/// A finite connected graph of groups. Immutable in spirit: the moves in
/// [`crate::moves`] return new values.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GraphOfGroups {
    vertices: BTreeMap<VertexId, VertexGroup>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl GraphOfGroups {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assemble from parts; structural soundness is checked by [`Self::validate`].
    pub fn build(
        vertices: impl IntoIterator<Item = (VertexId, VertexGroup)>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Self {
        GraphOfGroups {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().map(|e| (e.id.clone(), e)).collect(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, group: VertexGroup) {
        let id = VertexId(id.into());
        assert!(self.vertices.insert(id.clone(), group).is_none(), "duplicate vertex {id}");
    }

    pub fn add_edge(&mut self, edge: Edge) {
        let id = edge.id.clone();
        assert!(self.edges.insert(id.clone(), edge).is_none(), "duplicate edge {id}");
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&VertexGroup> {
        self.vertices.get(id)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, &VertexGroup)> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn remove_edge(&mut self, id: &EdgeId) -> Option<Edge> {
        self.edges.remove(id)
    }

    pub fn remove_vertex(&mut self, id: &VertexId) -> Option<VertexGroup> {
        self.vertices.remove(id)
    }

    pub fn set_vertex(&mut self, id: VertexId, group: VertexGroup) {
        self.vertices.insert(id, group);
    }

    pub fn set_edge(&mut self, edge: Edge) {
        self.edges.insert(edge.id.clone(), edge);
    }

    /// Edges incident to `v`, in id order.
    pub fn edges_at<'a>(&'a self, v: &'a VertexId) -> impl Iterator<Item = &'a Edge> {
        self.edges.values().filter(move |e| &e.from == v || &e.to == v)
    }

    /// Coordinate dimension an attachment at this vertex must have: the rank
    /// for abelian vertices, the fiber rank for polycyclic ones, and the
    /// anchor vertex dimension for opaque ones.
    pub fn attachment_dim(
        &self,
        v: &VertexId,
        anchor: Option<&VertexId>,
    ) -> Result<usize, Error> {
        match self.vertex(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))? {
            VertexGroup::Abelian { rank } => Ok(*rank),
            VertexGroup::Polycyclic { fiber_rank, .. } => Ok(*fiber_rank),
            VertexGroup::Opaque { subgraph } => {
                let a = anchor.ok_or_else(|| {
                    Error::InvalidGraph(format!("edge at opaque vertex {v} lacks an anchor"))
                })?;
                subgraph.attachment_dim(a, None)
            }
        }
    }

    /// Structural validation. Returns all diagnostics found; an empty list
    /// means the graph is a well-formed decomposition.
    pub fn validate(&self) -> Vec<Diagnostic> {
        fn diag_into(out: &mut Vec<Diagnostic>, location: &str, message: String) {
            out.push(Diagnostic { location: location.to_string(), message });
        }
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            diag_into(&mut out, "graph", "graph has no vertices".into());
            return out;
        }
        for (id, group) in &self.vertices {
            match group {
                VertexGroup::Abelian { rank } => {
                    if *rank == 0 {
                        diag_into(&mut out, &id.to_string(), "abelian vertex has rank 0".into());
                    }
                }
                VertexGroup::Polycyclic { fiber_rank, automorphism } => {
                    if *fiber_rank == 0 {
                        diag_into(&mut out, &id.to_string(), "polycyclic vertex has fiber rank 0".into());
                    }
                    if automorphism.size() != *fiber_rank {
                        diag_into(
                            &mut out,
                            &id.to_string(),
                            format!(
                                "automorphism size {} does not match fiber rank {}",
                                automorphism.size(),
                                fiber_rank
                            ),
                        );
                    }
                }
                VertexGroup::Opaque { subgraph } => {
                    for d in subgraph.validate() {
                        diag_into(&mut out, &format!("{id}/{}", d.location), d.message);
                    }
                }
            }
        }
        for (id, e) in &self.edges {
            let loc = id.to_string();
            if e.rank == 0 {
                diag_into(&mut out, &loc, "edge has rank 0".into());
            }
            for (end, v, att, anchor) in [
                ("from", &e.from, &e.att_from, e.anchor_from.as_ref()),
                ("to", &e.to, &e.att_to, e.anchor_to.as_ref()),
            ] {
                if self.vertex(v).is_none() {
                    diag_into(&mut out, &loc, format!("{end} endpoint `{v}` does not resolve"));
                    continue;
                }
                if anchor.is_some()
                    && !matches!(self.vertex(v), Some(VertexGroup::Opaque { .. }))
                {
                    diag_into(&mut out, &loc, format!("{end} anchor given for a non-opaque endpoint"));
                }
                match self.attachment_dim(v, anchor) {
                    Ok(dim) => {
                        if att.rows() != dim || att.cols() != e.rank {
                            diag_into(
                                &mut out,
                                &loc,
                                format!(
                                    "{end} attachment is {}x{}, expected {}x{}",
                                    att.rows(),
                                    att.cols(),
                                    dim,
                                    e.rank
                                ),
                            );
                        } else if att.column_rank() != e.rank {
                            diag_into(&mut out, &loc, format!("{end} attachment is not injective"));
                        }
                    }
                    Err(err) => diag_into(&mut out, &loc, format!("{end} endpoint: {err}")),
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        // connectivity over the undirected underlying graph
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let start = self.vertices.keys().next().expect("nonempty");
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            for e in self.edges.values() {
                for (a, b) in [(&e.from, &e.to), (&e.to, &e.from)] {
                    if a == v && !seen.contains(b) {
                        seen.insert(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        if seen.len() != self.vertices.len() {
            let missing: Vec<String> = self
                .vertices
                .keys()
                .filter(|v| !seen.contains(v))
                .map(|v| v.to_string())
                .collect();
            diag_into(&mut out, "graph", format!("not connected; unreachable: {}", missing.join(", ")));
        }
        out
    }

    /// Validation plus the input-gate restriction to abelian vertices.
    pub fn validate_as_input(&self) -> Vec<Diagnostic> {
        let mut out = self.validate();
        for (id, group) in &self.vertices {
            if !matches!(group, VertexGroup::Abelian { .. }) {
                out.push(Diagnostic {
                    location: id.to_string(),
                    message: format!("{} vertex not allowed on input", group.kind_name()),
                });
            }
        }
        out
    }

    pub(crate) fn abelian_rank(&self, v: &VertexId) -> Result<usize, Error> {
        match self.vertex(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))? {
            VertexGroup::Abelian { rank } => Ok(*rank),
            _ => Err(Error::UnsupportedVertexKind(v.to_string())),
        }
    }

    /// The type m-n of an edge between abelian vertices: the sorted pair of
    /// indices of the attached edge-group images in the endpoint groups.
    pub fn edge_type(&self, e: &EdgeId) -> Result<(Index, Index), Error> {
        let edge = self.edge(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
        let mut sides = Vec::with_capacity(2);
        for (v, att) in edge.sides() {
            let n = self.abelian_rank(v)?;
            let image = hnf_basis(att);
            let idx = image.index_in(&Sublattice::full(n)).expect("image is a sublattice");
            sides.push(idx);
        }
        sides.sort();
        let mut it = sides.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }

    /// Is this side's attachment a bijection onto the (abelian) endpoint
    /// group?
    pub fn side_bijective(&self, edge: &Edge, att: &IntMatrix, v: &VertexId) -> bool {
        match self.vertex(v) {
            Some(VertexGroup::Abelian { rank }) => {
                edge.rank == *rank && att.is_square() && att.det().abs().is_one()
            }
            _ => false,
        }
    }

    /// The modulus of a 1-1 loop: the automorphism `att_to * att_from^-1` of
    /// the base vertex group. With stable letter t of the loop, conjugation
    /// acts as `t x t^-1 = modulus(x)`.
    pub fn modulus(&self, e: &EdgeId) -> Result<UnimodularAuto, Error> {
        let edge = self.edge(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
        if !edge.is_loop() {
            return Err(Error::NotOneOneLoop(e.to_string()));
        }
        self.abelian_rank(&edge.from)
            .map_err(|_| Error::NotOneOneLoop(e.to_string()))?;
        let from = UnimodularAuto::new(edge.att_from.clone())
            .map_err(|_| Error::NotOneOneLoop(e.to_string()))?;
        let to = UnimodularAuto::new(edge.att_to.clone())
            .map_err(|_| Error::NotOneOneLoop(e.to_string()))?;
        Ok(UnimodularAuto::new(to.matrix().mul(from.inverse().matrix()))
            .expect("product of unimodular matrices"))
    }

    /// The subgroup of the (abelian) vertex group generated by the images of
    /// all adjacent edge groups, optionally omitting one edge entirely.
    /// Loops contribute both attachments.
    pub fn tilde_group(&self, v: &VertexId, exclude: Option<&EdgeId>) -> Result<Sublattice, Error> {
        let n = self.abelian_rank(v)?;
        let mut cols = IntMatrix::zeros(n, 0);
        for e in self.edges_at(v) {
            if Some(&e.id) == exclude {
                continue;
            }
            if &e.from == v {
                cols = cols.hstack(&e.att_from);
            }
            if &e.to == v {
                cols = cols.hstack(&e.att_to);
            }
        }
        Ok(hnf_basis(&cols))
    }

    /// Replace each opaque vertex by its retained subgraph, reconnecting the
    /// re-anchored edges to their interior anchors.
    pub fn inline_opaque(&self) -> GraphOfGroups {
        let mut vertices = BTreeMap::new();
        let mut edges = BTreeMap::new();
        for (id, group) in &self.vertices {
            match group {
                VertexGroup::Opaque { subgraph } => {
                    let inner = subgraph.inline_opaque();
                    for (iid, ig) in inner.vertices {
                        vertices.insert(iid, ig);
                    }
                    for (iid, ie) in inner.edges {
                        edges.insert(iid, ie);
                    }
                }
                other => {
                    vertices.insert(id.clone(), other.clone());
                }
            }
        }
        for e in self.edges.values() {
            let mut e = e.clone();
            if let Some(anchor) = e.anchor_from.take() {
                e.from = anchor;
            }
            if let Some(anchor) = e.anchor_to.take() {
                e.to = anchor;
            }
            edges.insert(e.id.clone(), e);
        }
        GraphOfGroups { vertices, edges }
    }

    /// Invariants of the abelianized fundamental group.
    ///
    /// Generators: one per vertex-group basis vector, one stable letter per
    /// polycyclic vertex, one per edge outside a spanning tree. Relations:
    /// each edge identifies its two attachment images; each polycyclic
    /// vertex contributes the columns of (automorphism - identity). Every
    /// edge relation has the same abelianized shape whether or not the edge
    /// is in the tree, so only the cycle rank of the underlying graph
    /// matters, never the tree choice.
    pub fn abelianization(&self) -> AbelianInvariants {
        let g = self.inline_opaque();
        debug_assert!(g.validate().is_empty(), "abelianization of an invalid graph");
        // row offsets of each vertex block
        let mut offset = BTreeMap::new();
        let mut total = 0usize;
        let mut stable_letters = 0usize;
        for (id, group) in &g.vertices {
            offset.insert(id.clone(), total);
            match group {
                VertexGroup::Abelian { rank } => total += rank,
                VertexGroup::Polycyclic { fiber_rank, .. } => {
                    total += fiber_rank;
                    stable_letters += 1;
                }
                VertexGroup::Opaque { .. } => unreachable!("inlined"),
            }
        }
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for e in g.edges.values() {
            for j in 0..e.rank {
                let mut col = vec![BigInt::zero(); total];
                let of = offset[&e.from];
                for i in 0..e.att_from.rows() {
                    col[of + i] += e.att_from.at(i, j);
                }
                let ot = offset[&e.to];
                for i in 0..e.att_to.rows() {
                    col[ot + i] -= e.att_to.at(i, j);
                }
                relations.push(col);
            }
        }
        for (id, group) in &g.vertices {
            if let VertexGroup::Polycyclic { fiber_rank, automorphism } = group {
                let o = offset[id];
                for j in 0..*fiber_rank {
                    let mut col = vec![BigInt::zero(); total];
                    for i in 0..*fiber_rank {
                        col[o + i] = automorphism.matrix().at(i, j).clone();
                    }
                    col[o + j] -= BigInt::one();
                    relations.push(col);
                }
            }
        }
        let rel = IntMatrix::from_columns(total, &relations);
        let d = smith(&rel);
        let rank = d.rank();
        let torsion: Vec<BigInt> =
            d.invariant_factors().into_iter().filter(|f| !f.is_one()).collect();
        let cycle_rank = g.edges.len() + 1 - g.vertices.len();
        AbelianInvariants { free_rank: total - rank + cycle_rank + stable_letters, torsion }
    }
}
