//! The elementary moves on a graph of groups: reduction (contracting
//! non-loop edges with a bijective attachment), collapse of a 1-1 loop or a
//! 2-2 edge into a polycyclic vertex, and expansion of a vertex whose
//! adjacent edge groups span corank one.
//!
//! Every move preserves the fundamental group; as a machine check, each one
//! recomputes the abelianization before and after and aborts on mismatch.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::graph::{AbelianInvariants, Edge, EdgeId, GraphOfGroups, VertexGroup, VertexId};
use crate::lattice::{hnf_basis, solve_in_basis, Sublattice};
use crate::matrix::{IntMatrix, UnimodularAuto};
use crate::normal_forms::{normalize_22, KleinKind, KleinNormalForm};

/// What a move was.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Reduce,
    Collapse11,
    Collapse22,
    Expand,
}

impl MoveKind {
    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::Reduce => "reduce",
            MoveKind::Collapse11 => "collapse-1-1",
            MoveKind::Collapse22 => "collapse-2-2",
            MoveKind::Expand => "expand",
        }
    }
}

/// Machine-checkable payload attached to a move record.
#[derive(Clone, Debug, PartialEq)]
pub enum MoveWitness {
    Reduce {
        merged: VertexId,
        into: VertexId,
    },
    Collapse11 {
        modulus: UnimodularAuto,
    },
    Collapse22 {
        hyperplane: Sublattice,
        kind: KleinKind,
        automorphism: UnimodularAuto,
    },
    Expand {
        hyperplane: Sublattice,
        stable_letter: Vec<BigInt>,
        loop_edge: EdgeId,
    },
}

/// One applied move, with enough data to re-verify it.
#[derive(Clone, Debug, PartialEq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub edge: Option<EdgeId>,
    pub vertices: Vec<VertexId>,
    pub reason: String,
    pub witness: MoveWitness,
    pub abel_before: AbelianInvariants,
    pub abel_after: AbelianInvariants,
}

fn certify(before: &AbelianInvariants, after: &GraphOfGroups, kind: MoveKind) -> AbelianInvariants {
    let now = after.abelianization();
    assert_eq!(
        before, &now,
        "{} move changed the abelianization; this is a bug",
        kind.name()
    );
    now
}

/// Contract edge `e`, merging the endpoint `merged` (where the attachment is
/// bijective) into the other endpoint.
fn contract(g: &GraphOfGroups, e: &Edge, merged_is_to: bool) -> (GraphOfGroups, MoveRecord) {
    let before = g.abelianization();
    let (merged, into, att_merged, att_into) = if merged_is_to {
        (&e.to, &e.from, &e.att_to, &e.att_from)
    } else {
        (&e.from, &e.to, &e.att_from, &e.att_to)
    };
    // the embedding of the merged vertex group into the surviving one
    let inv = UnimodularAuto::new(att_merged.clone())
        .expect("contracted side must be bijective")
        .inverse();
    let embed = att_into.mul(inv.matrix());
    let mut out = g.clone();
    out.remove_edge(&e.id);
    out.remove_vertex(merged);
    let edges: Vec<Edge> = out.edges().cloned().collect();
    for mut f in edges {
        let mut touched = false;
        if &f.from == merged {
            f.from = into.clone();
            f.att_from = embed.mul(&f.att_from);
            touched = true;
        }
        if &f.to == merged {
            f.to = into.clone();
            f.att_to = embed.mul(&f.att_to);
            touched = true;
        }
        if touched {
            out.set_edge(f);
        }
    }
    let abel_after = certify(&before, &out, MoveKind::Reduce);
    let record = MoveRecord {
        kind: MoveKind::Reduce,
        edge: Some(e.id.clone()),
        vertices: vec![merged.clone(), into.clone()],
        reason: format!("attachment of `{}` is bijective at `{merged}`", e.id),
        witness: MoveWitness::Reduce { merged: merged.clone(), into: into.clone() },
        abel_before: before,
        abel_after,
    };
    (out, record)
}

/// Does `v` carry a 1-1 loop with identity modulus (other than `except`)?
/// Such loops are the signature of an expansion, whose shape the pipeline
/// keeps rather than re-contracting.
fn has_identity_loop(g: &GraphOfGroups, v: &VertexId, except: &EdgeId) -> bool {
    g.edges_at(v).any(|l| {
        l.id != *except
            && l.is_loop()
            && g.side_bijective(l, &l.att_from, v)
            && g.side_bijective(l, &l.att_to, v)
            && g.modulus(&l.id).map(|m| m.matrix().is_identity()).unwrap_or(false)
    })
}

/// The lexicographically smallest contractible edge, together with the side
/// to merge. With `keep_expansion_loops`, a bijective side based at a vertex
/// carrying an identity-modulus 1-1 loop is not contracted.
fn find_contractible(g: &GraphOfGroups, keep_expansion_loops: bool) -> Option<(EdgeId, bool)> {
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        let from_ok = g.side_bijective(e, &e.att_from, &e.from)
            && !(keep_expansion_loops && has_identity_loop(g, &e.from, &e.id));
        let to_ok = g.side_bijective(e, &e.att_to, &e.to)
            && !(keep_expansion_loops && has_identity_loop(g, &e.to, &e.id));
        match (from_ok, to_ok) {
            (false, false) => continue,
            (true, false) => return Some((e.id.clone(), false)),
            (false, true) => return Some((e.id.clone(), true)),
            (true, true) => {
                // merge the larger id into the smaller
                return Some((e.id.clone(), e.from < e.to));
            }
        }
    }
    None
}

fn reduce_inner(g: &GraphOfGroups, keep_expansion_loops: bool) -> (GraphOfGroups, Vec<MoveRecord>) {
    let mut current = g.clone();
    let mut records = Vec::new();
    while let Some((id, merged_is_to)) = find_contractible(&current, keep_expansion_loops) {
        let edge = current.edge(&id).expect("contractible edge exists").clone();
        let (next, record) = contract(&current, &edge, merged_is_to);
        current = next;
        records.push(record);
    }
    (current, records)
}

/// Contract every non-loop edge with a bijective attachment, smallest edge
/// id first, until none remains. Idempotent; performs at most one
/// contraction per edge of the input.
pub fn reduce(g: &GraphOfGroups) -> (GraphOfGroups, Vec<MoveRecord>) {
    reduce_inner(g, false)
}

/// Reduction as used by the JSJ pipeline: identical to [`reduce`] except
/// that it never contracts an edge into a vertex carrying an
/// identity-modulus 1-1 loop, so canonical expansion shapes survive a
/// second pipeline pass untouched.
pub fn reduce_keeping_expansions(g: &GraphOfGroups) -> (GraphOfGroups, Vec<MoveRecord>) {
    reduce_inner(g, true)
}

/// Is the graph reduced in the pipeline sense?
pub fn is_reduced(g: &GraphOfGroups) -> Result<(), Error> {
    match find_contractible(g, true) {
        Some((id, _)) => Err(Error::NotReduced(id.to_string())),
        None => Ok(()),
    }
}

/// Collapse a 1-1 loop: the base vertex becomes polycyclic with the loop's
/// modulus as automorphism, the loop disappears, and all other attachments
/// keep their coordinates, now read in the fiber.
pub fn collapse_11_loop(g: &GraphOfGroups, e: &EdgeId) -> Result<(GraphOfGroups, MoveRecord), Error> {
    let edge = g.edge(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?.clone();
    if !edge.is_loop() {
        return Err(Error::NotOneOneLoop(e.to_string()));
    }
    let v = edge.from.clone();
    let n = g.abelian_rank(&v).map_err(|_| Error::NotOneOneLoop(e.to_string()))?;
    let modulus = g.modulus(e)?;
    let before = g.abelianization();
    let mut out = g.clone();
    out.remove_edge(e);
    out.set_vertex(
        v.clone(),
        VertexGroup::Polycyclic { fiber_rank: n, automorphism: modulus.clone() },
    );
    let abel_after = certify(&before, &out, MoveKind::Collapse11);
    let record = MoveRecord {
        kind: MoveKind::Collapse11,
        edge: Some(e.clone()),
        vertices: vec![v],
        reason: format!("1-1 loop `{e}` is not universally elliptic"),
        witness: MoveWitness::Collapse11 { modulus },
        abel_before: before,
        abel_after,
    };
    Ok((out, record))
}

/// Check a hyperplane witness for collapsing the 2-2 edge `e`: `h` lives in
/// edge coordinates, is saturated of corank one, has saturated images in
/// both endpoint groups, and those images contain every other adjacent
/// attachment image at the respective endpoint.
pub fn verify_22_witness(g: &GraphOfGroups, e: &EdgeId, h: &Sublattice) -> Result<(), Error> {
    let edge = g.edge(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
    if edge.is_loop() {
        return Err(Error::NotTwoTwoEdge(e.to_string()));
    }
    let n_from = g.abelian_rank(&edge.from).map_err(|_| Error::NotTwoTwoEdge(e.to_string()))?;
    let n_to = g.abelian_rank(&edge.to).map_err(|_| Error::NotTwoTwoEdge(e.to_string()))?;
    if n_from != n_to || edge.rank != n_from {
        return Err(Error::NotTwoTwoEdge(e.to_string()));
    }
    let n = n_from;
    let two = BigInt::from(2);
    if edge.att_from.det().abs() != two || edge.att_to.det().abs() != two {
        return Err(Error::NotTwoTwoEdge(e.to_string()));
    }
    if h.ambient_rank() != n || h.rank() + 1 != n {
        return Err(Error::WitnessInvalid("hyperplane does not have corank one".into()));
    }
    if !h.is_saturated() {
        return Err(Error::WitnessInvalid("hyperplane not saturated in the edge group".into()));
    }
    for (v, att) in edge.sides() {
        let image = hnf_basis(&att.mul(h.basis()));
        if !image.is_saturated() {
            return Err(Error::WitnessInvalid(format!(
                "hyperplane image not saturated in vertex group `{v}`"
            )));
        }
        for f in g.edges_at(v) {
            if f.id == edge.id {
                continue;
            }
            for (w, fatt) in f.sides() {
                if w != v {
                    continue;
                }
                for j in 0..fatt.cols() {
                    if !image.contains_vector(&fatt.col(j)) {
                        return Err(Error::WitnessInvalid(format!(
                            "adjacent image of `{}` at `{v}` escapes the hyperplane",
                            f.id
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Collapse a 2-2 edge over a verified hyperplane witness. The two
/// endpoints merge into one polycyclic vertex in form-(b) normal form; all
/// adjacent attachments are re-expressed in fiber coordinates.
pub fn collapse_22_edge(
    g: &GraphOfGroups,
    e: &EdgeId,
    h: &Sublattice,
) -> Result<(GraphOfGroups, MoveRecord), Error> {
    verify_22_witness(g, e, h)?;
    let edge = g.edge(e).expect("verified").clone();
    let (v, vp) = (edge.from.clone(), edge.to.clone());
    let n = edge.rank;
    let knf = normalize_22(&edge.att_from, &edge.att_to, h)?;
    let before = g.abelianization();
    let survivor = if v <= vp { v.clone() } else { vp.clone() };
    let h_img_v = edge.att_from.mul(h.basis());
    let h_img_vp = edge.att_to.mul(h.basis());

    let mut out = g.clone();
    out.remove_edge(e);
    let edges: Vec<Edge> = out.edges().cloned().collect();
    for mut f in edges {
        let mut touched = false;
        for to_side in [false, true] {
            let (end, att) =
                if to_side { (&mut f.to, &mut f.att_to) } else { (&mut f.from, &mut f.att_from) };
            let h_img = if *end == v {
                &h_img_v
            } else if *end == vp {
                &h_img_vp
            } else {
                continue;
            };
            let cols: Result<Vec<Vec<BigInt>>, Error> =
                (0..att.cols()).map(|j| knf.fiber_coordinates(h_img, &att.col(j))).collect();
            *att = IntMatrix::from_columns(n, &cols?);
            *end = survivor.clone();
            touched = true;
        }
        if touched {
            out.set_edge(f);
        }
    }
    out.remove_vertex(&v);
    out.remove_vertex(&vp);
    out.set_vertex(
        survivor.clone(),
        VertexGroup::Polycyclic { fiber_rank: n, automorphism: knf.automorphism.clone() },
    );
    let abel_after = certify(&before, &out, MoveKind::Collapse22);
    let record = MoveRecord {
        kind: MoveKind::Collapse22,
        edge: Some(e.clone()),
        vertices: vec![v, vp],
        reason: format!("2-2 edge `{e}` is not universally elliptic"),
        witness: MoveWitness::Collapse22 {
            hyperplane: h.clone(),
            kind: knf.kind,
            automorphism: knf.automorphism.clone(),
        },
        abel_before: before,
        abel_after,
    };
    Ok((out, record))
}

/// Collapse and return the Klein normal form as well (used by tests).
pub fn collapse_22_edge_with_form(
    g: &GraphOfGroups,
    e: &EdgeId,
    h: &Sublattice,
) -> Result<(GraphOfGroups, MoveRecord, KleinNormalForm), Error> {
    verify_22_witness(g, e, h)?;
    let edge = g.edge(e).expect("verified");
    let knf = normalize_22(&edge.att_from, &edge.att_to, h)?;
    let (out, record) = collapse_22_edge(g, e, h)?;
    Ok((out, record, knf))
}

fn fresh_edge_id(g: &GraphOfGroups, base: String) -> EdgeId {
    let mut candidate = base.clone();
    let mut k = 1usize;
    while g.edge(&EdgeId(candidate.clone())).is_some() {
        k += 1;
        candidate = format!("{base}_{k}");
    }
    EdgeId(candidate)
}

/// Expand the abelian vertex `v` whose adjacent edge groups span a
/// sublattice of corank one.
///
/// The vertex is replaced by the saturation H of that sublattice, carrying a
/// new 1-1 loop with identity attachments on both sides; the discarded
/// primitive complement is the stable letter of the loop. Former attachments
/// are re-expressed in the basis of H.
pub fn expand_vertex(g: &GraphOfGroups, v: &VertexId) -> Result<(GraphOfGroups, MoveRecord), Error> {
    let n = g.abelian_rank(v)?;
    if n < 2 {
        return Err(Error::RankTooSmall(v.to_string()));
    }
    let tilde = g.tilde_group(v, None)?;
    if tilde.rank() + 1 != n {
        return Err(Error::NoDeficiencyOne(v.to_string()));
    }
    let h = tilde.saturation();
    let basis = h.basis().clone();
    let x = crate::lattice::primitive_complement(&h).expect("saturated corank-one sublattice");
    let before = g.abelianization();
    let mut out = g.clone();
    out.set_vertex(v.clone(), VertexGroup::Abelian { rank: n - 1 });
    let edges: Vec<Edge> = out.edges().cloned().collect();
    for mut f in edges {
        let mut touched = false;
        if &f.from == v {
            f.att_from = solve_in_basis(&basis, &f.att_from)
                .expect("attachment lies in the adjacent-edge span");
            touched = true;
        }
        if &f.to == v {
            f.att_to = solve_in_basis(&basis, &f.att_to)
                .expect("attachment lies in the adjacent-edge span");
            touched = true;
        }
        if touched {
            out.set_edge(f);
        }
    }
    let loop_id = fresh_edge_id(&out, format!("{v}__loop"));
    out.add_edge(Edge::new(
        loop_id.0.clone(),
        v.0.clone(),
        v.0.clone(),
        n - 1,
        IntMatrix::identity(n - 1),
        IntMatrix::identity(n - 1),
    ));
    let abel_after = certify(&before, &out, MoveKind::Expand);
    let record = MoveRecord {
        kind: MoveKind::Expand,
        edge: Some(loop_id.clone()),
        vertices: vec![v.clone()],
        reason: format!("adjacent edge groups of `{v}` span corank one"),
        witness: MoveWitness::Expand { hyperplane: h, stable_letter: x, loop_edge: loop_id },
        abel_before: before,
        abel_after,
    };
    Ok((out, record))
}

/// Zero vector test helper for witness payloads.
pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
