//! Edge operations and stabilization.

use serde::{Deserialize, Serialize};

use super::{ColoredTree, EdgeId, Scaling, Vertex};
use crate::error::{Error, Result};
use crate::quasimap::DegreeVector;

/// Deletes vertex `v`, which must have no children, compacting indices.
fn remove_vertex(vertices: &mut Vec<Vertex>, v: usize) {
    debug_assert!(vertices.iter().all(|x| x.parent != Some(v)));
    vertices.remove(v);
    for x in vertices.iter_mut() {
        if let Some(p) = x.parent.as_mut() {
            if *p > v {
                *p -= 1;
            }
        }
    }
}

/// Moves markings, degree and children of `from` onto `into`, then deletes
/// `from`. The scaling of `into` is left to the caller.
fn absorb(vertices: &mut Vec<Vertex>, into: usize, from: usize) {
    let moved = vertices[from].clone();
    let target = &mut vertices[into];
    target.markings.extend(moved.markings);
    target.markings.sort_unstable();
    target.degree = DegreeVector::new(target.degree.vector().add(moved.degree.vector()));
    for x in vertices.iter_mut() {
        if x.parent == Some(from) {
            x.parent = Some(into);
        }
    }
    remove_vertex(vertices, from);
}

fn merged_scaling(parent: Scaling, child: Scaling) -> Option<Scaling> {
    use Scaling::*;
    match (parent, child) {
        (Zero, Zero) => Some(Zero),
        (Infinite, Infinite) => Some(Infinite),
        (Finite, Zero) => Some(Finite),
        (Infinite, Finite) => Some(Finite),
        _ => None,
    }
}

/// Contracts an edge. Zero or infinite scaling merges with the same kind; a
/// zero component merges into a finite parent; a finite component merges
/// into an infinite parent only when the parent has no other branches.
pub fn collapse_edge(t: &ColoredTree, e: EdgeId) -> Result<ColoredTree> {
    let p = t.check_edge(e)?;
    let c = e.0;
    let (ps, cs) = (t.vertices[p].scaling, t.vertices[c].scaling);
    let merged = merged_scaling(ps, cs).ok_or_else(|| {
        Error::IllegalMerge(format!("cannot merge a {cs:?} component into a {ps:?} one"))
    })?;
    let mut vertices = t.vertices.clone();
    vertices[p].scaling = merged;
    absorb(&mut vertices, p, c);
    let out = ColoredTree::from_parts(t.rank, vertices);
    let errs = out.structural_errors();
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(Error::IllegalMerge(errs.join("; ")))
    }
}

/// The two pieces of a tree cut at one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPieces {
    /// The part containing the root, with a new marking at the node.
    pub upper: ColoredTree,
    /// The part hanging below the node, rooted at the old child.
    pub lower: ColoredTree,
    pub node_label: u32,
    pub twisting: Option<u32>,
}

/// Cuts an edge. The pieces keep their scalings, so they need not be
/// stable affine types themselves (an upper piece cut at an infinite
/// component carries a marking there).
pub fn cut_edge(t: &ColoredTree, e: EdgeId) -> Result<CutPieces> {
    let p = t.check_edge(e)?;
    let c = e.0;
    let node_label = t.markings().last().map_or(1, |m| m + 1);

    let mut below = vec![false; t.len()];
    for (v, flag) in below.iter_mut().enumerate() {
        let mut x = v;
        loop {
            if x == c {
                *flag = true;
                break;
            }
            match t.vertices[x].parent {
                Some(y) => x = y,
                None => break,
            }
        }
    }

    let split = |keep: bool| -> Vec<Vertex> {
        let ids: Vec<usize> = (0..t.len()).filter(|&v| below[v] == keep).collect();
        let index_of = |old: usize| ids.iter().position(|&x| x == old);
        ids.iter()
            .map(|&old| {
                let mut v = t.vertices[old].clone();
                v.parent = v.parent.and_then(index_of);
                if v.parent.is_none() {
                    v.twisting = None;
                }
                v
            })
            .collect()
    };

    let mut upper = split(false);
    let lower = split(true);
    let p_new = (0..p).filter(|&v| !below[v]).count();
    upper[p_new].markings.push(node_label);
    upper[p_new].markings.sort_unstable();
    Ok(CutPieces {
        upper: ColoredTree::from_parts(t.rank, upper),
        lower: ColoredTree::from_parts(t.rank, lower),
        node_label,
        twisting: t.vertices[c].twisting,
    })
}

/// Inverse of [`cut_edge`]: attaches `lower` at the component of `upper`
/// carrying marking `label`, removing that marking.
pub fn glue(
    upper: &ColoredTree,
    label: u32,
    lower: &ColoredTree,
    twisting: Option<u32>,
) -> Result<ColoredTree> {
    if upper.rank != lower.rank {
        return Err(Error::DimensionMismatch {
            expected: upper.rank,
            found: lower.rank,
        });
    }
    let at = upper
        .vertex_of_marking(label)
        .ok_or_else(|| Error::InvalidTree(format!("no marking {label} to glue at")))?;
    let mut vertices = upper.vertices.clone();
    vertices[at].markings.retain(|&m| m != label);
    let offset = vertices.len();
    for v in &lower.vertices {
        let mut v = v.clone();
        match v.parent {
            Some(q) => v.parent = Some(q + offset),
            None => {
                v.parent = Some(at);
                v.twisting = twisting;
            }
        }
        vertices.push(v);
    }
    Ok(ColoredTree::from_parts(upper.rank, vertices))
}

/// Drops marking `i`, renumbers the markings above it down by one, and
/// stabilizes.
pub fn forget_tail(t: &ColoredTree, i: u32) -> Result<ColoredTree> {
    let v = t
        .vertex_of_marking(i)
        .ok_or_else(|| Error::InvalidTree(format!("no marking {i} to forget")))?;
    let mut vertices = t.vertices.clone();
    vertices[v].markings.retain(|&m| m != i);
    for x in vertices.iter_mut() {
        for m in x.markings.iter_mut() {
            if *m > i {
                *m -= 1;
            }
        }
    }
    stabilize(&ColoredTree::from_parts(t.rank, vertices))
}

/// Repeatedly contracts unstable components, furthest from the root first:
/// unmarked degree-zero leaves are deleted, zero- or infinite-scaled
/// components with two special points are merged into their parent, and an
/// infinitely scaled root with a single branch absorbs it. A lone root
/// without markings or degree cannot be stabilized and is returned as is.
pub fn stabilize(t: &ColoredTree) -> Result<ColoredTree> {
    let errs = t.structural_errors();
    if !errs.is_empty() {
        return Err(Error::InvalidTree(errs.join("; ")));
    }
    let mut cur = t.clone();
    loop {
        let unstable: Vec<(usize, usize)> = (0..cur.len())
            .filter(|&v| !cur.is_stable_vertex(v))
            .filter(|&v| v != 0 || cur.special_points(0) >= 2)
            .map(|v| (cur.depth(v), v))
            .collect();
        let Some(&(_, v)) = unstable.iter().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1))) else {
            return Ok(cur);
        };
        let mut vertices = cur.vertices.clone();
        match vertices[v].parent {
            Some(p) => {
                if cur.special_points(v) <= 1 {
                    remove_vertex(&mut vertices, v);
                } else {
                    absorb(&mut vertices, p, v);
                }
            }
            None => {
                // special points on the root: z_0 plus exactly one more, which
                // must be a branch since infinite components carry no markings
                let kids = cur.children(0);
                if cur.vertices[0].scaling != Scaling::Infinite || kids.len() != 1 {
                    return Ok(cur);
                }
                let c = kids[0];
                vertices[0].scaling = vertices[c].scaling;
                absorb(&mut vertices, 0, c);
                vertices[0].twisting = None;
            }
        }
        cur = ColoredTree::from_parts(cur.rank, vertices);
    }
}
