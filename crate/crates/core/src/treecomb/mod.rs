//! Combinatorial types of stable scaled affine gauged maps.
//!
//! A type is a rooted tree of components. The root carries the marking
//! `z_0` (at infinity); every other marking `z_1..z_n` sits on a component
//! with zero or finite scaling. Along the path from any marking to the
//! root the scalings read `Zero* Finite Infinite*`: exactly one component
//! with finite nonzero scaling, zero before it and infinite after it. The
//! same pattern is imposed on unmarked branches, so a child of an infinite
//! component is infinite or finite, and everything below a finite
//! component has zero scaling.
//!
//! A component of degree zero is stable when it has at least two special
//! points (finite scaling) or three (zero or infinite scaling). Special
//! points are markings, nodes, and `z_0` on the root.

mod enumerate;
mod ops;
mod splitting;

pub use enumerate::{enumerate_types, DEFAULT_BUDGET};
pub use ops::{collapse_edge, cut_edge, forget_tail, glue, stabilize, CutPieces};
pub use splitting::{infinite_splittings, SplitPart, Splitting};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gitq::WeightSystem;
use crate::inertia::TorsionElement;
use crate::quasimap::DegreeVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Zero,
    Finite,
    Infinite,
}

impl Scaling {
    /// Special points a degree-zero component needs to be stable.
    pub fn required_special_points(self) -> usize {
        match self {
            Scaling::Finite => 2,
            Scaling::Zero | Scaling::Infinite => 3,
        }
    }

    pub fn allows_child(self, child: Scaling) -> bool {
        matches!(
            (self, child),
            (Scaling::Infinite, Scaling::Infinite | Scaling::Finite)
                | (Scaling::Finite, Scaling::Zero)
                | (Scaling::Zero, Scaling::Zero)
        )
    }

    pub fn allows_markings(self) -> bool {
        self != Scaling::Infinite
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub scaling: Scaling,
    pub degree: DegreeVector,
    /// Marking labels `i >= 1` on this component, sorted.
    pub markings: Vec<u32>,
    pub parent: Option<usize>,
    /// Twisting index `r_e` of the edge to the parent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisting: Option<u32>,
}

/// Edges are named by their child endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// A colored tree. Vertex 0 is the root and carries `z_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredTree {
    rank: usize,
    vertices: Vec<Vertex>,
}

/// Order-independent form of a subtree, used for isomorphism tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalNode {
    pub subtree_markings: Vec<u32>,
    pub scaling: Scaling,
    pub degree: DegreeVector,
    pub markings: Vec<u32>,
    pub twisting: Option<u32>,
    pub children: Vec<CanonicalNode>,
}

impl CanonicalNode {
    pub(crate) fn new(
        scaling: Scaling,
        degree: DegreeVector,
        markings: Vec<u32>,
        twisting: Option<u32>,
        mut children: Vec<CanonicalNode>,
    ) -> Self {
        children.sort();
        let mut subtree_markings: Vec<u32> = markings
            .iter()
            .copied()
            .chain(children.iter().flat_map(|c| c.subtree_markings.iter().copied()))
            .collect();
        subtree_markings.sort_unstable();
        CanonicalNode {
            subtree_markings,
            scaling,
            degree,
            markings,
            twisting,
            children,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validation {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl ColoredTree {
    /// A single root component.
    pub fn single(scaling: Scaling, degree: DegreeVector, markings: Vec<u32>) -> Self {
        let mut markings = markings;
        markings.sort_unstable();
        ColoredTree {
            rank: degree.vector().len(),
            vertices: vec![Vertex {
                scaling,
                degree,
                markings,
                parent: None,
                twisting: None,
            }],
        }
    }

    /// Appends a component below `parent` and returns its index.
    pub fn add_child(
        &mut self,
        parent: usize,
        scaling: Scaling,
        degree: DegreeVector,
        markings: Vec<u32>,
    ) -> usize {
        assert!(parent < self.vertices.len(), "parent {parent} out of range");
        let mut markings = markings;
        markings.sort_unstable();
        self.vertices.push(Vertex {
            scaling,
            degree,
            markings,
            parent: Some(parent),
            twisting: None,
        });
        self.vertices.len() - 1
    }

    pub fn set_twisting(&mut self, edge: EdgeId, twisting: Option<u32>) {
        self.vertices[edge.0].twisting = twisting;
    }

    pub(crate) fn from_parts(rank: usize, vertices: Vec<Vertex>) -> Self {
        ColoredTree { rank, vertices }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        (1..self.vertices.len())
            .filter(|&v| self.vertices[v].parent.is_some())
            .map(EdgeId)
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.parent.is_some()).count()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&c| self.vertices[c].parent == Some(v))
            .collect()
    }

    pub fn depth(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.vertices[v].parent {
            v = p;
            d += 1;
            if d > self.vertices.len() {
                break;
            }
        }
        d
    }

    /// Markings, nodes, and `z_0` on the root.
    pub fn special_points(&self, v: usize) -> usize {
        let node_or_root = 1;
        self.vertices[v].markings.len() + self.children(v).len() + node_or_root
    }

    pub fn is_stable_vertex(&self, v: usize) -> bool {
        let vert = &self.vertices[v];
        !vert.degree.is_zero() || self.special_points(v) >= vert.scaling.required_special_points()
    }

    /// All marking labels, sorted.
    pub fn markings(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .vertices
            .iter()
            .flat_map(|v| v.markings.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn marking_count(&self) -> usize {
        self.vertices.iter().map(|v| v.markings.len()).sum()
    }

    pub fn vertex_of_marking(&self, label: u32) -> Option<usize> {
        self.vertices.iter().position(|v| v.markings.contains(&label))
    }

    pub fn total_degree(&self) -> DegreeVector {
        self.subtree_degree(0)
    }

    pub fn subtree_degree(&self, v: usize) -> DegreeVector {
        let mut acc = self.vertices[v].degree.vector().clone();
        for c in self.children(v) {
            acc = acc.add(self.subtree_degree(c).vector());
        }
        DegreeVector::new(acc)
    }

    pub fn finite_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.scaling == Scaling::Finite)
            .count()
    }

    /// Codimension of the stratum of this type in the moduli of scaled
    /// affine curves. The finite components of a type share one scaling
    /// parameter, so each finite component beyond the first cancels a node:
    /// `codim = #edges − #finite + 1`.
    pub fn codimension(&self) -> usize {
        (self.edge_count() + 1).saturating_sub(self.finite_count())
    }

    /// Structural invariants only (no stability).
    pub fn structural_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if self.vertices.is_empty() {
            errs.push("tree has no components".into());
            return errs;
        }
        if self.vertices[0].parent.is_some() {
            errs.push("component 0 must be the root".into());
        }
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            match v.parent {
                None => errs.push(format!("component {i} has no parent")),
                Some(p) if p >= self.vertices.len() || p == i => {
                    errs.push(format!("component {i} has invalid parent {p}"))
                }
                _ => {}
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        for i in 0..self.vertices.len() {
            let mut seen = BTreeSet::new();
            let mut v = i;
            while let Some(p) = self.vertices[v].parent {
                if !seen.insert(v) {
                    errs.push(format!("component {i} lies on a cycle"));
                    return errs;
                }
                v = p;
            }
            if v != 0 {
                errs.push(format!("component {i} is not connected to the root"));
            }
        }
        let root = self.vertices[0].scaling;
        if root == Scaling::Zero {
            errs.push("the root component cannot have zero scaling".into());
        }
        let mut labels = BTreeSet::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.degree.vector().len() != self.rank {
                errs.push(format!("component {i} has a degree of the wrong length"));
            }
            if !v.markings.is_empty() && !v.scaling.allows_markings() {
                errs.push(format!("markings on infinitely scaled component {i}"));
            }
            for &m in &v.markings {
                if m == 0 {
                    errs.push("marking label 0 is reserved for the root".into());
                }
                if !labels.insert(m) {
                    errs.push(format!("marking {m} appears twice"));
                }
            }
            if let Some(p) = v.parent {
                let ps = self.vertices[p].scaling;
                if !ps.allows_child(v.scaling) {
                    errs.push(format!(
                        "component {i} with {:?} scaling below {:?} component {p} breaks monotonicity",
                        v.scaling, ps
                    ));
                }
                if let Some(r) = v.twisting {
                    if r == 0 {
                        errs.push(format!("edge {i} has twisting 0"));
                    }
                    if !(ps == Scaling::Infinite && v.scaling == Scaling::Finite) {
                        errs.push(format!(
                            "edge {i} is twisted but does not join a finite to an infinite component"
                        ));
                    }
                }
            } else if v.twisting.is_some() {
                errs.push("the root has no edge to twist".into());
            }
        }
        errs
    }

    /// Checks the tree as a stable type with markings `1..=n`.
    pub fn validate(&self, n: usize) -> Validation {
        let mut diagnostics = self.structural_errors();
        if diagnostics.is_empty() {
            let want: Vec<u32> = (1..=n as u32).collect();
            if self.markings() != want {
                diagnostics.push(format!(
                    "markings {:?} are not exactly 1..={n}",
                    self.markings()
                ));
            }
            for v in 0..self.vertices.len() {
                if !self.is_stable_vertex(v) {
                    diagnostics.push(format!(
                        "component {v} ({:?}, degree 0) has {} special points, needs {}",
                        self.vertices[v].scaling,
                        self.special_points(v),
                        self.vertices[v].scaling.required_special_points()
                    ));
                }
            }
        }
        Validation {
            valid: diagnostics.is_empty(),
            diagnostics,
        }
    }

    /// Like [`validate`](Self::validate), additionally requiring that every
    /// twisting index divides the order of the sector `d mod ℤ^r` carried by
    /// the affine piece below the twisted node.
    pub fn validate_with(&self, n: usize, ws: &WeightSystem) -> Validation {
        let mut out = self.validate(n);
        if self.rank != ws.rank() {
            out.diagnostics
                .push(format!("degree rank {} differs from torus rank {}", self.rank, ws.rank()));
        } else if out.diagnostics.is_empty() {
            for e in self.edges() {
                let Some(r) = self.vertices[e.0].twisting else {
                    continue;
                };
                let d = self.subtree_degree(e.0);
                match TorsionElement::new(d.vector()) {
                    Ok(g) if g.order() % r as u64 == 0 => {}
                    Ok(g) => out.diagnostics.push(format!(
                        "twisting {r} at edge {} does not divide the sector order {}",
                        e.0,
                        g.order()
                    )),
                    Err(err) => out.diagnostics.push(err.to_string()),
                }
            }
        }
        out.valid = out.diagnostics.is_empty();
        out
    }

    fn canonical_at(&self, v: usize) -> CanonicalNode {
        let vert = &self.vertices[v];
        let children = self.children(v).into_iter().map(|c| self.canonical_at(c)).collect();
        CanonicalNode::new(
            vert.scaling,
            vert.degree.clone(),
            vert.markings.clone(),
            vert.twisting,
            children,
        )
    }

    pub fn canonical(&self) -> CanonicalNode {
        self.canonical_at(0)
    }

    /// Root-preserving, marking-preserving isomorphism.
    pub fn is_isomorphic(&self, other: &ColoredTree) -> bool {
        self.rank == other.rank && self.canonical() == other.canonical()
    }

    /// Lays out a canonical form in breadth-first order.
    pub fn from_canonical(rank: usize, node: &CanonicalNode) -> Self {
        let mut vertices = vec![Vertex {
            scaling: node.scaling,
            degree: node.degree.clone(),
            markings: node.markings.clone(),
            parent: None,
            twisting: node.twisting,
        }];
        let mut queue = std::collections::VecDeque::from([(node, 0usize)]);
        while let Some((n, id)) = queue.pop_front() {
            for c in &n.children {
                vertices.push(Vertex {
                    scaling: c.scaling,
                    degree: c.degree.clone(),
                    markings: c.markings.clone(),
                    parent: Some(id),
                    twisting: c.twisting,
                });
                queue.push_back((c, vertices.len() - 1));
            }
        }
        ColoredTree { rank, vertices }
    }

    /// The isomorphic tree in canonical breadth-first layout.
    pub fn canonicalize(&self) -> Self {
        Self::from_canonical(self.rank, &self.canonical())
    }

    pub(crate) fn check_edge(&self, e: EdgeId) -> Result<usize> {
        match self.vertices.get(e.0).and_then(|v| v.parent) {
            Some(p) => Ok(p),
            None => Err(Error::InvalidTree(format!("{} is not an edge", e.0))),
        }
    }
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ColoredTree, v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let vert = &t.vertices[v];
            let tag = match vert.scaling {
                Scaling::Zero => "Z",
                Scaling::Finite => "F",
                Scaling::Infinite => "I",
            };
            write!(f, "{tag}")?;
            if !vert.degree.is_zero() {
                write!(f, "<{}>", vert.degree)?;
            }
            if !vert.markings.is_empty() {
                let ms: Vec<String> = vert.markings.iter().map(|m| m.to_string()).collect();
                write!(f, "[{}]", ms.join(","))?;
            }
            let kids = t.children(v);
            if !kids.is_empty() {
                write!(f, "(")?;
                for (i, c) in kids.into_iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    go(t, c, f)?;
                }
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::RationalVector;

    fn zero() -> DegreeVector {
        DegreeVector::zero(1)
    }

    #[test]
    fn single_vertex_types() {
        let t = ColoredTree::single(Scaling::Finite, zero(), vec![1]);
        assert!(t.validate(1).valid);
        let t = ColoredTree::single(Scaling::Finite, DegreeVector::from_ints(&[3]), vec![1]);
        assert!(t.validate(1).valid);
        let t = ColoredTree::single(Scaling::Finite, zero(), vec![]);
        let v = t.validate(0);
        assert!(!v.valid);
        assert!(v.diagnostics[0].contains("1 special points"));
    }

    #[test]
    fn infinite_root_with_one_child_is_unstable() {
        let mut t = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        t.add_child(0, Scaling::Finite, zero(), vec![1, 2]);
        let v = t.validate(2);
        assert!(!v.valid);
        assert_eq!(v.diagnostics.len(), 1);
        assert!(v.diagnostics[0].starts_with("component 0"));
    }

    #[test]
    fn monotonicity_violations() {
        let mut t = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        t.add_child(0, Scaling::Zero, zero(), vec![1, 2]);
        t.add_child(0, Scaling::Finite, zero(), vec![3]);
        assert!(t.structural_errors().iter().any(|e| e.contains("monotonicity")));

        let t = ColoredTree::single(Scaling::Infinite, zero(), vec![1]);
        assert!(t.structural_errors().iter().any(|e| e.contains("infinitely scaled")));

        let mut t = ColoredTree::single(Scaling::Finite, zero(), vec![1]);
        t.add_child(0, Scaling::Finite, zero(), vec![2]);
        assert!(!t.structural_errors().is_empty());
    }

    #[test]
    fn marking_set_must_match() {
        let t = ColoredTree::single(Scaling::Finite, zero(), vec![1, 3]);
        assert!(!t.validate(2).valid);
        assert!(t.validate(3).diagnostics.iter().any(|d| d.contains("markings")));
    }

    #[test]
    fn twisting_rules() {
        let mut t = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        let a = t.add_child(0, Scaling::Finite, DegreeVector::new(RationalVector::new(vec![crate::ratlin::rat(1, 3)])), vec![1]);
        t.add_child(0, Scaling::Finite, zero(), vec![2]);
        t.set_twisting(EdgeId(a), Some(3));
        assert!(t.validate(2).valid);
        let ws = WeightSystem::simple(1, vec![vec![2], vec![3]], RationalVector::from_ints(&[1])).unwrap();
        assert!(t.validate_with(2, &ws).valid);
        t.set_twisting(EdgeId(a), Some(2));
        assert!(!t.validate_with(2, &ws).valid);

        let mut t = ColoredTree::single(Scaling::Finite, zero(), vec![]);
        let z = t.add_child(0, Scaling::Zero, zero(), vec![1, 2]);
        t.set_twisting(EdgeId(z), Some(1));
        assert!(t.structural_errors().iter().any(|e| e.contains("twisted")));
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        let mut a = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        a.add_child(0, Scaling::Finite, zero(), vec![1]);
        a.add_child(0, Scaling::Finite, zero(), vec![2]);
        let mut b = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        b.add_child(0, Scaling::Finite, zero(), vec![2]);
        b.add_child(0, Scaling::Finite, zero(), vec![1]);
        assert_ne!(a, b);
        assert!(a.is_isomorphic(&b));
        assert_eq!(a.canonicalize(), b.canonicalize());
        assert_eq!(a.to_string(), "I(F[1] F[2])");
    }

    #[test]
    fn codimension_counts_shared_scaling() {
        let t = ColoredTree::single(Scaling::Finite, zero(), vec![1, 2]);
        assert_eq!(t.codimension(), 0);
        let mut t = ColoredTree::single(Scaling::Finite, zero(), vec![]);
        t.add_child(0, Scaling::Zero, zero(), vec![1, 2]);
        assert_eq!(t.codimension(), 1);
        let mut t = ColoredTree::single(Scaling::Infinite, zero(), vec![]);
        t.add_child(0, Scaling::Finite, zero(), vec![1]);
        t.add_child(0, Scaling::Finite, zero(), vec![2]);
        assert_eq!(t.codimension(), 1);
    }
}
