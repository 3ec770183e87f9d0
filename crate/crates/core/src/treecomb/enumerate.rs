//! Enumeration of stable combinatorial types.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::{CanonicalNode, ColoredTree, Scaling};
use crate::error::{Error, Result};
use crate::quasimap::DegreeVector;
use crate::ratlin::{self, Rational, RationalVector};

pub const DEFAULT_BUDGET: usize = 100_000;
const MAX_MARKINGS: usize = 24;

/// Degree labels together with every degree reachable as a sum of them
/// below the total, measured by a linear height that is positive on all
/// nonzero labels.
pub(super) struct DegreeLattice {
    pub labels: Vec<RationalVector>,
    pub reachable: BTreeSet<RationalVector>,
}

impl DegreeLattice {
    pub fn new(effective: &[DegreeVector], total: &DegreeVector, budget: usize) -> Result<Self> {
        let rank = total.vector().len();
        for d in effective {
            if d.vector().len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: d.vector().len(),
                });
            }
        }
        let labels: Vec<RationalVector> = effective
            .iter()
            .map(|d| d.vector().clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let nonzero: Vec<RationalVector> = labels.iter().filter(|d| !d.is_zero()).cloned().collect();

        let mut reachable = BTreeSet::from([RationalVector::zeros(rank)]);
        if !nonzero.is_empty() {
            let eta = ratlin::open_halfspace_witness(&nonzero, rank)?.ok_or_else(|| {
                Error::Unsupported(
                    "effective degrees must lie in an open half-space for enumeration to terminate"
                        .into(),
                )
            })?;
            let cap: Rational = total.vector().dot(&eta);
            let mut frontier = vec![RationalVector::zeros(rank)];
            while let Some(d) = frontier.pop() {
                for e in &nonzero {
                    let next = d.add(e);
                    if next.dot(&eta) <= cap && reachable.insert(next.clone()) {
                        if reachable.len() > budget {
                            return Err(Error::Budget { cap: budget });
                        }
                        frontier.push(next);
                    }
                }
            }
        }
        Ok(DegreeLattice { labels, reachable })
    }

    pub fn contains(&self, d: &RationalVector) -> bool {
        self.reachable.contains(d)
    }

    /// Pairs `(part, rest)` with `part + rest = d`, both reachable.
    pub fn splits<'a>(&'a self, d: &'a RationalVector) -> impl Iterator<Item = (RationalVector, RationalVector)> + 'a {
        self.reachable.iter().filter_map(move |p| {
            let rest = d.sub(p);
            self.reachable.contains(&rest).then(|| (p.clone(), rest))
        })
    }
}

fn mask_labels(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Submasks of `mask`, including 0 and `mask`.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out
}

fn child_kinds(kind: Scaling) -> &'static [Scaling] {
    match kind {
        Scaling::Infinite => &[Scaling::Infinite, Scaling::Finite],
        Scaling::Finite | Scaling::Zero => &[Scaling::Zero],
    }
}

type Key = (Scaling, u32, RationalVector);

struct Enumerator {
    lattice: DegreeLattice,
    memo: HashMap<Key, Rc<Vec<CanonicalNode>>>,
    produced: usize,
    budget: usize,
}

impl Enumerator {
    fn charge(&mut self, k: usize) -> Result<()> {
        self.produced += k;
        if self.produced > self.budget {
            return Err(Error::Budget { cap: self.budget });
        }
        Ok(())
    }

    /// Stable subtrees whose top component has scaling `kind`, carrying the
    /// markings in `mask` and total degree `deg`.
    fn subtrees(&mut self, kind: Scaling, mask: u32, deg: &RationalVector) -> Result<Rc<Vec<CanonicalNode>>> {
        let key = (kind, mask, deg.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let mut out = Vec::new();
        let labels: Vec<RationalVector> = self
            .lattice
            .labels
            .iter()
            .filter(|dv| self.lattice.contains(&deg.sub(dv)))
            .cloned()
            .collect();
        for dv in labels {
            let rest = deg.sub(&dv);
            let marks = if kind.allows_markings() { submasks(mask) } else { vec![0] };
            for m in marks {
                let own = m.count_ones() as usize;
                let needed = if dv.is_zero() {
                    kind.required_special_points().saturating_sub(own + 1)
                } else {
                    0
                };
                // a lone branch carrying everything would repeat this key
                let forbid_lone = dv.is_zero() && m == 0 && kind != Scaling::Finite;
                let lists = self.branches(child_kinds(kind), mask & !m, &rest, forbid_lone, None)?;
                for children in lists {
                    if children.len() < needed {
                        continue;
                    }
                    out.push(CanonicalNode::new(
                        kind,
                        DegreeVector::new(dv.clone()),
                        mask_labels(m),
                        None,
                        children,
                    ));
                }
            }
        }
        self.charge(out.len())?;
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Multisets of child subtrees covering `mask` and `deg` exactly.
    /// Marked branches are chosen by the block containing the lowest
    /// remaining marking; unmarked ones in nondecreasing canonical order.
    fn branches(
        &mut self,
        kinds: &[Scaling],
        mask: u32,
        deg: &RationalVector,
        forbid_lone: bool,
        floor: Option<&CanonicalNode>,
    ) -> Result<Vec<Vec<CanonicalNode>>> {
        let mut out = Vec::new();
        if mask == 0 && deg.is_zero() {
            out.push(Vec::new());
            return Ok(out);
        }
        let splits: Vec<(RationalVector, RationalVector)> = self.lattice.splits(deg).collect();
        if mask != 0 {
            let low = mask & mask.wrapping_neg();
            for block in submasks(mask & !low) {
                let block = block | low;
                for (dc, rest) in &splits {
                    if forbid_lone && block == mask && rest.is_zero() {
                        continue;
                    }
                    for &k in kinds {
                        let heads = self.subtrees(k, block, dc)?;
                        if heads.is_empty() {
                            continue;
                        }
                        let tails = self.branches(kinds, mask & !block, rest, false, None)?;
                        for h in heads.iter() {
                            for t in &tails {
                                let mut list = Vec::with_capacity(t.len() + 1);
                                list.push(h.clone());
                                list.extend(t.iter().cloned());
                                out.push(list);
                            }
                        }
                    }
                }
            }
        } else {
            for (dc, rest) in &splits {
                if dc.is_zero() || (forbid_lone && rest.is_zero()) {
                    continue;
                }
                for &k in kinds {
                    let heads = self.subtrees(k, 0, dc)?;
                    for h in heads.iter() {
                        if floor.is_some_and(|f| h < f) {
                            continue;
                        }
                        let tails = self.branches(kinds, 0, rest, false, Some(h))?;
                        for t in tails {
                            let mut list = Vec::with_capacity(t.len() + 1);
                            list.push(h.clone());
                            list.extend(t);
                            out.push(list);
                        }
                    }
                }
            }
        }
        self.charge(out.len())?;
        Ok(out)
    }
}

/// All stable types with markings `1..=n`, component degrees drawn from
/// `effective`, and total degree `total`, up to isomorphism. Results are in
/// canonical layout, sorted by canonical form. Twisting data is not part of
/// a type. Fails with [`Error::Budget`] once more than `budget` partial
/// structures have been produced.
pub fn enumerate_types(
    n: usize,
    effective: &[DegreeVector],
    total: &DegreeVector,
    budget: usize,
) -> Result<Vec<ColoredTree>> {
    if n > MAX_MARKINGS {
        return Err(Error::Unsupported(format!(
            "at most {MAX_MARKINGS} markings can be enumerated, got {n}"
        )));
    }
    let rank = total.vector().len();
    let lattice = DegreeLattice::new(effective, total, budget)?;
    if !lattice.contains(total.vector()) {
        return Ok(Vec::new());
    }
    let mut en = Enumerator {
        lattice,
        memo: HashMap::new(),
        produced: 0,
        budget,
    };
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut found = BTreeSet::new();
    for kind in [Scaling::Finite, Scaling::Infinite] {
        for node in en.subtrees(kind, full, total.vector())?.iter() {
            found.insert(node.clone());
        }
    }
    Ok(found
        .iter()
        .map(|node| ColoredTree::from_canonical(rank, node))
        .collect())
}
