//! Splittings at infinity: the ways a degree and a marking set can
//! distribute over `r >= 1` affine pieces attached to one stable map at
//! infinity.

use serde::{Deserialize, Serialize};

use super::enumerate::DegreeLattice;
use crate::error::{Error, Result};
use crate::quasimap::DegreeVector;
use crate::ratlin::RationalVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPart {
    pub markings: Vec<u32>,
    pub degree: DegreeVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splitting {
    /// Marked parts ordered by smallest marking, then unmarked parts by
    /// degree.
    pub parts: Vec<SplitPart>,
    /// Degree `d_0` of the map at infinity.
    pub stable_map_degree: DegreeVector,
}

impl Splitting {
    pub fn piece_count(&self) -> usize {
        self.parts.len()
    }
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<u32>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        let label = i as u32 + 1;
        for b in 0..blocks.len() {
            blocks[b].push(label);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![label]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every splitting of markings `1..=n` and degree `total` into affine
/// pieces `(I_j, d_j)` plus `d_0`, with all `d_j` and `d_0` taken from
/// `effective`. Unmarked pieces must have nonzero degree. For degree zero
/// and `n >= 1` there are exactly Bell(n) splittings; for `n = 0` and degree
/// zero there are none.
pub fn infinite_splittings(
    n: usize,
    total: &DegreeVector,
    effective: &[DegreeVector],
    budget: usize,
) -> Result<Vec<Splitting>> {
    let lattice = DegreeLattice::new(effective, total, budget)?;
    let mut out = Vec::new();
    if !lattice.contains(total.vector()) {
        return Ok(out);
    }
    let nonzero: Vec<RationalVector> = lattice.labels.iter().filter(|d| !d.is_zero()).cloned().collect();

    struct Ctx<'a> {
        lattice: &'a DegreeLattice,
        nonzero: &'a [RationalVector],
        out: &'a mut Vec<Splitting>,
        budget: usize,
    }

    fn finish(ctx: &mut Ctx<'_>, parts: &[SplitPart], rest: &RationalVector, floor: usize) -> Result<()> {
        if !parts.is_empty() && ctx.lattice.labels.contains(rest) {
            if ctx.out.len() >= ctx.budget {
                return Err(Error::Budget { cap: ctx.budget });
            }
            ctx.out.push(Splitting {
                parts: parts.to_vec(),
                stable_map_degree: DegreeVector::new(rest.clone()),
            });
        }
        for i in floor..ctx.nonzero.len() {
            let next = rest.sub(&ctx.nonzero[i]);
            if ctx.lattice.contains(&next) {
                let mut more = parts.to_vec();
                more.push(SplitPart {
                    markings: Vec::new(),
                    degree: DegreeVector::new(ctx.nonzero[i].clone()),
                });
                finish(ctx, &more, &next, i)?;
            }
        }
        Ok(())
    }

    fn assign(
        ctx: &mut Ctx<'_>,
        blocks: &[Vec<u32>],
        parts: &mut Vec<SplitPart>,
        rest: &RationalVector,
    ) -> Result<()> {
        let Some(block) = blocks.get(parts.len()) else {
            return finish(ctx, &parts.clone(), rest, 0);
        };
        for d in &ctx.lattice.labels.clone() {
            let next = rest.sub(d);
            if ctx.lattice.contains(&next) {
                parts.push(SplitPart {
                    markings: block.clone(),
                    degree: DegreeVector::new(d.clone()),
                });
                assign(ctx, blocks, parts, &next)?;
                parts.pop();
            }
        }
        Ok(())
    }

    let mut ctx = Ctx {
        lattice: &lattice,
        nonzero: &nonzero,
        out: &mut out,
        budget,
    };
    for blocks in set_partitions(n) {
        assign(&mut ctx, &blocks, &mut Vec::new(), total.vector())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecomb::DEFAULT_BUDGET;

    fn zero_count(n: usize) -> usize {
        let z = DegreeVector::zero(1);
        infinite_splittings(n, &z, std::slice::from_ref(&z), DEFAULT_BUDGET).unwrap().len()
    }

    #[test]
    fn bell_numbers_in_degree_zero() {
        let counts: Vec<usize> = (0..=6).map(zero_count).collect();
        assert_eq!(counts, vec![0, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn two_markings() {
        let z = DegreeVector::zero(1);
        let s = infinite_splittings(2, &z, std::slice::from_ref(&z), DEFAULT_BUDGET).unwrap();
        let shapes: Vec<Vec<Vec<u32>>> = s
            .iter()
            .map(|s| s.parts.iter().map(|p| p.markings.clone()).collect())
            .collect();
        assert_eq!(shapes, vec![vec![vec![1, 2]], vec![vec![1], vec![2]]]);
    }

    #[test]
    fn unmarked_pieces_carry_degree() {
        let d = |k| DegreeVector::from_ints(&[k]);
        let s = infinite_splittings(0, &d(2), &[d(0), d(1)], DEFAULT_BUDGET).unwrap();
        let shapes: Vec<(Vec<String>, String)> = s
            .iter()
            .map(|s| {
                (
                    s.parts.iter().map(|p| p.degree.to_string()).collect(),
                    s.stable_map_degree.to_string(),
                )
            })
            .collect();
        // pieces {1}+d0=1, {1,1}+d0=0
        assert_eq!(shapes.len(), 2);
        assert!(s.iter().all(|s| s.parts.iter().all(|p| !p.degree.is_zero())));
    }
}
