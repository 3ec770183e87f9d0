//! Independent oracles shared by the integration suites. None of them call
//! into the library's solvers; they only read its data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num::{BigRational, Integer, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;
use toricq::ratlin::RationalVector;
use toricq::treecomb::{ColoredTree, Scaling};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Solves `B c = t` exactly for the columns `B`, if consistent.
fn solve_columns(cols: &[&RationalVector], t: &RationalVector) -> Option<Vec<BigRational>> {
    let m = t.len();
    let k = cols.len();
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(t[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..m).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        sol[c] = a[row][k].clone();
    }
    Some(sol)
}

fn rank_of(cols: &[&RationalVector]) -> usize {
    let Some(first) = cols.first() else { return 0 };
    let m = first.len();
    let mut a: Vec<Vec<BigRational>> = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let mut r = 0;
    for c in 0..cols.len() {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..m {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Carathéodory: `t` is in the cone iff it is a nonnegative combination of
/// some linearly independent subset of the generators.
pub fn caratheodory_member(gens: &[RationalVector], t: &RationalVector) -> bool {
    if t.is_zero() {
        return true;
    }
    let k = gens.len();
    let r = t.len();
    for mask in 1u32..(1 << k) {
        if mask.count_ones() as usize > r {
            continue;
        }
        let cols: Vec<&RationalVector> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &gens[i]).collect();
        if rank_of(&cols) != cols.len() {
            continue;
        }
        if let Some(c) = solve_columns(&cols, t) {
            if c.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

pub fn random_vector(rng: &mut StdRng, r: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..r).map(|_| rng.gen_range(lo..=hi)).collect()
}

pub fn random_rational_vector(rng: &mut StdRng, r: usize, lo: i64, hi: i64, max_den: i64) -> RationalVector {
    RationalVector::new(
        (0..r)
            .map(|_| q(rng.gen_range(lo..=hi), rng.gen_range(1..=max_den)))
            .collect(),
    )
}

/// Torsion elements of P[a,b] found by sweeping every fraction with
/// denominator up to max(a,b): those fixing at least one coordinate.
pub fn denominator_sweep(weights: &[i64]) -> BTreeSet<(i64, i64)> {
    let top = *weights.iter().max().unwrap();
    let mut out = BTreeSet::new();
    for den in 1..=top {
        for num in 0..den {
            let g = num.gcd(&den);
            let (p, d) = (num / g, den / g);
            if weights.iter().any(|w| (w * p) % d == 0) {
                out.insert((p, d));
            }
        }
    }
    out
}

/// Encodes a rooted marked tree given by parent pointers; children sorted,
/// so two trees get the same string iff they are isomorphic.
pub fn encode(scaling: &[Scaling], degree: &[String], marks: &[Vec<u32>], parent: &[Option<usize>]) -> String {
    fn go(v: usize, s: &[Scaling], d: &[String], m: &[Vec<u32>], kids: &BTreeMap<usize, Vec<usize>>) -> String {
        let tag = match s[v] {
            Scaling::Zero => 'Z',
            Scaling::Finite => 'F',
            Scaling::Infinite => 'I',
        };
        let mut ms = m[v].clone();
        ms.sort_unstable();
        let mut cs: Vec<String> = kids
            .get(&v)
            .map(|k| k.iter().map(|&c| go(c, s, d, m, kids)).collect())
            .unwrap_or_default();
        cs.sort();
        format!("({tag}{}{:?}{})", d[v], ms, cs.concat())
    }
    let mut kids: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut root = 0;
    for (v, p) in parent.iter().enumerate() {
        match p {
            Some(p) => kids.entry(*p).or_default().push(v),
            None => root = v,
        }
    }
    go(root, scaling, degree, marks, &kids)
}

pub fn encode_tree(t: &ColoredTree) -> String {
    let vs = t.vertices();
    encode(
        &vs.iter().map(|v| v.scaling).collect::<Vec<_>>(),
        &vs.iter()
            .map(|v| if v.degree.is_zero() { String::new() } else { v.degree.to_string() })
            .collect::<Vec<_>>(),
        &vs.iter().map(|v| v.markings.clone()).collect::<Vec<_>>(),
        &vs.iter().map(|v| v.parent).collect::<Vec<_>>(),
    )
}

/// Nondecreasing parent sequences: every rooted tree on `v` vertices has a
/// breadth-first labelling of this form.
fn bfs_parent_arrays(v: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == v {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(0);
        for p in lo..i {
            cur.push(p);
            go(i + 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, v, &mut vec![], &mut out);
    out
}

/// Generate-and-filter enumeration of degree-zero stable types with `n`
/// markings: all trees with at most `2n` components, every scaling
/// colouring, every marking placement, kept when the definition holds.
pub fn brute_force_types(n: usize) -> BTreeSet<String> {
    use Scaling::*;
    let mut found = BTreeSet::new();
    for v in 1..=2 * n {
        for parents in bfs_parent_arrays(v) {
            let parent: Vec<Option<usize>> =
                std::iter::once(None).chain(parents.iter().map(|&p| Some(p))).collect();
            let mut children = vec![0usize; v];
            for &p in &parents {
                children[p] += 1;
            }
            for code in 0..3usize.pow(v as u32) {
                let scaling: Vec<Scaling> = (0..v)
                    .map(|i| [Zero, Finite, Infinite][code / 3usize.pow(i as u32) % 3])
                    .collect();
                let monotone = scaling[0] != Zero
                    && (1..v).all(|i| {
                        let (p, c) = (scaling[parent[i].unwrap()], scaling[i]);
                        matches!((p, c), (Infinite, Infinite | Finite) | (Finite, Zero) | (Zero, Zero))
                    });
                if !monotone {
                    continue;
                }
                let deficit: Vec<usize> = (0..v)
                    .map(|i| {
                        let need: usize = if scaling[i] == Finite { 2 } else { 3 };
                        need.saturating_sub(children[i] + 1)
                    })
                    .collect();
                if (0..v).any(|i| scaling[i] == Infinite && deficit[i] > 0)
                    || deficit.iter().sum::<usize>() > n
                {
                    continue;
                }
                let slots: Vec<usize> = (0..v).filter(|&i| scaling[i] != Infinite).collect();
                if slots.is_empty() {
                    continue;
                }
                for place in 0..slots.len().pow(n as u32) {
                    let mut marks = vec![Vec::new(); v];
                    for m in 0..n {
                        let s = slots[place / slots.len().pow(m as u32) % slots.len()];
                        marks[s].push(m as u32 + 1);
                    }
                    if (0..v).all(|i| marks[i].len() >= deficit[i]) {
                        found.insert(encode(&scaling, &vec![String::new(); v], &marks, &parent));
                    }
                }
            }
        }
    }
    found
}

/// A random tree obeying the scaling and marking-placement rules, with
/// markings `1..=m` and mostly zero degrees. Stability is not enforced.
pub fn random_structural_tree(rng: &mut StdRng) -> (ColoredTree, usize) {
    use toricq::quasimap::DegreeVector;
    let size = rng.gen_range(1..=9);
    let root = if rng.gen_bool(0.5) { Scaling::Finite } else { Scaling::Infinite };
    let deg = |rng: &mut StdRng| {
        if rng.gen_bool(0.15) {
            DegreeVector::from_ints(&[rng.gen_range(1..=3)])
        } else {
            DegreeVector::zero(1)
        }
    };
    let d0 = deg(rng);
    let mut t = ColoredTree::single(root, d0, vec![]);
    for _ in 1..size {
        let p = rng.gen_range(0..t.len());
        let kind = match t.vertex(p).scaling {
            Scaling::Infinite => {
                if rng.gen_bool(0.4) {
                    Scaling::Infinite
                } else {
                    Scaling::Finite
                }
            }
            _ => Scaling::Zero,
        };
        let d = deg(rng);
        t.add_child(p, kind, d, vec![]);
    }
    let slots: Vec<usize> = (0..t.len()).filter(|&v| t.vertex(v).scaling != Scaling::Infinite).collect();
    let m = if slots.is_empty() { 0 } else { rng.gen_range(0..=5) };
    let mut placed: Vec<Vec<u32>> = vec![Vec::new(); t.len()];
    for label in 1..=m as u32 {
        placed[slots[rng.gen_range(0..slots.len())]].push(label);
    }
    // rebuild with markings in place
    let mut out = ColoredTree::single(t.vertex(0).scaling, t.vertex(0).degree.clone(), placed[0].clone());
    for (v, marks) in placed.iter().enumerate().skip(1) {
        let x = t.vertex(v);
        out.add_child(x.parent.unwrap(), x.scaling, x.degree.clone(), marks.clone());
    }
    (out, m)
}
