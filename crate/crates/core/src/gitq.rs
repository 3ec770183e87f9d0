//! Torus GIT problems `(X, G, ν)` and their semistable loci.
//!
//! A point of `X = ⊕ X_i` is semistable exactly when `ν` lies in the
//! nonnegative cone spanned by the weights of its nonzero coordinates, so
//! everything here is phrased in terms of [`Support`]s: subsets of weight
//! indices standing for coordinate subspaces `X_I`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratlin::{self, IntegerMatrix, RationalVector};

/// Supports are enumerated as bitmasks; beyond this many distinct weights
/// exhaustive enumeration is refused.
pub const MAX_ENUMERATED_WEIGHTS: usize = 20;

/// A rank-`r` torus acting on `⊕ X_i` with weights `μ_i` of multiplicity
/// `m_i`, polarized by `ν`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightSystem {
    rank: usize,
    weights: Vec<Vec<i64>>,
    multiplicities: Vec<u64>,
    nu: RationalVector,
    labels: Option<Vec<String>>,
    weight_vectors: Vec<RationalVector>,
}

impl fmt::Debug for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightSystem")
            .field("rank", &self.rank)
            .field("weights", &self.weights)
            .field("multiplicities", &self.multiplicities)
            .field("nu", &self.nu)
            .field("labels", &self.labels)
            .finish()
    }
}

impl WeightSystem {
    pub fn new(
        rank: usize,
        weights: Vec<Vec<i64>>,
        multiplicities: Vec<u64>,
        nu: RationalVector,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeightSystem("at least one weight is required".into()));
        }
        if multiplicities.len() != weights.len() {
            return Err(Error::InvalidWeightSystem(format!(
                "{} weights but {} multiplicities",
                weights.len(),
                multiplicities.len()
            )));
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(Error::InvalidWeightSystem(format!(
                "weight {} has multiplicity 0",
                i + 1
            )));
        }
        for w in &weights {
            if w.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: w.len(),
                });
            }
        }
        nu.check_len(rank)?;
        let weight_vectors = weights.iter().map(|w| RationalVector::from_ints(w)).collect();
        Ok(WeightSystem {
            rank,
            weights,
            multiplicities,
            nu,
            labels: None,
            weight_vectors,
        })
    }

    /// Every weight with multiplicity one.
    pub fn simple(rank: usize, weights: Vec<Vec<i64>>, nu: RationalVector) -> Result<Self> {
        let m = vec![1; weights.len()];
        Self::new(rank, weights, m, nu)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.weights.len() {
            return Err(Error::InvalidWeightSystem(format!(
                "{} labels for {} weights",
                labels.len(),
                self.weights.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same weights, different polarization.
    pub fn with_nu(&self, nu: RationalVector) -> Result<Self> {
        nu.check_len(self.rank)?;
        let mut ws = self.clone();
        ws.nu = nu;
        Ok(ws)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of distinct weight spaces `k`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn weight_vector(&self, i: usize) -> &RationalVector {
        &self.weight_vectors[i]
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn nu(&self) -> &RationalVector {
        &self.nu
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `Σ m_i`, the complex dimension of `X`.
    pub fn total_multiplicity(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// Weights aggregated by vector, so `(1,0)×2 ⊕ (1,0)×2` reads `(1,0)×4`.
    pub fn weight_multiset(&self) -> BTreeMap<Vec<i64>, u64> {
        let mut out = BTreeMap::new();
        for (w, &m) in self.weights.iter().zip(&self.multiplicities) {
            *out.entry(w.clone()).or_insert(0) += m;
        }
        out
    }

    pub fn full_support(&self) -> Support {
        Support((0..self.len()).collect())
    }

    pub fn check_support(&self, s: &Support) -> Result<()> {
        match s.0.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(Error::InvalidSupport {
                index: index + 1,
                len: self.len(),
            }),
            None => Ok(()),
        }
    }

    fn vectors_of(&self, s: &Support) -> Vec<RationalVector> {
        s.0.iter().map(|&i| self.weight_vectors[i].clone()).collect()
    }

    /// Integer matrix with the weights of `s` as rows.
    pub fn weight_matrix(&self, s: &Support) -> IntegerMatrix {
        let rows: Vec<&[i64]> = s.0.iter().map(|&i| self.weights[i].as_slice()).collect();
        IntegerMatrix::from_rows(&rows, self.rank).expect("weights have length rank")
    }

    pub fn support_rank(&self, s: &Support) -> usize {
        ratlin::rank(&self.vectors_of(s))
    }

    /// `Σ_{i∈s} m_i`.
    pub fn support_multiplicity(&self, s: &Support) -> u64 {
        s.0.iter().map(|&i| self.multiplicities[i]).sum()
    }

    fn check_enumerable(&self) -> Result<()> {
        if self.len() > MAX_ENUMERATED_WEIGHTS {
            return Err(Error::Unsupported(format!(
                "{} distinct weights exceed the enumeration limit of {MAX_ENUMERATED_WEIGHTS}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Semistability flag of every support, indexed by bitmask.
    pub(crate) fn semistable_table(&self) -> Result<Vec<bool>> {
        self.check_enumerable()?;
        (0u64..1 << self.len())
            .into_par_iter()
            .map(|mask| is_ss_support(self, &Support::from_mask(mask)))
            .collect()
    }

    /// All semistable supports, shortest first then lexicographic.
    pub fn semistable_supports(&self) -> Result<Vec<Support>> {
        let table = self.semistable_table()?;
        let mut out: Vec<Support> = table
            .iter()
            .enumerate()
            .filter(|(_, &ss)| ss)
            .map(|(mask, _)| Support::from_mask(mask as u64))
            .collect();
        out.sort_by(Support::canonical_cmp);
        Ok(out)
    }
}

/// A sorted set of weight indices. Stored zero-based; displayed and
/// serialized one-based to match the usual `{1,2,3}` notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Support(indices)
    }

    pub fn empty() -> Self {
        Support(Vec::new())
    }

    /// From one-based indices; index 0 is rejected.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Parse("support indices are one-based".into()));
        }
        Ok(Support::new(indices.iter().map(|i| i - 1).collect()))
    }

    pub fn from_mask(mask: u64) -> Self {
        Support((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Shortest first, then lexicographic.
    pub fn canonical_cmp(a: &Support, b: &Support) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Support {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Support {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        Support::from_one_based(&raw).map_err(serde::de::Error::custom)
    }
}

/// `ν ∈ cone{μ_i : i ∈ I}`.
pub fn is_ss_support(ws: &WeightSystem, support: &Support) -> Result<bool> {
    ws.check_support(support)?;
    Ok(ratlin::cone_member(&ws.vectors_of(support), ws.nu())?.member)
}

/// The inclusion-maximal unstable supports, in lexicographic order.
///
/// Their coordinate subspaces are the irreducible components of the
/// unstable locus. Empty when every support (including `∅`) is semistable,
/// which happens only for `ν = 0`.
pub fn max_unstable_supports(ws: &WeightSystem) -> Result<Vec<Support>> {
    let table = ws.semistable_table()?;
    let k = ws.len();
    let mut out: Vec<Support> = (0u64..1 << k)
        .filter(|&mask| {
            !table[mask as usize]
                && (0..k).all(|j| mask >> j & 1 == 1 || table[(mask | 1 << j) as usize])
        })
        .map(Support::from_mask)
        .collect();
    out.sort();
    Ok(out)
}

/// Whether `ν` avoids every wall, i.e. every semistable support spans the
/// full character lattice. Then all stabilizers of semistable points are
/// finite and the quotient is locally free.
pub fn stable_eq_ss(ws: &WeightSystem) -> Result<bool> {
    Ok(first_wall_support(ws)?.is_none())
}

/// A semistable support of deficient rank, if one exists.
pub(crate) fn first_wall_support(ws: &WeightSystem) -> Result<Option<Support>> {
    let table = ws.semistable_table()?;
    let k = ws.len();
    // Checking the inclusion-minimal semistable supports suffices.
    for mask in 0u64..1 << k {
        if !table[mask as usize] {
            continue;
        }
        let minimal = (0..k)
            .filter(|j| mask >> j & 1 == 1)
            .all(|j| !table[(mask & !(1 << j)) as usize]);
        if minimal {
            let s = Support::from_mask(mask);
            if ws.support_rank(&s) < ws.rank() {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// Weights contained in an open half-space.
pub fn is_proper(ws: &WeightSystem) -> Result<bool> {
    let vs: Vec<RationalVector> = (0..ws.len()).map(|i| ws.weight_vector(i).clone()).collect();
    Ok(ratlin::open_halfspace_witness(&vs, ws.rank())?.is_some())
}

/// The family of semistable supports, which is constant exactly on a
/// chamber. Two polarizations lie in the same chamber iff their signatures
/// agree.
pub fn chamber_signature(ws: &WeightSystem) -> Result<Vec<Support>> {
    if let Some(s) = first_wall_support(ws)? {
        return Err(Error::Wall(format!(
            "ν = {} lies in the cone of {s}, which spans a proper subspace",
            ws.nu()
        )));
    }
    ws.semistable_supports()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub support: Support,
    /// `|det|` of the square weight submatrix: the order of the stabilizer.
    pub isotropy: u64,
    /// Number of torus-fixed points with this support, `Π m_i`.
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub nonempty: bool,
    /// `Σ m_i − r` when the quotient is nonempty and locally free.
    pub dimension: Option<i64>,
    pub proper: bool,
    pub stable_eq_ss: bool,
    pub fixed_points: Vec<FixedPoint>,
    pub fixed_point_count: u64,
    /// Order of the finite kernel of the full weight matrix, if finite.
    pub generic_isotropy: Option<u64>,
    /// For `r = 1` with positive weights and `ν > 0`, the weights of the
    /// weighted projective space, with multiplicity and sorted.
    pub weighted_projective: Option<Vec<i64>>,
}

fn to_u64(x: &BigInt) -> u64 {
    x.abs().to_u64().unwrap_or(u64::MAX)
}

pub fn quotient_report(ws: &WeightSystem) -> Result<QuotientReport> {
    let table = ws.semistable_table()?;
    let k = ws.len();
    let r = ws.rank();
    let nonempty = table[(1u64 << k) as usize - 1];
    let locally_free = stable_eq_ss(ws)?;
    let proper = is_proper(ws)?;

    let dimension = (nonempty && locally_free).then(|| ws.total_multiplicity() as i64 - r as i64);

    let mut fixed_points: Vec<FixedPoint> = (0u64..1 << k)
        .filter(|&mask| mask.count_ones() as usize == r && table[mask as usize])
        .filter_map(|mask| {
            let s = Support::from_mask(mask);
            let det = ws.weight_matrix(&s).determinant();
            (!det.is_zero()).then(|| FixedPoint {
                count: s.indices().iter().map(|&i| ws.multiplicities()[i]).product(),
                isotropy: to_u64(&det),
                support: s,
            })
        })
        .collect();
    fixed_points.sort_by(|a, b| a.support.cmp(&b.support));
    let fixed_point_count = fixed_points.iter().map(|f| f.count).sum();

    let full = ratlin::snf(&ws.weight_matrix(&ws.full_support()));
    let generic_isotropy = (full.rank() == r).then(|| to_u64(&full.torsion_order()));

    let weighted_projective = (r == 1
        && ws.weights().iter().all(|w| w[0] > 0)
        && ws.nu()[0].is_positive())
    .then(|| {
        let mut out: Vec<i64> = ws
            .weights()
            .iter()
            .zip(ws.multiplicities())
            .flat_map(|(w, &m)| std::iter::repeat_n(w[0], m as usize))
            .collect();
        out.sort_unstable();
        out
    });

    Ok(QuotientReport {
        nonempty,
        dimension,
        proper,
        stable_eq_ss: locally_free,
        fixed_points,
        fixed_point_count,
        generic_isotropy,
        weighted_projective,
    })
}
