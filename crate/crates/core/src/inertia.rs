//! Twisted sectors of the inertia stack of a locally free toric quotient.
//!
//! A torus element of finite order is written `g = exp(2πi q)` with
//! `q ∈ ℚ^r / ℤ^r`; it acts on `X_i` by `exp(2πi <μ_i, q>)` and fixes the
//! coordinate subspace `X_{I(g)}` where `I(g) = { i : <μ_i, q> ∈ ℤ }`. The
//! sector of `g` is `X_{I(g)} ⫽ G`, kept when nonempty.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gitq::{self, Support, WeightSystem};
use crate::ratlin::{self, Rational, RationalVector};

pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// A finite-order torus element, stored as its reduced logarithm.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionElement {
    representative: RationalVector,
    order: u64,
}

impl TorsionElement {
    /// Reduces `q` into `[0,1)^r`. Fails only if the order overflows `u64`.
    pub fn new(q: &RationalVector) -> Result<Self> {
        let representative = q.fract();
        let order = representative
            .denominator_lcm()
            .to_u64()
            .ok_or_else(|| Error::Unsupported(format!("order of {q} exceeds u64")))?;
        Ok(TorsionElement {
            representative,
            order,
        })
    }

    pub fn identity(rank: usize) -> Self {
        TorsionElement {
            representative: RationalVector::zeros(rank),
            order: 1,
        }
    }

    pub fn representative(&self) -> &RationalVector {
        &self.representative
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn inverse(&self) -> Self {
        TorsionElement::new(&self.representative.neg()).expect("same order as self")
    }

    /// Whether `g` acts trivially on a weight space of weight `mu`.
    pub fn fixes(&self, mu: &[i64]) -> bool {
        self.representative.dot_int(mu).is_integer()
    }
}

impl Ord for TorsionElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.representative.cmp(&other.representative))
    }
}

impl PartialOrd for TorsionElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}[order {}]", self.representative, self.order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sector {
    pub element: TorsionElement,
    pub support: Support,
    pub dimension: i64,
    /// Order of `⟨g⟩`, the factor removed by rigidification.
    pub element_order: u64,
    /// Number of toric divisors `D_{i,g}`, counted with multiplicity.
    pub divisor_count: u64,
}

/// `I(g) = { i : <μ_i, q> ∈ ℤ }`.
pub fn sector_support(ws: &WeightSystem, g: &TorsionElement) -> Result<Support> {
    g.representative.check_len(ws.rank())?;
    Ok(Support::new(
        (0..ws.len()).filter(|&i| g.fixes(ws.weight(i))).collect(),
    ))
}

fn ensure_finite_inertia(ws: &WeightSystem) -> Result<()> {
    if let Some(s) = gitq::first_wall_support(ws)? {
        return Err(Error::InfiniteInertia {
            rank: ws.support_rank(&s),
            support: s.to_string(),
            expected: ws.rank(),
        });
    }
    Ok(())
}

/// Every `q mod ℤ^r` with `A_I q ∈ ℤ^{|I|}` for some inclusion-minimal
/// semistable support `I`, identity included, sorted by `(order, q)`.
///
/// Kernels of larger supports are subgroups of those of smaller ones, so
/// minimal supports already produce the whole union.
pub fn torsion_candidates(ws: &WeightSystem, order_cap: u64) -> Result<Vec<TorsionElement>> {
    ensure_finite_inertia(ws)?;
    let table = ws.semistable_table()?;
    let k = ws.len();
    let r = ws.rank();

    let minimal: Vec<Support> = (0u64..1 << k)
        .filter(|&mask| {
            table[mask as usize]
                && (0..k)
                    .filter(|j| mask >> j & 1 == 1)
                    .all(|j| !table[(mask & !(1 << j)) as usize])
        })
        .map(Support::from_mask)
        .collect();

    let decompositions: Vec<_> = minimal
        .iter()
        .map(|s| ratlin::snf(&ws.weight_matrix(s)))
        .collect();
    let total: BigInt = decompositions
        .iter()
        .fold(BigInt::zero(), |acc, d| acc + d.torsion_order());
    if total > BigInt::from(order_cap) {
        return Err(Error::GroupTooLarge {
            size: total.to_u128().unwrap_or(u128::MAX),
            cap: order_cap,
        });
    }

    let mut found = BTreeSet::new();
    found.insert(TorsionElement::identity(r));
    for snf in &decompositions {
        // full rank is guaranteed by ensure_finite_inertia
        let factors: Vec<BigInt> = snf.diagonal[..r].to_vec();
        let mut digits = vec![BigInt::zero(); r];
        loop {
            // q = R · (a_j / d_j)
            let qprime: Vec<Rational> = digits
                .iter()
                .zip(&factors)
                .map(|(a, d)| Rational::new(a.clone(), d.clone()))
                .collect();
            let q: Vec<Rational> = (0..r)
                .map(|i| {
                    (0..r).fold(Rational::zero(), |acc, j| {
                        acc + Rational::from_integer(snf.right_unimodular[(i, j)].clone()) * &qprime[j]
                    })
                })
                .collect();
            found.insert(TorsionElement::new(&RationalVector::new(q))?);

            // mixed-radix increment
            let mut pos = 0;
            loop {
                if pos == r {
                    break;
                }
                digits[pos] += BigInt::one();
                if digits[pos] < factors[pos] {
                    break;
                }
                digits[pos] = BigInt::zero();
                pos += 1;
            }
            if pos == r {
                break;
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// One sector per candidate element whose fixed subspace meets the
/// semistable locus, sorted by `(order, representative)`.
pub fn inertia_sectors(ws: &WeightSystem, order_cap: u64) -> Result<Vec<Sector>> {
    let mut out = Vec::new();
    for g in torsion_candidates(ws, order_cap)? {
        let support = sector_support(ws, &g)?;
        if !gitq::is_ss_support(ws, &support)? {
            continue;
        }
        let divisor_count = ws.support_multiplicity(&support);
        out.push(Sector {
            element_order: g.order(),
            dimension: divisor_count as i64 - ws.rank() as i64,
            divisor_count,
            support,
            element: g,
        });
    }
    Ok(out)
}

/// Orders of the nontrivial stabilizers, useful to sanity check sectors.
pub fn isotropy_orders(ws: &WeightSystem) -> Result<BTreeSet<u64>> {
    let rep = gitq::quotient_report(ws)?;
    Ok(rep
        .fixed_points
        .iter()
        .map(|f| f.isotropy)
        .filter(|&o| o > 1)
        .collect())
}

/// lcm of all element orders; every sector's order divides it.
pub fn exponent(sectors: &[Sector]) -> u64 {
    sectors.iter().fold(1u64, |acc, s| acc.lcm(&s.element_order))
}
