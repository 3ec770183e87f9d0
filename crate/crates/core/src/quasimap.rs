//! Quasimap spaces and affine gauged maps.
//!
//! For a genus-zero curve and a bundle of degree `d`, sections of
//! `P ×_G X` form the representation `X(d) = ⊕_j X_j^{max(0, <d,μ_j>+1)}`;
//! for large area the gauged map moduli are `X(d) ⫽ G`. On the affine line
//! a class `d` may be fractional: the `j`-th coordinate is a polynomial of
//! degree at most `<d,μ_j>` and only integral pairings contribute leading
//! coefficients that must be semistable at infinity.

use std::fmt;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gitq::{self, QuotientReport, Support, WeightSystem};
use crate::inertia::TorsionElement;
use crate::ratlin::{self, floor_i64, Rational, RationalVector};

/// An equivariant curve class, paired rationally with the weights.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub RationalVector);

impl DegreeVector {
    pub fn new(entries: RationalVector) -> Self {
        DegreeVector(entries)
    }

    pub fn zero(rank: usize) -> Self {
        DegreeVector(RationalVector::zeros(rank))
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DegreeVector(RationalVector::from_ints(v))
    }

    pub fn parse(s: &str) -> Result<Self> {
        RationalVector::parse_list(s).map(DegreeVector)
    }

    pub fn vector(&self) -> &RationalVector {
        &self.0
    }

    pub fn pairing(&self, mu: &[i64]) -> Rational {
        self.0.dot_int(mu)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", ratlin::format_rational(&self.0[0]))
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `X(d)` as a weight system: same rank and `ν`, each weight's multiplicity
/// scaled by `max(0, <d,μ_j> + 1)`, zero factors dropped.
pub fn quasimap_problem(ws: &WeightSystem, d: &DegreeVector) -> Result<WeightSystem> {
    d.0.check_len(ws.rank())?;
    if !d.0.is_integral() {
        return Err(Error::NonIntegralDegree(d.to_string()));
    }
    let mut weights = Vec::new();
    let mut mults = Vec::new();
    let mut labels = Vec::new();
    for j in 0..ws.len() {
        let pairing = d.pairing(ws.weight(j));
        let factor = (pairing.to_integer() + BigInt::from(1)).max(BigInt::zero());
        let m = (factor * BigInt::from(ws.multiplicities()[j]))
            .to_u64()
            .ok_or_else(|| Error::Unsupported(format!("multiplicity overflow at degree {d}")))?;
        if m == 0 {
            continue;
        }
        weights.push(ws.weight(j).to_vec());
        mults.push(m);
        if let Some(l) = ws.labels() {
            labels.push(l[j].clone());
        }
    }
    if weights.is_empty() {
        return Err(Error::EmptySectionSpace(d.to_string()));
    }
    let out = WeightSystem::new(ws.rank(), weights, mults, ws.nu().clone())?;
    match ws.labels() {
        Some(_) => out.with_labels(labels),
        None => Ok(out),
    }
}

/// The quotient `X(d) ⫽ G`.
pub fn quasimap_report(ws: &WeightSystem, d: &DegreeVector) -> Result<QuotientReport> {
    gitq::quotient_report(&quasimap_problem(ws, d)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub degree: DegreeVector,
    pub dimension: i64,
    /// `#{e ∈ ℤ : 0 <= e <= <d,μ_j>}` per weight.
    pub monomial_counts: Vec<u64>,
    /// `J(d) = { j : <d,μ_j> ∈ ℤ_{>=0} }`, the coordinates with a leading
    /// coefficient.
    pub leading_support: Support,
    /// Order of the finite kernel of the weights on `J(d)`.
    pub stabilizer_order: u64,
    /// The twisted sector at infinity, `d mod ℤ^r`.
    pub sector: TorsionElement,
}

fn leading_support(ws: &WeightSystem, d: &DegreeVector) -> Support {
    Support::new(
        (0..ws.len())
            .filter(|&j| {
                let p = d.pairing(ws.weight(j));
                p.is_integer() && !p.is_negative()
            })
            .collect(),
    )
}

/// Whether some affine gauged map of class `d` is semistable at infinity.
pub fn is_effective_affine(ws: &WeightSystem, d: &DegreeVector) -> Result<bool> {
    d.0.check_len(ws.rank())?;
    gitq::is_ss_support(ws, &leading_support(ws, d))
}

/// Dimension, generic stabilizer and sector at infinity of the affine gauged
/// maps of class `d` with one marking.
pub fn affine_report(ws: &WeightSystem, d: &DegreeVector) -> Result<AffineReport> {
    d.0.check_len(ws.rank())?;
    if let Some(s) = gitq::first_wall_support(ws)? {
        return Err(Error::Wall(format!("semistable support {s} has deficient rank")));
    }
    let leading = leading_support(ws, d);
    if !gitq::is_ss_support(ws, &leading)? {
        return Err(Error::InvalidDegree(d.to_string()));
    }
    let monomial_counts: Vec<u64> = (0..ws.len())
        .map(|j| {
            let p = d.pairing(ws.weight(j));
            if p.is_negative() {
                0
            } else {
                floor_i64(&p).map_or(u64::MAX, |f| f as u64 + 1)
            }
        })
        .collect();
    let coords: u64 = monomial_counts
        .iter()
        .zip(ws.multiplicities())
        .map(|(c, m)| c * m)
        .sum();
    let snf = ratlin::snf(&ws.weight_matrix(&leading));
    let stabilizer_order = snf.torsion_order().to_u64().unwrap_or(u64::MAX);
    Ok(AffineReport {
        degree: d.clone(),
        dimension: coords as i64 - ws.rank() as i64,
        monomial_counts,
        leading_support: leading,
        stabilizer_order,
        sector: TorsionElement::new(&d.0)?,
    })
}

/// Effective affine degrees `0 <= d <= bound` for a rank-one torus, in
/// increasing order. A valid `d` makes some pairing `d·μ_j` integral, so
/// its denominator divides the lcm of the weights.
pub fn effective_affine_degrees(ws: &WeightSystem, bound: &Rational) -> Result<Vec<DegreeVector>> {
    if ws.rank() != 1 {
        return Err(Error::Unsupported(
            "degree sweeps need a rank-one torus".into(),
        ));
    }
    if bound.is_negative() {
        return Err(Error::Unsupported(format!(
            "sweep bound {} is negative",
            ratlin::format_rational(bound)
        )));
    }
    let lcm = ws
        .weights()
        .iter()
        .filter(|w| w[0] != 0)
        .fold(BigInt::from(1), |acc, w| acc.lcm(&BigInt::from(w[0])));
    let steps = (bound * Rational::from_integer(lcm.clone())).floor().to_integer();
    let steps = steps
        .to_u64()
        .ok_or_else(|| Error::Unsupported("sweep too long".into()))?;
    let mut out = Vec::new();
    for j in 0..=steps {
        let d = DegreeVector(RationalVector::new(vec![Rational::new(
            BigInt::from(j),
            lcm.clone(),
        )]));
        if is_effective_affine(ws, &d)? {
            out.push(d);
        }
    }
    Ok(out)
}
