//! Abelian Mundet stability for gauged maps from a projective curve.
//!
//! For a torus there are no parabolic reductions, so a destabilizing datum
//! is a single one-parameter subgroup `λ`. A gauged map whose section has
//! support `S` admits `λ` when `<μ_i, λ> >= 0` for `i ∈ S` (the λ-limit of
//! the section exists) and the weight of the pair is
//!
//! ```text
//! w(λ) = −<d, λ> − ρ·area·<ν, λ>
//! ```
//!
//! The map is ρ-semistable iff no admissible `λ` has `w(λ) > 0`. By Farkas
//! duality that is cone membership of `d + ρ·area·ν` in `cone{μ_i : i ∈ S}`,
//! which is how [`is_gauged_semistable`] decides it.

use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gitq::{self, Support, WeightSystem};
use crate::quasimap::DegreeVector;
use crate::ratlin::{self, solve_lp, LpOutcome, Rational, RationalVector};

/// A cocharacter `λ ∈ ℤ^r`, kept primitive. `λ` and `−λ` are different
/// destabilizers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OneParamSubgroup(Vec<i64>);

impl OneParamSubgroup {
    /// Divides out the gcd of the entries.
    pub fn new(lambda: Vec<i64>) -> Self {
        let g = lambda.iter().fold(0i64, |acc, &x| num::integer::gcd(acc, x));
        if g == 0 {
            return OneParamSubgroup(lambda);
        }
        OneParamSubgroup(lambda.into_iter().map(|x| x / g).collect())
    }

    fn from_bigints(v: &[BigInt]) -> Result<Self> {
        v.iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::Unsupported("cocharacter entry overflows i64".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn pairing(&self, v: &RationalVector) -> Rational {
        v.dot_int(&self.0)
    }
}

impl fmt::Debug for OneParamSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{:?}", self.0)
    }
}

/// A gauged-map stability problem: weights, bundle degree `d = c₁(P)`, the
/// coupling `ρ` and the area of the curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MundetProblem {
    ws: WeightSystem,
    degree: DegreeVector,
    rho: Rational,
    area: Rational,
}

impl MundetProblem {
    pub fn new(ws: WeightSystem, degree: DegreeVector, rho: Rational, area: Rational) -> Result<Self> {
        degree.vector().check_len(ws.rank())?;
        if !rho.is_positive() {
            return Err(Error::Unsupported(format!(
                "ρ must be positive, got {}",
                ratlin::format_rational(&rho)
            )));
        }
        if !area.is_positive() {
            return Err(Error::Unsupported(format!(
                "area must be positive, got {}",
                ratlin::format_rational(&area)
            )));
        }
        Ok(MundetProblem {
            ws,
            degree,
            rho,
            area,
        })
    }

    /// Unit area.
    pub fn with_unit_area(ws: WeightSystem, degree: DegreeVector, rho: Rational) -> Result<Self> {
        Self::new(ws, degree, rho, Rational::one())
    }

    pub fn weight_system(&self) -> &WeightSystem {
        &self.ws
    }

    pub fn degree(&self) -> &DegreeVector {
        &self.degree
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn area(&self) -> &Rational {
        &self.area
    }

    /// `d + ρ·area·ν`, the vector whose cone membership decides stability.
    pub fn effective_polarization(&self) -> RationalVector {
        let t = &self.rho * &self.area;
        self.degree.vector().add(&self.ws.nu().scale(&t))
    }
}

/// A one-parameter subgroup with `<μ_i, λ> >= 0` on `S` and `<ν, λ> < 0`,
/// or `None` exactly when `S` is semistable.
pub fn destab_certificate(ws: &WeightSystem, support: &Support) -> Result<Option<OneParamSubgroup>> {
    ws.check_support(support)?;
    let gens: Vec<RationalVector> = support
        .indices()
        .iter()
        .map(|&i| ws.weight_vector(i).clone())
        .collect();
    let decision = ratlin::cone_member(&gens, ws.nu())?;
    match decision.certificate {
        None => Ok(None),
        Some(cert) => OneParamSubgroup::from_bigints(&cert.neg().primitive_integer()).map(Some),
    }
}

fn check_admissible(ws: &WeightSystem, support: &Support, lambda: &OneParamSubgroup) -> Result<()> {
    if lambda.entries().len() != ws.rank() {
        return Err(Error::DimensionMismatch {
            expected: ws.rank(),
            found: lambda.entries().len(),
        });
    }
    for &i in support.indices() {
        if lambda.pairing(ws.weight_vector(i)).is_negative() {
            return Err(Error::Inadmissible {
                lambda: format!("{:?}", lambda.entries()),
                index: i + 1,
            });
        }
    }
    Ok(())
}

/// `w = −<d,λ> − ρ·area·<ν,λ>` for an admissible `λ`.
pub fn gauged_weight(mp: &MundetProblem, support: &Support, lambda: &OneParamSubgroup) -> Result<Rational> {
    mp.ws.check_support(support)?;
    check_admissible(&mp.ws, support, lambda)?;
    let d_term = lambda.pairing(mp.degree.vector());
    let nu_term = lambda.pairing(mp.ws.nu());
    Ok(-d_term - &mp.rho * &mp.area * nu_term)
}

pub fn is_gauged_semistable(mp: &MundetProblem, support: &Support) -> Result<bool> {
    mp.ws.check_support(support)?;
    let gens: Vec<RationalVector> = support
        .indices()
        .iter()
        .map(|&i| mp.ws.weight_vector(i).clone())
        .collect();
    Ok(ratlin::cone_member(&gens, &mp.effective_polarization())?.member)
}

/// A destabilizing `λ` at the given `ρ`, if any.
pub fn gauged_destabilizer(mp: &MundetProblem, support: &Support) -> Result<Option<OneParamSubgroup>> {
    mp.ws.check_support(support)?;
    let gens: Vec<RationalVector> = support
        .indices()
        .iter()
        .map(|&i| mp.ws.weight_vector(i).clone())
        .collect();
    match ratlin::cone_member(&gens, &mp.effective_polarization())?.certificate {
        None => Ok(None),
        Some(cert) => OneParamSubgroup::from_bigints(&cert.neg().primitive_integer()).map(Some),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoThreshold {
    /// Least `ρ₀ >= 0` beyond which gauged and GIT semistability agree.
    #[serde(with = "ratlin::rational_string")]
    pub value: Rational,
    /// A support whose verdict still changes at `ρ₀`, if `ρ₀ > 0`.
    pub attained_by: Option<Support>,
    #[serde(with = "ratlin::rational_string")]
    pub area: Rational,
}

/// The least `ρ₀` such that for every `ρ > ρ₀` and every support,
/// [`is_gauged_semistable`] agrees with [`gitq::is_ss_support`].
///
/// For each support the set of `ρ >= 0` with `d + ρ·area·ν` in the weight
/// cone is an interval. A semistable support contains all large `ρ`, so it
/// contributes the left end; an unstable one contributes its right end.
/// Both ends are found by exact linear programs in `(c, ρ)`.
pub fn rho_threshold(ws: &WeightSystem, d: &DegreeVector, area: &Rational) -> Result<RhoThreshold> {
    d.vector().check_len(ws.rank())?;
    if !area.is_positive() {
        return Err(Error::Unsupported("area must be positive".into()));
    }
    if let Some(s) = gitq::first_wall_support(ws)? {
        return Err(Error::Wall(format!(
            "ν lies in the deficient cone of {s}; no threshold separates the verdicts"
        )));
    }
    let table = ws.semistable_table()?;
    let r = ws.rank();
    let scaled_nu = ws.nu().scale(area);

    let mut best = Rational::zero();
    let mut attained_by = None;
    for (mask, &semistable) in table.iter().enumerate() {
        let support = Support::from_mask(mask as u64);
        let k = support.len();
        // Σ c_i μ_i − ρ·area·ν = d
        let a: Vec<Vec<Rational>> = (0..r)
            .map(|row| {
                let mut v: Vec<Rational> = support
                    .indices()
                    .iter()
                    .map(|&i| ws.weight_vector(i)[row].clone())
                    .collect();
                v.push(-scaled_nu[row].clone());
                v
            })
            .collect();
        let mut cost = vec![Rational::zero(); k + 1];
        cost[k] = if semistable { Rational::one() } else { -Rational::one() };
        let end = match solve_lp(&a, d.vector().entries(), &cost) {
            LpOutcome::Optimal { x, .. } => x[k].clone(),
            LpOutcome::Infeasible if !semistable => continue,
            LpOutcome::Infeasible => {
                return Err(Error::Wall(format!(
                    "semistable support {support} is never gauged semistable"
                )))
            }
            LpOutcome::Unbounded => {
                return Err(Error::Wall(format!(
                    "unstable support {support} stays gauged semistable for all ρ"
                )))
            }
        };
        if end > best {
            best = end;
            attained_by = Some(support);
        }
    }
    Ok(RhoThreshold {
        value: best,
        attained_by,
        area: area.clone(),
    })
}
