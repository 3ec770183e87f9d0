use num::{One, Signed, Zero};

use super::simplex::{solve_lp, LpOutcome};
use super::{Rational, RationalVector};
use crate::error::Result;

/// Outcome of a cone membership test, always carrying a checkable witness.
///
/// Members come with nonnegative coefficients reproducing the target;
/// non-members come with a Farkas certificate `λ` such that every generator
/// pairs non-positively with `λ` while the target pairs strictly positively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecision {
    pub member: bool,
    pub coefficients: Option<Vec<Rational>>,
    pub certificate: Option<RationalVector>,
}

impl ConeDecision {
    /// Re-checks the witness by substitution.
    pub fn verify(&self, generators: &[RationalVector], target: &RationalVector) -> bool {
        match (self.member, &self.coefficients, &self.certificate) {
            (true, Some(c), None) => {
                if c.len() != generators.len() || c.iter().any(Signed::is_negative) {
                    return false;
                }
                let mut sum = RationalVector::zeros(target.len());
                for (ci, g) in c.iter().zip(generators) {
                    sum = sum.add(&g.scale(ci));
                }
                &sum == target
            }
            (false, None, Some(l)) => {
                generators.iter().all(|g| !g.dot(l).is_positive()) && target.dot(l).is_positive()
            }
            _ => false,
        }
    }
}

fn check_dims(generators: &[RationalVector], target: &RationalVector) -> Result<()> {
    for g in generators {
        g.check_len(target.len())?;
    }
    Ok(())
}

fn integral_direction(v: &[Rational]) -> RationalVector {
    RationalVector::new(v.to_vec())
        .primitive_integer()
        .into_iter()
        .map(Rational::from_integer)
        .collect::<Vec<_>>()
        .into()
}

/// Decides `target ∈ { Σ c_i g_i : c_i >= 0 }` exactly.
///
/// The primal system and its Farkas alternative are solved independently;
/// exactly one of them is feasible.
pub fn cone_member(generators: &[RationalVector], target: &RationalVector) -> Result<ConeDecision> {
    check_dims(generators, target)?;
    let r = target.len();
    let k = generators.len();

    // Primal: G c = target, c >= 0.
    let a: Vec<Vec<Rational>> = (0..r)
        .map(|row| generators.iter().map(|g| g[row].clone()).collect())
        .collect();
    let zero_cost = vec![Rational::zero(); k];
    if let LpOutcome::Optimal { x, .. } = solve_lp(&a, target.entries(), &zero_cost) {
        return Ok(ConeDecision {
            member: true,
            coefficients: Some(x),
            certificate: None,
        });
    }

    // Alternative: <g_i, λ> + s_i = 0, <target, λ> = 1 with λ = λ⁺ - λ⁻.
    let ncols = 2 * r + k;
    let mut rows = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for (i, g) in generators.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for j in 0..r {
            row[j] = g[j].clone();
            row[r + j] = -g[j].clone();
        }
        row[2 * r + i] = Rational::one();
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut last = vec![Rational::zero(); ncols];
    for j in 0..r {
        last[j] = target[j].clone();
        last[r + j] = -target[j].clone();
    }
    rows.push(last);
    rhs.push(Rational::one());
    match solve_lp(&rows, &rhs, &vec![Rational::zero(); ncols]) {
        LpOutcome::Optimal { x, .. } => {
            let lambda: Vec<Rational> = (0..r).map(|j| &x[j] - &x[r + j]).collect();
            Ok(ConeDecision {
                member: false,
                coefficients: None,
                certificate: Some(integral_direction(&lambda)),
            })
        }
        // Farkas' lemma: the primal and the alternative cannot both fail.
        other => unreachable!("both Farkas alternatives infeasible ({other:?})"),
    }
}

/// Rank of a list of vectors over the rationals.
pub fn rank(vectors: &[RationalVector]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v -= &f * pv;
            }
        }
        rank += 1;
    }
    rank
}

/// Literal linear-span membership, the counterpart of [`cone_member`].
pub fn span_member(generators: &[RationalVector], target: &RationalVector) -> Result<bool> {
    check_dims(generators, target)?;
    let mut with = generators.to_vec();
    with.push(target.clone());
    Ok(rank(generators) == rank(&with))
}

/// Finds `η` with `<v, η> > 0` for every `v`, or `None` if the vectors do
/// not lie in an open half-space. `ambient` is the common vector length.
pub fn open_halfspace_witness(
    vectors: &[RationalVector],
    ambient: usize,
) -> Result<Option<RationalVector>> {
    for v in vectors {
        v.check_len(ambient)?;
    }
    let k = vectors.len();
    let r = ambient;
    // <v_i, η⁺ - η⁻> - s_i = 1
    let ncols = 2 * r + k;
    let rows: Vec<Vec<Rational>> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut row = vec![Rational::zero(); ncols];
            for j in 0..r {
                row[j] = v[j].clone();
                row[r + j] = -v[j].clone();
            }
            row[2 * r + i] = -Rational::one();
            row
        })
        .collect();
    let rhs = vec![Rational::one(); k];
    match solve_lp(&rows, &rhs, &vec![Rational::zero(); ncols]) {
        LpOutcome::Optimal { x, .. } => {
            let eta: Vec<Rational> = (0..r).map(|j| &x[j] - &x[r + j]).collect();
            Ok(Some(integral_direction(&eta)))
        }
        _ => Ok(None),
    }
}
