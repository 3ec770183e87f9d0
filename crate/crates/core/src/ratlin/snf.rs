use num::{BigInt, Integer, One, Signed, Zero};

use super::IntegerMatrix;

/// `left · A · right = diag(invariant_factors)` with unimodular `left` and
/// `right`. The diagonal has `min(rows, cols)` entries, each dividing the
/// next; trailing zeros record rank deficiency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub left_unimodular: IntegerMatrix,
    pub diagonal: Vec<BigInt>,
    pub right_unimodular: IntegerMatrix,
}

impl SnfDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Product of the nonzero invariant factors.
    pub fn torsion_order(&self) -> BigInt {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero())
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Checks `left · A · right` against the diagonal and the divisibility chain.
    pub fn verify(&self, a: &IntegerMatrix) -> bool {
        if !self.left_unimodular.is_unimodular() || !self.right_unimodular.is_unimodular() {
            return false;
        }
        let d = self.left_unimodular.mul(a).mul(&self.right_unimodular);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j {
                    self.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                if d[(i, j)] != expected {
                    return false;
                }
            }
        }
        let chain_ok = self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        chain_ok && self.diagonal.iter().all(|x| !x.is_negative())
    }
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `(t, t)`.
fn smallest_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if a[b].abs() <= a[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn snf(a: &IntegerMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntegerMatrix::identity(m);
    let mut right = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut dirty = false;

            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    // remainder is smaller than the pivot: make it the pivot
                    d.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility of the block.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let diagonal = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SnfDecomposition {
        left_unimodular: left,
        diagonal,
        right_unimodular: right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[&[i64]], cols: usize) -> Vec<i64> {
        let a = IntegerMatrix::from_rows(rows, cols).unwrap();
        let s = snf(&a);
        assert!(s.verify(&a), "invalid decomposition for {a:?}: {s:?}");
        s.diagonal.iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn identity_and_scalar() {
        assert_eq!(factors(&[&[1, 0], &[0, 1]], 2), vec![1, 1]);
        assert_eq!(factors(&[&[3]], 1), vec![3]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        // diag(2,3): product 6, chain 1 | 6
        assert_eq!(factors(&[&[2, 0], &[0, 3]], 2), vec![1, 6]);
    }

    #[test]
    fn rectangular_and_deficient() {
        assert_eq!(factors(&[&[2], &[3]], 1), vec![1]);
        assert_eq!(factors(&[&[2, 4], &[1, 2]], 2), vec![1, 0]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]], 2), vec![0, 0]);
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]], 3), vec![2, 6, 12]);
    }

    #[test]
    fn empty_matrix() {
        let a = IntegerMatrix::zeros(0, 2);
        let s = snf(&a);
        assert!(s.diagonal.is_empty());
        assert_eq!(s.rank(), 0);
    }
}
