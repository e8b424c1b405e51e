//! Fraction-free Gaussian elimination over an exact field.
//!
//! Rows are first scaled to integral entries, then reduced with Bareiss'
//! one-step division. Pivots are taken in column order, always from the
//! lowest-indexed remaining row with a nonzero entry, so results are
//! reproducible for a given row and column order.


use crate::scalar::Scalar;

/// Upper echelon form of a matrix.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
    /// Original index of each row in `rows`.
    pub origin: Vec<usize>,
}

impl<F> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn integral<F: Scalar>(row: &mut [F]) {
    let d = F::common_denominator(row.iter());
    if !d.is_one() {
        for x in row.iter_mut() {
            *x = x.mul_ref(&d);
        }
    }
}

/// Reduces `rows` (each of length `ncols`) to upper echelon form.
pub fn echelon<F: Scalar>(mut rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    for r in rows.iter_mut() {
        debug_assert_eq!(r.len(), ncols);
        integral(r);
    }
    let mut origin: Vec<usize> = (0..rows.len()).collect();
    let mut pivots = Vec::new();
    let mut prev = F::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        origin.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let piv = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in (col + 1)..ncols {
                let v = piv.mul_ref(&row[j]) - factor.mul_ref(&pivot_row[j]);
                row[j] = v / prev.clone();
            }
            row[col] = F::zero();
        }
        prev = piv;
        pivots.push(col);
        rank += 1;
    }
    Echelon { rows, pivots, origin }
}

pub fn rank<F: Scalar>(rows: Vec<Vec<F>>, ncols: usize) -> usize {
    echelon(rows, ncols).rank()
}

/// Outcome of solving `A·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    Underdetermined { nullity: usize },
    /// Original indices of rows that reduce to `0 = nonzero`.
    Inconsistent { rows: Vec<usize> },
}

/// Rank of `A` together with the outcome of solving `A·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<F> {
    pub rank: usize,
    pub solution: Solution<F>,
}

/// Solves `A·x = b` exactly; rows are given as `(coefficients, rhs)`.
pub fn solve<F: Scalar>(rows: Vec<(Vec<F>, F)>, ncols: usize) -> SolveReport<F> {
    let aug: Vec<Vec<F>> = rows
        .into_iter()
        .map(|(mut a, b)| {
            a.push(b);
            a
        })
        .collect();
    let ech = echelon(aug, ncols + 1);
    let rank_a = ech.pivots.iter().filter(|&&c| c < ncols).count();
    if ech.pivots.last() == Some(&ncols) {
        // The augmented column carries a pivot: report every row of the form 0 = c.
        let bad: Vec<usize> = ech
            .rows
            .iter()
            .zip(&ech.origin)
            .skip(rank_a)
            .filter(|(r, _)| !r[ncols].is_zero())
            .map(|(_, &o)| o)
            .collect();
        return SolveReport {
            rank: rank_a,
            solution: Solution::Inconsistent { rows: bad },
        };
    }
    if rank_a < ncols {
        return SolveReport {
            rank: rank_a,
            solution: Solution::Underdetermined { nullity: ncols - rank_a },
        };
    }
    let mut x = vec![F::zero(); ncols];
    for i in (0..ncols).rev() {
        let row = &ech.rows[i];
        let mut acc = row[ncols].clone();
        for j in (i + 1)..ncols {
            acc.sub_assign_ref(&row[j].mul_ref(&x[j]));
        }
        x[i] = acc / row[i].clone();
    }
    SolveReport {
        rank: rank_a,
        solution: Solution::Unique(x),
    }
}

/// Basis of the right nullspace of `A`, one vector per non-pivot column.
pub fn nullspace<F: Scalar>(rows: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let ech = echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut x = vec![F::zero(); ncols];
        x[f] = F::one();
        for (i, &pc) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[i];
            let mut acc = F::zero();
            for j in (pc + 1)..ncols {
                acc.sub_assign_ref(&row[j].mul_ref(&x[j]));
            }
            x[pc] = acc / row[pc].clone();
        }
        basis.push(x);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qf(n: i64, d: i64) -> Rational {
        Rational::from_fraction(n, d)
    }

    #[test]
    fn unique_solution_with_fractions() {
        // x + y/2 = 2, x − y = 1/2
        let rows = vec![
            (vec![q(1), qf(1, 2)], q(2)),
            (vec![q(1), q(-1)], qf(1, 2)),
        ];
        let r = solve(rows, 2);
        assert_eq!(r.rank, 2);
        assert_eq!(r.solution, Solution::Unique(vec![qf(3, 2), q(1)]));
    }

    #[test]
    fn overdetermined_consistent() {
        let rows = vec![
            (vec![q(2), q(0)], q(4)),
            (vec![q(0), q(3)], q(3)),
            (vec![q(2), q(3)], q(7)),
        ];
        assert_eq!(solve(rows, 2).solution, Solution::Unique(vec![q(2), q(1)]));
    }

    #[test]
    fn inconsistent_rows_are_located() {
        let rows = vec![
            (vec![q(1), q(1)], q(1)),
            (vec![q(2), q(2)], q(3)),
        ];
        assert_eq!(solve(rows, 2).solution, Solution::Inconsistent { rows: vec![1] });
    }

    #[test]
    fn underdetermined_reports_nullity() {
        let rows = vec![(vec![q(1), q(1), q(1)], q(0))];
        let r = solve(rows, 3);
        assert_eq!(r.solution, Solution::Underdetermined { nullity: 2 });
    }

    #[test]
    fn bareiss_stays_integral() {
        let rows = vec![
            vec![q(2), q(3), q(5)],
            vec![q(7), q(11), q(13)],
            vec![q(17), q(19), q(23)],
        ];
        let e = echelon(rows, 3);
        assert_eq!(e.rank(), 3);
        assert!(e.rows.iter().flatten().all(|x| x.is_integer()));
        // Last pivot of Bareiss is the determinant, here −78.
        assert_eq!(e.rows[2][2], q(-78));
    }

    #[test]
    fn nullspace_basis() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(rows.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for r in &rows {
                let dot = r.iter().zip(&v).fold(q(0), |acc, (a, b)| acc + a * b);
                assert_eq!(dot, q(0));
            }
        }
    }
}
