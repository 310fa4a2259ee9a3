//! Dense Gaussian elimination over the rationals.

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// Consistent; `x` is the solution with free variables set to zero and
    /// `free` lists the indices of free variables.
    Solved {
        x: Vec<Rational>,
        free: Vec<usize>,
    },
    Inconsistent,
}

/// Solves `A x = b` for a system given as rows `(coefficients, rhs)`.
pub fn solve(rows: &[(Vec<Rational>, Rational)], n: usize) -> LinearSolution {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.resize(n, Rational::ZERO);
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in &mut m[row][col..] {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let pivot_row = m[row].clone();
            for (x, y) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &(&f * y);
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![Rational::ZERO; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    let free = (0..n).filter(|c| !pivots.contains(c)).collect();
    LinearSolution::Solved { x, free }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn unique_and_inconsistent() {
        let rows = vec![(vec![r(1), r(1)], r(3)), (vec![r(1), r(-1)], r(1)), (vec![r(2), r(0)], r(4))];
        assert_eq!(solve(&rows, 2), LinearSolution::Solved { x: vec![r(2), r(1)], free: vec![] });
        let bad = vec![(vec![r(1), r(1)], r(3)), (vec![r(1), r(1)], r(4))];
        assert_eq!(solve(&bad, 2), LinearSolution::Inconsistent);
        let under = vec![(vec![r(1), r(1)], r(3))];
        assert!(matches!(solve(&under, 2), LinearSolution::Solved { free, .. } if free == vec![1]));
    }
}
