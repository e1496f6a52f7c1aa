//! Dense linear algebra over the rationals, for small matrices.

use num::{One, Zero};

use crate::polyalg::Rational;

/// Gauss–Jordan inverse; `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        eliminate(&mut a, col, col);
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        eliminate(&mut a, row, col);
        row += 1;
    }
    row
}

// scale pivot row to 1 and clear the column elsewhere
fn eliminate(a: &mut [Vec<Rational>], prow: usize, col: usize) {
    let inv = a[prow][col].recip();
    for x in a[prow].iter_mut() {
        *x = &*x * &inv;
    }
    for r in 0..a.len() {
        if r != prow && !a[r][col].is_zero() {
            let f = a[r][col].clone();
            for k in 0..a[r].len() {
                let sub = &f * &a[prow][k];
                a[r][k] = &a[r][k] - &sub;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat;

    #[test]
    fn inverse_of_2x2() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1), rat(-1)], vec![rat(-1), rat(2)]]);
        assert!(invert(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]).is_none());
    }

    #[test]
    fn ranks() {
        let z = || rat(0);
        assert_eq!(rank(&[vec![z(), z()], vec![z(), z()]]), 0);
        assert_eq!(rank(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]), 1);
        assert_eq!(
            rank(&[
                vec![rat(1), z(), z()],
                vec![z(), z(), rat(3)],
                vec![z(), rat(5), z()]
            ]),
            3
        );
        assert_eq!(rank(&[vec![z(), rat(1), z()], vec![z(), rat(2), z()]]), 1);
    }
}
