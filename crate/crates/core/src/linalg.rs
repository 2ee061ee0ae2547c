//! Dense exact linear algebra over `Q`.

use num_traits::{One, Zero};

use crate::{Error, Result, Q};

/// Rank by Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let height = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(pivot) = (r..height).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = m[r][c].recip();
        for i in r + 1..height {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for k in c..width {
                let delta = &f * &m[r][k];
                m[i][k] -= delta;
            }
        }
        r += 1;
        if r == height {
            break;
        }
    }
    r
}

/// Inverse of a square matrix; fails when singular.
pub fn inverse(a: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::SizeMismatch("matrix is not square".into()));
    }
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n)
            .find(|&i| !m[i][c].is_zero())
            .ok_or_else(|| Error::Invalid("matrix is singular".into()))?;
        m.swap(c, pivot);
        let inv = m[c][c].recip();
        for k in 0..2 * n {
            m[c][k] *= &inv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in 0..2 * n {
                let delta = &f * &m[c][k];
                m[i][k] -= delta;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `a · b`.
pub fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let width = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..width)
                .map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q_int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&mat(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
    }

    #[test]
    fn inverses() {
        let a = mat(&[&[2, 1], &[5, 3]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, mat(&[&[3, -1], &[-5, 2]]));
        assert_eq!(matmul(&a, &inv), mat(&[&[1, 0], &[0, 1]]));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_err());
        let b = mat(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(matmul(&inverse(&b).unwrap(), &b), mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }
}
