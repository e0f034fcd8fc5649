//! Exact linear algebra over ℚ and ℤ on small dense matrices.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{Int, Rat};

pub type RatRow = Vec<Rat>;
pub type IntRow = Vec<Int>;

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatRow], ncols: usize) -> (Vec<RatRow>, Vec<usize>) {
    let mut m: Vec<RatRow> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RatRow], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`, one vector per free column.
pub fn nullspace(rows: &[RatRow], ncols: usize) -> Vec<RatRow> {
    let (r, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `A x = b`, if one exists.
pub fn solve(a: &[RatRow], b: &[Rat], ncols: usize) -> Option<RatRow> {
    let aug: Vec<RatRow> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int_dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_rat_row(v: &[Int]) -> RatRow {
    v.iter().cloned().map(Rat::from_integer).collect()
}

/// Scales a rational vector to a primitive integer vector on the same ray.
pub fn primitive_int(v: &[Rat]) -> IntRow {
    let l = v.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    let ints: IntRow = v.iter().map(|q| (q * Rat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.iter().map(|c| c / &g).collect()
    }
}

/// Column-style Hermite reduction: returns a unimodular `u` (as columns) and
/// the rank `k` such that `a * u` has nonzero columns only among the first `k`.
fn column_reduce(a: &[IntRow], ncols: usize) -> (Vec<IntRow>, usize) {
    // u[j] is the j-th column of the transform; a_cols[j] the j-th column of a*u
    let mut u: Vec<IntRow> = (0..ncols)
        .map(|j| (0..ncols).map(|i| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut cols: Vec<IntRow> = (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect();
    let mut k = 0;
    for row in 0..a.len() {
        if k == ncols {
            break;
        }
        loop {
            // gather columns k.. with nonzero entry in this row, reduce to one by Euclid
            let nz: Vec<usize> = (k..ncols).filter(|&j| !cols[j][row].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz
                .iter()
                .min_by_key(|&&j| cols[j][row].abs())
                .expect("nonempty");
            cols.swap(k, piv);
            u.swap(k, piv);
            if nz.len() == 1 {
                k += 1;
                break;
            }
            for j in k + 1..ncols {
                if cols[j][row].is_zero() {
                    continue;
                }
                let q = cols[j][row].div_floor(&cols[k][row]);
                let (ck, uk) = (cols[k].clone(), u[k].clone());
                for (x, y) in cols[j].iter_mut().zip(&ck) {
                    *x -= &q * y;
                }
                for (x, y) in u[j].iter_mut().zip(&uk) {
                    *x -= &q * y;
                }
            }
        }
    }
    (u, k)
}

/// ℤ-basis of `{x ∈ ℤⁿ : a x = 0}`.
pub fn integer_kernel(a: &[IntRow], ncols: usize) -> Vec<IntRow> {
    if a.is_empty() {
        return (0..ncols)
            .map(|j| (0..ncols).map(|i| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
    }
    let (u, k) = column_reduce(a, ncols);
    u[k..].to_vec()
}

/// Integer vectors `x_j` with `a x_j = e_j`, when the map `ℤⁿ → ℤ^rows` is onto.
pub fn integer_preimages(a: &[IntRow], ncols: usize) -> Option<Vec<IntRow>> {
    let rows = a.len();
    let (u, k) = column_reduce(a, ncols);
    if k != rows {
        return None;
    }
    let h: Vec<RatRow> = a
        .iter()
        .map(|row| (0..k).map(|j| Rat::from_integer(int_dot(row, &u[j]))).collect())
        .collect();
    let mut out = Vec::with_capacity(rows);
    for j in 0..rows {
        let e: RatRow = (0..rows).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        let y = solve(&h, &e, k)?;
        if !y.iter().all(|q| q.is_integer()) {
            return None;
        }
        let x: IntRow = (0..ncols)
            .map(|i| (0..k).map(|c| y[c].to_integer() * &u[c][i]).sum())
            .collect();
        out.push(x);
    }
    Some(out)
}

/// Row Hermite normal form basis of the ℤ-span of the given vectors.
pub fn hnf_basis(vectors: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let mut m: Vec<IntRow> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            m.swap(r, piv);
            if nz.len() == 1 {
                if m[r][c].is_negative() {
                    m[r] = m[r].iter().map(|x| -x).collect();
                }
                r += 1;
                break;
            }
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
    }
    // reduce entries above pivots
    for i in 0..r {
        let Some(c) = (0..ncols).find(|&c| !m[i][c].is_zero()) else { continue };
        for j in 0..i {
            let q = m[j][c].div_floor(&m[i][c]);
            if !q.is_zero() {
                let pi = m[i].clone();
                for (x, y) in m[j].iter_mut().zip(&pi) {
                    *x -= &q * y;
                }
            }
        }
    }
    m.truncate(r);
    m
}

/// ℤ-basis of `span_ℚ(vectors) ∩ ℤⁿ`.
pub fn saturated_basis(vectors: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let rows: Vec<RatRow> = vectors.iter().map(|v| to_rat_row(v)).collect();
    let eqs: Vec<IntRow> = nullspace(&rows, ncols).iter().map(|v| primitive_int(v)).collect();
    let ker = integer_kernel(&eqs, ncols);
    hnf_basis(&ker, ncols)
}

/// Coordinates of `x` in the given basis (rational, if `x` lies in its span).
pub fn coordinates(basis: &[IntRow], x: &[Rat]) -> Option<RatRow> {
    let n = x.len();
    let k = basis.len();
    let a: Vec<RatRow> = (0..n)
        .map(|i| basis.iter().map(|b| Rat::from_integer(b[i].clone())).collect())
        .collect();
    solve(&a, x, k)
}

/// Absolute determinant of a square integer matrix.
pub fn abs_det(rows: &[IntRow]) -> Int {
    let n = rows.len();
    let mut m: Vec<RatRow> = rows.iter().map(|r| to_rat_row(r)).collect();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Int::zero();
        };
        m.swap(c, p);
        det *= &m[c][c];
        let pr = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pr[c];
            for (x, y) in row.iter_mut().zip(&pr) {
                *x -= &f * y;
            }
        }
    }
    det.abs().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn irow(v: &[i64]) -> IntRow {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn nullspace_of_a_plane() {
        let rows = vec![vec![rat(1, 1), rat(1, 1), rat(1, 1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&rows[0], v).is_zero());
        }
    }

    #[test]
    fn integer_kernel_is_a_lattice_basis() {
        // 2x + 3y - z = 0 has kernel basis of determinant-1 index in the plane
        let a = vec![irow(&[2, 3, -1])];
        let ker = integer_kernel(&a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(int_dot(&a[0], v).is_zero());
        }
        // (1,0,2) and (0,1,3) must be integer combinations
        for target in [irow(&[1, 0, 2]), irow(&[0, 1, 3])] {
            let c = coordinates(&ker, &to_rat_row(&target)).unwrap();
            assert!(c.iter().all(|q| q.is_integer()));
        }
    }

    #[test]
    fn saturation_of_a_scaled_vector() {
        let b = saturated_basis(&[irow(&[2, 4])], 2);
        assert_eq!(b, vec![irow(&[1, 2])]);
    }

    #[test]
    fn hnf_of_index_two_lattice() {
        let b = hnf_basis(&[irow(&[2, 0]), irow(&[1, 1]), irow(&[0, 2])], 2);
        assert_eq!(abs_det(&b), int(2));
    }
}
