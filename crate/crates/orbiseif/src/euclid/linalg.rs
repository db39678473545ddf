//! Exact linear algebra over `Q` for the small fixed dimensions used here.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Q;

pub type Vector<const N: usize> = [Q; N];
pub type Matrix<const N: usize> = [[Q; N]; N];

pub fn zero_vec<const N: usize>() -> Vector<N> {
    [Q::zero(); N]
}

pub fn identity<const N: usize>() -> Matrix<N> {
    let mut m = [[Q::zero(); N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::from(1);
    }
    m
}

pub fn mat_mul<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    let mut m = [[Q::zero(); N]; N];
    for i in 0..N {
        for j in 0..N {
            m[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

pub fn mat_vec<const N: usize>(a: &Matrix<N>, v: &Vector<N>) -> Vector<N> {
    let mut out = zero_vec();
    for i in 0..N {
        out[i] = (0..N).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn add<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn sub<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn scale<const N: usize>(s: Q, a: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|i| s * a[i])
}

pub fn scale_matrix<const N: usize>(s: Q, a: &Matrix<N>) -> Matrix<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| s * a[i][j]))
}

pub fn dot<const N: usize>(a: &Vector<N>, b: &Vector<N>) -> Q {
    (0..N).map(|i| a[i] * b[i]).sum()
}

pub fn transpose<const N: usize>(a: &Matrix<N>) -> Matrix<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn mat_sub<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

pub fn mat_add<const N: usize>(a: &Matrix<N>, b: &Matrix<N>) -> Matrix<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<const N: usize>(cols: &[Vector<N>; N]) -> Matrix<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i]))
}

pub fn column<const N: usize>(a: &Matrix<N>, j: usize) -> Vector<N> {
    std::array::from_fn(|i| a[i][j])
}

pub fn det<const N: usize>(a: &Matrix<N>) -> Q {
    let mut m = *a;
    let mut d = Q::from(1);
    for c in 0..N {
        let Some(p) = (c..N).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..N {
            let f = m[r][c] / m[c][c];
            for k in c..N {
                let v = m[c][k];
                m[r][k] -= f * v;
            }
        }
    }
    d
}

pub fn inverse<const N: usize>(a: &Matrix<N>) -> Option<Matrix<N>> {
    let mut m = *a;
    let mut inv = identity::<N>();
    for c in 0..N {
        let p = (c..N).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c];
        for k in 0..N {
            m[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for r in 0..N {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c];
                for k in 0..N {
                    let (mv, iv) = (m[c][k], inv[c][k]);
                    m[r][k] -= f * mv;
                    inv[r][k] -= f * iv;
                }
            }
        }
    }
    Some(inv)
}

pub fn is_orthogonal<const N: usize>(a: &Matrix<N>) -> bool {
    mat_mul(&transpose(a), a) == identity()
}

pub fn is_integral<const N: usize>(v: &Vector<N>) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Componentwise fractional part, into `[0, 1)`.
pub fn frac<const N: usize>(v: &Vector<N>) -> Vector<N> {
    std::array::from_fn(|i| v[i] - v[i].floor())
}

/// Basis of the null space of a matrix given by rows, via reduced row echelon form.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let piv = m[r][c];
        for k in 0..ncols {
            m[r][k] /= piv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for k in 0..ncols {
                    let v = m[r][k];
                    m[i][k] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::from(1);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f];
            }
            v
        })
        .collect()
}

fn lcm_denoms<'a>(xs: impl Iterator<Item = &'a Q>) -> i128 {
    xs.fold(1i128, |acc, x| acc.lcm(&(*x.denom() as i128)))
}

/// Smallest integer vector on the line through `v`, first nonzero entry positive.
pub fn primitive_integer<const N: usize>(v: &Vector<N>) -> Option<[i64; N]> {
    let d = lcm_denoms(v.iter());
    let ints: Vec<i128> = v.iter().map(|x| *x.numer() as i128 * (d / *x.denom() as i128)).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g == 0 {
        return None;
    }
    let sign = if ints.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) { -1 } else { 1 };
    Some(std::array::from_fn(|i| (sign * ints[i] / g) as i64))
}

pub fn to_q<const N: usize>(v: &[i64; N]) -> Vector<N> {
    std::array::from_fn(|i| Q::from(v[i]))
}

/// Hermite normal form of the integer row lattice spanned by `rows`; returns
/// the nonzero rows, upper echelon with positive pivots and reduced entries
/// above each pivot.
pub fn hermite_rows(mut rows: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut r = 0;
    for c in 0..ncols {
        loop {
            let nonzero: Vec<usize> = (r..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c] != 0 {
                    let f = Integer::div_floor(&rows[i][c], &rows[r][c]);
                    for k in 0..ncols {
                        let v = rows[r][k];
                        rows[i][k] -= f * v;
                    }
                    if rows[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && rows[r][c] != 0 {
            if rows[r][c] < 0 {
                for k in 0..ncols {
                    rows[r][k] = -rows[r][k];
                }
            }
            for i in 0..r {
                let f = Integer::div_floor(&rows[i][c], &rows[r][c]);
                if f != 0 {
                    for k in 0..ncols {
                        let v = rows[r][k];
                        rows[i][k] -= f * v;
                    }
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// Hermite basis of the group generated by rational vectors, as rows.
pub fn lattice_basis<const N: usize>(vectors: &[Vector<N>]) -> Vec<Vector<N>> {
    let d = lcm_denoms(vectors.iter().flatten());
    let rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| *x.numer() as i128 * (d / *x.denom() as i128)).collect())
        .collect();
    hermite_rows(rows, N)
        .into_iter()
        .map(|row| std::array::from_fn(|i| Q::new(row[i] as i64, d as i64)))
        .collect()
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}
