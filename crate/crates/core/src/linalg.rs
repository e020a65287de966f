//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank_int(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Reduced row-echelon form with pivots chosen left to right in `order`
/// (a permutation of column indices). Returns the nonzero rows and, for each,
/// its pivot column.
pub fn rref_with_order(m: &[Vec<Rational>], order: &[usize]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rref(m: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let cols = m.first().map_or(0, Vec::len);
    let order: Vec<usize> = (0..cols).collect();
    rref_with_order(m, &order)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    rref(m).0.len()
}

/// Basis of the right kernel `{v : m v = 0}` of an `rows × cols` matrix,
/// returned in reduced row-echelon form.
pub fn right_kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    rref(&basis).0
}

/// Basis of `{w : wᵀ m = 0}` for an integer matrix with `rows` rows.
pub fn left_kernel(m: &[Vec<i64>], rows: usize) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let t = transpose(&to_rational(m), cols);
    right_kernel(&t, rows)
}

/// `a · b` for rational matrices.
pub fn mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Whether the column spans of two matrices with the same row count agree.
pub fn same_column_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let joined: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x.iter().chain(y).cloned().collect())
        .collect();
    ra == rb && rank(&joined) == ra
}

/// `p/q` text form; integers print without a denominator.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or_else(|| {
        let s = if v.is_negative() { -1.0 } else { 1.0 };
        s * f64::INFINITY
    })
}
