//! Small exact linear algebra: determinants, Cramer solves and kernel
//! vectors. Integer work runs in checked `i128` and falls back to big
//! rationals on overflow, so results are always exact.

#![allow(clippy::needless_range_loop)]

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fraction-free Bareiss elimination; `None` on overflow.
pub(crate) fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

/// Gaussian elimination over the rationals.
pub fn det_rational(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Exact integer determinant.
pub fn det_int(m: &[Vec<i64>]) -> BigInt {
    let wide: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match det_i128(wide) {
        Some(d) => BigInt::from(d),
        None => det_rational(
            m.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .to_integer(),
    }
}

/// Solves `rows * x = rhs` for a square system. `None` when singular.
pub fn solve_rational(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(p, k);
        let pivot = m[k][k].clone();
        for j in k..=n {
            m[k][j] = &m[k][j] / &pivot;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].clone();
            for j in k..=n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Cramer's rule in `i128`: returns `(numerators, denominator)` with a
/// positive denominator, `Some(None)` when singular, `None` on overflow.
pub(crate) fn cramer_i128(rows: &[&[i128]], rhs: &[i128]) -> Option<Option<(Vec<i128>, i128)>> {
    let n = rows.len();
    let base: Vec<Vec<i128>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut d = det_i128(base.clone())?;
    if d == 0 {
        return Some(None);
    }
    let mut xs = Vec::with_capacity(n);
    for col in 0..n {
        let mut m = base.clone();
        for (row, b) in m.iter_mut().zip(rhs) {
            row[col] = *b;
        }
        xs.push(det_i128(m)?);
    }
    if d < 0 {
        d = -d;
        for x in &mut xs {
            *x = -*x;
        }
    }
    Some(Some((xs, d)))
}

/// Rank of an integer matrix.
pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    rank_rational(
        rows.iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect(),
    )
}

pub fn rank_rational(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        let pivot = m[rank][c].clone();
        for i in rank + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &pivot;
            for j in c..cols {
                let t = &factor * &m[rank][j];
                m[i][j] -= t;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Some nonzero integer vector in the kernel of `rows` (each of length
/// `n`), or `None` when the kernel is trivial.
pub fn nullspace_vector(rows: &[Vec<i64>], n: usize) -> Option<Vec<BigInt>> {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let pivot = m[r][c].clone();
        for j in 0..n {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); n];
    x[free] = Rational::one();
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = -m[row][free].clone();
    }
    let (dir, _) = integer_direction(&x);
    Some(dir)
}

/// Generalised cross product of `n - 1` integer rows in `Z^n`: a vector
/// orthogonal to every row, zero iff the rows are dependent.
pub fn kernel_vector(rows: &[&[i64]], n: usize) -> Vec<BigInt> {
    debug_assert_eq!(rows.len() + 1, n);
    (0..n)
        .map(|skip| {
            let minor: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != skip)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let d = det_int(&minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Divides an integer vector by the gcd of its entries and makes the first
/// nonzero entry positive. Returns the vector unchanged if it is zero.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v
        .iter()
        .fold(BigInt::zero(), |acc, x| num::Integer::gcd(&acc, x));
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut out {
            *x = -x.clone();
        }
    }
    out
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray
/// (same direction, first-nonzero sign convention applied afterwards by the
/// caller if wanted). Returns the integer vector and the positive factor
/// `t` with `v = t * result`.
pub fn integer_direction(v: &[Rational]) -> (Vec<BigInt>, Rational) {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num::Integer::lcm(&acc, x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num::Integer::gcd(&acc, x));
    if g.is_zero() {
        return (ints, Rational::zero());
    }
    let dir: Vec<BigInt> = ints.iter().map(|x| x / &g).collect();
    (dir, Rational::new(g, lcm))
}
