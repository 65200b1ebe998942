//! Reference computations kept deliberately separate from the library:
//! dense elimination on plain integer rows, matrices built straight from the
//! structure constants.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use schurian::category::{CategoryBuilder, SchurianCategory};
use schurian::exactalg::{Field, IntMatrix, Scalar};

/// Rank over Q by fraction-free (Bareiss) elimination.
pub fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            for j in col + 1..ncols {
                let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u128, mut e: u128, p: u128) -> u128 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn reduce_rows(rows: &[Vec<i64>], p: u64) -> Vec<Vec<u128>> {
    let p = p as i128;
    rows.iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p) as u128).collect())
        .collect()
}

/// Rank over GF(p).
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let mut a = reduce_rows(rows, p);
    eliminate_mod_p(&mut a, p as u128).0
}

/// Returns (rank, determinant when square).
fn eliminate_mod_p(a: &mut [Vec<u128>], p: u128) -> (usize, u128) {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut det = 1u128;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
            det = 0;
            continue;
        };
        if piv != rank {
            a.swap(piv, rank);
            det = (p - det) % p;
        }
        det = det * a[rank][col] % p;
        let inv = pow_mod(a[rank][col], p - 2, p);
        for i in rank + 1..a.len() {
            if a[i][col] == 0 {
                continue;
            }
            let factor = a[i][col] * inv % p;
            for j in col..ncols {
                if a[rank][j] != 0 {
                    a[i][j] = (a[i][j] + p - factor * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    (rank, det)
}

pub fn rank_over(rows: &[Vec<i64>], field: Field) -> usize {
    match field {
        Field::Rational => rank_rational(rows),
        Field::Prime(p) => rank_mod_p(rows, p),
    }
}

/// Determinant modulo a prime of a square integer matrix.
pub fn det_mod_p(m: &IntMatrix, p: u64) -> u128 {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u128>> = (0..m.nrows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| u128::try_from(x.mod_floor(&pb)).unwrap())
                .collect()
        })
        .collect();
    eliminate_mod_p(&mut a, p as u128).1
}

/// Target of the nonzero composite `g f`, `None` for an identity.
fn composite_target(cat: &SchurianCategory, g: usize, f: usize) -> Option<usize> {
    let (s, t) = (cat.morphism(f).source, cat.morphism(g).target);
    if s == t {
        None
    } else {
        Some(cat.hom(s, t).expect("nonzero composite lands in a hom space"))
    }
}

/// Vertex-by-edge incidence matrix.
pub fn boundary_1_rows(cat: &SchurianCategory) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0; cat.morphisms().len()]; cat.object_count()];
    for (e, m) in cat.morphisms().iter().enumerate() {
        rows[m.target][e] += 1;
        rows[m.source][e] -= 1;
    }
    rows
}

/// One row per nonzero composite: `+g +f -gf` or `+g +f`.
pub fn cell_rows(cat: &SchurianCategory) -> Vec<Vec<i64>> {
    cat.constants()
        .keys()
        .map(|&(g, f)| {
            let mut row = vec![0; cat.morphisms().len()];
            row[g] += 1;
            row[f] += 1;
            if let Some(h) = composite_target(cat, g, f) {
                row[h] -= 1;
            }
            row
        })
        .collect()
}

/// `dim H^1(CW; k) = E - rank d1 - rank d2`.
pub fn h1_dimension(cat: &SchurianCategory, field: Field) -> usize {
    let e = cat.morphisms().len();
    e - rank_over(&boundary_1_rows(cat), field) - rank_over(&cell_rows(cat), field)
}

/// Components of the underlying undirected graph by union-find.
pub fn component_count(cat: &SchurianCategory) -> usize {
    let mut parent: Vec<usize> = (0..cat.object_count()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for m in cat.morphisms() {
        let (a, b) = (find(&mut parent, m.source), find(&mut parent, m.target));
        parent[a] = b;
    }
    (0..cat.object_count()).filter(|&x| find(&mut parent, x) == x).count()
}

/// `d_k` = gcd of all k x k minors divided by the previous one.
pub fn invariant_factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rs in subsets(m, k) {
            for cs in subsets(n, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| BigInt::from(rows[i][j])).collect())
                    .collect();
                g = g.gcd(&det_bigint(minor));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat_n(BigInt::zero(), m.min(n) - k + 1));
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut with_last: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in with_last.iter_mut() {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

/// Laplace expansion; only used on tiny matrices.
fn det_bigint(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det_bigint(sub);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn scalar(field: Field, s: &str) -> Scalar {
    Scalar::parse(field, s).unwrap()
}

fn build(
    field: Field,
    objects: &[&str],
    homs: &[(&str, &str, &str)],
    composites: &[(&str, &str, &str)],
) -> SchurianCategory {
    let mut b = CategoryBuilder::new(field);
    for o in objects {
        b.object(o).unwrap();
    }
    for (name, s, t) in homs {
        b.morphism(name, s, t).unwrap();
    }
    for (g, f, c) in composites {
        b.composite(g, f, scalar(field, c)).unwrap();
    }
    b.build()
}

const SQUARE_HOMS: [(&str, &str, &str); 5] = [
    ("f", "x", "y"),
    ("g", "y", "w"),
    ("h", "x", "z"),
    ("k", "z", "w"),
    ("d", "x", "w"),
];

/// Small categories assembled by hand, each paired with the rank of its
/// first homology (the number of independent cycles not filled by cells).
pub fn hand_made(field: Field) -> Vec<(&'static str, SchurianCategory, usize)> {
    vec![
        (
            "commutative square",
            build(field, &["x", "y", "z", "w"], &SQUARE_HOMS, &[("g", "f", "1"), ("k", "h", "1")]),
            0,
        ),
        (
            "square with one zero path",
            build(field, &["x", "y", "z", "w"], &SQUARE_HOMS, &[("g", "f", "1")]),
            1,
        ),
        (
            "oriented 3-cycle",
            build(
                field,
                &["x", "y", "z"],
                &[("f", "x", "y"), ("g", "y", "z"), ("h", "z", "x")],
                &[],
            ),
            1,
        ),
        (
            "two independent cycles",
            build(
                field,
                &["x", "y", "w", "z"],
                &[("f", "x", "y"), ("g", "y", "z"), ("p", "x", "w"), ("q", "w", "z"), ("h", "x", "z")],
                &[],
            ),
            2,
        ),
        (
            "square with scalars 3/4 and -2",
            build(field, &["x", "y", "z", "w"], &SQUARE_HOMS, &[("g", "f", "3/4"), ("k", "h", "-2")]),
            0,
        ),
        (
            "groupoid with scalar 2",
            build(
                field,
                &["x", "y"],
                &[("f", "x", "y"), ("g", "y", "x")],
                &[("g", "f", "2"), ("f", "g", "2")],
            ),
            0,
        ),
        (
            "isomorphism with a tail",
            build(
                field,
                &["x", "y", "z"],
                &[("f", "x", "y"), ("u", "y", "x"), ("g", "y", "z"), ("h", "x", "z")],
                &[("u", "f", "1"), ("f", "u", "1"), ("g", "f", "5"), ("h", "u", "1/5")],
            ),
            0,
        ),
    ]
}
