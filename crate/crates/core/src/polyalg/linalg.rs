use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{denominator_lcm, Rational};

/// Sparse row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    cols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            cols,
            rows: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = RatMatrix::zeros(0, cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.push_row(r);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, row: &[Rational]) {
        assert!(row.len() <= self.cols);
        self.rows.push(
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect(),
        );
    }

    pub fn push_sparse_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut row = BTreeMap::new();
        for (j, v) in entries {
            assert!(j < self.cols);
            let slot = row.entry(j).or_insert_with(Rational::zero);
            *slot += v;
        }
        row.retain(|_, v: &mut Rational| !v.is_zero());
        self.rows.push(row);
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(j < self.cols);
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.rows[i].get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (j, a)| acc + a * &v[*j])
            })
            .collect()
    }
}

type IntRow = BTreeMap<usize, BigInt>;

fn make_primitive(row: &mut IntRow) {
    let g = row.values().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

fn integer_row(row: &BTreeMap<usize, Rational>) -> IntRow {
    let l = denominator_lcm(row.values());
    let mut out: IntRow = row
        .iter()
        .map(|(j, v)| (*j, (v * Rational::from_integer(l.clone())).to_integer()))
        .collect();
    make_primitive(&mut out);
    out
}

/// `row <- p*row - a*pivot` where `a` is row's entry in the pivot column.
fn eliminate(row: &mut IntRow, pivot: &IntRow, col: usize, p: &BigInt) {
    let a = match row.get(&col) {
        Some(a) => a.clone(),
        None => return,
    };
    let g = a.gcd(p);
    let (mul_row, mul_piv) = (p / &g, &a / &g);
    for v in row.values_mut() {
        *v *= &mul_row;
    }
    for (j, pv) in pivot {
        let slot = row.entry(*j).or_insert_with(BigInt::zero);
        *slot -= pv * &mul_piv;
    }
    row.retain(|_, v| !v.is_zero());
    make_primitive(row);
}

/// Reduced echelon form over the integers: each returned row has its pivot
/// entry at the paired column and zeros in every other pivot column.
struct Echelon {
    rows: Vec<IntRow>,
    pivots: Vec<usize>,
}

fn reduce(m: &RatMatrix) -> Echelon {
    let mut rows: Vec<IntRow> = m.rows.iter().map(integer_row).filter(|r| !r.is_empty()).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        if next == rows.len() {
            break;
        }
        // first maximal absolute value wins
        let mut best: Option<usize> = None;
        for (k, r) in rows.iter().enumerate().skip(next) {
            if let Some(v) = r.get(&col) {
                let better = match best {
                    None => true,
                    Some(b) => v.abs() > rows[b][&col].abs(),
                };
                if better {
                    best = Some(k);
                }
            }
        }
        let Some(b) = best else { continue };
        rows.swap(next, b);
        let pivot_row = rows[next].clone();
        let p = pivot_row[&col].clone();
        for (k, r) in rows.iter_mut().enumerate() {
            if k != next {
                eliminate(r, &pivot_row, col, &p);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    Echelon { rows, pivots }
}

/// Rows of `rows` that stay independent modulo `p`, chosen greedily in order.
fn independent_rows_mod(rows: &[IntRow], cols: usize, p: u64) -> Vec<usize> {
    let reduce_mod = |x: &BigInt| -> u64 {
        let r = x % BigInt::from(p);
        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
        r.to_u64().expect("reduced below p")
    };
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut base, mut e, mut acc) = (a, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        if basis.len() == cols {
            break;
        }
        let mut v = vec![0u64; cols];
        for (j, x) in row {
            v[*j] = reduce_mod(x);
        }
        for (c, b) in &basis {
            let f = v[*c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p - mul(f, *y)) % p;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let s = inv(v[c]);
            for x in &mut v {
                *x = mul(*x, s);
            }
            basis.push((c, v));
            chosen.push(k);
        }
    }
    chosen
}

/// Exact rank. Independent rows are located modulo a prime (a nonzero minor
/// mod p is nonzero over the integers); the bound is then closed exactly by
/// checking that every row kills the kernel of the selected rows.
pub fn rank(m: &RatMatrix) -> usize {
    const PRIME: u64 = (1 << 61) - 1;
    let rows: Vec<IntRow> = m.rows.iter().map(integer_row).filter(|r| !r.is_empty()).collect();
    let chosen = independent_rows_mod(&rows, m.cols, PRIME);
    if chosen.len() == rows.len() || chosen.len() == m.cols {
        return chosen.len();
    }
    let mut sub = RatMatrix::zeros(0, m.cols);
    for &k in &chosen {
        sub.push_sparse_row(rows[k].iter().map(|(j, v)| (*j, Rational::from_integer(v.clone()))));
    }
    let null = kernel(&sub);
    let certified = rows.iter().all(|r| null.iter().all(|v| r.iter().fold(Rational::zero(), |acc, (j, a)| acc + &v[*j] * Rational::from_integer(a.clone())).is_zero()));
    if certified {
        chosen.len()
    } else {
        reduce(m).pivots.len()
    }
}

/// Null-space basis. Each vector is a primitive integer vector (content 1),
/// one per free column, with a positive entry at that free column.
pub fn kernel(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let ech = reduce(m);
    let pivot_set: BTreeMap<usize, usize> = ech.pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let lcm = ech
        .rows
        .iter()
        .zip(&ech.pivots)
        .fold(BigInt::one(), |acc, (r, c)| acc.lcm(&r[c]));
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivot_set.contains_key(c)) {
        let mut v = vec![BigInt::zero(); m.cols];
        v[free] = lcm.clone();
        for (r, &c) in ech.rows.iter().zip(&ech.pivots) {
            if let Some(a) = r.get(&free) {
                v[c] = -(&lcm * a) / &r[&c];
            }
        }
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        basis.push(v.into_iter().map(|x| Rational::from_integer(x / &g)).collect());
    }
    basis
}

/// One solution of `m·x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.nrows());
    let n = m.cols;
    let mut aug = RatMatrix::zeros(0, n + 1);
    for (row, bi) in m.rows.iter().zip(b) {
        aug.push_sparse_row(row.iter().map(|(j, v)| (*j, v.clone())).chain([(n, bi.clone())]));
    }
    let ech = reduce(&aug);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in ech.rows.iter().zip(&ech.pivots) {
        if let Some(rhs) = r.get(&n) {
            x[c] = Rational::new(rhs.clone(), r[&c].clone());
        }
    }
    Some(x)
}
