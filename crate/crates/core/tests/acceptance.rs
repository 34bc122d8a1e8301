//! Acceptance criteria, each checked against oracles written here rather than
//! against the library's own derivations. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use delpezzo::atlas::{self, Atlas};
use delpezzo::picard;
use delpezzo::polyalg::{Monomial, Poly, Rational};
use delpezzo::rootsys::{build_root_system, RootSystemId, Weight};
use delpezzo::torsor::{self, fresh_sample, SeedableRng, TorsorPresentation, TorsorRng, TorusPoint};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

const SEED: u64 = 20240601;
const LIMIT_DICTIONARY: Duration = Duration::from_secs(60);
const LIMIT_WEIGHT_COUNT: Duration = Duration::from_secs(10);
const LIMIT_E7_CONE: Duration = Duration::from_secs(600);
const LIMIT_CHAIN: Duration = Duration::from_secs(1800);
const EXP_TRIALS: usize = 100;
const PRODUCT_TRIALS: usize = 20;
const PLUCKER_MATRICES: usize = 200;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn small_q(rng: &mut TorsorRng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=6).into())
}

fn nonzero_q(rng: &mut TorsorRng) -> Rational {
    loop {
        let x = small_q(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn get(id: RootSystemId) -> Result<&'static Atlas, String> {
    atlas::get(id).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- lattices

/// Weyl orbit by breadth-first search, `s_i(λ) = λ − λ_i α_i` with `α_i` the
/// i-th row of the Cartan matrix.
fn orbit(cartan: &[Vec<i64>], start: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([start.to_vec()]);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for (i, row) in cartan.iter().enumerate() {
            let u: Vec<i64> = w.iter().zip(row).map(|(a, c)| a - w[i] * c).collect();
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    seen.into_iter().collect()
}

fn inverse(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.iter().enumerate().map(|(i, row)| row.iter().map(|&x| q(x)).chain((0..n).map(|j| q(i64::from(i == j)))).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("invertible");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let sub = &f * &a[c][j];
                    a[r][j] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn bilinear(g: &[Vec<Rational>], a: &[i64], b: &[i64]) -> Rational {
    let mut s = Rational::zero();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            s += &g[i][j] * q(x * y);
        }
    }
    s
}

fn fundamental(r: usize, i: usize) -> Vec<i64> {
    (0..r).map(|j| i64::from(j == i)).collect()
}

/// `ω` of the system: the fundamental weight of the marked node.
fn omega(id: RootSystemId) -> Vec<i64> {
    fundamental(id.rank(), id.marked_root_index() - 1)
}

/// Classes `(a; b)` with `a² − Σb² = square` and `−3a + Σb = k_dot`, by
/// exhaustive search under the Cauchy-Schwarz bound `(Σb)² ≤ r Σb²`.
fn lattice_classes(r: usize, square: i64, k_dot: i64) -> BTreeSet<Vec<i64>> {
    fn fill(r: usize, left: i64, sum: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == r {
            if left == 0 && sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let bound = (left as f64).sqrt() as i64 + 1;
        for b in -bound..=bound {
            if b * b <= left {
                prefix.push(b);
                fill(r, left - b * b, sum - b, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in 0i64..=20 {
        let sum = k_dot + 3 * a;
        let sq = a * a - square;
        if sq < 0 || sum * sum > r as i64 * sq {
            continue;
        }
        let mut found = Vec::new();
        fill(r, sq, sum, &mut Vec::new(), &mut found);
        for b in found {
            let mut c = vec![a];
            c.extend(b);
            out.insert(c);
        }
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn canonical(r: usize) -> Vec<i64> {
    std::iter::once(-3).chain(std::iter::repeat(-1).take(r)).collect()
}

/// Unordered index pairs of weights summing to `mu`.
fn weight_pairs(weights: &[Vec<i64>], mu: &[i64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..weights.len() {
        for l in k..weights.len() {
            if weights[k].iter().zip(&weights[l]).zip(mu).all(|((a, b), m)| a + b == *m) {
                out.push((k, l));
            }
        }
    }
    out
}

fn rep_weights(a: &Atlas) -> Vec<Vec<i64>> {
    a.rep.weights.iter().map(|w| w.0.clone()).collect()
}

// ------------------------------------------------------------- exact rank

fn rank_q(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            if !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for j in c..cols {
                    let sub = &f * &rows[rank][j];
                    rows[r][j] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn nullity_q(rows: Vec<Vec<Rational>>, cols: usize) -> usize {
    cols - rank_q(rows)
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect()
}

/// Exact rank of an integer matrix, certified from both sides: rows that are
/// independent modulo a prime bound it from below, and kernel vectors of
/// those rows annihilating every row bound it from above.
fn certified_rank(rows: &[Vec<BigInt>], cols: usize) -> Result<usize, String> {
    const P: u64 = (1 << 61) - 1;
    let modp = |x: &BigInt| x.mod_floor(&BigInt::from(P)).to_u64().expect("below p");
    let mulp = |a: u64, b: u64| ((a as u128 * b as u128) % P as u128) as u64;
    let invp = |a: u64| {
        let (mut b, mut e, mut acc) = (a, P - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulp(acc, b);
            }
            b = mulp(b, b);
            e >>= 1;
        }
        acc
    };
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut v: Vec<u64> = row.iter().map(modp).collect();
        for (c, b) in &basis {
            let f = v[*c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + P - mulp(f, *y)) % P;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let s = invp(v[c]);
            v.iter_mut().for_each(|x| *x = mulp(*x, s));
            basis.push((c, v));
            chosen.push(k);
        }
    }
    // Bareiss elimination of the chosen rows
    let mut m: Vec<Vec<BigInt>> = chosen.iter().map(|&k| rows[k].clone()).collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    ensure(pivots.len() == chosen.len(), || "rows independent modulo p became dependent".to_string())?;
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    for &f in &free {
        let mut x = vec![Rational::zero(); cols];
        x[f] = Rational::one();
        for (i, &c) in pivots.iter().enumerate().rev() {
            let s: Rational = (c + 1..cols).map(|j| Rational::from_integer(m[i][j].clone()) * &x[j]).sum();
            x[c] = -s / Rational::from_integer(m[i][c].clone());
        }
        for row in rows {
            let s: Rational = row.iter().zip(&x).map(|(a, b)| Rational::from_integer(a.clone()) * b).sum();
            ensure(s.is_zero(), || "kernel vector of the selected rows is not a kernel vector".to_string())?;
        }
    }
    Ok(chosen.len())
}

fn jacobian_rows(equations: &[Poly], point: &[Rational]) -> Result<Vec<Vec<BigInt>>, String> {
    let n = point.len();
    let mut rows = Vec::with_capacity(equations.len());
    for e in equations {
        let row: Vec<Rational> = (0..n).map(|j| e.derivative(j).evaluate(point).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        rows.push(integer_row(&row));
    }
    Ok(rows)
}

// --------------------------------------------------------- the Lie oracle

type Dense = Vec<Vec<i64>>;

fn dense_of(map: &delpezzo::minrep::SignedMap, n: usize) -> Dense {
    let mut m = vec![vec![0; n]; n];
    for k in 0..n {
        if let Some((t, s)) = map.image(k) {
            m[t][k] = i64::from(s);
        }
    }
    m
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

/// Lowering operators `f_β` for the roots β whose marked coefficient is 1,
/// built from commutators of simple lowering operators, keyed by the basis
/// index of `ω − β`.
struct LieOracle {
    highest: usize,
    /// `(basis index of ω − β, f_β, sign of f_β v_ω)` in V1 order.
    ops: Vec<(usize, Dense, i64)>,
}

impl LieOracle {
    fn new(a: &Atlas) -> Result<LieOracle, String> {
        let rep = &a.rep;
        let n = rep.dim();
        let cartan = &rep.rs.cartan;
        let r = cartan.len();
        let m = a.id().marked_root_index() - 1;
        let cinv = inverse(cartan);
        let marked_coeff = |beta: &[i64]| -> Rational { (0..r).map(|i| q(beta[i]) * &cinv[i][m]).sum() };
        let roots: BTreeSet<Vec<i64>> = orbit(cartan, &cartan[m]).into_iter().collect();
        let lower: Vec<Dense> = (0..r).map(|i| dense_of(&rep.lower[i], n)).collect();
        let mut found: BTreeMap<Vec<i64>, Dense> = BTreeMap::from([(cartan[m].clone(), lower[m].clone())]);
        let mut queue = VecDeque::from([cartan[m].clone()]);
        while let Some(beta) = queue.pop_front() {
            for i in 0..r {
                let next: Vec<i64> = beta.iter().zip(&cartan[i]).map(|(x, y)| x + y).collect();
                if !roots.contains(&next) || marked_coeff(&next) != q(1) || found.contains_key(&next) {
                    continue;
                }
                let f = &found[&beta];
                let (x, y) = (matmul(f, &lower[i]), matmul(&lower[i], f));
                let comm: Dense = x.iter().zip(&y).map(|(a, b)| a.iter().zip(b).map(|(u, v)| u - v).collect()).collect();
                found.insert(next.clone(), comm);
                queue.push_back(next);
            }
        }
        let h = rep.highest();
        let omega = &rep.rs.omega.0;
        let mut ops = Vec::new();
        for &k in &a.grading.parts[1] {
            let beta: Vec<i64> = omega.iter().zip(&rep.weights[k].0).map(|(x, y)| x - y).collect();
            let f = found.get(&beta).ok_or_else(|| format!("{}: no root operator for {:?}", a.id(), beta))?.clone();
            let s = f[k][h];
            ensure(s.abs() == 1, || format!("{}: f_β v_ω has coefficient {s}", a.id()))?;
            ops.push((k, f, s));
        }
        ensure(ops.len() == found.len(), || format!("{}: {} root operators for {} degree-one weights", a.id(), found.len(), ops.len()))?;
        Ok(LieOracle { highest: h, ops })
    }

    /// `exp(Σ y_β f_β) v_ω`, with `y_β` chosen so that the degree-one
    /// coordinates equal `x`.
    fn point(&self, x: &[Rational]) -> Vec<Rational> {
        let n = self.ops[0].1.len();
        let apply = |v: &[Rational]| -> Vec<Rational> {
            let mut out = vec![Rational::zero(); n];
            for ((_, f, s), xi) in self.ops.iter().zip(x) {
                if xi.is_zero() {
                    continue;
                }
                let y = xi * q(*s);
                for (i, row) in f.iter().enumerate() {
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 && !v[j].is_zero() {
                            out[i] += &y * q(c) * &v[j];
                        }
                    }
                }
            }
            out
        };
        let mut term = vec![Rational::zero(); n];
        term[self.highest] = Rational::one();
        let mut total = term.clone();
        for k in 1..=3 {
            term = apply(&term).into_iter().map(|t| t / q(k)).collect();
            for (a, b) in total.iter_mut().zip(&term) {
                *a += b;
            }
        }
        // the operators are nilpotent of order four on V
        ensure(apply(&term).iter().all(Zero::is_zero), || "exp series did not terminate".to_string()).expect("nilpotent");
        total
    }
}

// ---------------------------------------------------------- the criteria

struct Shared {
    chain: OnceLock<Result<(Vec<TorsorPresentation>, Duration), String>>,
}

impl Shared {
    fn chain(&self) -> Result<&(Vec<TorsorPresentation>, Duration), String> {
        self.chain
            .get_or_init(|| {
                let start = Instant::now();
                let chain = torsor::build_chain(2, SEED).map_err(|e| format!("build failed: {e}"))?;
                Ok((chain, start.elapsed()))
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn criterion_1(_: &Shared) -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    for id in RootSystemId::ALL {
        let a = get(id)?;
        let r = id.rank();
        let cartan = id.cartan();
        let weights = orbit(&cartan, &omega(id));
        let curves = lattice_classes(r, -1, -1);
        ensure(weights.len() == a.rep.dim() && curves.len() == weights.len(), || format!("{id}: dim V {}, orbit {}, curves {}", a.rep.dim(), weights.len(), curves.len()))?;
        let lib: BTreeSet<Vec<i64>> = picard::exceptional_classes(r).into_iter().map(|c| c.0).collect();
        ensure(lib == curves, || format!("r = {r}: exceptional classes differ from the lattice search"))?;
        let bij = picard::weight_curve_bijection(&a.rep).map_err(|e| format!("{id}: {e}"))?;
        let images: BTreeSet<Vec<i64>> = (0..a.rep.dim()).map(|k| bij.class(k).0.clone()).collect();
        ensure(images == curves, || format!("{id}: the map onto curves is not bijective"))?;
        // C·C' must be an injective affine function of (λ, λ')
        let g = inverse(&cartan);
        let mut label_of: BTreeMap<Rational, i64> = BTreeMap::new();
        let ws = rep_weights(a);
        for k in 0..ws.len() {
            for l in 0..ws.len() {
                let ip = bilinear(&g, &ws[k], &ws[l]);
                let c = dot(&bij.class(k).0, &bij.class(l).0);
                if let Some(&prev) = label_of.get(&ip) {
                    ensure(prev == c, || format!("{id}: inner product {ip} meets two labels"))?;
                }
                label_of.insert(ip, c);
            }
        }
        let labels: BTreeSet<i64> = label_of.values().copied().collect();
        ensure(labels.len() == label_of.len(), || format!("{id}: distinct inner products share a label"))?;
        let pts: Vec<(&Rational, &i64)> = label_of.iter().collect();
        let slope = (q(*pts[1].1) - q(*pts[0].1)) / (pts[1].0 - pts[0].0);
        ensure(pts.iter().all(|(x, y)| q(**y) == q(*pts[0].1) + &slope * (*x - pts[0].0)), || format!("{id}: labels are not affine in the inner product"))?;
        found.push(format!("{}", weights.len()));
    }
    let t = start.elapsed();
    ensure(t < LIMIT_DICTIONARY, || format!("{t:?} exceeds {LIMIT_DICTIONARY:?}"))?;
    Ok(format!("dim V = |curves| = {} in {:.2}s", found.join("/"), t.as_secs_f64()))
}

fn criterion_2(_: &Shared) -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for id in RootSystemId::ALL {
        let cartan = id.cartan();
        let r = id.rank();
        let weights = orbit(&cartan, &omega(id));
        for mu in orbit(&cartan, &fundamental(r, 0)) {
            let n = weight_pairs(&weights, &mu).len();
            ensure(n == r - 1, || format!("{id}: {n} monomials of weight {mu:?}"))?;
            total += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < LIMIT_WEIGHT_COUNT, || format!("{t:?} exceeds {LIMIT_WEIGHT_COUNT:?}"))?;
    Ok(format!("{total} weights, each with r − 1 monomials, in {:.2}s", t.as_secs_f64()))
}

fn criterion_3(_: &Shared) -> Outcome {
    let start = Instant::now();
    let e7 = Atlas::build(RootSystemId::E7).map_err(|e| e.to_string())?;
    let t_e7 = start.elapsed();
    ensure(t_e7 < LIMIT_E7_CONE, || format!("E7 took {t_e7:?}, limit {LIMIT_E7_CONE:?}"))?;
    let mut rng = TorsorRng::seed_from_u64(SEED ^ 3);
    let mut counts = Vec::new();
    for id in RootSystemId::ALL {
        let a = if id == RootSystemId::E7 { &e7 } else { get(id)? };
        let r = id.rank();
        let cartan = id.cartan();
        let ws = rep_weights(a);
        let orbit1 = orbit(&cartan, &fundamental(r, 0));
        ensure(a.ideal.generators.len() == orbit1.len(), || format!("{id}: {} generators", a.ideal.generators.len()))?;
        let lie = LieOracle::new(a)?;
        let points: Vec<Vec<Rational>> = (0..3 * r + 30).map(|_| lie.point(&(0..lie.ops.len()).map(|_| small_q(&mut rng)).collect::<Vec<_>>())).collect();
        for mu in &orbit1 {
            let w = Weight(mu.clone());
            let gens: Vec<_> = a.ideal.generators.iter().filter(|g| g.mu == w).collect();
            ensure(gens.len() == 1, || format!("{id}: {} generators of weight {mu:?}", gens.len()))?;
            let pairs = weight_pairs(&ws, mu);
            let want: BTreeSet<Monomial> = pairs.iter().map(|&(k, l)| Monomial::pair(k, l)).collect();
            let got: BTreeSet<Monomial> = gens[0].poly.support().cloned().collect();
            ensure(got == want && want.len() == r - 1, || format!("{id}: generator of weight {mu:?} is not supported on all r − 1 monomials"))?;
            // quadrics of weight μ vanishing on the cone form exactly a line
            let rows: Vec<Vec<Rational>> = points.iter().map(|p| pairs.iter().map(|&(k, l)| &p[k] * &p[l]).collect()).collect();
            ensure(nullity_q(rows, pairs.len()) == 1, || format!("{id}: weight {mu:?} quadrics vanishing on the cone are not 1-dimensional"))?;
            for p in &points {
                ensure(gens[0].poly.evaluate(p).map_err(|e| e.to_string())?.is_zero(), || format!("{id}: generator of weight {mu:?} is nonzero on the cone"))?;
            }
        }
        let zero_pairs = weight_pairs(&ws, &vec![0; r]);
        let zero_dim = if zero_pairs.is_empty() {
            0
        } else {
            let rows: Vec<Vec<Rational>> = points.iter().map(|p| zero_pairs.iter().map(|&(k, l)| &p[k] * &p[l]).collect()).collect();
            nullity_q(rows, zero_pairs.len())
        };
        ensure(a.ideal.zero_block.len() == zero_dim && zero_dim == if id == RootSystemId::E7 { 7 } else { 0 }, || format!("{id}: zero-weight block {} against {zero_dim}", a.ideal.zero_block.len()))?;
        for g in &a.ideal.zero_block {
            for p in &points {
                ensure(g.poly.evaluate(p).map_err(|e| e.to_string())?.is_zero(), || format!("{id}: zero-weight form is nonzero on the cone"))?;
            }
        }
        counts.push(a.ideal.generators.len().to_string());
    }
    Ok(format!("{} generators, E7 zero block 7, E7 built in {:.2}s", counts.join("/"), t_e7.as_secs_f64()))
}

fn criterion_4(_: &Shared) -> Outcome {
    let a = get(RootSystemId::A4)?;
    let ws = rep_weights(a);
    let triples: Vec<[usize; 3]> = (0..5).flat_map(|x| (x + 1..5).flat_map(move |y| (y + 1..5).map(move |z| [x, y, z]))).collect();
    // weight of e_a ∧ e_b ∧ e_c pairs with α_j^∨ as [j ∈ t] − [j+1 ∈ t]
    let index_of_pair = |i: usize, j: usize| -> usize {
        let t = triples.iter().find(|t| !t.contains(&i) && !t.contains(&j)).expect("complement");
        let w: Vec<i64> = (0..4).map(|c| i64::from(t.contains(&c)) - i64::from(t.contains(&(c + 1)))).collect();
        ws.iter().position(|x| *x == w).expect("weight of V")
    };
    let p = |i: usize, j: usize| Poly::var(index_of_pair(i, j));
    let mut classical = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                for l in k + 1..5 {
                    classical.push(p(i, j).mul(&p(k, l)).sub(&p(i, k).mul(&p(j, l))).add(&p(i, l).mul(&p(j, k))));
                }
            }
        }
    }
    let gens: Vec<&Poly> = a.ideal.generators.iter().map(|g| &g.poly).collect();
    ensure(gens.len() == 5, || format!("{} generators", gens.len()))?;
    // search the coordinate sign gauge identifying the two sets
    let gauge = (0u32..1 << 10).find(|mask| {
        let sign = |v: usize| if mask >> v & 1 == 1 { -q(1) } else { q(1) };
        gens.iter().all(|g| {
            let moved = g.substitute(&|v| Poly::var(v).scale(&sign(v)));
            classical.iter().any(|c| moved.primitive() == c.primitive() || moved.primitive() == c.primitive().scale(&-q(1)))
        })
    });
    let mask = gauge.ok_or("no sign gauge matches the generators with the three-term relations")?;
    let mut rng = TorsorRng::seed_from_u64(SEED ^ 4);
    for trial in 0..PLUCKER_MATRICES {
        let m: Vec<Vec<Rational>> = (0..2).map(|_| (0..5).map(|_| small_q(&mut rng)).collect()).collect();
        let mut x = vec![Rational::zero(); 10];
        for i in 0..5 {
            for j in i + 1..5 {
                let k = index_of_pair(i, j);
                let minor = &m[0][i] * &m[1][j] - &m[0][j] * &m[1][i];
                x[k] = if mask >> k & 1 == 1 { -minor } else { minor };
            }
        }
        for g in &gens {
            ensure(g.evaluate(&x).map_err(|e| e.to_string())?.is_zero(), || format!("matrix {trial}: a generator is nonzero on a Plücker vector"))?;
        }
    }
    Ok(format!("5 three-term relations up to sign, vanishing on {PLUCKER_MATRICES} Plücker vectors"))
}

fn criterion_5(_: &Shared) -> Outcome {
    let mut rng = TorsorRng::seed_from_u64(SEED ^ 5);
    for id in RootSystemId::ALL {
        let a = get(id)?;
        let lie = LieOracle::new(a)?;
        let n1 = a.exp.v1_len();
        for trial in 0..EXP_TRIALS {
            let x: Vec<Rational> = (0..n1).map(|_| small_q(&mut rng)).collect();
            let e = a.exp.exp_point(&x);
            ensure(e == lie.point(&x), || format!("{id}: trial {trial}: exp(x) is not the orbit point with degree-one part x"))?;
            for g in a.ideal.all() {
                ensure(g.poly.evaluate(&e).map_err(|e| e.to_string())?.is_zero(), || format!("{id}: trial {trial}: exp(x) violates a generator"))?;
            }
            let c = nonzero_q(&mut rng);
            let cx: Vec<Rational> = x.iter().map(|v| v * &c).collect();
            let c2 = &c * &c;
            let want: Vec<Rational> = a.exp.p_values(&x).iter().map(|v| v * &c2).collect();
            ensure(a.exp.p_values(&cx) == want, || format!("{id}: p(cx) != c²p(x)"))?;
            ensure(a.exp.invariant_cubic(&cx) == a.exp.invariant_cubic(&x).map(|v| v * &c2 * &c), || format!("{id}: q(cx) != c³q(x)"))?;
        }
        ensure(a.exp.q.is_some() == (id == RootSystemId::E7), || format!("{id}: unexpected degree-3 part"))?;
    }
    Ok(format!("{EXP_TRIALS} points per system equal the Lie-theoretic orbit points"))
}

fn criterion_6(shared: &Shared) -> Outcome {
    let (chain, took) = shared.chain()?;
    ensure(*took < LIMIT_CHAIN, || format!("chain took {took:?}, limit {LIMIT_CHAIN:?}"))?;
    ensure(chain.len() == 4, || format!("{} presentations", chain.len()))?;
    let mut report = Vec::new();
    for tp in chain {
        let id = tp.system;
        let r = id.rank();
        let cartan = id.cartan();
        let orbit1 = orbit(&cartan, &fundamental(r, 0)).len();
        let dim = orbit(&cartan, &omega(id)).len();
        ensure(tp.equations.len() == (r - 3) * orbit1, || format!("{id}: {} equations", tp.equations.len()))?;
        ensure(tp.samples.len() >= 5, || format!("{id}: {} samples", tp.samples.len()))?;
        let want = dim - (r + 3);
        for s in &tp.samples {
            for e in &tp.equations {
                ensure(e.evaluate(s).map_err(|e| e.to_string())?.is_zero(), || format!("{id}: a sample misses an equation"))?;
            }
            let got = certified_rank(&jacobian_rows(&tp.equations, s)?, dim)?;
            ensure(got == want, || format!("{id}: Jacobian rank {got}, expected {want}"))?;
        }
        report.push(format!("{}:{}", tp.equations.len(), want));
    }
    // provenance survives serialization and replays every step
    let last = chain.last().expect("nonempty");
    let doc = delpezzo::json::torsor(last, SEED);
    let text = serde_json::to_string(&doc).map_err(|e| e.to_string())?;
    let steps = delpezzo::json::parse_steps(&serde_json::from_str(&text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(steps == last.provenance, || "provenance does not round-trip".to_string())?;
    for (step, tp) in steps.iter().zip(&chain[1..]) {
        let (t, zs) = torsor::replay_step(step).map_err(|e| e.to_string())?;
        ensure(t.coords() == tp.anchor.as_slice() && zs == tp.dilatations, || format!("{}: replay differs", tp.system))?;
    }
    let again = torsor::build_chain(3, SEED).map_err(|e| e.to_string())?;
    for (a, b) in again.iter().zip(chain) {
        ensure(a.equations == b.equations && a.samples == b.samples, || format!("{}: rebuild from the seed differs", a.system))?;
    }
    Ok(format!("equations:rank {} , chain built in {:.1}s", report.join(" "), took.as_secs_f64()))
}

fn ver(weights: &[Vec<i64>], mu: &[i64], z: &[Rational]) -> Vec<Rational> {
    weight_pairs(weights, mu).iter().map(|&(k, l)| &z[k] * &z[l]).collect()
}

fn independent(a: &Atlas, zs: &[TorusPoint]) -> bool {
    let ws = rep_weights(a);
    let r = a.id().rank();
    orbit(&a.rep.rs.cartan, &fundamental(r, 0)).iter().all(|mu| rank_q(zs.iter().map(|z| ver(&ws, mu, z.coords())).collect()) == zs.len())
}

fn criterion_7(shared: &Shared) -> Outcome {
    let (chain, _) = shared.chain()?;
    for tp in chain {
        let a = get(tp.system)?;
        ensure(independent(a, &tp.dilatations), || format!("{}: dilatations not in general position", tp.system))?;
        ensure(torsor::general_position_check(a, &tp.dilatations), || format!("{}: library check disagrees", tp.system))?;
        let mut doubled = tp.dilatations.clone();
        doubled.push(doubled[doubled.len() - 1].clone());
        ensure(!independent(a, &doubled) && !torsor::general_position_check(a, &doubled), || format!("{}: a repeated point passes", tp.system))?;
    }
    Ok("all presentations in general position; duplicates rejected".into())
}

fn criterion_8(shared: &Shared) -> Outcome {
    let (chain, _) = shared.chain()?;
    let mut rng = TorsorRng::seed_from_u64(SEED ^ 8);
    let mut report = Vec::new();
    for tp in chain.iter().filter(|tp| tp.system != RootSystemId::A4) {
        let a = get(tp.system)?;
        let n = tp.system.rank() - 4;
        let t = &tp.anchor;
        for trial in 0..PRODUCT_TRIALS {
            let mut prod = t.clone();
            for _ in 0..=n {
                let s = fresh_sample(&tp.provenance, &mut rng).map_err(|e| e.to_string())?;
                prod = prod.iter().zip(&s).zip(t).map(|((p, x), y)| p * x / y).collect();
            }
            for g in a.ideal.all() {
                ensure(g.poly.evaluate(&prod).map_err(|e| e.to_string())?.is_zero(), || format!("{}: product {trial} is off the cone", tp.system))?;
            }
        }
        report.push(format!("{} n={n}", tp.system));
    }
    Ok(format!("{PRODUCT_TRIALS} products each: {}", report.join(", ")))
}

/// Order of the automorphism group of a labelled complete graph, by a
/// stabilizer chain whose orbits are found by backtracking.
fn automorphism_count(labels: &[Vec<i64>]) -> u64 {
    fn extend(labels: &[Vec<i64>], map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, next: usize) -> bool {
        let n = labels.len();
        let Some(v) = (next..n).find(|&v| map[v].is_none()) else { return true };
        for w in 0..n {
            if used[w] || labels[v][v] != labels[w][w] {
                continue;
            }
            if (0..n).all(|u| map[u].map_or(true, |iu| labels[v][u] == labels[w][iu])) {
                map[v] = Some(w);
                used[w] = true;
                if extend(labels, map, used, v + 1) {
                    return true;
                }
                map[v] = None;
                used[w] = false;
            }
        }
        false
    }
    let n = labels.len();
    let mut fixed: Vec<usize> = Vec::new();
    let mut order = 1u64;
    for v in 0..n {
        let mut orbit = 0;
        for w in 0..n {
            if fixed.contains(&w) {
                continue;
            }
            let mut map = vec![None; n];
            let mut used = vec![false; n];
            for &f in &fixed {
                map[f] = Some(f);
                used[f] = true;
            }
            if (0..n).any(|u| map[u].is_some_and(|iu| labels[v][u] != labels[w][iu])) {
                continue;
            }
            map[v] = Some(w);
            used[w] = true;
            if extend(labels, &mut map, &mut used, 0) {
                orbit += 1;
            }
        }
        order *= orbit;
        fixed.push(v);
    }
    order
}

fn criterion_9(_: &Shared) -> Outcome {
    let mut found = Vec::new();
    for (r, want) in [(4usize, 120u64), (5, 1920), (6, 51840), (7, 2903040)] {
        let curves: Vec<Vec<i64>> = lattice_classes(r, -1, -1).into_iter().collect();
        let labels: Vec<Vec<i64>> = curves.iter().map(|a| curves.iter().map(|b| dot(a, b)).collect()).collect();
        let order = automorphism_count(&labels);
        let lib = picard::graph_automorphism_order(&picard::IncidenceGraph::new(r));
        let weyl = build_root_system(RootSystemId::ALL[r - 4]).weyl_group_order();
        ensure(order == want && lib == want && weyl == want, || format!("r = {r}: oracle {order}, library {lib}, |W| {weyl}"))?;
        found.push(order.to_string());
    }
    Ok(format!("automorphism orders {} by full search", found.join("/")))
}

fn criterion_10(_: &Shared) -> Outcome {
    let mut found = Vec::new();
    for id in [RootSystemId::D5, RootSystemId::E6, RootSystemId::E7] {
        let a = get(id)?;
        let r = id.rank();
        let conics = lattice_classes(r, 0, -2);
        let bij = picard::weight_curve_bijection(&a.rep).map_err(|e| e.to_string())?;
        let ws = rep_weights(a);
        let k = canonical(r);
        let mut images: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        for mu in orbit(&id.cartan(), &fundamental(r, 0)) {
            let pairs = weight_pairs(&ws, &mu);
            let sums: BTreeSet<Vec<i64>> = pairs.iter().map(|&(x, y)| bij.class(x).0.iter().zip(&bij.class(y).0).map(|(u, v)| u + v).collect()).collect();
            ensure(sums.len() == 1, || format!("{id}: pairs of weight {mu:?} give different classes"))?;
            let c = sums.into_iter().next().expect("one class");
            ensure(dot(&c, &c) == 0 && dot(&c, &k) == -2, || format!("{id}: {c:?} is not a conic class"))?;
            let lib = picard::conic_class_of_mu(&bij, &a.rep, &Weight(mu.clone())).map_err(|e| e.to_string())?;
            ensure(lib.0 == c, || format!("{id}: library conic class differs for {mu:?}"))?;
            images.insert(mu, c);
        }
        let set: BTreeSet<Vec<i64>> = images.values().cloned().collect();
        ensure(set.len() == images.len() && set == conics, || format!("{id}: μ ↦ μ̃ is not a bijection onto the {} conic classes", conics.len()))?;
        found.push(set.len().to_string());
    }
    Ok(format!("bijections onto {} conic classes", found.join("/")))
}

fn main() {
    let criteria: [(u8, &str, fn(&Shared) -> Outcome); 10] = [
        (1, "dimension dictionary", criterion_1),
        (2, "weight-μ monomial count", criterion_2),
        (3, "cone ideal", criterion_3),
        (4, "Plücker relations", criterion_4),
        (5, "exp section", criterion_5),
        (6, "torsor equations", criterion_6),
        (7, "general position", criterion_7),
        (8, "product closure", criterion_8),
        (9, "Weyl group as graph automorphisms", criterion_9),
        (10, "conic dictionary", criterion_10),
    ];
    let shared = Shared { chain: OnceLock::new() };
    let mut failed = 0;
    std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(n, title, f)| {
                let shared = &shared;
                (*n, *title, s.spawn(move || {
                    let start = Instant::now();
                    (f(shared), start.elapsed())
                }))
            })
            .collect();
        for (n, title, h) in handles {
            let (outcome, took) = h.join().unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO));
            match outcome {
                Ok(detail) => println!("PASS criterion {n:>2} {title} ({:.1}s): {detail}", took.as_secs_f64()),
                Err(why) => {
                    failed += 1;
                    println!("FAIL criterion {n:>2} {title} ({:.1}s): {why}", took.as_secs_f64());
                }
            }
        }
    });
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
