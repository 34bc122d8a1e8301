//! Minuscule representations on their weight bases, with signed Chevalley
//! operators and the grading by the marked root.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyalg::Rational;
use crate::rootsys::{RootSystem, Weight};

/// Operator sending each basis vector to `±` another basis vector or zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMap {
    targets: Vec<Option<(usize, i8)>>,
}

impl SignedMap {
    pub fn image(&self, k: usize) -> Option<(usize, i8)> {
        self.targets[k]
    }

    /// Nonzero entries as `(row, col, sign)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.targets
            .iter()
            .enumerate()
            .filter_map(|(col, t)| t.map(|(row, s)| (row, col, s)))
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (col, t) in self.targets.iter().enumerate() {
            if let Some((row, s)) = t {
                if s > &0 {
                    out[*row] += &v[col];
                } else {
                    out[*row] -= &v[col];
                }
            }
        }
        out
    }

    fn transpose(&self) -> SignedMap {
        let mut targets = vec![None; self.targets.len()];
        for (row, col, s) in self.entries() {
            targets[row] = Some((col, s));
        }
        SignedMap { targets }
    }
}

#[derive(Clone, Debug)]
pub struct MinusculeRep {
    pub rs: RootSystem,
    /// Weyl orbit of ω in ascending lexicographic order.
    pub weights: Vec<Weight>,
    pub raise: Vec<SignedMap>,
    pub lower: Vec<SignedMap>,
    index: HashMap<Weight, usize>,
    highest: usize,
}

/// `ε(α_i, β)` for β given in simple-root coordinates, from the bilinear
/// form with `ε(α_i, α_j) = -1` exactly when `i < j` are adjacent.
fn asymmetry_sign(rs: &RootSystem, i: usize, beta: &[i64]) -> i8 {
    let exponent: i64 = (i + 1..rs.rank())
        .filter(|&j| rs.cartan[i][j] == -1)
        .map(|j| beta[j])
        .sum();
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn build_minuscule_rep(rs: &RootSystem) -> MinusculeRep {
    let weights = rs.weyl_orbit(&rs.omega);
    let index: HashMap<Weight, usize> = weights.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let highest = index[&rs.omega];
    let mut raise = Vec::with_capacity(rs.rank());
    for i in 0..rs.rank() {
        let targets = weights
            .iter()
            .map(|w| {
                let up = w.add(&rs.simple_roots[i]);
                index.get(&up).map(|&t| {
                    let beta = rs.root_coords(&w.sub(&rs.omega)).expect("weights differ by roots");
                    (t, asymmetry_sign(rs, i, &beta))
                })
            })
            .collect();
        raise.push(SignedMap { targets });
    }
    let lower = raise.iter().map(SignedMap::transpose).collect();
    MinusculeRep {
        rs: rs.clone(),
        weights,
        raise,
        lower,
        index,
        highest,
    }
}

impl MinusculeRep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Basis index of the highest weight ω.
    pub fn highest(&self) -> usize {
        self.highest
    }

    /// Eigenvalue of `h_i = [e_i, f_i]` on the weight line `k`.
    pub fn h_eigenvalue(&self, k: usize, i: usize) -> i64 {
        self.weights[k].pairing(i)
    }

    /// The signed permutation `exp(e_i) exp(-f_i) exp(e_i)` representing the
    /// simple reflection `s_i`; entry `k` is the image of basis vector `k`.
    pub fn reflection(&self, i: usize) -> Vec<(usize, i8)> {
        (0..self.dim())
            .map(|k| {
                let mut v: HashMap<usize, i64> = HashMap::from([(k, 1)]);
                for (op, sgn) in [(&self.raise[i], 1), (&self.lower[i], -1), (&self.raise[i], 1)] {
                    let mut next = v.clone();
                    for (&b, &c) in &v {
                        if let Some((t, s)) = op.image(b) {
                            *next.entry(t).or_insert(0) += sgn * s as i64 * c;
                        }
                    }
                    next.retain(|_, c| *c != 0);
                    v = next;
                }
                assert_eq!(v.len(), 1, "reflection of a minuscule weight vector is a signed basis vector");
                let (&t, &c) = v.iter().next().expect("nonempty");
                (t, c as i8)
            })
            .collect()
    }
}

/// The decomposition `V = V0 ⊕ V1 ⊕ V2 ⊕ V3` by the coefficient of the
/// marked root in `ω - λ`.
#[derive(Clone, Debug, Serialize)]
pub struct Grading {
    pub degree: Vec<usize>,
    pub parts: [Vec<usize>; 4],
}

impl Grading {
    pub fn sizes(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|n| self.parts[n].len())
    }

    /// Position of basis index `k` inside its graded part.
    pub fn position(&self, k: usize) -> usize {
        self.parts[self.degree[k]].iter().position(|&j| j == k).expect("in its part")
    }
}

pub fn grading_split(rep: &MinusculeRep) -> Grading {
    let m = rep.rs.marked();
    let degree: Vec<usize> = rep
        .weights
        .iter()
        .map(|w| {
            let c = rep.rs.root_coords(&rep.rs.omega.sub(w)).expect("integral");
            assert!(c[m] >= 0 && c[m] <= 3);
            c[m] as usize
        })
        .collect();
    let mut parts: [Vec<usize>; 4] = Default::default();
    for (k, &d) in degree.iter().enumerate() {
        parts[d].push(k);
    }
    Grading { degree, parts }
}

/// `g_t`: scales the degree-n block by `t^(1-n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedScaling {
    pub t: Rational,
}

impl GradedScaling {
    pub fn new(t: Rational) -> Self {
        assert!(!t.is_zero(), "graded scaling needs t != 0");
        GradedScaling { t }
    }

    pub fn factor(&self, degree: usize) -> Rational {
        let mut f = self.t.clone();
        for _ in 0..degree {
            f /= &self.t;
        }
        f
    }

    pub fn apply(&self, grading: &Grading, v: &[Rational]) -> Vec<Rational> {
        v.iter().zip(&grading.degree).map(|(x, &d)| x * self.factor(d)).collect()
    }

    pub fn compose(&self, other: &GradedScaling) -> GradedScaling {
        GradedScaling::new(&self.t * &other.t)
    }
}

/// Signs making a weight bijection intertwine two raising-operator systems.
///
/// `map[k]` is the image of basis index `k`; `raise_a(node, k)` and
/// `raise_b(node, k')` give the signed images under the raising operator of
/// `node` (nodes already matched). Returns `s` with
/// `φ(v_k) = s[k] v'_{map[k]}`, or `None` if no consistent choice exists.
pub fn equivariant_signs(
    nodes: usize,
    n: usize,
    map: &[usize],
    raise_a: &dyn Fn(usize, usize) -> Option<(usize, i8)>,
    raise_b: &dyn Fn(usize, usize) -> Option<(usize, i8)>,
) -> Option<Vec<i8>> {
    let mut sign: Vec<i8> = vec![0; n];
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for k in 0..n {
        for node in 0..nodes {
            match (raise_a(node, k), raise_b(node, map[k])) {
                (None, None) => {}
                (Some((t, sa)), Some((tb, sb))) => {
                    if map[t] != tb {
                        return None;
                    }
                    adj[k].push((t, sa * sb));
                    adj[t].push((k, sa * sb));
                }
                _ => return None,
            }
        }
    }
    for start in 0..n {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            for &(t, rel) in &adj[k] {
                let want = sign[k] * rel;
                if sign[t] == 0 {
                    sign[t] = want;
                    queue.push_back(t);
                } else if sign[t] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}

/// Identification of the degree-1 block `V1` with the predecessor's
/// representation, as a signed bijection of weight bases.
#[derive(Clone, Debug)]
pub struct PredecessorEmbedding {
    /// `node_map[k]` is the successor node matching predecessor node `k`.
    pub node_map: Vec<usize>,
    /// Aligned with `grading.parts[1]`: `(successor index, predecessor index, sign)`.
    pub pairs: Vec<(usize, usize, i8)>,
}

impl PredecessorEmbedding {
    /// Predecessor vector (length `dim V'`) to `V1` coordinates.
    pub fn to_v1(&self, v: &[Rational]) -> Vec<Rational> {
        self.pairs
            .iter()
            .map(|&(_, p, s)| if s > 0 { v[p].clone() } else { -v[p].clone() })
            .collect()
    }

    pub fn from_v1(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); x.len()];
        for (j, &(_, p, s)) in self.pairs.iter().enumerate() {
            out[p] = if s > 0 { x[j].clone() } else { -x[j].clone() };
        }
        out
    }
}

fn node_maps(pred: &[Vec<i64>], succ: &[Vec<i64>], allowed: &[usize]) -> Vec<Vec<usize>> {
    fn go(k: usize, pred: &[Vec<i64>], succ: &[Vec<i64>], allowed: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == pred.len() {
            out.push(cur.clone());
            return;
        }
        for &s in allowed {
            if cur.contains(&s) {
                continue;
            }
            if (0..k).all(|j| pred[k][j] == succ[s][cur[j]]) {
                cur.push(s);
                go(k + 1, pred, succ, allowed, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(0, pred, succ, allowed, &mut Vec::new(), &mut out);
    out
}

pub fn restrict_to_predecessor(rep: &MinusculeRep, grading: &Grading, pred: &MinusculeRep) -> Result<PredecessorEmbedding> {
    let fail = || Error::NoEquivariantBijection {
        succ: rep.rs.id,
        pred: pred.rs.id,
    };
    if rep.rs.id.predecessor() != Some(pred.rs.id) {
        return Err(Error::NoPredecessor(rep.rs.id));
    }
    let m = rep.rs.marked();
    let levi: Vec<usize> = (0..rep.rs.rank()).filter(|&i| i != m).collect();
    let v1 = &grading.parts[1];
    let local: HashMap<usize, usize> = v1.iter().enumerate().map(|(j, &k)| (k, j)).collect();
    'maps: for node_map in node_maps(&pred.rs.cartan, &rep.rs.cartan, &levi) {
        let mut map = Vec::with_capacity(v1.len());
        for &k in v1 {
            let restricted = Weight(node_map.iter().map(|&s| rep.weights[k].pairing(s)).collect());
            match pred.index_of(&restricted) {
                Some(p) if !map.contains(&p) => map.push(p),
                _ => continue 'maps,
            }
        }
        if map.len() != pred.dim() {
            continue;
        }
        let raise_a = |node: usize, j: usize| {
            rep.raise[node_map[node]]
                .image(v1[j])
                .map(|(t, s)| (*local.get(&t).expect("levi operators preserve V1"), s))
        };
        let raise_b = |node: usize, p: usize| pred.raise[node].image(p);
        if let Some(signs) = equivariant_signs(node_map.len(), v1.len(), &map, &raise_a, &raise_b) {
            let pairs = v1.iter().zip(&map).zip(&signs).map(|((&k, &p), &s)| (k, p, s)).collect();
            return Ok(PredecessorEmbedding { node_map, pairs });
        }
    }
    Err(fail())
}
