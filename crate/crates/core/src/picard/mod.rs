//! The Picard lattice of a del Pezzo surface blown up at `r` points: its
//! exceptional and conic classes, their incidence graph, and the dictionary
//! with the weights of the minuscule representation.

pub mod graph;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::minrep::MinusculeRep;
use crate::polyalg::{rat, solve, RatMatrix, Rational};
use crate::rootsys::Weight;

pub use graph::Labels;

/// Class `a·L − Σ b_i E_i`, stored as `(a; b_1, …, b_r)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DivClass(pub Vec<i64>);

impl DivClass {
    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    pub fn line(r: usize) -> DivClass {
        let mut c = vec![0; r + 1];
        c[0] = 1;
        DivClass(c)
    }

    pub fn exceptional(r: usize, i: usize) -> DivClass {
        let mut c = vec![0; r + 1];
        c[i + 1] = -1;
        DivClass(c)
    }

    pub fn canonical(r: usize) -> DivClass {
        let mut c = vec![-1; r + 1];
        c[0] = -3;
        DivClass(c)
    }

    pub fn dot(&self, other: &DivClass) -> i64 {
        self.0[0] * other.0[0] - self.0[1..].iter().zip(&other.0[1..]).map(|(x, y)| x * y).sum::<i64>()
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    pub fn anticanonical_degree(&self) -> i64 {
        -self.dot(&DivClass::canonical(self.r()))
    }

    pub fn add(&self, other: &DivClass) -> DivClass {
        DivClass(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.0[1..].iter().map(i64::to_string).collect();
        write!(f, "({}; {})", self.0[0], b.join(","))
    }
}

fn check_r(r: usize) {
    assert!((4..=7).contains(&r), "r must lie in 4..=7, got {r}");
}

/// All classes with `C·C = square` and `−K·C = degree`, with `0 ≤ a ≤ cap`.
pub fn classes_with(r: usize, square: i64, degree: i64, cap: i64) -> Vec<DivClass> {
    fn fill(b: &mut Vec<i64>, slots: usize, sum: i64, sq: i64, out: &mut Vec<Vec<i64>>) {
        if slots == 0 {
            if sum == 0 && sq == 0 {
                out.push(b.clone());
            }
            return;
        }
        // Cauchy–Schwarz: sum² ≤ slots·sq
        if sq < 0 || (sum * sum) > slots as i64 * sq {
            return;
        }
        let bound = (sq as f64).sqrt() as i64 + 1;
        for v in -bound..=bound {
            if v * v > sq {
                continue;
            }
            b.push(v);
            fill(b, slots - 1, sum - v, sq - v * v, out);
            b.pop();
        }
    }
    let mut out = Vec::new();
    for a in 0..=cap {
        let mut found = Vec::new();
        fill(&mut Vec::new(), r, 3 * a - degree, a * a - square, &mut found);
        out.extend(found.into_iter().map(|b| {
            let mut c = vec![a];
            c.extend(b);
            DivClass(c)
        }));
    }
    out.sort();
    out
}

const SEARCH_CAP: i64 = 6;

pub fn exceptional_classes(r: usize) -> Vec<DivClass> {
    check_r(r);
    classes_with(r, -1, 1, SEARCH_CAP)
}

pub fn conic_classes(r: usize) -> Vec<DivClass> {
    check_r(r);
    classes_with(r, 0, 2, SEARCH_CAP)
}

/// Exceptional classes with pairwise intersection numbers as edge labels.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub vertices: Vec<DivClass>,
    pub labels: Labels,
}

impl IncidenceGraph {
    pub fn new(r: usize) -> IncidenceGraph {
        Self::from_classes(exceptional_classes(r))
    }

    pub fn from_classes(vertices: Vec<DivClass>) -> IncidenceGraph {
        let labels = vertices.iter().map(|c| vertices.iter().map(|d| c.dot(d)).collect()).collect();
        IncidenceGraph { vertices, labels }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, c: &DivClass) -> Option<usize> {
        self.vertices.binary_search(c).ok()
    }

    pub fn edge_labels(&self) -> BTreeSet<i64> {
        let n = self.len();
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| self.labels[i][j]).collect()
    }
}

pub fn graph_automorphism_order(g: &IncidenceGraph) -> u64 {
    graph::automorphism_group_order(&g.labels)
}

/// Weaker certificate of `Aut ≅ W`: every simple reflection acts by a graph
/// automorphism, the action is faithful and transitive, and the stabilizer
/// of a vertex has order `|W| / |Λ|`.
#[derive(Clone, Debug, Serialize)]
pub struct WeylCertificate {
    pub reflections_preserve_labels: bool,
    pub transitive: bool,
    pub faithful: bool,
    pub stabilizer_order: u64,
    pub expected_stabilizer_order: u64,
}

impl WeylCertificate {
    pub fn passes(&self) -> bool {
        self.reflections_preserve_labels && self.transitive && self.faithful && self.stabilizer_order == self.expected_stabilizer_order
    }
}

/// The bijection between weights of `V` and exceptional classes under which
/// `C·C' = s·(λ,λ') + b`.
#[derive(Clone, Debug)]
pub struct WeightCurveBijection {
    pub r: usize,
    pub graph: IncidenceGraph,
    /// Vertex index of the class attached to weight `k` of the representation.
    pub class_of_weight: Vec<usize>,
    pub slope: Rational,
    pub offset: Rational,
    weights: Vec<Weight>,
}

impl WeightCurveBijection {
    pub fn class(&self, k: usize) -> &DivClass {
        &self.graph.vertices[self.class_of_weight[k]]
    }

    pub fn weight_of_class(&self, c: &DivClass) -> Option<usize> {
        let v = self.graph.index_of(c)?;
        self.class_of_weight.iter().position(|&x| x == v)
    }

    /// Vertex permutation induced by the simple reflection `s_i`.
    pub fn reflection_permutation(&self, rep: &MinusculeRep, i: usize) -> Vec<usize> {
        let mut perm = vec![0; self.graph.len()];
        for (k, w) in self.weights.iter().enumerate() {
            let k2 = rep.index_of(&rep.rs.reflect(w, i)).expect("orbit is W-stable");
            perm[self.class_of_weight[k]] = self.class_of_weight[k2];
        }
        perm
    }

    /// Linear extension to Pic of a vertex permutation, as an integer matrix
    /// acting on coordinate columns.
    pub fn linear_extension(&self, perm: &[usize]) -> Option<Vec<Vec<i64>>> {
        let n = self.r + 1;
        let src = RatMatrix::from_dense(&self.graph.vertices.iter().map(|c| c.0.iter().map(|&x| rat(x)).collect()).collect::<Vec<_>>());
        let mut m = vec![vec![0i64; n]; n];
        for (j, row) in m.iter_mut().enumerate() {
            let target: Vec<Rational> = (0..self.graph.len()).map(|v| rat(self.graph.vertices[perm[v]].0[j])).collect();
            let sol = solve(&src, &target)?;
            for (col, x) in sol.into_iter().enumerate() {
                if !x.is_integer() {
                    return None;
                }
                row[col] = num_traits::ToPrimitive::to_i64(&x.to_integer())?;
            }
        }
        Some(m)
    }

    pub fn certify_weyl(&self, rep: &MinusculeRep) -> WeylCertificate {
        let g = &self.graph.labels;
        let n = self.graph.len();
        let gens: Vec<Vec<usize>> = (0..rep.rs.rank()).map(|i| self.reflection_permutation(rep, i)).collect();
        let reflections_preserve_labels = gens.iter().all(|p| graph::is_automorphism(g, p));
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for p in &gens {
                if !std::mem::replace(&mut seen[p[v]], true) {
                    stack.push(p[v]);
                }
            }
        }
        let transitive = seen.iter().all(|&s| s);
        // W acts faithfully on V, hence on the weights
        let faithful = (0..rep.rs.rank()).all(|i| gens[i].iter().enumerate().any(|(v, &p)| v != p));
        let w = rep.rs.weyl_group_order();
        // stabilizer of vertex 0 in Aut(graph), by the stabilizer chain
        let chain = graph::stabilizer_chain(g);
        let stabilizer_order = if chain.first().map(|c| c.0) == Some(0) {
            chain[1..].iter().map(|&(_, s)| s as u64).product()
        } else {
            0
        };
        WeylCertificate {
            reflections_preserve_labels,
            transitive,
            faithful,
            stabilizer_order,
            expected_stabilizer_order: w / n as u64,
        }
    }
}

/// Sorted distinct values with multiplicities.
fn value_profile<T: Ord + Clone>(vals: impl Iterator<Item = T>) -> Vec<(T, usize)> {
    let mut v: Vec<T> = vals.collect();
    v.sort();
    let mut out: Vec<(T, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn weight_curve_bijection(rep: &MinusculeRep) -> Result<WeightCurveBijection> {
    let r = rep.rs.rank();
    let graph = IncidenceGraph::new(r);
    let n = rep.dim();
    if graph.len() != n {
        return Err(Error::NotIsomorphic);
    }
    let ip: Vec<Vec<Rational>> = rep.weights.iter().map(|a| rep.weights.iter().map(|b| rep.rs.inner_product(a, b)).collect()).collect();
    let wp = value_profile(ip.iter().flatten().cloned());
    let cp = value_profile(graph.labels.iter().flatten().copied());
    if wp.len() != cp.len() || wp.len() < 2 {
        return Err(Error::NotIsomorphic);
    }
    // the affine map is order-reversing or order-preserving; try both
    let fit = |rev: bool| -> Option<(Rational, Rational)> {
        let pairs: Vec<(&(Rational, usize), &(i64, usize))> =
            if rev { wp.iter().zip(cp.iter().rev()).collect() } else { wp.iter().zip(cp.iter()).collect() };
        let ((w0, _), (c0, _)) = pairs[0];
        let ((w1, _), (c1, _)) = pairs[1];
        let slope = (rat(*c1) - rat(*c0)) / (w1 - w0);
        let offset = rat(*c0) - &slope * w0;
        pairs
            .iter()
            .all(|((w, m), (c, m2))| m == m2 && &slope * w + &offset == rat(*c))
            .then_some((slope, offset))
    };
    let (slope, offset) = fit(true).or_else(|| fit(false)).ok_or(Error::NotIsomorphic)?;
    let wl: Labels = ip
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = &slope * x + &offset;
                    num_traits::ToPrimitive::to_i64(&v.to_integer()).expect("small")
                })
                .collect()
        })
        .collect();
    let class_of_weight = graph::find_isomorphism(&wl, &graph.labels, &[]).ok_or(Error::NotIsomorphic)?;
    Ok(WeightCurveBijection {
        r,
        graph,
        class_of_weight,
        slope,
        offset,
        weights: rep.weights.clone(),
    })
}

/// The class `μ̃ = C_λ + C_λ'` of the conics through the singular fibres
/// indexed by `λ + λ' = μ`; all such pairs must agree.
pub fn conic_class_of_mu(bij: &WeightCurveBijection, rep: &MinusculeRep, mu: &Weight) -> Result<DivClass> {
    let mut class: Option<DivClass> = None;
    let mut pairs = 0;
    for (k, w) in rep.weights.iter().enumerate() {
        let Some(j) = rep.index_of(&mu.sub(w)) else { continue };
        if j <= k {
            continue;
        }
        pairs += 1;
        let c = bij.class(k).add(bij.class(j));
        match &class {
            None => class = Some(c),
            Some(prev) if *prev != c => return Err(Error::Invariant(format!("inconsistent conic class for {mu}"))),
            _ => {}
        }
    }
    let c = class.ok_or_else(|| Error::NotInOrbit(mu.to_string()))?;
    if pairs != bij.r - 1 || mu.is_zero() {
        return Err(Error::NotInOrbit(mu.to_string()));
    }
    let k = DivClass::canonical(bij.r);
    if c.self_intersection() != 0 || c.dot(&k) != -2 {
        return Err(Error::Invariant(format!("{c} is not a conic class")));
    }
    Ok(c)
}

/// Value of the quadratic form on the rational span, used to check that a
/// linear extension is an isometry fixing `K`.
pub fn is_isometry_fixing_k(m: &[Vec<i64>], r: usize) -> bool {
    let apply = |c: &DivClass| DivClass((0..=r).map(|j| (0..=r).map(|i| m[j][i] * c.0[i]).sum()).collect());
    let basis: Vec<DivClass> = std::iter::once(DivClass::line(r)).chain((0..r).map(|i| DivClass::exceptional(r, i))).collect();
    let k = DivClass::canonical(r);
    apply(&k) == k && basis.iter().all(|a| basis.iter().all(|b| apply(a).dot(&apply(b)) == a.dot(b)))
}
