//! Simply-laced root systems in Bourbaki numbering, weights in the
//! fundamental-weight basis, and Weyl group orbits.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{rat, RatMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSystemId {
    A4,
    D5,
    E6,
    E7,
}

impl RootSystemId {
    pub const ALL: [RootSystemId; 4] = [Self::A4, Self::D5, Self::E6, Self::E7];

    pub fn rank(self) -> usize {
        match self {
            Self::A4 => 4,
            Self::D5 => 5,
            Self::E6 => 6,
            Self::E7 => 7,
        }
    }

    /// One-based Bourbaki index of the marked simple root.
    pub fn marked_root_index(self) -> usize {
        match self {
            Self::A4 => 3,
            Self::D5 => 5,
            Self::E6 => 6,
            Self::E7 => 7,
        }
    }

    pub fn predecessor(self) -> Option<RootSystemId> {
        match self {
            Self::A4 => None,
            Self::D5 => Some(Self::A4),
            Self::E6 => Some(Self::D5),
            Self::E7 => Some(Self::E6),
        }
    }

    pub fn successor(self) -> Option<RootSystemId> {
        match self {
            Self::A4 => Some(Self::D5),
            Self::D5 => Some(Self::E6),
            Self::E6 => Some(Self::E7),
            Self::E7 => None,
        }
    }

    /// Degree of the matching del Pezzo surface, `9 - r`.
    pub fn degree(self) -> u32 {
        9 - self.rank() as u32
    }

    pub fn from_degree(d: u32) -> Result<Self> {
        match d {
            5 => Ok(Self::A4),
            4 => Ok(Self::D5),
            3 => Ok(Self::E6),
            2 => Ok(Self::E7),
            _ => Err(Error::BadDegree(d)),
        }
    }

    fn edges(self) -> &'static [(usize, usize)] {
        match self {
            Self::A4 => &[(1, 2), (2, 3), (3, 4)],
            Self::D5 => &[(1, 2), (2, 3), (3, 4), (3, 5)],
            Self::E6 => &[(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
            Self::E7 => &[(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
        }
    }

    pub fn cartan(self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut c = vec![vec![0; r]; r];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in self.edges() {
            c[a - 1][b - 1] = -1;
            c[b - 1][a - 1] = -1;
        }
        c
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A4 => "A4",
            Self::D5 => "D5",
            Self::E6 => "E6",
            Self::E7 => "E7",
        };
        f.write_str(s)
    }
}

impl FromStr for RootSystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a4" => Ok(Self::A4),
            "d5" => Ok(Self::D5),
            "e6" => Ok(Self::E6),
            "e7" => Ok(Self::E7),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }
}

/// Integer weight in the fundamental-weight basis: `coords[i]` is the
/// pairing with the simple coroot `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Weight(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn pairing(&self, i: usize) -> i64 {
        self.0[i]
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `s_i(λ) = λ - <λ, α_i^∨> α_i` for an arbitrary simply-laced Cartan matrix.
fn reflect_with(cartan: &[Vec<i64>], w: &Weight, i: usize) -> Weight {
    let k = w.0[i];
    if k == 0 {
        return w.clone();
    }
    Weight(w.0.iter().zip(&cartan[i]).map(|(a, c)| a - k * c).collect())
}

/// Breadth-first closure under simple reflections, returned in ascending
/// lexicographic order.
pub fn orbit_with(cartan: &[Vec<i64>], w: &Weight) -> Vec<Weight> {
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(v) = queue.pop_front() {
        for i in 0..cartan.len() {
            let u = reflect_with(cartan, &v, i);
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort();
    out
}

/// Positive roots in the fundamental-weight basis, built by adding simple
/// roots: for β ≠ α_i positive, β + α_i is a root iff <β, α_i^∨> = -1.
pub fn positive_roots_of(cartan: &[Vec<i64>]) -> Vec<Weight> {
    let simple: Vec<Weight> = cartan.iter().map(|r| Weight(r.clone())).collect();
    let mut all: BTreeSet<Weight> = simple.iter().cloned().collect();
    let mut layer: Vec<Weight> = simple.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for b in &layer {
            for (i, a) in simple.iter().enumerate() {
                if b != a && b.pairing(i) == -1 {
                    let s = b.add(a);
                    if all.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
        }
        layer = next;
    }
    all.into_iter().collect()
}

/// |W| by iterated orbit-stabilizer: the stabilizer of the last fundamental
/// weight is the parabolic subgroup on the remaining nodes.
pub fn weyl_order_of(cartan: &[Vec<i64>]) -> u64 {
    let n = cartan.len();
    if n == 0 {
        return 1;
    }
    let orbit = orbit_with(cartan, &Weight::fundamental(n, n - 1)).len() as u64;
    let sub: Vec<Vec<i64>> = cartan[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
    orbit * weyl_order_of(&sub)
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub id: RootSystemId,
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub omega: Weight,
    inverse_cartan: Vec<Vec<Rational>>,
}

pub fn build_root_system(id: RootSystemId) -> RootSystem {
    let cartan = id.cartan();
    let r = id.rank();
    let simple_roots = cartan.iter().map(|row| Weight(row.clone())).collect();
    let positive_roots = positive_roots_of(&cartan);
    let omega = Weight::fundamental(r, id.marked_root_index() - 1);
    let inverse_cartan = invert(&cartan);
    RootSystem {
        id,
        cartan,
        simple_roots,
        positive_roots,
        omega,
        inverse_cartan,
    }
}

fn invert(c: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = c.len();
    let m = RatMatrix::from_dense(&c.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect::<Vec<_>>());
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut e = vec![Rational::zero(); n];
            e[j] = rat(1);
            crate::polyalg::solve(&m, &e).expect("Cartan matrix is invertible")
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// Zero-based index of the marked simple root.
    pub fn marked(&self) -> usize {
        self.id.marked_root_index() - 1
    }

    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        reflect_with(&self.cartan, w, i)
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        Weight::fundamental(self.rank(), i)
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// W-invariant inner product with roots of square length 2.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if *bj != 0 {
                    acc += &self.inverse_cartan[i][j] * rat(ai * bj);
                }
            }
        }
        acc
    }

    /// Coefficients of `w` in the simple-root basis, if all are integers.
    pub fn root_coords(&self, w: &Weight) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        let n = self.rank();
        (0..n)
            .map(|i| {
                let q = (0..n).fold(Rational::zero(), |acc, j| acc + &self.inverse_cartan[i][j] * rat(w.0[j]));
                if q.is_integer() {
                    q.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        orbit_with(&self.cartan, w)
    }

    pub fn weyl_group_order(&self) -> u64 {
        weyl_order_of(&self.cartan)
    }

    /// Cartan matrix with the marked node deleted.
    pub fn levi_cartan(&self) -> Vec<Vec<i64>> {
        let m = self.marked();
        self.cartan
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != m)
            .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != m).map(|(_, v)| *v).collect())
            .collect()
    }

    /// All roots (positive and negative).
    pub fn roots(&self) -> Vec<Weight> {
        let mut v: Vec<Weight> = self.positive_roots.iter().flat_map(|r| [r.clone(), r.neg()]).collect();
        v.sort();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_axioms() {
        for id in RootSystemId::ALL {
            let rs = build_root_system(id);
            for i in 0..rs.rank() {
                assert_eq!(rs.cartan[i][i], 2);
                for j in 0..rs.rank() {
                    if i != j {
                        assert!(rs.cartan[i][j] == 0 || rs.cartan[i][j] == -1);
                        assert_eq!(rs.cartan[i][j], rs.cartan[j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn positive_root_counts() {
        // |roots| = dim g - r with dim g = 24, 45, 78, 133
        let expected = [(RootSystemId::A4, 10, 24), (RootSystemId::D5, 20, 45), (RootSystemId::E6, 36, 78), (RootSystemId::E7, 63, 133)];
        for (id, n, dim) in expected {
            let rs = build_root_system(id);
            assert_eq!(rs.positive_roots.len(), n, "{id}");
            assert_eq!(2 * n + id.rank(), dim);
            for r in &rs.positive_roots {
                let c = rs.root_coords(r).expect("integral");
                assert!(c.iter().all(|&x| x >= 0));
            }
        }
    }

    #[test]
    fn predecessor_chain() {
        assert_eq!(RootSystemId::E7.predecessor(), Some(RootSystemId::E6));
        assert_eq!(RootSystemId::E6.marked_root_index(), 6);
        assert_eq!(RootSystemId::E6.predecessor(), Some(RootSystemId::D5));
        assert_eq!(RootSystemId::D5.predecessor(), Some(RootSystemId::A4));
        assert_eq!(RootSystemId::A4.predecessor(), None);
    }

    #[test]
    fn levi_root_counts() {
        for (id, n) in [(RootSystemId::E7, 36), (RootSystemId::E6, 20), (RootSystemId::D5, 10)] {
            let rs = build_root_system(id);
            assert_eq!(positive_roots_of(&rs.levi_cartan()).len(), n);
        }
    }

    #[test]
    fn minuscule_orbit_sizes() {
        for (id, n) in [(RootSystemId::A4, 10), (RootSystemId::D5, 16), (RootSystemId::E6, 27), (RootSystemId::E7, 56)] {
            let rs = build_root_system(id);
            assert_eq!(rs.weyl_orbit(&rs.omega).len(), n);
            assert_eq!(rs.weyl_orbit(&Weight::zero(rs.rank())), vec![Weight::zero(rs.rank())]);
        }
    }

    #[test]
    fn first_fundamental_orbits() {
        for (id, n) in [(RootSystemId::A4, 5), (RootSystemId::D5, 10), (RootSystemId::E6, 27), (RootSystemId::E7, 126)] {
            let rs = build_root_system(id);
            assert_eq!(rs.weyl_orbit(&rs.fundamental_weight(0)).len(), n);
        }
        let e7 = build_root_system(RootSystemId::E7);
        assert_eq!(e7.weyl_orbit(&e7.fundamental_weight(0)), e7.roots());
    }

    #[test]
    fn weyl_orders_match_regular_orbit() {
        for (id, n) in [(RootSystemId::A4, 120), (RootSystemId::D5, 1920), (RootSystemId::E6, 51840)] {
            let rs = build_root_system(id);
            assert_eq!(rs.weyl_group_order(), n);
            assert_eq!(rs.weyl_orbit(&rs.rho()).len() as u64, n);
        }
        assert_eq!(build_root_system(RootSystemId::E7).weyl_group_order(), 2_903_040);
    }

    #[test]
    fn inner_products() {
        let rs = build_root_system(RootSystemId::E6);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(rs.inner_product(&rs.simple_roots[i], &rs.simple_roots[j]), rat(rs.cartan[i][j]));
            }
        }
        assert_eq!(rs.inner_product(&rs.omega, &rs.omega), crate::polyalg::ratio(4, 3));
    }

    #[test]
    fn reflections_are_involutions() {
        let rs = build_root_system(RootSystemId::E7);
        for w in rs.weyl_orbit(&rs.omega) {
            for i in 0..7 {
                assert_eq!(rs.reflect(&rs.reflect(&w, i), i), w);
            }
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!("e6".parse::<RootSystemId>().unwrap(), RootSystemId::E6);
        assert!("g2".parse::<RootSystemId>().is_err());
        assert_eq!(RootSystemId::from_degree(3).unwrap(), RootSystemId::E6);
        assert!(RootSystemId::from_degree(6).is_err());
    }
}
