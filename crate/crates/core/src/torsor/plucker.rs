//! The A4 representation modelled on `Λ³k⁵`, whose decomposable vectors are
//! the Plücker vectors of 2-planes in `k⁵*`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::minrep::{equivariant_signs, MinusculeRep};
use crate::polyalg::{Poly, Rational};
use crate::rootsys::{RootSystemId, Weight};

/// Sorted triples in `{0,…,4}`, lexicographic.
pub fn triples() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn complement(t: &[usize; 3]) -> (usize, usize) {
    let rest: Vec<usize> = (0..5).filter(|x| !t.contains(x)).collect();
    (rest[0], rest[1])
}

/// Sign of the permutation `(a, b, c, i, j)` of `(0, …, 4)`.
fn shuffle_sign(t: &[usize; 3]) -> i64 {
    let (i, j) = complement(t);
    let seq = [t[0], t[1], t[2], i, j];
    let mut inv = 0;
    for x in 0..5 {
        for y in x + 1..5 {
            if seq[x] > seq[y] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn triple_weight(t: &[usize; 3]) -> Weight {
    Weight((0..4).map(|j| i64::from(t.contains(&j)) - i64::from(t.contains(&(j + 1)))).collect())
}

/// Raising operator `E_{i,i+1}` on `e_abc`.
fn wedge_raise(i: usize, t: &[usize; 3]) -> Option<[usize; 3]> {
    if t.contains(&(i + 1)) && !t.contains(&i) {
        let mut u = *t;
        for x in &mut u {
            if *x == i + 1 {
                *x = i;
            }
        }
        Some(u)
    } else {
        None
    }
}

/// Signed identification of the wedge model with the A4 weight basis.
#[derive(Clone, Debug)]
pub struct PluckerChart {
    /// `(basis index, sign)` for each triple in [`triples`] order.
    pub slots: Vec<(usize, i8)>,
}

impl PluckerChart {
    pub fn new(rep: &MinusculeRep) -> Result<PluckerChart> {
        if rep.rs.id != RootSystemId::A4 {
            return Err(Error::UnknownSystem(rep.rs.id.to_string()));
        }
        let ts = triples();
        let map: Vec<usize> = ts
            .iter()
            .map(|t| rep.index_of(&triple_weight(t)).ok_or_else(|| Error::NotInOrbit(triple_weight(t).to_string())))
            .collect::<Result<_>>()?;
        let raise_a = |i: usize, k: usize| wedge_raise(i, &ts[k]).map(|u| (ts.iter().position(|x| *x == u).expect("triple"), 1i8));
        let raise_b = |i: usize, k: usize| rep.raise[i].image(k);
        let signs = equivariant_signs(4, ts.len(), &map, &raise_a, &raise_b).ok_or(Error::NoEquivariantBijection {
            succ: RootSystemId::A4,
            pred: RootSystemId::A4,
        })?;
        Ok(PluckerChart {
            slots: map.into_iter().zip(signs).collect(),
        })
    }

    /// Wedge coordinates `x_abc = sgn(abc, ij)·p_ij(M)`, for `{i,j}` the
    /// complement of `{a,b,c}`.
    pub fn wedge_point(m: &[[Rational; 5]; 2]) -> Vec<Rational> {
        triples()
            .iter()
            .map(|t| {
                let (i, j) = complement(t);
                let p = &m[0][i] * &m[1][j] - &m[0][j] * &m[1][i];
                if shuffle_sign(t) > 0 {
                    p
                } else {
                    -p
                }
            })
            .collect()
    }

    pub fn to_basis(&self, wedge: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); wedge.len()];
        for ((k, s), x) in self.slots.iter().zip(wedge) {
            out[*k] = if *s > 0 { x.clone() } else { -x.clone() };
        }
        out
    }

    pub fn point(&self, m: &[[Rational; 5]; 2]) -> Vec<Rational> {
        self.to_basis(&Self::wedge_point(m))
    }

    /// Basis index of the coordinate `p_ij` (`i < j`) and its sign.
    pub fn slot_of_pair(&self, i: usize, j: usize) -> (usize, i8) {
        let k = triples().iter().position(|t| complement(t) == (i.min(j), i.max(j))).expect("pair in 0..5");
        let (idx, s) = self.slots[k];
        (idx, s * shuffle_sign(&triples()[k]) as i8)
    }
}

/// The relations `p_ij p_kl − p_ik p_jl + p_il p_jk` for `i<j<k<l`, written
/// in the A4 basis and made primitive.
pub fn classical_relations(chart: &PluckerChart) -> Vec<Poly> {
    let p = |i: usize, j: usize| {
        let (k, s) = chart.slot_of_pair(i, j);
        Poly::var(k).scale(&Rational::from_integer(i64::from(s).into()))
    };
    let mut out = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                for l in k + 1..5 {
                    let rel = p(i, j).mul(&p(k, l)).sub(&p(i, k).mul(&p(j, l))).add(&p(i, l).mul(&p(j, k)));
                    out.push(rel.primitive());
                }
            }
        }
    }
    out
}
