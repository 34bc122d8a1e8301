//! Quadratic equations of the affine cone `(G/P)_a ⊂ V` and the section
//! `exp(x) = (1, x, p(x), q(x))` over the degree-1 block.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::minrep::{Grading, MinusculeRep, SignedMap};
use crate::polyalg::{kernel, rank, Monomial, Poly, RatMatrix, Rational};
use crate::rootsys::Weight;

/// Weight-μ generator of the ideal: a quadratic form supported on monomials
/// `x_λ x_λ'` with `λ + λ' = μ`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticGenerator {
    pub mu: Weight,
    pub poly: Poly,
}

#[derive(Clone, Debug)]
pub struct ConeIdeal {
    /// One generator per μ in the orbit of ω₁, in ascending order of μ.
    pub generators: Vec<QuadraticGenerator>,
    /// Zero-weight generators (E7 only).
    pub zero_block: Vec<QuadraticGenerator>,
    by_mu: HashMap<Weight, usize>,
}

impl ConeIdeal {
    pub fn generator(&self, mu: &Weight) -> Option<&QuadraticGenerator> {
        self.by_mu.get(mu).map(|&k| &self.generators[k])
    }

    pub fn all(&self) -> impl Iterator<Item = &QuadraticGenerator> {
        self.generators.iter().chain(&self.zero_block)
    }

    pub fn len(&self) -> usize {
        self.generators.len() + self.zero_block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of generators (including the zero-weight block) not vanishing at `x`.
    pub fn failures_at(&self, x: &[Rational]) -> Result<usize> {
        let mut n = 0;
        for g in self.all() {
            if !g.poly.evaluate(x)?.is_zero() {
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.failures_at(x)? == 0)
    }
}

/// Unordered pairs `{λ, λ'}` of weights with `λ + λ' = μ`, as basis-index
/// pairs in graded-lex monomial order.
pub fn weight_monomials(rep: &MinusculeRep, mu: &Weight) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = rep
        .weights
        .iter()
        .enumerate()
        .filter_map(|(k, w)| {
            let j = rep.index_of(&mu.sub(w))?;
            (k < j).then_some((k, j))
        })
        .collect();
    out.sort_by_key(|&(a, b)| Monomial::pair(a, b));
    out
}

/// Ver_μ: the values of the weight-μ monomials at `x`.
pub fn ver_mu(rep: &MinusculeRep, mu: &Weight, x: &[Rational]) -> Vec<Rational> {
    weight_monomials(rep, mu).into_iter().map(|(a, b)| &x[a] * &x[b]).collect()
}

/// Contragredient action on functions: `(X·Q)(x) = -∇Q(x)·(Xx)`.
fn act_dual(op: &SignedMap, q: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (row, col, s) in op.entries() {
        let d = q.derivative(row);
        if d.is_zero() {
            continue;
        }
        let term = d.mul(&Poly::var(col));
        out = if s > 0 { out.sub(&term) } else { out.add(&term) };
    }
    out
}

/// Transport of a form by the signed permutation lifting `s_i`.
fn reflect_form(rep: &MinusculeRep, i: usize, q: &Poly) -> Poly {
    let mut subs = vec![Poly::zero(); rep.dim()];
    for (k, (t, s)) in rep.reflection(i).into_iter().enumerate() {
        subs[t] = Poly::var(k).scale(&Rational::from_integer((s as i64).into()));
    }
    q.substitute(&|v| subs[v].clone())
}

fn quadric(coeffs: &[Rational], mons: &[(usize, usize)]) -> Poly {
    Poly::from_terms(mons.iter().zip(coeffs).map(|(&(a, b), c)| (Monomial::pair(a, b), c.clone())))
}

pub fn cone_ideal(rep: &MinusculeRep) -> Result<ConeIdeal> {
    let rs = &rep.rs;
    let r = rs.rank();
    let omega1 = rs.fundamental_weight(0);
    let orbit = rs.weyl_orbit(&omega1);
    let orbit_set: BTreeSet<Weight> = orbit.iter().cloned().collect();

    // Lowest weight vector of V(ω₁)* inside S²(V*): forms of weight ω₁ killed
    // by every lowering operator.
    let mons = weight_monomials(rep, &omega1);
    if mons.len() != r - 1 {
        return Err(Error::Ideal(format!("{} weight-ω₁ monomials, expected {}", mons.len(), r - 1)));
    }
    let images: Vec<Vec<Poly>> = (0..r)
        .map(|i| mons.iter().map(|&(a, b)| act_dual(&rep.lower[i], &Poly::from_terms([(Monomial::pair(a, b), Rational::one())]))).collect())
        .collect();
    let mut rows: Vec<(usize, Monomial)> = Vec::new();
    for (i, imgs) in images.iter().enumerate() {
        for p in imgs {
            for m in p.support() {
                if !rows.contains(&(i, m.clone())) {
                    rows.push((i, m.clone()));
                }
            }
        }
    }
    let mut mat = RatMatrix::zeros(rows.len(), mons.len());
    for (ri, (i, m)) in rows.iter().enumerate() {
        for (c, p) in images[*i].iter().enumerate() {
            mat.set(ri, c, p.coeff(m));
        }
    }
    let ker = kernel(&mat);
    if ker.len() != 1 {
        return Err(Error::HighestWeightDimension { found: ker.len() });
    }
    let top = quadric(&ker[0], &mons).primitive();

    // Descend through the orbit with the raising operators, which lower the
    // monomial weight by α_i in the contragredient action.
    let mut found: HashMap<Weight, Poly> = HashMap::from([(omega1.clone(), top)]);
    let mut queue = VecDeque::from([omega1.clone()]);
    while let Some(mu) = queue.pop_front() {
        for i in 0..r {
            let target = mu.sub(&rs.simple_roots[i]);
            if !orbit_set.contains(&target) || found.contains_key(&target) {
                continue;
            }
            let q = act_dual(&rep.raise[i], &found[&mu]);
            if q.is_zero() {
                continue;
            }
            found.insert(target.clone(), q.primitive());
            queue.push_back(target);
        }
        // Weights not reachable by root steps inside the orbit (the negative
        // roots of E7) are reached through the Weyl group.
        for i in 0..r {
            let target = rs.reflect(&mu, i);
            if found.contains_key(&target) {
                continue;
            }
            let q = reflect_form(rep, i, &found[&mu]);
            found.insert(target.clone(), q.primitive());
            queue.push_back(target);
        }
    }
    if found.len() != orbit.len() {
        return Err(Error::Ideal(format!("reached {} of {} weights", found.len(), orbit.len())));
    }
    let generators: Vec<QuadraticGenerator> = orbit
        .iter()
        .map(|mu| QuadraticGenerator {
            mu: mu.clone(),
            poly: found.remove(mu).expect("all weights found"),
        })
        .collect();
    let by_mu = generators.iter().enumerate().map(|(k, g)| (g.mu.clone(), k)).collect();

    // Quasi-minuscule case: the zero weight space is spanned by e_i·P_{α_i}.
    let zero = Weight::zero(r);
    let zero_mons = weight_monomials(rep, &zero);
    let mut zero_block = Vec::new();
    if orbit_set.contains(&rs.simple_roots[0]) {
        let mut span = RatMatrix::zeros(0, zero_mons.len());
        for i in 0..r {
            let p = &generators[by_mu_index(&generators, &rs.simple_roots[i])].poly;
            let q = act_dual(&rep.raise[i], p);
            let row: Vec<Rational> = zero_mons.iter().map(|&(a, b)| q.coeff(&Monomial::pair(a, b))).collect();
            let before = rank(&span);
            span.push_row(&row);
            if rank(&span) > before {
                zero_block.push(QuadraticGenerator {
                    mu: zero.clone(),
                    poly: q.primitive(),
                });
            }
        }
        if zero_block.len() != r {
            return Err(Error::Ideal(format!("zero-weight block has dimension {}, expected {r}", zero_block.len())));
        }
    }

    Ok(ConeIdeal {
        generators,
        zero_block,
        by_mu,
    })
}

fn by_mu_index(gens: &[QuadraticGenerator], mu: &Weight) -> usize {
    gens.iter().position(|g| &g.mu == mu).expect("weight in orbit")
}

/// The section `exp: V1 -> (G/P)_a` as explicit polynomials in the `V1`
/// coordinates (variables are global basis indices).
#[derive(Clone, Debug)]
pub struct ExpSection {
    highest: usize,
    v1: Vec<usize>,
    v2: Vec<usize>,
    v3: Vec<usize>,
    dim: usize,
    /// `p` coordinates, aligned with the degree-2 block.
    pub p: Vec<Poly>,
    /// Degree-3 coordinate (E7 only).
    pub q: Option<Poly>,
}

impl ExpSection {
    pub fn new(rep: &MinusculeRep, grading: &Grading, ideal: &ConeIdeal) -> Result<ExpSection> {
        let h = rep.highest();
        let omega = &rep.rs.omega;
        let bridge = |k: usize| -> Result<(Rational, Poly)> {
            let mu = omega.add(&rep.weights[k]);
            let key = Monomial::pair(h, k);
            let candidates: Vec<&QuadraticGenerator> = if mu.is_zero() {
                ideal.zero_block.iter().collect()
            } else {
                ideal.generator(&mu).into_iter().collect()
            };
            for g in candidates {
                let c = g.poly.coeff(&key);
                if !c.is_zero() {
                    let rest = g.poly.sub(&Poly::from_terms([(key.clone(), c.clone())]));
                    return Ok((c, rest));
                }
            }
            Err(Error::MissingBridge(mu.to_string()))
        };

        let mut p = Vec::with_capacity(grading.parts[2].len());
        for &k in &grading.parts[2] {
            let (c, rest) = bridge(k)?;
            for m in rest.support() {
                if m.vars().iter().any(|&v| grading.degree[v] != 1) {
                    return Err(Error::Invariant(format!("unexpected monomial in bridge for x{k}")));
                }
            }
            p.push(rest.scale(&(-Rational::one() / c)));
        }
        let v2_poly: HashMap<usize, &Poly> = grading.parts[2].iter().copied().zip(p.iter()).collect();
        let q = match grading.parts[3].as_slice() {
            [] => None,
            [k] => {
                let (c, rest) = bridge(*k)?;
                let sub = rest.substitute(&|v| match v2_poly.get(&v) {
                    Some(pp) => (*pp).clone(),
                    None => Poly::var(v),
                });
                Some(sub.scale(&(-Rational::one() / c)))
            }
            _ => return Err(Error::Invariant("degree-3 block has more than one weight".into())),
        };
        let section = ExpSection {
            highest: h,
            v1: grading.parts[1].clone(),
            v2: grading.parts[2].clone(),
            v3: grading.parts[3].clone(),
            dim: rep.dim(),
            p,
            q,
        };
        section.check_identically_on_cone(ideal)?;
        Ok(section)
    }

    /// Symbolic postcondition: every generator vanishes identically on
    /// `exp(V1)`.
    fn check_identically_on_cone(&self, ideal: &ConeIdeal) -> Result<()> {
        let coords = self.symbolic();
        for g in ideal.all() {
            let s = g.poly.substitute(&|v| coords[v].clone());
            if !s.is_zero() {
                return Err(Error::Invariant(format!("exp(x) violates the generator of weight {}", g.mu)));
            }
        }
        Ok(())
    }

    /// Coordinates of `exp(x)` as polynomials in the `V1` variables.
    pub fn symbolic(&self) -> Vec<Poly> {
        let mut coords = vec![Poly::zero(); self.dim];
        coords[self.highest] = Poly::constant(Rational::one());
        for &k in &self.v1 {
            coords[k] = Poly::var(k);
        }
        for (&k, pp) in self.v2.iter().zip(&self.p) {
            coords[k] = pp.clone();
        }
        if let (Some(&k), Some(q)) = (self.v3.first(), &self.q) {
            coords[k] = q.clone();
        }
        coords
    }

    pub fn v1_len(&self) -> usize {
        self.v1.len()
    }

    fn embed_v1(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.v1.len(), "x must live on the degree-1 block");
        let mut full = vec![Rational::zero(); self.dim];
        for (&k, v) in self.v1.iter().zip(x) {
            full[k] = v.clone();
        }
        full
    }

    /// `p(x)` aligned with the degree-2 block.
    pub fn p_values(&self, x: &[Rational]) -> Vec<Rational> {
        let full = self.embed_v1(x);
        self.p.iter().map(|pp| pp.evaluate(&full).expect("bound")).collect()
    }

    pub fn exp_point(&self, x: &[Rational]) -> Vec<Rational> {
        let mut full = self.embed_v1(x);
        full[self.highest] = Rational::one();
        let pv: Vec<Rational> = self.p.iter().map(|pp| pp.evaluate(&full).expect("bound")).collect();
        let qv = self.q.as_ref().map(|q| q.evaluate(&full).expect("bound"));
        for (&k, v) in self.v2.iter().zip(pv) {
            full[k] = v;
        }
        if let (Some(&k), Some(v)) = (self.v3.first(), qv) {
            full[k] = v;
        }
        full
    }

    /// The invariant cubic `q(x)` (only for E7).
    pub fn invariant_cubic(&self, x: &[Rational]) -> Option<Rational> {
        let full = self.embed_v1(x);
        self.q.as_ref().map(|q| q.evaluate(&full).expect("bound"))
    }

    /// Projection `π: V -> V1`.
    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        self.v1.iter().map(|&k| v[k].clone()).collect()
    }
}
