//! Universal torsors as intersections of torus dilatations of the cone
//! `(G/P)_a`, built inductively from the Grassmannian `Gr(2,5)`.

pub mod plucker;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::atlas::{self, Atlas};
use crate::error::{Error, Result};
use crate::gpideal::ver_mu;
use crate::polyalg::{rank, rat, Poly, RatMatrix, Rational};
use crate::rootsys::{RootSystemId, Weight};

use plucker::PluckerChart;

pub use rand::SeedableRng;

pub type TorsorRng = ChaCha8Rng;

/// Samples stored with every presentation.
pub const SAMPLE_COUNT: usize = 5;
/// Attempts per random choice before giving up.
pub const RETRY_BUDGET: usize = 64;
/// Random integers are drawn from `[-DRAW_BOUND, DRAW_BOUND]`.
pub const DRAW_BOUND: i64 = 9;

/// Point of the diagonal torus, identified with `V^×` through the all-ones
/// vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint(Vec<Rational>);

impl TorusPoint {
    pub fn new(coords: Vec<Rational>) -> Result<TorusPoint> {
        match coords.iter().position(Zero::is_zero) {
            Some(k) => Err(Error::ZeroCoordinate(k)),
            None => Ok(TorusPoint(coords)),
        }
    }

    pub fn identity(n: usize) -> TorusPoint {
        TorusPoint(vec![Rational::one(); n])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    pub fn mul(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint(torus_mul(&self.0, &other.0))
    }

    pub fn inv(&self) -> TorusPoint {
        TorusPoint(self.0.iter().map(|x| x.recip()).collect())
    }

    /// Coordinatewise action on an arbitrary vector.
    pub fn act(&self, v: &[Rational]) -> Vec<Rational> {
        torus_mul(&self.0, v)
    }
}

pub fn torus_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn torus_div(a: &[Rational], b: &[Rational]) -> Result<Vec<Rational>> {
    if let Some(k) = b.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoordinate(k));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x / y).collect())
}

/// One blow-up step: the choices that determine the successor torsor.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub from: RootSystemId,
    pub to: RootSystemId,
    /// Base point in the predecessor torsor.
    pub x0: Vec<Rational>,
    /// Normalizing point, the anchor of the predecessor.
    pub y0: Vec<Rational>,
    /// `exp(x0⁻¹ y0²)`, the anchor of the successor.
    pub t: Vec<Rational>,
    /// Integer vectors `v_i` giving the cone points `w_i = exp'(v_i)`.
    pub v: Vec<Vec<i64>>,
    pub w: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct TorsorPresentation {
    pub system: RootSystemId,
    /// `z_0 = 1, z_1, …, z_{r−4}`.
    pub dilatations: Vec<TorusPoint>,
    /// `P_μ(z_i·u)`, grouped by `i` and then by `μ`.
    pub equations: Vec<Poly>,
    pub labels: Vec<(usize, Weight)>,
    pub samples: Vec<Vec<Rational>>,
    pub provenance: Vec<StepRecord>,
    /// The point `t` of the last step (a chosen sample for A4).
    pub anchor: Vec<Rational>,
    /// Integer matrices whose Plücker points are the A4 samples.
    pub seed_matrices: Vec<[[i64; 5]; 2]>,
}

impl TorsorPresentation {
    pub fn expected_dimension(&self) -> usize {
        self.system.rank() + 3
    }

    pub fn expected_jacobian_rank(&self) -> usize {
        atlas::get(self.system).map(|a| a.rep.dim()).unwrap_or(0) - self.expected_dimension()
    }

    pub fn expected_equation_count(&self) -> usize {
        let r = self.system.rank();
        let orbit = atlas::get(self.system).map(|a| a.ideal.generators.len()).unwrap_or(0);
        (r - 3) * orbit
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        for e in &self.equations {
            if !e.evaluate(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every stated property of a presentation, checked exactly.
    pub fn check(&self) -> Result<()> {
        let a = atlas::get(self.system)?;
        let r = self.system.rank();
        if self.dilatations.len() != r - 3 || !self.dilatations[0].is_identity() {
            return Err(Error::Invariant(format!("{} dilatations, first must be the identity", self.dilatations.len())));
        }
        if self.equations.len() != self.expected_equation_count() {
            return Err(Error::Invariant(format!("{} equations, expected {}", self.equations.len(), self.expected_equation_count())));
        }
        if !general_position_check(a, &self.dilatations) {
            return Err(Error::Invariant("dilatations are not in general position".into()));
        }
        if self.samples.len() < SAMPLE_COUNT {
            return Err(Error::Invariant(format!("only {} samples", self.samples.len())));
        }
        let want = self.expected_jacobian_rank();
        for s in &self.samples {
            TorusPoint::new(s.clone())?;
            let got = jacobian_rank(&self.equations, s)?;
            if got != want {
                return Err(Error::Invariant(format!("{}: Jacobian rank {got} at a sample, expected {want}", self.system)));
            }
        }
        Ok(())
    }
}

fn draw_matrix(rng: &mut TorsorRng) -> [[i64; 5]; 2] {
    let mut m = [[0i64; 5]; 2];
    for row in &mut m {
        for x in row.iter_mut() {
            *x = rng.gen_range(-DRAW_BOUND..=DRAW_BOUND);
        }
    }
    m
}

fn minors_nonzero(m: &[[i64; 5]; 2]) -> bool {
    (0..5).all(|i| (i + 1..5).all(|j| m[0][i] * m[1][j] != m[0][j] * m[1][i]))
}

fn to_rational_matrix(m: &[[i64; 5]; 2]) -> [[Rational; 5]; 2] {
    m.map(|row| row.map(rat))
}

fn draw_plucker(rng: &mut TorsorRng, chart: &PluckerChart) -> Result<([[i64; 5]; 2], Vec<Rational>)> {
    for _ in 0..RETRY_BUDGET {
        let m = draw_matrix(rng);
        if minors_nonzero(&m) {
            return Ok((m, chart.point(&to_rational_matrix(&m))));
        }
    }
    Err(Error::RetriesExhausted {
        what: "2x5 matrix with nonzero minors",
        attempts: RETRY_BUDGET,
    })
}

fn a4_chart() -> Result<PluckerChart> {
    PluckerChart::new(&atlas::get(RootSystemId::A4)?.rep)
}

/// The Grassmannian cone `Gr(2,5)_a` as the degree-5 torsor.
pub fn seed_torsor_a4(rng: &mut TorsorRng) -> Result<TorsorPresentation> {
    let a = atlas::get(RootSystemId::A4)?;
    let chart = a4_chart()?;
    let mut seed_matrices = Vec::new();
    let mut samples = Vec::new();
    for _ in 0..SAMPLE_COUNT {
        let (m, p) = draw_plucker(rng, &chart)?;
        seed_matrices.push(m);
        samples.push(p);
    }
    let tp = TorsorPresentation {
        system: RootSystemId::A4,
        dilatations: vec![TorusPoint::identity(a.rep.dim())],
        equations: a.ideal.generators.iter().map(|g| g.poly.clone()).collect(),
        labels: a.ideal.generators.iter().map(|g| (0, g.mu.clone())).collect(),
        anchor: samples[0].clone(),
        samples,
        provenance: Vec::new(),
        seed_matrices,
    };
    tp.check()?;
    Ok(tp)
}

/// `exp(x0⁻¹ y0 x)` in the successor when all its coordinates are nonzero.
///
/// `x0`, `y0`, `x` are predecessor vectors; `succ` is the successor atlas.
pub fn omega_image(succ: &Atlas, x0: &[Rational], y0: &[Rational], x: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let emb = succ.embedding.as_ref().ok_or(Error::NoPredecessor(succ.id()))?;
    let a = torus_mul(&torus_div(y0, x0)?, x);
    let pt = succ.exp.exp_point(&emb.to_v1(&a));
    Ok(pt.iter().all(|c| !c.is_zero()).then_some(pt))
}

/// Whether `x` avoids every `Z_μ(x0)` (and `Z_0(x0)` for E7): the degree-2
/// and degree-3 coordinates of `exp(x0⁻¹ y0 x)` are nonzero. Points with a
/// vanishing degree-1 coordinate are rejected as well.
pub fn omega_test(succ: &Atlas, x0: &[Rational], y0: &[Rational], x: &[Rational]) -> Result<bool> {
    Ok(omega_image(succ, x0, y0, x)?.is_some())
}

/// A fresh point of the torsor at the end of `chain`, with all coordinates
/// nonzero.
pub fn fresh_sample(chain: &[StepRecord], rng: &mut TorsorRng) -> Result<Vec<Rational>> {
    let Some((step, rest)) = chain.split_last() else {
        return Ok(draw_plucker(rng, &a4_chart()?)?.1);
    };
    let succ = atlas::get(step.to)?;
    for _ in 0..RETRY_BUDGET {
        let u = fresh_sample(rest, rng)?;
        if let Some(p) = omega_image(succ, &step.x0, &step.y0, &u)? {
            return Ok(p);
        }
    }
    Err(Error::RetriesExhausted {
        what: "torsor sample passing the omega test",
        attempts: RETRY_BUDGET,
    })
}

/// For every `μ ∈ Wω₁` the vectors `Ver_μ(z_i)` are linearly independent.
pub fn general_position_check(a: &Atlas, dilatations: &[TorusPoint]) -> bool {
    a.ideal.generators.iter().all(|g| {
        let rows: Vec<Vec<Rational>> = dilatations.iter().map(|z| ver_mu(&a.rep, &g.mu, z.coords())).collect();
        rank(&RatMatrix::from_dense(&rows)) == dilatations.len()
    })
}

/// Exact rank of the Jacobian matrix of `equations` at `point`.
pub fn jacobian_rank(equations: &[Poly], point: &[Rational]) -> Result<usize> {
    let mut failing = 0;
    let mut m = RatMatrix::zeros(0, point.len());
    for e in equations {
        if !e.evaluate(point)?.is_zero() {
            failing += 1;
            continue;
        }
        let mut grad: std::collections::BTreeMap<usize, Rational> = std::collections::BTreeMap::new();
        for (mono, c) in e.terms() {
            let mut vars = mono.vars().to_vec();
            vars.dedup();
            for v in vars {
                let rest = mono.without_one(v).expect("present");
                let d = c * rat(mono.exponent(v) as i64) * rest.evaluate(point)?;
                *grad.entry(v).or_insert_with(Rational::zero) += d;
            }
        }
        m.push_sparse_row(grad.into_iter().filter(|(_, c)| !c.is_zero()));
    }
    if failing > 0 {
        return Err(Error::NotOnVariety(failing));
    }
    Ok(rank(&m))
}

fn draw_vector(rng: &mut TorsorRng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-DRAW_BOUND..=DRAW_BOUND)).collect()
}

/// From the torsor over a surface of degree `d` to one of degree `d − 1`.
pub fn blow_up_step(prev: &TorsorPresentation, rng: &mut TorsorRng) -> Result<TorsorPresentation> {
    let to = prev.system.successor().ok_or(Error::NoSuccessor(prev.system))?;
    let succ = atlas::get(to)?;
    let pred = atlas::get(prev.system)?;
    let r = to.rank();
    let y0 = prev.anchor.clone();

    let mut x0 = None;
    for _ in 0..RETRY_BUDGET {
        let cand = fresh_sample(&prev.provenance, rng)?;
        if omega_test(succ, &cand, &y0, &y0)? {
            x0 = Some(cand);
            break;
        }
    }
    let x0 = x0.ok_or(Error::RetriesExhausted {
        what: "base point x0 with y0 in its omega set",
        attempts: RETRY_BUDGET,
    })?;
    let t = TorusPoint::new(omega_image(succ, &x0, &y0, &y0)?.expect("tested above"))?;
    let t_inv = t.inv();

    let mut dilatations = vec![TorusPoint::identity(succ.rep.dim())];
    let (mut vs, mut ws) = (Vec::new(), Vec::new());
    while dilatations.len() < r - 3 {
        let mut found = false;
        for _ in 0..RETRY_BUDGET {
            let v = draw_vector(rng, pred.exp.v1_len());
            let w = pred.exp.exp_point(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>());
            let Some(e) = omega_image(succ, &x0, &y0, &w)? else { continue };
            let z = TorusPoint::new(t_inv.act(&e))?;
            dilatations.push(z);
            if general_position_check(succ, &dilatations) {
                vs.push(v);
                ws.push(w);
                found = true;
                break;
            }
            dilatations.pop();
        }
        if !found {
            return Err(Error::RetriesExhausted {
                what: "dilatation point in general position",
                attempts: RETRY_BUDGET,
            });
        }
    }

    let mut equations = Vec::new();
    let mut labels = Vec::new();
    for (i, z) in dilatations.iter().enumerate() {
        for g in &succ.ideal.generators {
            equations.push(g.poly.dilate(z.coords())?);
            labels.push((i, g.mu.clone()));
        }
    }

    let step = StepRecord {
        from: prev.system,
        to,
        x0: x0.clone(),
        y0: y0.clone(),
        t: t.coords().to_vec(),
        v: vs,
        w: ws,
    };
    let mut provenance = prev.provenance.clone();
    provenance.push(step);

    let mut samples = Vec::new();
    for u in &prev.samples {
        if let Some(p) = omega_image(succ, &x0, &y0, u)? {
            samples.push(p);
        }
    }
    while samples.len() < SAMPLE_COUNT {
        samples.push(fresh_sample(&provenance, rng)?);
    }

    let tp = TorsorPresentation {
        system: to,
        dilatations,
        equations,
        labels,
        samples,
        provenance,
        anchor: t.coords().to_vec(),
        seed_matrices: prev.seed_matrices.clone(),
    };
    tp.check()?;
    Ok(tp)
}

/// Every presentation from `Gr(2,5)` down to the given degree, driven by one
/// seed. Prefixes agree for all target degrees.
pub fn build_chain(degree: u32, seed: u64) -> Result<Vec<TorsorPresentation>> {
    let target = RootSystemId::from_degree(degree)?;
    let mut rng = TorsorRng::seed_from_u64(seed);
    let mut chain = vec![seed_torsor_a4(&mut rng)?];
    while chain.last().expect("nonempty").system != target {
        let next = blow_up_step(chain.last().expect("nonempty"), &mut rng)?;
        chain.push(next);
    }
    Ok(chain)
}

pub fn build_torsor(degree: u32, seed: u64) -> Result<TorsorPresentation> {
    Ok(build_chain(degree, seed)?.pop().expect("nonempty"))
}

/// Recomputes `t` and the dilatation points of a step from its recorded
/// choices.
pub fn replay_step(step: &StepRecord) -> Result<(TorusPoint, Vec<TorusPoint>)> {
    let succ = atlas::get(step.to)?;
    let pred = atlas::get(step.from)?;
    let missing = || Error::Invariant("recorded point fails the omega test".into());
    let t = TorusPoint::new(omega_image(succ, &step.x0, &step.y0, &step.y0)?.ok_or_else(missing)?)?;
    let t_inv = t.inv();
    let mut zs = vec![TorusPoint::identity(succ.rep.dim())];
    for (v, w) in step.v.iter().zip(&step.w) {
        let w2 = pred.exp.exp_point(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>());
        if &w2 != w {
            return Err(Error::Invariant("recorded w differs from exp(v)".into()));
        }
        let e = omega_image(succ, &step.x0, &step.y0, w)?.ok_or_else(missing)?;
        zs.push(TorusPoint::new(t_inv.act(&e))?);
    }
    Ok((t, zs))
}

/// Outcome of [`pn_product_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub n: usize,
    pub trials: usize,
    pub failures: usize,
}

/// Tests `t·∏_{j=0}^{n} (t⁻¹ s_j) ∈ (G/P)_a` on random samples `s_j`, using
/// every cone generator including the zero-weight block.
pub fn pn_product_check(tp: &TorsorPresentation, n: usize, trials: usize, rng: &mut TorsorRng) -> Result<ProductReport> {
    let a = atlas::get(tp.system)?;
    let t = TorusPoint::new(tp.anchor.clone())?;
    let t_inv = t.inv();
    let mut failures = 0;
    for _ in 0..trials {
        let mut prod = t.clone();
        for _ in 0..=n {
            let s = TorusPoint::new(fresh_sample(&tp.provenance, rng)?)?;
            prod = prod.mul(&t_inv.mul(&s));
        }
        if !a.ideal.contains_point(prod.coords())? {
            failures += 1;
        }
    }
    Ok(ProductReport { n, trials, failures })
}
