//! Isomorphisms and automorphisms of complete graphs with integer edge labels.

/// Square label matrix; the diagonal is the vertex label.
pub type Labels = Vec<Vec<i64>>;

fn profile(g: &Labels, v: usize) -> Vec<i64> {
    let mut row = g[v].clone();
    row.sort_unstable();
    row.push(g[v][v]);
    row
}

struct Search<'a> {
    a: &'a Labels,
    b: &'a Labels,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn new<'a>(a: &'a Labels, b: &'a Labels) -> Search<'a> {
        Search {
            a,
            b,
            map: vec![None; a.len()],
            used: vec![false; b.len()],
        }
    }

    fn initial_candidates(&self) -> Vec<Vec<usize>> {
        let pb: Vec<Vec<i64>> = (0..self.b.len()).map(|w| profile(self.b, w)).collect();
        (0..self.a.len())
            .map(|u| {
                let pu = profile(self.a, u);
                (0..self.b.len()).filter(|&w| pb[w] == pu).collect()
            })
            .collect()
    }

    fn narrow(&self, cand: &[Vec<usize>], u: usize, w: usize) -> Vec<Vec<usize>> {
        cand.iter()
            .enumerate()
            .map(|(x, cs)| {
                if self.map[x].is_some() {
                    return Vec::new();
                }
                cs.iter().copied().filter(|&y| y != w && self.a[u][x] == self.b[w][y]).collect()
            })
            .collect()
    }

    fn assign(&mut self, cand: Vec<Vec<usize>>, u: usize, w: usize) -> Option<Vec<Vec<usize>>> {
        if !cand[u].contains(&w) {
            return None;
        }
        self.map[u] = Some(w);
        self.used[w] = true;
        Some(self.narrow(&cand, u, w))
    }

    fn extend(&mut self, cand: &[Vec<usize>]) -> bool {
        let pick = (0..self.a.len())
            .filter(|&x| self.map[x].is_none())
            .min_by_key(|&x| cand[x].len());
        let Some(u) = pick else {
            return true;
        };
        for &w in &cand[u] {
            if self.used[w] {
                continue;
            }
            self.map[u] = Some(w);
            self.used[w] = true;
            let next = self.narrow(cand, u, w);
            if self.extend(&next) {
                return true;
            }
            self.map[u] = None;
            self.used[w] = false;
        }
        false
    }
}

/// A label-preserving bijection `a -> b` extending the given pairs, chosen
/// first in the deterministic search order.
pub fn find_isomorphism(a: &Labels, b: &Labels, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let mut s = Search::new(a, b);
    let mut cand = s.initial_candidates();
    for &(u, w) in fixed {
        cand = s.assign(cand, u, w)?;
    }
    if s.extend(&cand) {
        Some(s.map.into_iter().map(|m| m.expect("complete")).collect())
    } else {
        None
    }
}

/// Orbit sizes along a base of the automorphism group; their product is the
/// group order.
pub fn stabilizer_chain(g: &Labels) -> Vec<(usize, usize)> {
    let n = g.len();
    let mut fixed: Vec<(usize, usize)> = Vec::new();
    let mut settled = vec![false; n];
    let mut chain = Vec::new();
    loop {
        let mut progress = false;
        for v in 0..n {
            if settled[v] {
                continue;
            }
            let orbit: Vec<usize> = (0..n)
                .filter(|&w| {
                    let mut pairs = fixed.clone();
                    pairs.push((v, w));
                    find_isomorphism(g, g, &pairs).is_some()
                })
                .collect();
            settled[v] = true;
            if orbit.len() > 1 {
                chain.push((v, orbit.len()));
                fixed.push((v, v));
                progress = true;
                break;
            }
        }
        if !progress {
            return chain;
        }
    }
}

pub fn automorphism_group_order(g: &Labels) -> u64 {
    stabilizer_chain(g).iter().map(|&(_, s)| s as u64).product()
}

pub fn is_automorphism(g: &Labels, perm: &[usize]) -> bool {
    let n = g.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    (0..n).all(|i| (0..n).all(|j| g[i][j] == g[perm[i]][perm[j]]))
}
