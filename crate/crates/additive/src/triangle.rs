//! Triangles `x, y, x + y` inside a set, their density, and removal distance.
//!
//! Degenerate triangles (`x = 0`, `y = 0` or `x = y`) are counted unless the
//! nondegenerate variant is asked for. They only arise when `0` is in the set.

use cubelab_core::spectrum::fwht_i64;
use cubelab_core::{check_arity, Error, Result};
use num_rational::Ratio;

use crate::set::F2Set;

pub const SPECTRAL_LIMIT: usize = 24;
pub const BRUTE_FORCE_LIMIT: usize = 13;
pub const EXACT_REMOVAL_LIMIT: usize = 8;
pub const GREEDY_REMOVAL_LIMIT: usize = 20;
/// Search nodes allowed to the exact removal search.
pub const REMOVAL_BUDGET: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Degeneracy {
    /// Every pair `(x, y)`, matching "no `x, y, x + y` in `A`".
    #[default]
    Inclusive,
    /// Only pairs with `x, y, x + y` distinct and nonzero.
    Nondegenerate,
}

/// Ordered pairs `(x, y)` with `x, y, x + y` all in `A` and `x = 0`, `y = 0`
/// or `x = y`: `1_A(0) (3|A| - 2)`.
fn degenerate_pairs(a: &F2Set) -> u64 {
    if a.contains(0) {
        3 * a.len() as u64 - 2
    } else {
        0
    }
}

/// `#{(x, y) : x, y, x + y in A}` as `2^{-n} sum_S hat(S)^3` with the
/// unnormalized transform of the indicator, in exact integers.
pub fn triangle_count(a: &F2Set, mode: Degeneracy) -> Result<u64> {
    check_arity("triangle density", a.n(), SPECTRAL_LIMIT)?;
    let mut hat = a.indicator();
    fwht_i64(&mut hat);
    let cubes: i128 = hat.iter().map(|&v| (v as i128).pow(3)).sum();
    let total = (cubes >> a.n()) as u64;
    Ok(match mode {
        Degeneracy::Inclusive => total,
        Degeneracy::Nondegenerate => total - degenerate_pairs(a),
    })
}

/// The same count by looping over all pairs.
pub fn triangle_count_brute(a: &F2Set, mode: Degeneracy) -> Result<u64> {
    check_arity("triangle brute force", a.n(), BRUTE_FORCE_LIMIT)?;
    let members: Vec<usize> = a.iter().collect();
    let mut count = 0u64;
    for &x in &members {
        for &y in &members {
            if a.contains(x ^ y)
                && (mode == Degeneracy::Inclusive || (x != 0 && y != 0 && x != y))
            {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `Pr_{x,y}[x, y, x + y in A]` as an exact fraction over `4^n`.
pub fn triangle_density(a: &F2Set) -> Result<Ratio<u64>> {
    triangle_density_with(a, Degeneracy::Inclusive)
}

pub fn triangle_density_with(a: &F2Set, mode: Degeneracy) -> Result<Ratio<u64>> {
    Ok(Ratio::new(triangle_count(a, mode)?, 1u64 << (2 * a.n())))
}

pub fn triangle_density_brute(a: &F2Set, mode: Degeneracy) -> Result<Ratio<u64>> {
    Ok(Ratio::new(triangle_count_brute(a, mode)?, 1u64 << (2 * a.n())))
}

/// Triangles as element sets: the singleton `{0}` and pairs `{0, y}` when
/// inclusive and `0` is present, then the triples `x < y < x + y`.
fn triangles(a: &F2Set, mode: Degeneracy) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if mode == Degeneracy::Inclusive && a.contains(0) {
        out.push(vec![0]);
        out.extend(a.iter().filter(|&y| y != 0).map(|y| vec![0, y]));
    }
    let members: Vec<usize> = a.iter().filter(|&x| x != 0).collect();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let z = x ^ y;
            if z > y && a.contains(z) {
                out.push(vec![x, y, z]);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemovalMode {
    /// Minimum hitting set by branch and bound.
    Exact,
    /// Repeatedly delete the element on the most surviving triangles,
    /// lowest element on ties. An upper bound on the exact value.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    /// Elements deleted, ascending.
    pub removed: Vec<usize>,
}

impl Removal {
    pub fn distance(&self) -> usize {
        self.removed.len()
    }
}

/// Fewest deletions (or the greedy count) leaving `A` triangle-free.
pub fn triangle_removal_distance(a: &F2Set, mode: RemovalMode, degeneracy: Degeneracy) -> Result<Removal> {
    let limit = match mode {
        RemovalMode::Exact => EXACT_REMOVAL_LIMIT,
        RemovalMode::Greedy => GREEDY_REMOVAL_LIMIT,
    };
    check_arity("triangle removal", a.n(), limit)?;
    let hyper = Hypergraph::new(a.universe(), triangles(a, degeneracy));
    let mut removed = match mode {
        RemovalMode::Greedy => hyper.greedy(),
        RemovalMode::Exact => hyper.minimum_cover(REMOVAL_BUDGET)?,
    };
    removed.sort_unstable();
    Ok(Removal { removed })
}

/// Edges over vertices `0..size`, with vertex-to-edge incidence.
struct Hypergraph {
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl Hypergraph {
    fn new(size: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut incident = vec![Vec::new(); size];
        for (e, edge) in edges.iter().enumerate() {
            for &v in edge {
                incident[v].push(e);
            }
        }
        Self { edges, incident }
    }

    fn greedy(&self) -> Vec<usize> {
        let mut alive = vec![true; self.edges.len()];
        let mut degree: Vec<usize> = self.incident.iter().map(Vec::len).collect();
        let mut removed = Vec::new();
        loop {
            // max_by_key keeps the last maximum, so scan in reverse
            let best = (0..degree.len()).rev().max_by_key(|&v| degree[v]);
            let Some(v) = best.filter(|&v| degree[v] > 0) else {
                break;
            };
            removed.push(v);
            for &e in &self.incident[v] {
                if alive[e] {
                    alive[e] = false;
                    for &u in &self.edges[e] {
                        degree[u] -= 1;
                    }
                }
            }
        }
        removed
    }

    fn minimum_cover(&self, budget: u64) -> Result<Vec<usize>> {
        let mut best = self.greedy();
        let mut search = CoverSearch {
            graph: self,
            hits: vec![0; self.edges.len()],
            state: vec![VertexState::Open; self.incident.len()],
            chosen: Vec::new(),
            nodes: 0,
            budget,
        };
        search.branch(&mut best)?;
        Ok(best)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VertexState {
    Open,
    Removed,
    Kept,
}

struct CoverSearch<'a> {
    graph: &'a Hypergraph,
    /// Removed vertices on each edge.
    hits: Vec<u32>,
    state: Vec<VertexState>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CoverSearch<'_> {
    fn set_removed(&mut self, v: usize, on: bool) {
        self.state[v] = if on { VertexState::Removed } else { VertexState::Open };
        for &e in &self.graph.incident[v] {
            if on {
                self.hits[e] += 1;
            } else {
                self.hits[e] -= 1;
            }
        }
        if on {
            self.chosen.push(v);
        } else {
            self.chosen.pop();
        }
    }

    /// Greedy packing of pairwise disjoint uncovered edges: each needs its own deletion.
    fn packing_bound(&self) -> usize {
        let mut used = vec![false; self.state.len()];
        let mut count = 0;
        for (e, edge) in self.graph.edges.iter().enumerate() {
            if self.hits[e] == 0 && edge.iter().all(|&v| !used[v]) {
                for &v in edge {
                    used[v] = true;
                }
                count += 1;
            }
        }
        count
    }

    fn branch(&mut self, best: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "exact triangle removal",
                needed: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        if self.chosen.len() + self.packing_bound() >= best.len() {
            return Ok(());
        }
        // The uncovered edge with the fewest open vertices.
        let pick = self
            .graph
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| self.hits[*e] == 0)
            .map(|(e, edge)| {
                let open: Vec<usize> = edge
                    .iter()
                    .copied()
                    .filter(|&v| self.state[v] == VertexState::Open)
                    .collect();
                (e, open)
            })
            .min_by_key(|(_, open)| open.len());
        let Some((_, open)) = pick else {
            *best = self.chosen.clone();
            return Ok(());
        };
        // Branch i deletes open[i] and keeps open[..i].
        let mut kept = Vec::new();
        for &v in &open {
            self.set_removed(v, true);
            let result = self.branch(best);
            self.set_removed(v, false);
            result?;
            self.state[v] = VertexState::Kept;
            kept.push(v);
        }
        for v in kept {
            self.state[v] = VertexState::Open;
        }
        Ok(())
    }
}
