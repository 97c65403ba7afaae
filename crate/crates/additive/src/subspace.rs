//! Affine subspaces of `F_2^n` and searches for them inside a set.

use cubelab_core::{check_arity, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::set::F2Set;

/// Largest dimension for exhaustive subspace search.
pub const EXHAUSTIVE_LIMIT: usize = 14;
/// Default node budget of exhaustive searches.
pub const SEARCH_BUDGET: u64 = 50_000_000;

/// `shift + span(basis)`, stored canonically: the basis is in reduced
/// echelon form ordered by leading bit, and the shift has no leading bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSubspace {
    n: usize,
    basis: Vec<usize>,
    shift: usize,
}

fn leading_bit(v: usize) -> usize {
    usize::BITS as usize - 1 - v.leading_zeros() as usize
}

/// Clears the leading bits of an echelon basis from `v`.
fn reduce(v: usize, basis: &[usize]) -> usize {
    basis.iter().fold(v, |acc, &b| {
        if acc >> leading_bit(b) & 1 == 1 {
            acc ^ b
        } else {
            acc
        }
    })
}

impl AffineSubspace {
    /// Fails when the vectors are dependent or outside `F_2^n`.
    pub fn new(n: usize, vectors: &[usize], shift: usize) -> Result<Self> {
        check_arity("affine subspace", n, cubelab_core::MAX_ARITY)?;
        if let Some(v) = vectors.iter().chain([&shift]).find(|&&v| v >> n != 0) {
            return Err(Error::Domain(format!("vector {v:x} of F_2^{n}")));
        }
        let mut basis: Vec<usize> = Vec::new();
        for &v in vectors {
            let r = reduce(v, &basis);
            if r == 0 {
                return Err(Error::Domain(format!("vector {v:x} depends on the others")));
            }
            // keep the basis reduced: clear the new leading bit elsewhere
            let p = leading_bit(r);
            for b in basis.iter_mut() {
                if *b >> p & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push(r);
        }
        basis.sort_unstable();
        let shift = reduce(shift, &basis);
        Ok(Self { n, basis, shift })
    }

    pub fn linear(n: usize, vectors: &[usize]) -> Result<Self> {
        Self::new(n, vectors, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// The coset representative with every leading bit clear.
    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn codimension(&self) -> usize {
        self.n - self.dimension()
    }

    pub fn contains(&self, x: usize) -> bool {
        x >> self.n == 0 && reduce(x ^ self.shift, &self.basis) == 0
    }

    /// The `2^d` points, in Gray-code order from the shift.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        let mut current = self.shift;
        (0..1usize << self.dimension()).map(move |i| {
            if i > 0 {
                current ^= self.basis[i.trailing_zeros() as usize];
            }
            current
        })
    }

    pub fn to_set(&self) -> F2Set {
        F2Set::from_elements(self.n, self.points()).expect("points lie in F_2^n")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every linear subspace in canonical echelon form, each once, with all
    /// of its cosets. Fails with a budget error past `budget` nodes.
    Exhaustive { budget: u64 },
    /// Uniformly random subspaces; a miss proves nothing.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceHit {
    pub subspace: Option<AffineSubspace>,
    /// Points of the subspace lying in the set.
    pub hits: usize,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// Distinct coset representatives of `S` modulo the current basis, with counts.
type Cosets = Vec<(usize, usize)>;

fn tally(mut reps: Vec<usize>) -> Cosets {
    reps.sort_unstable();
    let mut out: Cosets = Vec::new();
    for r in reps {
        match out.last_mut() {
            Some((last, c)) if *last == r => *c += 1,
            _ => out.push((r, 1)),
        }
    }
    out
}

/// Most populated coset, least representative among ties.
fn best_coset(cosets: &Cosets) -> (usize, usize) {
    cosets
        .iter()
        .copied()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, 0))
}

/// Some affine subspace of dimension `d` with at least `eta * 2^d` of its
/// points in `s`.
pub fn subspace_in_set(s: &F2Set, d: usize, eta: f64, mode: SearchMode) -> Result<SubspaceHit> {
    let n = s.n();
    if d > n {
        return Err(Error::Domain(format!("dimension {d} in F_2^{n}")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("containment fraction {eta}")));
    }
    let need = ((eta * (1u64 << d) as f64) - 1e-9).ceil().max(1.0) as usize;
    match mode {
        SearchMode::Exhaustive { budget } => {
            check_arity("exhaustive subspace search", n, EXHAUSTIVE_LIMIT)?;
            let mut search = Exhaustive {
                n,
                d,
                need,
                budget,
                nodes: 0,
                basis: Vec::new(),
            };
            let found = search.run(search.viable(tally(s.iter().collect())))?;
            let (subspace, hits) = match found {
                Some((basis, shift, hits)) => (Some(AffineSubspace::new(n, &basis, shift)?), hits),
                None => (None, 0),
            };
            Ok(SubspaceHit {
                subspace,
                hits,
                exhaustive: true,
                nodes: search.nodes,
            })
        }
        SearchMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let members: Vec<usize> = s.iter().collect();
            for t in 0..samples {
                let mut vectors = Vec::with_capacity(d);
                let mut basis: Vec<usize> = Vec::new();
                while basis.len() < d {
                    let v = rng.random_range(1..1usize << n);
                    let r = reduce(v, &basis);
                    if r != 0 {
                        vectors.push(v);
                        let sub = AffineSubspace::linear(n, &vectors)?;
                        basis = sub.basis().to_vec();
                    }
                }
                let cosets = tally(members.iter().map(|&x| reduce(x, &basis)).collect());
                let (shift, hits) = best_coset(&cosets);
                if hits >= need {
                    return Ok(SubspaceHit {
                        subspace: Some(AffineSubspace::new(n, &basis, shift)?),
                        hits,
                        exhaustive: false,
                        nodes: t + 1,
                    });
                }
            }
            Ok(SubspaceHit {
                subspace: None,
                hits: 0,
                exhaustive: false,
                nodes: samples,
            })
        }
    }
}

/// Vectors that extend an echelon basis to a larger echelon basis: a new
/// leading bit above the current ones, leaving room for `remaining - 1`
/// more, and zeros on the existing leading bits. Each subspace arises from
/// exactly one chain of extensions.
fn extensions(n: usize, basis: &[usize], remaining: usize) -> Vec<usize> {
    let pivots: usize = basis.iter().map(|&b| 1usize << leading_bit(b)).sum();
    let start = basis.last().map_or(0, |&b| leading_bit(b) + 1);
    let mut out = Vec::new();
    for p in start..=n - remaining {
        let free = ((1usize << p) - 1) & !pivots;
        // submasks of `free` in increasing order
        let mut low = 0usize;
        loop {
            out.push((1 << p) | low);
            if low == free {
                break;
            }
            low = low.wrapping_sub(free) & free;
        }
    }
    out
}

struct Exhaustive {
    n: usize,
    d: usize,
    need: usize,
    budget: u64,
    nodes: u64,
    basis: Vec<usize>,
}

impl Exhaustive {
    /// Extensions worth trying, in increasing order. When every viable
    /// child coset must merge two current ones, the new vector is the sum of
    /// their representatives, and enough such pairs must exist.
    fn candidates(&self, cosets: &Cosets) -> Vec<usize> {
        let j = self.basis.len();
        let all = extensions(self.n, &self.basis, self.d - j);
        let slack = (1usize << self.d) - self.need;
        if (1usize << j) <= slack || cosets.len() / 2 >= all.len() {
            return all;
        }
        let lowest = all.first().map_or(usize::MAX, |&v| leading_bit(v));
        let highest = all.last().map_or(0, |&v| leading_bit(v));
        let mut sums: Vec<usize> = Vec::new();
        for (i, &(a, _)) in cosets.iter().enumerate() {
            for &(b, _) in &cosets[i + 1..] {
                let v = a ^ b;
                let p = leading_bit(v);
                if p >= lowest && p <= highest {
                    sums.push(v);
                }
            }
        }
        sums.sort_unstable();
        let pairs_needed = self.need.div_ceil(1 << (j + 1));
        let mut out = Vec::new();
        for run in sums.chunk_by(|a, b| a == b) {
            if run.len() >= pairs_needed {
                out.push(run[0]);
            }
        }
        out
    }

    /// Drops cosets missing more points than the final subspace may miss:
    /// every coset of the current span inside it misses at most that many.
    fn viable(&self, cosets: Cosets) -> Cosets {
        let size = 1usize << self.basis.len();
        let slack = (1usize << self.d) - self.need;
        cosets.into_iter().filter(|&(_, c)| size - c <= slack).collect()
    }

    /// The final coset is a union of `2^{d-j}` cosets of the current
    /// `j`-dimensional span, so the largest that many counts must reach `need`.
    fn promising(&self, cosets: &Cosets) -> bool {
        let take = 1usize << (self.d - self.basis.len());
        let mut counts: Vec<usize> = cosets.iter().map(|c| c.1).collect();
        if counts.len() > take {
            counts.select_nth_unstable_by(take - 1, |a, b| b.cmp(a));
            counts.truncate(take);
        }
        counts.iter().sum::<usize>() >= self.need
    }

    fn run(&mut self, cosets: Cosets) -> Result<Option<(Vec<usize>, usize, usize)>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "exhaustive subspace search",
                needed: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        if !self.promising(&cosets) {
            return Ok(None);
        }
        if self.basis.len() == self.d {
            let (shift, hits) = best_coset(&cosets);
            return Ok((hits >= self.need).then(|| (self.basis.clone(), shift, hits)));
        }
        for v in self.candidates(&cosets) {
            let p = leading_bit(v);
            let child = tally(
                cosets
                    .iter()
                    .flat_map(|&(r, c)| {
                        let r = if r >> p & 1 == 1 { r ^ v } else { r };
                        std::iter::repeat_n(r, c)
                    })
                    .collect(),
            );
            self.basis.push(v);
            let child = self.viable(child);
            let found = self.run(child)?;
            self.basis.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Largest dimension of an affine subspace entirely inside `s`, with a witness.
pub fn largest_subspace(s: &F2Set, budget: u64) -> Result<Option<AffineSubspace>> {
    if s.is_empty() {
        return Ok(None);
    }
    let top = usize::BITS as usize - 1 - s.len().leading_zeros() as usize;
    for d in (0..=top).rev() {
        let hit = subspace_in_set(s, d, 1.0, SearchMode::Exhaustive { budget })?;
        if hit.subspace.is_some() {
            return Ok(hit.subspace);
        }
    }
    unreachable!("a single point is a 0-dimensional subspace")
}

/// Greedy cover of `a` by affine subspaces inside it: repeatedly take the
/// largest one inside the uncovered part. A heuristic; cover sizes are
/// upper bounds only.
pub fn greedy_cover(a: &F2Set, budget: u64) -> Result<Vec<AffineSubspace>> {
    let mut rest = a.clone();
    let mut cover = Vec::new();
    while let Some(piece) = largest_subspace(&rest, budget)? {
        for x in piece.points() {
            rest.remove(x);
        }
        cover.push(piece);
    }
    Ok(cover)
}
