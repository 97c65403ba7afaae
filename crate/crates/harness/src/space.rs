//! Search spaces: exhaustive enumerations of small function and set
//! families, and seeded samples from them.
//!
//! Every space is addressed by an element index. Exhaustive spaces decode
//! the index directly; sampled spaces draw element `k` from the stream
//! `k / CHUNK`, so any contiguous chunk can be produced on any worker.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use cubelab_additive::F2Set;
use cubelab_core::BooleanFunction;
use cubelab_threshold::enumerate_ltfs;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Elements per work unit and per random stream.
pub const CHUNK: u64 = 1 << 12;

/// Arity limits for exhaustive enumeration.
pub const ALL_LIMIT: usize = 6;
pub const ODD_LIMIT: usize = 7;
pub const MONOTONE_LIMIT: usize = 6;
pub const SYMMETRIC_LIMIT: usize = 20;
pub const SET_LIMIT: usize = 6;
/// Arity limit for sampled functions and sets.
pub const SAMPLE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Function,
    Set,
    Vector,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Function => "function",
            Self::Set => "set",
            Self::Vector => "vector",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Function(BooleanFunction),
    Set(F2Set),
    /// A real weight vector.
    Vector(Vec<f64>),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Self::Function(_) => ElementKind::Function,
            Self::Set(_) => ElementKind::Set,
            Self::Vector(_) => ElementKind::Vector,
        }
    }

    /// Text form: `n:hex` for functions and sets, comma-separated
    /// shortest round-trip decimals for vectors.
    pub fn to_object(&self) -> String {
        match self {
            Self::Function(f) => f.to_string(),
            Self::Set(s) => s.to_hex(),
            Self::Vector(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        }
    }

    pub fn parse(kind: ElementKind, text: &str) -> Result<Self> {
        Ok(match kind {
            ElementKind::Function => Self::Function(BooleanFunction::parse(text)?),
            ElementKind::Set => Self::Set(F2Set::parse(text)?),
            ElementKind::Vector => Self::Vector(
                text.split(',')
                    .map(|t| {
                        t.trim().parse::<f64>().map_err(|_| {
                            cubelab_core::Error::Parse(format!("vector entry {t:?}"))
                        })
                    })
                    .collect::<std::result::Result<_, _>>()?,
            ),
        })
    }

    /// Tie-break order: truth-table hex, which for a fixed arity is the
    /// order of the table read as an integer. Vectors compare by entries.
    pub fn precedes(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Function(a), Self::Function(b)) => (a.n(), a.to_hex()) < (b.n(), b.to_hex()),
            (Self::Set(a), Self::Set(b)) => (a.n(), a.to_hex()) < (b.n(), b.to_hex()),
            (Self::Vector(a), Self::Vector(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .map_or(a.len() < b.len(), |o| o.is_lt()),
            _ => self.kind_rank() < other.kind_rank(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Self::Function(_) => 0,
            Self::Set(_) => 1,
            Self::Vector(_) => 2,
        }
    }

    pub fn function(&self) -> Option<&BooleanFunction> {
        match self {
            Self::Function(f) => Some(f),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchSpace {
    AllFunctions(usize),
    /// `f(-x) = -f(x)`: free values on the half cube with top coordinate `+1`.
    OddFunctions(usize),
    /// `f(x) <= f(y)` whenever `x <= y`.
    MonotoneFunctions(usize),
    Ltfs(usize),
    /// Functions of the Hamming weight only.
    SymmetricFunctions(usize),
    /// Subsets of `F_2^n` with size in `min..=max`.
    F2Sets { n: usize, min: usize, max: usize },
    /// `count` independent uniform draws from `space`.
    RandomSample {
        space: Box<SearchSpace>,
        count: u64,
        seed: u64,
    },
}

fn space_error(text: &str, why: &str) -> HarnessError {
    HarnessError::UnknownSpace(format!("{text}: {why}"))
}

fn arity(text: &str, digits: &str) -> Result<usize> {
    digits
        .parse()
        .map_err(|_| space_error(text, "bad arity"))
}

impl FromStr for SearchSpace {
    type Err = HarnessError;

    /// `all-n3`, `odd-n5`, `monotone-n4`, `ltf-n3`, `symmetric-n6`,
    /// `f2sets-n4` or `f2sets-n4-s3-6`, and `random:<count>:<seed>:<space>`.
    fn from_str(text: &str) -> Result<Self> {
        let space = Self::parse_unchecked(text.trim())?;
        space.validate()?;
        Ok(space)
    }
}

impl SearchSpace {
    /// Syntax only; sampled inner spaces obey sampling limits, not
    /// enumeration limits, so validation happens once at the top.
    fn parse_unchecked(text: &str) -> Result<Self> {
        if let Some(rest) = text.strip_prefix("random:") {
            let mut parts = rest.splitn(3, ':');
            let (Some(count), Some(seed), Some(inner)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(space_error(text, "expected random:<count>:<seed>:<space>"));
            };
            let space = Self::RandomSample {
                space: Box::new(Self::parse_unchecked(inner)?),
                count: count.parse().map_err(|_| space_error(text, "bad count"))?,
                seed: seed.parse().map_err(|_| space_error(text, "bad seed"))?,
            };
            return Ok(space);
        }
        let (family, rest) = text
            .split_once("-n")
            .ok_or_else(|| space_error(text, "expected <family>-n<arity>"))?;
        let space = match family {
            "all" => Self::AllFunctions(arity(text, rest)?),
            "odd" => Self::OddFunctions(arity(text, rest)?),
            "monotone" => Self::MonotoneFunctions(arity(text, rest)?),
            "ltf" => Self::Ltfs(arity(text, rest)?),
            "symmetric" => Self::SymmetricFunctions(arity(text, rest)?),
            "f2sets" => {
                let (n, sizes) = match rest.split_once("-s") {
                    Some((n, s)) => (arity(text, n)?, Some(s)),
                    None => (arity(text, rest)?, None),
                };
                let (min, max) = match sizes {
                    None => (1, 1usize.checked_shl(n as u32).unwrap_or(usize::MAX)),
                    Some(s) => {
                        let (a, b) = s.split_once('-').ok_or_else(|| space_error(text, "sizes as -s<min>-<max>"))?;
                        (
                            a.parse().map_err(|_| space_error(text, "bad size"))?,
                            b.parse().map_err(|_| space_error(text, "bad size"))?,
                        )
                    }
                };
                Self::F2Sets { n, min, max }
            }
            _ => return Err(space_error(text, "unknown family")),
        };
        Ok(space)
    }
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AllFunctions(n) => write!(f, "all-n{n}"),
            Self::OddFunctions(n) => write!(f, "odd-n{n}"),
            Self::MonotoneFunctions(n) => write!(f, "monotone-n{n}"),
            Self::Ltfs(n) => write!(f, "ltf-n{n}"),
            Self::SymmetricFunctions(n) => write!(f, "symmetric-n{n}"),
            Self::F2Sets { n, min, max } => write!(f, "f2sets-n{n}-s{min}-{max}"),
            Self::RandomSample { space, count, seed } => write!(f, "random:{count}:{seed}:{space}"),
        }
    }
}

fn limit(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(cubelab_core::Error::Domain(format!("{what} of arity 0")).into());
    }
    Ok(cubelab_core::check_arity(what, n, max)?)
}

impl SearchSpace {
    pub fn arity(&self) -> usize {
        match self {
            Self::AllFunctions(n)
            | Self::OddFunctions(n)
            | Self::MonotoneFunctions(n)
            | Self::Ltfs(n)
            | Self::SymmetricFunctions(n)
            | Self::F2Sets { n, .. } => *n,
            Self::RandomSample { space, .. } => space.arity(),
        }
    }

    pub fn element_kind(&self) -> ElementKind {
        match self {
            Self::F2Sets { .. } => ElementKind::Set,
            Self::RandomSample { space, .. } => space.element_kind(),
            _ => ElementKind::Function,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::AllFunctions(n) => limit("function enumeration", *n, ALL_LIMIT),
            Self::OddFunctions(n) => limit("odd function enumeration", *n, ODD_LIMIT),
            Self::MonotoneFunctions(n) => limit("monotone enumeration", *n, MONOTONE_LIMIT),
            Self::Ltfs(n) => limit("threshold enumeration", *n, cubelab_threshold::ltf::ENUMERATION_LIMIT),
            Self::SymmetricFunctions(n) => limit("symmetric functions", *n, SYMMETRIC_LIMIT),
            Self::F2Sets { n, min, max } => {
                limit("set enumeration", *n, SET_LIMIT)?;
                if min > max || *max > 1 << n {
                    return Err(cubelab_core::Error::Domain(format!("set sizes {min}..={max} in F_2^{n}")).into());
                }
                Ok(())
            }
            Self::RandomSample { space, count, .. } => {
                if *count == 0 {
                    return Err(cubelab_core::Error::Domain("sample of size 0".into()).into());
                }
                match space.as_ref() {
                    Self::RandomSample { .. } => {
                        Err(cubelab_core::Error::Domain("nested random sample".into()).into())
                    }
                    Self::AllFunctions(n) | Self::OddFunctions(n) | Self::SymmetricFunctions(n) => {
                        limit("sampled functions", *n, SAMPLE_LIMIT)
                    }
                    Self::F2Sets { n, min, max } => {
                        limit("sampled sets", *n, SAMPLE_LIMIT)?;
                        if min > max || *max > 1 << n {
                            return Err(cubelab_core::Error::Domain(format!("set sizes {min}..={max} in F_2^{n}")).into());
                        }
                        Ok(())
                    }
                    inner => inner.validate(),
                }
            }
        }
    }

    /// Materializes the space for indexed access.
    pub fn enumerate(&self) -> Result<Enumeration> {
        self.validate()?;
        let listed = |space: &SearchSpace| -> Result<Option<Vec<BooleanFunction>>> {
            Ok(match space {
                Self::MonotoneFunctions(n) => Some(
                    monotone_tables(*n)
                        .into_iter()
                        .map(|bits| BooleanFunction::from_bits(*n, bits))
                        .collect::<std::result::Result<_, _>>()?,
                ),
                Self::Ltfs(n) => Some(cached_ltfs(*n)?.as_ref().clone()),
                _ => None,
            })
        };
        let list = match self {
            Self::RandomSample { space, .. } => listed(space)?,
            other => listed(other)?,
        };
        let size = match self {
            Self::AllFunctions(n) => 1u128 << (1u32 << n),
            Self::OddFunctions(n) => 1u128 << (1u32 << (n - 1)),
            Self::SymmetricFunctions(n) => 1u128 << (n + 1),
            Self::F2Sets { n, .. } => 1u128 << (1u32 << n),
            Self::MonotoneFunctions(_) | Self::Ltfs(_) => list.as_ref().map_or(0, Vec::len) as u128,
            Self::RandomSample { count, .. } => *count as u128,
        };
        Ok(Enumeration {
            space: self.clone(),
            size,
            list,
        })
    }
}

type LtfCache = Mutex<Vec<Option<Arc<Vec<BooleanFunction>>>>>;

/// Threshold functions of arity `n`, enumerated once per process.
fn cached_ltfs(n: usize) -> Result<Arc<Vec<BooleanFunction>>> {
    static CACHE: OnceLock<LtfCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; cubelab_threshold::ltf::ENUMERATION_LIMIT + 1]));
    if let Some(Some(list)) = cache.lock().expect("cache lock").get(n) {
        return Ok(list.clone());
    }
    // enumerate outside the lock; a racing duplicate is harmless
    let list = Arc::new(enumerate_ltfs(n)?);
    if let Some(slot) = cache.lock().expect("cache lock").get_mut(n) {
        *slot = Some(list.clone());
    }
    Ok(list)
}

/// Up-sets of `{0,1}^n` (the inputs where a monotone function is `-1`) as
/// bit patterns, ascending. Points are decided from the top down; a point
/// may join only if every point above it by one coordinate already has.
pub fn monotone_tables(n: usize) -> Vec<u64> {
    fn extend(n: usize, x: usize, bits: u64, out: &mut Vec<u64>) {
        if x == usize::MAX {
            out.push(bits);
            return;
        }
        let next = x.wrapping_sub(1);
        extend(n, next, bits, out);
        let closed = (0..n)
            .filter(|&i| x >> i & 1 == 0)
            .all(|i| bits >> (x | 1 << i) & 1 == 1);
        if closed {
            extend(n, next, bits | 1 << x, out);
        }
    }
    let mut out = Vec::new();
    extend(n, (1 << n) - 1, 0, &mut out);
    out.sort_unstable();
    out
}

/// An indexable view of a search space.
pub struct Enumeration {
    space: SearchSpace,
    size: u128,
    list: Option<Vec<BooleanFunction>>,
}

impl Enumeration {
    /// Number of indices; for set spaces this counts every subset before
    /// the size filter.
    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    /// Elements at indices `start..end`, which must lie in one chunk.
    /// Indices filtered out by a size bucket yield nothing.
    pub fn chunk(&self, start: u64, end: u64) -> Result<Vec<Element>> {
        debug_assert!(start / CHUNK == (end.max(start + 1) - 1) / CHUNK);
        match &self.space {
            SearchSpace::RandomSample { space, seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(start / CHUNK);
                // skip to `start` within its chunk
                for _ in start / CHUNK * CHUNK..start {
                    self.draw(space, &mut rng)?;
                }
                (start..end).map(|_| self.draw(space, &mut rng)).collect()
            }
            space => {
                let mut out = Vec::with_capacity((end - start) as usize);
                for i in start..end {
                    if let Some(e) = self.decode(space, i)? {
                        out.push(e);
                    }
                }
                Ok(out)
            }
        }
    }

    fn decode(&self, space: &SearchSpace, i: u64) -> Result<Option<Element>> {
        let f = match space {
            SearchSpace::AllFunctions(n) => BooleanFunction::from_predicate(*n, |x| i >> x & 1 == 1)?,
            SearchSpace::OddFunctions(n) => odd_function(*n, |x| i >> x & 1 == 1)?,
            SearchSpace::SymmetricFunctions(n) => {
                BooleanFunction::from_predicate(*n, |x| i >> x.count_ones() & 1 == 1)?
            }
            SearchSpace::MonotoneFunctions(_) | SearchSpace::Ltfs(_) => {
                self.list.as_ref().expect("listed space")[i as usize].clone()
            }
            SearchSpace::F2Sets { n, min, max } => {
                let size = i.count_ones() as usize;
                if size < *min || size > *max {
                    return Ok(None);
                }
                return Ok(Some(Element::Set(F2Set::from_predicate(*n, |x| i >> x & 1 == 1)?)));
            }
            SearchSpace::RandomSample { .. } => unreachable!("sampled spaces draw"),
        };
        Ok(Some(Element::Function(f)))
    }

    fn draw(&self, space: &SearchSpace, rng: &mut ChaCha8Rng) -> Result<Element> {
        let f = match space {
            SearchSpace::AllFunctions(n) => {
                let bits = random_bits(rng, 1 << n);
                BooleanFunction::from_predicate(*n, |x| bits[x])?
            }
            SearchSpace::OddFunctions(n) => {
                let bits = random_bits(rng, 1 << (n - 1));
                odd_function(*n, |x| bits[x])?
            }
            SearchSpace::SymmetricFunctions(n) => {
                let bits = random_bits(rng, n + 1);
                BooleanFunction::from_predicate(*n, |x| bits[x.count_ones() as usize])?
            }
            SearchSpace::MonotoneFunctions(_) | SearchSpace::Ltfs(_) => {
                let list = self.list.as_ref().expect("listed space");
                list[rng.random_range(0..list.len())].clone()
            }
            SearchSpace::F2Sets { n, min, max } => {
                // a uniform size in the bucket, then a uniform subset of it
                let universe = 1usize << n;
                let size = rng.random_range(*min..=*max);
                let mut points: Vec<usize> = (0..universe).collect();
                for k in 0..size {
                    let j = rng.random_range(k..universe);
                    points.swap(k, j);
                }
                return Ok(Element::Set(F2Set::from_elements(*n, points[..size].iter().copied())?));
            }
            SearchSpace::RandomSample { .. } => unreachable!("validated"),
        };
        Ok(Element::Function(f))
    }
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<bool> {
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let word = rng.next_u64();
        out.extend((0..64.min(len - out.len())).map(|b| word >> b & 1 == 1));
    }
    out
}

/// The odd function taking the given values on the half cube where the
/// top coordinate is `+1`.
fn odd_function(n: usize, low: impl Fn(usize) -> bool) -> Result<BooleanFunction> {
    let half = 1usize << (n - 1);
    let mask = (1usize << n) - 1;
    Ok(BooleanFunction::from_predicate(n, |x| {
        if x < half {
            low(x)
        } else {
            !low(x ^ mask)
        }
    })?)
}
