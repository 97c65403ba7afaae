//! Measurable regions of `R^n` used as candidate sets.

use cubelab_core::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::normal::{ball_radius, chi_cdf, inverse_normal_cdf, normal_cdf};

/// Tolerance on unit normals.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Tolerance on simplex vectors: unit length and pairwise `-1/(q-1)`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaussianRegion {
    /// `{x : <normal, x> >= offset}`.
    Halfspace { normal: Vec<f64>, offset: f64 },
    /// `{x in R^dim : |x| <= radius}`.
    CenteredBall { dim: usize, radius: f64 },
    Complement { region: Box<GaussianRegion> },
    /// Points whose largest `<a_j, x>` is at `j = index`, ties to the
    /// lowest index.
    SimplexCell { index: usize, vectors: Vec<Vec<f64>> },
    Intersection { regions: Vec<GaussianRegion> },
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl GaussianRegion {
    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let r = Self::Halfspace { normal, offset };
        r.validate()?;
        Ok(r)
    }

    /// Halfspace along a normal that need not be unit.
    pub fn halfspace_along(direction: &[f64], offset: f64) -> Result<Self> {
        let len = norm(direction);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::Domain("halfspace with zero normal".into()));
        }
        Self::halfspace(direction.iter().map(|v| v / len).collect(), offset)
    }

    /// `{x : x_i >= offset}` in `R^n`.
    pub fn coordinate_halfspace(n: usize, i: usize, offset: f64) -> Result<Self> {
        if i >= n {
            return Err(Error::Domain(format!("coordinate {i} of R^{n}")));
        }
        let mut normal = vec![0.0; n];
        normal[i] = 1.0;
        Self::halfspace(normal, offset)
    }

    /// Halfspace of Gaussian measure `mu` with the given unit normal.
    pub fn halfspace_of_measure(normal: Vec<f64>, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Domain(format!("measure {mu}")));
        }
        Self::halfspace(normal, -inverse_normal_cdf(mu))
    }

    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        let r = Self::CenteredBall { dim, radius };
        r.validate()?;
        Ok(r)
    }

    pub fn ball_of_measure(dim: usize, mu: f64) -> Result<Self> {
        Self::centered_ball(dim, ball_radius(dim, mu)?)
    }

    pub fn complement(region: Self) -> Self {
        Self::Complement {
            region: Box::new(region),
        }
    }

    pub fn intersection(regions: Vec<Self>) -> Result<Self> {
        let r = Self::Intersection { regions };
        r.validate()?;
        Ok(r)
    }

    /// Symmetric slab `{x : |<normal, x>| <= half_width}`.
    pub fn slab(normal: Vec<f64>, half_width: f64) -> Result<Self> {
        let opposite = normal.iter().map(|v| -v).collect();
        Self::intersection(vec![
            Self::halfspace(normal, -half_width)?,
            Self::halfspace(opposite, -half_width)?,
        ])
    }

    /// Cells of a standard simplex partition of `R^n` into `q` parts,
    /// `2 <= q <= n + 1`. The vectors `e_i - (1/q) 1` of `R^q` are written
    /// in an orthonormal basis of the sum-zero hyperplane and normalized.
    pub fn standard_simplex(q: usize, n: usize) -> Result<Vec<Self>> {
        if q < 2 || q > n + 1 {
            return Err(Error::Domain(format!("simplex with {q} cells in R^{n}")));
        }
        let centered: Vec<Vec<f64>> = (0..q)
            .map(|i| (0..q).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / q as f64).collect())
            .collect();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in &centered[..q - 1] {
            let mut w = v.clone();
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
            let len = norm(&w);
            basis.push(w.into_iter().map(|x| x / len).collect());
        }
        let vectors: Vec<Vec<f64>> = centered
            .iter()
            .map(|v| {
                let mut a: Vec<f64> = basis.iter().map(|b| dot(v, b)).collect();
                let len = norm(&a);
                a.iter_mut().for_each(|x| *x /= len);
                a.resize(n, 0.0);
                a
            })
            .collect();
        (0..q)
            .map(|index| {
                let cell = Self::SimplexCell {
                    index,
                    vectors: vectors.clone(),
                };
                cell.validate()?;
                Ok(cell)
            })
            .collect()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            Self::Halfspace { normal, .. } => normal.len(),
            Self::CenteredBall { dim, .. } => *dim,
            Self::Complement { region } => region.dim(),
            Self::SimplexCell { vectors, .. } => vectors.first().map_or(0, Vec::len),
            Self::Intersection { regions } => regions.first().map_or(0, Self::dim),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Halfspace { normal, offset } => {
                if normal.is_empty() {
                    return Err(Error::Domain("halfspace in R^0".into()));
                }
                if (norm(normal) - 1.0).abs() > UNIT_TOLERANCE {
                    return Err(Error::Domain(format!("halfspace normal has length {}", norm(normal))));
                }
                if offset.is_nan() {
                    return Err(Error::Domain("halfspace offset is NaN".into()));
                }
            }
            Self::CenteredBall { dim, radius } => {
                if *dim == 0 {
                    return Err(Error::Domain("ball in R^0".into()));
                }
                if !(*radius >= 0.0) {
                    return Err(Error::Domain(format!("ball radius {radius}")));
                }
            }
            Self::Complement { region } => region.validate()?,
            Self::SimplexCell { index, vectors } => {
                let q = vectors.len();
                if q < 2 || *index >= q {
                    return Err(Error::Domain(format!("cell {index} of {q} simplex vectors")));
                }
                let n = vectors[0].len();
                if n == 0 || vectors.iter().any(|a| a.len() != n) {
                    return Err(Error::Domain("simplex vectors of unequal or zero length".into()));
                }
                let target = -1.0 / (q - 1) as f64;
                for (i, a) in vectors.iter().enumerate() {
                    if (dot(a, a) - 1.0).abs() > SIMPLEX_TOLERANCE {
                        return Err(Error::Domain(format!("simplex vector {i} is not unit")));
                    }
                    for (j, b) in vectors.iter().enumerate().skip(i + 1) {
                        if (dot(a, b) - target).abs() > SIMPLEX_TOLERANCE {
                            return Err(Error::Domain(format!(
                                "simplex vectors {i}, {j} have inner product {}",
                                dot(a, b)
                            )));
                        }
                    }
                }
            }
            Self::Intersection { regions } => {
                let Some(first) = regions.first() else {
                    return Err(Error::Domain("empty intersection".into()));
                };
                for r in regions {
                    r.validate()?;
                    if r.dim() != first.dim() {
                        return Err(Error::ArityMismatch {
                            expected: first.dim(),
                            found: r.dim(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::Halfspace { normal, offset } => dot(normal, x) >= *offset,
            Self::CenteredBall { radius, .. } => dot(x, x) <= radius * radius,
            Self::Complement { region } => !region.contains(x),
            Self::SimplexCell { index, vectors } => {
                let mine = dot(&vectors[*index], x);
                vectors.iter().enumerate().all(|(j, a)| {
                    let other = dot(a, x);
                    if j < *index {
                        other < mine
                    } else {
                        other <= mine
                    }
                })
            }
            Self::Intersection { regions } => regions.iter().all(|r| r.contains(x)),
        }
    }

    /// Membership of `-x`.
    pub fn contains_negated(&self, x: &[f64]) -> bool {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        self.contains(&neg)
    }

    /// The region `-A`.
    pub fn negated(&self) -> Self {
        match self {
            Self::Halfspace { normal, offset } => Self::Halfspace {
                normal: normal.iter().map(|v| -v).collect(),
                offset: *offset,
            },
            Self::CenteredBall { .. } => self.clone(),
            Self::Complement { region } => Self::complement(region.negated()),
            Self::SimplexCell { index, vectors } => Self::SimplexCell {
                index: *index,
                vectors: vectors.iter().map(|a| a.iter().map(|v| -v).collect()).collect(),
            },
            Self::Intersection { regions } => Self::Intersection {
                regions: regions.iter().map(Self::negated).collect(),
            },
        }
    }

    /// `A = -A`, decided structurally; intersections compare as sets.
    pub fn is_symmetric(&self) -> bool {
        let neg = self.negated();
        match (self, &neg) {
            (Self::Intersection { regions: a }, Self::Intersection { regions: b }) => {
                b.iter().all(|r| a.contains(r))
            }
            (Self::Complement { region }, _) => region.is_symmetric(),
            _ => *self == neg,
        }
    }

    /// Exact Gaussian measure where a closed form exists.
    pub fn measure(&self) -> Option<f64> {
        match self {
            Self::Halfspace { offset, .. } => Some(1.0 - normal_cdf(*offset)),
            Self::CenteredBall { dim, radius } => Some(chi_cdf(*dim, *radius)),
            Self::Complement { region } => region.measure().map(|m| 1.0 - m),
            Self::SimplexCell { vectors, .. } => Some(1.0 / vectors.len() as f64),
            Self::Intersection { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_geometry() {
        for (q, n) in [(2, 1), (3, 2), (4, 3), (5, 6)] {
            let cells = GaussianRegion::standard_simplex(q, n).unwrap();
            assert_eq!(cells.len(), q);
            assert!(cells.iter().all(|c| c.dim() == n));
            // every point lies in exactly one cell
            for k in 0..200 {
                let x: Vec<f64> = (0..n).map(|i| ((k * 7 + i * 13) % 17) as f64 - 8.3).collect();
                assert_eq!(cells.iter().filter(|c| c.contains(&x)).count(), 1);
            }
        }
        assert!(GaussianRegion::standard_simplex(4, 2).is_err());
    }

    #[test]
    fn ties_go_to_the_lowest_cell() {
        let cells = GaussianRegion::standard_simplex(3, 2).unwrap();
        let origin = [0.0, 0.0];
        let owners: Vec<bool> = cells.iter().map(|c| c.contains(&origin)).collect();
        assert_eq!(owners, [true, false, false]);
    }

    #[test]
    fn validation() {
        assert!(GaussianRegion::halfspace(vec![1.0, 1.0], 0.0).is_err());
        assert!(GaussianRegion::halfspace_along(&[3.0, 4.0], 0.0).is_ok());
        assert!(GaussianRegion::centered_ball(0, 1.0).is_err());
        assert!(GaussianRegion::centered_ball(2, -1.0).is_err());
        let bad = GaussianRegion::SimplexCell {
            index: 0,
            vectors: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]],
        };
        assert!(bad.validate().is_err());
        let h = GaussianRegion::coordinate_halfspace(2, 0, 0.0).unwrap();
        let b = GaussianRegion::centered_ball(3, 1.0).unwrap();
        assert!(GaussianRegion::intersection(vec![h, b]).is_err());
    }

    #[test]
    fn symmetry() {
        let h = GaussianRegion::coordinate_halfspace(2, 0, 0.0).unwrap();
        assert!(!h.is_symmetric());
        assert!(GaussianRegion::centered_ball(2, 1.0).unwrap().is_symmetric());
        let slab = GaussianRegion::slab(vec![0.6, 0.8], 0.5).unwrap();
        assert!(slab.is_symmetric());
        assert!(GaussianRegion::complement(slab.clone()).is_symmetric());
        assert!(slab.contains(&[0.3, 0.0]) && !slab.contains(&[3.0, 0.0]));
        assert!(h.negated().contains(&[-1.0, 0.0]));
    }

    #[test]
    fn measures() {
        let h = GaussianRegion::halfspace_of_measure(vec![0.0, 1.0], 0.3).unwrap();
        assert!((h.measure().unwrap() - 0.3).abs() < 1e-14);
        let b = GaussianRegion::ball_of_measure(3, 0.4).unwrap();
        assert!((b.measure().unwrap() - 0.4).abs() < 1e-10);
        let c = GaussianRegion::complement(b);
        assert!((c.measure().unwrap() - 0.6).abs() < 1e-10);
    }

    #[test]
    fn json_round_trip() {
        let cell = GaussianRegion::standard_simplex(3, 2).unwrap().remove(1);
        let r = GaussianRegion::complement(cell);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"kind\":\"complement\""));
        assert_eq!(serde_json::from_str::<GaussianRegion>(&text).unwrap(), r);
    }
}
