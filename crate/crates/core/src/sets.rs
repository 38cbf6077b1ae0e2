//! Finite boundary point sets, arcs and arc unions on the unit circle.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::wrap_angle;
use crate::scalar::{Cplx, Scalar};

/// Maximum arc length enforced by [`normalize_arcset`].
pub const MAX_ARC_LENGTH: f64 = 0.5;

/// Sorted, distinct angles in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPointSet<T: Scalar> {
    points: Vec<T>,
}

impl<T: Scalar> BoundaryPointSet<T> {
    pub fn new(points: impl IntoIterator<Item = T>) -> Result<Self> {
        let mut pts: Vec<T> = points.into_iter().map(wrap_angle).collect();
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let tol = T::lit(1e-12);
        for w in pts.windows(2) {
            if w[1] - w[0] <= tol {
                return Err(Error::InvalidParameter(format!(
                    "duplicate boundary point {}",
                    w[0]
                )));
            }
        }
        if pts.len() > 1 && pts[0] + T::two_pi() - pts[pts.len() - 1] <= tol {
            return Err(Error::InvalidParameter("duplicate boundary point at 0".into()));
        }
        Ok(Self { points: pts })
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    #[inline]
    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, theta: T, tol: T) -> bool {
        self.points.iter().any(|&p| chord(theta, p) <= tol)
    }

    /// Chordal distance from an arbitrary point of the closed disc to the set.
    pub fn distance_from(&self, z: Cplx<T>) -> Result<T> {
        if self.points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self
            .points
            .iter()
            .map(|&p| (z - Cplx::from_polar(T::one(), p)).norm())
            .fold(T::infinity(), T::min))
    }
}

/// `|e^{iθ} - e^{iφ}| = 2|sin((θ-φ)/2)|`.
#[inline]
pub fn chord<T: Scalar>(theta: T, phi: T) -> T {
    (T::lit(2.0) * ((theta - phi) * T::lit(0.5)).sin()).abs()
}

/// Chordal distance `min_{ξ∈E} |e^{iθ} - ξ|`.
pub fn distance_to_set<T: Scalar>(theta: T, set: &BoundaryPointSet<T>) -> Result<T> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(set
        .points
        .iter()
        .map(|&p| chord(theta, p))
        .fold(T::infinity(), T::min))
}

/// An open arc starting at `start` and running counter-clockwise for `length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<T: Scalar> {
    start: T,
    length: T,
}

impl<T: Scalar> Arc<T> {
    pub fn new(start: T, length: T) -> Result<Self> {
        if !start.is_finite()
            || !length.is_finite()
            || length <= T::zero()
            || length > T::two_pi() + T::lit(1e-12)
        {
            return Err(Error::InvalidArc(start.to_f64_lossy(), length.to_f64_lossy()));
        }
        Ok(Self {
            start: wrap_angle(start),
            length: length.min(T::two_pi()),
        })
    }

    /// Arc from endpoint angles; equal endpoints denote the circle minus one point.
    pub fn from_endpoints(a: T, b: T) -> Result<Self> {
        let mut len = wrap_angle(b - a);
        if len <= T::zero() {
            len = T::two_pi();
        }
        Self::new(a, len)
    }

    #[inline]
    pub fn start(&self) -> T {
        self.start
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    #[inline]
    pub fn end(&self) -> T {
        wrap_angle(self.start + self.length)
    }

    /// Offset of `theta` from the start, in `[0, 2π)`.
    #[inline]
    pub fn offset(&self, theta: T) -> T {
        wrap_angle(theta - self.start)
    }

    /// Membership in the open arc.
    #[inline]
    pub fn contains(&self, theta: T) -> bool {
        let o = self.offset(theta);
        o > T::zero() && o < self.length
    }

    /// Membership in the half-open arc `[start, end)`.
    #[inline]
    pub fn contains_half_open(&self, theta: T) -> bool {
        self.offset(theta) < self.length
    }

    pub fn midpoint(&self) -> T {
        wrap_angle(self.start + self.length * T::lit(0.5))
    }

    /// `min(|z-a|, |z-b|)` over the two endpoints.
    pub fn endpoint_distance(&self, z: Cplx<T>) -> T {
        let a = Cplx::from_polar(T::one(), self.start);
        let b = Cplx::from_polar(T::one(), self.end());
        (z - a).norm().min((z - b).norm())
    }

    /// Arc-interior overlap test (shared endpoints are not an overlap).
    pub fn overlaps(&self, other: &Self) -> bool {
        let tol = T::lit(1e-12);
        let starts_inside = |x: &Self, y: &Self| {
            let o = x.offset(y.start);
            o > tol && o < x.length - tol
        };
        starts_inside(self, other)
            || starts_inside(other, self)
            || chord(self.start, other.start) <= tol
    }

    pub fn split(&self, parts: usize) -> Vec<Self> {
        let step = self.length / T::from_usize_lossy(parts);
        (0..parts)
            .map(|i| Self {
                start: wrap_angle(self.start + step * T::from_usize_lossy(i)),
                length: step,
            })
            .collect()
    }
}

/// Ordered family of pairwise disjoint open arcs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcSet<T: Scalar> {
    arcs: Vec<Arc<T>>,
}

impl<T: Scalar> ArcSet<T> {
    pub fn new(arcs: Vec<Arc<T>>) -> Result<Self> {
        for i in 0..arcs.len() {
            for j in i + 1..arcs.len() {
                if arcs[i].overlaps(&arcs[j]) {
                    return Err(Error::OverlappingArcs(
                        arcs[i].start.to_f64_lossy(),
                        arcs[i].end().to_f64_lossy(),
                        arcs[j].start.to_f64_lossy(),
                        arcs[j].end().to_f64_lossy(),
                    ));
                }
            }
        }
        Ok(Self { arcs })
    }

    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    /// The whole circle minus the point `0`.
    pub fn full() -> Self {
        Self {
            arcs: vec![Arc {
                start: T::zero(),
                length: T::two_pi(),
            }],
        }
    }

    pub fn from_endpoints(pairs: &[(T, T)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(a, b)| Arc::from_endpoints(a, b))
                .collect::<Result<_>>()?,
        )
    }

    #[inline]
    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn total_length(&self) -> T {
        self.arcs.iter().map(|a| a.length).sum()
    }

    pub fn contains(&self, theta: T) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
    }

    /// Whether every arc is shorter than [`MAX_ARC_LENGTH`].
    pub fn is_normalized(&self) -> bool {
        self.arcs.iter().all(|a| a.length < T::lit(MAX_ARC_LENGTH))
    }

    /// Whether `arc` is one of the members (up to rounding).
    pub fn contains_arc(&self, arc: &Arc<T>) -> bool {
        let tol = T::lit(1e-12);
        self.arcs.iter().any(|a| {
            chord(a.start, arc.start) <= tol && (a.length - arc.length).abs() <= tol
        })
    }

    /// Indicator of the open arcs at the nodes of an `n`-point grid.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        (0..n)
            .map(|j| self.contains(crate::grid::angle::<T>(n, j)))
            .collect()
    }

    /// Fraction of each grid cell `[θ_j - h/2, θ_j + h/2]` covered by the arcs.
    pub fn coverage(&self, n: usize) -> Vec<T> {
        let h = T::two_pi() / T::from_usize_lossy(n);
        let two_pi = T::two_pi();
        let overlap = |lo: T, hi: T, len: T| (hi.min(len) - lo.max(T::zero())).max(T::zero());
        (0..n)
            .map(|j| {
                let left = crate::grid::angle::<T>(n, j) - h * T::lit(0.5);
                let covered = self.arcs.iter().fold(T::zero(), |acc, a| {
                    let o = a.offset(left);
                    acc + overlap(o, o + h, a.length) + overlap(o - two_pi, o + h - two_pi, a.length)
                });
                let w = covered / h;
                let snap = T::lit(1e-12);
                if w < snap {
                    T::zero()
                } else if w > T::one() - snap {
                    T::one()
                } else {
                    w
                }
            })
            .collect()
    }

    /// Subfamily by index.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            arcs: indices.iter().map(|&i| self.arcs[i]).collect(),
        }
    }

    /// Union with a disjoint family.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut arcs = self.arcs.clone();
        arcs.extend_from_slice(&other.arcs);
        Self::new(arcs)
    }

    /// Arcs of `all` that are not members of `self`.
    pub fn complement_within(&self, all: &Self) -> Self {
        Self {
            arcs: all
                .arcs
                .iter()
                .filter(|a| !self.contains_arc(a))
                .copied()
                .collect(),
        }
    }

    /// Endpoints of all arcs, deduplicated.
    pub fn endpoints(&self) -> Vec<T> {
        let mut pts: Vec<T> = Vec::new();
        for a in &self.arcs {
            for p in [a.start, a.end()] {
                if !pts.iter().any(|&q| chord(p, q) <= T::lit(1e-12)) {
                    pts.push(p);
                }
            }
        }
        pts
    }
}

/// The open arcs between consecutive points of `E` (no length normalization).
pub fn gaps<T: Scalar>(set: &BoundaryPointSet<T>) -> Result<ArcSet<T>> {
    let pts = set.points();
    match pts.len() {
        0 => Err(Error::EmptySet),
        1 => ArcSet::new(vec![Arc::new(pts[0], T::two_pi())?]),
        m => {
            let mut arcs = Vec::with_capacity(m);
            for i in 0..m {
                let a = pts[i];
                let b = if i + 1 < m { pts[i + 1] } else { pts[0] + T::two_pi() };
                arcs.push(Arc::new(a, b - a)?);
            }
            ArcSet::new(arcs)
        }
    }
}

/// Arcs of `T \ E`, normalized to lengths below 1/2.
pub fn complement_arcs<T: Scalar>(set: &BoundaryPointSet<T>) -> Result<ArcSet<T>> {
    normalize_arcset(&gaps(set)?)
}

/// Splits every arc of length ≥ 1/2 into equal subarcs shorter than 1/2.
pub fn normalize_arcset<T: Scalar>(arcs: &ArcSet<T>) -> Result<ArcSet<T>> {
    split_arcs(arcs, T::lit(MAX_ARC_LENGTH))
}

/// Splits every arc of length ≥ `max_len` into `⌊length/max_len⌋ + 1` equal parts.
pub fn split_arcs<T: Scalar>(arcs: &ArcSet<T>, max_len: T) -> Result<ArcSet<T>> {
    if max_len <= T::zero() {
        return Err(Error::InvalidParameter("maximum arc length must be positive".into()));
    }
    // Re-validate: callers may have built the family by hand.
    let checked = ArcSet::new(arcs.arcs.clone())?;
    let mut out = Vec::new();
    for a in checked.arcs {
        if a.length < max_len {
            out.push(a);
        } else {
            let parts = (a.length / max_len).floor().to_usize().unwrap_or(0) + 1;
            out.extend(a.split(parts));
        }
    }
    Ok(ArcSet { arcs: out })
}

/// `Γ_n`: the arcs with index ≥ `n` in stored order (empty when `n` ≥ count).
pub fn tail_arcs<T: Scalar>(arcs: &ArcSet<T>, n: usize) -> ArcSet<T> {
    ArcSet {
        arcs: arcs.arcs.iter().skip(n).copied().collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct PointsJson {
    points: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ArcsJson {
    arcs: Vec<[f64; 2]>,
}

impl<T: Scalar> Serialize for BoundaryPointSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointsJson {
            points: self.points.iter().map(|p| p.to_f64_lossy()).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for BoundaryPointSet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PointsJson::deserialize(d)?;
        Self::new(raw.points.into_iter().map(T::lit)).map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> Serialize for ArcSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ArcsJson {
            arcs: self
                .arcs
                .iter()
                .map(|a| [a.start.to_f64_lossy(), a.end().to_f64_lossy()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for ArcSet<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ArcsJson::deserialize(d)?;
        let pairs: Vec<(T, T)> = raw.arcs.iter().map(|p| (T::lit(p[0]), T::lit(p[1]))).collect();
        Self::from_endpoints(&pairs).map_err(serde::de::Error::custom)
    }
}
