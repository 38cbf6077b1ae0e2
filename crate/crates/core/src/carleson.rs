//! The Carleson integral `∫_T log(1/d(e^{it}, E)) dt`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::Scalar;
use crate::sets::{gaps, ArcSet, BoundaryPointSet};

/// Geometric grading levels toward each point of `E`.
pub const GRADING_LEVELS: usize = 40;
/// Minimum node count accepted by [`carleson_integral`].
pub const MIN_REFINEMENT: usize = 1 << 12;

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CarlesonValue<T: Scalar> {
    /// Quadrature value, `+∞` when divergence was detected.
    pub value: T,
    pub diverged: bool,
    /// Fraction of uniform probe nodes at zero distance from the set.
    pub zero_fraction: T,
    pub nodes: usize,
}

/// Set against which the distance is measured.
#[derive(Debug, Clone)]
pub enum ZeroSet<T: Scalar> {
    Points(BoundaryPointSet<T>),
    /// A union of closed arcs (positive measure allowed).
    Fattened(ArcSet<T>),
}

pub fn carleson_integral<T: Scalar>(
    set: &BoundaryPointSet<T>,
    refinement: usize,
) -> Result<CarlesonValue<T>> {
    carleson_integral_of(&ZeroSet::Points(set.clone()), refinement)
}

pub fn carleson_integral_of<T: Scalar>(
    set: &ZeroSet<T>,
    refinement: usize,
) -> Result<CarlesonValue<T>> {
    if refinement < MIN_REFINEMENT {
        return Err(Error::InvalidParameter(format!(
            "refinement {refinement} below {MIN_REFINEMENT}"
        )));
    }
    let gap_lengths: Vec<T> = match set {
        ZeroSet::Points(p) => gaps(p)?.arcs().iter().map(|a| a.length()).collect(),
        ZeroSet::Fattened(arcs) => {
            if arcs.is_empty() {
                return Err(Error::EmptySet);
            }
            let zero_fraction = fat_fraction(arcs, refinement);
            let threshold = T::lit(8.0) / T::from_usize_lossy(refinement);
            if zero_fraction > threshold {
                return Ok(CarlesonValue {
                    value: T::infinity(),
                    diverged: true,
                    zero_fraction,
                    nodes: refinement,
                });
            }
            // Measure-zero arcs behave like their endpoints.
            let ends = BoundaryPointSet::new(arcs.endpoints())?;
            gaps(&ends)?.arcs().iter().map(|a| a.length()).collect()
        }
    };
    let panels = GRADING_LEVELS + 1;
    let per_panel = (refinement / (2 * gap_lengths.len() * panels)).max(2);
    let mut total = T::zero();
    let mut nodes = 0;
    for len in gap_lengths {
        let half = len * T::lit(0.5);
        let mut upper = half;
        for level in 0..panels {
            let lower = if level + 1 == panels {
                T::zero()
            } else {
                upper * T::lit(0.5)
            };
            let (x, w) = gauss_legendre_on(per_panel, lower, upper);
            let s: T = x
                .iter()
                .zip(&w)
                .map(|(&s, &w)| -w * (T::lit(2.0) * (s * T::lit(0.5)).sin()).ln())
                .sum();
            total += T::lit(2.0) * s;
            nodes += 2 * per_panel;
            upper = lower;
        }
    }
    Ok(CarlesonValue {
        value: total,
        diverged: false,
        zero_fraction: T::zero(),
        nodes,
    })
}

fn fat_fraction<T: Scalar>(arcs: &ArcSet<T>, refinement: usize) -> T {
    let hits = (0..refinement)
        .filter(|&j| {
            let t = crate::grid::angle::<T>(refinement, j);
            arcs.arcs().iter().any(|a| a.contains_half_open(t))
        })
        .count();
    T::from_usize_lossy(hits) / T::from_usize_lossy(refinement)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_vanishes() {
        let e = BoundaryPointSet::new([0.0f64]).unwrap();
        let v = carleson_integral(&e, 1 << 12).unwrap();
        assert!(!v.diverged);
        assert!(v.value.abs() < 1e-3, "{}", v.value);
    }

    #[test]
    fn empty_and_coarse_rejected() {
        let e = BoundaryPointSet::<f64>::empty();
        assert_eq!(carleson_integral(&e, 1 << 12).unwrap_err(), Error::EmptySet);
        let e = BoundaryPointSet::new([0.0f64]).unwrap();
        assert!(carleson_integral(&e, 100).is_err());
    }

    #[test]
    fn fattened_set_diverges() {
        let arcs: Vec<_> = (0..64)
            .map(|k| {
                let c = std::f64::consts::TAU * k as f64 / 64.0;
                crate::sets::Arc::new(c - 0.25 / 64.0, 0.5 / 64.0).unwrap()
            })
            .collect();
        let v = carleson_integral_of(&ZeroSet::Fattened(ArcSet::new(arcs).unwrap()), 1 << 12)
            .unwrap();
        assert!(v.diverged);
        assert!(v.value.is_infinite());
        assert!(v.zero_fraction > 0.07);
    }
}
