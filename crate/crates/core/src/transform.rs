//! Front-fixing transformation between the moving wetted region `[a, s]` and
//! the fixed reference interval `[0, 1]`, plus the coefficient functions of
//! the transformed diffusion equation.
//!
//! On the reference interval the content obeys
//! `u_t = (k/(s-a)^2) u_yy + (y s_t/(s-a)) u_y`,
//! so the geometry enters only through the two coefficient helpers below.

use crate::error::SolverError;

/// Uniform grid of `n + 1` nodes on the reference interval `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceGrid {
    n: usize,
}

impl ReferenceGrid {
    /// At least 4 cells so the one-sided boundary stencils stay clear of each
    /// other.
    pub fn new(n: usize) -> Result<Self, SolverError> {
        if n < 4 {
            return Err(SolverError::InvalidGrid { n });
        }
        Ok(Self { n })
    }

    /// Number of cells.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes (`n + 1`).
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Node position `i/n`.
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }
}

/// Map a physical position `z` in `[a, s]` to its reference coordinate.
pub fn to_reference(z: f64, s: f64, a: f64) -> Result<f64, SolverError> {
    let width = s - a;
    // Phrased so a NaN width counts as degenerate.
    let wetted = width > 0.0;
    if !wetted {
        return Err(SolverError::DegenerateFront { s, width, floor: 0.0 });
    }
    if z < a || z > s {
        return Err(SolverError::OutsideDomain { z, a, s });
    }
    Ok((z - a) / width)
}

/// Map a reference coordinate `y` in `[0, 1]` back to the physical position.
pub fn from_reference(y: f64, s: f64, a: f64) -> Result<f64, SolverError> {
    let width = s - a;
    // Phrased so a NaN width counts as degenerate.
    let wetted = width > 0.0;
    if !wetted {
        return Err(SolverError::DegenerateFront { s, width, floor: 0.0 });
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(SolverError::OutsideDomain { z: y, a: 0.0, s: 1.0 });
    }
    Ok((1.0 - y) * a + y * s)
}

/// Diffusion coefficient on the reference interval: `k/(s-a)^2`.
pub fn diffusion_coeff(s: f64, a: f64, k: f64) -> f64 {
    let width = s - a;
    k / (width * width)
}

/// Advection coefficient on the reference interval: `y s_t/(s-a)`.
pub fn advection_coeff(y: f64, s: f64, a: f64, s_t: f64) -> f64 {
    y * s_t / (s - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_fewer_than_four_cells() {
        assert!(ReferenceGrid::new(3).is_err());
        let g = ReferenceGrid::new(4).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.node(4), 1.0);
        assert_eq!(g.dy(), 0.25);
    }

    #[test]
    fn midpoint_maps_to_half() {
        assert_eq!(to_reference(1.5, 2.0, 1.0).unwrap(), 0.5);
        assert_eq!(from_reference(0.5, 2.0, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn endpoints_map_exactly() {
        assert_eq!(to_reference(1.0, 2.0, 1.0).unwrap(), 0.0);
        assert_eq!(to_reference(2.0, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(from_reference(0.0, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(from_reference(1.0, 2.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn outside_positions_are_rejected() {
        assert!(matches!(to_reference(0.5, 2.0, 1.0), Err(SolverError::OutsideDomain { .. })));
        assert!(matches!(to_reference(2.5, 2.0, 1.0), Err(SolverError::OutsideDomain { .. })));
        assert!(matches!(from_reference(-0.1, 2.0, 1.0), Err(SolverError::OutsideDomain { .. })));
    }

    #[test]
    fn collapsed_region_is_rejected() {
        assert!(matches!(to_reference(1.0, 1.0, 1.0), Err(SolverError::DegenerateFront { .. })));
        assert!(matches!(from_reference(0.5, 0.5, 1.0), Err(SolverError::DegenerateFront { .. })));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(diffusion_coeff(3.0, 1.0, 1.0), 0.25); // k = 1, width 2
        assert_eq!(advection_coeff(1.0, 3.0, 1.0, 0.2), 0.1); // y = 1, rate 0.2, width 2
        assert_eq!(advection_coeff(0.0, 3.0, 1.0, 0.2), 0.0); // pinned wall
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_is_tight(
                a in 0.1f64..5.0,
                width in 0.01f64..10.0,
                y in 0.0f64..=1.0,
            ) {
                let s = a + width;
                let z = from_reference(y, s, a).unwrap();
                let back = to_reference(z, s, a).unwrap();
                // Rounding in z is amplified by 1/width on the way back.
                let tol = 1e-14 * (1.0 + a.abs() / width);
                prop_assert!((back - y).abs() <= tol, "y = {}, back = {}", y, back);
            }
        }
    }
}
