//! Reference cell, box domain, and the ε-paving of the domain with its
//! lattice index sets and subdomain measures.

use crate::{Error, Result};

/// Spatial dimension. All loops and array types are written against this
/// constant; only `DIM = 2` is built and tested.
pub const DIM: usize = 2;

pub type Point = [f64; DIM];
pub type MultiIndex = [i64; DIM];

/// Relative slack for lattice containment tests. A scaled cell counts as
/// contained in the domain when it fits up to this fraction of the scale,
/// so exact pavings survive floating-point roundoff. Boundary-touching
/// cells therefore count as contained (closure convention).
const FIT_TOL: f64 = 1e-9;

/// Axis-aligned box domain Ω.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    pub low: Point,
    pub high: Point,
}

impl BoxDomain {
    pub fn new(low: Point, high: Point) -> Result<Self> {
        for axis in 0..DIM {
            if !(high[axis] - low[axis] > 0.0) || !low[axis].is_finite() || !high[axis].is_finite()
            {
                return Err(Error::Geometry(format!(
                    "degenerate domain on axis {axis}: [{}, {}]",
                    low[axis], high[axis]
                )));
            }
        }
        Ok(Self { low, high })
    }

    pub fn unit_square() -> Self {
        Self { low: [0.0; DIM], high: [1.0; DIM] }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.high[axis] - self.low[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..DIM).map(|a| self.extent(a)).product()
    }
}

/// Closed-form measures of the reference cell: `|Y|`, `|Y₁|` (matrix),
/// `|Y₂|` (inclusion), and the interface perimeter `|Γ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellMeasures {
    pub cell: f64,
    pub matrix: f64,
    pub inclusion: f64,
    pub interface: f64,
}

/// The periodicity cell `[0,l₁) × [0,l₂)` with an optional axis-aligned box
/// inclusion given by per-axis fractions of the periods. The matrix
/// component is the cell minus the closed inclusion; the interface is the
/// inclusion boundary. The inclusion must keep a strict margin to the cell
/// boundary on every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCell {
    pub periods: Point,
    inclusion: Option<[(f64, f64); DIM]>,
}

impl ReferenceCell {
    pub fn new(periods: Point, frac_low: Point, frac_high: Point) -> Result<Self> {
        for axis in 0..DIM {
            if !(periods[axis] > 0.0) {
                return Err(Error::Geometry(format!(
                    "period on axis {axis} must be positive, got {}",
                    periods[axis]
                )));
            }
            if !(frac_low[axis] > 0.0 && frac_high[axis] < 1.0 && frac_low[axis] < frac_high[axis])
            {
                return Err(Error::Geometry(format!(
                    "inclusion fractions on axis {axis} must satisfy 0 < low < high < 1, \
                     got [{}, {}]",
                    frac_low[axis], frac_high[axis]
                )));
            }
        }
        let mut inc = [(0.0, 0.0); DIM];
        for axis in 0..DIM {
            inc[axis] = (frac_low[axis], frac_high[axis]);
        }
        Ok(Self { periods, inclusion: Some(inc) })
    }

    /// Degenerate test mode: a cell with no inclusion (single component).
    pub fn without_inclusion(periods: Point) -> Result<Self> {
        for axis in 0..DIM {
            if !(periods[axis] > 0.0) {
                return Err(Error::Geometry(format!(
                    "period on axis {axis} must be positive, got {}",
                    periods[axis]
                )));
            }
        }
        Ok(Self { periods, inclusion: None })
    }

    /// Unit cell with the centered half-width inclusion `[1/4, 3/4)²`.
    pub fn unit() -> Self {
        Self::new([1.0; DIM], [0.25; DIM], [0.75; DIM]).unwrap()
    }

    pub fn inclusion_fractions(&self) -> Option<[(f64, f64); DIM]> {
        self.inclusion
    }

    pub fn has_inclusion(&self) -> bool {
        self.inclusion.is_some()
    }

    pub fn measures(&self) -> CellMeasures {
        let cell: f64 = self.periods.iter().product();
        match self.inclusion {
            None => CellMeasures { cell, matrix: cell, inclusion: 0.0, interface: 0.0 },
            Some(inc) => {
                let mut inclusion = 1.0;
                let mut interface = 0.0;
                for axis in 0..DIM {
                    let side = (inc[axis].1 - inc[axis].0) * self.periods[axis];
                    inclusion *= side;
                    interface += 2.0 * side;
                }
                CellMeasures { cell, matrix: cell - inclusion, inclusion, interface }
            }
        }
    }

    /// Reduce a point into the cell `[0, l)` per axis.
    pub fn wrap(&self, y: Point) -> Point {
        let mut out = [0.0; DIM];
        for axis in 0..DIM {
            let l = self.periods[axis];
            let mut r = y[axis].rem_euclid(l);
            // rem_euclid can return l itself when y is a tiny negative number.
            if r >= l {
                r -= l;
            }
            out[axis] = r;
        }
        out
    }
}

/// Paving status returned by [`build_tiling`]. A cell larger than the
/// domain yields an empty interior paving, reported as a warning rather
/// than an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TilingStatus {
    Ok,
    EmptyPaving,
}

/// Result of locating a point inside the paving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Locate {
    Inside {
        cell: MultiIndex,
        /// Position of `cell` in the interior-cell enumeration.
        block: usize,
        /// Local coordinate y with x = ε·k_l + ε·y, y ∈ [0, l).
        local: Point,
    },
    /// x lies in the boundary layer Λ_ε not covered by whole cells.
    OutsidePaving,
}

/// The ε-scaled paving of Ω by translates of the reference cell.
///
/// Two index sets are enumerated: `cells_with_inclusion` holds every k whose
/// scaled closed inclusion fits in Ω (these carry interface and inclusion
/// material, including cells straddling ∂Ω), and `interior_cells` holds
/// every k whose whole scaled cell fits in Ω (these are the unfolding
/// blocks). The second set is always a subset of the first for cells with
/// an inclusion.
#[derive(Debug, Clone)]
pub struct EpsilonTiling {
    pub cell: ReferenceCell,
    pub domain: BoxDomain,
    pub eps: f64,
    pub cells_with_inclusion: Vec<MultiIndex>,
    pub interior_cells: Vec<MultiIndex>,
    pub status: TilingStatus,
    k_min: MultiIndex,
    k_dims: [usize; DIM],
    interior_block: Vec<Option<u32>>,
    with_inclusion: Vec<bool>,
}

/// Enumerate the paving of `domain` by ε-scaled cells.
///
/// Containment is closure-tolerant: a cell (or inclusion) touching ∂Ω
/// within a relative tolerance counts as contained, so exact pavings
/// produce an empty boundary layer.
pub fn build_tiling(cell: &ReferenceCell, domain: &BoxDomain, eps: f64) -> Result<EpsilonTiling> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Geometry(format!("scale must be positive, got {eps}")));
    }
    let mut k_lo = [0i64; DIM];
    let mut k_hi = [0i64; DIM];
    for axis in 0..DIM {
        let step = eps * cell.periods[axis];
        k_lo[axis] = (domain.low[axis] / step).floor() as i64 - 1;
        k_hi[axis] = (domain.high[axis] / step).ceil() as i64 + 1;
    }
    let k_dims = [
        (k_hi[0] - k_lo[0] + 1) as usize,
        (k_hi[1] - k_lo[1] + 1) as usize,
    ];
    let fits = |k: MultiIndex, lo_frac: Point, hi_frac: Point| -> bool {
        (0..DIM).all(|axis| {
            let step = eps * cell.periods[axis];
            let tol = FIT_TOL * step;
            let lo = (k[axis] as f64 + lo_frac[axis]) * step;
            let hi = (k[axis] as f64 + hi_frac[axis]) * step;
            lo >= domain.low[axis] - tol && hi <= domain.high[axis] + tol
        })
    };
    let inc = cell.inclusion_fractions();
    let mut cells_with_inclusion = Vec::new();
    let mut interior_cells = Vec::new();
    let mut interior_block = vec![None; k_dims[0] * k_dims[1]];
    let mut with_inclusion = vec![false; k_dims[0] * k_dims[1]];
    for k1 in k_lo[0]..=k_hi[0] {
        for k2 in k_lo[1]..=k_hi[1] {
            let k = [k1, k2];
            let slot = ((k1 - k_lo[0]) as usize) * k_dims[1] + (k2 - k_lo[1]) as usize;
            let whole = fits(k, [0.0; DIM], [1.0; DIM]);
            if whole {
                interior_block[slot] = Some(interior_cells.len() as u32);
                interior_cells.push(k);
            }
            let has_inc = match inc {
                Some(b) => fits(k, [b[0].0, b[1].0], [b[0].1, b[1].1]),
                // Without an inclusion the two index sets coincide.
                None => whole,
            };
            if has_inc {
                with_inclusion[slot] = true;
                cells_with_inclusion.push(k);
            }
        }
    }
    let status = if interior_cells.is_empty() {
        TilingStatus::EmptyPaving
    } else {
        TilingStatus::Ok
    };
    Ok(EpsilonTiling {
        cell: cell.clone(),
        domain: domain.clone(),
        eps,
        cells_with_inclusion,
        interior_cells,
        status,
        k_min: k_lo,
        k_dims,
        interior_block,
        with_inclusion,
    })
}

impl EpsilonTiling {
    fn slot(&self, k: MultiIndex) -> Option<usize> {
        let i = k[0] - self.k_min[0];
        let j = k[1] - self.k_min[1];
        if i < 0 || j < 0 || i as usize >= self.k_dims[0] || j as usize >= self.k_dims[1] {
            return None;
        }
        Some(i as usize * self.k_dims[1] + j as usize)
    }

    /// Block index of k in the interior-cell enumeration, if interior.
    pub fn block_of(&self, k: MultiIndex) -> Option<usize> {
        self.slot(k)
            .and_then(|s| self.interior_block[s])
            .map(|b| b as usize)
    }

    /// Whether cell k carries an inclusion inside Ω.
    pub fn carries_inclusion(&self, k: MultiIndex) -> bool {
        self.slot(k).map(|s| self.with_inclusion[s]).unwrap_or(false)
    }

    /// Origin ε·k_l of cell k.
    pub fn cell_origin(&self, k: MultiIndex) -> Point {
        let mut p = [0.0; DIM];
        for axis in 0..DIM {
            p[axis] = self.eps * k[axis] as f64 * self.cell.periods[axis];
        }
        p
    }

    /// Locate x in the paving: x = ε·k_l + ε·y with the left-closed cell
    /// convention (a point on a shared cell face belongs to the cell on its
    /// upper side).
    pub fn locate(&self, x: Point) -> Locate {
        let mut k = [0i64; DIM];
        let mut local = [0.0; DIM];
        for axis in 0..DIM {
            let q = x[axis] / (self.eps * self.cell.periods[axis]);
            let f = q.floor();
            k[axis] = f as i64;
            local[axis] = (q - f) * self.cell.periods[axis];
        }
        match self.block_of(k) {
            Some(block) => Locate::Inside { cell: k, block, local },
            None => Locate::OutsidePaving,
        }
    }

    /// |Ω̂_ε|: measure covered by whole interior cells.
    pub fn interior_measure(&self) -> f64 {
        let m = self.cell.measures();
        self.interior_cells.len() as f64 * self.eps.powi(DIM as i32) * m.cell
    }

    /// |Λ_ε| = |Ω| − |Ω̂_ε|.
    pub fn boundary_layer_measure(&self) -> f64 {
        (self.domain.volume() - self.interior_measure()).max(0.0)
    }

    /// |Ω₂^ε| over the selected inclusion set.
    pub fn inclusion_measure(&self, include_boundary: bool) -> f64 {
        let m = self.cell.measures();
        let n = if include_boundary {
            self.cells_with_inclusion.len()
        } else {
            self.interior_cells
                .iter()
                .filter(|&&k| self.carries_inclusion(k))
                .count()
        };
        n as f64 * self.eps.powi(DIM as i32) * m.inclusion
    }

    /// |Ω₁^ε| = |Ω| − |Ω₂^ε|.
    pub fn matrix_measure(&self, include_boundary: bool) -> f64 {
        self.domain.volume() - self.inclusion_measure(include_boundary)
    }

    /// Total interface length over the selected inclusion set (scales with
    /// ε^{n−1}).
    pub fn interface_length(&self, include_boundary: bool) -> f64 {
        let m = self.cell.measures();
        let n = if include_boundary {
            self.cells_with_inclusion.len()
        } else {
            self.interior_cells
                .iter()
                .filter(|&&k| self.carries_inclusion(k))
                .count()
        };
        n as f64 * self.eps.powi(DIM as i32 - 1) * m.interface
    }

    /// True when Ω is paved exactly by whole cells (empty boundary layer
    /// and no straddling inclusions).
    pub fn is_exact_paving(&self) -> bool {
        self.boundary_layer_measure() <= FIT_TOL * self.domain.volume()
            && self.cells_with_inclusion.len()
                == self
                    .interior_cells
                    .iter()
                    .filter(|&&k| self.carries_inclusion(k))
                    .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_measures_unit() {
        let cell = ReferenceCell::unit();
        let m = cell.measures();
        assert_eq!(m.cell, 1.0);
        assert_eq!(m.inclusion, 0.25);
        assert_eq!(m.matrix, 0.75);
        assert_eq!(m.interface, 2.0);
    }

    #[test]
    fn cell_measures_empty_inclusion() {
        let cell = ReferenceCell::without_inclusion([1.0, 1.0]).unwrap();
        let m = cell.measures();
        assert_eq!(m.inclusion, 0.0);
        assert_eq!(m.interface, 0.0);
        assert_eq!(m.matrix, 1.0);
    }

    #[test]
    fn cell_measures_anisotropic() {
        let cell = ReferenceCell::new([2.0, 1.0], [0.25, 0.25], [0.75, 0.75]).unwrap();
        let m = cell.measures();
        assert_eq!(m.cell, 2.0);
        assert!((m.inclusion - 0.5).abs() < 1e-15);
        assert!((m.interface - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_inclusion_without_margin() {
        assert!(ReferenceCell::new([1.0, 1.0], [0.0, 0.25], [0.75, 0.75]).is_err());
        assert!(ReferenceCell::new([1.0, 1.0], [0.25, 0.25], [1.0, 0.75]).is_err());
        assert!(ReferenceCell::new([1.0, 1.0], [0.5, 0.25], [0.5, 0.75]).is_err());
    }

    #[test]
    fn exact_paving_quarter() {
        let tiling =
            build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), 0.25).unwrap();
        assert_eq!(tiling.interior_cells.len(), 16);
        assert_eq!(tiling.cells_with_inclusion.len(), 16);
        assert_eq!(tiling.status, TilingStatus::Ok);
        assert!(tiling.is_exact_paving());
        assert!(tiling.boundary_layer_measure() < 1e-12);
        assert!((tiling.interior_measure() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inexact_paving_enumeration() {
        // Independent enumeration oracle: brute-force scan of the lattice
        // window with exact arithmetic on the containment inequalities.
        let eps = 0.3;
        let mut expect_interior = 0;
        let mut expect_inclusion = 0;
        for k1 in -2i64..=5 {
            for k2 in -2i64..=5 {
                let inside = |lo: f64, hi: f64| {
                    eps * (k1 as f64 + lo) >= 0.0
                        && eps * (k1 as f64 + hi) <= 1.0
                        && eps * (k2 as f64 + lo) >= 0.0
                        && eps * (k2 as f64 + hi) <= 1.0
                };
                if inside(0.0, 1.0) {
                    expect_interior += 1;
                }
                if inside(0.25, 0.75) {
                    expect_inclusion += 1;
                }
            }
        }
        assert_eq!(expect_interior, 9);
        let tiling = build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), eps).unwrap();
        assert_eq!(tiling.interior_cells.len(), expect_interior);
        assert_eq!(tiling.cells_with_inclusion.len(), expect_inclusion);
        assert!((tiling.boundary_layer_measure() - (1.0 - 9.0 * 0.09)).abs() < 1e-12);
        assert!(!tiling.is_exact_paving());
    }

    #[test]
    fn oversized_cell_warns() {
        let tiling = build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), 2.0).unwrap();
        assert!(tiling.interior_cells.is_empty());
        assert_eq!(tiling.status, TilingStatus::EmptyPaving);
    }

    #[test]
    fn locate_examples() {
        let tiling =
            build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), 0.25).unwrap();
        match tiling.locate([0.3, 0.6]) {
            Locate::Inside { cell, local, .. } => {
                assert_eq!(cell, [1, 2]);
                assert!((local[0] - 0.2).abs() < 1e-12);
                assert!((local[1] - 0.4).abs() < 1e-12);
            }
            _ => panic!("expected interior point"),
        }
        match tiling.locate([0.0, 0.0]) {
            Locate::Inside { cell, local, .. } => {
                assert_eq!(cell, [0, 0]);
                assert_eq!(local, [0.0, 0.0]);
            }
            _ => panic!("corner is left-closed"),
        }
        let t03 = build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), 0.3).unwrap();
        assert_eq!(t03.locate([0.999, 0.999]), Locate::OutsidePaving);
    }

    #[test]
    fn locate_roundtrip() {
        let tiling =
            build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), 0.125).unwrap();
        for &k in &tiling.interior_cells {
            for (a, b) in [(0.0, 0.0), (0.3, 0.7), (0.999, 0.001)] {
                let o = tiling.cell_origin(k);
                let x = [o[0] + tiling.eps * a, o[1] + tiling.eps * b];
                match tiling.locate(x) {
                    Locate::Inside { cell, local, .. } => {
                        assert_eq!(cell, k);
                        assert!((local[0] - a).abs() < 1e-10);
                        assert!((local[1] - b).abs() < 1e-10);
                    }
                    _ => panic!("round trip left the paving"),
                }
            }
        }
    }

    #[test]
    fn measures_additivity() {
        for eps in [0.25, 0.3, 0.2, 0.17] {
            let tiling =
                build_tiling(&ReferenceCell::unit(), &BoxDomain::unit_square(), eps).unwrap();
            for include in [true, false] {
                let sum = tiling.matrix_measure(include) + tiling.inclusion_measure(include);
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wrap_reduces_into_cell() {
        let cell = ReferenceCell::unit();
        let y = cell.wrap([1.25, -0.25]);
        assert!((y[0] - 0.25).abs() < 1e-15);
        assert!((y[1] - 0.75).abs() < 1e-15);
        let z = cell.wrap([-1e-17, 2.0]);
        assert!(z[0] >= 0.0 && z[0] < 1.0);
        assert!(z[1] >= 0.0 && z[1] < 1.0);
    }
}
