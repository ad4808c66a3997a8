//! Uniform radial meshes on [0, r_c].

use crate::error::{Error, Result};

/// A uniform mesh of contiguous elements covering `[0, r_c]`.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub r_c: f64,
    pub h: f64,
    /// Ordered `[r_i, r_{i+1}]` intervals.
    pub elements: Vec<(f64, f64)>,
}

/// Uniform mesh of `round(r_c / h)` elements. The cutoff must sit within
/// half an element of a multiple of `h`; it is snapped to `count * h` so the
/// elements tile `[0, r_c]` exactly.
pub fn build_mesh(r_c: f64, h: f64) -> Result<Mesh> {
    if !(r_c > 0.0) || !(h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mesh needs r_c > 0 and h > 0, got r_c = {r_c}, h = {h}"
        )));
    }
    let count = (r_c / h).round() as usize;
    if count == 0 {
        return Err(Error::InvalidParameter(format!(
            "cutoff {r_c} shorter than half an element of length {h}"
        )));
    }
    let snapped = count as f64 * h;
    let elements = (0..count)
        .map(|i| (i as f64 * h, (i + 1) as f64 * h))
        .collect();
    Ok(Mesh {
        r_c: snapped,
        h,
        elements,
    })
}

impl Mesh {
    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn node_count(&self) -> usize {
        self.elements.len() + 1
    }
}
