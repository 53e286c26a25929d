//! Fixed inputs shared by the benchmarks.

use adjoint_core::{PointConfiguration, WeightVector};

pub fn pentagon() -> (PointConfiguration, WeightVector) {
    let cfg = PointConfiguration::from_rows(&[
        vec![1, 0, 1],
        vec![1, 1, 1],
        vec![1, 2, 2],
        vec![1, 2, 3],
        vec![1, 0, 3],
    ])
    .expect("valid");
    (cfg, WeightVector::from(vec![0, 1, 0, 0, 1]))
}

/// Eight vertices in dimension 3, no four on a common facet plane by design.
pub fn eight_vertices() -> (PointConfiguration, WeightVector) {
    let cfg = PointConfiguration::from_rows(&[
        vec![1, 0, 0, 0],
        vec![1, 3, 0, 0],
        vec![1, 0, 3, 0],
        vec![1, 0, 0, 3],
        vec![1, 3, 3, 1],
        vec![1, 3, 1, 3],
        vec![1, 1, 3, 3],
        vec![1, 3, 3, 3],
    ])
    .expect("valid");
    (cfg, WeightVector::from(vec![7, 1, 8, 2, 8, 1, 8, 2]))
}
