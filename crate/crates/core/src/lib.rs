//! Local cluster statistics and local-to-global certificates for Delone point sets.

pub mod antipodal;
pub mod classify;
mod covering;
pub mod criteria;
pub mod error;
pub mod generators;
pub mod geom;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod radius;
pub mod scalar;
pub mod set;

pub use antipodal::{
    antipodal_lattice_decomposition, check_global_antipodality, is_locally_antipodal, reconstruct_from_2r_cluster,
    AntipodalFlag, AntipodalReport, CosetDecomposition, GlobalAntipodality, Reconstruction,
};
pub use classify::{
    classify, cluster_group, clusters_equivalent, group_order, group_orders_by_class, n_profile, Classifier,
    ClusterClass, ClusterGroup, ClusterPartition, Fingerprint, GroupOrder, NRhoProfile, Neighborhood,
};
pub use criteria::{
    certify_auto, check_crystal_criterion, check_regular_criterion, scan_candidates, Criterion, CriterionReport,
    GroupCheck, GroupCheckMode, ScanReport, Verdict,
};
pub use error::{Error, Result};
pub use geom::{apply, compose, point_inversion, points_equal, Isometry, Metric, Point, PointIndex, Tolerance};
pub use io::{FileMode, PointSetFile};
pub use lattice::Lattice;
pub use linalg::Matrix;
pub use radius::Radius;
pub use scalar::{NumericMode, Rational, Scalar};
pub use set::{
    BoundingBox, Chain, Cluster, DeloneParams, DistanceSpectrum, Exactness, PointSet, PointSetHandle, SetKind,
};
