//! Exact intersection theory on blow-ups of the projective plane at very
//! general points: curve catalogs, Zariski chamber walks, Newton-Okounkov
//! bodies and functions, Seshadri-type thresholds, fat-point linear system
//! dimensions and a quadratic-inequality certificate engine.

pub mod algnum;
pub mod certificate;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod okounkov;
pub mod plot;
pub mod rational;
pub mod seshadri;
pub mod shgh;
pub mod zariski;

pub use algnum::{AlgNum, MultiQuadratic};
pub use curves::{generate_catalog, CurveClass, NegCurveCatalog};
pub use error::{Error, Result};
pub use lattice::{DivClass, SurfaceModel};
pub use okounkov::{
    okounkov_body, okounkov_function, query_phi, Flag, OkounkovBody, OkounkovSlices, PhiValue,
    Polygon, ValuationPoint,
};
pub use rational::Q;
pub use seshadri::{epsilon_mu_relation, mu, seshadri, EpsilonMuReport, PointSet, ThresholdResult};
pub use shgh::{classify, cremona_reduce, oracle_dim, vdim, LinearSystem, ShghReport};
pub use zariski::{
    decompose, nef_threshold, pseff_threshold, walk_ray, ChamberWalk, Threshold,
    ZariskiDecomposition,
};
