//! Flat spheres with conical singularities.
//!
//! A surface is a set of Euclidean triangles glued edge to edge into a
//! topological sphere ([`ConeSurface`]). On top of that the crate computes the
//! curvature gap, flips to a Delaunay triangulation, traces geodesics by
//! unfolding, enumerates saddle connections, encodes simple ones as normal
//! coordinates, and checks measured quantities against closed-form bounds.
//!
//! ```
//! use flatsphere::{corpus, curvature::CurvatureProfile, geodesic};
//!
//! let s = corpus::named("equilateral").unwrap();
//! let gap = CurvatureProfile::new(s.curvatures()).unwrap().gap().unwrap();
//! assert!((gap - 1.0 / 3.0).abs() < 1e-12);
//!
//! let sc = geodesic::enumerate_saddle_connections(&s, 1.8).unwrap();
//! assert_eq!(sc.len(), 6);
//! ```

pub mod annulus;
pub mod bounds;
pub mod corpus;
pub mod curvature;
pub mod delaunay;
pub mod emit;
pub mod geodesic;
pub mod geom;
pub mod normal;
pub mod surface;
pub mod verify;

pub use bounds::{compute_bounds, BoundsReport};
pub use curvature::{curvature_gap, CurvatureProfile};
pub use delaunay::{delaunayize, FlipReport};
pub use geodesic::{enumerate_saddle_connections, trace, SaddleConnection, Trajectory};
pub use geom::Vec2;
pub use normal::{decode_normal, encode_normal, NormalCoordinate};
pub use surface::{parse_surface, validate_surface, ConeSurface, RawSurface, DEFAULT_TOL};
pub use verify::{verify_surface, Budget, VerificationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/surfaces.md")]
    struct Surfaces;
    #[doc = include_str!("../../../book/src/curvature-gap.md")]
    struct CurvatureGap;
    #[doc = include_str!("../../../book/src/annuli.md")]
    struct Annuli;
    #[doc = include_str!("../../../book/src/geodesics.md")]
    struct Geodesics;
    #[doc = include_str!("../../../book/src/delaunay.md")]
    struct Delaunay;
    #[doc = include_str!("../../../book/src/normal-coordinates.md")]
    struct NormalCoordinates;
    #[doc = include_str!("../../../book/src/bounds.md")]
    struct Bounds;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
