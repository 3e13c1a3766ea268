//! Vibrating elliptical membrane.
//!
//! Separation of the wave equation in confocal elliptic coordinates turns the
//! Helmholtz problem into a pair of ordinary differential equations sharing
//! one constant `R`: the angular equation on the periodic coordinate and the
//! radial equation on the elliptic one. This crate computes the
//! characteristic constants, evaluates both families of eigenfunctions
//! through several series representations, locates the eigenvalues `lambda`
//! that pin the boundary, extracts the nodal geometry (confocal ellipses and
//! hyperbola arcs), and expands initial-velocity data over the mode basis
//! with the weighted orthogonality of the separated system.
//!
//! Modules:
//! * [`coords`] — confocal frame, forward/inverse maps, metric weight
//! * [`angular`] — periodic Mathieu problem: constants and eigenfunctions
//! * [`radial`] — modified Mathieu functions, annulus machinery
//! * [`spectrum`] — eigenvalue search, frequencies, circle reference solver
//! * [`nodal`] — nodal-line extraction, SVG/CSV export
//! * [`synthesis`] — weighted inner products and modal expansion
//!
//! ```
//! use membrane::angular::AngularKind;
//! use membrane::coords::EllipseGeometry;
//! use membrane::spectrum::{find_lambda, frequency, MembraneMaterial};
//!
//! let geometry = EllipseGeometry::new(0.3, (1.0f64 / 0.3).acosh())?;
//! let mode = find_lambda(&geometry, AngularKind::Even, 2, 1, 1e-9)?;
//! let material = MembraneMaterial::new(1.0)?;
//! let pitch = frequency(mode.lambda, &material);
//! let displacement = mode.p_eval(0.7) * mode.q_eval(0.5).q;
//! assert!(mode.lambda > 0.0 && pitch > 0.0 && displacement.is_finite());
//! # Ok::<(), membrane::Error>(())
//! ```

pub mod angular;
pub mod coords;
pub mod error;
pub mod nodal;
pub mod ode;
pub mod quad;
pub mod radial;
pub mod spectrum;
pub mod synthesis;

pub use error::{Error, Result};
