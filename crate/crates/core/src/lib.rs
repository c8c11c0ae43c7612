//! Monte Carlo integral geometry for closed trajectories crossing planar
//! domains.
//!
//! A trajectory loop is dropped uniformly at random (under the kinematic
//! density `dx dy dθ`) over a domain; for each placement the engine measures
//! the length of the loop inside the domain and the number of boundary
//! crossings. Averaging over placements gives the mean arc length, which is
//! compared against the closed forms in [`formulas`].

pub mod arc;
pub mod critical;
pub mod estimators;
pub mod formulas;
pub mod geom;
pub mod sampler;
pub mod shapes;
