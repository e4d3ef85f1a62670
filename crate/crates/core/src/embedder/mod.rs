//! Geometric realizability of candidate contact graphs.
//!
//! A candidate is realized by choosing one edge length `d` and one interior
//! angle per (face, vertex) incidence, subject to: every face closes up as an
//! equilateral spherical polygon, the angles around every vertex sum to a
//! full turn, and every angle stays within [alpha(d), pi] where alpha is the
//! equilateral triangle angle. Coordinates are then propagated from a root
//! edge and checked against the candidate (contact graph isomorphism, no arc
//! crossings, convex faces, separation).

mod lm;
mod lp;
mod realize;
mod solve;
mod system;
mod verify;

pub use lp::lp_prune;
pub use realize::{maximin_point_in_face, point_in_face, realize_coordinates};
pub use solve::{feasible_range, solve_candidate, DMode, SolveOutcome};
pub use system::AngleSystem;
pub use verify::{candidate_from_config, verify_config, VerifyError};

use crate::error::Error;
use crate::sphere_geom::{angular_dist, FaceAngleVector, UnitVector};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Distance tolerance for declaring a pair of points in contact.
pub const CONTACT_TOL: f64 = 1e-8;

/// Acceptance threshold on the maximum constraint violation of a solution.
pub const ACCEPT_TOL: f64 = 1e-9;

/// Solver iteration budget.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverBudget {
    pub starts: usize,
    pub iters: usize,
    pub accept_tol: f64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            starts: 64,
            iters: 500,
            accept_tol: ACCEPT_TOL,
        }
    }
}

/// A solution of the angle system for one candidate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingSolution {
    pub d: f64,
    pub face_angles: Vec<FaceAngleVector>,
    /// Maximum constraint violation.
    pub residual: f64,
}

/// A realized point configuration with its derived contact structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphericalConfig {
    pub points: Vec<UnitVector>,
    /// Minimum pairwise angular distance.
    pub separation: f64,
    /// Pairs at the minimum distance (within [`CONTACT_TOL`]).
    pub edges: Vec<(usize, usize)>,
}

impl SphericalConfig {
    pub fn from_points(points: Vec<UnitVector>) -> Result<SphericalConfig> {
        if points.len() < 2 {
            return Err(Error::domain("a configuration needs at least 2 points"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.norm_error() > 1e-6 {
                return Err(Error::domain(format!("point {i} is not unit length")));
            }
        }
        let separation = crate::sphere_geom::min_separation(&points)?;
        let mut edges = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if angular_dist(&points[i], &points[j]) <= separation + CONTACT_TOL {
                    edges.push((i, j));
                }
            }
        }
        Ok(SphericalConfig {
            points,
            separation,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn contact_count(&self) -> usize {
        self.edges.len()
    }

    /// Indices of contacts of vertex `v`.
    pub fn contacts_of(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        deg.reverse();
        deg
    }
}

/// Feasibility verdict for a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    Infeasible,
    Undecided,
}

/// What stops the edge length at an endpoint of the feasible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapReason {
    /// The range is a single point.
    Rigid,
    /// The angle system itself stops admitting solutions (an angle pins at a
    /// bound or closure fails); the extreme is attained by the contact graph.
    FrameBound,
    /// The frame continues but a non-contact pair reaches the separation (a
    /// new contact is about to form), or an isolated vertex runs out of room.
    Collision,
    /// The search window itself (a user bound) stopped the continuation.
    DomainLimit,
    Unknown,
}

/// Feasible edge-length range with verified witnesses at the endpoints.
/// For candidates admitting irreducible configurations, the range spans the
/// d over which the configuration stays irreducible.
#[derive(Debug, Clone)]
pub struct FeasibleRange {
    pub status: Status,
    /// Whether any realized configuration classified as irreducible.
    pub irreducible_anywhere: bool,
    pub d_min: f64,
    pub d_max: f64,
    pub witness_min: Option<(EmbeddingSolution, SphericalConfig)>,
    pub witness_max: Option<(EmbeddingSolution, SphericalConfig)>,
    pub min_cap: CapReason,
    pub max_cap: CapReason,
    /// True when some failed solve looked suspiciously close to feasible.
    pub suspicious: bool,
}

impl FeasibleRange {
    pub fn infeasible(suspicious: bool) -> FeasibleRange {
        FeasibleRange {
            status: if suspicious {
                Status::Undecided
            } else {
                Status::Infeasible
            },
            irreducible_anywhere: false,
            d_min: f64::NAN,
            d_max: f64::NAN,
            witness_min: None,
            witness_max: None,
            min_cap: CapReason::Unknown,
            max_cap: CapReason::Unknown,
            suspicious,
        }
    }
}
