//! Node deployment and planar geometry.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Index of a sensor node. Ids run `0..n` and never change during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance in meters.
#[inline]
pub fn distance(a: Position, b: Position) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// A deployed sensor field together with the base station it reports to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    nodes: Vec<Position>,
    bs: Position,
    width: f64,
    height: f64,
}

/// Default base station spot: centered above the top edge, a quarter of the
/// field height outside it.
pub fn default_bs(width: f64, height: f64) -> Position {
    Position::new(width / 2.0, height * 1.25)
}

impl Field {
    /// Builds a field from explicit positions. Used by tests and examples that
    /// need hand-placed nodes.
    pub fn new(nodes: Vec<Position>, bs: Position, width: f64, height: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::config("nodes", "at least one node is required"));
        }
        if !(width >= 0.0 && width.is_finite() && height >= 0.0 && height.is_finite()) {
            return Err(Error::config(
                "width",
                "field dimensions must be finite and non-negative",
            ));
        }
        if !bs.is_finite() {
            return Err(Error::config("bs", "base station coordinates must be finite"));
        }
        for (i, p) in nodes.iter().enumerate() {
            let inside = p.is_finite() && (0.0..=width).contains(&p.x) && (0.0..=height).contains(&p.y);
            if !inside {
                return Err(Error::config(
                    "nodes",
                    format!("node {i} at ({}, {}) lies outside {width}x{height}", p.x, p.y),
                ));
            }
        }
        Ok(Self {
            nodes,
            bs,
            width,
            height,
        })
    }

    pub fn with_bs(mut self, bs: Position) -> Result<Self> {
        if !bs.is_finite() {
            return Err(Error::config("bs", "base station coordinates must be finite"));
        }
        self.bs = bs;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.nodes
    }

    pub fn position(&self, id: NodeId) -> Position {
        self.nodes[id.0]
    }

    pub fn bs(&self) -> Position {
        self.bs
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        distance(self.nodes[a.0], self.nodes[b.0])
    }

    pub fn dist_to_bs(&self, a: NodeId) -> f64 {
        distance(self.nodes[a.0], self.bs)
    }
}

/// Places `n` nodes independently and uniformly over `width x height`.
pub fn deploy_uniform(n: usize, width: f64, height: f64, seed: u64) -> Result<Field> {
    if n == 0 {
        return Err(Error::config("nodes", "must be at least 1"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::config("width", format!("must be positive, got {width}")));
    }
    if !(height > 0.0 && height.is_finite()) {
        return Err(Error::config("height", format!("must be positive, got {height}")));
    }
    let mut rng = rng::deployment_rng(seed);
    let nodes = (0..n)
        .map(|_| {
            let x = rng.gen::<f64>() * width;
            let y = rng.gen::<f64>() * height;
            Position::new(x, y)
        })
        .collect();
    Ok(Field {
        nodes,
        bs: default_bs(width, height),
        width,
        height,
    })
}

/// Lattice deployment: node `j * nx + i` sits at `(i * spacing, j * spacing)`.
pub fn deploy_grid(nx: usize, ny: usize, spacing: f64) -> Result<Field> {
    if nx == 0 {
        return Err(Error::config("grid.nx", "must be at least 1"));
    }
    if ny == 0 {
        return Err(Error::config("grid.ny", "must be at least 1"));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::config(
            "grid.spacing",
            format!("must be positive, got {spacing}"),
        ));
    }
    let nodes = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| Position::new(i as f64 * spacing, j as f64 * spacing)))
        .collect();
    let width = (nx - 1) as f64 * spacing;
    let height = (ny - 1) as f64 * spacing;
    Ok(Field {
        nodes,
        bs: default_bs(width, height),
        width,
        height,
    })
}
