//! House occupancy grid and shortest-path search.
//!
//! Cells are 4-connected with unit edge cost. Search is Dijkstra over a
//! binary heap keyed by `(cost, row, col)`, expanding neighbours in the
//! fixed order N, E, S, W, so identical inputs always give identical paths.

mod format;

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{parse_map, MAP_FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub const fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Walkable,
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub label: String,
    pub node: Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<Node>,
    pub cost: usize,
}

impl Path {
    pub fn start(&self) -> Node {
        self.nodes[0]
    }

    pub fn goal(&self) -> Node {
        *self.nodes.last().expect("paths are never empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("malformed map: {0}")]
    Malformed(String),
    #[error("node {0} is outside the map")]
    OutOfBounds(Node),
    #[error("location `{0}` would sit on a blocked cell")]
    WouldOrphanLocation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("node {0} is outside the map")]
    OutOfBounds(Node),
    #[error("endpoint {0} is blocked")]
    BlockedEndpoint(Node),
    #[error("no path from {start} to {goal}")]
    NoPath { start: Node, goal: Node },
}

/// Occupancy grid with named locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMap {
    width: usize,
    height: usize,
    cell_size: f64,
    cells: Vec<Cell>,
    locations: Vec<Location>,
}

impl GridMap {
    /// Build a map, checking every invariant.
    pub fn new(
        width: usize,
        height: usize,
        cell_size: f64,
        cells: Vec<Cell>,
        locations: Vec<Location>,
    ) -> Result<Self, MapError> {
        if width == 0 || height == 0 {
            return Err(MapError::Malformed(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if !(cell_size.is_finite() && cell_size > 0.0) {
            return Err(MapError::Malformed(format!("bad cell size {cell_size}")));
        }
        if cells.len() != width * height {
            return Err(MapError::Malformed(format!(
                "expected {} cells, got {}",
                width * height,
                cells.len()
            )));
        }
        let mut map = GridMap {
            width,
            height,
            cell_size,
            cells,
            locations: Vec::new(),
        };
        for loc in locations {
            map.add_location(loc.label, loc.node)?;
        }
        Ok(map)
    }

    /// An all-walkable grid with no locations.
    pub fn open(width: usize, height: usize) -> Result<Self, MapError> {
        Self::new(width, height, 0.25, vec![Cell::Walkable; width * height], Vec::new())
    }

    /// Build from rows of `.` (walkable) and `#` (blocked).
    pub fn from_rows(rows: &[&str]) -> Result<Self, MapError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut cells = Vec::with_capacity(width * height);
        for (i, row) in rows.iter().enumerate() {
            if row.chars().count() != width {
                return Err(MapError::Malformed(format!("row {i} has the wrong width")));
            }
            for c in row.chars() {
                cells.push(format::cell_from_char(c).ok_or_else(|| {
                    MapError::Malformed(format!("unexpected cell character `{c}`"))
                })?);
            }
        }
        Self::new(width, height, 0.25, cells, Vec::new())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn location(&self, label: &str) -> Option<Node> {
        self.locations
            .iter()
            .find(|l| l.label == label)
            .map(|l| l.node)
    }

    /// Add a named location; it must be in bounds and walkable.
    pub fn add_location(&mut self, label: impl Into<String>, node: Node) -> Result<(), MapError> {
        let label = label.into();
        if self.location(&label).is_some() {
            return Err(MapError::Malformed(format!("duplicate location `{label}`")));
        }
        if !self.in_bounds(node) {
            return Err(MapError::Malformed(format!(
                "location `{label}` at {node} is off the grid"
            )));
        }
        if !self.is_walkable(node) {
            return Err(MapError::Malformed(format!(
                "location `{label}` at {node} is on a blocked cell"
            )));
        }
        self.locations.push(Location { label, node });
        Ok(())
    }

    pub fn in_bounds(&self, node: Node) -> bool {
        node.row < self.height && node.col < self.width
    }

    pub fn cell(&self, node: Node) -> Option<Cell> {
        self.in_bounds(node)
            .then(|| self.cells[node.row * self.width + node.col])
    }

    pub fn is_walkable(&self, node: Node) -> bool {
        self.cell(node) == Some(Cell::Walkable)
    }

    /// Permanently change a cell, e.g. after furniture was moved.
    pub fn set_cell(&mut self, node: Node, state: Cell) -> Result<(), MapError> {
        if !self.in_bounds(node) {
            return Err(MapError::OutOfBounds(node));
        }
        if state == Cell::Blocked {
            if let Some(loc) = self.locations.iter().find(|l| l.node == node) {
                return Err(MapError::WouldOrphanLocation(loc.label.clone()));
            }
        }
        self.cells[node.row * self.width + node.col] = state;
        Ok(())
    }

    /// In-bounds 4-neighbours in N, E, S, W order.
    pub fn neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let Node { row, col } = node;
        [
            row.checked_sub(1).map(|r| Node::new(r, col)),
            Some(Node::new(row, col + 1)),
            Some(Node::new(row + 1, col)),
            col.checked_sub(1).map(|c| Node::new(row, c)),
        ]
        .into_iter()
        .flatten()
        .filter(move |n| self.in_bounds(*n))
    }

    /// Serialize to the text map format.
    pub fn to_document(&self) -> String {
        format::write_map(self)
    }

    /// Shortest path between two walkable cells.
    pub fn plan_path(&self, start: Node, goal: Node) -> Result<Path, PlanError> {
        self.search(start, goal, |_| false)
    }

    /// Shortest path treating `obstacles` as blocked for this query only.
    pub fn replan(
        &self,
        current: Node,
        goal: Node,
        obstacles: &BTreeSet<Node>,
    ) -> Result<Path, PlanError> {
        if let Some(off) = obstacles.iter().find(|n| !self.in_bounds(**n)) {
            return Err(PlanError::OutOfBounds(*off));
        }
        self.search(current, goal, |n| obstacles.contains(&n))
    }

    fn search(
        &self,
        start: Node,
        goal: Node,
        extra_blocked: impl Fn(Node) -> bool,
    ) -> Result<Path, PlanError> {
        for endpoint in [start, goal] {
            if !self.in_bounds(endpoint) {
                return Err(PlanError::OutOfBounds(endpoint));
            }
            if !self.is_walkable(endpoint) || extra_blocked(endpoint) {
                return Err(PlanError::BlockedEndpoint(endpoint));
            }
        }

        let index = |n: Node| n.row * self.width + n.col;
        let mut dist = vec![usize::MAX; self.cells.len()];
        let mut parent: Vec<Option<Node>> = vec![None; self.cells.len()];
        let mut heap = BinaryHeap::new();

        dist[index(start)] = 0;
        heap.push(Reverse((0usize, start.row, start.col)));

        while let Some(Reverse((cost, row, col))) = heap.pop() {
            let node = Node::new(row, col);
            if cost > dist[index(node)] {
                continue;
            }
            if node == goal {
                break;
            }
            for next in self.neighbors(node) {
                if !self.is_walkable(next) || extra_blocked(next) {
                    continue;
                }
                let candidate = cost + 1;
                if candidate < dist[index(next)] {
                    dist[index(next)] = candidate;
                    parent[index(next)] = Some(node);
                    heap.push(Reverse((candidate, next.row, next.col)));
                }
            }
        }

        if dist[index(goal)] == usize::MAX {
            return Err(PlanError::NoPath { start, goal });
        }
        let mut nodes = vec![goal];
        let mut cursor = goal;
        while let Some(prev) = parent[index(cursor)] {
            nodes.push(prev);
            cursor = prev;
        }
        nodes.reverse();
        Ok(Path {
            cost: nodes.len() - 1,
            nodes,
        })
    }
}
