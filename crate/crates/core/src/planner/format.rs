//! Text map documents.
//!
//! ```text
//! housemap 1
//! size 6 4
//! cell_size 0.25
//! grid
//! ......
//! .##...
//! ......
//! ....#.
//! end
//! location 0 0 living room
//! location 3 5 kitchen
//! ```
//!
//! `size` is `width height`. Grid rows use `.` for walkable and `#` for
//! blocked cells. Each `location` line is `row col label`, where the label
//! runs to the end of the line and may contain spaces.

use super::{Cell, GridMap, Location, MapError, Node};

pub const MAP_FORMAT_VERSION: u32 = 1;

pub(super) fn cell_from_char(c: char) -> Option<Cell> {
    match c {
        '.' => Some(Cell::Walkable),
        '#' => Some(Cell::Blocked),
        _ => None,
    }
}

fn malformed(line: usize, msg: impl std::fmt::Display) -> MapError {
    MapError::Malformed(format!("line {line}: {msg}"))
}

/// Parse a map document.
pub fn parse_map(doc: &str) -> Result<GridMap, MapError> {
    let mut lines = doc
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty());

    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| MapError::Malformed(format!("unexpected end of document, expected {what}")))
    };

    let (n, header) = next("header")?;
    match header.split_once(' ') {
        Some(("housemap", v)) if v.trim() == MAP_FORMAT_VERSION.to_string() => {}
        Some(("housemap", v)) => return Err(malformed(n, format!("unsupported version `{}`", v.trim()))),
        _ => return Err(malformed(n, "expected `housemap <version>`")),
    }

    let (n, size) = next("size")?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let (width, height) = match dims.as_slice() {
        ["size", w, h] => (
            w.parse::<usize>().map_err(|e| malformed(n, e))?,
            h.parse::<usize>().map_err(|e| malformed(n, e))?,
        ),
        _ => return Err(malformed(n, "expected `size <width> <height>`")),
    };

    let (n, cs) = next("cell_size")?;
    let cell_size = match cs.split_once(' ') {
        Some(("cell_size", v)) => v.trim().parse::<f64>().map_err(|e| malformed(n, e))?,
        _ => return Err(malformed(n, "expected `cell_size <meters>`")),
    };

    let (n, grid) = next("grid")?;
    if grid != "grid" {
        return Err(malformed(n, "expected `grid`"));
    }
    let mut cells = Vec::with_capacity(width.saturating_mul(height));
    let mut rows = 0;
    loop {
        let (n, row) = next("grid row or `end`")?;
        if row == "end" {
            break;
        }
        if row.chars().count() != width {
            return Err(malformed(n, format!("grid row must have {width} cells")));
        }
        for c in row.chars() {
            cells.push(cell_from_char(c).ok_or_else(|| malformed(n, format!("bad cell `{c}`")))?);
        }
        rows += 1;
    }
    if rows != height {
        return Err(MapError::Malformed(format!(
            "grid has {rows} rows, size says {height}"
        )));
    }

    let mut locations = Vec::new();
    for (n, line) in lines {
        let mut parts = line.splitn(4, ' ');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some("location"), Some(r), Some(c), Some(label)) if !label.trim().is_empty() => {
                locations.push(Location {
                    label: label.trim().to_owned(),
                    node: Node::new(
                        r.parse().map_err(|e| malformed(n, e))?,
                        c.parse().map_err(|e| malformed(n, e))?,
                    ),
                });
            }
            _ => return Err(malformed(n, "expected `location <row> <col> <label>`")),
        }
    }

    GridMap::new(width, height, cell_size, cells, locations)
}

pub(super) fn write_map(map: &GridMap) -> String {
    let mut out = format!(
        "housemap {MAP_FORMAT_VERSION}\nsize {} {}\ncell_size {}\ngrid\n",
        map.width, map.height, map.cell_size
    );
    for row in map.cells.chunks(map.width) {
        out.extend(row.iter().map(|c| match c {
            Cell::Walkable => '.',
            Cell::Blocked => '#',
        }));
        out.push('\n');
    }
    out.push_str("end\n");
    for loc in &map.locations {
        out.push_str(&format!(
            "location {} {} {}\n",
            loc.node.row, loc.node.col, loc.label
        ));
    }
    out
}
