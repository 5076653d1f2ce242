//! Rectilinear geometry of connected cell sets.
//!
//! Cells are `(row, col)` with rows growing downwards. Border vertices use
//! the same frame: cell `(r, c)` has corners `(r, c)`, `(r, c + 1)`,
//! `(r + 1, c)` and `(r + 1, c + 1)`.
//!
//! # Corner names
//!
//! Corners are named by the angle measured *inside* the set, and the naming
//! is inverted with respect to everyday usage: a 90 degree interior angle is
//! [`Turn::Concave`] and a 270 degree interior angle is [`Turn::Convex`]. A
//! single cell therefore has four concave corners and no convex one.
//!
//! The outer border is walked counter-clockwise (interior on the left), so a
//! left turn is concave and a right turn is convex.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::{Error, Result};

pub type Cell = (i32, i32);

const NEIGHBORS: [Cell; 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

fn neighbors((r, c): Cell) -> impl Iterator<Item = Cell> {
    NEIGHBORS.iter().map(move |&(dr, dc)| (r + dr, c + dc))
}

/// 4-connected components of `cells`, each sorted.
pub fn components(cells: &BTreeSet<Cell>) -> Vec<BTreeSet<Cell>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &start in cells {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(cell) = queue.pop_front() {
            for nb in neighbors(cell) {
                if cells.contains(&nb) && seen.insert(nb) {
                    comp.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// A non-empty, 4-connected set of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    cells: BTreeSet<Cell>,
}

impl Polyomino {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::InvalidPolyomino("empty cell set".into()));
        }
        let parts = components(&cells).len();
        if parts != 1 {
            return Err(Error::InvalidPolyomino(format!(
                "{parts} connected components"
            )));
        }
        Ok(Polyomino { cells })
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    pub fn bounding_rect(&self) -> BoundingRect {
        let rows = self.cells.iter().map(|c| c.0);
        let cols = self.cells.iter().map(|c| c.1);
        BoundingRect {
            min_row: rows.clone().min().expect("non-empty"),
            max_row: rows.max().expect("non-empty"),
            min_col: cols.clone().min().expect("non-empty"),
            max_col: cols.max().expect("non-empty"),
        }
    }

    /// Translated so the minimum row and column are both zero.
    pub fn normalized(&self) -> Polyomino {
        let r = self.bounding_rect();
        Polyomino {
            cells: self
                .cells
                .iter()
                .map(|&(a, b)| (a - r.min_row, b - r.min_col))
                .collect(),
        }
    }

    /// Number of unit edges between a cell of the set and a cell outside it
    /// (holes included).
    pub fn perimeter(&self) -> usize {
        self.cells
            .iter()
            .flat_map(|&c| neighbors(c))
            .filter(|nb| !self.cells.contains(nb))
            .count()
    }
}

/// Tight axis-aligned bounds, inclusive on both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundingRect {
    pub min_row: i32,
    pub max_row: i32,
    pub min_col: i32,
    pub max_col: i32,
}

impl BoundingRect {
    pub fn contains(&self, (r, c): Cell) -> bool {
        (self.min_row..=self.max_row).contains(&r) && (self.min_col..=self.max_col).contains(&c)
    }

    pub fn on_boundary(&self, (r, c): Cell) -> bool {
        r == self.min_row || r == self.max_row || c == self.min_col || c == self.max_col
    }

    pub fn height(&self) -> usize {
        (self.max_row - self.min_row + 1) as usize
    }

    pub fn width(&self) -> usize {
        (self.max_col - self.min_col + 1) as usize
    }
}

/// Heading of a border segment, in counter-clockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    East = 0,
    North = 1,
    West = 2,
    South = 3,
}

impl Dir {
    /// Vertex step `(d_row, d_col)`.
    pub fn step(self) -> Cell {
        match self {
            Dir::East => (0, 1),
            Dir::North => (-1, 0),
            Dir::West => (0, -1),
            Dir::South => (1, 0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    Straight,
    /// 90 degree interior angle.
    Concave,
    /// 270 degree interior angle.
    Convex,
}

fn turn_between(from: Dir, to: Dir) -> Turn {
    match (to as i32 - from as i32).rem_euclid(4) {
        0 => Turn::Straight,
        1 => Turn::Concave,
        3 => Turn::Convex,
        _ => unreachable!("a border walk never reverses"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    /// Start vertex.
    pub start: Cell,
    pub dir: Dir,
}

impl Segment {
    pub fn end(&self) -> Cell {
        let (dr, dc) = self.dir.step();
        (self.start.0 + dr, self.start.1 + dc)
    }
}

/// Closed counter-clockwise walk around the outer border. `turns[k]` is the
/// turn at the end of `segments[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderWalk {
    pub segments: Vec<Segment>,
    pub turns: Vec<Turn>,
}

impl BorderWalk {
    pub fn census(&self) -> CornerCensus {
        CornerCensus::of(self.turns.iter().copied())
    }

    fn position_of_start(&self, vertex: Cell) -> Option<usize> {
        self.segments.iter().position(|s| s.start == vertex)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CornerCensus {
    pub concave: usize,
    pub convex: usize,
}

impl CornerCensus {
    fn of(turns: impl Iterator<Item = Turn>) -> Self {
        turns.fold(CornerCensus::default(), |mut acc, t| {
            match t {
                Turn::Concave => acc.concave += 1,
                Turn::Convex => acc.convex += 1,
                Turn::Straight => {}
            }
            acc
        })
    }

    pub fn difference(&self) -> i64 {
        self.concave as i64 - self.convex as i64
    }
}

/// Cells outside the polyomino reachable from beyond its bounding box.
fn exterior(p: &Polyomino) -> HashSet<Cell> {
    let r = p.bounding_rect();
    let inside_frame = |(a, b): Cell| {
        (r.min_row - 1..=r.max_row + 1).contains(&a) && (r.min_col - 1..=r.max_col + 1).contains(&b)
    };
    let start = (r.min_row - 1, r.min_col - 1);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(cell) = queue.pop_front() {
        for nb in neighbors(cell) {
            if inside_frame(nb) && !p.contains(nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen
}

/// Walks the outer border counter-clockwise, starting with the top edge of
/// the leftmost cell in the top row.
pub fn trace_outer_border(p: &Polyomino) -> BorderWalk {
    let outside = exterior(p);
    let mut next: HashMap<Cell, Segment> = HashMap::new();
    for &(r, c) in p.cells() {
        let mut add = |start: Cell, dir: Dir| {
            let prev = next.insert(start, Segment { start, dir });
            debug_assert!(prev.is_none(), "outer border of a connected set is simple");
        };
        if outside.contains(&(r + 1, c)) {
            add((r + 1, c), Dir::East);
        }
        if outside.contains(&(r, c + 1)) {
            add((r + 1, c + 1), Dir::North);
        }
        if outside.contains(&(r - 1, c)) {
            add((r, c + 1), Dir::West);
        }
        if outside.contains(&(r, c - 1)) {
            add((r, c), Dir::South);
        }
    }
    let top = p.bounding_rect().min_row;
    let left = p
        .cells()
        .iter()
        .filter(|c| c.0 == top)
        .map(|c| c.1)
        .min()
        .expect("non-empty top row");
    let first = next[&(top, left + 1)];
    let mut segments = vec![first];
    loop {
        let last = *segments.last().expect("non-empty walk");
        let seg = next[&last.end()];
        if seg == first {
            break;
        }
        segments.push(seg);
    }
    let turns = (0..segments.len())
        .map(|k| turn_between(segments[k].dir, segments[(k + 1) % segments.len()].dir))
        .collect();
    BorderWalk { segments, turns }
}

pub fn corner_census(p: &Polyomino) -> CornerCensus {
    trace_outer_border(p).census()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RectSide {
    Left,
    Right,
    Top,
    Bottom,
}

impl RectSide {
    pub const ALL: [RectSide; 4] = [
        RectSide::Left,
        RectSide::Right,
        RectSide::Top,
        RectSide::Bottom,
    ];
}

/// The two vertices delimiting the border part that belongs to `side`, in
/// walk order.
///
/// The part for a side runs between the border's extreme points on the two
/// neighbouring sides of the rectangle: for the left side, from the leftmost
/// border point on the top line to the leftmost border point on the bottom
/// line (the "top-left" and "bottom-left" corners). The other sides follow
/// by rotation, always in counter-clockwise order.
fn side_endpoints(p: &Polyomino, side: RectSide) -> (Cell, Cell) {
    let r = p.bounding_rect();
    let in_row = |row: i32| p.cells().iter().filter(move |c| c.0 == row).map(|c| c.1);
    let in_col = |col: i32| p.cells().iter().filter(move |c| c.1 == col).map(|c| c.0);
    let min = |it: &mut dyn Iterator<Item = i32>| it.min().expect("line touches the set");
    let max = |it: &mut dyn Iterator<Item = i32>| it.max().expect("line touches the set");
    match side {
        RectSide::Left => (
            (r.min_row, min(&mut in_row(r.min_row))),
            (r.max_row + 1, min(&mut in_row(r.max_row))),
        ),
        RectSide::Bottom => (
            (max(&mut in_col(r.min_col)) + 1, r.min_col),
            (max(&mut in_col(r.max_col)) + 1, r.max_col + 1),
        ),
        RectSide::Right => (
            (r.max_row + 1, max(&mut in_row(r.max_row)) + 1),
            (r.min_row, max(&mut in_row(r.min_row)) + 1),
        ),
        RectSide::Top => (
            (min(&mut in_col(r.max_col)), r.max_col + 1),
            (min(&mut in_col(r.min_col)), r.min_col),
        ),
    }
}

/// Turns strictly between the two delimiting corners of the border part
/// belonging to `side`. Returns `(concave, convex)`.
pub fn side_corner_census(p: &Polyomino, side: RectSide) -> (usize, usize) {
    let walk = trace_outer_border(p);
    let (from, to) = side_endpoints(p, side);
    let start = walk
        .position_of_start(from)
        .expect("delimiting corner lies on the outer border");
    let len = walk.segments.len();
    let mut turns = Vec::new();
    for k in 0..len {
        let idx = (start + k) % len;
        if walk.segments[idx].end() == to {
            break;
        }
        turns.push(walk.turns[idx]);
    }
    let c = CornerCensus::of(turns.into_iter());
    (c.concave, c.convex)
}

fn complement_components(p: &Polyomino) -> (BoundingRect, Vec<BTreeSet<Cell>>) {
    let r = p.bounding_rect();
    let rest: BTreeSet<Cell> = (r.min_row..=r.max_row)
        .flat_map(|a| (r.min_col..=r.max_col).map(move |b| (a, b)))
        .filter(|c| !p.contains(*c))
        .collect();
    (r, components(&rest))
}

fn into_polyominoes(parts: Vec<BTreeSet<Cell>>) -> Vec<Polyomino> {
    parts.into_iter().map(|cells| Polyomino { cells }).collect()
}

/// Components of the bounding rectangle minus the set that stay clear of
/// the rectangle's boundary.
pub fn find_holes(p: &Polyomino) -> Vec<Polyomino> {
    let (r, parts) = complement_components(p);
    into_polyominoes(
        parts
            .into_iter()
            .filter(|comp| !comp.iter().any(|&c| r.on_boundary(c)))
            .collect(),
    )
}

/// Components of the bounding rectangle minus the set that reach the
/// rectangle's boundary.
pub fn find_indentations(p: &Polyomino) -> Vec<Polyomino> {
    let (r, parts) = complement_components(p);
    into_polyominoes(
        parts
            .into_iter()
            .filter(|comp| comp.iter().any(|&c| r.on_boundary(c)))
            .collect(),
    )
}

/// The set with every indentation added back in.
pub fn fill_indentations(p: &Polyomino) -> Polyomino {
    let mut cells = p.cells().clone();
    for ind in find_indentations(p) {
        cells.extend(ind.cells());
    }
    Polyomino { cells }
}

/// All fixed polyominoes of each size `1..=k`, normalised and sorted.
///
/// Uses Redelmeier's method: grow from the origin, only adding cells in the
/// half-plane `row > 0 || (row == 0 && col >= 0)`, and never re-offering a
/// cell that an ancestor already offered.
pub fn enumerate_fixed_polyominoes(k: usize) -> Result<Vec<Vec<Polyomino>>> {
    if k > 10 {
        return Err(Error::EnumerationTooLarge(k));
    }
    if k == 0 {
        return Err(Error::InvalidPolyomino("size must be at least 1".into()));
    }
    let mut by_size: Vec<Vec<Polyomino>> = vec![Vec::new(); k];
    let mut current = Vec::with_capacity(k);
    let mut seen = HashSet::from([(0, 0)]);
    let mut untried = vec![(0, 0)];
    redelmeier(k, &mut untried, &mut current, &mut seen, &mut by_size);
    for list in &mut by_size {
        list.sort();
    }
    Ok(by_size)
}

fn redelmeier(
    k: usize,
    untried: &mut Vec<Cell>,
    current: &mut Vec<Cell>,
    seen: &mut HashSet<Cell>,
    out: &mut [Vec<Polyomino>],
) {
    let allowed = |(r, c): Cell| r > 0 || (r == 0 && c >= 0);
    while let Some(cell) = untried.pop() {
        current.push(cell);
        out[current.len() - 1].push(
            Polyomino {
                cells: current.iter().copied().collect(),
            }
            .normalized(),
        );
        if current.len() < k {
            let fresh: Vec<Cell> = neighbors(cell)
                .filter(|&nb| allowed(nb) && !seen.contains(&nb))
                .collect();
            seen.extend(fresh.iter().copied());
            let mut child = untried.clone();
            child.extend(fresh.iter().copied());
            redelmeier(k, &mut child, current, seen, out);
            for nb in &fresh {
                seen.remove(nb);
            }
        }
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cells: &[Cell]) -> Polyomino {
        Polyomino::new(cells.iter().copied()).unwrap()
    }

    fn rect(h: i32, w: i32) -> Polyomino {
        poly(
            &(0..h)
                .flat_map(|r| (0..w).map(move |c| (r, c)))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rejects_empty_and_disconnected() {
        assert!(Polyomino::new([]).is_err());
        assert!(Polyomino::new([(0, 0), (1, 1)]).is_err());
    }

    #[test]
    fn single_cell_border() {
        let w = trace_outer_border(&poly(&[(0, 0)]));
        assert_eq!(w.segments.len(), 4);
        assert!(w.turns.iter().all(|&t| t == Turn::Concave));
        assert_eq!(
            w.census(),
            CornerCensus {
                concave: 4,
                convex: 0
            }
        );
        assert_eq!(
            w.segments[0],
            Segment {
                start: (0, 1),
                dir: Dir::West
            }
        );
    }

    #[test]
    fn rectangle_border() {
        let w = trace_outer_border(&rect(2, 3));
        assert_eq!(w.segments.len(), 10);
        assert_eq!(
            w.census(),
            CornerCensus {
                concave: 4,
                convex: 0
            }
        );
    }

    #[test]
    fn l_tromino_and_plus() {
        let l = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(
            corner_census(&l),
            CornerCensus {
                concave: 5,
                convex: 1
            }
        );
        let plus = poly(&[(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]);
        assert_eq!(
            corner_census(&plus),
            CornerCensus {
                concave: 8,
                convex: 4
            }
        );
    }

    #[test]
    fn side_census_examples() {
        for side in RectSide::ALL {
            assert_eq!(side_corner_census(&rect(3, 4), side), (0, 0));
        }
        let l = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(side_corner_census(&l, RectSide::Left), (0, 0));
        assert_eq!(side_corner_census(&l, RectSide::Right), (1, 1));
        assert_eq!(side_corner_census(&l, RectSide::Bottom), (1, 1));
        assert_eq!(side_corner_census(&l, RectSide::Top), (0, 0));
    }

    #[test]
    fn holes_and_indentations() {
        let ring = poly(&[
            (0, 0),
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 2),
            (2, 0),
            (2, 1),
            (2, 2),
        ]);
        let holes = find_holes(&ring);
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].len(), 1);
        assert!(find_indentations(&ring).is_empty());

        assert!(find_holes(&rect(2, 5)).is_empty());
        assert!(find_indentations(&rect(2, 5)).is_empty());

        let mut cells: Vec<Cell> = (0..4).flat_map(|r| (0..4).map(move |c| (r, c))).collect();
        cells.retain(|&c| c != (1, 1) && c != (2, 1));
        let holes = find_holes(&poly(&cells));
        assert_eq!(holes.len(), 1);
        assert_eq!(holes[0].len(), 2);

        let u = poly(&[(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)]);
        let ind = find_indentations(&u);
        assert_eq!(ind.len(), 1);
        assert_eq!(ind[0].cells(), &BTreeSet::from([(0, 1)]));

        let stair = poly(&[(0, 0), (1, 0), (1, 1)]);
        let ind = find_indentations(&stair);
        assert_eq!(ind.len(), 1);
        assert_eq!(ind[0].cells(), &BTreeSet::from([(0, 1)]));
        assert_eq!(fill_indentations(&stair), rect(2, 2));
    }

    #[test]
    fn small_enumeration_counts() {
        let e = enumerate_fixed_polyominoes(4).unwrap();
        let counts: Vec<usize> = e.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 2, 6, 19]);
        assert!(enumerate_fixed_polyominoes(11).is_err());
        assert!(enumerate_fixed_polyominoes(0).is_err());
    }
}
