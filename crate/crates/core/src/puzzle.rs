//! Puzzle data model.
//!
//! A puzzle of side `n` has `(n + 1) * n` horizontal edge slots and
//! `n * (n + 1)` vertical ones. Horizontal row `r` is the slot above piece
//! row `r` (row `n` is the bottom border); vertical column `c` is the slot
//! left of piece column `c` (column `n` is the right border). Every slot
//! carries one colour in `0..q`; two touching pieces read the same slot.
//!
//! # Rotation convention
//!
//! Sides are indexed `top = 0, right = 1, bottom = 2, left = 3`. A piece
//! with rotation `r` has been turned clockwise by `90 * r` degrees, so the
//! colour it shows in direction `d` is `tuple[(d - r) mod 4]`, and the
//! physical side facing direction `d` is `(d - r) mod 4`. The solver, the
//! verifier and [`edge_pairing`] all use this one rule.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng as _;

use crate::seed::rng_from_seed;
use crate::{Error, Result};

pub type Color = u32;

/// Colours in side order (top, right, bottom, left).
pub type Tuple = [Color; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Top = 0,
    Right = 1,
    Bottom = 2,
    Left = 3,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Top, Side::Right, Side::Bottom, Side::Left];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Side {
        Side::ALL[i % 4]
    }

    pub fn opposite(self) -> Side {
        Side::from_index(self.index() + 2)
    }

    /// Row/column step towards the neighbour on this side.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Side::Top => (-1, 0),
            Side::Right => (0, 1),
            Side::Bottom => (1, 0),
            Side::Left => (0, -1),
        }
    }
}

/// Clockwise quarter turns, always in `0..=3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rotation(u8);

impl Rotation {
    pub const ZERO: Rotation = Rotation(0);

    pub fn new(r: u8) -> Result<Self> {
        if r < 4 {
            Ok(Rotation(r))
        } else {
            Err(Error::InvalidRotation(r))
        }
    }

    /// Reduces any integer modulo 4.
    pub fn wrapping(r: i64) -> Self {
        Rotation(r.rem_euclid(4) as u8)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn compose(self, other: Rotation) -> Rotation {
        Rotation((self.0 + other.0) % 4)
    }

    pub fn inverse(self) -> Rotation {
        Rotation((4 - self.0) % 4)
    }

    /// Physical side of the piece that faces direction `dir`.
    pub fn physical_side(self, dir: Side) -> Side {
        Side::from_index(dir.index() + 4 - self.0 as usize)
    }

    pub fn all() -> impl Iterator<Item = Rotation> {
        (0..4).map(Rotation)
    }
}

/// Colours shown in each direction after turning `t` clockwise by `r`.
pub fn rotate_tuple(t: Tuple, r: Rotation) -> Tuple {
    let r = r.0 as usize;
    [
        t[(4 - r) % 4],
        t[(5 - r) % 4],
        t[(6 - r) % 4],
        t[(7 - r) % 4],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalPiece {
    pub canon: Tuple,
    /// Smallest rotation with `rotate_tuple(t, shift) == canon`.
    pub shift: Rotation,
    /// Number of rotations fixing the tuple: 1, 2 or 4.
    pub symmetry_order: u8,
}

impl CanonicalPiece {
    /// Smallest non-zero rotation that maps the tuple onto itself, or 4 for
    /// tuples without rotational symmetry.
    pub fn period(&self) -> u8 {
        4 / self.symmetry_order
    }
}

pub fn canonical_piece(t: Tuple) -> CanonicalPiece {
    let shifts: Vec<Tuple> = Rotation::all().map(|r| rotate_tuple(t, r)).collect();
    let (best, canon) = shifts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, c)| (i, *c))
        .expect("four shifts");
    let fixed = shifts.iter().filter(|s| **s == t).count();
    CanonicalPiece {
        canon,
        shift: Rotation(best as u8),
        symmetry_order: fixed as u8,
    }
}

/// Original grid coordinate of a piece; doubles as its identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub row: u32,
    pub col: u32,
}

impl Label {
    pub fn new(row: usize, col: usize) -> Self {
        Label {
            row: row as u32,
            col: col as u32,
        }
    }

    pub fn index(self, n: usize) -> usize {
        self.row as usize * n + self.col as usize
    }

    /// Label of the piece next to this one in the original grid.
    pub fn neighbor(self, side: Side, n: usize) -> Option<Label> {
        let (dr, dc) = side.offset();
        let r = self.row as i64 + dr;
        let c = self.col as i64 + dc;
        if r < 0 || c < 0 || r >= n as i64 || c >= n as i64 {
            None
        } else {
            Some(Label::new(r as usize, c as usize))
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

/// One physical side of one labelled piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub label: Label,
    pub side: Side,
}

impl HalfEdge {
    /// The half-edge this one touches in the original grid.
    pub fn partner(self, n: usize) -> Option<HalfEdge> {
        self.label.neighbor(self.side, n).map(|label| HalfEdge {
            label,
            side: self.side.opposite(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridColoring {
    n: usize,
    q: u32,
    h: Vec<Color>,
    v: Vec<Color>,
}

impl GridColoring {
    /// `h` is `(n + 1) x n` row-major, `v` is `n x (n + 1)` row-major.
    pub fn new(n: usize, q: u32, h: Vec<Color>, v: Vec<Color>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize { got: 0, min: 1 });
        }
        if q == 0 {
            return Err(Error::NoColors);
        }
        if h.len() != (n + 1) * n || v.len() != n * (n + 1) {
            return Err(Error::InvalidSize { got: n, min: 1 });
        }
        if let Some(&color) = h.iter().chain(&v).find(|&&c| c >= q) {
            return Err(Error::ColorOutOfRange { color, q });
        }
        Ok(GridColoring { n, q, h, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn slot_count(&self) -> usize {
        self.h.len() + self.v.len()
    }

    /// Horizontal slot above piece row `row` (`row == n` is the bottom border).
    pub fn h(&self, row: usize, col: usize) -> Color {
        self.h[row * self.n + col]
    }

    /// Vertical slot left of piece column `col` (`col == n` is the right border).
    pub fn v(&self, row: usize, col: usize) -> Color {
        self.v[row * (self.n + 1) + col]
    }

    pub fn h_slots(&self) -> &[Color] {
        &self.h
    }

    pub fn v_slots(&self) -> &[Color] {
        &self.v
    }

    pub fn tuple(&self, label: Label) -> Tuple {
        let (i, j) = (label.row as usize, label.col as usize);
        [
            self.h(i, j),
            self.v(i, j + 1),
            self.h(i + 1, j),
            self.v(i, j),
        ]
    }
}

/// Draws every slot independently and uniformly from `0..q`.
///
/// The stream is `ChaCha8Rng::seed_from_u64(seed)`; horizontal slots are
/// drawn first in row-major order, then vertical slots.
pub fn generate_puzzle(n: usize, q: u32, seed: u64) -> Result<GridColoring> {
    if n == 0 {
        return Err(Error::InvalidSize { got: 0, min: 1 });
    }
    if q == 0 {
        return Err(Error::NoColors);
    }
    let mut rng = rng_from_seed(seed);
    let h = (0..(n + 1) * n).map(|_| rng.gen_range(0..q)).collect();
    let v = (0..n * (n + 1)).map(|_| rng.gen_range(0..q)).collect();
    GridColoring::new(n, q, h, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub label: Label,
    pub tuple: Tuple,
}

/// The labelled pieces of one puzzle, in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceBag {
    n: usize,
    q: u32,
    pieces: Vec<Piece>,
    by_label: Vec<usize>,
}

impl PieceBag {
    pub fn new(n: usize, q: u32, pieces: Vec<Piece>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize { got: 0, min: 1 });
        }
        if q == 0 {
            return Err(Error::NoColors);
        }
        if pieces.len() != n * n {
            return Err(Error::InvalidBag(format!(
                "expected {} pieces, got {}",
                n * n,
                pieces.len()
            )));
        }
        let mut by_label = vec![usize::MAX; n * n];
        for (i, p) in pieces.iter().enumerate() {
            if p.label.row as usize >= n || p.label.col as usize >= n {
                return Err(Error::InvalidBag(format!("label {} outside grid", p.label)));
            }
            let slot = &mut by_label[p.label.index(n)];
            if *slot != usize::MAX {
                return Err(Error::InvalidBag(format!("duplicate label {}", p.label)));
            }
            *slot = i;
            if let Some(&color) = p.tuple.iter().find(|&&c| c >= q) {
                return Err(Error::ColorOutOfRange { color, q });
            }
        }
        Ok(PieceBag {
            n,
            q,
            pieces,
            by_label,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn get(&self, label: Label) -> Option<&Piece> {
        if label.row as usize >= self.n || label.col as usize >= self.n {
            return None;
        }
        self.by_label
            .get(label.index(self.n))
            .map(|&i| &self.pieces[i])
    }

    /// Same pieces, reordered by a seeded shuffle.
    pub fn shuffled(&self, seed: u64) -> PieceBag {
        use rand::seq::SliceRandom;
        let mut pieces = self.pieces.clone();
        pieces.shuffle(&mut rng_from_seed(seed));
        PieceBag::new(self.n, self.q, pieces).expect("permutation of a valid bag")
    }
}

/// Cuts the grid into its `n^2` labelled pieces, in row-major label order.
pub fn pieces_of(gc: &GridColoring) -> PieceBag {
    let n = gc.n();
    let pieces = (0..n)
        .flat_map(|i| (0..n).map(move |j| Label::new(i, j)))
        .map(|label| Piece {
            label,
            tuple: gc.tuple(label),
        })
        .collect();
    PieceBag::new(n, gc.q(), pieces).expect("pieces of a valid grid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub label: Label,
    pub rot: Rotation,
}

/// Row-major placement of every label at some cell with some rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assembly {
    n: usize,
    cells: Vec<Placement>,
}

impl Assembly {
    pub fn new(n: usize, cells: Vec<Placement>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize { got: 0, min: 1 });
        }
        if cells.len() != n * n {
            return Err(Error::InvalidAssembly(format!(
                "expected {} cells, got {}",
                n * n,
                cells.len()
            )));
        }
        let mut seen = vec![false; n * n];
        for p in &cells {
            if p.label.row as usize >= n || p.label.col as usize >= n {
                return Err(Error::InvalidAssembly(format!(
                    "label {} outside grid",
                    p.label
                )));
            }
            let s = &mut seen[p.label.index(n)];
            if *s {
                return Err(Error::InvalidAssembly(format!(
                    "label {} placed twice",
                    p.label
                )));
            }
            *s = true;
        }
        Ok(Assembly { n, cells })
    }

    /// Every piece at its original cell, unrotated.
    pub fn identity(n: usize) -> Self {
        let cells = (0..n)
            .flat_map(|i| (0..n).map(move |j| Label::new(i, j)))
            .map(|label| Placement {
                label,
                rot: Rotation::ZERO,
            })
            .collect();
        Assembly { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Placement] {
        &self.cells
    }

    pub fn at(&self, row: usize, col: usize) -> Placement {
        self.cells[row * self.n + col]
    }

    /// Position of `label`, as `(row, col)`.
    pub fn position_of(&self, label: Label) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .position(|p| p.label == label)
            .map(|i| (i / self.n, i % self.n))
    }

    pub fn set(&mut self, row: usize, col: usize, placement: Placement) {
        self.cells[row * self.n + col] = placement;
    }

    /// The whole grid turned clockwise by 90 degrees: the piece at
    /// `(r, c)` moves to `(c, n - 1 - r)` and gains one quarter turn.
    pub fn rotated_clockwise(&self) -> Assembly {
        let n = self.n;
        let mut cells = self.cells.clone();
        for r in 0..n {
            for c in 0..n {
                let p = self.at(r, c);
                cells[c * n + (n - 1 - r)] = Placement {
                    label: p.label,
                    rot: p.rot.compose(Rotation(1)),
                };
            }
        }
        Assembly { n, cells }
    }

    /// The four global rotations, starting with `self`.
    pub fn global_rotations(&self) -> [Assembly; 4] {
        let a1 = self.rotated_clockwise();
        let a2 = a1.rotated_clockwise();
        let a3 = a2.rotated_clockwise();
        [self.clone(), a1, a2, a3]
    }
}

/// Which physical half-edges touch in an assembly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgePairing {
    /// Unordered pairs stored with the smaller half-edge first.
    pub pairs: BTreeSet<(HalfEdge, HalfEdge)>,
    pub singles: BTreeSet<HalfEdge>,
}

pub fn edge_pairing(asm: &Assembly) -> EdgePairing {
    let n = asm.n();
    let facing = |r: usize, c: usize, dir: Side| {
        let p = asm.at(r, c);
        HalfEdge {
            label: p.label,
            side: p.rot.physical_side(dir),
        }
    };
    let ordered = |a: HalfEdge, b: HalfEdge| if a <= b { (a, b) } else { (b, a) };
    let mut pairs = BTreeSet::new();
    let mut singles = BTreeSet::new();
    for r in 0..n {
        for c in 0..n {
            if c + 1 < n {
                pairs.insert(ordered(
                    facing(r, c, Side::Right),
                    facing(r, c + 1, Side::Left),
                ));
            }
            if r + 1 < n {
                pairs.insert(ordered(
                    facing(r, c, Side::Bottom),
                    facing(r + 1, c, Side::Top),
                ));
            }
            if r == 0 {
                singles.insert(facing(r, c, Side::Top));
            }
            if r == n - 1 {
                singles.insert(facing(r, c, Side::Bottom));
            }
            if c == 0 {
                singles.insert(facing(r, c, Side::Left));
            }
            if c == n - 1 {
                singles.insert(facing(r, c, Side::Right));
            }
        }
    }
    EdgePairing { pairs, singles }
}

/// The pairing of the original grid.
pub fn original_pairing(n: usize) -> EdgePairing {
    edge_pairing(&Assembly::identity(n))
}

/// Plain-text form: `n q`, then the horizontal slot rows, then the vertical
/// slot rows, each line terminated by a newline.
pub fn write_puzzle(gc: &GridColoring) -> String {
    let n = gc.n();
    let mut out = format!("{} {}\n", n, gc.q());
    let mut push_rows = |slots: &[Color], width: usize| {
        for row in slots.chunks(width) {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    };
    push_rows(gc.h_slots(), n);
    push_rows(gc.v_slots(), n + 1);
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Integer tokens of a line with their 1-based starting columns.
fn tokens(line: &str, line_no: usize) -> Result<Vec<(usize, u64)>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                let tok = &line[s..i];
                let value = tok.parse::<u64>().map_err(|_| {
                    parse_error(
                        line_no,
                        s + 1,
                        format!("expected a non-negative integer, found {tok:?}"),
                    )
                })?;
                out.push((s + 1, value));
                start = None;
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn read_puzzle(text: &str) -> Result<GridColoring> {
    if !text.ends_with('\n') {
        let line = text.lines().count().max(1);
        return Err(parse_error(line, 1, "missing trailing newline"));
    }
    let lines: Vec<&str> = text.lines().collect();
    let header = lines
        .first()
        .ok_or_else(|| parse_error(1, 1, "empty input"))?;
    let head = tokens(header, 1)?;
    if head.len() != 2 {
        return Err(parse_error(
            1,
            1,
            format!("header needs 2 tokens \"n q\", found {}", head.len()),
        ));
    }
    let n = usize::try_from(head[0].1).map_err(|_| parse_error(1, head[0].0, "n too large"))?;
    let q = u32::try_from(head[1].1).map_err(|_| parse_error(1, head[1].0, "q too large"))?;
    if n == 0 {
        return Err(parse_error(1, head[0].0, "n must be at least 1"));
    }
    if q == 0 {
        return Err(parse_error(1, head[1].0, "q must be at least 1"));
    }
    let expected_lines = 1 + (n + 1) + n;
    if lines.len() != expected_lines {
        return Err(parse_error(
            lines.len().min(expected_lines) + 1,
            1,
            format!(
                "expected {expected_lines} lines for n = {n}, found {}",
                lines.len()
            ),
        ));
    }
    let read_block = |first: usize, rows: usize, width: usize| -> Result<Vec<Color>> {
        let mut slots = Vec::with_capacity(rows * width);
        for (k, line) in lines[first..first + rows].iter().enumerate() {
            let line_no = first + k + 1;
            let toks = tokens(line, line_no)?;
            if toks.len() != width {
                return Err(parse_error(
                    line_no,
                    1,
                    format!("expected {width} colours, found {}", toks.len()),
                ));
            }
            for (col, value) in toks {
                if value >= q as u64 {
                    return Err(parse_error(
                        line_no,
                        col,
                        format!("colour {value} not below q = {q}"),
                    ));
                }
                slots.push(value as Color);
            }
        }
        Ok(slots)
    };
    let h = read_block(1, n + 1, n)?;
    let v = read_block(n + 2, n, n + 1)?;
    GridColoring::new(n, q, h, v)
}
