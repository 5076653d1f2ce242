//! Configurations: rearranged source components and the probability that
//! all of their new edges come out monochromatic.
//!
//! A [`PatchSpec`] is a small concrete rearrangement. Every placed piece
//! remembers its source cell in an (unbounded) original grid, the component
//! `C_i` it belongs to, its patch position, its rotation, and whether it
//! sits in the border part `S` or the attached set `U`. Edges inside the
//! patch are derived from that: two facing half-edges that were partners in
//! the original grid form an original edge, anything else is new.
//!
//! Colours live on original-grid edge slots (partners share a slot), so a
//! Monte Carlo trial only needs one uniform draw per slot touched by a new
//! edge. This reproduces every dependency between new edges exactly, which
//! is what the swap-pair patch demonstrates.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use rand::Rng as _;

use crate::exec::{map_indexed, Execution};
use crate::polyomino::{components, Cell, Polyomino};
use crate::puzzle::{Rotation, Side};
use crate::seed::{mix, rng_from_seed};
use crate::{Error, Result};

/// `ell = ceil(3 (1 + 1/eps))`, `s = 4 ell^2`, `K = 4 s^2 / eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfigConstants {
    pub epsilon: Ratio<u64>,
    pub ell: u64,
    pub s: u64,
    pub k: Ratio<u128>,
}

impl ConfigConstants {
    /// `K` when it is an integer.
    pub fn k_integer(&self) -> Option<u128> {
        self.k.is_integer().then(|| self.k.to_integer())
    }
}

pub fn config_constants(epsilon: Ratio<u64>) -> Result<ConfigConstants> {
    if *epsilon.numer() == 0 || epsilon >= Ratio::new(1, 4) {
        return Err(Error::EpsilonOutOfRange(epsilon.to_string()));
    }
    let (a, b) = (*epsilon.numer() as u128, *epsilon.denom() as u128);
    // 3 (1 + b / a) = 3 (a + b) / a
    let ell = (3 * (a + b)).div_ceil(a);
    let s = 4 * ell * ell;
    let k = Ratio::new(4 * s * s * b, a);
    Ok(ConfigConstants {
        epsilon,
        ell: ell as u64,
        s: s as u64,
        k,
    })
}

/// Parses a decimal like `0.2` or a fraction like `1/5` exactly.
pub fn parse_epsilon(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::EpsilonOutOfRange(text.to_string());
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: u64 = digits.parse().map_err(|_| bad())?;
    Ok(Ratio::new(numer, 10u64.pow(frac.len() as u32)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatchKind {
    StraightLine,
    ConvexCorners,
    Hole,
    Indentation,
    Subsquare,
    /// Two original edges `(a, a')`, `(b, b')` rebuilt as `(a, b')`,
    /// `(b, a')`. Not one of the five configuration types; it shows that
    /// new edges are not independent in general.
    SwapPair,
}

impl PatchKind {
    pub fn name(self) -> &'static str {
        match self {
            PatchKind::StraightLine => "straightline",
            PatchKind::ConvexCorners => "convexcorners",
            PatchKind::Hole => "hole",
            PatchKind::Indentation => "indentation",
            PatchKind::Subsquare => "subsquare",
            PatchKind::SwapPair => "swappair",
        }
    }
}

impl fmt::Display for PatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PatchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "straightline" => PatchKind::StraightLine,
            "convexcorners" => PatchKind::ConvexCorners,
            "hole" => PatchKind::Hole,
            "indentation" => PatchKind::Indentation,
            "subsquare" => PatchKind::Subsquare,
            "swappair" => PatchKind::SwapPair,
            other => return Err(Error::InvalidPatch(format!("unknown patch type {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    S,
    U,
}

/// Source cell coordinates in the original grid.
pub type Source = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlacedPiece {
    pub source: Source,
    /// 1-based component index; `C_1` contains `S`.
    pub component: usize,
    pub pos: Cell,
    pub rot: Rotation,
    pub region: Region,
}

/// Identity of an original-grid edge slot: horizontal slot above a row or
/// vertical slot left of a column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKey {
    H(i64, i64),
    V(i64, i64),
}

fn slot_of((r, c): Source, side: Side) -> SlotKey {
    match side {
        Side::Top => SlotKey::H(r, c),
        Side::Bottom => SlotKey::H(r + 1, c),
        Side::Left => SlotKey::V(r, c),
        Side::Right => SlotKey::V(r, c + 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatchHalfEdge {
    /// Index into [`PatchSpec::pieces`].
    pub piece: usize,
    /// Physical side of that piece.
    pub side: Side,
    pub slot: SlotKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    Original,
    New,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatchEdge {
    /// Left/upper half first.
    pub halves: [PatchHalfEdge; 2],
    pub class: EdgeClass,
    pub regions: (Region, Region),
    /// Whether each half's colour counts as already revealed.
    pub known: [bool; 2],
}

impl PatchEdge {
    pub fn is_s_u(&self) -> bool {
        self.regions.0 != self.regions.1
    }
}

/// Per-edge knowledge flags consumed by [`prop2_bound`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeKnowledge {
    pub known: [bool; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatchSpec {
    pub kind: PatchKind,
    pub m: usize,
    pub pieces: Vec<PlacedPiece>,
    pub edges: Vec<PatchEdge>,
    /// Edges (indices into `edges`) ordered for the exact product rule.
    pub ordering: Option<Vec<usize>>,
    /// Edges handled by the pairing bound after `ordering` is revealed;
    /// their `known` flags reflect that reveal.
    pub deferred: Vec<usize>,
    /// Number of restricted stable sets (subsquare only).
    pub z: Option<usize>,
}

impl PatchSpec {
    fn cells_in(&self, region: Region) -> Vec<Cell> {
        self.pieces
            .iter()
            .filter(|p| p.region == region)
            .map(|p| p.pos)
            .collect()
    }

    /// `None` when `S` is empty (subsquare).
    pub fn s(&self) -> Option<Polyomino> {
        let cells = self.cells_in(Region::S);
        (!cells.is_empty()).then(|| Polyomino::new(cells).expect("S is connected"))
    }

    pub fn u(&self) -> Polyomino {
        Polyomino::new(self.cells_in(Region::U)).expect("U is connected")
    }

    pub fn new_edges(&self) -> impl Iterator<Item = (usize, &PatchEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.class == EdgeClass::New)
    }

    /// Number of edges between `S` and `U`.
    pub fn border_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_s_u()).count()
    }

    /// Checks `|S u U| <= K^2` for the given constants.
    pub fn fits(&self, constants: &ConfigConstants) -> bool {
        let size = Ratio::from_integer(self.pieces.len() as u128);
        size <= constants.k * constants.k
    }

    /// Same patch with every new edge in row-major order as the ordering,
    /// and nothing deferred.
    pub fn with_all_new_edges_ordered(mut self) -> Self {
        self.ordering = Some(self.new_edges().map(|(i, _)| i).collect());
        self.deferred.clear();
        self.refresh_knowledge();
        self
    }

    /// Recomputes `known` flags: a half-edge is known once any half-edge of
    /// an ordered edge shares its slot (its own or its partner's).
    fn refresh_knowledge(&mut self) {
        let ordered: HashSet<usize> = self.ordering.iter().flatten().copied().collect();
        let revealed: HashSet<SlotKey> = ordered
            .iter()
            .flat_map(|&i| self.edges[i].halves.iter().map(|h| h.slot))
            .collect();
        for (i, e) in self.edges.iter_mut().enumerate() {
            e.known = if ordered.contains(&i) {
                [false, false]
            } else {
                [
                    revealed.contains(&e.halves[0].slot),
                    revealed.contains(&e.halves[1].slot),
                ]
            };
        }
    }

    /// Slots and new-edge slot pairs used by the estimator.
    fn new_edge_slots(&self) -> (usize, Vec<(usize, usize)>) {
        let mut ids: BTreeMap<SlotKey, usize> = BTreeMap::new();
        let mut pairs = Vec::new();
        for (_, e) in self.new_edges() {
            let mut id = |k: SlotKey| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            };
            let a = id(e.halves[0].slot);
            let b = id(e.halves[1].slot);
            pairs.push((a, b));
        }
        (ids.len(), pairs)
    }
}

/// Size and component parameters for [`build_patch`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatchParams {
    /// Row length (straightline), corner count (convexcorners), or side of
    /// the square (subsquare).
    pub length: usize,
    /// `U` width and height (hole, indentation).
    pub width: usize,
    pub height: usize,
    /// Number of sides of `U` enclosed by `S` (indentation: 2 or 3).
    pub sides: usize,
    pub m: usize,
    /// Component of each `U` cell in row-major order, values in `1..=m`.
    /// `None` picks the default split.
    pub assignment: Option<Vec<usize>>,
    /// Stable-set label per square cell, row-major (subsquare only).
    pub decomposition: Option<Vec<usize>>,
}

const FAR: i64 = 1 << 20;

struct Layout {
    s: Vec<Cell>,
    u: Vec<Cell>,
}

fn row_major(cells: &mut [Cell]) {
    cells.sort();
}

fn default_assignment(u_len: usize, m: usize) -> Vec<usize> {
    if m == 1 {
        return vec![1; u_len];
    }
    let parts = m - 1;
    (0..u_len).map(|i| 2 + i * parts / u_len).collect()
}

fn connected(cells: &BTreeSet<Cell>) -> bool {
    components(cells).len() == 1
}

fn is_source_connected(sources: &[Source]) -> bool {
    if sources.is_empty() {
        return true;
    }
    let set: HashSet<Source> = sources.iter().copied().collect();
    let mut seen = HashSet::from([sources[0]]);
    let mut stack = vec![sources[0]];
    while let Some((r, c)) = stack.pop() {
        for nb in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
            if set.contains(&nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == set.len()
}

/// Derives edges from placements and checks the configuration rules.
fn assemble(kind: PatchKind, m: usize, pieces: Vec<PlacedPiece>) -> Result<PatchSpec> {
    let at: HashMap<Cell, usize> = pieces.iter().enumerate().map(|(i, p)| (p.pos, i)).collect();
    if at.len() != pieces.len() {
        return Err(Error::InvalidPatch("two pieces share a position".into()));
    }
    let sources: HashSet<Source> = pieces.iter().map(|p| p.source).collect();
    if sources.len() != pieces.len() {
        return Err(Error::InvalidPatch("two pieces share a source cell".into()));
    }
    let half = |i: usize, dir: Side| {
        let side = pieces[i].rot.physical_side(dir);
        PatchHalfEdge {
            piece: i,
            side,
            slot: slot_of(pieces[i].source, side),
        }
    };
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by_key(|&i| pieces[i].pos);
    let mut edges = Vec::new();
    for &i in &order {
        let (r, c) = pieces[i].pos;
        for (dir, nb) in [(Side::Right, (r, c + 1)), (Side::Bottom, (r + 1, c))] {
            if let Some(&j) = at.get(&nb) {
                let a = half(i, dir);
                let b = half(j, dir.opposite());
                let class = if a.slot == b.slot {
                    EdgeClass::Original
                } else {
                    EdgeClass::New
                };
                edges.push(PatchEdge {
                    halves: [a, b],
                    class,
                    regions: (pieces[i].region, pieces[j].region),
                    known: [false, false],
                });
            }
        }
    }
    if let Some(e) = edges
        .iter()
        .find(|e| e.is_s_u() && e.class == EdgeClass::Original)
    {
        return Err(Error::InvalidPatch(format!(
            "edge between S and U at {:?} is original",
            pieces[e.halves[0].piece].pos
        )));
    }
    let all: BTreeSet<Cell> = at.keys().copied().collect();
    if !connected(&all) {
        return Err(Error::InvalidPatch("S u U is not connected".into()));
    }
    if pieces
        .iter()
        .any(|p| p.region == Region::S && p.component != 1)
    {
        return Err(Error::InvalidPatch("S must lie inside C_1".into()));
    }
    if pieces.iter().any(|p| p.component == 0 || p.component > m) {
        return Err(Error::InvalidPatch("component index out of range".into()));
    }
    Ok(PatchSpec {
        kind,
        m,
        pieces,
        edges,
        ordering: None,
        deferred: Vec::new(),
        z: None,
    })
}

/// Chooses source cells: `S` keeps its own coordinates, `U` cells of
/// component 1 are translated next to `S`, and every other component is
/// translated far away (rigidly when its cells are connected, otherwise as
/// a straight source row).
fn place_components(
    kind: PatchKind,
    layout: &Layout,
    m: usize,
    assignment: &[usize],
) -> Result<PatchSpec> {
    let mut pieces: Vec<PlacedPiece> = layout
        .s
        .iter()
        .map(|&pos| PlacedPiece {
            source: (pos.0 as i64, pos.1 as i64),
            component: 1,
            pos,
            rot: Rotation::ZERO,
            region: Region::S,
        })
        .collect();
    let mut groups: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for (&pos, &comp) in layout.u.iter().zip(assignment) {
        groups.entry(comp).or_default().push(pos);
    }
    for comp in 2..=m {
        let cells = groups.get(&comp).cloned().unwrap_or_default();
        if cells.is_empty() {
            return Err(Error::InvalidPatch(format!(
                "component {comp} has no cell in U"
            )));
        }
        let base = FAR * comp as i64;
        let set: BTreeSet<Cell> = cells.iter().copied().collect();
        let rigid = connected(&set);
        for (k, &pos) in cells.iter().enumerate() {
            let source = if rigid {
                (pos.0 as i64 + base, pos.1 as i64)
            } else {
                (base, k as i64)
            };
            pieces.push(PlacedPiece {
                source,
                component: comp,
                pos,
                rot: Rotation::ZERO,
                region: Region::U,
            });
        }
    }
    let own = groups.get(&1).cloned().unwrap_or_default();
    if own.is_empty() {
        return assemble(kind, m, pieces);
    }
    if layout.s.is_empty() {
        for &pos in &own {
            pieces.push(PlacedPiece {
                source: (pos.0 as i64 + FAR, pos.1 as i64 + FAR),
                component: 1,
                pos,
                rot: Rotation::ZERO,
                region: Region::U,
            });
        }
        return assemble(kind, m, pieces);
    }
    // Translate C_1's share of U next to S, nearest offsets first.
    let s_sources: Vec<Source> = layout
        .s
        .iter()
        .map(|&(r, c)| (r as i64, c as i64))
        .collect();
    let span = layout
        .s
        .iter()
        .chain(&own)
        .flat_map(|&(r, c)| [r.abs(), c.abs()])
        .max()
        .unwrap_or(0) as i64
        + 3;
    let mut offsets: Vec<(i64, i64)> = (-span..=span)
        .flat_map(|dr| (-span..=span).map(move |dc| (dr, dc)))
        .filter(|&o| o != (0, 0))
        .collect();
    offsets.sort_by_key(|&(dr, dc)| (dr.abs() + dc.abs(), dr, dc));
    let attempt = |sources: Vec<Source>| -> Option<PatchSpec> {
        let mut all = s_sources.clone();
        all.extend(&sources);
        if !is_source_connected(&all) {
            return None;
        }
        let mut trial = pieces.clone();
        for (&pos, &source) in own.iter().zip(&sources) {
            trial.push(PlacedPiece {
                source,
                component: 1,
                pos,
                rot: Rotation::ZERO,
                region: Region::U,
            });
        }
        assemble(kind, m, trial).ok()
    };
    for (dr, dc) in offsets {
        let shifted: Vec<Source> = own
            .iter()
            .map(|&(r, c)| (r as i64 + dr, c as i64 + dc))
            .collect();
        if shifted.iter().any(|s| s_sources.contains(s)) {
            continue;
        }
        if let Some(spec) = attempt(shifted) {
            return Ok(spec);
        }
    }
    // Fall back to a row leaving S's rightmost source cell.
    let &(r0, c0) = s_sources
        .iter()
        .max_by_key(|&&(r, c)| (c, r))
        .expect("S non-empty");
    let row: Vec<Source> = (0..own.len() as i64).map(|k| (r0, c0 + 1 + k)).collect();
    attempt(row).ok_or_else(|| Error::InvalidPatch("cannot attach C_1's U cells to S".into()))
}

fn resolve_assignment(params: &PatchParams, u_len: usize) -> Result<Vec<usize>> {
    let m = params.m;
    if m == 0 {
        return Err(Error::InvalidPatch("m must be at least 1".into()));
    }
    if m > u_len + 1 {
        return Err(Error::InvalidPatch(format!(
            "{m} components need at least {} cells in U, have {u_len}",
            m - 1
        )));
    }
    match &params.assignment {
        None => Ok(default_assignment(u_len, m)),
        Some(a) => {
            if a.len() != u_len {
                return Err(Error::InvalidPatch(format!(
                    "assignment has {} entries for {u_len} U cells",
                    a.len()
                )));
            }
            if let Some(&bad) = a.iter().find(|&&c| c == 0 || c > m) {
                return Err(Error::InvalidPatch(format!(
                    "component {bad} outside 1..={m}"
                )));
            }
            Ok(a.clone())
        }
    }
}

fn piece_at(spec: &PatchSpec, pos: Cell) -> Option<usize> {
    spec.pieces.iter().position(|p| p.pos == pos)
}

fn edge_between(spec: &PatchSpec, a: Cell, b: Cell) -> Option<usize> {
    let (pa, pb) = (piece_at(spec, a)?, piece_at(spec, b)?);
    spec.edges.iter().position(|e| {
        let (x, y) = (e.halves[0].piece, e.halves[1].piece);
        (x, y) == (pa, pb) || (x, y) == (pb, pa)
    })
}

/// First `U` cell (row-major) of each component in `comps`.
fn first_cells(spec: &PatchSpec, comps: impl Iterator<Item = usize>) -> Vec<Cell> {
    let comps: BTreeSet<usize> = comps.collect();
    let mut first: BTreeMap<usize, Cell> = BTreeMap::new();
    for p in &spec.pieces {
        if p.region == Region::U && comps.contains(&p.component) {
            let e = first.entry(p.component).or_insert(p.pos);
            *e = (*e).min(p.pos);
        }
    }
    let mut cells: Vec<Cell> = first.into_values().collect();
    row_major(&mut cells);
    cells
}

/// Left and upper edges of each chosen cell, where present.
fn left_up_edges(spec: &PatchSpec, cells: &[Cell]) -> Vec<usize> {
    cells
        .iter()
        .flat_map(|&(r, c)| {
            [
                edge_between(spec, (r, c - 1), (r, c)),
                edge_between(spec, (r - 1, c), (r, c)),
            ]
        })
        .flatten()
        .collect()
}

fn finish(mut spec: PatchSpec, ordering: Vec<usize>, deferred: Vec<usize>) -> PatchSpec {
    spec.ordering = Some(ordering);
    spec.deferred = deferred;
    spec.refresh_knowledge();
    spec
}

fn straightline(params: &PatchParams) -> Result<PatchSpec> {
    let len = params.length as i32;
    if len < 1 {
        return Err(Error::InvalidPatch("row length must be at least 1".into()));
    }
    let layout = Layout {
        s: (0..len).map(|c| (0, c)).collect(),
        u: (0..len).map(|c| (1, c)).collect(),
    };
    let assignment = resolve_assignment(params, layout.u.len())?;
    let spec = place_components(PatchKind::StraightLine, &layout, params.m, &assignment)?;
    // W: leftmost U piece of each C_i (i >= 2) that has a left neighbour in
    // U, keeping m - 2 of them.
    let mut w: Vec<Cell> = first_cells(&spec, 2..=params.m)
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .collect();
    w.truncate(params.m.saturating_sub(2));
    let ordering = left_up_edges(&spec, &w);
    let deferred = layout
        .u
        .iter()
        .filter(|cell| !w.contains(cell))
        .filter_map(|&(r, c)| edge_between(&spec, (r - 1, c), (r, c)))
        .collect();
    Ok(finish(spec, ordering, deferred))
}

fn convexcorners(params: &PatchParams) -> Result<PatchSpec> {
    let corners = params.length as i32;
    if corners < 1 {
        return Err(Error::InvalidPatch("need at least one corner".into()));
    }
    // Staircase descending to the right; every notch (i, i + 1) touches S on
    // its left and below.
    let mut s: Vec<Cell> = (0..=corners).map(|i| (i, i)).collect();
    s.extend((0..corners).map(|i| (i + 1, i)));
    row_major(&mut s);
    let layout = Layout {
        s,
        u: (0..corners).map(|i| (i, i + 1)).collect(),
    };
    let assignment = resolve_assignment(params, layout.u.len())?;
    let spec = place_components(PatchKind::ConvexCorners, &layout, params.m, &assignment)?;
    let w = first_cells(&spec, 2..=params.m);
    let s_edges = |cells: &[Cell]| -> Vec<usize> {
        cells
            .iter()
            .flat_map(|&(r, c)| {
                [
                    edge_between(&spec, (r, c - 1), (r, c)),
                    edge_between(&spec, (r, c), (r + 1, c)),
                ]
            })
            .flatten()
            .collect()
    };
    let ordering = s_edges(&w);
    let rest: Vec<Cell> = layout
        .u
        .iter()
        .copied()
        .filter(|c| !w.contains(c))
        .collect();
    let deferred = s_edges(&rest);
    Ok(finish(spec, ordering, deferred))
}

fn block(top: i32, left: i32, height: usize, width: usize) -> Vec<Cell> {
    (0..height as i32)
        .flat_map(|r| (0..width as i32).map(move |c| (top + r, left + c)))
        .collect()
}

fn enclosed(params: &PatchParams, kind: PatchKind) -> Result<PatchSpec> {
    let (w, h) = (params.width, params.height);
    if w == 0 || h == 0 {
        return Err(Error::InvalidPatch(
            "U needs positive width and height".into(),
        ));
    }
    let u = block(1, 1, h, w);
    let (wi, hi) = (w as i32, h as i32);
    let s: Vec<Cell> = match (kind, params.sides) {
        (PatchKind::Hole, _) => block(0, 0, h + 2, w + 2)
            .into_iter()
            .filter(|c| !u.contains(c))
            .collect(),
        (PatchKind::Indentation, 3) => block(0, 0, h + 1, w + 2)
            .into_iter()
            .filter(|c| !u.contains(c))
            .collect(),
        (PatchKind::Indentation, 2) => block(0, 0, h + 1, w + 1)
            .into_iter()
            .filter(|c| !u.contains(c))
            .collect(),
        (PatchKind::Indentation, other) => {
            return Err(Error::InvalidPatch(format!(
                "indentation is enclosed on 2 or 3 sides, not {other}"
            )))
        }
        _ => unreachable!("only hole and indentation are enclosed"),
    };
    debug_assert!(s.iter().all(|&(r, c)| r <= hi + 1 && c <= wi + 1));
    let layout = Layout { s, u };
    let assignment = resolve_assignment(params, layout.u.len())?;
    let spec = place_components(kind, &layout, params.m, &assignment)?;
    let w_cells = first_cells(&spec, 2..=params.m);
    let ordering = left_up_edges(&spec, &w_cells);
    let deferred = if kind == PatchKind::Hole {
        // S-U edges facing down or right, seen from U.
        layout
            .u
            .iter()
            .flat_map(|&(r, c)| {
                [
                    edge_between(&spec, (r, c), (r, c + 1)),
                    edge_between(&spec, (r, c), (r + 1, c)),
                ]
            })
            .flatten()
            .filter(|&e| spec.edges[e].is_s_u())
            .collect()
    } else {
        Vec::new()
    };
    Ok(finish(spec, ordering, deferred))
}

fn subsquare(params: &PatchParams) -> Result<PatchSpec> {
    let k = params.length;
    if k == 0 {
        return Err(Error::InvalidPatch("square side must be positive".into()));
    }
    let cells = block(0, 0, k, k);
    let labels = match &params.decomposition {
        Some(d) => {
            if d.len() != k * k {
                return Err(Error::InvalidPatch(format!(
                    "decomposition has {} entries for {} cells",
                    d.len(),
                    k * k
                )));
            }
            d.clone()
        }
        None => {
            if params.m == 0 || params.m > k {
                return Err(Error::InvalidPatch(format!(
                    "default decomposition splits {k} rows into m bands; m = {} does not fit",
                    params.m
                )));
            }
            (0..k * k).map(|i| (i / k) * params.m / k).collect()
        }
    };
    let mut sets: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
    for (&cell, &label) in cells.iter().zip(&labels) {
        sets.entry(label).or_default().push(cell);
    }
    let z = sets.len();
    let comp_of: BTreeMap<usize, usize> = match &params.decomposition {
        None => sets.keys().map(|&l| (l, l + 1)).collect(),
        Some(_) => {
            let m = params.m;
            if m == 0 || m > z {
                return Err(Error::InvalidPatch(format!(
                    "{z} stable sets cannot form {m} components"
                )));
            }
            // Stable sets are dealt to components in label order.
            sets.keys()
                .enumerate()
                .map(|(i, &l)| (l, 1 + i * m / z))
                .collect()
        }
    };
    let mut pieces = Vec::with_capacity(k * k);
    for (t, (label, members)) in sets.iter().enumerate() {
        let set: BTreeSet<Cell> = members.iter().copied().collect();
        if !connected(&set) {
            return Err(Error::InvalidPatch(format!(
                "stable set {label} is not connected"
            )));
        }
        let base = FAR * (t as i64 + 1);
        for &pos in members {
            pieces.push(PlacedPiece {
                source: (pos.0 as i64 + base, pos.1 as i64 + base),
                component: comp_of[label],
                pos,
                rot: Rotation::ZERO,
                region: Region::U,
            });
        }
    }
    let m = comp_of.values().copied().max().unwrap_or(1);
    let mut spec = assemble(PatchKind::Subsquare, m, pieces)?;
    spec.z = Some(z);
    // Top-left piece of each stable set away from the square's top and left
    // sides.
    let tops: Vec<Cell> = sets
        .values()
        .map(|members| *members.iter().min().expect("non-empty"))
        .filter(|&(r, c)| r > 0 && c > 0)
        .collect();
    let ordering = left_up_edges(&spec, &tops);
    Ok(finish(spec, ordering, Vec::new()))
}

fn swap_pair() -> Result<PatchSpec> {
    // Original row: P' P Q Q'. Rebuilt as Q'(turned) P Q P'(turned), so the
    // P'|P and Q|Q' slots meet each other twice.
    let placed =
        |source: Source, pos: Cell, rot: u8, component: usize, region: Region| PlacedPiece {
            source,
            component,
            pos,
            rot: Rotation::wrapping(rot as i64),
            region,
        };
    let pieces = vec![
        placed((0, 3), (0, 0), 2, 2, Region::U),
        placed((0, 1), (0, 1), 0, 1, Region::S),
        placed((0, 2), (0, 2), 0, 1, Region::S),
        placed((0, 0), (0, 3), 2, 3, Region::U),
    ];
    let spec = assemble(PatchKind::SwapPair, 3, pieces)?;
    let new: Vec<usize> = spec.new_edges().map(|(i, _)| i).collect();
    Ok(finish(spec, Vec::new(), new))
}

/// Builds a concrete patch of the given kind from surrogate sizes.
pub fn build_patch(kind: PatchKind, params: &PatchParams) -> Result<PatchSpec> {
    match kind {
        PatchKind::StraightLine => straightline(params),
        PatchKind::ConvexCorners => convexcorners(params),
        PatchKind::Hole | PatchKind::Indentation => enclosed(params, kind),
        PatchKind::Subsquare => subsquare(params),
        PatchKind::SwapPair => swap_pair(),
    }
}

/// Checks the independent-edge hypothesis for `ordering` over `edges`: every
/// edge is new with no known colours, and at most one of its two halves has
/// its partner among the halves of earlier edges.
pub fn check_ordering(edges: &[PatchEdge], ordering: &[usize]) -> Result<()> {
    let mut earlier: HashSet<(usize, Side)> = HashSet::new();
    let mut slots: HashMap<SlotKey, Vec<(usize, Side)>> = HashMap::new();
    for (position, &i) in ordering.iter().enumerate() {
        let e = edges
            .get(i)
            .ok_or_else(|| Error::InvalidPatch(format!("edge {i} does not exist")))?;
        if e.class != EdgeClass::New || e.known != [false, false] {
            return Err(Error::OrderingViolation { position });
        }
        let partner_seen = |h: &PatchHalfEdge| {
            slots.get(&h.slot).is_some_and(|hs| {
                hs.iter()
                    .any(|&x| x != (h.piece, h.side) && earlier.contains(&x))
            })
        };
        let hits = e.halves.iter().filter(|h| partner_seen(h)).count();
        if hits > 1 {
            return Err(Error::OrderingViolation { position });
        }
        for h in &e.halves {
            earlier.insert((h.piece, h.side));
            slots.entry(h.slot).or_default().push((h.piece, h.side));
        }
    }
    Ok(())
}

/// `q^-len` for a valid ordering; an error means the caller has to fall
/// back to [`prop2_bound`].
pub fn prop1_exact(patch: &PatchSpec, q: u32) -> Result<f64> {
    let ordering = patch.ordering.as_deref().unwrap_or(&[]);
    check_ordering(&patch.edges, ordering)?;
    Ok((q as f64).powi(-(ordering.len() as i32)))
}

/// `q^-ceil(m/2)` for `m` edges, none of which has both colours known.
pub fn prop2_bound(edges: &[EdgeKnowledge], q: u32) -> Result<f64> {
    if let Some(edge) = edges.iter().position(|e| e.known == [true, true]) {
        return Err(Error::BothHalvesKnown { edge });
    }
    Ok((q as f64).powi(-(edges.len().div_ceil(2) as i32)))
}

impl PatchSpec {
    pub fn deferred_knowledge(&self) -> Vec<EdgeKnowledge> {
        self.deferred
            .iter()
            .map(|&i| EdgeKnowledge {
                known: self.edges[i].known,
            })
            .collect()
    }

    /// Product of the exact ordered factor and the pairing bound on the
    /// deferred edges.
    pub fn combined_bound(&self, q: u32) -> Result<f64> {
        Ok(prop1_exact(self, q)? * prop2_bound(&self.deferred_knowledge(), q)?)
    }
}

/// `q^(2 - 2m - b/4)` where `b` counts the edges between `S` and `U`.
pub fn hole_border_exponent(patch: &PatchSpec, q: u32) -> Result<f64> {
    if patch.kind != PatchKind::Hole {
        return Err(Error::WrongPatchKind(patch.kind.name()));
    }
    let b = patch.border_count();
    assert!(
        b.is_multiple_of(2),
        "the border of a connected set has even length"
    );
    let exponent = 2.0 - 2.0 * patch.m as f64 - b as f64 / 4.0;
    Ok((q as f64).powf(exponent))
}

/// `min(1/q, q^-(2(m-1)))` for an indentation with at least one new edge.
pub fn indentation_bound(patch: &PatchSpec, q: u32) -> Result<f64> {
    if patch.kind != PatchKind::Indentation {
        return Err(Error::WrongPatchKind(patch.kind.name()));
    }
    let q = q as f64;
    Ok(q.recip().min(q.powi(-2 * (patch.m as i32 - 1))))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
    pub p: f64,
    /// Binomial standard error `sqrt(p (1 - p) / trials)`.
    pub se: f64,
}

impl Estimate {
    fn from_counts(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Estimate {
            hits,
            trials,
            p,
            se: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `|p - target| <= k * se`, with a floor of one trial's worth when the
    /// sample standard error is zero.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let se = if self.se > 0.0 {
            self.se
        } else {
            (target * (1.0 - target) / self.trials as f64).sqrt()
        };
        (self.p - target).abs() <= k * se
    }
}

/// Trials per independently seeded chunk.
pub const ESTIMATE_CHUNK: u64 = 4096;

/// Frequency with which every new edge of the patch is monochromatic under
/// a fresh uniform colouring of the source slots. Chunk `k` draws from
/// `mix(seed, [k])`, so the result does not depend on `exec`.
pub fn estimate_patch_validity(
    patch: &PatchSpec,
    q: u32,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidPatch("trials must be at least 1".into()));
    }
    if q == 0 {
        return Err(Error::NoColors);
    }
    let (slot_count, pairs) = patch.new_edge_slots();
    let chunks = trials.div_ceil(ESTIMATE_CHUNK);
    let hits: u64 = map_indexed(exec, chunks as usize, |k| {
        let k = k as u64;
        let len = ESTIMATE_CHUNK.min(trials - k * ESTIMATE_CHUNK);
        let mut rng = rng_from_seed(mix(seed, &[k]));
        let mut colours = vec![0u32; slot_count];
        let mut hits = 0u64;
        for _ in 0..len {
            for c in colours.iter_mut() {
                *c = rng.gen_range(0..q);
            }
            if pairs.iter().all(|&(a, b)| colours[a] == colours[b]) {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum();
    Ok(Estimate::from_counts(hits, trials))
}
