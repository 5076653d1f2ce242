//! Exact reconstruction search.
//!
//! Cells are filled in row-major order. Each cell must match the colour its
//! left neighbour shows on the right and the colour its upper neighbour shows
//! at the bottom; border sides are unconstrained. Candidates come from a
//! [`CompatIndex`] keyed by those two demanded colours and are tried in
//! (label, rotation) order, so the first solution found is reproducible.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;

use crate::puzzle::{
    pieces_of, rotate_tuple, Assembly, Color, GridColoring, HalfEdge, Label, PieceBag, Placement,
    Rotation, Side, Tuple,
};
use crate::{Error, Result};

/// A piece of the bag in a fixed orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oriented {
    pub label: Label,
    pub rot: Rotation,
    /// Position of the piece in the bag.
    pub(crate) slot: u32,
    pub(crate) shown: Tuple,
}

impl Oriented {
    pub fn placement(&self) -> Placement {
        Placement {
            label: self.label,
            rot: self.rot,
        }
    }

    pub fn shown(&self) -> Tuple {
        self.shown
    }
}

/// Oriented pieces grouped by the colours they show on top and on the left.
#[derive(Clone, Debug)]
pub struct CompatIndex {
    all: Vec<Oriented>,
    by_top: HashMap<Color, Vec<Oriented>>,
    by_left: HashMap<Color, Vec<Oriented>>,
    by_both: HashMap<(Color, Color), Vec<Oriented>>,
}

impl CompatIndex {
    /// `None` is a wildcard on that side.
    pub fn lookup(&self, top: Option<Color>, left: Option<Color>) -> &[Oriented] {
        let hit = match (top, left) {
            (None, None) => return &self.all,
            (Some(t), None) => self.by_top.get(&t),
            (None, Some(l)) => self.by_left.get(&l),
            (Some(t), Some(l)) => self.by_both.get(&(t, l)),
        };
        hit.map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn build_index(bag: &PieceBag) -> CompatIndex {
    let mut all: Vec<Oriented> = bag
        .pieces()
        .iter()
        .enumerate()
        .flat_map(|(slot, p)| {
            Rotation::all().map(move |rot| Oriented {
                label: p.label,
                rot,
                slot: slot as u32,
                shown: rotate_tuple(p.tuple, rot),
            })
        })
        .collect();
    all.sort_by_key(|o| (o.label, o.rot));
    let mut by_top: HashMap<Color, Vec<Oriented>> = HashMap::new();
    let mut by_left: HashMap<Color, Vec<Oriented>> = HashMap::new();
    let mut by_both: HashMap<(Color, Color), Vec<Oriented>> = HashMap::new();
    for o in &all {
        let (top, left) = (o.shown[Side::Top.index()], o.shown[Side::Left.index()]);
        by_top.entry(top).or_default().push(*o);
        by_left.entry(left).or_default().push(*o);
        by_both.entry((top, left)).or_default().push(*o);
    }
    CompatIndex {
        all,
        by_top,
        by_left,
        by_both,
    }
}

/// How a search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The whole tree was explored.
    Completed,
    /// The visitor asked to stop.
    Stopped,
    /// More than the allowed number of placements were tried.
    BudgetExhausted,
}

/// Search statistics returned alongside the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Placements tried.
    pub nodes: u64,
}

struct Search<'a> {
    n: usize,
    index: &'a CompatIndex,
    used: Vec<bool>,
    cells: Vec<Oriented>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run<F>(&mut self, pos: usize, visit: &mut F) -> ControlFlow<SearchOutcome>
    where
        F: FnMut(&[Oriented]) -> ControlFlow<()>,
    {
        if pos == self.n * self.n {
            return match visit(&self.cells) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(SearchOutcome::Stopped),
            };
        }
        let (r, c) = (pos / self.n, pos % self.n);
        let top = (r > 0).then(|| self.cells[pos - self.n].shown[Side::Bottom.index()]);
        let left = (c > 0).then(|| self.cells[pos - 1].shown[Side::Right.index()]);
        let index = self.index;
        for cand in index.lookup(top, left) {
            if self.used[cand.slot as usize] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return ControlFlow::Break(SearchOutcome::BudgetExhausted);
            }
            self.used[cand.slot as usize] = true;
            self.cells.push(*cand);
            let flow = self.run(pos + 1, visit);
            self.cells.pop();
            self.used[cand.slot as usize] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `visit` on every valid assembly of `bag` (as row-major oriented
/// pieces) until it breaks, the tree is exhausted, or `budget` placements
/// have been tried.
pub fn for_each_solution<F>(bag: &PieceBag, budget: u64, mut visit: F) -> SearchReport
where
    F: FnMut(&[Oriented]) -> ControlFlow<()>,
{
    let index = build_index(bag);
    let n = bag.n();
    let mut search = Search {
        n,
        index: &index,
        used: vec![false; bag.len()],
        cells: Vec::with_capacity(n * n),
        nodes: 0,
        budget,
    };
    let outcome = match search.run(0, &mut visit) {
        ControlFlow::Continue(()) => SearchOutcome::Completed,
        ControlFlow::Break(o) => o,
    };
    SearchReport {
        outcome,
        nodes: search.nodes,
    }
}

pub fn to_assembly(n: usize, cells: &[Oriented]) -> Assembly {
    Assembly::new(n, cells.iter().map(Oriented::placement).collect())
        .expect("search places each label once")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionCount {
    Exact(u64),
    /// Counting stopped at the limit.
    AtLeast(u64),
}

/// Counts raw valid assemblies (placement and rotation of every piece),
/// stopping once `limit` have been seen.
pub fn count_valid(bag: &PieceBag, n: usize, limit: u64) -> Result<SolutionCount> {
    if bag.n() != n || bag.len() != n * n {
        return Err(Error::InvalidBag(format!(
            "bag has {} pieces, expected {}",
            bag.len(),
            n * n
        )));
    }
    let mut count = 0u64;
    if limit == 0 {
        return Ok(SolutionCount::AtLeast(0));
    }
    for_each_solution(bag, u64::MAX, |_| {
        count += 1;
        if count >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(if count >= limit {
        SolutionCount::AtLeast(count)
    } else {
        SolutionCount::Exact(count)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniquenessVerdict {
    Unique,
    /// A valid assembly whose half-edge pairing differs from the original.
    NonUnique(Assembly),
    /// The node budget ran out first.
    Undetermined {
        nodes: u64,
    },
}

/// True when every internal edge of the (row-major) assembly joins two
/// half-edges that were partners in the original grid.
fn all_edges_original(n: usize, cells: &[Oriented]) -> bool {
    let half = |i: usize, dir: Side| HalfEdge {
        label: cells[i].label,
        side: cells[i].rot.physical_side(dir),
    };
    (0..n * n).all(|i| {
        let (r, c) = (i / n, i % n);
        let right_ok =
            c + 1 == n || half(i, Side::Right).partner(n) == Some(half(i + 1, Side::Left));
        let down_ok =
            r + 1 == n || half(i, Side::Bottom).partner(n) == Some(half(i + n, Side::Top));
        right_ok && down_ok
    })
}

/// Decides whether every valid reconstruction has the original pairing.
///
/// A single piece is always unique: turning it leaves every edge a single.
pub fn decide_unique(gc: &GridColoring, budget: u64) -> UniquenessVerdict {
    let n = gc.n();
    if n == 1 {
        return UniquenessVerdict::Unique;
    }
    let bag = pieces_of(gc);
    let mut witness = None;
    let report = for_each_solution(&bag, budget, |cells| {
        if all_edges_original(n, cells) {
            ControlFlow::Continue(())
        } else {
            witness = Some(to_assembly(n, cells));
            ControlFlow::Break(())
        }
    });
    match (report.outcome, witness) {
        (_, Some(w)) => UniquenessVerdict::NonUnique(w),
        (SearchOutcome::Completed, None) => UniquenessVerdict::Unique,
        (_, None) => UniquenessVerdict::Undetermined {
            nodes: report.nodes,
        },
    }
}

/// Checks an assembly cell by cell against the bag's colours.
pub fn verify_assembly(bag: &PieceBag, asm: &Assembly) -> Result<bool> {
    let n = asm.n();
    if bag.n() != n {
        return Err(Error::LabelMismatch(format!(
            "bag side {} vs assembly side {n}",
            bag.n()
        )));
    }
    let mut shown = Vec::with_capacity(n * n);
    for p in asm.cells() {
        let piece = bag
            .get(p.label)
            .ok_or_else(|| Error::LabelMismatch(format!("label {} not in bag", p.label)))?;
        shown.push(rotate_tuple(piece.tuple, p.rot));
    }
    for r in 0..n {
        for c in 0..n {
            let here = shown[r * n + c];
            if c + 1 < n && here[1] != shown[r * n + c + 1][3] {
                return Ok(false);
            }
            if r + 1 < n && here[2] != shown[(r + 1) * n + c][0] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `n` lines of `n` space-separated `i,j:r` entries.
pub fn write_witness(asm: &Assembly) -> String {
    let n = asm.n();
    let mut out = String::new();
    for r in 0..n {
        for c in 0..n {
            let p = asm.at(r, c);
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}:{}", p.label, p.rot.get());
        }
        out.push('\n');
    }
    out
}

pub fn read_witness(text: &str) -> Result<Assembly> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let n = lines.len();
    if n == 0 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty witness".into(),
        });
    }
    let mut cells = Vec::with_capacity(n * n);
    for (k, line) in lines.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::Parse {
                line: k + 1,
                column: 1,
                message: format!("expected {n} entries, found {}", entries.len()),
            });
        }
        for (e, entry) in entries.iter().enumerate() {
            let bad = || Error::Parse {
                line: k + 1,
                column: e + 1,
                message: format!("malformed entry {entry:?}, expected i,j:r"),
            };
            let (coord, r) = entry.split_once(':').ok_or_else(bad)?;
            let (i, j) = coord.split_once(',').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            let r: u8 = r.parse().map_err(|_| bad())?;
            cells.push(Placement {
                label: Label::new(i, j),
                rot: Rotation::new(r).map_err(|_| bad())?,
            });
        }
    }
    Assembly::new(n, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puzzle::{edge_pairing, generate_puzzle, original_pairing, Piece};

    fn bag_of(n: usize, q: u32, tuples: &[Tuple]) -> PieceBag {
        let pieces = tuples
            .iter()
            .enumerate()
            .map(|(i, &tuple)| Piece {
                label: Label::new(i / n, i % n),
                tuple,
            })
            .collect();
        PieceBag::new(n, q, pieces).unwrap()
    }

    #[test]
    fn index_of_uniform_bag_returns_everything() {
        let bag = bag_of(2, 1, &[[0; 4]; 4]);
        let idx = build_index(&bag);
        assert_eq!(idx.lookup(None, None).len(), 16);
        assert_eq!(idx.lookup(Some(0), None).len(), 16);
        assert_eq!(idx.lookup(None, Some(0)).len(), 16);
        assert_eq!(idx.lookup(Some(0), Some(0)).len(), 16);
    }

    #[test]
    fn index_single_piece_lookup() {
        let bag = bag_of(1, 5, &[[1, 2, 3, 4]]);
        let idx = build_index(&bag);
        let hits = idx.lookup(Some(3), Some(2));
        // Turning (1,2,3,4) twice shows (3,4,1,2): 3 on top, 2 on the left.
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].rot.get(), 2);
        assert!(idx.lookup(Some(0), None).is_empty());
        assert!(idx.lookup(Some(3), Some(4)).is_empty());
    }

    #[test]
    fn index_lookups_match_filtering() {
        let gc = generate_puzzle(3, 3, 17).unwrap();
        let bag = pieces_of(&gc);
        let idx = build_index(&bag);
        for top in 0..3 {
            for left in 0..3 {
                let got = idx.lookup(Some(top), Some(left));
                let want: Vec<&Oriented> = idx
                    .lookup(None, None)
                    .iter()
                    .filter(|o| o.shown[0] == top && o.shown[3] == left)
                    .collect();
                assert_eq!(got.len(), want.len());
                assert!(got.iter().all(|o| o.shown[0] == top && o.shown[3] == left));
            }
        }
    }

    #[test]
    fn all_equal_two_by_two_counts_everything() {
        let bag = bag_of(2, 1, &[[0; 4]; 4]);
        assert_eq!(
            count_valid(&bag, 2, u64::MAX).unwrap(),
            SolutionCount::Exact(6144)
        );
        assert_eq!(
            count_valid(&bag, 2, 10).unwrap(),
            SolutionCount::AtLeast(10)
        );
        assert!(count_valid(&bag, 3, 10).is_err());
    }

    fn distinct_two_by_two() -> GridColoring {
        GridColoring::new(2, 12, (0..6).collect(), (6..12).collect()).unwrap()
    }

    #[test]
    fn distinct_colours_force_the_original() {
        let gc = distinct_two_by_two();
        let bag = pieces_of(&gc);
        assert_eq!(
            count_valid(&bag, 2, u64::MAX).unwrap(),
            SolutionCount::Exact(4)
        );
        assert_eq!(decide_unique(&gc, 1_000_000), UniquenessVerdict::Unique);
    }

    #[test]
    fn single_colour_is_not_unique() {
        let gc = generate_puzzle(2, 1, 3).unwrap();
        let bag = pieces_of(&gc);
        match decide_unique(&gc, 1_000_000) {
            UniquenessVerdict::NonUnique(w) => {
                assert!(verify_assembly(&bag, &w).unwrap());
                assert_ne!(edge_pairing(&w), original_pairing(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn one_piece_is_unique() {
        let gc = generate_puzzle(1, 1, 0).unwrap();
        assert_eq!(decide_unique(&gc, 0), UniquenessVerdict::Unique);
    }

    #[test]
    fn tiny_budget_is_undetermined() {
        let gc = distinct_two_by_two();
        assert!(matches!(
            decide_unique(&gc, 3),
            UniquenessVerdict::Undetermined { .. }
        ));
    }

    #[test]
    fn verifier_examples() {
        let gc = generate_puzzle(3, 50, 8).unwrap();
        let bag = pieces_of(&gc);
        let mut asm = Assembly::identity(3);
        assert!(verify_assembly(&bag, &asm).unwrap());
        // Centre piece with four distinct colours, turned once.
        let gc = GridColoring::new(3, 24, (0..12).collect(), (12..24).collect()).unwrap();
        let bag = pieces_of(&gc);
        let centre = asm.at(1, 1);
        asm.set(
            1,
            1,
            Placement {
                rot: Rotation::new(1).unwrap(),
                ..centre
            },
        );
        assert!(!verify_assembly(&bag, &asm).unwrap());
        let small = pieces_of(&generate_puzzle(2, 2, 1).unwrap());
        assert!(verify_assembly(&small, &asm).is_err());
    }

    #[test]
    fn witness_text_round_trip() {
        let asm = Assembly::identity(3).rotated_clockwise();
        let text = write_witness(&asm);
        assert_eq!(text.lines().next().unwrap(), "2,0:1 1,0:1 0,0:1");
        assert_eq!(read_witness(&text).unwrap(), asm);
        assert!(read_witness("0,0:4\n").is_err());
        assert!(read_witness("0,0:0 0,1:0\n").is_err());
        assert!(read_witness("0,0:0 0,0:0\n1,0:0 1,1:0\n").is_err());
    }
}
