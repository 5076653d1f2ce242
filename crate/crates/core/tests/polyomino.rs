mod common;

use std::collections::HashSet;

use jigsaw::polyomino::{
    corner_census, enumerate_fixed_polyominoes, fill_indentations, find_holes, find_indentations,
    side_corner_census, trace_outer_border, Polyomino, RectSide,
};
use proptest::prelude::*;

#[test]
fn enumeration_matches_growth_oracle() {
    let oracle = common::grow_polyominoes(7);
    let ours = enumerate_fixed_polyominoes(7).unwrap();
    for (k, (mine, theirs)) in ours.iter().zip(&oracle).enumerate() {
        let mine: HashSet<common::Cells> = mine.iter().map(|p| p.cells().clone()).collect();
        assert_eq!(&mine, theirs, "size {}", k + 1);
    }
    let counts: Vec<usize> = ours.iter().map(Vec::len).collect();
    assert_eq!(counts, [1, 2, 6, 19, 63, 216, 760]);
}

#[test]
fn corner_counts_match_vertex_oracle() {
    for level in enumerate_fixed_polyominoes(7).unwrap() {
        for p in level {
            let c = corner_census(&p);
            assert_eq!(
                (c.concave, c.convex),
                common::vertex_corners(p.cells()),
                "{:?}",
                p.cells()
            );
        }
    }
}

#[test]
fn corner_balance_on_small_polyominoes() {
    for level in enumerate_fixed_polyominoes(7).unwrap() {
        for p in level {
            assert_eq!(corner_census(&p).difference(), 4, "{:?}", p.cells());
            for side in RectSide::ALL {
                let (concave, convex) = side_corner_census(&p, side);
                assert_eq!(concave, convex, "{side:?} of {:?}", p.cells());
            }
        }
    }
}

#[test]
fn ring_has_one_hole() {
    let ring: Vec<(i32, i32)> = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .filter(|&x| x != (1, 1))
        .collect();
    let p = Polyomino::new(ring).unwrap();
    assert_eq!(find_holes(&p).len(), 1);
    assert!(find_indentations(&p).is_empty());
    // The hole does not change the outer border.
    assert_eq!(corner_census(&p).concave, 4);
    assert_eq!(trace_outer_border(&p).segments.len(), 12);
}

fn random_polyomino() -> impl Strategy<Value = Polyomino> {
    prop::collection::vec(0usize..4, 0..40).prop_map(|steps| {
        let mut cells = vec![(0i32, 0i32)];
        let mut at = (0, 0);
        for s in steps {
            at = match s {
                0 => (at.0 - 1, at.1),
                1 => (at.0 + 1, at.1),
                2 => (at.0, at.1 - 1),
                _ => (at.0, at.1 + 1),
            };
            cells.push(at);
        }
        Polyomino::new(cells).unwrap()
    })
}

proptest! {
    #[test]
    fn corner_balance_on_random_walks(p in random_polyomino()) {
        prop_assert_eq!(corner_census(&p).difference(), 4);
        prop_assert_eq!(corner_census(&p), {
            let (concave, convex) = common::vertex_corners(p.cells());
            jigsaw::polyomino::CornerCensus { concave, convex }
        });
        for side in RectSide::ALL {
            let (a, b) = side_corner_census(&p, side);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn filling_indentations_leaves_only_holes(p in random_polyomino()) {
        let filled = fill_indentations(&p);
        prop_assert!(find_indentations(&filled).is_empty());
        prop_assert_eq!(filled.bounding_rect(), p.bounding_rect());
        let area = p.bounding_rect().height() * p.bounding_rect().width();
        let holes: usize = find_holes(&filled).iter().map(Polyomino::len).sum();
        prop_assert_eq!(filled.len() + holes, area);
    }

    #[test]
    fn border_is_closed(p in random_polyomino()) {
        let walk = trace_outer_border(&p);
        let first = walk.segments[0].start;
        prop_assert_eq!(walk.segments.last().unwrap().end(), first);
        prop_assert_eq!(walk.segments.len(), walk.turns.len());
    }
}
