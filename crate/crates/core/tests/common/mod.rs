//! Reference implementations used as test oracles. They share no code with
//! the library beyond its plain data types.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use jigsaw::puzzle::{Label, PieceBag};

/// Colour facing direction `d` (0 top, 1 right, 2 bottom, 3 left) after
/// `r` clockwise quarter turns.
pub fn facing(t: [u32; 4], r: usize, d: usize) -> u32 {
    t[(d + 4 - r % 4) % 4]
}

/// Every valid 2x2 assembly as `[(label, rot); 4]` in row-major cell order,
/// found by trying all 4! * 4^4 arrangements.
pub fn brute_force_2x2(bag: &PieceBag) -> Vec<[(Label, u8); 4]> {
    let pieces = bag.pieces();
    assert_eq!(pieces.len(), 4);
    let mut out = Vec::new();
    let mut perm = [0usize, 1, 2, 3];
    for_each_permutation(&mut perm, 0, &mut |p| {
        for code in 0..256usize {
            let rot = [code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3];
            let t = |cell: usize, d: usize| facing(pieces[p[cell]].tuple, rot[cell], d);
            let ok = t(0, 1) == t(1, 3)
                && t(2, 1) == t(3, 3)
                && t(0, 2) == t(2, 0)
                && t(1, 2) == t(3, 0);
            if ok {
                let mut a = [(Label::new(0, 0), 0u8); 4];
                for cell in 0..4 {
                    a[cell] = (pieces[p[cell]].label, rot[cell] as u8);
                }
                out.push(a);
            }
        }
    });
    out
}

fn for_each_permutation(a: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == a.len() {
        f(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        for_each_permutation(a, k + 1, f);
        a.swap(k, i);
    }
}

/// Counts valid assemblies by plain backtracking over all unused pieces and
/// rotations, with no index.
pub fn naive_count(bag: &PieceBag) -> u64 {
    let n = bag.n();
    let tuples: Vec<[u32; 4]> = bag.pieces().iter().map(|p| p.tuple).collect();
    let mut used = vec![false; tuples.len()];
    let mut shown: Vec<[u32; 4]> = Vec::new();
    fn go(n: usize, tuples: &[[u32; 4]], used: &mut [bool], shown: &mut Vec<[u32; 4]>) -> u64 {
        let cell = shown.len();
        if cell == n * n {
            return 1;
        }
        let (r, c) = (cell / n, cell % n);
        let mut total = 0;
        for i in 0..tuples.len() {
            if used[i] {
                continue;
            }
            for rot in 0..4 {
                let s = [0, 1, 2, 3].map(|d| facing(tuples[i], rot, d));
                if c > 0 && shown[cell - 1][1] != s[3] {
                    continue;
                }
                if r > 0 && shown[cell - n][2] != s[0] {
                    continue;
                }
                used[i] = true;
                shown.push(s);
                total += go(n, tuples, used, shown);
                shown.pop();
                used[i] = false;
            }
        }
        total
    }
    go(n, &tuples, &mut used, &mut shown)
}

pub type Cells = BTreeSet<(i32, i32)>;

fn normalize(cells: &Cells) -> Cells {
    let r0 = cells.iter().map(|c| c.0).min().unwrap();
    let c0 = cells.iter().map(|c| c.1).min().unwrap();
    cells.iter().map(|&(r, c)| (r - r0, c - c0)).collect()
}

/// Fixed polyominoes of each size `1..=k`, grown one cell at a time from
/// every shape of the previous size and deduplicated after translation.
pub fn grow_polyominoes(k: usize) -> Vec<HashSet<Cells>> {
    let mut levels: Vec<HashSet<Cells>> = vec![HashSet::from([Cells::from([(0, 0)])])];
    while levels.len() < k {
        let mut next = HashSet::new();
        for shape in levels.last().unwrap() {
            for &(r, c) in shape {
                for nb in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
                    if !shape.contains(&nb) {
                        let mut grown = shape.clone();
                        grown.insert(nb);
                        next.insert(normalize(&grown));
                    }
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Cells plus every empty cell not 4-connected to the outside.
pub fn fill_holes(cells: &Cells) -> Cells {
    let r0 = cells.iter().map(|c| c.0).min().unwrap() - 1;
    let r1 = cells.iter().map(|c| c.0).max().unwrap() + 1;
    let c0 = cells.iter().map(|c| c.1).min().unwrap() - 1;
    let c1 = cells.iter().map(|c| c.1).max().unwrap() + 1;
    let mut outside = HashSet::from([(r0, c0)]);
    let mut stack = vec![(r0, c0)];
    while let Some((r, c)) = stack.pop() {
        for nb in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
            if nb.0 >= r0
                && nb.0 <= r1
                && nb.1 >= c0
                && nb.1 <= c1
                && !cells.contains(&nb)
                && outside.insert(nb)
            {
                stack.push(nb);
            }
        }
    }
    let mut filled = cells.clone();
    for r in r0..=r1 {
        for c in c0..=c1 {
            if !outside.contains(&(r, c)) {
                filled.insert((r, c));
            }
        }
    }
    filled
}

/// `(concave, convex)` corners of the outer border, counted per lattice
/// vertex on the hole-filled shape: one occupied cell around a vertex is a
/// 90 degree corner, three is a 270 degree corner, a diagonal pair is two
/// 90 degree corners.
pub fn vertex_corners(cells: &Cells) -> (usize, usize) {
    let filled = fill_holes(cells);
    let r0 = filled.iter().map(|c| c.0).min().unwrap();
    let r1 = filled.iter().map(|c| c.0).max().unwrap() + 1;
    let c0 = filled.iter().map(|c| c.1).min().unwrap();
    let c1 = filled.iter().map(|c| c.1).max().unwrap() + 1;
    let (mut concave, mut convex) = (0, 0);
    for r in r0..=r1 {
        for c in c0..=c1 {
            let around =
                [(r - 1, c - 1), (r - 1, c), (r, c - 1), (r, c)].map(|x| filled.contains(&x));
            match around.iter().filter(|&&x| x).count() {
                1 => concave += 1,
                3 => convex += 1,
                2 if around[0] == around[3] => concave += 2,
                _ => {}
            }
        }
    }
    (concave, convex)
}
