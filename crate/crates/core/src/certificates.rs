//! One-sided non-uniqueness certificates.
//!
//! Two pieces whose colour tuples are cyclic shifts of each other can trade
//! places: each one is turned so that it shows exactly the colours the other
//! showed, so every edge stays monochromatic while the physical half-edge
//! pairing changes. A piece that maps onto itself under a non-trivial turn
//! can be turned in place with the same effect. Neither certificate says
//! anything about uniqueness when absent.

use std::collections::HashMap;

use crate::puzzle::{
    canonical_piece, edge_pairing, original_pairing, pieces_of, rotate_tuple, Assembly,
    GridColoring, Label, PieceBag, Placement, Rotation, Tuple,
};
use crate::solver::verify_assembly;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `rotate_tuple(tuple(first), shift) == tuple(second)`.
    Pair {
        first: Label,
        second: Label,
        shift: Rotation,
    },
    /// `rotate_tuple(tuple(label), period) == tuple(label)` with
    /// `period` in `{1, 2}`.
    Symmetric { label: Label, period: Rotation },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Pair { .. } => "pair",
            Certificate::Symmetric { .. } => "symmetric",
        }
    }
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Certificate::Pair {
                first,
                second,
                shift,
            } => {
                write!(f, "pair {first} {second} shift {}", shift.get())
            }
            Certificate::Symmetric { label, period } => {
                write!(f, "symmetric {label} period {}", period.get())
            }
        }
    }
}

/// First pair (in bag order) of distinct pieces with rotation-equivalent
/// tuples. Bags of a single piece never yield a pair.
pub fn find_rotation_equivalent_pair(bag: &PieceBag) -> Option<Certificate> {
    let mut seen: HashMap<Tuple, (Label, Rotation)> = HashMap::with_capacity(bag.len());
    for p in bag.pieces() {
        let c = canonical_piece(p.tuple);
        if let Some(&(first, first_shift)) = seen.get(&c.canon) {
            // rotate(first, s1) = canon = rotate(second, s2)
            let shift = first_shift.compose(c.shift.inverse());
            return Some(Certificate::Pair {
                first,
                second: p.label,
                shift,
            });
        }
        seen.insert(c.canon, (p.label, c.shift));
    }
    None
}

/// First piece fixed by a half or quarter turn. Returns `None` for a
/// one-piece bag, where turning the piece changes nothing observable.
pub fn find_symmetric_piece(bag: &PieceBag) -> Option<Certificate> {
    if bag.n() < 2 {
        return None;
    }
    bag.pieces().iter().find_map(|p| {
        let c = canonical_piece(p.tuple);
        (c.symmetry_order > 1).then(|| Certificate::Symmetric {
            label: p.label,
            period: Rotation::wrapping(c.period() as i64),
        })
    })
}

/// Pair certificate if there is one, else a symmetric piece.
pub fn find_certificate(bag: &PieceBag) -> Option<Certificate> {
    find_rotation_equivalent_pair(bag).or_else(|| find_symmetric_piece(bag))
}

/// Builds the assembly a certificate describes: the identity with the two
/// pieces exchanged (each turned to show the other's colours), or with the
/// symmetric piece turned by its period.
pub fn build_swap_witness(gc: &GridColoring, cert: &Certificate) -> Result<Assembly> {
    let n = gc.n();
    let stale = |msg: String| Err(Error::StaleCertificate(msg));
    let in_grid = |l: Label| (l.row as usize) < n && (l.col as usize) < n;
    let mut asm = Assembly::identity(n);
    match *cert {
        Certificate::Pair {
            first,
            second,
            shift,
        } => {
            if first == second || !in_grid(first) || !in_grid(second) {
                return stale(format!("labels {first} and {second}"));
            }
            if rotate_tuple(gc.tuple(first), shift) != gc.tuple(second) {
                return stale(format!("{first} turned by {} is not {second}", shift.get()));
            }
            // `second` goes to first's cell turned back by `shift`, and
            // `first` goes to second's cell turned forward by `shift`.
            asm.set(
                first.row as usize,
                first.col as usize,
                Placement {
                    label: second,
                    rot: shift.inverse(),
                },
            );
            asm.set(
                second.row as usize,
                second.col as usize,
                Placement {
                    label: first,
                    rot: shift,
                },
            );
        }
        Certificate::Symmetric { label, period } => {
            if !in_grid(label) || n < 2 {
                return stale(format!("label {label}"));
            }
            let t = gc.tuple(label);
            if period == Rotation::ZERO || rotate_tuple(t, period) != t {
                return stale(format!("{label} is not fixed by {} turns", period.get()));
            }
            asm.set(
                label.row as usize,
                label.col as usize,
                Placement { label, rot: period },
            );
        }
    }
    Ok(asm)
}

/// Finds a certificate and returns it with its witness, after checking the
/// witness is valid and changes the pairing. A failed check is a bug and
/// panics.
pub fn certify(gc: &GridColoring) -> Option<(Certificate, Assembly)> {
    let bag = pieces_of(gc);
    let cert = find_certificate(&bag)?;
    let witness = build_swap_witness(gc, &cert).expect("fresh certificate");
    assert!(
        verify_assembly(&bag, &witness).expect("same labels"),
        "certificate witness must be a valid reconstruction"
    );
    assert_ne!(
        edge_pairing(&witness),
        original_pairing(gc.n()),
        "certificate witness must change the pairing"
    );
    Some((cert, witness))
}

/// `exp(-(n^4 - 2 n^2) / (8 q^4))`: upper bound on the chance that the
/// chessboard half of the pieces has no two identical tuples.
pub fn birthday_upper_bound(n: usize, q: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize { got: n, min: 2 });
    }
    if q == 0 {
        return Err(Error::NoColors);
    }
    let n2 = (n * n) as f64;
    let q4 = (q as f64).powi(4);
    Ok((-(n2 * n2 - 2.0 * n2) / (8.0 * q4)).exp())
}

/// Whether two pieces with `i + j` even carry identical tuples (no turning).
pub fn chessboard_collision(bag: &PieceBag) -> bool {
    let mut seen = std::collections::HashSet::new();
    bag.pieces()
        .iter()
        .filter(|p| (p.label.row + p.label.col) % 2 == 0)
        .any(|p| !seen.insert(p.tuple))
}
