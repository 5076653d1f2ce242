use jigsaw::puzzle::{
    generate_puzzle, pieces_of, read_puzzle, rotate_tuple, write_puzzle, Label, Rotation,
};
use jigsaw::Error;

#[test]
fn slot_colours_are_uniform() {
    // Chi-square over every slot of 3x3 puzzles with 4 colours.
    let (n, q, trials) = (3, 4u32, 4000u64);
    let slots = 2 * n * n + 2 * n;
    let mut counts = vec![[0u64; 4]; slots];
    for seed in 0..trials {
        let gc = generate_puzzle(n, q, seed).unwrap();
        for (i, &c) in gc.h_slots().iter().chain(gc.v_slots()).enumerate() {
            counts[i][c as usize] += 1;
        }
    }
    let expected = trials as f64 / q as f64;
    for (i, row) in counts.iter().enumerate() {
        let chi2: f64 = row
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // 3 degrees of freedom; 0.9999 quantile is about 21.1.
        assert!(chi2 < 21.1, "slot {i}: {row:?}");
    }
}

#[test]
fn neighbouring_pieces_share_colours() {
    let gc = generate_puzzle(5, 7, 11).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let t = gc.tuple(Label::new(i, j));
            if j + 1 < 5 {
                assert_eq!(t[1], gc.tuple(Label::new(i, j + 1))[3]);
            }
            if i + 1 < 5 {
                assert_eq!(t[2], gc.tuple(Label::new(i + 1, j))[0]);
            }
            assert_eq!(t, [gc.h(i, j), gc.v(i, j + 1), gc.h(i + 1, j), gc.v(i, j)]);
        }
    }
}

#[test]
fn format_survives_a_file() {
    let gc = generate_puzzle(4, 9, 3).unwrap();
    let path = std::env::temp_dir().join(format!("jigsaw-roundtrip-{}.txt", std::process::id()));
    std::fs::write(&path, write_puzzle(&gc)).unwrap();
    let back = read_puzzle(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(back, gc);
    assert_eq!(pieces_of(&back), pieces_of(&gc));
}

#[test]
fn malformed_inputs() {
    for bad in [
        "",
        "2\n",
        "2 1\n0 0\n",
        "0 1\n\n",
        "2 0\n0 0\n0 0\n0 0\n0 0 0\n0 0 0\n",
        "2 1\n0 0\n0 0\n0 x\n0 0 0\n0 0 0\n",
    ] {
        assert!(read_puzzle(bad).is_err(), "{bad:?}");
    }
    assert!(matches!(
        read_puzzle("2 1\n0 0\n0 0\n0 0\n0 1 0\n0 0 0\n"),
        Err(Error::Parse {
            line: 5,
            column: 3,
            ..
        })
    ));
}

#[test]
fn same_seed_same_puzzle() {
    assert_eq!(
        generate_puzzle(6, 3, 42).unwrap(),
        generate_puzzle(6, 3, 42).unwrap()
    );
    assert_ne!(
        generate_puzzle(6, 30, 42).unwrap(),
        generate_puzzle(6, 30, 43).unwrap()
    );
    assert_eq!(
        rotate_tuple([3, 1, 2, 1], Rotation::new(1).unwrap()),
        [1, 3, 1, 2]
    );
}
