//! Hand-embedded reference objects shared by the integration suites. These
//! are oracles: they are written out literally and never derived from the
//! code under test.

use bitrades::Bitrade;

/// The 2x2 intercalate, 1-based symbols.
pub fn figure1() -> Bitrade {
    Bitrade::from_pair_rows(
        2,
        &[
            vec![Some((1, 2)), Some((2, 1))],
            vec![Some((2, 1)), Some((1, 2))],
        ],
    )
    .unwrap()
}

/// The circulant 3-homogeneous bitrade of volume 15 on a 5x5 grid,
/// 1-based symbols.
pub fn figure2() -> Bitrade {
    let e = |t: usize, m: usize| Some((t, m));
    Bitrade::from_pair_rows(
        5,
        &[
            vec![e(2, 1), e(1, 3), e(3, 2), None, None],
            vec![None, e(3, 2), e(2, 4), e(4, 3), None],
            vec![None, None, e(4, 3), e(3, 5), e(5, 4)],
            vec![e(1, 5), None, None, e(5, 4), e(4, 1)],
            vec![e(5, 2), e(2, 1), None, None, e(1, 5)],
        ],
    )
    .unwrap()
}

/// The 6-homogeneous bitrade of volume 60 on a 10x10 grid, rendered in the
/// grid format with 0-based symbols (the labeling the 10x10 reference object
/// uses: outer symbol i and inner symbol s map to 2(i-1) + s - 1).
pub const FIGURE3_GRID_ZERO_BASED: &str = "\
2/0 3/1 0/4 1/5 4/2 5/3 . . . .
3/1 2/0 1/5 0/4 5/3 4/2 . . . .
. . 4/2 5/3 2/6 3/7 6/4 7/5 . .
. . 5/3 4/2 3/7 2/6 7/5 6/4 . .
. . . . 6/4 7/5 4/8 5/9 8/6 9/7
. . . . 7/5 6/4 5/9 4/8 9/7 8/6
0/8 1/9 . . . . 8/6 9/7 6/0 7/1
1/9 0/8 . . . . 9/7 8/6 7/1 6/0
8/2 9/3 2/0 3/1 . . . . 0/8 1/9
9/3 8/2 3/1 2/0 . . . . 1/9 0/8
";
