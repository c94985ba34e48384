//! Built-in squares used across tests, benchmarks, docs, and the CLI's
//! bundled example files.

use crate::square::LatinSquare;

/// Addition table of the cyclic group: cell `(r, c) = (r + c) mod n`.
/// Commutative, hence equal to its own mirror.
pub fn cyclic(n: usize) -> LatinSquare {
    assert!((1..=LatinSquare::MAX_ORDER).contains(&n));
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            cells.push(((r + c) % n) as u8);
        }
    }
    LatinSquare::from_cells_unchecked(n, cells)
}

/// The Klein four-group: XOR on two bits. Commutative.
pub fn klein4() -> LatinSquare {
    let mut cells = Vec::with_capacity(16);
    for r in 0..4u8 {
        for c in 0..4u8 {
            cells.push(r ^ c);
        }
    }
    LatinSquare::from_cells_unchecked(4, cells)
}

/// A structurally chiral quasigroup of order 7: no isotopism carries this
/// square onto its transpose, which the complete search verifies. The same
/// table ships as `fixtures/example7.lsq` for the command-line tool.
pub fn order7_chiral() -> LatinSquare {
    // One-based table; stored zero-based.
    const ROWS: [[u8; 7]; 7] = [
        [7, 3, 5, 4, 6, 2, 1],
        [4, 2, 6, 3, 7, 1, 5],
        [5, 1, 4, 2, 3, 6, 7],
        [1, 5, 2, 6, 4, 7, 3],
        [6, 7, 3, 1, 5, 4, 2],
        [3, 6, 1, 7, 2, 5, 4],
        [2, 4, 7, 5, 1, 3, 6],
    ];
    let cells = ROWS.iter().flatten().map(|&v| v - 1).collect();
    LatinSquare::from_cells_unchecked(7, cells)
}
