//! Latin squares (Cayley tables of finite quasigroups) and the operations
//! that act on them.

use std::fmt;

use crate::error::Error;
use crate::isotopism::Isotopism;
use crate::parastrophe::ParastropheId;

/// An order-`n` Latin square over the symbols `0..n`, stored row-major.
///
/// Values are validated on construction and the type is immutable, so every
/// `LatinSquare` in the program satisfies the Latin property. The derived
/// ordering (order first, then row-major cells) is used wherever a
/// deterministic arrangement of squares is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Largest supported order (symbols are stored as `u8`).
    pub const MAX_ORDER: usize = 255;

    /// Validates a raw table and builds the square.
    ///
    /// `one_based` selects the expected symbol range: `1..=n` (the usual
    /// convention in written tables) or `0..n`. One-based input is shifted
    /// down so the stored symbols are always `0..n`.
    ///
    /// Checks run in a fixed order and report the first offender: shape,
    /// then symbol range (row-major), then row duplicates, then column
    /// duplicates.
    pub fn from_rows(raw: &[Vec<i64>], one_based: bool) -> Result<LatinSquare, Error> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::NotSquare {
                row: 0,
                len: 0,
                expected: 1,
            });
        }
        if n > LatinSquare::MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: LatinSquare::MAX_ORDER,
            });
        }
        for (r, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: r,
                    len: row.len(),
                    expected: n,
                });
            }
        }
        let offset = i64::from(one_based);
        let (min, max) = (offset, offset + n as i64 - 1);
        let mut cells = Vec::with_capacity(n * n);
        for (r, row) in raw.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v < min || v > max {
                    return Err(Error::SymbolOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                        min,
                        max,
                    });
                }
                cells.push((v - offset) as u8);
            }
        }
        check_latin(n, &cells)?;
        Ok(LatinSquare { n, cells })
    }

    /// Builds a square from row-major cells already in `0..n`.
    ///
    /// Panics if `cells.len() != n * n` (a programming error); returns the
    /// usual validation errors for bad content.
    pub fn from_cells(n: usize, cells: Vec<u8>) -> Result<LatinSquare, Error> {
        assert_eq!(cells.len(), n * n, "cell vector must hold n*n entries");
        if n == 0 || n > LatinSquare::MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: LatinSquare::MAX_ORDER,
            });
        }
        for (i, &v) in cells.iter().enumerate() {
            if (v as usize) >= n {
                return Err(Error::SymbolOutOfRange {
                    row: i / n,
                    col: i % n,
                    value: v as i64,
                    min: 0,
                    max: n as i64 - 1,
                });
            }
        }
        check_latin(n, &cells)?;
        Ok(LatinSquare { n, cells })
    }

    /// Internal constructor for cells already known to be Latin.
    pub(crate) fn from_cells_unchecked(n: usize, cells: Vec<u8>) -> LatinSquare {
        debug_assert!(check_latin(n, &cells).is_ok());
        LatinSquare { n, cells }
    }

    /// Order of the square.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Symbol at `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    /// Row `r` as a symbol slice.
    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.n..(r + 1) * self.n]
    }

    /// All cells, row-major.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// The transpose. Mirroring is an involution, and a square equals its
    /// own mirror exactly when the underlying operation is commutative.
    pub fn mirror(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[c * n + r] = self.cells[r * n + c];
            }
        }
        LatinSquare::from_cells_unchecked(n, cells)
    }

    /// Whether the table is symmetric, i.e. equals its mirror.
    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// The parastrophe obtained by permuting the roles of (row, column,
    /// symbol) in the triple set `{(r, c, Q[r][c])}`.
    ///
    /// `SwapRowCol` is [`mirror`](Self::mirror); the result is always a
    /// valid Latin square because in a Latin square any two coordinates of
    /// a triple determine the third.
    pub fn parastrophe(&self, id: ParastropheId) -> LatinSquare {
        let n = self.n;
        let map = id.role_map();
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                let t = [r, c, self.get(r, c)];
                let mut u = [0usize; 3];
                for (i, &d) in map.iter().enumerate() {
                    u[d] = t[i];
                }
                cells[u[0] * n + u[1]] = u[2] as u8;
            }
        }
        LatinSquare::from_cells_unchecked(n, cells)
    }

    /// The action of an isotopism: the result `R` satisfies
    /// `R[alpha(x)][beta(y)] = gamma(Q[x][y])` for all cells `(x, y)`.
    ///
    /// This is a left group action: `apply(g∘h, Q) = apply(g, apply(h, Q))`.
    pub fn apply(&self, g: &Isotopism) -> Result<LatinSquare, Error> {
        let n = self.n;
        if g.degree() != n {
            return Err(Error::OrderMismatch {
                left: n,
                right: g.degree(),
            });
        }
        let (alpha, beta, gamma) = (g.alpha(), g.beta(), g.gamma());
        let mut cells = vec![0u8; n * n];
        for x in 0..n {
            let xr = alpha.apply(x) * n;
            for y in 0..n {
                cells[xr + beta.apply(y)] = gamma.apply(self.get(x, y)) as u8;
            }
        }
        Ok(LatinSquare::from_cells_unchecked(n, cells))
    }

    /// Renders the table as text, one row per line, symbols separated by
    /// single spaces, with a trailing newline. `one_based` shifts symbols
    /// up to `1..=n` for the written form.
    pub fn to_text(&self, one_based: bool) -> String {
        let offset = usize::from(one_based);
        let mut out = String::new();
        for r in 0..self.n {
            for c in 0..self.n {
                if c > 0 {
                    out.push(' ');
                }
                out.push_str(&(self.get(r, c) + offset).to_string());
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LatinSquare {
    /// One-based table form, without the trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text(true).trim_end())
    }
}

/// Checks the Latin property of a cell vector: every row and every column
/// holds each symbol exactly once. Reports the first duplicate row, then
/// the first duplicate column.
fn check_latin(n: usize, cells: &[u8]) -> Result<(), Error> {
    debug_assert_eq!(cells.len(), n * n);
    // Stamp buffer shared across rows/columns: seen[s] == stamp marks s.
    let mut seen = vec![usize::MAX; n];
    for r in 0..n {
        for c in 0..n {
            let s = cells[r * n + c] as usize;
            if seen[s] == r {
                return Err(Error::RowDuplicate { row: r });
            }
            seen[s] = r;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for c in 0..n {
        for r in 0..n {
            let s = cells[r * n + c] as usize;
            if seen[s] == c {
                return Err(Error::ColumnDuplicate { col: c });
            }
            seen[s] = c;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;
    use crate::rng::SplitMix64;

    fn rows(table: &[&[i64]]) -> Vec<Vec<i64>> {
        table.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn accepts_a_valid_one_based_table() {
        let q = LatinSquare::from_rows(&rows(&[&[1, 2], &[2, 1]]), true).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.cells(), &[0, 1, 1, 0]);
    }

    #[test]
    fn zero_based_and_one_based_agree_after_shift() {
        let a = LatinSquare::from_rows(&rows(&[&[0, 1], &[1, 0]]), false).unwrap();
        let b = LatinSquare::from_rows(&rows(&[&[1, 2], &[2, 1]]), true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn validation_reports_first_offender_in_scan_order() {
        assert_eq!(
            LatinSquare::from_rows(&[], true),
            Err(Error::NotSquare {
                row: 0,
                len: 0,
                expected: 1
            })
        );
        assert_eq!(
            LatinSquare::from_rows(&rows(&[&[1, 2], &[2]]), true),
            Err(Error::NotSquare {
                row: 1,
                len: 1,
                expected: 2
            })
        );
        assert_eq!(
            LatinSquare::from_rows(&rows(&[&[1, 3], &[2, 1]]), true),
            Err(Error::SymbolOutOfRange {
                row: 0,
                col: 1,
                value: 3,
                min: 1,
                max: 2
            })
        );
        // 0 is out of range in one-based mode…
        assert_eq!(
            LatinSquare::from_rows(&rows(&[&[0, 1], &[1, 0]]), true),
            Err(Error::SymbolOutOfRange {
                row: 0,
                col: 0,
                value: 0,
                min: 1,
                max: 2
            })
        );
        assert_eq!(
            LatinSquare::from_rows(&rows(&[&[1, 1], &[2, 2]]), true),
            Err(Error::RowDuplicate { row: 0 })
        );
        // Rows fine, column 0 repeats symbol 1.
        assert_eq!(
            LatinSquare::from_rows(&rows(&[&[1, 2, 3], &[1, 3, 2], &[3, 1, 2]]), true),
            Err(Error::ColumnDuplicate { col: 0 })
        );
    }

    #[test]
    fn mirror_is_an_involution_on_many_random_squares() {
        // Random squares are produced by pushing fixed ones around with
        // random isotopisms; apply() preserves Latinness, which from_cells
        // re-checks here.
        let mut rng = SplitMix64::new(1);
        let base = crate::fixtures::cyclic(5);
        for _ in 0..1000 {
            let g = Isotopism::random(5, &mut rng);
            let q = base.apply(&g).unwrap();
            let q = LatinSquare::from_cells(5, q.cells().to_vec()).unwrap();
            assert_eq!(q.mirror().mirror(), q);
        }
    }

    #[test]
    fn mirror_transposes() {
        let q = crate::fixtures::order7_chiral();
        let m = q.mirror();
        for r in 0..7 {
            for c in 0..7 {
                assert_eq!(m.get(r, c), q.get(c, r));
            }
        }
        // First mirror row, in one-based symbols: 7 4 5 1 6 3 2.
        let first: Vec<usize> = m.row(0).iter().map(|&s| s as usize + 1).collect();
        assert_eq!(first, vec![7, 4, 5, 1, 6, 3, 2]);
    }

    #[test]
    fn commutativity_detects_symmetric_tables() {
        assert!(crate::fixtures::cyclic(4).is_commutative());
        assert!(crate::fixtures::klein4().is_commutative());
        assert!(!crate::fixtures::order7_chiral().is_commutative());
    }

    #[test]
    fn apply_matches_the_defining_equation() {
        let q = crate::fixtures::cyclic(3);
        // alpha = (0 1 2) cycle, beta = id, gamma = id.
        let g = Isotopism::new(
            Perm::from_images(vec![1, 2, 0]).unwrap(),
            Perm::identity(3),
            Perm::identity(3),
        )
        .unwrap();
        let r = q.apply(&g).unwrap();
        // Expected table computed by hand from R[alpha(x)][y] = Q[x][y]:
        // row alpha(x) of R is row x of Q.
        assert_eq!(r.row(0), &[2, 0, 1]);
        assert_eq!(r.row(1), &[0, 1, 2]);
        assert_eq!(r.row(2), &[1, 2, 0]);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(
                    r.get(g.alpha().apply(x), g.beta().apply(y)),
                    g.gamma().apply(q.get(x, y))
                );
            }
        }
    }

    #[test]
    fn apply_is_a_left_group_action() {
        let mut rng = SplitMix64::new(8);
        let q = crate::fixtures::cyclic(5);
        for _ in 0..50 {
            let g = Isotopism::random(5, &mut rng);
            let h = Isotopism::random(5, &mut rng);
            let gh = g.compose(&h).unwrap();
            assert_eq!(
                q.apply(&gh).unwrap(),
                q.apply(&h).unwrap().apply(&g).unwrap()
            );
            assert_eq!(q.apply(&Isotopism::identity(5)).unwrap(), q);
            // inverse undoes
            assert_eq!(q.apply(&g).unwrap().apply(&g.inverse()).unwrap(), q);
        }
    }

    #[test]
    fn apply_rejects_degree_mismatch() {
        let q = crate::fixtures::cyclic(3);
        let g = Isotopism::identity(4);
        assert_eq!(q.apply(&g), Err(Error::OrderMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn mirror_compatibility_with_the_twist() {
        // mirror(apply(g, Q)) == apply(mirror_twist(g), mirror(Q))
        let mut rng = SplitMix64::new(13);
        for n in [3usize, 4, 5] {
            let q = crate::fixtures::cyclic(n);
            for _ in 0..40 {
                let g = Isotopism::random(n, &mut rng);
                let q2 = q.apply(&Isotopism::random(n, &mut rng)).unwrap();
                let lhs = q2.apply(&g).unwrap().mirror();
                let rhs = q2.mirror().apply(&g.mirror_twist()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn swap_col_sym_parastrophe_of_cyclic3() {
        // For the cyclic order-3 table, exchanging column and symbol roles
        // solves r + y = z for y, giving R[x][z] = (z - x) mod 3.
        let q = crate::fixtures::cyclic(3);
        let p = q.parastrophe(ParastropheId::SwapColSym);
        assert_eq!(p.row(0), &[0, 1, 2]);
        assert_eq!(p.row(1), &[2, 0, 1]);
        assert_eq!(p.row(2), &[1, 2, 0]);
        for x in 0..3 {
            for z in 0..3 {
                // defining property: Q[x][P[x][z]] == z
                assert_eq!(q.get(x, p.get(x, z)), z);
            }
        }
    }

    #[test]
    fn parastrophes_compose_by_the_group_law() {
        let q = crate::fixtures::order7_chiral();
        for p in ParastropheId::ALL {
            for s in ParastropheId::ALL {
                assert_eq!(q.parastrophe(p).parastrophe(s), q.parastrophe(s.after(p)));
            }
            assert_eq!(q.parastrophe(p).parastrophe(p.inverse()), q);
        }
        assert_eq!(q.parastrophe(ParastropheId::SwapRowCol), q.mirror());
        assert_eq!(q.parastrophe(ParastropheId::Identity), q);
    }

    #[test]
    fn text_round_trip_both_conventions() {
        let q = crate::fixtures::cyclic(4);
        for one_based in [true, false] {
            let text = q.to_text(one_based);
            let raw: Vec<Vec<i64>> = text
                .lines()
                .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
                .collect();
            assert_eq!(LatinSquare::from_rows(&raw, one_based).unwrap(), q);
        }
    }
}
