//! Intercalates (2×2 Latin subsquares) and the isotopy invariants built
//! from them.
//!
//! An intercalate of `Q` is a choice of two rows and two columns whose four
//! cells form a 2×2 Latin square on two symbols. Isotopisms map intercalates
//! to intercalates bijectively, so *how many* intercalates pass through each
//! cell is relabeling-equivariant data: the multiset of per-row count
//! profiles (and the per-column one) is a true isotopy invariant. The search
//! module uses these profiles to prune candidate row/column images, and
//! because transposition exchanges the two profile families, comparing them
//! yields a cheap sufficient certificate that a square cannot be isotopic to
//! its mirror.

use crate::square::LatinSquare;

/// A single 2×2 Latin subsquare, recorded by its row pair, column pair, and
/// the two symbols involved (all pairs in increasing order of position).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Intercalate {
    pub rows: (u8, u8),
    pub cols: (u8, u8),
    /// Symbols at `(rows.0, cols.0)` and `(rows.0, cols.1)`.
    pub symbols: (u8, u8),
}

impl Intercalate {
    /// Whether `(row, col)` is one of the four cells.
    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        (row == self.rows.0 as usize || row == self.rows.1 as usize)
            && (col == self.cols.0 as usize || col == self.cols.1 as usize)
    }
}

/// Per-cell intercalate counts: entry `(r, c)` is the number of intercalates
/// whose four cells include `(r, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCountMatrix {
    n: usize,
    counts: Vec<u32>,
}

impl CellCountMatrix {
    /// Order of the underlying square.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Count at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.counts[row * self.n + col]
    }

    /// Sum over all cells; always four times the number of intercalates.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

/// A multiset of count profiles: each inner vector is one row's (or
/// column's) cell counts sorted ascending, and the outer list is itself
/// sorted, so equality is multiset equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileMultiset {
    profiles: Vec<Vec<u32>>,
}

impl ProfileMultiset {
    fn from_lines(mut profiles: Vec<Vec<u32>>) -> ProfileMultiset {
        for p in &mut profiles {
            p.sort_unstable();
        }
        profiles.sort_unstable();
        ProfileMultiset { profiles }
    }

    /// The sorted profiles.
    pub fn profiles(&self) -> &[Vec<u32>] {
        &self.profiles
    }
}

/// Both profile multisets of a square, used as a cheap equality filter: any
/// two isotopic squares have equal fingerprints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntercalateFingerprint {
    pub rows: ProfileMultiset,
    pub cols: ProfileMultiset,
}

/// All intercalates of `Q`, in lexicographic order of
/// `(rows.0, rows.1, cols.0, cols.1)`.
pub fn find_intercalates(q: &LatinSquare) -> Vec<Intercalate> {
    let n = q.order();
    let mut out = Vec::new();
    for r1 in 0..n {
        for r2 in r1 + 1..n {
            for c1 in 0..n {
                let (a, b) = (q.get(r1, c1), q.get(r2, c1));
                for c2 in c1 + 1..n {
                    if q.get(r1, c2) == b && q.get(r2, c2) == a {
                        // The two symbols differ: a row never repeats one.
                        debug_assert_ne!(a, b);
                        out.push(Intercalate {
                            rows: (r1 as u8, r2 as u8),
                            cols: (c1 as u8, c2 as u8),
                            symbols: (a as u8, b as u8),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Per-cell intercalate counts of `Q`.
pub fn cell_counts(q: &LatinSquare) -> CellCountMatrix {
    let n = q.order();
    let mut counts = vec![0u32; n * n];
    for ic in find_intercalates(q) {
        for r in [ic.rows.0, ic.rows.1] {
            for c in [ic.cols.0, ic.cols.1] {
                counts[r as usize * n + c as usize] += 1;
            }
        }
    }
    CellCountMatrix { n, counts }
}

/// Multiset of per-row count profiles.
pub fn row_profiles(q: &LatinSquare) -> ProfileMultiset {
    fingerprint(q).rows
}

/// Multiset of per-column count profiles.
pub fn col_profiles(q: &LatinSquare) -> ProfileMultiset {
    fingerprint(q).cols
}

/// Both profile multisets, sharing one counting pass.
pub fn fingerprint(q: &LatinSquare) -> IntercalateFingerprint {
    let m = cell_counts(q);
    let n = m.order();
    let rows = (0..n)
        .map(|r| (0..n).map(|c| m.get(r, c)).collect())
        .collect();
    let cols = (0..n)
        .map(|c| (0..n).map(|r| m.get(r, c)).collect())
        .collect();
    IntercalateFingerprint {
        rows: ProfileMultiset::from_lines(rows),
        cols: ProfileMultiset::from_lines(cols),
    }
}

/// Sufficient (not necessary) chirality certificate: if the row and column
/// profile multisets differ, no isotopism can carry `Q` onto its mirror,
/// because mirroring exchanges the two multisets while isotopy preserves
/// each. `false` is inconclusive and calls for the complete search.
pub fn mirror_invariant_separates(q: &LatinSquare) -> bool {
    let fp = fingerprint(q);
    fp.rows != fp.cols
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::isotopism::Isotopism;
    use crate::rng::SplitMix64;

    #[test]
    fn counts_on_small_group_tables() {
        // Order 2: the whole square is the unique intercalate.
        assert_eq!(find_intercalates(&fixtures::cyclic(2)).len(), 1);
        // Odd cyclic tables have none (an intercalate would force 2d ≡ 0).
        assert_eq!(find_intercalates(&fixtures::cyclic(3)).len(), 0);
        assert_eq!(find_intercalates(&fixtures::cyclic(5)).len(), 0);
        // Cyclic order 4: row pairs {0,2},{1,3} × column pairs {0,2},{1,3}.
        assert_eq!(find_intercalates(&fixtures::cyclic(4)).len(), 4);
        // Klein four-group: every (row pair, column pair) with equal XOR
        // difference works: 3 differences × 2 × 2.
        assert_eq!(find_intercalates(&fixtures::klein4()).len(), 12);
    }

    #[test]
    fn enumeration_is_lexicographic_and_consistent() {
        let q = fixtures::klein4();
        let ics = find_intercalates(&q);
        let keys: Vec<_> = ics.iter().map(|i| (i.rows, i.cols)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(keys, sorted);
        for ic in &ics {
            // Each recorded subsquare really is one.
            let (r1, r2) = (ic.rows.0 as usize, ic.rows.1 as usize);
            let (c1, c2) = (ic.cols.0 as usize, ic.cols.1 as usize);
            assert_eq!(q.get(r1, c1), q.get(r2, c2));
            assert_eq!(q.get(r1, c2), q.get(r2, c1));
            assert_eq!(ic.symbols, (q.get(r1, c1) as u8, q.get(r1, c2) as u8));
            assert!(ic.contains_cell(r1, c1) && ic.contains_cell(r2, c2));
            assert!(!ic.contains_cell(r1 + 1, c1) || ic.rows.1 == ic.rows.0 + 1);
        }
    }

    #[test]
    fn cell_count_total_is_four_per_intercalate() {
        for q in [
            fixtures::cyclic(4),
            fixtures::klein4(),
            fixtures::order7_chiral(),
        ] {
            let total = cell_counts(&q).total();
            assert_eq!(total, 4 * find_intercalates(&q).len() as u64);
        }
    }

    #[test]
    fn profiles_are_isotopy_invariant() {
        let mut rng = SplitMix64::new(31);
        for q in [fixtures::klein4(), fixtures::order7_chiral()] {
            let fp = fingerprint(&q);
            for _ in 0..25 {
                let g = Isotopism::random(q.order(), &mut rng);
                assert_eq!(fingerprint(&q.apply(&g).unwrap()), fp);
            }
        }
    }

    #[test]
    fn mirror_swaps_the_two_profile_families() {
        for q in [
            fixtures::cyclic(4),
            fixtures::klein4(),
            fixtures::order7_chiral(),
        ] {
            let fp = fingerprint(&q);
            let fm = fingerprint(&q.mirror());
            assert_eq!(fm.rows, fp.cols);
            assert_eq!(fm.cols, fp.rows);
        }
    }

    #[test]
    fn certificate_separates_the_chiral_example_but_not_group_tables() {
        assert!(mirror_invariant_separates(&fixtures::order7_chiral()));
        // Commutative squares equal their mirror, so the profiles agree.
        for q in [fixtures::cyclic(4), fixtures::cyclic(5), fixtures::klein4()] {
            assert!(!mirror_invariant_separates(&q));
        }
    }
}
