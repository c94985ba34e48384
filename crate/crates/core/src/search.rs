//! Complete isotopism search, small-order enumeration, and isotopy
//! classification.
//!
//! The search decides whether some isotopism carries `Q` onto `R` by
//! exhausting a tree that is complete but heavily restricted:
//!
//! * intercalate profiles must match: row `x` of `Q` can only map to a row
//!   of `R` with the same per-cell intercalate count profile, and likewise
//!   for columns, so candidate images are pre-filtered by an isotopy
//!   invariant (and two squares whose profile multisets differ are rejected
//!   before any branching);
//! * only `alpha(0)` and the whole of `beta` are ever branched on. Once
//!   those are fixed, row 0 forces `gamma` (via
//!   `gamma(Q[0][y]) = R[alpha(0)][beta(y)]`), and then column `beta(0)`
//!   forces `alpha` cell by cell, so each leaf costs one `O(n²)`
//!   verification and yields at most one isotopism.
//!
//! Exploration visits candidates in ascending order everywhere, so results
//! (including the first witness found) are deterministic functions of the
//! inputs. The worst case is `n · n!` leaves, comfortable for the orders
//! this crate targets.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::intercalates;
use crate::isotopism::Isotopism;
use crate::parastrophe::ParastropheId;
use crate::perm::Perm;
use crate::square::LatinSquare;

/// Outcome of a decision search for one isotopism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopismSearchReport {
    /// Whether any isotopism carries the source onto the target.
    pub found: bool,
    /// The lexicographically first witness (by `(alpha, beta)` images), if any.
    pub witness: Option<Isotopism>,
    /// Candidate assignments tried (row-0 image choices plus column image
    /// choices, leaves included).
    pub nodes_explored: u64,
    /// Whether the intercalate profiles eliminated any candidate, i.e. the
    /// invariant narrowed the tree below the trivial `n · n!` shape.
    pub pruned_by_invariant: bool,
}

/// Per-line (row or column) intercalate count profiles, index-aligned with
/// the square's rows/columns; each profile is sorted internally.
fn line_profiles(q: &LatinSquare) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let m = intercalates::cell_counts(q);
    let n = m.order();
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| (0..n).map(|c| m.get(r, c)).collect())
        .collect();
    let mut cols: Vec<Vec<u32>> = (0..n)
        .map(|c| (0..n).map(|r| m.get(r, c)).collect())
        .collect();
    for p in rows.iter_mut().chain(cols.iter_mut()) {
        p.sort_unstable();
    }
    (rows, cols)
}

struct SearchState<'a> {
    q: &'a LatinSquare,
    r: &'a LatinSquare,
    n: usize,
    /// Candidate images for `beta(y)`, per column `y`, ascending.
    col_candidates: Vec<Vec<u8>>,
    /// `col_pos[c * n + s]` = the row `u` of `R` with `R[u][c] = s`.
    col_pos: Vec<u8>,
    beta: Vec<u8>,
    used: Vec<bool>,
    witnesses: Vec<Isotopism>,
    nodes: u64,
    collect_all: bool,
    done: bool,
}

impl SearchState<'_> {
    fn dfs(&mut self, y: usize, u0: usize) {
        if y == self.n {
            self.check_leaf(u0);
            return;
        }
        for i in 0..self.col_candidates[y].len() {
            let v = self.col_candidates[y][i] as usize;
            if self.used[v] {
                continue;
            }
            self.nodes += 1;
            self.used[v] = true;
            self.beta[y] = v as u8;
            self.dfs(y + 1, u0);
            self.used[v] = false;
            if self.done {
                return;
            }
        }
    }

    /// `beta` is complete; derive the forced `gamma` and `alpha` and verify.
    fn check_leaf(&mut self, u0: usize) {
        let n = self.n;
        let (q, r) = (self.q, self.r);
        let mut gamma = vec![0u8; n];
        for y in 0..n {
            // Row 0 of q covers every symbol, so gamma is fully determined.
            gamma[q.get(0, y)] = r.get(u0, self.beta[y] as usize) as u8;
        }
        let mut alpha = vec![0u8; n];
        alpha[0] = u0 as u8;
        let b0 = self.beta[0] as usize;
        for x in 1..n {
            // Column beta(0) of r pins down the image of row x.
            let s = gamma[q.get(x, 0)] as usize;
            let u = self.col_pos[b0 * n + s] as usize;
            for y in 1..n {
                if r.get(u, self.beta[y] as usize) != gamma[q.get(x, y)] as usize {
                    return;
                }
            }
            alpha[x] = u as u8;
        }
        let g = Isotopism::new(
            Perm::from_images(alpha).expect("forced row images are distinct"),
            Perm::from_images(self.beta.clone()).expect("beta is built injective"),
            Perm::from_images(gamma).expect("symbol images of one row are distinct"),
        )
        .expect("components share the square's order");
        debug_assert_eq!(q.apply(&g).as_ref(), Ok(r));
        self.witnesses.push(g);
        if !self.collect_all {
            self.done = true;
        }
    }
}

/// Shared engine: returns (witnesses in exploration order, nodes, pruned).
fn run_search(
    q: &LatinSquare,
    r: &LatinSquare,
    collect_all: bool,
) -> Result<(Vec<Isotopism>, u64, bool), Error> {
    let n = q.order();
    if r.order() != n {
        return Err(Error::OrderMismatch {
            left: n,
            right: r.order(),
        });
    }
    let (q_rows, q_cols) = line_profiles(q);
    let (r_rows, r_cols) = line_profiles(r);

    // Whole-square filter: isotopic squares have equal profile multisets.
    let multiset = |v: &[Vec<u32>]| {
        let mut m = v.to_vec();
        m.sort_unstable();
        m
    };
    if multiset(&q_rows) != multiset(&r_rows) || multiset(&q_cols) != multiset(&r_cols) {
        return Ok((Vec::new(), 0, true));
    }

    let row0_candidates: Vec<u8> = (0..n)
        .filter(|&u| r_rows[u] == q_rows[0])
        .map(|u| u as u8)
        .collect();
    let col_candidates: Vec<Vec<u8>> = (0..n)
        .map(|y| {
            (0..n)
                .filter(|&v| r_cols[v] == q_cols[y])
                .map(|v| v as u8)
                .collect()
        })
        .collect();
    let pruned = row0_candidates.len() < n || col_candidates.iter().any(|c: &Vec<u8>| c.len() < n);

    let mut col_pos = vec![0u8; n * n];
    for u in 0..n {
        for c in 0..n {
            col_pos[c * n + r.get(u, c)] = u as u8;
        }
    }

    let mut st = SearchState {
        q,
        r,
        n,
        col_candidates,
        col_pos,
        beta: vec![0u8; n],
        used: vec![false; n],
        witnesses: Vec::new(),
        nodes: 0,
        collect_all,
        done: false,
    };
    for &cand in &row0_candidates {
        st.nodes += 1;
        st.dfs(0, cand as usize);
        if st.done {
            break;
        }
    }
    Ok((st.witnesses, st.nodes, pruned))
}

/// Decides whether any isotopism `g` satisfies
/// `R[alpha(x)][beta(y)] = gamma(Q[x][y])`, i.e. `q.apply(&g) == r`.
///
/// The search is complete: `found == false` proves no such isotopism exists.
pub fn find_isotopism(q: &LatinSquare, r: &LatinSquare) -> Result<IsotopismSearchReport, Error> {
    let (witnesses, nodes_explored, pruned_by_invariant) = run_search(q, r, false)?;
    let witness = witnesses.into_iter().next();
    Ok(IsotopismSearchReport {
        found: witness.is_some(),
        witness,
        nodes_explored,
        pruned_by_invariant,
    })
}

/// All isotopisms from `q` to `r`, sorted by `(alpha, beta)` image tables.
///
/// The list is empty exactly when [`find_isotopism`] reports `found: false`;
/// when nonempty its length is the order of the autotopism group of `q`
/// (all witness sets are cosets of it).
pub fn enumerate_isotopisms(q: &LatinSquare, r: &LatinSquare) -> Result<Vec<Isotopism>, Error> {
    let (mut witnesses, _, _) = run_search(q, r, true)?;
    witnesses.sort_unstable();
    Ok(witnesses)
}

/// The autotopism group of `q`: all isotopisms fixing it.
pub fn autotopisms(q: &LatinSquare) -> Vec<Isotopism> {
    enumerate_isotopisms(q, q).expect("q has its own order")
}

/// All mirror isotopisms of `q`: isotopisms from `q` onto its transpose,
/// i.e. triples with `Q[beta(y)][alpha(x)] = gamma(Q[x][y])` everywhere.
pub fn mirror_isotopisms(q: &LatinSquare) -> Vec<Isotopism> {
    enumerate_isotopisms(q, &q.mirror()).expect("mirror preserves order")
}

/// Whether no isotopism at all relates `q` to its mirror.
///
/// Tries the profile certificate first (sound and cheap); only when the
/// profiles agree does it fall back to the complete search.
pub fn is_structurally_chiral(q: &LatinSquare) -> bool {
    if intercalates::mirror_invariant_separates(q) {
        return true;
    }
    !find_isotopism(q, &q.mirror())
        .expect("mirror preserves order")
        .found
}

/// For each of the six parastrophes, whether it is isotopic to `q` itself.
/// The identity entry is always `true`; the `SwapRowCol` entry is the
/// negation of [`is_structurally_chiral`].
pub fn parastrophe_class_check(q: &LatinSquare) -> BTreeMap<ParastropheId, bool> {
    ParastropheId::ALL
        .into_iter()
        .map(|p| {
            let isotopic = find_isotopism(q, &q.parastrophe(p))
                .expect("parastrophes preserve order")
                .found;
            (p, isotopic)
        })
        .collect()
}

/// Streaming enumeration of *all* Latin squares of order `n ≤ 5`, in
/// ascending row-major lexicographic order, each square produced exactly
/// once. (Order 6 already has over 800 million squares, hence the cap.)
pub fn enumerate_latin_squares(n: usize) -> Result<LatinSquareStream, Error> {
    const MAX_ENUMERABLE: usize = 5;
    if n == 0 || n > MAX_ENUMERABLE {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_ENUMERABLE,
        });
    }
    Ok(LatinSquareStream {
        n,
        cells: vec![0; n * n],
        tried: vec![-1; n * n],
        row_mask: vec![0; n],
        col_mask: vec![0; n],
        pos: 0,
        done: false,
    })
}

/// Backtracking iterator over complete Latin squares; see
/// [`enumerate_latin_squares`].
pub struct LatinSquareStream {
    n: usize,
    cells: Vec<u8>,
    /// Symbol currently placed at each cell, or -1 when the cell is clear.
    tried: Vec<i16>,
    row_mask: Vec<u32>,
    col_mask: Vec<u32>,
    pos: usize,
    done: bool,
}

impl Iterator for LatinSquareStream {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        if self.done {
            return None;
        }
        let nn = self.n * self.n;
        loop {
            if self.pos == nn {
                let sq = LatinSquare::from_cells_unchecked(self.n, self.cells.clone());
                // Resume from the last cell on the following call.
                self.pos = nn - 1;
                return Some(sq);
            }
            let (r, c) = (self.pos / self.n, self.pos % self.n);
            // Clear whatever is currently placed here, then advance it.
            if self.tried[self.pos] >= 0 {
                let bit = 1u32 << self.tried[self.pos];
                self.row_mask[r] &= !bit;
                self.col_mask[c] &= !bit;
            }
            let start = (self.tried[self.pos] + 1) as usize;
            let taken = self.row_mask[r] | self.col_mask[c];
            let mut placed = false;
            for s in start..self.n {
                if taken & (1 << s) == 0 {
                    let bit = 1u32 << s;
                    self.row_mask[r] |= bit;
                    self.col_mask[c] |= bit;
                    self.cells[self.pos] = s as u8;
                    self.tried[self.pos] = s as i16;
                    self.pos += 1;
                    placed = true;
                    break;
                }
            }
            if !placed {
                self.tried[self.pos] = -1;
                if self.pos == 0 {
                    self.done = true;
                    return None;
                }
                self.pos -= 1;
            }
        }
    }
}

/// A partition of an input list of squares into isotopy classes.
///
/// Classes are numbered by first appearance; the representative of a class
/// is its first member in input order, so the whole structure is a
/// deterministic function of the input sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    representatives: Vec<LatinSquare>,
    membership: Vec<usize>,
}

impl ClassPartition {
    /// Number of classes found.
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    /// First member of each class, in class order.
    pub fn representatives(&self) -> &[LatinSquare] {
        &self.representatives
    }

    /// Class index of each input square.
    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    /// Number of input squares in each class.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.representatives.len()];
        for &m in &self.membership {
            sizes[m] += 1;
        }
        sizes
    }
}

/// Partitions `squares` into isotopy classes by pairwise decision searches
/// against class representatives, bucketed by intercalate fingerprint so
/// only squares that could possibly be isotopic are ever compared.
pub fn isotopy_classes(squares: &[LatinSquare]) -> Result<ClassPartition, Error> {
    if let Some(first) = squares.first() {
        let n = first.order();
        for s in squares {
            if s.order() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: s.order(),
                });
            }
        }
    }
    let mut representatives: Vec<LatinSquare> = Vec::new();
    let mut membership = Vec::with_capacity(squares.len());
    // fingerprint → indices of classes having it
    let mut buckets: BTreeMap<intercalates::IntercalateFingerprint, Vec<usize>> = BTreeMap::new();
    for sq in squares {
        let fp = intercalates::fingerprint(sq);
        let bucket = buckets.entry(fp).or_default();
        let mut class = None;
        for &idx in bucket.iter() {
            if find_isotopism(sq, &representatives[idx])?.found {
                class = Some(idx);
                break;
            }
        }
        let idx = match class {
            Some(idx) => idx,
            None => {
                let idx = representatives.len();
                representatives.push(sq.clone());
                bucket.push(idx);
                idx
            }
        };
        membership.push(idx);
    }
    Ok(ClassPartition {
        representatives,
        membership,
    })
}
