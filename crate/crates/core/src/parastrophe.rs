//! The six parastrophes (conjugates) of a quasigroup.
//!
//! A Latin square of order `n` is the same data as its set of `n²` triples
//! `(row, column, symbol)`. Permuting the three roles yields up to six
//! squares, the parastrophes. The role swap `row ↔ column` is the transpose,
//! called the *mirror* throughout this crate; it is the reflection whose
//! fixed points ("achiral" squares) the search module detects.

use std::fmt;

/// One of the six role permutations of `(row, column, symbol)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParastropheId {
    /// Leave all roles in place.
    Identity,
    /// Swap row and column: the transpose / mirror.
    SwapRowCol,
    /// Swap row and symbol.
    SwapRowSym,
    /// Swap column and symbol.
    SwapColSym,
    /// Cycle row → column → symbol → row.
    CycleRcs,
    /// Cycle row → symbol → column → row.
    CycleRsc,
}

impl ParastropheId {
    /// All six, in a fixed canonical order.
    pub const ALL: [ParastropheId; 6] = [
        ParastropheId::Identity,
        ParastropheId::SwapRowCol,
        ParastropheId::SwapRowSym,
        ParastropheId::SwapColSym,
        ParastropheId::CycleRcs,
        ParastropheId::CycleRsc,
    ];

    /// Destination role of each of (row, column, symbol): the datum that
    /// played role `i` plays role `role_map()[i]` in the parastrophe.
    pub(crate) fn role_map(self) -> [usize; 3] {
        match self {
            ParastropheId::Identity => [0, 1, 2],
            ParastropheId::SwapRowCol => [1, 0, 2],
            ParastropheId::SwapRowSym => [2, 1, 0],
            ParastropheId::SwapColSym => [0, 2, 1],
            ParastropheId::CycleRcs => [1, 2, 0],
            ParastropheId::CycleRsc => [2, 0, 1],
        }
    }

    fn from_role_map(map: [usize; 3]) -> ParastropheId {
        for id in ParastropheId::ALL {
            if id.role_map() == map {
                return id;
            }
        }
        unreachable!("every role bijection is one of the six parastrophes")
    }

    /// Group law: applying `first` and then `second` equals applying
    /// `second.after(first)` at once.
    pub fn after(self, first: ParastropheId) -> ParastropheId {
        let f = first.role_map();
        let s = self.role_map();
        ParastropheId::from_role_map([s[f[0]], s[f[1]], s[f[2]]])
    }

    /// The inverse role permutation.
    pub fn inverse(self) -> ParastropheId {
        let m = self.role_map();
        let mut inv = [0usize; 3];
        for (i, &d) in m.iter().enumerate() {
            inv[d] = i;
        }
        ParastropheId::from_role_map(inv)
    }

    /// Short stable token: `id`, `rc`, `rs`, `cs`, `rcs`, `rsc`.
    pub fn token(self) -> &'static str {
        match self {
            ParastropheId::Identity => "id",
            ParastropheId::SwapRowCol => "rc",
            ParastropheId::SwapRowSym => "rs",
            ParastropheId::SwapColSym => "cs",
            ParastropheId::CycleRcs => "rcs",
            ParastropheId::CycleRsc => "rsc",
        }
    }

    /// Parses the token form accepted by [`token`](Self::token).
    pub fn from_token(s: &str) -> Option<ParastropheId> {
        ParastropheId::ALL.into_iter().find(|id| id.token() == s)
    }
}

impl fmt::Display for ParastropheId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}
