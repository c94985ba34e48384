//! Isotopisms: independent relabelings of rows, columns, and symbols.

use std::fmt;

use crate::error::Error;
use crate::perm::{CycleType, Perm};
use crate::rng::SplitMix64;

/// A triple `(alpha, beta, gamma)` of permutations of `0..n` acting on
/// squares by relabeling rows by `alpha`, columns by `beta`, and symbols by
/// `gamma`; see [`LatinSquare::apply`](crate::LatinSquare::apply) for the
/// action convention. Isotopisms form a group under componentwise
/// composition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Isotopism {
    alpha: Perm,
    beta: Perm,
    gamma: Perm,
}

impl Isotopism {
    /// Builds an isotopism, requiring the three degrees to agree.
    pub fn new(alpha: Perm, beta: Perm, gamma: Perm) -> Result<Isotopism, Error> {
        let n = alpha.degree();
        for p in [&beta, &gamma] {
            if p.degree() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: p.degree(),
                });
            }
        }
        Ok(Isotopism { alpha, beta, gamma })
    }

    /// The identity isotopism of the given order.
    pub fn identity(n: usize) -> Isotopism {
        Isotopism {
            alpha: Perm::identity(n),
            beta: Perm::identity(n),
            gamma: Perm::identity(n),
        }
    }

    /// Three independent uniformly random permutations.
    pub fn random(n: usize, rng: &mut SplitMix64) -> Isotopism {
        Isotopism {
            alpha: Perm::random(n, rng),
            beta: Perm::random(n, rng),
            gamma: Perm::random(n, rng),
        }
    }

    /// Common degree of the three components.
    pub fn degree(&self) -> usize {
        self.alpha.degree()
    }

    /// Row relabeling.
    pub fn alpha(&self) -> &Perm {
        &self.alpha
    }

    /// Column relabeling.
    pub fn beta(&self) -> &Perm {
        &self.beta
    }

    /// Symbol relabeling.
    pub fn gamma(&self) -> &Perm {
        &self.gamma
    }

    /// Componentwise composition; acting by `other` first and then by
    /// `self` equals acting by `self.compose(other)` once.
    pub fn compose(&self, other: &Isotopism) -> Result<Isotopism, Error> {
        Ok(Isotopism {
            alpha: self.alpha.compose(&other.alpha)?,
            beta: self.beta.compose(&other.beta)?,
            gamma: self.gamma.compose(&other.gamma)?,
        })
    }

    /// Componentwise inverse.
    pub fn inverse(&self) -> Isotopism {
        Isotopism {
            alpha: self.alpha.inverse(),
            beta: self.beta.inverse(),
            gamma: self.gamma.inverse(),
        }
    }

    /// The mirror twist `(alpha, beta, gamma) ↦ (beta, alpha, gamma)`.
    ///
    /// Transposition intertwines the group action through this twist:
    /// `apply(g, Q).mirror() == apply(g.mirror_twist(), Q.mirror())`, which
    /// is what lets one search relate a square and its transpose.
    pub fn mirror_twist(&self) -> Isotopism {
        Isotopism {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            gamma: self.gamma.clone(),
        }
    }

    /// Cycle types of the three components.
    ///
    /// This is exactly the conjugacy-class data of the isotopism inside the
    /// group of triples, so any quantity computed from it is invariant under
    /// relabeling `g ↦ h g h⁻¹`.
    pub fn cycle_type_triple(&self) -> CycleTypeTriple {
        CycleTypeTriple {
            alpha: self.alpha.cycle_type(),
            beta: self.beta.cycle_type(),
            gamma: self.gamma.cycle_type(),
        }
    }
}

impl fmt::Display for Isotopism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// The three component cycle types of an isotopism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleTypeTriple {
    pub alpha: CycleType,
    pub beta: CycleType,
    pub gamma: CycleType,
}

impl fmt::Display for CycleTypeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}
