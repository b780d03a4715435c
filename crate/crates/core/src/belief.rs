//! Mass functions on the two-element frame `Ω = {I, P}`.
//!
//! Subsets of the frame are addressed by bitmask: bit 0 is `I`, bit 1 is
//! `P`, so the four slots are `∅ = 0`, `{I} = 1`, `{P} = 2`, `Ω = 3`.

use core::fmt;

/// Sum-to-one tolerance for every mass function.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Components may dip below zero by this much from rounding before being
/// rejected.
const NEGATIVE_SLACK: f64 = 1e-12;

/// Conflict at or above `1 - CONFLICT_EPS` is treated as total.
pub const CONFLICT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Subset {
    Empty = 0,
    Influence = 1,
    Passive = 2,
    Frame = 3,
}

impl Subset {
    pub const ALL: [Subset; 4] = [
        Subset::Empty,
        Subset::Influence,
        Subset::Passive,
        Subset::Frame,
    ];

    #[inline]
    pub fn bits(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_bits(bits: u8) -> Subset {
        Subset::ALL[(bits & 3) as usize]
    }

    #[inline]
    pub fn cardinality(self) -> u32 {
        self.bits().count_ones()
    }

    #[inline]
    pub fn intersect(self, other: Subset) -> Subset {
        Subset::from_bits(self.bits() & other.bits())
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset::from_bits(self.bits() | other.bits())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeliefError {
    /// A mass vector with a negative component, mass on `∅`, or a sum off 1.
    InvalidMass { masses: [f64; 4] },
    /// Reliability outside `[0, 1]` (or NaN).
    InvalidReliability(f64),
    /// The two sources are fully contradictory (conflict `K ≈ 1`).
    TotalConflict { conflict: f64 },
}

impl fmt::Display for BeliefError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeliefError::InvalidMass { masses } => write!(
                f,
                "invalid mass function [∅={}, I={}, P={}, Ω={}]",
                masses[0], masses[1], masses[2], masses[3]
            ),
            BeliefError::InvalidReliability(a) => write!(f, "reliability {a} is outside [0, 1]"),
            BeliefError::TotalConflict { conflict } => {
                write!(f, "total conflict between sources (K = {conflict})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BeliefError {}

/// A basic belief assignment: a normalized mass vector with `m(∅) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassFunction {
    masses: [f64; 4],
}

impl MassFunction {
    /// Builds `m({I}) = influence`, `m({P}) = passive`, `m(Ω) = frame`.
    pub fn new(influence: f64, passive: f64, frame: f64) -> Result<Self, BeliefError> {
        Self::from_masses([0.0, influence, passive, frame])
    }

    /// Builds from a full 4-slot vector indexed by subset bitmask.
    pub fn from_masses(masses: [f64; 4]) -> Result<Self, BeliefError> {
        let invalid = || BeliefError::InvalidMass { masses };
        if masses
            .iter()
            .any(|m| !m.is_finite() || *m < -NEGATIVE_SLACK)
        {
            return Err(invalid());
        }
        if masses[0].abs() > MASS_TOLERANCE {
            return Err(invalid());
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(invalid());
        }
        let mut clean = masses;
        clean[0] = 0.0;
        for m in clean.iter_mut() {
            *m = m.max(0.0);
        }
        Ok(MassFunction { masses: clean })
    }

    /// Total ignorance, `m(Ω) = 1`.
    pub const fn vacuous() -> Self {
        MassFunction {
            masses: [0.0, 0.0, 0.0, 1.0],
        }
    }

    /// All mass on a single non-empty subset.
    pub fn categorical(subset: Subset) -> Self {
        assert!(subset != Subset::Empty, "categorical mass on the empty set");
        let mut masses = [0.0; 4];
        masses[subset as usize] = 1.0;
        MassFunction { masses }
    }

    #[inline]
    pub fn mass(&self, subset: Subset) -> f64 {
        self.masses[subset as usize]
    }

    #[inline]
    pub fn masses(&self) -> &[f64; 4] {
        &self.masses
    }

    /// `m({I})`.
    #[inline]
    pub fn influence(&self) -> f64 {
        self.masses[Subset::Influence as usize]
    }

    pub fn is_vacuous(&self) -> bool {
        self.masses[3] == 1.0
    }

    /// Belief in `subset`: the mass of every non-empty subset of it.
    pub fn belief(&self, subset: Subset) -> f64 {
        Subset::ALL[1..]
            .iter()
            .filter(|s| s.bits() & !subset.bits() == 0)
            .map(|s| self.mass(*s))
            .sum()
    }

    /// Plausibility of `subset`: the mass of every subset intersecting it.
    pub fn plausibility(&self, subset: Subset) -> f64 {
        Subset::ALL[1..]
            .iter()
            .filter(|s| s.bits() & subset.bits() != 0)
            .map(|s| self.mass(*s))
            .sum()
    }
}

impl Default for MassFunction {
    fn default() -> Self {
        Self::vacuous()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Reliability(f64);

impl Reliability {
    pub const FULL: Reliability = Reliability(1.0);
    pub const NONE: Reliability = Reliability(0.0);

    pub fn new(alpha: f64) -> Result<Self, BeliefError> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Reliability(alpha))
        } else {
            Err(BeliefError::InvalidReliability(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Dempster's rule: conjunctive combination renormalized by `1 - K`, where
/// `K` is the mass the two sources jointly put on `∅`.
pub fn combine_dempster(a: &MassFunction, b: &MassFunction) -> Result<MassFunction, BeliefError> {
    let mut joint = [0.0f64; 4];
    for (i, ma) in a.masses.iter().enumerate() {
        if *ma == 0.0 {
            continue;
        }
        for (j, mb) in b.masses.iter().enumerate() {
            joint[i & j] += ma * mb;
        }
    }
    let conflict = joint[0];
    if conflict >= 1.0 - CONFLICT_EPS {
        return Err(BeliefError::TotalConflict { conflict });
    }
    let norm = 1.0 - conflict;
    Ok(MassFunction {
        masses: [0.0, joint[1] / norm, joint[2] / norm, joint[3] / norm],
    })
}

/// Shafer discounting: `α·m(A)` on every `A ≠ Ω`, the remainder on `Ω`.
pub fn discount(m: &MassFunction, r: Reliability) -> MassFunction {
    let alpha = r.alpha();
    let [_, i, p, omega] = m.masses;
    MassFunction {
        // α·m(Ω) + (1 - α) equals 1 - α(1 - m(Ω)) and is exact at α ∈ {0, 1}
        masses: [0.0, alpha * i, alpha * p, alpha * omega + (1.0 - alpha)],
    }
}

/// Jaccard similarity `|A∩B| / |A∪B|` between focal sets, with
/// `D(∅,∅) = 1` and `D(∅,X) = 0`.
pub fn jaccard_weight(a: Subset, b: Subset) -> f64 {
    let union = a.union(b).cardinality();
    if union == 0 {
        return 1.0;
    }
    a.intersect(b).cardinality() as f64 / union as f64
}

/// Jousselme distance `sqrt(½ (a-b)ᵀ D (a-b))`, in `[0, 1]`.
pub fn jousselme_distance(a: &MassFunction, b: &MassFunction) -> f64 {
    let mut diff = [0.0f64; 4];
    for (d, (x, y)) in diff.iter_mut().zip(a.masses.iter().zip(b.masses.iter())) {
        *d = x - y;
    }
    let mut quad = 0.0;
    for (i, si) in Subset::ALL.iter().enumerate() {
        if diff[i] == 0.0 {
            continue;
        }
        for (j, sj) in Subset::ALL.iter().enumerate() {
            quad += diff[i] * jaccard_weight(*si, *sj) * diff[j];
        }
    }
    libm::sqrt((0.5 * quad).max(0.0)).min(1.0)
}
