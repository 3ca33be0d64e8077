use std::fmt;

/// Which structural condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HardnessTag {
    BlockRankAtLeast2,
    TileMismatch,
    NotHadamard,
    D2Violation,
    D3Violation,
    WeightsOutsideU2omega,
    GroupConditionFails,
    SupportNotCoset,
    AffinityFails,
}

impl HardnessTag {
    pub fn name(self) -> &'static str {
        match self {
            HardnessTag::BlockRankAtLeast2 => "BlockRankAtLeast2",
            HardnessTag::TileMismatch => "TileMismatch",
            HardnessTag::NotHadamard => "NotHadamard",
            HardnessTag::D2Violation => "D2Violation",
            HardnessTag::D3Violation => "D3Violation",
            HardnessTag::WeightsOutsideU2omega => "WeightsOutsideU2omega",
            HardnessTag::GroupConditionFails => "GroupConditionFails",
            HardnessTag::SupportNotCoset => "SupportNotCoset",
            HardnessTag::AffinityFails => "AffinityFails",
        }
    }

    /// The hardness result that the failed condition triggers.
    pub fn citation(self) -> &'static str {
        match self {
            HardnessTag::BlockRankAtLeast2 => {
                "block of |A| with row rank at least 2: #P-hard by the Bulatov-Grohe dichotomy for non-negative matrices"
            }
            HardnessTag::TileMismatch => "tiles of the rank-1 block pattern are not permuted copies of one tile: #P-hard",
            HardnessTag::NotHadamard => "tile is not a complex Hadamard matrix: #P-hard",
            HardnessTag::D2Violation => "grade-0 vertex weights are not constant on tiles: #P-hard",
            HardnessTag::D3Violation => "congruential vertex weights do not factor over the tile structure: #P-hard",
            HardnessTag::WeightsOutsideU2omega => {
                "non-zero normalized vertex weight outside the 2ω-th roots of unity: not representable, #P-hard"
            }
            HardnessTag::GroupConditionFails => "rows of the Hadamard tile are not closed under entrywise product: #P-hard",
            HardnessTag::SupportNotCoset => "support of a vertex-weight matrix is not a coset of a subgroup: #P-hard",
            HardnessTag::AffinityFails => "vertex-weight exponents are not affine up to the bilinear form: #P-hard",
        }
    }
}

impl fmt::Display for HardnessTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed condition, with indices locating the failure (0-based; meaning depends on the tag).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HardnessWitness {
    pub tag: HardnessTag,
    pub location: Vec<usize>,
    pub detail: String,
}

impl HardnessWitness {
    pub fn new(
        tag: HardnessTag,
        location: Vec<usize>,
        detail: impl Into<String>,
    ) -> HardnessWitness {
        HardnessWitness {
            tag,
            location,
            detail: detail.into(),
        }
    }

    pub fn citation(&self) -> &'static str {
        self.tag.citation()
    }
}

impl fmt::Display for HardnessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag)?;
        if !self.location.is_empty() {
            let locs: Vec<String> = self.location.iter().map(|x| x.to_string()).collect();
            write!(f, " at [{}]", locs.join(","))?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Either a successful structural result or the condition that failed.
pub type Verdict<T> = std::result::Result<T, HardnessWitness>;
