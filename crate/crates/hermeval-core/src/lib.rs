//! Classification and exact evaluation of Hermitian partition functions Z_{A,D}.

pub mod error;
pub mod exactalg;
pub mod generators;
pub mod graphcore;
pub mod graphenum;
pub mod grouprep;
pub mod normalize;
pub mod oracle;
pub mod pipeline;
pub mod quadsum;
pub mod random;
pub mod selfcheck;
pub mod witness;

pub use error::{Error, Result};
pub use exactalg::{Cyclo, PhasedMagnitude, Rat};
pub use graphcore::{MultiDigraph, Pinning};
pub use grouprep::{BipartiteGroupRep, CosetRep, FiniteGroup, GroupRep, PhaseMatrix};
pub use normalize::{BipartiteTiles, TileDecomposition};
pub use oracle::{CongruentialWeights, HermitianInstance};
pub use pipeline::{
    classify, classify_congruential, eval_fast, ComponentPlan, Dichotomy, EvalPlan,
};
pub use quadsum::QuadraticForm;
pub use witness::{HardnessTag, HardnessWitness, Verdict};
