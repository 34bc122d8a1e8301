//! Per-system data built once and shared: representation, grading, cone
//! ideal, exp section and the embedding of the predecessor.

use std::sync::OnceLock;

use crate::error::Result;
use crate::gpideal::{cone_ideal, ConeIdeal, ExpSection};
use crate::minrep::{build_minuscule_rep, grading_split, restrict_to_predecessor, Grading, MinusculeRep, PredecessorEmbedding};
use crate::rootsys::{build_root_system, RootSystemId};

#[derive(Debug)]
pub struct Atlas {
    pub rep: MinusculeRep,
    pub grading: Grading,
    pub ideal: ConeIdeal,
    pub exp: ExpSection,
    /// `V' -> V1`; absent for A4.
    pub embedding: Option<PredecessorEmbedding>,
}

impl Atlas {
    pub fn build(id: RootSystemId) -> Result<Atlas> {
        let rep = build_minuscule_rep(&build_root_system(id));
        let grading = grading_split(&rep);
        let ideal = cone_ideal(&rep)?;
        let exp = ExpSection::new(&rep, &grading, &ideal)?;
        let embedding = match id.predecessor() {
            Some(p) => Some(restrict_to_predecessor(&rep, &grading, &get(p)?.rep)?),
            None => None,
        };
        Ok(Atlas {
            rep,
            grading,
            ideal,
            exp,
            embedding,
        })
    }

    pub fn id(&self) -> RootSystemId {
        self.rep.rs.id
    }
}

static CACHE: [OnceLock<Atlas>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// Cached atlas for `id`.
pub fn get(id: RootSystemId) -> Result<&'static Atlas> {
    let slot = &CACHE[id.rank() - 4];
    if let Some(a) = slot.get() {
        return Ok(a);
    }
    let built = Atlas::build(id)?;
    Ok(slot.get_or_init(|| built))
}
