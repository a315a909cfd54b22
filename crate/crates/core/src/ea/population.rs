use serde::{Deserialize, Serialize};

use crate::encoding::Genotype;

/// Ordered tuple of genotypes at one generation.
///
/// `lineage[i]` lists the indices, in the previous population handed to the
/// operator that produced this one, of the parents of member `i`. It is empty
/// for a freshly initialized population.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Population {
    pub members: Vec<Genotype>,
    pub generation: usize,
    pub lineage: Vec<Vec<usize>>,
}

impl Population {
    pub fn new(members: Vec<Genotype>, generation: usize) -> Self {
        Self {
            members,
            generation,
            lineage: Vec::new(),
        }
    }

    pub fn with_lineage(members: Vec<Genotype>, generation: usize, lineage: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(members.len(), lineage.len());
        Self {
            members,
            generation,
            lineage,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn parents_of(&self, i: usize) -> &[usize] {
        self.lineage.get(i).map_or(&[], Vec::as_slice)
    }

    /// Concatenation `self ∥ other`, as used for elitist selection pools.
    pub fn concat(&self, other: &Population) -> Population {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Population::new(members, other.generation)
    }
}
