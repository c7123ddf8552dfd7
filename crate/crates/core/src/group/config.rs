use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{FiniteTable, Group, SubgroupEmbedding};

/// Config-document form of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    Cyclic {
        order: usize,
    },
    Finite {
        table: Vec<Vec<u32>>,
        #[serde(default)]
        generators: Option<Vec<u32>>,
    },
    Bs {
        m: i64,
    },
    F2SemidirectZ2,
    AbelianInversion {
        rank: usize,
    },
    DirectProduct {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
    FreeProduct {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        Ok(match self {
            GroupSpec::Free { rank } => Group::free(*rank),
            GroupSpec::FreeAbelian { rank } => Group::free_abelian(*rank),
            GroupSpec::Cyclic { order } => {
                if *order == 0 {
                    return Err(Error::config("order", "must be positive"));
                }
                Group::cyclic(*order)
            }
            GroupSpec::Finite { table, generators } => {
                Group::finite(FiniteTable::new(table.clone())?, generators.clone())?
            }
            GroupSpec::Bs { m } => Group::baumslag_solitar(*m)?,
            GroupSpec::F2SemidirectZ2 => Group::f2_semidirect_z2(),
            GroupSpec::AbelianInversion { rank } => Group::abelian_inversion(*rank),
            GroupSpec::DirectProduct { left, right } => {
                Group::direct_product(left.build()?, right.build()?)
            }
            GroupSpec::FreeProduct { left, right } => {
                Group::free_product(left.build()?, right.build()?)
            }
        })
    }
}

/// Config-document form of a subgroup: a name and generator words in `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSpec {
    pub name: String,
    pub generators: Vec<String>,
}

impl SubgroupSpec {
    pub fn build(&self, g: &Group) -> Result<SubgroupEmbedding> {
        let gens = self
            .generators
            .iter()
            .map(|w| g.element(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgroupEmbedding::from_generators(g, &gens)?.with_name(self.name.clone()))
    }
}

/// Parses a JSON group spec.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    serde_json::from_str(text).map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}
