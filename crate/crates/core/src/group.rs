use std::fmt::Write as _;

use crate::error::TreeError;
use crate::tree::{AgentIx, DecisionTree};

pub const MAX_AGENTS: usize = 64;

/// A set of agents of one tree, stored as a bit mask over agent indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Group(u64);

impl Group {
    pub fn empty() -> Self {
        Group(0)
    }

    pub fn singleton(a: AgentIx) -> Self {
        Group(1 << a.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        Group(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Parses agent names, e.g. `["i", "j"]`.
    pub fn parse<S: AsRef<str>>(tree: &DecisionTree, names: &[S]) -> Result<Self, TreeError> {
        let mut g = Group(0);
        for n in names {
            g = g.with(tree.agent_ix(n.as_ref())?);
        }
        Ok(g)
    }

    /// Parses a comma-separated list such as `i,j`.
    pub fn parse_list(tree: &DecisionTree, list: &str) -> Result<Self, TreeError> {
        let names: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        Self::parse(tree, &names)
    }

    pub fn all(tree: &DecisionTree) -> Self {
        let n = tree.agents().len();
        if n == 64 {
            Group(u64::MAX)
        } else {
            Group((1u64 << n) - 1)
        }
    }

    pub fn with(self, a: AgentIx) -> Self {
        Group(self.0 | (1 << a.0))
    }

    pub fn contains(self, a: AgentIx) -> bool {
        self.0 & (1 << a.0) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = AgentIx> {
        (0..64).filter(move |k| self.0 & (1 << k) != 0).map(AgentIx)
    }

    /// All nonempty groups of a tree, singletons first, then by bit pattern
    /// within each size.
    pub fn nonempty_subsets(tree: &DecisionTree) -> Result<Vec<Group>, TreeError> {
        let n = tree.agents().len();
        if n > 20 {
            return Err(TreeError::TooManyAgents { max: 20, found: n });
        }
        let mut all: Vec<Group> = (1u64..(1 << n)).map(Group).collect();
        all.sort_by_key(|g| (g.len(), g.0));
        Ok(all)
    }

    pub fn display(self, tree: &DecisionTree) -> String {
        let mut s = String::from("{");
        for (k, a) in self.members().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", tree.agent_name(a));
        }
        s.push('}');
        s
    }

    pub fn names(self, tree: &DecisionTree) -> Vec<String> {
        self.members().map(|a| tree.agent_name(a).to_string()).collect()
    }
}
