//! Game structures: the arena both players play on, the priority functions
//! on top of it, and restriction views used by the recursive solvers.

mod format;
mod vertex_set;

use std::fmt;

use thiserror::Error;

pub use format::{
    parse_game, parse_generalized, parse_parity, parse_with, write_generalized, write_parity, GameKind,
    ParseError, ParsedGame,
};
pub use vertex_set::{Iter, VertexSet};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Zero, Player::One];

    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The player for whom `priority` is favourable: even for 0, odd for 1.
    pub fn of_priority(priority: u32) -> Player {
        if priority % 2 == 0 {
            Player::Zero
        } else {
            Player::One
        }
    }

    /// True if `priority` is an i-priority for this player.
    pub fn likes(self, priority: u32) -> bool {
        Player::of_priority(priority) == self
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("vertex {0} has no successor")]
    Deadlock(VertexId),
    #[error("vertex {vertex}: successor {successor} out of range")]
    SuccessorOutOfRange { vertex: VertexId, successor: VertexId },
    #[error("owner list has {owners} entries but successor list has {successors}")]
    LengthMismatch { owners: usize, successors: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("a priority profile needs at least one dimension")]
    NoDimension,
    #[error("dimension {dim} has {found} priorities, expected {expected}")]
    LengthMismatch {
        dim: usize,
        expected: usize,
        found: usize,
    },
}

/// Directed game graph with per-vertex owner. Immutable once built.
///
/// Successor lists are deduplicated and sorted; predecessor lists are the
/// exact transpose. Every vertex has at least one successor.
#[derive(Clone, Debug)]
pub struct GameArena {
    owners: Vec<Player>,
    succ_offsets: Vec<usize>,
    succ: Vec<VertexId>,
    pred_offsets: Vec<usize>,
    pred: Vec<VertexId>,
    names: Vec<Option<String>>,
}

impl GameArena {
    pub fn new(owners: Vec<Player>, successors: Vec<Vec<VertexId>>) -> Result<Self, ArenaError> {
        let names = vec![None; owners.len()];
        Self::with_names(owners, successors, names)
    }

    pub fn with_names(
        owners: Vec<Player>,
        successors: Vec<Vec<VertexId>>,
        mut names: Vec<Option<String>>,
    ) -> Result<Self, ArenaError> {
        let n = owners.len();
        if successors.len() != n {
            return Err(ArenaError::LengthMismatch {
                owners: n,
                successors: successors.len(),
            });
        }
        names.resize(n, None);

        let mut succ_offsets = Vec::with_capacity(n + 1);
        let mut succ = Vec::new();
        let mut in_degree = vec![0usize; n];
        succ_offsets.push(0);
        for (v, mut list) in successors.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(ArenaError::Deadlock(v));
            }
            for &w in &list {
                if w >= n {
                    return Err(ArenaError::SuccessorOutOfRange {
                        vertex: v,
                        successor: w,
                    });
                }
                in_degree[w] += 1;
            }
            succ.extend(list);
            succ_offsets.push(succ.len());
        }

        let mut pred_offsets = Vec::with_capacity(n + 1);
        pred_offsets.push(0);
        for d in &in_degree {
            pred_offsets.push(pred_offsets.last().unwrap() + d);
        }
        let mut fill = pred_offsets.clone();
        let mut pred = vec![0; succ.len()];
        for v in 0..n {
            for &w in &succ[succ_offsets[v]..succ_offsets[v + 1]] {
                pred[fill[w]] = v;
                fill[w] += 1;
            }
        }

        Ok(Self {
            owners,
            succ_offsets,
            succ,
            pred_offsets,
            pred,
            names,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.owners.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.len()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owners[v]
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[self.succ_offsets[v]..self.succ_offsets[v + 1]]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[self.pred_offsets[v]..self.pred_offsets[v + 1]]
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names[v].as_deref()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }
}

/// The priority functions α₁…α_k with their inferred maxima d₁…d_k.
///
/// Dimensions are indexed from 0. A plain parity game has `k() == 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityProfile {
    dims: Vec<Vec<u32>>,
    maxima: Vec<u32>,
}

impl PriorityProfile {
    /// `dims[ℓ][v]` is the priority of vertex `v` in dimension `ℓ`.
    pub fn new(dims: Vec<Vec<u32>>) -> Result<Self, ProfileError> {
        let first = dims.first().ok_or(ProfileError::NoDimension)?;
        let n = first.len();
        for (dim, d) in dims.iter().enumerate() {
            if d.len() != n {
                return Err(ProfileError::LengthMismatch {
                    dim,
                    expected: n,
                    found: d.len(),
                });
            }
        }
        let maxima = dims
            .iter()
            .map(|d| d.iter().copied().max().unwrap_or(0))
            .collect();
        Ok(Self { dims, maxima })
    }

    pub fn parity(priorities: Vec<u32>) -> Self {
        Self::new(vec![priorities]).expect("one dimension is always valid")
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.dims[0].len()
    }

    pub fn priority(&self, v: VertexId, dim: usize) -> u32 {
        self.dims[dim][v]
    }

    pub fn dim(&self, dim: usize) -> &[u32] {
        &self.dims[dim]
    }

    pub fn max(&self, dim: usize) -> u32 {
        self.maxima[dim]
    }

    pub fn maxima(&self) -> &[u32] {
        &self.maxima
    }

    /// The priority vector of `v` across all dimensions.
    pub fn vector(&self, v: VertexId) -> Vec<u32> {
        self.dims.iter().map(|d| d[v]).collect()
    }

    /// The one-dimensional profile made of dimension `dim` alone.
    pub fn single(&self, dim: usize) -> PriorityProfile {
        PriorityProfile::parity(self.dims[dim].clone())
    }
}

/// A restriction view `G↾alive` of an arena. Never copies the graph.
#[derive(Clone)]
pub struct Subgame<'a> {
    arena: &'a GameArena,
    alive: VertexSet,
}

impl<'a> Subgame<'a> {
    pub fn full(arena: &'a GameArena) -> Self {
        Self {
            arena,
            alive: arena.all(),
        }
    }

    /// View restricted to `alive`. Callers guarantee it has no deadlock.
    pub fn restricted(arena: &'a GameArena, alive: VertexSet) -> Self {
        let sub = Self { arena, alive };
        debug_assert!(
            sub.deadlocked_vertex().is_none(),
            "restriction has deadlocked vertex {:?}",
            sub.deadlocked_vertex()
        );
        sub
    }

    pub fn arena(&self) -> &'a GameArena {
        self.arena
    }

    pub fn alive(&self) -> &VertexSet {
        &self.alive
    }

    pub fn is_empty(&self) -> bool {
        self.alive.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.alive.contains(v)
    }

    /// `G ∖ remove`. The remainder must be deadlock-free (asserted in debug).
    pub fn subgame(&self, remove: &VertexSet) -> Subgame<'a> {
        Subgame::restricted(self.arena, self.alive.difference(remove))
    }

    /// `G↾keep` for `keep ⊆ alive`.
    pub fn restrict(&self, keep: &VertexSet) -> Subgame<'a> {
        Subgame::restricted(self.arena, self.alive.intersection(keep))
    }

    pub fn alive_successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.arena
            .successors(v)
            .iter()
            .copied()
            .filter(|&w| self.alive.contains(w))
    }

    pub fn alive_predecessors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.arena
            .predecessors(v)
            .iter()
            .copied()
            .filter(|&w| self.alive.contains(w))
    }

    /// An empty set over the arena's vertex universe.
    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.arena.vertex_count())
    }

    /// Alive vertices satisfying `pred`.
    pub fn select(&self, mut pred: impl FnMut(VertexId) -> bool) -> VertexSet {
        let mut out = self.empty_set();
        for v in self.alive.iter() {
            if pred(v) {
                out.insert(v);
            }
        }
        out
    }

    pub fn deadlocked_vertex(&self) -> Option<VertexId> {
        self.alive
            .iter()
            .find(|&v| self.alive_successors(v).next().is_none())
    }

    /// True iff `u` is an i-trap: player i cannot leave it and player 1−i
    /// can stay inside.
    pub fn is_trap(&self, u: &VertexSet, player: Player) -> bool {
        u.iter().all(|v| {
            if self.arena.owner(v) == player {
                self.alive_successors(v).all(|w| u.contains(w))
            } else {
                self.alive_successors(v).any(|w| u.contains(w))
            }
        })
    }
}

impl fmt::Debug for Subgame<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgame")
            .field("vertices", &self.arena.vertex_count())
            .field("alive", &self.alive)
            .finish()
    }
}
