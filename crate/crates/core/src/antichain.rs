//! Antichains over vertex × priority-memory pairs, and the symbolic
//! good-episode fixpoint for player 0 built on them.
//!
//! Memories are compared per dimension by an order in which larger even
//! values sit below smaller even ones, every even value sits below every
//! odd one, and odd values grow upwards: for maximum 4 the chain reads
//! `4 ≺ 2 ≺ 0 ≺ 1 ≺ 3`. Vectors are compared componentwise and pairs at
//! different vertices are never comparable. A set closed downwards under
//! this order is stored as the antichain of its maximal elements.

use crate::arena::{Player, PriorityProfile, Subgame, VertexId, VertexSet};

/// A memory vector: the maximum priority seen so far in each dimension.
pub type Memory = Vec<u32>;

/// `a ⪯ b` in a single dimension.
pub fn leq_dim(a: u32, b: u32) -> bool {
    match (a % 2 == 0, b % 2 == 0) {
        (true, true) => a >= b,
        (false, false) => a <= b,
        (true, false) => true,
        (false, true) => false,
    }
}

/// `a ⪯ b` componentwise.
pub fn leq(a: &[u32], b: &[u32]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(&x, &y)| leq_dim(x, y))
}

/// `(v, a) ⪯ (w, b)`: same vertex and `a ⪯ b`.
pub fn leq_at(v: VertexId, a: &[u32], w: VertexId, b: &[u32]) -> bool {
    v == w && leq(a, b)
}

/// Greatest lower bound in a single dimension.
pub fn meet_dim(a: u32, b: u32) -> u32 {
    match (a % 2 == 0, b % 2 == 0) {
        (true, true) => a.max(b),
        (false, false) => a.min(b),
        (true, false) => a,
        (false, true) => b,
    }
}

pub fn meet(a: &[u32], b: &[u32]) -> Memory {
    a.iter().zip(b).map(|(&x, &y)| meet_dim(x, y)).collect()
}

/// Memory after leaving a vertex of priority `p`.
pub fn up(m: u32, p: u32) -> u32 {
    m.max(p)
}

/// The largest memory `m` with `up(m, p) ⪯ target`, where memories range
/// over `0..=max`. `None` when no such memory exists.
pub fn down(target: u32, p: u32, max: u32) -> Option<u32> {
    if p % 2 == 0 {
        if p < target {
            Some(target)
        } else {
            Some(p.saturating_sub(1))
        }
    } else if p <= target {
        Some(target)
    } else if p == max {
        None
    } else {
        Some(p + 1)
    }
}

/// Componentwise [`down`]; `None` as soon as one dimension is undefined.
pub fn down_vec(target: &[u32], priorities: &[u32], maxima: &[u32]) -> Option<Memory> {
    target
        .iter()
        .zip(priorities)
        .zip(maxima)
        .map(|((&t, &p), &d)| down(t, p, d))
        .collect()
}

/// Maximal elements of a downward-closed subset of vertex × memory,
/// grouped by vertex. Each group is kept sorted so equal sets compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Antichain {
    groups: Vec<Vec<Memory>>,
}

impl Antichain {
    pub fn new(universe: usize) -> Self {
        Self {
            groups: vec![Vec::new(); universe],
        }
    }

    pub fn universe(&self) -> usize {
        self.groups.len()
    }

    /// The stored maximal memories at `v`.
    pub fn at(&self, v: VertexId) -> &[Memory] {
        &self.groups[v]
    }

    pub fn is_empty(&self) -> bool {
        self.groups.iter().all(Vec::is_empty)
    }

    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Memory)> + '_ {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(v, g)| g.iter().map(move |m| (v, m)))
    }

    /// Vertices with at least one stored memory.
    pub fn support(&self) -> VertexSet {
        VertexSet::from_iter(
            self.universe(),
            (0..self.universe()).filter(|&v| !self.groups[v].is_empty()),
        )
    }

    /// Adds `(v, m)` unless it is already represented; drops the elements
    /// it dominates. Returns true if the represented set grew.
    pub fn insert(&mut self, v: VertexId, m: Memory) -> bool {
        let group = &mut self.groups[v];
        if group.iter().any(|x| leq(&m, x)) {
            return false;
        }
        group.retain(|x| !leq(x, &m));
        let at = group
            .binary_search_by(|x| x.as_slice().cmp(m.as_slice()))
            .unwrap_or_else(|i| i);
        group.insert(at, m);
        true
    }

    /// True iff `(v, m)` lies in the represented closed set.
    pub fn member(&self, v: VertexId, m: &[u32]) -> bool {
        self.groups[v].iter().any(|x| leq(m, x))
    }

    /// Antichain of the union of the represented sets.
    pub fn union(&self, other: &Antichain) -> Antichain {
        let mut out = self.clone();
        for (v, m) in other.iter() {
            out.insert(v, m.clone());
        }
        out
    }

    /// Antichain of the intersection of the represented sets.
    pub fn meet(&self, other: &Antichain) -> Antichain {
        let mut out = Antichain::new(self.universe());
        for v in 0..self.universe() {
            for a in &self.groups[v] {
                for b in &other.groups[v] {
                    out.insert(v, meet(a, b));
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for Antichain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Maximal elements of `set` taken as a list of memories.
fn maximal(mut set: Vec<Memory>) -> Vec<Memory> {
    set.sort_unstable_by(|a, b| a.cmp(b));
    set.dedup();
    let keep: Vec<bool> = set
        .iter()
        .map(|m| !set.iter().any(|x| x != m && leq(m, x)))
        .collect();
    set.into_iter()
        .zip(keep)
        .filter_map(|(m, k)| k.then_some(m))
        .collect()
}

/// The product game `G × M₁ × … × M_k` seen through its order structure:
/// only the data needed to run controllable predecessors on antichains.
pub struct SymbolicProduct<'a, 'g> {
    g: &'a Subgame<'g>,
    profile: &'a PriorityProfile,
}

impl<'a, 'g> SymbolicProduct<'a, 'g> {
    pub fn new(g: &'a Subgame<'g>, profile: &'a PriorityProfile) -> Self {
        Self { g, profile }
    }

    /// Per-successor factor for `v`: the maximal memories at `v` from which
    /// moving to `w` lands inside the set represented by `a`.
    fn down_set(&self, a: &Antichain, v: VertexId, w: VertexId) -> Vec<Memory> {
        let priorities = self.profile.vector(v);
        let downs = a
            .at(w)
            .iter()
            .filter_map(|m| down_vec(m, &priorities, self.profile.maxima()))
            .collect();
        maximal(downs)
    }

    /// Antichain of player 0's controllable predecessors of `↓a`.
    pub fn cpre0(&self, a: &Antichain) -> Antichain {
        let arena = self.g.arena();
        let mut out = Antichain::new(a.universe());
        let mut candidates = self.g.empty_set();
        for w in a.support().iter() {
            if self.g.contains(w) {
                for v in self.g.alive_predecessors(w) {
                    candidates.insert(v);
                }
            }
        }
        for v in candidates.iter() {
            if arena.owner(v) == Player::Zero {
                for w in self.g.alive_successors(v) {
                    for m in self.down_set(a, v, w) {
                        out.insert(v, m);
                    }
                }
            } else {
                let mut product: Option<Vec<Memory>> = None;
                for w in self.g.alive_successors(v) {
                    let factor = self.down_set(a, v, w);
                    let next = match product {
                        None => factor,
                        Some(acc) => {
                            let mut meets = Vec::with_capacity(acc.len() * factor.len());
                            for x in &acc {
                                for y in &factor {
                                    meets.push(meet(x, y));
                                }
                            }
                            maximal(meets)
                        }
                    };
                    let empty = next.is_empty();
                    product = Some(next);
                    if empty {
                        break;
                    }
                }
                for m in product.unwrap_or_default() {
                    out.insert(v, m);
                }
            }
        }
        out
    }

    /// Positive attractor of player 0 towards `↓target`, on antichains.
    pub fn positive_attractor0(&self, target: &Antichain) -> Antichain {
        let mut x = self.cpre0(target);
        loop {
            let next = x.union(&self.cpre0(&x.union(target)));
            if next == x {
                return x;
            }
            x = next;
        }
    }
}

/// Player 0's good-episode set on a generalized parity game, computed
/// symbolically. Equals the explicit product computation.
pub fn antichain_good_ep0(g: &Subgame, profile: &PriorityProfile) -> VertexSet {
    let product = SymbolicProduct::new(g, profile);
    let zero = vec![0u32; profile.k()];
    let mut frontier = g.alive().clone();
    loop {
        let mut target = Antichain::new(g.arena().vertex_count());
        for v in frontier.iter() {
            target.insert(v, zero.clone());
        }
        let reach = product.positive_attractor0(&target);
        let next = VertexSet::from_iter(
            frontier.universe(),
            frontier
                .iter()
                .filter(|&v| reach.member(v, &profile.vector(v))),
        );
        if next == frontier {
            return frontier;
        }
        frontier = next;
    }
}
