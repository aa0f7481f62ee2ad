//! Controllable predecessors and attractors.
//!
//! Everything here is generic over [`GameGraph`] so the same backward
//! fixpoint runs on the plain arena and on the product games built by the
//! partial solvers. The live part of a graph is always passed as a separate
//! `alive` set; edges into dead states are ignored.

use std::collections::VecDeque;

use crate::arena::{GameArena, Player, Subgame, VertexSet};

/// A finite two-player game graph over states `0..state_count()`.
///
/// `successors` and `predecessors` must be exact transposes of each other
/// and must not report the same edge twice.
pub trait GameGraph {
    fn state_count(&self) -> usize;
    fn owner(&self, s: usize) -> Player;
    fn successors(&self, s: usize, f: impl FnMut(usize));
    fn predecessors(&self, s: usize, f: impl FnMut(usize));
}

impl GameGraph for GameArena {
    fn state_count(&self) -> usize {
        self.vertex_count()
    }

    fn owner(&self, s: usize) -> Player {
        GameArena::owner(self, s)
    }

    fn successors(&self, s: usize, f: impl FnMut(usize)) {
        GameArena::successors(self, s).iter().copied().for_each(f);
    }

    fn predecessors(&self, s: usize, f: impl FnMut(usize)) {
        GameArena::predecessors(self, s).iter().copied().for_each(f);
    }
}

/// Work done by one attractor computation, for linear-time checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AttractorStats {
    /// Predecessor edges walked.
    pub predecessor_visits: usize,
    /// Successor edges walked while initialising opponent counters.
    pub successor_visits: usize,
}

impl AttractorStats {
    pub fn edge_visits(&self) -> usize {
        self.predecessor_visits + self.successor_visits
    }
}

const UNSET: u32 = u32::MAX;

/// Backward counter-based fixpoint shared by all three attractor variants.
///
/// `positive`: targets only seed the search and join the result when they
/// can themselves reach the goal in at least one step.
/// `avoid`: states that never join the result. Edges into them still count
/// for the opponent, who may escape there.
fn backward<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
    positive: bool,
    avoid: Option<&VertexSet>,
    stats: &mut AttractorStats,
) -> VertexSet {
    let n = graph.state_count();
    let mut result = VertexSet::new(n);
    // States whose predecessors have been (or will be) explored.
    let mut goal = VertexSet::new(n);
    let mut counters = vec![UNSET; n];
    let mut queue = VecDeque::new();

    for s in target.iter() {
        if !alive.contains(s) || avoid.is_some_and(|a| a.contains(s)) {
            continue;
        }
        goal.insert(s);
        if !positive {
            result.insert(s);
        }
        queue.push_back(s);
    }

    while let Some(w) = queue.pop_front() {
        graph.predecessors(w, |s| {
            stats.predecessor_visits += 1;
            if !alive.contains(s) || result.contains(s) || avoid.is_some_and(|a| a.contains(s)) {
                return;
            }
            let joins = if graph.owner(s) == player {
                true
            } else {
                let c = &mut counters[s];
                if *c == UNSET {
                    let mut out = 0u32;
                    graph.successors(s, |t| {
                        stats.successor_visits += 1;
                        if alive.contains(t) {
                            out += 1;
                        }
                    });
                    *c = out;
                }
                *c -= 1;
                *c == 0
            };
            if joins {
                result.insert(s);
                if goal.insert(s) {
                    queue.push_back(s);
                }
            }
        });
    }
    result
}

/// Cpre_i: states where `player` can move into `u` in one step.
pub fn cpre_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    u: &VertexSet,
) -> VertexSet {
    let mut out = VertexSet::new(graph.state_count());
    for s in alive.iter() {
        let mine = graph.owner(s) == player;
        let mut some = false;
        let mut all = true;
        graph.successors(s, |t| {
            if alive.contains(t) {
                if u.contains(t) {
                    some = true;
                } else {
                    all = false;
                }
            }
        });
        if (mine && some) || (!mine && all) {
            out.insert(s);
        }
    }
    out
}

pub fn attractor_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
) -> VertexSet {
    backward(graph, alive, player, target, false, None, &mut AttractorStats::default())
}

pub fn positive_attractor_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
) -> VertexSet {
    backward(graph, alive, player, target, true, None, &mut AttractorStats::default())
}

/// States from which `player` forces a visit to `target` in at least one
/// step without ever touching `avoid`, the starting state included.
pub fn positive_safe_attractor_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
    avoid: &VertexSet,
) -> VertexSet {
    backward(
        graph,
        alive,
        player,
        target,
        true,
        Some(avoid),
        &mut AttractorStats::default(),
    )
}

pub fn cpre(g: &Subgame, player: Player, u: &VertexSet) -> VertexSet {
    cpre_in(g.arena(), g.alive(), player, u)
}

pub fn attractor(g: &Subgame, player: Player, target: &VertexSet) -> VertexSet {
    attractor_in(g.arena(), g.alive(), player, target)
}

/// [`attractor`] plus the number of edges it walked.
pub fn attractor_with_stats(
    g: &Subgame,
    player: Player,
    target: &VertexSet,
) -> (VertexSet, AttractorStats) {
    let mut stats = AttractorStats::default();
    let set = backward(g.arena(), g.alive(), player, target, false, None, &mut stats);
    (set, stats)
}

pub fn positive_attractor(g: &Subgame, player: Player, target: &VertexSet) -> VertexSet {
    positive_attractor_in(g.arena(), g.alive(), player, target)
}

pub fn positive_safe_attractor(
    g: &Subgame,
    player: Player,
    target: &VertexSet,
    avoid: &VertexSet,
) -> VertexSet {
    positive_safe_attractor_in(g.arena(), g.alive(), player, target, avoid)
}
