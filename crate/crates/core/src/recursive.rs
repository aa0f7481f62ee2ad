//! Zielonka's recursive algorithm, its generalized-parity counterpart, and
//! their combination with a partial solver run at every recursion level.
//!
//! Both engines keep their recursion on an explicit stack so deep games
//! cannot overflow the native stack, and both poll a [`CancelToken`]
//! whenever they enter a new subgame.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::arena::{GameArena, Player, PriorityProfile, Subgame, VertexId, VertexSet};
use crate::attractor::attractor;

/// Winning regions of both players plus the part left open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub win0: VertexSet,
    pub win1: VertexSet,
    pub unsolved: VertexSet,
}

impl SolveResult {
    pub fn empty(universe: usize) -> Self {
        Self {
            win0: VertexSet::new(universe),
            win1: VertexSet::new(universe),
            unsolved: VertexSet::new(universe),
        }
    }

    /// Nothing solved: every alive vertex is left open.
    pub fn unsolved(g: &Subgame) -> Self {
        Self {
            win0: g.empty_set(),
            win1: g.empty_set(),
            unsolved: g.alive().clone(),
        }
    }

    /// A result for a complete solver, from the two regions.
    pub fn complete(win0: VertexSet, win1: VertexSet) -> Self {
        let unsolved = VertexSet::new(win0.universe());
        Self {
            win0,
            win1,
            unsolved,
        }
    }

    pub fn region(&self, player: Player) -> &VertexSet {
        match player {
            Player::Zero => &self.win0,
            Player::One => &self.win1,
        }
    }

    pub fn region_mut(&mut self, player: Player) -> &mut VertexSet {
        match player {
            Player::Zero => &mut self.win0,
            Player::One => &mut self.win1,
        }
    }

    /// `win0 ∪ win1`.
    pub fn solved(&self) -> VertexSet {
        self.win0.union(&self.win1)
    }

    pub fn is_complete(&self) -> bool {
        self.unsolved.is_empty()
    }
}

/// A polynomial procedure returning sound, possibly incomplete regions.
///
/// Implementations must leave an `unsolved` part that induces a subgame and
/// satisfies the escape condition checked by [`escape_violation`].
pub trait PartialSolver: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult;
}

/// Solves nothing. Combining it with the recursive engines gives the plain
/// recursive algorithms.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialSolver;

impl PartialSolver for TrivialSolver {
    fn name(&self) -> &str {
        "none"
    }

    fn solve(&self, g: &Subgame, _profile: &PriorityProfile) -> SolveResult {
        SolveResult::unsolved(g)
    }
}

/// Cooperative cancellation flag shared between a runner and its solvers.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("solver cancelled")]
    Cancelled,
    #[error("recursion depth {depth} exceeds the bound {bound}")]
    DepthExceeded { depth: usize, bound: usize },
}

/// Finds an edge breaking the escape condition: from an unsolved vertex
/// owned by player i to a vertex outside the unsolved part that is not in
/// the opponent's region.
pub fn escape_violation(g: &Subgame, result: &SolveResult) -> Option<(VertexId, VertexId)> {
    let arena = g.arena();
    for v in result.unsolved.iter() {
        let opponent = result.region(arena.owner(v).opponent());
        for w in g.alive_successors(v) {
            if !result.unsolved.contains(w) && !opponent.contains(w) {
                return Some((v, w));
            }
        }
    }
    None
}

/// True iff the three parts are pairwise disjoint and cover `g`.
pub fn is_partition(g: &Subgame, result: &SolveResult) -> bool {
    let parts = [&result.win0, &result.win1, &result.unsolved];
    for (a, x) in parts.iter().enumerate() {
        for y in &parts[a + 1..] {
            if !x.is_disjoint(y) {
                return false;
            }
        }
    }
    &result.win0.union(&result.win1).union(&result.unsolved) == g.alive()
}

fn run_partial(
    sub: &Subgame,
    profile: &PriorityProfile,
    ps: &dyn PartialSolver,
) -> SolveResult {
    let result = ps.solve(sub, profile);
    if cfg!(debug_assertions) {
        assert!(
            is_partition(sub, &result),
            "partial solver {} returned regions that do not partition the subgame",
            ps.name()
        );
        if let Some((v, w)) = escape_violation(sub, &result) {
            panic!(
                "partial solver {} breaks the escape condition: unsolved vertex {v} \
                 (owner {}) has an edge to {w} outside the opponent's region",
                ps.name(),
                sub.arena().owner(v)
            );
        }
    }
    result
}

/// Output of one activation: both regions, over the arena universe.
type Regions = [VertexSet; 2];

fn max_priority(alive: &VertexSet, priorities: &[u32]) -> u32 {
    alive.iter().map(|v| priorities[v]).max().unwrap_or(0)
}

fn depth_bound(arena: &GameArena, profile: &PriorityProfile) -> usize {
    arena.vertex_count() + profile.maxima().iter().map(|&d| d as usize).sum::<usize>() + 1
}

enum ParityFrame {
    /// Waiting for the solution of `bar ∖ x`, where `x` attracts player
    /// `i` to the top priority.
    First {
        bar: VertexSet,
        z: Regions,
        i: Player,
        x: VertexSet,
    },
    /// Waiting for the solution after removing the opponent's attractor `x`.
    Second { z: Regions, i: Player, x: VertexSet },
}

/// Zielonka's algorithm with `ps` run on every subgame. Uses dimension 0
/// of `profile`.
pub fn solve_parity(
    g: &Subgame,
    profile: &PriorityProfile,
    ps: &dyn PartialSolver,
    cancel: &CancelToken,
) -> Result<SolveResult, SolveError> {
    debug_assert_eq!(profile.k(), 1, "parity engine expects one dimension");
    let arena = g.arena();
    let n = arena.vertex_count();
    let priorities = profile.dim(0);
    let bound = depth_bound(arena, profile);
    let empty = || [VertexSet::new(n), VertexSet::new(n)];

    let mut stack: Vec<ParityFrame> = Vec::new();
    let mut call = Some(g.alive().clone());
    let mut ret: Regions = empty();

    loop {
        if let Some(alive) = call.take() {
            if cancel.is_cancelled() {
                return Err(SolveError::Cancelled);
            }
            if stack.len() > bound {
                return Err(SolveError::DepthExceeded {
                    depth: stack.len(),
                    bound,
                });
            }
            if alive.is_empty() {
                ret = empty();
            } else {
                let sub = Subgame::restricted(arena, alive);
                let partial = run_partial(&sub, profile, ps);
                if cancel.is_cancelled() {
                    return Err(SolveError::Cancelled);
                }
                let z = [partial.win0, partial.win1];
                let bar = partial.unsolved;
                if bar.is_empty() {
                    ret = z;
                } else {
                    let barg = Subgame::restricted(arena, bar.clone());
                    let p = max_priority(&bar, priorities);
                    let i = Player::of_priority(p);
                    let top = barg.select(|v| priorities[v] == p);
                    let x = attractor(&barg, i, &top);
                    call = Some(bar.difference(&x));
                    stack.push(ParityFrame::First { bar, z, i, x });
                    continue;
                }
            }
        }

        match stack.pop() {
            None => return Ok(SolveResult::complete(ret[0].clone(), ret[1].clone())),
            Some(ParityFrame::First { bar, mut z, i, x }) => {
                let (me, them) = (i.index(), i.opponent().index());
                if ret[them].is_empty() {
                    z[me].union_with(&ret[me]);
                    z[me].union_with(&x);
                    ret = z;
                } else {
                    let barg = Subgame::restricted(arena, bar.clone());
                    let x = attractor(&barg, i.opponent(), &ret[them]);
                    call = Some(bar.difference(&x));
                    stack.push(ParityFrame::Second { z, i, x });
                }
            }
            Some(ParityFrame::Second { mut z, i, x }) => {
                let (me, them) = (i.index(), i.opponent().index());
                z[me].union_with(&ret[me]);
                z[them].union_with(&ret[them]);
                z[them].union_with(&x);
                ret = z;
            }
        }
    }
}

enum GenFrame {
    /// Some dimension has an odd top priority; `x` is player 1's attractor
    /// to those tops.
    OddFirst {
        bar: VertexSet,
        z: Regions,
        x: VertexSet,
    },
    OddSecond { z: Regions, x: VertexSet },
    /// All tops are even; the pending call removed player 0's attractor
    /// to the top of dimension `dim`.
    EvenTop {
        bar: VertexSet,
        z: Regions,
        tops: Vec<u32>,
        dim: usize,
    },
    EvenSecond { z: Regions, x: VertexSet },
}

fn top_attractor(
    barg: &Subgame,
    profile: &PriorityProfile,
    dim: usize,
    top: u32,
) -> VertexSet {
    let prio = profile.dim(dim);
    let target = barg.select(|v| prio[v] == top);
    attractor(barg, Player::Zero, &target)
}

/// Recursive solver for generalized parity games (player 0 must satisfy
/// every dimension), with `ps` run on every subgame.
///
/// Each level looks at the top priority of every dimension. If some top
/// is odd, player 1 attracts to those vertices and the level proceeds as in
/// Zielonka's algorithm. If all tops are even, each dimension in turn is
/// tried: removing player 0's attractor to its top must leave a subgame
/// player 0 wins entirely, or player 1's winning part there is peeled off.
/// When every dimension passes, player 0 wins the whole level by rotating
/// through the tops.
pub fn solve_generalized(
    g: &Subgame,
    profile: &PriorityProfile,
    ps: &dyn PartialSolver,
    cancel: &CancelToken,
) -> Result<SolveResult, SolveError> {
    let arena = g.arena();
    let n = arena.vertex_count();
    let k = profile.k();
    let bound = depth_bound(arena, profile);
    let empty = || [VertexSet::new(n), VertexSet::new(n)];

    let mut stack: Vec<GenFrame> = Vec::new();
    let mut call = Some(g.alive().clone());
    let mut ret: Regions = empty();

    loop {
        if let Some(alive) = call.take() {
            if cancel.is_cancelled() {
                return Err(SolveError::Cancelled);
            }
            if stack.len() > bound {
                return Err(SolveError::DepthExceeded {
                    depth: stack.len(),
                    bound,
                });
            }
            if alive.is_empty() {
                ret = empty();
            } else {
                let sub = Subgame::restricted(arena, alive);
                let partial = run_partial(&sub, profile, ps);
                if cancel.is_cancelled() {
                    return Err(SolveError::Cancelled);
                }
                let z = [partial.win0, partial.win1];
                let bar = partial.unsolved;
                if bar.is_empty() {
                    ret = z;
                } else {
                    let barg = Subgame::restricted(arena, bar.clone());
                    let tops: Vec<u32> = (0..k)
                        .map(|dim| max_priority(&bar, profile.dim(dim)))
                        .collect();
                    let odd: Vec<usize> = (0..k).filter(|&dim| tops[dim] % 2 == 1).collect();
                    if odd.is_empty() {
                        let x = top_attractor(&barg, profile, 0, tops[0]);
                        call = Some(bar.difference(&x));
                        stack.push(GenFrame::EvenTop {
                            bar,
                            z,
                            tops,
                            dim: 0,
                        });
                    } else {
                        let target = barg.select(|v| {
                            odd.iter().any(|&dim| profile.priority(v, dim) == tops[dim])
                        });
                        let x = attractor(&barg, Player::One, &target);
                        call = Some(bar.difference(&x));
                        stack.push(GenFrame::OddFirst { bar, z, x });
                    }
                    continue;
                }
            }
        }

        match stack.pop() {
            None => return Ok(SolveResult::complete(ret[0].clone(), ret[1].clone())),
            Some(GenFrame::OddFirst { bar, mut z, x }) => {
                if ret[0].is_empty() {
                    z[1].union_with(&ret[1]);
                    z[1].union_with(&x);
                    ret = z;
                } else {
                    let barg = Subgame::restricted(arena, bar.clone());
                    let x = attractor(&barg, Player::Zero, &ret[0]);
                    call = Some(bar.difference(&x));
                    stack.push(GenFrame::OddSecond { z, x });
                }
            }
            Some(GenFrame::OddSecond { mut z, x }) => {
                z[0].union_with(&ret[0]);
                z[0].union_with(&x);
                z[1].union_with(&ret[1]);
                ret = z;
            }
            Some(GenFrame::EvenTop {
                bar,
                mut z,
                tops,
                dim,
            }) => {
                let barg = Subgame::restricted(arena, bar.clone());
                if !ret[1].is_empty() {
                    let x = attractor(&barg, Player::One, &ret[1]);
                    call = Some(bar.difference(&x));
                    stack.push(GenFrame::EvenSecond { z, x });
                } else if dim + 1 < k {
                    let dim = dim + 1;
                    let x = top_attractor(&barg, profile, dim, tops[dim]);
                    if cancel.is_cancelled() {
                        return Err(SolveError::Cancelled);
                    }
                    call = Some(bar.difference(&x));
                    stack.push(GenFrame::EvenTop {
                        bar,
                        z,
                        tops,
                        dim,
                    });
                } else {
                    z[0].union_with(&bar);
                    ret = z;
                }
            }
            Some(GenFrame::EvenSecond { mut z, x }) => {
                z[0].union_with(&ret[0]);
                z[1].union_with(&ret[1]);
                z[1].union_with(&x);
                ret = z;
            }
        }
    }
}

fn uncancelled(result: Result<SolveResult, SolveError>) -> SolveResult {
    result.expect("solver without cancellation cannot fail on a deadlock-free game")
}

/// Zielonka's recursive algorithm on a parity game (`profile.k() == 1`).
pub fn zielonka(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    uncancelled(solve_parity(g, profile, &TrivialSolver, &CancelToken::new()))
}

pub fn ziel_with_psolver(
    g: &Subgame,
    profile: &PriorityProfile,
    ps: &dyn PartialSolver,
) -> SolveResult {
    uncancelled(solve_parity(g, profile, ps, &CancelToken::new()))
}

pub fn gen_zielonka(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    uncancelled(solve_generalized(g, profile, &TrivialSolver, &CancelToken::new()))
}

pub fn gen_ziel_with_psolver(
    g: &Subgame,
    profile: &PriorityProfile,
    ps: &dyn PartialSolver,
) -> SolveResult {
    uncancelled(solve_generalized(g, profile, ps, &CancelToken::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;

    /// Solves everything it is given in one step, for the early-return path.
    struct Oracle(SolveResult);

    impl PartialSolver for Oracle {
        fn name(&self) -> &str {
            "fixed"
        }

        fn solve(&self, _g: &Subgame, _profile: &PriorityProfile) -> SolveResult {
            self.0.clone()
        }
    }

    #[test]
    fn zielonka_examples() {
        let (arena, profile) = g1();
        let r = zielonka(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1, 2]);
        assert!(r.win1.is_empty() && r.unsolved.is_empty());

        let (arena, profile) = g2();
        let r = zielonka(&Subgame::full(&arena), &profile);
        assert!(r.win0.is_empty());
        assert_eq!(r.win1.to_vec(), vec![0]);
    }

    #[test]
    fn empty_subgame_gives_empty_regions() {
        let (arena, profile) = g1();
        let g = Subgame::full(&arena).subgame(&arena.all());
        assert_eq!(zielonka(&g, &profile), SolveResult::empty(3));
        assert_eq!(gen_zielonka(&g, &profile), SolveResult::empty(3));
    }

    #[test]
    fn full_partial_answer_is_returned_verbatim() {
        let (arena, profile) = g1();
        let g = Subgame::full(&arena);
        let answer = SolveResult::complete(set(3, &[0, 1, 2]), set(3, &[]));
        let r = ziel_with_psolver(&g, &profile, &Oracle(answer.clone()));
        assert_eq!(r, answer);
        let r = gen_ziel_with_psolver(&g, &profile, &Oracle(answer.clone()));
        assert_eq!(r, answer);
    }

    #[test]
    fn gen_zielonka_examples() {
        let (arena, profile) = gg1();
        let r = gen_zielonka(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1]);

        let (arena, profile) = gg2();
        let r = gen_zielonka(&Subgame::full(&arena), &profile);
        assert_eq!(r.win1.to_vec(), vec![0]);
    }

    #[test]
    fn conjunction_needs_rotation() {
        // Player 0 owns 0 and may visit 1 (good for dim 0) or 2 (good for
        // dim 1). Each alone leaves the other dimension odd; alternating wins.
        let arena = GameArena::new(
            vec![Player::Zero, Player::Zero, Player::Zero],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        let profile = PriorityProfile::new(vec![vec![0, 2, 1], vec![0, 1, 2]]).unwrap();
        let r = gen_zielonka(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1, 2]);

        // If player 1 owns the choice, one dimension always stays odd.
        let arena = GameArena::new(
            vec![Player::One, Player::Zero, Player::Zero],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        let r = gen_zielonka(&Subgame::full(&arena), &profile);
        assert_eq!(r.win1.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn cancellation_is_reported() {
        let (arena, profile) = g1();
        let cancel = CancelToken::new();
        cancel.cancel();
        let g = Subgame::full(&arena);
        assert_eq!(
            solve_parity(&g, &profile, &TrivialSolver, &cancel),
            Err(SolveError::Cancelled)
        );
        assert_eq!(
            solve_generalized(&g, &profile, &TrivialSolver, &cancel),
            Err(SolveError::Cancelled)
        );
    }

    #[test]
    fn escape_condition_detects_bad_split() {
        let (arena, _) = g1();
        let g = Subgame::full(&arena);
        // Vertex 1 (player 1) left open with a move into player 1's region.
        let bad = SolveResult {
            win0: set(3, &[]),
            win1: set(3, &[2]),
            unsolved: set(3, &[0, 1]),
        };
        assert_eq!(escape_violation(&g, &bad), Some((1, 2)));
        let good = SolveResult {
            win0: set(3, &[2]),
            win1: set(3, &[]),
            unsolved: set(3, &[0, 1]),
        };
        assert_eq!(escape_violation(&g, &good), None);
        assert!(is_partition(&g, &good));
    }
}
