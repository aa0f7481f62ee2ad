//! Complete solvers for reachability, safety, Büchi and generalized Büchi
//! objectives, used as building blocks by the partial solvers.

use crate::arena::{Player, Subgame, VertexSet};
use crate::attractor::{attractor_in, GameGraph};

pub fn win_reach_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
) -> VertexSet {
    attractor_in(graph, alive, player, target)
}

pub fn win_safe_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    bad: &VertexSet,
) -> VertexSet {
    alive.difference(&attractor_in(graph, alive, player.opponent(), bad))
}

/// Büchi by repeatedly peeling off the opponent's attractor to the states
/// that cannot reach the target.
pub fn win_buchi_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
) -> VertexSet {
    let mut current = alive.clone();
    let mut target = target.intersection(alive);
    loop {
        if target.is_empty() {
            return VertexSet::new(graph.state_count());
        }
        let reach = attractor_in(graph, &current, player, &target);
        let lost = current.difference(&reach);
        if lost.is_empty() {
            return current;
        }
        let lost = attractor_in(graph, &current, player.opponent(), &lost);
        current.difference_with(&lost);
        target.difference_with(&lost);
    }
}

pub fn win_buchi_safe_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    player: Player,
    target: &VertexSet,
    bad: &VertexSet,
) -> VertexSet {
    let safe = win_safe_in(graph, alive, player, bad);
    win_buchi_in(graph, &safe, player, target)
}

/// The product of a graph with a counter over `0..k` that advances when
/// the state at the current counter's target is visited.
struct CounterProduct<'a, G> {
    graph: &'a G,
    targets: &'a [VertexSet],
}

impl<G: GameGraph> CounterProduct<'_, G> {
    fn k(&self) -> usize {
        self.targets.len()
    }

    fn next_counter(&self, s: usize, c: usize) -> usize {
        if self.targets[c].contains(s) {
            (c + 1) % self.k()
        } else {
            c
        }
    }
}

impl<G: GameGraph> GameGraph for CounterProduct<'_, G> {
    fn state_count(&self) -> usize {
        self.graph.state_count() * self.k()
    }

    fn owner(&self, state: usize) -> crate::arena::Player {
        self.graph.owner(state / self.k())
    }

    fn successors(&self, state: usize, mut f: impl FnMut(usize)) {
        let k = self.k();
        let (s, c) = (state / k, state % k);
        let c2 = self.next_counter(s, c);
        self.graph.successors(s, |t| f(t * k + c2));
    }

    fn predecessors(&self, state: usize, mut f: impl FnMut(usize)) {
        let k = self.k();
        let (t, c2) = (state / k, state % k);
        let before = (c2 + k - 1) % k;
        self.graph.predecessors(t, |s| {
            if !self.targets[c2].contains(s) {
                f(s * k + c2);
            }
            if self.targets[before].contains(s) {
                f(s * k + before);
            }
        });
    }
}

/// Player-0 winning states for GenBüchi(targets) ∩ Safe(bad).
pub fn win_genbuchi_safe_in<G: GameGraph>(
    graph: &G,
    alive: &VertexSet,
    targets: &[VertexSet],
    bad: &VertexSet,
) -> VertexSet {
    let n = graph.state_count();
    if targets.is_empty() {
        return win_safe_in(graph, alive, Player::Zero, bad);
    }
    if targets.iter().any(|t| t.is_disjoint(alive)) {
        return VertexSet::new(n);
    }
    let safe = win_safe_in(graph, alive, Player::Zero, bad);
    let k = targets.len();
    let product = CounterProduct { graph, targets };
    let mut product_alive = VertexSet::new(n * k);
    let mut accepting = VertexSet::new(n * k);
    for s in safe.iter() {
        for c in 0..k {
            product_alive.insert(s * k + c);
        }
        if targets[0].contains(s) {
            accepting.insert(s * k);
        }
    }
    let won = win_buchi_in(&product, &product_alive, Player::Zero, &accepting);
    VertexSet::from_iter(n, safe.iter().filter(|&s| won.contains(s * k)))
}

pub fn win_reach(g: &Subgame, player: Player, target: &VertexSet) -> VertexSet {
    win_reach_in(g.arena(), g.alive(), player, target)
}

pub fn win_safe(g: &Subgame, player: Player, bad: &VertexSet) -> VertexSet {
    win_safe_in(g.arena(), g.alive(), player, bad)
}

pub fn win_buchi(g: &Subgame, player: Player, target: &VertexSet) -> VertexSet {
    win_buchi_in(g.arena(), g.alive(), player, target)
}

pub fn win_buchi_safe(g: &Subgame, player: Player, target: &VertexSet, bad: &VertexSet) -> VertexSet {
    win_buchi_safe_in(g.arena(), g.alive(), player, target, bad)
}

pub fn win_genbuchi_safe(g: &Subgame, targets: &[VertexSet], bad: &VertexSet) -> VertexSet {
    win_genbuchi_safe_in(g.arena(), g.alive(), targets, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;

    const P0: Player = Player::Zero;
    const P1: Player = Player::One;

    #[test]
    fn reach_and_safe_examples() {
        let (arena, _) = g1();
        let g = Subgame::full(&arena);
        assert_eq!(win_reach(&g, P1, &set(3, &[0])).to_vec(), vec![0, 1]);
        assert!(win_reach(&g, P1, &set(3, &[])).is_empty());
        assert_eq!(&win_reach(&g, P1, g.alive()), g.alive());
        assert_eq!(win_safe(&g, P0, &set(3, &[1])).to_vec(), vec![2]);
        assert_eq!(&win_safe(&g, P0, &set(3, &[])), g.alive());
        assert!(win_safe(&g, P0, g.alive()).is_empty());
    }

    #[test]
    fn buchi_examples() {
        let (arena, _) = g1();
        let g = Subgame::full(&arena);
        assert_eq!(win_buchi(&g, P0, &set(3, &[2])).to_vec(), vec![2]);
        assert!(win_buchi(&g, P0, &set(3, &[0])).is_empty());
        assert!(win_buchi(&g, P0, &set(3, &[])).is_empty());
    }

    #[test]
    fn buchi_safe_examples() {
        let (arena, _) = g1();
        let g = Subgame::full(&arena);
        assert_eq!(
            win_buchi_safe(&g, P0, &set(3, &[2]), &set(3, &[1])).to_vec(),
            vec![2]
        );
        assert!(win_buchi_safe(&g, P1, &set(3, &[1]), &set(3, &[0])).is_empty());
        assert_eq!(
            win_buchi_safe(&g, P0, &set(3, &[0, 2]), &set(3, &[])),
            win_buchi(&g, P0, &set(3, &[0, 2]))
        );
    }

    #[test]
    fn genbuchi_examples() {
        let (arena, _) = gg1();
        let g = Subgame::full(&arena);
        let targets = [set(2, &[1]), set(2, &[0, 1])];
        assert_eq!(
            win_genbuchi_safe(&g, &targets, &set(2, &[])).to_vec(),
            vec![0, 1]
        );
        let targets = [set(2, &[1]), set(2, &[])];
        assert!(win_genbuchi_safe(&g, &targets, &set(2, &[])).is_empty());
    }

    #[test]
    fn genbuchi_needs_every_target() {
        // Player 0 at 0 chooses between loops through 1 or through 2, but
        // each loop sees one target only unless it alternates.
        let arena = crate::arena::GameArena::new(
            vec![P0, P0, P0],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        let g = Subgame::full(&arena);
        let targets = [set(3, &[1]), set(3, &[2])];
        assert_eq!(win_genbuchi_safe(&g, &targets, &set(3, &[])).to_vec(), vec![0, 1, 2]);

        // Now vertex 0 belongs to player 1, who can always avoid one target.
        let arena = crate::arena::GameArena::new(
            vec![P1, P0, P0],
            vec![vec![1, 2], vec![0], vec![0]],
        )
        .unwrap();
        let g = Subgame::full(&arena);
        assert!(win_genbuchi_safe(&g, &targets, &set(3, &[])).is_empty());
    }
}
