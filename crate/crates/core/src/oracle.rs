//! Brute-force ground truth for tiny games and the seeded random-game
//! generator behind the property suites.
//!
//! The oracles share nothing with the solvers beyond the arena itself:
//! they enumerate memoryless strategies of one player and inspect the
//! cycles the other player can close in the resulting one-player graph.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::{GameArena, Player, PriorityProfile, Subgame, VertexSet};
use crate::recursive::SolveResult;

/// Default cap on the number of strategies an oracle may enumerate.
pub const STRATEGY_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vertices} alive vertices exceed the oracle limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("{strategies} strategies exceed the budget of {budget}")]
    BudgetExceeded { strategies: u64, budget: u64 },
}

/// The alive part of a game renumbered densely, with bitmask adjacency.
struct Local {
    vertices: Vec<usize>,
    owners: Vec<Player>,
    /// Alive successors as local indices.
    succ: Vec<Vec<usize>>,
}

impl Local {
    fn new(g: &Subgame, limit: usize) -> Result<Self, OracleError> {
        let vertices = g.alive().to_vec();
        if vertices.len() > limit {
            return Err(OracleError::TooLarge {
                vertices: vertices.len(),
                limit,
            });
        }
        let index = |v: usize| vertices.binary_search(&v).expect("alive successor");
        let owners = vertices.iter().map(|&v| g.arena().owner(v)).collect();
        let succ = vertices
            .iter()
            .map(|&v| g.alive_successors(v).map(index).collect())
            .collect();
        Ok(Self {
            vertices,
            owners,
            succ,
        })
    }

    fn len(&self) -> usize {
        self.vertices.len()
    }

    /// The vertices of `player` and how many strategies they have in total.
    fn strategy_space(&self, player: Player, budget: u64) -> Result<Vec<usize>, OracleError> {
        let choosers: Vec<usize> = (0..self.len())
            .filter(|&v| self.owners[v] == player)
            .collect();
        let mut count: u64 = 1;
        for &v in &choosers {
            count = count.saturating_mul(self.succ[v].len() as u64);
            if count > budget {
                return Err(OracleError::BudgetExceeded {
                    strategies: count,
                    budget,
                });
            }
        }
        Ok(choosers)
    }

    /// Calls `f` with the adjacency masks of every graph obtained by fixing
    /// one successor per vertex of `choosers`.
    fn for_each_strategy(&self, choosers: &[usize], mut f: impl FnMut(&[u64])) {
        let mut adjacency: Vec<u64> = self
            .succ
            .iter()
            .map(|s| s.iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        let mut choice = vec![0usize; choosers.len()];
        loop {
            for (slot, &v) in choosers.iter().enumerate() {
                adjacency[v] = 1 << self.succ[v][choice[slot]];
            }
            f(&adjacency);
            // Odometer increment.
            let mut slot = 0;
            loop {
                if slot == choosers.len() {
                    return;
                }
                choice[slot] += 1;
                if choice[slot] < self.succ[choosers[slot]].len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
        }
    }

    fn to_global(&self, mask: u64, universe: usize) -> VertexSet {
        VertexSet::from_iter(
            universe,
            (0..self.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i]),
        )
    }
}

/// Vertices reachable from `start` inside `within`, following `adjacency`.
fn reach(adjacency: &[u64], start: u64, within: u64) -> u64 {
    let mut seen = start & within;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adjacency[v] & within & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen
}

/// Exact regions of a parity game by enumerating player 0's memoryless
/// strategies. Uses dimension 0 of `profile`.
pub fn brute_parity(
    g: &Subgame,
    profile: &PriorityProfile,
    budget: u64,
) -> Result<SolveResult, OracleError> {
    let local = Local::new(g, 63)?;
    let n = local.len();
    let universe = g.arena().vertex_count();
    let priorities: Vec<u32> = local.vertices.iter().map(|&v| profile.priority(v, 0)).collect();
    let choosers = local.strategy_space(Player::Zero, budget)?;
    let everything = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    let mut won = 0u64;
    local.for_each_strategy(&choosers, |adjacency| {
        // An odd vertex is bad if it closes a cycle through vertices of
        // priority at most its own: that cycle has an odd maximum.
        let mut bad = 0u64;
        for u in 0..n {
            let p = priorities[u];
            if p % 2 == 0 {
                continue;
            }
            let low = (0..n)
                .filter(|&w| priorities[w] <= p)
                .fold(0u64, |m, w| m | 1 << w);
            if reach(adjacency, adjacency[u] & low, low) & (1 << u) != 0 {
                bad |= 1 << u;
            }
        }
        for v in 0..n {
            if reach(adjacency, 1 << v, everything) & bad == 0 {
                won |= 1 << v;
            }
        }
    });

    let win0 = local.to_global(won, universe);
    let win1 = g.alive().difference(&win0);
    Ok(SolveResult::complete(win0, win1))
}

/// Exact regions of a generalized parity game by enumerating player 1's
/// memoryless strategies and, for each, every vertex subset player 0 could
/// visit infinitely often.
pub fn brute_generalized(
    g: &Subgame,
    profile: &PriorityProfile,
    budget: u64,
) -> Result<SolveResult, OracleError> {
    let local = Local::new(g, 16)?;
    let n = local.len();
    let universe = g.arena().vertex_count();
    let k = profile.k();
    let vectors: Vec<Vec<u32>> = local.vertices.iter().map(|&v| profile.vector(v)).collect();
    let choosers = local.strategy_space(Player::One, budget)?;
    let everything = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    let mut won1 = 0u64;
    let mut maxima = vec![0u32; k];
    local.for_each_strategy(&choosers, |adjacency| {
        // Union of all subsets that player 0 could make the infinity set
        // of a play and that satisfy every dimension.
        let mut good = 0u64;
        for subset in 1..=everything {
            if subset & good == subset {
                continue;
            }
            if !is_cycle_set(adjacency, subset) {
                continue;
            }
            maxima.iter_mut().for_each(|m| *m = 0);
            let mut rest = subset;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                for (m, &p) in maxima.iter_mut().zip(&vectors[v]) {
                    *m = (*m).max(p);
                }
            }
            if maxima.iter().all(|m| m % 2 == 0) {
                good |= subset;
            }
        }
        for v in 0..n {
            if reach(adjacency, 1 << v, everything) & good == 0 {
                won1 |= 1 << v;
            }
        }
    });

    let win1 = local.to_global(won1, universe);
    let win0 = g.alive().difference(&win1);
    Ok(SolveResult::complete(win0, win1))
}

/// True iff `subset` is strongly connected and contains an edge, i.e. some
/// play can visit exactly these vertices infinitely often.
fn is_cycle_set(adjacency: &[u64], subset: u64) -> bool {
    let first = subset.trailing_zeros() as usize;
    // Reaching `first` again in at least one step also supplies the edge.
    if reach(adjacency, adjacency[first] & subset, subset) != subset {
        return false;
    }
    let mut rest = subset & !(1 << first);
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if reach(adjacency, 1 << v, subset) & (1 << first) == 0 {
            return false;
        }
    }
    true
}

/// A seeded random game: uniform owners, between 1 and `max_outdeg`
/// distinct successors per vertex, and priorities uniform in
/// `0..=max_priorities[ℓ]` for each dimension ℓ.
pub fn random_game(
    vertices: usize,
    max_outdeg: usize,
    max_priorities: &[u32],
    seed: u64,
) -> (GameArena, PriorityProfile) {
    assert!(vertices >= 1 && max_outdeg >= 1, "need at least one vertex and edge");
    assert!(!max_priorities.is_empty(), "need at least one dimension");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owners = Vec::with_capacity(vertices);
    let mut successors = Vec::with_capacity(vertices);
    let mut dims = vec![Vec::with_capacity(vertices); max_priorities.len()];
    for _ in 0..vertices {
        owners.push(if rng.gen::<bool>() {
            Player::One
        } else {
            Player::Zero
        });
        let degree = rng.gen_range(1..=max_outdeg.min(vertices));
        successors.push(sample(&mut rng, vertices, degree).into_vec());
        for (dim, &d) in dims.iter_mut().zip(max_priorities) {
            dim.push(rng.gen_range(0..=d));
        }
    }
    let arena = GameArena::new(owners, successors).expect("generated games are deadlock-free");
    let profile = PriorityProfile::new(dims).expect("dimensions have equal length");
    (arena, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;

    #[test]
    fn parity_examples() {
        let (arena, profile) = g1();
        let r = brute_parity(&Subgame::full(&arena), &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(r.win0.to_vec(), vec![0, 1, 2]);

        let (arena, profile) = g2();
        let r = brute_parity(&Subgame::full(&arena), &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(r.win1.to_vec(), vec![0]);
    }

    #[test]
    fn generalized_examples() {
        let (arena, profile) = gg1();
        let r = brute_generalized(&Subgame::full(&arena), &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(r.win0.to_vec(), vec![0, 1]);

        let (arena, profile) = gg2();
        let r = brute_generalized(&Subgame::full(&arena), &profile, STRATEGY_BUDGET).unwrap();
        assert_eq!(r.win1.to_vec(), vec![0]);
    }

    #[test]
    fn cycle_sets() {
        // 0 -> 1 -> 0, 2 -> 2, 3 -> 0.
        let adjacency = [0b0010, 0b0001, 0b0100, 0b0001];
        assert!(is_cycle_set(&adjacency, 0b0011));
        assert!(is_cycle_set(&adjacency, 0b0100));
        assert!(!is_cycle_set(&adjacency, 0b0001));
        assert!(!is_cycle_set(&adjacency, 0b1001));
        assert!(!is_cycle_set(&adjacency, 0b0111));
    }

    #[test]
    fn budget_is_enforced() {
        let arena = GameArena::new(
            vec![Player::Zero, Player::Zero],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let profile = PriorityProfile::parity(vec![0, 1]);
        assert_eq!(
            brute_parity(&Subgame::full(&arena), &profile, 3),
            Err(OracleError::BudgetExceeded {
                strategies: 4,
                budget: 3
            })
        );
        assert!(brute_parity(&Subgame::full(&arena), &profile, 4).is_ok());
        let (arena, profile) = random_game(20, 2, &[3], 7);
        assert!(matches!(
            brute_generalized(&Subgame::full(&arena), &profile, STRATEGY_BUDGET),
            Err(OracleError::TooLarge { .. })
        ));
    }

    #[test]
    fn generator_is_deterministic() {
        let (a, p) = random_game(10, 3, &[4, 2], 42);
        let (b, q) = random_game(10, 3, &[4, 2], 42);
        assert_eq!(p, q);
        for v in a.vertices() {
            assert_eq!(a.owner(v), b.owner(v));
            assert_eq!(a.successors(v), b.successors(v));
        }
        let (single, _) = random_game(1, 1, &[0], 0);
        assert_eq!(single.successors(0), &[0]);
    }
}
