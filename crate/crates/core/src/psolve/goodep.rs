//! Good-episode partial solvers. A player wins from vertices where it can
//! force, again and again, a nonempty stretch of play whose largest priority
//! has its own parity. The stretches are tracked by pairing each vertex with
//! a memory of the largest priority seen so far.

use crate::antichain::antichain_good_ep0;
use crate::arena::{GameArena, Player, PriorityProfile, Subgame, VertexId, VertexSet};
use crate::attractor::{positive_attractor_in, GameGraph};
use crate::recursive::{CancelToken, PartialSolver, SolveResult};

use super::peel;

/// Largest explicit product, in states, built before switching to the
/// antichain computation.
pub const DEFAULT_PRODUCT_BUDGET: usize = 1 << 23;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("extended game would have {states} states, over the budget of {budget}")]
pub struct ProductTooLarge {
    pub states: u128,
    pub budget: usize,
}

/// The game `G × M₁ × … × M_k` over a chosen list of dimensions. State
/// `(v, m)` is encoded as `v · memory_size + Σ m_ℓ · stride_ℓ`. Moving out of
/// `v` raises each memory entry to at least the priority of `v`.
pub struct ExtendedGame<'a> {
    arena: &'a GameArena,
    priorities: Vec<&'a [u32]>,
    radices: Vec<usize>,
    strides: Vec<usize>,
    memory_size: usize,
}

impl<'a> ExtendedGame<'a> {
    pub fn new(
        arena: &'a GameArena,
        profile: &'a PriorityProfile,
        dims: &[usize],
        budget: usize,
    ) -> Result<Self, ProductTooLarge> {
        let radices: Vec<usize> = dims.iter().map(|&d| profile.max(d) as usize + 1).collect();
        let states = radices
            .iter()
            .fold(arena.vertex_count() as u128, |acc, &r| acc.saturating_mul(r as u128));
        if states > budget as u128 {
            return Err(ProductTooLarge { states, budget });
        }
        let mut strides = vec![1; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        Ok(Self {
            arena,
            priorities: dims.iter().map(|&d| profile.dim(d)).collect(),
            memory_size: radices.iter().product(),
            radices,
            strides,
        })
    }

    pub fn memory_size(&self) -> usize {
        self.memory_size
    }

    pub fn state(&self, v: VertexId, memory: &[u32]) -> usize {
        v * self.memory_size
            + memory
                .iter()
                .zip(&self.strides)
                .map(|(&m, &s)| m as usize * s)
                .sum::<usize>()
    }

    pub fn vertex(&self, state: usize) -> VertexId {
        state / self.memory_size
    }

    pub fn memory(&self, state: usize) -> Vec<u32> {
        let code = state % self.memory_size;
        self.radices
            .iter()
            .zip(&self.strides)
            .map(|(&r, &s)| ((code / s) % r) as u32)
            .collect()
    }

    /// The memory a play holds on arriving at `v` from nowhere: its own
    /// priorities.
    pub fn own_memory(&self, v: VertexId) -> Vec<u32> {
        self.priorities.iter().map(|p| p[v]).collect()
    }

    /// Every state over the given vertices.
    pub fn lift(&self, vertices: &VertexSet) -> VertexSet {
        self.lift_where(vertices, |_| true)
    }

    /// States over `vertices` whose memory satisfies `keep`.
    pub fn lift_where(&self, vertices: &VertexSet, mut keep: impl FnMut(&[u32]) -> bool) -> VertexSet {
        let mut out = VertexSet::new(self.state_count());
        let memories: Vec<(usize, bool)> = (0..self.memory_size)
            .map(|code| (code, keep(&self.memory(code))))
            .collect();
        for v in vertices.iter() {
            for &(code, ok) in &memories {
                if ok {
                    out.insert(v * self.memory_size + code);
                }
            }
        }
        out
    }
}

impl GameGraph for ExtendedGame<'_> {
    fn state_count(&self) -> usize {
        self.arena.vertex_count() * self.memory_size
    }

    fn owner(&self, state: usize) -> Player {
        self.arena.owner(self.vertex(state))
    }

    fn successors(&self, state: usize, mut f: impl FnMut(usize)) {
        let v = self.vertex(state);
        let code = state % self.memory_size;
        let mut next = 0;
        for (i, p) in self.priorities.iter().enumerate() {
            let m = (code / self.strides[i]) % self.radices[i];
            next += m.max(p[v] as usize) * self.strides[i];
        }
        for &w in self.arena.successors(v) {
            f(w * self.memory_size + next);
        }
    }

    fn predecessors(&self, state: usize, mut f: impl FnMut(usize)) {
        let k = self.priorities.len();
        let target: Vec<usize> = {
            let code = state % self.memory_size;
            (0..k)
                .map(|i| (code / self.strides[i]) % self.radices[i])
                .collect()
        };
        let mut low = vec![0usize; k];
        let mut digits = vec![0usize; k];
        'pred: for &v in self.arena.predecessors(self.vertex(state)) {
            // Each memory entry either passes through unchanged or, when the
            // source priority equals it, may have been anything below.
            for i in 0..k {
                let p = self.priorities[i][v] as usize;
                if p > target[i] {
                    continue 'pred;
                }
                low[i] = if p == target[i] { 0 } else { target[i] };
            }
            digits.copy_from_slice(&low);
            loop {
                let code: usize = digits.iter().zip(&self.strides).map(|(&m, &s)| m * s).sum();
                f(v * self.memory_size + code);
                let mut i = k;
                loop {
                    if i == 0 {
                        continue 'pred;
                    }
                    i -= 1;
                    if digits[i] < target[i] {
                        digits[i] += 1;
                        break;
                    }
                    digits[i] = low[i];
                }
            }
        }
    }
}

/// Greatest fixpoint of the good-episode descent on an extended game: keep
/// the vertices from which `player` can force, with positive length, a visit
/// to a surviving vertex while its whole memory has `player`'s parity.
fn good_ep_in(product: &ExtendedGame, g: &Subgame, player: Player) -> VertexSet {
    let alive = product.lift(g.alive());
    let mut frontier = g.alive().clone();
    loop {
        let target = product.lift_where(&frontier, |m| m.iter().all(|&x| player.likes(x)));
        let reach = positive_attractor_in(product, &alive, player, &target);
        let next = VertexSet::from_iter(
            frontier.universe(),
            frontier
                .iter()
                .filter(|&v| reach.contains(product.state(v, &product.own_memory(v)))),
        );
        if next == frontier {
            return frontier;
        }
        frontier = next;
    }
}

fn good_ep_dim(g: &Subgame, profile: &PriorityProfile, dim: usize, player: Player) -> VertexSet {
    let product = ExtendedGame::new(g.arena(), profile, &[dim], usize::MAX)
        .expect("single-dimension products always fit");
    good_ep_in(&product, g, player)
}

/// Good-episode region of `player` on a parity game (dimension 0).
pub fn good_ep(g: &Subgame, profile: &PriorityProfile, player: Player) -> VertexSet {
    good_ep_dim(g, profile, 0, player)
}

/// Player 0's good-episode region on a generalized game, on the explicit
/// product of all dimensions.
pub fn gen_good_ep0_explicit(
    g: &Subgame,
    profile: &PriorityProfile,
    budget: usize,
) -> Result<VertexSet, ProductTooLarge> {
    let dims: Vec<usize> = (0..profile.k()).collect();
    let product = ExtendedGame::new(g.arena(), profile, &dims, budget)?;
    Ok(good_ep_in(&product, g, Player::Zero))
}

/// How player 0's generalized good-episode region is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GoodEpMode {
    /// Explicit product, falling back to antichains over the budget.
    #[default]
    Explicit,
    Antichain,
}

fn good_ep0(g: &Subgame, profile: &PriorityProfile, mode: GoodEpMode, budget: usize) -> VertexSet {
    match mode {
        GoodEpMode::Explicit => match gen_good_ep0_explicit(g, profile, budget) {
            Ok(won) => won,
            Err(err) => {
                log::debug!("{err}; using antichains");
                antichain_good_ep0(g, profile)
            }
        },
        GoodEpMode::Antichain => antichain_good_ep0(g, profile),
    }
}

fn good_ep_solve(
    g: &Subgame,
    profile: &PriorityProfile,
    mode: GoodEpMode,
    cancel: Option<&CancelToken>,
) -> SolveResult {
    peel(g, cancel, |current| {
        let won = good_ep0(current, profile, mode, DEFAULT_PRODUCT_BUDGET);
        if !won.is_empty() {
            return Some((Player::Zero, won));
        }
        let won = good_ep(current, profile, Player::One);
        (!won.is_empty()).then_some((Player::One, won))
    })
}

fn gen_good_ep_solve(
    g: &Subgame,
    profile: &PriorityProfile,
    mode: GoodEpMode,
    budget: usize,
    cancel: Option<&CancelToken>,
) -> SolveResult {
    peel(g, cancel, |current| {
        for dim in 0..profile.k() {
            if cancel.is_some_and(CancelToken::is_cancelled) {
                return None;
            }
            let won = good_ep_dim(current, profile, dim, Player::One);
            if !won.is_empty() {
                return Some((Player::One, won));
            }
        }
        let won = good_ep0(current, profile, mode, budget);
        (!won.is_empty()).then_some((Player::Zero, won))
    })
}

/// Alternates good-episode regions of player 0 and player 1 on a parity game.
pub fn good_ep_solver(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    good_ep_solve(g, profile, GoodEpMode::Explicit, None)
}

/// Tries player 1 on each dimension, then player 0 on all of them at once.
pub fn gen_good_ep_solver(g: &Subgame, profile: &PriorityProfile, mode: GoodEpMode) -> SolveResult {
    gen_good_ep_solve(g, profile, mode, DEFAULT_PRODUCT_BUDGET, None)
}

#[derive(Clone, Debug, Default)]
pub struct GoodEpSolver {
    pub mode: GoodEpMode,
    pub cancel: Option<CancelToken>,
}

impl PartialSolver for GoodEpSolver {
    fn name(&self) -> &str {
        match self.mode {
            GoodEpMode::Explicit => "goodep",
            GoodEpMode::Antichain => "goodep-antichain",
        }
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        good_ep_solve(g, profile, self.mode, self.cancel.as_ref())
    }
}

#[derive(Clone, Debug)]
pub struct GenGoodEpSolver {
    pub mode: GoodEpMode,
    pub cancel: Option<CancelToken>,
    pub budget: usize,
}

impl Default for GenGoodEpSolver {
    fn default() -> Self {
        Self {
            mode: GoodEpMode::Explicit,
            cancel: None,
            budget: DEFAULT_PRODUCT_BUDGET,
        }
    }
}

impl PartialSolver for GenGoodEpSolver {
    fn name(&self) -> &str {
        match self.mode {
            GoodEpMode::Explicit => "gen-goodep",
            GoodEpMode::Antichain => "gen-goodep-antichain",
        }
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        gen_good_ep_solve(g, profile, self.mode, self.budget, self.cancel.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::oracle::random_game;

    #[test]
    fn product_encoding_round_trips() {
        let profile = PriorityProfile::new(vec![vec![0, 3, 1], vec![2, 0, 1]]).unwrap();
        let arena = GameArena::new(
            vec![Player::Zero, Player::One, Player::Zero],
            vec![vec![1], vec![2], vec![0]],
        )
        .unwrap();
        let product = ExtendedGame::new(&arena, &profile, &[0, 1], usize::MAX).unwrap();
        assert_eq!(product.memory_size(), 12);
        for s in 0..product.state_count() {
            assert_eq!(product.state(product.vertex(s), &product.memory(s)), s);
        }
        let mut next = Vec::new();
        product.successors(product.state(1, &[0, 1]), |t| next.push(t));
        assert_eq!(next, vec![product.state(2, &[3, 1])]);
        assert!(matches!(
            ExtendedGame::new(&arena, &profile, &[0, 1], 10),
            Err(ProductTooLarge { states: 36, .. })
        ));
    }

    #[test]
    fn predecessors_invert_successors() {
        for seed in 0..40 {
            let (arena, profile) = random_game(6, 3, &[3, 2], seed);
            let product = ExtendedGame::new(&arena, &profile, &[0, 1], usize::MAX).unwrap();
            let n = product.state_count();
            let mut forward = vec![Vec::new(); n];
            for s in 0..n {
                product.successors(s, |t| forward[t].push(s));
            }
            for (t, expected) in forward.iter_mut().enumerate() {
                let mut got = Vec::new();
                product.predecessors(t, |s| got.push(s));
                got.sort_unstable();
                expected.sort_unstable();
                assert_eq!(&got, expected, "seed {seed} state {t}");
            }
        }
    }

    #[test]
    fn good_ep_examples() {
        let (arena, profile) = g1();
        let g = Subgame::full(&arena);
        assert_eq!(good_ep(&g, &profile, Player::Zero).to_vec(), vec![0, 2]);

        let (arena, profile) = g2();
        let g = Subgame::full(&arena);
        assert_eq!(good_ep(&g, &profile, Player::One).to_vec(), vec![0]);
        assert!(good_ep(&g, &profile, Player::Zero).is_empty());
    }

    #[test]
    fn good_ep_solver_examples() {
        let (arena, profile) = g1();
        let r = good_ep_solver(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1, 2]);
        assert!(r.win1.is_empty() && r.unsolved.is_empty());

        let (arena, profile) = g2();
        let g = Subgame::full(&arena);
        assert_eq!(good_ep_solver(&g, &profile).win1.to_vec(), vec![0]);
        let empty = g.subgame(&arena.all());
        assert_eq!(good_ep_solver(&empty, &profile), SolveResult::empty(1));
    }

    #[test]
    fn generalized_examples() {
        let (arena, profile) = gg1();
        let g = Subgame::full(&arena);
        assert_eq!(
            gen_good_ep0_explicit(&g, &profile, usize::MAX).unwrap().to_vec(),
            vec![0, 1]
        );
        for mode in [GoodEpMode::Explicit, GoodEpMode::Antichain] {
            assert_eq!(gen_good_ep_solver(&g, &profile, mode).win0.to_vec(), vec![0, 1]);
        }

        let (arena, profile) = gg2();
        let g = Subgame::full(&arena);
        assert!(gen_good_ep0_explicit(&g, &profile, usize::MAX).unwrap().is_empty());
        for mode in [GoodEpMode::Explicit, GoodEpMode::Antichain] {
            assert_eq!(gen_good_ep_solver(&g, &profile, mode).win1.to_vec(), vec![0]);
        }
    }

    #[test]
    fn single_dimension_matches_parity_version() {
        for seed in 0..100 {
            let (arena, profile) = random_game(8, 3, &[4], seed);
            let g = Subgame::full(&arena);
            assert_eq!(
                gen_good_ep0_explicit(&g, &profile, usize::MAX).unwrap(),
                good_ep(&g, &profile, Player::Zero),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn over_budget_falls_back_to_antichains() {
        let (arena, profile) = gg1();
        let g = Subgame::full(&arena);
        let solver = GenGoodEpSolver {
            budget: 1,
            ..GenGoodEpSolver::default()
        };
        assert_eq!(solver.solve(&g, &profile).win0.to_vec(), vec![0, 1]);
    }
}
