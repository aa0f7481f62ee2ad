//! Layered-attractor partial solvers.
//!
//! A layer spec fixes a player and a ladder of that player's priorities
//! `top, top − 2, …, q`. Walking the ladder downwards, each rung `p` adds the
//! vertices from which the player can force a return to the target set while
//! seeing a priority of its own at least `p` and nothing larger of the
//! opponent's. Iterating this against a shrinking target gives regions won
//! by the player.

use crate::arena::{GameArena, Player, PriorityProfile, Subgame, VertexId, VertexSet};
use crate::attractor::{positive_safe_attractor, positive_safe_attractor_in, GameGraph};
use crate::recursive::{CancelToken, PartialSolver, SolveResult};

use super::peel;

/// Largest number of dimensions the player-0 memory game supports.
pub const MAX_MEMORY_DIMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("memory game needs one bit per dimension; {0} dimensions is over the limit of {MAX_MEMORY_DIMS}")]
pub struct TooManyDimensions(pub usize);

/// A player, a base priority and the dimensions it ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSpec {
    pub player: Player,
    /// `Some(ℓ)`: a single priority in dimension ℓ. `None`: a player-0
    /// vector over every dimension.
    pub dim: Option<usize>,
    pub q: Vec<u32>,
}

fn top_of(player: Player, max: u32) -> Option<u32> {
    if player.likes(max) {
        Some(max)
    } else {
        max.checked_sub(1)
    }
}

impl LayerSpec {
    pub fn scalar(player: Player, dim: usize, q: u32) -> Self {
        assert!(player.likes(q), "base priority {q} has the wrong parity for {player}");
        Self {
            player,
            dim: Some(dim),
            q: vec![q],
        }
    }

    pub fn vector(q: Vec<u32>) -> Self {
        assert!(q.iter().all(|x| x % 2 == 0), "vector specs are player 0's");
        Self {
            player: Player::Zero,
            dim: None,
            q,
        }
    }

    /// The rungs from the top down to `q`. Vector ladders lower every entry
    /// by two per rung but never below its base.
    pub fn ladder(&self, profile: &PriorityProfile) -> Vec<Vec<u32>> {
        let top: Vec<u32> = match self.dim {
            Some(dim) => vec![top_of(self.player, profile.max(dim)).unwrap_or(0)],
            None => profile
                .maxima()
                .iter()
                .map(|&d| top_of(Player::Zero, d).unwrap_or(0))
                .collect(),
        };
        let mut p: Vec<u32> = top.iter().zip(&self.q).map(|(&t, &q)| t.max(q)).collect();
        let mut out = vec![p.clone()];
        while p != self.q {
            p = p
                .iter()
                .zip(&self.q)
                .map(|(&x, &q)| x.saturating_sub(2).max(q))
                .collect();
            out.push(p.clone());
        }
        out
    }
}

fn player_tops(player: Player, max: u32) -> Vec<u32> {
    match top_of(player, max) {
        Some(top) => (0..=top).rev().step_by(2).collect(),
        None => Vec::new(),
    }
}

/// Specs for a parity game: every base priority of both players, shorter
/// ladders first and player 0 first among equals.
pub fn build_list_p(profile: &PriorityProfile) -> Vec<LayerSpec> {
    let mut specs: Vec<(usize, LayerSpec)> = Vec::new();
    for player in Player::BOTH {
        for (len, q) in player_tops(player, profile.max(0)).into_iter().enumerate() {
            specs.push((len, LayerSpec::scalar(player, 0, q)));
        }
    }
    specs.sort_by_key(|(len, s)| (*len, s.player.index()));
    specs.into_iter().map(|(_, s)| s).collect()
}

/// Specs for a generalized game: player-1 specs per dimension and player-0
/// vector specs for every combination of even bases, shorter ladders
/// first, then player 0 before player 1, then dimension.
pub fn build_gen_list_p(profile: &PriorityProfile) -> Vec<LayerSpec> {
    let mut specs: Vec<(usize, LayerSpec)> = Vec::new();
    let evens: Vec<Vec<u32>> = profile
        .maxima()
        .iter()
        .map(|&d| player_tops(Player::Zero, d))
        .collect();
    let mut odometer = vec![0usize; profile.k()];
    'vectors: loop {
        let q: Vec<u32> = odometer.iter().zip(&evens).map(|(&i, e)| e[i]).collect();
        let len = odometer.iter().copied().max().unwrap_or(0);
        specs.push((len, LayerSpec::vector(q)));
        for i in (0..odometer.len()).rev() {
            odometer[i] += 1;
            if odometer[i] < evens[i].len() {
                continue 'vectors;
            }
            odometer[i] = 0;
        }
        break;
    }
    for dim in 0..profile.k() {
        for (len, q) in player_tops(Player::One, profile.max(dim)).into_iter().enumerate() {
            specs.push((len, LayerSpec::scalar(Player::One, dim, q)));
        }
    }
    specs.sort_by_key(|(len, s)| (*len, s.player.index(), s.dim));
    specs.into_iter().map(|(_, s)| s).collect()
}

/// The layered attractor of a single-dimension spec towards `u`.
pub fn layered_attractor(
    g: &Subgame,
    profile: &PriorityProfile,
    spec: &LayerSpec,
    u: &VertexSet,
) -> VertexSet {
    let dim = spec.dim.expect("single-dimension spec");
    let prio = profile.dim(dim);
    let player = spec.player;
    let mut layered = g.empty_set();
    for rung in spec.ladder(profile) {
        let p = rung[0];
        let mut target = VertexSet::from_iter(u.universe(), u.iter().filter(|&v| prio[v] >= p));
        target.union_with(&layered);
        let avoid = g.select(|v| prio[v] > p && !player.likes(prio[v]) && !layered.contains(v));
        layered.union_with(&positive_safe_attractor(g, player, &target, &avoid));
    }
    layered
}

/// Shrinks `frontier` until every member lies in `step(frontier)`.
fn descend(mut frontier: VertexSet, mut step: impl FnMut(&VertexSet) -> VertexSet) -> VertexSet {
    loop {
        let next = step(&frontier).intersection(&frontier);
        if next == frontier {
            return frontier;
        }
        frontier = next;
    }
}

/// Layered-episode region of a single-dimension spec.
pub fn lay_ep(g: &Subgame, profile: &PriorityProfile, spec: &LayerSpec) -> VertexSet {
    let dim = spec.dim.expect("single-dimension spec");
    let prio = profile.dim(dim);
    let start = g.select(|v| spec.player.likes(prio[v]) && prio[v] >= spec.q[0]);
    descend(start, |f| layered_attractor(g, profile, spec, f))
}

/// `G × 2^{1..k}` for a vector of even priorities `p`: the memory records
/// the dimensions in which an even priority of at least `p_ℓ` has been seen.
/// State `(v, N)` is encoded as `v · 2^k + N`.
pub struct MemoryGame<'a> {
    arena: &'a GameArena,
    k: usize,
    seen: Vec<u32>,
    bad: Vec<bool>,
}

impl<'a> MemoryGame<'a> {
    pub fn new(
        arena: &'a GameArena,
        profile: &PriorityProfile,
        p: &[u32],
    ) -> Result<Self, TooManyDimensions> {
        let k = profile.k();
        if k > MAX_MEMORY_DIMS {
            return Err(TooManyDimensions(k));
        }
        let seen = arena
            .vertices()
            .map(|v| {
                (0..k)
                    .filter(|&l| {
                        let a = profile.priority(v, l);
                        a % 2 == 0 && a >= p[l]
                    })
                    .fold(0, |mask, l| mask | 1 << l)
            })
            .collect();
        let bad = arena
            .vertices()
            .map(|v| (0..k).any(|l| {
                let a = profile.priority(v, l);
                a % 2 == 1 && a > p[l]
            }))
            .collect();
        Ok(Self { arena, k, seen, bad })
    }

    /// Dimensions that `v` itself witnesses.
    pub fn seen_at(&self, v: VertexId) -> u32 {
        self.seen[v]
    }

    /// True if `v` carries an odd priority above the rung in some dimension.
    pub fn is_bad(&self, v: VertexId) -> bool {
        self.bad[v]
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.k) - 1) as u32
    }

    pub fn state(&self, v: VertexId, mask: u32) -> usize {
        (v << self.k) | mask as usize
    }

    /// The state a play enters `v` in when it starts or resets there.
    pub fn entry(&self, v: VertexId) -> usize {
        self.state(v, self.seen[v])
    }

    pub fn vertex(&self, state: usize) -> VertexId {
        state >> self.k
    }

    pub fn mask(&self, state: usize) -> u32 {
        (state & ((1 << self.k) - 1)) as u32
    }

    /// All states over the given vertices whose mask satisfies `keep`.
    fn lift_where(&self, vertices: &VertexSet, keep: impl Fn(VertexId, u32) -> bool) -> VertexSet {
        let mut out = VertexSet::new(self.state_count());
        for v in vertices.iter() {
            for mask in 0..=self.full() {
                if keep(v, mask) {
                    out.insert(self.state(v, mask));
                }
            }
        }
        out
    }
}

impl GameGraph for MemoryGame<'_> {
    fn state_count(&self) -> usize {
        self.arena.vertex_count() << self.k
    }

    fn owner(&self, state: usize) -> Player {
        self.arena.owner(self.vertex(state))
    }

    fn successors(&self, state: usize, mut f: impl FnMut(usize)) {
        let mask = self.mask(state);
        for &w in self.arena.successors(self.vertex(state)) {
            f(self.state(w, mask | self.seen[w]));
        }
    }

    fn predecessors(&self, state: usize, mut f: impl FnMut(usize)) {
        let (w, mask) = (self.vertex(state), self.mask(state));
        let added = self.seen[w];
        if added & !mask != 0 {
            return;
        }
        let base = mask & !added;
        for &v in self.arena.predecessors(w) {
            // Every subset of the bits `w` adds may already have been set.
            let mut sub = added;
            loop {
                f(self.state(v, base | sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & added;
            }
        }
    }
}

/// The layered attractor of a player-0 vector spec towards `u`, computed
/// rung by rung in the memory game of each rung. Vertices confirmed at a
/// rung are kept for every memory on the rungs below.
pub fn gen_layered_attractor(
    g: &Subgame,
    profile: &PriorityProfile,
    spec: &LayerSpec,
    u: &VertexSet,
) -> Result<VertexSet, TooManyDimensions> {
    assert!(spec.dim.is_none(), "vector spec expected");
    let arena = g.arena();
    let mut confirmed = g.empty_set();
    for rung in spec.ladder(profile) {
        let game = MemoryGame::new(arena, profile, &rung)?;
        let full = game.full();
        let alive = game.lift_where(g.alive(), |_, _| true);
        let target = game.lift_where(g.alive(), |v, mask| {
            confirmed.contains(v) || (u.contains(v) && mask == full)
        });
        let avoid = game.lift_where(g.alive(), |v, _| !confirmed.contains(v) && game.is_bad(v));
        let won = positive_safe_attractor_in(&game, &alive, Player::Zero, &target, &avoid);
        for v in g.alive().iter() {
            if won.contains(game.entry(v)) {
                confirmed.insert(v);
            }
        }
    }
    Ok(confirmed)
}

/// Layered-episode region of a player-0 vector spec.
pub fn gen_lay_ep(
    g: &Subgame,
    profile: &PriorityProfile,
    spec: &LayerSpec,
) -> Result<VertexSet, TooManyDimensions> {
    let start = g.select(|v| {
        (0..profile.k()).all(|l| {
            let a = profile.priority(v, l);
            a % 2 == 0 && a >= spec.q[l]
        })
    });
    let mut error = None;
    let won = descend(start, |f| {
        gen_layered_attractor(g, profile, spec, f).unwrap_or_else(|e| {
            error = Some(e);
            g.empty_set()
        })
    });
    match error {
        Some(e) => Err(e),
        None => Ok(won),
    }
}

fn lay_solve(g: &Subgame, profile: &PriorityProfile, cancel: Option<&CancelToken>) -> SolveResult {
    let specs = build_list_p(profile);
    peel(g, cancel, |current| {
        specs.iter().find_map(|spec| {
            let won = lay_ep(current, profile, spec);
            (!won.is_empty()).then(|| (spec.player, won))
        })
    })
}

fn gen_lay_solve(
    g: &Subgame,
    profile: &PriorityProfile,
    cancel: Option<&CancelToken>,
) -> SolveResult {
    let mut specs = build_gen_list_p(profile);
    if profile.k() > MAX_MEMORY_DIMS {
        log::warn!("{}; skipping player-0 layers", TooManyDimensions(profile.k()));
        specs.retain(|s| s.dim.is_some());
    }
    peel(g, cancel, |current| {
        for spec in &specs {
            if cancel.is_some_and(CancelToken::is_cancelled) {
                return None;
            }
            let won = match spec.dim {
                Some(_) => lay_ep(current, profile, spec),
                None => gen_lay_ep(current, profile, spec).expect("dimension count checked"),
            };
            if !won.is_empty() {
                return Some((spec.player, won));
            }
        }
        None
    })
}

/// Scans [`build_list_p`] on a parity game.
pub fn lay_solver(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    lay_solve(g, profile, None)
}

/// Scans [`build_gen_list_p`] on a generalized game.
pub fn gen_lay_solver(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    gen_lay_solve(g, profile, None)
}

#[derive(Clone, Debug, Default)]
pub struct LaySolver {
    pub cancel: Option<CancelToken>,
}

impl PartialSolver for LaySolver {
    fn name(&self) -> &str {
        "lay"
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        lay_solve(g, profile, self.cancel.as_ref())
    }
}

#[derive(Clone, Debug, Default)]
pub struct GenLaySolver {
    pub cancel: Option<CancelToken>,
}

impl PartialSolver for GenLaySolver {
    fn name(&self) -> &str {
        "gen-lay"
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        gen_lay_solve(g, profile, self.cancel.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::fixtures::*;
    use crate::oracle::random_game;

    const P0: Player = Player::Zero;
    const P1: Player = Player::One;

    #[test]
    fn ladders() {
        let profile = PriorityProfile::parity(vec![9]);
        assert_eq!(
            LayerSpec::scalar(P0, 0, 4).ladder(&profile),
            vec![vec![8], vec![6], vec![4]]
        );
        assert_eq!(LayerSpec::scalar(P1, 0, 9).ladder(&profile), vec![vec![9]]);

        let profile = PriorityProfile::new(vec![vec![9], vec![9]]).unwrap();
        assert_eq!(
            LayerSpec::vector(vec![4, 4]).ladder(&profile),
            vec![vec![8, 8], vec![6, 6], vec![4, 4]]
        );
        assert_eq!(
            LayerSpec::vector(vec![6, 2]).ladder(&profile),
            vec![vec![8, 8], vec![6, 6], vec![6, 4], vec![6, 2]]
        );
    }

    #[test]
    fn list_examples() {
        let profile = PriorityProfile::parity(vec![3]);
        let qs: Vec<(u32, Player)> = build_list_p(&profile)
            .iter()
            .map(|s| (s.q[0], s.player))
            .collect();
        assert_eq!(qs, vec![(2, P0), (3, P1), (0, P0), (1, P1)]);

        let profile = PriorityProfile::parity(vec![0]);
        assert_eq!(build_list_p(&profile), vec![LayerSpec::scalar(P0, 0, 0)]);

        let profile = PriorityProfile::new(vec![vec![9], vec![9]]).unwrap();
        let list = build_gen_list_p(&profile);
        assert!(list.contains(&LayerSpec::vector(vec![4, 4])));
        assert_eq!(list[0], LayerSpec::vector(vec![8, 8]));
        assert_eq!(list[1], LayerSpec::scalar(P1, 0, 9));
        assert_eq!(list.iter().filter(|s| s.dim.is_none()).count(), 25);
        for pair in list.windows(2) {
            assert!(pair[0].ladder(&profile).len() <= pair[1].ladder(&profile).len());
        }
    }

    #[test]
    fn layered_attractor_examples() {
        let (arena, profile) = g1();
        let g = Subgame::full(&arena);
        let spec = LayerSpec::scalar(P0, 0, 0);
        assert_eq!(
            layered_attractor(&g, &profile, &spec, &set(3, &[0, 2])).to_vec(),
            vec![2]
        );
        assert!(layered_attractor(&g, &profile, &spec, &set(3, &[])).is_empty());
    }

    #[test]
    fn layers_are_monotone() {
        let profile = PriorityProfile::parity(vec![9, 4, 7, 6, 8, 3]);
        let arena = GameArena::new(
            vec![P0, P1, P0, P1, P0, P1],
            vec![vec![1, 2], vec![0, 3], vec![3], vec![4, 5], vec![0], vec![5, 0]],
        )
        .unwrap();
        let g = Subgame::full(&arena);
        let u = g.select(|v| profile.priority(v, 0) % 2 == 0);
        let mut previous = g.empty_set();
        for q in [8, 6, 4] {
            let b = layered_attractor(&g, &profile, &LayerSpec::scalar(P0, 0, q), &u);
            assert!(previous.is_subset(&b));
            previous = b;
        }
    }

    #[test]
    fn lay_ep_examples() {
        let (arena, profile) = g1();
        let g = Subgame::full(&arena);
        assert_eq!(lay_ep(&g, &profile, &LayerSpec::scalar(P0, 0, 0)).to_vec(), vec![2]);

        let (arena, profile) = g2();
        let g = Subgame::full(&arena);
        assert_eq!(lay_ep(&g, &profile, &LayerSpec::scalar(P1, 0, 1)).to_vec(), vec![0]);
        assert!(lay_ep(&g, &profile, &LayerSpec::scalar(P0, 0, 0)).is_empty());
    }

    #[test]
    fn lay_solver_examples() {
        let (arena, profile) = g1();
        let r = lay_solver(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1, 2]);

        let (arena, profile) = g2();
        let g = Subgame::full(&arena);
        assert_eq!(lay_solver(&g, &profile).win1.to_vec(), vec![0]);
        assert_eq!(lay_solver(&g.subgame(&arena.all()), &profile), SolveResult::empty(1));
    }

    #[test]
    fn memory_game_examples() {
        let (arena, profile) = gg1();
        let game = MemoryGame::new(&arena, &profile, &[2, 2]).unwrap();
        assert_eq!(game.seen_at(0), 0);
        assert_eq!(game.seen_at(1), 0b11);
        let mut next = Vec::new();
        game.successors(game.state(0, 0), |s| next.push(s));
        assert_eq!(next, vec![game.state(1, 0b11)]);

        let profile = PriorityProfile::new(vec![vec![0]; 17]).unwrap();
        let arena = GameArena::new(vec![P0], vec![vec![0]]).unwrap();
        assert_eq!(
            MemoryGame::new(&arena, &profile, &[0; 17]).err(),
            Some(TooManyDimensions(17))
        );
    }

    #[test]
    fn memory_game_predecessors_invert_successors() {
        for seed in 0..30 {
            let (arena, profile) = random_game(5, 3, &[4, 3, 2], seed);
            let game = MemoryGame::new(&arena, &profile, &[2, 2, 0]).unwrap();
            let n = game.state_count();
            let mut expected = vec![Vec::new(); n];
            for s in 0..n {
                game.successors(s, |t| expected[t].push(s));
            }
            for (t, want) in expected.iter_mut().enumerate() {
                let mut got = Vec::new();
                game.predecessors(t, |s| got.push(s));
                got.sort_unstable();
                want.sort_unstable();
                assert_eq!(&got, want, "seed {seed} state {t}");
            }
        }
    }

    #[test]
    fn gen_layered_attractor_examples() {
        let (arena, profile) = gg1();
        let g = Subgame::full(&arena);
        let spec = LayerSpec::vector(vec![2, 2]);
        assert_eq!(
            gen_layered_attractor(&g, &profile, &spec, &set(2, &[1])).unwrap().to_vec(),
            vec![0, 1]
        );
        assert!(gen_layered_attractor(&g, &profile, &spec, &set(2, &[]))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn gen_lay_solver_examples() {
        let (arena, profile) = gg2();
        let r = gen_lay_solver(&Subgame::full(&arena), &profile);
        assert_eq!(r.win1.to_vec(), vec![0]);

        let (arena, profile) = gg1();
        let r = gen_lay_solver(&Subgame::full(&arena), &profile);
        assert_eq!(r.win0.to_vec(), vec![0, 1]);
    }
}
