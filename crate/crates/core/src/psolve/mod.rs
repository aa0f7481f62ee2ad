//! Polynomial-time partial solvers.
//!
//! Every solver here follows the same outer loop: scan a list of candidate
//! objectives on the current subgame, and at the first one with a nonempty
//! winning set W for some player, remove that player's attractor to W and
//! start over on what is left. The removed attractors accumulate into the
//! two returned regions, so the unsolved remainder is always a trap for
//! whichever player won the last removal.

mod buchi;
mod goodep;
mod layered;

pub use buchi::{
    buchi_solver, build_list_l, gen_buchi_solver, list_l, BuchiSolver, GenBuchiSolver,
    PriorityElement,
};
pub use goodep::{
    gen_good_ep0_explicit, gen_good_ep_solver, good_ep, good_ep_solver, ExtendedGame,
    GenGoodEpSolver, GoodEpMode, GoodEpSolver, ProductTooLarge, DEFAULT_PRODUCT_BUDGET,
};
pub use layered::{
    build_gen_list_p, build_list_p, gen_lay_ep, gen_lay_solver, gen_layered_attractor, lay_ep, lay_solver,
    layered_attractor, GenLaySolver, LaySolver, LayerSpec, MemoryGame, TooManyDimensions,
    MAX_MEMORY_DIMS,
};

use crate::arena::{Player, Subgame, VertexSet};
use crate::attractor::attractor;
use crate::recursive::{CancelToken, SolveResult};

/// The shared remove-and-restart loop.
///
/// `find` inspects the current subgame and returns a player together with a
/// nonempty set of vertices that player wins there, or `None` when no
/// candidate objective yields anything. Stops early, with the regions found
/// so far, once `cancel` fires.
pub(crate) fn peel<'a>(
    g: &Subgame<'a>,
    cancel: Option<&CancelToken>,
    mut find: impl FnMut(&Subgame<'a>) -> Option<(Player, VertexSet)>,
) -> SolveResult {
    let mut result = SolveResult::unsolved(g);
    let mut current = g.clone();
    while !current.is_empty() {
        if cancel.is_some_and(CancelToken::is_cancelled) {
            break;
        }
        let Some((player, won)) = find(&current) else {
            break;
        };
        debug_assert!(!won.is_empty());
        let x = attractor(&current, player, &won);
        result.region_mut(player).union_with(&x);
        result.unsolved.difference_with(&x);
        current = current.subgame(&x);
    }
    result
}
