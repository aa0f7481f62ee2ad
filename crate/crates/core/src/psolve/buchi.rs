//! Partial solvers built on Büchi-with-safety objectives: a player wins if
//! it can revisit one of its priorities forever while never touching a
//! larger opponent priority.

use crate::arena::{Player, PriorityProfile, Subgame};
use crate::omega::{win_buchi_safe, win_genbuchi_safe};
use crate::recursive::{CancelToken, PartialSolver, SolveResult};

use super::peel;

/// One candidate objective of the generalized scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PriorityElement {
    /// Player 1 revisits odd `priority` in dimension `dim`.
    OddAt { priority: u32, dim: usize },
    /// Player 0 revisits the even priority `p[ℓ]` in every dimension ℓ.
    EvenVector(Vec<u32>),
}

/// Lazily enumerates the candidate list: every odd priority of every
/// dimension (priorities descending, then dimensions ascending), followed by
/// every vector of even priorities in lexicographically descending order.
pub fn list_l(profile: &PriorityProfile) -> impl Iterator<Item = PriorityElement> + '_ {
    let k = profile.k();
    let top = profile.maxima().iter().copied().max().unwrap_or(0);
    let odd = (0..=top)
        .rev()
        .filter(|p| p % 2 == 1)
        .flat_map(move |priority| {
            (0..k)
                .filter(move |&dim| priority <= profile.max(dim))
                .map(move |dim| PriorityElement::OddAt { priority, dim })
        });

    let evens: Vec<Vec<u32>> = profile
        .maxima()
        .iter()
        .map(|&d| (0..=d).rev().filter(|p| p % 2 == 0).collect())
        .collect();
    let mut odometer = Some(vec![0usize; k]);
    let even = std::iter::from_fn(move || {
        let current = odometer.take()?;
        let element = current
            .iter()
            .zip(&evens)
            .map(|(&i, list)| list[i])
            .collect();
        let mut next = current;
        for dim in (0..k).rev() {
            next[dim] += 1;
            if next[dim] < evens[dim].len() {
                odometer = Some(next);
                break;
            }
            next[dim] = 0;
        }
        Some(PriorityElement::EvenVector(element))
    });
    odd.chain(even)
}

pub fn build_list_l(profile: &PriorityProfile) -> Vec<PriorityElement> {
    list_l(profile).collect()
}

fn buchi_solve(g: &Subgame, profile: &PriorityProfile, cancel: Option<&CancelToken>) -> SolveResult {
    let prio = profile.dim(0);
    let d = profile.max(0);
    peel(g, cancel, |current| {
        for p in (0..=d).rev() {
            let target = current.select(|v| prio[v] == p);
            if target.is_empty() {
                continue;
            }
            let player = Player::of_priority(p);
            let bad = current.select(|v| prio[v] > p && !player.likes(prio[v]));
            let won = win_buchi_safe(current, player, &target, &bad);
            if !won.is_empty() {
                return Some((player, won));
            }
        }
        None
    })
}

fn gen_buchi_solve(
    g: &Subgame,
    profile: &PriorityProfile,
    cancel: Option<&CancelToken>,
) -> SolveResult {
    peel(g, cancel, |current| {
        for element in list_l(profile) {
            if cancel.is_some_and(CancelToken::is_cancelled) {
                return None;
            }
            match element {
                PriorityElement::OddAt { priority, dim } => {
                    let prio = profile.dim(dim);
                    let target = current.select(|v| prio[v] == priority);
                    if target.is_empty() {
                        continue;
                    }
                    let bad = current.select(|v| prio[v] > priority && prio[v] % 2 == 0);
                    let won = win_buchi_safe(current, Player::One, &target, &bad);
                    if !won.is_empty() {
                        return Some((Player::One, won));
                    }
                }
                PriorityElement::EvenVector(p) => {
                    let targets: Vec<_> = p
                        .iter()
                        .enumerate()
                        .map(|(dim, &pd)| current.select(|v| profile.priority(v, dim) == pd))
                        .collect();
                    if targets.iter().any(|t| t.is_empty()) {
                        continue;
                    }
                    let bad = current.select(|v| {
                        p.iter().enumerate().any(|(dim, &pd)| {
                            let a = profile.priority(v, dim);
                            a > pd && a % 2 == 1
                        })
                    });
                    let won = win_genbuchi_safe(current, &targets, &bad);
                    if !won.is_empty() {
                        return Some((Player::Zero, won));
                    }
                }
            }
        }
        None
    })
}

/// Scans priorities from the highest down on a parity game (dimension 0).
pub fn buchi_solver(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    buchi_solve(g, profile, None)
}

/// Scans the candidate list of [`list_l`] on a generalized parity game.
pub fn gen_buchi_solver(g: &Subgame, profile: &PriorityProfile) -> SolveResult {
    gen_buchi_solve(g, profile, None)
}

#[derive(Clone, Debug, Default)]
pub struct BuchiSolver {
    pub cancel: Option<CancelToken>,
}

impl PartialSolver for BuchiSolver {
    fn name(&self) -> &str {
        "buchi"
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        buchi_solve(g, profile, self.cancel.as_ref())
    }
}

#[derive(Clone, Debug, Default)]
pub struct GenBuchiSolver {
    pub cancel: Option<CancelToken>,
}

impl PartialSolver for GenBuchiSolver {
    fn name(&self) -> &str {
        "gen-buchi"
    }

    fn solve(&self, g: &Subgame, profile: &PriorityProfile) -> SolveResult {
        gen_buchi_solve(g, profile, self.cancel.as_ref())
    }
}
