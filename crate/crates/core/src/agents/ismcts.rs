use crate::engine::{Action, ChanceStream, Game, InfoSet};

use super::AgentConfig;

const NONE: u32 = u32::MAX;

/// Visit statistics of one child, as seen by the seat that moves into it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChildStats {
    pub visits: u32,
    pub total_reward: f64,
}

#[inline]
fn ucb1_value(total_reward: f64, visits: u32, ln_parent: f64, c: f64) -> f64 {
    let n = visits as f64;
    total_reward / n + c * (ln_parent / n).sqrt()
}

/// UCB1 child choice. Unvisited children come first in order; otherwise the
/// argmax of `mean + c * sqrt(ln N / n)`, ties to the lowest index. `None`
/// only for an empty slice.
pub fn ucb1_select(children: &[ChildStats], parent_visits: u32, c: f64) -> Option<usize> {
    if let Some(i) = children.iter().position(|ch| ch.visits == 0) {
        return Some(i);
    }
    let ln_parent = (parent_visits.max(1) as f64).ln();
    let mut best: Option<(usize, f64)> = None;
    for (i, ch) in children.iter().enumerate() {
        let v = ucb1_value(ch.total_reward, ch.visits, ln_parent, c);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Clone, Copy, Debug)]
struct Node {
    /// Seat that took `action` to reach this node.
    mover: u16,
    action: Action,
    visits: u32,
    first_child: u32,
    next_sibling: u32,
}

impl Node {
    fn key(&self) -> (u16, Action) {
        (self.mover, self.action)
    }
}

/// Open-loop search tree: a node stands for an action sequence from the
/// decision root, whatever chance outcomes occurred along it. Children are
/// kept as sibling lists sorted by (mover, action), and rewards are stored
/// for every seat in one flat array.
#[derive(Debug, Default)]
pub(super) struct Search {
    nodes: Vec<Node>,
    rewards: Vec<f64>,
    seats: usize,
    path: Vec<u32>,
    legal: Vec<Action>,
    candidates: Vec<u32>,
}

impl Search {
    fn reset(&mut self, seats: usize) {
        self.seats = seats;
        self.nodes.clear();
        self.rewards.clear();
        self.push_node(0, 0);
    }

    fn push_node(&mut self, mover: u16, action: Action) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            mover,
            action,
            visits: 0,
            first_child: NONE,
            next_sibling: NONE,
        });
        self.rewards.extend(std::iter::repeat_n(0.0, self.seats));
        id
    }

    fn insert_child(&mut self, parent: u32, mover: u16, action: Action) -> u32 {
        let id = self.push_node(mover, action);
        let key = (mover, action);
        let mut prev = NONE;
        let mut cur = self.nodes[parent as usize].first_child;
        while cur != NONE && self.nodes[cur as usize].key() < key {
            prev = cur;
            cur = self.nodes[cur as usize].next_sibling;
        }
        self.nodes[id as usize].next_sibling = cur;
        if prev == NONE {
            self.nodes[parent as usize].first_child = id;
        } else {
            self.nodes[prev as usize].next_sibling = id;
        }
        id
    }

    /// Walks `node`'s children against the sorted legal list. Returns the
    /// first legal action without a child, and leaves the children that
    /// match legal actions in `self.candidates`.
    fn match_children(&mut self, node: u32, mover: u16) -> Option<Action> {
        self.candidates.clear();
        let mut cur = self.nodes[node as usize].first_child;
        for &a in &self.legal {
            let key = (mover, a);
            while cur != NONE && self.nodes[cur as usize].key() < key {
                cur = self.nodes[cur as usize].next_sibling;
            }
            if cur != NONE && self.nodes[cur as usize].key() == key {
                self.candidates.push(cur);
            } else {
                return Some(a);
            }
        }
        None
    }

    fn select(&self, parent: u32, c: f64) -> u32 {
        let ln_parent = (self.nodes[parent as usize].visits.max(1) as f64).ln();
        let mut best = self.candidates[0];
        let mut best_v = f64::NEG_INFINITY;
        for &id in &self.candidates {
            let n = &self.nodes[id as usize];
            let total = self.rewards[id as usize * self.seats + n.mover as usize];
            let v = ucb1_value(total, n.visits, ln_parent, c);
            if v > best_v {
                best = id;
                best_v = v;
            }
        }
        best
    }

    pub(super) fn run<G: Game>(
        &mut self,
        info: &InfoSet<'_, G>,
        root_legal: &[Action],
        config: &AgentConfig,
        redet: &mut ChanceStream,
        rng: &mut ChanceStream,
    ) -> Action {
        let game = info.game();
        let seats = game.def().seats;
        self.reset(seats);
        let c = config.exploration_constant;
        for _ in 0..config.budget {
            let mut state = info.determinize(redet);
            self.path.clear();
            self.path.push(0);
            let mut node = 0u32;
            // Selection and expansion.
            while !game.is_terminal(&state) {
                self.legal.clear();
                game.legal_actions(&state, &mut self.legal);
                let mover = game.current_seat(&state) as u16;
                if let Some(a) = self.match_children(node, mover) {
                    let child = self.insert_child(node, mover, a);
                    game.apply(&mut state, a, rng);
                    self.path.push(child);
                    break;
                }
                node = self.select(node, c);
                game.apply(&mut state, self.nodes[node as usize].action, rng);
                self.path.push(node);
            }
            let scores = rollout(game, &mut state, config.rollout_depth_cap, &mut self.legal, rng);
            for &id in &self.path {
                self.nodes[id as usize].visits += 1;
                let base = id as usize * seats;
                for (r, s) in self.rewards[base..base + seats].iter_mut().zip(&scores) {
                    *r += s;
                }
            }
        }
        self.best_root_action(info.observer() as u16, root_legal)
    }

    fn best_root_action(&self, observer: u16, root_legal: &[Action]) -> Action {
        let mut best = (root_legal[0], 0u32);
        let mut cur = self.nodes[0].first_child;
        while cur != NONE {
            let n = &self.nodes[cur as usize];
            // Siblings are sorted by action, so strict `>` keeps the lowest.
            if n.mover == observer && n.visits > best.1 && root_legal.contains(&n.action) {
                best = (n.action, n.visits);
            }
            cur = n.next_sibling;
        }
        best.0
    }

    pub(super) fn root_visits(&self) -> Vec<(Action, u32)> {
        let mut out = Vec::new();
        let Some(root) = self.nodes.first() else {
            return out;
        };
        let mut cur = root.first_child;
        while cur != NONE {
            let n = &self.nodes[cur as usize];
            out.push((n.action, n.visits));
            cur = n.next_sibling;
        }
        out
    }
}

/// Uniform random playout. A playout cut off at `cap` decisions scores as a
/// draw shared by all seats.
fn rollout<G: Game>(
    game: &G,
    state: &mut G::State,
    cap: u32,
    legal: &mut Vec<Action>,
    rng: &mut ChanceStream,
) -> Vec<f64> {
    let mut depth = 0;
    while !game.is_terminal(state) {
        if depth >= cap {
            let seats = game.def().seats;
            return vec![1.0 / seats as f64; seats];
        }
        legal.clear();
        game.legal_actions(state, legal);
        let a = legal[rng.below(legal.len() as u64) as usize];
        game.apply(state, a, rng);
        depth += 1;
    }
    game.scores(state).expect("terminal state has scores")
}
