use super::*;
use crate::engine::{derive_stream, Game};
use crate::games::cantstop::CantStop;
use crate::games::connect4::{Connect4, Connect4State};
use crate::games::kuhn::{self, Kuhn, KuhnState};

fn stats(v: &[(u32, f64)]) -> Vec<ChildStats> {
    v.iter()
        .map(|&(visits, mean)| ChildStats {
            visits,
            total_reward: mean * visits as f64,
        })
        .collect()
}

#[test]
fn ucb1_pure_exploitation() {
    assert_eq!(ucb1_select(&stats(&[(10, 0.2), (10, 0.9)]), 20, 0.0), Some(1));
}

#[test]
fn ucb1_ties_go_to_lowest_index() {
    assert_eq!(ucb1_select(&stats(&[(5, 0.5), (5, 0.5), (5, 0.5)]), 15, 1.4), Some(0));
}

#[test]
fn ucb1_exploration_dominates_rarely_visited_child() {
    let ch = stats(&[(100, 0.5), (1, 0.4)]);
    assert_eq!(ucb1_select(&ch, 101, std::f64::consts::SQRT_2), Some(1));
    let bonus = std::f64::consts::SQRT_2 * (101f64.ln() / 1.0).sqrt();
    assert!((bonus - 3.04).abs() < 0.01);
}

#[test]
fn ucb1_unvisited_first() {
    assert_eq!(ucb1_select(&stats(&[(3, 1.0), (0, 0.0), (0, 0.0)]), 3, 1.0), Some(1));
    assert_eq!(ucb1_select(&[], 0, 1.0), None);
}

#[test]
fn config_validation() {
    assert!(AgentConfig::random().validate().is_ok());
    assert!(AgentConfig::ismcts(1).validate().is_ok());
    assert!(AgentConfig::ismcts(0).validate().is_err());
    let mut r = AgentConfig::random();
    r.budget = 3;
    assert!(r.validate().is_err());
    let mut c = AgentConfig::ismcts(4);
    c.exploration_constant = -1.0;
    assert!(c.validate().is_err());
    let json = r#"{"kind":"ismcts","budget":16}"#;
    let parsed: AgentConfig = serde_json::from_str(json).unwrap();
    assert_eq!(parsed, AgentConfig::ismcts(16));
}

fn kuhn_facing_bet(hole: [u8; 2]) -> KuhnState {
    let g = Kuhn::new();
    let mut chance = derive_stream(0, "deal").unwrap();
    let mut s = g.initial_state(&mut chance);
    // Second hand: seat 1 acts first and bets, seat 0 must answer.
    s.hand = 1;
    s.first = 1;
    s.seat = 0;
    s.stacks = [3, 2];
    s.pot = 3;
    s.hole = hole;
    s.history = [kuhn::BET, 0, 0];
    s.history_len = 1;
    s
}

#[test]
fn single_legal_action_is_returned() {
    let g = Connect4::new();
    // Only column 6 has room.
    let rows = ["XOXOXO.", "XOXOXO.", "OXOXOX.", "OXOXOX.", "XOXOXO.", "XOXOXO."];
    let s = Connect4State::from_rows(&rows).unwrap();
    assert_eq!(s.winner, None);
    let mut redet = derive_stream(1, "redet/0").unwrap();
    for cfg in [AgentConfig::random(), AgentConfig::ismcts(8)] {
        let mut agent = Agent::new(&cfg, 3).unwrap();
        let seat = g.current_seat(&s);
        assert_eq!(agent.act(&InfoSet::new(&g, &s, seat), &mut redet).unwrap(), 6);
        assert_eq!(agent.iterations(), cfg.budget);
    }
}

#[test]
fn budget_is_spent_exactly() {
    let g = CantStop::new();
    let mut chance = derive_stream(9, "dice").unwrap();
    let mut s = g.initial_state(&mut chance);
    let mut agent = Agent::new(&AgentConfig::ismcts(37), 11).unwrap();
    let mut redet = derive_stream(2, "redet/0").unwrap();
    for _ in 0..20 {
        if g.is_terminal(&s) {
            break;
        }
        let seat = g.current_seat(&s);
        let a = agent.act(&InfoSet::new(&g, &s, seat), &mut redet).unwrap();
        assert_eq!(agent.iterations(), 37);
        let total: u32 = agent.root_visits().iter().map(|&(_, v)| v).sum();
        assert_eq!(total, 37);
        g.apply(&mut s, a, &mut chance);
    }
}

#[test]
fn replay_gives_the_same_action() {
    let g = Kuhn::new();
    let s = kuhn_facing_bet([kuhn::QUEEN, kuhn::JACK]);
    let run = || {
        let mut agent = Agent::new(&AgentConfig::ismcts(64), 77).unwrap();
        let mut redet = derive_stream(5, "redet/0").unwrap();
        (0..10)
            .map(|_| agent.act(&InfoSet::new(&g, &s, 0), &mut redet).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn hidden_state_does_not_leak_into_decisions() {
    let g = Kuhn::new();
    // Same observable history for seat 0, different opponent cards.
    let a = kuhn_facing_bet([kuhn::QUEEN, kuhn::JACK]);
    let b = kuhn_facing_bet([kuhn::QUEEN, kuhn::KING]);
    for seed in 0..20 {
        let decide = |s: &KuhnState| {
            let mut agent = Agent::new(&AgentConfig::ismcts(32), seed).unwrap();
            let mut redet = derive_stream(seed + 100, "redet/0").unwrap();
            let action = agent.act(&InfoSet::new(&g, s, 0), &mut redet).unwrap();
            (action, agent.root_visits())
        };
        assert_eq!(decide(&a), decide(&b));
    }
}

#[test]
fn king_calls_a_bet() {
    let g = Kuhn::new();
    let mut calls = 0;
    for i in 0..200u64 {
        let hole = [kuhn::KING, if i % 2 == 0 { kuhn::JACK } else { kuhn::QUEEN }];
        let s = kuhn_facing_bet(hole);
        let mut agent = Agent::new(&AgentConfig::ismcts(1024), 1000 + i).unwrap();
        let mut redet = derive_stream(2000 + i, "redet/0").unwrap();
        if agent.act(&InfoSet::new(&g, &s, 0), &mut redet).unwrap() == kuhn::CALL {
            calls += 1;
        }
    }
    assert!(calls >= 190, "calls {calls}/200");
}

#[test]
fn agent_seed_changes_some_decision() {
    let g = CantStop::new();
    let mut disagreements = 0;
    let mut chance = derive_stream(21, "dice").unwrap();
    let mut s = g.initial_state(&mut chance);
    let mut a1 = Agent::new(&AgentConfig::ismcts(16), 1).unwrap();
    let mut a2 = Agent::new(&AgentConfig::ismcts(16), 2).unwrap();
    let mut r1 = derive_stream(3, "redet").unwrap();
    let mut r2 = r1.clone();
    for _ in 0..100 {
        if g.is_terminal(&s) {
            s = g.initial_state(&mut chance);
        }
        let seat = g.current_seat(&s);
        let x = a1.act(&InfoSet::new(&g, &s, seat), &mut r1).unwrap();
        let y = a2.act(&InfoSet::new(&g, &s, seat), &mut r2).unwrap();
        disagreements += (x != y) as u32;
        g.apply(&mut s, x, &mut chance);
    }
    assert!(disagreements >= 1);
}
