//! Synchronous round-based execution over a schedule.
//!
//! Every round has a send phase, in which each node computes one message from
//! the state it entered the round with, and a receive phase, in which every
//! node gets the multiset of its neighbours' messages. Senders are never
//! identified; on multigraphs each delivery carries the edge label.

mod disclosure;
mod flood;

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    persistent_distances, validate_multigraph, validate_schedule, DynamicSchedule, Edge,
    MultigraphSchedule,
};

pub use disclosure::{
    full_disclosure_protocol, Digest, FdMessage, FdState, FullDisclosure, FullInformation,
    LeaderHistory, NodeHistory, RoundConnections,
};
pub use flood::{flood_time, measure_dynamic_diameter};

/// What a node knows before round 0 besides the protocol itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NodeInput {
    pub is_leader: bool,
    /// Declared distance from the leader, for protocols that assume it.
    pub level: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SendContext {
    pub round: usize,
    /// This round's degree, visible only when the engine runs with the
    /// degree oracle switched on.
    pub degree: Option<usize>,
}

/// Messages delivered to one node in one round, one entry per incident edge,
/// kept sorted so that delivery order carries no information.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inbox<M> {
    pub messages: Vec<(Option<u32>, M)>,
}

impl<M: Ord> Inbox<M> {
    pub fn new(mut messages: Vec<(Option<u32>, M)>) -> Self {
        messages.sort();
        Self { messages }
    }
}

impl<M> Inbox<M> {
    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &M> {
        self.messages.iter().map(|(_, m)| m)
    }
}

/// A deterministic anonymous protocol.
pub trait Protocol {
    type State: Clone + Debug + PartialEq + Serialize;
    type Message: Clone + Debug + Ord + Serialize;

    fn initial_state(&self, input: &NodeInput) -> Self::State;

    fn send(&self, state: &Self::State, ctx: &SendContext) -> Self::Message;

    /// Returns the state for the next round, or a reason the run is corrupt.
    fn receive(
        &self,
        state: &Self::State,
        round: usize,
        inbox: &Inbox<Self::Message>,
    ) -> std::result::Result<Self::State, String>;

    fn leader_output(&self, state: &Self::State) -> Option<u64>;
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub degree_oracle: bool,
    /// Per-node declared levels; `None` leaves every level undeclared.
    pub levels: Option<Vec<usize>>,
}

impl RunOptions {
    pub fn with_degree_oracle(mut self) -> Self {
        self.degree_oracle = true;
        self
    }

    pub fn with_levels(mut self, levels: Vec<usize>) -> Self {
        self.levels = Some(levels);
        self
    }
}

/// Borrowed view of either schedule kind, in the node numbering used by the
/// engine: for multigraphs the leader is node `0` and W node `w` is `w + 1`.
#[derive(Debug, Clone, Copy)]
pub enum Network<'a> {
    Graph(&'a DynamicSchedule),
    Multigraph(&'a MultigraphSchedule),
}

impl<'a> From<&'a DynamicSchedule> for Network<'a> {
    fn from(s: &'a DynamicSchedule) -> Self {
        Network::Graph(s)
    }
}

impl<'a> From<&'a MultigraphSchedule> for Network<'a> {
    fn from(m: &'a MultigraphSchedule) -> Self {
        Network::Multigraph(m)
    }
}

type Links = Vec<Vec<(usize, Option<u32>)>>;

impl Network<'_> {
    pub fn node_count(&self) -> usize {
        match self {
            Network::Graph(s) => s.node_count,
            Network::Multigraph(m) => m.non_leader_count + 1,
        }
    }

    pub fn leader(&self) -> usize {
        match self {
            Network::Graph(s) => s.leader,
            Network::Multigraph(_) => 0,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Network::Graph(s) => s.len(),
            Network::Multigraph(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<()> {
        match self {
            Network::Graph(s) => match validate_schedule(s).first() {
                Some(v) => Err(Error::InvalidSchedule(v.to_string())),
                None => Ok(()),
            },
            Network::Multigraph(m) => match validate_multigraph(m).first() {
                Some(v) => Err(Error::InvalidMultigraph(v.to_string())),
                None => Ok(()),
            },
        }
    }

    fn links(&self, r: usize) -> Links {
        let mut links = vec![Vec::new(); self.node_count()];
        match self {
            Network::Graph(s) => {
                for &(u, v) in s.round(r) {
                    links[u].push((v, None));
                    links[v].push((u, None));
                }
            }
            Network::Multigraph(m) => {
                for &(w, l) in m.round(r) {
                    links[0].push((w + 1, Some(l)));
                    links[w + 1].push((0, Some(l)));
                }
            }
        }
        links
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord<S, M> {
    pub round: usize,
    pub inboxes: Vec<Inbox<M>>,
    /// States after this round's receive phase.
    pub states: Vec<S>,
    pub leader_output: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Termination {
    pub round: usize,
    pub count: u64,
}

/// Transcript of one execution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolRun<S, M> {
    pub leader: usize,
    pub initial_states: Vec<S>,
    pub rounds: Vec<RoundRecord<S, M>>,
    pub termination: Option<Termination>,
}

impl<S: Serialize, M: Serialize> ProtocolRun<S, M> {
    pub fn rounds_executed(&self) -> usize {
        self.rounds.len()
    }

    pub fn output(&self) -> Option<u64> {
        self.termination.map(|t| t.count)
    }

    /// Leader state after each executed round.
    pub fn leader_states(&self) -> Vec<&S> {
        self.rounds.iter().map(|r| &r.states[self.leader]).collect()
    }

    pub fn leader_inboxes(&self) -> Vec<&Inbox<M>> {
        self.rounds.iter().map(|r| &r.inboxes[self.leader]).collect()
    }

    /// Dump keyed by round index.
    pub fn transcript_json(&self) -> serde_json::Value {
        let mut rounds = serde_json::Map::new();
        for rec in &self.rounds {
            rounds.insert(
                rec.round.to_string(),
                serde_json::json!({
                    "states": rec.states,
                    "inboxes": rec.inboxes,
                    "leader_output": rec.leader_output,
                }),
            );
        }
        serde_json::json!({
            "leader": self.leader,
            "initial_states": self.initial_states,
            "rounds": rounds,
            "termination": self.termination,
        })
    }
}

fn initial_inputs(node_count: usize, leader: usize, options: &RunOptions) -> Result<Vec<NodeInput>> {
    if let Some(levels) = &options.levels {
        if levels.len() != node_count {
            return Err(Error::Arity(format!(
                "{} declared levels for {node_count} nodes",
                levels.len()
            )));
        }
    }
    Ok((0..node_count)
        .map(|v| NodeInput {
            is_leader: v == leader,
            level: options.levels.as_ref().map(|l| l[v]),
        })
        .collect())
}

fn step<P: Protocol>(
    proto: &P,
    round: usize,
    links: &Links,
    states: &[P::State],
    leader: usize,
    options: &RunOptions,
) -> Result<RoundRecord<P::State, P::Message>> {
    let outgoing: Vec<P::Message> = states
        .iter()
        .enumerate()
        .map(|(v, s)| {
            let ctx = SendContext {
                round,
                degree: options.degree_oracle.then(|| links[v].len()),
            };
            proto.send(s, &ctx)
        })
        .collect();
    let inboxes: Vec<Inbox<P::Message>> = links
        .iter()
        .map(|nbrs| Inbox::new(nbrs.iter().map(|&(u, l)| (l, outgoing[u].clone())).collect()))
        .collect();
    let next = states
        .iter()
        .zip(&inboxes)
        .map(|(s, inbox)| proto.receive(s, round, inbox))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|reason| Error::Protocol { round, reason })?;
    let leader_output = proto.leader_output(&next[leader]);
    Ok(RoundRecord { round, inboxes, states: next, leader_output })
}

/// Executes `horizon` rounds of `proto`, stopping early at the first leader
/// output.
pub fn run<'a, P: Protocol>(
    network: impl Into<Network<'a>>,
    proto: &P,
    horizon: usize,
    options: &RunOptions,
) -> Result<ProtocolRun<P::State, P::Message>> {
    let network = network.into();
    network.validate()?;
    if horizon > network.len() {
        return Err(Error::HorizonExceedsSchedule { horizon, len: network.len() });
    }
    let leader = network.leader();
    let inputs = initial_inputs(network.node_count(), leader, options)?;
    let initial_states: Vec<P::State> = inputs.iter().map(|i| proto.initial_state(i)).collect();

    let mut run = ProtocolRun { leader, initial_states, rounds: Vec::new(), termination: None };
    for r in 0..horizon {
        let current = run.rounds.last().map_or(&run.initial_states, |rec| &rec.states);
        let rec = step(proto, r, &network.links(r), current, leader, options)?;
        let output = rec.leader_output;
        run.rounds.push(rec);
        if let Some(count) = output {
            run.termination = Some(Termination { round: r, count });
            break;
        }
    }
    Ok(run)
}

/// Topology families an adaptive adversary must stay inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Every round connected.
    OneIntervalConnected,
    /// Every round connected, every node keeps the distance it had in round 0,
    /// and no distance exceeds `h`.
    PersistentDistance { h: usize },
}

/// A run together with the schedule the adversary produced.
pub type AdaptiveRun<P> = (ProtocolRun<<P as Protocol>::State, <P as Protocol>::Message>, DynamicSchedule);

/// Runs `proto` against an omniscient adversary that picks each round's edge
/// set after seeing every node's state. Each produced round is re-checked
/// against `family`.
pub fn run_adaptive<P, A>(
    node_count: usize,
    leader: usize,
    family: Family,
    mut adversary: A,
    proto: &P,
    horizon: usize,
    options: &RunOptions,
) -> Result<AdaptiveRun<P>>
where
    P: Protocol,
    A: FnMut(usize, &[P::State]) -> Vec<Edge>,
{
    if leader >= node_count {
        return Err(Error::Arity(format!("leader {leader} out of range for {node_count} nodes")));
    }
    let inputs = initial_inputs(node_count, leader, options)?;
    let initial_states: Vec<P::State> = inputs.iter().map(|i| proto.initial_state(i)).collect();
    let mut schedule = DynamicSchedule::new(node_count, leader, Vec::new());
    let mut baseline: Option<Vec<Option<usize>>> = None;

    let mut run = ProtocolRun { leader, initial_states, rounds: Vec::new(), termination: None };
    for r in 0..horizon {
        let current = run.rounds.last().map_or(&run.initial_states, |rec| &rec.states);
        let edges = adversary(r, current);
        let single = DynamicSchedule::new(node_count, leader, vec![edges.clone()]);
        if let Some(v) = validate_schedule(&single).first() {
            return Err(Error::AdversaryViolation { round: r, reason: v.to_string() });
        }
        if let Family::PersistentDistance { h } = family {
            let dist = persistent_distances(&single).per_node_distance;
            if dist.iter().flatten().any(|&d| d > h) {
                return Err(Error::AdversaryViolation {
                    round: r,
                    reason: format!("a node is farther than {h} from the leader"),
                });
            }
            match &baseline {
                Some(base) if *base != dist => {
                    return Err(Error::AdversaryViolation {
                        round: r,
                        reason: "a node changed its distance from the leader".into(),
                    })
                }
                Some(_) => {}
                None => baseline = Some(dist),
            }
        }
        schedule.rounds.push(edges);
        let links = Network::Graph(&schedule).links(r);
        let rec = step(proto, r, &links, current, leader, options)?;
        let output = rec.leader_output;
        run.rounds.push(rec);
        if let Some(count) = output {
            run.termination = Some(Termination { round: r, count });
            break;
        }
    }
    Ok((run, schedule))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Leader counts its inbox; everybody else stays silent.
    struct InboxCounter;

    impl Protocol for InboxCounter {
        type State = (bool, Option<u64>);
        type Message = ();

        fn initial_state(&self, input: &NodeInput) -> Self::State {
            (input.is_leader, None)
        }

        fn send(&self, _: &Self::State, _: &SendContext) {}

        fn receive(
            &self,
            state: &Self::State,
            _: usize,
            inbox: &Inbox<()>,
        ) -> std::result::Result<Self::State, String> {
            Ok((state.0, state.0.then(|| inbox.len() as u64 + 1)))
        }

        fn leader_output(&self, state: &Self::State) -> Option<u64> {
            state.1
        }
    }

    struct Silent;

    impl Protocol for Silent {
        type State = usize;
        type Message = usize;

        fn initial_state(&self, _: &NodeInput) -> usize {
            0
        }

        fn send(&self, state: &usize, _: &SendContext) -> usize {
            *state
        }

        fn receive(&self, _: &usize, _: usize, inbox: &Inbox<usize>) -> std::result::Result<usize, String> {
            Ok(inbox.len())
        }

        fn leader_output(&self, _: &usize) -> Option<u64> {
            None
        }
    }

    #[test]
    fn star_counts_in_round_zero() {
        let run = run(&DynamicSchedule::star(4, 3), &InboxCounter, 3, &RunOptions::default()).unwrap();
        assert_eq!(run.termination, Some(Termination { round: 0, count: 5 }));
        assert_eq!(run.rounds_executed(), 1);
    }

    #[test]
    fn silent_protocol_never_terminates() {
        let s = DynamicSchedule::star(2, 4);
        let run = run(&s, &Silent, 4, &RunOptions::default()).unwrap();
        assert_eq!(run.termination, None);
        assert_eq!(run.rounds_executed(), 4);
        for rec in &run.rounds {
            assert_eq!(rec.states, vec![2, 1, 1]);
        }
    }

    #[test]
    fn horizon_and_arity_checked() {
        let s = DynamicSchedule::star(2, 2);
        assert!(matches!(
            run(&s, &Silent, 3, &RunOptions::default()),
            Err(Error::HorizonExceedsSchedule { horizon: 3, len: 2 })
        ));
        let opts = RunOptions::default().with_levels(vec![0, 1]);
        assert!(matches!(run(&s, &Silent, 1, &opts), Err(Error::Arity(_))));
    }

    #[test]
    fn multigraph_parallel_edges_deliver_copies() {
        let m = MultigraphSchedule::new(2, 2, vec![vec![(0, 1), (0, 2), (1, 2)]]);
        let run = run(&m, &Silent, 1, &RunOptions::default()).unwrap();
        assert_eq!(run.rounds[0].states, vec![3, 2, 1]);
        let labels: Vec<_> = run.rounds[0].inboxes[0].messages.iter().map(|(l, _)| *l).collect();
        assert_eq!(labels, vec![Some(1), Some(2), Some(2)]);
    }

    #[test]
    fn adaptive_adversary_is_rechecked() {
        let star = |_: usize, _: &[usize]| vec![(0, 1), (0, 2)];
        let (run, schedule) = run_adaptive(
            3,
            0,
            Family::PersistentDistance { h: 1 },
            star,
            &Silent,
            3,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(run.rounds_executed(), 3);
        assert_eq!(schedule, DynamicSchedule::star(2, 3));

        let moving = |r: usize, _: &[usize]| {
            if r == 0 {
                vec![(0, 1), (0, 2)]
            } else {
                vec![(0, 1), (1, 2)]
            }
        };
        let err = run_adaptive(
            3,
            0,
            Family::PersistentDistance { h: 2 },
            moving,
            &Silent,
            3,
            &RunOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::AdversaryViolation { round: 1, .. }));

        let broken = |_: usize, _: &[usize]| vec![(0, 1)];
        let err = run_adaptive(3, 0, Family::OneIntervalConnected, broken, &Silent, 1, &RunOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::AdversaryViolation { round: 0, .. }));
    }

    #[test]
    fn adversary_sees_states() {
        // the adversary detaches node 2 from the leader as soon as the leader has heard two messages
        let adversary = |_: usize, states: &[usize]| {
            if states[0] >= 2 {
                vec![(0, 1), (1, 2)]
            } else {
                vec![(0, 1), (0, 2)]
            }
        };
        let (_, schedule) = run_adaptive(
            3,
            0,
            Family::OneIntervalConnected,
            adversary,
            &Silent,
            2,
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(schedule.rounds[1], vec![(0, 1), (1, 2)]);
    }
}
