use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest as _, Sha256};

use super::{Inbox, NodeInput, Protocol, SendContext};
use crate::graph::LabelSet;

/// `S(v, r)` without the leading `(⊥)`: the label sets a non-leader node saw
/// in rounds `0..r`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeHistory(pub Vec<LabelSet>);

impl NodeHistory {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn pushed(&self, labels: LabelSet) -> Self {
        let mut next = self.0.clone();
        next.push(labels);
        NodeHistory(next)
    }
}

/// `C(v_l, i)`: multiset of `(label, sender history)` pairs, sorted, with
/// multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoundConnections(pub Vec<(u32, NodeHistory, u64)>);

impl RoundConnections {
    pub fn multiplicity(&self, label: u32, history: &NodeHistory) -> u64 {
        self.0
            .iter()
            .find(|(l, h, _)| *l == label && h == history)
            .map_or(0, |(_, _, c)| *c)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|(_, _, c)| c).sum()
    }
}

/// `S(v_l, r) = [C(v_l, 0), ..., C(v_l, r - 1)]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LeaderHistory(pub Vec<RoundConnections>);

impl LeaderHistory {
    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FdState {
    Leader(LeaderHistory),
    Node(NodeHistory),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FdMessage {
    Dummy,
    State(NodeHistory),
}

/// Non-leaders send their whole history; the leader sends a dummy message and
/// records who reached it over which label.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullDisclosure;

pub fn full_disclosure_protocol() -> FullDisclosure {
    FullDisclosure
}

impl FdState {
    pub fn leader_history(&self) -> Option<&LeaderHistory> {
        match self {
            FdState::Leader(h) => Some(h),
            FdState::Node(_) => None,
        }
    }

    pub fn node_history(&self) -> Option<&NodeHistory> {
        match self {
            FdState::Node(h) => Some(h),
            FdState::Leader(_) => None,
        }
    }
}

impl Protocol for FullDisclosure {
    type State = FdState;
    type Message = FdMessage;

    fn initial_state(&self, input: &NodeInput) -> FdState {
        if input.is_leader {
            FdState::Leader(LeaderHistory::default())
        } else {
            FdState::Node(NodeHistory::default())
        }
    }

    fn send(&self, state: &FdState, _: &SendContext) -> FdMessage {
        match state {
            FdState::Leader(_) => FdMessage::Dummy,
            FdState::Node(h) => FdMessage::State(h.clone()),
        }
    }

    fn receive(&self, state: &FdState, _: usize, inbox: &Inbox<FdMessage>) -> Result<FdState, String> {
        match state {
            FdState::Leader(history) => {
                let mut counts: BTreeMap<(u32, NodeHistory), u64> = BTreeMap::new();
                for (label, msg) in &inbox.messages {
                    let FdMessage::State(h) = msg else {
                        return Err("leader received a dummy message".into());
                    };
                    let label = label.ok_or("full disclosure needs labelled edges")?;
                    *counts.entry((label, h.clone())).or_default() += 1;
                }
                let round = RoundConnections(counts.into_iter().map(|((l, h), c)| (l, h, c)).collect());
                let mut next = history.clone();
                next.0.push(round);
                Ok(FdState::Leader(next))
            }
            FdState::Node(history) => {
                let labels = inbox
                    .messages
                    .iter()
                    .map(|(l, _)| l.ok_or_else(|| "full disclosure needs labelled edges".to_string()))
                    .collect::<Result<LabelSet, _>>()?;
                Ok(FdState::Node(history.pushed(labels)))
            }
        }
    }

    fn leader_output(&self, _: &FdState) -> Option<u64> {
        None
    }
}

/// SHA-256 fingerprint of a node's complete view.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 32]);

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({self})")
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Full-information flooding on arbitrary schedules: every node broadcasts
/// its state and the next state fingerprints the previous one together with
/// the sorted inbox. Two leaders with equal fingerprints have seen the same
/// thing, so this bounds what any deterministic protocol could observe.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullInformation;

impl Protocol for FullInformation {
    type State = Digest;
    type Message = Digest;

    fn initial_state(&self, input: &NodeInput) -> Digest {
        let tag: &[u8] = if input.is_leader { b"leader" } else { b"node" };
        Digest(Sha256::digest(tag).into())
    }

    fn send(&self, state: &Digest, _: &SendContext) -> Digest {
        *state
    }

    fn receive(&self, state: &Digest, _: usize, inbox: &Inbox<Digest>) -> Result<Digest, String> {
        let mut hasher = Sha256::new();
        hasher.update(state.0);
        hasher.update((inbox.len() as u64).to_le_bytes());
        for (label, msg) in &inbox.messages {
            hasher.update(label.unwrap_or(0).to_le_bytes());
            hasher.update(msg.0);
        }
        Ok(Digest(hasher.finalize().into()))
    }

    fn leader_output(&self, _: &Digest) -> Option<u64> {
        None
    }
}
