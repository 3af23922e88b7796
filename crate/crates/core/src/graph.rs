//! Dynamic graphs, labeled leader-centred multigraphs and the family checks
//! over them.
//!
//! Both schedule kinds are finite prefixes of an infinite dynamic graph. Round
//! lists are 0-indexed everywhere. When an operation needs to look past the
//! last recorded round it repeats that round.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Edge = (usize, usize);

/// Edge of a multigraph round: `(non-leader node in W, label)`.
pub type LabeledEdge = (usize, u32);

/// A finite prefix of a dynamic graph with a distinguished leader.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynamicSchedule {
    pub node_count: usize,
    pub leader: usize,
    pub rounds: Vec<Vec<Edge>>,
}

/// A finite prefix of a member of M(DBL_k). Nodes of `W` are indexed
/// `0..non_leader_count`; the leader is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultigraphSchedule {
    pub non_leader_count: usize,
    pub label_bound: u32,
    pub rounds: Vec<Vec<LabeledEdge>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoNodes,
    LeaderOutOfRange { leader: usize },
    EndpointOutOfRange { round: usize, edge: Edge },
    SelfLoop { round: usize, node: usize },
    DuplicateEdge { round: usize, edge: Edge },
    Disconnected { round: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodes => write!(f, "schedule has no nodes"),
            Violation::LeaderOutOfRange { leader } => write!(f, "leader {leader} out of range"),
            Violation::EndpointOutOfRange { round, edge } => {
                write!(f, "round {round}: edge {edge:?} has an endpoint out of range")
            }
            Violation::SelfLoop { round, node } => write!(f, "round {round}: self-loop at {node}"),
            Violation::DuplicateEdge { round, edge } => {
                write!(f, "round {round}: duplicate edge {edge:?}")
            }
            Violation::Disconnected { round } => write!(f, "round {round} disconnected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultigraphViolation {
    NoNodes,
    ZeroLabelBound,
    NodeOutOfRange { round: usize, node: usize },
    LabelOutOfRange { round: usize, node: usize, label: u32 },
    /// The node has no edge to the leader in this round.
    Isolated { round: usize, node: usize },
    TooManyEdges { round: usize, node: usize, count: usize },
    RepeatedLabel { round: usize, node: usize, label: u32 },
}

impl fmt::Display for MultigraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MultigraphViolation::*;
        match self {
            NoNodes => write!(f, "multigraph has no non-leader nodes"),
            ZeroLabelBound => write!(f, "label bound k must be positive"),
            NodeOutOfRange { round, node } => write!(f, "round {round}: node {node} out of range"),
            LabelOutOfRange { round, node, label } => {
                write!(f, "round {round}: node {node} has label {label} outside 1..=k")
            }
            Isolated { round, node } => {
                write!(f, "round {round}: node {node} disconnected from the leader")
            }
            TooManyEdges { round, node, count } => {
                write!(f, "round {round}: node {node} has {count} edges, more than k")
            }
            RepeatedLabel { round, node, label } => {
                write!(f, "round {round}: repeated label {label} at node {node}")
            }
        }
    }
}

/// Persistent-distance classification of a schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdClassification {
    /// `Some(d)` iff the node is at distance `d` from the leader in every
    /// round. The leader itself is `Some(0)`.
    pub per_node_distance: Vec<Option<usize>>,
    /// Largest persistent distance, present only when every node is persistent.
    pub h: Option<usize>,
    /// All nodes persistent and no round has an edge between two nodes of
    /// the same level.
    pub restricted: bool,
}

impl PdClassification {
    pub fn is_pd(&self, h: usize) -> bool {
        self.h.is_some_and(|max| max <= h)
    }

    /// Nodes at persistent distance exactly `d`.
    pub fn level(&self, d: usize) -> Vec<usize> {
        self.per_node_distance
            .iter()
            .enumerate()
            .filter(|(_, dist)| **dist == Some(d))
            .map(|(v, _)| v)
            .collect()
    }
}

fn normalize(edge: Edge) -> Edge {
    if edge.0 <= edge.1 {
        edge
    } else {
        (edge.1, edge.0)
    }
}

impl DynamicSchedule {
    pub fn new(node_count: usize, leader: usize, rounds: Vec<Vec<Edge>>) -> Self {
        Self { node_count, leader, rounds }
    }

    /// The same graph in every one of `rounds` rounds.
    pub fn static_graph(node_count: usize, leader: usize, edges: Vec<Edge>, rounds: usize) -> Self {
        Self::new(node_count, leader, vec![edges; rounds])
    }

    /// Star with the leader at the centre.
    pub fn star(leaves: usize, rounds: usize) -> Self {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        Self::static_graph(leaves + 1, 0, edges, rounds)
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Edge set of round `r`, repeating the last recorded round past the end.
    pub fn round(&self, r: usize) -> &[Edge] {
        match self.rounds.get(r).or_else(|| self.rounds.last()) {
            Some(edges) => edges,
            None => &[],
        }
    }

    pub fn adjacency(&self, r: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v) in self.round(r) {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// BFS distances from `source` in round `r`; `None` for unreachable nodes.
    pub fn distances_from(&self, r: usize, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency(r);
        let mut dist = vec![None; self.node_count];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Pads the schedule to `len` rounds by repeating its last round.
    pub fn extended_to(&self, len: usize) -> Self {
        let mut out = self.clone();
        if let Some(last) = self.rounds.last() {
            while out.rounds.len() < len {
                out.rounds.push(last.clone());
            }
        }
        out
    }

    /// Relabels node `i` as `perm[i]` in every round.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let rounds = self
            .rounds
            .iter()
            .map(|edges| edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect())
            .collect();
        Self::new(self.node_count, perm[self.leader], rounds)
    }

    pub fn to_file(&self) -> ScheduleFile {
        ScheduleFile::Graph {
            nodes: self.node_count,
            leader: self.leader,
            rounds: self.rounds.iter().map(|r| r.iter().map(|&(u, v)| [u, v]).collect()).collect(),
        }
    }
}

impl MultigraphSchedule {
    pub fn new(non_leader_count: usize, label_bound: u32, rounds: Vec<Vec<LabeledEdge>>) -> Self {
        Self { non_leader_count, label_bound, rounds }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn round(&self, r: usize) -> &[LabeledEdge] {
        match self.rounds.get(r).or_else(|| self.rounds.last()) {
            Some(edges) => edges,
            None => &[],
        }
    }

    /// `L(v, r)`: the labels of the edges joining `node` to the leader in round `r`.
    pub fn label_set(&self, r: usize, node: usize) -> LabelSet {
        self.round(r)
            .iter()
            .filter(|(w, _)| *w == node)
            .map(|&(_, l)| l)
            .collect()
    }

    pub fn extended_to(&self, len: usize) -> Self {
        let mut out = self.clone();
        if let Some(last) = self.rounds.last() {
            while out.rounds.len() < len {
                out.rounds.push(last.clone());
            }
        }
        out
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let rounds = self
            .rounds
            .iter()
            .map(|edges| edges.iter().map(|&(w, l)| (perm[w], l)).collect())
            .collect();
        Self::new(self.non_leader_count, self.label_bound, rounds)
    }

    pub fn to_file(&self) -> ScheduleFile {
        ScheduleFile::Multigraph {
            w: self.non_leader_count,
            k: self.label_bound,
            rounds: self.rounds.clone(),
        }
    }
}

/// A set of edge labels, stored as a bitmask over labels `1..=64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn insert(&mut self, label: u32) {
        assert!((1..=64).contains(&label), "label {label} outside 1..=64");
        self.0 |= 1 << (label - 1);
    }

    pub fn contains(&self, label: u32) -> bool {
        (1..=64).contains(&label) && self.0 & (1 << (label - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn labels(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=64u32).filter(move |&l| self.contains(l))
    }
}

impl FromIterator<u32> for LabelSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut set = LabelSet::empty();
        for l in iter {
            set.insert(l);
        }
        set
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

/// Checks that every round is a connected simple graph on the node set.
pub fn validate_schedule(s: &DynamicSchedule) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.node_count == 0 {
        out.push(Violation::NoNodes);
        return out;
    }
    if s.leader >= s.node_count {
        out.push(Violation::LeaderOutOfRange { leader: s.leader });
    }
    for (r, edges) in s.rounds.iter().enumerate() {
        let mut seen = HashSet::new();
        let mut well_formed = true;
        for &(u, v) in edges {
            if u >= s.node_count || v >= s.node_count {
                out.push(Violation::EndpointOutOfRange { round: r, edge: (u, v) });
                well_formed = false;
                continue;
            }
            if u == v {
                out.push(Violation::SelfLoop { round: r, node: u });
                continue;
            }
            if !seen.insert(normalize((u, v))) {
                out.push(Violation::DuplicateEdge { round: r, edge: (u, v) });
            }
        }
        if well_formed && s.distances_from(r, 0).iter().any(Option::is_none) {
            out.push(Violation::Disconnected { round: r });
        }
    }
    out
}

/// Per-round BFS from the leader; a node is persistent at `d` iff its
/// distance is `d` in every round.
pub fn persistent_distances(s: &DynamicSchedule) -> PdClassification {
    let n = s.node_count;
    let mut per_node: Vec<Option<usize>> = vec![None; n];
    if s.leader < n {
        per_node[s.leader] = Some(0);
    }
    if !s.is_empty() && s.leader < n {
        let first = s.distances_from(0, s.leader);
        per_node = first.clone();
        for r in 1..s.len() {
            let dist = s.distances_from(r, s.leader);
            for v in 0..n {
                if per_node[v] != dist[v] {
                    per_node[v] = None;
                }
            }
        }
    }
    let all_persistent = per_node.iter().all(Option::is_some);
    let h = if all_persistent { per_node.iter().flatten().copied().max() } else { None };
    let restricted = all_persistent
        && s.rounds.iter().flatten().all(|&(u, v)| per_node[u] != per_node[v]);
    PdClassification { per_node_distance: per_node, h, restricted }
}

/// Checks both M(DBL_k) conditions in every round.
pub fn validate_multigraph(m: &MultigraphSchedule) -> Vec<MultigraphViolation> {
    use MultigraphViolation::*;
    let mut out = Vec::new();
    if m.non_leader_count == 0 {
        out.push(NoNodes);
    }
    if m.label_bound == 0 {
        out.push(ZeroLabelBound);
    }
    for (r, edges) in m.rounds.iter().enumerate() {
        let mut labels: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.non_leader_count];
        let mut counts = vec![0usize; m.non_leader_count];
        for &(node, label) in edges {
            if node >= m.non_leader_count {
                out.push(NodeOutOfRange { round: r, node });
                continue;
            }
            if label == 0 || label > m.label_bound {
                out.push(LabelOutOfRange { round: r, node, label });
            }
            counts[node] += 1;
            if !labels[node].insert(label) {
                out.push(RepeatedLabel { round: r, node, label });
            }
        }
        for (node, &count) in counts.iter().enumerate() {
            if count == 0 {
                out.push(Isolated { round: r, node });
            } else if count > m.label_bound as usize {
                out.push(TooManyEdges { round: r, node, count });
            }
        }
    }
    out
}

/// Result of lifting a multigraph to G(PD)_2. The front-layer ids are
/// bookkeeping only and never reach simulated protocols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pd2Lift {
    pub schedule: DynamicSchedule,
    /// `(node index, id)` for every node of V1; ids run over `1..=k`.
    pub front_ids: Vec<(usize, u32)>,
}

impl Pd2Lift {
    /// Node of V2 standing for multigraph node `w`.
    pub fn back_node(&self, w: usize) -> usize {
        1 + self.front_ids.len() + w
    }

    pub fn front_node(&self, id: u32) -> Option<usize> {
        self.front_ids.iter().find(|(_, j)| *j == id).map(|(v, _)| *v)
    }

    pub fn into_schedule(self) -> DynamicSchedule {
        self.schedule
    }
}

/// Builds the G(PD)_2 instance of a multigraph: leader `0`, V1 nodes `1..=k`
/// (node `j` carries id `j`), then one V2 node per node of W. The leader is
/// joined to all of V1 in every round; the V1 node with id `j` meets a V2 node
/// in round `r` iff the multigraph has a `j`-labelled edge to it in round `r`.
pub fn dbl_to_pd2(m: &MultigraphSchedule) -> Result<Pd2Lift> {
    let violations = validate_multigraph(m);
    if let Some(v) = violations.first() {
        return Err(Error::InvalidMultigraph(v.to_string()));
    }
    let k = m.label_bound as usize;
    let node_count = 1 + k + m.non_leader_count;
    let rounds = m
        .rounds
        .iter()
        .map(|edges| {
            let mut round: Vec<Edge> = (1..=k).map(|j| (0, j)).collect();
            round.extend(edges.iter().map(|&(w, l)| (l as usize, 1 + k + w)));
            round
        })
        .collect();
    Ok(Pd2Lift {
        schedule: DynamicSchedule::new(node_count, 0, rounds),
        front_ids: (1..=k).map(|j| (j, j as u32)).collect(),
    })
}

/// Moves the V1 layer of a G(PD)_2 schedule `D - 1` hops away from the leader:
/// the leader heads a static chain of `D - 1` nodes (itself plus `D - 2` fresh
/// ones, appended after the existing nodes) whose last node takes over every
/// leader-to-V1 edge. `D = 2` returns the schedule unchanged.
pub fn chain_extend(s: &DynamicSchedule, target_diameter: usize) -> Result<DynamicSchedule> {
    if target_diameter < 2 {
        return Err(Error::DiameterTooSmall(target_diameter));
    }
    if let Some(v) = validate_schedule(s).first() {
        return Err(Error::InvalidSchedule(v.to_string()));
    }
    let pd = persistent_distances(s);
    if pd.h != Some(2) {
        return Err(Error::NotPd2(format!("persistent-distance height is {:?}", pd.h)));
    }
    let fresh = target_diameter - 2;
    if fresh == 0 {
        return Ok(s.clone());
    }
    let n = s.node_count;
    let chain: Vec<usize> = std::iter::once(s.leader).chain(n..n + fresh).collect();
    let tail_head = *chain.last().expect("chain is never empty");
    let rounds = s
        .rounds
        .iter()
        .map(|edges| {
            let mut round: Vec<Edge> = chain.windows(2).map(|w| (w[0], w[1])).collect();
            round.extend(edges.iter().map(|&(u, v)| {
                if u == s.leader {
                    (tail_head, v)
                } else if v == s.leader {
                    (u, tail_head)
                } else {
                    (u, v)
                }
            }));
            round
        })
        .collect();
    Ok(DynamicSchedule::new(n + fresh, s.leader, rounds))
}

/// On-disk schedule format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ScheduleFile {
    Graph {
        nodes: usize,
        leader: usize,
        rounds: Vec<Vec<[usize; 2]>>,
    },
    Multigraph {
        w: usize,
        k: u32,
        rounds: Vec<Vec<(usize, u32)>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySchedule {
    Graph(DynamicSchedule),
    Multigraph(MultigraphSchedule),
}

impl From<ScheduleFile> for AnySchedule {
    fn from(file: ScheduleFile) -> Self {
        match file {
            ScheduleFile::Graph { nodes, leader, rounds } => AnySchedule::Graph(DynamicSchedule::new(
                nodes,
                leader,
                rounds.into_iter().map(|r| r.into_iter().map(|[u, v]| (u, v)).collect()).collect(),
            )),
            ScheduleFile::Multigraph { w, k, rounds } => {
                AnySchedule::Multigraph(MultigraphSchedule::new(w, k, rounds))
            }
        }
    }
}

impl AnySchedule {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScheduleFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("schedule JSON: {e}")))?;
        Ok(file.into())
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            AnySchedule::Graph(s) => s.to_file(),
            AnySchedule::Multigraph(m) => m.to_file(),
        };
        serde_json::to_string(&file).expect("schedule serialization cannot fail")
    }

    pub fn len(&self) -> usize {
        match self {
            AnySchedule::Graph(s) => s.len(),
            AnySchedule::Multigraph(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_is_valid() {
        assert!(validate_schedule(&DynamicSchedule::star(2, 2)).is_empty());
    }

    #[test]
    fn isolated_node_is_disconnected() {
        let s = DynamicSchedule::new(3, 0, vec![vec![(0, 1), (0, 2)], vec![(0, 1)]]);
        assert_eq!(validate_schedule(&s), vec![Violation::Disconnected { round: 1 }]);
    }

    #[test]
    fn duplicate_edge_reported() {
        let s = DynamicSchedule::new(2, 0, vec![vec![(0, 1), (1, 0)]]);
        assert_eq!(validate_schedule(&s), vec![Violation::DuplicateEdge { round: 0, edge: (1, 0) }]);
    }

    #[test]
    fn self_loop_and_range() {
        let s = DynamicSchedule::new(2, 0, vec![vec![(0, 1), (1, 1), (0, 5)]]);
        let v = validate_schedule(&s);
        assert!(v.contains(&Violation::SelfLoop { round: 0, node: 1 }));
        assert!(v.contains(&Violation::EndpointOutOfRange { round: 0, edge: (0, 5) }));
    }

    #[test]
    fn star_distances() {
        let pd = persistent_distances(&DynamicSchedule::star(4, 3));
        assert_eq!(pd.h, Some(1));
        assert!(pd.per_node_distance[1..].iter().all(|d| *d == Some(1)));
        assert!(pd.restricted);
    }

    #[test]
    fn moving_node_is_not_persistent() {
        // node 2 hangs off the leader in round 0, off node 1 in round 1
        let s = DynamicSchedule::new(3, 0, vec![vec![(0, 1), (0, 2)], vec![(0, 1), (1, 2)]]);
        let pd = persistent_distances(&s);
        assert_eq!(pd.per_node_distance, vec![Some(0), Some(1), None]);
        assert_eq!(pd.h, None);
        assert!(!pd.restricted);
    }

    #[test]
    fn intra_level_edge_clears_restricted() {
        let s = DynamicSchedule::static_graph(3, 0, vec![(0, 1), (0, 2), (1, 2)], 2);
        let pd = persistent_distances(&s);
        assert_eq!(pd.h, Some(1));
        assert!(!pd.restricted);
    }

    #[test]
    fn multigraph_checks() {
        let ok = MultigraphSchedule::new(2, 2, vec![vec![(0, 1), (1, 1)]]);
        assert!(validate_multigraph(&ok).is_empty());

        let isolated = MultigraphSchedule::new(2, 2, vec![vec![(0, 1)]]);
        assert_eq!(
            validate_multigraph(&isolated),
            vec![MultigraphViolation::Isolated { round: 0, node: 1 }]
        );

        let repeated = MultigraphSchedule::new(1, 2, vec![vec![(0, 2), (0, 2)]]);
        assert_eq!(
            validate_multigraph(&repeated),
            vec![MultigraphViolation::RepeatedLabel { round: 0, node: 0, label: 2 }]
        );

        let bad_label = MultigraphSchedule::new(1, 2, vec![vec![(0, 3)]]);
        assert!(matches!(
            validate_multigraph(&bad_label)[0],
            MultigraphViolation::LabelOutOfRange { label: 3, .. }
        ));
    }

    #[test]
    fn transformation_round_with_three_labels() {
        let m = MultigraphSchedule::new(1, 3, vec![vec![(0, 1), (0, 2), (0, 3)]]);
        let lift = dbl_to_pd2(&m).unwrap();
        let w = lift.back_node(0);
        let mut nbrs = lift.schedule.adjacency(0)[w].clone();
        nbrs.sort();
        let expected: Vec<usize> = (1..=3).map(|id| lift.front_node(id).unwrap()).collect();
        assert_eq!(nbrs, expected);
    }

    #[test]
    fn single_edge_lifts_to_path() {
        let m = MultigraphSchedule::new(1, 1, vec![vec![(0, 1)]]);
        let lift = dbl_to_pd2(&m).unwrap();
        assert_eq!(lift.schedule.node_count, 3);
        assert_eq!(lift.schedule.rounds[0], vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn lift_rejects_invalid_multigraph() {
        let m = MultigraphSchedule::new(2, 2, vec![vec![(0, 1)]]);
        assert!(matches!(dbl_to_pd2(&m), Err(Error::InvalidMultigraph(_))));
    }

    #[test]
    fn chain_extend_rejects_small_diameter() {
        let s = DynamicSchedule::star(2, 1);
        assert_eq!(chain_extend(&s, 1), Err(Error::DiameterTooSmall(1)));
        assert!(matches!(chain_extend(&s, 3), Err(Error::NotPd2(_))));
    }

    #[test]
    fn chain_extend_two_is_identity() {
        let m = MultigraphSchedule::new(2, 2, vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 1)]]);
        let s = dbl_to_pd2(&m).unwrap().schedule;
        assert_eq!(chain_extend(&s, 2).unwrap(), s);
    }

    #[test]
    fn chain_extend_moves_front_layer() {
        let m = MultigraphSchedule::new(2, 2, vec![vec![(0, 1), (1, 2)]]);
        let s = dbl_to_pd2(&m).unwrap().schedule;
        let ext = chain_extend(&s, 5).unwrap();
        assert!(validate_schedule(&ext).is_empty());
        let pd = persistent_distances(&ext);
        assert_eq!(pd.level(4), vec![1, 2]);
        assert_eq!(pd.level(5), vec![3, 4]);
        assert_eq!(pd.h, Some(5));
    }

    #[test]
    fn schedule_json_format() {
        let text = r#"{"type":"graph","nodes":3,"leader":0,"rounds":[[[0,1],[0,2]]]}"#;
        let parsed = AnySchedule::from_json(text).unwrap();
        assert_eq!(parsed, AnySchedule::Graph(DynamicSchedule::star(2, 1)));
        assert_eq!(parsed.to_json(), text);

        let text = r#"{"type":"multigraph","w":1,"k":2,"rounds":[[[0,1],[0,2]]]}"#;
        let parsed = AnySchedule::from_json(text).unwrap();
        assert_eq!(
            parsed,
            AnySchedule::Multigraph(MultigraphSchedule::new(1, 2, vec![vec![(0, 1), (0, 2)]]))
        );
        assert_eq!(parsed.to_json(), text);
    }

    #[test]
    fn label_set_order_and_bits() {
        let a: LabelSet = [1].into_iter().collect();
        let b: LabelSet = [2].into_iter().collect();
        let ab: LabelSet = [2, 1].into_iter().collect();
        assert!(a < b && b < ab);
        assert_eq!(ab.labels().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(ab.len(), 2);
    }
}
