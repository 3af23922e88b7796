//! Leader counting protocols.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{leader_vector_from_history, solve_nonneg};
use crate::sim::{
    FdMessage, FdState, FullDisclosure, Inbox, LeaderHistory, NodeInput, Protocol, ProtocolRun,
    SendContext,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountStatus {
    Counted,
    AmbiguousAtHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountOutcome {
    pub count: Option<u64>,
    pub round: Option<usize>,
    pub status: CountStatus,
}

impl CountOutcome {
    pub fn from_run<S: Serialize, M: Serialize>(run: &ProtocolRun<S, M>) -> Self {
        match run.termination {
            Some(t) => CountOutcome { count: Some(t.count), round: Some(t.round), status: CountStatus::Counted },
            None => CountOutcome { count: None, round: None, status: CountStatus::AmbiguousAtHorizon },
        }
    }
}

/// G(PD)_1 is a static star around the leader, so one round of inbox counting
/// gives `|V|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StarCounter;

pub fn star_counter() -> StarCounter {
    StarCounter
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StarState {
    pub is_leader: bool,
    pub output: Option<u64>,
}

impl Protocol for StarCounter {
    type State = StarState;
    type Message = ();

    fn initial_state(&self, input: &NodeInput) -> StarState {
        StarState { is_leader: input.is_leader, output: None }
    }

    fn send(&self, _: &StarState, _: &SendContext) {}

    fn receive(&self, state: &StarState, round: usize, inbox: &Inbox<()>) -> Result<StarState, String> {
        let mut next = *state;
        if state.is_leader && round == 0 {
            next.output = Some(inbox.len() as u64 + 1);
        }
        Ok(next)
    }

    fn leader_output(&self, state: &StarState) -> Option<u64> {
        state.output
    }
}

/// Full disclosure on M(DBL_2); after every round the leader solves its
/// current system and outputs `|W|` once the nonnegative solution is unique.
#[derive(Debug, Clone, Copy)]
pub struct EquationSolverCounter {
    pub horizon: usize,
}

pub fn equation_solver_counter(horizon: usize) -> EquationSolverCounter {
    EquationSolverCounter { horizon }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolverState {
    pub inner: FdState,
    pub output: Option<u64>,
    /// Number of nonnegative solutions after the last round (leader only).
    pub candidates: usize,
}

impl SolverState {
    pub fn leader_history(&self) -> Option<&LeaderHistory> {
        self.inner.leader_history()
    }
}

impl Protocol for EquationSolverCounter {
    type State = SolverState;
    type Message = FdMessage;

    fn initial_state(&self, input: &NodeInput) -> SolverState {
        SolverState { inner: FullDisclosure.initial_state(input), output: None, candidates: 0 }
    }

    fn send(&self, state: &SolverState, ctx: &SendContext) -> FdMessage {
        FullDisclosure.send(&state.inner, ctx)
    }

    fn receive(&self, state: &SolverState, round: usize, inbox: &Inbox<FdMessage>) -> Result<SolverState, String> {
        let inner = FullDisclosure.receive(&state.inner, round, inbox)?;
        let FdState::Leader(history) = &inner else {
            return Ok(SolverState { inner, output: None, candidates: 0 });
        };
        let m = leader_vector_from_history(history).map_err(|e| e.to_string())?;
        let solutions = solve_nonneg(&m, m.round).map_err(|e| e.to_string())?;
        let output = match solutions.as_slice() {
            [] => return Err(format!("leader vector at round {round} has no nonnegative solution")),
            [only] => Some(only.population()),
            _ => None,
        };
        Ok(SolverState { inner, output, candidates: solutions.len() })
    }

    fn leader_output(&self, state: &SolverState) -> Option<u64> {
        state.output
    }
}

/// Restricted G(PD)_2 with known degrees: V2 nodes split a unit across their
/// V1 neighbours, V1 nodes forward the sum, and the leader adds everything up.
#[derive(Debug, Clone, Copy, Default)]
pub struct DegreeDetectorCounter;

pub fn degree_detector_counter() -> DegreeDetectorCounter {
    DegreeDetectorCounter
}

/// Round at which the leader emits its count.
pub const DEGREE_DETECTOR_OUTPUT_ROUND: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DegreeMessage {
    Quiet,
    /// Sent by a V2 node whose degree was not revealed.
    Blind,
    Share(BigRational),
    Sum(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeState {
    pub level: Option<usize>,
    /// V1: shares received in round 0. Leader: sums received in round 1.
    pub total: BigRational,
    pub output: Option<u64>,
}

impl Protocol for DegreeDetectorCounter {
    type State = DegreeState;
    type Message = DegreeMessage;

    fn initial_state(&self, input: &NodeInput) -> DegreeState {
        let level = if input.is_leader { Some(0) } else { input.level };
        DegreeState { level, total: BigRational::zero(), output: None }
    }

    fn send(&self, state: &DegreeState, ctx: &SendContext) -> DegreeMessage {
        match (state.level, ctx.round) {
            (Some(2), 0) => match ctx.degree {
                Some(d) if d > 0 => DegreeMessage::Share(BigRational::new(BigInt::from(1), BigInt::from(d))),
                _ => DegreeMessage::Blind,
            },
            (Some(1), 1) => DegreeMessage::Sum(state.total.clone()),
            _ => DegreeMessage::Quiet,
        }
    }

    fn receive(&self, state: &DegreeState, round: usize, inbox: &Inbox<DegreeMessage>) -> Result<DegreeState, String> {
        let mut next = state.clone();
        let level = state.level.ok_or("degree detector needs every node's level declared")?;
        match (level, round) {
            (1, 0) => {
                for msg in inbox.iter() {
                    match msg {
                        DegreeMessage::Share(q) => next.total += q,
                        DegreeMessage::Blind => return Err("degree oracle is switched off".into()),
                        _ => {}
                    }
                }
            }
            (0, 1) => {
                for msg in inbox.iter() {
                    if let DegreeMessage::Sum(q) = msg {
                        next.total += q;
                    }
                }
            }
            (0, DEGREE_DETECTOR_OUTPUT_ROUND) => {
                if !state.total.is_integer() {
                    return Err(format!(
                        "V2 total {} is not an integer; the schedule is not a restricted G(PD)_2",
                        state.total
                    ));
                }
                let back = state.total.to_integer().to_u64().ok_or("V2 total out of range")?;
                next.output = Some(1 + inbox.len() as u64 + back);
            }
            _ => {}
        }
        Ok(next)
    }

    fn leader_output(&self, state: &DegreeState) -> Option<u64> {
        state.output
    }
}
