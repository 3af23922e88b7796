//! Pairs of instances of different size that the leader cannot tell apart.

use crate::algebra::{build_matrix, kernel_recursive, CountVector, History, LeaderVector};
use crate::error::{Error, Result};
use crate::graph::{chain_extend, dbl_to_pd2, DynamicSchedule, MultigraphSchedule, Pd2Lift};
use crate::sim::{run, FdState, FullDisclosure, LeaderHistory, RunOptions};

/// Two count vectors related by the kernel, with their realizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub round: usize,
    pub s: CountVector,
    pub s_prime: CountVector,
    pub m: MultigraphSchedule,
    pub m_prime: MultigraphSchedule,
    /// `M_r s`, shared with `s_prime` when the pair is a genuine witness.
    pub leader_vector: LeaderVector,
}

impl WitnessPair {
    /// Realizes both vectors without checking they form a witness.
    pub fn from_vectors(s: CountVector, s_prime: CountVector) -> Result<Self> {
        if s.round != s_prime.round {
            return Err(Error::DimensionMismatch { expected: s.round, found: s_prime.round });
        }
        let round = s.round;
        let leader_vector = build_matrix(round).mul_count(&s)?;
        Ok(WitnessPair {
            round,
            m: realize_multigraph(&s)?,
            m_prime: realize_multigraph(&s_prime)?,
            s,
            s_prime,
            leader_vector,
        })
    }

    pub fn populations(&self) -> (u64, u64) {
        (self.s.population(), self.s_prime.population())
    }
}

/// `s` puts one node on each history where `k_r` is negative; `s' = s + k_r`.
pub fn build_ambiguous_pair(r: usize) -> WitnessPair {
    let k = kernel_recursive(r);
    let s = CountVector { round: r, counts: k.entries.iter().map(|&x| u64::from(x < 0)).collect() };
    let s_prime = s.shifted(&k, 1).expect("s covers the negative support of k_r");
    WitnessPair::from_vectors(s, s_prime).expect("witness vectors are realizable")
}

/// One node per unit of `s`, in history order; the node with history
/// `[x_0, ..., x_r]` is joined to the leader in round `i` by exactly the labels
/// of `x_i`.
pub fn realize_multigraph(s: &CountVector) -> Result<MultigraphSchedule> {
    let population = s.population();
    if population == 0 {
        return Err(Error::ZeroPopulation);
    }
    let depth = s.round + 1;
    let mut histories = Vec::with_capacity(population as usize);
    for (index, &count) in s.counts.iter().enumerate() {
        let h = History::from_index(depth, index);
        histories.extend(std::iter::repeat_n(h, count as usize));
    }
    let rounds = (0..depth)
        .map(|i| {
            histories
                .iter()
                .enumerate()
                .flat_map(|(node, h)| h.0[i].labels().labels().map(move |l| (node, l)).collect::<Vec<_>>())
                .collect()
        })
        .collect();
    Ok(MultigraphSchedule::new(histories.len(), 2, rounds))
}

/// Leader histories of a full-disclosure run, one per round.
pub fn leader_histories(m: &MultigraphSchedule, rounds: usize) -> Result<Vec<LeaderHistory>> {
    let run = run(m, &FullDisclosure, rounds, &RunOptions::default())?;
    Ok(run
        .leader_states()
        .into_iter()
        .map(|s| match s {
            FdState::Leader(h) => h.clone(),
            FdState::Node(_) => unreachable!("node 0 is the leader"),
        })
        .collect())
}

/// Full-disclosure leader histories agree at every round up to the pair's
/// round. Any deterministic leader-side protocol only sees a function of this
/// history, so equality here rules out every counting protocol.
pub fn verify_indistinguishable(p: &WitnessPair) -> Result<bool> {
    let rounds = p.round + 1;
    Ok(leader_histories(&p.m, rounds)? == leader_histories(&p.m_prime, rounds)?)
}

pub fn lift_pair_to_pd2(p: &WitnessPair) -> Result<(Pd2Lift, Pd2Lift)> {
    Ok((dbl_to_pd2(&p.m)?, dbl_to_pd2(&p.m_prime)?))
}

/// Lifts both instances and pushes their front layer `d - 1` hops from the leader.
pub fn lift_pair_to_diameter(p: &WitnessPair, d: usize) -> Result<(DynamicSchedule, DynamicSchedule)> {
    let (a, b) = lift_pair_to_pd2(p)?;
    Ok((chain_extend(&a.schedule, d)?, chain_extend(&b.schedule, d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_multigraph;

    #[test]
    fn round_one_pair() {
        let p = build_ambiguous_pair(1);
        assert_eq!(p.s.counts, vec![0, 0, 1, 0, 0, 1, 1, 1, 0]);
        assert_eq!(p.s_prime.counts, vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(p.populations(), (4, 5));
        assert!(verify_indistinguishable(&p).unwrap());
    }

    #[test]
    fn round_zero_pair() {
        let p = build_ambiguous_pair(0);
        assert_eq!(p.s.counts, vec![0, 0, 1]);
        assert_eq!(p.s_prime.counts, vec![1, 1, 0]);
        let m = build_matrix(0);
        assert_eq!(m.mul_count(&p.s).unwrap(), m.mul_count(&p.s_prime).unwrap());
    }

    #[test]
    fn round_two_populations() {
        assert_eq!(build_ambiguous_pair(2).populations(), (13, 14));
    }

    #[test]
    fn realize_double_label_nodes() {
        let s = CountVector::new(0, vec![0, 0, 2]).unwrap();
        let m = realize_multigraph(&s).unwrap();
        assert_eq!(m.non_leader_count, 2);
        assert_eq!(m.rounds, vec![vec![(0, 1), (0, 2), (1, 1), (1, 2)]]);
        assert!(validate_multigraph(&m).is_empty());
    }

    #[test]
    fn realize_single_node() {
        let s = CountVector::new(0, vec![1, 0, 0]).unwrap();
        let m = realize_multigraph(&s).unwrap();
        assert_eq!(m.rounds, vec![vec![(0, 1)]]);
        let zero = CountVector::new(0, vec![0, 0, 0]).unwrap();
        assert_eq!(realize_multigraph(&zero), Err(Error::ZeroPopulation));
    }

    #[test]
    fn self_pair_is_indistinguishable() {
        let s = build_ambiguous_pair(1).s;
        let p = WitnessPair::from_vectors(s.clone(), s).unwrap();
        assert!(verify_indistinguishable(&p).unwrap());
    }

    #[test]
    fn perturbed_pair_is_distinguishable() {
        let p = build_ambiguous_pair(1);
        let mut bumped = p.s_prime.clone();
        bumped.counts[0] += 1;
        let q = WitnessPair::from_vectors(p.s.clone(), bumped).unwrap();
        assert!(!verify_indistinguishable(&q).unwrap());
    }

    #[test]
    fn lifted_sizes() {
        let (a, b) = lift_pair_to_pd2(&build_ambiguous_pair(0)).unwrap();
        assert_eq!((a.schedule.node_count, b.schedule.node_count), (4, 5));
        let (a, b) = lift_pair_to_pd2(&build_ambiguous_pair(1)).unwrap();
        assert_eq!((a.schedule.node_count, b.schedule.node_count), (7, 8));
    }

    #[test]
    fn diameter_two_is_plain_lift() {
        let p = build_ambiguous_pair(1);
        let (a, b) = lift_pair_to_pd2(&p).unwrap();
        let (c, d) = lift_pair_to_diameter(&p, 2).unwrap();
        assert_eq!((a.schedule, b.schedule), (c, d));
        assert!(lift_pair_to_diameter(&p, 1).is_err());
    }
}
