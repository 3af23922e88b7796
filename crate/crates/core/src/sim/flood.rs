use crate::error::{Error, Result};
use crate::graph::DynamicSchedule;

/// Number of rounds a flood started by `source` at round `start` needs to
/// reach every node, with every informed node rebroadcasting each round. The
/// last recorded round repeats forever, so the flood either finishes or the
/// final graph is disconnected.
pub fn flood_time(s: &DynamicSchedule, source: usize, start: usize) -> Result<usize> {
    let n = s.node_count;
    let mut informed = vec![false; n];
    informed[source] = true;
    let mut remaining = n - 1;
    let cap = s.len().saturating_sub(start) + n;
    let mut t = 0;
    while remaining > 0 {
        if t >= cap {
            return Err(Error::HorizonTooShort { node: source, round: start });
        }
        let mut next = informed.clone();
        for &(u, v) in s.round(start + t) {
            if informed[u] && !next[v] {
                next[v] = true;
                remaining -= 1;
            }
            if informed[v] && !next[u] {
                next[u] = true;
                remaining -= 1;
            }
        }
        informed = next;
        t += 1;
    }
    Ok(t)
}

/// Largest flood completion time over every node and start round. Start
/// rounds past the end behave like the last round, so they are covered by it.
pub fn measure_dynamic_diameter(s: &DynamicSchedule) -> Result<usize> {
    if s.node_count == 0 {
        return Err(Error::InvalidSchedule("schedule has no nodes".into()));
    }
    if s.is_empty() && s.node_count > 1 {
        return Err(Error::HorizonTooShort { node: 0, round: 0 });
    }
    let mut worst = 0;
    for start in 0..s.len().max(1) {
        for v in 0..s.node_count {
            worst = worst.max(flood_time(s, v, start)?);
        }
    }
    Ok(worst)
}
