use super::state::{NetworkState, INACTIVE};
use crate::error::{Error, Result};

/// Single-source shortest latencies over active links.
///
/// Dense O(V²) Dijkstra. Unreachable nodes, and any path whose total latency
/// reaches the sentinel, are reported as [`INACTIVE`].
pub fn shortest_latencies(state: &NetworkState, source: usize) -> Result<Vec<f64>> {
    let n = state.node_count();
    if source >= n {
        return Err(Error::NodeOutOfRange { node: source, nodes: n });
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(u) = next else { break };
        done[u] = true;
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            let w = state.weight(u, v);
            if w >= INACTIVE {
                continue;
            }
            let candidate = dist[u] + w;
            if candidate < dist[v] {
                dist[v] = candidate;
            }
        }
    }
    Ok(dist.into_iter().map(|d| d.min(INACTIVE)).collect())
}

/// Fraction of all nodes that hear from `attacker` strictly before `honest`.
///
/// The two endpoints are excluded from the count but not from the
/// denominator, so the result lies in `[0, (V - 2) / V]`.
pub fn gamma_of(state: &NetworkState, attacker: usize, honest: usize) -> Result<f64> {
    let n = state.node_count();
    if attacker == honest {
        return Err(Error::InvalidParameter(format!(
            "attacker and honest node are both {attacker}"
        )));
    }
    let from_attacker = shortest_latencies(state, attacker)?;
    let from_honest = shortest_latencies(state, honest)?;
    let closer = (0..n)
        .filter(|&i| i != attacker && i != honest)
        .filter(|&i| from_attacker[i] < from_honest[i])
        .count();
    Ok(closer as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_prefers_two_hops() {
        let s = NetworkState::disconnected(3)
            .with_link(0, 1, 1.0)
            .with_link(1, 2, 1.0)
            .with_link(0, 2, 5.0);
        assert_eq!(shortest_latencies(&s, 0).unwrap(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn isolated_node_is_unreachable() {
        let s = NetworkState::disconnected(3).with_link(0, 1, 7.5);
        assert_eq!(shortest_latencies(&s, 0).unwrap(), vec![0.0, 7.5, INACTIVE]);
    }

    #[test]
    fn empty_graph() {
        let d = shortest_latencies(&NetworkState::disconnected(4), 2).unwrap();
        assert_eq!(d, vec![INACTIVE, INACTIVE, 0.0, INACTIVE]);
    }

    #[test]
    fn source_out_of_range() {
        assert!(shortest_latencies(&NetworkState::disconnected(4), 4).is_err());
    }

    #[test]
    fn equal_weights_give_zero_gamma() {
        let n = 10;
        let mut s = NetworkState::disconnected(n);
        for i in 0..n {
            for j in i + 1..n {
                s = s.with_link(i, j, 3.0);
            }
        }
        assert_eq!(gamma_of(&s, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn hub_attacker_takes_everyone() {
        let n = 10;
        let mut s = NetworkState::disconnected(n);
        for i in 1..n {
            s = s.with_link(0, i, 1.0);
        }
        // Honest node 1 only reaches others through the attacker.
        let g = gamma_of(&s, 0, 1).unwrap();
        assert!((g - (n - 2) as f64 / n as f64).abs() < 1e-15);
        assert!(gamma_of(&s, 3, 3).is_err());
    }
}
