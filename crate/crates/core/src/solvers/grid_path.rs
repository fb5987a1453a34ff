use super::{Solution, SolveStatus};
use crate::problems::GridSpec;

/// Minimum-cost monotone path from the southwest to the northeast corner of
/// the grid, by dynamic programming over the topological order.
///
/// Costs may be negative; the DAG structure rules out negative cycles. Ties
/// are broken by preferring the east edge over the north edge, so the
/// returned indicator vector is a deterministic function of the costs.
pub fn solve_grid_shortest_path(spec: &GridSpec, costs: &[f64]) -> Solution {
    let k = spec.side();
    assert_eq!(costs.len(), spec.edge_count(), "cost dimension must be 2k(k-1)");

    #[derive(Clone, Copy, PartialEq)]
    enum Step {
        East,
        North,
        Sink,
    }

    // dist[node] = cheapest cost from node to the northeast corner.
    let mut dist = vec![0.0_f64; k * k];
    let mut step = vec![Step::Sink; k * k];
    // Process anti-diagonals from the sink backwards.
    for level in (0..2 * k - 2).rev() {
        for row in 0..k {
            if level < row {
                continue;
            }
            let col = level - row;
            if col >= k {
                continue;
            }
            let node = row * k + col;
            let east = spec.east_edge(row, col).map(|e| costs[e] + dist[row * k + col + 1]);
            let north = spec.north_edge(row, col).map(|e| costs[e] + dist[(row + 1) * k + col]);
            match (east, north) {
                (Some(e), Some(n)) => {
                    if e <= n {
                        dist[node] = e;
                        step[node] = Step::East;
                    } else {
                        dist[node] = n;
                        step[node] = Step::North;
                    }
                }
                (Some(e), None) => {
                    dist[node] = e;
                    step[node] = Step::East;
                }
                (None, Some(n)) => {
                    dist[node] = n;
                    step[node] = Step::North;
                }
                (None, None) => {}
            }
        }
    }

    let mut x = vec![0.0; spec.edge_count()];
    let (mut row, mut col) = (0, 0);
    while row * k + col != k * k - 1 {
        match step[row * k + col] {
            Step::East => {
                x[spec.east_edge(row, col).expect("east step has an east edge")] = 1.0;
                col += 1;
            }
            Step::North => {
                x[spec.north_edge(row, col).expect("north step has a north edge")] = 1.0;
                row += 1;
            }
            Step::Sink => unreachable!("walk reached a dead end before the sink"),
        }
    }

    let objective = crate::numerics::dot(costs, &x);
    Solution { x, objective, status: SolveStatus::Optimal }
}
