//! Progressive edge growth (PEG) construction of column-regular LDPC matrices.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CodeError, LinearCode, ParityCheckMatrix, Result};
use crate::channel::mix_seed;

const MAX_ATTEMPTS: usize = 32;

/// Builds a `rows × n` parity-check matrix with every column of weight `col_weight`.
///
/// Each new edge of a variable node goes to a check node outside the
/// variable's current computation tree when one exists, otherwise to one at
/// maximum distance; ties are broken by lowest check degree, then at random.
pub fn peg_matrix(n: usize, rows: usize, col_weight: usize, seed: u64) -> Result<ParityCheckMatrix> {
    if col_weight < 2 {
        return Err(CodeError::ColumnWeight(col_weight));
    }
    if col_weight > rows {
        return Err(CodeError::ColumnWeightTooLarge {
            weight: col_weight,
            rows,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check_adj: Vec<Vec<usize>> = vec![Vec::new(); rows];
    let mut var_adj: Vec<Vec<usize>> = vec![Vec::new(); n];

    // BFS scratch, versioned to avoid clearing
    let mut check_mark = vec![0u32; rows];
    let mut var_mark = vec![0u32; n];
    let mut stamp = 0u32;

    for v in 0..n {
        for edge in 0..col_weight {
            let candidates: Vec<usize> = if edge == 0 {
                (0..rows).collect()
            } else {
                stamp += 1;
                let mut frontier: Vec<usize> = Vec::new();
                let mut reached = 0usize;
                for &c in &var_adj[v] {
                    check_mark[c] = stamp;
                    frontier.push(c);
                    reached += 1;
                }
                var_mark[v] = stamp;
                let mut previous_unreached: Vec<usize> =
                    (0..rows).filter(|&c| check_mark[c] != stamp).collect();
                loop {
                    let mut next = Vec::new();
                    for &c in &frontier {
                        for &u in &check_adj[c] {
                            if var_mark[u] == stamp {
                                continue;
                            }
                            var_mark[u] = stamp;
                            for &c2 in &var_adj[u] {
                                if check_mark[c2] != stamp {
                                    check_mark[c2] = stamp;
                                    next.push(c2);
                                }
                            }
                        }
                    }
                    reached += next.len();
                    if next.is_empty() {
                        // tree saturated below full coverage
                        break previous_unreached;
                    }
                    if reached == rows {
                        break previous_unreached;
                    }
                    previous_unreached.retain(|&c| check_mark[c] != stamp);
                    frontier = next;
                }
            };
            let candidates: Vec<usize> = candidates
                .into_iter()
                .filter(|c| !var_adj[v].contains(c))
                .collect();
            let min_deg = candidates
                .iter()
                .map(|&c| check_adj[c].len())
                .min()
                .expect("col_weight ≤ rows leaves at least one candidate");
            let lightest: Vec<usize> = candidates
                .into_iter()
                .filter(|&c| check_adj[c].len() == min_deg)
                .collect();
            let &c = lightest.choose(&mut rng).expect("nonempty");
            check_adj[c].push(v);
            var_adj[v].push(c);
        }
    }
    ParityCheckMatrix::from_rows(n, check_adj)
}

/// Generates an `(n, k)` LDPC code in systematic form.
///
/// The parity-check matrix is regenerated from derived seeds until it has
/// full row rank `n - k`; the result is deterministic in `seed`.
pub fn ldpc_construct(n: usize, k: usize, col_weight: usize, seed: u64) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return Err(CodeError::Dimensions { n, k });
    }
    let rows = n - k;
    for attempt in 0..MAX_ATTEMPTS {
        let h = peg_matrix(n, rows, col_weight, mix_seed(seed, attempt as u64))?;
        let code = LinearCode::from_parity_check(&h)?;
        if code.k() == k {
            return Ok(code);
        }
        log::debug!("PEG attempt {attempt}: rank deficient, retrying");
    }
    Err(CodeError::RankDeficient {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Length of the shortest cycle in the Tanner graph, by BFS from every variable.
    fn girth(h: &ParityCheckMatrix) -> usize {
        let n = h.n_cols();
        let mut best = usize::MAX;
        for start in 0..n {
            // nodes: variables 0..n, checks n..n+rows
            let total = n + h.n_rows();
            let mut dist = vec![usize::MAX; total];
            let mut parent = vec![usize::MAX; total];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let nbrs: Vec<usize> = if x < n {
                    h.cols()[x].iter().map(|&c| c + n).collect()
                } else {
                    h.rows()[x - n].clone()
                };
                for y in nbrs {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn toy_code_is_column_regular_and_systematic() {
        let code = ldpc_construct(12, 6, 3, 1).unwrap();
        let h = code.parity_check();
        assert_eq!(h.n_rows(), 6);
        assert!(h.cols().iter().all(|c| c.len() == 3));
        assert_eq!(code.k(), 6);
        // G·Hᵀ = 0, row by row
        for i in 0..6 {
            let mut e = vec![0u8; 6];
            e[i] = 1;
            let row = code.encode(&e).unwrap();
            assert!(h.is_codeword(&row));
            assert_eq!(&row[..6], &e[..]);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            ldpc_construct(12, 12, 3, 1),
            Err(CodeError::Dimensions { .. })
        ));
        assert!(matches!(
            ldpc_construct(12, 13, 3, 1),
            Err(CodeError::Dimensions { .. })
        ));
        assert!(matches!(
            ldpc_construct(12, 6, 1, 1),
            Err(CodeError::ColumnWeight(1))
        ));
    }

    #[test]
    fn deterministic_in_seed() {
        let a = peg_matrix(96, 48, 3, 7).unwrap();
        let b = peg_matrix(96, 48, 3, 7).unwrap();
        let c = peg_matrix(96, 48, 3, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn peg_avoids_four_cycles_and_balances_checks() {
        let h = peg_matrix(600, 300, 3, 3).unwrap();
        assert!(girth(&h) >= 6);
        let degs: Vec<usize> = h.rows().iter().map(Vec::len).collect();
        assert!(*degs.iter().min().unwrap() >= 5);
        assert!(*degs.iter().max().unwrap() <= 7);
    }
}
