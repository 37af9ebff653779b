use super::{CodeError, Result};

/// Sparse parity-check matrix over GF(2), stored as row and column adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix with `n` columns from per-row column indices.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut cols = vec![Vec::new(); n];
        let mut sorted_rows = Vec::with_capacity(rows.len());
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(CodeError::BadEntry { row: r, col: w[0] });
                }
            }
            for &c in &row {
                if c >= n {
                    return Err(CodeError::BadEntry { row: r, col: c });
                }
                cols[c].push(r);
            }
            sorted_rows.push(row);
        }
        if let Some(c) = cols.iter().position(Vec::is_empty) {
            return Err(CodeError::EmptyColumn(c));
        }
        Ok(ParityCheckMatrix {
            n,
            rows: sorted_rows,
            cols,
        })
    }

    pub fn n_cols(&self) -> usize {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn n_edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&col).is_ok()
    }

    /// `H · vᵀ` over GF(2).
    pub fn syndrome(&self, v: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (v[c] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, v: &[u8]) -> bool {
        v.len() == self.n
            && self
                .rows
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (v[c] & 1)) == 0)
    }

    /// Same matrix with columns reordered: new column `p` is old column `order[p]`.
    pub fn permute_columns(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(CodeError::Length {
                expected: self.n,
                got: order.len(),
            });
        }
        let mut inverse = vec![usize::MAX; self.n];
        for (p, &c) in order.iter().enumerate() {
            if c >= self.n || inverse[c] != usize::MAX {
                return Err(CodeError::BadEntry { row: 0, col: c });
            }
            inverse[c] = p;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&c| inverse[c]).collect())
            .collect();
        Self::from_rows(self.n, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_entries() {
        assert!(ParityCheckMatrix::from_rows(3, vec![vec![0, 1], vec![1, 2]]).is_ok());
        assert!(matches!(
            ParityCheckMatrix::from_rows(3, vec![vec![0, 3], vec![1, 2]]),
            Err(CodeError::BadEntry { .. })
        ));
        assert!(matches!(
            ParityCheckMatrix::from_rows(3, vec![vec![0, 0, 1], vec![2]]),
            Err(CodeError::BadEntry { .. })
        ));
        assert!(matches!(
            ParityCheckMatrix::from_rows(3, vec![vec![0, 1]]),
            Err(CodeError::EmptyColumn(2))
        ));
    }

    #[test]
    fn syndrome_and_permutation() {
        let h = ParityCheckMatrix::from_rows(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(h.syndrome(&[1, 1, 0, 0]), vec![0, 0]);
        assert_eq!(h.syndrome(&[1, 0, 0, 0]), vec![1, 0]);
        assert!(h.is_codeword(&[1, 0, 1, 1]));
        let p = h.permute_columns(&[3, 2, 1, 0]).unwrap();
        assert!(p.is_codeword(&[1, 1, 0, 1]));
        assert_eq!(p.cols()[3], vec![0]);
        assert_eq!(h.n_edges(), 5);
    }
}
