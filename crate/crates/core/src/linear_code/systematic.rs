use super::{CodeError, ParityCheckMatrix, Result};

type Word = u64;
const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

fn get_bit(row: &[Word], i: usize) -> bool {
    (row[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
}

fn set_bit(row: &mut [Word], i: usize) {
    row[i / WORD_BITS] |= 1 << (i % WORD_BITS);
}

/// Generator `[I | P]` of a systematic binary code, stored as the parity
/// equations: parity bit `i` is the inner product of row `i` with the message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicGenerator {
    n: usize,
    k: usize,
    parity_eqs: Vec<Vec<Word>>,
}

impl SystematicGenerator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dense `k × (n - k)` parity part `P`.
    pub fn parity_part(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| {
                self.parity_eqs
                    .iter()
                    .map(|eq| get_bit(eq, i) as u8)
                    .collect()
            })
            .collect()
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k {
            return Err(CodeError::Length {
                expected: self.k,
                got: msg.len(),
            });
        }
        let mut packed = vec![0 as Word; words_for(self.k)];
        for (i, &b) in msg.iter().enumerate() {
            if b & 1 == 1 {
                set_bit(&mut packed, i);
            }
        }
        let mut out = Vec::with_capacity(self.n);
        out.extend(msg.iter().map(|b| b & 1));
        out.extend(self.parity_eqs.iter().map(|eq| {
            let ones: u32 = eq
                .iter()
                .zip(&packed)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            (ones & 1) as u8
        }));
        Ok(out)
    }
}

/// Binary linear code in systematic coordinate order.
///
/// Coordinates `0..k` carry the message and `k..n` the parity. When the
/// source parity-check matrix needed column reordering to reach that form,
/// `column_order[p]` gives the source column now at position `p`, and
/// [`LinearCode::parity_check`] is already expressed in the new order.
#[derive(Debug, Clone)]
pub struct LinearCode {
    h: ParityCheckMatrix,
    generator: SystematicGenerator,
    column_order: Vec<usize>,
}

impl LinearCode {
    /// Derives a systematic generator by Gauss-Jordan elimination over GF(2).
    ///
    /// Pivots are searched from the last column backwards so parity lands on
    /// trailing coordinates whenever possible. Redundant rows are tolerated;
    /// the code dimension is `n - rank(H)`.
    pub fn from_parity_check(h: &ParityCheckMatrix) -> Result<Self> {
        let n = h.n_cols();
        let r = h.n_rows();
        let nw = words_for(n);
        let mut rows: Vec<Vec<Word>> = h
            .rows()
            .iter()
            .map(|row| {
                let mut w = vec![0 as Word; nw];
                for &c in row {
                    set_bit(&mut w, c);
                }
                w
            })
            .collect();
        let mut pivots: Vec<usize> = Vec::with_capacity(r);
        for col in (0..n).rev() {
            let rank = pivots.len();
            if rank == r {
                break;
            }
            let Some(p) = (rank..r).find(|&i| get_bit(&rows[i], col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && get_bit(row, col) {
                    row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
        }
        let rank = pivots.len();
        // parity coordinates in ascending source order
        let mut by_col: Vec<(usize, Vec<Word>)> = pivots.iter().copied().zip(rows.drain(..rank)).collect();
        by_col.sort_unstable_by_key(|(c, _)| *c);
        let (pivots, rows): (Vec<usize>, Vec<Vec<Word>>) = by_col.into_iter().unzip();
        let k = n - rank;
        if k == 0 {
            return Err(CodeError::Dimensions { n, k });
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let info_cols: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let parity_eqs = rows
            .iter()
            .map(|row| {
                let mut eq = vec![0 as Word; words_for(k)];
                for (i, &c) in info_cols.iter().enumerate() {
                    if get_bit(row, c) {
                        set_bit(&mut eq, i);
                    }
                }
                eq
            })
            .collect();
        let column_order: Vec<usize> = info_cols.iter().chain(&pivots).copied().collect();
        let h = h.permute_columns(&column_order)?;
        Ok(LinearCode {
            h,
            generator: SystematicGenerator { n, k, parity_eqs },
            column_order,
        })
    }

    pub fn n(&self) -> usize {
        self.generator.n
    }

    pub fn k(&self) -> usize {
        self.generator.k
    }

    pub fn parity_check(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn generator(&self) -> &SystematicGenerator {
        &self.generator
    }

    pub fn column_order(&self) -> &[usize] {
        &self.column_order
    }

    /// `(msg, msg·P)`.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        self.generator.encode(msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_code::ldpc_construct;

    fn hamming() -> ParityCheckMatrix {
        ParityCheckMatrix::from_rows(7, vec![vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6]])
            .unwrap()
    }

    #[test]
    fn hamming_generator() {
        let code = LinearCode::from_parity_check(&hamming()).unwrap();
        assert_eq!(code.k(), 4);
        assert_eq!(code.column_order(), &[0, 1, 2, 3, 4, 5, 6]);
        for msg in 0u8..16 {
            let bits: Vec<u8> = (0..4).map(|i| (msg >> i) & 1).collect();
            let v = code.encode(&bits).unwrap();
            assert!(code.parity_check().is_codeword(&v));
            assert_eq!(&v[..4], &bits[..]);
        }
        assert!(code.encode(&[1, 0]).is_err());
    }

    #[test]
    fn redundant_rows_reduce_rank() {
        let mut rows = hamming().rows().to_vec();
        let extra: Vec<usize> = {
            // row0 ⊕ row1
            let mut v = vec![0u8; 7];
            for &c in rows[0].iter().chain(&rows[1]) {
                v[c] ^= 1;
            }
            (0..7).filter(|&c| v[c] == 1).collect()
        };
        rows.push(extra);
        let h = ParityCheckMatrix::from_rows(7, rows).unwrap();
        let code = LinearCode::from_parity_check(&h).unwrap();
        assert_eq!(code.k(), 4);
        let v = code.encode(&[1, 1, 0, 1]).unwrap();
        assert!(code.parity_check().is_codeword(&v));
    }

    #[test]
    fn needs_column_permutation() {
        // parity cannot sit on the last three columns: column 6 duplicates column 5
        let h = ParityCheckMatrix::from_rows(6, vec![vec![0, 4, 5], vec![1, 3], vec![2, 3, 4, 5]])
            .unwrap();
        let code = LinearCode::from_parity_check(&h).unwrap();
        assert_eq!(code.k(), 3);
        let mut order = code.column_order().to_vec();
        order.sort_unstable();
        assert_eq!(order, (0..6).collect::<Vec<_>>());
        for msg in 0u8..8 {
            let bits: Vec<u8> = (0..3).map(|i| (msg >> i) & 1).collect();
            let v = code.encode(&bits).unwrap();
            assert!(code.parity_check().is_codeword(&v));
            // mapped back to source order it satisfies the source matrix
            let mut orig = vec![0u8; 6];
            for (p, &c) in code.column_order().iter().enumerate() {
                orig[c] = v[p];
            }
            assert!(h.is_codeword(&orig));
        }
    }

    #[test]
    fn parity_part_matches_unit_messages() {
        let code = ldpc_construct(24, 12, 3, 5).unwrap();
        let p = code.generator().parity_part();
        for (i, prow) in p.iter().enumerate() {
            let mut e = vec![0u8; 12];
            e[i] = 1;
            assert_eq!(&code.encode(&e).unwrap()[12..], &prow[..]);
        }
    }

    proptest::proptest! {
        #[test]
        fn encoding_is_linear(a in proptest::collection::vec(0u8..2, 30),
                              b in proptest::collection::vec(0u8..2, 30)) {
            let code = ldpc_construct(60, 30, 3, 11).unwrap();
            let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let va = code.encode(&a).unwrap();
            let vb = code.encode(&b).unwrap();
            let vab = code.encode(&ab).unwrap();
            let sum: Vec<u8> = va.iter().zip(&vb).map(|(x, y)| x ^ y).collect();
            proptest::prop_assert_eq!(vab, sum);
            proptest::prop_assert!(code.parity_check().is_codeword(&va));
        }
    }
}
