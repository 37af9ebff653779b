//! Flooding sum-product decoding in the log-likelihood-ratio domain.
//!
//! Inputs and outputs use `llr = ln(P(1) / P(0))`, so a positive value
//! favours bit 1. Internally messages use the opposite sign so the usual
//! tanh rule applies unchanged.

use super::{CodeError, ParityCheckMatrix, Result};

pub const DEFAULT_MAX_ITER: usize = 50;

/// Magnitude bound applied to channel LLRs before decoding.
pub const LLR_CLAMP: f64 = 40.0;

// keeps atanh finite when every incoming message is saturated
const TANH_LIMIT: f64 = 1.0 - 1e-15;
/// `tanh(x/2)` is exactly ±1 in f64 beyond this.
const MESSAGE_CLAMP: f64 = 80.0;

/// Per-coordinate probability that the codeword bit is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BitPrior {
    p1: Vec<f64>,
}

impl BitPrior {
    pub fn new(p1: Vec<f64>) -> Result<Self> {
        if let Some(i) = p1.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(CodeError::Probability(i));
        }
        Ok(BitPrior { p1 })
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    pub fn len(&self) -> usize {
        self.p1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p1.is_empty()
    }

    /// Clamped `ln(p1 / p0)` per coordinate.
    pub fn llrs(&self) -> Vec<f64> {
        self.p1
            .iter()
            .map(|&p| (p.ln() - (1.0 - p).ln()).clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub bits: Vec<u8>,
    pub converged: bool,
    /// Message-passing iterations run; 0 when the channel decisions already
    /// satisfied every check.
    pub iterations: usize,
}

/// `tanh(x/2)` through one `expm1`.
#[inline]
fn half_tanh(x: f64) -> f64 {
    let e = x.clamp(-MESSAGE_CLAMP, MESSAGE_CLAMP).exp_m1();
    e / (e + 2.0)
}

/// `2·atanh(p)` through one `ln`.
#[inline]
fn twice_atanh(p: f64) -> f64 {
    ((1.0 + p) / (1.0 - p)).ln()
}

/// Tanner-graph layout prepared once per parity-check matrix.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
    max_check_degree: usize,
}

impl BpDecoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let n = h.n_cols();
        let mut check_ptr = Vec::with_capacity(h.n_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.n_edges());
        check_ptr.push(0);
        for row in h.rows() {
            edge_var.extend_from_slice(row);
            check_ptr.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_ptr = Vec::with_capacity(n + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for edges in per_var {
            var_edges.extend(edges);
            var_ptr.push(var_edges.len());
        }
        let max_check_degree = h.rows().iter().map(Vec::len).max().unwrap_or(0);
        BpDecoder {
            n,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            max_check_degree,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    // a zero LLR is an undecided coordinate and blocks convergence
    fn syndrome_ok(&self, hard: &[u8], totals: &[f64]) -> bool {
        if totals.contains(&0.0) {
            return false;
        }
        self.check_ptr.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ hard[v])
                == 0
        })
    }

    /// Decodes channel LLRs (`ln(P1/P0)`), running at most `max_iter` iterations.
    pub fn decode(&self, llrs: &[f64], max_iter: usize) -> Result<DecodeOutcome> {
        if llrs.len() != self.n {
            return Err(CodeError::Length {
                expected: self.n,
                got: llrs.len(),
            });
        }
        // internal convention: ln(P0/P1)
        let channel: Vec<f64> = llrs
            .iter()
            .map(|&l| -l.clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect();
        let mut hard: Vec<u8> = channel.iter().map(|&l| (l < 0.0) as u8).collect();
        if self.syndrome_ok(&hard, &channel) {
            return Ok(DecodeOutcome {
                bits: hard,
                converged: true,
                iterations: 0,
            });
        }

        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0f64; self.edge_var.len()];
        let mut tanhs = vec![0.0f64; self.max_check_degree];
        let mut suffix = vec![0.0f64; self.max_check_degree + 1];
        let mut totals = channel.clone();

        for iter in 1..=max_iter {
            for w in self.check_ptr.windows(2) {
                let (start, end) = (w[0], w[1]);
                let d = end - start;
                for (t, &m) in tanhs.iter_mut().zip(&v2c[start..end]) {
                    *t = half_tanh(m);
                }
                suffix[d] = 1.0;
                for i in (0..d).rev() {
                    suffix[i] = suffix[i + 1] * tanhs[i];
                }
                let mut prefix = 1.0;
                for i in 0..d {
                    let p = (prefix * suffix[i + 1]).clamp(-TANH_LIMIT, TANH_LIMIT);
                    c2v[start + i] = twice_atanh(p);
                    prefix *= tanhs[i];
                }
            }
            for v in 0..self.n {
                let edges = &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]];
                let total = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                for &e in edges {
                    v2c[e] = total - c2v[e];
                }
                hard[v] = (total < 0.0) as u8;
                totals[v] = total;
            }
            if self.syndrome_ok(&hard, &totals) {
                return Ok(DecodeOutcome {
                    bits: hard,
                    converged: true,
                    iterations: iter,
                });
            }
        }
        Ok(DecodeOutcome {
            bits: hard,
            converged: false,
            iterations: max_iter,
        })
    }
}

/// One-shot decode from bit priors.
pub fn bp_decode(priors: &BitPrior, h: &ParityCheckMatrix, max_iter: usize) -> Result<DecodeOutcome> {
    BpDecoder::new(h).decode(&priors.llrs(), max_iter)
}
