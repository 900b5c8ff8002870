//! Brute-force reversibility test for a concrete spin factor.
//!
//! A Jordan algebra of operators is reversible when it is closed under the
//! symmetrized words `{a_1, …, a_m} = a_1⋯a_m + a_m⋯a_1`. For a spin factor
//! it is enough to feed the generators `c_j` into the words: products of
//! anticommuting symmetries reduce (up to sign) to products of distinct
//! generators, so words of length at most `k` (the number of generators)
//! exhaust every case.
//!
//! The verdict describes the representation at hand, not the abstract
//! isomorphism class of the algebra.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fermion::SpinFactor;
use crate::linalg::{frob, CMatrix};

pub const DEFAULT_MAX_LEN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reversibility {
    Reversible,
    NonReversible,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReversibilityReport {
    pub verdict: Reversibility,
    /// Basis indices (0 is the identity) of the first word leaving the span.
    pub violating_word: Vec<usize>,
    /// Relative residual `‖W - proj(W)‖_F / ‖W‖_F` of that word, or the
    /// largest one seen when no word leaves the span.
    pub residual_norm: f64,
    pub max_word_length: usize,
    pub words_checked: usize,
    pub notes: Vec<String>,
}

/// Enumerates symmetrized generator words of length `2..=max_len`, shortest
/// first, skipping words with equal neighbours and keeping one
/// representative per reversal pair.
pub fn reversibility_check(
    factor: &SpinFactor,
    max_len: usize,
    closure_tol: f64,
) -> Result<ReversibilityReport> {
    let max_len = max_len.max(2);
    let gens = factor.generators().symmetries();
    let k = gens.len();
    let d = factor.dim();
    let mut search = WordSearch {
        factor,
        gens,
        closure_tol,
        words_checked: 0,
        worst: 0.0,
        hit: None,
    };

    let id = CMatrix::identity(d, d);
    for len in 2..=max_len {
        let mut word = Vec::with_capacity(len);
        search.extend(&mut word, len, &id, &id)?;
        if search.hit.is_some() {
            break;
        }
    }

    let mut notes = Vec::new();
    let (verdict, violating_word, residual_norm) = match search.hit.take() {
        Some((word, r)) => (
            Reversibility::NonReversible,
            word.into_iter().map(|g| g + 1).collect(),
            r,
        ),
        None if max_len >= k => (Reversibility::Reversible, Vec::new(), search.worst),
        None => {
            notes.push(format!(
                "no violation up to length {max_len}; {k} generators need words up to length {k}"
            ));
            (Reversibility::Inconclusive, Vec::new(), search.worst)
        }
    };
    if verdict == Reversibility::Reversible && factor.len() >= 4 {
        notes.push(format!(
            "spin factor of dimension {} is reversible in this {d}-dimensional representation, \
             although abstract spin factors of dimension 4 or more are generally not",
            factor.len()
        ));
    }

    Ok(ReversibilityReport {
        verdict,
        violating_word,
        residual_norm,
        max_word_length: max_len,
        words_checked: search.words_checked,
        notes,
    })
}

struct WordSearch<'a> {
    factor: &'a SpinFactor,
    gens: &'a [CMatrix],
    closure_tol: f64,
    words_checked: usize,
    worst: f64,
    hit: Option<(Vec<usize>, f64)>,
}

impl WordSearch<'_> {
    /// Depth-first extension carrying both `c_{w1}⋯c_{wm}` and its reversal.
    fn extend(
        &mut self,
        word: &mut Vec<usize>,
        len: usize,
        forward: &CMatrix,
        backward: &CMatrix,
    ) -> Result<()> {
        if self.hit.is_some() {
            return Ok(());
        }
        if word.len() == len {
            return self.test(word, forward, backward);
        }
        for g in 0..self.gens.len() {
            if word.last() == Some(&g) {
                continue;
            }
            let f = forward * &self.gens[g];
            let b = &self.gens[g] * backward;
            word.push(g);
            self.extend(word, len, &f, &b)?;
            word.pop();
            if self.hit.is_some() {
                break;
            }
        }
        Ok(())
    }

    fn test(&mut self, word: &[usize], forward: &CMatrix, backward: &CMatrix) -> Result<()> {
        // One representative per reversal pair.
        if word.iter().rev().lt(word.iter()) {
            return Ok(());
        }
        self.words_checked += 1;
        let w = forward + backward;
        let norm = frob(&w);
        if norm <= 1e-12 * (self.factor.dim() as f64).sqrt() {
            return Ok(());
        }
        let rel = self.factor.residual(&w)? / norm;
        self.worst = self.worst.max(rel);
        if rel > self.closure_tol {
            self.hit = Some((word.to_vec(), rel));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{pauli, ChainConfig};
    use crate::fermion::{build_spin_factor, verify_spin_system};

    fn pauli_factor(indices: &[usize]) -> SpinFactor {
        let ops = indices.iter().map(|&i| pauli(i).unwrap()).collect();
        SpinFactor::from_spin_system(verify_spin_system(ops).unwrap()).unwrap()
    }

    #[test]
    fn one_site_pauli_factor_is_reversible() {
        let f = pauli_factor(&[1, 2, 3]);
        let r = reversibility_check(&f, 3, 1e-8).unwrap();
        assert_eq!(r.verdict, Reversibility::Reversible);
        assert!(r.violating_word.is_empty());
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn commutative_factor_is_reversible() {
        let f = pauli_factor(&[1]);
        let r = reversibility_check(&f, 5, 1e-8).unwrap();
        assert_eq!(r.verdict, Reversibility::Reversible);
        assert_eq!(r.words_checked, 0);
    }

    #[test]
    fn jw_factor_three_sites_is_not_reversible() {
        let f = build_spin_factor(&ChainConfig::new(3).unwrap()).unwrap();
        let r = reversibility_check(&f, 5, 1e-8).unwrap();
        assert_eq!(r.verdict, Reversibility::NonReversible);
        assert_eq!(r.violating_word, vec![1, 2, 3, 4]);
        assert!((r.residual_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn short_search_is_inconclusive() {
        let f = build_spin_factor(&ChainConfig::new(3).unwrap()).unwrap();
        let r = reversibility_check(&f, 3, 1e-8).unwrap();
        assert_eq!(r.verdict, Reversibility::Inconclusive);
    }

    #[test]
    fn verdict_is_monotone_in_length() {
        let f = build_spin_factor(&ChainConfig::new(2).unwrap()).unwrap();
        for m in 4..=6 {
            let r = reversibility_check(&f, m, 1e-8).unwrap();
            assert_eq!(r.verdict, Reversibility::NonReversible, "max_len {m}");
        }
    }
}
