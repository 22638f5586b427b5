//! Dehn's algorithm for `C'(1/6)` presentations.
//!
//! Each step finds the longest subword `t` of the current word that is a
//! prefix of some relator `r = t·c` with `|t| > |r|/2` (earliest position on
//! ties), replaces `t` by `c⁻¹` and freely reduces. The scan is over the
//! linear word, so every step keeps the group element unchanged:
//! `w = (p r p⁻¹) · w'` where `p` is the prefix before `t`.

use num_traits::Zero;
use thiserror::Error;

use crate::presentations::{common_prefix_len, PresentationError, SymmetrizedSet};
use crate::rational::Rational;
use crate::words::{reduced_words_up_to, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("Dehn's algorithm needs C'(1/6) but the maximal piece ratio is {lambda_star}")]
    NotSmallCancellation { lambda_star: Rational },
    #[error("search bound must be at least 1")]
    BadBound,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// One applied substitution: the input of the step equals
/// `conjugator · relator · conjugator⁻¹ · output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnStep {
    pub position: usize,
    pub matched: usize,
    pub relator: Word,
    pub conjugator: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnReduction {
    pub input: Word,
    pub output: Word,
    pub steps: Vec<DehnStep>,
}

impl DehnReduction {
    /// Multiplies the applied relator conjugates back onto the output.
    pub fn replay(&self) -> Word {
        let mut w = self.output.clone();
        for step in self.steps.iter().rev() {
            let conj = step.relator.conjugate_by(&step.conjugator);
            w = &conj * &w;
        }
        w
    }
}

/// A Dehn solver bound to a symmetrized set satisfying `C'(1/6)`.
#[derive(Debug, Clone)]
pub struct DehnSolver {
    set: SymmetrizedSet,
    lambda_star: Rational,
    /// Members grouped by first letter, indexed by `signed + rank`.
    by_first: Vec<Vec<usize>>,
    abelian_filter: bool,
}

impl DehnSolver {
    pub fn new(set: &SymmetrizedSet) -> Result<Self, DehnError> {
        let lambda_star = set.max_piece_ratio()?;
        if lambda_star >= Rational::new(1, 6) {
            return Err(DehnError::NotSmallCancellation { lambda_star });
        }
        let rank = set.generator_count() as i32;
        let mut by_first = vec![Vec::new(); (2 * rank + 1) as usize];
        for (i, r) in set.members().iter().enumerate() {
            let first = r.letters()[0].signed();
            by_first[(first + rank) as usize].push(i);
        }
        let abelian_filter = set.exponent_vectors().iter().all(|v| v.iter().all(Zero::is_zero));
        Ok(DehnSolver { set: set.clone(), lambda_star, by_first, abelian_filter })
    }

    pub fn lambda_star(&self) -> Rational {
        self.lambda_star
    }

    pub fn set(&self) -> &SymmetrizedSet {
        &self.set
    }

    /// All relators have zero exponent sums, so every commutator (and every
    /// trivial word) has zero exponent sums too.
    pub fn has_abelian_filter(&self) -> bool {
        self.abelian_filter
    }

    fn longest_match(&self, letters: &[crate::Generator]) -> Option<(usize, usize, usize)> {
        let rank = self.set.generator_count() as i32;
        let mut best: Option<(usize, usize, usize)> = None;
        for pos in 0..letters.len() {
            let slot = letters[pos].signed() + rank;
            let Some(candidates) = usize::try_from(slot).ok().and_then(|s| self.by_first.get(s)) else {
                continue;
            };
            for &ri in candidates {
                let r = &self.set.members()[ri];
                let len = common_prefix_len(&letters[pos..], r.letters());
                if 2 * len > r.len() && best.is_none_or(|(_, l, _)| len > l) {
                    best = Some((pos, len, ri));
                }
            }
        }
        best
    }

    pub fn reduce(&self, w: &Word) -> DehnReduction {
        let mut current = w.clone();
        let mut steps = Vec::new();
        while let Some((pos, len, ri)) = self.longest_match(current.letters()) {
            let r = &self.set.members()[ri];
            let letters = current.letters();
            let complement_inv = Word::from_reduced(r.letters()[len..].to_vec())
                .expect("subword of a relator is reduced")
                .inverse();
            let prefix = Word::from_reduced(letters[..pos].to_vec()).expect("prefix of reduced word");
            let next = Word::reduce(
                letters[..pos]
                    .iter()
                    .chain(complement_inv.letters())
                    .chain(&letters[pos + len..])
                    .copied(),
            );
            debug_assert!(next.len() < current.len());
            steps.push(DehnStep { position: pos, matched: len, relator: r.clone(), conjugator: prefix });
            current = next;
        }
        DehnReduction { input: w.clone(), output: current, steps }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        if self.abelian_filter && w.abelianization(self.set.generator_count()).iter().any(|&e| e != 0) {
            return false;
        }
        self.reduce(w).output.is_empty()
    }

    /// First `(x, y)` in shortlex-pair order with `|x|, |y| ≤ max_len` and
    /// `[x, y] = w` in the group.
    ///
    /// `None` is bounded evidence only, not a proof that `w` is not a commutator.
    pub fn bounded_commutator_search(&self, w: &Word, max_len: usize) -> Result<Option<(Word, Word)>, DehnError> {
        if max_len == 0 {
            return Err(DehnError::BadBound);
        }
        if self.abelian_filter && w.abelianization(self.set.generator_count()).iter().any(|&e| e != 0) {
            return Ok(None);
        }
        let candidates = reduced_words_up_to(self.set.generator_count(), max_len);
        let w_inv = w.inverse();
        for x in &candidates {
            for y in &candidates {
                let probe = Word::product([x, y, &x.inverse(), &y.inverse(), &w_inv]);
                if self.reduce(&probe).output.is_empty() {
                    return Ok(Some((x.clone(), y.clone())));
                }
            }
        }
        Ok(None)
    }
}

pub fn dehn_reduce(w: &Word, set: &SymmetrizedSet) -> Result<Word, DehnError> {
    Ok(DehnSolver::new(set)?.reduce(w).output)
}

pub fn is_trivial(w: &Word, set: &SymmetrizedSet) -> Result<bool, DehnError> {
    Ok(DehnSolver::new(set)?.is_trivial(w))
}

pub fn bounded_commutator_search(
    w: &Word,
    set: &SymmetrizedSet,
    max_len: usize,
) -> Result<Option<(Word, Word)>, DehnError> {
    DehnSolver::new(set)?.bounded_commutator_search(w, max_len)
}
