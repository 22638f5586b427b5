//! Presentations, symmetrized relator sets and the metric `C'(λ)` condition.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::words::{self, Generator, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("presentation needs at least one generator")]
    NoGenerators,
    #[error("relator {index} is empty")]
    EmptyRelator { index: usize },
    #[error("relator {relator} is not cyclically reduced")]
    NotCyclicallyReduced { relator: String },
    #[error("relator {relator} uses generator {generator} but only {count} are declared")]
    UnknownGenerator { relator: String, generator: u32, count: u32 },
    #[error("piece ratio needs at least two relators in the symmetrized set, found {0}")]
    TooFewRelators(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A finite presentation `⟨X | R⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generator_count: u32,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_count: u32, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if generator_count == 0 {
            return Err(PresentationError::NoGenerators);
        }
        for (index, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator { index });
            }
            if !r.is_cyclically_reduced() {
                return Err(PresentationError::NotCyclicallyReduced { relator: r.to_string() });
            }
            if r.max_generator() > generator_count {
                return Err(PresentationError::UnknownGenerator {
                    relator: r.to_string(),
                    generator: r.max_generator(),
                    count: generator_count,
                });
            }
        }
        Ok(Presentation { generator_count, relators })
    }

    pub fn generator_count(&self) -> u32 {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn symmetrize(&self) -> SymmetrizedSet {
        SymmetrizedSet::closure(self.generator_count, &self.relators)
    }

    /// Text format: `generators: <k>` then one relator per line; `#` starts a
    /// comment line.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut count = None;
        let mut relators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PresentationError::Parse { line: i + 1, message };
            if count.is_none() {
                let value = line
                    .strip_prefix("generators:")
                    .ok_or_else(|| err("expected `generators: <k>`".into()))?;
                count = Some(value.trim().parse::<u32>().map_err(|e| err(e.to_string()))?);
                continue;
            }
            let letters = words::parse_letters(line).map_err(|e| err(e.to_string()))?;
            let word = Word::from_reduced(letters).map_err(|_| PresentationError::NotCyclicallyReduced {
                relator: line.to_string(),
            })?;
            relators.push(word);
        }
        let count = count.ok_or(PresentationError::Parse { line: 0, message: "missing `generators:` line".into() })?;
        Presentation::new(count, relators)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("generators: {}\n", self.generator_count);
        for r in &self.relators {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Presentation::parse(s)
    }
}

/// Relators closed under rotation and inversion, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedSet {
    generator_count: u32,
    members: Vec<Word>,
}

impl SymmetrizedSet {
    fn closure(generator_count: u32, relators: &[Word]) -> Self {
        let mut set = BTreeSet::new();
        for r in relators {
            for base in [r.letters().to_vec(), r.inverse().into_letters()] {
                for k in 0..base.len() {
                    set.insert(Word::from_reduced(words::rotate(&base, k)).expect("rotations of cyclically reduced words are reduced"));
                }
            }
        }
        SymmetrizedSet { generator_count, members: set.into_iter().collect() }
    }

    pub fn generator_count(&self) -> u32 {
        self.generator_count
    }

    /// Members in lexicographic order.
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    pub fn max_relator_len(&self) -> usize {
        self.members.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Symmetrizing again changes nothing.
    pub fn resymmetrize(&self) -> SymmetrizedSet {
        SymmetrizedSet::closure(self.generator_count, &self.members)
    }

    /// `λ* = max |common prefix(r₁, r₂)| / |r₁|` over distinct members.
    ///
    /// In sorted order the longest common prefix of a member with any other
    /// member is attained at one of its two neighbours, so this is linear in
    /// the set size after sorting.
    pub fn max_piece_ratio(&self) -> Result<Rational, PresentationError> {
        let n = self.members.len();
        if n < 2 {
            return Err(PresentationError::TooFewRelators(n));
        }
        let mut best = Rational::zero();
        for (i, r) in self.members.iter().enumerate() {
            let before = i.checked_sub(1).map(|j| common_prefix_len(r.letters(), self.members[j].letters()));
            let after = self.members.get(i + 1).map(|s| common_prefix_len(r.letters(), s.letters()));
            let piece = before.into_iter().chain(after).max().unwrap_or(0);
            best = best.max(Rational::new(piece as i64, r.len() as i64));
        }
        Ok(best)
    }

    /// Whether `C'(λ)` holds, i.e. `λ > λ*`.
    pub fn satisfies_c_prime(&self, lambda: Rational) -> Result<bool, PresentationError> {
        Ok(lambda > self.max_piece_ratio()?)
    }

    /// No member is a proper power.
    pub fn torsion_free_surrogate(&self) -> bool {
        self.members.iter().all(|r| r.is_proper_power().is_none())
    }

    /// First member that is a proper power, if any.
    pub fn proper_power_member(&self) -> Option<&Word> {
        self.members.iter().find(|r| r.is_proper_power().is_some())
    }

    /// Exponent-sum vectors of all members.
    pub fn exponent_vectors(&self) -> Vec<Vec<i64>> {
        self.members.iter().map(|r| r.abelianization(self.generator_count)).collect()
    }

    /// Signed generator permutations mapping the set onto itself.
    ///
    /// Each symmetry is given as the images of `1..=k` as signed indices.
    pub fn signed_symmetries(&self) -> Vec<Vec<i32>> {
        let k = self.generator_count as usize;
        let mut out = Vec::new();
        for perm in permutations(k) {
            for signs in 0u32..(1 << k) {
                let images: Vec<i32> = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| if signs >> i & 1 == 1 { -(p as i32 + 1) } else { p as i32 + 1 })
                    .collect();
                let preserved = self.members.iter().all(|r| self.contains(&apply_signed(r, &images)));
                if preserved {
                    out.push(images);
                }
            }
        }
        out
    }
}

impl fmt::Display for SymmetrizedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(Word::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Applies a signed generator permutation (images of `1..=k`).
pub fn apply_signed(w: &Word, images: &[i32]) -> Word {
    w.map_letters(|g| {
        let image = images[g.index() as usize - 1];
        let h = Generator::from_signed(image).expect("images are nonzero");
        if g.is_inverse() {
            h.inverse()
        } else {
            h
        }
    })
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

pub fn common_prefix_len(a: &[Generator], b: &[Generator]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Outcome of the lemma-about-powers check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerOverlap {
    pub v_length: usize,
    #[serde(with = "rational::serde_string")]
    pub bound: Rational,
    pub holds: bool,
}

/// Length of the longest common prefix of `r` and `w^n` against
/// `(1/2 + λ)·|r|`.
///
/// `w` must be cyclically reduced and nonempty. That is the free-group
/// necessary condition for "not conjugate to a shorter word"; `holds` is only
/// meaningful when the group-level hypothesis is also true.
pub fn power_overlap_bound(w: &Word, n: i64, r: &Word, lambda: Rational) -> Result<PowerOverlap, PresentationError> {
    if w.is_empty() || !w.is_cyclically_reduced() {
        return Err(PresentationError::NotCyclicallyReduced { relator: w.to_string() });
    }
    let power = w.power(n)?;
    let v_length = common_prefix_len(r.letters(), power.letters());
    let bound = (Rational::new(1, 2) + lambda) * Rational::from_integer(r.len() as i64);
    Ok(PowerOverlap { v_length, bound, holds: Rational::from_integer(v_length as i64) < bound })
}

/// The eight small parameters `λ < λ₁ < … < λ₇ < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterLadder {
    #[serde(serialize_with = "serialize_values")]
    values: [Rational; 8],
    #[serde(with = "rational::serde_string")]
    separation_factor: Rational,
}

fn serialize_values<S: serde::Serializer>(values: &[Rational; 8], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}

pub const DEFAULT_SEPARATION_FACTOR: i64 = 100;

impl ParameterLadder {
    /// `values[0]` is λ, `values[i]` is λᵢ.
    pub fn new(values: [Rational; 8], separation_factor: Rational) -> Self {
        ParameterLadder { values, separation_factor }
    }

    /// λ₇ = `top`, each lower rung `factor` times smaller.
    pub fn geometric(top: Rational, factor: Rational) -> Self {
        let mut values = [top; 8];
        for i in (0..7).rev() {
            values[i] = values[i + 1] / factor;
        }
        ParameterLadder { values, separation_factor: factor }
    }

    pub fn values(&self) -> &[Rational; 8] {
        &self.values
    }

    pub fn separation_factor(&self) -> Rational {
        self.separation_factor
    }

    /// λ, the small-cancellation parameter.
    pub fn lambda(&self) -> Rational {
        self.values[0]
    }

    /// λᵢ for `i` in `1..=7`; `rung(0)` is λ.
    pub fn rung(&self, i: usize) -> Rational {
        self.values[i]
    }

    pub fn with_rung(mut self, i: usize, value: Rational) -> Self {
        self.values[i] = value;
        self
    }

    /// Strictly increasing in `(0, 1)`, each rung at least the separation
    /// factor times the previous one.
    pub fn validate(&self) -> bool {
        let v = &self.values;
        v[0] > Rational::zero()
            && v[7] < Rational::one()
            && v.windows(2).all(|p| p[0] < p[1] && p[1] >= p[0] * self.separation_factor)
    }
}

impl Default for ParameterLadder {
    /// λ₇ = 1/100 with factor 100 down to λ = 10⁻¹⁶.
    fn default() -> Self {
        let factor = Rational::from_integer(DEFAULT_SEPARATION_FACTOR);
        ParameterLadder::geometric(Rational::new(1, 100), factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn sym(rels: &[&str]) -> SymmetrizedSet {
        let words: Vec<Word> = rels.iter().map(|r| w(r)).collect();
        let k = words.iter().map(Word::max_generator).max().unwrap_or(1);
        Presentation::new(k, words).unwrap().symmetrize()
    }

    #[test]
    fn symmetrize_examples() {
        let s = sym(&["ab"]);
        assert_eq!(s.to_string(), "{ab, AB, ba, BA}");
        let s = sym(&["aab"]);
        assert_eq!(s.len(), 6);
        for m in ["aab", "aba", "baa", "BAA", "AAB", "ABA"] {
            assert!(s.contains(&w(m)), "{m}");
        }
        assert_eq!(sym(&["abAB"]).len(), 8);
        assert_eq!(sym(&["abABcdCD"]).len(), 16);
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let s = sym(&["abAB", "aab"]);
        assert_eq!(s.resymmetrize(), s);
    }

    #[test]
    fn rejects_non_cyclically_reduced_relators() {
        let err = Presentation::new(2, vec![w("abA")]).unwrap_err();
        assert!(matches!(err, PresentationError::NotCyclicallyReduced { .. }));
        assert!(Presentation::new(1, vec![w("ab")]).is_err());
        assert!(Presentation::new(2, vec![Word::empty()]).is_err());
    }

    #[test]
    fn piece_ratio_examples() {
        assert_eq!(sym(&["ab"]).max_piece_ratio().unwrap(), ratio(0, 1));
        assert_eq!(sym(&["abAB"]).max_piece_ratio().unwrap(), ratio(1, 4));
        assert_eq!(sym(&["abABcdCD"]).max_piece_ratio().unwrap(), ratio(1, 8));
        let single = SymmetrizedSet { generator_count: 1, members: vec![w("a")] };
        assert_eq!(single.max_piece_ratio(), Err(PresentationError::TooFewRelators(1)));
    }

    #[test]
    fn torsion_free_examples() {
        assert!(!sym(&["aaa"]).torsion_free_surrogate());
        assert!(!sym(&["abab"]).torsion_free_surrogate());
        assert!(sym(&["abABcdCD"]).torsion_free_surrogate());
    }

    #[test]
    fn power_overlap_examples() {
        let r = w("abABcdCD");
        let lambda = ratio(1, 6);
        let check = |word: &str, n, expected| {
            let got = power_overlap_bound(&w(word), n, &r, lambda).unwrap();
            assert_eq!(got.v_length, expected);
            assert_eq!(got.bound, ratio(16, 3));
            assert!(got.holds);
        };
        check("b", 8, 0);
        check("a", 8, 1);
        check("ab", 4, 2);
        assert!(power_overlap_bound(&w("ab"), 0, &r, lambda).is_err());
        assert!(power_overlap_bound(&w("abA"), 1, &r, lambda).is_err());
    }

    #[test]
    fn ladder_examples() {
        let ten = ratio(10, 1);
        assert!(ParameterLadder::geometric(ratio(1, 100), ten).validate());
        let values = *ParameterLadder::geometric(ratio(1, 100), ten).values();
        assert_eq!(values[0], ratio(1, 1_000_000_000));
        let ladder = ParameterLadder::geometric(ratio(1, 100), ten);
        let equal = ladder.clone().with_rung(3, ladder.rung(4));
        assert!(!equal.validate());
        let top = ladder.clone().with_rung(7, ratio(1, 1));
        assert!(!top.validate());
        assert!(ParameterLadder::default().validate());
        assert_eq!(ParameterLadder::default().lambda(), ratio(1, 10_000_000_000_000_000));
        // A factor of 100 per rung gives 2018·λᵢ < λᵢ₊₂ but not λᵢ₊₁.
        let d = ParameterLadder::default();
        assert!(ratio(2018, 1) * d.rung(2) < d.rung(4));
        assert!(ratio(2018, 1) * d.rung(2) > d.rung(3));
    }

    #[test]
    fn signed_symmetries_of_genus_two() {
        let s = sym(&["abABcdCD"]);
        let syms = s.signed_symmetries();
        assert!(syms.contains(&vec![1, 2, 3, 4]));
        assert!(syms.contains(&vec![3, 4, 1, 2]));
        for images in &syms {
            for r in s.members() {
                assert!(s.contains(&apply_signed(r, images)));
            }
        }
        assert!(syms.len() < 384);
    }

    #[test]
    fn parses_text_format() {
        let p = Presentation::parse("# genus two\ngenerators: 4\n\nabABcdCD\n").unwrap();
        assert_eq!(p.generator_count(), 4);
        assert_eq!(p.relators(), &[w("abABcdCD")]);
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
        assert!(Presentation::parse("abAB\n").is_err());
        assert!(Presentation::parse("generators: 2\naAb\n").is_err());
    }
}
