//! Free-group word algebra.
//!
//! Generators are positive integers; the text alphabet maps `a -> 1`,
//! `b -> 2`, ... with upper case letters standing for inverses. The empty
//! word is written `1`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index must be at least 1")]
    ZeroGenerator,
    #[error("invalid character {0:?} in word")]
    BadCharacter(char),
    #[error("word {0} is not freely reduced")]
    NotReduced(String),
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("exponent must be at least 1, got {0}")]
    BadExponent(i64),
}

/// A generator or the inverse of a generator.
///
/// Ordered as `a < A < b < B < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator(i32);

impl Generator {
    pub fn new(index: u32, inverse: bool) -> Result<Self, WordError> {
        if index == 0 {
            return Err(WordError::ZeroGenerator);
        }
        let i = index as i32;
        Ok(Generator(if inverse { -i } else { i }))
    }

    /// Positive generator with the given index. Panics on zero.
    pub fn positive(index: u32) -> Self {
        Self::new(index, false).expect("generator index must be positive")
    }

    /// Builds from a signed index: `-2` is `B`.
    pub fn from_signed(value: i32) -> Result<Self, WordError> {
        if value == 0 {
            Err(WordError::ZeroGenerator)
        } else {
            Ok(Generator(value))
        }
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    pub fn inverse(self) -> Self {
        Generator(-self.0)
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Generator(c as i32 - 'a' as i32 + 1)),
            'A'..='Z' => Some(Generator(-(c as i32 - 'A' as i32 + 1))),
            _ => None,
        }
    }

    pub fn letter(self) -> Option<char> {
        let i = self.index();
        if i > 26 {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + (i - 1) as u8) as char)
    }

    fn key(self) -> (u32, bool) {
        (self.index(), self.is_inverse())
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.letter() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "x{}^-1", self.index()),
            None => write!(f, "x{}", self.index()),
        }
    }
}

/// Parses letters without reducing them. `"1"` and `""` give the empty sequence.
pub fn parse_letters(s: &str) -> Result<Vec<Generator>, WordError> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|c| Generator::from_letter(c).ok_or(WordError::BadCharacter(c)))
        .collect()
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Generator]) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    for g in letters {
        write!(f, "{g}")?;
    }
    Ok(())
}

pub(crate) fn letters_to_string(letters: &[Generator]) -> String {
    struct Show<'a>(&'a [Generator]);
    impl fmt::Display for Show<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_letters(f, self.0)
        }
    }
    Show(letters).to_string()
}

pub(crate) fn is_freely_reduced(letters: &[Generator]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

/// Freely reduced and first letter not the inverse of the last.
pub fn is_cyclically_reduced(letters: &[Generator]) -> bool {
    is_freely_reduced(letters)
        && match (letters.first(), letters.last()) {
            (Some(&first), Some(&last)) if letters.len() > 1 => first != last.inverse(),
            _ => true,
        }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: Generator) -> Self {
        Word(vec![g])
    }

    /// Free reduction of an arbitrary sequence of letters.
    pub fn reduce(raw: impl IntoIterator<Item = Generator>) -> Self {
        let mut out: Vec<Generator> = Vec::new();
        for g in raw {
            if out.last() == Some(&g.inverse()) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        Word(out)
    }

    /// Wraps letters that are already freely reduced.
    pub fn from_reduced(letters: Vec<Generator>) -> Result<Self, WordError> {
        if is_freely_reduced(&letters) {
            Ok(Word(letters))
        } else {
            Err(WordError::NotReduced(letters_to_string(&letters)))
        }
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Generator> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced(&self.0)
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|g| g.index()).max().unwrap_or(0)
    }

    /// Reduced product of a sequence of words.
    pub fn product<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        Word::reduce(words.into_iter().flat_map(|w| w.0.iter().copied()))
    }

    /// `u v u⁻¹ v⁻¹`, freely reduced.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        Word::product([u, v, &u.inverse(), &v.inverse()])
    }

    /// `c w c⁻¹`, freely reduced.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        Word::product([c, self, &c.inverse()])
    }

    /// Freely reduced `n`-th power, `n ≥ 1`.
    pub fn power(&self, n: i64) -> Result<Word, WordError> {
        if n < 1 {
            return Err(WordError::BadExponent(n));
        }
        let CyclicReduction { core, conjugator } = self.cyclic_reduce();
        let mut letters = Vec::with_capacity(core.len() * n as usize);
        for _ in 0..n {
            letters.extend_from_slice(core.letters());
        }
        Ok(Word(letters).conjugate_by(&conjugator))
    }

    /// Peels matched end pairs: `self = conjugator · core · conjugator⁻¹`.
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let w = &self.0;
        let mut peel = 0;
        while w.len() >= 2 * peel + 2 && w[peel] == w[w.len() - 1 - peel].inverse() {
            peel += 1;
        }
        CyclicReduction {
            core: Word(w[peel..w.len() - peel].to_vec()),
            conjugator: Word(w[..peel].to_vec()),
        }
    }

    /// Returns `(root, k)` with `self = root^k`, `k ≥ 2` maximal, or `None`.
    ///
    /// The empty word is not reported as a proper power.
    pub fn is_proper_power(&self) -> Option<(Word, usize)> {
        let CyclicReduction { core, conjugator } = self.cyclic_reduce();
        let letters = core.letters();
        let n = letters.len();
        if n < 2 {
            return None;
        }
        let period = (1..=n / 2)
            .filter(|p| n % p == 0)
            .find(|&p| (p..n).all(|i| letters[i] == letters[i - p]))?;
        let root = Word(letters[..period].to_vec()).conjugate_by(&conjugator);
        Some((root, n / period))
    }

    /// Sum of the signs of the occurrences of generator `index`.
    pub fn exponent_sum(&self, index: u32) -> i64 {
        exponent_sum(&self.0, index)
    }

    /// Exponent sums of generators `1..=rank`.
    pub fn abelianization(&self, rank: u32) -> Vec<i64> {
        let mut sums = vec![0; rank as usize];
        for g in &self.0 {
            if let Some(slot) = sums.get_mut(g.index() as usize - 1) {
                *slot += g.sign();
            }
        }
        sums
    }

    /// Applies a letter substitution and reduces.
    pub fn map_letters(&self, f: impl Fn(Generator) -> Generator) -> Word {
        Word::reduce(self.0.iter().map(|&g| f(g)))
    }
}

pub(crate) fn exponent_sum(letters: &[Generator], index: u32) -> i64 {
    letters
        .iter()
        .filter(|g| g.index() == index)
        .map(|g| g.sign())
        .sum()
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        Word::product([self, rhs])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Strict parse: the text must already be freely reduced.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::from_reduced(parse_letters(s)?)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of [`Word::cyclic_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Word,
    pub conjugator: Word,
}

impl CyclicReduction {
    pub fn cyclic_core(&self) -> CyclicWord {
        CyclicWord::from_letters(self.core.letters().to_vec())
            .expect("cyclic reduction yields a cyclically reduced core")
    }
}

/// A cyclically reduced word up to rotation.
///
/// Stored as its lexicographically least rotation, so derived equality,
/// ordering and hashing are rotation invariant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Vec<Generator>);

impl CyclicWord {
    pub fn from_letters(letters: Vec<Generator>) -> Result<Self, WordError> {
        if !is_cyclically_reduced(&letters) {
            return Err(WordError::NotCyclicallyReduced(letters_to_string(&letters)));
        }
        Ok(CyclicWord(least_rotation(&letters)))
    }

    pub fn new(word: &Word) -> Result<Self, WordError> {
        Self::from_letters(word.letters().to_vec())
    }

    /// Canonical (least) rotation.
    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The canonical letters rotated left by `k`.
    pub fn rotation(&self, k: usize) -> Vec<Generator> {
        rotate(&self.0, k)
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord(least_rotation(&self.to_word().inverse().0))
    }

    /// `n`-th power; graphically the `n`-fold repetition.
    pub fn power(&self, n: usize) -> Result<CyclicWord, WordError> {
        if n == 0 {
            return Err(WordError::BadExponent(0));
        }
        Ok(CyclicWord(self.0.repeat(n)))
    }

    pub fn exponent_sum(&self, index: u32) -> i64 {
        exponent_sum(&self.0, index)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({self})")
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CyclicWord::from_letters(parse_letters(s)?)
    }
}

pub(crate) fn rotate(letters: &[Generator], k: usize) -> Vec<Generator> {
    if letters.is_empty() {
        return Vec::new();
    }
    let k = k % letters.len();
    let mut out = Vec::with_capacity(letters.len());
    out.extend_from_slice(&letters[k..]);
    out.extend_from_slice(&letters[..k]);
    out
}

pub(crate) fn least_rotation(letters: &[Generator]) -> Vec<Generator> {
    let n = letters.len();
    let mut best = 0;
    for k in 1..n {
        let candidate = (0..n).map(|i| letters[(k + i) % n]);
        let current = (0..n).map(|i| letters[(best + i) % n]);
        if candidate.lt(current) {
            best = k;
        }
    }
    rotate(letters, best)
}

/// A certified Wicks decomposition of a cyclic word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WicksForm {
    /// Left rotation of the canonical letters that reads `x y z x⁻¹ y⁻¹ z⁻¹`.
    pub rotation: usize,
    pub x: Word,
    pub y: Word,
    pub z: Word,
    /// `u = x y`.
    pub u: Word,
    /// `v = z x⁻¹`.
    pub v: Word,
}

impl WicksForm {
    /// The rotation of the input that `[u, v]` reduces to.
    pub fn rotated_word(&self) -> Word {
        let mut letters = Vec::new();
        for part in [&self.x, &self.y, &self.z] {
            letters.extend_from_slice(part.letters());
        }
        for part in [&self.x, &self.y, &self.z] {
            letters.extend_from_slice(part.inverse().letters());
        }
        Word(letters)
    }
}

fn is_inverse_of(segment: &[Generator], original: &[Generator]) -> bool {
    segment.len() == original.len()
        && segment
            .iter()
            .zip(original.iter().rev())
            .all(|(s, o)| *s == o.inverse())
}

/// Searches every rotation and every split for a graphical Wicks form.
///
/// Splits are tried with `|z|` ascending, then `|x|` ascending, so plain
/// commutators `x y x⁻¹ y⁻¹` are preferred. Every returned form has been
/// checked: `[u, v]` freely reduces to the rotated input.
pub fn wicks_commutator_test(w: &CyclicWord) -> Option<WicksForm> {
    let n = w.len();
    if n == 0 || n % 2 == 1 {
        return None;
    }
    let max_index = w.letters().iter().map(|g| g.index()).max().unwrap_or(0);
    if (1..=max_index).any(|i| w.exponent_sum(i) != 0) {
        return None;
    }
    let half = n / 2;
    for r in 0..n {
        let rot = w.rotation(r);
        let (front, back) = rot.split_at(half);
        for zlen in 0..=half {
            for xlen in 0..=half - zlen {
                let ylen = half - zlen - xlen;
                let (x, rest) = front.split_at(xlen);
                let (y, z) = rest.split_at(ylen);
                let (xi, rest) = back.split_at(xlen);
                let (yi, zi) = rest.split_at(ylen);
                if is_inverse_of(xi, x) && is_inverse_of(yi, y) && is_inverse_of(zi, z) {
                    let x = Word(x.to_vec());
                    let y = Word(y.to_vec());
                    let z = Word(z.to_vec());
                    let u = &x * &y;
                    let v = &z * &x.inverse();
                    let form = WicksForm { rotation: r, x, y, z, u, v };
                    assert_eq!(
                        Word::commutator(&form.u, &form.v).letters(),
                        rot.as_slice(),
                        "Wicks witness failed to certify"
                    );
                    return Some(form);
                }
            }
        }
    }
    None
}

/// All freely reduced words over `rank` generators of length `len`, in
/// lexicographic order.
pub fn reduced_words_of_length(rank: u32, len: usize) -> Vec<Word> {
    let alphabet: Vec<Generator> = (1..=rank)
        .flat_map(|i| [Generator::positive(i), Generator::positive(i).inverse()])
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn extend(alphabet: &[Generator], len: usize, current: &mut Vec<Generator>, out: &mut Vec<Word>) {
        if current.len() == len {
            out.push(Word(current.clone()));
            return;
        }
        for &g in alphabet {
            if current.last() == Some(&g.inverse()) {
                continue;
            }
            current.push(g);
            extend(alphabet, len, current, out);
            current.pop();
        }
    }
    extend(&alphabet, len, &mut current, &mut out);
    out
}

/// All freely reduced words of length `≤ max_len` in shortlex order.
pub fn reduced_words_up_to(rank: u32, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|len| reduced_words_of_length(rank, len))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::reduce(parse_letters(s).unwrap())
    }

    fn cw(s: &str) -> CyclicWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("aA"), Word::empty());
        assert_eq!(w("aBb"), w("a"));
        assert_eq!(w("abBA"), Word::empty());
        assert_eq!(w("abBA").to_string(), "1");
    }

    #[test]
    fn strict_parse_rejects_unreduced() {
        assert!("aAb".parse::<Word>().is_err());
        assert!("ab1".parse::<Word>().is_err());
        assert_eq!("1".parse::<Word>().unwrap(), Word::empty());
    }

    #[test]
    fn generator_order_is_a_then_inverse() {
        let order: Vec<_> = "BbAa".chars().map(|c| Generator::from_letter(c).unwrap()).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(letters_to_string(&sorted), "aAbB");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let r = w("Aba").cyclic_reduce();
        assert_eq!((r.core.to_string(), r.conjugator.to_string()), ("b".into(), "A".into()));
        let r = w("abAB").cyclic_reduce();
        assert_eq!((r.core.to_string(), r.conjugator.to_string()), ("abAB".into(), "1".into()));
        let r = w("Baab").cyclic_reduce();
        assert_eq!((r.core.to_string(), r.conjugator.to_string()), ("aa".into(), "B".into()));
    }

    #[test]
    fn power_examples() {
        assert_eq!(w("ab").power(2).unwrap(), w("abab"));
        assert_eq!(w("Aba").power(2).unwrap(), w("Abba"));
        assert_eq!(w("ab").power(3).unwrap().len(), 6);
        assert_eq!(w("ab").power(0), Err(WordError::BadExponent(0)));
        assert_eq!(w("ab").power(-2), Err(WordError::BadExponent(-2)));
    }

    #[test]
    fn proper_power_examples() {
        assert_eq!(w("abab").is_proper_power(), Some((w("ab"), 2)));
        assert_eq!(w("ab").is_proper_power(), None);
        assert_eq!(w("Baab").is_proper_power(), Some((w("Bab"), 2)));
        assert_eq!(Word::empty().is_proper_power(), None);
        assert_eq!(w("aaaa").is_proper_power(), Some((w("a"), 4)));
        assert_eq!(w("a").is_proper_power(), None);
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(w("abAB").exponent_sum(1), 0);
        assert_eq!(w("aabb").exponent_sum(1), 2);
        assert_eq!(w("A").exponent_sum(1), -1);
    }

    #[test]
    fn cyclic_word_canonical_form() {
        assert_eq!(cw("bABa").to_string(), "abAB");
        assert_eq!(cw("ABab"), cw("abAB"));
        assert!("abA".parse::<CyclicWord>().is_err());
    }

    #[test]
    fn wicks_plain_commutator() {
        let form = wicks_commutator_test(&cw("abAB")).unwrap();
        assert_eq!((form.x.to_string(), form.y.to_string(), form.z.to_string()), ("a".into(), "b".into(), "1".into()));
        assert_eq!((form.u.to_string(), form.v.to_string()), ("ab".into(), "A".into()));
        assert_eq!(Word::commutator(&form.u, &form.v), form.rotated_word());
    }

    #[test]
    fn wicks_rejects_nonzero_exponent_sum() {
        assert_eq!(wicks_commutator_test(&cw("aabb")), None);
        assert_eq!(wicks_commutator_test(&cw("aab")), None);
    }

    #[test]
    fn wicks_commutator_of_a_and_ab() {
        // [a, ab] = a·ab·A·BA reads graphically as x y x⁻¹ y⁻¹ with x = a, y = ab,
        // but aabABA starts with a and ends with A, so the test runs on its
        // cyclic core abAB.
        let word = Word::commutator(&w("a"), &w("ab"));
        assert_eq!(word, w("aabABA"));
        assert!(!word.is_cyclically_reduced());
        let split = WicksForm { rotation: 0, x: w("a"), y: w("ab"), z: Word::empty(), u: w("aab"), v: w("A") };
        assert_eq!(split.rotated_word(), word);
        let core = word.cyclic_reduce();
        assert_eq!(core.conjugator, w("a"));
        let form = wicks_commutator_test(&core.cyclic_core()).unwrap();
        assert_eq!((form.x.to_string(), form.y.to_string(), form.z.to_string()), ("a".into(), "b".into(), "1".into()));
    }

    #[test]
    fn wicks_three_letter_form() {
        let form = wicks_commutator_test(&cw("abcABC")).unwrap();
        assert!(!form.z.is_empty());
        assert_eq!(Word::commutator(&form.u, &form.v), form.rotated_word());
    }

    #[test]
    fn reduced_word_counts() {
        // 2k(2k-1)^(n-1) reduced words of length n over k generators.
        assert_eq!(reduced_words_of_length(2, 3).len(), 4 * 9);
        assert_eq!(reduced_words_up_to(2, 2).len(), 1 + 4 + 12);
        let words = reduced_words_up_to(2, 2);
        assert!(words.windows(2).all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1])));
    }
}
