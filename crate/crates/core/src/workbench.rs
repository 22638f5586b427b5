//! Exhaustive scans for commutators that are proper powers.
//!
//! Candidates are cyclically reduced words up to rotation, inversion and the
//! signed generator permutations that preserve the relators. All three
//! preserve the property "`w^n` is a commutator", so one representative per
//! class suffices. The representative is the lexicographically least word
//! of its class, which lets the enumeration keep a word exactly when it is
//! its own canonical form.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::dehn::{DehnError, DehnSolver};
use crate::presentations::{permutations, ParameterLadder, Presentation, PresentationError, SymmetrizedSet};
use crate::rational::Rational;
use crate::words::{self, wicks_commutator_test, CyclicWord, Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("maximal length must be at least 1")]
    BadLength,
    #[error("exponent range {start}..{end} must be nonempty and start at 2 or more")]
    BadRange { start: usize, end: usize },
    #[error("Dehn gate: maximal piece ratio {lambda_star} is not below 1/6")]
    DehnGate { lambda_star: Rational },
    #[error("torsion gate: relator {relator} is a proper power")]
    TorsionGate { relator: String },
    #[error("candidate {w}^{n} produced a witness that does not re-verify")]
    Unverified { w: String, n: usize },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Dehn(#[from] DehnError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanParameters {
    pub group: String,
    pub generators: u32,
    pub max_len: usize,
    pub witness_len: Option<usize>,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(serialize_with = "optional_rational")]
    pub lambda_star: Option<Rational>,
    #[serde(serialize_with = "optional_rational")]
    pub ladder_lambda: Option<Rational>,
    /// `"free group"`, `"theorem applies"` or `"consistency only"`.
    pub scope: String,
}

fn optional_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub w: String,
    pub n: usize,
    pub x: String,
    pub y: String,
    pub transcript: Vec<String>,
}

/// Outcome for one candidate class, kept only in verbose scans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    pub w: String,
    pub n: usize,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub parameters: ScanParameters,
    pub classes: usize,
    pub candidates_tested: usize,
    pub rejected_by_exponent_sums: usize,
    pub skipped_trivial: usize,
    pub counterexamples: Vec<Counterexample>,
    pub records: Vec<CandidateRecord>,
    pub elapsed: f64,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn to_text(&self) -> String {
        let p = &self.parameters;
        let mut out = String::new();
        let _ = writeln!(out, "group: {}", p.group);
        let _ = writeln!(out, "scope: {}", p.scope);
        if let (Some(ls), Some(ll)) = (p.lambda_star, p.ladder_lambda) {
            let _ = writeln!(out, "lambda*: {ls}  ladder lambda: {ll}");
        }
        let _ = write!(out, "max length: {}  n: {}..{}", p.max_len, p.n_min, p.n_max);
        if let Some(m) = p.witness_len {
            let _ = write!(out, "  witness length: {m}");
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "classes: {}  candidates: {}  exponent-sum rejects: {}  trivial skipped: {}",
            self.classes, self.candidates_tested, self.rejected_by_exponent_sums, self.skipped_trivial
        );
        let _ = writeln!(out, "counterexamples: {}", self.counterexamples.len());
        for c in &self.counterexamples {
            let _ = writeln!(out, "  w = {}, n = {}, x = {}, y = {}", c.w, c.n, c.x, c.y);
            for line in &c.transcript {
                let _ = writeln!(out, "    {line}");
            }
        }
        for r in &self.records {
            let _ = writeln!(out, "  {}^{}: {}", r.w, r.n, r.outcome);
        }
        out
    }
}

fn check_bounds(max_len: usize, n_range: &RangeInclusive<usize>) -> Result<(), ScanError> {
    if max_len == 0 {
        return Err(ScanError::BadLength);
    }
    if *n_range.start() < 2 || n_range.is_empty() {
        return Err(ScanError::BadRange { start: *n_range.start(), end: *n_range.end() });
    }
    Ok(())
}

/// All signed permutations of `1..=rank`, identity first.
pub fn all_signed_permutations(rank: u32) -> Vec<Vec<i32>> {
    let k = rank as usize;
    let mut out = Vec::new();
    for perm in permutations(k) {
        for signs in 0u32..(1 << k) {
            out.push(
                perm.iter()
                    .enumerate()
                    .map(|(i, &p)| if signs >> i & 1 == 1 { -(p as i32 + 1) } else { p as i32 + 1 })
                    .collect(),
            );
        }
    }
    out
}

fn apply(letters: &[Generator], images: &[i32]) -> Vec<Generator> {
    letters
        .iter()
        .map(|g| {
            let h = Generator::from_signed(images[g.index() as usize - 1]).expect("nonzero image");
            if g.is_inverse() {
                h.inverse()
            } else {
                h
            }
        })
        .collect()
}

fn least_rotation(letters: &[Generator]) -> Vec<Generator> {
    let n = letters.len();
    (0..n)
        .map(|k| letters[k..].iter().chain(&letters[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// The least word over all rotations, inversion and the given symmetries.
pub fn canonical_form(letters: &[Generator], symmetries: &[Vec<i32>]) -> Vec<Generator> {
    let inverse: Vec<Generator> = letters.iter().rev().map(|g| g.inverse()).collect();
    let mut best: Option<Vec<Generator>> = None;
    for s in symmetries {
        for base in [letters, &inverse[..]] {
            let c = least_rotation(&apply(base, s));
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_else(|| least_rotation(letters))
}

/// Every cyclically reduced nonempty word of length `≤ max_len`.
pub fn cyclically_reduced_words(rank: u32, max_len: usize) -> Vec<Vec<Generator>> {
    (1..=max_len)
        .flat_map(|len| words::reduced_words_of_length(rank, len))
        .filter(|w| w.is_cyclically_reduced())
        .map(Word::into_letters)
        .collect()
}

/// One representative per class, in length-then-lexicographic order.
pub fn candidate_classes(rank: u32, max_len: usize, symmetries: &[Vec<i32>]) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut current = Vec::with_capacity(len);
        collect_canonical(rank, len, symmetries, &mut current, &mut out);
    }
    out
}

fn collect_canonical(rank: u32, len: usize, symmetries: &[Vec<i32>], current: &mut Vec<Generator>, out: &mut Vec<CyclicWord>) {
    if current.len() == len {
        if words::is_cyclically_reduced(current) && canonical_form(current, symmetries) == *current {
            out.push(CyclicWord::from_letters(current.clone()).expect("cyclically reduced"));
        }
        return;
    }
    for i in 1..=rank {
        for g in [Generator::positive(i), Generator::positive(i).inverse()] {
            if current.last() == Some(&g.inverse()) {
                continue;
            }
            current.push(g);
            collect_canonical(rank, len, symmetries, current, out);
            current.pop();
        }
    }
}

fn power_word(w: &CyclicWord, n: usize) -> Word {
    Word::from_reduced(w.letters().repeat(n)).expect("powers of cyclically reduced words are reduced")
}

fn has_nonzero_exponent_sum(w: &CyclicWord, rank: u32) -> bool {
    (1..=rank).any(|i| w.exponent_sum(i) != 0)
}

/// Exhaustive check that no `w^n` is a commutator in the free group of the
/// given rank. Any Wicks form found is certified by free reduction.
pub fn scan_free_group(generators: u32, max_len: usize, n_range: RangeInclusive<usize>, verbose: bool) -> Result<ScanReport, ScanError> {
    check_bounds(max_len, &n_range)?;
    let start = Instant::now();
    let classes = candidate_classes(generators, max_len, &all_signed_permutations(generators));
    let mut report = ScanReport {
        parameters: ScanParameters {
            group: format!("free group of rank {generators}"),
            generators,
            max_len,
            witness_len: None,
            n_min: *n_range.start(),
            n_max: *n_range.end(),
            lambda_star: None,
            ladder_lambda: None,
            scope: "free group".into(),
        },
        classes: classes.len(),
        candidates_tested: 0,
        rejected_by_exponent_sums: 0,
        skipped_trivial: 0,
        counterexamples: Vec::new(),
        records: Vec::new(),
        elapsed: 0.0,
    };
    for w in &classes {
        for n in n_range.clone() {
            report.candidates_tested += 1;
            let outcome = if has_nonzero_exponent_sum(w, generators) {
                report.rejected_by_exponent_sums += 1;
                "nonzero exponent sums".to_string()
            } else {
                let power = CyclicWord::new(&power_word(w, n)).expect("cyclically reduced");
                match wicks_commutator_test(&power) {
                    None => "no Wicks form".to_string(),
                    Some(form) => {
                        let target = power.to_word();
                        let p = Word::from_reduced(target.letters()[..form.rotation].to_vec()).expect("prefix");
                        let x = form.u.conjugate_by(&p);
                        let y = form.v.conjugate_by(&p);
                        let check = Word::product([&Word::commutator(&x, &y), &target.inverse()]);
                        if !check.is_empty() {
                            return Err(ScanError::Unverified { w: w.to_string(), n });
                        }
                        report.counterexamples.push(Counterexample {
                            w: w.to_string(),
                            n,
                            x: x.to_string(),
                            y: y.to_string(),
                            transcript: vec![
                                format!("w^n = {target}"),
                                format!("Wicks form at rotation {}: x = {}, y = {}, z = {}", form.rotation, form.x, form.y, form.z),
                                format!("[x, y] (w^n)^-1 reduces to {check}"),
                            ],
                        });
                        "counterexample".to_string()
                    }
                }
            };
            if verbose {
                report.records.push(CandidateRecord { w: w.to_string(), n, outcome });
            }
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Re-checks a witness with a fresh solver, from the raw letters.
fn reverify(p: &Presentation, w: &CyclicWord, n: usize, x: &Word, y: &Word) -> Result<Vec<String>, ScanError> {
    let solver = DehnSolver::new(&p.symmetrize())?;
    let raw: Vec<Generator> = [x.letters(), y.letters(), x.inverse().letters(), y.inverse().letters()]
        .concat()
        .into_iter()
        .chain(w.letters().repeat(n).iter().rev().map(|g| g.inverse()))
        .collect();
    let probe = Word::reduce(raw);
    let reduction = solver.reduce(&probe);
    let w_word = w.to_word();
    let ok = reduction.output.is_empty() && !solver.reduce(&w_word).output.is_empty() && n >= 2 && reduction.replay() == probe;
    if !ok {
        return Err(ScanError::Unverified { w: w.to_string(), n });
    }
    let mut transcript = vec![format!("[x, y] (w^n)^-1 freely reduces to {probe}")];
    for s in &reduction.steps {
        transcript.push(format!("remove {} letters of {} at position {}", s.matched, s.relator, s.position));
    }
    transcript.push(format!("Dehn output: {}", reduction.output));
    transcript.push(format!("w reduces to {} (nontrivial)", solver.reduce(&w_word).output));
    Ok(transcript)
}

/// Bounded search for `x, y` with `[x, y] = w^n` in a `C'(1/6)`
/// torsion-free presentation. The scope says whether `λ*` lies below the
/// ladder's `λ`; otherwise a clean report is consistency evidence only.
pub fn scan_presentation(
    p: &Presentation,
    max_len: usize,
    witness_len: usize,
    n_range: RangeInclusive<usize>,
    ladder: &ParameterLadder,
    verbose: bool,
) -> Result<ScanReport, ScanError> {
    check_bounds(max_len, &n_range)?;
    if witness_len == 0 {
        return Err(ScanError::BadLength);
    }
    let start = Instant::now();
    let set: SymmetrizedSet = p.symmetrize();
    if let Some(r) = set.proper_power_member() {
        return Err(ScanError::TorsionGate { relator: r.to_string() });
    }
    let lambda_star = set.max_piece_ratio()?;
    if lambda_star >= Rational::new(1, 6) {
        return Err(ScanError::DehnGate { lambda_star });
    }
    let solver = DehnSolver::new(&set)?;
    let rank = p.generator_count();
    let classes = candidate_classes(rank, max_len, &set.signed_symmetries());
    let scope = if lambda_star < ladder.lambda() { "theorem applies" } else { "consistency only" };
    let mut report = ScanReport {
        parameters: ScanParameters {
            group: format!("presentation {}", p.to_text().trim().replace('\n', "; ")),
            generators: rank,
            max_len,
            witness_len: Some(witness_len),
            n_min: *n_range.start(),
            n_max: *n_range.end(),
            lambda_star: Some(lambda_star),
            ladder_lambda: Some(ladder.lambda()),
            scope: scope.into(),
        },
        classes: classes.len(),
        candidates_tested: 0,
        rejected_by_exponent_sums: 0,
        skipped_trivial: 0,
        counterexamples: Vec::new(),
        records: Vec::new(),
        elapsed: 0.0,
    };
    for w in &classes {
        if solver.is_trivial(&w.to_word()) {
            report.skipped_trivial += 1;
            continue;
        }
        for n in n_range.clone() {
            report.candidates_tested += 1;
            let outcome = if solver.has_abelian_filter() && has_nonzero_exponent_sum(w, rank) {
                report.rejected_by_exponent_sums += 1;
                "nonzero exponent sums".to_string()
            } else {
                match solver.bounded_commutator_search(&power_word(w, n), witness_len)? {
                    None => format!("no commutator with |x|, |y| <= {witness_len}"),
                    Some((x, y)) => {
                        let transcript = reverify(p, w, n, &x, &y)?;
                        report.counterexamples.push(Counterexample {
                            w: w.to_string(),
                            n,
                            x: x.to_string(),
                            y: y.to_string(),
                            transcript,
                        });
                        "counterexample".to_string()
                    }
                }
            };
            if verbose {
                report.records.push(CandidateRecord { w: w.to_string(), n, outcome });
            }
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Parses `A..B` or a single `A`.
pub fn parse_range(s: &str) -> Option<RangeInclusive<usize>> {
    match s.split_once("..") {
        Some((a, b)) => Some(a.trim().parse().ok()?..=b.trim().trim_start_matches('=').parse().ok()?),
        None => {
            let a = s.trim().parse().ok()?;
            Some(a..=a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn free_rank_two_length_one() {
        let r = scan_free_group(2, 1, 2..=2, true).unwrap();
        assert_eq!(r.classes, 1);
        assert_eq!(r.candidates_tested, 1);
        assert_eq!(r.rejected_by_exponent_sums, 1);
        assert!(r.is_clean());
        let no_symmetry = candidate_classes(2, 1, &[vec![1, 2]]);
        let names: Vec<String> = no_symmetry.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["a", "b"]);
    }

    #[test]
    fn rank_one_has_no_commutator_powers() {
        assert!(scan_free_group(1, 5, 2..=2, false).unwrap().is_clean());
    }

    #[test]
    fn symmetry_reduction_matches_orbits() {
        for rank in 1..=2 {
            let syms = all_signed_permutations(rank);
            for max_len in 1..=5 {
                let reps: BTreeSet<Vec<Generator>> =
                    candidate_classes(rank, max_len, &syms).iter().map(|c| c.letters().to_vec()).collect();
                let mut orbits = BTreeSet::new();
                for word in cyclically_reduced_words(rank, max_len) {
                    let c = canonical_form(&word, &syms);
                    assert!(reps.contains(&c));
                    orbits.insert(c);
                }
                assert_eq!(orbits.len(), reps.len());
            }
        }
    }

    #[test]
    fn genus_two_scan_is_consistency_only() {
        let p = Presentation::new(4, vec![w("abABcdCD")]).unwrap();
        let r = scan_presentation(&p, 2, 1, 2..=2, &ParameterLadder::default(), false).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.parameters.scope, "consistency only");
        assert_eq!(r.parameters.lambda_star, Some(Rational::new(1, 8)));
    }

    #[test]
    fn gates() {
        let torsion = Presentation::new(2, vec![w("abab")]).unwrap();
        assert!(matches!(
            scan_presentation(&torsion, 2, 1, 2..=2, &ParameterLadder::default(), false),
            Err(ScanError::TorsionGate { .. })
        ));
        let big = Presentation::new(2, vec![w("abAB")]).unwrap();
        assert_eq!(
            scan_presentation(&big, 2, 1, 2..=2, &ParameterLadder::default(), false).unwrap_err(),
            ScanError::DehnGate { lambda_star: Rational::new(1, 4) }
        );
        assert!(matches!(scan_free_group(2, 0, 2..=2, false), Err(ScanError::BadLength)));
        assert!(matches!(scan_free_group(2, 1, 1..=2, false), Err(ScanError::BadRange { .. })));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..3"), Some(2..=3));
        assert_eq!(parse_range("4"), Some(4..=4));
        assert_eq!(parse_range("x"), None);
    }
}
