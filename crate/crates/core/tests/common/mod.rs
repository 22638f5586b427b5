//! Independent oracles and generators shared by the integration tests.
//!
//! Words are plain signed integers here (`a = 1`, `A = -1`, `b = 2`, ...)
//! and every reduction is a fresh stack implementation, so nothing below
//! leans on the library's own word code.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use smallcancel::motions::Trajectory;
use smallcancel::surface_maps::{Dart, SurfaceMap};
use smallcancel::{Generator, Rational, Word};

pub fn ints(s: &str) -> Vec<i32> {
    s.chars()
        .map(|c| {
            let i = (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
            if c.is_ascii_uppercase() {
                -i
            } else {
                i
            }
        })
        .collect()
}

pub fn reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse(letters: &[i32]) -> Vec<i32> {
    letters.iter().rev().map(|x| -x).collect()
}

pub fn commutator(u: &[i32], v: &[i32]) -> Vec<i32> {
    reduce(&[u, v, &inverse(u), &inverse(v)].concat())
}

pub fn cyclic_core(letters: &[i32]) -> Vec<i32> {
    let mut w = reduce(letters);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.remove(0);
        w.pop();
    }
    w
}

pub fn least_rotation(letters: &[i32]) -> Vec<i32> {
    (0..letters.len().max(1))
        .map(|k| letters[k.min(letters.len())..].iter().chain(&letters[..k.min(letters.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

pub fn is_rotation_of(a: &[i32], b: &[i32]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|k| a[k..].iter().chain(&a[..k]).eq(b.iter())))
}

pub fn to_word(letters: &[i32]) -> Word {
    Word::reduce(letters.iter().map(|&x| Generator::from_signed(x).unwrap()))
}

pub fn from_word(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|g| g.signed()).collect()
}

pub fn to_generators(letters: &[i32]) -> Vec<Generator> {
    letters.iter().map(|&x| Generator::from_signed(x).unwrap()).collect()
}

/// Every freely reduced word over `rank` generators of length exactly `len`.
pub fn all_reduced(rank: i32, len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for g in (1..=rank).flat_map(|i| [i, -i]) {
                if w.last() != Some(&-g) {
                    let mut x: Vec<i32> = w.clone();
                    x.push(g);
                    next.push(x);
                }
            }
        }
        out = next;
    }
    out
}

pub fn is_cyclically_reduced(w: &[i32]) -> bool {
    reduce(w).len() == w.len() && (w.len() < 2 || w[0] != -w[w.len() - 1])
}

pub fn random_cyclically_reduced(rng: &mut StdRng, rank: i32, len: usize) -> Vec<i32> {
    loop {
        let w: Vec<i32> = (0..len).map(|_| rng.gen_range(1..=rank) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        if is_cyclically_reduced(&w) {
            return w;
        }
    }
}

pub fn exponent_sums_vanish(w: &[i32], rank: i32) -> bool {
    (1..=rank).all(|i| w.iter().map(|&x| if x == i { 1 } else if x == -i { -1 } else { 0 }).sum::<i32>() == 0)
}

/// Euler characteristic from scratch: vertices as orbits of `σ`, faces as
/// orbits of `σ ∘ α`.
pub fn euler_characteristic(map: &SurfaceMap) -> i64 {
    let n = map.dart_count();
    let orbits = |step: &dyn Fn(Dart) -> Dart| {
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut d = Dart(start);
            while !seen[d.0] {
                seen[d.0] = true;
                d = step(d);
            }
        }
        count as i64
    };
    let v = orbits(&|d| map.rotation_next(d));
    let f = orbits(&|d| map.rotation_next(map.partner(d)));
    v - (n as i64) / 2 + f
}

pub fn random_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// A strictly increasing piecewise-linear trajectory over `[0, duration]`
/// from `start` to `start + lap`, with random interior breakpoints on a
/// small grid.
pub fn random_trajectory(rng: &mut StdRng, start: Rational, lap: Rational, duration: Rational, pieces: usize) -> Trajectory {
    let grid = 12i64;
    let mut times: Vec<i64> = (1..grid).collect();
    let mut positions: Vec<i64> = (1..grid).collect();
    let k = pieces.saturating_sub(1).min(grid as usize - 1);
    let mut pick = |v: &mut Vec<i64>| {
        let mut chosen: Vec<i64> = (0..k).map(|_| v.swap_remove(rng.gen_range(0..v.len()))).collect();
        chosen.sort_unstable();
        chosen
    };
    let ts = pick(&mut times);
    let ss = pick(&mut positions);
    let g = Rational::from_integer(grid);
    let mut points = vec![(Rational::from_integer(0), start)];
    for (t, s) in ts.iter().zip(&ss) {
        points.push((duration * Rational::from_integer(*t) / g, start + lap * Rational::from_integer(*s) / g));
    }
    points.push((duration, start + lap));
    Trajectory::new(points).unwrap()
}

/// A one-face labeled map whose face reads `w` (cyclically reduced), with
/// every letter glued to a randomly chosen inverse occurrence.
pub fn random_polygon(rng: &mut StdRng, w: &[i32]) -> SurfaceMap {
    let mut open: Vec<usize> = (0..w.len()).collect();
    let mut walk = vec![0i64; w.len()];
    let mut labels = Vec::new();
    while let Some(&i) = open.first() {
        open.remove(0);
        let partners: Vec<usize> = open.iter().copied().filter(|&j| w[j] == -w[i]).collect();
        let j = partners[rng.gen_range(0..partners.len())];
        open.retain(|&x| x != j);
        labels.push(Generator::from_signed(w[i]).unwrap());
        let e = labels.len() as i64;
        walk[i] = e;
        walk[j] = -e;
    }
    SurfaceMap::from_labeled_face_walks(&[walk], &labels).unwrap()
}
