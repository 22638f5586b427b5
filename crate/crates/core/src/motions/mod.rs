//! Periodic multi-car motions on face boundaries.
//!
//! A car on a face `D` with perimeter `P` is a piecewise-linear map from the
//! circle of time `[0, l)` to the boundary, stored as breakpoints `(t, s)`
//! where `s` is an unwrapped boundary coordinate: `⌊s mod P⌋` is the index of
//! the dart in the face walk and the fractional part the offset along it.
//! With `d` cars of period `T` on a face, `l = d·T` and every car makes one
//! lap per circle of time.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::surface_maps::{Dart, FaceId, MapError, SurfaceMap, VertexId};
use crate::words::{self, CyclicWord, WordError};

mod collisions;
mod streets;

pub use collisions::{carcrash_check, detect_collisions, CarCrash, CollisionPoint, CollisionReport, DegenerateOverlap};
pub use streets::{build_cab_motion, build_streets, star_legs, CabLeg, CabMotion, StreetTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("trajectory: {0}")]
    BadTrajectory(String),
    #[error("need at least one car")]
    NoCars,
    #[error("hole perimeter {perimeter} is not {cars} times the word length {word}")]
    LengthMismatch { perimeter: usize, cars: usize, word: usize },
    #[error("hole label differs from the power of the word at position {position}: expected {expected}, found {found}")]
    LabelMismatch { position: usize, expected: String, found: String },
    #[error("town {town}: street deviation {deviation} on arc {arc} exceeds {tolerance}")]
    InfeasibleStreets { town: usize, arc: usize, deviation: Rational, tolerance: Rational },
    #[error("town {town}: street path for arc {arc} has length zero, the cab would stop")]
    CabStop { town: usize, arc: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Breakpoints `(t, s)` over one circle of time, starting at `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    points: Vec<(Rational, Rational)>,
}

impl Trajectory {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, MotionError> {
        if points.len() < 2 {
            return Err(MotionError::BadTrajectory("needs at least two breakpoints".into()));
        }
        if !points[0].0.is_zero() {
            return Err(MotionError::BadTrajectory("first breakpoint must be at time 0".into()));
        }
        if points.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(MotionError::BadTrajectory("breakpoint times must increase".into()));
        }
        Ok(Trajectory { points })
    }

    /// Constant speed from `start`, covering `lap` in `duration`.
    pub fn uniform(start: Rational, lap: Rational, duration: Rational) -> Result<Self, MotionError> {
        Self::new(vec![(Rational::zero(), start), (duration, start + lap)])
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Length `l` of the circle of time.
    pub fn duration(&self) -> Rational {
        self.points.last().expect("nonempty").0
    }

    pub fn lap(&self) -> Rational {
        self.points.last().expect("nonempty").1 - self.points[0].1
    }

    /// Unwrapped position at any time, continued periodically.
    pub fn at(&self, t: Rational) -> Rational {
        let l = self.duration();
        let q = (t / l).floor();
        let r = t - q * l;
        let i = match self.points.binary_search_by(|p| p.0.cmp(&r)) {
            Ok(i) => return self.points[i].1 + q * self.lap(),
            Err(i) => i,
        };
        let (t0, s0) = self.points[i - 1];
        let (t1, s1) = self.points[i];
        s0 + (s1 - s0) * (r - t0) / (t1 - t0) + q * self.lap()
    }

    /// The time at which an advancing car reaches the unwrapped position `s`.
    pub fn time_of(&self, s: Rational) -> Rational {
        let lap = self.lap();
        let s_first = self.points[0].1;
        let q = ((s - s_first) / lap).floor();
        let r = s - q * lap;
        let l = self.duration();
        let i = match self.points.binary_search_by(|p| p.1.cmp(&r)) {
            Ok(i) => return self.points[i].0 + q * l,
            Err(i) => i,
        };
        let (t0, s0) = self.points[i - 1];
        let (t1, s1) = self.points[i];
        t0 + (t1 - t0) * (r - s0) / (s1 - s0) + q * l
    }

    /// The trajectory `t ↦ self(t + dt)`.
    pub fn shifted(&self, dt: Rational) -> Trajectory {
        let l = self.duration();
        let mut times: BTreeSet<Rational> = [Rational::zero(), l].into_iter().collect();
        for &(b, _) in &self.points {
            let tau = rational::modulo(b - dt, l);
            times.insert(tau);
        }
        Trajectory { points: times.into_iter().map(|t| (t, self.at(t + dt))).collect() }
    }
}

/// The cars moving around one face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCars {
    pub face: FaceId,
    pub cars: Vec<Trajectory>,
}

impl FaceCars {
    /// `d` cars, the `j`-th following `base` shifted by `j·period`, which
    /// satisfies the shift condition by construction.
    pub fn from_base(face: FaceId, base: &Trajectory, d: usize, period: Rational) -> Self {
        let cars = (0..d).map(|j| base.shifted(period * Rational::from_integer(j as i64))).collect();
        FaceCars { face, cars }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteMotion {
    period: Rational,
    resolution: i64,
    faces: Vec<FaceCars>,
}

impl DiscreteMotion {
    /// The resolution is the least `Q` such that every breakpoint time and
    /// the period lie on the grid `ℤ/Q`.
    pub fn new(period: Rational, faces: Vec<FaceCars>) -> Result<Self, MotionError> {
        if !period.is_positive() {
            return Err(MotionError::BadTrajectory("period must be positive".into()));
        }
        let times: Vec<Rational> = faces
            .iter()
            .flat_map(|f| f.cars.iter())
            .flat_map(|c| c.points.iter().map(|p| p.0))
            .chain([period])
            .collect();
        let resolution = rational::common_denominator(&times);
        Ok(DiscreteMotion { period, resolution, faces })
    }

    pub fn period(&self) -> Rational {
        self.period
    }

    pub fn resolution(&self) -> i64 {
        self.resolution
    }

    pub fn faces(&self) -> &[FaceCars] {
        &self.faces
    }

    pub fn cars_on(&self, face: FaceId) -> usize {
        self.faces.iter().filter(|f| f.face == face).map(|f| f.cars.len()).sum()
    }

    pub fn car_count(&self) -> usize {
        self.faces.iter().map(|f| f.cars.len()).sum()
    }

    /// Rows `(face, car, time, dart, offset)` for every breakpoint.
    pub fn dump(&self, map: &SurfaceMap) -> Vec<DumpRow> {
        let mut rows = Vec::new();
        for fc in &self.faces {
            let walk = map.face(fc.face);
            let p = Rational::from_integer(walk.len() as i64);
            for (j, car) in fc.cars.iter().enumerate() {
                for &(t, s) in &car.points {
                    let r = rational::modulo(s, p);
                    let i = r.floor();
                    rows.push(DumpRow {
                        face: fc.face,
                        car: j,
                        time: t,
                        dart: walk[i.to_integer() as usize],
                        offset: r - i,
                    });
                }
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DumpRow {
    pub face: FaceId,
    pub car: usize,
    #[serde(with = "rational::serde_string")]
    pub time: Rational,
    pub dart: Dart,
    #[serde(with = "rational::serde_string")]
    pub offset: Rational,
}

/// A point of the 1-skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Location {
    Vertex(VertexId),
    /// Interior point of the edge of `edge` (its smaller dart), at `offset`
    /// along that dart.
    Edge {
        edge: Dart,
        #[serde(with = "rational::serde_string")]
        offset: Rational,
    },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Vertex(v) => write!(f, "{v}"),
            Location::Edge { edge, offset } => write!(f, "edge {edge} at {offset}"),
        }
    }
}

/// The point at unwrapped coordinate `s` on the boundary of `face`.
pub fn location_on(map: &SurfaceMap, face: FaceId, s: Rational) -> Location {
    let walk = map.face(face);
    let r = rational::modulo(s, Rational::from_integer(walk.len() as i64));
    let i = r.floor();
    let d = walk[i.to_integer() as usize];
    let f = r - i;
    if f.is_zero() {
        Location::Vertex(map.origin(d))
    } else if map.edge_of(d) == d {
        Location::Edge { edge: d, offset: f }
    } else {
        Location::Edge { edge: map.edge_of(d), offset: Rational::one() - f }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MotionFinding {
    /// Condition 1: every face carries at least one car.
    FaceWithoutCars { face: FaceId },
    UnknownFace { face: FaceId },
    RepeatedFace { face: FaceId },
    /// The circle of time of a car on a face with `d` cars must have length `d·T`.
    WrongDuration { face: FaceId, car: usize },
    /// Stops or U-turns.
    NotAdvancing { face: FaceId, car: usize },
    /// One circle of time must cover the boundary exactly once.
    WrongLap { face: FaceId, car: usize },
    /// Condition 2: `α_j(t + T) = α_{j+1}(t)`.
    ShiftViolated {
        face: FaceId,
        car: usize,
        #[serde(with = "rational::serde_string")]
        time: Rational,
    },
    /// Condition 3: over `[0, T]` the cars cover consecutive arcs tiling the boundary.
    ArcsDoNotPartition { face: FaceId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotionReport {
    pub valid: bool,
    pub findings: Vec<MotionFinding>,
}

/// Checks the three conditions of a multiple motion and the shape of each
/// car. The shift condition is compared at every breakpoint of both sides,
/// all of which lie on the `1/Q` grid; two piecewise-linear functions that
/// agree there and differ by a constant agree everywhere.
pub fn validate_motion(map: &SurfaceMap, motion: &DiscreteMotion) -> MotionReport {
    let mut findings = Vec::new();
    let t = motion.period;
    let mut seen = BTreeSet::new();
    for fc in &motion.faces {
        if fc.face.0 >= map.face_count() {
            findings.push(MotionFinding::UnknownFace { face: fc.face });
            continue;
        }
        if !seen.insert(fc.face) {
            findings.push(MotionFinding::RepeatedFace { face: fc.face });
        }
    }
    for f in map.face_ids() {
        if motion.cars_on(f) == 0 {
            findings.push(MotionFinding::FaceWithoutCars { face: f });
        }
    }
    for fc in motion.faces.iter().filter(|fc| fc.face.0 < map.face_count()) {
        let face = fc.face;
        let d = fc.cars.len();
        let p = Rational::from_integer(map.perimeter(face) as i64);
        let l = t * Rational::from_integer(d as i64);
        let mut shaped = true;
        for (j, car) in fc.cars.iter().enumerate() {
            if car.duration() != l {
                findings.push(MotionFinding::WrongDuration { face, car: j });
                shaped = false;
            }
            if car.points.windows(2).any(|w| w[1].1 <= w[0].1) {
                findings.push(MotionFinding::NotAdvancing { face, car: j });
                shaped = false;
            }
            if car.lap() != p {
                findings.push(MotionFinding::WrongLap { face, car: j });
                shaped = false;
            }
        }
        if !shaped || d == 0 {
            continue;
        }
        for j in 0..d {
            let a = &fc.cars[j];
            let b = &fc.cars[(j + 1) % d];
            let mut times: BTreeSet<Rational> = b.points.iter().map(|p| p.0).collect();
            times.extend(a.points.iter().map(|pt| rational::modulo(pt.0 - t, l)));
            let mut offset = None;
            for &tau in &times {
                let diff = a.at(tau + t) - b.at(tau);
                let good = rational::is_integer(&(diff / p)) && offset.is_none_or(|o| o == diff);
                if !good {
                    findings.push(MotionFinding::ShiftViolated { face, car: j, time: tau });
                    break;
                }
                offset = Some(diff);
            }
        }
        let mut total = Rational::zero();
        let mut tiled = true;
        for j in 0..d {
            let car = &fc.cars[j];
            let (s0, s1) = (car.at(Rational::zero()), car.at(t));
            total += s1 - s0;
            let next = fc.cars[(j + 1) % d].at(Rational::zero());
            if !rational::is_integer(&((s1 - next) / p)) {
                tiled = false;
            }
        }
        if !tiled || total != p {
            findings.push(MotionFinding::ArcsDoNotPartition { face });
        }
    }
    MotionReport { valid: findings.is_empty(), findings }
}

/// One constant-speed car per face with period `period`, except `face`
/// which gets `cars` unit-speed cars spaced `period` apart from `start`.
fn buses_with_companions(
    map: &SurfaceMap,
    face: FaceId,
    cars: usize,
    start: Rational,
    period: Rational,
) -> Result<DiscreteMotion, MotionError> {
    let p = Rational::from_integer(map.perimeter(face) as i64);
    let base = Trajectory::uniform(start, p, p)?;
    let mut faces = vec![FaceCars::from_base(face, &base, cars, period)];
    for f in map.face_ids().filter(|&f| f != face) {
        let pf = Rational::from_integer(map.perimeter(f) as i64);
        faces.push(FaceCars { face: f, cars: vec![Trajectory::uniform(Rational::zero(), pf, period)?] });
    }
    DiscreteMotion::new(period, faces)
}

/// `n` buses on the hole reading `w` once per period `|w|`, one edge per
/// minute. Every other face gets one companion car that laps its face
/// once per period, so that each face is moved around by a car.
pub fn build_bus_motion(map: &SurfaceMap, w: &CyclicWord, n: usize) -> Result<DiscreteMotion, MotionError> {
    if n == 0 {
        return Err(MotionError::NoCars);
    }
    if w.is_empty() {
        return Err(MotionError::Invalid("the word must be nonempty".into()));
    }
    let hole = map.single_hole()?;
    let label = map.face_label(hole).ok_or(MapError::Unlabeled)?;
    let perimeter = label.len();
    if perimeter != n * w.len() {
        return Err(MotionError::LengthMismatch { perimeter, cars: n, word: w.len() });
    }
    let target = w.power(n)?;
    let target = target.letters();
    let agree = |offset: usize| (0..perimeter).take_while(|&i| label[(offset + i) % perimeter] == target[i]).count();
    let (best, matched) = (0..perimeter).map(|o| (o, agree(o))).max_by_key(|&(o, m)| (m, std::cmp::Reverse(o))).expect("nonempty");
    if matched < perimeter {
        let letter = |g: words::Generator| words::letters_to_string(&[g]);
        return Err(MotionError::LabelMismatch {
            position: matched,
            expected: letter(target[matched]),
            found: letter(label[(best + matched) % perimeter]),
        });
    }
    let period = Rational::from_integer(w.len() as i64);
    buses_with_companions(map, hole, n, Rational::from_integer(best as i64), period)
}

/// `n` unit-speed buses on the hole of an unlabeled map, spaced evenly.
pub fn unit_speed_buses(map: &SurfaceMap, n: usize) -> Result<DiscreteMotion, MotionError> {
    if n == 0 {
        return Err(MotionError::NoCars);
    }
    let hole = map.single_hole()?;
    let perimeter = map.perimeter(hole);
    if perimeter % n != 0 {
        return Err(MotionError::LengthMismatch { perimeter, cars: n, word: perimeter / n });
    }
    let period = Rational::from_integer((perimeter / n) as i64);
    buses_with_companions(map, hole, n, Rational::zero(), period)
}

/// `d` cars of constant speed on every face of a one-face map, period `T`.
pub fn uniform_motion(map: &SurfaceMap, d: usize, period: Rational) -> Result<DiscreteMotion, MotionError> {
    if d == 0 {
        return Err(MotionError::NoCars);
    }
    let faces = map
        .face_ids()
        .map(|f| {
            let p = Rational::from_integer(map.perimeter(f) as i64);
            let base = Trajectory::uniform(Rational::zero(), p, period * Rational::from_integer(d as i64))?;
            Ok(FaceCars::from_base(f, &base, d, period))
        })
        .collect::<Result<Vec<_>, MotionError>>()?;
    DiscreteMotion::new(period, faces)
}
