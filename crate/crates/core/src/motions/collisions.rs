//! Exact collision detection and the car-crash bound.
//!
//! Every car is unrolled over the global period `Λ = lcm(d_D)·T`, after
//! which all cars are periodic. Vertex visits are read off the integer
//! crossings of each linear segment; edge meetings come from solving the
//! linear difference of two cars on the same edge over their common time
//! window. Points are collected by location with all their times.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{validate_motion, DiscreteMotion, Location, MotionError};
use crate::rational::{self, Rational};
use crate::surface_maps::{Dart, FaceId, SurfaceMap, VertexId};

type CarId = (FaceId, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionPoint {
    pub location: Location,
    /// Times in `[0, Λ)` at which the collision is complete.
    #[serde(serialize_with = "serialize_times")]
    pub times: Vec<Rational>,
    pub cars_present: usize,
    pub degree: usize,
}

fn serialize_times<S: serde::Serializer>(times: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(times.iter().map(|t| t.to_string()))
}

/// Two cars travelling together along an edge for a positive time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerateOverlap {
    pub edge: Dart,
    #[serde(with = "rational::serde_string")]
    pub from: Rational,
    #[serde(with = "rational::serde_string")]
    pub to: Rational,
    pub cars: [CarId; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    /// Complete collision points, sorted by location.
    pub points: Vec<CollisionPoint>,
    pub complete_count: usize,
    /// How many of the points lie inside edges.
    pub edge_points: usize,
    pub degenerate: Vec<DegenerateOverlap>,
    #[serde(with = "rational::serde_string")]
    pub global_period: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CarCrash {
    pub report: CollisionReport,
    pub euler_characteristic: i64,
    pub bound: i64,
    pub complete_count: usize,
    pub satisfied: bool,
}

/// A linear stretch of one car inside one dart interval.
#[derive(Debug, Clone, Copy)]
struct EdgePiece {
    car: CarId,
    t0: Rational,
    t1: Rational,
    x0: Rational,
    x1: Rational,
}

impl EdgePiece {
    fn at(&self, t: Rational) -> Rational {
        if self.t1 == self.t0 {
            return self.x0;
        }
        self.x0 + (self.x1 - self.x0) * (t - self.t0) / (self.t1 - self.t0)
    }
}

/// Requires a valid motion; reports every complete collision over one
/// global period.
pub fn detect_collisions(map: &SurfaceMap, motion: &DiscreteMotion) -> Result<CollisionReport, MotionError> {
    let validity = validate_motion(map, motion);
    if !validity.valid {
        return Err(MotionError::Invalid(format!("motion is not valid: {:?}", validity.findings)));
    }
    let lcm_d = motion.faces().iter().fold(1i64, |acc, f| acc.lcm(&(f.cars.len() as i64)));
    let global = motion.period() * Rational::from_integer(lcm_d);

    let mut at_vertex: BTreeMap<(usize, Rational), BTreeSet<CarId>> = BTreeMap::new();
    let mut on_edge: BTreeMap<Dart, Vec<EdgePiece>> = BTreeMap::new();
    for fc in motion.faces() {
        let walk = map.face(fc.face);
        let p = walk.len() as i64;
        for (j, car) in fc.cars.iter().enumerate() {
            let id = (fc.face, j);
            let reps = (global / car.duration()).to_integer();
            for k in 0..reps {
                let dt = car.duration() * Rational::from_integer(k);
                let ds = car.lap() * Rational::from_integer(k);
                for seg in car.points().windows(2) {
                    let (t0, s0) = (seg[0].0 + dt, seg[0].1 + ds);
                    let (t1, s1) = (seg[1].0 + dt, seg[1].1 + ds);
                    let time_at = |s: Rational| t0 + (t1 - t0) * (s - s0) / (s1 - s0);
                    let first = s0.ceil().to_integer();
                    let last = s1.ceil().to_integer();
                    for m in first..last {
                        let d = walk[m.rem_euclid(p) as usize];
                        let t = rational::modulo(time_at(Rational::from_integer(m)), global);
                        at_vertex.entry((map.origin(d).0, t)).or_default().insert(id);
                    }
                    // Pieces between consecutive integer crossings.
                    let mut cuts = vec![s0];
                    cuts.extend((s0.floor().to_integer() + 1..=s1.ceil().to_integer() - 1).map(Rational::from_integer));
                    cuts.push(s1);
                    for c in cuts.windows(2) {
                        let (sa, sb) = (c[0], c[1]);
                        let m = sa.floor();
                        let d = walk[m.to_integer().rem_euclid(p) as usize];
                        let (fa, fb) = (sa - m, sb - m);
                        let e = map.edge_of(d);
                        let (x0, x1) = if e == d { (fa, fb) } else { (Rational::one() - fa, Rational::one() - fb) };
                        on_edge.entry(e).or_default().push(EdgePiece { car: id, t0: time_at(sa), t1: time_at(sb), x0, x1 });
                    }
                }
            }
        }
    }

    let mut points: BTreeMap<Location, (BTreeSet<Rational>, usize, usize)> = BTreeMap::new();
    for ((v, t), cars) in at_vertex {
        let degree = map.degree(VertexId(v));
        if cars.len() == degree {
            let entry = points.entry(Location::Vertex(VertexId(v))).or_insert((BTreeSet::new(), cars.len(), degree));
            entry.0.insert(t);
        }
    }

    let mut degenerate = Vec::new();
    let mut meetings: BTreeMap<(Location, Rational), BTreeSet<CarId>> = BTreeMap::new();
    for (&edge, pieces) in &on_edge {
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if a.car == b.car {
                    continue;
                }
                let lo = a.t0.max(b.t0);
                let hi = a.t1.min(b.t1);
                if lo > hi {
                    continue;
                }
                let g_lo = a.at(lo) - b.at(lo);
                let g_hi = a.at(hi) - b.at(hi);
                let t_star = if lo == hi {
                    if !g_lo.is_zero() {
                        continue;
                    }
                    lo
                } else if g_lo.is_zero() && g_hi.is_zero() {
                    let x = a.at((lo + hi) / Rational::from_integer(2));
                    if x > Rational::zero() && x < Rational::one() {
                        degenerate.push(DegenerateOverlap {
                            edge,
                            from: rational::modulo(lo, global),
                            to: rational::modulo(lo, global) + (hi - lo),
                            cars: [a.car, b.car],
                        });
                    }
                    continue;
                } else if g_lo.is_positive() && g_hi.is_positive() || g_lo.is_negative() && g_hi.is_negative() {
                    continue;
                } else {
                    lo + (hi - lo) * g_lo / (g_lo - g_hi)
                };
                let x = a.at(t_star);
                if x > Rational::zero() && x < Rational::one() {
                    let loc = Location::Edge { edge, offset: x };
                    let cars = meetings.entry((loc, rational::modulo(t_star, global))).or_default();
                    cars.insert(a.car);
                    cars.insert(b.car);
                }
            }
        }
    }
    for ((loc, t), cars) in meetings {
        if cars.len() == 2 {
            points.entry(loc).or_insert((BTreeSet::new(), 2, 2)).0.insert(t);
        }
    }

    let points: Vec<CollisionPoint> = points
        .into_iter()
        .map(|(location, (times, cars_present, degree))| CollisionPoint {
            location,
            times: times.into_iter().collect(),
            cars_present,
            degree,
        })
        .collect();
    let edge_points = points.iter().filter(|p| matches!(p.location, Location::Edge { .. })).count();
    Ok(CollisionReport { complete_count: points.len(), edge_points, points, degenerate, global_period: global })
}

/// Compares the number of complete collision points with
/// `χ + Σ_D (d_D − 1)`. Cars running together along an edge collide at
/// infinitely many points, which also satisfies the bound.
pub fn carcrash_check(map: &SurfaceMap, motion: &DiscreteMotion) -> Result<CarCrash, MotionError> {
    let report = detect_collisions(map, motion)?;
    let chi = map.euler_characteristic();
    let bound = chi + motion.faces().iter().map(|f| f.cars.len() as i64 - 1).sum::<i64>();
    let complete_count = report.complete_count;
    let satisfied = complete_count as i64 >= bound || !report.degenerate.is_empty();
    Ok(CarCrash { report, euler_characteristic: chi, bound, complete_count, satisfied })
}
