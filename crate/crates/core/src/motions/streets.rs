//! Street trees inside towns and the cab motion on streets and highways.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{DiscreteMotion, FaceCars, MotionError, Trajectory};
use crate::presentations::ParameterLadder;
use crate::rational::{self, Rational};
use crate::surface_maps::{Dart, FaceId, SurfaceMap};
use crate::surface_maps::model::Model;

/// A star of streets: leg `i` joins the centre to exit `i`, so the street
/// path between neighbouring exits `i` and `i + 1` has length
/// `legs[i] + legs[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StreetTree {
    pub town: usize,
    pub perimeter: usize,
    pub exits: Vec<usize>,
    pub arcs: Vec<usize>,
    #[serde(serialize_with = "serialize_all")]
    pub legs: Vec<Rational>,
    #[serde(with = "rational::serde_string")]
    pub max_deviation: Rational,
}

fn serialize_all<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl StreetTree {
    /// Street distance from exit `arc + 1` to exit `arc`.
    pub fn street_length(&self, arc: usize) -> Rational {
        let k = self.legs.len();
        self.legs[arc] + self.legs[(arc + 1) % k]
    }
}

/// Leg lengths `ℓ_i = (d_ij + d_ik − d_jk)/2` of a three-point star, with
/// negative solutions clamped to zero.
pub fn star_legs(d: [[Rational; 3]; 3]) -> [Rational; 3] {
    let two = Rational::from_integer(2);
    std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        ((d[i][j] + d[i][k] - d[j][k]) / two).max(Rational::zero())
    })
}

fn legs_for(arcs: &[usize], perimeter: usize) -> Vec<Rational> {
    let a: Vec<Rational> = arcs.iter().map(|&x| Rational::from_integer(x as i64)).collect();
    let p = Rational::from_integer(perimeter as i64);
    let two = Rational::from_integer(2);
    match a.len() {
        2 => vec![a[0].min(a[1]), Rational::zero()],
        3 => {
            let dist = |x: Rational| x.min(p - x);
            let d01 = dist(a[0]);
            let d12 = dist(a[1]);
            let d20 = dist(a[2]);
            let z = Rational::zero();
            star_legs([[z, d01, d20], [d01, z, d12], [d20, d12, z]]).to_vec()
        }
        _ => {
            // Four points on a circle are not a tree metric; the star is
            // fitted to the neighbouring pairs, the only distances checked.
            let delta = (a[0] - a[1] + a[2] - a[3]) / Rational::from_integer(4);
            let b = [a[0] - delta, a[1] + delta, a[2] - delta, a[3] + delta];
            let lower = Rational::zero().max(b[0] - b[1]);
            let upper = b[0].min(b[0] - b[1] + b[2]);
            let s = (lower + upper) / two;
            [s, b[0] - s, b[1] - b[0] + s, b[2] - b[1] + b[0] - s]
                .into_iter()
                .map(|x| x.max(Rational::zero()))
                .collect()
        }
    }
}

/// One star per town. Fails when some pair of neighbouring exits is
/// further apart along the streets than `λ₂` times the perimeter from
/// their distance along the boundary.
pub fn build_streets(model: &Model, ladder: &ParameterLadder) -> Result<Vec<StreetTree>, MotionError> {
    let lambda2 = ladder.rung(2);
    let mut out = Vec::new();
    for town in &model.towns {
        let arcs = town.arcs();
        if !(2..=4).contains(&arcs.len()) {
            return Err(MotionError::Invalid(format!("town {} has {} exits", town.id, arcs.len())));
        }
        let legs = legs_for(&arcs, town.perimeter);
        let mut tree = StreetTree {
            town: town.id,
            perimeter: town.perimeter,
            exits: town.exits.clone(),
            arcs: arcs.clone(),
            legs,
            max_deviation: Rational::zero(),
        };
        let tolerance = lambda2 * Rational::from_integer(town.perimeter as i64);
        for (i, &arc) in arcs.iter().enumerate() {
            let deviation = (tree.street_length(i) - Rational::from_integer(arc as i64)).abs();
            tree.max_deviation = tree.max_deviation.max(deviation);
            if deviation > tolerance {
                return Err(MotionError::InfeasibleStreets { town: town.id, arc: i, deviation, tolerance });
            }
        }
        out.push(tree);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CabLeg {
    pub town: usize,
    pub arc: usize,
    #[serde(with = "rational::serde_string")]
    pub street_length: Rational,
    #[serde(with = "rational::serde_string")]
    pub bus_time: Rational,
    #[serde(with = "rational::serde_string")]
    pub speed: Rational,
}

#[derive(Debug, Clone)]
pub struct CabMotion {
    /// Streets and highways, subdivided into edges of length `1/scale`.
    pub street_map: SurfaceMap,
    pub motion: DiscreteMotion,
    pub scale: i64,
    /// Town traversals of the first cab, in driving order.
    pub legs: Vec<CabLeg>,
}

enum Run {
    Highway(Vec<Dart>),
    Town { town: usize, arc: usize, len: usize },
}

/// Edge keys of the street graph; `Leg` units count outward from the centre.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Unit {
    Highway(Dart, i64),
    Leg(usize, usize, i64),
}

struct Walk {
    ids: HashMap<Unit, (i64, bool)>,
    darts: Vec<i64>,
}

impl Walk {
    fn push(&mut self, unit: Unit, forward: bool) {
        let next = self.ids.len() as i64 + 1;
        let &mut (id, dir) = self.ids.entry(unit).or_insert((next, forward));
        self.darts.push(if dir == forward { id } else { -id });
    }
}

/// Cabs follow their buses along highways and cross each town along the
/// streets at the constant speed that makes them leave together with the
/// bus. Lengths are scaled by the least `L` making every leg an integer,
/// so the street map has unit edges.
pub fn build_cab_motion(model: &Model, streets: &[StreetTree], buses: &DiscreteMotion) -> Result<CabMotion, MotionError> {
    let map = &model.map;
    let hole = model.hole();
    let hole_walk = map.face(hole);
    let p = hole_walk.len();
    let bus_cars = &buses
        .faces()
        .iter()
        .find(|f| f.face == hole)
        .ok_or_else(|| MotionError::Invalid("no buses on the hole".into()))?
        .cars;

    let hole_corners = |d: Dart| map.rotation(map.origin(d)).iter().filter(|&&x| map.is_hole_dart(x)).count();
    let mut bounds: Vec<usize> = (0..p).filter(|&i| hole_corners(hole_walk[i]) >= 2).collect();
    if bounds.is_empty() {
        bounds.push(0);
    }

    let mut runs = Vec::new();
    for (r, &b) in bounds.iter().enumerate() {
        let end = if r + 1 < bounds.len() { bounds[r + 1] } else { bounds[0] + p };
        let darts: Vec<Dart> = (b..end).map(|i| hole_walk[i % p]).collect();
        let last = *darts.last().expect("runs are nonempty");
        let across = map.partner(last);
        if map.is_hole_dart(across) {
            if let Some(d) = darts.iter().find(|&&d| !map.is_hole_dart(map.partner(d))) {
                return Err(MotionError::Invalid(format!("run through dart {} mixes highway and town", d.0)));
            }
            runs.push(Run::Highway(darts));
            continue;
        }
        let town = model
            .town_of_face(map.face_of(across))
            .ok_or_else(|| MotionError::Invalid(format!("dart {} borders no town", across.0)))?;
        let position = map.position_in_face(across);
        let arc = town
            .exits
            .iter()
            .position(|&e| e == position)
            .ok_or_else(|| MotionError::Invalid(format!("no street path: town {} has no exit at {position}", town.id)))?;
        if town.arcs()[arc] != darts.len() {
            return Err(MotionError::Invalid(format!("town {} arc {arc} does not match the hole run", town.id)));
        }
        runs.push(Run::Town { town: town.id, arc, len: darts.len() });
    }

    let tree = |t: usize| {
        streets
            .iter()
            .find(|s| s.town == t)
            .ok_or_else(|| MotionError::Invalid(format!("no streets for town {t}")))
    };
    let scale = streets.iter().flat_map(|s| s.legs.iter()).fold(1i64, |acc, l| acc.lcm(l.denom()));
    let scale_r = Rational::from_integer(scale);

    // Street coordinate of each run start.
    let mut walk = Walk { ids: HashMap::new(), darts: Vec::new() };
    let mut starts = Vec::new();
    for run in &runs {
        starts.push(walk.darts.len() as i64);
        match run {
            Run::Highway(darts) => {
                for &d in darts {
                    let e = map.edge_of(d);
                    for k in 0..scale {
                        if e == d {
                            walk.push(Unit::Highway(e, k), true);
                        } else {
                            walk.push(Unit::Highway(e, scale - 1 - k), false);
                        }
                    }
                }
            }
            &Run::Town { town, arc, .. } => {
                let st = tree(town)?;
                let k = st.legs.len();
                let units = |leg: usize| (st.legs[leg] * scale_r).to_integer();
                let inward = (arc + 1) % k;
                for u in (0..units(inward)).rev() {
                    walk.push(Unit::Leg(town, inward, u), false);
                }
                for u in 0..units(arc) {
                    walk.push(Unit::Leg(town, arc, u), true);
                }
            }
        }
    }
    if walk.darts.is_empty() {
        return Err(MotionError::Invalid("street map would have no edges".into()));
    }
    let street_map = SurfaceMap::from_face_walks(&[walk.darts.clone()])?;
    if street_map.euler_characteristic() != map.euler_characteristic() {
        return Err(MotionError::Invalid(format!(
            "street map has Euler characteristic {}, the model {}",
            street_map.euler_characteristic(),
            map.euler_characteristic()
        )));
    }
    let ps = Rational::from_integer(walk.darts.len() as i64);
    let pr = Rational::from_integer(p as i64);
    let b0 = Rational::from_integer(bounds[0] as i64);

    // Hole coordinate → street coordinate, on highways and at run boundaries.
    let run_index = |s: Rational| -> (usize, Rational) {
        let r = rational::modulo(s - b0, pr) + b0;
        let i = bounds.partition_point(|&b| Rational::from_integer(b as i64) <= r) - 1;
        (i, r)
    };
    let street_of = |s: Rational| -> Option<Rational> {
        let laps = ((s - b0) / pr).floor();
        let (i, r) = run_index(s);
        let into = r - Rational::from_integer(bounds[i] as i64);
        let base = Rational::from_integer(starts[i]) + laps * ps;
        match runs[i] {
            Run::Highway(_) => Some(base + into * scale_r),
            Run::Town { .. } => into.is_zero().then_some(base),
        }
    };

    let mut cars = Vec::new();
    for bus in bus_cars.iter() {
        let l = bus.duration();
        let mut anchors: Vec<(Rational, Option<Rational>)> = Vec::new();
        let lo_s = bus.at(-l);
        let hi_s = bus.at(l + l);
        let first_lap = ((lo_s - b0) / pr).floor().to_integer() - 1;
        let last_lap = ((hi_s - b0) / pr).ceil().to_integer() + 1;
        for lap in first_lap..=last_lap {
            for &b in &bounds {
                let s = Rational::from_integer(b as i64) + Rational::from_integer(lap) * pr;
                if s >= lo_s && s <= hi_s {
                    anchors.push((bus.time_of(s), street_of(s)));
                }
            }
        }
        for k in -1..=1i64 {
            for &(t, _) in bus.points() {
                let t = t + l * Rational::from_integer(k);
                if let Some(g) = street_of(bus.at(t)) {
                    anchors.push((t, Some(g)));
                }
            }
        }
        anchors.push((Rational::zero(), street_of(bus.at(Rational::zero()))));
        anchors.push((l, street_of(bus.at(l))));
        anchors.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.is_some().cmp(&a.1.is_some())));
        anchors.dedup_by(|a, b| a.0 == b.0);
        let known: Vec<(Rational, Rational)> = anchors.iter().filter_map(|&(t, g)| g.map(|g| (t, g))).collect();
        let mut points = Vec::new();
        for &(t, g) in &anchors {
            if t < Rational::zero() || t > l {
                continue;
            }
            let g = match g {
                Some(g) => g,
                None => {
                    let i = known.partition_point(|a| a.0 < t);
                    let ((t0, g0), (t1, g1)) = (known[i - 1], known[i]);
                    g0 + (g1 - g0) * (t - t0) / (t1 - t0)
                }
            };
            points.push((t, g));
        }
        cars.push(Trajectory::new(points)?);
    }

    let first = &bus_cars[0];
    let mut legs = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        if let &Run::Town { town, arc, len } = run {
            let st = tree(town)?;
            let street_length = st.street_length(arc);
            let entry = Rational::from_integer(bounds[i] as i64);
            let bus_time = first.time_of(entry + Rational::from_integer(len as i64)) - first.time_of(entry);
            if street_length.is_zero() {
                return Err(MotionError::CabStop { town, arc });
            }
            legs.push(CabLeg { town, arc, street_length, bus_time, speed: street_length / bus_time });
        }
    }

    let street_face = FaceId(0);
    let motion = DiscreteMotion::new(buses.period(), vec![FaceCars { face: street_face, cars }])?;
    Ok(CabMotion { street_map, motion, scale, legs })
}
