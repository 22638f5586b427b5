//! The model of a one-holed map: contract every edge off the hole boundary,
//! then read towns, junctions and highways off the result.
//!
//! At a vertex of the contracted map the hole corners cut the rotation into
//! units. A unit is either a town point (dart, town corner, dart) or a
//! single dart whose edge has the hole on both sides (a highway end). With
//! `u` hole corners:
//!
//! * `u = 1`: the vertex lies inside a town boundary or a highway;
//! * `u = 2`: two town points are joined by a zero-length highway, a town
//!   point and a highway end make an exit, two highway ends pass through;
//! * `u ≥ 3`: `u − 2` triple junctions chained by zero-length highways, with
//!   the units shared out two at each end and one in between.

use serde::Serialize;

use super::pieces::offhole_forest_check;
use super::{Dart, FaceId, MapError, SurfaceMap, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Town {
    pub id: usize,
    pub face: FaceId,
    pub walk: Vec<Dart>,
    pub perimeter: usize,
    pub source_face: FaceId,
    pub source_perimeter: usize,
    /// Walk positions of the corners where highways attach, ascending.
    pub exits: Vec<usize>,
}

impl Town {
    pub fn attachments(&self) -> usize {
        self.exits.len()
    }

    /// Boundary lengths between consecutive exits, starting at `exits[0]`.
    pub fn arcs(&self) -> Vec<usize> {
        let k = self.exits.len();
        (0..k)
            .map(|i| {
                let (a, b) = (self.exits[i], self.exits[(i + 1) % k]);
                if k == 1 {
                    self.perimeter
                } else {
                    (b + self.perimeter - a) % self.perimeter
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Junction {
    pub id: usize,
    pub vertex: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Endpoint {
    Town { town: usize, position: usize },
    Junction(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Highway {
    pub ends: [Endpoint; 2],
    /// Forward darts from `ends[0]` to `ends[1]`; empty for zero length.
    pub darts: Vec<Dart>,
    pub label: Option<String>,
}

impl Highway {
    pub fn length(&self) -> usize {
        self.darts.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub map: SurfaceMap,
    /// Dart of the input map for every dart of `map`.
    pub source_dart: Vec<Dart>,
    pub towns: Vec<Town>,
    pub junctions: Vec<Junction>,
    pub highways: Vec<Highway>,
}

impl Model {
    pub fn town_of_face(&self, f: FaceId) -> Option<&Town> {
        self.towns.iter().find(|t| t.face == f)
    }

    pub fn hole(&self) -> FaceId {
        self.map.single_hole().expect("models keep one hole")
    }

    pub fn count_towns(&self, attachments: usize) -> usize {
        self.towns.iter().filter(|t| t.attachments() == attachments).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Town { face: FaceId, dart: Dart },
    Road(Dart),
}

/// Contracts the edges of a forest given as a dart predicate. Returns the
/// contracted map (without labels or holes) and the source dart of each new dart.
fn contract(map: &SurfaceMap, tree: impl Fn(Dart) -> bool) -> Result<(SurfaceMap, Vec<Dart>), MapError> {
    let kept: Vec<Dart> = map.darts().filter(|&d| !tree(d)).collect();
    if kept.is_empty() {
        return Err(MapError::Invalid("every edge would be contracted".into()));
    }
    let mut new_id = vec![usize::MAX; map.dart_count()];
    for (i, d) in kept.iter().enumerate() {
        new_id[d.0] = i;
    }
    let next_kept = |d: Dart| {
        let mut x = map.rotation_next(d);
        while tree(x) {
            x = map.rotation_next(map.partner(x));
        }
        x
    };
    let mut seen = vec![false; map.dart_count()];
    let mut rotations = Vec::new();
    for &start in &kept {
        if seen[start.0] {
            continue;
        }
        let mut rot = Vec::new();
        let mut d = start;
        while !seen[d.0] {
            seen[d.0] = true;
            rot.push(Dart(new_id[d.0]));
            d = next_kept(d);
        }
        rotations.push(rot);
    }
    let pairs: Vec<(Dart, Dart)> = kept
        .iter()
        .filter(|&&d| d < map.partner(d))
        .map(|&d| (Dart(new_id[d.0]), Dart(new_id[map.partner(d).0])))
        .collect();
    let contracted = SurfaceMap::new(rotations, &pairs)?;
    Ok((contracted, kept))
}

pub fn extract_model(map: &SurfaceMap) -> Result<Model, MapError> {
    let hole = map.single_hole()?;
    map.require_no_degree_one()?;
    let forest = offhole_forest_check(map)?;
    if !forest.is_forest {
        return Err(MapError::Invalid("edges off the hole boundary contain a cycle".into()));
    }
    let off = |d: Dart| !map.is_hole_dart(d) && !map.is_hole_dart(map.partner(d));
    let (mut cmap, source_dart) = contract(map, off)?;
    if cmap.face_count() != map.face_count() {
        return Err(MapError::Invalid("contraction removed a face".into()));
    }
    if let Some(labels) = map.labels() {
        let l = source_dart.iter().map(|d| labels[d.0]).collect();
        cmap = cmap.with_labels(l)?;
    }
    let new_hole = cmap.face_of(Dart(source_dart.iter().position(|&d| map.face_of(d) == hole).expect("hole has darts")));
    cmap = cmap.with_holes([new_hole])?;

    let towns_by_face: Vec<Option<usize>> = {
        let mut next = 0;
        cmap.face_ids()
            .map(|f| {
                (f != new_hole).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let mut towns: Vec<Town> = cmap
        .face_ids()
        .filter(|&f| f != new_hole)
        .enumerate()
        .map(|(id, f)| {
            let walk = cmap.face(f).to_vec();
            let source_face = map.face_of(source_dart[walk[0].0]);
            Town {
                id,
                face: f,
                perimeter: walk.len(),
                walk,
                source_face,
                source_perimeter: map.perimeter(source_face),
                exits: Vec::new(),
            }
        })
        .collect();

    let town_end = |u: &Unit| match *u {
        Unit::Town { face, dart } => Some(Endpoint::Town {
            town: towns_by_face[face.0].expect("town corner"),
            position: cmap.position_in_face(dart),
        }),
        Unit::Road(_) => None,
    };

    let mut junctions = Vec::new();
    let mut highways = Vec::new();
    // Endpoint at the origin of each road dart, or None where the road passes through.
    let mut road_end: Vec<Option<Endpoint>> = vec![None; cmap.dart_count()];
    let mut through: Vec<Option<Dart>> = vec![None; cmap.dart_count()];

    for v in cmap.vertices() {
        let units = vertex_units(&cmap, v)?;
        let u = units.len();
        match u {
            0 => return Err(MapError::Invalid(format!("vertex {} is off the hole after contraction", v.0))),
            1 => {}
            2 => match (units[0], units[1]) {
                (Unit::Road(a), Unit::Road(b)) => {
                    through[a.0] = Some(b);
                    through[b.0] = Some(a);
                }
                (Unit::Road(r), t) | (t, Unit::Road(r)) => road_end[r.0] = town_end(&t),
                (a, b) => highways.push(Highway {
                    ends: [town_end(&a).expect("town"), town_end(&b).expect("town")],
                    darts: Vec::new(),
                    label: None,
                }),
            },
            _ => {
                let first = junctions.len();
                for _ in 0..u - 2 {
                    junctions.push(Junction { id: junctions.len(), vertex: v });
                }
                for m in first..first + u - 3 {
                    highways.push(Highway {
                        ends: [Endpoint::Junction(m), Endpoint::Junction(m + 1)],
                        darts: Vec::new(),
                        label: None,
                    });
                }
                for (i, unit) in units.iter().enumerate() {
                    let j = Endpoint::Junction(first + i.clamp(1, u - 2) - 1);
                    match *unit {
                        Unit::Road(r) => road_end[r.0] = Some(j),
                        t => highways.push(Highway { ends: [town_end(&t).expect("town"), j], darts: Vec::new(), label: None }),
                    }
                }
            }
        }
    }

    let mut visited = vec![false; cmap.dart_count()];
    for d in cmap.darts() {
        let Some(start) = road_end[d.0] else { continue };
        if visited[d.0] {
            continue;
        }
        let mut darts = vec![d];
        let mut cur = d;
        let end = loop {
            let back = cmap.partner(cur);
            if let Some(e) = road_end[back.0] {
                break e;
            }
            let next = through[back.0].ok_or_else(|| MapError::Invalid(format!("highway dart {} ends nowhere", back.0)))?;
            darts.push(next);
            cur = next;
        };
        for &x in &darts {
            visited[x.0] = true;
        }
        visited[cmap.partner(cur).0] = true;
        let label = cmap.labels().map(|l| crate::words::letters_to_string(&darts.iter().map(|x| l[x.0]).collect::<Vec<_>>()));
        highways.push(Highway { ends: [start, end], darts, label });
    }
    if let Some(d) = cmap.darts().find(|&d| through[d.0].is_some() && !visited[d.0]) {
        return Err(MapError::Invalid(format!("highway through dart {} is a closed loop", d.0)));
    }

    for h in &highways {
        for e in h.ends {
            if let Endpoint::Town { town, position } = e {
                towns[town].exits.push(position);
            }
        }
    }
    for t in &mut towns {
        t.exits.sort_unstable();
        if !(2..=4).contains(&t.exits.len()) {
            return Err(MapError::Invalid(format!("town {} has {} highway attachments", t.id, t.exits.len())));
        }
    }
    Ok(Model { map: cmap, source_dart, towns, junctions, highways })
}

fn vertex_units(map: &SurfaceMap, v: VertexId) -> Result<Vec<Unit>, MapError> {
    let rot = map.rotation(v);
    let k = rot.len();
    let hole_at: Vec<usize> = (0..k).filter(|&i| map.is_hole_dart(rot[i])).collect();
    let mut units = Vec::new();
    if hole_at.len() < 2 {
        return Ok(vec![Unit::Road(rot[0]); hole_at.len()]);
    }
    for (n, &i) in hole_at.iter().enumerate() {
        let j = hole_at[(n + 1) % hole_at.len()];
        let gap = (j + k - i) % k;
        match gap {
            1 => units.push(Unit::Road(rot[i])),
            2 => {
                let dart = rot[(i + 1) % k];
                units.push(Unit::Town { face: map.face_of(dart), dart });
            }
            _ => return Err(MapError::Invalid(format!("vertex {} has adjacent town corners", v.0))),
        }
    }
    Ok(units)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelConfiguration {
    TwoSpecial1,
    OneSpecial2,
    Special1PlusJunction,
    TwoJunctions,
}

/// Which of the four admissible configurations the model is in; any other
/// combination is returned as an error naming the counts.
pub fn model_configuration(model: &Model) -> Result<ModelConfiguration, MapError> {
    let s1 = model.count_towns(3);
    let s2 = model.count_towns(4);
    let j = model.junctions.len();
    match (s1, s2, j) {
        (2, 0, 0) => Ok(ModelConfiguration::TwoSpecial1),
        (0, 1, 0) => Ok(ModelConfiguration::OneSpecial2),
        (1, 0, 1) => Ok(ModelConfiguration::Special1PlusJunction),
        (0, 0, 2) => Ok(ModelConfiguration::TwoJunctions),
        _ => Err(MapError::Invalid(format!(
            "no admissible configuration: {s1} 1-special towns, {s2} 2-special towns, {j} junctions"
        ))),
    }
}
