//! Corner weights and the combinatorial Gauss–Bonnet identity.
//!
//! For weights `ν(c)` on the corners, `K(v) = 2 − Σ ν(c)` over the corners
//! at `v` and `K(D) = 2 − Σ (1 − ν(c))` over the corners of `D`. Summing
//! over everything gives `2χ(S)` regardless of the weights.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{CornerId, Dart, FaceId, MapError, SurfaceMap, VertexId};
use crate::rational::{self, Rational};

/// One weight per corner, stored by the corner's dart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightScheme {
    weights: Vec<Rational>,
}

impl WeightScheme {
    pub fn from_fn(map: &SurfaceMap, mut f: impl FnMut(Dart) -> Rational) -> Self {
        WeightScheme { weights: map.darts().map(&mut f).collect() }
    }

    pub fn uniform(map: &SurfaceMap, value: Rational) -> Self {
        WeightScheme { weights: vec![value; map.dart_count()] }
    }

    /// Every corner of `map` must be assigned exactly once.
    pub fn from_corners(map: &SurfaceMap, corners: &BTreeMap<CornerId, Rational>) -> Result<Self, MapError> {
        let mut weights = vec![None; map.dart_count()];
        for (c, &w) in corners {
            let d = map
                .corner_dart(*c)
                .ok_or(MapError::NoSuchCorner { face: c.face.0, position: c.position })?;
            weights[d.0] = Some(w);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(d, w)| {
                let c = map.corner_of(Dart(d));
                w.ok_or(MapError::MissingCorner { face: c.face.0, position: c.position })
            })
            .collect::<Result<_, _>>()?;
        Ok(WeightScheme { weights })
    }

    /// Lines `<face> <position> <weight>`; `#` starts a comment.
    pub fn parse(map: &SurfaceMap, text: &str) -> Result<Self, MapError> {
        let mut corners = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| MapError::Parse { line: i + 1, message: message.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [face, position, weight] = fields[..] else {
                return Err(err("expected `<face> <position> <weight>`"));
            };
            let face = face.parse().map_err(|_| err("bad face index"))?;
            let position = position.parse().map_err(|_| err("bad position"))?;
            let weight = rational::parse(weight).ok_or_else(|| err("bad weight"))?;
            let corner = CornerId { face: FaceId(face), position };
            if corners.insert(corner, weight).is_some() {
                return Err(MapError::DuplicateCorner { face, position });
            }
        }
        Self::from_corners(map, &corners)
    }

    pub fn weight(&self, map: &SurfaceMap, c: CornerId) -> Option<Rational> {
        map.corner_dart(c).map(|d| self.weights[d.0])
    }

    pub fn weight_of_dart(&self, d: Dart) -> Rational {
        self.weights[d.0]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Curvature {
    #[serde(serialize_with = "serialize_list")]
    pub vertices: Vec<Rational>,
    #[serde(serialize_with = "serialize_list")]
    pub faces: Vec<Rational>,
    #[serde(with = "rational::serde_string")]
    pub total: Rational,
    pub euler_characteristic: i64,
}

fn serialize_list<S: serde::Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_string()))
}

impl Curvature {
    pub fn vertex(&self, v: VertexId) -> Rational {
        self.vertices[v.0]
    }

    pub fn face(&self, f: FaceId) -> Rational {
        self.faces[f.0]
    }
}

/// Vertex and face curvatures and their total.
///
/// Panics if the total differs from `2χ`, which would mean the curvature
/// bookkeeping itself is broken.
pub fn weight_test(map: &SurfaceMap, scheme: &WeightScheme) -> Result<Curvature, MapError> {
    if scheme.len() != map.dart_count() {
        return Err(MapError::SchemeSize { expected: map.dart_count(), found: scheme.len() });
    }
    let two = Rational::from_integer(2);
    let vertices: Vec<Rational> = map
        .vertices()
        .map(|v| two - map.rotation(v).iter().map(|&d| scheme.weights[d.0]).sum::<Rational>())
        .collect();
    let faces: Vec<Rational> = map
        .faces()
        .iter()
        .map(|walk| two - walk.iter().map(|&d| Rational::one() - scheme.weights[d.0]).sum::<Rational>())
        .collect();
    let total = vertices.iter().chain(&faces).copied().sum::<Rational>();
    let euler = map.euler_characteristic();
    assert_eq!(total, Rational::from_integer(2 * euler), "weight test identity violated");
    Ok(Curvature { vertices, faces, total, euler_characteristic: euler })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeKind {
    /// Hole corners 1; interior corners at a vertex with `k` hole corners
    /// and `l > 0` interior corners get `(2 − k)/l`.
    Lemma1,
    /// Interior corners at vertices of degree > 2 get 1/2 next to one hole
    /// corner and 0 next to two; everything else 1.
    Lemma2,
}

impl std::str::FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lemma1" => Ok(SchemeKind::Lemma1),
            "lemma2" => Ok(SchemeKind::Lemma2),
            other => Err(format!("unknown scheme {other:?}, expected lemma1 or lemma2")),
        }
    }
}

pub fn build_scheme(map: &SurfaceMap, kind: SchemeKind) -> Result<WeightScheme, MapError> {
    map.single_hole()?;
    map.require_no_degree_one()?;
    let is_hole_corner = |d: Dart| map.is_hole_dart(d);
    let scheme = match kind {
        SchemeKind::Lemma1 => WeightScheme::from_fn(map, |d| {
            if is_hole_corner(d) {
                return Rational::one();
            }
            let rot = map.rotation(map.origin(d));
            let k = rot.iter().filter(|&&c| is_hole_corner(c)).count() as i64;
            let l = rot.len() as i64 - k;
            Rational::new(2 - k, l)
        }),
        SchemeKind::Lemma2 => WeightScheme::from_fn(map, |d| {
            if is_hole_corner(d) || map.degree(map.origin(d)) <= 2 {
                return Rational::one();
            }
            let neighbours = [map.rotation_next(d), map.rotation_prev(d)];
            match neighbours.iter().filter(|&&c| is_hole_corner(c)).count() {
                0 => Rational::one(),
                1 => Rational::new(1, 2),
                _ => Rational::zero(),
            }
        }),
    };
    Ok(scheme)
}
