//! Combinatorial maps on closed oriented surfaces.
//!
//! A map is a set of darts with a fixed-point-free involution (the edges)
//! and a rotation at each vertex. The face following dart `d` is traced by
//! `φ(d) = σ(α(d))`: cross the edge, then turn to the next dart in the
//! rotation at the far end. Face ids are assigned in trace order starting
//! from the least unvisited dart, which keeps them stable across
//! serialization.
//!
//! A corner is a face-side visit of a vertex; the corner of dart `d` sits at
//! the origin of `d` between `σ⁻¹(d)` and `d`, and is addressed by the
//! position of `d` in its face walk.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{self, Generator};

pub mod catalog;
pub mod diagram;
pub mod format;
pub mod model;
pub mod pieces;
pub mod weights;
pub mod wicks;

pub use diagram::{validate_diagram, DiagramReport, VanKampenTorusDiagram};
pub use model::{extract_model, model_configuration, Model, ModelConfiguration};
pub use pieces::{check_cprime_map, classify_cells, offhole_forest_check, pieces, CellClass, Piece};
pub use weights::{build_scheme, weight_test, Curvature, SchemeKind, WeightScheme};
pub use wicks::build_wicks_torus;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Dart(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct FaceId(pub usize);

/// A corner, addressed by its face and the position of its dart in the face walk.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct CornerId {
    pub face: FaceId,
    pub position: usize,
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map has no darts")]
    Empty,
    #[error("dart {0} is out of range")]
    DartOutOfRange(usize),
    #[error("dart {0} is not paired exactly once")]
    BadPairing(usize),
    #[error("dart {0} does not appear in exactly one vertex rotation")]
    BadRotation(usize),
    #[error("dart {0} does not appear exactly once in the face walks")]
    BadFaceWalk(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("face {0} does not exist")]
    NoSuchFace(usize),
    #[error("paired darts {0} and {1} do not carry inverse labels")]
    LabelMismatch(usize, usize),
    #[error("dart {0} has no label")]
    MissingLabel(usize),
    #[error("map is not labeled")]
    Unlabeled,
    #[error("vertex {0} has degree one")]
    DegreeOne(usize),
    #[error("expected exactly one hole, found {0}")]
    HoleCount(usize),
    #[error("weight scheme covers {found} corners but the map has {expected}")]
    SchemeSize { expected: usize, found: usize },
    #[error("corner ({face}, {position}) does not exist")]
    NoSuchCorner { face: usize, position: usize },
    #[error("corner ({face}, {position}) is assigned twice")]
    DuplicateCorner { face: usize, position: usize },
    #[error("corner ({face}, {position}) has no weight")]
    MissingCorner { face: usize, position: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A connected map on a closed oriented surface, optionally labeled, with
/// distinguished hole faces.
#[derive(Clone, PartialEq, Eq)]
pub struct SurfaceMap {
    pair: Vec<Dart>,
    succ: Vec<Dart>,
    pred: Vec<Dart>,
    rotations: Vec<Vec<Dart>>,
    vertex_of: Vec<VertexId>,
    faces: Vec<Vec<Dart>>,
    face_of: Vec<FaceId>,
    position: Vec<usize>,
    labels: Option<Vec<Generator>>,
    holes: BTreeSet<FaceId>,
}

impl fmt::Debug for SurfaceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceMap")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .field("faces", &self.face_count())
            .field("holes", &self.holes)
            .finish()
    }
}

impl SurfaceMap {
    /// Builds a map from vertex rotations and the edge pairing.
    ///
    /// Darts must be exactly `0..n`.
    pub fn new(rotations: Vec<Vec<Dart>>, pairs: &[(Dart, Dart)]) -> Result<Self, MapError> {
        let n: usize = rotations.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(MapError::Empty);
        }
        let mut pair = vec![None; n];
        for &(a, b) in pairs {
            for d in [a, b] {
                if d.0 >= n {
                    return Err(MapError::DartOutOfRange(d.0));
                }
            }
            if a == b || pair[a.0].is_some() || pair[b.0].is_some() {
                return Err(MapError::BadPairing(if pair[a.0].is_some() || a == b { a.0 } else { b.0 }));
            }
            pair[a.0] = Some(b);
            pair[b.0] = Some(a);
        }
        let pair: Vec<Dart> = pair
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or(MapError::BadPairing(i)))
            .collect::<Result<_, _>>()?;

        let mut vertex_of = vec![None; n];
        let mut succ = vec![Dart(0); n];
        let mut pred = vec![Dart(0); n];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                if d.0 >= n {
                    return Err(MapError::DartOutOfRange(d.0));
                }
                if vertex_of[d.0].is_some() {
                    return Err(MapError::BadRotation(d.0));
                }
                vertex_of[d.0] = Some(VertexId(v));
                let next = rot[(i + 1) % rot.len()];
                succ[d.0] = next;
                pred[next.0] = d;
            }
        }
        let vertex_of: Vec<VertexId> = vertex_of
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(MapError::BadRotation(i)))
            .collect::<Result<_, _>>()?;

        let mut map = SurfaceMap {
            pair,
            succ,
            pred,
            rotations,
            vertex_of,
            faces: Vec::new(),
            face_of: vec![FaceId(0); n],
            position: vec![0; n],
            labels: None,
            holes: BTreeSet::new(),
        };
        map.faces = map.trace_faces();
        for (f, walk) in map.faces.iter().enumerate() {
            for (i, d) in walk.iter().enumerate() {
                map.face_of[d.0] = FaceId(f);
                map.position[d.0] = i;
            }
        }
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        Ok(map)
    }

    /// Glues polygons: each walk lists signed 1-based edge ids, `+e` for the
    /// forward dart `2(e-1)` and `-e` for the reverse dart `2(e-1)+1`. Every
    /// dart must occur exactly once over all walks.
    pub fn from_face_walks(walks: &[Vec<i64>]) -> Result<Self, MapError> {
        let edges = walks.iter().flatten().map(|e| e.unsigned_abs() as usize).max().unwrap_or(0);
        let n = 2 * edges;
        if n == 0 {
            return Err(MapError::Empty);
        }
        let dart_of = |e: i64| -> Result<usize, MapError> {
            if e == 0 {
                return Err(MapError::Invalid("edge id 0 in face walk".into()));
            }
            let base = 2 * (e.unsigned_abs() as usize - 1);
            Ok(if e > 0 { base } else { base + 1 })
        };
        let mut next = vec![None; n];
        for walk in walks {
            let darts: Vec<usize> = walk.iter().map(|&e| dart_of(e)).collect::<Result<_, _>>()?;
            for (i, &d) in darts.iter().enumerate() {
                if next[d].is_some() {
                    return Err(MapError::BadFaceWalk(d));
                }
                next[d] = Some(darts[(i + 1) % darts.len()]);
            }
        }
        let next: Vec<usize> = next
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or(MapError::BadFaceWalk(i)))
            .collect::<Result<_, _>>()?;
        // φ = σ∘α, so σ(x) = φ(α(x)).
        let succ = |x: usize| next[x ^ 1];
        let mut seen = vec![false; n];
        let mut rotations = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut rot = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                rot.push(Dart(d));
                d = succ(d);
            }
            rotations.push(rot);
        }
        let pairs: Vec<(Dart, Dart)> = (0..edges).map(|e| (Dart(2 * e), Dart(2 * e + 1))).collect();
        SurfaceMap::new(rotations, &pairs)
    }

    /// Like [`SurfaceMap::from_face_walks`], with `labels[e-1]` read along the
    /// forward dart of edge `e`.
    pub fn from_labeled_face_walks(walks: &[Vec<i64>], labels: &[Generator]) -> Result<Self, MapError> {
        let map = Self::from_face_walks(walks)?;
        let mut darts = Vec::with_capacity(map.dart_count());
        for e in 0..map.edge_count() {
            let g = *labels.get(e).ok_or(MapError::MissingLabel(2 * e))?;
            darts.push(g);
            darts.push(g.inverse());
        }
        map.with_labels(darts)
    }

    fn trace_faces(&self) -> Vec<Vec<Dart>> {
        let n = self.pair.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = Dart(start);
            while !seen[d.0] {
                seen[d.0] = true;
                walk.push(d);
                d = self.next_in_face(d);
            }
            faces.push(walk);
        }
        faces
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![VertexId(0)];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in &self.rotations[v.0] {
                let w = self.end_vertex(d);
                if !seen[w.0] {
                    seen[w.0] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Attaches labels, one per dart; paired darts must carry inverse labels.
    pub fn with_labels(mut self, labels: Vec<Generator>) -> Result<Self, MapError> {
        if labels.len() != self.dart_count() {
            return Err(MapError::MissingLabel(labels.len().min(self.dart_count())));
        }
        for d in 0..self.dart_count() {
            let p = self.pair[d].0;
            if labels[d] != labels[p].inverse() {
                return Err(MapError::LabelMismatch(d.min(p), d.max(p)));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_holes(mut self, holes: impl IntoIterator<Item = FaceId>) -> Result<Self, MapError> {
        let holes: BTreeSet<FaceId> = holes.into_iter().collect();
        if let Some(f) = holes.iter().find(|f| f.0 >= self.face_count()) {
            return Err(MapError::NoSuchFace(f.0));
        }
        self.holes = holes;
        Ok(self)
    }

    pub fn without_holes(mut self) -> Self {
        self.holes.clear();
        self
    }

    pub fn dart_count(&self) -> usize {
        self.pair.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pair.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.face_count()).map(FaceId)
    }

    /// One representative dart per edge, the smaller of the two.
    pub fn edges(&self) -> impl Iterator<Item = Dart> + '_ {
        self.darts().filter(|d| d.0 < self.pair[d.0].0)
    }

    /// Canonical dart of the edge containing `d`.
    pub fn edge_of(&self, d: Dart) -> Dart {
        d.min(self.pair[d.0])
    }

    pub fn partner(&self, d: Dart) -> Dart {
        self.pair[d.0]
    }

    /// Next dart counter-clockwise at the origin of `d`.
    pub fn rotation_next(&self, d: Dart) -> Dart {
        self.succ[d.0]
    }

    pub fn rotation_prev(&self, d: Dart) -> Dart {
        self.pred[d.0]
    }

    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.succ[self.pair[d.0].0]
    }

    pub fn origin(&self, d: Dart) -> VertexId {
        self.vertex_of[d.0]
    }

    pub fn end_vertex(&self, d: Dart) -> VertexId {
        self.vertex_of[self.pair[d.0].0]
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rotations[v.0]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v.0].len()
    }

    /// Face boundary walks in trace order.
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &[Dart] {
        &self.faces[f.0]
    }

    pub fn perimeter(&self, f: FaceId) -> usize {
        self.faces[f.0].len()
    }

    pub fn face_of(&self, d: Dart) -> FaceId {
        self.face_of[d.0]
    }

    pub fn position_in_face(&self, d: Dart) -> usize {
        self.position[d.0]
    }

    pub fn corner_of(&self, d: Dart) -> CornerId {
        CornerId { face: self.face_of[d.0], position: self.position[d.0] }
    }

    pub fn corner_dart(&self, c: CornerId) -> Option<Dart> {
        self.faces.get(c.face.0)?.get(c.position).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Genus of the closed orientable surface.
    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    pub fn holes(&self) -> &BTreeSet<FaceId> {
        &self.holes
    }

    pub fn is_hole(&self, f: FaceId) -> bool {
        self.holes.contains(&f)
    }

    pub fn is_hole_dart(&self, d: Dart) -> bool {
        self.is_hole(self.face_of(d))
    }

    /// The unique hole, or an error if there is not exactly one.
    pub fn single_hole(&self) -> Result<FaceId, MapError> {
        match self.holes.len() {
            1 => Ok(*self.holes.iter().next().unwrap()),
            n => Err(MapError::HoleCount(n)),
        }
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn labels(&self) -> Option<&[Generator]> {
        self.labels.as_deref()
    }

    pub fn label(&self, d: Dart) -> Option<Generator> {
        self.labels.as_ref().map(|l| l[d.0])
    }

    /// Letters read along the face walk, starting at its first dart.
    pub fn face_label(&self, f: FaceId) -> Option<Vec<Generator>> {
        let labels = self.labels.as_ref()?;
        Some(self.faces[f.0].iter().map(|d| labels[d.0]).collect())
    }

    pub fn face_label_string(&self, f: FaceId) -> Option<String> {
        self.face_label(f).map(|l| words::letters_to_string(&l))
    }

    pub fn degree_one_vertex(&self) -> Option<VertexId> {
        self.vertices().find(|&v| self.degree(v) == 1)
    }

    pub(crate) fn require_no_degree_one(&self) -> Result<(), MapError> {
        match self.degree_one_vertex() {
            Some(v) => Err(MapError::DegreeOne(v.0)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rose(order: [usize; 4]) -> SurfaceMap {
        // Darts: 0 = a+, 1 = a-, 2 = b+, 3 = b-.
        SurfaceMap::new(vec![order.iter().map(|&d| Dart(d)).collect()], &[(Dart(0), Dart(1)), (Dart(2), Dart(3))]).unwrap()
    }

    #[test]
    fn torus_rose_has_one_face() {
        let m = rose([0, 2, 1, 3]);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.face(FaceId(0)).len(), 4);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn sphere_wedge_has_three_faces() {
        let m = rose([0, 1, 2, 3]);
        assert_eq!(m.face_count(), 3);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn faces_partition_darts() {
        let m = catalog::tetrahedron();
        let mut all: Vec<Dart> = m.faces().iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, m.darts().collect::<Vec<_>>());
        assert_eq!(m.face_count(), 4);
        assert!(m.faces().iter().all(|f| f.len() == 3));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn theta_graph_on_sphere() {
        let m = catalog::theta();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (2, 3, 3));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn polygon_gluing_matches_rotation_system() {
        let m = SurfaceMap::from_face_walks(&[vec![1, 2, -1, -2]]).unwrap();
        assert_eq!(m.vertex_count(), 1);
        assert_eq!(m.euler_characteristic(), 0);
        for d in m.darts() {
            assert_eq!(m.next_in_face(d), m.rotation_next(m.partner(d)));
        }
    }

    #[test]
    fn rejects_malformed_input() {
        let pairs = [(Dart(0), Dart(1))];
        assert_eq!(SurfaceMap::new(vec![vec![Dart(0)], vec![Dart(0)]], &pairs).unwrap_err(), MapError::BadRotation(0));
        assert!(matches!(SurfaceMap::new(vec![vec![Dart(0), Dart(1)]], &[]).unwrap_err(), MapError::BadPairing(_)));
        let two_loops = SurfaceMap::new(
            vec![vec![Dart(0), Dart(1)], vec![Dart(2), Dart(3)]],
            &[(Dart(0), Dart(1)), (Dart(2), Dart(3))],
        );
        assert_eq!(two_loops.unwrap_err(), MapError::Disconnected);
        assert!(SurfaceMap::from_face_walks(&[vec![1, 1]]).is_err());
    }

    #[test]
    fn labels_must_be_inverse_on_pairs() {
        let a = Generator::positive(1);
        let m = rose([0, 2, 1, 3]);
        assert!(m.clone().with_labels(vec![a, a.inverse(), a, a.inverse()]).is_ok());
        assert_eq!(m.with_labels(vec![a, a, a, a.inverse()]).unwrap_err(), MapError::LabelMismatch(0, 1));
    }
}
