//! Pieces, the `C'(λ)` condition on maps, cell classification and the
//! off-hole forest.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Dart, FaceId, MapError, SurfaceMap, VertexId};
use crate::rational::Rational;

/// A maximal path through degree-two vertices, stored by its forward darts.
///
/// The forward darts are consecutive in the walk of `left`; the reverse
/// darts lie on `right`. A closed piece is a cycle with no vertex of degree
/// other than two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub darts: Vec<Dart>,
    pub left: FaceId,
    pub right: FaceId,
    pub closed: bool,
}

impl Piece {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn start(&self, map: &SurfaceMap) -> VertexId {
        map.origin(self.darts[0])
    }

    pub fn end(&self, map: &SurfaceMap) -> VertexId {
        map.end_vertex(*self.darts.last().expect("pieces are nonempty"))
    }

    fn faces(&self) -> [FaceId; 2] {
        [self.left, self.right]
    }
}

pub fn pieces(map: &SurfaceMap) -> Result<Vec<Piece>, MapError> {
    map.require_no_degree_one()?;
    let branch = |v: VertexId| map.degree(v) != 2;
    if !map.vertices().any(branch) {
        // The whole map is one cycle on the sphere.
        let darts = map.face(map.face_of(Dart(0))).to_vec();
        let back = map.partner(darts[0]);
        return Ok(vec![Piece { left: map.face_of(darts[0]), right: map.face_of(back), darts, closed: true }]);
    }
    let mut out = Vec::new();
    for start in map.darts().filter(|&d| branch(map.origin(d))) {
        let mut darts = vec![start];
        let mut d = start;
        while !branch(map.end_vertex(d)) {
            d = map.next_in_face(d);
            darts.push(d);
        }
        let back_start = map.partner(d);
        if start <= back_start {
            let left = map.face_of(start);
            let right = map.face_of(back_start);
            out.push(Piece { darts, left, right, closed: false });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// Common piece of two interior cells, measured against `cell`.
    Interior,
    /// Piece between an interior cell and the hole.
    Hole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceViolation {
    pub piece: usize,
    pub cell: FaceId,
    pub kind: ViolationKind,
    pub length: usize,
    #[serde(with = "crate::rational::serde_string")]
    pub bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPrimeReport {
    pub holds: bool,
    pub violations: Vec<PieceViolation>,
}

/// Pieces between interior cells must be shorter than `λ|∂Γ|` for both
/// cells; pieces between a cell `Γ` and a hole shorter than `(1/2 + λ)|∂Γ|`.
pub fn check_cprime_map(map: &SurfaceMap, lambda: Rational) -> Result<CPrimeReport, MapError> {
    let all = pieces(map)?;
    let half = Rational::new(1, 2);
    let mut violations = Vec::new();
    for (i, p) in all.iter().enumerate() {
        let len = Rational::from_integer(p.len() as i64);
        let [l, r] = p.faces();
        let checks: Vec<(FaceId, ViolationKind, Rational)> = match (map.is_hole(l), map.is_hole(r)) {
            (false, false) => {
                let mut c = vec![(l, ViolationKind::Interior, lambda)];
                if r != l {
                    c.push((r, ViolationKind::Interior, lambda));
                }
                c
            }
            (true, false) => vec![(r, ViolationKind::Hole, half + lambda)],
            (false, true) => vec![(l, ViolationKind::Hole, half + lambda)],
            (true, true) => vec![],
        };
        for (cell, kind, factor) in checks {
            let bound = factor * Rational::from_integer(map.perimeter(cell) as i64);
            if len >= bound {
                violations.push(PieceViolation { piece: i, cell, kind, length: p.len(), bound });
            }
        }
    }
    Ok(CPrimeReport { holds: violations.is_empty(), violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellClass {
    Ordinary,
    Special1,
    Special2,
    Other(usize),
}

impl CellClass {
    pub fn from_hole_pieces(n: usize) -> Self {
        match n {
            2 => CellClass::Ordinary,
            3 => CellClass::Special1,
            4 => CellClass::Special2,
            n => CellClass::Other(n),
        }
    }

    /// Three or more hole pieces.
    pub fn is_special(self) -> bool {
        match self {
            CellClass::Ordinary => false,
            CellClass::Special1 | CellClass::Special2 => true,
            CellClass::Other(n) => n > 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CellFinding {
    /// Fewer than two hole pieces on one cell.
    TooFewHolePieces { cell: FaceId, count: usize },
    /// More than two special cells.
    TooManySpecial { cells: Vec<FaceId> },
    /// A 2-special cell next to other special cells.
    Special2NotAlone { cells: Vec<FaceId> },
    /// More than two vertices outside the three regular vertex classes.
    ExceptionalVertices { vertices: Vec<VertexId> },
    NotCPrime(CPrimeReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub cells: BTreeMap<FaceId, CellClass>,
    pub findings: Vec<CellFinding>,
    /// Vertices not of degree two, not of degree three on the hole, and not
    /// of degree four with two opposite hole corners.
    pub exceptional_vertices: Vec<VertexId>,
}

impl Classification {
    pub fn count(&self, class: CellClass) -> usize {
        self.cells.values().filter(|&&c| c == class).count()
    }
}

/// Counts the hole pieces of every interior cell and reports anything that
/// contradicts the one-holed torus picture. Nothing is corrected.
pub fn classify_cells(map: &SurfaceMap, lambda: Rational) -> Result<Classification, MapError> {
    let hole = map.single_hole()?;
    let all = pieces(map)?;
    let mut counts: BTreeMap<FaceId, usize> = map.face_ids().filter(|&f| f != hole).map(|f| (f, 0)).collect();
    for p in &all {
        match (p.left == hole, p.right == hole) {
            (true, false) => *counts.get_mut(&p.right).expect("interior") += 1,
            (false, true) => *counts.get_mut(&p.left).expect("interior") += 1,
            _ => {}
        }
    }
    let cells: BTreeMap<FaceId, CellClass> =
        counts.iter().map(|(&f, &n)| (f, CellClass::from_hole_pieces(n))).collect();

    let mut findings = Vec::new();
    let cprime = check_cprime_map(map, lambda)?;
    if !cprime.holds {
        findings.push(CellFinding::NotCPrime(cprime));
    }
    for (&cell, &count) in &counts {
        if count < 2 {
            findings.push(CellFinding::TooFewHolePieces { cell, count });
        }
    }
    let special: Vec<FaceId> = cells.iter().filter(|(_, c)| c.is_special()).map(|(&f, _)| f).collect();
    if special.len() > 2 {
        findings.push(CellFinding::TooManySpecial { cells: special.clone() });
    }
    if cells.values().any(|&c| c == CellClass::Special2) && special.len() > 1 {
        findings.push(CellFinding::Special2NotAlone { cells: special });
    }
    let exceptional: Vec<VertexId> = map.vertices().filter(|&v| !regular_vertex(map, v)).collect();
    if exceptional.len() > 2 {
        findings.push(CellFinding::ExceptionalVertices { vertices: exceptional.clone() });
    }
    Ok(Classification { cells, findings, exceptional_vertices: exceptional })
}

fn regular_vertex(map: &SurfaceMap, v: VertexId) -> bool {
    let holes: Vec<bool> = map.rotation(v).iter().map(|&d| map.is_hole_dart(d)).collect();
    let count = holes.iter().filter(|&&h| h).count();
    match holes.len() {
        2 => true,
        3 => count >= 1,
        4 => count == 2 && holes[0] == holes[2],
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestReport {
    pub is_forest: bool,
    pub edge_count: usize,
    /// Vertices of degree above two in the off-hole subgraph.
    pub high_degree: Vec<VertexId>,
    pub at_most_two_high_degree: bool,
}

/// Edges with neither side on the hole.
pub fn offhole_edges(map: &SurfaceMap) -> Vec<Dart> {
    map.edges().filter(|&d| !map.is_hole_dart(d) && !map.is_hole_dart(map.partner(d))).collect()
}

pub fn offhole_forest_check(map: &SurfaceMap) -> Result<ForestReport, MapError> {
    map.single_hole()?;
    let edges = offhole_edges(map);
    let mut parent: Vec<usize> = (0..map.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut is_forest = true;
    let mut degree = vec![0usize; map.vertex_count()];
    for &d in &edges {
        let (a, b) = (map.origin(d).0, map.end_vertex(d).0);
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            is_forest = false;
        } else {
            parent[ra] = rb;
        }
    }
    let high_degree: Vec<VertexId> = (0..map.vertex_count()).filter(|&v| degree[v] > 2).map(VertexId).collect();
    Ok(ForestReport {
        is_forest,
        edge_count: edges.len(),
        at_most_two_high_degree: high_degree.len() <= 2,
        high_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::surface_maps::catalog::{self, LadderSpec};

    #[test]
    fn piece_counts() {
        assert_eq!(pieces(&catalog::tetrahedron()).unwrap().len(), 6);
        assert_eq!(pieces(&catalog::subdivided_tetrahedron()).unwrap().len(), 6);
        assert_eq!(pieces(&catalog::torus_rose()).unwrap().len(), 2);
        let sub = pieces(&catalog::subdivided_tetrahedron()).unwrap();
        assert_eq!(sub.iter().map(Piece::len).sum::<usize>(), 7);
    }

    #[test]
    fn rejects_degree_one() {
        let m = SurfaceMap::from_face_walks(&[vec![1, -1]]).unwrap();
        assert_eq!(pieces(&m).unwrap_err(), MapError::DegreeOne(0));
    }

    #[test]
    fn cycle_is_one_closed_piece() {
        let m = SurfaceMap::from_face_walks(&[vec![1, 2, 3], vec![-3, -2, -1]]).unwrap();
        let p = pieces(&m).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].closed);
        assert_eq!(p[0].len(), 3);
    }

    #[test]
    fn ladder_cprime_threshold_is_strict() {
        let m = catalog::ladder(&LadderSpec::two_special1());
        assert!(check_cprime_map(&m, ratio(1, 6)).unwrap().holds);
        let tight = check_cprime_map(&m, ratio(1, 12)).unwrap();
        assert!(!tight.holds);
        assert!(tight.violations.iter().all(|v| v.kind == ViolationKind::Interior && v.length == 1));
    }

    #[test]
    fn long_shared_piece_fails() {
        let spec = LadderSpec { rung: 3, rail: 4, ..LadderSpec::two_special1() };
        let m = catalog::ladder(&spec);
        assert_eq!(m.perimeter(catalog::ladder_cell(&spec, &m, 1)), 14);
        let r = check_cprime_map(&m, ratio(1, 6)).unwrap();
        assert!(!r.holds);
        assert!(r.violations.iter().any(|v| v.length == 3 && v.kind == ViolationKind::Interior));
    }

    #[test]
    fn ladder_classes() {
        let spec = LadderSpec::two_special1();
        let m = catalog::ladder(&spec);
        let c = classify_cells(&m, ratio(1, 6)).unwrap();
        assert!(c.findings.is_empty(), "{:?}", c.findings);
        assert_eq!(c.cells[&catalog::ladder_cell(&spec, &m, 0)], CellClass::Special1);
        assert_eq!(c.cells[&catalog::ladder_cell(&spec, &m, 1)], CellClass::Ordinary);
        assert_eq!(c.cells[&catalog::ladder_cell(&spec, &m, 2)], CellClass::Special1);
        assert_eq!(c.count(CellClass::Ordinary), 2);

        let spec = LadderSpec::one_special2();
        let m = catalog::ladder(&spec);
        let c = classify_cells(&m, ratio(1, 6)).unwrap();
        assert!(c.findings.is_empty(), "{:?}", c.findings);
        assert_eq!(c.cells[&catalog::ladder_cell(&spec, &m, 0)], CellClass::Special2);
        assert_eq!(c.count(CellClass::Ordinary), 3);
    }

    #[test]
    fn one_hole_piece_is_flagged() {
        let m = catalog::theta().with_holes([FaceId(0)]).unwrap();
        let c = classify_cells(&m, ratio(1, 6)).unwrap();
        assert_eq!(c.cells.values().filter(|&&k| k == CellClass::Other(1)).count(), 2);
        assert!(c.findings.iter().any(|f| matches!(f, CellFinding::TooFewHolePieces { count: 1, .. })));
    }

    #[test]
    fn forest_checks() {
        let rose = catalog::torus_rose().with_holes([FaceId(0)]).unwrap();
        let r = offhole_forest_check(&rose).unwrap();
        assert!(r.is_forest && r.edge_count == 0 && r.high_degree.is_empty());

        let spec = LadderSpec { rung: 2, ..LadderSpec::two_special1() };
        let r = offhole_forest_check(&catalog::ladder(&spec)).unwrap();
        assert!(r.is_forest);
        assert_eq!(r.edge_count, 8);

        // Doubling the off-hole edge of a holed theta closes a cycle.
        let m = catalog::bead_edge(&catalog::theta(), Dart(4));
        let hole = m.face_of(Dart(0));
        let r = offhole_forest_check(&m.with_holes([hole]).unwrap()).unwrap();
        assert!(!r.is_forest);
        assert_eq!(r.edge_count, 2);
    }
}
