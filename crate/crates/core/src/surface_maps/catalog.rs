//! Small maps used as fixtures, and the local surgeries that build them.
//!
//! The surgeries work on unlabeled maps and drop any holes; callers pick the
//! hole afterwards by naming a dart that lies on it. Existing dart ids are
//! preserved and new darts are appended, so darts of the input still name
//! the same edge sides in the output.

use super::{Dart, FaceId, SurfaceMap, VertexId};

struct Raw {
    rotations: Vec<Vec<usize>>,
    pair: Vec<usize>,
}

impl Raw {
    fn of(map: &SurfaceMap) -> Self {
        Raw {
            rotations: map.rotations().iter().map(|r| r.iter().map(|d| d.0).collect()).collect(),
            pair: map.darts().map(|d| map.partner(d).0).collect(),
        }
    }

    fn new_edge(&mut self) -> (usize, usize) {
        let a = self.pair.len();
        self.pair.push(a + 1);
        self.pair.push(a);
        (a, a + 1)
    }

    fn build(self) -> SurfaceMap {
        let rotations = self.rotations.into_iter().map(|r| r.into_iter().map(Dart).collect()).collect();
        let pairs: Vec<(Dart, Dart)> =
            self.pair.iter().enumerate().filter(|(a, b)| a < *b).map(|(a, &b)| (Dart(a), Dart(b))).collect();
        SurfaceMap::new(rotations, &pairs).expect("local surgery keeps a valid map")
    }

    fn slot(&self, d: usize) -> (usize, usize) {
        for (v, rot) in self.rotations.iter().enumerate() {
            if let Some(i) = rot.iter().position(|&x| x == d) {
                return (v, i);
            }
        }
        unreachable!("dart {d} is in some rotation")
    }
}

/// Splits the edge of `d` into `parts` edges through new degree-two vertices.
pub fn subdivide_edge(map: &SurfaceMap, d: Dart, parts: usize) -> SurfaceMap {
    assert!(parts >= 1);
    let mut raw = Raw::of(map);
    let end = raw.pair[d.0];
    // forward[k] leaves the k-th vertex of the chain, reverse[k] arrives back.
    let mut forward = vec![d.0];
    let mut reverse = Vec::new();
    for _ in 1..parts {
        let (f, r) = raw.new_edge();
        forward.push(f);
        reverse.push(r);
    }
    reverse.push(end);
    for k in 0..parts {
        raw.pair[forward[k]] = reverse[k];
        raw.pair[reverse[k]] = forward[k];
    }
    for k in 1..parts {
        raw.rotations.push(vec![reverse[k - 1], forward[k]]);
    }
    raw.build()
}

/// Adds a second edge parallel to the edge of `d`, so that the two bound a bigon.
pub fn bead_edge(map: &SurfaceMap, d: Dart) -> SurfaceMap {
    let mut raw = Raw::of(map);
    let back = raw.pair[d.0];
    let (e, f) = raw.new_edge();
    let (v, i) = raw.slot(d.0);
    raw.rotations[v].insert(i, e);
    let (w, j) = raw.slot(back);
    raw.rotations[w].insert(j + 1, f);
    raw.build()
}

/// Replaces vertex `v` of degree `k ≥ 2` by a `k`-gon face.
pub fn blow_up_vertex(map: &SurfaceMap, v: VertexId) -> SurfaceMap {
    let mut raw = Raw::of(map);
    let old = std::mem::take(&mut raw.rotations[v.0]);
    let k = old.len();
    assert!(k >= 2, "cannot blow up a vertex of degree {k}");
    // Polygon edge i runs from the i-th new vertex (dart a[i]) to the next (dart b[i]).
    let edges: Vec<(usize, usize)> = (0..k).map(|_| raw.new_edge()).collect();
    for (i, &d) in old.iter().enumerate() {
        let rot = vec![d, edges[i].0, edges[(i + k - 1) % k].1];
        if i == 0 {
            raw.rotations[v.0] = rot;
        } else {
            raw.rotations.push(rot);
        }
    }
    raw.build()
}

/// Four triangles with planar rotations.
pub fn tetrahedron() -> SurfaceMap {
    SurfaceMap::from_face_walks(&[vec![1, 4, -2], vec![2, 6, -3], vec![3, -5, -1], vec![5, -6, -4]])
        .expect("tetrahedron")
}

/// Tetrahedron with its first edge split in two.
pub fn subdivided_tetrahedron() -> SurfaceMap {
    subdivide_edge(&tetrahedron(), Dart(0), 2)
}

/// Two vertices joined by three parallel edges, on the sphere.
pub fn theta() -> SurfaceMap {
    SurfaceMap::from_face_walks(&[vec![1, -2], vec![2, -3], vec![3, -1]]).expect("theta")
}

/// One vertex, two loops, one square face: the torus.
pub fn torus_rose() -> SurfaceMap {
    SurfaceMap::from_face_walks(&[vec![1, 2, -1, -2]]).expect("torus rose")
}

/// One vertex, two loops, three faces: the sphere.
pub fn sphere_wedge() -> SurfaceMap {
    let pairs = [(Dart(0), Dart(1)), (Dart(2), Dart(3))];
    SurfaceMap::new(vec![(0..4).map(Dart).collect()], &pairs).expect("sphere wedge")
}

/// A ring of cells around the torus with one bridge edge across the
/// complementary annulus, which turns the complement into a disk (the hole).
///
/// Cell `i` is bounded by a top rail, a bottom rail and two rungs. The bridge
/// leaves the top rail of cell `top.0` after `top.1` rail edges and lands on
/// the bottom rail of cell `bottom.0` after `bottom.1` edges, which adds one
/// hole piece to each of those cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderSpec {
    pub cells: usize,
    pub rail: usize,
    pub rung: usize,
    pub bridge: usize,
    pub top: (usize, usize),
    pub bottom: (usize, usize),
}

impl LadderSpec {
    /// Four cells of perimeter 12, two of them 1-special.
    pub fn two_special1() -> Self {
        LadderSpec { cells: 4, rail: 5, rung: 1, bridge: 1, top: (0, 2), bottom: (2, 3) }
    }

    /// Four cells of perimeter 12, one of them 2-special.
    pub fn one_special2() -> Self {
        LadderSpec { bottom: (0, 3), ..Self::two_special1() }
    }
}

/// Builds the ladder ring with its hole set. Face ids: the hole is the face
/// of the first top rail dart after the bridge; [`ladder_cell`] finds cells.
pub fn ladder(spec: &LadderSpec) -> SurfaceMap {
    let (top, _, walks) = ladder_walks(spec);
    let map = SurfaceMap::from_face_walks(&walks).expect("ladder gluing");
    let hole = map.face_of(Dart(forward_dart(top[spec.top.0][spec.top.1])));
    map.with_holes([hole]).expect("hole exists")
}

/// Face of cell `i` in a map built by [`ladder`] with the same spec.
pub fn ladder_cell(spec: &LadderSpec, map: &SurfaceMap, i: usize) -> FaceId {
    let (_, bottom, _) = ladder_walks(spec);
    map.face_of(Dart(forward_dart(bottom[i][0])))
}

fn forward_dart(edge: i64) -> usize {
    2 * (edge as usize - 1)
}

type Chains = Vec<Vec<i64>>;

fn ladder_walks(spec: &LadderSpec) -> (Chains, Chains, Vec<Vec<i64>>) {
    let k = spec.cells;
    assert!(k >= 1 && spec.rail >= 1 && spec.rung >= 1 && spec.bridge >= 1);
    assert!(spec.top.0 < k && spec.bottom.0 < k);
    assert!(spec.top.1 >= 1 && spec.top.1 < spec.rail && spec.bottom.1 >= 1 && spec.bottom.1 < spec.rail);
    let mut next = 1i64;
    let mut chain = |len: usize| {
        let c: Vec<i64> = (next..next + len as i64).collect();
        next += len as i64;
        c
    };
    let top: Chains = (0..k).map(|_| chain(spec.rail)).collect();
    let bottom: Chains = (0..k).map(|_| chain(spec.rail)).collect();
    let rungs: Chains = (0..k).map(|_| chain(spec.rung)).collect();
    let bridge = chain(spec.bridge);
    let rev = |c: &[i64]| c.iter().rev().map(|e| -e).collect::<Vec<i64>>();

    let mut walks = Vec::new();
    for i in 0..k {
        let mut w = bottom[i].clone();
        w.extend(&rungs[(i + 1) % k]);
        w.extend(rev(&top[i]));
        w.extend(rev(&rungs[i]));
        walks.push(w);
    }

    let (tc, tp) = spec.top;
    let mut hole = top[tc][tp..].to_vec();
    for s in 1..k {
        hole.extend(&top[(tc + s) % k]);
    }
    hole.extend(&top[tc][..tp]);
    hole.extend(&bridge);
    let (bc, bp) = spec.bottom;
    hole.extend(rev(&bottom[bc][..bp]));
    for s in 1..k {
        hole.extend(rev(&bottom[(bc + k - s) % k]));
    }
    hole.extend(rev(&bottom[bc][bp..]));
    hole.extend(rev(&bridge));
    walks.push(hole);
    (top, bottom, walks)
}

/// The torus rose with its vertex blown up into a square town and a bigon
/// bead on the first loop; the original face is the hole.
///
/// The square has four hole pieces (2-special) and the bigon two (ordinary).
pub fn square_town_rose() -> SurfaceMap {
    let m = blow_up_vertex(&torus_rose(), VertexId(0));
    let m = bead_edge(&m, Dart(0));
    let hole = m.face_of(Dart(2));
    m.with_holes([hole]).expect("hole exists")
}

/// The theta graph on the torus (from the Wicks form `abcABC`) with `blown`
/// of its two vertices replaced by triangle towns and a bigon bead on the
/// first edge; the original face is the hole.
///
/// Each triangle has three hole pieces (1-special); each remaining vertex
/// has three hole corners (a junction).
pub fn wicks_towns(blown: usize) -> SurfaceMap {
    assert!(blown <= 2);
    let [a, b, c] = [1, 2, 3].map(|i| crate::Word::letter(crate::Generator::positive(i)));
    let base = super::build_wicks_torus(&a, &b, &c).expect("abcABC is cyclically reduced");
    let base = SurfaceMap::new(base.rotations().to_vec(), &pairs_of(&base)).expect("same map without labels");
    let mut m = base;
    for v in 0..blown {
        m = blow_up_vertex(&m, VertexId(v));
    }
    let m = bead_edge(&m, Dart(0));
    let hole = m.face_of(Dart(2));
    m.with_holes([hole]).expect("hole exists")
}

pub(crate) fn pairs_of(map: &SurfaceMap) -> Vec<(Dart, Dart)> {
    map.edges().map(|d| (d, map.partner(d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivision_adds_degree_two_vertices() {
        let m = subdivide_edge(&tetrahedron(), Dart(3), 4);
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (7, 9, 4));
        assert_eq!(m.vertices().filter(|&v| m.degree(v) == 2).count(), 3);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn bead_adds_a_bigon() {
        let m = bead_edge(&torus_rose(), Dart(0));
        assert_eq!(m.face_count(), 2);
        assert_eq!(m.euler_characteristic(), 0);
        assert!(m.faces().iter().any(|f| f.len() == 2));
        assert_eq!(m.perimeter(m.face_of(Dart(2))), 4);
    }

    #[test]
    fn blow_up_adds_a_polygon() {
        let m = blow_up_vertex(&torus_rose(), VertexId(0));
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (4, 6, 2));
        let square = m.face_of(Dart(4 + 1));
        assert_eq!(m.perimeter(square), 4);
        assert_eq!(m.perimeter(m.face_of(Dart(0))), 8);
    }

    #[test]
    fn ladder_is_a_holed_torus() {
        for spec in [LadderSpec::two_special1(), LadderSpec::one_special2()] {
            let m = ladder(&spec);
            assert_eq!(m.euler_characteristic(), 0);
            assert_eq!(m.face_count(), spec.cells + 1);
            for i in 0..spec.cells {
                assert_eq!(m.perimeter(ladder_cell(&spec, &m, i)), 12);
            }
            let hole = m.single_hole().unwrap();
            assert_eq!(m.perimeter(hole), 2 * 5 * 4 + 2);
        }
    }

    #[test]
    fn town_fixtures_are_holed_tori() {
        for m in [square_town_rose(), wicks_towns(0), wicks_towns(1), wicks_towns(2)] {
            assert_eq!(m.euler_characteristic(), 0);
            assert!(m.single_hole().is_ok());
            assert!(m.degree_one_vertex().is_none());
        }
    }
}
