//! The one-face torus whose boundary reads a Wicks form `x y z x⁻¹ y⁻¹ z⁻¹`.

use super::{MapError, SurfaceMap};
use crate::words::{self, Generator, Word};

/// One edge per letter, glued as the hexagon (or square, when a part is
/// empty) with opposite sides identified.
///
/// Face 0 is the unique face; its walk starts with the first letter of `x`
/// (or of `y`, `z` when earlier parts are empty).
pub fn build_wicks_torus(x: &Word, y: &Word, z: &Word) -> Result<SurfaceMap, MapError> {
    let raw: Vec<Generator> = [x, y, z, &x.inverse(), &y.inverse(), &z.inverse()]
        .iter()
        .flat_map(|w| w.letters().iter().copied())
        .collect();
    if raw.is_empty() {
        return Err(MapError::Invalid("x, y and z are all empty".into()));
    }
    if !words::is_cyclically_reduced(&raw) {
        return Err(MapError::Invalid(format!(
            "{} is not cyclically reduced as written",
            words::letters_to_string(&raw)
        )));
    }
    let mut next = 1i64;
    let mut edges = |w: &Word| {
        let ids: Vec<i64> = (next..next + w.len() as i64).collect();
        next += w.len() as i64;
        ids
    };
    let ex = edges(x);
    let ey = edges(y);
    let ez = edges(z);
    let back = |ids: &[i64]| ids.iter().rev().map(|e| -e).collect::<Vec<_>>();
    let walk: Vec<i64> = [ex.clone(), ey.clone(), ez.clone(), back(&ex), back(&ey), back(&ez)].concat();
    let labels: Vec<Generator> = [x, y, z].iter().flat_map(|w| w.letters().iter().copied()).collect();
    SurfaceMap::from_labeled_face_walks(&[walk], &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_maps::FaceId;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn high_degrees(m: &SurfaceMap) -> Vec<usize> {
        let mut d: Vec<usize> = m.vertices().map(|v| m.degree(v)).filter(|&d| d > 2).collect();
        d.sort();
        d
    }

    #[test]
    fn square_gives_torus_rose() {
        let m = build_wicks_torus(&w("a"), &w("b"), &Word::empty()).unwrap();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (1, 2, 1));
        assert_eq!(m.face_label_string(FaceId(0)).unwrap(), "abAB");
    }

    #[test]
    fn hexagon_gives_theta() {
        let m = build_wicks_torus(&w("a"), &w("b"), &w("c")).unwrap();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (2, 3, 1));
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(high_degrees(&m), vec![3, 3]);
        assert_eq!(m.face_label_string(FaceId(0)).unwrap(), "abcABC");
    }

    #[test]
    fn subdivided_arc() {
        let m = build_wicks_torus(&w("ab"), &w("c"), &w("d")).unwrap();
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(high_degrees(&m), vec![3, 3]);
        assert_eq!(m.vertices().filter(|&v| m.degree(v) == 2).count(), 1);
        assert_eq!(m.face_label_string(FaceId(0)).unwrap(), "abcdBACD");
    }

    #[test]
    fn rejects_cancellation_and_empty() {
        assert!(build_wicks_torus(&w("a"), &w("A"), &w("b")).is_err());
        assert!(build_wicks_torus(&Word::empty(), &Word::empty(), &Word::empty()).is_err());
    }
}
