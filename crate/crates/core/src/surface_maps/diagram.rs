//! Van Kampen diagrams on a torus with one hole.

use serde::Serialize;

use super::{FaceId, MapError, SurfaceMap};
use crate::presentations::SymmetrizedSet;
use crate::words::{self, Word};

#[derive(Debug, Clone)]
pub struct VanKampenTorusDiagram {
    pub map: SurfaceMap,
    pub set: SymmetrizedSet,
}

impl VanKampenTorusDiagram {
    /// The map must be labeled and have exactly one hole.
    pub fn new(map: SurfaceMap, set: SymmetrizedSet) -> Result<Self, MapError> {
        if !map.is_labeled() {
            return Err(MapError::Unlabeled);
        }
        map.single_hole()?;
        Ok(VanKampenTorusDiagram { map, set })
    }

    pub fn hole(&self) -> FaceId {
        self.map.single_hole().expect("checked at construction")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadFace {
    pub face: FaceId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub valid: bool,
    pub euler_characteristic: i64,
    pub hole_label: String,
    pub hole_cyclically_reduced: bool,
    /// Interior faces whose label is not in the symmetrized set.
    pub bad_faces: Vec<BadFace>,
}

pub fn validate_diagram(d: &VanKampenTorusDiagram) -> DiagramReport {
    let map = &d.map;
    let hole = d.hole();
    let mut bad_faces = Vec::new();
    for f in map.face_ids().filter(|&f| f != hole) {
        let letters = map.face_label(f).expect("labeled");
        let ok = Word::from_reduced(letters.clone()).is_ok_and(|w| d.set.contains(&w));
        if !ok {
            bad_faces.push(BadFace { face: f, label: words::letters_to_string(&letters) });
        }
    }
    let hole_letters = map.face_label(hole).expect("labeled");
    let hole_cyclically_reduced = words::is_cyclically_reduced(&hole_letters);
    let euler = map.euler_characteristic();
    DiagramReport {
        valid: euler == 0 && hole_cyclically_reduced && bad_faces.is_empty(),
        euler_characteristic: euler,
        hole_label: words::letters_to_string(&hole_letters),
        hole_cyclically_reduced,
        bad_faces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::Presentation;
    use crate::surface_maps::{build_wicks_torus, catalog, Dart};
    use crate::Generator;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// The rose torus with a bigon bead on the `a` loop, labeled so that the
    /// bigon reads the relator `aC` of `⟨a, b, c | ac⁻¹⟩` and the hole reads `cbAB`.
    fn beaded(bigon_label: char) -> VanKampenTorusDiagram {
        let rose = build_wicks_torus(&w("a"), &w("b"), &Word::empty()).unwrap();
        let m = catalog::bead_edge(&rose, Dart(0));
        let g = |c: char| Generator::from_letter(c).unwrap();
        let labels = vec![g('a'), g('A'), g('b'), g('B'), g(bigon_label), g(bigon_label).inverse()];
        let m = m.with_labels(labels).unwrap();
        let hole = m.face_of(Dart(2));
        let m = m.with_holes([hole]).unwrap();
        let set = Presentation::new(3, vec![w("aC")]).unwrap().symmetrize();
        VanKampenTorusDiagram::new(m, set).unwrap()
    }

    #[test]
    fn single_relator_cell_is_valid() {
        let d = beaded('c');
        let r = validate_diagram(&d);
        assert!(r.valid, "{r:?}");
        assert_eq!(r.euler_characteristic, 0);
        assert_eq!(r.hole_label.len(), 4);
    }

    #[test]
    fn foreign_cell_label_is_reported() {
        let r = validate_diagram(&beaded('b'));
        assert!(!r.valid);
        assert_eq!(r.bad_faces.len(), 1);
        assert_eq!(r.bad_faces[0].label.len(), 2);
    }

    #[test]
    fn unreduced_hole_is_reported() {
        let rose = catalog::torus_rose();
        let a = Generator::positive(1);
        let m = rose.with_labels(vec![a, a.inverse(), a, a.inverse()]).unwrap();
        let m = m.with_holes([FaceId(0)]).unwrap();
        let set = Presentation::new(1, vec![w("aa")]).unwrap().symmetrize();
        let r = validate_diagram(&VanKampenTorusDiagram::new(m, set).unwrap());
        assert!(!r.hole_cyclically_reduced);
        assert!(!r.valid);
    }
}
