//! Text format for maps.
//!
//! ```text
//! # torus rose
//! vertex 0 2 1 3
//! edge 0 1
//! edge 2 3
//! label 0 a
//! label 2 b
//! hole 0
//! ```
//!
//! `vertex` lists one rotation, `edge` pairs two darts, `label` sets the
//! letter of a dart (its partner gets the inverse) and `hole` names a face
//! by its trace-order index.

use std::fmt::Write as _;

use super::{Dart, FaceId, MapError, SurfaceMap};
use crate::words::Generator;

pub fn parse_map(text: &str) -> Result<SurfaceMap, MapError> {
    let mut rotations = Vec::new();
    let mut pairs = Vec::new();
    let mut labels: Vec<(usize, Dart, Generator)> = Vec::new();
    let mut holes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| MapError::Parse { line: i + 1, message };
        let mut fields = line.split_whitespace();
        let keyword = fields.next().expect("nonempty line");
        let numbers = |fields: std::str::SplitWhitespace<'_>| -> Result<Vec<usize>, MapError> {
            fields.map(|f| f.parse::<usize>().map_err(|_| err(format!("bad number {f:?}")))).collect()
        };
        match keyword {
            "vertex" => {
                let darts = numbers(fields)?;
                if darts.is_empty() {
                    return Err(err("vertex without darts".into()));
                }
                rotations.push(darts.into_iter().map(Dart).collect::<Vec<_>>());
            }
            "edge" => match numbers(fields)?[..] {
                [a, b] => pairs.push((Dart(a), Dart(b))),
                _ => return Err(err("edge needs two darts".into())),
            },
            "label" => {
                let (Some(d), Some(l), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(err("label needs a dart and a letter".into()));
                };
                let d = d.parse::<usize>().map_err(|_| err(format!("bad dart {d:?}")))?;
                let mut chars = l.chars();
                let g = match (chars.next(), chars.next()) {
                    (Some(c), None) => Generator::from_letter(c),
                    _ => None,
                }
                .ok_or_else(|| err(format!("bad letter {l:?}")))?;
                labels.push((i + 1, Dart(d), g));
            }
            "hole" => match numbers(fields)?[..] {
                [f] => holes.push(FaceId(f)),
                _ => return Err(err("hole needs one face index".into())),
            },
            other => return Err(err(format!("unknown keyword {other:?}"))),
        }
    }
    let mut map = SurfaceMap::new(rotations, &pairs)?;
    if !labels.is_empty() {
        let mut per_dart: Vec<Option<Generator>> = vec![None; map.dart_count()];
        for (line, d, g) in labels {
            if d.0 >= map.dart_count() {
                return Err(MapError::Parse { line, message: format!("dart {} out of range", d.0) });
            }
            for (x, gx) in [(d, g), (map.partner(d), g.inverse())] {
                match per_dart[x.0] {
                    Some(old) if old != gx => return Err(MapError::LabelMismatch(d.0, map.partner(d).0)),
                    _ => per_dart[x.0] = Some(gx),
                }
            }
        }
        let all = per_dart
            .into_iter()
            .enumerate()
            .map(|(d, g)| g.ok_or(MapError::MissingLabel(d)))
            .collect::<Result<Vec<_>, _>>()?;
        map = map.with_labels(all)?;
    }
    map.with_holes(holes)
}

pub fn map_to_text(map: &SurfaceMap) -> String {
    let mut out = String::new();
    for rot in map.rotations() {
        let darts: Vec<String> = rot.iter().map(|d| d.0.to_string()).collect();
        let _ = writeln!(out, "vertex {}", darts.join(" "));
    }
    for d in map.edges() {
        let _ = writeln!(out, "edge {} {}", d.0, map.partner(d).0);
    }
    if map.is_labeled() {
        for d in map.edges() {
            let letter = map.label(d).and_then(Generator::letter).expect("labels have letters");
            let _ = writeln!(out, "label {} {}", d.0, letter);
        }
    }
    for f in map.holes() {
        let _ = writeln!(out, "hole {}", f.0);
    }
    out
}
