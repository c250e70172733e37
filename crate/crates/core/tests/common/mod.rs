#![allow(dead_code)]

use nilalg::tower::RelationSlot;
use nilalg::{EchelonSubspace, FieldSpec, FreeVector, ProjectionTower, TowerParams, WordSet};

pub fn field(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

/// No ramps at all: every level is a Case II level.
pub fn plain(p: u64, k: u32) -> ProjectionTower {
    ProjectionTower::build(&TowerParams::small(&[], &[], vec![], k, field(p)).unwrap()).unwrap()
}

/// Ramp at levels 0..1, relation `span{vs}` at degree 4.
pub fn short_ramp(p: u64, k: u32, vs: &[&str]) -> ProjectionTower {
    let f = field(p);
    let rows: Vec<FreeVector> = vs.iter().map(|v| FreeVector::parse(v, &f, None).unwrap()).collect();
    let w = EchelonSubspace::reduce(4, f, &rows).unwrap();
    ProjectionTower::build(&TowerParams::small(&[2], &[1], vec![RelationSlot::explicit(1, w)], k, f).unwrap()).unwrap()
}

/// Ramp at levels 1..3, relation `Y({x}, 16)`.
pub fn power_ramp(p: u64, k: u32) -> ProjectionTower {
    let s: WordSet = "x".parse().unwrap();
    ProjectionTower::build(&TowerParams::small(&[4], &[2], vec![RelationSlot::recipe(1, s)], k, field(p)).unwrap()).unwrap()
}

/// The towers most suites sweep over.
pub fn toy_towers(p: u64, k: u32) -> Vec<(&'static str, ProjectionTower)> {
    vec![
        ("plain", plain(p, k)),
        ("x^4", short_ramp(p, k, &["xxxx"])),
        ("xxxx+xyxy", short_ramp(p, k, &["xxxx + xyxy"])),
        ("Y(x,16)", power_ramp(p, k)),
    ]
}
