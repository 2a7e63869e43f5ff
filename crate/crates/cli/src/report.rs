//! JSON output shapes. Numbers that can outgrow i64 (Nielsen totals,
//! matrix entries after composition) are serialized as decimal strings.

use serde::Serialize;

use nval_core::crabb::FiniteValuedRep;
use nval_core::exactlin::RatVector;
use nval_core::nielsen::{FixedPointRecord, NielsenReport};
use nval_core::nvmaps::CompositeMap;

use crate::doc::rational_string;

#[derive(Serialize)]
pub struct ValidateReport {
    pub status: &'static str,
    pub q: usize,
    pub n: usize,
    pub pieces: Vec<PieceSummary>,
}

#[derive(Serialize)]
pub struct PieceSummary {
    pub m: usize,
    pub residues: Vec<usize>,
    pub shift: Vec<String>,
}

#[derive(Serialize)]
pub struct NielsenJson {
    pub per_piece: Vec<String>,
    pub total: String,
    pub lefschetz: String,
}

#[derive(Serialize)]
pub struct FixedPointsReport {
    pub count: usize,
    pub points: Vec<FixedPointJson>,
}

#[derive(Serialize)]
pub struct FixedPointJson {
    pub point: Vec<String>,
    pub piece: usize,
    pub lift: usize,
    pub index: i8,
}

#[derive(Serialize)]
pub struct CrabbReport {
    pub components: Vec<ComponentJson>,
    pub nielsen: String,
}

#[derive(Serialize)]
pub struct ComponentJson {
    pub sheets: usize,
    pub sublattice: Vec<Vec<String>>,
    pub linearization: Vec<Vec<String>>,
    pub translation: Vec<String>,
}

#[derive(Serialize)]
pub struct TrackReport {
    /// One permutation per loop direction, as 1-based image lists.
    pub generators: Vec<Vec<usize>>,
    pub cycles: Vec<String>,
    pub components: usize,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub status: &'static str,
    pub kind: &'static str,
    pub message: String,
}

pub fn point_strings(point: &RatVector) -> Vec<String> {
    point.iter().map(rational_string).collect()
}

pub fn validate_report(map: &CompositeMap) -> ValidateReport {
    let pieces = map
        .pieces()
        .iter()
        .map(|piece| PieceSummary {
            m: piece.multiplicity(),
            residues: piece.residues().to_vec(),
            shift: point_strings(piece.shift()),
        })
        .collect();
    ValidateReport {
        status: "valid",
        q: map.q(),
        n: map.n(),
        pieces,
    }
}

pub fn nielsen_json(report: &NielsenReport) -> NielsenJson {
    NielsenJson {
        per_piece: report.per_piece().iter().map(|n| n.to_string()).collect(),
        total: report.total().to_string(),
        lefschetz: report.lefschetz().to_string(),
    }
}

pub fn fixed_points_report(records: &[FixedPointRecord]) -> FixedPointsReport {
    let points = records
        .iter()
        .map(|record| FixedPointJson {
            point: point_strings(&record.point),
            piece: record.piece,
            lift: record.lift,
            index: record.index,
        })
        .collect();
    FixedPointsReport {
        count: records.len(),
        points,
    }
}

pub fn crabb_report(rep: &FiniteValuedRep) -> CrabbReport {
    let components = rep
        .components()
        .iter()
        .map(|component| {
            let sublattice = int_matrix_strings(component.sublattice());
            let linearization = rat_matrix_strings(component.linearization());
            ComponentJson {
                sheets: component.sheets(),
                sublattice,
                linearization,
                translation: point_strings(component.translation()),
            }
        })
        .collect();
    CrabbReport {
        components,
        nielsen: nval_core::crabb::nielsen_crabb(rep).to_string(),
    }
}

fn int_matrix_strings(matrix: &nval_core::exactlin::IntMatrix) -> Vec<Vec<String>> {
    (0..matrix.rows())
        .map(|i| matrix.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

fn rat_matrix_strings(matrix: &nval_core::exactlin::RatMatrix) -> Vec<Vec<String>> {
    (0..matrix.rows())
        .map(|i| {
            (0..matrix.cols())
                .map(|j| rational_string(&matrix[(i, j)]))
                .collect()
        })
        .collect()
}
