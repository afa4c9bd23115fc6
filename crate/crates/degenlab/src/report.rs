//! JSON reports for the command-line front end. Field elements are always
//! serialized as exact `p/q` strings, never as JSON numbers.

use crate::check::{Certificate, DegenerationReport, WitnessMode};
use crate::field::Field;
use crate::format::write_module;
use crate::presentation::SubmodulePoint;
use serde::Serialize;

#[derive(Serialize, Clone)]
pub struct Verdicts {
    pub unipotent_maximal: Option<bool>,
    pub torus_maximal: Option<bool>,
    pub fully_maximal: Option<bool>,
}

#[derive(Serialize, Clone)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateJson {
    Flag {
        jump_sizes: Vec<VertexFlag>,
        flag_dim: usize,
        normal_form_gens: Vec<String>,
    },
    Curve {
        mode: String,
        base_point_gens: Vec<String>,
        curve: Vec<String>,
        limit_gens: Vec<String>,
        iso_with_original: bool,
        probabilistic_negative: bool,
    },
}

#[derive(Serialize, Clone)]
pub struct VertexFlag {
    pub vertex: String,
    pub jump_sizes: Vec<usize>,
}

#[derive(Serialize, Clone)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub field: String,
    pub seed: u64,
    pub mode: String,
    pub dimension_vector: Vec<usize>,
    pub radical_layering: Vec<Vec<usize>>,
    pub m: usize,
    pub top_count: usize,
    pub summand_count: Option<usize>,
    pub orbit_dim: usize,
    pub verdicts: Option<Verdicts>,
    pub certificate: Option<CertificateJson>,
}

fn gens_of(point: &SubmodulePoint) -> Vec<String> {
    write_module(point)
        .lines()
        .filter(|l| l.starts_with("gen "))
        .map(|l| l.trim_start_matches("gen ").to_string())
        .collect()
}

pub fn witness_mode_name(mode: WitnessMode) -> &'static str {
    match mode {
        WitnessMode::Unipotent => "unipotent",
        WitnessMode::NonLocalSplit => "full_local_split",
        WitnessMode::IncomparablePair => "incomparable_pair",
        WitnessMode::SameVertexTorque => "same_vertex_torque",
        WitnessMode::CrossSummand => "cross_summand",
    }
}

pub fn certificate_json(cert: &Certificate) -> CertificateJson {
    match cert {
        Certificate::Flag(flag) => CertificateJson::Flag {
            jump_sizes: flag
                .jump_sizes
                .iter()
                .map(|(v, sizes)| VertexFlag {
                    vertex: flag
                        .normal_form
                        .pres
                        .algebra
                        .quiver
                        .vertex_ids[*v]
                        .clone(),
                    jump_sizes: sizes.clone(),
                })
                .collect(),
            flag_dim: flag.flag_dim,
            normal_form_gens: gens_of(&flag.normal_form),
        },
        Certificate::Witness(w) => CertificateJson::Curve {
            mode: witness_mode_name(w.mode).to_string(),
            base_point_gens: gens_of(&w.base),
            curve: w.curve.display(),
            limit_gens: gens_of(&w.limit),
            iso_with_original: false,
            probabilistic_negative: w.probabilistic_negative,
        },
    }
}

pub fn report_from_check(
    report: &DegenerationReport,
    field: Field,
    seed: u64,
    command: &str,
    mode: &str,
) -> Report {
    Report {
        tool: "degenlab".into(),
        command: command.into(),
        field: field.to_string(),
        seed,
        mode: mode.into(),
        dimension_vector: report.dim_vector.clone(),
        radical_layering: report.layering.layers.clone(),
        m: report.m,
        top_count: report.top_count,
        summand_count: report.summand_count,
        orbit_dim: report.orbit_dim,
        verdicts: Some(Verdicts {
            unipotent_maximal: Some(report.unipotent_maximal),
            torus_maximal: Some(report.torus_maximal),
            fully_maximal: Some(report.fully_maximal),
        }),
        certificate: Some(certificate_json(&report.certificate)),
    }
}

/// The JSON schema shipped with the tool; reports validate against it.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
