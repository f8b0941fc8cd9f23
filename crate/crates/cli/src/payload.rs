//! The result envelope and its payloads.

use serde::{Deserialize, Serialize};

use parcohom_core::fflin::{Field, FieldDescriptor, Matrix, PrimeField};
use parcohom_core::hecke::{
    ActsOn, DimensionReport, EigenSystem, EulerReport, HeckeKind, ShapiroReport, TwistReport,
};
use parcohom_core::wt1::{EigenspaceStructureReport, WeightOneResult};

use crate::job::JobSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixPayload {
    pub field: FieldDescriptor,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries in `0..p`.
    pub entries: Vec<Vec<u64>>,
}

impl MatrixPayload {
    pub fn new(m: &Matrix<PrimeField>) -> Self {
        MatrixPayload {
            field: FieldDescriptor {
                p: m.field().characteristic(),
                modulus: None,
            },
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorPayload {
    pub n: u64,
    pub kind: HeckeKind,
    pub full: MatrixPayload,
    pub parabolic: MatrixPayload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPayload {
    pub acts_on: ActsOn,
    pub ambient_dim: usize,
    pub bound: u64,
    pub dim: usize,
    pub generators: Vec<u64>,
    pub closed_commutative: bool,
    pub generators_commute: bool,
    /// `(n, T_n lies in the algebra)` for a few `n` past the bound.
    pub beyond_bound: Vec<(u64, bool)>,
    pub identity: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum VerifyPayload {
    Shapiro(ShapiroReport),
    Euler(EulerReport),
    Twist { reports: Vec<TwistReport> },
    EigenspaceStructure {
        report: EigenspaceStructureReport,
        result: Box<WeightOneResult>,
    },
    Dimension(DimensionReport),
}

impl VerifyPayload {
    pub fn passed(&self) -> bool {
        match self {
            VerifyPayload::Shapiro(r) => r.passed(),
            VerifyPayload::Euler(r) => r.passed(),
            VerifyPayload::Twist { reports } => reports.iter().all(|r| r.passed()),
            VerifyPayload::EigenspaceStructure { report, .. } => report.passed(),
            VerifyPayload::Dimension(r) => r.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Payload {
    Cohomology {
        group: parcohom_core::modgrp::GroupTag,
        module: String,
        index: usize,
        dim_coinduced: usize,
        dim_h1: usize,
        dim_par: usize,
        cusp_quotient_dim: usize,
        coinvariant_dim: usize,
    },
    HeckeMatrix {
        operators: Vec<OperatorPayload>,
    },
    HeckeAlgebra(AlgebraPayload),
    EigenSystems {
        bound: u64,
        parabolic: Vec<EigenSystem>,
        full: Vec<EigenSystem>,
        /// Systems of the full cohomology that do not occur in the parabolic part.
        full_only: Vec<EigenSystem>,
    },
    WeightOne(Box<WeightOneResult>),
    Verify(VerifyPayload),
}

impl Payload {
    /// `Some(passed)` for verification runs.
    pub fn verification(&self) -> Option<bool> {
        match self {
            Payload::Verify(v) => Some(v.passed()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub compute_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub job: JobSpec,
    pub version: String,
    pub cache_key: String,
    pub from_cache: bool,
    pub timings: Timings,
    pub payload: Payload,
    /// Which internal checks ran.
    pub provenance: Vec<String>,
}
