//! JSON-serializable views of the computation results.
//!
//! Integers that can exceed 64 bits are emitted as decimal strings so
//! downstream consumers never overflow; matrices are row-major arrays of
//! strings. Field order is fixed by the struct definitions and all maps are
//! ordered, so identical inputs serialize to identical bytes.

use num_bigint::BigInt;
use serde::Serialize;

use crate::config::RunConfig;
use crate::dihedral::{AuditReport, PolyaCertificate, SweepOutcome, SweepRow};
use crate::numfield::{ClassGroup, FracIdeal, NumberField, PrimeIdealFactor};
use crate::polya::PolyaGroup;
use crate::quadratic::QuadPolyaSummary;

fn s(x: &BigInt) -> String {
    x.to_string()
}

fn mat_strings(m: &crate::linalg::Mat) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(s).collect()).collect()
}

#[derive(Serialize, Debug, Clone)]
pub struct Envelope<T: Serialize> {
    pub seed: u64,
    pub effort: u32,
    pub result: T,
}

pub fn envelope<T: Serialize>(cfg: &RunConfig, result: T) -> Envelope<T> {
    Envelope { seed: cfg.seed, effort: cfg.effort, result }
}

#[derive(Serialize, Debug, Clone)]
pub struct FieldReport {
    pub defining_poly: Vec<String>,
    pub degree: usize,
    pub field_disc: String,
    pub poly_disc: String,
    pub index: String,
    pub signature: [usize; 2],
    pub integral_basis_den: String,
    pub integral_basis: Vec<Vec<String>>,
}

pub fn field_report(k: &NumberField) -> FieldReport {
    FieldReport {
        defining_poly: k.defining_poly().coeffs().iter().map(s).collect(),
        degree: k.degree(),
        field_disc: s(&k.field_disc),
        poly_disc: s(&k.poly_disc),
        index: s(&k.index),
        signature: [k.signature.0, k.signature.1],
        integral_basis_den: s(k.basis_den()),
        integral_basis: mat_strings(k.basis_mat()),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct PrimeReport {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub norm: String,
    pub hnf: Vec<Vec<String>>,
    pub two_elt: Option<Vec<String>>,
}

pub fn prime_report(q: &PrimeIdealFactor) -> PrimeReport {
    PrimeReport {
        p: q.p,
        e: q.e,
        f: q.f,
        norm: s(&q.norm()),
        hnf: mat_strings(q.ideal.num()),
        two_elt: q.two_elt.as_ref().map(|b| b.iter().map(s).collect()),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct IdealReport {
    pub hnf: Vec<Vec<String>>,
    pub den: String,
}

pub fn ideal_report(a: &FracIdeal) -> IdealReport {
    IdealReport { hnf: mat_strings(a.num()), den: s(a.den()) }
}

#[derive(Serialize, Debug, Clone)]
pub struct ClassGroupReport {
    pub h: String,
    pub invariant_factors: Vec<String>,
    pub minkowski_bound: String,
    pub certified: bool,
    pub stabilized: bool,
    pub factor_base: Vec<PrimeReport>,
    pub generator_coords: Vec<Vec<String>>,
    pub witnesses_found: usize,
}

pub fn class_group_report(cg: &ClassGroup) -> ClassGroupReport {
    ClassGroupReport {
        h: s(&cg.h),
        invariant_factors: cg.invariant_factors.iter().map(s).collect(),
        minkowski_bound: s(&cg.minkowski_bound),
        certified: cg.certified,
        stabilized: cg.stabilized,
        factor_base: cg.factor_base.iter().map(prime_report).collect(),
        generator_coords: cg
            .generator_coords
            .iter()
            .map(|v| v.iter().map(s).collect())
            .collect(),
        witnesses_found: cg.witnesses.iter().filter(|w| w.is_some()).count(),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct PolyaGeneratorReport {
    pub p: u64,
    pub f: u32,
    pub class_vector: Vec<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct PolyaReport {
    pub order: String,
    pub invariant_factors: Vec<String>,
    pub generators: Vec<PolyaGeneratorReport>,
    #[serde(rename = "B")]
    pub bound: u64,
    pub window: u32,
    pub stabilized: bool,
    pub certified_complete: bool,
    pub is_polya: bool,
}

pub fn polya_report(po: &PolyaGroup) -> PolyaReport {
    PolyaReport {
        order: s(&po.order),
        invariant_factors: po.invariant_factors.iter().map(s).collect(),
        generators: po
            .generators
            .iter()
            .map(|g| PolyaGeneratorReport {
                p: g.p,
                f: g.f,
                class_vector: g.coords.iter().map(s).collect(),
            })
            .collect(),
        bound: po.bound_used,
        window: po.window,
        stabilized: po.stabilized,
        certified_complete: po.certified_complete,
        is_polya: po.is_trivial(),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct QuadReport {
    pub d: i64,
    #[serde(rename = "D")]
    pub disc: i64,
    pub h: u64,
    pub invariant_factors: Vec<u64>,
    pub fundamental_unit: Option<UnitReport>,
    pub unit_norm: Option<i8>,
    pub s: usize,
    pub po_order: u64,
    pub is_polya: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct UnitReport {
    pub x: String,
    pub y: String,
    pub denom: u8,
}

pub fn quad_report(
    summary: &QuadPolyaSummary,
    unit: Option<&crate::quadratic::FundUnit>,
) -> QuadReport {
    QuadReport {
        d: summary.d,
        disc: summary.disc,
        h: summary.class_number,
        invariant_factors: summary.invariant_factors.clone(),
        fundamental_unit: unit.map(|u| UnitReport {
            x: s(&u.x),
            y: s(&u.y),
            denom: u.denom,
        }),
        unit_norm: summary.unit_norm,
        s: summary.s_count,
        po_order: summary.explicit_order,
        is_polya: summary.is_polya,
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct TraceReport {
    pub step: String,
    pub citation: String,
    pub data: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct BoundAuditReport {
    pub applicable: bool,
    pub s_l: usize,
    pub limit: usize,
    pub pass: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct CertificateReport {
    pub l: u32,
    pub f: Vec<String>,
    #[serde(rename = "d_E")]
    pub d_e: i64,
    pub verdict: String,
    #[serde(rename = "h_K")]
    pub h_k: Option<String>,
    #[serde(rename = "h_L")]
    pub h_l: Option<String>,
    #[serde(rename = "po_E")]
    pub po_e: QuadReport,
    pub po_l_order: Option<String>,
    pub unramified_over_e: bool,
    pub t_k: usize,
    pub s_l: usize,
    pub trace: Vec<TraceReport>,
    pub bound_audit: BoundAuditReport,
    pub note: Option<String>,
}

pub fn certificate_report(cert: &PolyaCertificate) -> CertificateReport {
    CertificateReport {
        l: cert.l,
        f: cert.f.coeffs().iter().map(s).collect(),
        d_e: cert.d_e,
        verdict: cert.verdict.to_string(),
        h_k: cert.h_k.as_ref().map(s),
        h_l: cert.h_l.as_ref().map(s),
        po_e: quad_report(&cert.po_e, None),
        po_l_order: cert.po_l_order.as_ref().map(s),
        unramified_over_e: cert.unramified_over_e,
        t_k: cert.t_k,
        s_l: cert.s_l,
        trace: cert
            .trace
            .iter()
            .map(|t| TraceReport {
                step: t.step.clone(),
                citation: t.citation.clone(),
                data: t.data.clone(),
            })
            .collect(),
        bound_audit: BoundAuditReport {
            applicable: cert.bound_audit.applicable,
            s_l: cert.bound_audit.s_l,
            limit: cert.bound_audit.limit,
            pass: cert.bound_audit.pass,
        },
        note: cert.note.clone(),
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SweepRowReport {
    pub s: i64,
    #[serde(rename = "D")]
    pub d_value: String,
    pub radicand: String,
    pub kernel: Option<i64>,
    pub status: String,
    pub verdict: Option<String>,
    pub po_e_order: Option<u64>,
    pub skip_reason: Option<String>,
}

pub fn sweep_row_report(row: &SweepRow) -> SweepRowReport {
    match &row.outcome {
        SweepOutcome::Skipped(reason) => SweepRowReport {
            s: row.s,
            d_value: s(&row.d_value),
            radicand: s(&row.radicand),
            kernel: row.kernel,
            status: "SKIPPED".into(),
            verdict: None,
            po_e_order: None,
            skip_reason: Some(reason.clone()),
        },
        SweepOutcome::Done(cert) => SweepRowReport {
            s: row.s,
            d_value: s(&row.d_value),
            radicand: s(&row.radicand),
            kernel: row.kernel,
            status: "DONE".into(),
            verdict: Some(cert.verdict.to_string()),
            po_e_order: Some(cert.po_e.explicit_order),
            skip_reason: None,
        },
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct AuditJson {
    pub l: u32,
    pub t_k: usize,
    pub disc_positive: bool,
    pub purity: Option<String>,
    pub threshold: usize,
    pub hypothesis_holds: bool,
    pub divisibility_checked: Option<bool>,
    pub po_k_order: Option<String>,
    pub po_k_stabilized: bool,
}

pub fn audit_report_json(r: &AuditReport) -> AuditJson {
    AuditJson {
        l: r.l,
        t_k: r.t_k,
        disc_positive: r.disc_positive,
        purity: r.purity.map(|p| format!("{p:?}")),
        threshold: r.threshold,
        hypothesis_holds: r.hypothesis_holds,
        divisibility_checked: r.divisibility_checked,
        po_k_order: r.po_k_order.as_ref().map(s),
        po_k_stabilized: r.po_k_stabilized,
    }
}
