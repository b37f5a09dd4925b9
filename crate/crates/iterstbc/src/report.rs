//! JSON renderings of core results.

use iterstbc_core::certificates::{CertificateReport, Consistency, Verdict, Witness};
use iterstbc_core::codebook::{CodeSpec, Constellation, DetReport, Symbol, SurveyStats};
use iterstbc_core::search::{FactorWitness, ZeroDivisorOutcome, ZeroDivisorWitness};
use iterstbc_core::skew_poly::SkewPoly;
use iterstbc_core::{AElement, CycloElement, Rational};
use serde_json::{json, Value};

use crate::json::{d_element_json, rational_to_string, CycloJson};

pub fn cyclo(x: &CycloElement) -> Value {
    json!(CycloJson::from_element(x))
}

/// Exact value plus a rational form when the element is rational.
pub fn exact_scalar(x: &CycloElement) -> Value {
    json!({
        "exact": cyclo(x),
        "rational": x.as_rational().map(|r| rational_to_string(&r)),
        "approx": x.embed().re,
    })
}

pub fn rational(r: &Rational) -> Value {
    json!(rational_to_string(r))
}

pub fn a_element(x: &AElement) -> Value {
    json!(x.coords().iter().map(d_element_json).collect::<Vec<_>>())
}

fn skew_poly(p: &SkewPoly) -> Value {
    json!(p.coeffs().iter().map(d_element_json).collect::<Vec<_>>())
}

fn zero_divisor(w: &ZeroDivisorWitness) -> Value {
    json!({ "x": a_element(&w.x), "y": a_element(&w.y) })
}

fn factor(f: &FactorWitness) -> Value {
    json!({
        "factor": skew_poly(&f.factor),
        "cofactor": skew_poly(&f.cofactor),
        "zero_divisor": f.zero_divisor.as_ref().map(zero_divisor),
    })
}

pub fn witness(w: &Witness) -> Value {
    let body = match w {
        Witness::LinearFactor { z, factor: f } => json!({ "z": d_element_json(z), "factor": factor(f) }),
        Witness::QuadraticFactor { u, v, factor: f } => {
            json!({ "u": d_element_json(u), "v": d_element_json(v), "factor": factor(f) })
        }
        Witness::NormPreimage { x } => json!({ "x": cyclo(x) }),
        Witness::ZeroDivisor(z) => zero_divisor(z),
    };
    json!({ "kind": w.kind(), "data": body })
}

pub fn verdict(v: &Verdict) -> Value {
    let mut out = json!({ "kind": v.kind(), "text": v.to_string() });
    let extra = match v {
        Verdict::ProvedAssuming { assumption, searched_box, cited } => {
            json!({ "assumption": assumption, "searched_box": searched_box, "cited": cited })
        }
        Verdict::Disproved(w) => json!({ "witness": witness(w) }),
        Verdict::Inapplicable { reason, witness: w } => json!({ "reason": reason, "witness": w.as_ref().map(witness) }),
        Verdict::Unknown { bound } => json!({ "bound": bound }),
        Verdict::Recorded { statement } => json!({ "statement": statement }),
        Verdict::Proved => json!({}),
    };
    if let (Value::Object(o), Value::Object(e)) = (&mut out, extra) {
        o.extend(e);
    }
    out
}

pub fn cross_check(z: &ZeroDivisorOutcome) -> Value {
    match z {
        ZeroDivisorOutcome::Found(w) => json!({ "outcome": "found", "witness": zero_divisor(w) }),
        ZeroDivisorOutcome::NotFound { bound, support_size, points_checked } => json!({
            "outcome": "not-found",
            "bound": bound,
            "support_size": support_size,
            "points_checked": points_checked,
        }),
    }
}

pub fn consistency(c: &Consistency) -> Value {
    match c {
        Consistency::Consistent => json!({ "status": "consistent" }),
        Consistency::Inconsistent(msg) => json!({ "status": "inconsistent", "message": msg }),
    }
}

pub fn certificates(r: &CertificateReport) -> Value {
    let entries: Vec<Value> = r
        .entries
        .iter()
        .map(|e| json!({ "name": e.name, "criterion": e.criterion, "verdict": verdict(&e.verdict), "detail": e.detail }))
        .collect();
    json!({
        "entries": entries,
        "cross_check": cross_check(&r.cross_check),
        "consistency": consistency(&r.consistency),
    })
}

pub fn symbols(s: &[Symbol]) -> Value {
    json!(s)
}

pub fn det_report(r: &DetReport) -> Value {
    json!({
        "det": cyclo(&r.det),
        "abs_sq": exact_scalar(&r.abs_sq),
        "in_claimed_field": r.in_claimed_field,
        "integral": r.integral,
        "rel_error": r.rel_error,
    })
}

pub fn survey(spec: &CodeSpec, c: &Constellation, s: &SurveyStats) -> Value {
    let min = s.min_abs_sq_rational();
    let energy = c.energy();
    let normalized = min.as_ref().and_then(|m| spec.normalized_min_det(m, &energy));
    json!({
        "codewords": s.codewords,
        "min_abs_sq": s.min_abs_sq.as_ref().map(exact_scalar),
        "min_abs_sq_f64": s.min_abs_sq_f64,
        "argmin": s.argmin,
        "argmin_symbols": symbols(&s.argmin_symbols),
        "zero_dets": s.zero_dets,
        "field_violations": s.field_violations,
        "integrality_violations": s.integrality_violations,
        "max_rel_error": s.max_rel_error,
        "energy": rational(&energy),
        "normalized_min_det": normalized.as_ref().map(rational),
    })
}
