//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test --release -p iterstbc --test acceptance`.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use iterstbc::checks::{self, Check};
use iterstbc::parallel::{self, ParallelSearcher};
use iterstbc_core::certificates::{cert_dm_not_in_f0, cert_product_search, check_consistency, CertificateEntry, Consistency, Verdict};
use iterstbc_core::channel::{ChannelConfig, DecoderKind, Subcode};
use iterstbc_core::codebook::{normalization_identity, Constellation, DetField, SurveyMode};
use iterstbc_core::decodability::{self, basis_matrices, report_from_pattern};
use iterstbc_core::sampling::{d_element, k_element, stream};
use iterstbc_core::search::{default_support, zero_divisor_search, ZeroDivisorOutcome};
use iterstbc_core::tower::TowerSpec;
use iterstbc_core::{presets, CycloElement, CyclicAlgebra, DElement, IteratedAlgebra, Rational, Variant};

const SAMPLES: u64 = 1000;
const SEED: u64 = 20_240_611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: iterstbc_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn algebra(tower: TowerSpec, variant: Variant, d: impl Fn(&CyclicAlgebra) -> DElement) -> IteratedAlgebra {
    let d_alg = Arc::new(presets::quaternion_over(tower));
    let dd = d(&d_alg);
    IteratedAlgebra::new(d_alg, dd, variant).expect("preset algebra")
}

fn scalar(tower: TowerSpec, variant: Variant, d: impl Fn(&TowerSpec) -> CycloElement) -> IteratedAlgebra {
    algebra(tower, variant, |dal| dal.from_k(&d(dal.tower())))
}

/// RIGHT over d = ω, LEFT and MIDDLE over d = θ.
fn variant_algebras() -> Vec<IteratedAlgebra> {
    vec![
        scalar(presets::tower_6x3(), Variant::Right, presets::omega),
        scalar(presets::tower_6x3(), Variant::Left, presets::theta),
        scalar(presets::tower_6x3(), Variant::Middle, presets::theta),
    ]
}

fn run_checks(list: &[Check], samples: u64) -> Outcome {
    let mut counts = Vec::new();
    for a in variant_algebras() {
        for &check in list {
            let out = core(checks::run(&a, check, samples, SEED, 2))?;
            let label = format!("{}/{}", a.variant().name(), out.check);
            if let Some(reason) = out.skipped {
                return Err(format!("{label} skipped: {reason}"));
            }
            ensure(out.passed(), || format!("{label}: {} of {} failed, first {:?}", out.failures, out.samples, out.failed_samples))?;
            counts.push(format!("{label} {}", out.samples));
        }
    }
    Ok(counts.join(", "))
}

fn complexity_exponents() -> Outcome {
    let mut seen = Vec::new();
    for (name, groups, exponent) in [("6x3-right", 2, 15), ("6x3-left", 2, 15), ("8x4-right", 4, 26)] {
        let spec = presets::code_by_name(name).ok_or("missing preset")?;
        let sub = decodability::Subcode::DiagonalBlock;
        let matrices = core(basis_matrices(&spec, sub))?;
        let rep = core(report_from_pattern(&spec, sub, core(parallel::sparsity_pattern(&matrices))?))?;
        ensure(rep.partition.len() == groups, || format!("{name}: {} groups", rep.partition.len()))?;
        ensure(rep.exponent == Rational::from_integer(exponent.into()), || format!("{name}: exponent {}", rep.exponent))?;
        seen.push(format!("{name} l={groups} exponent {}", rep.exponent));
    }
    Ok(seen.join(", "))
}

fn normalization() -> Outcome {
    let (lhs, rhs) = normalization_identity();
    ensure(lhs == rhs, || format!("{lhs:?} != {rhs:?}"))?;
    let seven = Rational::from_integer(7.into());
    ensure(rhs.coeff_sq == num_traits::pow(seven.recip(), 14), || format!("coefficient² {}", rhs.coeff_sq))?;
    ensure(rhs.exponent == Rational::from_integer((-9).into()), || format!("exponent {}", rhs.exponent))?;
    Ok(format!("both sides have coefficient² {} and E exponent {}", lhs.coeff_sq, lhs.exponent))
}

fn det_fields() -> Outcome {
    let checked = run_checks(&[Check::DetField], SAMPLES)?;
    let spec = presets::code_6x3_right();
    ensure(spec.det_field() == DetField::L, || "6x3-right determinants are not claimed in L".into())?;
    let hex = core(Constellation::parse("hex4"))?;
    let stats = core(parallel::survey(&spec, &hex, &SurveyMode::Sample { count: SAMPLES, seed: SEED }))?;
    ensure(stats.zero_dets == 0, || format!("{} singular codewords", stats.zero_dets))?;
    ensure(stats.field_violations == 0, || format!("{} determinants outside Q(ω)", stats.field_violations))?;
    ensure(stats.integrality_violations == 0, || format!("{} determinants outside Z[ω]", stats.integrality_violations))?;
    let min = stats.min_abs_sq_rational().ok_or("no minimum")?;
    ensure(min >= Rational::from_integer(1.into()), || format!("min |det|² = {min}"))?;
    Ok(format!("{checked}; 6x3-right {} codewords in Z[ω], min |det|² = {min}", stats.codewords))
}

fn representation() -> Outcome {
    let checked = run_checks(&[Check::Representation], SAMPLES)?;
    let right = &variant_algebras()[0];
    let conj = core(checks::run(right, Check::Conjugation, SAMPLES, SEED, 2))?;
    ensure(conj.skipped.is_none() && conj.passed(), || format!("conjugation: {conj:?}"))?;
    Ok(format!("{checked}, right/conjugation {}", conj.samples))
}

fn skew_products() -> Outcome {
    run_checks(&[Check::SkewProduct], SAMPLES)
}

fn k_layer_probe(a: &IteratedAlgebra, seed: u64) -> bool {
    // Coordinates in K multiply like (K/L, τ, d).
    let tower = a.d_algebra().tower().clone();
    let dv = a.d().as_scalar().expect("scalar d").clone();
    let n = a.n();
    let mut rng = stream(seed, 0);
    let xs: Vec<_> = (0..n).map(|_| k_element(&mut rng, &tower, 2)).collect();
    let ys: Vec<_> = (0..n).map(|_| k_element(&mut rng, &tower, 2)).collect();
    let mut expected = vec![tower.field().zero(); n];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let mut term = &a.twist().pow(j as i64).apply(x) * y;
            if i + j >= n {
                term = &term * &dv;
            }
            expected[(i + j) % n] = &expected[(i + j) % n] + &term;
        }
    }
    let dd = a.d_algebra();
    let lift = |c: &[CycloElement]| a.element(c.iter().map(|k| dd.from_k(k)).collect()).expect("n coordinates");
    a.mul(&lift(&xs), &lift(&ys)) == lift(&expected)
}

fn half_twist_probe(big: &IteratedAlgebra, half: &IteratedAlgebra, seed: u64) -> bool {
    // The span of 1 and f² in the 8x4 algebra multiplies like It(D, τ², d).
    let d_alg = big.d_algebra();
    let mut rng = stream(seed, 1);
    let mut draw = || d_element(&mut rng, d_alg, 2);
    let (x0, x2, y0, y2) = (draw(), draw(), draw(), draw());
    let z = d_alg.zero();
    let spread = |a: &DElement, b: &DElement| big.element(vec![a.clone(), z.clone(), b.clone(), z.clone()]).expect("4 coordinates");
    let prod = big.mul(&spread(&x0, &x2), &spread(&y0, &y2));
    let small = half.mul(&half.element(vec![x0, x2]).expect("2"), &half.element(vec![y0, y2]).expect("2"));
    prod.coords()[1].is_zero() && prod.coords()[3].is_zero() && prod.coords()[0] == small.coords()[0] && prod.coords()[2] == small.coords()[1]
}

fn structure_probes() -> Outcome {
    let mut parts = vec![run_checks(&[Check::NucleusD, Check::TwistOrder, Check::PowerWrap], SAMPLES)?];
    let theta_right = scalar(presets::tower_6x3(), Variant::Right, presets::theta);
    for a in [&variant_algebras()[1], &theta_right] {
        let out = core(checks::run(a, Check::VariantsCoincide, SAMPLES, SEED, 2))?;
        ensure(out.skipped.is_none() && out.passed(), || format!("variants coincide: {out:?}"))?;
    }
    parts.push(format!("variants coincide for θ {}", 2 * SAMPLES));
    let probes = 100;
    for a in variant_algebras() {
        let bad = (0..probes).filter(|&s| !k_layer_probe(&a, SEED + s)).count();
        ensure(bad == 0, || format!("{} K-layer: {bad} of {probes} failed", a.variant().name()))?;
    }
    parts.push(format!("K-layer cyclic algebra {}", 3 * probes));
    let big = scalar(presets::tower_8x4(), Variant::Right, |t| t.field().zeta_pow(15));
    let half = core(IteratedAlgebra::with_twist(big.d_algebra().clone(), big.twist().pow(2), big.d().clone(), Variant::Right))?;
    ensure(half.n() == 2, || format!("half algebra has n = {}", half.n()))?;
    let bad = (0..probes).filter(|&s| !half_twist_probe(&big, &half, SEED + s)).count();
    ensure(bad == 0, || format!("τ² subalgebra: {bad} of {probes} failed"))?;
    parts.push(format!("τ² subalgebra {probes}"));
    Ok(parts.join("; "))
}

fn division_evidence() -> Outcome {
    let mut seen = Vec::new();
    for name in presets::CODE_NAMES {
        let a = presets::code_by_name(name).ok_or("missing preset")?.algebra().clone();
        let out = core(zero_divisor_search(&a, 1, &default_support(&a)))?;
        match out {
            ZeroDivisorOutcome::NotFound { points_checked, .. } => seen.push(format!("{name} none in {points_checked} points")),
            ZeroDivisorOutcome::Found(_) => return Err(format!("{name}: zero divisor at box 1")),
        }
    }
    let trivial = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    let out = core(zero_divisor_search(&trivial, 1, &default_support(&trivial)))?;
    let w = out.witness().ok_or("d = 1: no zero divisor found")?;
    ensure(trivial.mul(&w.x, &w.y).is_zero(), || "d = 1: witness product is nonzero".into())?;
    let one = trivial.one();
    let f = trivial.f();
    let x = trivial.sub(&one, &f);
    let y = trivial.add(&trivial.add(&one, &f), &trivial.mul(&f, &f));
    ensure(trivial.mul(&x, &y).is_zero(), || "(1 - f)(1 + f + f²) is nonzero".into())?;
    seen.push("d = 1 witness found".into());
    Ok(seen.join(", "))
}

fn certificates() -> Outcome {
    let theta = scalar(presets::tower_6x3(), Variant::Left, presets::theta);
    let dm = cert_dm_not_in_f0(&theta);
    ensure(dm.verdict == Verdict::Proved, || format!("θ: {}", dm.verdict))?;
    let omega = scalar(presets::tower_6x3(), Variant::Right, presets::omega);
    let i = scalar(presets::tower_8x4(), Variant::Right, |t| t.field().zeta_pow(15));
    for (label, a) in [("ω", &omega), ("i", &i)] {
        let cert = core(cert_product_search(a, 1, &ParallelSearcher))?;
        ensure(cert.verdict == Verdict::Unknown { bound: Some(1) }, || format!("{label}: {}", cert.verdict))?;
    }

    let trivial = scalar(presets::tower_6x3(), Variant::Right, |t| t.field().one());
    let cross = core(zero_divisor_search(&trivial, 1, &default_support(&trivial)))?;
    let forged = CertificateEntry { name: "forged", criterion: "claims division", verdict: Verdict::Proved, detail: String::new() };
    ensure(matches!(check_consistency(&[forged], &cross), Consistency::Inconsistent(_)), || "forged claim went unnoticed".into())?;
    let code = cli_tamper_exit()?;
    ensure(code == 2, || format!("tampered report exited with {code}"))?;
    Ok("θ proved, ω and i unknown at box 1, forged report exits 2".into())
}

fn cli_tamper_exit() -> Result<i32, String> {
    let bin = env!("CARGO_BIN_EXE_iterstbc");
    let dir = std::env::temp_dir().join(format!("iterstbc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let honest = dir.join("honest.json");
    let forged = dir.join("forged.json");
    let base = ["certify", "--preset", "6x3", "--d", "1"];
    let status = Command::new(bin).args(base).arg("--out").arg(&honest).status().map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("honest certify failed: {status}"))?;
    let text = std::fs::read_to_string(&honest).map_err(|e| e.to_string())?;
    let mut report: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    report["result"]["certificates"]["entries"][0]["verdict"]["kind"] = "proved".into();
    std::fs::write(&forged, report.to_string()).map_err(|e| e.to_string())?;
    let out = Command::new(bin).args(base).arg("--report").arg(&forged).arg("--out").arg(dir.join("check.json")).output().map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    out.status.code().ok_or_else(|| "killed by a signal".into())
}

fn decoder_agreement() -> Outcome {
    let hex = core(Constellation::parse("hex4"))?;
    let sub = core(Subcode::new(&presets::code_6x3_right(), &hex, 1))?;
    let cfg = ChannelConfig { receive_antennas: 6, rho: 3.0, trials: 100, seed: SEED, noise_scale: 1.0 };
    let mut mismatches = 0;
    for t in 0..cfg.trials {
        let (_, h, y) = core(sub.channel_use(&cfg, t))?;
        if core(sub.sphere_decode(&y, &h, cfg.rho))? != core(sub.ml_decode_exhaustive(&y, &h, cfg.rho))? {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} of {} instances disagree", cfg.trials))?;
    let silent = ChannelConfig { noise_scale: 0.0, ..cfg };
    for kind in [DecoderKind::Sphere, DecoderKind::Exhaustive] {
        let r = core(parallel::simulate(&sub, &silent, kind))?;
        ensure(r.errors == 0, || format!("{} made {} errors without noise", kind.name(), r.errors))?;
    }
    Ok(format!("{} instances agree, zero-noise error-free", cfg.trials))
}

fn main() -> ExitCode {
    parallel::init_threads();
    let criteria: [Criterion; 9] = [
        ("complexity exponents", complexity_exponents),
        ("normalization identity", normalization),
        ("determinant field membership", det_fields),
        ("representation soundness", representation),
        ("skew-polynomial product", skew_products),
        ("structure probes", structure_probes),
        ("division evidence", division_evidence),
        ("certificates", certificates),
        ("decoder agreement", decoder_agreement),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.1}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
