//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use gaugecheck::chern_simons::{
    chern1_monopole, dcs_identity_check, quaternion_power, winding_3, winding_coefficient, NormalizationTable,
};
use gaugecheck::cocycle_lab::cech::{cech_coboundary, CechCochainTable, Cover};
use gaugecheck::cocycle_lab::current::{
    calibrate_invariance, invariance_residual, kac_moody, km_cocycle_residual, lie_coboundary_2, mf_boundary_term,
    SHIPPED_CONVENTION,
};
use gaugecheck::cocycle_lab::group::{all_normalized_cochains, group_coboundary, h2_brute_force};
use gaugecheck::crossed_module::{
    all_elements, check_axioms, from_central_extension, identity_module, normal_inclusion, su2_samples, su2_so3,
    su2_to_so3, trivial_action, trivial_extension, z2_z4_z2, Samples,
};
use gaugecheck::finite_group::{FiniteGroup, FiniteModule};
use gaugecheck::fixtures;
use gaugecheck::jet::Jet;
use gaugecheck::liealg::{build_gauge_basis, c, CMat, GaugeKind, C64};
use gaugecheck::random::substream;
use gaugecheck::runner::case_one_over_classic;
use gaugecheck::spectral::{
    assemble, cosine_potential, det_dimension_cocycle, gap_midpoints, random_potential, spectral_flow, winding_path,
};
use gaugecheck::{CurrentCase, LieForm, Manifold, ManifoldGrid, Result, SchwingerEngine};
use rand::Rng;
use std::sync::Arc;

/// Outcome of one criterion: verdict plus the measured numbers.
struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn winding() -> Result<Outcome> {
    let g = ManifoldGrid::new(Manifold::S3, 32)?;
    let q1 = quaternion_power(&g, 1);
    let q2 = quaternion_power(&g, 2);
    let h = fixtures::small_gauge_map(&g, 2, 11, 0.3)?;
    let (w1, w2, wh) = (winding_3(&q1)?, winding_3(&q2)?, winding_3(&h)?);
    let d1 = (w1 - c(w1.re.signum())).norm();
    let d2 = (w2 - c(2.0 * w2.re.signum())).norm();
    let add_h = (winding_3(&q1.mul(&h)?)? - w1 - wh).norm();
    let add_q = (winding_3(&q1.mul(&q1)?)? - w1 * 2.0).norm();
    let add = add_h.max(add_q);
    outcome(
        d1 <= 1e-6 && d2 <= 1e-6 && add <= 2e-6,
        format!("w1 = {:.9}, w2 = {:.9}, distance to ±1, ±2: {d1:.1e}, {d2:.1e} (tol 1e-6), additivity {add:.1e} (tol 2e-6)", w1.re, w2.re),
    )
}

fn normalization() -> Result<Outcome> {
    let c1 = NormalizationTable.c_odd(1)?;
    let target = 1.0 / (24.0 * PI * PI);
    let err = (c1 - c(target)).norm();
    let same = winding_coefficient() == c1;
    outcome(
        err <= f64::EPSILON * target && same,
        format!(
            "c1 = {:.17e}, |c1 - 1/(24 pi^2)| = {err:.1e}, winding coefficient identical: {same}",
            c1.re
        ),
    )
}

fn dcs() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        worst = worst.max(dcs_identity_check(&fixtures::affine_connection(seed, 2)?));
    }
    outcome(
        worst <= 1e-12,
        format!("max residual over 20 connections {worst:.1e} (tol 1e-12)"),
    )
}

fn monopole() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for n in -5..=5 {
        worst = worst.max((chern1_monopole(n, 16)?.total - c(n as f64)).norm());
    }
    outcome(
        worst <= 1e-8,
        format!("max |c1 - n| for n in -5..5 is {worst:.1e} (tol 1e-8)"),
    )
}

fn mf_cocycle() -> Result<Outcome> {
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let (ctx, f) = fixtures::s3_cocycle_data(seed, 3, 16)?;
        worst = worst.max(lie_coboundary_2(&ctx, &f[0], &f[1], &f[2])?.norm());
    }
    let ball = fixtures::ball_cocycle_data(100, 3, 12)?;
    let (b, s) = (&ball.bulk, &ball.boundary);
    let bulk = lie_coboundary_2(&ball.ctx, &b[0], &b[1], &b[2])?;
    let boundary = mf_boundary_term(ball.ctx.c2, &s[0], &s[1], &s[2])?;
    let gap = (bulk - boundary).norm();
    outcome(
        worst <= 1e-6 && gap <= 1e-5,
        format!("S3 max residual {worst:.1e} over 10 seeds (tol 1e-6); B3 bulk - boundary {gap:.1e} (tol 1e-5)"),
    )
}

fn invariance() -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut label = String::new();
    for seed in 0..10 {
        let (ctx, f) = fixtures::s3_cocycle_data(seed, 3, 12)?;
        let g = fixtures::small_gauge_map(ctx.a.grid(), 3, 1000 + seed, 0.25)?;
        if seed == 0 {
            let cal = calibrate_invariance(&ctx, &f[0], &f[1], &g)?;
            if cal.chosen != SHIPPED_CONVENTION {
                return outcome(
                    false,
                    format!("calibration picked {:?} instead of the shipped convention", cal.chosen),
                );
            }
            let (conv, sign) = cal.chosen;
            label = format!(
                "{conv}, {}dlambda, separation {:.1e}",
                if sign > 0.0 { '+' } else { '-' },
                cal.separation
            );
        }
        worst = worst.max(invariance_residual(&ctx, &f[0], &f[1], &g)?.norm());
    }
    outcome(
        worst <= 1e-5,
        format!("max residual {worst:.1e} over 10 seeds (tol 1e-5); calibration: {label}"),
    )
}

fn kac_moody_suite() -> Result<Outcome> {
    let gens = fixtures::generators(2, GaugeKind::Su)?;
    let x = &gens[0] + &gens[1] * c(0.3);
    let y = &gens[0] * c(-0.7) + &gens[2];
    let grid = ManifoldGrid::new(Manifold::S1, 32)?;
    let (x2, y2) = (x.clone(), y.clone());
    let u = LieForm::from_chart(&grid, 2, Arc::new(move |t| Jet::from_scalar(&t[0].cos(), &x2)));
    let v = LieForm::from_chart(&grid, 2, Arc::new(move |t| Jet::from_scalar(&t[0].sin(), &y2)));
    let k = C64::new(1.5, 0.25);
    let closed = (kac_moody(&u, &v, k)? - k * PI * (&x * &y).trace()).norm();
    let (mut cocycle, mut anti) = (0.0f64, 0.0f64);
    for seed in 0..10 {
        let f = fixtures::loops(seed, 2, 32)?;
        cocycle = cocycle.max(km_cocycle_residual(&f[0], &f[1], &f[2])?.norm());
        anti = anti.max((kac_moody(&f[0], &f[1], k)? + kac_moody(&f[1], &f[0], k)?).norm());
    }
    outcome(
        cocycle <= 1e-6 && anti <= 1e-8 && closed <= 1e-8,
        format!(
            "cocycle {cocycle:.1e} (tol 1e-6), antisymmetry {anti:.1e} (tol 1e-8), closed form {closed:.1e} (tol 1e-8)"
        ),
    )
}

fn schwinger() -> Result<Outcome> {
    let grid = ManifoldGrid::new(Manifold::T3, 24)?;
    let mut worst = 0.0f64;
    let mut naive = 0.0f64;
    let mut ratio = C64::default();
    for p in [2, 3] {
        let eng = SchwingerEngine::new(&build_gauge_basis(p, GaugeKind::U)?);
        let top = eng.algebra().n_gauge() - 1;
        for seed in 0..10 {
            let a = fixtures::schwinger_connection(&eng, &grid, 2 * seed)?;
            let inp = fixtures::schwinger_inputs(a, 2 * seed + 1);
            for (mu, nu, ga, gb) in fixtures::SCHWINGER_PICKS {
                let r = eng.mf_cross_check(CurrentCase::new(mu, nu)?, &inp, ga.min(top), gb.min(top))?;
                worst = worst.max(r.residual());
            }
        }
        for mu in 0..4 {
            for nu in 0..4 {
                for x in 0..=top {
                    for y in 0..=top {
                        naive = naive.max(
                            eng.naive_case_commutator(CurrentCase::new(mu, nu)?, x, y)?
                                .matrix_residual,
                        );
                    }
                }
            }
        }
        if p == 2 {
            ratio = case_one_over_classic(&eng, &grid, 77)?;
        }
    }
    let su2 = SchwingerEngine::new(&build_gauge_basis(2, GaugeKind::Su)?);
    let small = ManifoldGrid::new(Manifold::T3, 8)?;
    let a = fixtures::schwinger_connection(&su2, &small, 5)?;
    let mut nonzero = 0usize;
    for mu in 0..4 {
        for nu in 0..4 {
            let case = CurrentCase::new(mu, nu)?;
            if case.id() == 3 {
                continue;
            }
            for x in 1..4 {
                for y in 1..4 {
                    let coeff = su2.local_coefficient(case, &a, x, y)?;
                    nonzero += coeff.iter().flatten().filter(|z| z.norm() != 0.0).count();
                }
            }
        }
    }
    outcome(
        worst <= 1e-5 && nonzero == 0 && naive <= 1e-12,
        format!(
            "max cross-check residual {worst:.1e} over 3 cases x 10 seeds x u(2),u(3) (tol 1e-5); \
             su(2) case 1/2 nonzero entries {nonzero}; naive identity residual {naive:.1e} (tol 1e-12); \
             case-1/classic ratio in u(2) {:.6}{:+.1e}i (reported)",
            ratio.re, ratio.im
        ),
    )
}

fn spectral() -> Result<Outcome> {
    let base = cosine_potential(1, 0.1, 0.4);
    let mut flows = Vec::new();
    for n in [-2i64, -1, 1, 2, 3] {
        flows.push((n, spectral_flow(winding_path(&base, 1, n), 1, 64, 0.55, 16)?.flow));
    }
    let flow_ok = flows.iter().all(|(n, f)| n == f);
    let mut rng = substream(9, 9);
    let mut failures = 0;
    for _ in 0..20 {
        let p = rng.random_range(1..=3);
        let op = assemble(&random_potential(&mut rng, p, 2, 0.4), p, 16)?;
        let mids = gap_midpoints(&op, 6.0, 8);
        let mut pick: Vec<f64> = (0..3).map(|_| mids[rng.random_range(0..mids.len())]).collect();
        pick.sort_by(f64::total_cmp);
        failures += usize::from(!det_dimension_cocycle(&op, pick[0], pick[1], pick[2], 1e-9)?.additive());
    }
    let shown: Vec<String> = flows.iter().map(|(n, f)| format!("{n}->{f}")).collect();
    outcome(
        flow_ok && failures == 0,
        format!(
            "winding->flow {} at N=64; Det additivity failures {failures}/20",
            shown.join(" ")
        ),
    )
}

fn cohomology() -> Result<Outcome> {
    let z2 = FiniteGroup::cyclic(2);
    let h22 = h2_brute_force(&z2, &FiniteModule::cyclic_trivial(2, &z2))?;
    let h23 = h2_brute_force(&z2, &FiniteModule::cyclic_trivial(3, &z2))?;
    let mut group_bad = 0;
    let mut tables = 0;
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), z2.direct_product(&z2)] {
        let g = Arc::new(g);
        for m in [2, 3] {
            let md = Arc::new(FiniteModule::cyclic_trivial(m, &g));
            for p in 0..3 {
                for t in all_normalized_cochains(&g, &md, p, 1 << 20)? {
                    tables += 1;
                    group_bad += usize::from(!group_coboundary(&group_coboundary(&t)).is_zero());
                }
            }
        }
    }
    let mut cech_bad = 0;
    for n in [3, 4] {
        let cover = Arc::new(Cover::complete(n));
        for p in 0..2 {
            let tuples: Vec<Vec<usize>> = cover.tuples(p).cloned().collect();
            for bits in 0u64..(1 << tuples.len()) {
                let vals = tuples
                    .iter()
                    .enumerate()
                    .map(|(k, t)| (t.clone(), bits >> k & 1))
                    .collect();
                let t = CechCochainTable::new(&cover, p, 2, vals)?;
                tables += 1;
                cech_bad += usize::from(!cech_coboundary(&cech_coboundary(&t)?)?.is_zero());
            }
        }
    }
    outcome(
        h22 == 2 && h23 == 1 && group_bad == 0 && cech_bad == 0,
        format!("|H2(Z2,Z2)| = {h22}, |H2(Z2,Z3)| = {h23}; delta^2 failures group {group_bad}, Cech {cech_bad} over {tables} tables"),
    )
}

fn crossed_modules() -> Result<Outcome> {
    let exhaustive = |cm: &gaugecheck::CrossedModule<FiniteGroup, FiniteGroup>| -> Result<usize> {
        let s = Samples {
            h: all_elements(&cm.h),
            g: all_elements(&cm.g),
        };
        Ok(check_axioms(cm, &s)?.violations.len())
    };
    let s3 = FiniteGroup::symmetric3();
    let mut positives = vec![
        identity_module(s3.clone()),
        normal_inclusion(s3.clone(), &FiniteGroup::alternating3_in_s3(), "A3")?,
        trivial_action("Z4 -> Z2", FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), |x| x % 2),
    ];
    for ext in [z2_z4_z2(), trivial_extension(2, 3)] {
        let hs = all_elements(&ext.h);
        positives.push(from_central_extension(ext, &hs)?);
    }
    let mut finite_bad = 0;
    for cm in &positives {
        finite_bad += exhaustive(cm)?;
    }
    let mut rng = substream(3, 3);
    let hs = su2_samples(&mut rng, 100);
    let gs: Vec<CMat> = su2_samples(&mut rng, 100).iter().map(su2_to_so3).collect();
    let cm = from_central_extension(su2_so3(), &hs)?;
    let dev = check_axioms(&cm, &Samples { h: hs, g: gs })?.max_deviation;
    let sabotage = trivial_action("S3, trivial action, identity map", s3.clone(), s3, |x| x);
    let r = check_axioms(
        &sabotage,
        &Samples {
            h: all_elements(&sabotage.h),
            g: all_elements(&sabotage.g),
        },
    )?;
    let witness = r.witness(1).map(|v| v.witness.clone());
    outcome(
        finite_bad == 0 && dev <= 1e-10 && witness.is_some(),
        format!(
            "{} finite modules, {finite_bad} violations; SU(2)->SO(3) max deviation {dev:.1e} on 100 samples (tol 1e-10); \
             sabotage witness: {}",
            positives.len(),
            witness.as_deref().unwrap_or("none")
        ),
    )
}

fn reproducibility() -> Result<Outcome> {
    let dir = tempfile::tempdir().map_err(|e| gaugecheck::Error::Io(e.to_string()))?;
    let run = |name: &str, parallel: bool| -> Result<(Vec<u8>, Vec<u8>, Option<i32>)> {
        let path = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
        cmd.args(["--scenario", "all", "--seed", "7", "--output"]).arg(&path);
        if parallel {
            cmd.arg("--parallel");
        }
        let out = cmd.output().map_err(|e| gaugecheck::Error::Io(e.to_string()))?;
        let report = std::fs::read(&path).map_err(|e| gaugecheck::Error::Io(e.to_string()))?;
        Ok((report, out.stdout, out.status.code()))
    };
    let (a, out_a, code_a) = run("sequential.json", false)?;
    let (b, out_b, code_b) = run("parallel.json", true)?;
    let parsed: serde_json::Value = serde_json::from_slice(&a).map_err(|e| gaugecheck::Error::Io(e.to_string()))?;
    let status = parsed["status"].as_str().unwrap_or("?").to_string();
    outcome(
        a == b && out_a == out_b && code_a == Some(0) && code_b == Some(0),
        format!(
            "sequential vs --parallel reports byte-identical: {} ({} bytes), stdout identical: {}, status {status}",
            a == b,
            a.len(),
            out_a == out_b
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 12] = [
        ("winding integrality", winding),
        ("normalization cross-check", normalization),
        ("exact d(CS3) identity", dcs),
        ("monopole Chern number", monopole),
        ("MF cocycle law", mf_cocycle),
        ("gauge invariance of the cocycle", invariance),
        ("Kac-Moody cocycle", kac_moody_suite),
        ("Schwinger engine", schwinger),
        ("spectral flow equals winding", spectral),
        ("cohomology kernel", cohomology),
        ("crossed modules", crossed_modules),
        ("reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = (k + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run().unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("error: {e}"),
        });
        failed += usize::from(!o.pass);
        println!(
            "criterion {id:>2} {} {name}: {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
