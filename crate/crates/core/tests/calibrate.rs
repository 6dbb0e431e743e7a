//! Regenerates the regression-pinned fixture values. Run explicitly with
//!   cargo test -p berglab --test calibrate -- --ignored --nocapture
//! and copy the printed JSON into crates/core/fixtures/pinned.json when a
//! deliberate change to rules or built-in scenarios moves them.

use berglab::bergman::{hormander_perturbed_gap, minimal_extension_ratio, Basis, FiberSpace};
use berglab::bundle::{degeneracy_diagnostics, DerivativeMode};
use berglab::kahlerpath::toeplitz_bound_margin;
use berglab::linalg::CVec;
use berglab::num::C64;
use berglab::projbundle::measure_c2;
use berglab::quadrature::{build_p1_rule, build_plane_rule, PlaneDomainSpec};
use berglab::scenario::{builtin_scenario, config_hash, fnv1a, BUILTIN_IDS};
use berglab::weights::{poly_from_spec, ChartFn, PolyTerm, WeightFamily};
use std::sync::Arc;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
#[ignore = "calibration: prints fixture values, does not assert"]
fn calibrate_pinned_values() {
    // c2 on the projectivized-fiber rule
    let proj_rule = build_p1_rule(48, 32).unwrap();
    let c2 = measure_c2(&proj_rule).unwrap();

    // strict gap at degree 4, γ = 1, ε = 0.1, on the p1 scenario rule
    let p1_rule = build_p1_rule(64, 64).unwrap();
    let basis4 = Basis::p1_sections(4).unwrap();
    let fs_weight = WeightFamily::fs_family(4, vec![]).unwrap();
    let fs = FiberSpace::new(&basis4, &fs_weight, &[c(0.0, 0.0)], &p1_rule).unwrap();
    let gap = hormander_perturbed_gap(&fs, &[c(1.0, 0.0)], 0.1).unwrap();

    // perturbed extension ratio at cutoff 3 on the extension scenario rules
    let ext_rule = build_p1_rule(32, 24).unwrap();
    let t_rule = build_plane_rule(PlaneDomainSpec::Disk { radius: 1.0 }, 20, 16).unwrap();
    let psi = vec![(
        poly_from_spec(&[PolyTerm {
            i: 1,
            j: 1,
            re: 0.3,
            im: 0.0,
        }]),
        ChartFn::AbsRatio,
    )];
    let phi_pert = WeightFamily::fs_family(4, psi).unwrap();
    let mut u = CVec::zeros(3);
    u[0] = c(1.0, 0.0);
    u[1] = c(0.5, 0.0);
    let ratio = minimal_extension_ratio(&basis4, &phi_pert, &ext_rule, &t_rule, &u, 3).unwrap();

    // generic-path degeneracy diagnostics at t = 0.4
    let generic = WeightFamily::fs_family(
        4,
        vec![
            (
                poly_from_spec(&[PolyTerm {
                    i: 1,
                    j: 1,
                    re: 1.0,
                    im: 0.0,
                }]),
                ChartFn::AbsRatio,
            ),
            (
                poly_from_spec(&[
                    PolyTerm {
                        i: 1,
                        j: 0,
                        re: 0.15,
                        im: 0.0,
                    },
                    PolyTerm {
                        i: 0,
                        j: 1,
                        re: 0.15,
                        im: 0.0,
                    },
                ]),
                ChartFn::ReRatio,
            ),
        ],
    )
    .unwrap();
    let gen_rule = Arc::new(build_p1_rule(64, 64).unwrap());
    let rep = degeneracy_diagnostics(
        &basis4,
        &generic,
        &[c(0.4, 0.0)],
        &gen_rule,
        DerivativeMode::AnalyticWeight,
    )
    .unwrap();

    // toeplitz margin under ψ → s·ψ: bound on margin/s²
    let mut max_ratio = 0.0f64;
    for s in [0.1f64, 0.05, 0.025] {
        let phi_s = WeightFamily::fs_family(
            4,
            vec![(
                poly_from_spec(&[PolyTerm {
                    i: 1,
                    j: 1,
                    re: s,
                    im: 0.0,
                }]),
                ChartFn::AbsRatio,
            )],
        )
        .unwrap();
        let margin = toeplitz_bound_margin(
            &basis4,
            &phi_s,
            c(0.3, 0.0),
            &gen_rule,
            DerivativeMode::AnalyticWeight,
        )
        .unwrap();
        max_ratio = max_ratio.max(margin.abs() / (s * s));
    }

    // catalog hash over all built-in configuration hashes
    let mut blob = String::new();
    for (id, _) in BUILTIN_IDS {
        blob.push_str(&config_hash(&builtin_scenario(id).unwrap()));
        blob.push('\n');
    }
    let catalog = format!("fnv1a:{:016x}", fnv1a(blob.as_bytes()));

    println!("{{");
    println!("  \"c2\": {c2:.17e},");
    println!("  \"c2_rule\": [48, 32],");
    println!("  \"hormander_gap_eps01\": {:.17e},", gap.gap);
    println!("  \"extension_perturbed_ratio\": {ratio:.17e},");
    println!("  \"fs_generic_dbar_v\": {:.17e},", rep.dbar_v_residual);
    println!("  \"fs_generic_min_curv\": {:.17e},", rep.min_curv_eig);
    println!("  \"toeplitz_margin_over_s2\": {:.6e},", max_ratio * 1.5);
    println!("  \"catalog_hash\": \"{catalog}\"");
    println!("}}");
}
