//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use sphtri::distributions::{
    area_density, conditional_cdf, density_via_double_integral, perimeter_density, CdfTable, ConditionalKind,
    DoubleIntegralKind,
};
use sphtri::montecarlo::{ks_distance, sample_batch, EmpiricalCdf, SampleKind};
use sphtri::quadrature::{try_integrate, QuadratureSpec};
use sphtri::verify::{all_passed, conditional_agreement, run_suite, CheckReport, Suite, VerifyConfig};
use sphtri::RngStream;

const SEED: u64 = 1;

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, tol: f64) -> Outcome {
    Outcome {
        passed: value.abs() < tol,
        detail: format!("|error| = {:.3e}, tol {tol:.0e}", value.abs()),
    }
}

fn from_reports(reports: &[CheckReport]) -> Outcome {
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect();
    let worst = reports.iter().map(|r| r.value / r.tolerance).fold(0.0f64, f64::max);
    Outcome {
        passed: all_passed(reports),
        detail: if failed.is_empty() {
            format!("{} checks, worst at {:.1e} of tolerance", reports.len(), worst)
        } else {
            failed.join("; ")
        },
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        passed: parts.iter().all(|p| p.passed),
        detail: parts.into_iter().map(|p| p.detail).collect::<Vec<_>>().join("; "),
    }
}

fn check(id: u32, name: &str, budget: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = out.passed && in_time;
    println!(
        "{} {id:>2} {name}: {} [{:.2} s of {} s]",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    passed
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() {
    let cfg = VerifyConfig {
        n: 10_000,
        seed: SEED,
        ..Default::default()
    };
    let exact_perimeter_at_pi = 3.0 * 2f64.sqrt() / 32.0;
    let mut ok = true;

    ok &= check(1, "perimeter density at pi", secs(1), || {
        within(perimeter_density(PI) - exact_perimeter_at_pi, 1e-9)
    });

    ok &= check(2, "perimeter density at pi by double integrals", secs(10), || {
        let primal = density_via_double_integral(DoubleIntegralKind::PerimeterPrimal, PI).unwrap_or(f64::NAN);
        let dual = density_via_double_integral(DoubleIntegralKind::AreaDual, TAU - PI).unwrap_or(f64::NAN);
        merge(vec![
            within(primal - exact_perimeter_at_pi, 1e-7),
            within(dual - exact_perimeter_at_pi, 1e-7),
        ])
    });

    ok &= check(3, "area density at pi", secs(1), || {
        within(area_density(PI) - 0.25 / PI, 1e-8)
    });

    ok &= check(4, "normalization", secs(30), || {
        let spec = QuadratureSpec::new(1e-12, 1e-12);
        let area = try_integrate(|x: f64| Ok(area_density(x)), 0.0, TAU, &spec).map_or(f64::NAN, |q| q.value);
        let perimeter = try_integrate(
            |x: f64| Ok(perimeter_density(x)),
            0.0,
            TAU,
            &QuadratureSpec::new(1e-9, 1e-9).singular(false, true),
        )
        .map_or(f64::NAN, |q| q.value);
        merge(vec![within(area - 1.0, 1e-8), within(perimeter - 1.0, 1e-5)])
    });

    ok &= check(5, "elliptic identities on 5x5 grids", secs(60), || {
        run_suite(Suite::EllipticIdentities, &cfg).map_or_else(
            |e| Outcome {
                passed: false,
                detail: e.to_string(),
            },
            |r| from_reports(&r),
        )
    });

    ok &= check(
        6,
        "identities and cevian decompositions on 1e4 triangles",
        secs(10),
        || {
            run_suite(Suite::Identities, &cfg).map_or_else(
                |e| Outcome {
                    passed: false,
                    detail: e.to_string(),
                },
                |r| from_reports(&r),
            )
        },
    );

    ok &= check(7, "area elements vs finite differences, 10x10x5", secs(30), || {
        run_suite(Suite::Jacobians, &cfg).map_or_else(
            |e| Outcome {
                passed: false,
                detail: e.to_string(),
            },
            |r| from_reports(&r),
        )
    });

    ok &= check(8, "simulation agreement", secs(180), || {
        let n = 1_000_000;
        let batch = match sample_batch::<f64>(SampleKind::Primal, 0.0, n, &RngStream::new(SEED, 1)) {
            Ok(b) => b,
            Err(e) => {
                return Outcome {
                    passed: false,
                    detail: e.to_string(),
                }
            }
        };
        let (area, perimeter) = match (CdfTable::<f64>::area(512), CdfTable::<f64>::perimeter(512)) {
            (Ok(a), Ok(p)) => (a, p),
            _ => {
                return Outcome {
                    passed: false,
                    detail: "distribution tables failed".into(),
                }
            }
        };
        let ks_a = ks_distance(&EmpiricalCdf::new(batch.areas()).unwrap(), |x| area.eval(x));
        let ks_p = ks_distance(&EmpiricalCdf::new(batch.perimeters()).unwrap(), |x| perimeter.eval(x));
        let mut parts = vec![
            Outcome {
                passed: ks_a < 0.003,
                detail: format!("KS area {ks_a:.2e}"),
            },
            Outcome {
                passed: ks_p < 0.003,
                detail: format!("KS perimeter {ks_p:.2e}"),
            },
        ];
        match conditional_agreement(100_000, SEED) {
            Ok(rows) => {
                let worst_z = rows.iter().map(|r| r.1).fold(0.0f64, f64::max);
                let violations: usize = rows.iter().map(|r| r.2).sum();
                let bad: Vec<&str> = rows.iter().filter(|r| r.1 > 3.0).map(|r| r.0.name()).collect();
                parts.push(Outcome {
                    passed: bad.is_empty(),
                    detail: if bad.is_empty() {
                        format!("conditional fractions within {worst_z:.2} SE")
                    } else {
                        format!("conditional fractions beyond 3 SE for {}", bad.join(", "))
                    },
                });
                parts.push(Outcome {
                    passed: violations == 0,
                    detail: format!("{violations} region violations"),
                });
            }
            Err(e) => parts.push(Outcome {
                passed: false,
                detail: e.to_string(),
            }),
        }
        merge(parts)
    });

    ok &= check(9, "cross-formula pairs on 8x8 interior grids", secs(120), || {
        let pairs = [
            (ConditionalKind::AreaMedian, ConditionalKind::AreaGivenSide),
            (ConditionalKind::PerimeterBisector, ConditionalKind::PerimeterGivenAngle),
            (
                ConditionalKind::PerimeterAngleCoords,
                ConditionalKind::PerimeterGivenSide,
            ),
            (ConditionalKind::AreaSideCoords, ConditionalKind::AreaGivenAngle),
        ];
        let mut worst = 0.0f64;
        for (a, b) in pairs {
            for i in 0..8 {
                for j in 0..8 {
                    let x = TAU * (i as f64 + 0.5) / 8.0;
                    let kappa = PI * (j as f64 + 0.5) / 8.0;
                    let gap = match (conditional_cdf(a, x, kappa), conditional_cdf(b, x, kappa)) {
                        (Ok(p), Ok(q)) => (p - q).abs(),
                        _ => f64::INFINITY,
                    };
                    worst = worst.max(gap);
                }
            }
        }
        within(worst, 1e-5)
    });

    ok &= check(10, "area density nonnegative on 200 points", secs(1), || {
        let low = (0..200)
            .map(|i| area_density(TAU * i as f64 / 199.0))
            .fold(f64::INFINITY, f64::min);
        Outcome {
            passed: low >= 0.0,
            detail: format!("minimum {low:.3e}"),
        }
    });

    if !ok {
        std::process::exit(1);
    }
}
