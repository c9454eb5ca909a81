use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use super::emit::DataTable;
use super::{parse_selection, RunConfig, VerificationReport};
use crate::asymptotic_engine::{
    asymptotic_series, borel_compare, hankel_quadrature, HankelContour, Truncation,
};
use crate::biorthogonality::{degeneracy_scan, regularized_inner};
use crate::error::{Error, Result};
use crate::operator_engine::{
    adjoint_eigen_residual, anomaly_residual, bk_eigen_residual, eigen_residual, metric_residual,
};
use crate::special_fn::bernoulli_polynomial;
use crate::spectral_checks::{
    bk_quantization_residual, boundary_term_decay, prime_count, pt_pairing,
    renormalized_expectation,
};
use crate::zero_finder::{boundary_condition_residual, zero_table, CriticalZero};

/// Reports sorted by (check_id, params) and the plot data of the checks
/// that ran, in suite order.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutput {
    pub reports: Vec<VerificationReport>,
    pub data: Vec<DataTable>,
}

impl SuiteOutput {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

#[derive(Default)]
struct CheckOutput {
    reports: Vec<VerificationReport>,
    data: Vec<DataTable>,
}

type Zeros = std::result::Result<Vec<CriticalZero>, Error>;

/// Runs the selected checks (all of them for an empty selection). Unknown
/// ids are a configuration error; numerical failures become failing
/// reports.
pub fn run_suite(config: &RunConfig, selection: &[String]) -> Result<SuiteOutput> {
    config.validate()?;
    let ids = parse_selection(selection)?;
    let zeros: Zeros = zero_table(config.zero_count.max(3));
    let outputs: Vec<CheckOutput> = ids
        .par_iter()
        .map(|id| run_check(id, config, &zeros))
        .collect();
    let mut reports = Vec::new();
    let mut data = Vec::new();
    for o in outputs {
        reports.extend(o.reports);
        data.extend(o.data);
    }
    reports.sort_by(|a, b| (&a.check_id, &a.params).cmp(&(&b.check_id, &b.params)));
    Ok(SuiteOutput { reports, data })
}

fn run_check(id: &str, cfg: &RunConfig, zeros: &Zeros) -> CheckOutput {
    let zeros = match zeros {
        Ok(z) => z,
        Err(e) => {
            return CheckOutput {
                reports: vec![VerificationReport::failed(
                    id,
                    "zero table",
                    &[],
                    cfg.tolerance(id, 1e-9),
                    e,
                )],
                data: Vec::new(),
            }
        }
    };
    let first = &zeros[..cfg.zero_count.min(zeros.len())];
    match id {
        "eigen" => eigen(cfg, first),
        "adjoint" => adjoint(cfg, first),
        "anomaly" => anomaly(cfg, first),
        "bk" => bk(cfg, first),
        "borel" => borel(cfg, zeros),
        "biortho" => biortho(cfg, first),
        "pt" => pt(cfg, first),
        "boundary" => boundary(cfg, zeros),
        "primes" => primes(cfg, zeros),
        _ => unreachable!("selection is validated"),
    }
}

/// Runs `f`, recording its wall time when timing is enabled, and turns an
/// error into a failing report.
fn timed<F>(
    cfg: &RunConfig,
    id: &str,
    anchor: &str,
    params: Vec<(&str, String)>,
    tol: f64,
    f: F,
) -> VerificationReport
where
    F: FnOnce() -> Result<Vec<(&'static str, f64)>>,
{
    let start = Instant::now();
    let mut r = match f() {
        Ok(metrics) => VerificationReport::new(id, anchor, &params, &metrics, tol),
        Err(e) => VerificationReport::failed(id, anchor, &params, tol, &e),
    };
    if cfg.timing {
        r.runtime_ms = start.elapsed().as_millis() as u64;
    }
    r
}

fn zero_params(z: &CriticalZero) -> Vec<(&'static str, String)> {
    vec![
        ("zero", format!("{:03}", z.index)),
        ("t", format!("{:.12}", z.t)),
    ]
}

fn grid_label(cfg: &RunConfig) -> String {
    let g = cfg.grid;
    format!("{}:{}:{} {:?}", g.x_min, g.x_max, g.count, g.spacing).to_lowercase()
}

/// Low-discrepancy point in [0, 1)^3 (additive recurrence).
fn weyl(k: usize) -> [f64; 3] {
    const A: [f64; 3] = [
        0.618_033_988_749_894_9,
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
    ];
    A.map(|a| (0.5 + a * (k + 1) as f64).fract())
}

fn per_zero<F>(
    cfg: &RunConfig,
    zeros: &[CriticalZero],
    id: &str,
    anchor: &str,
    default_tol: f64,
    f: F,
) -> Vec<VerificationReport>
where
    F: Fn(&CriticalZero) -> Result<Vec<(&'static str, f64)>> + Sync,
{
    let tol = cfg.tolerance(id, default_tol);
    zeros
        .par_iter()
        .map(|z| {
            let mut params = zero_params(z);
            params.push(("grid", grid_label(cfg)));
            timed(cfg, id, anchor, params, tol, || f(z))
        })
        .collect()
}

fn eigen(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let reports = per_zero(
        cfg,
        zeros,
        "eigen",
        "Delta psi_z = x^-z; (xp+px) x^-z = i(2z-1) x^-z",
        1e-9,
        |z| {
            let r = eigen_residual(z.z, &cfg.grid)?;
            Ok(vec![
                ("delta_max_rel", r.delta.max_rel),
                ("dilation_max_rel", r.dilation.max_rel),
            ])
        },
    );
    CheckOutput {
        reports,
        data: Vec::new(),
    }
}

fn adjoint(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let reports = per_zero(
        cfg,
        zeros,
        "adjoint",
        "H* dual_z = i(2z-1) dual_z, dual_z = x^-z - (x+1)^-z; eta psi_z = dual_z / 4",
        1e-9,
        |z| {
            let a = adjoint_eigen_residual(z.z, &cfg.grid)?;
            let m = metric_residual(z.z, &cfg.grid)?;
            Ok(vec![
                ("adjoint_max_rel", a.max_rel),
                ("metric_max_rel", m.max_rel),
            ])
        },
    );
    CheckOutput {
        reports,
        data: Vec::new(),
    }
}

fn anomaly(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let reports = per_zero(
        cfg,
        zeros,
        "anomaly",
        "(xp+px+p) rho psi_z = i(2z-1) rho psi_z, rho = sin(p/2)",
        1e-7,
        |z| {
            Ok(vec![(
                "anomaly_max_rel",
                anomaly_residual(z.z, &cfg.grid)?.max_rel,
            )])
        },
    );
    CheckOutput {
        reports,
        data: Vec::new(),
    }
}

fn bk(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let mut reports = per_zero(
        cfg,
        zeros,
        "bk",
        "(xp+px) x^-z = i(2z-1) x^-z",
        1e-12,
        |z| {
            Ok(vec![(
                "bk_max_rel",
                bk_eigen_residual(z.z, &cfg.grid)?.max_rel,
            )])
        },
    );
    let tol = cfg.tolerance("bk.quantization", 1e-9);
    reports.extend(zeros.iter().map(|z| {
        timed(
            cfg,
            "bk.quantization",
            "|zeta(z,2) + 1| = |zeta(z)| = 0",
            zero_params(z),
            tol,
            || {
                Ok(vec![
                    ("quantization", bk_quantization_residual(z.z)?),
                    ("boundary", boundary_condition_residual(z.z)?),
                ])
            },
        )
    }));
    let tol = cfg.tolerance("bk.consistency", 1e-12);
    reports.push(timed(
        cfg,
        "bk.consistency",
        "|zeta(z,2) + 1| = |zeta(z)|",
        vec![
            ("samples", "20".into()),
            ("region", "re 0.1..0.9, im 1..50".into()),
        ],
        tol,
        || {
            let mut worst: f64 = 0.0;
            for k in 0..20 {
                let [a, b, _] = weyl(k);
                let z = Complex64::new(0.1 + 0.8 * a, 1.0 + 49.0 * b);
                worst = worst
                    .max((bk_quantization_residual(z)? - boundary_condition_residual(z)?).abs());
            }
            Ok(vec![("max_difference", worst)])
        },
    ));
    CheckOutput {
        reports,
        data: Vec::new(),
    }
}

fn borel(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let mut reports = Vec::new();
    let tol = cfg.tolerance("borel", 1.0);
    reports.push(timed(
        cfg,
        "borel",
        "series ~ contour ~ -zeta(z, x+1) within combined estimates",
        vec![
            ("samples", "20".into()),
            ("region", "re -1..2, im -30..30, x 10..100".into()),
        ],
        tol,
        || {
            let mut worst: f64 = 0.0;
            let mut unreliable = 0usize;
            let mut taken = 0;
            let mut k = 0;
            while taken < 20 {
                let [a, b, c] = weyl(k);
                k += 1;
                let z = Complex64::new(-1.0 + 3.0 * a, -30.0 + 60.0 * b);
                if (z - 1.0).norm() < 0.1 || (z - 2.0).norm() < 0.1 {
                    continue;
                }
                taken += 1;
                let r = borel_compare(z, 10.0 + 90.0 * c)?;
                if !r.series_reliable {
                    unreliable += 1;
                }
                let mut ratio = |d: f64, e: f64| {
                    if d > 0.0 {
                        worst = worst.max(d / e.max(f64::MIN_POSITIVE));
                    }
                };
                if let (Some(c), Some(d)) = (r.contour, r.contour_vs_hurwitz) {
                    ratio(d, c.estimate + r.hurwitz.estimate);
                    if r.series_reliable {
                        ratio(
                            r.series_vs_contour.unwrap_or(0.0),
                            c.estimate + r.series.estimate,
                        );
                    }
                }
                if r.series_reliable {
                    ratio(r.series_vs_hurwitz, r.series.estimate + r.hurwitz.estimate);
                }
            }
            Ok(vec![
                ("max_delta_over_estimate", worst),
                ("unreliable_series", unreliable as f64),
            ])
        },
    ));
    let tol = cfg.tolerance("borel.polynomial", 1e-12);
    reports.push(timed(
        cfg,
        "borel.polynomial",
        "z = -2: series = contour = -zeta(z, x+1) = B_3(x+1)/3",
        vec![("x", "1,5,10,50,100".into()), ("z", "-2".into())],
        tol,
        || {
            let z = Complex64::new(-2.0, 0.0);
            let mut worst: f64 = 0.0;
            for x in [1.0, 5.0, 10.0, 50.0, 100.0] {
                let exact = bernoulli_polynomial(3, x + 1.0)? / 3.0;
                let r = borel_compare(z, x)?;
                let contour = r
                    .contour
                    .ok_or_else(|| Error::Precondition("contour unavailable".into()))?;
                for v in [r.series.value, contour.value, r.hurwitz.value] {
                    worst = worst.max((v - exact).norm() / exact.abs());
                }
            }
            Ok(vec![("max_rel_deviation", worst)])
        },
    ));
    let tol = cfg.tolerance("borel.independence", 1e-9);
    reports.push(timed(
        cfg,
        "borel.independence",
        "contour value unchanged when r and eps are halved and nodes doubled",
        vec![
            ("samples", "20".into()),
            ("region", "re -1..2, im -8..8, x 1..50".into()),
        ],
        tol,
        || {
            let mut worst: f64 = 0.0;
            let mut taken = 0;
            let mut k = 100;
            while taken < 20 {
                let [a, b, c] = weyl(k);
                k += 1;
                let z = Complex64::new(-1.0 + 3.0 * a, -8.0 + 16.0 * b);
                if (z - 1.0).norm() < 0.1 || (z - 2.0).norm() < 0.1 {
                    continue;
                }
                taken += 1;
                let x = 1.0 + 49.0 * c;
                let contour = HankelContour::adaptive(z, x);
                let p = hankel_quadrature(z, x, &contour)?.value;
                let q = hankel_quadrature(z, x, &contour.refined())?.value;
                worst = worst.max((p - q).norm() / p.norm().max(1.0));
            }
            Ok(vec![("max_rel_change", worst)])
        },
    ));

    let mut rows = DataTable::new(
        "borel_rows",
        &["x", "series_vs_hurwitz", "contour_vs_hurwitz"],
    );
    if let Some(z) = zeros.first() {
        for x in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
            if let Ok(r) = borel_compare(z.z, x) {
                rows.push(vec![
                    x.to_string(),
                    format!("{:e}", r.series_vs_hurwitz),
                    r.contour_vs_hurwitz
                        .map(|d| format!("{d:e}"))
                        .unwrap_or_default(),
                ]);
            }
        }
    }
    // Optimal truncation index over the same x, for the record.
    let mut trunc = DataTable::new(
        "series_truncation",
        &["x", "optimal_index", "error_estimate"],
    );
    if let Some(z) = zeros.first() {
        for x in [10.0, 20.0, 40.0, 80.0] {
            if let Ok(s) = asymptotic_series(z.z, x, Truncation::Auto) {
                trunc.push(vec![
                    x.to_string(),
                    s.optimal_index.to_string(),
                    format!("{:e}", s.error_estimate),
                ]);
            }
        }
    }
    CheckOutput {
        reports,
        data: vec![rows, trunc],
    }
}

fn biortho(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let mut reports = Vec::new();
    let mut table = DataTable::new(
        "inner_products",
        &["m", "n", "lambda", "re", "im", "closed_re", "deviation"],
    );
    let tol = cfg.tolerance("biortho", 1e-10);
    let lambda = cfg.inner_lambda;
    let mut rows = Vec::new();
    reports.push(timed(
        cfg,
        "biortho",
        "int_{1/L}^{L} x^{-1+i(t_m-t_n)} dx = 2 sin((t_m-t_n) ln L)/(t_m-t_n)",
        vec![
            ("lambda", lambda.to_string()),
            ("zeros", zeros.len().to_string()),
        ],
        tol,
        || {
            let mut worst: f64 = 0.0;
            for a in zeros {
                for b in zeros {
                    let r = regularized_inner(a, b, lambda)?;
                    worst = worst.max(r.deviation());
                    rows.push(r);
                }
            }
            Ok(vec![("max_deviation", worst)])
        },
    ));
    for r in &rows {
        table.push(vec![
            r.m.to_string(),
            r.n.to_string(),
            r.lambda.to_string(),
            format!("{:e}", r.value.re),
            format!("{:e}", r.value.im),
            format!("{:e}", r.closed_form.re),
            format!("{:e}", r.deviation()),
        ]);
    }
    let lambdas = cfg.lambdas.clone();
    let label = lambdas
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let tol = cfg.tolerance("biortho.diagonal", 0.01);
    reports.push(timed(
        cfg,
        "biortho.diagonal",
        "<dual_n|psi_n>_L / ln L -> 2",
        vec![("lambdas", label.clone())],
        tol,
        || {
            let mut worst: f64 = 0.0;
            for z in zeros {
                for &l in &lambdas {
                    let v = regularized_inner(z, z, l)?.value;
                    worst = worst.max((v.re / l.ln() - 2.0).abs() / 2.0);
                }
            }
            Ok(vec![("max_rel_deviation_from_2", worst)])
        },
    ));
    let tol = cfg.tolerance("biortho.offdiagonal", 1e-6);
    reports.push(timed(
        cfg,
        "biortho.offdiagonal",
        "|<dual_m|psi_n>_L| <= 2/|t_m - t_n|",
        vec![("lambdas", label)],
        tol,
        || {
            let mut worst: f64 = 0.0;
            for a in zeros {
                for b in zeros.iter().filter(|b| b.index != a.index) {
                    for &l in &lambdas {
                        let r = regularized_inner(a, b, l)?;
                        worst = worst.max(r.value.norm() - 2.0 / r.alpha.abs());
                    }
                }
            }
            Ok(vec![("max_excess_over_bound", worst.max(0.0))])
        },
    ));
    let tol = cfg.tolerance("biortho.degeneracy", 0.5);
    reports.push(timed(
        cfg,
        "biortho.degeneracy",
        "eigenvalues nondegenerate, no self-orthogonal pairs",
        vec![("zeros", zeros.len().to_string())],
        tol,
        || {
            let zs: Vec<Complex64> = zeros.iter().map(|z| z.z).collect();
            Ok(vec![(
                "flagged_pairs",
                degeneracy_scan(&zs, 1e-9).len() as f64,
            )])
        },
    ));
    CheckOutput {
        reports,
        data: vec![table],
    }
}

fn pt(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let zs: Vec<Complex64> = zeros.iter().map(|z| z.z).collect();
    let pairing = pt_pairing(&zs);
    let params = vec![("zeros", zs.len().to_string())];
    let tol = cfg.tolerance("pt", 1e-10);
    let defect = timed(
        cfg,
        "pt",
        "iE = 1 - 2z purely imaginary",
        params.clone(),
        tol,
        || {
            let r = pairing.clone()?;
            Ok(vec![(
                "max_pure_imag_defect",
                r.iter().map(|p| p.pure_imag_defect).fold(0.0, f64::max),
            )])
        },
    );
    let tol = cfg.tolerance("pt.conjugate", 1e-9);
    let conj = timed(cfg, "pt.conjugate", "zeta(conj z) = 0", params, tol, || {
        let r = pairing.clone()?;
        Ok(vec![(
            "max_conj_residual",
            r.iter().map(|p| p.conj_residual).fold(0.0, f64::max),
        )])
    });
    CheckOutput {
        reports: vec![defect, conj],
        data: Vec::new(),
    }
}

fn boundary(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let tol = cfg.tolerance("boundary", 0.05);
    let reports = [(1usize, 1usize), (1, 2), (2, 3)]
        .iter()
        .map(|&(m, n)| {
            let params = vec![("pair", format!("{m},{n}"))];
            timed(
                cfg,
                "boundary",
                "conj(dual_m) psi_n ~ x^(1/2) as x -> 0",
                params,
                tol,
                || {
                    let s = boundary_term_decay(zeros[m - 1].z, zeros[n - 1].z)?;
                    Ok(vec![("slope_deviation", (s.slope - 0.5).abs())])
                },
            )
        })
        .collect();
    CheckOutput {
        reports,
        data: Vec::new(),
    }
}

/// π(10^k) for k = 1..=6.
const PI_REFERENCE: [(u64, u64); 6] = [
    (10, 4),
    (100, 25),
    (1_000, 168),
    (10_000, 1_229),
    (100_000, 9_592),
    (1_000_000, 78_498),
];

fn primes(cfg: &RunConfig, zeros: &[CriticalZero]) -> CheckOutput {
    let z = zeros[0].z;
    let lambdas = cfg.pnt_lambdas.clone();
    let label = lambdas
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let rows: Result<Vec<_>> = lambdas
        .iter()
        .map(|&l| renormalized_expectation(z, l))
        .collect();
    let mut reports = Vec::new();
    let tol = cfg.tolerance("primes", 1e-10);
    reports.push(timed(
        cfg,
        "primes",
        "int_{1/L}^{L} x |x^-z|^2 dx / ln L = (L - 1/L)/ln L",
        vec![("frame", "delta".to_string()), ("lambdas", label.clone())],
        tol,
        || {
            let rows = rows.clone()?;
            Ok(vec![(
                "max_rel_deviation",
                rows.iter()
                    .map(|r| r.quadrature_deviation())
                    .fold(0.0, f64::max),
            )])
        },
    ));
    let tol = cfg.tolerance("primes.sieve", 0.5);
    reports.push(timed(
        cfg,
        "primes.sieve",
        "sieve count equals tabulated pi(10^k)",
        vec![("max_lambda", "1000000".into())],
        tol,
        || {
            let mut worst: f64 = 0.0;
            for &(l, expect) in PI_REFERENCE.iter() {
                worst = worst.max((prime_count(l)? as f64 - expect as f64).abs());
            }
            Ok(vec![("max_count_error", worst)])
        },
    ));
    let tol = cfg.tolerance("primes.pnt_trend", 1e-12);
    reports.push(timed(
        cfg,
        "primes.pnt_trend",
        "|(L - 1/L)/ln L - pi(L)| / pi(L) decreasing in L",
        vec![("lambdas", label)],
        tol,
        || {
            let rows = rows.clone()?;
            let rise = rows
                .windows(2)
                .map(|w| w[1].relative_gap() - w[0].relative_gap())
                .fold(0.0, f64::max);
            Ok(vec![("max_gap_increase", rise)])
        },
    ));
    let mut table = DataTable::new(
        "primes",
        &["lambda", "pi", "pnt_term", "expectation", "gap"],
    );
    if let Ok(rows) = &rows {
        for r in rows {
            table.push(vec![
                r.lambda.to_string(),
                r.pi_lambda.to_string(),
                format!("{:.6}", r.pnt_term),
                format!("{:.6}", r.expectation),
                format!("{:.6}", r.relative_gap()),
            ]);
        }
    }
    CheckOutput {
        reports,
        data: vec![table],
    }
}
