//! Implementations of the five subcommands.

use std::fmt::Write as _;

use serde_json::json;
use stokes_core::certifier::{certify_bounds, enclose_limit, CertificateJson, CertifierError};
use stokes_core::numerics::{decimal_string, rational_to_string};
use stokes_core::oracle::{run_cross_checks_corrupted, run_cross_checks_with_series, solve_u_series, SeriesJson};
use stokes_core::stokes::{
    check_reflection, large_order_estimate, phase_display, stokes_constants, StokesJson,
};
use stokes_core::CoefficientTable;

use crate::{CliError, FormatArg, OracleArgs, RunConfig};

impl From<CertifierError> for CliError {
    fn from(e: CertifierError) -> Self {
        CliError::CheckFailed(e.to_string())
    }
}

pub fn coeffs(cfg: &RunConfig) -> Result<(), CliError> {
    let table = CoefficientTable::up_to(cfg.n_max);
    let digits = cfg.decimal_digits();
    let payload = match cfg.format {
        FormatArg::Csv => {
            let mut out = String::from("n,c_n,d_n,b_n,Q_n,b_n_dec\n");
            for n in 0..=cfg.n_max {
                let q = if n == 0 {
                    String::new()
                } else {
                    rational_to_string(table.q(n))
                };
                writeln!(
                    out,
                    "{n},{},{},{},{q},{}",
                    rational_to_string(table.c(n)),
                    rational_to_string(table.d(n)),
                    rational_to_string(table.b(n)),
                    decimal_string(table.b(n), digits),
                )
                .expect("string write");
            }
            out
        }
        FormatArg::Json => {
            let rows: Vec<_> = (0..=cfg.n_max)
                .map(|n| {
                    json!({
                        "n": n,
                        "c": rational_to_string(table.c(n)),
                        "d": rational_to_string(table.d(n)),
                        "b": rational_to_string(table.b(n)),
                        "q": if n == 0 { serde_json::Value::Null } else {
                            serde_json::Value::String(rational_to_string(table.q(n)))
                        },
                        "b_dec": decimal_string(table.b(n), digits),
                    })
                })
                .collect();
            let doc = json!({ "n_max": cfg.n_max, "decimal_digits": digits, "rows": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        FormatArg::Human => {
            let mut out = String::new();
            writeln!(out, "{:>6}  {:>24}  b_n (exact)", "n", "b_n (dec, 12 digits)")
                .expect("string write");
            for n in 0..=cfg.n_max {
                writeln!(
                    out,
                    "{n:>6}  {:>24}  {}",
                    decimal_string(table.b(n), 12),
                    rational_to_string(table.b(n)),
                )
                .expect("string write");
            }
            out
        }
    };
    cfg.write(&payload)
}

pub fn certify(cfg: &RunConfig) -> Result<(), CliError> {
    let table = CoefficientTable::up_to(cfg.n_max);
    table
        .verify_increment_identity()
        .map_err(|e| CliError::CheckFailed(e.to_string()))?;
    let cert = certify_bounds(&table, cfg.n_max, &cfg.a1, &cfg.a2, cfg.b_mode)?;
    let dto = CertificateJson::from(&cert);
    let payload = match cfg.format {
        FormatArg::Json | FormatArg::Csv => {
            format!("{}\n", serde_json::to_string_pretty(&dto).expect("json"))
        }
        FormatArg::Human => {
            let digits = cfg.decimal_digits();
            let mut out = String::new();
            writeln!(out, "certificate through n = {}", cert.n_checked).expect("w");
            writeln!(out, "  A1               = {}", dto.a1).expect("w");
            writeln!(out, "  A2               = {}", dto.a2).expect("w");
            writeln!(out, "  B (active)       = {}", dto.b_const).expect("w");
            writeln!(out, "  alpha            = {}", dto.alpha).expect("w");
            writeln!(out, "  base cases       = {}", dto.base_cases_ok).expect("w");
            writeln!(out, "  induction        = {}", dto.induction_ok).expect("w");
            writeln!(out, "  increment bounds = {}", dto.q_bounds_ok).expect("w");
            writeln!(out, "  sandwich formula = {}", dto.sandwich_formula_ok).expect("w");
            writeln!(out, "  sandwich literal = {}", dto.sandwich_literal_ok).expect("w");
            writeln!(
                out,
                "  limit enclosure  = [{}, {}]",
                decimal_string(cert.limit_enclosure.lo(), digits),
                decimal_string(cert.limit_enclosure.hi(), digits),
            )
            .expect("w");
            writeln!(out, "  within [1, 331/250] = {}", dto.upper_bound_tight_ok).expect("w");
            writeln!(out, "  within [1, 49/37]   = {}", dto.upper_bound_loose_ok).expect("w");
            out
        }
    };
    cfg.write(&payload)
}

pub fn stokes(cfg: &RunConfig) -> Result<(), CliError> {
    let table = CoefficientTable::up_to(cfg.n_max);
    table
        .verify_increment_identity()
        .map_err(|e| CliError::CheckFailed(format!("increment identity: {e}")))?;
    let cert = certify_bounds(&table, cfg.n_max, &cfg.a1, &cfg.a2, cfg.b_mode)
        .map_err(|e| CliError::CheckFailed(format!("certification: {e}")))?;
    let result = stokes_constants(&cert.limit_enclosure, cfg.precision_bits)
        .map_err(|e| CliError::CheckFailed(format!("constant assembly: {e}")))?;
    if !check_reflection(&result.s1, &result.s2) {
        return Err(CliError::CheckFailed("reflection identity".into()));
    }
    let digits = cfg.decimal_digits();
    let dto = StokesJson::from_result(&result, digits);
    let payload = match cfg.format {
        FormatArg::Json | FormatArg::Csv => {
            format!("{}\n", serde_json::to_string_pretty(&dto).expect("json"))
        }
        FormatArg::Human => {
            let mut out = String::new();
            writeln!(out, "b  in [{}, {}]  ({} digits, truncated)", dto.b_lo_dec, dto.b_hi_dec, dto.decimal_digits).expect("w");
            writeln!(out, "K  ~ {}", dto.k_dec).expect("w");
            writeln!(out, "|S| ~ {}  (shared by S1 and S2)", dto.modulus_dec).expect("w");
            writeln!(out, "S1 phase = {}", phase_display(result.s1.phase_over_pi())).expect("w");
            writeln!(out, "S2 phase = {}", phase_display(result.s2.phase_over_pi())).expect("w");
            writeln!(out, "nonzero certified = {}", dto.nonzero_certified).expect("w");
            out
        }
    };
    cfg.write(&payload)?;
    if !result.nonzero_certified {
        return Err(CliError::CheckFailed("nonzero certification".into()));
    }
    Ok(())
}

pub fn convergence(cfg: &RunConfig) -> Result<(), CliError> {
    let table = CoefficientTable::up_to(cfg.n_max);
    let cert = certify_bounds(&table, cfg.n_max, &cfg.a1, &cfg.a2, cfg.b_mode)?;
    let digits = cfg.decimal_digits();
    let mut out = String::from("n,b_n,enclosure_lo,enclosure_hi,large_order_lo,large_order_hi\n");
    for n in geometric_sample(cfg.n_max) {
        let enclosure = enclose_limit(&table, n, &cert.b_const)?;
        let estimate = large_order_estimate(&table, n, cfg.precision_bits)
            .map_err(|e| CliError::CheckFailed(e.to_string()))?;
        writeln!(
            out,
            "{n},{},{},{},{},{}",
            decimal_string(table.b(n), digits),
            decimal_string(enclosure.lo(), digits),
            decimal_string(enclosure.hi(), digits),
            decimal_string(estimate.estimate_at_n.lo(), digits),
            decimal_string(estimate.estimate_at_n.hi(), digits),
        )
        .expect("string write");
    }
    cfg.write(&out)
}

/// n = 8, 16, 32, ... plus the endpoint itself.
fn geometric_sample(n_max: usize) -> Vec<usize> {
    let mut sample = Vec::new();
    let mut n = 8usize;
    while n < n_max {
        sample.push(n);
        n *= 2;
    }
    sample.push(n_max);
    sample
}

pub fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    if args.n_max == 0 || args.n_max > 200 {
        return Err(CliError::Usage(format!(
            "oracle order must be within [1, 200], got {}",
            args.n_max
        )));
    }
    let (report, u_series) = if args.inject_corruption {
        let report = run_cross_checks_corrupted(args.n_max)
            .map_err(|e| CliError::CheckFailed(e.to_string()))?;
        (report, solve_u_series(2 * args.n_max))
    } else {
        run_cross_checks_with_series(args.n_max)
            .map_err(|e| CliError::CheckFailed(e.to_string()))?
    };
    let payload = match args.format {
        FormatArg::Json | FormatArg::Csv => {
            let doc = json!({
                "order": report.order,
                "triple_agreement": report.triple_agreement,
                "parity": report.parity,
                "residuals": report.residuals,
                "diagonalization": report.diagonalization,
                "borel_round_trip": report.borel_round_trip,
                "first_failure": report.first_failure(),
                "u_series": serde_json::to_value(SeriesJson::from(&u_series)).expect("json"),
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        FormatArg::Human => {
            let mut out = String::new();
            writeln!(out, "oracle cross-checks at order {}", report.order).expect("w");
            writeln!(out, "  triple agreement = {}", report.triple_agreement).expect("w");
            writeln!(out, "  parity           = {}", report.parity).expect("w");
            writeln!(out, "  residuals        = {}", report.residuals).expect("w");
            writeln!(out, "  diagonalization  = {}", report.diagonalization).expect("w");
            writeln!(out, "  borel round trip = {}", report.borel_round_trip).expect("w");
            out
        }
    };
    crate::emit(args.out.as_deref(), &payload)?;
    match report.first_failure() {
        None => Ok(()),
        Some(name) => Err(CliError::CheckFailed(name.into())),
    }
}
