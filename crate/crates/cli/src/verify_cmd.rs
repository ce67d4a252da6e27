use weyl_core::verify::{run_suite, Suite, SuiteReport, VerifyConfig};
use weyl_core::{Mode, Rational};

use crate::args::{Common, OutFormat};
use crate::{models, CliError, Report};

pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

pub fn suite_report(c: &Common, suite: Suite) -> Result<SuiteReport, CliError> {
    let tol = match c.mode {
        Mode::Exact => 0.0,
        Mode::Float => c.tol.unwrap_or(DEFAULT_FLOAT_TOL),
    };
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("invalid --tol {tol}")));
    }
    let cfg = VerifyConfig { models: models(c, &[3, 4, 5, 6])?, seed: c.seed, count: c.count, tol };
    Ok(match c.mode {
        Mode::Exact => run_suite::<Rational>(suite, &cfg),
        Mode::Float => run_suite::<f64>(suite, &cfg),
    })
}

pub fn run(c: &Common, suite: Suite) -> Result<Report, CliError> {
    let r = suite_report(c, suite)?;
    let passed = r.all_passed();
    let text = match c.out.unwrap_or(OutFormat::Table) {
        OutFormat::Json => crate::json(&r),
        OutFormat::Table => {
            let mut s = format!(
                "suite {} mode {} seed {} count {} tol {:e} models {}\n",
                r.suite,
                r.mode,
                r.seed,
                r.count,
                r.tol,
                r.models.join(" ")
            );
            for ch in &r.checks {
                s.push_str(&format!(
                    "{} {:>6} {:>4} {:.3e} {}\n",
                    if ch.passed() { "PASS" } else { "FAIL" },
                    ch.samples,
                    ch.failures,
                    ch.worst_residual,
                    ch.name
                ));
            }
            s.push_str(if passed { "all checks passed\n" } else { "some checks failed\n" });
            s
        }
    };
    Ok(Report { passed, text })
}
