use serde::Serialize;
use weyl_core::dims::{formula_dimension, module_dimension};
use weyl_core::SpaceTag;

use crate::args::{Common, OutFormat};
use crate::{models, CliError, Report};

#[derive(Debug, Serialize)]
struct Row {
    space: SpaceTag,
    n: usize,
    /// One computed dimension per signature, in the order of `signatures`.
    computed: Vec<usize>,
    formula: usize,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct DimsReport {
    signatures: Vec<String>,
    rows: Vec<Row>,
    passed: bool,
}

pub fn run(c: &Common) -> Result<Report, CliError> {
    let models = models(c, &[3, 4, 5, 6])?;
    let mut ns: Vec<usize> = models.iter().map(|m| m.n()).collect();
    ns.dedup();
    let mut rows = Vec::new();
    for &n in &ns {
        for space in SpaceTag::ALL {
            let computed: Vec<usize> =
                models.iter().filter(|m| m.n() == n).map(|&m| module_dimension(space, m)).collect();
            let formula = formula_dimension(space, n);
            let ok = computed.iter().all(|&d| d == formula);
            rows.push(Row { space, n, computed, formula, ok });
        }
    }
    let passed = rows.iter().all(|r| r.ok);
    let mut sigs: Vec<String> = models
        .iter()
        .map(|m| {
            let (p, _) = m.signature();
            if p == 0 {
                "(0,n)".to_string()
            } else {
                format!("({p},n-{p})")
            }
        })
        .collect();
    sigs.dedup();
    let report = DimsReport { signatures: sigs, rows, passed };
    let text = match c.out.unwrap_or(OutFormat::Table) {
        OutFormat::Json => crate::json(&report),
        OutFormat::Table => {
            let mut s = String::from("space n computed formula status\n");
            for r in &report.rows {
                let comp: Vec<String> = r.computed.iter().map(|d| d.to_string()).collect();
                let comp = if r.ok { r.formula.to_string() } else { comp.join("/") };
                s.push_str(&format!(
                    "{} {} {} {} {}\n",
                    r.space,
                    r.n,
                    comp,
                    r.formula,
                    if r.ok { "OK" } else { "MISMATCH" }
                ));
            }
            s
        }
    };
    Ok(Report { passed, text })
}
