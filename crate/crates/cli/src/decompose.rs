use std::path::Path;

use serde_json::{json, Map, Value};
use weyl_core::decomp::{classify_weyl, WeylTensor};
use weyl_core::io::{bilinear_value, curv4_value, from_json_str, AnyTensor};
use weyl_core::tensor::membership4;
use weyl_core::traces::{length_form, ricci, ricci_star};
use weyl_core::{Curv4, Scalar, SpaceTag, Tensor};

use crate::args::{Common, OutFormat};
use crate::verify_cmd::DEFAULT_FLOAT_TOL;
use crate::{read, CliError, Report};

pub fn run(c: &Common, file: &Path) -> Result<Report, CliError> {
    let tol = c.tol.unwrap_or(DEFAULT_FLOAT_TOL);
    let out = c.out.unwrap_or(OutFormat::Json);
    match from_json_str(&read(file)?)? {
        AnyTensor::Exact(t) => report(curv(t)?, tol, out),
        AnyTensor::Float(t) => report(curv(t)?, tol, out),
    }
}

fn curv<S: Scalar>(t: Tensor<S>) -> Result<Curv4<S>, CliError> {
    t.into_curv4().ok_or_else(|| CliError::Usage("decompose expects a rank-4 tensor".into()))
}

fn report<S: Scalar>(a: Curv4<S>, tol: f64, out: OutFormat) -> Result<Report, CliError> {
    let model = a.model();
    let (p, q) = model.signature();
    let member = membership4(&a, SpaceTag::Weyl, tol);
    if !member.holds {
        let text = match out {
            OutFormat::Json => crate::json(&json!({ "n": model.n(), "p": p, "q": q, "membership": member })),
            OutFormat::Table => format!(
                "not a Weyl curvature tensor: residual {:.3e} at {}\n",
                member.worst_residual,
                member.violated_constraint.as_deref().unwrap_or("?")
            ),
        };
        return Ok(Report { passed: false, text });
    }
    let w = WeylTensor::with_tol(a.clone(), tol)?;
    let alphas: Vec<Curv4<S>> = (1..=8).map(|i| w.alpha(i)).collect::<Result<_, _>>()?;
    let pis: Vec<Curv4<S>> = (1..=8).map(|i| w.pi(i)).collect::<Result<_, _>>()?;
    let class = classify_weyl(&w, tol);
    let ric = ricci(&a);
    let ric_star = ricci_star(&a);
    let f = length_form(&a);
    let higa = w.higa();
    let proj = w.projective();
    let text = match out {
        OutFormat::Json => {
            let parts = |v: &[Curv4<S>]| {
                let mut m = Map::new();
                for (i, t) in v.iter().enumerate() {
                    m.insert((i + 1).to_string(), curv4_value(t));
                }
                Value::Object(m)
            };
            crate::json(&json!({
                "n": model.n(),
                "p": p,
                "q": q,
                "mode": S::MODE,
                "alpha": parts(&alphas),
                "pi": parts(&pis),
                "ricci": {
                    "ric": bilinear_value(&ric),
                    "ric_star": bilinear_value(&ric_star),
                    "sym_ric": bilinear_value(w.sym_ricci()),
                    "alt_ric": bilinear_value(w.alt_ricci()),
                    "length_form": bilinear_value(&f),
                    "tau": w.tau().to_json(),
                },
                "higa": curv4_value(&higa),
                "projective": curv4_value(&proj),
                "classification": class,
            }))
        }
        OutFormat::Table => {
            let mut s = format!("model n={} p={} q={} mode {}\n", model.n(), p, q, S::MODE);
            s.push_str("component max|alpha_i| max|pi_i|\n");
            for i in 0..8 {
                s.push_str(&format!("{} {:.6e} {:.6e}\n", i + 1, alphas[i].max_abs(), pis[i].max_abs()));
            }
            for (name, v) in [
                ("Ric", ric.max_abs()),
                ("Ric*", ric_star.max_abs()),
                ("S Ric", w.sym_ricci().max_abs()),
                ("Lambda Ric", w.alt_ricci().max_abs()),
                ("F", f.max_abs()),
                ("H(A)", higa.max_abs()),
                ("p(A)", proj.max_abs()),
            ] {
                s.push_str(&format!("max|{name}| {v:.6e}\n"));
            }
            s.push_str(&format!("tau {}\n", w.tau().to_json()));
            for (name, v) in [
                ("algebraic", class.is_algebraic),
                ("trivial_pointwise", class.is_trivial_pointwise),
                ("einstein_weyl", class.is_einstein_weyl),
                ("constant_curvature_type", class.is_constant_curvature_type),
                ("ricci_flat", class.is_ricci_flat),
            ] {
                s.push_str(&format!("{name} {v}\n"));
            }
            s
        }
    };
    Ok(Report { passed: true, text })
}
