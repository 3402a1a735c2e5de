use std::path::Path;

use serde_json::{json, Value};

use dsqo::extremal::{
    b_constraints, count_triples, enumerate_extreme_b, enumerate_extreme_b_oracle,
    enumerate_extreme_u1, enumerate_extreme_u1_oracle, is_extreme, solution_vertices,
    triple_operators, u1_constraints, PolytopePoint,
};
use dsqo::majorization::first_majorization_failure;
use dsqo::matrix_classes::{check_u1, in_uk};
use dsqo::qso::{
    apply, check_dsqo, check_necessary_conditions, complete_to_dsqo, majorization_witness,
    permute_qso,
};
use dsqo::rational::{self, Rational};
use dsqo::{Permutation, QsoTensor, SimplexVector, SymMatrix};

use crate::input::load;
use crate::report::Verdict;
use crate::{CliError, Command};

type Outcome = (Verdict, Option<Value>, Option<Value>);

/// Largest `m` for which `check-dsqo` also reports extremality in `B`.
const EXTREMALITY_REPORT_CAP: usize = 6;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn text(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn value(result: Value) -> Outcome {
    (Verdict::Value, None, Some(result))
}

fn pass(result: Option<Value>) -> Outcome {
    (Verdict::Pass, None, result)
}

fn fail(certificate: Value) -> Outcome {
    (Verdict::Fail, Some(certificate), None)
}

fn matrix(path: &Path) -> Result<SymMatrix, CliError> {
    load(path, "symmetric matrix")
}

fn operator(path: &Path) -> Result<QsoTensor, CliError> {
    load(path, "operator")
}

fn point(path: &Path) -> Result<SimplexVector, CliError> {
    load(path, "simplex vector")
}

fn same_dim(expected: usize, found: usize, what: &str) -> Result<(), CliError> {
    if expected != found {
        return Err(CliError::Validation(format!(
            "{what} has dimension {found}, expected {expected}"
        )));
    }
    Ok(())
}

pub fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Majorize { x, y } => majorize(&point(x)?, &point(y)?),
        Command::Apply { operator: v, x } => {
            let (v, x) = (operator(v)?, point(x)?);
            same_dim(v.dim(), x.dim(), "x")?;
            Ok(value(to_value(&apply(&v, &x)?)))
        }
        Command::CheckU1 { matrix: a } => Ok(check_u1_report(&matrix(a)?)),
        Command::CheckUk { matrix: a, k } => check_uk(&matrix(a)?, *k),
        Command::SolveSym { matrix: a } => {
            let a = matrix(a)?;
            if let Err(v) = check_u1(&a) {
                return Ok(u1_failure(&v));
            }
            let t = dsqo::matrix_classes::solve_symmetrization(&a)?;
            Ok(value(to_value(&t)))
        }
        Command::SolutionVertices { matrix: a } => {
            let a = matrix(a)?;
            if let Err(v) = check_u1(&a) {
                return Ok(u1_failure(&v));
            }
            let vertices = solution_vertices(&a)?;
            Ok(value(json!({
                "count": vertices.len(),
                "vertices": to_value(&vertices),
            })))
        }
        Command::CheckDsqo { operator: v } => check_dsqo_report(&operator(v)?),
        Command::CheckNecessary { operator: v } => {
            let report = check_necessary_conditions(&operator(v)?);
            Ok(if report.all_passed() {
                pass(Some(to_value(&report)))
            } else {
                fail(to_value(&report))
            })
        }
        Command::WitnessSearch {
            operator: v,
            trials,
            seed,
        } => {
            let v = operator(v)?;
            Ok(match majorization_witness(&v, *trials, *seed) {
                None => pass(Some(json!({ "trials": trials, "seed": seed }))),
                Some(x) => {
                    let vx = apply(&v, &x)?;
                    fail(json!({ "x": to_value(&x), "vx": to_value(&vx) }))
                }
            })
        }
        Command::Complete { prefix, m } => {
            let prefix: Vec<SymMatrix> = load(prefix, "prefix matrix list")?;
            let m = match (m, prefix.first()) {
                (Some(m), _) => *m,
                (None, Some(a)) => a.dim(),
                (None, None) => {
                    return Err(CliError::Validation(
                        "prefix must contain at least one matrix".into(),
                    ))
                }
            };
            Ok(value(to_value(&complete_to_dsqo(&prefix, m)?)))
        }
        Command::Permute { operator: v, pi } => {
            let v = operator(v)?;
            let pi = Permutation::from_one_based(pi)?;
            same_dim(v.dim(), pi.len(), "permutation")?;
            Ok(value(to_value(&permute_qso(&v, &pi)?)))
        }
        Command::EnumU1 { m, oracle } => enum_u1(*m, *oracle),
        Command::EnumB { m, oracle } => enum_b(*m, *oracle),
        Command::VerifyCounts { m } => verify_counts(*m),
    }
}

fn majorize(x: &SimplexVector, y: &SimplexVector) -> Result<Outcome, CliError> {
    same_dim(x.dim(), y.dim(), "y")?;
    Ok(match first_majorization_failure(x, y)? {
        None => pass(None),
        Some(k) => fail(json!({
            "k": k,
            "x_prefix": text(&x.top_sum(k)),
            "y_prefix": text(&y.top_sum(k)),
        })),
    })
}

fn u1_failure(v: &dsqo::U1Violation) -> Outcome {
    fail(json!({
        "violation": to_value(v),
        "witness_point": to_value(&v.witness_point()),
    }))
}

fn check_u1_report(a: &SymMatrix) -> Outcome {
    match check_u1(a) {
        Ok(()) => pass(None),
        Err(v) => u1_failure(&v),
    }
}

fn check_uk(a: &SymMatrix, k: usize) -> Result<Outcome, CliError> {
    let m = a.dim();
    if k == 0 || k > m {
        return Err(CliError::Validation(format!(
            "k = {k} is out of range 1..={m}"
        )));
    }
    if let Some(t) = in_uk(a, k)? {
        return Ok(pass(Some(json!({ "witness": to_value(&t) }))));
    }
    let total = a.total();
    let expected = rational::int((m * k) as i64);
    let subset = if k == 1 { check_u1(a).err() } else { None };
    let certificate = if let Some(v) = subset {
        json!({ "violation": to_value(&v), "witness_point": to_value(&v.witness_point()) })
    } else if total != expected {
        json!({ "kind": "total_sum", "sum": text(&total), "expected": m * k })
    } else {
        json!({
            "kind": "infeasible",
            "detail": format!("no matrix with entries in [0, 1] and row sums {k} symmetrizes to A"),
        })
    };
    Ok(fail(certificate))
}

fn check_dsqo_report(v: &QsoTensor) -> Result<Outcome, CliError> {
    match check_dsqo(v) {
        Err(violation) => {
            let mut cert = json!({ "violation": to_value(&violation) });
            if let Some(x) = violation.counterexample() {
                cert["x"] = to_value(&x);
                cert["vx"] = to_value(&apply(v, &x)?);
            }
            Ok(fail(cert))
        }
        Ok(()) => {
            if v.dim() > EXTREMALITY_REPORT_CAP {
                return Ok(pass(None));
            }
            let extreme = is_extreme(&PolytopePoint::from_operator(v), &b_constraints(v.dim()))?;
            let system = u1_constraints(v.dim());
            let mut slices = Vec::new();
            for (k, a) in v.slices().iter().enumerate() {
                if is_extreme(&PolytopePoint::from_u1(a), &system)? {
                    slices.push(k + 1);
                }
            }
            Ok(pass(Some(json!({
                "extreme_in_b": extreme,
                "extreme_slices": slices,
            }))))
        }
    }
}

fn disagreement(what: &str, grid: usize, oracle: usize) -> Value {
    json!({
        "kind": "enumeration_mismatch",
        "polytope": what,
        "grid_count": grid,
        "oracle_count": oracle,
    })
}

fn enum_u1(m: usize, oracle: bool) -> Result<Outcome, CliError> {
    let list = enumerate_extreme_u1(m)?;
    if oracle {
        let other = enumerate_extreme_u1_oracle(m)?;
        if other != list {
            return Ok(fail(disagreement("U_1", list.len(), other.len())));
        }
    }
    Ok(value(json!({
        "m": m,
        "count": list.len(),
        "oracle_checked": oracle,
        "matrices": to_value(&list),
    })))
}

fn enum_b(m: usize, oracle: bool) -> Result<Outcome, CliError> {
    let list = enumerate_extreme_b(m)?;
    if oracle {
        let other = enumerate_extreme_b_oracle(m)?;
        if other != list {
            return Ok(fail(disagreement("B", list.len(), other.len())));
        }
    }
    let mut result = json!({
        "m": m,
        "count": list.len(),
        "oracle_checked": oracle,
    });
    if m == 3 {
        let (all, with_m) = count_triples(&enumerate_extreme_u1(3)?);
        result["triples_all_extreme"] = json!(all);
        result["triples_with_M"] = json!(with_m);
    }
    result["operators"] = to_value(&list);
    Ok(value(result))
}

/// Counts of both polytopes, with the grid and double description paths
/// compared and, for `m = 3`, the triple construction compared to the list.
fn verify_counts(m: usize) -> Result<Outcome, CliError> {
    let u1 = enumerate_extreme_u1(m)?;
    let u1_oracle = enumerate_extreme_u1_oracle(m)?;
    if u1 != u1_oracle {
        return Ok(fail(disagreement("U_1", u1.len(), u1_oracle.len())));
    }
    let b = enumerate_extreme_b(m)?;
    let b_oracle = enumerate_extreme_b_oracle(m)?;
    if b != b_oracle {
        return Ok(fail(disagreement("B", b.len(), b_oracle.len())));
    }
    let mut result = json!({ "m": m, "u1": u1.len(), "b": b.len() });
    if m == 3 {
        let (all, with_m) = count_triples(&u1);
        let expanded = triple_operators(&u1);
        if expanded != b {
            return Ok(fail(json!({
                "kind": "triple_expansion_mismatch",
                "expanded_count": expanded.len(),
                "b_count": b.len(),
            })));
        }
        result["triples"] = json!([all, with_m]);
    }
    Ok(pass(Some(result)))
}
