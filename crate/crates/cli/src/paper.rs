//! Built-in worked examples with their known answers, run by `verify-paper`.
//! Each check goes through the same document layer as the other commands.

use std::collections::BTreeSet;

use stabreduce::cones::Cone;
use stabreduce::gm_poly::{self, Coords};
use stabreduce::gms::{self, VarGitCase, Verdict};
use stabreduce::linalg::{vector, IntMatrix, Vector};
use stabreduce::model::{self, Analysis, ModelDocument, Outcome};
use stabreduce::{reduce, reichstein_fan, verify_trace, Classification, GerbeClass, ReductionTrace, ToricStack, ToricUnion};

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Check = Result<(), String>;
type Fixture = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const LINE: &str = r#"{"model": "fan", "group": {"free_rank": 1, "weights": [[1]]}, "fan": {"rays": [[1]], "cones": [[0]]}}"#;
const A2_OPPOSITE: &str = include_str!("../examples/a2_weights_1_-1.json");
const A2_DEGENERATE: &str = include_str!("../examples/a2_weights_1_0.json");
const A3: &str = include_str!("../examples/a3_weights_1_1_-1.json");
const MU2: &str = include_str!("../examples/mu2_plane.json");
const EX_FALSE: &str = include_str!("../examples/ex_false.json");
const EX_FALSE2: &str = include_str!("../examples/ex_false2.json");
const MONOMIAL: &str = include_str!("../examples/monomial_union.json");

fn doc(text: &str) -> Result<ModelDocument, String> {
    model::parse_document(text).map_err(|e| e.to_string())
}

fn stack(text: &str) -> Result<ToricUnion, String> {
    doc(text)?.stack().map_err(|e| e.to_string())
}

fn toric(text: &str) -> Result<ToricStack, String> {
    ToricStack::from_union(&stack(text)?).map_err(|e| e.to_string())
}

fn verified_trace(x: &ToricUnion) -> Result<ReductionTrace, String> {
    let trace = reduce(x, &[]).map_err(|e| e.to_string())?;
    let report = verify_trace(&trace);
    let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
    ensure!(failed.is_empty(), "verification failed: {}", failed.join(", "));
    Ok(trace)
}

fn classification(text: &str) -> Result<Classification, String> {
    match model::analyze(&doc(text)?, None).map_err(|e| e.to_string())? {
        Analysis::Fan(a) | Analysis::Monomial(a) => Ok(a.classification),
        _ => Err("not a stack analysis".into()),
    }
}

fn line_has_empty_transform() -> Check {
    let x = toric(LINE)?;
    let step = reichstein_fan(&x, &[Cone::orthant(1)]).map_err(|e| e.to_string())?;
    ensure!(step.output.is_empty(), "transform keeps {} cones", step.output.cones().len());
    let c = classification(LINE)?;
    ensure!(c == Classification::NotStable, "classified as {c:?}");
    Ok(())
}

fn opposite_weights_become_tame() -> Check {
    let trace = verified_trace(&stack(A2_OPPOSITE)?)?;
    ensure!(trace.steps.len() == 1, "{} steps", trace.steps.len());
    ensure!(trace.classification == GerbeClass::Tame, "result is {:?}", trace.classification);
    let charts = gms::gms_charts(&trace.result).map_err(|e| e.to_string())?;
    let gens: Vec<String> = charts.iter().flat_map(|c| c.monomials()).collect();
    ensure!(gens == ["x1*x2"], "invariant charts {gens:?}");
    Ok(())
}

fn degenerate_weights_not_stable() -> Check {
    let c = classification(A2_DEGENERATE)?;
    ensure!(c == Classification::NotStable, "classified as {c:?}");
    ensure!(reduce(&stack(A2_DEGENERATE)?, &[]).is_err(), "reduction accepted an unstable stack");
    Ok(())
}

fn three_space_saturation() -> Check {
    let x = toric(A3)?;
    let step = reichstein_fan(&x, &[Cone::orthant(3)]).map_err(|e| e.to_string())?;
    let components: BTreeSet<Cone> = step.saturation.minimal_cones().into_iter().collect();
    let expected: BTreeSet<Cone> = [Cone::coordinate(3, &[2]), Cone::coordinate(3, &[0, 1])].into();
    ensure!(components == expected, "saturation components {components:?}");
    let trace = verified_trace(&x.as_union())?;
    ensure!(trace.classification == GerbeClass::Tame, "result is {:?}", trace.classification);
    Ok(())
}

fn mu2_invariants() -> Check {
    let x = toric(MU2)?;
    let chart = gms::invariant_chart(&x, &Cone::orthant(2)).map_err(|e| e.to_string())?;
    let gens: BTreeSet<String> = chart.monomials().into_iter().collect();
    let expected: BTreeSet<String> = ["x1^2", "x1*x2", "x2^2"].map(String::from).into();
    ensure!(gens == expected, "invariants {gens:?}");
    let step = reichstein_fan(&x, &[Cone::orthant(2)]).map_err(|e| e.to_string())?;
    let check = gms::gms_blowup_check(&step, gms::DEFAULT_DEGREE_BOUND).map_err(|e| e.to_string())?;
    ensure!(check.degree == Some(2) && check.verdict == Verdict::Verified, "degree {:?}, {:?}", check.degree, check.verdict);
    Ok(())
}

fn gm_poly_analysis(text: &str) -> Result<model::GmPolyAnalysis, String> {
    match model::analyze(&doc(text)?, None).map_err(|e| e.to_string())? {
        Analysis::GmPoly(a) => Ok(a),
        _ => Err("not a polynomial analysis".into()),
    }
}

fn coords(v: &[usize]) -> Coords {
    v.iter().copied().collect()
}

fn first_false_example() -> Check {
    let a = gm_poly_analysis(EX_FALSE)?;
    let Outcome::Ok(e) = a.saturated_blowup_exceptional else { return Err("no exceptional divisor".into()) };
    ensure!(e.text == "V(x3) ∖ (V(x1) ∪ V(x2))", "exceptional divisor {}", e.text);
    let Outcome::Ok(fixed) = a.reichstein_fixed_points else { return Err("no fixed points computed".into()) };
    let pts: Vec<Coords> = fixed.iter().map(|c| c.coordinates.clone()).collect();
    ensure!(pts == [coords(&[1])], "fixed points {pts:?}");
    Ok(())
}

fn second_false_example() -> Check {
    let a = gm_poly_analysis(EX_FALSE2)?;
    let Outcome::Ok(e) = a.saturated_blowup_exceptional else { return Err("no exceptional divisor".into()) };
    ensure!(e.text == "V(x3,x5) ∖ (V(x1) ∪ V(x2,x4))", "exceptional divisor {}", e.text);
    let witness = a.no_good_quotient.ok_or("no good-quotient witness")?;
    ensure!(witness.text == "V(x1,x3,x5)", "witness {}", witness.text);
    Ok(())
}

fn vargit_table() -> Check {
    let cases = [
        (1, 1, 0, VarGitCase::MinusP2),
        (1, 1, -1, VarGitCase::MinusP1),
        (2, 2, -2, VarGitCase::MinusBoth),
        (2, 1, -2, VarGitCase::MinusP1),
        (1, 2, 3, VarGitCase::Empty),
        (3, 1, -4, VarGitCase::Empty),
    ];
    for (a, i, j, expected) in cases {
        let got = gms::vargit_locus(a, i, j).map_err(|e| e.to_string())?;
        ensure!(got == expected, "a={a} i={i} j={j}: {got:?}");
    }
    Ok(())
}

fn monomial_union() -> Check {
    let trace = verified_trace(&stack(MONOMIAL)?)?;
    ensure!(trace.steps.len() == 1, "{} steps", trace.steps.len());
    ensure!(trace.classification == GerbeClass::GerbeOverTame, "result is {:?}", trace.classification);
    ensure!(trace.result.connected_components().len() == 2, "expected two connected pieces");
    Ok(())
}

fn representations_lose_fixed_points() -> Check {
    let reps: [&[&[i64]]; 4] = [&[&[1, -1]], &[&[1, 1, -2]], &[&[1, 0, -1], &[0, 1, -1]], &[&[2, -3, 1, 0]]];
    for rows in reps {
        let rows: Vec<Vector> = rows.iter().map(|r| vector(r)).collect();
        let w = IntMatrix::from_rows(rows[0].len(), rows);
        let left = gm_poly::torus_reichstein_fixed_points(&w);
        ensure!(left.is_empty(), "weights {w:?} keep {left:?}");
    }
    Ok(())
}

const CHECKS: [Fixture; 10] = [
    ("line with weight 1", line_has_empty_transform),
    ("plane with weights (1,-1)", opposite_weights_become_tame),
    ("plane with weights (1,0)", degenerate_weights_not_stable),
    ("3-space with weights (1,1,-1)", three_space_saturation),
    ("mu_2 on the plane", mu2_invariants),
    ("first false example", first_false_example),
    ("second false example", second_false_example),
    ("variation of GIT", vargit_table),
    ("monomial union", monomial_union),
    ("torus representations", representations_lose_fixed_points),
];

/// Runs every check on its own thread; results come back in table order.
pub fn run_all() -> Vec<CheckResult> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS.iter().map(|&(name, f)| (name, s.spawn(f))).collect();
        handles.into_iter().map(|(name, h)| CheckResult { name, outcome: h.join().unwrap_or_else(|_| Err("panicked".into())) }).collect()
    })
}
