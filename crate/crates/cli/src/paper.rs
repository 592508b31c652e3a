//! Regression table of the worked examples.
//!
//! Each entry names a value as printed in the source text. A handful of those
//! printed values are arithmetic slips; such entries carry the corrected value
//! and pass only when the computation reproduces the correction, so both
//! numbers are always visible in the output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use fptlab_core::bounds::q_max;
use fptlab_core::coeffsets::{ddi_check, largest_below, plus_closure, CoeffSetSpec};
use fptlab_core::frobenius::{fpt_bracket, verify_hm_bound, LineArrangement, Slope};
use fptlab_core::pairs::{cone_transfer, P1Pair};
use fptlab_core::thresholds::{
    fpt_degenerate, hara_monsky_lower, klt_scaled, klt_weighted, lct_line_arrangement, MultiplicityProfile,
    WeightedArrangement,
};
use fptlab_core::{Error, Exec, Rational};

use crate::{execute, Inputs, LambdaInput, RawArrangement};

type LibFn = Box<dyn Fn() -> Result<Value, Error> + Send + Sync>;

enum Source {
    Cli(Inputs, &'static str),
    Lib(LibFn),
}

struct Entry {
    label: String,
    source: Source,
    paper: Value,
    corrected: Option<(Value, &'static str)>,
}

/// A printed value attached to a CLI invocation.
pub struct Citation {
    pub pointer: &'static str,
    pub paper: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    ExpectedDeviation,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub label: String,
    pub paper: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<Value>,
    pub computed: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
    pub matched: usize,
    pub expected_deviations: usize,
    pub mismatched: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatched == 0
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Match => "PASS",
                Status::ExpectedDeviation => "PASS*",
                Status::Mismatch => "FAIL",
            };
            s.push_str(&format!("{tag:<6} {}: paper {}", c.label, show(&c.paper)));
            if let Some(v) = &c.corrected {
                s.push_str(&format!(", corrected {}", show(v)));
            }
            s.push_str(&format!(", computed {}", show(&c.computed)));
            if let Some(n) = &c.note {
                s.push_str(&format!(" ({n})"));
            }
            s.push('\n');
        }
        s.push_str(&format!(
            "{} checks: {} match, {} expected deviations (PASS*), {} mismatches\n",
            self.checks.len(),
            self.matched,
            self.expected_deviations,
            self.mismatched
        ));
        s
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("{{{}}}", items.iter().map(show).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn q(s: &str) -> Rational {
    s.parse().expect("table literal")
}

fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

fn jq(s: &str) -> Value {
    json!(q(s))
}

fn jqs(v: &[&str]) -> Value {
    json!(qs(v))
}

fn set(v: &[&str]) -> CoeffSetSpec {
    CoeffSetSpec::new(qs(v)).expect("table literal")
}

fn prof(v: &[u64]) -> MultiplicityProfile {
    MultiplicityProfile::new(v.to_vec()).expect("table literal")
}

fn all_lines(p: u64) -> RawArrangement {
    RawArrangement {
        p,
        slopes: (0..p).map(Slope::Finite).chain([Slope::Infinity]).collect(),
        mults: vec![1; p as usize + 1],
    }
}

fn cli(label: &str, inputs: Inputs, pointer: &'static str, paper: Value) -> Entry {
    Entry {
        label: label.to_string(),
        source: Source::Cli(inputs, pointer),
        paper,
        corrected: None,
    }
}

fn lib(label: &str, f: impl Fn() -> Result<Value, Error> + Send + Sync + 'static, paper: Value) -> Entry {
    Entry {
        label: label.to_string(),
        source: Source::Lib(Box::new(f)),
        paper,
        corrected: None,
    }
}

impl Entry {
    fn deviates(mut self, corrected: Value, note: &'static str) -> Self {
        self.corrected = Some((corrected, note));
        self
    }
}

fn entries() -> Vec<Entry> {
    let empty: Vec<Rational> = Vec::new();
    let third = qs(&["1/3"]);
    let mut v = vec![
        lib("I+ for I = {1/3}", || Ok(json!(plus_closure(&set(&["1/3"])).elements)), jqs(&["0", "1/3", "2/3", "1"])),
        cli(
            "standard coefficients below 9/10",
            Inputs::Dset { set: empty.clone(), below: q("9/10") },
            "/elements",
            jqs(&["0", "1/2", "2/3", "3/4", "4/5", "5/6", "6/7", "7/8", "8/9"]),
        ),
        cli(
            "D({1/3}) below 9/10",
            Inputs::Dset { set: third.clone(), below: q("9/10") },
            "/elements",
            jqs(&["0", "1/3", "1/2", "2/3", "3/4", "7/9", "4/5", "5/6", "6/7", "13/15", "7/8", "8/9"]),
        ),
        lib(
            "largest q3 in D({1/3}) below 13/15",
            || Ok(json!(largest_below(&set(&["1/3"]), &q("13/15"), &Rational::zero())?)),
            jq("6/7"),
        ),
        lib(
            "largest q3 in D({1/3}) below 11/12",
            || Ok(json!(largest_below(&set(&["1/3"]), &q("11/12"), &Rational::zero())?)),
            jq("19/21"),
        )
        .deviates(jq("10/11"), "10/11 is in D({1/3}) and 19/21 < 10/11 < 11/12"),
        lib(
            "largest q3 in D({1/3}) below 8/9",
            || Ok(json!(largest_below(&set(&["1/3"]), &q("8/9"), &Rational::zero())?)),
            jq("13/15"),
        )
        .deviates(jq("7/8"), "7/8 is in D({1/3}) and 13/15 < 7/8 < 8/9"),
        lib("lct of three simple lines", || Ok(json!(lct_line_arrangement(&prof(&[1, 1, 1])))), jq("2/3")),
        lib("lct of x^3 y", || Ok(json!(lct_line_arrangement(&prof(&[3, 1])))), jq("1/3")),
        lib("fpt of x^3 y", || Ok(json!(fpt_degenerate(&prof(&[3, 1])))), jq("1/3")),
        lib("fpt of x^2 y^2", || Ok(json!(fpt_degenerate(&prof(&[2, 2])))), jq("1/2")),
        lib(
            "Hara-Monsky bound for six lines at p = 5",
            || Ok(json!(hara_monsky_lower(&prof(&[1; 6]), 5)?)),
            jq("1/5"),
        ),
        cli(
            "t0 for standard coefficients",
            Inputs::T0 { lambda: LambdaInput::Set(empty.clone()) },
            "/t0",
            jq("1/6"),
        ),
        cli(
            "t0 witness degree for standard coefficients",
            Inputs::T0 { lambda: LambdaInput::Set(empty.clone()) },
            "/witness_d",
            json!(3),
        ),
        cli(
            "t0 witness lambda for standard coefficients",
            Inputs::T0 { lambda: LambdaInput::Set(empty.clone()) },
            "/witness_lambda",
            jq("1/2"),
        ),
        cli("t0 for D({1/3})", Inputs::T0 { lambda: LambdaInput::Set(third.clone()) }, "/t0", jq("1/15")),
        lib(
            "klt for weights (1/2, 2/3, 4/5)",
            || Ok(json!(klt_weighted(&WeightedArrangement::new(qs(&["1/2", "2/3", "4/5"]))?))),
            json!(true),
        ),
        lib("klt of half of three lines", || Ok(json!(klt_scaled(&prof(&[1, 1, 1]), &q("1/2")))), json!(true)),
        lib("klt of a third of x^3 y", || Ok(json!(klt_scaled(&prof(&[3, 1]), &q("1/3")))), json!(false)),
        cli(
            "bracket of all lines over F_3 at e = 3",
            Inputs::Bracket { arrangement: all_lines(3), e: 3 },
            "/lower",
            jq("8/27"),
        ),
        cli(
            "bracket of all lines over F_3 at e = 3",
            Inputs::Bracket { arrangement: all_lines(3), e: 3 },
            "/upper",
            jq("9/27"),
        ),
        cli(
            "bracket of x^3 y over F_3 at e = 2",
            Inputs::Bracket {
                arrangement: RawArrangement { p: 3, slopes: vec![Slope::Finite(0), Slope::Infinity], mults: vec![3, 1] },
                e: 2,
            },
            "/lower",
            jq("2/9"),
        ),
        cli(
            "bracket of x^3 y over F_3 at e = 2",
            Inputs::Bracket {
                arrangement: RawArrangement { p: 3, slopes: vec![Slope::Finite(0), Slope::Infinity], mults: vec![3, 1] },
                e: 2,
            },
            "/upper",
            jq("3/9"),
        ),
        lib(
            "Hara-Monsky bound holds for all lines over F_3 at e = 2",
            || Ok(json!(verify_hm_bound(&LineArrangement::all_rational_lines(3)?, 2)?)),
            json!(true),
        ),
        cli("epsilon for I = {}", Inputs::P0 { set: empty.clone(), trace: false }, "/epsilon", jq("1/2")),
        cli("Q for I = {}", Inputs::P0 { set: empty.clone(), trace: false }, "/Q", jq("59/30")),
        cli(
            "Q witness for I = {}",
            Inputs::P0 { set: empty.clone(), trace: false },
            "/witness",
            jqs(&["1/2", "2/3", "4/5"]),
        ),
        cli("p0 for I = {}", Inputs::P0 { set: empty.clone(), trace: false }, "/p0", json!(30)).deviates(
            json!(60),
            "floor((1/2)/(1/2) / (1 - 59/60)) = 60",
        ),
        cli("epsilon for I = {1/3}", Inputs::P0 { set: third.clone(), trace: false }, "/epsilon", jq("1/3")),
        cli("Q for I = {1/3}", Inputs::P0 { set: third.clone(), trace: false }, "/Q", jq("209/105")).deviates(
            jq("263/132"),
            "1/3 + 3/4 + 10/11 lies in the sum set and exceeds 209/105",
        ),
        cli(
            "Q witness for I = {1/3}",
            Inputs::P0 { set: third.clone(), trace: false },
            "/witness",
            jqs(&["1/3", "4/5", "6/7"]),
        )
        .deviates(jqs(&["1/3", "3/4", "10/11"]), "follows from the corrected Q"),
        cli("p0 for I = {1/3}", Inputs::P0 { set: third.clone(), trace: false }, "/p0", json!(420)).deviates(
            json!(528),
            "2 / (1 - 263/264) = 528",
        ),
        cli(
            "exact p0 for I = {1/3}",
            Inputs::P0 { set: third.clone(), trace: false },
            "/p0_exact",
            jq("420"),
        )
        .deviates(jq("528"), "follows from the corrected Q"),
        lib(
            "case q1 = 1/2 total for I = {1/3}",
            || Ok(json!(qs(&["1/2", "2/3", "4/5"]).iter().sum::<Rational>())),
            jq("29/30"),
        )
        .deviates(jq("59/30"), "1/2 + 2/3 + 4/5 = 59/30, a typo"),
        lib(
            "log Fano (P^1, 1/2 P1 + 2/3 P2 + 4/5 P3)",
            || Ok(json!(fptlab_core::pairs::classify_p1(&P1Pair::new(qs(&["1/2", "2/3", "4/5"]))?).log_fano)),
            json!(true),
        ),
        lib(
            "cone over (P^1, 1/2 P1 + 2/3 P2 + 4/5 P3) is klt",
            || Ok(json!(klt_weighted(&cone_transfer(&P1Pair::new(qs(&["1/2", "2/3", "4/5"]))?)?))),
            json!(true),
        ),
    ];

    for (w, total) in [
        (["1/3", "7/9", "13/15"], "89/45"),
        (["1/3", "3/4", "19/21"], "167/84"),
        (["1/3", "4/5", "6/7"], "209/105"),
    ] {
        v.push(lib(
            &format!("case sum {total} is in the {{1/3}} search trace"),
            move || {
                let s = q_max(&set(&["1/3"]))?;
                let w = qs(&w);
                Ok(json!(s.trace.iter().any(|t| t.witness == w && t.sum == q(total))))
            },
            json!(true),
        ));
    }

    for n in 3..=10u64 {
        let m = Rational::from_integer((2 * n - 1) * n).recip();
        v.push(cli(&format!("simple bound m for n = {n}"), Inputs::Hsb { n }, "/m", json!(m)));
        v.push(cli(&format!("simple bound for n = {n}"), Inputs::Hsb { n }, "/bound", json!(2 * n * n - n)));
    }

    for (p, e_max) in [(2u64, 3u32), (3, 3), (5, 2)] {
        for e in 1..=e_max {
            v.push(lib(
                &format!("all lines over F_{p}: bracket at e = {e} contains 1/{p}"),
                move || {
                    let br = fpt_bracket(&LineArrangement::all_rational_lines(p)?, e)?;
                    Ok(json!(br.encloses(&Rational::new(1, p as i64))))
                },
                json!(true),
            ));
        }
    }

    for s in [vec![], vec!["1/3"], vec!["1/2", "1/3"]] {
        for c in ["1/2", "2/3", "4/5"] {
            let s2 = s.clone();
            v.push(lib(
                &format!("D(D(I)) = D(I) below {c} for I = {{{}}}", s.join(", ")),
                move || Ok(json!(ddi_check(&set(&s2), &q(c))?)),
                json!(true),
            ));
        }
    }

    for p in [2u64, 3, 31] {
        v.push(cli(
            &format!("three half-weight lines at p = {p}"),
            Inputs::Certify { weights: qs(&["1/2", "1/2", "1/2"]), p, slopes: None, emax: 0 },
            "/reason",
            json!("boundary_reduction"),
        ));
    }
    v
}

fn evaluate(e: &Entry) -> CheckResult {
    let computed = match &e.source {
        Source::Cli(inputs, pointer) => execute(inputs)
            .map(|out| out.pointer(pointer).cloned().unwrap_or(Value::Null))
            .unwrap_or_else(|err| json!({ "error": err.to_string() })),
        Source::Lib(f) => f().unwrap_or_else(|err| json!({ "error": err.to_string() })),
    };
    let status = if computed == e.paper {
        Status::Match
    } else if e.corrected.as_ref().is_some_and(|(c, _)| *c == computed) {
        Status::ExpectedDeviation
    } else {
        Status::Mismatch
    };
    CheckResult {
        label: e.label.clone(),
        paper: e.paper.clone(),
        corrected: e.corrected.as_ref().map(|(c, _)| c.clone()),
        computed,
        status,
        note: e.corrected.as_ref().map(|(_, n)| n.to_string()),
    }
}

pub fn run_checks() -> CheckReport {
    let checks = Exec::default().map(&entries(), evaluate);
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    CheckReport {
        matched: count(Status::Match),
        expected_deviations: count(Status::ExpectedDeviation),
        mismatched: count(Status::Mismatch),
        checks,
    }
}

/// Printed values for an exact CLI invocation.
pub fn citations_for(inputs: &Inputs) -> Vec<Citation> {
    entries()
        .into_iter()
        .filter_map(|e| match e.source {
            Source::Cli(i, pointer) if i == *inputs => Some(Citation { pointer, paper: e.paper }),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_mismatches() {
        let rep = run_checks();
        let bad: Vec<_> = rep.checks.iter().filter(|c| c.status == Status::Mismatch).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(rep.passed());
    }

    #[test]
    fn deviations_show_both_values() {
        let rep = run_checks();
        let p0 = rep.checks.iter().find(|c| c.label == "p0 for I = {}").unwrap();
        assert_eq!(p0.status, Status::ExpectedDeviation);
        assert_eq!((p0.paper.clone(), p0.computed.clone()), (json!(30), json!(60)));
        let table = rep.to_table();
        assert!(table.contains("paper 29/30, corrected 59/30, computed 59/30"));
    }
}
