//! Golden data: machine-readable worked examples and closed-form
//! q-characters, shipped as JSON next to the crate and embedded at build
//! time. Every fixture is validated independently of the engine (cone
//! property, weight consistency, edge relations `to = from * A^{-1}`)
//! before it is compared against a run.

use std::collections::BTreeSet;
use std::fmt;

use crate::cartan::EpsilonSeq;
use crate::fm::{self, Edge, FMStatus, Limits};
use crate::lweights::{
    a_inverse, cone_height, parse::parse_monomial, parse::parse_spec, Monomial, QChar, Spec, VarKey,
};

/// Expected outcome of a fixture run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectedStatus {
    Success,
    Failed { at: Monomial, direction: usize },
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub eps: EpsilonSeq,
    pub hw: Monomial,
    pub expected_status: ExpectedStatus,
    pub terms: QChar,
    /// Expected edge set; `None` when the fixture only pins the character.
    pub edges: Option<BTreeSet<Edge>>,
    /// An ell-weight the run must *not* produce (failure fixtures).
    pub missing: Option<Monomial>,
}

#[derive(Clone, Debug)]
pub struct FixtureError(pub String);

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fixture error: {}", self.0)
    }
}

impl std::error::Error for FixtureError {}

const FIXTURE_SOURCES: &[&str] = &[
    include_str!("../fixtures/eps32-Y11.json"),
    include_str!("../fixtures/eps32-Yt41.json"),
    include_str!("../fixtures/eps31-Y31.json"),
    include_str!("../fixtures/eps21-KR2.json"),
    include_str!("../fixtures/eps21-KR3.json"),
    include_str!("../fixtures/eps21-success.json"),
    include_str!("../fixtures/eps21-fail.json"),
    include_str!("../fixtures/eps001.json"),
];

fn parse_fixture(v: &serde_json::Value) -> Result<Fixture, FixtureError> {
    let err = |msg: &str| FixtureError(msg.to_string());
    let name = v
        .get("name")
        .and_then(|x| x.as_str())
        .ok_or_else(|| err("missing name"))?;
    let m = v
        .get("m")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| err("missing m"))? as usize;
    let n = v
        .get("n")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| err("missing n"))? as usize;
    let eps = EpsilonSeq::standard(m, n).map_err(|e| FixtureError(e.to_string()))?;
    let hw_text = v
        .get("hw")
        .and_then(|x| x.as_str())
        .ok_or_else(|| err("missing hw"))?;
    let hw = parse_monomial(&eps, hw_text).map_err(|e| FixtureError(format!("{name}: {e}")))?;
    let expected_status = match v.get("expected_status") {
        Some(serde_json::Value::String(s)) if s == "success" => ExpectedStatus::Success,
        Some(serde_json::Value::Object(o)) => {
            let f = o
                .get("failed")
                .ok_or_else(|| err("unknown status object"))?;
            let at = f
                .get("at")
                .and_then(|x| x.as_str())
                .ok_or_else(|| err("failed.at"))?;
            let direction = f
                .get("direction")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| err("failed.direction"))? as usize;
            ExpectedStatus::Failed {
                at: parse_monomial(&eps, at).map_err(|e| FixtureError(e.to_string()))?,
                direction,
            }
        }
        _ => return Err(err("missing expected_status")),
    };
    let terms = QChar::from_json(&eps, v).map_err(FixtureError)?;
    let edges = match v.get("edges") {
        None => None,
        Some(serde_json::Value::Array(arr)) => {
            let mut set = BTreeSet::new();
            for e in arr {
                let from = e
                    .get("from")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| err("edge.from"))?;
                let to = e
                    .get("to")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| err("edge.to"))?;
                let i = e
                    .get("i")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| err("edge.i"))? as usize;
                let a = e
                    .get("a")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| err("edge.a"))?;
                set.insert(Edge {
                    from: parse_monomial(&eps, from).map_err(|e| FixtureError(e.to_string()))?,
                    node: i,
                    a: parse_spec(a).map_err(|e| FixtureError(e.to_string()))?,
                    to: parse_monomial(&eps, to).map_err(|e| FixtureError(e.to_string()))?,
                });
            }
            Some(set)
        }
        Some(_) => return Err(err("edges must be an array")),
    };
    let missing = match v.get("missing") {
        None => None,
        Some(serde_json::Value::String(s)) => {
            Some(parse_monomial(&eps, s).map_err(|e| FixtureError(e.to_string()))?)
        }
        Some(_) => return Err(err("missing must be a string")),
    };
    Ok(Fixture {
        name: name.to_string(),
        eps,
        hw,
        expected_status,
        terms,
        edges,
        missing,
    })
}

/// The full catalog, in a fixed order.
pub fn all_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for src in FIXTURE_SOURCES {
        let v: serde_json::Value = serde_json::from_str(src).expect("embedded fixture JSON parses");
        if let Some(list) = v.get("fixtures").and_then(|x| x.as_array()) {
            for item in list {
                out.push(parse_fixture(item).expect("embedded fixture is well-formed"));
            }
        } else {
            out.push(parse_fixture(&v).expect("embedded fixture is well-formed"));
        }
    }
    out
}

/// Look up a fixture by name.
pub fn fixture(name: &str) -> Result<Fixture, FixtureError> {
    all_fixtures()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| FixtureError(format!("unknown fixture '{name}'")))
}

/// Structural validation that does not involve the engine: every expected
/// term lies in the `A^{-1}`-cone below the highest weight, and every
/// expected edge satisfies `to = from * A[i,a]^{-1}`.
pub fn validate_fixture(f: &Fixture) -> Result<(), FixtureError> {
    for (m, _) in f.terms.terms() {
        if cone_height(&f.eps, &f.hw, m).is_none() {
            return Err(FixtureError(format!(
                "{}: term {} is not in the cone below {}",
                f.name,
                m.format_canonical(),
                f.hw.format_canonical()
            )));
        }
    }
    if let Some(edges) = &f.edges {
        for e in edges {
            let step =
                a_inverse(&f.eps, e.node, e.a).map_err(|err| FixtureError(err.to_string()))?;
            if e.from.mul(&step) != e.to {
                return Err(FixtureError(format!(
                    "{}: edge {} --({},{})--> {} is inconsistent",
                    f.name,
                    e.from.format_canonical(),
                    e.node,
                    e.a,
                    e.to.format_canonical()
                )));
            }
        }
    }
    Ok(())
}

/// Run the engine on a fixture and compare. Returns a list of discrepancy
/// descriptions; empty means pass.
pub fn check_fixture(f: &Fixture) -> Vec<String> {
    let mut problems = Vec::new();
    if let Err(e) = validate_fixture(f) {
        problems.push(e.to_string());
    }
    let result = match fm::run(&f.eps, &f.hw, Limits::default()) {
        Ok(r) => r,
        Err(e) => {
            problems.push(format!("{}: engine rejected input: {e}", f.name));
            return problems;
        }
    };
    match (&f.expected_status, &result.status) {
        (ExpectedStatus::Success, FMStatus::Success) => {}
        (
            ExpectedStatus::Failed { at, direction },
            FMStatus::Failed {
                at: ga,
                direction: gd,
            },
        ) => {
            if at != ga || direction != gd {
                problems.push(format!(
                    "{}: failed at {} direction {}, expected {} direction {}",
                    f.name,
                    ga.format_canonical(),
                    gd,
                    at.format_canonical(),
                    direction
                ));
            }
        }
        (want, got) => {
            problems.push(format!("{}: status {:?}, expected {:?}", f.name, got, want));
        }
    }
    if result.qchar != f.terms {
        problems.push(format!(
            "{}: character mismatch ({} terms computed, {} expected)",
            f.name,
            result.qchar.len(),
            f.terms.len()
        ));
    }
    if let Some(edges) = &f.edges {
        if &result.edges != edges {
            problems.push(format!(
                "{}: edge set mismatch ({} computed, {} expected)",
                f.name,
                result.edges.len(),
                edges.len()
            ));
        }
    }
    if let Some(missing) = &f.missing {
        if result.qchar.mult_of(missing) != 0 {
            problems.push(format!(
                "{}: the ell-weight {} must not be produced",
                f.name,
                missing.format_canonical()
            ));
        }
    }
    problems
}

/// Highest ell-weight of the module extending the single-column module
/// `V(1^i)_a`: `Y[i, (-1)^{i+1+M} q^{N-M} a]`.
pub fn fund_lweight_of_column(
    eps: &EpsilonSeq,
    i: usize,
    a: Spec,
) -> Result<Monomial, FixtureError> {
    let m = eps.m();
    let n1 = eps.n1();
    if i < 1 || i > m {
        return Err(FixtureError(format!(
            "column height {i} out of range 1..={m}"
        )));
    }
    let mut param = a.mul_q(n1 as i64 - m as i64);
    if (i + 1 + m) % 2 == 1 {
        param = param.neg();
    }
    let mut mono = Monomial::one();
    mono.mul_var(eps, VarKey::Y(i, param), 1)
        .map_err(|e| FixtureError(e.to_string()))?;
    Ok(mono)
}

/// Highest ell-weight of the dual `V(-i)_a`: `Yt[n-i, (-1)^{n-i+1} q^{2N-2M} a]`.
pub fn fund_lweight_of_dual(eps: &EpsilonSeq, i: usize, a: Spec) -> Result<Monomial, FixtureError> {
    let n = eps.len();
    let m = eps.m();
    let n1 = eps.n1();
    if i < 1 || n - i < m || n - i > eps.nodes() {
        return Err(FixtureError(format!("dual index {i} out of range")));
    }
    let mut param = a.mul_q(2 * (n1 as i64 - m as i64));
    if (n - i + 1) % 2 == 1 {
        param = param.neg();
    }
    let mut mono = Monomial::one();
    mono.mul_var(eps, VarKey::Yt(n - i, param), 1)
        .map_err(|e| FixtureError(e.to_string()))?;
    Ok(mono)
}
