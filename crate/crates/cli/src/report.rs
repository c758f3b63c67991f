use std::path::Path;

use permlat::examples::{
    load_fixture, verify_c2cube, verify_fixture_p3, verify_oddp, verify_torsion_coinvariants, Claim, C2CUBE_FIXTURE, P3_FIXTURE,
};
use permlat::glattice::GLattice;
use serde::Serialize;

use crate::io::CliResult;

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExamplesReport {
    pub pass: bool,
    pub first_failure: Option<String>,
    pub sections: Vec<Section>,
}

impl ExamplesReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for sec in &self.sections {
            s.push_str(&format!("== {}\n", sec.name));
            for c in &sec.claims {
                let mark = match (c.pass, c.required) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "NOTE",
                };
                s.push_str(&format!("[{mark}] {}: expected {}, observed {}\n", c.name, c.expected, c.observed));
            }
        }
        s.push_str(if self.pass { "all claims verified\n" } else { "verification FAILED\n" });
        s
    }
}

fn section(name: &str, claims: Vec<Claim>, report: Option<serde_json::Value>) -> Section {
    Section { name: name.into(), claims, report }
}

fn to_value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("serializable")
}

/// Loads and validates a fixture. The lattice is returned only when it
/// satisfies the group relations.
fn fixture(name: &str, data_dir: Option<&Path>) -> CliResult<(Section, Option<GLattice>)> {
    let f = load_fixture(name, data_dir)?;
    let v = f.lattice.violations();
    let claims = vec![
        Claim::info("checksum", "match", if f.checksum_ok { "match".to_string() } else { f.sha256.clone() }),
        Claim::check("validate", "ok", if v.is_empty() { "ok".to_string() } else { v.join("; ") }),
    ];
    let lat = v.is_empty().then_some(f.lattice);
    Ok((section(&format!("fixture {name}"), claims, None), lat))
}

pub fn verify_examples(data_dir: Option<&Path>) -> CliResult<ExamplesReport> {
    let mut sections = Vec::new();
    let (sec, p3) = fixture(P3_FIXTURE, data_dir)?;
    sections.push(sec);
    let (sec, cube) = fixture(C2CUBE_FIXTURE, data_dir)?;
    sections.push(sec);

    for p in [3, 5] {
        let r = verify_oddp(p)?;
        sections.push(section(&format!("odd-p family, p = {p}"), r.claims.clone(), Some(to_value(&r.routes))));
    }
    if let Some(lat) = &p3 {
        let r = verify_fixture_p3(lat)?;
        sections.push(section("printed p = 3 lattice", r.claims, None));
    }
    if let Some(lat) = &cube {
        let r = verify_c2cube(lat)?;
        let extra = serde_json::json!({ "attempts": r.attempts, "rank_obstruction": r.obstruction });
        sections.push(section("C_2^3 lattice", r.claims, Some(extra)));
    }
    let r = verify_torsion_coinvariants()?;
    sections.push(section("diagram with torsion coinvariants", r.claims, None));

    let first_failure = sections.iter().find_map(|s| {
        s.claims
            .iter()
            .find(|c| c.required && !c.pass)
            .map(|c| format!("{}: {}: expected {}, observed {}", s.name, c.name, c.expected, c.observed))
    });
    Ok(ExamplesReport { pass: first_failure.is_none(), first_failure, sections })
}
