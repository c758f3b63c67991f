use std::collections::BTreeMap;

use permlat::butler::{
    diagram_of, is_reduced, lattice_of, pred_coinvariants_lattice, pred_coinvariants_perm, pred_invariants_perm,
    pred_perm, Diagram, PredicateOutcome, Q_COINV_LATTICE, Q_COINV_PERM, Q_INVARIANTS, Q_PERM,
};
use permlat::glattice::{
    coinvariants, cyclic_type, fixed_points, is_perm, is_perm_recursive, perm_rank_obstruction, GLattice, PermReport,
    Verdict, TAG_CYCLIC, TAG_RECURSIVE,
};
use permlat::group::{BlockIndex, GroupSpec, Subgroup, SubgroupId};
use serde::Serialize;

use crate::io::{CliError, CliResult};

const Q_VALID: &str = "valid";
const Q_REDUCED: &str = "reduced";

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub question: String,
    /// "diagram" or "matrix".
    pub route: String,
    pub operation: String,
    pub tag: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub input_digest: String,
    pub kind: String,
    pub group: String,
    pub subgroup: Option<String>,
    pub entries: Vec<CheckEntry>,
    pub consistent: bool,
    pub disagreements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl CheckReport {
    pub fn render_text(&self) -> String {
        let mut s = format!("input {}\nkind {}, group {}", self.input_digest, self.kind, self.group);
        if let Some(n) = &self.subgroup {
            s.push_str(&format!(", N = {n}"));
        }
        s.push('\n');
        for e in &self.entries {
            s.push_str(&format!(
                "{:<18} {:<8} {:<13} {} [{}]",
                e.question,
                e.route,
                e.verdict.as_str(),
                e.operation,
                e.tag
            ));
            if !e.detail.is_empty() {
                s.push_str(&format!(": {}", e.detail));
            }
            s.push('\n');
        }
        if self.consistent {
            s.push_str("routes consistent\n");
        } else {
            for d in &self.disagreements {
                s.push_str(&format!("DISAGREEMENT: {d}\n"));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            s.push_str(&format!("elapsed {ms} ms\n"));
        }
        s
    }
}

fn entry(question: &str, route: &str, operation: &str, tag: &str, verdict: Verdict, detail: impl Into<String>) -> CheckEntry {
    CheckEntry {
        question: question.into(),
        route: route.into(),
        operation: operation.into(),
        tag: tag.into(),
        verdict,
        detail: detail.into(),
    }
}

fn from_perm(question: &str, operation: &str, tag: &str, r: &PermReport) -> CheckEntry {
    let detail = match (&r.failed, &r.decomposition) {
        (Some(f), _) => f.strip_prefix(&format!("{tag}: ")).unwrap_or(f).to_string(),
        (None, Some(d)) => d.iter().map(|o| format!("{}x G/{}", o.multiplicity, o.stabilizer)).collect::<Vec<_>>().join(" + "),
        _ => String::new(),
    };
    entry(question, "matrix", operation, tag, r.verdict, detail)
}

fn from_pred(question: &str, operation: &str, o: &PredicateOutcome) -> CheckEntry {
    entry(question, "diagram", operation, o.tag, Verdict::from_bool(o.holds), o.detail.clone())
}

fn perm_tag(g: &GroupSpec) -> &'static str {
    if g.rank() == 1 {
        TAG_CYCLIC
    } else {
        TAG_RECURSIVE
    }
}

/// Parses `--N`; defaults to the first generator.
pub fn parse_subgroup(g: &GroupSpec, word: Option<&str>) -> CliResult<SubgroupId> {
    let e = match word {
        Some(w) => g.parse_word(w)?,
        None => g.generator(0),
    };
    if e.iter().all(|&x| x == 0) {
        return Err(CliError::Input("N must be generated by a non-identity element".into()));
    }
    Ok(SubgroupId::new(g, &e)?)
}

fn matrix_route(lat: &GLattice, n: &Subgroup) -> CliResult<Vec<CheckEntry>> {
    let g = lat.group();
    let mut out = Vec::new();
    let (_, inv) = fixed_points(lat, n)?.induced.restrict_to_quotient(n)?;
    out.push(from_perm(Q_INVARIANTS, "is_perm(U^N)", perm_tag(inv.group()), &is_perm(&inv)?));
    let co = coinvariants(lat, n)?;
    let torsion: Vec<String> = co.structure.torsion.iter().map(|t| t.to_string()).collect();
    out.push(entry(
        Q_COINV_LATTICE,
        "matrix",
        "coinvariants(U, N)",
        "coinvariant-torsion",
        Verdict::from_bool(co.is_lattice()),
        if torsion.is_empty() { "torsion-free".to_string() } else { format!("torsion {}", torsion.join(", ")) },
    ));
    match &co.lattice {
        Some(l) => {
            let (_, q) = l.restrict_to_quotient(n)?;
            out.push(from_perm(Q_COINV_PERM, "is_perm(U_N)", perm_tag(q.group()), &is_perm(&q)?));
        }
        None => out.push(entry(Q_COINV_PERM, "matrix", "is_perm(U_N)", perm_tag(g), Verdict::No, "U_N is not a lattice")),
    }
    out.push(from_perm(Q_PERM, "is_perm_recursive(U, N)", TAG_RECURSIVE, &is_perm_recursive(lat, n)?));
    let obs = perm_rank_obstruction(lat)?;
    // one-sided: only a "no" carries information
    let v = if obs.verdict == Verdict::No { Verdict::No } else { Verdict::Inconclusive };
    let mut e = from_perm(Q_PERM, "perm_rank_obstruction(U)", permlat::glattice::TAG_RANKS, &obs);
    e.verdict = v;
    out.push(e);
    Ok(out)
}

fn diagram_route(d: &Diagram, n: &BlockIndex) -> CliResult<Vec<CheckEntry>> {
    let mut out = vec![from_pred(Q_INVARIANTS, "pred_invariants_perm", &pred_invariants_perm(d, n)?)];
    let cl = pred_coinvariants_lattice(d, n)?;
    out.push(from_pred(Q_COINV_LATTICE, "pred_coinvariants_lattice", &cl));
    if cl.holds {
        out.push(from_pred(Q_COINV_PERM, "pred_coinvariants_perm", &pred_coinvariants_perm(d, n)?));
    } else {
        out.push(entry(
            Q_COINV_PERM,
            "diagram",
            "pred_coinvariants_perm",
            permlat::butler::TAG_COINV_PERM,
            Verdict::Inconclusive,
            "not applicable: U_N is not a lattice",
        ));
    }
    out.push(from_pred(Q_PERM, "pred_perm", &pred_perm(d)));
    Ok(out)
}

fn consistency(entries: &[CheckEntry]) -> Vec<String> {
    let mut by_q: BTreeMap<&str, Vec<&CheckEntry>> = BTreeMap::new();
    for e in entries {
        by_q.entry(e.question.as_str()).or_default().push(e);
    }
    let mut out = Vec::new();
    for (q, es) in by_q {
        let definite: Vec<&&CheckEntry> = es.iter().filter(|e| e.verdict != Verdict::Inconclusive).collect();
        if let Some(first) = definite.first() {
            for e in &definite[1..] {
                if e.verdict != first.verdict {
                    out.push(format!(
                        "{q}: {} says {}, {} says {}",
                        first.operation,
                        first.verdict.as_str(),
                        e.operation,
                        e.verdict.as_str()
                    ));
                }
            }
        }
    }
    out
}

fn finish(digest: String, kind: &str, group: &GroupSpec, n: Option<&Subgroup>, entries: Vec<CheckEntry>) -> CheckReport {
    let disagreements = consistency(&entries);
    CheckReport {
        input_digest: digest,
        kind: kind.into(),
        group: group.to_string(),
        subgroup: n.map(|s| s.describe(group)),
        consistent: disagreements.is_empty(),
        disagreements,
        entries,
        elapsed_ms: None,
    }
}

pub fn check_lattice(lat: &GLattice, digest: String, word: Option<&str>) -> CliResult<CheckReport> {
    let g = lat.group().clone();
    let v = lat.violations();
    let mut entries = vec![entry(Q_VALID, "matrix", "validate", "group-relations", Verdict::from_bool(v.is_empty()), v.join("; "))];
    if !v.is_empty() {
        return Ok(finish(digest, "lattice", &g, None, entries));
    }
    if g.rank() == 1 {
        let ty = cyclic_type(lat)?;
        let perm = permlat::glattice::is_perm_cyclic(lat)?;
        let mut e = from_perm(Q_PERM, "is_perm_cyclic(U)", TAG_CYCLIC, &perm);
        e.detail = format!("Heller-Reiner type ({}, {}, {}); {}", ty.a, ty.b, ty.c, e.detail);
        entries.push(e);
        return Ok(finish(digest, "lattice", &g, None, entries));
    }
    let id = parse_subgroup(&g, word)?;
    let n = id.subgroup(&g);
    let mut diagram = None;
    if g.rank() == 2 {
        let r = is_reduced(lat)?;
        entries.push(entry(
            Q_REDUCED,
            "matrix",
            "is_reduced",
            "reduced-lattice",
            Verdict::from_bool(r.reduced),
            r.reason.unwrap_or_default(),
        ));
        if r.reduced {
            diagram = Some(diagram_of(lat, true)?.diagram);
        }
    }
    entries.extend(matrix_route(lat, &n)?);
    if let Some(d) = &diagram {
        entries.extend(diagram_route(d, &BlockIndex::Sub(id))?);
    }
    Ok(finish(digest, "lattice", &g, Some(&n), entries))
}

pub fn check_diagram(d: &Diagram, digest: String, word: Option<&str>) -> CliResult<CheckReport> {
    let g = d.group().clone();
    let v = d.violations();
    let mut entries =
        vec![entry(Q_VALID, "diagram", "validate_diagram", "diagram-axioms", Verdict::from_bool(v.is_empty()), v.join("; "))];
    let id = parse_subgroup(&g, word)?;
    let n = id.subgroup(&g);
    if !v.is_empty() {
        return Ok(finish(digest, "diagram", &g, Some(&n), entries));
    }
    let lat = lattice_of(d)?.lattice;
    entries.extend(diagram_route(d, &BlockIndex::Sub(id))?);
    entries.extend(matrix_route(&lat, &n)?);
    Ok(finish(digest, "diagram", &g, Some(&n), entries))
}

/// A report fails when the input is invalid or two routes disagree.
pub fn report_ok(r: &CheckReport) -> bool {
    r.consistent && r.entries.iter().filter(|e| e.question == Q_VALID).all(|e| e.verdict == Verdict::Yes)
}
