//! The odd-prime family of diagrams, the two printed lattices, the small
//! `F_2` diagram, and checks of the stated properties of each.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::butler::{
    compare_routes, diagram_iso, diagram_of, is_reduced, lattice_of, lattice_route, perm_upstairs,
    pred_coinvariants_lattice, Diagram, RouteComparison,
};
use crate::error::{Error, Result};
use crate::fp_modules::FpModule;
use crate::glattice::{
    coinvariants, fixed_points, is_perm, is_perm_recursive, perm_rank_obstruction, GLattice, PermReport, Verdict,
};
use crate::group::{is_prime, BlockIndex, GroupSpec, SubgroupId};
use crate::json::lattice_from_json;
use crate::linalg::{inv_mod, FpMatrix, Subspace};

pub const P3_FIXTURE: &str = "oddp_p3_lattice.json";
pub const C2CUBE_FIXTURE: &str = "c2cube_lattice.json";

const P3_DATA: &str = include_str!("../data/oddp_p3_lattice.json");
const C2CUBE_DATA: &str = include_str!("../data/c2cube_lattice.json");
const P3_SHA256: &str = "80e0c47bc24e5bce98d7be4c6cbc9fb9131dd8ca7429e99ace0d642aa01fa84b";
const C2CUBE_SHA256: &str = "d5dfa4cc71d9ed656bc7c4503e8d6adf239bd45792dd6ec1b60f709a385ee60a";

/// Largest prime accepted by [`verify_oddp`].
pub const VERIFY_MAX_P: u64 = 7;

#[derive(Clone, Debug)]
pub struct OddPExample {
    pub p: u64,
    /// `k_j` with `(j - 3) k_j = 1 mod p`, for `4 <= j <= p + 2`.
    pub k_values: BTreeMap<usize, u64>,
    pub diagram: Diagram,
}

/// The diagram on `v_1, ..., v_(p+2)` for an odd prime `p`.
pub fn gen_oddp(p: u64) -> Result<OddPExample> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Precondition(format!("the family needs an odd prime, got {p}")));
    }
    let g = GroupSpec::standard(p, 2)?;
    let dim = p as usize + 2;
    let k_values: BTreeMap<usize, u64> = (4..=dim).map(|j| (j, inv_mod((j as u64 - 3) % p, p))).collect();
    let k = |j: usize| k_values[&j];
    // v_j is column j - 1
    let neg = |x: u64| (p - x % p) % p;
    let mut n = FpMatrix::identity(p, dim);
    let mut c = FpMatrix::identity(p, dim);
    for j in 3..=dim {
        n.set(0, j - 1, 1);
    }
    c.set(0, 1, 1);
    for j in 4..=dim {
        c.set(0, j - 1, neg(k(j)));
    }
    let module = FpModule::new(g.clone(), dim, vec![n, c])?;
    let v = |coeffs: &[(usize, u64)]| {
        let mut x = vec![0; dim];
        for &(j, a) in coeffs {
            x[j - 1] = (x[j - 1] + a) % p;
        }
        x
    };
    let mut v0 = vec![v(&[(1, 1)]), v(&[(2, 1), (3, p - 1), (4, 1)])];
    for j in 4..=dim - 1 {
        v0.push(v(&[(2, (k(j + 1) + p - k(j)) % p), (j, p - 1), (j + 1, 1)]));
    }
    let mut subs: BTreeMap<BlockIndex, Vec<Vec<u64>>> = BTreeMap::new();
    subs.insert(BlockIndex::Zero, v0);
    subs.insert(BlockIndex::Sub(SubgroupId::new(&g, &[1, 0])?), vec![v(&[(1, 1)]), v(&[(2, 1)])]);
    subs.insert(BlockIndex::Sub(SubgroupId::new(&g, &[0, 1])?), vec![v(&[(1, 1)]), v(&[(3, 1)])]);
    for a in 1..p {
        subs.insert(BlockIndex::Sub(SubgroupId::new(&g, &[1, a])?), vec![v(&[(1, 1)]), v(&[(a as usize + 3, 1)])]);
    }
    let order = crate::group::block_indices(&g)?;
    let subspaces = order.iter().map(|i| Subspace::from_vectors(p, dim, &subs[i])).collect();
    let diagram = Diagram::validated(module, subspaces)?;
    Ok(OddPExample { p, k_values, diagram })
}

/// The `F_2` diagram with `V_(0) = <(1,1)>`, `V_(N) = 0`, `V_(C) = <(1,0)>`,
/// `V_(nc) = <(0,1)>` and trivial action.
pub fn fixture_torsion_coinvariants() -> Diagram {
    let g = GroupSpec::standard(2, 2).expect("prime");
    let s = |vs: &[Vec<u64>]| Subspace::from_vectors(2, 2, vs);
    // canonical order: 0, N, C, nc
    let subspaces = vec![s(&[vec![1, 1]]), s(&[]), s(&[vec![1, 0]]), s(&[vec![0, 1]])];
    Diagram::validated(FpModule::trivial(&g, 2), subspaces).expect("valid diagram")
}

/// A printed lattice loaded from JSON.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub sha256: String,
    pub checksum_ok: bool,
    pub lattice: GLattice,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn embedded(name: &str) -> Result<(&'static str, &'static str)> {
    match name {
        P3_FIXTURE => Ok((P3_DATA, P3_SHA256)),
        C2CUBE_FIXTURE => Ok((C2CUBE_DATA, C2CUBE_SHA256)),
        _ => Err(Error::Precondition(format!("unknown fixture {name:?}"))),
    }
}

/// Loads a fixture from `data_dir`, or the embedded copy when `None`.
///
/// The embedded copy must match its checksum. A file from `data_dir` is
/// parsed even when its checksum differs; the mismatch is recorded and
/// group validation is left to the caller.
pub fn load_fixture(name: &str, data_dir: Option<&Path>) -> Result<Fixture> {
    let (data, want) = embedded(name)?;
    let text = match data_dir {
        None => data.to_string(),
        Some(dir) => std::fs::read_to_string(dir.join(name))
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", dir.join(name).display())))?,
    };
    let sha = sha256_hex(text.as_bytes());
    let checksum_ok = sha == want;
    if data_dir.is_none() && !checksum_ok {
        return Err(Error::Invariant(format!("embedded fixture {name} does not match its checksum")));
    }
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
    let lattice = lattice_from_json(&value)?;
    Ok(Fixture { name: name.to_string(), sha256: sha, checksum_ok, lattice })
}

/// The printed rank-11 lattice for `p = 3`, validated.
pub fn fixture_p3() -> Result<GLattice> {
    let lat = load_fixture(P3_FIXTURE, None)?.lattice;
    lat.validate()?;
    Ok(lat)
}

/// The printed rank-11 lattice for `C_2^3`, validated.
pub fn fixture_c2cube() -> Result<GLattice> {
    let lat = load_fixture(C2CUBE_FIXTURE, None)?.lattice;
    lat.validate()?;
    Ok(lat)
}

/// One checked statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Informational claims are reported but do not fail a report.
    pub required: bool,
}

impl Claim {
    pub fn check(name: impl Into<String>, expected: impl ToString, observed: impl ToString) -> Self {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        Claim { name: name.into(), pass: expected == observed, expected, observed, required: true }
    }

    pub fn info(name: impl Into<String>, expected: impl ToString, observed: impl ToString) -> Self {
        Claim { required: false, ..Self::check(name, expected, observed) }
    }
}

pub fn all_pass(claims: &[Claim]) -> bool {
    claims.iter().all(|c| c.pass || !c.required)
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pattern(vs: &[Verdict]) -> String {
    vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
}

const EXPECTED_PATTERN: &str = "yes,yes,yes,no";

#[derive(Clone, Debug, Serialize)]
pub struct OddPReport {
    pub p: u64,
    pub rank: usize,
    pub routes: Vec<RouteComparison>,
    pub claims: Vec<Claim>,
}

impl OddPReport {
    pub fn pass(&self) -> bool {
        all_pass(&self.claims)
    }
}

fn n_index(g: &GroupSpec) -> Result<BlockIndex> {
    Ok(BlockIndex::Sub(SubgroupId::new(g, &g.generator(0))?))
}

/// Runs the four diagram predicates and their lattice counterparts on the
/// lattice of `gen_oddp(p)` with `N = <n>`.
pub fn verify_oddp(p: u64) -> Result<OddPReport> {
    if p > VERIFY_MAX_P {
        return Err(Error::Unsupported(format!("verification is limited to p <= {VERIFY_MAX_P}")));
    }
    let ex = gen_oddp(p)?;
    let g = ex.diagram.group().clone();
    let n = n_index(&g)?;
    let lat = lattice_of(&ex.diagram)?.lattice;
    let routes = compare_routes(&ex.diagram, &lat, &n)?;
    let diag: Vec<Verdict> =
        routes.iter().map(|r| r.diagram.map(Verdict::from_bool).unwrap_or(Verdict::Inconclusive)).collect();
    let mat: Vec<Verdict> = routes.iter().map(|r| r.lattice).collect();
    let mut claims = vec![
        Claim::check("diagram is valid", "yes", yn(ex.diagram.violations().is_empty())),
        Claim::check("rank p^2 + p - 1", p * p + p - 1, lat.rank()),
        Claim::check("lattice is reduced", "yes", yn(is_reduced(&lat)?.reduced)),
        Claim::check("diagram route pattern", EXPECTED_PATTERN, pattern(&diag)),
        Claim::check("lattice route pattern", EXPECTED_PATTERN, pattern(&mat)),
    ];
    claims.push(Claim::check("routes agree", "yes", yn(routes.iter().all(|r| r.agrees()))));
    Ok(OddPReport { p, rank: lat.rank(), routes, claims })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureP3Report {
    pub claims: Vec<Claim>,
}

/// Lattice-route pattern on the printed `p = 3` lattice, and comparison of
/// its diagram with `gen_oddp(3)`.
pub fn verify_fixture_p3(lat: &GLattice) -> Result<FixtureP3Report> {
    let g = lat.group().clone();
    let mut claims = vec![Claim::check("rank", 11, lat.rank())];
    let n = n_index(&g)?;
    claims.push(Claim::check("lattice route pattern", EXPECTED_PATTERN, pattern(&lattice_route(lat, &n)?)));
    let gen = gen_oddp(3)?.diagram;
    match diagram_of(lat, true) {
        Ok(ex) => {
            claims.push(Claim::check(
                "dimension vector matches the generated diagram",
                format!("{:?}", gen.dimension_vector()),
                format!("{:?}", ex.diagram.dimension_vector()),
            ));
            let iso = diagram_iso(&gen, &ex.diagram)?;
            claims.push(Claim::info("isomorphic to the generated diagram", "yes", yn(iso.map.is_some())));
        }
        Err(e) => claims.push(Claim::check("diagram extraction", "ok", e)),
    }
    Ok(FixtureP3Report { claims })
}

/// Verdicts for `U^N`, `U_N` and `U` with one choice of `N`.
#[derive(Clone, Debug, Serialize)]
pub struct C2CubeAttempt {
    pub n: String,
    pub invariants: Verdict,
    pub coinvariants: Verdict,
    pub whole: Verdict,
    /// Failed condition of the recursive test on `U`.
    pub whole_failure: Option<String>,
}

impl C2CubeAttempt {
    pub fn realizes(&self) -> bool {
        self.invariants == Verdict::Yes && self.coinvariants == Verdict::Yes && self.whole == Verdict::No
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct C2CubeReport {
    pub attempts: Vec<C2CubeAttempt>,
    pub obstruction: PermReport,
    pub claims: Vec<Claim>,
}

impl C2CubeReport {
    pub fn pass(&self) -> bool {
        all_pass(&self.claims)
    }
}

fn c2cube_attempt(lat: &GLattice, id: &SubgroupId) -> Result<C2CubeAttempt> {
    let g = lat.group();
    let ns = id.subgroup(g);
    let (_, inv) = fixed_points(lat, &ns)?.induced.restrict_to_quotient(&ns)?;
    let invariants = is_perm(&inv)?.verdict;
    let co = coinvariants(lat, &ns)?;
    let coinvariants = match &co.lattice {
        Some(l) => is_perm(&l.restrict_to_quotient(&ns)?.1)?.verdict,
        None => Verdict::No,
    };
    let rep = is_perm_recursive(lat, &ns)?;
    Ok(C2CubeAttempt { n: ns.describe(g), invariants, coinvariants, whole: rep.verdict, whole_failure: rep.failed })
}

/// Tries `N = <n>` and falls back to the other subgroups of order 2.
pub fn verify_c2cube(lat: &GLattice) -> Result<C2CubeReport> {
    let g = lat.group().clone();
    if g.p() != 2 || g.rank() != 3 {
        return Err(Error::Precondition(format!("expected C_2^3, got {g}")));
    }
    let mut claims = vec![
        Claim::check("rank", 11, lat.rank()),
        Claim::check("group relations", "yes", yn(lat.violations().is_empty())),
    ];
    let first = SubgroupId::new(&g, &g.generator(0))?;
    let mut order = vec![first.clone()];
    order.extend(g.subgroups_order_p().into_iter().filter(|id| *id != first));
    let mut attempts = Vec::new();
    for id in order {
        let a = c2cube_attempt(lat, &id)?;
        let done = a.realizes();
        attempts.push(a);
        if done {
            break;
        }
    }
    let hit = attempts.iter().find(|a| a.realizes());
    claims.push(Claim::check("some N gives the pattern yes,yes,no", "yes", yn(hit.is_some())));
    claims.push(Claim::info("N used", "<n>", hit.map(|a| a.n.clone()).unwrap_or_else(|| "none".into())));
    let obstruction = perm_rank_obstruction(lat)?;
    Ok(C2CubeReport { attempts, obstruction, claims })
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionCoinvariantsReport {
    pub claims: Vec<Claim>,
}

/// The small `F_2` diagram: `U_N` is not a lattice although `I_G U` equals
/// `U ∩ ⊕ F_(H)`.
pub fn verify_torsion_coinvariants() -> Result<TorsionCoinvariantsReport> {
    let d = fixture_torsion_coinvariants();
    let g = d.group().clone();
    let n = n_index(&g)?;
    let b = lattice_of(&d)?;
    let ns = n.subgroup(&g).expect("order p");
    let claims = vec![
        Claim::check("diagram is valid", "yes", yn(d.violations().is_empty())),
        Claim::check("U_N lattice (diagram)", "no", yn(pred_coinvariants_lattice(&d, &n)?.holds)),
        Claim::check("U_N lattice (matrix)", "no", yn(coinvariants(&b.lattice, &ns)?.is_lattice())),
        Claim::check("I_G U = U ∩ ⊕ F_(H)", "yes", yn(perm_upstairs(&b)?.equal)),
    ];
    Ok(TorsionCoinvariantsReport { claims })
}
