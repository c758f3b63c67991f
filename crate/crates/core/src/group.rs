//! Elementary abelian p-groups `C_p^k`, written additively as exponent
//! vectors over `F_p`, together with their subgroups and quotients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};

/// Exponent vector of a group element with respect to the named generators.
pub type Element = Vec<u64>;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    p: u64,
    names: Vec<String>,
}

impl GroupSpec {
    pub fn new(p: u64, names: Vec<String>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || !a.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(Error::Parse(format!("generator name {a:?} must be lowercase letters")));
            }
            if names[..i].contains(a) {
                return Err(Error::Parse(format!("duplicate generator name {a:?}")));
            }
        }
        Ok(GroupSpec { p, names })
    }

    /// `C_p^k` with the conventional generator names (`n, c` and `n, b, c`).
    pub fn standard(p: u64, k: usize) -> Result<Self> {
        let names: Vec<String> = match k {
            1 => vec!["n".into()],
            2 => vec!["n".into(), "c".into()],
            3 => vec!["n".into(), "b".into(), "c".into()],
            _ => (1..=k).map(|i| format!("g{}", "abcdefghij".chars().nth(i % 10).unwrap())).collect(),
        };
        Self::new(p, names)
    }

    pub fn cyclic(p: u64, name: &str) -> Result<Self> {
        Self::new(p, vec![name.to_string()])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.rank() as u32)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn identity(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.identity();
        e[i] = 1;
        e
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn inverse(&self, a: &[u64]) -> Element {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> Vec<Element> {
        let k = self.rank();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; k];
        loop {
            out.push(cur.clone());
            let mut t = k;
            loop {
                if t == 0 {
                    return out;
                }
                t -= 1;
                cur[t] += 1;
                if cur[t] < self.p {
                    break;
                }
                cur[t] = 0;
            }
        }
    }

    /// Word such as `nc^2` for `n * c^2`; the identity is `1`.
    pub fn format_word(&self, e: &[u64]) -> String {
        let mut s = String::new();
        for (name, &x) in self.names.iter().zip(e) {
            match x {
                0 => {}
                1 => s.push_str(name),
                _ => s.push_str(&format!("{name}^{x}")),
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }

    /// Parses a generator word (`n`, `nc^2`, `b^1c`, `1`).
    pub fn parse_word(&self, w: &str) -> Result<Element> {
        let mut e = self.identity();
        let w = w.trim();
        if w == "1" {
            return Ok(e);
        }
        let mut rest = w;
        while !rest.is_empty() {
            // longest generator name that prefixes the remainder
            let hit = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            let Some((i, name)) = hit else {
                return Err(Error::Parse(format!("cannot parse word {w:?} over generators {:?}", self.names)));
            };
            rest = &rest[name.len()..];
            let mut exp = 1u64;
            if let Some(r) = rest.strip_prefix('^') {
                let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                if digits.is_empty() {
                    return Err(Error::Parse(format!("missing exponent in {w:?}")));
                }
                exp = digits.parse().map_err(|_| Error::Parse(format!("bad exponent in {w:?}")))?;
                rest = &r[digits.len()..];
            }
            e[i] = (e[i] + exp) % self.p;
        }
        Ok(e)
    }

    /// The normalized generators of all subgroups of order p.
    pub fn subgroups_order_p(&self) -> Vec<SubgroupId> {
        self.elements()
            .into_iter()
            .filter(|e| e.iter().find(|&&x| x != 0) == Some(&1))
            .map(SubgroupId)
            .collect()
    }

    /// Every subgroup, ordered by order and then by reduced basis.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let k = self.rank();
        let mut out = vec![Subgroup::trivial(self)];
        for d in 1..=k {
            let mut found: Vec<Subgroup> = Vec::new();
            for pivots in combinations(k, d) {
                // free slots: (row, col) with col > pivot[row] and col not a pivot
                let slots: Vec<(usize, usize)> = (0..d)
                    .flat_map(|r| {
                        let piv = pivots.clone();
                        ((pivots[r] + 1)..k).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
                    })
                    .collect();
                let total = self.p.pow(slots.len() as u32);
                for code in 0..total {
                    let mut rows = vec![vec![0u64; k]; d];
                    for (r, &c) in pivots.iter().enumerate() {
                        rows[r][c] = 1;
                    }
                    let mut x = code;
                    for &(r, c) in &slots {
                        rows[r][c] = x % self.p;
                        x /= self.p;
                    }
                    found.push(Subgroup::from_generators(self, &rows));
                }
            }
            found.sort_by(|a, b| a.basis.cmp(&b.basis));
            out.extend(found);
        }
        out
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(self)
    }

    /// The quotient `G/H` with generators the coordinates not pivotal for
    /// `H`, so for `H = <n>` in `<n> x <c>` the quotient is generated by `c`.
    pub fn quotient(&self, h: &Subgroup) -> QuotientGroup {
        let comp: Vec<usize> = (0..self.rank()).filter(|c| !h.pivots().contains(c)).collect();
        let names = comp.iter().map(|&c| self.names[c].clone()).collect();
        let group = GroupSpec { p: self.p, names };
        let lifts = comp.iter().map(|&c| self.generator(c)).collect();
        QuotientGroup { group, lifts, subgroup: h.clone(), complement: comp }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}^{} <{}>", self.p, self.rank(), self.names.join(", "))
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Order-p subgroup, identified by its generator normalized so that the
/// first nonzero exponent is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SubgroupId(Vec<u64>);

impl SubgroupId {
    pub fn new(g: &GroupSpec, e: &[u64]) -> Result<Self> {
        if e.len() != g.rank() {
            return Err(Error::Dimension(format!("element of length {} in a rank {} group", e.len(), g.rank())));
        }
        let Some(&lead) = e.iter().find(|&&x| x % g.p() != 0) else {
            return Err(Error::Precondition("the identity does not generate a subgroup of order p".into()));
        };
        let inv = crate::linalg::inv_mod(lead % g.p(), g.p());
        Ok(SubgroupId(e.iter().map(|x| x % g.p() * inv % g.p()).collect()))
    }

    pub fn generator(&self) -> &[u64] {
        &self.0
    }

    pub fn subgroup(&self, g: &GroupSpec) -> Subgroup {
        Subgroup::from_generators(g, &[self.0.clone()])
    }
}

/// Subgroup of `C_p^k` held as a reduced echelon basis of exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    p: u64,
    rank: usize,
    basis: Vec<Vec<u64>>,
}

impl Subgroup {
    pub fn trivial(g: &GroupSpec) -> Self {
        Subgroup { p: g.p(), rank: g.rank(), basis: Vec::new() }
    }

    pub fn whole(g: &GroupSpec) -> Self {
        Self::from_generators(g, &(0..g.rank()).map(|i| g.generator(i)).collect::<Vec<_>>())
    }

    pub fn from_generators(g: &GroupSpec, gens: &[Element]) -> Self {
        let s = Subspace::from_vectors(g.p(), g.rank(), gens);
        Subgroup { p: g.p(), rank: g.rank(), basis: s.vectors() }
    }

    pub fn cyclic(g: &GroupSpec, id: &SubgroupId) -> Self {
        id.subgroup(g)
    }

    /// Minimal generating set (the reduced basis).
    pub fn generators(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.dim() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect()
    }

    pub fn contains(&self, e: &[u64]) -> bool {
        self.reduce(e).iter().all(|&x| x == 0)
    }

    /// Canonical coset representative: clear the pivot coordinates.
    pub fn reduce(&self, e: &[u64]) -> Element {
        let mut v: Vec<u64> = e.iter().map(|x| x % self.p).collect();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).unwrap();
            let f = v[c];
            if f != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = (*vi + self.p - f * ri % self.p) % self.p;
                }
            }
        }
        v
    }

    pub fn elements(&self) -> Vec<Element> {
        let d = self.dim();
        let total = self.p.pow(d as u32);
        (0..total)
            .map(|code| {
                let mut v = vec![0u64; self.rank];
                let mut x = code;
                for row in &self.basis {
                    let c = x % self.p;
                    x /= self.p;
                    for (vi, ri) in v.iter_mut().zip(row) {
                        *vi = (*vi + c * ri) % self.p;
                    }
                }
                v
            })
            .collect()
    }

    /// The subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        let s = Subspace::from_vectors(self.p, self.rank, &gens);
        Subgroup { p: self.p, rank: self.rank, basis: s.vectors() }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// The order-p id when this subgroup has order p.
    pub fn as_cyclic(&self) -> Option<SubgroupId> {
        (self.dim() == 1).then(|| SubgroupId(self.basis[0].clone()))
    }

    pub fn describe(&self, g: &GroupSpec) -> String {
        if self.is_trivial() {
            "1".into()
        } else if self.dim() == g.rank() {
            "G".into()
        } else {
            let ws: Vec<String> = self.basis.iter().map(|b| g.format_word(b)).collect();
            format!("<{}>", ws.join(", "))
        }
    }

    /// Matrix whose rows are the basis vectors.
    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_row_vecs(self.p, &self.basis, self.rank)
    }
}

/// `G/H` with a chosen set of lifts for its generators.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub group: GroupSpec,
    /// Element of `G` lifting each generator of `G/H`.
    pub lifts: Vec<Element>,
    pub subgroup: Subgroup,
    complement: Vec<usize>,
}

impl QuotientGroup {
    /// Image of an element of `G` in `G/H`.
    pub fn project(&self, e: &[u64]) -> Element {
        let r = self.subgroup.reduce(e);
        self.complement.iter().map(|&c| r[c]).collect()
    }

    /// Image of a subgroup of `G` in `G/H`.
    pub fn project_subgroup(&self, k: &Subgroup) -> Subgroup {
        let gens: Vec<Element> = k.generators().iter().map(|e| self.project(e)).collect();
        Subgroup::from_generators(&self.group, &gens)
    }
}

/// Index of a primitive idempotent of `Q_p[C_p x C_p]`: the trivial block or
/// an order-p subgroup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BlockIndex {
    Zero,
    Sub(SubgroupId),
}

impl BlockIndex {
    /// Label used in diagram files: `0`, `N`, `C`, `nc^1`, ...
    pub fn label(&self, g: &GroupSpec) -> String {
        match self {
            BlockIndex::Zero => "0".into(),
            BlockIndex::Sub(id) => {
                let e = id.generator();
                let nonzero: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
                if nonzero.len() == 1 {
                    g.names()[nonzero[0]].to_uppercase()
                } else {
                    let mut s = String::new();
                    for &i in &nonzero {
                        s.push_str(&g.names()[i]);
                        if i != nonzero[0] {
                            s.push_str(&format!("^{}", e[i]));
                        }
                    }
                    s
                }
            }
        }
    }

    pub fn parse(g: &GroupSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(BlockIndex::Zero);
        }
        if let Some(i) = g.names().iter().position(|n| n.to_uppercase() == s) {
            return Ok(BlockIndex::Sub(SubgroupId::new(g, &g.generator(i))?));
        }
        let e = g.parse_word(s)?;
        Ok(BlockIndex::Sub(SubgroupId::new(g, &e)?))
    }

    pub fn subgroup(&self, g: &GroupSpec) -> Option<Subgroup> {
        match self {
            BlockIndex::Zero => None,
            BlockIndex::Sub(id) => Some(id.subgroup(g)),
        }
    }

    pub fn id(&self) -> Option<&SubgroupId> {
        match self {
            BlockIndex::Zero => None,
            BlockIndex::Sub(id) => Some(id),
        }
    }
}

/// The `p + 2` block indices of `C_p x C_p` in canonical order:
/// `0`, `<n>`, `<c>`, then `<n c^a>` for `a = 1..p-1`.
pub fn block_indices(g: &GroupSpec) -> Result<Vec<BlockIndex>> {
    if g.rank() != 2 {
        return Err(Error::Unsupported(format!("block indices need rank 2, got {}", g.rank())));
    }
    let p = g.p();
    let mut out = vec![BlockIndex::Zero, BlockIndex::Sub(SubgroupId(vec![1, 0])), BlockIndex::Sub(SubgroupId(vec![0, 1]))];
    out.extend((1..p).map(|a| BlockIndex::Sub(SubgroupId(vec![1, a]))));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_p_subgroup_counts() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let ids: Vec<Vec<u64>> = g.subgroups_order_p().iter().map(|s| s.generator().to_vec()).collect();
        assert_eq!(ids.len(), 4);
        for want in [[1, 0], [0, 1], [1, 1], [1, 2]] {
            assert!(ids.contains(&want.to_vec()));
        }
        assert_eq!(GroupSpec::standard(2, 3).unwrap().subgroups_order_p().len(), 7);
        assert_eq!(GroupSpec::standard(2, 2).unwrap().subgroups_order_p().len(), 3);
    }

    #[test]
    fn all_subgroup_counts() {
        // 1 + 7 + 7 + 1 subspaces of F_2^3; 1 + (p + 1) + 1 of F_p^2
        assert_eq!(GroupSpec::standard(2, 3).unwrap().all_subgroups().len(), 16);
        assert_eq!(GroupSpec::standard(5, 2).unwrap().all_subgroups().len(), 8);
    }

    #[test]
    fn words_round_trip() {
        let g = GroupSpec::standard(3, 2).unwrap();
        assert_eq!(g.parse_word("nc^2").unwrap(), vec![1, 2]);
        assert_eq!(g.parse_word("c").unwrap(), vec![0, 1]);
        assert_eq!(g.format_word(&[1, 2]), "nc^2");
        assert!(g.parse_word("x").is_err());
        let g3 = GroupSpec::standard(2, 3).unwrap();
        assert_eq!(g3.parse_word("nbc").unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn canonical_block_labels() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let labels: Vec<String> = block_indices(&g).unwrap().iter().map(|b| b.label(&g)).collect();
        assert_eq!(labels, ["0", "N", "C", "nc^1", "nc^2"]);
        for (b, l) in block_indices(&g).unwrap().iter().zip(&labels) {
            assert_eq!(&BlockIndex::parse(&g, l).unwrap(), b);
        }
    }

    #[test]
    fn quotient_by_first_generator() {
        let g = GroupSpec::standard(2, 3).unwrap();
        let n = Subgroup::from_generators(&g, &[g.generator(0)]);
        let q = g.quotient(&n);
        assert_eq!(q.group.names(), ["b", "c"]);
        assert_eq!(q.project(&[1, 1, 0]), vec![1, 0]);
        let g2 = GroupSpec::standard(3, 2).unwrap();
        let h = Subgroup::from_generators(&g2, &[vec![1, 1]]);
        let q2 = g2.quotient(&h);
        assert_eq!(q2.group.names(), ["c"]);
        // n = c^{-1} modulo <nc>
        assert_eq!(q2.project(&[1, 0]), vec![2]);
    }

    #[test]
    fn normalization() {
        let g = GroupSpec::standard(5, 2).unwrap();
        assert_eq!(SubgroupId::new(&g, &[3, 1]).unwrap(), SubgroupId::new(&g, &[1, 2]).unwrap());
        assert!(SubgroupId::new(&g, &[0, 0]).is_err());
    }
}
