//! Matroids on small ground sets, stored as a full rank table indexed by
//! subset bitmask. All the operations used downstream (simplification,
//! restriction, truncation, dual, free coextension) are rank-table
//! manipulations.

use crate::field::{Field, Q};
use crate::linalg::{Echelon, SparseVec};
use serde_json::{json, Value};
use thiserror::Error;

/// Ground-set subset as a bitmask; element i is bit i (0-based internally,
/// printed 1-based to match the usual matroid-theory labeling).
pub type ESet = u32;

pub fn set_from_elems(elems: &[usize]) -> ESet {
    elems.iter().fold(0, |m, &e| m | (1 << e))
}

pub fn elems_of(mut s: ESet) -> Vec<usize> {
    let mut out = Vec::new();
    while s != 0 {
        let e = s.trailing_zeros() as usize;
        out.push(e);
        s &= s - 1;
    }
    out
}

/// 1-based digit-string rendering ("1256"); "∅" for the empty set.
pub fn set_label(s: ESet) -> String {
    if s == 0 {
        return "∅".to_string();
    }
    elems_of(s)
        .iter()
        .map(|e| {
            if *e < 9 {
                char::from_digit(*e as u32 + 1, 10).unwrap().to_string()
            } else {
                format!("({})", e + 1)
            }
        })
        .collect()
}

pub const MAX_GROUND: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatroidError {
    #[error("ground set too large: {0} > {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("rank axiom violated: {0}")]
    RankAxiom(String),
    #[error("basis exchange axiom violated for bases {0} and {1}")]
    BasisExchange(String, String),
    #[error("invalid bases: {0}")]
    InvalidBases(String),
    #[error("invalid flat family: {0}")]
    InvalidFlats(String),
    #[error("matroid is not simple: {0}")]
    NotSimple(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matroid {
    n: usize,
    rank: Vec<u8>, // len 2^n
}

impl std::fmt::Debug for Matroid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matroid(n={}, rank={})", self.n, self.rank_full())
    }
}

impl Matroid {
    pub fn from_rank_table(n: usize, rank: Vec<u8>) -> Result<Matroid, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        assert_eq!(rank.len(), 1usize << n);
        let m = Matroid { n, rank };
        m.validate()?;
        Ok(m)
    }

    /// Local rank axioms: r(∅) = 0; unit increase; local submodularity
    /// r(X∪e) + r(X∪f) ≥ r(X∪e∪f) + r(X). These imply the global axioms.
    fn validate(&self) -> Result<(), MatroidError> {
        if self.rank[0] != 0 {
            return Err(MatroidError::RankAxiom("r(∅) != 0".into()));
        }
        for x in 0..(1u32 << self.n) {
            for e in 0..self.n {
                if x & (1 << e) != 0 {
                    continue;
                }
                let xe = x | (1 << e);
                let d = self.rank[xe as usize] as i32 - self.rank[x as usize] as i32;
                if d != 0 && d != 1 {
                    return Err(MatroidError::RankAxiom(format!(
                        "r({}) - r({}) = {}",
                        set_label(xe),
                        set_label(x),
                        d
                    )));
                }
                for f in (e + 1)..self.n {
                    if x & (1 << f) != 0 {
                        continue;
                    }
                    let xf = x | (1 << f);
                    let xef = xe | (1 << f);
                    if (self.rank[xe as usize] as i32) + (self.rank[xf as usize] as i32)
                        < (self.rank[xef as usize] as i32) + (self.rank[x as usize] as i32)
                    {
                        return Err(MatroidError::RankAxiom(format!(
                            "submodularity fails at {} with {}, {}",
                            set_label(x),
                            e + 1,
                            f + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> ESet {
        ((1u64 << self.n) - 1) as ESet
    }

    pub fn rank(&self, x: ESet) -> usize {
        self.rank[x as usize] as usize
    }

    pub fn rank_full(&self) -> usize {
        self.rank(self.ground())
    }

    pub fn is_independent(&self, x: ESet) -> bool {
        self.rank(x) == x.count_ones() as usize
    }

    pub fn closure(&self, x: ESet) -> ESet {
        let r = self.rank(x);
        let mut cl = x;
        for e in 0..self.n {
            if cl & (1 << e) == 0 && self.rank(x | (1 << e)) == r {
                cl |= 1 << e;
            }
        }
        cl
    }

    pub fn is_flat(&self, x: ESet) -> bool {
        self.closure(x) == x
    }

    pub fn flats(&self) -> Vec<ESet> {
        (0..(1u32 << self.n)).filter(|&x| self.is_flat(x)).collect()
    }

    pub fn bases(&self) -> Vec<ESet> {
        let r = self.rank_full();
        (0..(1u32 << self.n))
            .filter(|&x| x.count_ones() as usize == r && self.rank(x) == r)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        (0..self.n).all(|e| self.rank(1 << e) == 1)
            && (0..self.n).all(|e| {
                (e + 1..self.n).all(|f| self.rank((1 << e) | (1 << f)) == 2)
            })
    }

    // ---- constructors ----

    pub fn uniform(r: usize, n: usize) -> Matroid {
        assert!(r <= n && n <= MAX_GROUND);
        let rank = (0..(1u32 << n))
            .map(|x| (x.count_ones() as usize).min(r) as u8)
            .collect();
        Matroid { n, rank }
    }

    /// Matroid of a list of columns with exact rational entries.
    pub fn linear(columns: &[Vec<Q>]) -> Result<Matroid, MatroidError> {
        let n = columns.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        let height = columns.first().map(|c| c.len()).unwrap_or(0);
        if columns.iter().any(|c| c.len() != height) {
            return Err(MatroidError::Invalid("ragged matrix".into()));
        }
        let mut rank = vec![0u8; 1 << n];
        for x in 1..(1u32 << n) {
            let mut ech = Echelon::<Q>::new(height);
            for e in elems_of(x) {
                let entries: Vec<(u32, Q)> = columns[e]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(i, v)| (i as u32, v.clone()))
                    .collect();
                ech.insert(SparseVec { entries }).expect("tiny echelon");
            }
            rank[x as usize] = ech.rank() as u8;
        }
        Matroid::from_rank_table(n, rank)
    }

    /// Cycle matroid of a graph: ground set = edges, rank of an edge set =
    /// (#vertices touched) - (#connected components of the edge subgraph).
    pub fn graphic(nvertices: usize, edges: &[(usize, usize)]) -> Result<Matroid, MatroidError> {
        let n = edges.len();
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        for &(u, v) in edges {
            if u >= nvertices || v >= nvertices {
                return Err(MatroidError::Invalid("edge endpoint out of range".into()));
            }
        }
        let mut rank = vec![0u8; 1 << n];
        for x in 1..(1u32 << n) {
            let mut parent: Vec<usize> = (0..nvertices).collect();
            fn find(p: &mut Vec<usize>, mut v: usize) -> usize {
                while p[v] != v {
                    p[v] = p[p[v]];
                    v = p[v];
                }
                v
            }
            let mut r = 0u8;
            for e in elems_of(x) {
                let (a, b) = edges[e];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    r += 1;
                }
            }
            rank[x as usize] = r;
        }
        Matroid::from_rank_table(n, rank)
    }

    pub fn from_bases(n: usize, bases: &[ESet]) -> Result<Matroid, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        if bases.is_empty() {
            return Err(MatroidError::InvalidBases("empty basis family".into()));
        }
        let r = bases[0].count_ones();
        if bases.iter().any(|b| b.count_ones() != r) {
            return Err(MatroidError::InvalidBases("bases of unequal size".into()));
        }
        let ground = ((1u64 << n) - 1) as ESet;
        if bases.iter().any(|b| b & !ground != 0) {
            return Err(MatroidError::InvalidBases("basis element out of range".into()));
        }
        // exchange axiom
        for &b1 in bases {
            for &b2 in bases {
                let mut diff = b1 & !b2;
                while diff != 0 {
                    let e = diff.trailing_zeros();
                    diff &= diff - 1;
                    let ok = {
                        let mut d2 = b2 & !b1;
                        let mut found = false;
                        while d2 != 0 {
                            let f = d2.trailing_zeros();
                            d2 &= d2 - 1;
                            let cand = (b1 & !(1 << e)) | (1 << f);
                            if bases.contains(&cand) {
                                found = true;
                                break;
                            }
                        }
                        found
                    };
                    if !ok {
                        return Err(MatroidError::BasisExchange(
                            set_label(b1),
                            set_label(b2),
                        ));
                    }
                }
            }
        }
        let mut rank = vec![0u8; 1 << n];
        for x in 0..(1u32 << n) {
            rank[x as usize] = bases
                .iter()
                .map(|b| (x & b).count_ones() as u8)
                .max()
                .unwrap();
        }
        Matroid::from_rank_table(n, rank)
    }

    /// From the full family of flats; validated by rebuilding the rank table
    /// and checking the rank axioms, then checking the family matches.
    pub fn from_flats(n: usize, flats: &[ESet]) -> Result<Matroid, MatroidError> {
        if n > MAX_GROUND {
            return Err(MatroidError::GroundTooLarge(n));
        }
        let ground = ((1u64 << n) - 1) as ESet;
        if !flats.contains(&ground) {
            return Err(MatroidError::InvalidFlats("ground set missing".into()));
        }
        // closure of X = intersection of flats containing X
        let cl = |x: ESet| -> Result<ESet, MatroidError> {
            let mut acc = ground;
            let mut any = false;
            for &f in flats {
                if f & x == x {
                    acc &= f;
                    any = true;
                }
            }
            if !any {
                return Err(MatroidError::InvalidFlats(format!(
                    "no flat contains {}",
                    set_label(x)
                )));
            }
            Ok(acc)
        };
        // intersections of flats must be flats
        for &a in flats {
            for &b in flats {
                if !flats.contains(&(a & b)) {
                    return Err(MatroidError::InvalidFlats(format!(
                        "{} ∩ {} is not in the family",
                        set_label(a),
                        set_label(b)
                    )));
                }
            }
        }
        // rank by chain height: r(X) = height of cl(X) in the closure order
        let mut sorted: Vec<ESet> = flats.to_vec();
        sorted.sort_by_key(|f| f.count_ones());
        sorted.dedup();
        let mut height: std::collections::HashMap<ESet, u8> = Default::default();
        for &f in &sorted {
            let h = sorted
                .iter()
                .filter(|&&g| g != f && g & f == g)
                .map(|g| height.get(g).copied().unwrap_or(0) + 1)
                .max()
                .unwrap_or(0);
            height.insert(f, h);
        }
        let mut rank = vec![0u8; 1 << n];
        for x in 0..(1u32 << n) {
            rank[x as usize] = height[&cl(x)?];
        }
        let m = Matroid::from_rank_table(n, rank)?;
        let mut got = m.flats();
        got.sort_unstable();
        let mut want = sorted;
        want.sort_unstable();
        if got != want {
            return Err(MatroidError::InvalidFlats(
                "family is not the flat family of a matroid".into(),
            ));
        }
        Ok(m)
    }

    // ---- operations ----

    /// Simplification: one element per parallel class, loops removed.
    /// Returns the simple matroid and the representative elements chosen
    /// (smallest member of each class).
    pub fn simplify(&self) -> (Matroid, Vec<usize>) {
        let mut reps: Vec<usize> = Vec::new();
        for e in 0..self.n {
            if self.rank(1 << e) == 0 {
                continue; // loop
            }
            if reps
                .iter()
                .all(|&r| self.rank((1 << r) | (1 << e)) == 2)
            {
                reps.push(e);
            }
        }
        (self.restrict_reindexed(set_from_elems(&reps)), reps)
    }

    /// Restriction M|F with the surviving elements packed to 0..|F|.
    pub fn restrict_reindexed(&self, f: ESet) -> Matroid {
        let elems = elems_of(f);
        let k = elems.len();
        let mut rank = vec![0u8; 1 << k];
        for x in 0..(1u32 << k) {
            let mut big: ESet = 0;
            for (i, &e) in elems.iter().enumerate() {
                if x & (1 << i) != 0 {
                    big |= 1 << e;
                }
            }
            rank[x as usize] = self.rank[big as usize];
        }
        Matroid { n: k, rank }
    }

    /// Truncation T(M): ranks capped at rk(M) - 1 (the lattice of flats loses
    /// its hyperplanes).
    pub fn truncation(&self) -> Matroid {
        let cap = self.rank_full().saturating_sub(1) as u8;
        Matroid {
            n: self.n,
            rank: self.rank.iter().map(|&r| r.min(cap)).collect(),
        }
    }

    pub fn dual(&self) -> Matroid {
        let ground = self.ground();
        let rfull = self.rank_full() as i32;
        let rank = (0..(1u32 << self.n))
            .map(|x| {
                (x.count_ones() as i32 + self.rank[(ground & !x) as usize] as i32 - rfull) as u8
            })
            .collect();
        Matroid { n: self.n, rank }
    }

    /// Free extension M + e: a new element in general position.
    pub fn free_extension(&self) -> Matroid {
        let n = self.n + 1;
        assert!(n <= MAX_GROUND);
        let rfull = self.rank_full() as u8;
        let mut rank = vec![0u8; 1 << n];
        for x in 0..(1u32 << self.n) {
            rank[x as usize] = self.rank[x as usize];
            rank[(x | (1 << self.n)) as usize] = (self.rank[x as usize] + 1).min(rfull);
        }
        Matroid { n, rank }
    }

    /// Free coextension (M* + e)*, the new element labeled n (printed n+1).
    pub fn free_coextension(&self) -> Matroid {
        self.dual().free_extension().dual()
    }

    /// Canonical form under ground-set relabeling: the lexicographically
    /// smallest sorted rank table over all permutations. Small n only.
    pub fn canonical_rank_table(&self) -> Vec<u8> {
        let perms = permutations(self.n);
        let mut best: Option<Vec<u8>> = None;
        for p in perms {
            let mut t = vec![0u8; 1 << self.n];
            for x in 0..(1u32 << self.n) {
                let mut y: ESet = 0;
                for e in 0..self.n {
                    if x & (1 << e) != 0 {
                        y |= 1 << p[e];
                    }
                }
                t[y as usize] = self.rank[x as usize];
            }
            if best.as_ref().map_or(true, |b| &t < b) {
                best = Some(t);
            }
        }
        best.unwrap()
    }

    // ---- JSON ----

    pub fn to_json(&self) -> Value {
        let bases: Vec<Vec<usize>> = self
            .bases()
            .iter()
            .map(|&b| elems_of(b).iter().map(|e| e + 1).collect())
            .collect();
        json!({ "kind": "bases", "ground": self.n, "bases": bases })
    }

    pub fn from_json(v: &Value) -> Result<Matroid, MatroidError> {
        let obj = v
            .as_object()
            .ok_or_else(|| MatroidError::Invalid("expected object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| MatroidError::Invalid("missing \"kind\"".into()))?;
        let ground = obj
            .get("ground")
            .and_then(|g| g.as_u64())
            .ok_or_else(|| MatroidError::Invalid("missing \"ground\"".into()))?
            as usize;
        let elem_list = |val: &Value, what: &str| -> Result<ESet, MatroidError> {
            let arr = val
                .as_array()
                .ok_or_else(|| MatroidError::Invalid(format!("{what}: expected array")))?;
            let mut s: ESet = 0;
            for e in arr {
                let e = e
                    .as_u64()
                    .ok_or_else(|| MatroidError::Invalid(format!("{what}: expected integer")))?
                    as usize;
                if e == 0 || e > ground {
                    return Err(MatroidError::Invalid(format!(
                        "{what}: element {e} out of 1..{ground}"
                    )));
                }
                s |= 1 << (e - 1);
            }
            Ok(s)
        };
        match kind {
            "uniform" => {
                let r = obj
                    .get("rank")
                    .and_then(|r| r.as_u64())
                    .ok_or_else(|| MatroidError::Invalid("missing \"rank\"".into()))?
                    as usize;
                if r > ground || ground > MAX_GROUND {
                    return Err(MatroidError::Invalid("bad uniform parameters".into()));
                }
                Ok(Matroid::uniform(r, ground))
            }
            "linear" => {
                let cols = obj
                    .get("columns")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| MatroidError::Invalid("missing \"columns\"".into()))?;
                if cols.len() != ground {
                    return Err(MatroidError::Invalid("columns/ground mismatch".into()));
                }
                let mut parsed: Vec<Vec<Q>> = Vec::new();
                for c in cols {
                    let c = c
                        .as_array()
                        .ok_or_else(|| MatroidError::Invalid("column: expected array".into()))?;
                    let mut col = Vec::new();
                    for v in c {
                        let q = match v {
                            Value::Number(n) if n.is_i64() => Q::from_i64(n.as_i64().unwrap()),
                            Value::String(s) => Q::parse(s).ok_or_else(|| {
                                MatroidError::Invalid(format!("bad rational \"{s}\""))
                            })?,
                            _ => {
                                return Err(MatroidError::Invalid(
                                    "matrix entries must be integers or rational strings".into(),
                                ))
                            }
                        };
                        col.push(q);
                    }
                    parsed.push(col);
                }
                Matroid::linear(&parsed)
            }
            "graphic" => {
                let nv = obj
                    .get("vertices")
                    .and_then(|v| v.as_u64())
                    .ok_or_else(|| MatroidError::Invalid("missing \"vertices\"".into()))?
                    as usize;
                let edges = obj
                    .get("edges")
                    .and_then(|e| e.as_array())
                    .ok_or_else(|| MatroidError::Invalid("missing \"edges\"".into()))?;
                if edges.len() != ground {
                    return Err(MatroidError::Invalid("edges/ground mismatch".into()));
                }
                let mut parsed = Vec::new();
                for e in edges {
                    let pair = e
                        .as_array()
                        .filter(|p| p.len() == 2)
                        .ok_or_else(|| MatroidError::Invalid("edge: expected [u, v]".into()))?;
                    let u = pair[0].as_u64().ok_or_else(|| {
                        MatroidError::Invalid("edge endpoint: expected integer".into())
                    })? as usize;
                    let v = pair[1].as_u64().ok_or_else(|| {
                        MatroidError::Invalid("edge endpoint: expected integer".into())
                    })? as usize;
                    if u == 0 || v == 0 || u > nv || v > nv {
                        return Err(MatroidError::Invalid("edge endpoint out of range".into()));
                    }
                    parsed.push((u - 1, v - 1));
                }
                Matroid::graphic(nv, &parsed)
            }
            "bases" => {
                let bases = obj
                    .get("bases")
                    .and_then(|b| b.as_array())
                    .ok_or_else(|| MatroidError::Invalid("missing \"bases\"".into()))?;
                let parsed: Result<Vec<ESet>, _> =
                    bases.iter().map(|b| elem_list(b, "basis")).collect();
                Matroid::from_bases(ground, &parsed?)
            }
            "flats" => {
                let flats = obj
                    .get("flats")
                    .and_then(|f| f.as_array())
                    .ok_or_else(|| MatroidError::Invalid("missing \"flats\"".into()))?;
                let parsed: Result<Vec<ESet>, _> =
                    flats.iter().map(|f| elem_list(f, "flat")).collect();
                Matroid::from_flats(ground, &parsed?)
            }
            other => Err(MatroidError::Invalid(format!("unknown kind \"{other}\""))),
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for e in 0..n {
                if !p.contains(&e) {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_basics() {
        let m = Matroid::uniform(2, 4);
        assert_eq!(m.rank_full(), 2);
        assert_eq!(m.bases().len(), 6);
        assert_eq!(m.flats().len(), 1 + 4 + 1); // ∅, atoms, E
        assert!(m.is_simple());
        assert_eq!(m.closure(0b0011), m.ground());
    }

    #[test]
    fn linear_matches_uniform() {
        // generic 2x3 matrix gives U_{2,3}
        let cols = vec![
            vec![Q::from_i64(1), Q::from_i64(0)],
            vec![Q::from_i64(0), Q::from_i64(1)],
            vec![Q::from_i64(1), Q::from_i64(1)],
        ];
        let m = Matroid::linear(&cols).unwrap();
        assert_eq!(m, Matroid::uniform(2, 3));
    }

    #[test]
    fn graphic_triangle_is_u23() {
        let m = Matroid::graphic(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(m, Matroid::uniform(2, 3));
    }

    #[test]
    fn four_cycle_graphic() {
        let m = Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        // M(C_4) = U_{3,4}
        assert_eq!(m, Matroid::uniform(3, 4));
    }

    #[test]
    fn bases_roundtrip() {
        let m = Matroid::uniform(2, 4);
        let m2 = Matroid::from_bases(4, &m.bases()).unwrap();
        assert_eq!(m, m2);
        let j = m.to_json();
        let m3 = Matroid::from_json(&j).unwrap();
        assert_eq!(m, m3);
    }

    #[test]
    fn bad_bases_rejected() {
        // {12, 34} violates exchange
        assert!(Matroid::from_bases(4, &[0b0011, 0b1100]).is_err());
    }

    #[test]
    fn flats_roundtrip() {
        let m = Matroid::uniform(2, 3);
        let m2 = Matroid::from_flats(3, &m.flats()).unwrap();
        assert_eq!(m, m2);
        // a family that is not intersection-closed is rejected
        assert!(Matroid::from_flats(2, &[0b11, 0b01, 0b10]).is_err());
        // {1, 12} is fine: element 1 becomes a loop
        assert!(Matroid::from_flats(2, &[0b11, 0b01]).is_ok());
    }

    #[test]
    fn truncation_of_free() {
        assert_eq!(Matroid::uniform(3, 3).truncation(), Matroid::uniform(2, 3));
    }

    #[test]
    fn dual_bases_are_complements() {
        let m = Matroid::uniform(2, 5);
        let d = m.dual();
        let ground = m.ground();
        let mut want: Vec<ESet> = m.bases().iter().map(|b| ground & !b).collect();
        want.sort_unstable();
        let mut got = d.bases();
        got.sort_unstable();
        assert_eq!(got, want);
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn simplify_collapses_parallels() {
        // two parallel columns and one loop
        let cols = vec![
            vec![Q::from_i64(1), Q::from_i64(0)],
            vec![Q::from_i64(2), Q::from_i64(0)],
            vec![Q::from_i64(0), Q::from_i64(0)],
            vec![Q::from_i64(0), Q::from_i64(1)],
        ];
        let m = Matroid::linear(&cols).unwrap();
        let (s, reps) = m.simplify();
        assert_eq!(reps, vec![0, 3]);
        assert_eq!(s, Matroid::uniform(2, 2));
    }

    /// The free coextension has the direct rank description:
    /// rk(F) = rk_M(F) (+1 if F dependent in M); rk(F ∪ e) = rk_M(F) + 1.
    #[test]
    fn free_coextension_rank_formula() {
        for m in [
            Matroid::uniform(2, 3),
            Matroid::uniform(3, 4),
            Matroid::uniform(2, 4),
            Matroid::uniform(3, 3),
        ] {
            let c = m.free_coextension();
            assert_eq!(c.n(), m.n() + 1);
            assert_eq!(c.rank_full(), m.rank_full() + 1);
            let e = 1u32 << m.n();
            for x in 0..(1u32 << m.n()) {
                let rm = m.rank(x);
                let expect = if m.is_independent(x) { rm } else { rm + 1 };
                assert_eq!(c.rank(x), expect, "rk(F) for F={}", set_label(x));
                assert_eq!(c.rank(x | e), rm + 1, "rk(F∪e) for F={}", set_label(x));
            }
        }
    }

    #[test]
    fn free_coextension_flats_characterization_u23() {
        let m = Matroid::uniform(2, 3);
        let c = m.free_coextension();
        let e = 1u32 << m.n();
        for x in 0..(1u32 << m.n()) {
            // F ∪ e flat iff F is a flat of M
            assert_eq!(c.is_flat(x | e), m.is_flat(x));
            // F flat iff F independent in M
            assert_eq!(c.is_flat(x), m.is_independent(x));
        }
    }
}
