//! Lattices of flats, the rank-then-descending-list total coatom order, and
//! the two cover-compatibility properties that make it a total coatom
//! ordering. Also a raw finite-lattice type for hand-built posets.

use crate::matroid::{elems_of, set_label, ESet, Matroid};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

pub type FlatId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not a flat: {0}")]
    NotAFlat(String),
    #[error("elements not comparable: {0} vs {1}")]
    NotComparable(String, String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("{0} is not a coatom of {1}")]
    NotACoatomOf(String, String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Total order on flats: higher rank is greater; at equal rank, write each
/// flat as its descending element list and the one with the *smaller* element
/// at the first disagreement is greater. When one list is a prefix of the
/// other (impossible for equal-rank flats of a matroid) the longer one is
/// greater, which keeps the comparator total on arbitrary set/rank pairs.
pub fn coatom_compare(rank_a: usize, a: ESet, rank_b: usize, b: ESet) -> Ordering {
    match rank_a.cmp(&rank_b) {
        Ordering::Equal => {}
        o => return o,
    }
    if a == b {
        return Ordering::Equal;
    }
    let mut da = elems_of(a);
    let mut db = elems_of(b);
    da.reverse();
    db.reverse();
    for i in 0..da.len().min(db.len()) {
        match da[i].cmp(&db[i]) {
            Ordering::Equal => {}
            // smaller element first ⇒ greater flat
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    da.len().cmp(&db.len())
}

pub struct FlatLattice {
    matroid: Matroid,
    /// Flats listed in ascending coatom order; a FlatId is an index here, so
    /// id order *is* the total coatom order.
    flats: Vec<ESet>,
    index: HashMap<ESet, FlatId>,
    rank_of: Vec<u8>,
    by_rank: Vec<Vec<FlatId>>,
    covers_down: Vec<Vec<FlatId>>, // coat(f), ascending
    covers_up: Vec<Vec<FlatId>>,
}

impl FlatLattice {
    pub fn build(m: &Matroid) -> FlatLattice {
        let mut flats = m.flats();
        flats.sort_by(|&a, &b| coatom_compare(m.rank(a), a, m.rank(b), b));
        let index: HashMap<ESet, FlatId> =
            flats.iter().enumerate().map(|(i, &f)| (f, i as FlatId)).collect();
        let rank_of: Vec<u8> = flats.iter().map(|&f| m.rank(f) as u8).collect();
        let top_rank = m.rank_full();
        let mut by_rank = vec![Vec::new(); top_rank + 1];
        for (i, _) in flats.iter().enumerate() {
            by_rank[rank_of[i] as usize].push(i as FlatId);
        }
        let mut covers_down = vec![Vec::new(); flats.len()];
        let mut covers_up = vec![Vec::new(); flats.len()];
        for (i, &f) in flats.iter().enumerate() {
            for (j, &g) in flats.iter().enumerate() {
                if rank_of[j] + 1 == rank_of[i] && g & f == g {
                    covers_down[i].push(j as FlatId);
                    covers_up[j].push(i as FlatId);
                }
            }
        }
        FlatLattice { matroid: m.clone(), flats, index, rank_of, by_rank, covers_down, covers_up }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn set_of(&self, f: FlatId) -> ESet {
        self.flats[f as usize]
    }

    pub fn label(&self, f: FlatId) -> String {
        set_label(self.flats[f as usize])
    }

    pub fn id_of(&self, s: ESet) -> Result<FlatId, LatticeError> {
        self.index
            .get(&s)
            .copied()
            .ok_or_else(|| LatticeError::NotAFlat(set_label(s)))
    }

    pub fn rank(&self, f: FlatId) -> usize {
        self.rank_of[f as usize] as usize
    }

    pub fn top_rank(&self) -> usize {
        self.by_rank.len() - 1
    }

    pub fn bottom(&self) -> FlatId {
        self.by_rank[0][0]
    }

    pub fn top(&self) -> FlatId {
        *self.by_rank[self.top_rank()].last().unwrap()
    }

    pub fn by_rank(&self, r: usize) -> &[FlatId] {
        &self.by_rank[r]
    }

    pub fn all(&self) -> impl Iterator<Item = FlatId> {
        0..self.flats.len() as FlatId
    }

    pub fn atoms(&self) -> &[FlatId] {
        self.by_rank(1)
    }

    pub fn coatoms(&self) -> &[FlatId] {
        self.by_rank(self.top_rank().saturating_sub(1))
    }

    pub fn leq(&self, a: FlatId, b: FlatId) -> bool {
        let (sa, sb) = (self.set_of(a), self.set_of(b));
        sa & sb == sa
    }

    pub fn meet(&self, a: FlatId, b: FlatId) -> FlatId {
        self.index[&(self.set_of(a) & self.set_of(b))]
    }

    pub fn join(&self, a: FlatId, b: FlatId) -> FlatId {
        self.index[&self.matroid.closure(self.set_of(a) | self.set_of(b))]
    }

    /// coat(F): the flats covered by F, in ascending coatom order.
    pub fn coat(&self, f: FlatId) -> &[FlatId] {
        &self.covers_down[f as usize]
    }

    pub fn covers_up(&self, f: FlatId) -> &[FlatId] {
        &self.covers_up[f as usize]
    }

    /// coat_G(G'): {G∧G' : G ∈ set} ∩ coat(G'), ascending.
    pub fn coat_restricted(&self, set: &[FlatId], gp: FlatId) -> Vec<FlatId> {
        let mut out: Vec<FlatId> = set
            .iter()
            .map(|&g| self.meet(g, gp))
            .filter(|m| self.covers_down[gp as usize].contains(m))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The elements of the interval [a, b], ascending.
    pub fn interval(&self, a: FlatId, b: FlatId) -> Result<Vec<FlatId>, LatticeError> {
        if !self.leq(a, b) {
            return Err(LatticeError::NotComparable(self.label(a), self.label(b)));
        }
        Ok(self
            .all()
            .filter(|&f| self.leq(a, f) && self.leq(f, b))
            .collect())
    }

    pub fn to_raw(&self) -> RawLattice {
        let names: Vec<String> = self.all().map(|f| self.label(f)).collect();
        let mut covers = Vec::new();
        for f in self.all() {
            for &c in self.coat(f) {
                covers.push((c as usize, f as usize));
            }
        }
        RawLattice::from_covers(names, &covers).expect("flat lattice is a lattice")
    }

    pub fn to_json(&self) -> Value {
        let mut ranks = Vec::new();
        for r in 0..=self.top_rank() {
            let row: Vec<Value> = self
                .by_rank(r)
                .iter()
                .map(|&f| {
                    Value::Array(
                        elems_of(self.set_of(f))
                            .iter()
                            .map(|e| Value::from(*e as u64 + 1))
                            .collect(),
                    )
                })
                .collect();
            ranks.push(Value::Array(row));
        }
        let covers: Vec<Value> = self
            .all()
            .flat_map(|f| {
                self.coat(f)
                    .iter()
                    .map(move |&c| json!([self.label(c), self.label(f)]))
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({
            "flats_by_rank": ranks,
            "covers": covers,
            "coatom_order": self.all().map(|f| self.label(f)).collect::<Vec<_>>(),
        })
    }

    /// Definition check for the coatom order given by an arbitrary comparator
    /// on flat ids. Returns Ok(checked_pair_count) or the first failure.
    pub fn verify_total_coatom_order(
        &self,
        cmp: &dyn Fn(FlatId, FlatId) -> Ordering,
    ) -> Result<usize, CoatomOrderViolation> {
        let mut checked = 0usize;
        for f in self.all() {
            if self.rank(f) < 2 {
                continue; // coat(F) ⊆ {∅}: both properties vacuous
            }
            let mut coat: Vec<FlatId> = self.coat(f).to_vec();
            coat.sort_by(|&a, &b| cmp(a, b));
            // property (i)
            for (ia, &g) in coat.iter().enumerate() {
                for &gp in &coat[ia + 1..] {
                    // g ≺ gp; need g'' ≺ gp in coat(F) with gp∧g'' ⋖ gp and g∧gp ≤ g''
                    let gg = self.meet(g, gp);
                    let ok = coat.iter().take_while(|&&x| cmp(x, gp) == Ordering::Less).any(
                        |&gpp| {
                            let m = self.meet(gp, gpp);
                            self.coat(gp).contains(&m) && self.leq(gg, gpp)
                        },
                    );
                    checked += 1;
                    if !ok {
                        return Err(CoatomOrderViolation {
                            property: 1,
                            f,
                            detail: format!(
                                "no G'' works for G={} ≺ G'={} under F={}",
                                self.label(g),
                                self.label(gp),
                                self.label(f)
                            ),
                        });
                    }
                }
            }
            // property (ii): every nonempty initial segment of coat(F)
            for k in 1..=coat.len() {
                let seg = &coat[..k];
                let gp = seg[k - 1]; // ≺-largest in the segment
                let mut restricted: Vec<FlatId> = seg
                    .iter()
                    .map(|&g| self.meet(g, gp))
                    .filter(|m| self.coat(gp).contains(m))
                    .collect();
                restricted.sort_by(|&a, &b| cmp(a, b));
                restricted.dedup();
                let mut coat_gp: Vec<FlatId> = self.coat(gp).to_vec();
                coat_gp.sort_by(|&a, &b| cmp(a, b));
                let is_initial = restricted.as_slice() == &coat_gp[..restricted.len()];
                checked += 1;
                if !is_initial {
                    return Err(CoatomOrderViolation {
                        property: 2,
                        f,
                        detail: format!(
                            "coat_G({}) = {{{}}} is not an initial segment of coat = {{{}}} (segment of size {} under F={})",
                            self.label(gp),
                            restricted.iter().map(|&x| self.label(x)).collect::<Vec<_>>().join(","),
                            coat_gp.iter().map(|&x| self.label(x)).collect::<Vec<_>>().join(","),
                            k,
                            self.label(f)
                        ),
                    });
                }
            }
        }
        Ok(checked)
    }

    /// Same check with the built-in rank-then-descending-list order.
    pub fn verify_builtin_coatom_order(&self) -> Result<usize, CoatomOrderViolation> {
        self.verify_total_coatom_order(&|a, b| a.cmp(&b))
    }
}

#[derive(Debug)]
pub struct CoatomOrderViolation {
    pub property: u8,
    pub f: FlatId,
    pub detail: String,
}

/// A finite poset given by cover relations, with lattice/atomicity/
/// semimodularity checks. Used for hand-built examples that are not lattices
/// of flats.
#[derive(Clone)]
pub struct RawLattice {
    pub names: Vec<String>,
    n: usize,
    leq: Vec<bool>, // leq[a * n + b] ⇔ a ≤ b
    bottom: usize,
    top: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometricReport {
    Geometric,
    NotAtomic { witness: usize },
    NotSemimodular { witness: (usize, usize) },
}

impl RawLattice {
    pub fn from_covers(
        names: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<RawLattice, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Invalid("empty poset".into()));
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(LatticeError::Invalid("cover index out of range".into()));
            }
            leq[a * n + b] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::Invalid(format!(
                        "cycle involving {} and {}",
                        names[i], names[j]
                    )));
                }
            }
        }
        let bottoms: Vec<usize> =
            (0..n).filter(|&i| (0..n).all(|j| leq[i * n + j])).collect();
        let tops: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| leq[j * n + i])).collect();
        let (bottom, top) = match (bottoms.first(), tops.first()) {
            (Some(&b), Some(&t)) => (b, t),
            _ => {
                return Err(LatticeError::NotALattice(
                    "missing global bottom or top".into(),
                ))
            }
        };
        Ok(RawLattice { names, n, leq, bottom, top })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn covers(&self, a: usize, b: usize) -> bool {
        a != b
            && self.leq(a, b)
            && (0..self.n).all(|c| c == a || c == b || !(self.leq(a, c) && self.leq(c, b)))
    }

    pub fn lower_covers(&self, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&a| self.covers(a, b)).collect()
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize, LatticeError> {
        let lows: Vec<usize> = (0..self.n)
            .filter(|&c| self.leq(c, a) && self.leq(c, b))
            .collect();
        // a greatest lower bound is a lower bound above all lower bounds
        let glb: Vec<usize> = lows
            .iter()
            .copied()
            .filter(|&c| lows.iter().all(|&d| self.leq(d, c)))
            .collect();
        match glb.as_slice() {
            [m] => Ok(*m),
            _ => Err(LatticeError::NotALattice(format!(
                "{} ∧ {} has no unique meet",
                self.names[a], self.names[b]
            ))),
        }
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize, LatticeError> {
        let ups: Vec<usize> = (0..self.n)
            .filter(|&c| self.leq(a, c) && self.leq(b, c))
            .collect();
        let lub: Vec<usize> = ups
            .iter()
            .copied()
            .filter(|&c| ups.iter().all(|&d| self.leq(c, d)))
            .collect();
        match lub.as_slice() {
            [j] => Ok(*j),
            _ => Err(LatticeError::NotALattice(format!(
                "{} ∨ {} has no unique join",
                self.names[a], self.names[b]
            ))),
        }
    }

    pub fn check_lattice(&self) -> Result<(), LatticeError> {
        for a in 0..self.n {
            for b in 0..self.n {
                self.meet(a, b)?;
                self.join(a, b)?;
            }
        }
        Ok(())
    }

    pub fn atoms_of(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.covers(self.bottom, a)).collect()
    }

    pub fn is_atomic(&self) -> Result<(), usize> {
        let atoms = self.atoms_of();
        for x in 0..self.n {
            if x == self.bottom {
                continue;
            }
            // x must be the join of the atoms below it
            let below: Vec<usize> =
                atoms.iter().copied().filter(|&a| self.leq(a, x)).collect();
            if below.is_empty() {
                return Err(x);
            }
            let mut j = below[0];
            for &a in &below[1..] {
                j = self.join(j, a).map_err(|_| x)?;
            }
            if j != x {
                return Err(x);
            }
        }
        Ok(())
    }

    /// Cover-based semimodularity: x∧y ⋖ x and x∧y ⋖ y imply x ⋖ x∨y and
    /// y ⋖ x∨y.
    pub fn is_semimodular(&self) -> Result<(), (usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                let m = self.meet(x, y).map_err(|_| (x, y))?;
                if self.covers(m, x) && self.covers(m, y) {
                    let j = self.join(x, y).map_err(|_| (x, y))?;
                    if !(self.covers(x, j) && self.covers(y, j)) {
                        return Err((x, y));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_geometric(&self) -> Result<GeometricReport, LatticeError> {
        self.check_lattice()?;
        if let Err(w) = self.is_atomic() {
            return Ok(GeometricReport::NotAtomic { witness: w });
        }
        if let Err(w) = self.is_semimodular() {
            return Ok(GeometricReport::NotSemimodular { witness: w });
        }
        Ok(GeometricReport::Geometric)
    }

    pub fn from_json(v: &Value) -> Result<RawLattice, LatticeError> {
        let obj = v
            .as_object()
            .ok_or_else(|| LatticeError::Invalid("expected object".into()))?;
        let names: Vec<String> = obj
            .get("elements")
            .and_then(|e| e.as_array())
            .ok_or_else(|| LatticeError::Invalid("missing \"elements\"".into()))?
            .iter()
            .map(|n| n.as_str().map(|s| s.to_string()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| LatticeError::Invalid("element names must be strings".into()))?;
        let lookup = |s: &str| names.iter().position(|n| n == s);
        let mut covers = Vec::new();
        for c in obj
            .get("covers")
            .and_then(|c| c.as_array())
            .ok_or_else(|| LatticeError::Invalid("missing \"covers\"".into()))?
        {
            let pair = c
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| LatticeError::Invalid("cover: expected [lo, hi]".into()))?;
            let lo = pair[0]
                .as_str()
                .and_then(lookup)
                .ok_or_else(|| LatticeError::Invalid("unknown cover element".into()))?;
            let hi = pair[1]
                .as_str()
                .and_then(lookup)
                .ok_or_else(|| LatticeError::Invalid("unknown cover element".into()))?;
            covers.push((lo, hi));
        }
        RawLattice::from_covers(names, &covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::set_from_elems;

    fn figure2_matroid() -> Matroid {
        // columns of the 4x5 matrix [[1,0,0,1,0],[0,1,0,1,0],[0,0,1,1,0],[0,0,0,0,1]]
        use crate::field::{Field, Q};
        let cols: Vec<Vec<Q>> = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [1, 1, 1, 0],
            [0, 0, 0, 1],
        ]
        .iter()
        .map(|c| c.iter().map(|&v| Q::from_i64(v)).collect())
        .collect();
        Matroid::linear(&cols).unwrap()
    }

    #[test]
    fn comparator_examples() {
        // ranks only matter when unequal; all coatoms here have rank 3
        let c = |a: &[usize], b: &[usize]| {
            coatom_compare(3, set_from_elems(a), 3, set_from_elems(b))
        };
        assert_eq!(
            coatom_compare(3, set_from_elems(&[0, 1, 2, 3]), 2, set_from_elems(&[0, 1])),
            Ordering::Greater
        );
        assert_eq!(c(&[0, 1, 4], &[0, 2, 4]), Ordering::Greater); // 125 ≻ 135
        assert_eq!(c(&[0, 2, 4], &[1, 2, 4]), Ordering::Greater); // 135 ≻ 235
        assert_eq!(c(&[1, 2, 4], &[0, 3, 4]), Ordering::Greater); // 235 ≻ 145
        assert_eq!(c(&[0, 3, 4], &[1, 3, 4]), Ordering::Greater); // 145 ≻ 245
        assert_eq!(c(&[1, 3, 4], &[2, 3, 4]), Ordering::Greater); // 245 ≻ 345
        assert_eq!(c(&[0, 1], &[0, 1]), Ordering::Equal);
    }

    #[test]
    fn figure2_lattice() {
        let m = figure2_matroid();
        let l = FlatLattice::build(&m);
        assert_eq!(l.len(), 24);
        assert_eq!(l.by_rank(0).len(), 1);
        assert_eq!(l.by_rank(1).len(), 5);
        assert_eq!(l.by_rank(2).len(), 10);
        assert_eq!(l.by_rank(3).len(), 7);
        assert_eq!(l.by_rank(4).len(), 1);
        // coatoms in descending order: 1234 ≻ 125 ≻ 135 ≻ 235 ≻ 145 ≻ 245 ≻ 345
        let labels: Vec<String> =
            l.coatoms().iter().rev().map(|&f| l.label(f)).collect();
        assert_eq!(labels, vec!["1234", "125", "135", "235", "145", "245", "345"]);
        // meets and joins from Figure 2
        let id = |s: &[usize]| l.id_of(set_from_elems(s)).unwrap();
        assert_eq!(l.meet(id(&[0, 1, 2, 3]), id(&[0, 1, 4])), id(&[0, 1]));
        assert_eq!(l.join(id(&[0, 1]), id(&[2, 4])), l.top());
        assert_eq!(l.to_raw().is_geometric().unwrap(), GeometricReport::Geometric);
    }

    #[test]
    fn figure2_coat_restricted() {
        let m = figure2_matroid();
        let l = FlatLattice::build(&m);
        let id = |s: &[usize]| l.id_of(set_from_elems(s)).unwrap();
        let g1234 = id(&[0, 1, 2, 3]);
        let g125 = id(&[0, 1, 4]);
        assert_eq!(l.coat_restricted(&[g1234, g125], g125), vec![id(&[0, 1])]);
        assert_eq!(l.coat_restricted(&[g125], g125), Vec::<FlatId>::new());
    }

    #[test]
    fn coatom_order_verifies() {
        for m in [
            Matroid::uniform(3, 3),
            Matroid::uniform(2, 4),
            Matroid::uniform(3, 5),
            Matroid::uniform(5, 6),
            figure2_matroid(),
        ] {
            let l = FlatLattice::build(&m);
            l.verify_builtin_coatom_order().unwrap();
        }
    }

    #[test]
    fn scrambled_order_fails() {
        // swap 1234 and 345 in the Figure-2 coatom order
        let m = figure2_matroid();
        let l = FlatLattice::build(&m);
        let a = l.id_of(set_from_elems(&[0, 1, 2, 3])).unwrap();
        let b = l.id_of(set_from_elems(&[2, 3, 4])).unwrap();
        let swapped = move |x: FlatId| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        let r = l.verify_total_coatom_order(&move |x, y| swapped(x).cmp(&swapped(y)));
        assert!(r.is_err());
    }

    #[test]
    fn comparator_compatible_with_restriction() {
        // the order on [∅, F] agrees with the order of M|F after reindexing
        let m = figure2_matroid();
        let l = FlatLattice::build(&m);
        for f in l.all() {
            let fset = l.set_of(f);
            let sub = m.restrict_reindexed(fset);
            let subl = FlatLattice::build(&sub);
            let elems = elems_of(fset);
            let mut inside: Vec<FlatId> = l
                .all()
                .filter(|&g| l.leq(g, f))
                .collect();
            inside.sort_unstable();
            let reindex = |s: ESet| -> ESet {
                let mut out = 0;
                for (i, &e) in elems.iter().enumerate() {
                    if s & (1 << e) != 0 {
                        out |= 1 << i;
                    }
                }
                out
            };
            let mapped: Vec<FlatId> = inside
                .iter()
                .map(|&g| subl.id_of(reindex(l.set_of(g))).unwrap())
                .collect();
            let mut sorted = mapped.clone();
            sorted.sort_unstable();
            assert_eq!(mapped, sorted, "restriction order mismatch inside {}", l.label(f));
        }
    }

    #[test]
    fn u56_coatoms() {
        let l = FlatLattice::build(&Matroid::uniform(5, 6));
        assert_eq!(l.coatoms().len(), 15);
        assert!(l.coatoms().iter().all(|&c| l.set_of(c).count_ones() == 4));
    }

    fn figure3_raw() -> RawLattice {
        let names: Vec<String> =
            ["0", "a", "b", "c", "d", "e", "f", "1"].iter().map(|s| s.to_string()).collect();
        let covers = [
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (2, 5),
            (3, 6),
            (4, 6),
            (5, 7),
            (6, 7),
        ];
        RawLattice::from_covers(names, &covers).unwrap()
    }

    #[test]
    fn figure3_atomic_not_semimodular() {
        let l = figure3_raw();
        l.check_lattice().unwrap();
        assert!(l.is_atomic().is_ok());
        match l.is_geometric().unwrap() {
            GeometricReport::NotSemimodular { .. } => {}
            other => panic!("expected semimodularity failure, got {:?}", other),
        }
    }

    #[test]
    fn boolean_lattice_geometric() {
        let l = FlatLattice::build(&Matroid::uniform(3, 3));
        assert_eq!(l.to_raw().is_geometric().unwrap(), GeometricReport::Geometric);
    }

    #[test]
    fn raw_lattice_json() {
        let j = json!({
            "elements": ["0", "x", "y", "1"],
            "covers": [["0","x"],["0","y"],["x","1"],["y","1"]],
        });
        let l = RawLattice::from_json(&j).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.meet(1, 2).unwrap(), 0);
        assert_eq!(l.join(1, 2).unwrap(), 3);
    }
}
