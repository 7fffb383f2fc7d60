//! Brute-force model of a standard graded quotient R = k[x_1..x_n]/I as exact
//! vector spaces, one degree at a time.
//!
//! Degree d is presented on the ambient monomial set W_d = {b·x : b basis
//! monomial of degree d-1, x variable}. Its relation subspace is spanned by
//! (a) commutation vectors lift_x(nf(b·y)) - lift_y(nf(b·x)) for b of degree
//! d-2 (these make the variable-multiplication maps commute, so normal forms
//! are independent of factorization order), and (b) one vector per (relation
//! g, basis monomial b of degree d - deg g). Quotient bases are the non-pivot
//! ambient monomials under reduced echelon with graded-lex pivoting, so basis
//! choice is deterministic and the basis monomial set is an order ideal.
//! `naive_quotient_dims` computes the same dimensions with no incremental
//! structure at all (full monomial ambient, every monomial multiple of every
//! relation) and is used to cross-check this construction.

use crate::field::Field;
use crate::linalg::{kernel_basis, BudgetExceeded, Echelon, SparseVec};
use serde_json::{json, Value};
use std::collections::HashMap;
use thiserror::Error;

pub type VarId = u16;

/// Exponent-sparse monomial, entries sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<(VarId, u8)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(x: VarId) -> Monomial {
        Monomial(vec![(x, 1)])
    }

    pub fn deg(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn mul_var(&self, x: VarId) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by_key(&x, |e| e.0) {
            Ok(i) => out[i].1 += 1,
            Err(i) => out.insert(i, (x, 1)),
        }
        Monomial(out)
    }

    pub fn div_var(&self, x: VarId) -> Option<Monomial> {
        let mut out = self.0.clone();
        match out.binary_search_by_key(&x, |e| e.0) {
            Ok(i) => {
                if out[i].1 == 1 {
                    out.remove(i);
                } else {
                    out[i].1 -= 1;
                }
                Some(Monomial(out))
            }
            Err(_) => None,
        }
    }

    pub fn exponent(&self, x: VarId) -> u8 {
        self.0
            .binary_search_by_key(&x, |e| e.0)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Graded-lex with lower-index variables larger: higher degree wins, then
    /// the first variable (in index order) with differing exponent decides,
    /// larger exponent first.
    pub fn cmp_deglex(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.deg().cmp(&other.deg()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va == vb {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            o => return o,
                        }
                    } else if va < vb {
                        return Ordering::Greater; // self has the larger variable
                    } else {
                        return Ordering::Less;
                    }
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    names[v as usize].clone()
                } else {
                    format!("{}^{}", names[v as usize], e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<std::cmp::Ordering> {
        Some(self.cmp_deglex(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.cmp_deglex(other)
    }
}

/// Sparse polynomial: (monomial, coefficient) pairs, monomials distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<K> {
    pub terms: Vec<(Monomial, K)>,
}

impl<K: Field> Poly<K> {
    pub fn zero() -> Poly<K> {
        Poly { terms: Vec::new() }
    }

    pub fn collect(terms: Vec<(Monomial, K)>) -> Poly<K> {
        let mut map: HashMap<Monomial, K> = HashMap::new();
        for (m, c) in terms {
            let e = map.entry(m).or_insert_with(K::zero);
            *e = e.add(&c);
        }
        let mut terms: Vec<(Monomial, K)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp_deglex(&a.0));
        Poly { terms }
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|(m, _)| m.deg())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.iter().all(|(m, _)| m.deg() == d),
        }
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("{}·{}", c, m.display(names)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("relation is not homogeneous: degree mix")]
    Inhomogeneous,
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("ring is not Artinian within the cutoff (HF({0}) = {1} ≠ 0)")]
    NotArtinianWithinCutoff(usize, usize),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// A homogeneous element in quotient coordinates: its degree plus a sparse
/// vector over the chosen basis of that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<K> {
    pub deg: usize,
    pub vec: SparseVec<K>,
}

struct DegData<K: Field> {
    ambient: Vec<Monomial>, // descending graded-lex
    ambient_index: HashMap<Monomial, u32>,
    ech: Echelon<K>,
    basis: Vec<u32>, // non-pivot ambient columns, ascending column order
    basis_index: HashMap<Monomial, u32>, // monomial -> basis position
    col_to_basis: Vec<u32>, // ambient col -> basis position or u32::MAX
}

pub struct Engine<K: Field> {
    pub var_names: Vec<String>,
    pub relations: Vec<Poly<K>>,
    degs: Vec<DegData<K>>,
    d_max: usize,
    /// First degree with HF = 0, when reached within the cutoff.
    vanishing_degree: Option<usize>,
    max_entries: usize,
}

impl<K: Field> Engine<K> {
    pub fn build(
        var_names: Vec<String>,
        relations: Vec<Poly<K>>,
        d_max: usize,
    ) -> Result<Engine<K>, EngineError> {
        Self::build_with_budget(var_names, relations, d_max, crate::linalg::DEFAULT_MAX_ENTRIES)
    }

    pub fn build_with_budget(
        var_names: Vec<String>,
        relations: Vec<Poly<K>>,
        d_max: usize,
        max_entries: usize,
    ) -> Result<Engine<K>, EngineError> {
        for g in &relations {
            if !g.is_homogeneous() {
                return Err(EngineError::Inhomogeneous);
            }
            if let Some(d) = g.degree() {
                if d > d_max {
                    return Err(EngineError::CutoffTooSmall(format!(
                        "relation of degree {} exceeds cutoff {}",
                        d, d_max
                    )));
                }
                if d == 0 {
                    return Err(EngineError::Invalid("unit relation (degree 0)".into()));
                }
            }
        }
        let relations: Vec<Poly<K>> =
            relations.into_iter().filter(|g| !g.terms.is_empty()).collect();
        let mut eng = Engine {
            var_names,
            relations,
            degs: Vec::new(),
            d_max,
            vanishing_degree: None,
            max_entries,
        };
        // degree 0
        let one = Monomial::one();
        let mut d0 = DegData {
            ambient: vec![one.clone()],
            ambient_index: HashMap::new(),
            ech: Echelon::with_budget(1, max_entries),
            basis: vec![0],
            basis_index: HashMap::new(),
            col_to_basis: vec![0],
        };
        d0.ambient_index.insert(one.clone(), 0);
        d0.basis_index.insert(one, 0);
        eng.degs.push(d0);
        for d in 1..=d_max {
            if eng.vanishing_degree.is_some() {
                break;
            }
            eng.build_degree(d)?;
            if eng.dim(d) == 0 {
                eng.vanishing_degree = Some(d);
            }
        }
        Ok(eng)
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// True when degree d is known to be zero (past the vanishing degree).
    pub fn known_zero(&self, d: usize) -> bool {
        self.vanishing_degree.map_or(false, |v| d >= v)
    }

    /// The top nonzero degree, when the ring vanished within the cutoff.
    pub fn top_degree(&self) -> Option<usize> {
        self.vanishing_degree.map(|v| v - 1)
    }

    pub fn dim(&self, d: usize) -> usize {
        if d < self.degs.len() {
            self.degs[d].basis.len()
        } else if self.known_zero(d) {
            0
        } else {
            panic!("degree {} not built (cutoff {})", d, self.d_max)
        }
    }

    fn deg_data(&self, d: usize) -> &DegData<K> {
        &self.degs[d]
    }

    pub fn hilbert_function(&self) -> Vec<usize> {
        (0..self.degs.len()).map(|d| self.dim(d)).collect()
    }

    /// Hilbert series as a polynomial; requires vanishing within the cutoff.
    pub fn hilbert_series_poly(&self) -> Result<Vec<usize>, EngineError> {
        match self.vanishing_degree {
            Some(v) => Ok((0..v).map(|d| self.dim(d)).collect()),
            None => Err(EngineError::NotArtinianWithinCutoff(
                self.d_max,
                self.dim(self.d_max),
            )),
        }
    }

    pub fn basis_monomial(&self, d: usize, idx: u32) -> &Monomial {
        let dd = self.deg_data(d);
        &dd.ambient[dd.basis[idx as usize] as usize]
    }

    /// Normal form of an ambient-coordinate vector, in basis coordinates.
    fn nf_ambient(&self, d: usize, v: &SparseVec<K>) -> SparseVec<K> {
        let dd = self.deg_data(d);
        let r = dd.ech.reduce(v);
        SparseVec {
            entries: r
                .entries
                .into_iter()
                .map(|(c, k)| (dd.col_to_basis[c as usize], k))
                .collect::<Vec<_>>(),
        }
        .normalized()
    }

    /// Multiply a basis-coordinate vector of degree d by variable x.
    pub fn mul_by_var(&self, d: usize, v: &SparseVec<K>, x: VarId) -> Element<K> {
        if self.known_zero(d + 1) {
            return Element { deg: d + 1, vec: SparseVec::zero() };
        }
        assert!(d + 1 < self.degs.len(), "degree {} beyond cutoff", d + 1);
        let dd = self.deg_data(d);
        let next = self.deg_data(d + 1);
        let mut amb: Vec<(u32, K)> = Vec::with_capacity(v.entries.len());
        for (b, c) in &v.entries {
            let mono = dd.ambient[dd.basis[*b as usize] as usize].mul_var(x);
            let col = next.ambient_index[&mono];
            amb.push((col, c.clone()));
        }
        Element { deg: d + 1, vec: self.nf_ambient(d + 1, &SparseVec::collect(amb)) }
    }

    pub fn mul_element_by_monomial(&self, e: &Element<K>, m: &Monomial) -> Element<K> {
        let mut cur = e.clone();
        for &(v, exp) in &m.0 {
            for _ in 0..exp {
                cur = self.mul_by_var(cur.deg, &cur.vec, v);
            }
        }
        cur
    }

    pub fn mul_elements(&self, a: &Element<K>, b: &Element<K>) -> Element<K> {
        let mut acc: Vec<(u32, K)> = Vec::new();
        let target = a.deg + b.deg;
        if self.known_zero(target) {
            return Element { deg: target, vec: SparseVec::zero() };
        }
        for (bi, c) in &b.vec.entries {
            let m = self.basis_monomial(b.deg, *bi).clone();
            let prod = self.mul_element_by_monomial(a, &m);
            for (i, v) in prod.vec.entries {
                acc.push((i, v.mul(c)));
            }
        }
        Element { deg: target, vec: SparseVec::collect(acc) }
    }

    /// Normal form of an arbitrary monomial.
    pub fn nf_monomial(&self, m: &Monomial) -> Element<K> {
        let e = Element { deg: 0, vec: SparseVec::unit(0) };
        self.mul_element_by_monomial(&e, m)
    }

    /// Normal form of a polynomial.
    pub fn element_from_poly(&self, p: &Poly<K>) -> Result<Element<K>, EngineError> {
        if !p.is_homogeneous() {
            return Err(EngineError::Inhomogeneous);
        }
        let deg = p.degree().unwrap_or(0);
        if self.known_zero(deg) {
            return Ok(Element { deg, vec: SparseVec::zero() });
        }
        if deg >= self.degs.len() {
            return Err(EngineError::CutoffTooSmall(format!(
                "element of degree {} beyond cutoff {}",
                deg, self.d_max
            )));
        }
        let mut acc: Vec<(u32, K)> = Vec::new();
        for (m, c) in &p.terms {
            let nf = self.nf_monomial(m);
            for (i, v) in nf.vec.entries {
                acc.push((i, v.mul(c)));
            }
        }
        Ok(Element { deg, vec: SparseVec::collect(acc) })
    }

    fn build_degree(&mut self, d: usize) -> Result<(), EngineError> {
        let nvars = self.nvars() as VarId;
        // ambient monomials
        let prev_basis: Vec<Monomial> = {
            let pd = self.deg_data(d - 1);
            pd.basis
                .iter()
                .map(|&c| pd.ambient[c as usize].clone())
                .collect()
        };
        let mut ambient: Vec<Monomial> = Vec::new();
        {
            let mut seen: HashMap<Monomial, ()> = HashMap::new();
            for b in &prev_basis {
                for x in 0..nvars {
                    let m = b.mul_var(x);
                    if seen.insert(m.clone(), ()).is_none() {
                        ambient.push(m);
                    }
                }
            }
        }
        ambient.sort_by(|a, b| b.cmp_deglex(a));
        let ambient_index: HashMap<Monomial, u32> =
            ambient.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut ech = Echelon::with_budget(ambient.len(), self.max_entries);

        // (b) relation vectors
        let mut vectors: Vec<SparseVec<K>> = Vec::new();
        for g in &self.relations {
            let e = g.degree().unwrap();
            if e > d {
                continue;
            }
            let lower = self.deg_data(d - e);
            for bpos in 0..lower.basis.len() {
                let belt = Element {
                    deg: d - e,
                    vec: SparseVec::unit(bpos as u32),
                };
                let mut acc: Vec<(u32, K)> = Vec::new();
                for (m, c) in &g.terms {
                    // peel the largest variable (smallest index) of m
                    let xm = m.0[0].0;
                    let rest = m.div_var(xm).unwrap();
                    let w = self.mul_element_by_monomial(&belt, &rest); // degree d-1
                    let wd = self.deg_data(d - 1);
                    for (bi, v) in &w.vec.entries {
                        let mono = wd.ambient[wd.basis[*bi as usize] as usize].mul_var(xm);
                        acc.push((ambient_index[&mono], v.mul(c)));
                    }
                }
                vectors.push(SparseVec::collect(acc));
            }
        }
        // (a) commutation vectors
        if d >= 2 {
            let lower = self.deg_data(d - 2);
            let mid = self.deg_data(d - 1);
            for bpos in 0..lower.basis.len() {
                let bmono = lower.ambient[lower.basis[bpos] as usize].clone();
                // normal forms of b·x for all x, in degree d-1 basis coords
                let nfs: Vec<SparseVec<K>> = (0..nvars)
                    .map(|x| {
                        let mono = bmono.mul_var(x);
                        let col = mid.ambient_index[&mono];
                        let r = mid.ech.reduce(&SparseVec::unit(col));
                        SparseVec {
                            entries: r
                                .entries
                                .into_iter()
                                .map(|(c, k)| (mid.col_to_basis[c as usize], k))
                                .collect(),
                        }
                        .normalized()
                    })
                    .collect();
                let is_basis: Vec<bool> = (0..nvars)
                    .map(|x| mid.basis_index.contains_key(&bmono.mul_var(x)))
                    .collect();
                for x in 0..nvars {
                    for y in (x + 1)..nvars {
                        if is_basis[x as usize] && is_basis[y as usize] {
                            // both products are basis monomials: the two lifts
                            // are the same ambient column, vector is 0
                            continue;
                        }
                        let mut acc: Vec<(u32, K)> = Vec::new();
                        for (bi, v) in &nfs[y as usize].entries {
                            let mono =
                                mid.ambient[mid.basis[*bi as usize] as usize].mul_var(x);
                            acc.push((ambient_index[&mono], v.clone()));
                        }
                        for (bi, v) in &nfs[x as usize].entries {
                            let mono =
                                mid.ambient[mid.basis[*bi as usize] as usize].mul_var(y);
                            acc.push((ambient_index[&mono], v.neg()));
                        }
                        vectors.push(SparseVec::collect(acc));
                    }
                }
            }
        }
        for v in vectors {
            ech.insert(v)?;
        }

        let mut col_to_basis = vec![u32::MAX; ambient.len()];
        let mut basis = Vec::new();
        for c in 0..ambient.len() as u32 {
            if !ech.is_pivot(c) {
                col_to_basis[c as usize] = basis.len() as u32;
                basis.push(c);
            }
        }
        let basis_index: HashMap<Monomial, u32> = basis
            .iter()
            .enumerate()
            .map(|(i, &c)| (ambient[c as usize].clone(), i as u32))
            .collect();
        self.degs.push(DegData { ambient, ambient_index, ech, basis, basis_index, col_to_basis });
        Ok(())
    }

    // ---------- ideals ----------

    /// Per-degree spans of a homogeneous ideal, from degree 0 to the ring's
    /// last built degree.
    pub fn ideal_span(&self, gens: &[Element<K>]) -> Result<SubIdeal<K>, EngineError> {
        let dmax = self.degs.len() - 1;
        let mut slices: Vec<Echelon<K>> = (0..=dmax)
            .map(|d| Echelon::with_budget(self.dim(d), self.max_entries))
            .collect();
        for d in 0..=dmax {
            if d > 0 {
                let rows = slices[d - 1].canonical_rows();
                for row in rows {
                    for x in 0..self.nvars() as VarId {
                        let prod = self.mul_by_var(d - 1, &row, x);
                        slices[d].insert(prod.vec)?;
                    }
                }
            }
            for g in gens {
                if g.deg == d {
                    slices[d].insert(g.vec.clone())?;
                }
            }
        }
        for g in gens {
            if g.deg > dmax && !g.vec.is_zero() {
                return Err(EngineError::CutoffTooSmall(format!(
                    "generator of degree {} beyond built degrees",
                    g.deg
                )));
            }
        }
        Ok(SubIdeal { slices })
    }

    pub fn zero_ideal(&self) -> SubIdeal<K> {
        let dmax = self.degs.len() - 1;
        SubIdeal {
            slices: (0..=dmax)
                .map(|d| Echelon::with_budget(self.dim(d), self.max_entries))
                .collect(),
        }
    }

    /// Colon ideal (J : (f_1,...,f_k)) = {g : g·f_i ∈ J for all i}, degree by
    /// degree. Requires the ring to vanish within the cutoff so products past
    /// the top degree are genuinely zero.
    pub fn colon(
        &self,
        j: &SubIdeal<K>,
        fs: &[Element<K>],
    ) -> Result<SubIdeal<K>, EngineError> {
        if self.vanishing_degree.is_none() {
            return Err(EngineError::NotArtinianWithinCutoff(
                self.d_max,
                self.dim(self.d_max),
            ));
        }
        let dmax = self.degs.len() - 1;
        let mut slices: Vec<Echelon<K>> = Vec::new();
        for d in 0..=dmax {
            let n_d = self.dim(d);
            let mut slice = Echelon::with_budget(n_d, self.max_entries);
            // stacked map: b -> (b·f_i reduced mod J_(d+deg f_i))_i
            let mut offsets = Vec::new();
            let mut total = 0usize;
            for f in fs {
                offsets.push(total);
                let td = d + f.deg;
                total += if td <= dmax { self.dim(td) } else { 0 };
            }
            let mut columns: Vec<SparseVec<K>> = Vec::new();
            for b in 0..n_d as u32 {
                let belt = Element { deg: d, vec: SparseVec::unit(b) };
                let mut col: Vec<(u32, K)> = Vec::new();
                for (fi, f) in fs.iter().enumerate() {
                    let td = d + f.deg;
                    if td > dmax {
                        continue; // product is past the top degree: zero
                    }
                    let prod = self.mul_elements(f, &belt);
                    let red = j.slices[td].reduce(&prod.vec);
                    for (c, v) in red.entries {
                        col.push((offsets[fi] as u32 + c, v));
                    }
                }
                columns.push(SparseVec::collect(col));
            }
            for kv in kernel_basis(total, columns, self.max_entries)? {
                slice.insert(kv)?;
            }
            slices.push(slice);
        }
        Ok(SubIdeal { slices })
    }

    pub fn annihilator(&self, fs: &[Element<K>]) -> Result<SubIdeal<K>, EngineError> {
        let z = self.zero_ideal();
        self.colon(&z, fs)
    }

    /// Socle = annihilator of R_+ (all variables at once).
    pub fn socle(&self) -> Result<SubIdeal<K>, EngineError> {
        let vars: Vec<Element<K>> = (0..self.nvars() as VarId)
            .map(|x| {
                self.element_from_poly(&Poly::collect(vec![(Monomial::var(x), K::one())]))
            })
            .collect::<Result<_, _>>()?;
        self.colon(&self.zero_ideal(), &vars)
    }

    /// The ideal generated by the degree-1 slice of I.
    pub fn linear_part_ideal(&self, i: &SubIdeal<K>) -> Result<SubIdeal<K>, EngineError> {
        let gens: Vec<Element<K>> = i.slices[1]
            .canonical_rows()
            .into_iter()
            .map(|v| Element { deg: 1, vec: v })
            .collect();
        self.ideal_span(&gens)
    }

    pub fn is_generated_by_linear_forms(&self, i: &SubIdeal<K>) -> Result<bool, EngineError> {
        Ok(self.linear_part_ideal(i)?.equals(i))
    }

    /// Dimension of minimal generators of I in degree d:
    /// dim I_d - dim (R_1 · I_{d-1}).
    pub fn minimal_generators_dim(
        &self,
        i: &SubIdeal<K>,
        d: usize,
    ) -> Result<usize, EngineError> {
        if d == 0 {
            return Ok(i.slices[0].rank());
        }
        let mut prod = Echelon::with_budget(self.dim(d), self.max_entries);
        for row in i.slices[d - 1].canonical_rows() {
            for x in 0..self.nvars() as VarId {
                let p = self.mul_by_var(d - 1, &row, x);
                prod.insert(p.vec)?;
            }
        }
        Ok(i.slices[d].rank() - prod.rank())
    }

    /// True when f is a minimal generator of I: f ∈ I_d, f ∉ R_1·I_{d-1}.
    pub fn is_minimal_generator(
        &self,
        i: &SubIdeal<K>,
        f: &Element<K>,
    ) -> Result<bool, EngineError> {
        if f.deg == 0 || !i.slices[f.deg].contains(&f.vec) {
            return Ok(!f.vec.is_zero() && f.deg == 0);
        }
        let mut prod = Echelon::with_budget(self.dim(f.deg), self.max_entries);
        for row in i.slices[f.deg - 1].canonical_rows() {
            for x in 0..self.nvars() as VarId {
                let p = self.mul_by_var(f.deg - 1, &row, x);
                prod.insert(p.vec)?;
            }
        }
        Ok(!prod.contains(&f.vec))
    }

    // ---------- minimal free resolution of the residue field ----------

    /// Graded Betti numbers β_{i,j}(k) for i ≤ i_max, j ≤ j_max, by the
    /// stepwise minimal resolution: kernels per degree, minimal generators as
    /// the echelon complement of R_1 · (kernel one degree lower).
    pub fn betti_of_residue_field(
        &self,
        i_max: usize,
        j_max: usize,
    ) -> Result<BettiTable, EngineError> {
        if self.vanishing_degree.is_none() {
            return Err(EngineError::NotArtinianWithinCutoff(
                self.d_max,
                self.dim(self.d_max),
            ));
        }
        let dmax = self.degs.len() - 1;
        let mut table = BettiTable::new(i_max, j_max);
        table.set(0, 0, 1);

        // A generator of F_i: its degree and image in F_{i-1} coordinates.
        // F_{i-1} degree-j coordinates: for generator h (degree d_h), a block
        // of ring-basis coordinates of degree j - d_h; block offsets are
        // recomputed per degree.
        struct Gen<K> {
            deg: usize,
            image: Vec<(usize, usize, K)>, // (prev gen index, ring basis index, coeff)
        }

        // F_0 = R with a single generator; K_0 = R_+ handled directly.
        let mut gens: Vec<Gen<K>> = vec![Gen { deg: 0, image: Vec::new() }];
        // kernel bases of the previous step, per degree j: vectors in F_i
        // coordinates (gen index, ring basis index).
        // K_0 = R_+: unit vectors on every basis element of degree ≥ 1.
        let mut kernels: Vec<Vec<Vec<(usize, usize, K)>>> = vec![Vec::new(); j_max + 1];
        for (j, kj) in kernels.iter_mut().enumerate().take(j_max + 1).skip(1) {
            if j > dmax {
                continue;
            }
            for b in 0..self.dim(j) {
                kj.push(vec![(0usize, b, K::one())]);
            }
        }

        for i in 1..=i_max {
            // minimal generators of K_{i-1}: per degree j, complement of
            // R_1·K_{i-1,j-1} inside span K_{i-1,j}
            let offsets_for = |gens: &Vec<Gen<K>>, j: usize| -> (Vec<usize>, usize) {
                let mut offs = Vec::with_capacity(gens.len());
                let mut total = 0usize;
                for g in gens {
                    offs.push(total);
                    if g.deg <= j && j - g.deg <= dmax {
                        total += self.dim(j - g.deg);
                    }
                }
                (offs, total)
            };
            let to_vec = |offs: &Vec<usize>, v: &Vec<(usize, usize, K)>| -> SparseVec<K> {
                SparseVec::collect(
                    v.iter()
                        .map(|(g, b, c)| ((offs[*g] + *b) as u32, c.clone()))
                        .collect(),
                )
            };

            let mut new_gens: Vec<Gen<K>> = Vec::new();
            for j in 0..=j_max {
                if kernels[j].is_empty() {
                    continue;
                }
                let (offs, total) = offsets_for(&gens, j);
                let mut span = Echelon::with_budget(total, self.max_entries);
                if j >= 1 {
                    for kv in &kernels[j - 1] {
                        for x in 0..self.nvars() as VarId {
                            // multiply the ring part of each coordinate by x
                            let mut acc: Vec<(u32, K)> = Vec::new();
                            for (g, b, c) in kv {
                                let gd = gens[*g].deg;
                                let prod = self.mul_by_var(
                                    j - 1 - gd,
                                    &SparseVec::unit(*b as u32),
                                    x,
                                );
                                for (nb, v) in prod.vec.entries {
                                    acc.push((
                                        (offs[*g] + nb as usize) as u32,
                                        v.mul(c),
                                    ));
                                }
                            }
                            span.insert(SparseVec::collect(acc))?;
                        }
                    }
                }
                let mut count = 0usize;
                for kv in &kernels[j] {
                    let v = to_vec(&offs, kv);
                    if span.insert(v)?.is_some() {
                        new_gens.push(Gen { deg: j, image: kv.clone() });
                        count += 1;
                    }
                }
                table.set(i, j, count);
            }
            if i == i_max {
                break;
            }
            // kernels of F_i -> F_{i-1} per degree j ≤ j_max
            let prev_gens = std::mem::replace(&mut gens, Vec::new());
            let mut next_kernels: Vec<Vec<Vec<(usize, usize, K)>>> = vec![Vec::new(); j_max + 1];
            for j in 0..=j_max {
                // F_i degree-j coordinate layout over new_gens
                let mut offs_i = Vec::with_capacity(new_gens.len());
                let mut total_i = 0usize;
                for g in &new_gens {
                    offs_i.push(total_i);
                    if g.deg <= j && j - g.deg <= dmax {
                        total_i += self.dim(j - g.deg);
                    }
                }
                if total_i == 0 {
                    continue;
                }
                let mut offs_prev = Vec::with_capacity(prev_gens.len());
                let mut total_prev = 0usize;
                for g in &prev_gens {
                    offs_prev.push(total_prev);
                    if g.deg <= j && j - g.deg <= dmax {
                        total_prev += self.dim(j - g.deg);
                    }
                }
                // columns: for each (gen g of F_i, ring basis b of degree
                // j - d_g): image = b · κ_g in F_{i-1} coordinates
                let mut columns: Vec<SparseVec<K>> = Vec::new();
                let mut column_labels: Vec<(usize, usize)> = Vec::new();
                for (gi, g) in new_gens.iter().enumerate() {
                    if g.deg > j || j - g.deg > dmax {
                        continue;
                    }
                    let bdim = self.dim(j - g.deg);
                    for b in 0..bdim {
                        let bmono = self
                            .basis_monomial(j - g.deg, b as u32)
                            .clone();
                        let mut acc: Vec<(u32, K)> = Vec::new();
                        for (h, w, c) in &g.image {
                            let hd = prev_gens[*h].deg;
                            let we = Element {
                                deg: g.deg - hd,
                                vec: SparseVec::unit(*w as u32),
                            };
                            let prod = self.mul_element_by_monomial(&we, &bmono);
                            for (nb, v) in prod.vec.entries {
                                acc.push((
                                    (offs_prev[*h] + nb as usize) as u32,
                                    v.mul(c),
                                ));
                            }
                        }
                        columns.push(SparseVec::collect(acc));
                        column_labels.push((gi, b));
                    }
                }
                for kv in kernel_basis(total_prev, columns, self.max_entries)? {
                    let translated: Vec<(usize, usize, K)> = kv
                        .entries
                        .into_iter()
                        .map(|(c, v)| {
                            let (gi, b) = column_labels[c as usize];
                            (gi, b, v)
                        })
                        .collect();
                    next_kernels[j].push(translated);
                }
            }
            gens = new_gens;
            kernels = next_kernels;
        }
        Ok(table)
    }

    // ---------- JSON ----------

    pub fn presentation_to_json(&self) -> Value {
        let rels: Vec<Value> = self
            .relations
            .iter()
            .map(|g| {
                Value::Array(
                    g.terms
                        .iter()
                        .map(|(m, c)| {
                            let mut exps = vec![0u8; self.nvars()];
                            for &(v, e) in &m.0 {
                                exps[v as usize] = e;
                            }
                            json!({
                                "coeff": c.to_string(),
                                "exps": exps,
                            })
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "vars": self.var_names,
            "relations": rels,
            "field": K::name(),
        })
    }
}

impl<K: Field> SparseVec<K> {
    fn normalized(mut self) -> SparseVec<K> {
        self.entries.sort_by_key(|e| e.0);
        self
    }
}

/// Per-degree coordinate subspaces of an ideal (or any graded subspace
/// closed under the checks the caller performs).
pub struct SubIdeal<K: Field> {
    pub slices: Vec<Echelon<K>>,
}

impl<K: Field> SubIdeal<K> {
    pub fn dim(&self, d: usize) -> usize {
        self.slices.get(d).map_or(0, |s| s.rank())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.rank()).collect()
    }

    pub fn contains_element(&self, e: &Element<K>) -> bool {
        match self.slices.get(e.deg) {
            Some(s) => s.contains(&e.vec),
            None => e.vec.is_zero(),
        }
    }

    pub fn equals(&self, other: &SubIdeal<K>) -> bool {
        let n = self.slices.len().max(other.slices.len());
        for d in 0..n {
            match (self.slices.get(d), other.slices.get(d)) {
                (Some(a), Some(b)) => {
                    if !a.same_span(b) {
                        return false;
                    }
                }
                (Some(a), None) => {
                    if a.rank() != 0 {
                        return false;
                    }
                }
                (None, Some(b)) => {
                    if b.rank() != 0 {
                        return false;
                    }
                }
                (None, None) => {}
            }
        }
        true
    }

    pub fn contains_ideal(&self, other: &SubIdeal<K>) -> bool {
        for (d, s) in other.slices.iter().enumerate() {
            for row in s.canonical_rows() {
                match self.slices.get(d) {
                    Some(mine) => {
                        if !mine.contains(&row) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }
}

/// Graded Betti table β_{i,j}, 0 ≤ i ≤ i_max, 0 ≤ j ≤ j_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub i_max: usize,
    pub j_max: usize,
    data: Vec<usize>,
}

impl BettiTable {
    pub fn new(i_max: usize, j_max: usize) -> BettiTable {
        BettiTable { i_max, j_max, data: vec![0; (i_max + 1) * (j_max + 1)] }
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        if i <= self.i_max && j <= self.j_max {
            self.data[i * (self.j_max + 1) + j]
        } else {
            0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: usize) {
        self.data[i * (self.j_max + 1) + j] = v;
    }

    /// β_i = Σ_j β_{i,j} (total Betti numbers).
    pub fn totals(&self) -> Vec<usize> {
        (0..=self.i_max)
            .map(|i| (0..=self.j_max).map(|j| self.get(i, j)).sum())
            .collect()
    }

    /// Indices (i, j) with j ≠ i and β_{i,j} ≠ 0 — nonlinearity witnesses.
    pub fn nonlinear_entries(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 0..=self.i_max {
            for j in 0..=self.j_max {
                if j != i && self.get(i, j) != 0 {
                    out.push((i, j, self.get(i, j)));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut rows = Vec::new();
        for i in 0..=self.i_max {
            rows.push(Value::Array(
                (0..=self.j_max).map(|j| Value::from(self.get(i, j) as u64)).collect(),
            ));
        }
        json!({ "i_max": self.i_max, "j_max": self.j_max, "rows": rows })
    }

    /// Aligned text grid, homological degree i across columns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = self
            .data
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1)
            .max(3);
        out.push_str(&format!("{:>4} ", "j\\i"));
        for i in 0..=self.i_max {
            out.push_str(&format!("{:>w$} ", i, w = w));
        }
        out.push('\n');
        for j in 0..=self.j_max {
            out.push_str(&format!("{:>4} ", j));
            for i in 0..=self.i_max {
                let v = self.get(i, j);
                if v == 0 {
                    out.push_str(&format!("{:>w$} ", ".", w = w));
                } else {
                    out.push_str(&format!("{:>w$} ", v, w = w));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Presentation import: {"vars": [...], "relations": [[{"coeff": "c", "exps": [..]}]]}.
pub fn presentation_from_json<K: Field>(
    v: &Value,
) -> Result<(Vec<String>, Vec<Poly<K>>), EngineError> {
    let obj = v
        .as_object()
        .ok_or_else(|| EngineError::Invalid("expected object".into()))?;
    let vars: Vec<String> = obj
        .get("vars")
        .and_then(|v| v.as_array())
        .ok_or_else(|| EngineError::Invalid("missing \"vars\"".into()))?
        .iter()
        .map(|n| n.as_str().map(|s| s.to_string()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| EngineError::Invalid("variable names must be strings".into()))?;
    let mut relations = Vec::new();
    for rel in obj
        .get("relations")
        .and_then(|r| r.as_array())
        .ok_or_else(|| EngineError::Invalid("missing \"relations\"".into()))?
    {
        let terms = rel
            .as_array()
            .ok_or_else(|| EngineError::Invalid("relation: expected array".into()))?;
        let mut poly_terms = Vec::new();
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| EngineError::Invalid("term: missing \"coeff\"".into()))?;
            let coeff = crate::field::Q::parse(coeff)
                .ok_or_else(|| EngineError::Invalid(format!("bad coefficient {coeff}")))?;
            // re-express in K via numerator/denominator
            let k = match &coeff {
                crate::field::Q::Small(n, d) => K::from_i64(*n).mul(&K::from_i64(*d).inv()),
                crate::field::Q::Big(_) => {
                    return Err(EngineError::Invalid(
                        "coefficient too large for import".into(),
                    ))
                }
            };
            let exps = t
                .get("exps")
                .and_then(|e| e.as_array())
                .ok_or_else(|| EngineError::Invalid("term: missing \"exps\"".into()))?;
            if exps.len() != vars.len() {
                return Err(EngineError::Invalid("exponent vector length mismatch".into()));
            }
            let mono = Monomial(
                exps.iter()
                    .enumerate()
                    .filter_map(|(i, e)| {
                        let e = e.as_u64().unwrap_or(0) as u8;
                        (e > 0).then_some((i as VarId, e))
                    })
                    .collect(),
            );
            poly_terms.push((mono, k));
        }
        relations.push(Poly::collect(poly_terms));
    }
    Ok((vars, relations))
}

/// Reference implementation with no incremental structure: ambient = all
/// monomials of degree d, relation space = every monomial multiple of every
/// relation. Exact by construction; used to cross-check `Engine`.
pub fn naive_quotient_dims<K: Field>(
    nvars: usize,
    relations: &[Poly<K>],
    d_max: usize,
) -> Vec<usize> {
    fn monomials(nvars: usize, d: usize) -> Vec<Monomial> {
        fn rec(nvars: usize, from: usize, d: usize, cur: &mut Vec<(VarId, u8)>, out: &mut Vec<Monomial>) {
            if d == 0 {
                out.push(Monomial(cur.clone()));
                return;
            }
            for v in from..nvars {
                match cur.last_mut() {
                    Some(last) if last.0 as usize == v => last.1 += 1,
                    _ => cur.push((v as VarId, 1)),
                }
                rec(nvars, v, d - 1, cur, out);
                match cur.last_mut() {
                    Some(last) if last.0 as usize == v && last.1 > 1 => last.1 -= 1,
                    _ => {
                        cur.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(nvars, 0, d, &mut Vec::new(), &mut out);
        out
    }
    let mut dims = Vec::new();
    for d in 0..=d_max {
        let ambient = monomials(nvars, d);
        let index: HashMap<Monomial, u32> =
            ambient.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut ech = Echelon::<K>::new(ambient.len());
        for g in relations {
            let e = match g.degree() {
                Some(e) if e <= d => e,
                _ => continue,
            };
            for m in monomials(nvars, d - e) {
                let mut acc: Vec<(u32, K)> = Vec::new();
                for (gm, c) in &g.terms {
                    let mut prod = gm.clone();
                    for &(v, ex) in &m.0 {
                        for _ in 0..ex {
                            prod = prod.mul_var(v);
                        }
                    }
                    acc.push((index[&prod], c.clone()));
                }
                ech.insert(SparseVec::collect(acc)).expect("naive oracle budget");
            }
        }
        dims.push(ambient.len() - ech.rank());
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn qp(terms: &[(&[(u16, u8)], i64)]) -> Poly<Q> {
        Poly::collect(
            terms
                .iter()
                .map(|(m, c)| (Monomial(m.to_vec()), Q::from_i64(*c)))
                .collect(),
        )
    }

    #[test]
    fn one_variable_cube() {
        // k[x]/(x^3): dims 1,1,1,0
        let rels = vec![qp(&[(&[(0, 3)], 1)])];
        let eng = Engine::<Q>::build(vec!["x".into()], rels, 4).unwrap();
        assert_eq!(eng.hilbert_function(), vec![1, 1, 1, 0]);
        assert_eq!(eng.top_degree(), Some(2));
    }

    #[test]
    fn free_algebra_dims() {
        let eng = Engine::<Q>::build(
            vec!["x".into(), "y".into(), "z".into()],
            vec![],
            4,
        )
        .unwrap();
        assert_eq!(eng.hilbert_function(), vec![1, 3, 6, 10, 15]);
    }

    #[test]
    fn squarefree_quadratic() {
        // k[x,y]/(x², y²): dims 1,2,1,0
        let rels = vec![qp(&[(&[(0, 2)], 1)]), qp(&[(&[(1, 2)], 1)])];
        let eng = Engine::<Q>::build(vec!["x".into(), "y".into()], rels, 4).unwrap();
        assert_eq!(eng.hilbert_function(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn linear_relation_handled() {
        // k[x,y]/(x - y, x²) ≅ k[x]/(x²)
        let rels = vec![
            qp(&[(&[(0, 1)], 1), (&[(1, 1)], -1)]),
            qp(&[(&[(0, 2)], 1)]),
        ];
        let eng = Engine::<Q>::build(vec!["x".into(), "y".into()], rels, 3).unwrap();
        assert_eq!(eng.hilbert_function(), vec![1, 1, 0]);
    }

    #[test]
    fn matches_naive_on_random_presentations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for trial in 0..25 {
            let nvars = rng.gen_range(1..4usize);
            let nrels = rng.gen_range(1..4usize);
            let mut rels = Vec::new();
            for _ in 0..nrels {
                let deg = rng.gen_range(1..3usize);
                let nterms = rng.gen_range(1..4usize);
                let mut terms = Vec::new();
                for _ in 0..nterms {
                    let mut m = Monomial::one();
                    for _ in 0..deg {
                        m = m.mul_var(rng.gen_range(0..nvars) as VarId);
                    }
                    terms.push((m, Q::from_i64(rng.gen_range(-3..4))));
                }
                let p = Poly::collect(terms);
                if !p.terms.is_empty() {
                    rels.push(p);
                }
            }
            let names: Vec<String> = (0..nvars).map(|i| format!("x{}", i)).collect();
            let d_max = 5;
            let eng = Engine::<Q>::build(names, rels.clone(), d_max).unwrap();
            let naive = naive_quotient_dims(nvars, &rels, d_max);
            let mut got = eng.hilbert_function();
            // engine stops at the vanishing degree; pad with zeros
            while got.len() < naive.len() {
                got.push(0);
            }
            assert_eq!(got, naive, "trial {} rels {:?}", trial, rels);
        }
    }

    #[test]
    fn multiplication_is_commutative_and_associative() {
        // in k[x,y,z]/(x²-yz, y²-xz) products must not depend on order
        let rels = vec![
            qp(&[(&[(0, 2)], 1), (&[(1, 1), (2, 1)], -1)]),
            qp(&[(&[(1, 2)], 1), (&[(0, 1), (2, 1)], -1)]),
        ];
        let eng =
            Engine::<Q>::build(vec!["x".into(), "y".into(), "z".into()], rels, 6).unwrap();
        let x = eng.nf_monomial(&Monomial::var(0));
        let y = eng.nf_monomial(&Monomial::var(1));
        let z = eng.nf_monomial(&Monomial::var(2));
        let xy = eng.mul_elements(&x, &y);
        let yx = eng.mul_elements(&y, &x);
        assert_eq!(xy, yx);
        let xy_z = eng.mul_elements(&xy, &z);
        let yz = eng.mul_elements(&y, &z);
        let x_yz = eng.mul_elements(&x, &yz);
        assert_eq!(xy_z, x_yz);
    }

    #[test]
    fn ideal_colon_annihilator_socle() {
        // k[x,y]/(x², y²): socle = span(xy) in degree 2
        let rels = vec![qp(&[(&[(0, 2)], 1)]), qp(&[(&[(1, 2)], 1)])];
        let eng = Engine::<Q>::build(vec!["x".into(), "y".into()], rels, 3).unwrap();
        let soc = eng.socle().unwrap();
        assert_eq!(soc.dims(), vec![0, 0, 1, 0]);
        // (0 : x) = (x) since x·x = 0 and x·y = xy ≠ 0... check:
        let x = eng.nf_monomial(&Monomial::var(0));
        let ann = eng.annihilator(&[x.clone()]).unwrap();
        let ix = eng.ideal_span(&[x.clone()]).unwrap();
        assert!(ann.equals(&ix));
        // colon(J, 1) = J
        let one = Element { deg: 0, vec: SparseVec::unit(0) };
        let j = eng.ideal_span(&[x]).unwrap();
        let c = eng.colon(&j, &[one]).unwrap();
        assert!(c.equals(&j));
    }

    #[test]
    fn linear_generation_test() {
        let rels = vec![qp(&[(&[(0, 2)], 1)]), qp(&[(&[(1, 2)], 1)])];
        let eng = Engine::<Q>::build(vec!["x".into(), "y".into()], rels, 3).unwrap();
        let x = eng.nf_monomial(&Monomial::var(0));
        let ix = eng.ideal_span(&[x]).unwrap();
        assert!(eng.is_generated_by_linear_forms(&ix).unwrap());
        let xy = eng.nf_monomial(&Monomial(vec![(0, 1), (1, 1)]));
        let ixy = eng.ideal_span(&[xy.clone()]).unwrap();
        assert!(!eng.is_generated_by_linear_forms(&ixy).unwrap());
        assert!(eng.is_minimal_generator(&ixy, &xy).unwrap());
    }

    #[test]
    fn betti_of_hypersurfaces() {
        // k[x]/(x²): β_{i,i} = 1 for all i
        let eng =
            Engine::<Q>::build(vec!["x".into()], vec![qp(&[(&[(0, 2)], 1)])], 3).unwrap();
        let b = eng.betti_of_residue_field(4, 5).unwrap();
        for i in 0..=4 {
            assert_eq!(b.get(i, i), 1, "β_{{{i},{i}}}");
        }
        assert!(b.nonlinear_entries().is_empty());
        // k[x]/(x³): β_{0,0}=1, β_{1,1}=1, β_{2,3}=1, β_{3,4}=1
        let eng =
            Engine::<Q>::build(vec!["x".into()], vec![qp(&[(&[(0, 3)], 1)])], 4).unwrap();
        let b = eng.betti_of_residue_field(3, 4).unwrap();
        assert_eq!(b.get(0, 0), 1);
        assert_eq!(b.get(1, 1), 1);
        assert_eq!(b.get(2, 3), 1);
        assert_eq!(b.get(3, 4), 1);
        assert_eq!(b.totals(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn betti_of_koszul_complete_intersection() {
        // k[x,y]/(x², y²) is Koszul; β_i = coefficients of 1/HS(-t),
        // HS = 1 + 2t + t², so 1/(1-2t+t²) = Σ (i+1) t^i
        let rels = vec![qp(&[(&[(0, 2)], 1)]), qp(&[(&[(1, 2)], 1)])];
        let eng = Engine::<Q>::build(vec!["x".into(), "y".into()], rels, 3).unwrap();
        let b = eng.betti_of_residue_field(4, 5).unwrap();
        assert!(b.nonlinear_entries().is_empty());
        assert_eq!(b.totals(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn presentation_json_roundtrip() {
        let rels = vec![qp(&[(&[(0, 2)], 1), (&[(1, 1), (2, 1)], -2)])];
        let eng = Engine::<Q>::build(
            vec!["x".into(), "y".into(), "z".into()],
            rels.clone(),
            3,
        )
        .unwrap();
        let j = eng.presentation_to_json();
        let (vars, back) = presentation_from_json::<Q>(&j).unwrap();
        assert_eq!(vars, vec!["x", "y", "z"]);
        assert_eq!(back, rels);
    }
}
