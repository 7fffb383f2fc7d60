//! Building sets and nested-set complexes over atomic lattices, and the
//! associated generalized Chow ring presentations D(L, G).
//!
//! A subset G of L \ {0̂} is a building set when for every x the product of
//! the intervals below the maximal G-elements under x is isomorphic to
//! [0̂, x] via the join map. D(L, G) is presented by the Stanley–Reisner
//! monomials of the nested complex (minimal non-faces: antichains in G of
//! size ≥ 2 whose join lies in G... see `nested_complex`) together with one
//! linear form per atom; the linear forms are eliminated by substitution
//! before the presentation reaches the quotient engine.

use crate::engine::{Monomial, Poly, VarId};
use crate::field::Field;
use crate::lattice::{LatticeError, RawLattice};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuildingError {
    #[error("lattice is not atomic (witness element {0})")]
    NotAtomic(usize),
    #[error("not a building set: interval product fails at element {0}")]
    NotABuildingSet(usize),
    #[error("building set members must exclude the bottom element")]
    ContainsBottom,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Check the interval-product isomorphism at every element; returns the
/// per-element factor lists on success.
pub fn is_building_set(
    l: &RawLattice,
    g: &[usize],
) -> Result<Vec<Vec<usize>>, BuildingError> {
    if let Err(w) = l.is_atomic() {
        return Err(BuildingError::NotAtomic(w));
    }
    if g.contains(&l.bottom()) {
        return Err(BuildingError::ContainsBottom);
    }
    let mut factors_of = Vec::with_capacity(l.len());
    for x in 0..l.len() {
        if x == l.bottom() {
            factors_of.push(Vec::new());
            continue;
        }
        let below: Vec<usize> = g.iter().copied().filter(|&y| l.leq(y, x)).collect();
        let factors: Vec<usize> = below
            .iter()
            .copied()
            .filter(|&y| below.iter().all(|&z| z == y || !l.leq(y, z)))
            .collect();
        if !interval_product_isomorphic(l, x, &factors)? {
            return Err(BuildingError::NotABuildingSet(x));
        }
        factors_of.push(factors);
    }
    Ok(factors_of)
}

/// Does the join map ∏ [0̂, g_i] → [0̂, x] define a poset isomorphism?
fn interval_product_isomorphic(
    l: &RawLattice,
    x: usize,
    factors: &[usize],
) -> Result<bool, BuildingError> {
    let intervals: Vec<Vec<usize>> = factors
        .iter()
        .map(|&f| (0..l.len()).filter(|&y| l.leq(y, f)).collect())
        .collect();
    let target: Vec<usize> = (0..l.len()).filter(|&y| l.leq(y, x)).collect();
    let size: usize = intervals.iter().map(|iv| iv.len()).product();
    if size != target.len() {
        return Ok(false);
    }
    // enumerate tuples, record joins; bijectivity + both-ways monotonicity
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for iv in &intervals {
        let mut next = Vec::with_capacity(tuples.len() * iv.len());
        for t in &tuples {
            for &y in iv {
                let mut t2 = t.clone();
                t2.push(y);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut joins: Vec<usize> = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut acc = l.bottom();
        for &y in t {
            acc = l.join(acc, y)?;
        }
        joins.push(acc);
    }
    let mut seen = vec![false; l.len()];
    for &j in &joins {
        if !l.leq(j, x) || seen[j] {
            return Ok(false);
        }
        seen[j] = true;
    }
    // order preservation both ways: t ≤ t' componentwise iff join ≤ join
    for (a, ja) in tuples.iter().zip(&joins) {
        for (b, jb) in tuples.iter().zip(&joins) {
            let comp = a.iter().zip(b).all(|(&p, &q)| l.leq(p, q));
            if comp != l.leq(*ja, *jb) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The maximal building set: every element except the bottom.
pub fn maximal_building_set(l: &RawLattice) -> Vec<usize> {
    (0..l.len()).filter(|&x| x != l.bottom()).collect()
}

/// The minimal building set: the irreducible elements, i.e. those x whose
/// interval [0̂, x] is not a nontrivial product of smaller intervals under
/// the join map. Found by exhaustive factor search.
pub fn minimal_building_set(l: &RawLattice) -> Result<Vec<usize>, BuildingError> {
    let mut out = Vec::new();
    for x in 0..l.len() {
        if x == l.bottom() {
            continue;
        }
        if !is_reducible(l, x)? {
            out.push(x);
        }
    }
    Ok(out)
}

fn is_reducible(l: &RawLattice, x: usize) -> Result<bool, BuildingError> {
    // search antichains {y_1..y_k} ⊆ (0̂, x), k ≥ 2, with join x and a
    // product isomorphism
    let strictly_below: Vec<usize> = (0..l.len())
        .filter(|&y| y != l.bottom() && y != x && l.leq(y, x))
        .collect();
    let n = strictly_below.len();
    if n < 2 {
        return Ok(false);
    }
    for mask in 1u64..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let cand: Vec<usize> = strictly_below
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &y)| y)
            .collect();
        let antichain = cand
            .iter()
            .all(|&a| cand.iter().all(|&b| a == b || !l.leq(a, b)));
        if !antichain {
            continue;
        }
        let mut acc = l.bottom();
        for &y in &cand {
            acc = l.join(acc, y)?;
        }
        if acc != x {
            continue;
        }
        if interval_product_isomorphic(l, x, &cand)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Minimal non-faces of the nested complex N(L, G): inclusion-minimal
/// antichains S ⊆ G with |S| ≥ 2 and join(S) ∈ G.
pub fn nested_complex_nonfaces(
    l: &RawLattice,
    g: &[usize],
) -> Result<Vec<Vec<usize>>, BuildingError> {
    // Depth-first search over antichains. A face of the nested complex is an
    // antichain none of whose subsets of size >= 2 joins into G, so the
    // search only ever extends faces: once a subset joins into G the current
    // set contains a non-face and no superset can be a *minimal* one.
    let mut nonfaces: Vec<Vec<usize>> = Vec::new();
    let join_in_g = |s: &[usize]| -> Result<bool, BuildingError> {
        let mut acc = l.bottom();
        for &y in s {
            acc = l.join(acc, y)?;
        }
        Ok(g.contains(&acc))
    };
    // minimal non-face test: joins into G, no proper subset (size >= 2) does
    let is_minimal_nonface = |s: &[usize]| -> Result<bool, BuildingError> {
        if !join_in_g(s)? {
            return Ok(false);
        }
        for mask in 1u64..(1u64 << s.len()) - 1 {
            if mask.count_ones() < 2 {
                continue;
            }
            let sub: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &y)| y)
                .collect();
            if join_in_g(&sub)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((face, start)) = stack.pop() {
        for (i, &y) in g.iter().enumerate().skip(start) {
            if !face
                .iter()
                .all(|&a| !l.leq(a, y) && !l.leq(y, a))
            {
                continue;
            }
            let mut ext = face.clone();
            ext.push(y);
            // any subset of `ext` joining into G must contain y; find the
            // minimal non-faces among those, or extend if there are none
            let mut found_nonface = false;
            for mask in 0u64..(1u64 << face.len()) {
                if mask.count_ones() < 1 {
                    continue;
                }
                let mut cand: Vec<usize> = face
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &z)| z)
                    .collect();
                cand.push(y);
                if join_in_g(&cand)? {
                    found_nonface = true;
                    if is_minimal_nonface(&cand)? && !nonfaces.contains(&cand) {
                        nonfaces.push(cand);
                    }
                }
            }
            if !found_nonface {
                stack.push((ext, i + 1));
            }
        }
    }
    for nf in &mut nonfaces {
        nf.sort_unstable();
    }
    nonfaces.sort();
    nonfaces.dedup();
    Ok(nonfaces)
}

/// Presentation of D(L, G) after eliminating the atom linear forms
/// Σ_{g ∈ G, g ≥ a} x_g by substitution: pivot variables of the echelonized
/// linear span are rewritten in terms of the rest inside each non-face
/// monomial.
pub struct DlgPresentation<K: Field> {
    /// Lattice elements carrying the surviving variables, in index order.
    pub vars: Vec<usize>,
    pub var_names: Vec<String>,
    pub relations: Vec<Poly<K>>,
    /// Eliminated elements with their substitutes (over surviving vars).
    pub eliminated: Vec<(usize, Poly<K>)>,
}

pub fn dlg_presentation<K: Field>(
    l: &RawLattice,
    g: &[usize],
) -> Result<DlgPresentation<K>, BuildingError> {
    is_building_set(l, g)?;
    let nonfaces = nested_complex_nonfaces(l, g)?;
    // linear forms, echelonized by hand over the g-index coordinates: pick
    // the first remaining variable of each form as its pivot
    let mut subs: Vec<Option<Vec<(usize, K)>>> = vec![None; g.len()]; // pivot idx -> tail
    for &a in &l.atoms_of() {
        // current form: indices of g with g_i ≥ a, coefficient 1
        let mut form: Vec<(usize, K)> = g
            .iter()
            .enumerate()
            .filter(|(_, &y)| l.leq(a, y))
            .map(|(i, _)| (i, K::one()))
            .collect();
        // reduce by existing substitutions until the leading term is free
        loop {
            form.retain(|(_, c)| !c.is_zero());
            form.sort_by_key(|e| e.0);
            let (pivot, coeff) = match form.first() {
                None => break,
                Some((p, c)) => (*p, c.clone()),
            };
            match &subs[pivot] {
                None => {
                    // normalize and record: x_pivot = -Σ tail/coeff
                    let tail: Vec<(usize, K)> = form[1..]
                        .iter()
                        .map(|(i, c)| (*i, c.mul(&coeff.inv()).neg()))
                        .collect();
                    subs[pivot] = Some(tail);
                    break;
                }
                Some(tail) => {
                    // substitute the pivot and keep reducing
                    let mut next: Vec<(usize, K)> = form[1..].to_vec();
                    for (i, c) in tail {
                        next.push((*i, coeff.mul(c)));
                    }
                    // merge duplicates
                    next.sort_by_key(|e| e.0);
                    let mut merged: Vec<(usize, K)> = Vec::new();
                    for (i, c) in next {
                        match merged.last_mut() {
                            Some((j, acc)) if *j == i => *acc = acc.add(&c),
                            _ => merged.push((i, c)),
                        }
                    }
                    form = merged;
                }
            }
        }
    }
    // back-substitute so tails reference only surviving variables
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..g.len() {
            let Some(tail) = subs[p].clone() else { continue };
            if tail.iter().all(|(i, _)| subs[*i].is_none()) {
                continue;
            }
            let mut next: Vec<(usize, K)> = Vec::new();
            for (i, c) in tail {
                match &subs[i] {
                    None => next.push((i, c)),
                    Some(t2) => {
                        for (j, c2) in t2 {
                            next.push((*j, c.mul(c2)));
                        }
                    }
                }
            }
            next.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, K)> = Vec::new();
            for (i, c) in next {
                match merged.last_mut() {
                    Some((j, acc)) if *j == i => *acc = acc.add(&c),
                    _ => merged.push((i, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            subs[p] = Some(merged);
            changed = true;
        }
    }
    let survivors: Vec<usize> = (0..g.len()).filter(|&i| subs[i].is_none()).collect();
    let var_index: Vec<Option<VarId>> = {
        let mut v = vec![None; g.len()];
        for (k, &i) in survivors.iter().enumerate() {
            v[i] = Some(k as VarId);
        }
        v
    };
    // substitute into the non-face monomials
    let as_linear_poly = |i: usize| -> Vec<(Monomial, K)> {
        match &subs[i] {
            None => vec![(Monomial::var(var_index[i].unwrap()), K::one())],
            Some(tail) => tail
                .iter()
                .map(|(j, c)| (Monomial::var(var_index[*j].unwrap()), c.clone()))
                .collect(),
        }
    };
    let mut relations: Vec<Poly<K>> = Vec::new();
    for nf in &nonfaces {
        let mut acc: Vec<(Monomial, K)> = vec![(Monomial::one(), K::one())];
        for &y in nf {
            let gi = g.iter().position(|&z| z == y).unwrap();
            let lin = as_linear_poly(gi);
            let mut next = Vec::with_capacity(acc.len() * lin.len());
            for (m, c) in &acc {
                for (lm, lc) in &lin {
                    let mut nm = m.clone();
                    for &(v, e) in &lm.0 {
                        for _ in 0..e {
                            nm = nm.mul_var(v);
                        }
                    }
                    next.push((nm, c.mul(lc)));
                }
            }
            acc = next;
        }
        let p = Poly::collect(acc);
        if !p.terms.is_empty() {
            relations.push(p);
        }
    }
    let vars: Vec<usize> = survivors.iter().map(|&i| g[i]).collect();
    let var_names: Vec<String> = vars.iter().map(|&y| format!("x_{}", l.names[y])).collect();
    let eliminated: Vec<(usize, Poly<K>)> = (0..g.len())
        .filter(|&i| subs[i].is_some())
        .map(|i| (g[i], Poly::collect(as_linear_poly(i))))
        .collect();
    Ok(DlgPresentation { vars, var_names, relations, eliminated })
}
