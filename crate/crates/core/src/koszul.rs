//! Koszul filtrations for Chow rings and Koszulness certificates.
//!
//! The filtration family has two shapes, both generated by variables:
//! F0 ideals come from up-sets of the variable flats, F1 ideals from a flat F
//! plus an initial segment of coat(F) under the total coatom order. The
//! witness walk peels one generator per step with deterministic choices and
//! validates each colon (J : I) against the closed forms; `verify_filtration`
//! re-checks every step against the brute-force engine colon. Certificates
//! combine the Betti table of the residue field with the series identity
//! Poin(t) · HS(−t) = 1.

use crate::chow::{ChowError, NestedRing};
use crate::engine::{BettiTable, Element, Engine, EngineError};
use crate::field::Field;
use crate::lattice::FlatId;
use crate::linalg::BudgetExceeded;
use serde_json::{json, Value};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KoszulError {
    #[error("the zero ideal has no filtration step")]
    ZeroIdeal,
    #[error("closed form inapplicable at a filtration step: {0}")]
    ClosedFormInapplicable(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// A member of the filtration family, named by its shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationIdeal {
    /// (x_G | G ∈ upset), upset an up-set of the variable flats.
    F0 { upset: BTreeSet<FlatId> },
    /// (x_G | G ⊄ f) + (x_G | G ∈ segment), segment an initial segment of
    /// coat(f).
    F1 { f: FlatId, segment: Vec<FlatId> },
}

impl FiltrationIdeal {
    pub fn zero() -> FiltrationIdeal {
        FiltrationIdeal::F0 { upset: BTreeSet::new() }
    }

    pub fn maximal<K: Field>(ring: &NestedRing<K>) -> FiltrationIdeal {
        FiltrationIdeal::F0 { upset: ring.vars.iter().copied().collect() }
    }

    /// The generating variable set; canonical since distinct variables stay
    /// independent in degree one.
    pub fn realize<K: Field>(&self, ring: &NestedRing<K>) -> BTreeSet<FlatId> {
        match self {
            FiltrationIdeal::F0 { upset } => upset.clone(),
            FiltrationIdeal::F1 { f, segment } => {
                let mut out: BTreeSet<FlatId> =
                    ring.restriction_kernel(*f).into_iter().collect();
                out.extend(segment.iter().copied());
                out
            }
        }
    }

    /// Structural soundness: F0 up-set closure, F1 segment is an initial
    /// segment of coat(f) (coatom order = FlatId order).
    pub fn is_valid<K: Field>(&self, ring: &NestedRing<K>) -> bool {
        match self {
            FiltrationIdeal::F0 { upset } => upset.iter().all(|&g| {
                ring.vars
                    .iter()
                    .all(|&h| !(ring.lat.leq(g, h) && h != g) || upset.contains(&h))
            }),
            FiltrationIdeal::F1 { f, segment } => {
                let coat = ring.lat.coat(*f);
                segment.len() <= coat.len() && segment[..] == coat[..segment.len()]
            }
        }
    }

    pub fn describe<K: Field>(&self, ring: &NestedRing<K>) -> String {
        match self {
            FiltrationIdeal::F0 { upset } => format!(
                "F0{{{}}}",
                upset
                    .iter()
                    .map(|&g| ring.lat.label(g))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            FiltrationIdeal::F1 { f, segment } => format!(
                "F1({}; {})",
                ring.lat.label(*f),
                segment
                    .iter()
                    .map(|&g| ring.lat.label(g))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

/// One filtration step: J ⊊ I with I = J + (x), and C = (J : I) by closed
/// form.
pub struct WitnessStep {
    pub j: FiltrationIdeal,
    pub var: FlatId,
    pub colon: FiltrationIdeal,
}

/// Peel one generator from a nonzero filtration ideal. F0: remove the
/// coatom-least minimal element of the up-set. F1 with a nonempty segment:
/// remove the segment's last (coatom-largest) element. F1 with an empty
/// segment is an F0 ideal on the up-set {G : G ⊄ f}.
pub fn filtration_witness_step<K: Field>(
    ring: &NestedRing<K>,
    ideal: &FiltrationIdeal,
) -> Result<WitnessStep, KoszulError> {
    match ideal {
        FiltrationIdeal::F0 { upset } => {
            if upset.is_empty() {
                return Err(KoszulError::ZeroIdeal);
            }
            // minimal elements under the lattice partial order; FlatId order
            // is the coatom order, so the least id among them is the choice
            let gp = *upset
                .iter()
                .filter(|&&g| {
                    upset.iter().all(|&h| h == g || !ring.lat.leq(h, g))
                })
                .min()
                .expect("nonempty up-set has a minimal element");
            let mut rest = upset.clone();
            rest.remove(&gp);
            let j = FiltrationIdeal::F0 { upset: rest };
            let colon = colon_of_peeled(ring, gp);
            Ok(WitnessStep { j, var: gp, colon })
        }
        FiltrationIdeal::F1 { f, segment } => {
            if segment.is_empty() {
                // (x_G | G ⊄ f) is the up-set of flats outside [∅, f]
                let upset: BTreeSet<FlatId> =
                    ring.restriction_kernel(*f).into_iter().collect();
                return filtration_witness_step(ring, &FiltrationIdeal::F0 { upset });
            }
            let gp = *segment.last().unwrap();
            let rest = segment[..segment.len() - 1].to_vec();
            // (J : x_{G'}) = (x_G | G ⊄ G') + (x_G | G ∈ coat_rest(G')):
            // with no other segment generators this is the plain annihilator
            // of a hyperplane variable of M|f, valid at any rank; otherwise
            // the hyperplane-set colon degenerates to the maximal ideal at
            // low rank
            let colon = if rest.is_empty() {
                FiltrationIdeal::F1 { f: gp, segment: Vec::new() }
            } else if ring.lat.rank(gp) >= ring.filtration_threshold() {
                let coat_seg = ring.lat.coat_restricted(&rest, gp);
                FiltrationIdeal::F1 { f: gp, segment: coat_seg }
            } else {
                FiltrationIdeal::maximal(ring)
            };
            let j = FiltrationIdeal::F1 { f: *f, segment: rest };
            Ok(WitnessStep { j, var: gp, colon })
        }
    }
}

fn colon_of_peeled<K: Field>(ring: &NestedRing<K>, gp: FlatId) -> FiltrationIdeal {
    if ring.lat.rank(gp) >= ring.filtration_threshold() {
        FiltrationIdeal::F1 { f: gp, segment: ring.lat.coat(gp).to_vec() }
    } else {
        FiltrationIdeal::maximal(ring)
    }
}

impl<K: Field> NestedRing<K> {
    /// Rank at which colons stay proper: 3 ordinary, 2 augmented.
    pub fn filtration_threshold(&self) -> usize {
        if self.augmented { 2 } else { 3 }
    }
}

pub struct FiltrationReport {
    pub visited: usize,
    pub steps: usize,
    pub violations: Vec<String>,
}

/// Walk the witness closure from the default roots and verify every step
/// against the engine: descriptors structurally valid, colons match the
/// brute-force colon, and every ideal is generated by linear forms.
pub fn verify_filtration<K: Field>(
    ring: &NestedRing<K>,
    eng: &Engine<K>,
    budget: usize,
) -> Result<FiltrationReport, KoszulError> {
    let var_ideal = |vars: &BTreeSet<FlatId>| -> Result<_, KoszulError> {
        let gens: Vec<Element<K>> = vars
            .iter()
            .map(|&f| ring.to_engine_element(eng, &ring.var_elt(f)))
            .collect::<Result<_, _>>()?;
        Ok(eng.ideal_span(&gens)?)
    };
    let mut violations = Vec::new();
    let mut visited: BTreeSet<BTreeSet<FlatId>> = BTreeSet::new();
    let mut queue: VecDeque<FiltrationIdeal> = VecDeque::new();
    for root in [FiltrationIdeal::maximal(ring), FiltrationIdeal::zero()] {
        if visited.insert(root.realize(ring)) {
            queue.push_back(root);
        }
    }
    let mut steps = 0usize;
    while let Some(ideal) = queue.pop_front() {
        if !ideal.is_valid(ring) {
            violations.push(format!("invalid descriptor {}", ideal.describe(ring)));
            continue;
        }
        let gens = ideal.realize(ring);
        if gens.is_empty() {
            continue; // the zero ideal terminates a chain
        }
        if steps >= budget {
            return Err(KoszulError::Budget(BudgetExceeded {
                detail: format!("filtration walk exceeded {} steps", budget),
            }));
        }
        steps += 1;
        let step = filtration_witness_step(ring, &ideal)?;
        let jgens = step.j.realize(ring);
        // I = J + (x) with x ∉ J
        if jgens.contains(&step.var) || !gens.contains(&step.var) {
            violations.push(format!(
                "step at {} does not peel a generator",
                ideal.describe(ring)
            ));
        }
        let mut expected = jgens.clone();
        expected.insert(step.var);
        if expected != gens {
            violations.push(format!(
                "J + (x) ≠ I at {}",
                ideal.describe(ring)
            ));
        }
        // oracle colon
        let ispan = var_ideal(&gens)?;
        let jspan = var_ideal(&jgens)?;
        if !jspan.dims().iter().zip(ispan.dims()).all(|(a, b)| *a <= b) {
            violations.push(format!("J ⊄ I at {}", ideal.describe(ring)));
        }
        let xelt = ring.to_engine_element(eng, &ring.var_elt(step.var))?;
        let oracle = eng.colon(&jspan, &[xelt])?;
        let cspan = var_ideal(&step.colon.realize(ring))?;
        if !oracle.equals(&cspan) {
            violations.push(format!(
                "colon mismatch at {}: closed form {}",
                ideal.describe(ring),
                step.colon.describe(ring)
            ));
        }
        if !eng.is_generated_by_linear_forms(&oracle)? {
            violations.push(format!(
                "colon at {} not generated by linear forms",
                ideal.describe(ring)
            ));
        }
        for next in [step.j, step.colon] {
            if visited.insert(next.realize(ring)) {
                queue.push_back(next);
            }
        }
    }
    Ok(FiltrationReport { visited: visited.len(), steps, violations })
}

// ---------- series ----------

/// Coefficients of 1 / HS(−t) up to and including t^order. Requires
/// HS(0) = 1.
pub fn poincare_from_hilbert(hs: &[usize], order: usize) -> Vec<i64> {
    assert_eq!(hs.first(), Some(&1), "series must start at 1");
    // h_k = (−1)^k hs[k]; p_0 = 1; Σ_{k≤n} h_k p_{n−k} = 0 for n ≥ 1
    let h = |k: usize| -> i64 {
        let v = *hs.get(k).unwrap_or(&0) as i64;
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let mut p = vec![0i64; order + 1];
    p[0] = 1;
    for n in 1..=order {
        let mut acc = 0i64;
        for k in 1..=n {
            acc += h(k) * p[n - k];
        }
        p[n] = -acc;
    }
    p
}

pub struct KoszulCertificate {
    pub hilbert: Vec<usize>,
    pub betti: BettiTable,
    pub i_max: usize,
    pub linear: bool,
    pub nonlinear_witnesses: Vec<(usize, usize, usize)>,
    pub series_identity: bool,
    pub poincare: Vec<i64>,
}

impl KoszulCertificate {
    pub fn pass(&self) -> bool {
        self.linear && self.series_identity
    }

    pub fn to_json(&self) -> Value {
        json!({
            "hilbert_function": self.hilbert,
            "betti": self.betti.to_json(),
            "i_max": self.i_max,
            "linear_to_cutoff": self.linear,
            "nonlinear_witnesses": self.nonlinear_witnesses
                .iter()
                .map(|&(i, j, v)| json!({"i": i, "j": j, "value": v}))
                .collect::<Vec<_>>(),
            "series_identity": self.series_identity,
            "poincare_coefficients": self.poincare,
            "pass": self.pass(),
        })
    }
}

/// Betti-table Koszulness check to homological degree i_max: all β_{i,j}
/// with j ≠ i vanish, and the totals agree with 1/HS(−t).
pub fn koszul_certificate<K: Field>(
    eng: &Engine<K>,
    i_max: usize,
) -> Result<KoszulCertificate, KoszulError> {
    let hilbert = eng.hilbert_series_poly()?;
    let betti = eng.betti_of_residue_field(i_max, i_max + 1)?;
    let nonlinear = betti.nonlinear_entries();
    let linear = nonlinear.is_empty();
    let poincare = poincare_from_hilbert(&hilbert, i_max);
    let totals = betti.totals();
    let series_identity = linear
        && (0..=i_max).all(|i| poincare[i] >= 0 && totals[i] == poincare[i] as usize);
    Ok(KoszulCertificate {
        hilbert,
        betti,
        i_max,
        linear,
        nonlinear_witnesses: nonlinear,
        series_identity,
        poincare,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::matroid::Matroid;

    #[test]
    fn poincare_series_examples() {
        assert_eq!(poincare_from_hilbert(&[1, 4, 1], 4), vec![1, 4, 15, 56, 209]);
        assert_eq!(poincare_from_hilbert(&[1, 7, 1], 3), vec![1, 7, 48, 329]);
        assert_eq!(poincare_from_hilbert(&[1, 1], 4), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn certificate_u33() {
        let ring: NestedRing<Q> = NestedRing::new(&Matroid::uniform(3, 3), false).unwrap();
        let eng = ring.engine().unwrap();
        let cert = koszul_certificate(&eng, 3).unwrap();
        assert!(cert.pass());
        assert_eq!(cert.betti.totals(), vec![1, 4, 15, 56]);
        assert_eq!(cert.poincare, vec![1, 4, 15, 56]);
    }

    #[test]
    fn certificate_rank_two() {
        // Chow of a rank-2 matroid is k[x]/(x²)
        let ring: NestedRing<Q> = NestedRing::new(&Matroid::uniform(2, 3), false).unwrap();
        let eng = ring.engine().unwrap();
        let cert = koszul_certificate(&eng, 5).unwrap();
        assert!(cert.pass());
        assert_eq!(cert.betti.totals(), vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn filtration_walks() {
        for (m, aug) in [
            (Matroid::uniform(3, 3), false),
            (Matroid::uniform(2, 4), false),
            (Matroid::uniform(3, 4), false),
            (Matroid::uniform(2, 3), true),
            (Matroid::uniform(3, 3), true),
        ] {
            let ring: NestedRing<Q> = NestedRing::new(&m, aug).unwrap();
            let eng = ring.engine().unwrap();
            let report = verify_filtration(&ring, &eng, 100_000).unwrap();
            assert!(
                report.violations.is_empty(),
                "aug={} violations: {:?}",
                aug,
                report.violations
            );
            assert!(report.visited > 1);
        }
    }

    #[test]
    fn filtration_first_step_u33() {
        // peeling R_+ removes the coatom-least minimal flat (a rank-2 flat),
        // and the colon is the whole maximal ideal
        let ring: NestedRing<Q> = NestedRing::new(&Matroid::uniform(3, 3), false).unwrap();
        let full = FiltrationIdeal::maximal(&ring);
        let step = filtration_witness_step(&ring, &full).unwrap();
        assert_eq!(ring.lat.rank(step.var), 2);
        assert_eq!(step.colon, FiltrationIdeal::maximal(&ring));
        // peeling the up-set {E} gives colon F1(E, all coatoms)
        let top = ring.lat.top();
        let single = FiltrationIdeal::F0 { upset: [top].into_iter().collect() };
        let step = filtration_witness_step(&ring, &single).unwrap();
        assert_eq!(step.var, top);
        assert_eq!(step.j.realize(&ring).len(), 0);
        match step.colon {
            FiltrationIdeal::F1 { f, ref segment } => {
                assert_eq!(f, top);
                assert_eq!(segment.len(), ring.lat.coatoms().len());
            }
            _ => panic!("expected an F1 colon"),
        }
    }

    #[test]
    fn augmented_certificates() {
        for m in [Matroid::uniform(2, 3), Matroid::uniform(3, 3)] {
            let ring: NestedRing<Q> = NestedRing::new(&m, true).unwrap();
            let eng = ring.engine().unwrap();
            let cert = koszul_certificate(&eng, 3).unwrap();
            assert!(cert.pass());
        }
    }
}
