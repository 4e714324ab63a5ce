//! Graded systems of monomial ideals built from inner rational polyhedra.
//!
//! `R_m` is the staircase hull of boundary samples rounded up to the `1/m`
//! grid, so `R_m ⊆ P`. The system uses `a_k = lattice points of k·R_{d(k)}`
//! with `d(k)` the largest power of two `≤ k` (or `lcm(1..k)` in strict
//! mode); both choices make `k ↦ R_{d(k)}` increasing, which is what
//! `a_l·a_m ⊆ a_{l+m}` needs.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::body::NewtonBody;
use crate::error::{BodyError, GradedError};
use crate::ideal::{ideal_contains_ideal, ideal_product, lattice_staircase, multiplier_ideal, newton_polyhedron, MonomialIdeal};
use crate::number::{lcm_upto, ExactReal, Rational};

/// `R`: staircase hull of `(x, ⌈den·f(x)⌉/den)` for grid points `x = j/den`
/// in `(x0, xcap]`, plus `x0` itself when the vertical asymptote is attained.
fn inner_on_grid(body: &NewtonBody, den: &BigInt, xcap: u64) -> Result<NewtonBody, GradedError> {
    let den_q = Rational::from_integer(den.clone());
    let x0 = body.x0();
    let mut j = (x0.scale(&den_q)).floor() + BigInt::one();
    let last = BigInt::from(xcap) * den;
    let mut samples: Vec<(Rational, Rational)> = Vec::new();
    let mut push = |x: Rational| -> Result<(), GradedError> {
        let xe = ExactReal::from(x.clone());
        let f = body.boundary_y(&xe)?.expect("x lies in the body's projection");
        let y = Rational::new(f.scale(&den_q).ceil(), den.clone());
        samples.push((x, y));
        Ok(())
    };
    if body.attained_x() {
        if let Some(x) = x0.as_rational() {
            if x <= &Rational::from_integer(xcap.into()) {
                push(x.clone())?;
            }
        }
    }
    while j <= last {
        push(Rational::new(j.clone(), den.clone()))?;
        j += 1;
    }
    if samples.is_empty() {
        return Err(GradedError::XcapTooSmall { xcap });
    }
    Ok(NewtonBody::polyhedral(&samples)?)
}

/// `R_m` on the `1/m` grid.
pub fn inner_polyhedron(body: &NewtonBody, m: u64, xcap: u64) -> Result<NewtonBody, GradedError> {
    if m == 0 {
        return Err(GradedError::TooSmall("m", 1));
    }
    if xcap == 0 {
        return Err(GradedError::TooSmall("xcap", 1));
    }
    inner_on_grid(body, &BigInt::from(m), xcap)
}

fn grid_for(k: u64, strict: bool) -> BigInt {
    if strict {
        lcm_upto(k)
    } else {
        BigInt::one() << (63 - k.leading_zeros())
    }
}

pub struct GradedSystem {
    base: NewtonBody,
    xcap: u64,
    strict: bool,
    cache: RwLock<HashMap<u64, MonomialIdeal>>,
}

impl GradedSystem {
    pub fn new(base: NewtonBody, xcap: u64) -> Result<Self, GradedError> {
        if xcap == 0 {
            return Err(GradedError::TooSmall("xcap", 1));
        }
        let sys = GradedSystem {
            base,
            xcap,
            strict: false,
            cache: RwLock::new(HashMap::new()),
        };
        sys.ideal(1)?;
        Ok(sys)
    }

    /// Samples `R_k` on the `lcm(1..k)` grid; only practical for small `k`.
    pub fn strict(mut self) -> Self {
        self.strict = true;
        self.cache.write().expect("cache lock").clear();
        self
    }

    pub fn base(&self) -> &NewtonBody {
        &self.base
    }

    pub fn xcap(&self) -> u64 {
        self.xcap
    }

    /// Replaces `a_k`; used to build deliberately broken systems.
    pub fn set_override(&self, k: u64, ideal: MonomialIdeal) {
        self.cache.write().expect("cache lock").insert(k, ideal);
    }

    /// `a_k`, the monomials in `k·R_{d(k)}`.
    pub fn ideal(&self, k: u64) -> Result<MonomialIdeal, GradedError> {
        if k == 0 {
            return Err(GradedError::TooSmall("k", 1));
        }
        if let Some(i) = self.cache.read().expect("cache lock").get(&k) {
            return Ok(i.clone());
        }
        let r = inner_on_grid(&self.base, &grid_for(k, self.strict), self.xcap)?;
        let ek = r.scale(&Rational::from_integer(k.into()))?;
        let ideal = lattice_staircase(&ek)?;
        Ok(self
            .cache
            .write()
            .expect("cache lock")
            .entry(k)
            .or_insert(ideal)
            .clone())
    }
}

pub fn graded_ideal(g: &GradedSystem, k: u64) -> Result<MonomialIdeal, GradedError> {
    g.ideal(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub passed: bool,
    /// First `(l, m)` with `a_l·a_m ⊄ a_{l+m}`.
    pub product_violation: Option<(u64, u64)>,
    /// First `k` with `Newt(a_k)/k ⊄ base`.
    pub inner_violation: Option<u64>,
}

pub fn graded_axioms_check(g: &GradedSystem, kmax: u64) -> Result<GradedReport, GradedError> {
    if kmax < 2 {
        return Err(GradedError::TooSmall("kmax", 2));
    }
    let ideals: Vec<MonomialIdeal> = (1..=kmax).map(|k| g.ideal(k)).collect::<Result<_, _>>()?;
    let a = |k: u64| &ideals[k as usize - 1];
    let mut product_violation = None;
    'outer: for l in 1..kmax {
        for m in l..=kmax - l {
            if !ideal_contains_ideal(a(l + m), &ideal_product(a(l), a(m))) {
                product_violation = Some((l, m));
                break 'outer;
            }
        }
    }
    let inner_violation = (1..=kmax).find(|&k| {
        let kq = Rational::from_integer(k.into());
        !a(k).gens().iter().all(|p| {
            let (x, y) = p.to_rational();
            g.base.contains(&crate::body::Point::rational(x / &kq, y / &kq), false)
        })
    });
    Ok(GradedReport {
        passed: product_violation.is_none() && inner_violation.is_none(),
        product_violation,
        inner_violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticStep {
    pub q: u64,
    pub ideal: MonomialIdeal,
    /// `J_q ⊆ J_{2q}`; `None` on the last step.
    pub contained_in_next: Option<bool>,
    /// `J_q` equals the multiplier ideal of the base body.
    pub equals_howald: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticResult {
    pub ideal: MonomialIdeal,
    /// The last two doublings left the ideal unchanged.
    pub stabilized: bool,
    /// First `q` from which the chain is constant up to `qmax`.
    pub q_used: u64,
    pub crosscheck: bool,
    pub chain_increasing: bool,
    pub steps: Vec<AsymptoticStep>,
}

/// `J((c/q)·a_q)` for `q = 1, 2, 4, …, qmax`, compared with `J(c·base)`.
pub fn asymptotic_multiplier_ideal(g: &GradedSystem, c: &Rational, qmax: u64) -> Result<AsymptoticResult, GradedError> {
    if qmax < 4 {
        return Err(GradedError::TooSmall("qmax", 4));
    }
    if *c <= Rational::from_integer(0.into()) {
        return Err(BodyError::NonPositive("c").into());
    }
    let howald = multiplier_ideal(&g.base, c)?;
    let qs: Vec<u64> = std::iter::successors(Some(1u64), |q| q.checked_mul(2))
        .take_while(|&q| q <= qmax)
        .collect();
    let mut chain = Vec::with_capacity(qs.len());
    for &q in &qs {
        let aq = g.ideal(q)?;
        let cq = c / Rational::from_integer(q.into());
        chain.push(multiplier_ideal(&newton_polyhedron(&aq), &cq)?);
    }
    let steps: Vec<AsymptoticStep> = qs
        .iter()
        .enumerate()
        .map(|(i, &q)| AsymptoticStep {
            q,
            ideal: chain[i].clone(),
            contained_in_next: chain.get(i + 1).map(|next| ideal_contains_ideal(next, &chain[i])),
            equals_howald: chain[i] == howald,
        })
        .collect();
    let n = chain.len();
    let last = chain[n - 1].clone();
    let stabilized = n >= 3 && chain[n - 3] == last && chain[n - 2] == last;
    let first_const = (0..n).rev().take_while(|&i| chain[i] == last).last().unwrap_or(n - 1);
    Ok(AsymptoticResult {
        crosscheck: stabilized && last == howald,
        ideal: last,
        stabilized,
        q_used: qs[first_const],
        chain_increasing: steps.iter().all(|s| s.contained_in_next != Some(false)),
        steps,
    })
}

/// Approximate area of `(B \ R) ∩ [0, side]²` by midpoint columns; `R ⊆ B`.
pub fn gap_area(body: &NewtonBody, inner: &NewtonBody, side: f64, cells: usize) -> f64 {
    let h = side / cells as f64;
    let height = |b: &NewtonBody, x: f64| -> f64 {
        let xe = ExactReal::from(Rational::from_float(x).expect("finite"));
        match b.boundary_y(&xe) {
            Ok(Some(y)) => y.to_f64().clamp(0.0, side),
            _ => side,
        }
    };
    (0..cells)
        .map(|i| {
            let x = (i as f64 + 0.5) * h;
            (height(inner, x) - height(body, x)).max(0.0) * h
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{rat, LatticePoint};

    fn hyp11() -> NewtonBody {
        NewtonBody::hyperbola(rat(1, 1), rat(1, 1), rat(1, 1)).unwrap()
    }

    fn lp(v: &[(u64, u64)]) -> MonomialIdeal {
        let pts: Vec<LatticePoint> = v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect();
        MonomialIdeal::from_points(&pts).unwrap()
    }

    #[test]
    fn inner_polyhedron_of_hyperbola() {
        let r1 = inner_polyhedron(&hyp11(), 1, 8).unwrap();
        assert_eq!(r1.vertices().unwrap()[0], crate::body::Point::rational(rat(2, 1), rat(2, 1)));
        assert!(hyp11().contains(&crate::body::Point::rational(rat(2, 1), rat(2, 1)), false));
    }

    #[test]
    fn grid_aligned_polyhedra_are_fixed() {
        let d = NewtonBody::polyhedral(&[(rat(0, 1), rat(3, 1)), (rat(1, 1), rat(1, 1)), (rat(3, 1), rat(0, 1))]).unwrap();
        assert_eq!(inner_polyhedron(&d, 2, 8).unwrap(), d);
    }

    #[test]
    fn inner_area_shrinks() {
        let b = hyp11();
        let areas: Vec<f64> = [1, 2, 4, 8]
            .iter()
            .map(|&m| gap_area(&b, &inner_polyhedron(&b, m, 10).unwrap(), 10.0, 200))
            .collect();
        assert!(areas.windows(2).all(|w| w[1] <= w[0]), "{areas:?}");
        assert!(areas[3] < areas[0]);
    }

    #[test]
    fn xcap_too_small() {
        let b = NewtonBody::hyperbola(rat(5, 1), rat(1, 1), rat(1, 1)).unwrap();
        assert_eq!(inner_polyhedron(&b, 1, 3), Err(GradedError::XcapTooSmall { xcap: 3 }));
    }

    #[test]
    fn graded_ideal_examples() {
        let g = GradedSystem::new(hyp11(), 8).unwrap();
        assert!(g.ideal(1).unwrap().contains(LatticePoint::new(2, 2)));
        let a2 = g.ideal(2).unwrap();
        for p in [(4, 4), (3, 6), (6, 3)] {
            assert!(a2.contains(LatticePoint::new(p.0, p.1)));
        }
        let sq = GradedSystem::new(NewtonBody::polyhedral(&[(rat(1, 1), rat(1, 1))]).unwrap(), 8).unwrap();
        for k in 1..6 {
            assert_eq!(sq.ideal(k).unwrap(), lp(&[(k, k)]));
        }
    }

    #[test]
    fn axioms_hold_and_corruption_is_caught() {
        let g = GradedSystem::new(hyp11(), 8).unwrap();
        assert!(graded_axioms_check(&g, 8).unwrap().passed);
        let sq = GradedSystem::new(NewtonBody::polyhedral(&[(rat(1, 1), rat(1, 1))]).unwrap(), 8).unwrap();
        assert!(graded_axioms_check(&sq, 12).unwrap().passed);
        let a1 = g.ideal(1).unwrap();
        let shrunk = ideal_product(&ideal_product(&a1, &a1), &lp(&[(1, 1)]));
        g.set_override(2, shrunk);
        assert_eq!(graded_axioms_check(&g, 4).unwrap().product_violation, Some((1, 1)));
    }

    #[test]
    fn strict_grid_is_also_graded() {
        let g = GradedSystem::new(hyp11(), 6).unwrap().strict();
        assert!(graded_axioms_check(&g, 6).unwrap().passed);
    }

    #[test]
    fn asymptotic_examples() {
        let g = GradedSystem::new(hyp11(), 8).unwrap();
        let r = asymptotic_multiplier_ideal(&g, &rat(1, 1), 64).unwrap();
        assert_eq!(r.ideal, lp(&[(1, 2), (2, 1)]));
        assert!(r.stabilized && r.crosscheck && r.chain_increasing);
        let r = asymptotic_multiplier_ideal(&g, &rat(1, 2), 16).unwrap();
        assert_eq!(r.ideal, lp(&[(0, 1), (1, 0)]));
        assert!(r.crosscheck);
        let sq = GradedSystem::new(NewtonBody::polyhedral(&[(rat(1, 1), rat(1, 1))]).unwrap(), 8).unwrap();
        assert!(asymptotic_multiplier_ideal(&sq, &rat(1, 2), 8).unwrap().ideal.is_unit());
        assert_eq!(
            asymptotic_multiplier_ideal(&g, &rat(1, 1), 2),
            Err(GradedError::TooSmall("qmax", 4))
        );
    }
}
