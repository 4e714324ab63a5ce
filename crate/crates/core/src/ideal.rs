//! Monomial ideals in two variables as staircases of minimal generators.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::body::NewtonBody;
use crate::error::BodyError;
use crate::number::{bigint_to_u64, ExactReal, LatticePoint, Rational};

/// Minimal generators, `x` strictly increasing and `y` strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    gens: Vec<LatticePoint>,
}

impl MonomialIdeal {
    /// Ideal generated by the given exponents; non-minimal ones are dropped.
    /// Returns `None` for an empty list (the zero ideal is not represented).
    pub fn from_points(points: &[LatticePoint]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let mut pts = points.to_vec();
        pts.sort();
        let mut gens: Vec<LatticePoint> = Vec::with_capacity(pts.len());
        for p in pts {
            if gens.last().is_none_or(|g| p.y < g.y) {
                gens.push(p);
            }
        }
        Some(MonomialIdeal { gens })
    }

    pub fn unit() -> Self {
        MonomialIdeal {
            gens: vec![LatticePoint::new(0, 0)],
        }
    }

    pub fn gens(&self) -> &[LatticePoint] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens == [LatticePoint::new(0, 0)]
    }

    /// Whether `x^p.x y^p.y` lies in the ideal.
    pub fn contains(&self, p: LatticePoint) -> bool {
        self.gens.iter().any(|g| g.divides(&p))
    }

    pub fn is_antichain(&self) -> bool {
        self.gens.windows(2).all(|w| w[0].x < w[1].x && w[0].y > w[1].y)
    }
}

fn monomial(p: &LatticePoint) -> String {
    let var = |name: &str, e: u64| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    let parts: Vec<String> = [var("x", p.x), var("y", p.y)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl MonomialIdeal {
    /// Generators as monomial strings, in staircase order.
    pub fn monomials(&self) -> Vec<String> {
        self.gens.iter().map(monomial).collect()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.monomials().join(", "))
    }
}

fn floor_u64(x: &ExactReal) -> u64 {
    let f = x.floor();
    if f.is_negative() {
        0
    } else {
        bigint_to_u64(&f).expect("staircase coordinate fits in u64")
    }
}

fn ceil_u64(x: &ExactReal) -> u64 {
    let c: BigInt = x.ceil();
    if c.is_negative() {
        0
    } else {
        bigint_to_u64(&c).expect("staircase coordinate fits in u64")
    }
}

fn int(n: u64) -> ExactReal {
    ExactReal::from(Rational::from_integer(n.into()))
}

/// `J(c·φ)`: exponents `A` with `A + (1,1)` in the interior of `c·B`.
pub fn multiplier_ideal(body: &NewtonBody, c: &Rational) -> Result<MonomialIdeal, BodyError> {
    let cb = body.scale(c)?;
    let ideal = interior_staircase(&cb)?;
    debug_assert_eq!(ideal, interior_staircase_by_rows(&cb)?);
    Ok(ideal)
}

/// Exponents `A` with `A + (1,1)` strictly inside `body`, scanned by columns.
fn interior_staircase(body: &NewtonBody) -> Result<MonomialIdeal, BodyError> {
    // a1 + 1 > x0  ⇔  a1 ≥ ⌊x0⌋
    let mut a1 = floor_u64(body.x0());
    let last_row = floor_u64(body.y0());
    let mut gens = Vec::new();
    loop {
        let f = body
            .boundary_y(&int(a1 + 1))?
            .expect("column lies right of the vertical asymptote");
        // a2 + 1 > f  ⇔  a2 ≥ ⌊f⌋
        let a2 = floor_u64(&f);
        gens.push(LatticePoint::new(a1, a2));
        if a2 <= last_row {
            break;
        }
        a1 += 1;
    }
    Ok(MonomialIdeal::from_points(&gens).expect("at least one column"))
}

fn interior_staircase_by_rows(body: &NewtonBody) -> Result<MonomialIdeal, BodyError> {
    let mut a2 = floor_u64(body.y0());
    let last_col = floor_u64(body.x0());
    let mut gens = Vec::new();
    loop {
        let g = body
            .boundary_x(&int(a2 + 1))?
            .expect("row lies above the horizontal asymptote");
        let a1 = floor_u64(&g);
        gens.push(LatticePoint::new(a1, a2));
        if a1 <= last_col {
            break;
        }
        a2 += 1;
    }
    Ok(MonomialIdeal::from_points(&gens).expect("at least one row"))
}

/// Minimal generators of `body ∩ Z²≥0` for a closed body.
pub fn lattice_staircase(body: &NewtonBody) -> Result<MonomialIdeal, BodyError> {
    let first_col = if body.attained_x() {
        ceil_u64(body.x0())
    } else {
        floor_u64(body.x0()) + 1
    };
    let last_row = if body.attained_y() {
        ceil_u64(body.y0())
    } else {
        floor_u64(body.y0()) + 1
    };
    let mut a1 = first_col;
    let mut gens = Vec::new();
    loop {
        let f = body
            .boundary_y(&int(a1))?
            .expect("column meets the body");
        let a2 = ceil_u64(&f);
        gens.push(LatticePoint::new(a1, a2));
        if a2 <= last_row {
            break;
        }
        a1 += 1;
    }
    Ok(MonomialIdeal::from_points(&gens).expect("at least one column"))
}

/// `Newt(I)`: convex hull of the exponents plus the positive quadrant.
pub fn newton_polyhedron(ideal: &MonomialIdeal) -> NewtonBody {
    let pts: Vec<(Rational, Rational)> = ideal.gens.iter().map(|g| g.to_rational()).collect();
    NewtonBody::polyhedral(&pts).expect("generators are nonnegative and nonempty")
}

/// `J ⊆ I`.
pub fn ideal_contains_ideal(i: &MonomialIdeal, j: &MonomialIdeal) -> bool {
    j.gens.iter().all(|g| i.contains(*g))
}

pub fn ideal_product(i: &MonomialIdeal, j: &MonomialIdeal) -> MonomialIdeal {
    let sums: Vec<LatticePoint> = i
        .gens
        .iter()
        .flat_map(|g| j.gens.iter().map(move |h| LatticePoint::new(g.x + h.x, g.y + h.y)))
        .collect();
    MonomialIdeal::from_points(&sums).expect("product of nonzero ideals")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn lp(v: &[(u64, u64)]) -> Vec<LatticePoint> {
        v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()
    }

    fn ideal(v: &[(u64, u64)]) -> MonomialIdeal {
        MonomialIdeal::from_points(&lp(v)).unwrap()
    }

    fn hyp11() -> NewtonBody {
        NewtonBody::hyperbola(rat(1, 1), rat(1, 1), rat(1, 1)).unwrap()
    }

    #[test]
    fn multiplier_ideal_examples() {
        assert!(multiplier_ideal(&hyp11(), &rat(2, 5)).unwrap().is_unit());
        assert_eq!(multiplier_ideal(&hyp11(), &rat(1, 2)).unwrap(), ideal(&[(0, 1), (1, 0)]));
        assert_eq!(multiplier_ideal(&hyp11(), &rat(1, 1)).unwrap(), ideal(&[(1, 2), (2, 1)]));
    }

    #[test]
    fn multiplier_ideal_of_diagonal_body() {
        let d = NewtonBody::diagonal(rat(2, 1), rat(3, 1)).unwrap();
        assert!(multiplier_ideal(&d, &rat(4, 5)).unwrap().is_unit());
        // (a+1)/2 + (b+1)/3 > 1
        assert_eq!(multiplier_ideal(&d, &rat(1, 1)).unwrap(), ideal(&[(0, 1), (1, 0)]));
    }

    #[test]
    fn newton_polyhedron_examples() {
        let q = newton_polyhedron(&MonomialIdeal::unit());
        let a = q.asymptotes();
        assert!(a.x0.is_zero() && a.y0.is_zero() && a.attained_x && a.attained_y);
        let d = newton_polyhedron(&ideal(&[(2, 0), (0, 3)]));
        assert_eq!(d, NewtonBody::diagonal(rat(2, 1), rat(3, 1)).unwrap());
        assert_eq!(newton_polyhedron(&ideal(&[(1, 2), (2, 1)])).vertices().unwrap().len(), 2);
    }

    #[test]
    fn containment_examples() {
        let m = ideal(&[(0, 1), (1, 0)]);
        let deep = ideal(&[(1, 2), (2, 1)]);
        assert!(ideal_contains_ideal(&m, &deep));
        assert!(!ideal_contains_ideal(&deep, &m));
        assert!(ideal_contains_ideal(&deep, &deep));
    }

    #[test]
    fn product_examples() {
        assert_eq!(ideal_product(&ideal(&[(1, 0)]), &ideal(&[(0, 1)])), ideal(&[(1, 1)]));
        let m = ideal(&[(0, 1), (1, 0)]);
        assert_eq!(ideal_product(&m, &m), ideal(&[(0, 2), (1, 1), (2, 0)]));
        assert_eq!(ideal_product(&m, &MonomialIdeal::unit()), m);
    }

    #[test]
    fn from_points_reduces_to_antichain() {
        let i = ideal(&[(3, 3), (1, 2), (2, 1), (1, 5), (4, 0)]);
        assert_eq!(i.gens(), lp(&[(1, 2), (2, 1), (4, 0)]).as_slice());
        assert!(i.is_antichain());
        assert!(MonomialIdeal::from_points(&[]).is_none());
    }

    #[test]
    fn monomial_strings() {
        assert_eq!(ideal(&[(3, 0), (2, 1), (0, 2)]).to_string(), "(y^2, x^2*y, x^3)");
        assert_eq!(MonomialIdeal::unit().monomials(), vec!["1"]);
    }

    #[test]
    fn lattice_staircase_of_closed_bodies() {
        // closed xy ≥ 1 shifted: (x−1)(y−1) ≥ 1 meets (2,2)
        assert_eq!(lattice_staircase(&hyp11()).unwrap(), ideal(&[(2, 2)]));
        let d = NewtonBody::diagonal(rat(2, 1), rat(3, 1)).unwrap();
        assert_eq!(lattice_staircase(&d).unwrap(), ideal(&[(0, 3), (1, 2), (2, 0)]));
    }
}
