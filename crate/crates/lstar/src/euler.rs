//! Assembled Euler characteristics for the supported families and the
//! algebraic-vs-analytic comparisons for norm tori of quadratic fields.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{reject, Result};
use crate::local::is_prime_u64;
use crate::lseries::{
    b1_chi, functional_ratio, l_at_one, remove_euler_factors, EulerRemoval, LeadingValue,
    QuadraticCharacter,
};
use crate::matrix::Rat;
use crate::quadratic::{fundamental_unit, torus_invariants, FundamentalUnit, QuadraticField, TorusInvariants};

/// chi_U(Z/n) = 1 for finite constant sheaves.
pub fn chi_finite_constant(_n: u64) -> Rat {
    Rat::one()
}

/// chi_U = 1 for negligible sheaves (finite support, finite stalks).
pub fn chi_negligible() -> Rat {
    Rat::one()
}

/// chi_U = 1 for constructible sheaves.
pub fn chi_constructible() -> Rat {
    Rat::one()
}

/// chi_U(Z) = (h_S R_S) / w for the constant sheaf Z on the complement of
/// the given places, via the scaling law h_S R_S = h R prod log N(w).
#[derive(Clone, Debug)]
pub struct ConstantSheafChi {
    pub d: i64,
    pub discriminant: i64,
    pub place_norms: Vec<u64>,
    /// rank of the S-unit group = |S| - 1
    pub order: i64,
    pub value: f64,
}

pub fn chi_constant_z(field: &QuadraticField, place_norms: &[u64]) -> Result<ConstantSheafChi> {
    for &n in place_norms {
        if crate::local::prime_power(n).is_none() {
            return reject(format!("place norm {} is not a prime power", n));
        }
    }
    let h = field.class_number()? as f64;
    let r = field.regulator()?;
    let w = field.roots_of_unity() as f64;
    let mut value = h * r / w;
    for &n in place_norms {
        value *= (n as f64).ln();
    }
    // |S_infinity| = 1 for imaginary, 2 for real
    let infinite_places: i64 = if field.is_real() { 2 } else { 1 };
    let order = infinite_places - 1 + place_norms.len() as i64;
    Ok(ConstantSheafChi {
        d: field.d(),
        discriminant: field.discriminant(),
        place_norms: place_norms.to_vec(),
        order,
        value,
    })
}

/// The full comparison bundle for the norm torus of Q(sqrt(d)).
#[derive(Clone, Debug)]
pub struct QuadraticTorusReport {
    pub d: i64,
    pub discriminant: i64,
    pub h: u64,
    pub w: u32,
    pub unit: Option<FundamentalUnit>,
    pub torus: TorusInvariants,
    pub algebraic_l0: LeadingValue,
    pub analytic_l0: LeadingValue,
    pub algebraic_l1: LeadingValue,
    pub analytic_l1: LeadingValue,
    pub abs_err_l0: f64,
    pub abs_err_l1: f64,
}

impl QuadraticTorusReport {
    pub fn max_abs_err(&self) -> f64 {
        self.abs_err_l0.max(self.abs_err_l1)
    }
}

/// Assemble the algebraic side ([Ext1] R_T / w_T with the rank-of-units
/// order) and the analytic side (Bernoulli value at s = 0 for imaginary d,
/// L(chi, 1) through the functional-equation ratio for real d; L(chi, 1)
/// itself at s = 1), comparing absolute values.
pub fn norm_torus_report(d: i64, tol: f64) -> Result<QuadraticTorusReport> {
    let field = QuadraticField::new(d)?;
    let delta = field.discriminant();
    let chi = QuadraticCharacter::new(delta)?;
    let torus = torus_invariants(d)?;
    let w = field.roots_of_unity();
    let l1 = l_at_one(&chi, tol)?;

    let (h, unit, algebraic_l0, analytic_l0, algebraic_l1) = if field.is_real() {
        let h = crate::quadratic::class_number_real(delta)?;
        let unit = fundamental_unit(d)?;
        // [Ext1] R_T / w_T; both unit-norm cases collapse to h log eps
        let alg0 = LeadingValue::approximate(
            1,
            torus.ext1_order as f64 * torus.regulator_t / torus.w_t as f64,
        );
        // L has a first-order zero at s = 0; leading term from s = 1 through
        // the completed functional equation
        let ana0 = LeadingValue::approximate(1, l1 / functional_ratio(&field));
        let alg1 = LeadingValue::approximate(
            0,
            2.0 * h as f64 * unit.regulator / (delta as f64).sqrt(),
        );
        (h, Some(unit), alg0, ana0, alg1)
    } else {
        let h = crate::quadratic::class_number_imaginary(delta)?;
        // exact rational 2h/w on the algebraic side
        let alg0 = LeadingValue::exact_rational(0, Rat::new(BigInt::from(2 * h), BigInt::from(w)));
        // exact rational |L(chi, 0)| = |-B_{1,chi}| on the analytic side
        let b = b1_chi(&chi);
        let ana0 = LeadingValue::exact_rational(0, (-b).abs());
        let alg1 = LeadingValue::approximate(
            0,
            2.0 * std::f64::consts::PI * h as f64
                / ((-delta) as f64).sqrt()
                / w as f64,
        );
        (h, None, alg0, ana0, alg1)
    };
    let analytic_l1 = LeadingValue::approximate(0, l1);

    let abs_err_l0 = (algebraic_l0.value.abs() - analytic_l0.value.abs()).abs();
    let abs_err_l1 = (algebraic_l1.value.abs() - analytic_l1.value.abs()).abs();

    Ok(QuadraticTorusReport {
        d,
        discriminant: delta,
        h,
        w,
        unit,
        torus,
        algebraic_l0,
        analytic_l0,
        algebraic_l1,
        analytic_l1,
        abs_err_l0,
        abs_err_l1,
    })
}

/// How a rational prime resolves in K, read off the character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeSplitting {
    /// chi(p) = 1: two places of norm p.
    Split,
    /// chi(p) = -1: one place of norm p^2.
    Inert,
}

/// The two routes to |zeta*_{K,S}(0)|: (a) the Euler characteristic of the
/// constant sheaf with the removed places, (b) the factorization
/// zeta_K = zeta * L(chi_Delta) with the Euler factors removed from both.
#[derive(Clone, Debug)]
pub struct ZetaComparison {
    pub d: i64,
    pub removed_primes: Vec<u64>,
    pub splittings: Vec<PrimeSplitting>,
    pub order_a: i64,
    pub value_a: f64,
    pub order_b: i64,
    pub value_b: f64,
    pub abs_err: f64,
    pub agree: bool,
}

pub fn zeta_s_comparison(field: &QuadraticField, removed_primes: &[u64], tol: f64) -> Result<ZetaComparison> {
    let delta = field.discriminant();
    let chi = QuadraticCharacter::new(delta)?;

    let mut splittings = Vec::new();
    let mut place_norms: Vec<u64> = Vec::new();
    let mut zeta_removals: Vec<EulerRemoval> = Vec::new();
    let mut l_removals: Vec<EulerRemoval> = Vec::new();
    for &p in removed_primes {
        if !is_prime_u64(p) {
            return reject(format!("{} is not prime", p));
        }
        let c = chi.eval(p as i64);
        match c {
            0 => return reject(format!("prime {} ramifies in Q(sqrt({}))", p, field.d())),
            1 => {
                splittings.push(PrimeSplitting::Split);
                place_norms.push(p);
                place_norms.push(p);
            }
            _ => {
                splittings.push(PrimeSplitting::Inert);
                place_norms.push(p * p);
            }
        }
        zeta_removals.push(EulerRemoval { norm: p, chi: 1 });
        l_removals.push(EulerRemoval { norm: p, chi: c });
    }

    // route (a): chi_U(Z) with the resolved places
    let chi_z = chi_constant_z(field, &place_norms)?;

    // route (b): zeta*(0) = -1/2 and the analytic L*(chi, 0), with factors
    // removed from each
    let zeta0 = LeadingValue::exact_rational(0, Rat::new(BigInt::from(-1), BigInt::from(2)));
    let zeta_s = remove_euler_factors(&zeta0, &zeta_removals, None)?;
    let l0 = if field.is_real() {
        let l1 = l_at_one(&chi, tol)?;
        LeadingValue::approximate(1, l1 / functional_ratio(field))
    } else {
        LeadingValue::exact_rational(0, (-b1_chi(&chi)).abs())
    };
    let l_s = remove_euler_factors(&l0, &l_removals, Some(&chi))?;

    let order_b = zeta_s.order + l_s.order;
    let value_b = (zeta_s.value * l_s.value).abs();

    let abs_err = (chi_z.value - value_b).abs();
    let agree = chi_z.order == order_b && abs_err <= tol;

    Ok(ZetaComparison {
        d: field.d(),
        removed_primes: removed_primes.to_vec(),
        splittings,
        order_a: chi_z.order,
        value_a: chi_z.value,
        order_b,
        value_b,
        abs_err,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_chis_are_one() {
        assert_eq!(chi_finite_constant(7), Rat::one());
        assert_eq!(chi_negligible(), Rat::one());
        assert_eq!(chi_constructible(), Rat::one());
    }

    #[test]
    fn chi_constant_z_examples() {
        // d = -1: h R / w = 1/4
        let f = QuadraticField::new(-1).unwrap();
        let c = chi_constant_z(&f, &[]).unwrap();
        assert_eq!(c.order, 0);
        assert!((c.value - 0.25).abs() < 1e-15);

        // d = 5: log phi / 2
        let f5 = QuadraticField::new(5).unwrap();
        let c = chi_constant_z(&f5, &[]).unwrap();
        assert_eq!(c.order, 1);
        assert!((c.value - 0.4812118250596034 / 2.0).abs() < 1e-12);
        assert!((c.value - 0.2406059125).abs() < 1e-9);

        // d = -1 with the split prime 5 removed: (1/4) (log 5)^2
        let c = chi_constant_z(&f, &[5, 5]).unwrap();
        assert_eq!(c.order, 2);
        let expect = 0.25 * 5f64.ln() * 5f64.ln();
        assert!((c.value - expect).abs() < 1e-12);
        assert!((c.value - 0.6475725985).abs() < 1e-9);
    }

    #[test]
    fn report_gaussian_field() {
        // d = -1: both sides 1/2 at s = 0, both sides pi/4 at s = 1
        let r = norm_torus_report(-1, 1e-10).unwrap();
        assert_eq!(r.h, 1);
        assert_eq!(r.w, 4);
        assert_eq!(r.algebraic_l0.order, 0);
        assert_eq!(r.algebraic_l0.exact, Some(Rat::new(BigInt::from(1), BigInt::from(2))));
        assert_eq!(r.analytic_l0.exact, Some(Rat::new(BigInt::from(1), BigInt::from(2))));
        assert_eq!(r.abs_err_l0, 0.0);
        assert!((r.algebraic_l1.value - std::f64::consts::PI / 4.0).abs() < 1e-12);
        assert!(r.abs_err_l1 < 1e-10);
    }

    #[test]
    fn report_golden_field() {
        // d = 5: h log eps at order 1
        let r = norm_torus_report(5, 1e-10).unwrap();
        assert_eq!(r.h, 1);
        assert_eq!(r.algebraic_l0.order, 1);
        assert_eq!(r.analytic_l0.order, 1);
        assert!((r.algebraic_l0.value - 0.4812118250596034).abs() < 1e-12);
        assert!(r.abs_err_l0 < 1e-9);
        assert!(r.abs_err_l1 < 1e-9);
    }

    #[test]
    fn zeta_comparison_examples() {
        let f = QuadraticField::new(-1).unwrap();
        // no removed primes: both routes 1/4
        let z = zeta_s_comparison(&f, &[], 1e-8).unwrap();
        assert!(z.agree, "{:?}", z);
        assert!((z.value_a - 0.25).abs() < 1e-12);
        assert!((z.value_b - 0.25).abs() < 1e-12);

        // split prime 5: both routes (1/4)(log 5)^2
        let z = zeta_s_comparison(&f, &[5], 1e-8).unwrap();
        assert!(z.agree, "{:?}", z);
        assert_eq!(z.splittings, vec![PrimeSplitting::Split]);
        assert_eq!(z.order_a, 2);

        // inert prime 3: route (a) log 9, route (b) 2 log 3
        let z = zeta_s_comparison(&f, &[3], 1e-8).unwrap();
        assert!(z.agree, "{:?}", z);
        assert_eq!(z.splittings, vec![PrimeSplitting::Inert]);
        assert_eq!(z.order_a, 1);
        assert!((z.value_a - 0.25 * 9f64.ln()).abs() < 1e-12);

        // ramified prime 2 is rejected
        assert!(zeta_s_comparison(&f, &[2], 1e-8).is_err());
    }

    #[test]
    fn zeta_comparison_real_field() {
        let f = QuadraticField::new(5).unwrap();
        let z = zeta_s_comparison(&f, &[], 1e-8).unwrap();
        assert!(z.agree, "{:?}", z);
        assert_eq!(z.order_a, 1);
        // split prime in Q(sqrt 5): chi_5(11) = 1
        let z = zeta_s_comparison(&f, &[11], 1e-8).unwrap();
        assert!(z.agree, "{:?}", z);
        assert_eq!(z.order_a, 3);
    }
}
