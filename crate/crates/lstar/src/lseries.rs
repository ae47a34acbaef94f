//! Dirichlet L-values of quadratic characters: the exact generalized
//! Bernoulli value at s = 0, L(chi, 1) by closed finite character sums with
//! a slow partial-sum detector, the functional-equation ratio, and removal
//! of finitely many Euler factors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{reject, Error, Result};
use crate::local::prime_power;
use crate::matrix::{rat_to_f64, Rat};
use crate::quadratic::{is_fundamental_discriminant, kronecker_symbol, QuadraticField, Signature};

/// The quadratic character attached to a fundamental discriminant with
/// |Delta| >= 3 (the trivial character is handled separately by callers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticCharacter {
    delta: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl QuadraticCharacter {
    pub fn new(delta: i64) -> Result<Self> {
        if !is_fundamental_discriminant(delta) {
            return reject(format!("{} is not a fundamental discriminant", delta));
        }
        if delta == 1 {
            return reject("the trivial character is not represented here");
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// chi(-1) = sign of Delta: odd characters have Delta < 0.
    pub fn parity(&self) -> Parity {
        if self.delta < 0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn period(&self) -> u64 {
        self.delta.unsigned_abs()
    }

    pub fn eval(&self, n: i64) -> i32 {
        kronecker_symbol(self.delta, n)
    }

    /// chi over one period: table[r] = chi(r) for r = 0..|Delta|-1.
    pub fn table(&self) -> Vec<i32> {
        (0..self.period() as i64).map(|r| self.eval(r)).collect()
    }
}

/// B_{1,chi} = (1/|Delta|) sum_{a=1}^{|Delta|} chi(a) a, exact.
/// Zero for even nontrivial characters; L(chi, 0) = -B_{1,chi} for odd ones.
pub fn b1_chi(chi: &QuadraticCharacter) -> Rat {
    let p = chi.period() as i64;
    let mut sum: i128 = 0;
    for a in 1..=p {
        sum += (chi.eval(a) as i128) * (a as i128);
    }
    Rat::new(BigInt::from(sum), BigInt::from(p))
}

fn kahan_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let y = x - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Closed-form L(chi, 1):
/// odd chi: -pi * B_{1,chi} / sqrt(|Delta|);
/// even chi: -(1/sqrt(Delta)) sum chi(a) log sin(pi a / Delta).
fn l_at_one_closed_form(chi: &QuadraticCharacter) -> f64 {
    let p = chi.period();
    match chi.parity() {
        Parity::Odd => {
            let b = b1_chi(chi);
            -std::f64::consts::PI * rat_to_f64(&b) / (p as f64).sqrt()
        }
        Parity::Even => {
            let mut sum = 0.0;
            let mut comp = 0.0;
            for a in 1..p {
                let c = chi.eval(a as i64);
                if c == 0 {
                    continue;
                }
                let term = (c as f64) * (std::f64::consts::PI * a as f64 / p as f64).sin().ln();
                kahan_add(&mut sum, &mut comp, term);
            }
            -sum / (p as f64).sqrt()
        }
    }
}

/// Slow route: partial sums of sum chi(n)/n with the oscillation averaged
/// out twice over a full period. The tail after double averaging is
/// O(c* P^2 / N^3) with c* the maximal character prefix sum.
fn l_at_one_partial_sums(chi: &QuadraticCharacter, tol: f64) -> f64 {
    let table = chi.table();
    let p = table.len() as u64;

    let c_star = {
        let mut acc = 0i64;
        let mut max = 1i64;
        for &c in &table[1..] {
            acc += c as i64;
            max = max.max(acc.abs());
        }
        max as f64
    };
    let n_est = (40.0 * c_star * (p as f64) * (p as f64) / tol).cbrt().ceil() as u64;
    let n_base = n_est.max(200_000).max(20 * p).min(300_000_000);
    let n_start = n_base.div_ceil(p) * p;
    let n_total = n_start + 2 * p - 2;

    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut window: Vec<f64> = Vec::with_capacity((2 * p - 1) as usize);
    for n in 1..=n_total {
        let c = table[(n % p) as usize];
        if c != 0 {
            kahan_add(&mut sum, &mut comp, c as f64 / n as f64);
        }
        if n >= n_start {
            window.push(sum);
        }
    }

    // prefix sums of the stored partial sums, then the average of the P
    // window averages
    let mut prefix = Vec::with_capacity(window.len() + 1);
    prefix.push(0.0);
    for w in &window {
        prefix.push(prefix.last().unwrap() + w);
    }
    let mut acc = 0.0;
    let mut acc_comp = 0.0;
    for j in 0..p as usize {
        let avg = (prefix[j + p as usize] - prefix[j]) / p as f64;
        kahan_add(&mut acc, &mut acc_comp, avg);
    }
    acc / p as f64
}

/// L(chi, 1) to absolute accuracy tol (tol >= 1e-12), by the closed finite
/// sums, with the naive partial-sum route as the disagreement detector.
pub fn l_at_one(chi: &QuadraticCharacter, tol: f64) -> Result<f64> {
    if !(tol >= 1e-12) {
        return reject(format!("tolerance {} is below the supported 1e-12", tol));
    }
    let primary = l_at_one_closed_form(chi);
    let detector = l_at_one_partial_sums(chi, tol);
    if (primary - detector).abs() > 10.0 * tol {
        return Err(Error::Precision(format!(
            "L(chi_{}, 1) routes disagree: closed form {} vs partial sums {}",
            chi.delta(),
            primary,
            detector
        )));
    }
    Ok(primary)
}

/// |L*(T-hat, 1) / L*(T-hat, 0)| from the completed functional equation,
/// specialized to norm tori of quadratic fields over Q:
/// 2^{r_v} pi^{1 - r_v} / sqrt(|Delta|), i.e. pi / sqrt(|Delta|) for
/// imaginary fields (r_v = 0) and 2 / sqrt(Delta) for real ones (r_v = 1).
pub fn functional_ratio(field: &QuadraticField) -> f64 {
    let abs_delta = field.discriminant().unsigned_abs() as f64;
    match field.signature() {
        Signature::Imaginary => std::f64::consts::PI / abs_delta.sqrt(),
        Signature::Real => 2.0 / abs_delta.sqrt(),
    }
}

/// Order and leading coefficient of an L-function at a point, with the
/// exact rational kept alongside the float when one exists.
#[derive(Clone, Debug)]
pub struct LeadingValue {
    pub order: i64,
    pub value: f64,
    pub exact: Option<Rat>,
}

impl LeadingValue {
    pub fn exact_rational(order: i64, exact: Rat) -> Self {
        let value = rat_to_f64(&exact);
        Self { order, value, exact: Some(exact) }
    }

    pub fn approximate(order: i64, value: f64) -> Self {
        Self { order, value, exact: None }
    }

    /// Consistency of the stored float with the exact value, when present.
    pub fn is_consistent(&self) -> bool {
        match &self.exact {
            None => true,
            Some(e) => {
                let ev = rat_to_f64(e);
                (self.value - ev).abs() <= 1e-12 * ev.abs().max(f64::MIN_POSITIVE)
            }
        }
    }
}

/// One removed Euler factor: the place norm and the character value at it
/// (1 for factors of a zeta function).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerRemoval {
    pub norm: u64,
    pub chi: i32,
}

/// Remove finitely many Euler factors from a leading value at s = 0. Each
/// factor (1 - chi(p) N^{-s}) contributes order +1 and a factor log N when
/// chi(p) = 1, and multiplies the value by the constant (1 - chi(p))
/// otherwise. When a character is supplied, the given chi values are
/// validated against it.
pub fn remove_euler_factors(
    lead: &LeadingValue,
    removals: &[EulerRemoval],
    character: Option<&QuadraticCharacter>,
) -> Result<LeadingValue> {
    let mut order = lead.order;
    let mut value = lead.value;
    let mut exact = lead.exact.clone();
    for r in removals {
        if prime_power(r.norm).is_none() {
            return reject(format!("removed norm {} is not a prime power", r.norm));
        }
        if !(-1..=1).contains(&r.chi) {
            return reject(format!("character value {} is not in {{-1, 0, 1}}", r.chi));
        }
        if let Some(chi) = character {
            let expect = chi.eval(r.norm as i64);
            if expect != r.chi {
                return reject(format!(
                    "character value {} at {} is inconsistent with chi_{} = {}",
                    r.chi,
                    r.norm,
                    chi.delta(),
                    expect
                ));
            }
        }
        match r.chi {
            1 => {
                order += 1;
                value *= (r.norm as f64).ln();
                exact = None;
            }
            c => {
                let factor = 1 - c; // 2 or 1
                value *= factor as f64;
                if let Some(e) = exact {
                    exact = Some(e * Rat::from(BigInt::from(factor)));
                }
            }
        }
    }
    Ok(match exact {
        Some(e) => {
            debug_assert!((rat_to_f64(&e) - value).abs() <= 1e-9 * value.abs().max(1.0));
            LeadingValue::exact_rational(order, e)
        }
        None => LeadingValue::approximate(order, value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn b1_examples() {
        // Delta = -4: (1*1 + (-1)*3)/4 = -1/2, so L(chi, 0) = 1/2
        let chi = QuadraticCharacter::new(-4).unwrap();
        assert_eq!(b1_chi(&chi), rat(-1, 2));
        // even character -> 0
        let chi = QuadraticCharacter::new(5).unwrap();
        assert_eq!(b1_chi(&chi), Rat::zero());
        // Delta = -23 -> -3, matching 2h/w with h = 3, w = 2
        let chi = QuadraticCharacter::new(-23).unwrap();
        assert_eq!(b1_chi(&chi), rat(-3, 1));
    }

    #[test]
    fn l_at_one_leibniz() {
        // Delta = -4: Leibniz series 1 - 1/3 + 1/5 - ... = pi/4
        let chi = QuadraticCharacter::new(-4).unwrap();
        let l = l_at_one(&chi, 1e-10).unwrap();
        assert!((l - std::f64::consts::PI / 4.0).abs() < 1e-12, "{}", l);
    }

    #[test]
    fn l_at_one_golden_ratio() {
        // Delta = 5: 2 log phi / sqrt 5
        let chi = QuadraticCharacter::new(5).unwrap();
        let l = l_at_one(&chi, 1e-10).unwrap();
        let expect = 2.0 * ((1.0 + 5f64.sqrt()) / 2.0).ln() / 5f64.sqrt();
        assert!((l - expect).abs() < 1e-12, "{} vs {}", l, expect);
        assert!((l - 0.4304089409640040).abs() < 1e-10);
    }

    #[test]
    fn l_at_one_eisenstein() {
        // Delta = -3: 2 pi h / (w sqrt 3) with h = 1, w = 6
        let chi = QuadraticCharacter::new(-3).unwrap();
        let l = l_at_one(&chi, 1e-10).unwrap();
        let expect = 2.0 * std::f64::consts::PI / (6.0 * 3f64.sqrt());
        assert!((l - expect).abs() < 1e-12);
        assert!((l - 0.6045997880780726).abs() < 1e-10);
    }

    #[test]
    fn detector_agrees_at_tight_tolerance() {
        for delta in [-4i64, -3, 5, 8, 12, -23, 40] {
            let chi = QuadraticCharacter::new(delta).unwrap();
            assert!(l_at_one(&chi, 1e-12).is_ok(), "delta = {}", delta);
        }
    }

    #[test]
    fn tolerance_precondition() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        assert!(l_at_one(&chi, 1e-13).is_err());
    }

    #[test]
    fn functional_ratio_examples() {
        // imaginary: pi / sqrt(4) = pi/2 (L*(1) = pi/4 over L*(0) = 1/2)
        let f = QuadraticField::new(-1).unwrap();
        assert!((functional_ratio(&f) - std::f64::consts::PI / 2.0).abs() < 1e-15);
        // real: 2/sqrt(5), 2/sqrt(12)
        let f = QuadraticField::new(5).unwrap();
        assert!((functional_ratio(&f) - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((functional_ratio(&f) - 0.8944271909999159).abs() < 1e-12);
        let f = QuadraticField::new(3).unwrap();
        assert!((functional_ratio(&f) - 2.0 / 12f64.sqrt()).abs() < 1e-15);
        assert!((functional_ratio(&f) - 0.5773502691896258).abs() < 1e-12);
    }

    #[test]
    fn remove_factors_examples() {
        let lead = LeadingValue::exact_rational(0, rat(-1, 2));
        // removing nothing is the identity
        let same = remove_euler_factors(&lead, &[], None).unwrap();
        assert_eq!(same.order, 0);
        assert_eq!(same.exact, Some(rat(-1, 2)));

        // zeta case: remove norm 2 -> order +1, value x log 2
        let z = remove_euler_factors(&lead, &[EulerRemoval { norm: 2, chi: 1 }], None).unwrap();
        assert_eq!(z.order, 1);
        assert!((z.value - (-0.5) * 2f64.ln()).abs() < 1e-15);
        assert!(z.exact.is_none());

        // chi_{-4} at p = 3: chi = -1, order unchanged, value x2
        let chi = QuadraticCharacter::new(-4).unwrap();
        let lead = LeadingValue::exact_rational(0, rat(1, 2));
        let r = remove_euler_factors(&lead, &[EulerRemoval { norm: 3, chi: -1 }], Some(&chi)).unwrap();
        assert_eq!(r.order, 0);
        assert_eq!(r.exact, Some(rat(1, 1)));

        // inconsistent chi value is rejected
        assert!(remove_euler_factors(&lead, &[EulerRemoval { norm: 3, chi: 1 }], Some(&chi)).is_err());
        // non prime power rejected
        assert!(remove_euler_factors(&lead, &[EulerRemoval { norm: 6, chi: 1 }], None).is_err());
    }

    #[test]
    fn remove_factors_compose() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        let lead = LeadingValue::exact_rational(0, rat(1, 2));
        let a = remove_euler_factors(&lead, &[EulerRemoval { norm: 5, chi: 1 }], Some(&chi)).unwrap();
        let ab = remove_euler_factors(&a, &[EulerRemoval { norm: 13, chi: 1 }], Some(&chi)).unwrap();
        let both = remove_euler_factors(
            &lead,
            &[EulerRemoval { norm: 5, chi: 1 }, EulerRemoval { norm: 13, chi: 1 }],
            Some(&chi),
        )
        .unwrap();
        assert_eq!(ab.order, both.order);
        assert_eq!(ab.order, 2);
        assert!((ab.value - both.value).abs() < 1e-15);
    }

    #[test]
    fn imaginary_bernoulli_matches_class_number() {
        use crate::quadratic::class_number_imaginary;
        // -B_{1,chi} = 2h/w exactly, spot family
        for (delta, w) in [(-3i64, 6u64), (-4, 4), (-7, 2), (-8, 2), (-23, 2), (-47, 2)] {
            let chi = QuadraticCharacter::new(delta).unwrap();
            let h = class_number_imaginary(delta).unwrap();
            let lhs = -b1_chi(&chi);
            let rhs = Rat::new(BigInt::from(2 * h), BigInt::from(w));
            assert_eq!(lhs, rhs, "delta = {}", delta);
        }
    }

    #[test]
    fn dirichlet_class_number_formula_cross_check() {
        // L(1, chi) vs 2 pi h / (w sqrt(|Delta|)) within 1e-8
        for delta in [-3i64, -4, -7, -8, -11, -15, -20, -23, -24] {
            let chi = QuadraticCharacter::new(delta).unwrap();
            let h = crate::quadratic::class_number_imaginary(delta).unwrap() as f64;
            let w = match delta {
                -3 => 6.0,
                -4 => 4.0,
                _ => 2.0,
            };
            let l = l_at_one(&chi, 1e-9).unwrap();
            let expect = 2.0 * std::f64::consts::PI * h / (w * ((-delta) as f64).sqrt());
            assert!((l - expect).abs() < 1e-8, "delta = {}", delta);
        }
    }
}
