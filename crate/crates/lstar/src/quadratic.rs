//! Exact invariants of quadratic fields Q(sqrt(d)): discriminants, the
//! Kronecker character, class numbers (reduced-form enumeration for
//! imaginary fields, the analytic formula with an integrality guard for
//! real ones), fundamental units by continued fractions, and the
//! norm-torus invariants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{reject, Error, Result};
use crate::matrix::ln_bigint_abs;

/// Largest |discriminant| supported by default; keeps form enumeration and
/// character sums inside the runtime budget.
pub const MAX_ABS_DISCRIMINANT: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    Real,
    Imaginary,
}

/// The field Q(sqrt(d)) for squarefree d != 0, 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
    discriminant: i64,
    signature: Signature,
    roots_of_unity: u32,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return reject("d must be a squarefree integer other than 0 and 1");
        }
        if !is_squarefree(d) {
            return reject(format!("d = {} is not squarefree", d));
        }
        let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        if discriminant.abs() > MAX_ABS_DISCRIMINANT {
            return reject(format!(
                "|discriminant| = {} exceeds the supported bound {}",
                discriminant.abs(),
                MAX_ABS_DISCRIMINANT
            ));
        }
        let signature = if d > 0 { Signature::Real } else { Signature::Imaginary };
        let roots_of_unity = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        Ok(Self { d, discriminant, signature, roots_of_unity })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_real(&self) -> bool {
        self.signature == Signature::Real
    }

    pub fn roots_of_unity(&self) -> u32 {
        self.roots_of_unity
    }

    /// Class number: exact form enumeration (imaginary) or the analytic
    /// class number formula with an integrality guard (real).
    pub fn class_number(&self) -> Result<u64> {
        if self.is_real() {
            class_number_real(self.discriminant)
        } else {
            class_number_imaginary(self.discriminant)
        }
    }

    /// Regulator of the field: log of the fundamental unit, or 1 for
    /// imaginary fields (the empty regulator determinant).
    pub fn regulator(&self) -> Result<f64> {
        if self.is_real() {
            Ok(fundamental_unit(self.d)?.regulator)
        } else {
            Ok(1.0)
        }
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Is delta a fundamental discriminant? (1 counts, as the trivial case.)
pub fn is_fundamental_discriminant(delta: i64) -> bool {
    if delta == 1 {
        return true;
    }
    if delta == 0 {
        return false;
    }
    match delta.rem_euclid(4) {
        1 => is_squarefree(delta),
        0 => {
            let m = delta / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// The Kronecker symbol (a|n), defined for all integers.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos % 2 == 1 {
        // (a|2) for odd a: +1 if a = +-1 mod 8, -1 if a = +-3 mod 8
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0, // a even
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The quadratic character chi_Delta(n) = (Delta|n) attached to a
/// fundamental discriminant.
pub fn kronecker_character(delta: i64, n: i64) -> Result<i32> {
    if !is_fundamental_discriminant(delta) {
        return reject(format!("{} is not a fundamental discriminant", delta));
    }
    Ok(kronecker_symbol(delta, n))
}

/// Class number of an imaginary quadratic field by exhaustive enumeration
/// of reduced primitive forms (a, b, c): b^2 - 4ac = Delta, |b| <= a <= c,
/// gcd = 1, with b >= 0 when |b| = a or a = c.
pub fn class_number_imaginary(delta: i64) -> Result<u64> {
    if delta >= 0 {
        return reject("class_number_imaginary needs a negative discriminant");
    }
    if !is_fundamental_discriminant(delta) {
        return reject(format!("{} is not a fundamental discriminant", delta));
    }
    let abs = (-delta) as u64;
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= abs as i64 {
        for b in -a..=a {
            if (b - delta).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - delta;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            let g = gcd3(a, b, c);
            if g == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.unsigned_abs()
        .gcd(&b.unsigned_abs())
        .gcd(&c.unsigned_abs()) as i64
}

/// The fundamental unit eps = (a + b sqrt(Delta)) / 2 of a real quadratic
/// field, with a^2 - Delta b^2 = 4 * norm.
#[derive(Clone, Debug)]
pub struct FundamentalUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub norm: i8,
    pub regulator: f64,
}

fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Minimal solution of |a^2 - Delta b^2| = 4 via the purely periodic
/// continued fraction of (b0 + sqrt(Delta)) / 2, where b0 is the largest
/// integer below sqrt(Delta) with b0 = Delta mod 2. The period length l
/// gives the norm (-1)^l.
pub fn fundamental_unit(d: i64) -> Result<FundamentalUnit> {
    if d <= 1 {
        return reject("fundamental_unit needs squarefree d > 1");
    }
    let field = QuadraticField::new(d)?;
    if !field.is_real() {
        return reject("fundamental_unit needs a real field");
    }
    let delta = field.discriminant() as u64;
    let s = isqrt_u64(delta);
    let mut b0 = s as i64;
    if (b0 - delta as i64).rem_euclid(2) != 0 {
        b0 -= 1;
    }
    assert!(b0 >= 1);

    // PQa recurrences for alpha_i = (p + sqrt(delta)) / q.
    let (p0, q0) = (b0, 2i64);
    let mut p = p0;
    let mut q = q0;
    // convergent denominators: (q_{-1}, q_0) = (0, 1)
    let mut den_prev = BigInt::from(0);
    let mut den_cur = BigInt::from(1);
    let mut period = 0u64;
    loop {
        let a_i = (p + s as i64).div_euclid(q);
        if period > 0 {
            let next = BigInt::from(a_i) * &den_cur + &den_prev;
            den_prev = std::mem::replace(&mut den_cur, next);
        }
        let p_next = a_i * q - p;
        let q_next = (delta as i64 - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        period += 1;
        if (p, q) == (p0, q0) {
            break;
        }
        assert!(period < 10_000_000, "continued fraction period overflow");
    }

    // eps = q_{l-1} * (b0 + sqrt(Delta))/2 + q_{l-2}
    let a = &den_cur * BigInt::from(b0) + BigInt::from(2) * &den_prev;
    let b = den_cur;
    let norm: i8 = if period % 2 == 1 { -1 } else { 1 };

    debug_assert_eq!(
        (&a * &a - BigInt::from(delta) * &b * &b).to_i64(),
        Some(4 * norm as i64)
    );

    // log eps = log(a + b sqrt(Delta)) - log 2, via stable big-int logs
    let la = ln_bigint_abs(&a);
    let lb = ln_bigint_abs(&b) + 0.5 * (delta as f64).ln();
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    let regulator = hi + (1.0 + (lo - hi).exp()).ln() - std::f64::consts::LN_2;

    Ok(FundamentalUnit { a, b, norm, regulator })
}

/// Class number of a real quadratic field by the analytic formula
/// h = sqrt(Delta) L(chi, 1) / (2 log eps), rounded to the nearest integer.
/// The unrounded value must lie within 0.2 of an integer.
pub fn class_number_real(delta: i64) -> Result<u64> {
    if delta <= 0 {
        return reject("class_number_real needs a positive discriminant");
    }
    if !is_fundamental_discriminant(delta) {
        return reject(format!("{} is not a fundamental discriminant", delta));
    }
    let d = if delta % 4 == 0 { delta / 4 } else { delta };
    let unit = fundamental_unit(d)?;
    let chi = crate::lseries::QuadraticCharacter::new(delta)?;
    let l1 = crate::lseries::l_at_one(&chi, 1e-9)?;
    let h_raw = (delta as f64).sqrt() * l1 / (2.0 * unit.regulator);
    let h = h_raw.round();
    if (h_raw - h).abs() >= 0.2 {
        return Err(Error::Precision(format!(
            "analytic class number {} is not within 0.2 of an integer",
            h_raw
        )));
    }
    if h < 0.5 {
        return Err(Error::Precision(format!(
            "analytic class number rounded to {}, expected a positive integer",
            h
        )));
    }
    Ok(h as u64)
}

/// How the global sections of the norm torus sit inside the unit group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomDescription {
    /// Imaginary case: the roots of unity mu_K.
    RootsOfUnity,
    /// Real case with N(eps) = +1: the full unit group.
    FullUnitGroup,
    /// Real case with N(eps) = -1: {+-1} x eps^{2Z}, of index 2.
    IndexTwoUnitSubgroup,
}

/// The section-5.3 bundle for the norm torus of Q(sqrt(d)).
#[derive(Clone, Debug)]
pub struct TorusInvariants {
    pub hom: HomDescription,
    pub ext1_order: u64,
    pub regulator_t: f64,
    pub w_t: u32,
}

/// Invariants of the norm-one torus per the three-case analysis:
/// imaginary: [Ext1] = 2h, R_T = 1, w_T = w_K;
/// real, N(eps) = +1: [Ext1] = 2h, R_T = log eps, w_T = 2;
/// real, N(eps) = -1: [Ext1] = h, R_T = 2 log eps, w_T = 2.
pub fn torus_invariants(d: i64) -> Result<TorusInvariants> {
    let field = QuadraticField::new(d)?;
    if !field.is_real() {
        let h = class_number_imaginary(field.discriminant())?;
        return Ok(TorusInvariants {
            hom: HomDescription::RootsOfUnity,
            ext1_order: 2 * h,
            regulator_t: 1.0,
            w_t: field.roots_of_unity(),
        });
    }
    let h = class_number_real(field.discriminant())?;
    let unit = fundamental_unit(d)?;
    if unit.norm == 1 {
        Ok(TorusInvariants {
            hom: HomDescription::FullUnitGroup,
            ext1_order: 2 * h,
            regulator_t: unit.regulator,
            w_t: 2,
        })
    } else {
        Ok(TorusInvariants {
            hom: HomDescription::IndexTwoUnitSubgroup,
            ext1_order: h,
            regulator_t: 2.0 * unit.regulator,
            w_t: 2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_invariants() {
        let f = QuadraticField::new(-1).unwrap();
        assert_eq!(f.discriminant(), -4);
        assert_eq!(f.roots_of_unity(), 4);
        let f = QuadraticField::new(-3).unwrap();
        assert_eq!(f.discriminant(), -3);
        assert_eq!(f.roots_of_unity(), 6);
        let f = QuadraticField::new(5).unwrap();
        assert_eq!(f.discriminant(), 5);
        assert_eq!(f.roots_of_unity(), 2);
        let f = QuadraticField::new(2).unwrap();
        assert_eq!(f.discriminant(), 8);
        assert!(QuadraticField::new(4).is_err());
        assert!(QuadraticField::new(12).is_err());
        assert!(QuadraticField::new(0).is_err());
        assert!(QuadraticField::new(1).is_err());
    }

    #[test]
    fn kronecker_examples() {
        // (-4|n) = (-1)^((n-1)/2) for odd n
        for (n, expect) in [(1, 1), (3, -1), (5, 1), (7, -1)] {
            assert_eq!(kronecker_symbol(-4, n), expect);
            assert_eq!(
                expect,
                if (n - 1) / 2 % 2 == 0 { 1 } else { -1 },
                "oracle check"
            );
        }
        // shared factor -> 0
        assert_eq!(kronecker_symbol(-4, 6), 0);
        assert_eq!(kronecker_symbol(5, 10), 0);
        // 2 is a quadratic nonresidue mod 5
        assert_eq!(kronecker_symbol(5, 2), -1);
    }

    #[test]
    fn kronecker_vs_legendre_oracle() {
        // Euler's criterion at odd primes
        for &p in &[3i64, 5, 7, 11, 13, 17, 19, 23] {
            for delta in [-23i64, -4, -3, 5, 8, 12, 13, 40] {
                if delta % p == 0 {
                    assert_eq!(kronecker_symbol(delta, p), 0);
                    continue;
                }
                let mut pow = 1i64;
                let e = (p - 1) / 2;
                let base = delta.rem_euclid(p);
                for _ in 0..e {
                    pow = (pow * base).rem_euclid(p);
                }
                let legendre = if pow == 1 { 1 } else { -1 };
                assert_eq!(kronecker_symbol(delta, p), legendre, "delta={} p={}", delta, p);
            }
        }
    }

    #[test]
    fn kronecker_multiplicative() {
        for delta in [-23i64, -4, 5, 12] {
            for m in 1i64..30 {
                for n in 1i64..30 {
                    assert_eq!(
                        kronecker_symbol(delta, m * n),
                        kronecker_symbol(delta, m) * kronecker_symbol(delta, n)
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_periodic_mod_delta() {
        for delta in [-23i64, -4, -3, 5, 8, 12] {
            let period = delta.unsigned_abs() as i64;
            for n in 1i64..100 {
                assert_eq!(
                    kronecker_symbol(delta, n),
                    kronecker_symbol(delta, n + period),
                    "delta={} n={}",
                    delta,
                    n
                );
            }
        }
    }

    #[test]
    fn fundamental_discriminants() {
        for good in [1i64, -3, -4, -7, -8, -23, 5, 8, 12, 13, 40] {
            assert!(is_fundamental_discriminant(good), "{}", good);
        }
        for bad in [0i64, 2, 3, -2, 9, 16, 18, 20, -9, 25, 45] {
            assert!(!is_fundamental_discriminant(bad), "{}", bad);
        }
    }

    #[test]
    fn imaginary_class_numbers() {
        assert_eq!(class_number_imaginary(-4).unwrap(), 1);
        assert_eq!(class_number_imaginary(-3).unwrap(), 1);
        assert_eq!(class_number_imaginary(-23).unwrap(), 3);
        // classical values
        for (delta, h) in [(-7, 1), (-8, 1), (-11, 1), (-15, 2), (-20, 2), (-24, 2), (-31, 3), (-47, 5)] {
            assert_eq!(class_number_imaginary(delta).unwrap(), h, "delta={}", delta);
        }
        assert!(class_number_imaginary(-9).is_err());
        assert!(class_number_imaginary(5).is_err());
    }

    #[test]
    fn fundamental_unit_examples() {
        // d = 5: eps = (1 + sqrt 5)/2, norm -1
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.a.to_i64().unwrap(), u.b.to_i64().unwrap(), u.norm), (1, 1, -1));
        assert!((u.regulator - 0.4812118250596034).abs() < 1e-12);

        // d = 3 (Delta = 12): eps = 2 + sqrt 3, stored (4, 1), norm +1
        let u = fundamental_unit(3).unwrap();
        assert_eq!((u.a.to_i64().unwrap(), u.b.to_i64().unwrap(), u.norm), (4, 1, 1));
        assert!((u.regulator - 1.3169578969248166).abs() < 1e-12);

        // d = 2 (Delta = 8): eps = 1 + sqrt 2, stored (2, 1), norm -1
        let u = fundamental_unit(2).unwrap();
        assert_eq!((u.a.to_i64().unwrap(), u.b.to_i64().unwrap(), u.norm), (2, 1, -1));
        assert!((u.regulator - 0.881373587019543).abs() < 1e-12);
    }

    #[test]
    fn fundamental_unit_is_minimal_by_scan() {
        // bounded scan oracle: no smaller b solves |a^2 - Delta b^2| = 4
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 19, 21, 22, 23] {
            let field = QuadraticField::new(d).unwrap();
            let delta = field.discriminant();
            let u = fundamental_unit(d).unwrap();
            let mut found: Option<(i64, i64)> = None;
            'scan: for b in 1i64..=2000 {
                for pm in [-4i64, 4] {
                    let a2 = delta * b * b + pm;
                    if a2 <= 0 {
                        continue;
                    }
                    let a = isqrt_u64(a2 as u64) as i64;
                    if a * a == a2 {
                        found = Some((a, b));
                        break 'scan;
                    }
                }
            }
            let (a, b) = found.expect("scan must find the unit for small d");
            assert_eq!(BigInt::from(a), u.a, "d={}", d);
            assert_eq!(BigInt::from(b), u.b, "d={}", d);
        }
    }

    #[test]
    fn unit_has_large_entries_for_hard_d() {
        // d = 46: eps = 24335 + 3588 sqrt(46), norm +1
        let u = fundamental_unit(46).unwrap();
        assert_eq!(u.a, BigInt::from(48670));
        assert_eq!(u.b, BigInt::from(3588));
        assert_eq!(u.norm, 1);
    }

    #[test]
    fn torus_invariants_cases() {
        // d = -1: ext1 = 2h = 2, R_T = 1, w_T = 4
        let t = torus_invariants(-1).unwrap();
        assert_eq!((t.ext1_order, t.w_t), (2, 4));
        assert_eq!(t.regulator_t, 1.0);
        assert_eq!(t.hom, HomDescription::RootsOfUnity);

        // d = 5: N(eps) = -1 -> ext1 = h = 1, R_T = 2 log eps, w_T = 2
        let t = torus_invariants(5).unwrap();
        assert_eq!((t.ext1_order, t.w_t), (1, 2));
        assert_eq!(t.hom, HomDescription::IndexTwoUnitSubgroup);
        assert!((t.regulator_t - 2.0 * 0.4812118250596034).abs() < 1e-12);

        // d = 3: N(eps) = +1 -> ext1 = 2h = 2, R_T = log eps, w_T = 2
        let t = torus_invariants(3).unwrap();
        assert_eq!((t.ext1_order, t.w_t), (2, 2));
        assert_eq!(t.hom, HomDescription::FullUnitGroup);
    }

    #[test]
    fn torus_collapse_identity() {
        // both real cases give ext1 * R_T / w_T = h log eps
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13] {
            let field = QuadraticField::new(d).unwrap();
            let h = field.class_number().unwrap() as f64;
            let reg = fundamental_unit(d).unwrap().regulator;
            let t = torus_invariants(d).unwrap();
            let lhs = t.ext1_order as f64 * t.regulator_t / t.w_t as f64;
            assert!((lhs - h * reg).abs() <= 1e-12 * h * reg, "d={}", d);
        }
    }
}
