//! Local L-factors of a lattice with Frobenius action:
//! L_v(M, s) = det(1 - N(v)^{-s} F | M^{I_w})^{-1}, their order of
//! vanishing at s = 0, and the leading term computed by two independent
//! routes (Herbrand quotient vs. polynomial factorization), cross-checked
//! exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclic::{invariants_rank, tate_cohomology, CyclicModule};
use crate::error::{reject, Result};
use crate::matrix::{rat_to_f64, IntMatrix, Rat};

/// Integer polynomial, coefficients ascending in degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Self(coeffs)
    }

    pub fn one() -> Self {
        Self(vec![BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact division by (1 - t); None when (1 - t) does not divide.
    pub fn div_one_minus_t(&self) -> Option<IntPoly> {
        // (1 - t)(q_0 + ... + q_{d-1} t^{d-1}): p_0 = q_0, p_i = q_i - q_{i-1},
        // p_d = -q_{d-1}.
        let d = self.degree();
        if d == 0 {
            return if self.0[0].is_zero() { Some(IntPoly::new(vec![])) } else { None };
        }
        let mut q = Vec::with_capacity(d);
        let mut prev = self.0[0].clone();
        q.push(prev.clone());
        for i in 1..d {
            prev = &self.0[i] + &prev;
            q.push(prev.clone());
        }
        if &self.0[d] + &prev == BigInt::zero() {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() && self.degree() > 0 {
                continue;
            }
            let body = match i {
                0 => c.to_string(),
                _ => {
                    let var = if i == 1 { "t".to_string() } else { format!("t^{}", i) };
                    if c.is_one() {
                        var
                    } else if (-c).is_one() {
                        format!("-{}", var)
                    } else {
                        format!("{}*{}", c, var)
                    }
                }
            };
            terms.push(body);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(stripped) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        write!(f, "{}", s)
    }
}

/// det(1 - t*F) for a square integer matrix, by exact interpolation.
pub fn det_one_minus_t(f: &IntMatrix) -> IntPoly {
    assert!(f.is_square());
    let m = f.rows();
    // Interpolate the degree <= m polynomial from values at t = 0..m.
    let values: Vec<BigInt> = (0..=m as i64)
        .map(|t| {
            IntMatrix::identity(m)
                .sub(&f.scale(&BigInt::from(t)))
                .det()
        })
        .collect();
    let mut coeffs = vec![Rat::zero(); m + 1];
    for (k, val) in values.iter().enumerate() {
        // Lagrange basis polynomial through the nodes 0..=m at node k.
        let mut basis = vec![Rat::one()];
        let mut denom = Rat::one();
        for j in 0..=m {
            if j == k {
                continue;
            }
            // multiply basis by (t - j)
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b.clone();
                next[i] -= b * Rat::from(BigInt::from(j as i64));
            }
            basis = next;
            denom *= Rat::from(BigInt::from(k as i64 - j as i64));
        }
        let scale = Rat::from(val.clone()) / denom;
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += b * &scale;
        }
    }
    let ints: Vec<BigInt> = coeffs
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "char-style polynomial must have integer coefficients");
            c.to_integer()
        })
        .collect();
    IntPoly::new(ints)
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul_mod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow_mod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, b);
            }
            b = mul_mod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Decompose q = p^k with p prime; None when q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    for k in (1..=63u32).rev() {
        let guess = (q as f64).powf(1.0 / k as f64).round() as u64;
        for p in guess.saturating_sub(2)..=guess + 2 {
            if p < 2 {
                continue;
            }
            if let Some(pk) = (p as u128).checked_pow(k) {
                if pk == q as u128 && is_prime_u64(p) {
                    return Some((p, k));
                }
            }
        }
    }
    None
}

/// The data of a finite place: residue norm q = N(v), inertia degree f,
/// and the inertia-invariant lattice with its Frobenius action.
#[derive(Clone, Debug)]
pub struct LocalPlaceData {
    q: u64,
    f: u64,
    module: CyclicModule,
}

impl LocalPlaceData {
    pub fn new(q: u64, f: u64, module: CyclicModule) -> Result<Self> {
        if prime_power(q).is_none() {
            return reject(format!("residue norm {} is not a prime power", q));
        }
        if f == 0 {
            return reject("inertia degree must be positive");
        }
        if module.order() != f {
            return reject(format!(
                "declared module order {} does not match the inertia degree {}",
                module.order(),
                f
            ));
        }
        if !module.group().is_free() {
            return reject("the inertia-invariant module must be torsion free");
        }
        Ok(Self { q, f, module })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn f(&self) -> u64 {
        self.f
    }

    pub fn module(&self) -> &CyclicModule {
        &self.module
    }
}

/// Leading term of a local factor at s = 0, carried symbolically as
/// mantissa * (log q)^(-log_power).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalLeadingTerm {
    pub order_of_vanishing: i64,
    pub mantissa: Rat,
    pub log_power: i64,
    pub float_value: f64,
}

impl LocalLeadingTerm {
    fn build(mantissa: Rat, r: usize, q: u64) -> Self {
        let log_q = (q as f64).ln();
        let float_value = rat_to_f64(&mantissa) * log_q.powi(-(r as i32));
        Self {
            order_of_vanishing: -(r as i64),
            mantissa,
            log_power: r as i64,
            float_value,
        }
    }
}

/// P(t) = det(1 - t F) on M^{I_w}, so that L_v(M, s) = P(q^{-s})^{-1}.
pub fn local_l_polynomial(d: &LocalPlaceData) -> IntPoly {
    det_one_minus_t(d.module().sigma())
}

/// ord_{s=0} L_v(M, s) = -rank of the Frobenius-fixed sublattice.
pub fn local_order(d: &LocalPlaceData) -> i64 {
    -(invariants_rank(d.module()) as i64)
}

/// Leading term via the Herbrand quotient:
/// L_v^*(M, 0) = h / (f log q)^{r_v}, carried as (h / f^{r_v}) (log q)^{-r_v}.
pub fn local_leading_formula(d: &LocalPlaceData) -> LocalLeadingTerm {
    let r = invariants_rank(d.module());
    let h = tate_cohomology(d.module()).herbrand;
    let mantissa = h / Rat::from(BigInt::from(d.f()).pow(r as u32));
    LocalLeadingTerm::build(mantissa, r, d.q())
}

/// Leading term via the factorization P(t) = (1 - t)^{r_v} Q(t):
/// L_v^*(M, 0) = Q(1)^{-1} (log q)^{-r_v}. Q(1) = 0 would contradict the
/// injectivity of 1 - F on the norm-kernel complement and panics.
pub fn local_leading_direct(d: &LocalPlaceData) -> LocalLeadingTerm {
    let r = invariants_rank(d.module());
    let mut p = local_l_polynomial(d);
    for _ in 0..r {
        p = p
            .div_one_minus_t()
            .expect("P(t) must vanish at t = 1 to the order of the fixed rank");
    }
    let q1 = p.eval(&BigInt::one());
    assert!(!q1.is_zero(), "Q(1) = 0 contradicts the local leading-term factorization");
    let mantissa = Rat::new(BigInt::one(), q1);
    LocalLeadingTerm::build(mantissa, r, d.q())
}

/// Do the two routes agree exactly? Equivalent to Q(1) h = f^{r_v}.
pub fn crosscheck_local(d: &LocalPlaceData) -> bool {
    let a = local_leading_formula(d);
    let b = local_leading_direct(d);
    a.order_of_vanishing == b.order_of_vanishing
        && a.log_power == b.log_power
        && a.mantissa == b.mantissa
}

/// Numerical evaluation of a full local factor at a real s != 0, for
/// spot-checking: L_v(M, s) = P(q^{-s})^{-1}.
pub fn local_value_at(d: &LocalPlaceData, s: f64) -> f64 {
    let p = local_l_polynomial(d);
    let x = (d.q() as f64).powf(-s);
    let mut acc = 0.0;
    for c in p.coeffs().iter().rev() {
        acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
    }
    1.0 / acc
}

/// The cyclotomic polynomial Phi_n, by exact division of t^n - 1 by the
/// proper cyclotomic factors.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    fn poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
        let mut rem: Vec<BigInt> = num.coeffs().to_vec();
        let d = den.coeffs();
        let dd = den.degree();
        assert!(rem.len() > dd || rem.iter().all(|c| c.is_zero()));
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let lead = rem[i + dd].clone();
            let (quot, r) = num_integer::Integer::div_rem(&lead, &d[dd]);
            assert!(r.is_zero(), "non-exact polynomial division");
            q[i] = quot.clone();
            if quot.is_zero() {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                let t = &quot * dj;
                rem[i + j] -= t;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
        IntPoly::new(q)
    }

    let mut tn_minus_1 = vec![BigInt::zero(); n as usize + 1];
    tn_minus_1[0] = -BigInt::one();
    tn_minus_1[n as usize] = BigInt::one();
    let mut num = IntPoly::new(tn_minus_1);
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

/// Companion matrix of a monic integer polynomial.
pub fn companion_matrix(p: &IntPoly) -> IntMatrix {
    let d = p.degree();
    assert!(d >= 1 && p.coeffs()[d].is_one(), "companion matrix needs a monic polynomial");
    IntMatrix::from_fn(d, d, |i, j| {
        if j + 1 == d {
            -p.coeffs()[i].clone()
        } else if i == j + 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

/// det(1 - tF) as a rational function value check helper used in tests.
pub fn poly_eval_rat(p: &IntPoly, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc * x + Ratio::from(c.clone());
    }
    acc
}
