//! Tate cohomology of a finite cyclic group acting on a finitely generated
//! abelian group: fixed points modulo norms, norm kernel modulo the
//! augmentation image, and the Herbrand quotient.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{reject, Result};
use crate::group::{lattice_quotient, AbHom, FgAbGroup};
use crate::matrix::{preimage_lattice, IntMatrix, Rat};

/// A finitely generated abelian group with an automorphism of declared
/// finite order n. The declared order is part of the data (it may exceed
/// the multiplicative order of the action) and sigma^n = 1 is verified.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    group: FgAbGroup,
    sigma: IntMatrix,
    order: u64,
}

impl CyclicModule {
    pub fn new(group: FgAbGroup, sigma: IntMatrix, order: u64) -> Result<Self> {
        if order == 0 {
            return reject("declared order must be positive");
        }
        // sigma must be an endomorphism...
        let endo = AbHom::new(group.clone(), group.clone(), sigma)?;
        // ... with sigma^order the identity, which also makes it an
        // automorphism (sigma^(order-1) is the inverse).
        let power = AbHom::new(
            group.clone(),
            group.clone(),
            endo.matrix().pow(order),
        )?;
        if !power.equal_as_hom(&AbHom::identity(&group)) {
            return reject(format!("sigma^{} is not the identity on {}", order, group));
        }
        Ok(Self { group, sigma: endo.matrix().clone(), order })
    }

    /// The module with trivial action and declared order n.
    pub fn trivial_action(group: FgAbGroup, order: u64) -> Self {
        let n = group.num_generators();
        Self::new(group, IntMatrix::identity(n), order).expect("identity is always a valid action")
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn sigma_minus_one(&self) -> IntMatrix {
        self.sigma.sub(&IntMatrix::identity(self.group.num_generators()))
    }

    fn norm_matrix(&self) -> IntMatrix {
        let n = self.group.num_generators();
        let mut acc = IntMatrix::zero(n, n);
        let mut pow = IntMatrix::identity(n);
        for i in 0..self.order {
            acc = acc.add(&pow);
            if i + 1 < self.order {
                pow = pow.mul(&self.sigma);
            }
        }
        acc
    }
}

/// Tate H^0 and H^-1 of a cyclic action, both finite, and their ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateGroups {
    pub h0_tate: FgAbGroup,
    pub h_minus1_tate: FgAbGroup,
    pub herbrand: Rat,
}

/// The norm N = 1 + sigma + ... + sigma^(n-1) as a self-map.
pub fn norm_endomorphism(m: &CyclicModule) -> AbHom {
    AbHom::new(m.group().clone(), m.group().clone(), m.norm_matrix())
        .expect("the norm of a valid action is a valid endomorphism")
}

/// Fixed subgroup ker(sigma - 1) as an abstract group, computed by lifting
/// to the free cover and saturating against the relations.
pub fn fixed_subgroup(m: &CyclicModule) -> FgAbGroup {
    let n = m.group().num_generators();
    if n == 0 {
        return FgAbGroup::trivial();
    }
    let rel = m.group().relation_matrix();
    let fixed = preimage_lattice(&m.sigma_minus_one(), &rel);
    lattice_quotient(&fixed, &rel)
}

/// rank_Z of the fixed subgroup.
pub fn invariants_rank(m: &CyclicModule) -> usize {
    fixed_subgroup(m).free_rank()
}

/// H^0_T = fixed points / norms and H^-1_T = ker(norm) / image(sigma - 1),
/// with the Herbrand quotient [H^0_T] / [H^-1_T].
///
/// Both groups are finite for every valid module; a failure of finiteness
/// signals a bug, not bad input, and panics.
pub fn tate_cohomology(m: &CyclicModule) -> TateGroups {
    let n = m.group().num_generators();
    if n == 0 {
        return TateGroups {
            h0_tate: FgAbGroup::trivial(),
            h_minus1_tate: FgAbGroup::trivial(),
            herbrand: Rat::one(),
        };
    }
    let rel = m.group().relation_matrix();
    let norm = m.norm_matrix();
    let aug = m.sigma_minus_one();

    let fixed_lattice = preimage_lattice(&aug, &rel);
    let norm_image = norm.hstack(&rel);
    let h0 = lattice_quotient(&fixed_lattice, &norm_image);

    let norm_kernel = preimage_lattice(&norm, &rel);
    let aug_image = aug.hstack(&rel);
    let h_minus1 = lattice_quotient(&norm_kernel, &aug_image);

    assert!(h0.is_finite(), "H^0_T of a valid cyclic module must be finite");
    assert!(h_minus1.is_finite(), "H^-1_T of a valid cyclic module must be finite");

    let herbrand = Rat::new(h0.torsion_order(), h_minus1.torsion_order());
    TateGroups { h0_tate: h0, h_minus1_tate: h_minus1, herbrand }
}

/// Brute-force Tate orders ([H^0_T], [H^-1_T]) by enumerating the elements
/// of a finite module; the independent oracle for the lattice route.
/// Returns None when the group is infinite or has more than `max_order`
/// elements.
pub fn brute_force_tate_orders(m: &CyclicModule, max_order: u64) -> Option<(BigInt, BigInt)> {
    use std::collections::HashSet;

    let g = m.group();
    if !g.is_finite() {
        return None;
    }
    let factors: Vec<u64> = g
        .invariant_factors()
        .iter()
        .map(|d| u64::try_from(d).ok())
        .collect::<Option<_>>()?;
    let order: u64 = factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))?;
    if order > max_order {
        return None;
    }

    let k = factors.len();
    let elements: Vec<Vec<u64>> = {
        let mut out = vec![vec![]];
        for &d in &factors {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for x in 0..d {
                    let mut e2 = e.clone();
                    e2.push(x);
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    };

    let apply = |mat: &IntMatrix, x: &[u64]| -> Vec<u64> {
        (0..k)
            .map(|i| {
                let mut acc = BigInt::from(0);
                for (j, &xj) in x.iter().enumerate() {
                    acc += &mat[(i, j)] * BigInt::from(xj);
                }
                let d = BigInt::from(factors[i]);
                let r = ((acc % &d) + &d) % &d;
                u64::try_from(&r).unwrap()
            })
            .collect()
    };

    let sigma = m.sigma();
    let norm = m.norm_matrix();
    let zero = vec![0u64; k];

    let mut fixed = 0u64;
    let mut norm_kernel = 0u64;
    let mut norm_image: HashSet<Vec<u64>> = HashSet::new();
    let mut aug_image: HashSet<Vec<u64>> = HashSet::new();
    for x in &elements {
        let sx = apply(sigma, x);
        if &sx == x {
            fixed += 1;
        }
        let nx = apply(&norm, x);
        if nx == zero {
            norm_kernel += 1;
        }
        norm_image.insert(nx);
        let ax: Vec<u64> = (0..k)
            .map(|i| {
                let d = factors[i];
                (sx[i] + d - x[i]) % d
            })
            .collect();
        aug_image.insert(ax);
    }

    let h0 = fixed / norm_image.len() as u64;
    let h1 = norm_kernel / aug_image.len() as u64;
    Some((BigInt::from(h0), BigInt::from(h1)))
}
