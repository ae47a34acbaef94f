//! Seeded random generators for the property suites. Everything here is
//! exact by construction: short exact sequences come from extension data,
//! diagrams from split sums conjugated by automorphisms, cyclic-module
//! extensions from coboundary twists. The generators are the trusted
//! oracles the theorem suites run against.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cyclic::CyclicModule;
use crate::group::{canonicalize_presentation, AbHom, Canonicalized, FgAbGroup};
use crate::local::{companion_matrix, cyclotomic, LocalPlaceData};
use crate::matrix::{unimodular_inverse, IntMatrix};
use crate::seq::{random_unimodular, LatticeExactSequence, NineDiagram};

/// A random group with small rank and small invariant factors.
pub fn random_group(rng: &mut ChaCha8Rng, max_rank: usize, with_torsion: bool) -> FgAbGroup {
    let rank = rng.gen_range(0..=max_rank);
    let mut factors = Vec::new();
    if with_torsion {
        let k = rng.gen_range(0..=2);
        if k >= 1 {
            let d1 = *[2u64, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap();
            factors.push(BigInt::from(d1));
            if k == 2 {
                let m = *[1u64, 2, 3].get(rng.gen_range(0..3)).unwrap();
                factors.push(BigInt::from(d1 * m));
            }
        }
    }
    if rank == 0 && factors.is_empty() {
        // avoid a flood of trivial groups but keep them reachable
        if rng.gen_bool(0.7) {
            return FgAbGroup::free(1);
        }
    }
    FgAbGroup::new(rank, factors).expect("generated factors form a chain")
}

/// A random homomorphism that respects relations by construction.
pub fn random_valid_hom(rng: &mut ChaCha8Rng, source: &FgAbGroup, target: &FgAbGroup) -> AbHom {
    let m = IntMatrix::from_fn(target.num_generators(), source.num_generators(), |i, j| {
        match (target.generator_order(i), source.generator_order(j)) {
            (_, None) => BigInt::from(rng.gen_range(-2i64..=2)),
            (None, Some(_)) => BigInt::zero(),
            (Some(di), Some(dj)) => {
                // entries must be multiples of d_i / gcd(d_i, d_j)
                let g = di.gcd(dj);
                let step = di / &g;
                let g64 = u64::try_from(&g).unwrap_or(1).max(1);
                step * BigInt::from(rng.gen_range(0..g64) as i64)
            }
        }
    });
    AbHom::new(source.clone(), target.clone(), m).expect("constructed hom respects relations")
}

fn mod_inverse(u: u64, d: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (d as i128, u as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(d as i128) as u64)
}

/// A random automorphism of a canonical group together with its inverse,
/// built from elementary valid automorphisms.
pub fn random_automorphism(rng: &mut ChaCha8Rng, g: &FgAbGroup) -> (AbHom, AbHom) {
    let n = g.num_generators();
    let fr = g.free_rank();
    let nt = n - fr;
    let mut acc = IntMatrix::identity(n);
    let mut acc_inv = IntMatrix::identity(n);

    let apply = |acc: &mut IntMatrix, acc_inv: &mut IntMatrix, op: IntMatrix, op_inv: IntMatrix| {
        *acc = op.mul(acc);
        *acc_inv = acc_inv.mul(&op_inv);
    };

    for _ in 0..(2 * n + 2) {
        match rng.gen_range(0..4) {
            0 if fr >= 2 => {
                let i = rng.gen_range(0..fr);
                let j = rng.gen_range(0..fr);
                if i == j {
                    continue;
                }
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                let mut op = IntMatrix::identity(n);
                let mut op_inv = IntMatrix::identity(n);
                op[(i, j)] = c.clone();
                op_inv[(i, j)] = -c;
                apply(&mut acc, &mut acc_inv, op, op_inv);
            }
            1 if fr >= 1 && nt >= 1 => {
                // free generator picks up a torsion component
                let t = fr + rng.gen_range(0..nt);
                let j = rng.gen_range(0..fr);
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                let mut op = IntMatrix::identity(n);
                let mut op_inv = IntMatrix::identity(n);
                op[(t, j)] = c.clone();
                op_inv[(t, j)] = -c;
                apply(&mut acc, &mut acc_inv, op, op_inv);
            }
            2 if nt >= 1 => {
                // unit scaling of a torsion generator
                let ti = rng.gen_range(0..nt);
                let d = u64::try_from(&g.invariant_factors()[ti]).unwrap_or(2);
                let mut u = rng.gen_range(1..d.max(2));
                let mut guard = 0;
                while mod_inverse(u, d).is_none() && guard < 10 {
                    u = rng.gen_range(1..d.max(2));
                    guard += 1;
                }
                let Some(uinv) = mod_inverse(u, d) else { continue };
                let i = fr + ti;
                let mut op = IntMatrix::identity(n);
                let mut op_inv = IntMatrix::identity(n);
                op[(i, i)] = BigInt::from(u);
                op_inv[(i, i)] = BigInt::from(uinv);
                apply(&mut acc, &mut acc_inv, op, op_inv);
            }
            3 if nt >= 2 => {
                // valid twist between distinct torsion generators
                let ti = rng.gen_range(0..nt);
                let tj = rng.gen_range(0..nt);
                if ti == tj {
                    continue;
                }
                let di = &g.invariant_factors()[ti];
                let dj = &g.invariant_factors()[tj];
                let gcd = di.gcd(dj);
                let step = di / &gcd;
                let bound = u64::try_from(&gcd).unwrap_or(1).max(1);
                let c = &step * BigInt::from(rng.gen_range(0..bound) as i64);
                let (i, j) = (fr + ti, fr + tj);
                let mut op = IntMatrix::identity(n);
                let mut op_inv = IntMatrix::identity(n);
                op[(i, j)] = c.clone();
                op_inv[(i, j)] = -c;
                apply(&mut acc, &mut acc_inv, op, op_inv);
            }
            _ => {}
        }
    }

    let a = AbHom::new(g.clone(), g.clone(), acc).expect("elementary product is valid");
    let a_inv = AbHom::new(g.clone(), g.clone(), acc_inv).expect("elementary inverse is valid");
    debug_assert!(a.compose_after(&a_inv).equal_as_hom(&AbHom::identity(g)));
    debug_assert!(a_inv.compose_after(&a).equal_as_hom(&AbHom::identity(g)));
    (a, a_inv)
}

/// A direct sum of canonical groups with its normalization and the
/// bookkeeping needed to include and project the summands.
pub struct CanonicalSum {
    pub canon: Canonicalized,
    pub parts: Vec<FgAbGroup>,
    pub offsets: Vec<usize>,
    pub total_gens: usize,
}

pub fn canonical_sum(parts: &[FgAbGroup]) -> CanonicalSum {
    let total_gens: usize = parts.iter().map(|p| p.num_generators()).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut off = 0;
    for p in parts {
        offsets.push(off);
        off += p.num_generators();
    }
    let total_rels: usize = parts.iter().map(|p| p.invariant_factors().len()).sum();
    let mut relations = IntMatrix::zero(total_gens, total_rels);
    let mut col = 0;
    for (p, &o) in parts.iter().zip(&offsets) {
        let r = p.relation_matrix();
        for j in 0..r.cols() {
            for i in 0..r.rows() {
                relations[(o + i, col)] = r[(i, j)].clone();
            }
            col += 1;
        }
    }
    let canon = canonicalize_presentation(total_gens, &relations);
    CanonicalSum { canon, parts: parts.to_vec(), offsets, total_gens }
}

impl CanonicalSum {
    pub fn group(&self) -> &FgAbGroup {
        &self.canon.group
    }

    /// Inclusion of summand t into the canonicalized sum.
    pub fn inclusion(&self, t: usize) -> AbHom {
        let part = &self.parts[t];
        let cols: Vec<usize> = (self.offsets[t]..self.offsets[t] + part.num_generators()).collect();
        let m = self.canon.proj.select_cols(&cols);
        AbHom::new(part.clone(), self.canon.group.clone(), m).expect("sum inclusion is valid")
    }

    /// Projection of the canonicalized sum onto summand t.
    pub fn projection(&self, t: usize) -> AbHom {
        let part = &self.parts[t];
        let rows: Vec<usize> = (self.offsets[t]..self.offsets[t] + part.num_generators()).collect();
        let selector = IntMatrix::from_fn(part.num_generators(), self.total_gens, |i, j| {
            if j == rows[i] {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let m = selector.mul(&self.canon.lift);
        AbHom::new(self.canon.group.clone(), part.clone(), m).expect("sum projection is valid")
    }

    /// The map induced by sending source summand s to target summand
    /// `assignment[s]` by the identity (None = to zero), between two sums.
    pub fn part_map(source: &CanonicalSum, target: &CanonicalSum, assignment: &[Option<usize>]) -> AbHom {
        assert_eq!(assignment.len(), source.parts.len());
        let mut pres = IntMatrix::zero(target.total_gens, source.total_gens);
        for (s_idx, a) in assignment.iter().enumerate() {
            let Some(t_idx) = a else { continue };
            let sp = &source.parts[s_idx];
            assert_eq!(sp, &target.parts[*t_idx], "assigned summands must be equal groups");
            for k in 0..sp.num_generators() {
                pres[(target.offsets[*t_idx] + k, source.offsets[s_idx] + k)] = BigInt::one();
            }
        }
        let m = target.canon.proj.mul(&pres).mul(&source.canon.lift);
        AbHom::new(source.canon.group.clone(), target.canon.group.clone(), m)
            .expect("summand assignment map is valid")
    }
}

/// A short exact sequence 0 -> A -> B -> C -> 0 built from extension data:
/// B is presented by the relations of A, the relations of C lifted with a
/// random twist into A, and nothing else, then canonicalized.
pub fn random_short_exact_sequence(rng: &mut ChaCha8Rng) -> LatticeExactSequence {
    let a = random_group(rng, 2, true);
    let c = random_group(rng, 2, true);
    extension_sequence(rng, &a, &c)
}

fn extension_sequence(rng: &mut ChaCha8Rng, a: &FgAbGroup, c: &FgAbGroup) -> LatticeExactSequence {
    let an = a.num_generators();
    let cn = c.num_generators();
    let rc = c.relation_matrix();
    let ra = a.relation_matrix();
    let k = rc.cols();
    let l = ra.cols();

    // relations of B: [R_A  Psi; 0  R_C] with a random twist Psi
    let mut rel = IntMatrix::zero(an + cn, l + k);
    for j in 0..l {
        for i in 0..an {
            rel[(i, j)] = ra[(i, j)].clone();
        }
    }
    for j in 0..k {
        for i in 0..an {
            rel[(i, l + j)] = BigInt::from(rng.gen_range(-2i64..=2));
        }
        for i in 0..cn {
            rel[(an + i, l + j)] = rc[(i, j)].clone();
        }
    }
    let cano = canonicalize_presentation(an + cn, &rel);
    let b = cano.group.clone();

    let incl_cols: Vec<usize> = (0..an).collect();
    let incl = AbHom::new(a.clone(), b.clone(), cano.proj.select_cols(&incl_cols))
        .expect("extension inclusion is valid");

    let selector = IntMatrix::from_fn(cn, an + cn, |i, j| {
        if j == an + i {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let proj = AbHom::new(b.clone(), c.clone(), selector.mul(&cano.lift))
        .expect("extension projection is valid");

    let seq = LatticeExactSequence::new(vec![a.clone(), b, c.clone()], vec![incl, proj])
        .expect("constructed sequence is composable");
    debug_assert!(seq.check_exactness().exact, "extension sequence must be exact");
    seq
}

/// An exact sequence with the requested number of groups (>= 3), built by
/// splicing random extensions; retried until every map entry is small.
pub fn random_exact_sequence(rng: &mut ChaCha8Rng, num_groups: usize, max_entry: i64) -> LatticeExactSequence {
    assert!(num_groups >= 3);
    'outer: for _ in 0..500 {
        let mut seq = random_short_exact_sequence(rng);
        while seq.groups().len() < num_groups {
            let last = seq.groups().last().unwrap().clone();
            if last.is_trivial() {
                continue 'outer;
            }
            let c = random_group(rng, 2, true);
            let ext = extension_sequence(rng, &last, &c);
            // splice: replace the final surjection f by incl o f
            let mut groups: Vec<FgAbGroup> = seq.groups()[..seq.groups().len() - 1].to_vec();
            groups.push(ext.groups()[1].clone());
            groups.push(ext.groups()[2].clone());
            let old_maps = seq.maps();
            let mut maps: Vec<AbHom> = old_maps[..old_maps.len() - 1].to_vec();
            maps.push(ext.maps()[0].compose_after(old_maps.last().unwrap()));
            maps.push(ext.maps()[1].clone());
            seq = LatticeExactSequence::new(groups, maps).expect("splice is composable");
        }
        let bound = BigInt::from(max_entry);
        let ok = seq.maps().iter().all(|m| {
            m.matrix().entries().iter().all(|e| e.magnitude() <= bound.magnitude())
        });
        if ok {
            debug_assert!(seq.check_exactness().exact);
            return seq;
        }
    }
    panic!("could not generate a sequence within the entry bound");
}

/// Conjugate every group of a sequence by a random automorphism; the
/// result is exact with the same groups but scrambled matrices.
pub fn scramble_sequence(rng: &mut ChaCha8Rng, seq: &LatticeExactSequence) -> LatticeExactSequence {
    let auts: Vec<(AbHom, AbHom)> = seq.groups().iter().map(|g| random_automorphism(rng, g)).collect();
    let maps: Vec<AbHom> = seq
        .maps()
        .iter()
        .enumerate()
        .map(|(i, f)| auts[i + 1].0.compose_after(&f.compose_after(&auts[i].1)))
        .collect();
    LatticeExactSequence::new(seq.groups().to_vec(), maps).expect("scramble preserves shape")
}

/// A random 3x3 diagram: split direct-sum rows and columns over four
/// random corner groups, conjugated at every node by a random automorphism.
pub fn random_nine_diagram(rng: &mut ChaCha8Rng) -> NineDiagram {
    let x11 = random_group(rng, 1, true);
    let x12 = random_group(rng, 1, true);
    let x21 = random_group(rng, 1, true);
    let x22 = random_group(rng, 1, true);

    let node = |parts: &[&FgAbGroup]| canonical_sum(&parts.iter().map(|p| (*p).clone()).collect::<Vec<_>>());

    let g00 = node(&[&x11]);
    let g01 = node(&[&x11, &x12]);
    let g02 = node(&[&x12]);
    let g10 = node(&[&x11, &x21]);
    let g11 = node(&[&x11, &x12, &x21, &x22]);
    let g12 = node(&[&x12, &x22]);
    let g20 = node(&[&x21]);
    let g21 = node(&[&x21, &x22]);
    let g22 = node(&[&x22]);

    let pm = CanonicalSum::part_map;
    // row maps
    let r0a = pm(&g00, &g01, &[Some(0)]);
    let r0b = pm(&g01, &g02, &[None, Some(0)]);
    let r1a = pm(&g10, &g11, &[Some(0), Some(2)]);
    let r1b = pm(&g11, &g12, &[None, Some(0), None, Some(1)]);
    let r2a = pm(&g20, &g21, &[Some(0)]);
    let r2b = pm(&g21, &g22, &[None, Some(0)]);
    // column maps
    let c0a = pm(&g00, &g10, &[Some(0)]);
    let c0b = pm(&g10, &g20, &[None, Some(0)]);
    let c1a = pm(&g01, &g11, &[Some(0), Some(1)]);
    let c1b = pm(&g11, &g21, &[None, None, Some(0), Some(1)]);
    let c2a = pm(&g02, &g12, &[Some(0)]);
    let c2b = pm(&g12, &g22, &[None, Some(0)]);

    let nodes = [
        [g00.group().clone(), g01.group().clone(), g02.group().clone()],
        [g10.group().clone(), g11.group().clone(), g12.group().clone()],
        [g20.group().clone(), g21.group().clone(), g22.group().clone()],
    ];
    let auts: Vec<Vec<(AbHom, AbHom)>> = nodes
        .iter()
        .map(|row| row.iter().map(|g| random_automorphism(rng, g)).collect())
        .collect();

    let tw = |f: &AbHom, si: usize, sj: usize, ti: usize, tj: usize| {
        auts[ti][tj].0.compose_after(&f.compose_after(&auts[si][sj].1))
    };

    let row = |i: usize, fa: &AbHom, fb: &AbHom| {
        LatticeExactSequence::new(
            vec![nodes[i][0].clone(), nodes[i][1].clone(), nodes[i][2].clone()],
            vec![tw(fa, i, 0, i, 1), tw(fb, i, 1, i, 2)],
        )
        .expect("row is composable")
    };
    let col = |j: usize, fa: &AbHom, fb: &AbHom| {
        LatticeExactSequence::new(
            vec![nodes[0][j].clone(), nodes[1][j].clone(), nodes[2][j].clone()],
            vec![tw(fa, 0, j, 1, j), tw(fb, 1, j, 2, j)],
        )
        .expect("column is composable")
    };

    let rows = [row(0, &r0a, &r0b), row(1, &r1a, &r1b), row(2, &r2a, &r2b)];
    let cols = [col(0, &c0a, &c0b), col(1, &c1a, &c1b), col(2, &c2a, &c2b)];
    NineDiagram::new(rows, cols).expect("constructed diagram is exact and commuting")
}

/// A torsion-free cyclic module: random block sum of primitive actions of
/// order dividing n, conjugated by a random unimodular change of basis.
pub fn random_free_cyclic_module(rng: &mut ChaCha8Rng, order: u64) -> CyclicModule {
    let divisors: Vec<u64> = (1..=order).filter(|d| order % d == 0).collect();
    let nblocks = rng.gen_range(1..=3);
    let mut sigma: Option<IntMatrix> = None;
    for _ in 0..nblocks {
        let block = match rng.gen_range(0..4) {
            0 => IntMatrix::identity(rng.gen_range(1..=2)),
            1 if order % 2 == 0 => IntMatrix::from_i64(1, 1, &[-1]),
            2 => {
                let d = divisors[rng.gen_range(0..divisors.len())];
                if d == 1 {
                    IntMatrix::identity(1)
                } else {
                    companion_matrix(&cyclotomic(d))
                }
            }
            _ => {
                // cyclic permutation on Z^d for d | order
                let d = divisors[rng.gen_range(0..divisors.len())] as usize;
                IntMatrix::from_fn(d, d, |i, j| {
                    if (j + 1) % d == i {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
            }
        };
        sigma = Some(match sigma {
            None => block,
            Some(s) => s.block_diag(&block),
        });
    }
    let sigma = sigma.unwrap();
    let n = sigma.rows();
    let u = random_unimodular(rng, n);
    let sigma = u.mul(&sigma).mul(&unimodular_inverse(&u));
    CyclicModule::new(FgAbGroup::free(n), sigma, order).expect("block action has the declared order")
}

/// A random place datum for the local cross-check suite.
pub fn random_local_place(rng: &mut ChaCha8Rng) -> LocalPlaceData {
    let f = *[1u64, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap();
    let module = random_free_cyclic_module(rng, f);
    let q = *[2u64, 3, 4, 5, 7, 8, 9, 11, 13, 25, 27, 49]
        .get(rng.gen_range(0..12))
        .unwrap();
    LocalPlaceData::new(q, f, module).expect("generated place data is valid")
}

/// A random finite cyclic module of order at most `max_order`, with the
/// declared order equal to the multiplicative order of the automorphism.
pub fn random_finite_cyclic_module(rng: &mut ChaCha8Rng, max_order: u64) -> CyclicModule {
    for _ in 0..200 {
        let g = loop {
            let candidate = random_group(rng, 0, true);
            if candidate.is_finite()
                && !candidate.is_trivial()
                && candidate.torsion_order() <= BigInt::from(max_order)
            {
                break candidate;
            }
        };
        let (a, _) = random_automorphism(rng, &g);
        let id = AbHom::identity(&g);
        let mut power = a.clone();
        let mut order = None;
        for k in 1..=60u64 {
            if power.equal_as_hom(&id) {
                order = Some(k);
                break;
            }
            power = a.compose_after(&power);
        }
        if let Some(n) = order {
            return CyclicModule::new(g, a.matrix().clone(), n).expect("order was just computed");
        }
    }
    panic!("failed to generate a finite cyclic module");
}

/// A cyclic module of declared order n mixing free blocks and torsion
/// summands with unit actions u, u^n = 1 mod d.
pub fn random_mixed_cyclic_module(rng: &mut ChaCha8Rng, order: u64) -> CyclicModule {
    let free = random_free_cyclic_module(rng, order);
    let mut parts: Vec<FgAbGroup> = vec![free.group().clone()];
    let mut sigmas: Vec<IntMatrix> = vec![free.sigma().clone()];
    for _ in 0..rng.gen_range(0..=2) {
        let d = *[2u64, 3, 4, 5, 6, 8, 9, 12].get(rng.gen_range(0..8)).unwrap();
        let units: Vec<u64> = (1..d)
            .filter(|&u| {
                if mod_inverse(u, d).is_none() {
                    return false;
                }
                let mut p = 1u64;
                for _ in 0..order {
                    p = (p * u) % d;
                }
                p == 1
            })
            .collect();
        let u = units[rng.gen_range(0..units.len())];
        parts.push(FgAbGroup::cyclic(d));
        sigmas.push(IntMatrix::from_i64(1, 1, &[u as i64]));
    }
    let sum = canonical_sum(&parts);
    let mut sigma_pres = sigmas[0].clone();
    for s in &sigmas[1..] {
        sigma_pres = sigma_pres.block_diag(s);
    }
    let sigma = sum.canon.proj.mul(&sigma_pres).mul(&sum.canon.lift);
    CyclicModule::new(sum.group().clone(), sigma, order).expect("mixed action has the declared order")
}

/// A short exact sequence of cyclic modules with compatible actions:
/// the middle is the direct sum twisted by a coboundary (hence exact and
/// equivariant by construction), then conjugated by a random automorphism.
pub struct CyclicSes {
    pub sub: CyclicModule,
    pub mid: CyclicModule,
    pub quot: CyclicModule,
    pub incl: AbHom,
    pub proj: AbHom,
}

pub fn random_cyclic_ses(rng: &mut ChaCha8Rng) -> CyclicSes {
    let order = *[1u64, 2, 3, 4, 6].get(rng.gen_range(0..5)).unwrap();
    let sub = random_mixed_cyclic_module(rng, order);
    let quot = random_mixed_cyclic_module(rng, order);
    let g1 = sub.group().clone();
    let g3 = quot.group().clone();
    let n1 = g1.num_generators();
    let n3 = g3.num_generators();

    // twist B = C sigma_3 - sigma_1 C for a random hom C: a coboundary, so
    // [[s1, B], [0, s3]] is conjugate to the direct sum and still has the
    // declared order.
    let c = random_valid_hom(rng, &g3, &g1);
    let twist = c.matrix().mul(quot.sigma()).sub(&sub.sigma().mul(c.matrix()));

    let mut sigma_pres = IntMatrix::zero(n1 + n3, n1 + n3);
    for i in 0..n1 {
        for j in 0..n1 {
            sigma_pres[(i, j)] = sub.sigma()[(i, j)].clone();
        }
        for j in 0..n3 {
            sigma_pres[(i, n1 + j)] = twist[(i, j)].clone();
        }
    }
    for i in 0..n3 {
        for j in 0..n3 {
            sigma_pres[(n1 + i, n1 + j)] = quot.sigma()[(i, j)].clone();
        }
    }

    let sum = canonical_sum(&[g1.clone(), g3.clone()]);
    let sigma_mid = sum.canon.proj.mul(&sigma_pres).mul(&sum.canon.lift);
    let mid = CyclicModule::new(sum.group().clone(), sigma_mid, order)
        .expect("twisted sum has the declared order");
    let incl = sum.inclusion(0);
    let proj = sum.projection(1);

    // conjugate the middle so the block structure is not visible
    let (a, a_inv) = random_automorphism(rng, mid.group());
    let sigma_conj = a.matrix().mul(mid.sigma()).mul(a_inv.matrix());
    let mid = CyclicModule::new(mid.group().clone(), sigma_conj, order)
        .expect("conjugated action keeps its order");
    let incl = a.compose_after(&incl);
    let proj = proj.compose_after(&a_inv);

    debug_assert!({
        let seq = LatticeExactSequence::new(
            vec![g1, mid.group().clone(), g3],
            vec![incl.clone(), proj.clone()],
        )
        .unwrap();
        seq.check_exactness().exact
    });
    // equivariance of both maps
    debug_assert!({
        let lhs = AbHom::new(mid.group().clone(), mid.group().clone(), mid.sigma().clone())
            .unwrap()
            .compose_after(&incl);
        let rhs = incl.compose_after(
            &AbHom::new(sub.group().clone(), sub.group().clone(), sub.sigma().clone()).unwrap(),
        );
        lhs.equal_as_hom(&rhs)
    });

    CyclicSes { sub, mid, quot, incl, proj }
}
