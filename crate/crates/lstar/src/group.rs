//! Finitely generated abelian groups in invariant-factor normal form,
//! homomorphisms between them, and the kernel/cokernel machinery.
//!
//! Generator convention: a group of free rank r with invariant factors
//! (d_1, ..., d_k) has r + k canonical generators; the first r are free,
//! generator r + i has order d_i. A homomorphism is an integer matrix of
//! shape (target generators) x (source generators) acting on column
//! coordinate vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{reject, Result};
use crate::matrix::{column_basis, express_in_basis, preimage_lattice, snf_full, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self> {
        for f in &invariant_factors {
            if f < &BigInt::from(2) {
                return reject(format!("invariant factor {} is < 2", f));
            }
        }
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return reject(format!("invariant factors {} does not divide {}", w[0], w[1]));
            }
        }
        Ok(Self { free_rank, invariant_factors })
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// Z/n for n >= 2; the trivial group for n = 1.
    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            Self { free_rank: 0, invariant_factors: vec![BigInt::from(n)] }
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn num_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order of the torsion subgroup (the empty product is 1).
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Relation lattice inside the free cover: columns d_i * e_{r+i}.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.num_generators();
        let k = self.invariant_factors.len();
        let mut m = IntMatrix::zero(n, k);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            m[(self.free_rank + i, i)] = d.clone();
        }
        m
    }

    /// Order of canonical generator j; None when the generator is free.
    pub fn generator_order(&self, j: usize) -> Option<&BigInt> {
        if j < self.free_rank {
            None
        } else {
            Some(&self.invariant_factors[j - self.free_rank])
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A presentation Z^n / (column lattice of `relations`) together with the
/// normalization data carrying it to invariant-factor form.
pub struct Canonicalized {
    pub group: FgAbGroup,
    /// (canonical generators) x n; sends free-cover coordinates to canonical
    /// coordinates. An isomorphism modulo relations.
    pub proj: IntMatrix,
    /// n x (canonical generators); a right inverse of `proj` modulo relations.
    pub lift: IntMatrix,
}

/// Normalize Z^n modulo the column lattice of `relations` (an n x k matrix).
pub fn canonicalize_presentation(n: usize, relations: &IntMatrix) -> Canonicalized {
    assert_eq!(relations.rows(), n, "relation matrix has wrong ambient dimension");
    let f = snf_full(relations);
    let r = f.rank();

    // After the change of basis y = u*x the relation lattice is spanned by
    // d_i e_i (i < r): coordinate i < r lives in Z/d_i, coordinates >= r are
    // free. Canonical order: free generators first, then factors >= 2.
    let mut free_idx: Vec<usize> = (r..n).collect();
    let mut tors_idx: Vec<usize> = Vec::new();
    let mut factors: Vec<BigInt> = Vec::new();
    for i in 0..r {
        let d = f.d[(i, i)].clone();
        if d > BigInt::one() {
            tors_idx.push(i);
            factors.push(d);
        }
    }
    let mut sel = Vec::new();
    sel.append(&mut free_idx);
    sel.append(&mut tors_idx);

    let group = FgAbGroup::new(n - r, factors).expect("SNF diagonal is a valid factor chain");
    let mut proj = f.u.select_rows(&sel);
    let lift = f.u_inv.select_cols(&sel);

    // Reduce torsion rows modulo their factor; same map, smaller entries.
    for (t, d) in group.invariant_factors.iter().enumerate() {
        let i = group.free_rank + t;
        for j in 0..n {
            let e = proj[(i, j)].mod_floor(d);
            proj[(i, j)] = e;
        }
    }

    Canonicalized { group, proj, lift }
}

/// The group Z^cols(a) modulo the lattice spanned by the rows of `a`.
pub fn cokernel_group(a: &IntMatrix) -> FgAbGroup {
    canonicalize_presentation(a.cols(), &a.transpose()).group
}

/// Quotient L / S of two lattices in Z^n, both given by generating columns;
/// S must be contained in L. Panics when it is not (callers guarantee it).
pub fn lattice_quotient(l_gens: &IntMatrix, s_gens: &IntMatrix) -> FgAbGroup {
    assert_eq!(l_gens.rows(), s_gens.rows(), "ambient dimension mismatch");
    let basis = column_basis(l_gens);
    let x = express_in_basis(&basis, s_gens)
        .expect("sublattice generators must lie in the enclosing lattice");
    canonicalize_presentation(basis.cols(), &x).group
}

/// A homomorphism between groups in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct AbHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Validates that the matrix respects the relations: for every torsion
    /// generator of the source with order d, d times its image column must
    /// lie in the relation lattice of the target.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return reject(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.num_generators(),
                source.num_generators()
            ));
        }
        for j in 0..source.num_generators() {
            let Some(dj) = source.generator_order(j) else { continue };
            for i in 0..target.num_generators() {
                let e = &matrix[(i, j)];
                match target.generator_order(i) {
                    None => {
                        if !(dj * e).is_zero() {
                            return reject(format!(
                                "hom matrix violates relations: generator {} of order {} maps to a free coordinate with coefficient {}",
                                j, dj, e
                            ));
                        }
                    }
                    Some(di) => {
                        if !(dj * e).is_multiple_of(di) {
                            return reject(format!(
                                "hom matrix violates relations: d_src={} * entry {} not divisible by d_tgt={}",
                                dj, e, di
                            ));
                        }
                    }
                }
            }
        }
        let mut h = Self { source, target, matrix };
        h.normalize();
        Ok(h)
    }

    /// Reduce torsion-row entries modulo their invariant factor; the same
    /// homomorphism with canonical (small) entries.
    fn normalize(&mut self) {
        for i in 0..self.target.num_generators() {
            let Some(di) = self.target.generator_order(i).cloned() else { continue };
            for j in 0..self.source.num_generators() {
                let e = self.matrix[(i, j)].mod_floor(&di);
                self.matrix[(i, j)] = e;
            }
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Self {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.num_generators()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zero(target.num_generators(), source.num_generators()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// g o f (apply self after `first`).
    pub fn compose_after(&self, first: &AbHom) -> AbHom {
        assert_eq!(first.target, self.source, "non-composable homomorphisms");
        let mut h = AbHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        };
        h.normalize();
        h
    }

    /// Equality as maps, i.e. matrices congruent modulo target relations.
    pub fn equal_as_hom(&self, other: &AbHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        columns_in_relation_lattice(&self.target, &diff)
    }

    pub fn is_zero_hom(&self) -> bool {
        columns_in_relation_lattice(&self.target, &self.matrix)
    }

    /// The induced map on free parts (top-left block), which is the matrix
    /// of the real-tensored map with respect to integral bases.
    pub fn free_block(&self) -> IntMatrix {
        self.matrix.top_left(self.target.free_rank(), self.source.free_rank())
    }

    /// Direct sum of homomorphisms, on the direct sum presentations.
    /// Only valid when both sources (and targets) stay in canonical order,
    /// so this is restricted to free groups where no reordering happens.
    pub fn block_sum_free(&self, other: &AbHom) -> Result<AbHom> {
        if !(self.source.is_free() && self.target.is_free() && other.source.is_free() && other.target.is_free()) {
            return reject("block_sum_free requires free groups");
        }
        AbHom::new(
            FgAbGroup::free(self.source.free_rank() + other.source.free_rank()),
            FgAbGroup::free(self.target.free_rank() + other.target.free_rank()),
            self.matrix.block_diag(&other.matrix),
        )
    }
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbHom {} -> {}: {:?}", self.source, self.target, self.matrix)
    }
}

fn columns_in_relation_lattice(target: &FgAbGroup, m: &IntMatrix) -> bool {
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let e = &m[(i, j)];
            match target.generator_order(i) {
                None => {
                    if !e.is_zero() {
                        return false;
                    }
                }
                Some(d) => {
                    if !e.is_multiple_of(d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Lattice in the free cover of `g` consisting of all x with
/// matrix * x in the relation lattice of `hom.target`.
fn full_preimage_of_relations(hom: &AbHom) -> IntMatrix {
    preimage_lattice(hom.matrix(), &hom.target().relation_matrix())
}

/// Isomorphism type of ker(f).
pub fn hom_kernel(f: &AbHom) -> FgAbGroup {
    let lk = full_preimage_of_relations(f);
    lattice_quotient_in_ambient(f.source().num_generators(), &lk, &f.source().relation_matrix())
}

/// Isomorphism type of coker(f).
pub fn hom_cokernel(f: &AbHom) -> FgAbGroup {
    let gens = f.matrix().hstack(&f.target().relation_matrix());
    canonicalize_presentation(f.target().num_generators(), &gens).group
}

/// Rank of the image of f.
pub fn hom_image_rank(f: &AbHom) -> usize {
    f.free_block().rank()
}

/// Quotient of lattices allowing for an ambient dimension of zero.
fn lattice_quotient_in_ambient(ambient: usize, l_gens: &IntMatrix, s_gens: &IntMatrix) -> FgAbGroup {
    if ambient == 0 {
        return FgAbGroup::trivial();
    }
    lattice_quotient(l_gens, s_gens)
}

/// The subgroup ker(f) of the source, returned as the lattice of its
/// representatives in the free cover (columns; contains the relations).
pub fn kernel_representative_lattice(f: &AbHom) -> IntMatrix {
    full_preimage_of_relations(f)
}

/// Kernel of f restricted to torsion subgroups, as a group; used for the
/// cok(psi_tor) bookkeeping of the torsion-order identities.
pub fn torsion_restriction(f: &AbHom) -> AbHom {
    let s = f.source();
    let t = f.target();
    let s_tor = FgAbGroup::new(0, s.invariant_factors().to_vec()).expect("valid factors");
    let t_tor = FgAbGroup::new(0, t.invariant_factors().to_vec()).expect("valid factors");
    let rows: Vec<usize> = (t.free_rank()..t.num_generators()).collect();
    let cols: Vec<usize> = (s.free_rank()..s.num_generators()).collect();
    let m = f.matrix().select_rows(&rows).select_cols(&cols);
    AbHom::new(s_tor, t_tor, m).expect("restriction of a valid hom is valid")
}
