//! Group machinery: Cayley tables, unitary representations, regular
//! representations, the Koopman truncations of the infinite dihedral group,
//! Markov operators, and the spectral amenability test.

pub mod registry;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{self, cx, CMatrix};
use crate::pencil::{LinearForm, MatrixPencil, MultiPoly, PencilError, ProjPoint};
use crate::tol;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group order parameter must be at least 1")]
    InvalidOrder,
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("Koopman truncation level {0} exceeds the configured maximum {1}")]
    LevelTooLarge(u32, u32),
    #[error("generator '{0}' is not unitary within tolerance")]
    NotUnitary(String),
    #[error("declared relation {0} fails by {1:.3e}")]
    RelationFailed(usize, f64),
    #[error("representation needs at least one generator")]
    EmptyGenerators,
    #[error("point has {got} coordinates, expected {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("unknown group kind '{0}'")]
    UnknownKind(String),
    #[error("group spec is missing required field '{0}'")]
    MissingField(&'static str),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Finite group multiplication table with a distinguished generating set.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    order: usize,
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
    identity: usize,
}

impl CayleyTable {
    pub fn new(
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        identity: usize,
    ) -> Result<Self, GroupError> {
        let m = table.len();
        if m == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        for row in &table {
            if row.len() != m || row.iter().any(|&x| x >= m) {
                return Err(GroupError::InvalidTable("not a square table over 0..m".into()));
            }
        }
        // Latin square: every row and column is a permutation
        for i in 0..m {
            let mut seen_row = vec![false; m];
            let mut seen_col = vec![false; m];
            for j in 0..m {
                if std::mem::replace(&mut seen_row[table[i][j]], true) {
                    return Err(GroupError::InvalidTable(format!("row {i} repeats an element")));
                }
                if std::mem::replace(&mut seen_col[table[j][i]], true) {
                    return Err(GroupError::InvalidTable(format!("column {i} repeats an element")));
                }
            }
        }
        if identity >= m || generators.iter().any(|&g| g >= m) {
            return Err(GroupError::InvalidTable("index out of range".into()));
        }
        for x in 0..m {
            if table[identity][x] != x || table[x][identity] != x {
                return Err(GroupError::InvalidTable("identity index is not neutral".into()));
            }
        }
        // generators generate: closure from the identity
        let mut reached = vec![false; m];
        reached[identity] = true;
        let mut frontier = vec![identity];
        while let Some(x) = frontier.pop() {
            for &g in &generators {
                let y = table[g][x];
                if !reached[y] {
                    reached[y] = true;
                    frontier.push(y);
                }
            }
        }
        if !reached.iter().all(|&r| r) {
            return Err(GroupError::InvalidTable(
                "generators do not generate the group".into(),
            ));
        }
        Ok(CayleyTable {
            order: m,
            table,
            generators,
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// Dihedral group of order 2N presented by two involutions `a, t` with
/// `(at)^N = 1`. Elements are encoded as `r^k` (indices `0..N`) and
/// `a r^k` (indices `N..2N`) where `r = at`.
pub fn dihedral_cayley(n: usize) -> Result<CayleyTable, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidOrder);
    }
    let m = 2 * n;
    let idx = |refl: usize, k: usize| refl * n + (k % n);
    let mut table = vec![vec![0usize; m]; m];
    for e1 in 0..2 {
        for k1 in 0..n {
            for e2 in 0..2 {
                for k2 in 0..n {
                    // r^j a = a r^{-j}
                    let (refl, k) = match (e1, e2) {
                        (0, 0) => (0, k1 + k2),
                        (0, 1) => (1, n + k2 - k1),
                        (1, 0) => (1, k1 + k2),
                        _ => (0, n + k2 - k1),
                    };
                    table[idx(e1, k1)][idx(e2, k2)] = idx(refl, k);
                }
            }
        }
    }
    let a = idx(1, 0);
    let t = idx(1, 1);
    CayleyTable::new(table, vec![a, t], idx(0, 0))
}

/// Cyclic group of order n with one generator.
pub fn cyclic_cayley(n: usize) -> Result<CayleyTable, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidOrder);
    }
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    CayleyTable::new(table, vec![1 % n], 0)
}

/// Closure of a set of permutations under composition; used for symmetric
/// groups and ad-hoc permutation groups in tests.
pub fn cayley_from_permutations(perms: &[Vec<usize>]) -> Result<CayleyTable, GroupError> {
    let deg = perms
        .first()
        .map(|p| p.len())
        .ok_or(GroupError::EmptyGenerators)?;
    for p in perms {
        let mut seen = vec![false; deg];
        if p.len() != deg || p.iter().any(|&x| x >= deg || std::mem::replace(&mut seen[x], true)) {
            return Err(GroupError::InvalidTable("not a permutation".into()));
        }
    }
    let id: Vec<usize> = (0..deg).collect();
    let compose = |f: &[usize], g: &[usize]| -> Vec<usize> { g.iter().map(|&x| f[x]).collect() };
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for p in perms {
            let y = compose(p, &x);
            if !elements.contains(&y) {
                elements.push(y.clone());
                frontier.push(y);
            }
        }
    }
    elements.sort();
    let m = elements.len();
    let index_of = |e: &Vec<usize>| elements.iter().position(|x| x == e).unwrap();
    let mut table = vec![vec![0usize; m]; m];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            table[i][j] = index_of(&compose(a, b));
        }
    }
    let identity = index_of(&(0..deg).collect());
    let generators = perms.iter().map(|p| index_of(p)).collect();
    CayleyTable::new(table, generators, identity)
}

/// The symmetric group S3 generated by the transpositions (01) and (12).
pub fn symmetric3_cayley() -> CayleyTable {
    cayley_from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]]).expect("S3 table")
}

/// A relation word: signed 1-based generator indices, e.g. `[1, 1]` for
/// `g1^2 = 1` and `[2, -3]` for `g2 g3^{-1} = 1`.
pub type RelationWord = Vec<i32>;

/// A finite list of generators, one unitary matrix per generator. Unitarity
/// and any declared relations are verified at construction.
#[derive(Debug, Clone)]
pub struct GroupRep {
    labels: Vec<String>,
    generators: Vec<CMatrix>,
    relations: Vec<RelationWord>,
}

impl GroupRep {
    pub fn new(
        labels: Vec<String>,
        generators: Vec<CMatrix>,
        relations: Vec<RelationWord>,
    ) -> Result<Self, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::EmptyGenerators);
        }
        let d = generators[0].nrows();
        for (label, g) in labels.iter().zip(&generators) {
            if g.nrows() != d || g.ncols() != d || !linalg::is_unitary(g, tol::UNITARY_TOL) {
                return Err(GroupError::NotUnitary(label.clone()));
            }
        }
        let rep = GroupRep {
            labels,
            generators,
            relations,
        };
        for (i, word) in rep.relations.iter().enumerate() {
            let defect = rep.relation_defect(word);
            if defect > tol::RELATION_TOL * (d as f64).sqrt() {
                return Err(GroupError::RelationFailed(i, defect));
            }
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn relations(&self) -> &[RelationWord] {
        &self.relations
    }

    /// Frobenius distance of a relation word from the identity.
    pub fn relation_defect(&self, word: &RelationWord) -> f64 {
        let d = self.dim();
        let mut acc = CMatrix::identity(d, d);
        for &s in word {
            let g = &self.generators[(s.unsigned_abs() as usize) - 1];
            if s > 0 {
                acc = acc * g;
            } else {
                acc = acc * g.adjoint();
            }
        }
        (acc - CMatrix::identity(d, d)).norm()
    }

    /// The pencil `(I, pi(g_1), ..., pi(g_n))`.
    pub fn pencil(&self) -> MatrixPencil {
        let mut ms = Vec::with_capacity(self.generators.len() + 1);
        ms.push(CMatrix::identity(self.dim(), self.dim()));
        ms.extend(self.generators.iter().cloned());
        MatrixPencil::new(ms).expect("rep pencil is well-formed")
    }
}

/// Left regular representation from a Cayley table: `lambda(g) e_h = e_{gh}`.
pub fn regular_rep(c: &CayleyTable, labels: Option<Vec<String>>) -> GroupRep {
    let m = c.order();
    let gens: Vec<CMatrix> = c
        .generators()
        .iter()
        .map(|&g| {
            let mut mat = CMatrix::zeros(m, m);
            for h in 0..m {
                mat[(c.mul(g, h), h)] = cx(1.0, 0.0);
            }
            mat
        })
        .collect();
    let labels = labels.unwrap_or_else(|| {
        (1..=gens.len()).map(|i| format!("g{i}")).collect()
    });
    GroupRep::new(labels, gens, Vec::new()).expect("permutation matrices are unitary")
}

/// Level-L truncation of the self-similar Koopman representation of the
/// infinite dihedral group, acting on the 2^L leaves of the binary tree:
///
/// ```text
/// pi_L(a) = [0 I; I 0],   pi_L(t) = diag(pi_{L-1}(a), pi_{L-1}(t)),
/// ```
///
/// with the level-0 boundary a single point on which both generators act
/// trivially.
pub fn koopman_truncation(level: u32) -> Result<GroupRep, GroupError> {
    if level > tol::KOOPMAN_MAX_LEVEL {
        return Err(GroupError::LevelTooLarge(level, tol::KOOPMAN_MAX_LEVEL));
    }
    let mut a = CMatrix::identity(1, 1);
    let mut t = CMatrix::identity(1, 1);
    for _ in 0..level {
        let d = a.nrows();
        let mut a_next = CMatrix::zeros(2 * d, 2 * d);
        a_next
            .view_mut((0, d), (d, d))
            .copy_from(&CMatrix::identity(d, d));
        a_next
            .view_mut((d, 0), (d, d))
            .copy_from(&CMatrix::identity(d, d));
        let mut t_next = CMatrix::zeros(2 * d, 2 * d);
        t_next.view_mut((0, 0), (d, d)).copy_from(&a);
        t_next.view_mut((d, d), (d, d)).copy_from(&t);
        a = a_next;
        t = t_next;
    }
    GroupRep::new(
        vec!["a".into(), "t".into()],
        vec![a, t],
        vec![vec![1, 1], vec![2, 2]],
    )
}

/// Markov operator `M = (1/n) sum_i pi(g_i)`.
pub fn markov_operator(rep: &GroupRep) -> Result<CMatrix, GroupError> {
    if rep.generator_count() == 0 {
        return Err(GroupError::EmptyGenerators);
    }
    let d = rep.dim();
    let mut m = CMatrix::zeros(d, d);
    for g in rep.generators() {
        m += g;
    }
    Ok(m / cx(rep.generator_count() as f64, 0.0))
}

/// The hyperplane `H_0 = {z_0 + ... + z_n = 0}` is contained in the projective
/// spectrum of the rep's pencil. Decided by exact divisibility of the
/// characteristic polynomial when the dimension allows, otherwise by testing
/// singularity at 50 seeded random points of `H_0`.
pub fn h0_containment_test(rep: &GroupRep) -> bool {
    let pencil = rep.pencil();
    let nvars = rep.generator_count() + 1;
    if rep.dim() <= tol::CHAR_POLY_MAX_DIM && nvars <= 8 {
        if let Ok(q) = pencil.char_poly() {
            let ones = LinearForm::from_real(&vec![1.0; nvars]).expect("nonzero form");
            if let Ok(contained) = crate::pencil::hyperplane_contained(&q, &ones) {
                return contained;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol::DEFAULT_SEED ^ 0x480);
    for _ in 0..50 {
        let mut coords = vec![cx(0.0, 0.0)];
        let mut sum = cx(0.0, 0.0);
        for _ in 0..rep.generator_count() {
            let z = cx(
                rand::Rng::random::<f64>(&mut rng) - 0.5,
                rand::Rng::random::<f64>(&mut rng) - 0.5,
            );
            sum += z;
            coords.push(z);
        }
        coords[0] = -sum;
        let z = match ProjPoint::new(coords) {
            Ok(z) => z,
            Err(_) => continue,
        };
        let m = pencil.evaluate(&z).expect("coordinate count matches");
        if !linalg::lu_ratio_singular(&m, tol::SINGULAR_REL) {
            return false;
        }
    }
    true
}

/// Membership in the free-group spectrum region
/// `cap_j { 2 |z_j|^2 <= ||z||^2 }` (exact description, no truncation).
pub fn free_group_region(z: &ProjPoint, n: usize) -> Result<bool, GroupError> {
    if z.len() != n + 1 {
        return Err(GroupError::CoordinateCount {
            expected: n + 1,
            got: z.len(),
        });
    }
    let norm_sq: f64 = z.coords().iter().map(|c| c.norm_sqr()).sum();
    Ok(z
        .coords()
        .iter()
        .all(|c| 2.0 * c.norm_sqr() <= norm_sq * (1.0 + 1e-12)))
}

/// The two irreducible 2-dimensional unitary representations of
/// GL_3(Z/3Z) that share a characteristic polynomial. The five defining
/// relations are verified at construction.
pub fn gl3_reps() -> (GroupRep, GroupRep) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a1 = CMatrix::from_row_slice(
        2,
        2,
        &[cx(-s, 0.0), cx(-0.5, -0.5), cx(-0.5, 0.5), cx(s, 0.0)],
    );
    let a2 = CMatrix::from_row_slice(
        2,
        2,
        &[cx(0.5, 0.5), cx(s, 0.0), cx(-s, 0.0), cx(0.5, -0.5)],
    );
    let a3 = CMatrix::from_row_slice(
        2,
        2,
        &[cx(0.5, -0.5), cx(0.0, s), cx(0.0, s), cx(0.5, 0.5)],
    );
    let relations: Vec<RelationWord> = vec![
        vec![1, 1],
        vec![1, -2, 1, -2],
        vec![1, -3, 1, -3],
        vec![2, 2, 3, -2, 3],
        vec![2, 3, 3, 2, -3],
    ];
    let labels: Vec<String> = vec!["g1".into(), "g2".into(), "g3".into()];
    let plus = GroupRep::new(
        labels.clone(),
        vec![a1.clone(), a2.clone(), a3.clone()],
        relations.clone(),
    )
    .expect("rho_plus satisfies the presentation");
    let minus = GroupRep::new(labels, vec![-a1, a2, a3], relations)
        .expect("rho_minus satisfies the presentation");
    (plus, minus)
}

/// Exact characteristic polynomial of the rep's pencil (when in range).
pub fn rep_char_poly(rep: &GroupRep) -> Result<MultiPoly, GroupError> {
    Ok(rep.pencil().char_poly()?)
}
