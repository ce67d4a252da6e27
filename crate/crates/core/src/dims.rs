//! Exact constraint systems for every [`SpaceTag`], their ranks, and null-space
//! bases.
//!
//! Every space is cut out of `(x)^4 V*` (or `(x)^2 V*`) by integer linear
//! functionals on the flat component vector. Rows are emitted for every index
//! tuple without de-duplication; the elimination absorbs the redundancy.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::scalar::Rational;
use crate::tensor::{Bilinear, Curv4, Model, SpaceTag, Tensor};

/// One linear functional: sparse integer coefficients on flat component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    pub label: String,
    pub coeffs: Vec<(usize, i64)>,
}

impl ConstraintRow {
    fn build(label: String, terms: impl IntoIterator<Item = (usize, i64)>) -> Option<Self> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (c, v) in terms {
            *acc.entry(c).or_insert(0) += v;
        }
        let coeffs: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
        if coeffs.is_empty() {
            None
        } else {
            Some(ConstraintRow { label, coeffs })
        }
    }

    /// Evaluates the functional on a component vector.
    pub fn apply(&self, components: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, &(c, v)| {
                acc + components[c] * Rational::from_integer(v as i128)
            })
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub space: SpaceTag,
    pub model: Model,
    pub unknowns: usize,
    pub rows: Vec<ConstraintRow>,
}

fn flat4(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

/// Builds the defining rows of `space` over `model`.
pub fn constraint_system(space: SpaceTag, model: Model) -> ConstraintSystem {
    let n = model.n();
    let h = |i: usize| model.h_sign(i);
    let mut rows = Vec::new();
    let mut push = |row: Option<ConstraintRow>| {
        if let Some(r) = row {
            rows.push(r);
        }
    };
    let tag = |name: &str, ix: &[usize]| {
        let parts: Vec<String> = ix.iter().map(|v| (v + 1).to_string()).collect();
        format!("{name}({})", parts.join(","))
    };

    if space.rank() == 2 {
        let f2 = |i: usize, j: usize| i * n + j;
        for i in 0..n {
            for j in 0..n {
                match space {
                    SpaceTag::Sym | SpaceTag::Sym0 => push(ConstraintRow::build(
                        tag("Sym", &[i, j]),
                        [(f2(i, j), 1), (f2(j, i), -1)],
                    )),
                    SpaceTag::Alt => push(ConstraintRow::build(
                        tag("Alt", &[i, j]),
                        [(f2(i, j), 1), (f2(j, i), 1)],
                    )),
                    SpaceTag::Scalar if i != j => {
                        push(ConstraintRow::build(tag("OffDiag", &[i, j]), [(f2(i, j), 1)]))
                    }
                    _ => {}
                }
            }
        }
        match space {
            SpaceTag::Sym0 => push(ConstraintRow::build(
                "Trace".to_string(),
                (0..n).map(|i| (f2(i, i), h(i))),
            )),
            SpaceTag::Scalar => {
                for i in 1..n {
                    push(ConstraintRow::build(
                        tag("MultipleOfH", &[i]),
                        [(f2(i, i), h(i)), (f2(0, 0), -h(0))],
                    ));
                }
            }
            _ => {}
        }
        return ConstraintSystem {
            space,
            model,
            unknowns: n * n,
            rows,
        };
    }

    let f = |i, j, k, l| flat4(n, i, j, k, l);
    // Ric_ab = h^{mm} A_{m a b m}
    let ric_terms = |a: usize, b: usize| (0..n).map(move |m| (flat4(n, m, a, b, m), h(m)));

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let ix = [i, j, k, l];
                    push(ConstraintRow::build(
                        tag("Antisym12", &ix),
                        [(f(i, j, k, l), 1), (f(j, i, k, l), 1)],
                    ));
                    let bianchi = || {
                        ConstraintRow::build(
                            tag("Bianchi", &ix),
                            [(f(i, j, k, l), 1), (f(j, k, i, l), 1), (f(k, i, j, l), 1)],
                        )
                    };
                    match space {
                        SpaceTag::GenCurv => push(bianchi()),
                        SpaceTag::Algebraic => {
                            push(bianchi());
                            push(ConstraintRow::build(
                                tag("Antisym34", &ix),
                                [(f(i, j, k, l), 1), (f(i, j, l, k), 1)],
                            ));
                        }
                        SpaceTag::Weyl => {
                            push(bianchi());
                            // n (A_ijkl + A_ijlk) - 2 (Ric_ji - Ric_ij) h_kl = 0
                            let mut terms = vec![(f(i, j, k, l), n as i64), (f(i, j, l, k), n as i64)];
                            if k == l {
                                let hk = h(k);
                                terms.extend(ric_terms(j, i).map(|(c, v)| (c, -2 * v * hk)));
                                terms.extend(ric_terms(i, j).map(|(c, v)| (c, 2 * v * hk)));
                            }
                            push(ConstraintRow::build(tag("WeylSym34", &ix), terms));
                        }
                        SpaceTag::W6 => {
                            push(ConstraintRow::build(
                                tag("PairSym", &ix),
                                [(f(i, j, k, l), 1), (f(k, l, i, j), -1)],
                            ));
                            push(bianchi());
                        }
                        SpaceTag::W7 => {
                            push(ConstraintRow::build(
                                tag("Sym34", &ix),
                                [(f(i, j, k, l), 1), (f(i, j, l, k), -1)],
                            ));
                            push(ConstraintRow::build(
                                tag("W7Cyclic", &ix),
                                [
                                    (f(k, j, i, l), 1),
                                    (f(i, k, j, l), 1),
                                    (f(l, j, i, k), -1),
                                    (f(i, l, j, k), -1),
                                ],
                            ));
                        }
                        SpaceTag::W8 => push(ConstraintRow::build(
                            tag("PairAntisym", &ix),
                            [(f(i, j, k, l), 1), (f(k, l, i, j), 1)],
                        )),
                        _ => unreachable!(),
                    }
                }
            }
        }
    }
    if matches!(space, SpaceTag::W6 | SpaceTag::W7 | SpaceTag::W8) {
        for j in 0..n {
            for k in 0..n {
                push(ConstraintRow::build(tag("Trace", &[j, k]), ric_terms(j, k)));
            }
        }
    }
    ConstraintSystem {
        space,
        model,
        unknowns: n * n * n * n,
        rows,
    }
}

/// Sparse reduced row echelon form, built one row at a time.
struct Rref {
    ncols: usize,
    /// pivot column of each stored row
    pivot_of: Vec<usize>,
    /// sorted sparse rows; each has a 1 at its pivot and 0 at every other pivot
    rows: Vec<Vec<(usize, Rational)>>,
    is_pivot: Vec<bool>,
    row_of_pivot: HashMap<usize, usize>,
}

impl Rref {
    fn new(ncols: usize) -> Self {
        Rref {
            ncols,
            pivot_of: Vec::new(),
            rows: Vec::new(),
            is_pivot: vec![false; ncols],
            row_of_pivot: HashMap::new(),
        }
    }

    fn insert(&mut self, row: &ConstraintRow) {
        let mut dense: BTreeMap<usize, Rational> = BTreeMap::new();
        for &(c, v) in &row.coeffs {
            *dense.entry(c).or_insert_with(Rational::zero) += Rational::from_integer(v as i128);
        }
        self.insert_map(dense);
    }

    fn insert_map(&mut self, mut dense: BTreeMap<usize, Rational>) {
        let pivots_hit: Vec<(usize, Rational)> = dense
            .iter()
            .filter(|(c, v)| self.is_pivot[**c] && !v.is_zero())
            .map(|(c, v)| (*c, *v))
            .collect();
        // pivot rows carry no other pivot columns, so one pass suffices
        for (c, v) in pivots_hit {
            let r = self.row_of_pivot[&c];
            for &(col, coef) in &self.rows[r] {
                *dense.entry(col).or_insert_with(Rational::zero) -= v * coef;
            }
        }
        dense.retain(|_, v| !v.is_zero());
        let Some((&p, &pv)) = dense.iter().next() else {
            return;
        };
        let new_row: Vec<(usize, Rational)> = dense.into_iter().map(|(c, v)| (c, v / pv)).collect();
        for existing in self.rows.iter_mut() {
            let Ok(pos) = existing.binary_search_by_key(&p, |e| e.0) else {
                continue;
            };
            let factor = existing[pos].1;
            *existing = sparse_axpy(existing, -factor, &new_row);
        }
        self.is_pivot[p] = true;
        self.row_of_pivot.insert(p, self.rows.len());
        self.pivot_of.push(p);
        self.rows.push(new_row);
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn null_basis(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|&c| !self.is_pivot[c]).collect();
        let mut basis: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                v
            })
            .collect();
        let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivot_of) {
            for &(c, v) in row {
                if c != p {
                    basis[free_pos[&c]][p] = -v;
                }
            }
        }
        basis
    }
}

/// `a + s * b` for sorted sparse rows.
fn sparse_axpy(a: &[(usize, Rational)], s: Rational, b: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, s * b[j].1));
            j += 1;
        } else {
            let v = a[i].1 + s * b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank and null space of a constraint system.
#[derive(Debug, Clone)]
pub struct NullSpace {
    pub space: SpaceTag,
    pub model: Model,
    pub rank: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl NullSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_tensors(&self) -> Vec<Tensor<Rational>> {
        self.basis
            .iter()
            .map(|v| to_tensor(self.space, self.model, v.clone()))
            .collect()
    }
}

fn to_tensor(space: SpaceTag, model: Model, v: Vec<Rational>) -> Tensor<Rational> {
    if space.rank() == 4 {
        Tensor::Curv4(Curv4::from_components(model, v).expect("sized by construction"))
    } else {
        Tensor::Bilinear(Bilinear::from_components(model, v).expect("sized by construction"))
    }
}

/// Exact rank of a family of dense vectors of equal length.
pub fn span_rank(vectors: &[Vec<Rational>]) -> usize {
    let ncols = vectors.first().map_or(0, Vec::len);
    let mut rref = Rref::new(ncols);
    for v in vectors {
        rref.insert_map(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, *x)).collect());
    }
    rref.rank()
}

/// Solves `system` by exact elimination.
pub fn solve(system: &ConstraintSystem) -> NullSpace {
    let mut rref = Rref::new(system.unknowns);
    for row in &system.rows {
        rref.insert(row);
    }
    NullSpace {
        space: system.space,
        model: system.model,
        rank: rref.rank(),
        basis: rref.null_basis(),
    }
}

type CacheKey = (SpaceTag, usize, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<NullSpace>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<NullSpace>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Null space of `space` over `model`, memoized per `(space, n, p)`.
pub fn null_space(space: SpaceTag, model: Model) -> Arc<NullSpace> {
    let key = (space, model.n(), model.signature().0);
    if let Some(hit) = cache().lock().expect("cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let computed = Arc::new(solve(&constraint_system(space, model)));
    let mut guard = cache().lock().expect("cache poisoned");
    Arc::clone(guard.entry(key).or_insert(computed))
}

/// Dimension of `space` as unknowns minus exact rank.
pub fn module_dimension(space: SpaceTag, model: Model) -> usize {
    null_space(space, model).dimension()
}

/// Exact rational basis of `space`.
pub fn null_basis(space: SpaceTag, model: Model) -> Vec<Tensor<Rational>> {
    null_space(space, model).basis_tensors()
}

/// Closed-form dimension of each module as a function of `n`. The Weyl space
/// is `dim A + dim Lambda^2`; `W6` and `W8` vanish for `n = 3`.
pub fn formula_dimension(space: SpaceTag, n: usize) -> usize {
    let n = n as i64;
    let v = match space {
        SpaceTag::GenCurv => n * n * (n * n - 1) / 3,
        SpaceTag::Algebraic => n * n * (n * n - 1) / 12,
        SpaceTag::Weyl => n * n * (n * n - 1) / 12 + n * (n - 1) / 2,
        SpaceTag::W6 => n * (n + 1) * (n - 3) * (n + 2) / 12,
        SpaceTag::W7 => (n - 1) * (n - 2) * (n + 1) * (n + 4) / 8,
        SpaceTag::W8 => n * (n - 1) * (n - 3) * (n + 2) / 8,
        SpaceTag::Scalar => 1,
        SpaceTag::Sym => n * (n + 1) / 2,
        SpaceTag::Sym0 => (n - 1) * (n + 2) / 2,
        SpaceTag::Alt => n * (n - 1) / 2,
    };
    v as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::membership;

    #[test]
    fn alt_in_dimension_four() {
        let m = Model::euclidean(4).unwrap();
        let sys = constraint_system(SpaceTag::Alt, m);
        assert_eq!(sys.unknowns, 16);
        assert_eq!(module_dimension(SpaceTag::Alt, m), 6);
    }

    #[test]
    fn small_headline_dimensions() {
        let m = Model::euclidean(4).unwrap();
        assert_eq!(module_dimension(SpaceTag::GenCurv, m), 80);
        assert_eq!(module_dimension(SpaceTag::W7, m), 30);
        assert_eq!(module_dimension(SpaceTag::Weyl, m), 26);
        let m3 = Model::euclidean(3).unwrap();
        assert_eq!(module_dimension(SpaceTag::W6, m3), 0);
        assert_eq!(null_basis(SpaceTag::Alt, m3).len(), 3);
    }

    #[test]
    fn basis_elements_are_members() {
        let m = Model::lorentzian(4).unwrap();
        for space in [SpaceTag::Algebraic, SpaceTag::Weyl, SpaceTag::W6, SpaceTag::Sym0] {
            for b in null_basis(space, m) {
                assert!(membership(&b, space, 0.0).holds, "{space}");
            }
        }
    }

    #[test]
    fn rows_annihilate_basis() {
        let m = Model::new(4, 2, 2).unwrap();
        for space in [SpaceTag::W7, SpaceTag::W8, SpaceTag::Scalar] {
            let sys = constraint_system(space, m);
            for b in null_basis(space, m) {
                for row in &sys.rows {
                    assert!(row.apply(b.components()).is_zero(), "{}", row.label);
                }
            }
        }
    }

    #[test]
    fn sparse_axpy_merges() {
        let q = |v: i128| Rational::from_integer(v);
        let a = vec![(0, q(1)), (2, q(3))];
        let b = vec![(1, q(1)), (2, q(1))];
        assert_eq!(sparse_axpy(&a, q(-3), &b), vec![(0, q(1)), (1, q(-3))]);
    }
}
