//! Symmetric bilinear forms, their diagonalization, and Grothendieck–Witt
//! classes.

mod class;
pub mod hilbert;

pub use class::{gw_equal, hyperbolic_reduce, GWClass, GWClassJson, HasseMap, Reduced, Verdict};
pub use hilbert::{hasse_invariant, hilbert_symbol, Place};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fields::{Elem, Field};
use crate::matrix::Matrix;

/// Known shape of a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    /// `entry(i, j) = s[i + j]` when `i + j < d`, else 0; `s[d-1] ≠ 0`.
    UpperHankel(Vec<Elem>),
    /// `d × d` grid of `n × n` blocks with `block(i, j) = blocks[i + j]`
    /// when `i + j < d`, else 0.
    BlockHankel { n: usize, blocks: Vec<Matrix> },
}

/// Symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymForm {
    field: Field,
    gram: Matrix,
    structure: Option<Structure>,
}

/// Result of congruence diagonalization: `basisᵀ · gram · basis` is diagonal
/// with the nonzero entries `diag` followed by `radical_dim` zeros.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub diag: Vec<Elem>,
    pub radical_dim: usize,
    pub basis: Matrix,
}

impl SymForm {
    pub fn new(field: &Field, gram: Matrix) -> Result<SymForm> {
        if !gram.is_square() {
            return Err(Error::Malformed("Gram matrix must be square".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(SymForm {
            field: field.clone(),
            gram,
            structure: None,
        })
    }

    /// The diagonal form `⟨a_1, …, a_n⟩`.
    pub fn diagonal(field: &Field, entries: &[Elem]) -> SymForm {
        SymForm {
            field: field.clone(),
            gram: Matrix::diagonal(field, entries),
            structure: None,
        }
    }

    /// Upper-left triangular Hankel form with anti-diagonals `s_1, …, s_d`.
    pub fn upper_hankel(field: &Field, s: Vec<Elem>) -> Result<SymForm> {
        let d = s.len();
        if d == 0 || field.is_zero(&s[d - 1]) {
            return Err(Error::ZeroLeading);
        }
        let gram = Matrix::from_fn(d, d, |i, j| {
            if i + j < d {
                s[i + j].clone()
            } else {
                field.zero()
            }
        });
        Ok(SymForm {
            field: field.clone(),
            gram,
            structure: Some(Structure::UpperHankel(s)),
        })
    }

    /// Block form with `block(i, j) = blocks[i + j]` above the block
    /// anti-diagonal and zero below it. Blocks must be symmetric.
    pub fn block_hankel(field: &Field, n: usize, blocks: Vec<Matrix>) -> Result<SymForm> {
        let d = blocks.len();
        if blocks
            .iter()
            .any(|b| b.rows() != n || b.cols() != n || !b.is_symmetric())
        {
            return Err(Error::Malformed(
                "blocks must be symmetric n × n matrices".into(),
            ));
        }
        let gram = Matrix::from_fn(n * d, n * d, |i, j| {
            let (bi, bj) = (i / n, j / n);
            if bi + bj < d {
                blocks[bi + bj].get(i % n, j % n).clone()
            } else {
                field.zero()
            }
        });
        Ok(SymForm {
            field: field.clone(),
            gram,
            structure: Some(Structure::BlockHankel { n, blocks }),
        })
    }

    /// Attaches a structure tag after checking it against the Gram matrix.
    pub fn with_structure(self, structure: Structure) -> Result<SymForm> {
        let rebuilt = match &structure {
            Structure::UpperHankel(s) => SymForm::upper_hankel(&self.field, s.clone())?,
            Structure::BlockHankel { n, blocks } => {
                SymForm::block_hankel(&self.field, *n, blocks.clone())?
            }
        };
        if rebuilt.gram != self.gram {
            return Err(Error::Malformed(
                "structure tag disagrees with the Gram matrix".into(),
            ));
        }
        Ok(rebuilt)
    }

    /// Reads the block-Hankel structure off the Gram matrix, if present.
    pub fn detect_block_hankel(self, n: usize) -> Result<SymForm> {
        let dim = self.dim();
        if n == 0 || !dim.is_multiple_of(n) {
            return Err(Error::Malformed(
                "dimension is not a multiple of the block size".into(),
            ));
        }
        let d = dim / n;
        let blocks = (0..d).map(|k| self.gram.block(0, k * n, n, n)).collect();
        self.with_structure(Structure::BlockHankel { n, blocks })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn structure(&self) -> Option<&Structure> {
        self.structure.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Elem {
        self.gram.det(&self.field)
    }

    /// Form with every Gram entry multiplied by `c`; structure is kept.
    pub fn scale(&self, c: &Elem) -> SymForm {
        let k = &self.field;
        let structure = self.structure.as_ref().map(|s| match s {
            Structure::UpperHankel(v) => {
                Structure::UpperHankel(v.iter().map(|e| k.mul(e, c)).collect())
            }
            Structure::BlockHankel { n, blocks } => Structure::BlockHankel {
                n: *n,
                blocks: blocks.iter().map(|b| b.map(|e| k.mul(e, c))).collect(),
            },
        });
        SymForm {
            field: k.clone(),
            gram: self.gram.map(|e| k.mul(e, c)),
            structure,
        }
    }

    /// Gram matrix in a new basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> SymForm {
        SymForm {
            field: self.field.clone(),
            gram: self.gram.congruence(p, &self.field),
            structure: None,
        }
    }

    /// GW class, computed through the structure tag when one is present.
    pub fn class(&self) -> Result<GWClass> {
        let class = match &self.structure {
            Some(Structure::UpperHankel(s)) => upper_hankel_class(&self.field, s)?,
            Some(Structure::BlockHankel { .. }) => block_hankel_diagonalize(self)?,
            None => diagonalize(self)?,
        };
        Ok(class.with_witnesses(gram_witnesses(&self.field, &self.gram)))
    }
}

/// Integers whose prime divisors, with 2, contain every prime where the
/// form can have a nontrivial Hasse invariant: common denominator and the
/// determinant of a nondegenerate rational Gram matrix.
fn gram_witnesses(field: &Field, gram: &Matrix) -> Option<Vec<BigInt>> {
    if !field.is_rationals() || gram.rows() == 0 {
        return None;
    }
    let det = gram.det(field);
    let det = field.as_rational(&det)?;
    if det == &num_rational::BigRational::from_integer(0.into()) {
        return None;
    }
    let mut den = BigInt::one();
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            den = den.lcm(
                field
                    .as_rational(gram.get(i, j))
                    .expect("rational entry")
                    .denom(),
            );
        }
    }
    Some(vec![den, det.numer().clone(), det.denom().clone()])
}

/// Congruence diagonalization with pivoting; zero pivots without a usable
/// partner contribute to the radical.
pub fn diagonalize_with_basis(form: &SymForm) -> Result<Diagonalization> {
    let k = form.field();
    if k.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let n = form.dim();
    let mut a = form.gram().clone();
    let mut basis = Matrix::identity(k, n);
    let mut order = Vec::with_capacity(n);
    let mut radical = Vec::new();
    for piv in 0..n {
        if k.is_zero(a.get(piv, piv)) {
            if let Some(j) = (piv + 1..n).find(|&j| !k.is_zero(a.get(j, j))) {
                swap_sym(&mut a, piv, j);
                swap_cols(&mut basis, piv, j);
            } else if let Some(j) = (piv + 1..n).find(|&j| !k.is_zero(a.get(piv, j))) {
                // e_piv <- e_piv + e_j makes the pivot 2·a[piv][j] ≠ 0.
                let one = k.one();
                a.add_row_multiple(piv, j, &one, k);
                a.add_col_multiple(piv, j, &one, k);
                basis.add_col_multiple(piv, j, &one, k);
            } else {
                radical.push(piv);
                continue;
            }
        }
        let pv = a.get(piv, piv).clone();
        let inv = k.inv(&pv)?;
        for j in piv + 1..n {
            let c = k.neg(&k.mul(a.get(piv, j), &inv));
            if k.is_zero(&c) {
                continue;
            }
            a.add_row_multiple(j, piv, &c, k);
            a.add_col_multiple(j, piv, &c, k);
            basis.add_col_multiple(j, piv, &c, k);
        }
        order.push(piv);
    }
    let diag: Vec<Elem> = order.iter().map(|&i| a.get(i, i).clone()).collect();
    let check = form.gram().congruence(&basis, k);
    let expected = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            a.get(i, i).clone()
        } else {
            k.zero()
        }
    });
    if check != expected {
        return Err(Error::Invariant(
            "diagonalization is not a congruence".into(),
        ));
    }
    Ok(Diagonalization {
        diag,
        radical_dim: radical.len(),
        basis,
    })
}

fn swap_sym(a: &mut Matrix, i: usize, j: usize) {
    a.swap_rows(i, j);
    swap_cols(a, i, j);
}

fn swap_cols(a: &mut Matrix, i: usize, j: usize) {
    for r in 0..a.rows() {
        let (x, y) = (a.get(r, i).clone(), a.get(r, j).clone());
        a.set(r, i, y);
        a.set(r, j, x);
    }
}

/// Class of the nondegenerate part of a form.
pub fn diagonalize(form: &SymForm) -> Result<GWClass> {
    let d = diagonalize_with_basis(form)?;
    Ok(GWClass::from_diag(form.field(), d.diag).with_radical(d.radical_dim))
}

/// Class of the upper-triangular Hankel form with anti-diagonals `s_1..s_d`:
/// `(d/2)ℍ` for even `d`, `((d-1)/2)ℍ + ⟨s_d⟩` for odd `d`.
pub fn upper_hankel_class(field: &Field, s: &[Elem]) -> Result<GWClass> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let d = s.len();
    if d == 0 || field.is_zero(&s[d - 1]) {
        return Err(Error::ZeroLeading);
    }
    let mut class = GWClass::hyperbolic(field, d / 2);
    if d % 2 == 1 {
        class = class.sum(&GWClass::from_diag(field, vec![s[d - 1].clone()]))?;
    }
    Ok(class)
}

/// Explicit hyperbolic splitting of a block-Hankel form.
///
/// For each coordinate `c` in the first `n·⌊d/2⌋` (the blocks above the
/// middle), the linear form `ψ_c = (G_cc/2)·x_c + Σ_{j>c} G_cj·x_j` satisfies
/// `q = Σ_c 2·x_c·ψ_c + q_mid`, where `q_mid` is the form of the middle block
/// `A_d` (present only for odd `d`). The coordinates `(x_c, ψ_c, x_mid)` are
/// independent exactly when `A_d` is invertible.
pub struct BlockSplitting {
    /// New coordinates as rows: `new = transition · old`.
    pub transition: Matrix,
    pub hyperbolic_count: usize,
    /// Gram matrix of the middle block, empty for even `d`.
    pub middle: Matrix,
}

pub fn block_hankel_splitting(form: &SymForm) -> Result<BlockSplitting> {
    let Some(Structure::BlockHankel { n, blocks }) = form.structure() else {
        return Err(Error::Malformed("form is not tagged block-Hankel".into()));
    };
    let k = form.field();
    if k.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let (n, d) = (*n, blocks.len());
    let dim = n * d;
    let h = n * (d / 2);
    let g = form.gram();
    let half = k.inv(&k.from_i64(2))?;
    let mut t = Matrix::zero(k, dim, dim);
    for c in 0..h {
        t.set(2 * c, c, k.one());
        t.set(2 * c + 1, c, k.mul(g.get(c, c), &half));
        for j in c + 1..dim {
            t.set(2 * c + 1, j, g.get(c, j).clone());
        }
    }
    let mid_start = n * (d / 2);
    let mid = if d % 2 == 1 { n } else { 0 };
    for r in 0..mid {
        t.set(2 * h + r, mid_start + r, k.one());
    }
    let middle = if d % 2 == 1 {
        blocks[d - 1].clone()
    } else {
        Matrix::zero(k, 0, 0)
    };
    let t_inv = t.inverse(k).map_err(|_| Error::Degenerate)?;
    let split = g.congruence(&t_inv, k);
    let expected = Matrix::from_fn(dim, dim, |i, j| {
        if i < 2 * h || j < 2 * h {
            if i / 2 == j / 2 && i != j && i < 2 * h && j < 2 * h {
                k.one()
            } else {
                k.zero()
            }
        } else {
            middle.get(i - 2 * h, j - 2 * h).clone()
        }
    });
    if split != expected {
        return Err(Error::Invariant(
            "block-Hankel splitting is not a congruence".into(),
        ));
    }
    Ok(BlockSplitting {
        transition: t,
        hyperbolic_count: h,
        middle,
    })
}

/// Class of a nondegenerate block-Hankel form: `(nd/2)ℍ` for even `d`,
/// `(n(d-1)/2)ℍ + [A_d]` for odd `d`.
pub fn block_hankel_diagonalize(form: &SymForm) -> Result<GWClass> {
    let split = block_hankel_splitting(form)?;
    let k = form.field();
    let mut class = GWClass::hyperbolic(k, split.hyperbolic_count);
    if split.middle.rows() > 0 {
        let middle = SymForm::new(k, split.middle)?;
        let mid = diagonalize(&middle)?;
        if mid.radical_dim() > 0 {
            return Err(Error::Degenerate);
        }
        class = class.sum(&mid)?;
    }
    Ok(class)
}
