//! Dense constructions that use an explicit `U(2^k)` and never the
//! projection map; they serve as independent oracles in low degree.

use std::collections::BTreeMap;

use crate::echelon::EchelonSubspace;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{RowReducer, SparseRow};
use crate::tower::oracle::explicit_u;
use crate::tower::ProjectionTower;

use super::context_level;

/// Largest `n` handled densely: the ambient degree `4 * 2^m` stays within 16.
pub const DENSE_MAX_N: u32 = 7;

/// Row-space basis of `u ↦ NF_U(a u b)` over `u` in `A(len)`, `a` in
/// `A(pre)`, `b` in `A(suf)`, where `pre + len + suf = deg U`. The
/// functionals are indexed by the words of `A(len)`.
pub fn nf_functionals(u: &EchelonSubspace, len: u32, pre: u32, suf: u32) -> Result<Vec<SparseRow>> {
    let h = u.degree();
    if pre + len + suf != h {
        return Err(Error::DegreeMismatch { expected: h, found: pre + len + suf });
    }
    let field = *u.field();
    let mut funcs: BTreeMap<(u128, u128, u128), SparseRow> = BTreeMap::new();
    for ui in 0..(1u128 << len) {
        for a in 0..(1u128 << pre) {
            for b in 0..(1u128 << suf) {
                let idx = (((a << len) | ui) << suf) | b;
                for (c, v) in u.reduce_row(vec![(idx, 1)]) {
                    funcs.entry((a, b, c)).or_default().push((ui, v));
                }
            }
        }
    }
    let mut r = RowReducer::new(field);
    for row in funcs.into_values() {
        r.insert(row);
    }
    Ok(r.into_rows())
}

fn kernel_of(field: &FieldSpec, n: u32, funcs: impl IntoIterator<Item = SparseRow>) -> EchelonSubspace {
    let mut r = RowReducer::new(*field);
    for f in funcs {
        r.insert(f);
    }
    let rows: Vec<Vec<u32>> = r.rows().map(|row| crate::linalg::sparse_to_dense(row, 1usize << n)).collect();
    super::word_kernel(field, n, rows)
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > DENSE_MAX_N {
        return Err(Error::Capacity { degree: n, what: format!("dense boundary/ideal spaces need 1 <= n <= {DENSE_MAX_N}") });
    }
    Ok(())
}

/// `L(n)` and `R(n)` from an explicit `U(2^{m+1})`.
pub fn dense_boundary(tower: &ProjectionTower, n: u32) -> Result<(EchelonSubspace, EchelonSubspace)> {
    check_n(n)?;
    let k = context_level(n);
    let u = explicit_u(tower, k, false)?;
    let h = 1u32 << k;
    let field = *tower.field();
    let l = kernel_of(&field, n, nf_functionals(&u, n, 0, h - n)?);
    let r = kernel_of(&field, n, nf_functionals(&u, n, h - n, 0)?);
    Ok((l, r))
}

/// `I(n)` from an explicit `U(2^{m+1})`: the normal form modulo
/// `U A + A U` of a product of two halves is the tensor product of the
/// normal forms of the halves.
pub fn dense_ideal_component(tower: &ProjectionTower, n: u32) -> Result<EchelonSubspace> {
    check_n(n)?;
    let k = context_level(n);
    let u = explicit_u(tower, k, false)?;
    let h = 1u32 << k;
    let field = *tower.field();
    let mut funcs: Vec<SparseRow> = Vec::new();
    for j in 0..=(2 * h - n) {
        if j + n <= h {
            funcs.extend(nf_functionals(&u, n, j, h - j - n)?);
        } else if j >= h {
            funcs.extend(nf_functionals(&u, n, j - h, 2 * h - j - n)?);
        } else {
            let left_len = h - j;
            let right_len = n - left_len;
            let fl = nf_functionals(&u, left_len, j, 0)?;
            let fr = nf_functionals(&u, right_len, 0, h - right_len)?;
            for phi in &fl {
                for psi in &fr {
                    let mut row = Vec::with_capacity(phi.len() * psi.len());
                    for &(a, x) in phi {
                        for &(b, y) in psi {
                            row.push(((a << right_len) | b, field.mul(x, y)));
                        }
                    }
                    funcs.push(row);
                }
            }
        }
    }
    Ok(kernel_of(&field, n, funcs))
}
