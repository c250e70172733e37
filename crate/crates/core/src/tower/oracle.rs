//! Dense reconstruction of `U(2^k)` by the literal case rules, using full
//! ambient linear algebra and no projection map. Used as an independent
//! check of [`ProjectionTower::project`].

use crate::echelon::{vector_to_row, EchelonSubspace};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{RowReducer, SparseRow};
use crate::word::Word;

use super::{case_three_choice, CaseTag, ProjectionTower};

/// Largest degree built without the extended flag.
pub const ORACLE_DEFAULT_DEGREE: u32 = 8;
/// Largest degree built with it.
pub const ORACLE_EXTENDED_DEGREE: u32 = 16;

/// `U` and the word basis of `V` at one level, built densely.
#[derive(Debug, Clone)]
pub struct DenseLevel {
    pub case: CaseTag,
    pub u: EchelonSubspace,
    pub v_basis: Vec<Word>,
}

/// Levels `0..=k` of the dense construction.
pub fn explicit_levels(tower: &ProjectionTower, k: u32, extended: bool) -> Result<Vec<DenseLevel>> {
    let cap = if extended { ORACLE_EXTENDED_DEGREE } else { ORACLE_DEFAULT_DEGREE };
    if k >= 32 || (1u32 << k) > cap {
        return Err(Error::Capacity { degree: 1u32.checked_shl(k).unwrap_or(u32::MAX), what: "dense U oracle".into() });
    }
    tower.level(k)?;
    let field = *tower.field();
    let mut out = vec![DenseLevel { case: CaseTag::Root, u: EchelonSubspace::zero(1, field), v_basis: vec![Word::x(), Word::y()] }];
    for n in 0..k {
        let half = 1u32 << n;
        let prev = &out[n as usize];
        let full = EchelonSubspace::full(half, field, cap)?;
        let ua = prev.u.span_product(&full)?;
        let v_sub = EchelonSubspace::from_words(half, field, &prev.v_basis)?;
        let vv_words: Vec<Word> = prev.v_basis.iter().flat_map(|a| prev.v_basis.iter().map(move |b| a.concat(b).unwrap())).collect();
        let case = tower.level(n + 1)?.case();
        let next = match case {
            CaseTag::I => {
                let au = full.span_product(&prev.u)?;
                DenseLevel { case, u: ua.sum(&au)?, v_basis: vv_words }
            }
            CaseTag::II => {
                let au = full.span_product(&prev.u)?;
                let (w1, w2) = (prev.v_basis[0], prev.v_basis[1]);
                let w2v = EchelonSubspace::from_words(half, field, &[w2])?.span_product(&v_sub)?;
                let u = ua.sum(&au)?.sum(&w2v)?;
                DenseLevel { case, u, v_basis: vec![w1.concat(&w1)?, w1.concat(&w2)?] }
            }
            CaseTag::III => {
                let vu = v_sub.span_product(&prev.u)?;
                let s = ua.sum(&vu)?;
                let w = tower
                    .relations()
                    .find(|(_, w)| w.degree() == 2 * half)
                    .map(|(_, w)| w.clone())
                    .ok_or_else(|| Error::Internal(format!("no relation of degree {}", 2 * half)))?;
                let ys = split_relations(&field, &s, &vv_words, &w)?;
                let (kept, kernel) = case_three_choice(&field, vv_words.len(), &ys)?;
                let mut u = s.reducer();
                for row in &kernel {
                    u.insert(row.iter().map(|&(c, x)| (vv_words[c as usize].index(), x)).collect());
                }
                let u = EchelonSubspace::reduce_rows_sparse(2 * half, field, u.into_rows());
                DenseLevel { case, u, v_basis: kept.iter().map(|&c| vv_words[c]).collect() }
            }
            CaseTag::Root => return Err(Error::Internal("root above level 0".into())),
        };
        out.push(next);
    }
    Ok(out)
}

/// `U(2^k)` built densely.
pub fn explicit_u(tower: &ProjectionTower, k: u32, extended: bool) -> Result<EchelonSubspace> {
    Ok(explicit_levels(tower, k, extended)?.pop().expect("nonempty").u)
}

/// Writes every relation `x` as `y + z` with `y` in the span of the product
/// words and `z` in `s`, returning `y` in product coordinates. Solved by
/// reducing the tagged rows `(NF_s(vv_c) | e_c)`.
fn split_relations(field: &FieldSpec, s: &EchelonSubspace, vv_words: &[Word], w: &EchelonSubspace) -> Result<Vec<Vec<u32>>> {
    let tag = 1u128 << w.degree();
    let mut solve = RowReducer::new(*field);
    for (c, vv) in vv_words.iter().enumerate() {
        let mut row = s.reduce_row(vec![(vv.index(), 1)]);
        row.push((tag + c as u128, 1));
        solve.insert(row);
    }
    let mut ys = Vec::new();
    for x in w.rows() {
        let res: SparseRow = solve.reduce(s.reduce_row(vector_to_row(&x)));
        let mut y = vec![0u32; vv_words.len()];
        for (i, c) in res {
            if i < tag {
                return Err(Error::Internal("relation not in the product span modulo U A + V U".into()));
            }
            y[(i - tag) as usize] = field.neg(c);
        }
        ys.push(y);
    }
    Ok(ys)
}
