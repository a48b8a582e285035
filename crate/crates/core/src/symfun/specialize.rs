//! The ring homomorphisms Inv (h_n ↦ qⁿ) and rk (h_n ↦ qⁿ/n!) into ℚ⟦q,t⟧.

use num_rational::BigRational;

use super::{to_h, Basis, IntSym};
use crate::biseries::{IntSeries, RatSeries};
use crate::error::{Error, Result};

/// Inv: h_λ·t^k ↦ q^{|λ|}t^k. Equivalently, the multiplicity of the trivial
/// representation in each graded piece.
pub fn inv_project(f: &IntSym) -> Result<IntSeries> {
    let mut out = IntSeries::zero(f.caps().n, f.caps().k);
    match f.basis() {
        Basis::H => {
            for (lambda, k, c) in f.iter() {
                out.add_at(lambda.size(), k, c);
            }
        }
        Basis::S => {
            for (lambda, k, c) in f.iter() {
                if lambda.len() <= 1 {
                    out.add_at(lambda.size(), k, c);
                }
            }
        }
        Basis::P => return Err(Error::WrongBasis { op: "inv_project", basis: "P" }),
    }
    Ok(out)
}

/// rk: h_λ·t^k ↦ q^{|λ|}t^k/λ!, so that ch(V) ↦ dim V·qⁿ/n!.
pub fn rank_specialize(f: &IntSym) -> Result<RatSeries> {
    let h = to_h(f)?;
    let mut out = RatSeries::zero(f.caps().n, f.caps().k);
    for (lambda, k, c) in h.iter() {
        out.add_at(lambda.size(), k, &BigRational::new(c.clone(), lambda.factorial()));
    }
    Ok(out)
}
