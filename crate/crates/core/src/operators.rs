//! The operators `s<i>` and `d<i>.<j>` on whole polynomials.
//!
//! Block `i` of the algebra turns a polynomial `f` into a vector of
//! coordinates `(s_i f, d_{i,1} f, ..., d_{i,m_i} f)`. On a variable the
//! coordinates are the shifted variables; on constants they are `(c, 0, ..)`;
//! sums map to sums and products to products in the block, using its
//! structure constants. Every operator is read off this image.
//!
//! Because the basis is ranked, coordinate `j` of a product only involves
//! coordinates `0..=j` of the factors, so the image can be truncated at the
//! coordinate actually needed.

use crate::dalgebra::{AlgebraError, DAlgebra};
use crate::ordering::{ord_block, MultiIndex};
use crate::poly::{DPolynomial, Monomial};
use crate::rational::Rational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("AlgebraMismatch: {0}")]
    AlgebraMismatch(String),
}

/// Coordinates of the block-`i` image of a polynomial in the basis `e_{i,0..m_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockImage {
    pub coords: Vec<DPolynomial>,
}

/// Product of two coordinate vectors in block `i`, keeping `out.len()` coordinates.
fn multiply_truncated(
    algebra: &DAlgebra,
    block: usize,
    a: &[DPolynomial],
    b: &[DPolynomial],
    len: usize,
) -> Vec<DPolynomial> {
    let ring = a[0].ring();
    let mut out = vec![DPolynomial::zero(ring); len];
    for (p, x) in a.iter().enumerate().take(len).filter(|(_, x)| !x.is_zero()) {
        for (q, y) in b.iter().enumerate().take(len).filter(|(_, y)| !y.is_zero()) {
            let coeffs = algebra.product(block, p, q);
            if coeffs[..len].iter().all(Zero::is_zero) {
                continue;
            }
            let xy = x * y;
            for (j, c) in coeffs[..len].iter().enumerate() {
                if !c.is_zero() {
                    out[j] = &out[j] + &xy.scalar_mul(c);
                }
            }
        }
    }
    out
}

/// Multiplies two full block images with the structure constants of block `i`.
pub fn multiply_images(
    algebra: &DAlgebra,
    block: usize,
    a: &BlockImage,
    b: &BlockImage,
) -> BlockImage {
    let len = a.coords.len();
    BlockImage {
        coords: multiply_truncated(algebra, block, &a.coords, &b.coords, len),
    }
}

fn image_truncated(f: &DPolynomial, block: usize, len: usize) -> Vec<DPolynomial> {
    let ring = f.ring();
    let algebra = ring.algebra();
    let start = algebra.slot(block, 0).expect("block validated by caller");
    let mut total = vec![DPolynomial::zero(ring); len];
    for (mono, c) in f.terms() {
        let mut acc = vec![DPolynomial::zero(ring); len];
        acc[0] = DPolynomial::constant(ring, c.clone());
        for (v, e) in mono.factors() {
            let image: Vec<DPolynomial> = (0..len)
                .map(|p| {
                    DPolynomial::monomial(
                        ring,
                        Monomial::var(v.shifted(start + p), 1),
                        Rational::one(),
                    )
                })
                .collect();
            for _ in 0..*e {
                acc = multiply_truncated(algebra, block, &acc, &image, len);
            }
        }
        for (t, a) in total.iter_mut().zip(&acc) {
            *t = &*t + a;
        }
    }
    total
}

pub fn block_image(f: &DPolynomial, block: usize) -> Result<BlockImage, OperatorError> {
    let algebra = f.algebra();
    algebra.slot(block, 0)?;
    let len = algebra.nilpotent_count(block) + 1;
    Ok(BlockImage {
        coords: image_truncated(f, block, len),
    })
}

/// Applies the operator in slot `(block, p)`; `p = 0` is the endomorphism.
pub fn apply(f: &DPolynomial, block: usize, p: usize) -> Result<DPolynomial, OperatorError> {
    f.algebra().slot(block, p)?;
    Ok(image_truncated(f, block, p + 1).swap_remove(p))
}

/// Applies the operator sitting in global slot `slot`.
pub fn apply_slot_index(f: &DPolynomial, slot: usize) -> Result<DPolynomial, OperatorError> {
    if slot >= f.algebra().slot_count() {
        return Err(AlgebraError::IndexOutOfRange(format!("slot {slot}")).into());
    }
    let (block, p) = f.algebra().slot_position(slot);
    apply(f, block, p)
}

/// Applies `theta` one slot at a time, in ascending slot order.
pub fn apply_composition(
    theta: &MultiIndex,
    f: &DPolynomial,
) -> Result<DPolynomial, OperatorError> {
    let algebra = f.algebra();
    if theta.len() != algebra.slot_count() {
        return Err(OperatorError::AlgebraMismatch(format!(
            "multi-index {theta} has {} entries, algebra has {} slots",
            theta.len(),
            algebra.slot_count()
        )));
    }
    let mut g = f.clone();
    for (slot, &times) in theta.entries().iter().enumerate() {
        for _ in 0..times {
            g = apply_slot_index(&g, slot)?;
        }
    }
    Ok(g)
}

/// The endomorphism part accompanying `theta` in the separant expansion:
/// block `i` gets `theta[s_i] + ord_i(theta)` in its endomorphism slot, every
/// derivation slot is zero.
pub fn rho(algebra: &DAlgebra, theta: &MultiIndex) -> MultiIndex {
    let mut out = vec![0; algebra.slot_count()];
    for block in 1..=algebra.block_count() {
        let s = algebra.slot(block, 0).expect("block in range");
        out[s] = theta.entries()[s] + ord_block(algebra, theta, block);
    }
    MultiIndex::new(out)
}

/// The operator-preserving ring map sending `x_j` to `images[j - 1]`:
/// `d^theta x_j` goes to `theta(images[j - 1])`.
pub fn evaluate(f: &DPolynomial, images: &[DPolynomial]) -> Result<DPolynomial, OperatorError> {
    let ring = images
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| OperatorError::AlgebraMismatch("no images given".into()))?;
    if images.len() < f.ring().nvars() as usize {
        return Err(OperatorError::AlgebraMismatch(format!(
            "{} images for {} indeterminates",
            images.len(),
            f.ring().nvars()
        )));
    }
    let mut out = DPolynomial::zero(&ring);
    for (mono, c) in f.terms() {
        let mut term = DPolynomial::constant(&ring, c.clone());
        for (v, e) in mono.factors() {
            let img = apply_composition(&v.theta, &images[v.var as usize - 1])?;
            term = &term * &img.pow(*e);
        }
        out = &out + &term;
    }
    Ok(out)
}
