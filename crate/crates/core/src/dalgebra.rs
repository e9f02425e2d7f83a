//! Finite-dimensional commutative `Q`-algebras given by structure constants.
//!
//! An algebra is supplied as a product of local blocks. Each block lists its
//! basis with the unit first, followed by the nilpotent basis elements, and a
//! multiplication table over unordered pairs of basis names. Validation checks
//! the ring axioms, computes the depth `nu(j)` of every nilpotent basis element
//! in the powers of the maximal ideal, and rejects bases whose depths are not
//! nondecreasing.
//!
//! Blocks are numbered from 1 in the public API, matching the operator names
//! `s1, d1.1, ..., s2, ...`. Within block `i`, index 0 is the unit (the
//! endomorphism `s<i>`) and indices `1..=m_i` are the nilpotent basis elements
//! (the operators `d<i>.<j>`).

use crate::linalg::Subspace;
use crate::rational::{Coeff, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ParseError at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("EmptyBlock: block {block} has no basis elements")]
    EmptyBlock { block: usize },
    #[error("DuplicateName: basis name `{0}` is used more than once")]
    DuplicateName(String),
    #[error("UnknownName: `{0}` is not a basis name")]
    UnknownName(String),
    #[error("MalformedProduct: table key `{0}` is not of the form `a*b`")]
    MalformedProduct(String),
    #[error("DuplicateProduct: the product `{0}` is given more than once")]
    DuplicateProduct(String),
    #[error("CrossBlockProduct: `{0}` mixes basis elements of different blocks")]
    CrossBlockProduct(String),
    #[error("NotAssociative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("NotUnital: {unit}*{other} != {other}")]
    NotUnital { unit: String, other: String },
    #[error("NotLocalBlock: block {block}: {reason}")]
    NotLocalBlock { block: usize, reason: String },
    #[error("RankedBasisViolation: block {block}: nu({first}) = {nu_first} > nu({second}) = {nu_second}")]
    RankedBasisViolation {
        block: usize,
        first: String,
        second: String,
        nu_first: u32,
        nu_second: u32,
    },
    #[error("ProductRuleViolation: block {block}: {p}*{q} has a nonzero {j}-coefficient although nu({p}) + nu({q}) > nu({j})")]
    ProductRuleViolation {
        block: usize,
        p: String,
        q: String,
        j: String,
    },
    #[error("IndexOutOfRange: {0}")]
    IndexOutOfRange(String),
    #[error("UnknownBuiltin: `{0}`")]
    UnknownBuiltin(String),
}

/// User-facing description of an algebra, read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<BlockSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    /// The first name is the block unit.
    pub basis: Vec<String>,
    /// `"a*b"` mapped to the coordinates of the product; omitted products are zero
    /// (except products with the unit, which default to the identity).
    #[serde(default)]
    pub table: BTreeMap<String, Vec<(String, Coeff)>>,
}

impl AlgebraSpec {
    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        serde_json::from_str(text).map_err(|e| AlgebraError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra specs always serialise")
    }
}

/// The algebras of the standard examples, with their standard ranked bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `K[e]/(e^2)`: one endomorphism and one twisted derivation.
    Dual,
    /// `K^m`: `m` endomorphisms.
    Fields(usize),
    /// `K[v_1..v_n]/(v_1..v_n)^2 x K^m`: difference-differential.
    DiffDifference(usize, usize),
    /// `K[e]/(e^{n+1})`: truncated Hasse-Schmidt derivations.
    TruncatedHs(usize),
}

impl Builtin {
    /// Accepts `dual`, `fields:m`, `hs:n` and `dd:n,m`.
    pub fn parse(name: &str) -> Result<Builtin, AlgebraError> {
        let unknown = || AlgebraError::UnknownBuiltin(name.to_string());
        let (head, params) = match name.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (name, None),
        };
        let nums = |p: Option<&str>| -> Result<Vec<usize>, AlgebraError> {
            p.ok_or_else(unknown)?
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| unknown()))
                .collect()
        };
        let params = match head {
            "dual" if params.is_none() => Vec::new(),
            "dual" => return Err(unknown()),
            "fields" | "hs" | "dd" | "truncated_hs" | "diff_difference" => nums(params)?,
            _ => return Err(unknown()),
        };
        let long = match head {
            "hs" => "truncated_hs",
            "dd" => "diff_difference",
            other => other,
        };
        Builtin::from_name(long, &params)
    }

    pub fn from_name(name: &str, params: &[usize]) -> Result<Builtin, AlgebraError> {
        let unknown = || AlgebraError::UnknownBuiltin(format!("{name}{params:?}"));
        match (name, params) {
            ("dual", []) => Ok(Builtin::Dual),
            ("fields", &[m]) if m >= 1 => Ok(Builtin::Fields(m)),
            ("diff_difference", &[n, m]) if n >= 1 => Ok(Builtin::DiffDifference(n, m)),
            ("truncated_hs", &[n]) if n >= 1 => Ok(Builtin::TruncatedHs(n)),
            _ => Err(unknown()),
        }
    }

    pub fn spec(self) -> AlgebraSpec {
        let coeff_one = || Coeff(Rational::one());
        match self {
            Builtin::Dual => AlgebraSpec {
                blocks: vec![BlockSpec {
                    basis: vec!["1".into(), "e".into()],
                    table: BTreeMap::from([("e*e".to_string(), Vec::new())]),
                }],
            },
            Builtin::Fields(m) => AlgebraSpec {
                blocks: (1..=m)
                    .map(|i| BlockSpec {
                        basis: vec![format!("u{i}")],
                        table: BTreeMap::new(),
                    })
                    .collect(),
            },
            Builtin::TruncatedHs(n) => {
                let name = |k: usize| match k {
                    0 => "1".to_string(),
                    1 => "e".to_string(),
                    k => format!("e^{k}"),
                };
                let mut table = BTreeMap::new();
                for a in 1..=n {
                    for b in a..=n {
                        if a + b <= n {
                            table.insert(
                                format!("{}*{}", name(a), name(b)),
                                vec![(name(a + b), coeff_one())],
                            );
                        }
                    }
                }
                AlgebraSpec {
                    blocks: vec![BlockSpec {
                        basis: (0..=n).map(name).collect(),
                        table,
                    }],
                }
            }
            Builtin::DiffDifference(n, m) => {
                let mut blocks = vec![BlockSpec {
                    basis: std::iter::once("1".to_string())
                        .chain((1..=n).map(|k| format!("v{k}")))
                        .collect(),
                    table: BTreeMap::new(),
                }];
                blocks.extend((1..=m).map(|i| BlockSpec {
                    basis: vec![format!("u{i}")],
                    table: BTreeMap::new(),
                }));
                AlgebraSpec { blocks }
            }
        }
    }
}

/// Looks up a builtin by name and parameters and returns its spec.
pub fn builtin(name: &str, params: &[usize]) -> Result<AlgebraSpec, AlgebraError> {
    Builtin::from_name(name, params).map(Builtin::spec)
}

#[derive(Clone, Debug, PartialEq)]
struct Block {
    basis: Vec<String>,
    /// `nu[0] = 0` for the unit.
    nu: Vec<u32>,
    /// `products[p][q]` holds the dense coordinates of `e_p * e_q`.
    products: Vec<Vec<Vec<Rational>>>,
}

impl Block {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (p, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (q, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (o, c) in out.iter_mut().zip(&self.products[p][q]) {
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    fn unit_vec(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[k] = Rational::one();
        v
    }
}

/// A validated algebra together with its operator signature.
///
/// Immutable after construction; cheap to share behind an `Arc`.
#[derive(Clone, Debug, PartialEq)]
pub struct DAlgebra {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    slot_count: usize,
    op_names: Vec<String>,
    slot_block: Vec<(usize, usize)>,
}

pub fn validate_algebra(spec: &AlgebraSpec) -> Result<DAlgebra, AlgebraError> {
    let mut owner: HashMap<&str, (usize, usize)> = HashMap::new();
    for (b, block) in spec.blocks.iter().enumerate() {
        if block.basis.is_empty() {
            return Err(AlgebraError::EmptyBlock { block: b + 1 });
        }
        for (k, name) in block.basis.iter().enumerate() {
            if owner.insert(name.as_str(), (b, k)).is_some() {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
    }

    let mut blocks = Vec::with_capacity(spec.blocks.len());
    for (b, bs) in spec.blocks.iter().enumerate() {
        blocks.push(validate_block(b, bs, &owner)?);
    }

    let mut offsets = Vec::with_capacity(blocks.len());
    let mut op_names = Vec::new();
    let mut slot_block = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        offsets.push(op_names.len());
        for p in 0..block.dim() {
            op_names.push(if p == 0 {
                format!("s{}", b + 1)
            } else {
                format!("d{}.{}", b + 1, p)
            });
            slot_block.push((b + 1, p));
        }
    }
    Ok(DAlgebra {
        slot_count: op_names.len(),
        blocks,
        offsets,
        op_names,
        slot_block,
    })
}

fn validate_block(
    b: usize,
    spec: &BlockSpec,
    owner: &HashMap<&str, (usize, usize)>,
) -> Result<Block, AlgebraError> {
    let d = spec.basis.len();
    let lookup = |name: &str| -> Result<(usize, usize), AlgebraError> {
        owner
            .get(name.trim())
            .copied()
            .ok_or_else(|| AlgebraError::UnknownName(name.trim().to_string()))
    };

    let mut given: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; d]; d];
    for (key, terms) in &spec.table {
        let (l, r) = key
            .split_once('*')
            .ok_or_else(|| AlgebraError::MalformedProduct(key.clone()))?;
        let (bl, p) = lookup(l)?;
        let (br, q) = lookup(r)?;
        if bl != b || br != b {
            return Err(AlgebraError::CrossBlockProduct(key.clone()));
        }
        let mut coords = vec![Rational::zero(); d];
        for (name, Coeff(c)) in terms {
            let (bt, k) = lookup(name)?;
            if bt != b {
                return Err(AlgebraError::CrossBlockProduct(key.clone()));
            }
            coords[k] += c;
        }
        if given[p][q].is_some() {
            return Err(AlgebraError::DuplicateProduct(key.clone()));
        }
        given[p][q] = Some(coords.clone());
        given[q][p] = Some(coords);
    }

    let mut block = Block {
        basis: spec.basis.clone(),
        nu: vec![0; d],
        products: vec![vec![vec![Rational::zero(); d]; d]; d],
    };
    for p in 0..d {
        for q in 0..d {
            block.products[p][q] = match (&given[p][q], p, q) {
                (Some(v), _, _) => v.clone(),
                (None, 0, k) | (None, k, 0) => block.unit_vec(k),
                (None, _, _) => vec![Rational::zero(); d],
            };
        }
    }

    for k in 0..d {
        if block.products[0][k] != block.unit_vec(k) {
            return Err(AlgebraError::NotUnital {
                unit: spec.basis[0].clone(),
                other: spec.basis[k].clone(),
            });
        }
    }

    for a in 0..d {
        for bb in 0..d {
            let ab = &block.products[a][bb];
            for c in 0..d {
                let left = block.mul(ab, &block.unit_vec(c));
                let right = block.mul(&block.unit_vec(a), &block.products[bb][c]);
                if left != right {
                    return Err(AlgebraError::NotAssociative {
                        a: spec.basis[a].clone(),
                        b: spec.basis[bb].clone(),
                        c: spec.basis[c].clone(),
                    });
                }
            }
        }
    }

    // the nilpotent basis elements must span an ideal: no unit component in their products
    for p in 1..d {
        for q in p..d {
            if !block.products[p][q][0].is_zero() {
                return Err(AlgebraError::NotLocalBlock {
                    block: b + 1,
                    reason: format!(
                        "{}*{} has a nonzero unit coordinate, so the nilpotent span is not an ideal",
                        spec.basis[p], spec.basis[q]
                    ),
                });
            }
        }
    }

    let powers = ideal_powers(&block).ok_or_else(|| AlgebraError::NotLocalBlock {
        block: b + 1,
        reason: "the span of the nilpotent basis elements is not nilpotent".to_string(),
    })?;
    for j in 1..d {
        let e = block.unit_vec(j);
        block.nu[j] = powers.iter().take_while(|s| s.contains(&e)).count() as u32;
    }

    for j in 1..d {
        for k in j + 1..d {
            if block.nu[j] > block.nu[k] {
                return Err(AlgebraError::RankedBasisViolation {
                    block: b + 1,
                    first: spec.basis[j].clone(),
                    second: spec.basis[k].clone(),
                    nu_first: block.nu[j],
                    nu_second: block.nu[k],
                });
            }
        }
    }

    for p in 1..d {
        for q in 1..d {
            for j in 1..d {
                if !block.products[p][q][j].is_zero() && block.nu[p] + block.nu[q] > block.nu[j] {
                    return Err(AlgebraError::ProductRuleViolation {
                        block: b + 1,
                        p: spec.basis[p].clone(),
                        q: spec.basis[q].clone(),
                        j: spec.basis[j].clone(),
                    });
                }
            }
        }
    }

    Ok(block)
}

/// `[m, m^2, ..., m^r]` up to the last nonzero power, or `None` if `m` is not nilpotent.
fn ideal_powers(block: &Block) -> Option<Vec<Subspace>> {
    let d = block.dim();
    let mut first = Subspace::new(d);
    for j in 1..d {
        first.insert(&block.unit_vec(j));
    }
    let mut powers = Vec::new();
    let mut current = first;
    while !current.is_zero() {
        let mut next = Subspace::new(d);
        for v in current.basis() {
            for q in 1..d {
                next.insert(&block.mul(v, &block.unit_vec(q)));
            }
        }
        if next.rank() >= current.rank() {
            return None;
        }
        powers.push(current);
        current = next;
    }
    Some(powers)
}

impl DAlgebra {
    /// Number of blocks `t`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Number of nilpotent basis elements `m_i` of block `i` (1-based).
    pub fn nilpotent_count(&self, block: usize) -> usize {
        self.blocks[block - 1].dim() - 1
    }

    /// Total number of operator slots `M`.
    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    pub fn op_names(&self) -> &[String] {
        &self.op_names
    }

    pub fn basis_names(&self, block: usize) -> &[String] {
        &self.blocks[block - 1].basis
    }

    fn check_block(&self, block: usize) -> Result<&Block, AlgebraError> {
        if block == 0 || block > self.blocks.len() {
            return Err(AlgebraError::IndexOutOfRange(format!(
                "block {block} (algebra has {} blocks)",
                self.blocks.len()
            )));
        }
        Ok(&self.blocks[block - 1])
    }

    /// Global slot index of `(block, p)`, `p = 0` being the endomorphism.
    pub fn slot(&self, block: usize, p: usize) -> Result<usize, AlgebraError> {
        let b = self.check_block(block)?;
        if p >= b.dim() {
            return Err(AlgebraError::IndexOutOfRange(format!(
                "index {p} in block {block} (block has {} basis elements)",
                b.dim()
            )));
        }
        Ok(self.offsets[block - 1] + p)
    }

    /// Inverse of [`DAlgebra::slot`].
    pub fn slot_position(&self, slot: usize) -> (usize, usize) {
        self.slot_block[slot]
    }

    pub fn is_sigma_slot(&self, slot: usize) -> bool {
        self.slot_block[slot].1 == 0
    }

    /// `nu_i(j)`, with `nu_i(0) = 0`.
    pub fn nu(&self, block: usize, j: usize) -> Result<u32, AlgebraError> {
        let b = self.check_block(block)?;
        b.nu.get(j).copied().ok_or_else(|| {
            AlgebraError::IndexOutOfRange(format!("basis index {j} in block {block}"))
        })
    }

    /// Depth of the basis element sitting in global `slot`.
    pub fn slot_nu(&self, slot: usize) -> u32 {
        let (b, p) = self.slot_block[slot];
        self.blocks[b - 1].nu[p]
    }

    /// All `(p, q)` with `1 <= p, q <= m_i` and `nu(p) + nu(q) <= nu(j)`.
    pub fn gamma(&self, block: usize, j: usize) -> Result<Vec<(usize, usize)>, AlgebraError> {
        let b = self.check_block(block)?;
        let m = b.dim() - 1;
        if j == 0 || j > m {
            return Err(AlgebraError::IndexOutOfRange(format!(
                "nilpotent index {j} in block {block}"
            )));
        }
        let mut out = Vec::new();
        for p in 1..=m {
            for q in 1..=m {
                if b.nu[p] + b.nu[q] <= b.nu[j] {
                    out.push((p, q));
                }
            }
        }
        Ok(out)
    }

    /// The `e_j`-coordinate of `e_p * e_q` in block `i`, all indices nilpotent.
    pub fn alpha(
        &self,
        block: usize,
        j: usize,
        p: usize,
        q: usize,
    ) -> Result<Rational, AlgebraError> {
        let b = self.check_block(block)?;
        let m = b.dim() - 1;
        for (label, x) in [("j", j), ("p", p), ("q", q)] {
            if x == 0 || x > m {
                return Err(AlgebraError::IndexOutOfRange(format!(
                    "{label} = {x} in block {block} (m = {m})"
                )));
            }
        }
        Ok(b.products[p][q][j].clone())
    }

    /// Dense coordinates of `e_p * e_q` in block `i`, unit included.
    pub fn product(&self, block: usize, p: usize, q: usize) -> &[Rational] {
        &self.blocks[block - 1].products[p][q]
    }

    /// Multiplies two coordinate vectors of block `i`.
    pub fn multiply(&self, block: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        self.blocks[block - 1].mul(a, b)
    }

    /// The unit coordinate vector of block `i`.
    pub fn block_unit(&self, block: usize) -> Vec<Rational> {
        self.blocks[block - 1].unit_vec(0)
    }

    /// True when the algebra is `K[e]/(e^2)` with basis `{1, e}`.
    pub fn is_dual_numbers(&self) -> bool {
        self.blocks.len() == 1
            && self.blocks[0].dim() == 2
            && self.blocks[0].products[1][1].iter().all(Zero::is_zero)
    }

    /// True when every block is a copy of the base field.
    pub fn is_difference_only(&self) -> bool {
        self.blocks.iter().all(|b| b.dim() == 1)
    }
}
