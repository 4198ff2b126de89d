//! Linear algebra over the symplectic space F₂^{2n}.
//!
//! A [`PauliVector`] packs `x = (a, b)` into one `2n`-bit word: the X-part `a`
//! occupies the high `n` bits and the Z-part `b` the low `n` bits, with qubit 1
//! as the most significant bit of each half. The same word is the index of `x`
//! in every [`FourierTable`](crate::fourier::FourierTable).
//!
//! [`Subspace`] keeps a fully reduced row-echelon basis (pivots are the leading
//! bits, each pivot bit appears in exactly one row, rows sorted by decreasing
//! pivot), so two subspaces are equal iff their bases are identical.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure_same_n, Error, Result};

/// Largest qubit count a [`PauliVector`] can represent (2n bits in a `u64`).
pub const MAX_QUBITS: usize = 32;

/// Largest subspace dimension for which [`Subspace::elements`] materializes the elements.
pub const MAX_ENUM_DIM: usize = 26;

/// Largest `n` accepted by the exhaustive enumerators in this module.
pub const MAX_ENUM_QUBITS: usize = 3;

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Symplectic product of two packed words on `n` qubits.
#[inline]
pub(crate) fn sp_word(n: usize, x: u64, y: u64) -> u32 {
    let m = low_mask(n);
    (((x >> n) & y & m).count_ones() + ((x & m) & (y >> n)).count_ones()) & 1
}

/// Exchanges the X and Z halves of a packed word, so that `[x, y] = swap(x) · y`.
#[inline]
pub(crate) fn swap_halves(n: usize, x: u64) -> u64 {
    let m = low_mask(n);
    ((x & m) << n) | ((x >> n) & m)
}

#[inline]
fn lead_bit(v: u64) -> u64 {
    debug_assert!(v != 0);
    1u64 << (63 - v.leading_zeros())
}

/// An element `x = (a, b)` of F₂^{2n}; indexes the Weyl operator `W_x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliVector {
    n: u8,
    word: u64,
}

impl PauliVector {
    /// Builds a vector from its packed word; bits beyond `2n` must be clear.
    pub fn new(n: usize, word: u64) -> Result<Self> {
        check_qubits(n)?;
        if word & !low_mask(2 * n) != 0 {
            return Err(Error::InvalidParameter(format!(
                "word {word:#x} has bits beyond position 2n = {}",
                2 * n
            )));
        }
        Ok(Self { n: n as u8, word })
    }

    /// Builds a vector from its X-part `a` and Z-part `b` (each an `n`-bit integer).
    pub fn from_parts(n: usize, a: u64, b: u64) -> Result<Self> {
        check_qubits(n)?;
        let m = low_mask(n);
        if a & !m != 0 || b & !m != 0 {
            return Err(Error::InvalidParameter(format!(
                "parts a={a:#b}, b={b:#b} exceed {n} bits"
            )));
        }
        Ok(Self {
            n: n as u8,
            word: (a << n) | b,
        })
    }

    pub fn zero(n: usize) -> Self {
        assert!(
            (1..=MAX_QUBITS).contains(&n),
            "qubit count {n} out of range"
        );
        Self {
            n: n as u8,
            word: 0,
        }
    }

    pub(crate) fn from_word_unchecked(n: usize, word: u64) -> Self {
        debug_assert!(word & !low_mask(2 * n) == 0);
        Self { n: n as u8, word }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The packed `2n`-bit word, which is also the canonical table index.
    #[inline]
    pub fn word(&self) -> u64 {
        self.word
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.word as usize
    }

    /// X-part `a` as an `n`-bit integer.
    #[inline]
    pub fn x_part(&self) -> u64 {
        self.word >> self.n
    }

    /// Z-part `b` as an `n`-bit integer.
    #[inline]
    pub fn z_part(&self) -> u64 {
        self.word & low_mask(self.n())
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    /// `[x, y] = a·d + b·c` over GF(2).
    pub fn symplectic_product(&self, other: &Self) -> Result<u8> {
        ensure_same_n(self.n(), other.n())?;
        Ok(sp_word(self.n(), self.word, other.word) as u8)
    }

    /// Whether `W_x` and `W_y` commute, i.e. `[x, y] = 0`.
    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Parity of `a · b`, the sign picked up by `W_x` under transposition.
    #[inline]
    pub fn xz_parity(&self) -> u32 {
        (self.x_part() & self.z_part()).count_ones() & 1
    }

    /// Every vector of F₂^{2n} in canonical index order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliVector> {
        assert!((1..=MAX_QUBITS).contains(&n) && 2 * n < 64);
        (0..1u64 << (2 * n)).map(move |w| Self::from_word_unchecked(n, w))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let w = rng.random::<u64>() & low_mask(2 * n);
        Self::from_word_unchecked(n, w)
    }
}

/// Free-function form of [`PauliVector::symplectic_product`].
pub fn symplectic_product(x: &PauliVector, y: &PauliVector) -> Result<u8> {
    x.symplectic_product(y)
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "qubit count must be in 1..=32",
        });
    }
    Ok(())
}

impl Add for PauliVector {
    type Output = PauliVector;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "adding vectors of different qubit counts");
        Self {
            n: self.n,
            word: self.word ^ rhs.word,
        }
    }
}

fn bits(v: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|j| if v >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x:{},z:{}",
            bits(self.x_part(), self.n()),
            bits(self.z_part(), self.n())
        )
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_bits(s: &str) -> Result<u64> {
    if s.is_empty() || s.len() > MAX_QUBITS {
        return Err(Error::Parse(format!("bad bit string `{s}`")));
    }
    s.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::Parse(format!("bad bit `{c}` in `{s}`"))),
    })
}

impl FromStr for PauliVector {
    type Err = Error;

    /// Parses `"x:<a-bits>,z:<b-bits>"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (xs, zs) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `x:..,z:..`, got `{s}`")))?;
        let a = xs
            .trim()
            .strip_prefix("x:")
            .ok_or_else(|| Error::Parse(format!("missing `x:` in `{s}`")))?;
        let b = zs
            .trim()
            .strip_prefix("z:")
            .ok_or_else(|| Error::Parse(format!("missing `z:` in `{s}`")))?;
        if a.len() != b.len() {
            return Err(Error::Parse(format!(
                "x and z parts differ in length in `{s}`"
            )));
        }
        Self::from_parts(a.len(), parse_bits(a)?, parse_bits(b)?)
    }
}

impl Serialize for PauliVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Symplectic classification of a subspace, most specific label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    /// `V = V^⊥`.
    Lagrangian,
    /// `V ⊆ V^⊥` but not Lagrangian. The zero subspace lands here.
    Isotropic,
    /// `V ∩ V^⊥ = {0}` with `V ≠ {0}`.
    Symplectic,
    Generic,
}

/// A linear subspace of F₂^{2n} in canonical reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    basis: Vec<u64>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("n", &self.n)
            .field("basis", &self.basis_vectors())
            .finish()
    }
}

/// Reduces `rows` to canonical RREF.
fn canonical_rref(rows: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut v in rows {
        for &b in &basis {
            if v & lead_bit(b) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let lv = lead_bit(v);
        for b in basis.iter_mut() {
            if *b & lv != 0 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by(|x, y| y.cmp(x));
    basis
}

impl Subspace {
    /// The GF(2) span of `generators`.
    pub fn span(n: usize, generators: &[PauliVector]) -> Result<Self> {
        check_qubits(n)?;
        for g in generators {
            ensure_same_n(n, g.n())?;
        }
        Ok(Self {
            n,
            basis: canonical_rref(generators.iter().map(|g| g.word)),
        })
    }

    pub(crate) fn from_words(n: usize, words: impl IntoIterator<Item = u64>) -> Self {
        Self {
            n,
            basis: canonical_rref(words),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            basis: Vec::new(),
        }
    }

    /// All of F₂^{2n}.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            basis: (0..2 * n).rev().map(|j| 1u64 << j).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of elements, `2^dim`.
    pub fn cardinality(&self) -> u64 {
        1u64 << self.dim()
    }

    pub fn basis_vectors(&self) -> Vec<PauliVector> {
        self.basis
            .iter()
            .map(|&w| PauliVector::from_word_unchecked(self.n, w))
            .collect()
    }

    pub(crate) fn contains_word(&self, mut v: u64) -> bool {
        for &b in &self.basis {
            if v & lead_bit(b) != 0 {
                v ^= b;
            }
        }
        v == 0
    }

    pub fn contains(&self, x: &PauliVector) -> bool {
        x.n() == self.n && self.contains_word(x.word)
    }

    /// Packed words of every element, in Gray-code order starting at 0.
    ///
    /// Panics if `dim > MAX_ENUM_DIM`.
    pub(crate) fn element_words(&self) -> Vec<u64> {
        assert!(
            self.dim() <= MAX_ENUM_DIM,
            "subspace too large to enumerate"
        );
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut cur = 0u64;
        out.push(cur);
        for i in 1u64..(1u64 << self.dim()) {
            cur ^= self.basis[i.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }

    /// Every element of the subspace. Panics if `dim > MAX_ENUM_DIM`.
    pub fn elements(&self) -> Vec<PauliVector> {
        self.element_words()
            .into_iter()
            .map(|w| PauliVector::from_word_unchecked(self.n, w))
            .collect()
    }

    /// The smallest subspace containing both.
    pub fn join(&self, other: &Self) -> Result<Self> {
        ensure_same_n(self.n, other.n)?;
        Ok(Self::from_words(
            self.n,
            self.basis.iter().chain(&other.basis).copied(),
        ))
    }

    /// Whether `self ∩ other = {0}`.
    pub fn meets_trivially(&self, other: &Self) -> Result<bool> {
        Ok(self.join(other)?.dim() == self.dim() + other.dim())
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.n == other.n && self.basis.iter().all(|&b| other.contains_word(b))
    }

    /// `A^⊥ = {x : [x, a] = 0 for all a ∈ A}`.
    pub fn symplectic_complement(&self) -> Self {
        let n = self.n;
        let rows = canonical_rref(self.basis.iter().map(|&g| swap_halves(n, g)));
        let pivots: u64 = rows.iter().fold(0, |acc, &r| acc | lead_bit(r));
        let mut out = Vec::with_capacity(2 * n - rows.len());
        for j in 0..2 * n {
            let f = 1u64 << j;
            if pivots & f != 0 {
                continue;
            }
            let mut x = f;
            for &r in &rows {
                if r & f != 0 {
                    x |= lead_bit(r);
                }
            }
            out.push(x);
        }
        Self::from_words(n, out)
    }

    /// Whether `V ⊆ V^⊥`: all basis pairs have zero product.
    pub fn is_isotropic(&self) -> bool {
        let n = self.n;
        self.basis
            .iter()
            .enumerate()
            .all(|(i, &x)| self.basis[i + 1..].iter().all(|&y| sp_word(n, x, y) == 0))
    }

    pub fn is_lagrangian(&self) -> bool {
        self.dim() == self.n && self.is_isotropic()
    }

    /// Whether `V ∩ V^⊥ = {0}`, i.e. the Gram matrix of the form on the basis is
    /// nonsingular. True for the zero subspace.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        let d = self.dim();
        let gram: Vec<u64> = self
            .basis
            .iter()
            .map(|&x| {
                self.basis.iter().enumerate().fold(0u64, |acc, (j, &y)| {
                    acc | (u64::from(sp_word(n, x, y)) << j)
                })
            })
            .collect();
        canonical_rref(gram).len() == d
    }

    pub fn classify(&self) -> SubspaceKind {
        if self.is_isotropic() {
            if self.dim() == self.n {
                SubspaceKind::Lagrangian
            } else {
                SubspaceKind::Isotropic
            }
        } else if self.is_symplectic() {
            SubspaceKind::Symplectic
        } else {
            SubspaceKind::Generic
        }
    }

    /// A uniformly random subspace of the given dimension (random independent draws).
    pub fn random<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Result<Self> {
        check_qubits(n)?;
        if dim > 2 * n {
            return Err(Error::InvalidParameter(format!(
                "dim {dim} exceeds 2n = {}",
                2 * n
            )));
        }
        let mut words = Vec::with_capacity(dim);
        let mut cur = Self::zero(n);
        while cur.dim() < dim {
            let v = PauliVector::random(n, rng).word;
            if !cur.contains_word(v) {
                words.push(v);
                cur = Self::from_words(n, words.iter().copied());
            }
        }
        Ok(cur)
    }
}

/// Free-function form of [`Subspace::span`].
pub fn span(n: usize, generators: &[PauliVector]) -> Result<Subspace> {
    Subspace::span(n, generators)
}

pub fn symplectic_complement(a: &Subspace) -> Subspace {
    a.symplectic_complement()
}

pub fn classify(a: &Subspace) -> SubspaceKind {
    a.classify()
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    basis: Vec<PauliVector>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            n: self.n,
            basis: self.basis_vectors(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        Subspace::span(r.n, &r.basis).map_err(serde::de::Error::custom)
    }
}

/// Hyperbolic-pair decomposition of a subspace.
///
/// Pairs satisfy `[xᵢ, zⱼ] = δᵢⱼ`, `[xᵢ, xⱼ] = [zᵢ, zⱼ] = 0`; the central vectors
/// commute with everything and span `V ∩ V^⊥`.
#[derive(Clone, Debug, Serialize)]
pub struct GramSchmidtDecomposition {
    pub hyperbolic_pairs: Vec<(PauliVector, PauliVector)>,
    pub central: Vec<PauliVector>,
    pub source_dim: usize,
}

impl GramSchmidtDecomposition {
    /// Number of hyperbolic pairs `k`.
    pub fn rank(&self) -> usize {
        self.hyperbolic_pairs.len()
    }

    fn all_vectors(&self) -> Vec<PauliVector> {
        let mut v: Vec<PauliVector> = self
            .hyperbolic_pairs
            .iter()
            .flat_map(|&(x, z)| [x, z])
            .collect();
        v.extend(&self.central);
        v
    }

    /// The symplectic subspace spanned by the hyperbolic pairs.
    pub fn symplectic_part(&self, n: usize) -> Subspace {
        let words = self
            .hyperbolic_pairs
            .iter()
            .flat_map(|&(x, z)| [x.word, z.word]);
        Subspace::from_words(n, words)
    }

    pub fn central_part(&self, n: usize) -> Subspace {
        Subspace::from_words(n, self.central.iter().map(|c| c.word))
    }

    /// Checks every pairwise relation and that the vectors are independent.
    pub fn relations_hold(&self) -> bool {
        let vs = self.all_vectors();
        let k = self.rank();
        let Some(first) = vs.first() else { return true };
        let n = first.n();
        // Index 2i is x_i, 2i+1 is z_i, central vectors follow.
        for (i, u) in vs.iter().enumerate() {
            for (j, v) in vs.iter().enumerate() {
                let expect = i < 2 * k && j < 2 * k && i / 2 == j / 2 && i != j;
                if (sp_word(n, u.word, v.word) == 1) != expect {
                    return false;
                }
            }
        }
        Subspace::from_words(n, vs.iter().map(|v| v.word)).dim() == vs.len()
    }
}

/// Symplectic Gram–Schmidt: splits `V` into hyperbolic pairs plus a central part.
pub fn symplectic_gram_schmidt(v: &Subspace) -> GramSchmidtDecomposition {
    let n = v.n;
    let mut remaining: Vec<u64> = v.basis.clone();
    let mut pairs = Vec::new();
    let mut central = Vec::new();
    while let Some(x) = remaining.pop() {
        let partner = remaining.iter().position(|&w| sp_word(n, x, w) == 1);
        match partner {
            None => central.push(PauliVector::from_word_unchecked(n, x)),
            Some(idx) => {
                let z = remaining.swap_remove(idx);
                for u in remaining.iter_mut() {
                    let with_z = sp_word(n, *u, z);
                    let with_x = sp_word(n, *u, x);
                    if with_z == 1 {
                        *u ^= x;
                    }
                    if with_x == 1 {
                        *u ^= z;
                    }
                }
                pairs.push((
                    PauliVector::from_word_unchecked(n, x),
                    PauliVector::from_word_unchecked(n, z),
                ));
            }
        }
    }
    GramSchmidtDecomposition {
        hyperbolic_pairs: pairs,
        central,
        source_dim: v.dim(),
    }
}

/// Greedily extends an isotropic `T` to a Lagrangian subspace containing it.
pub fn extend_to_lagrangian(t: &Subspace) -> Result<Subspace> {
    if !t.is_isotropic() {
        return Err(Error::InvalidSubspace(
            "extend_to_lagrangian needs an isotropic subspace".into(),
        ));
    }
    let mut cur = t.clone();
    while cur.dim() < cur.n {
        let perp = cur.symplectic_complement();
        let next = perp
            .basis
            .iter()
            .copied()
            .find(|&w| !cur.contains_word(w))
            .expect("isotropic subspace below dimension n has room in its complement");
        cur = Subspace::from_words(cur.n, cur.basis.iter().copied().chain([next]));
    }
    Ok(cur)
}

/// A random Lagrangian containing `t`, adjoining uniformly drawn elements of `t^⊥ \ t`.
pub fn random_lagrangian_extension<R: Rng + ?Sized>(t: &Subspace, rng: &mut R) -> Result<Subspace> {
    if !t.is_isotropic() {
        return Err(Error::InvalidSubspace(
            "random extension needs an isotropic subspace".into(),
        ));
    }
    let mut cur = t.clone();
    while cur.dim() < cur.n {
        let perp = cur.symplectic_complement();
        let next = loop {
            let mut w = 0u64;
            for &b in &perp.basis {
                if rng.random::<bool>() {
                    w ^= b;
                }
            }
            if !cur.contains_word(w) {
                break w;
            }
        };
        cur = Subspace::from_words(cur.n, cur.basis.iter().copied().chain([next]));
    }
    Ok(cur)
}

/// `∏_{k=1..n} (2^k + 1)`, the number of Lagrangian subspaces of F₂^{2n}.
pub fn lagrangian_count(n: usize) -> u64 {
    (1..=n as u32).map(|k| (1u64 << k) + 1).product()
}

/// All subspaces of F₂^{2n} of dimension `dim`, by enumerating RREF matrices.
pub fn enumerate_subspaces(n: usize, dim: usize) -> Result<Vec<Subspace>> {
    check_qubits(n)?;
    if n > MAX_ENUM_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "subspace enumeration is limited to n <= 3",
        });
    }
    let cols = 2 * n;
    if dim > cols {
        return Ok(Vec::new());
    }
    let bit = |c: usize| 1u64 << (cols - 1 - c);
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // Free positions per row: columns right of the row's pivot that are not pivots.
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..cols).filter(|c| !pivots.contains(c)).collect())
            .collect();
        let total: usize = free.iter().map(Vec::len).sum();
        for mask in 0u64..(1u64 << total) {
            let mut shift = 0;
            let rows = pivots.iter().zip(&free).map(|(&p, fr)| {
                let mut w = bit(p);
                for &c in fr {
                    if mask >> shift & 1 == 1 {
                        w |= bit(c);
                    }
                    shift += 1;
                }
                w
            });
            let rows: Vec<u64> = rows.collect();
            out.push(Subspace { n, basis: rows });
        }
        // Next pivot combination in lexicographic order.
        let mut i = dim;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < cols - dim + i {
                pivots[i] += 1;
                for j in i + 1..dim {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every subspace of F₂^{2n}, ordered by dimension then enumeration order.
pub fn enumerate_all_subspaces(n: usize) -> Result<Vec<Subspace>> {
    let mut out = Vec::new();
    for d in 0..=2 * n {
        out.extend(enumerate_subspaces(n, d)?);
    }
    Ok(out)
}

/// All Lagrangian subspaces of F₂^{2n} (n ≤ 3).
pub fn enumerate_lagrangians(n: usize) -> Result<Vec<Subspace>> {
    Ok(enumerate_subspaces(n, n)?
        .into_iter()
        .filter(Subspace::is_isotropic)
        .collect())
}

/// Covers a symplectic subspace of dimension `2k` by `2^k + 1` isotropic
/// subspaces of dimension `k` meeting pairwise only in zero.
///
/// Works in the coordinates of a hyperbolic basis of `S`, where it searches the
/// Lagrangians of the standard F₂^{2k} for a partition of the nonzero vectors.
pub fn isotropic_cover(s: &Subspace) -> Result<Vec<Subspace>> {
    if s.classify() != SubspaceKind::Symplectic {
        return Err(Error::InvalidSubspace(
            "isotropic_cover needs a symplectic subspace".into(),
        ));
    }
    let gs = symplectic_gram_schmidt(s);
    let k = gs.rank();
    if k > MAX_ENUM_QUBITS {
        return Err(Error::TooLarge {
            n: k,
            reason: "isotropic cover search is limited to k <= 3",
        });
    }
    let lagrangians = enumerate_lagrangians(k)?;
    let elements: Vec<Vec<u64>> = lagrangians.iter().map(Subspace::element_words).collect();
    let target = (1usize << k) + 1;
    let mut covered = vec![false; 1 << (2 * k)];
    covered[0] = true;
    let mut chosen = Vec::new();
    if !exact_cover(&elements, &mut covered, &mut chosen, target) {
        return Err(Error::InvalidSubspace("no isotropic cover found".into()));
    }
    // Local coordinate word: X-bit i (qubit i+1) selects x_{i}, Z-bit selects z_{i}.
    let embed = |w: u64| -> u64 {
        let mut out = 0u64;
        for (i, &(x, z)) in gs.hyperbolic_pairs.iter().enumerate() {
            let shift = k - 1 - i;
            if w >> (k + shift) & 1 == 1 {
                out ^= x.word;
            }
            if w >> shift & 1 == 1 {
                out ^= z.word;
            }
        }
        out
    };
    Ok(chosen
        .iter()
        .map(|&i| Subspace::from_words(s.n, lagrangians[i].basis.iter().map(|&w| embed(w))))
        .collect())
}

fn exact_cover(
    elements: &[Vec<u64>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    target: usize,
) -> bool {
    let Some(first) = covered.iter().position(|&c| !c) else {
        return chosen.len() == target;
    };
    if chosen.len() == target {
        return false;
    }
    for (i, el) in elements.iter().enumerate() {
        if !el.contains(&(first as u64)) {
            continue;
        }
        if el.iter().skip(1).any(|&w| covered[w as usize]) {
            continue;
        }
        for &w in el.iter().skip(1) {
            covered[w as usize] = true;
        }
        chosen.push(i);
        if exact_cover(elements, covered, chosen, target) {
            return true;
        }
        chosen.pop();
        for &w in el.iter().skip(1) {
            covered[w as usize] = false;
        }
    }
    false
}
