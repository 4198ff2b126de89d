//! Dense real functions on F₂^{2n} and the symplectic Fourier transform
//!
//! `f̂(a) = 4^{-n} Σ_x (-1)^{[a,x]} f(x)`. Because `[a,x] = swap(a)·x`, the
//! transform is a Walsh–Hadamard butterfly followed by a half-swap permutation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_n, Error, Result};
use crate::gf2::{swap_halves, PauliVector, Subspace};

/// Largest `n` for which a dense table is built (4^n entries).
pub const MAX_TABLE_QUBITS: usize = 12;

/// Which side of the transform a table lives on. Bookkeeping only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Primal,
    Hat,
}

impl Domain {
    fn flipped(self) -> Self {
        match self {
            Domain::Primal => Domain::Hat,
            Domain::Hat => Domain::Primal,
        }
    }
}

/// A real-valued function on F₂^{2n}, stored densely in canonical word order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    n: usize,
    values: Vec<f64>,
    domain: Domain,
}

impl FourierTable {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_domain(n, values, Domain::Primal)
    }

    pub fn with_domain(n: usize, values: Vec<f64>, domain: Domain) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_QUBITS {
            return Err(Error::TooLarge {
                n,
                reason: "tables support 1 <= n <= 12",
            });
        }
        if values.len() != 1 << (2 * n) {
            return Err(Error::InvalidParameter(format!(
                "table for n = {n} needs {} values, got {}",
                1usize << (2 * n),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite table entry at index {i}"
            )));
        }
        Ok(Self { n, values, domain })
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(n, vec![0.0; 1 << (2 * n)]).expect("valid size")
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(PauliVector) -> f64) -> Result<Self> {
        Self::new(n, PauliVector::all(n).map(&mut f).collect())
    }

    /// Indicator of the zero vector.
    pub fn delta(n: usize) -> Self {
        let mut t = Self::zeros(n);
        t.values[0] = 1.0;
        t
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::new(n, vec![c; 1 << (2 * n)]).expect("valid size")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn set_domain(&mut self, d: Domain) {
        self.domain = d;
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, x: &PauliVector) -> f64 {
        self.values[x.index()]
    }

    #[inline]
    pub fn at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|&v| f(v)).collect(),
            domain: self.domain,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        ensure_same_n(self.n, other.n)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            n: self.n,
            values,
            domain: self.domain,
        })
    }

    /// `Σ_x f(x) g(x)`.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        ensure_same_n(self.n, other.n)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        ensure_same_n(self.n, other.n)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Writes rows `index,a_bits,b_bits,value`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "a_bits", "b_bits", "value"])?;
        for x in PauliVector::all(self.n) {
            let s = x.to_string();
            let (a, b) = s.split_once(',').expect("display has a comma");
            out.write_record([
                x.index().to_string(),
                a[2..].to_string(),
                b[2..].to_string(),
                self.values[x.index()].to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// JSON array of values in index order.
    pub fn to_json_array(&self) -> serde_json::Value {
        serde_json::Value::from(self.values.clone())
    }
}

/// In-place unnormalized Walsh–Hadamard transform.
fn walsh_hadamard(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// `f̂(a) = 4^{-n} Σ_x (-1)^{[a,x]} f(x)` in O(N log N).
pub fn symplectic_transform(f: &FourierTable) -> FourierTable {
    let n = f.n;
    let mut wh = f.values.clone();
    walsh_hadamard(&mut wh);
    let scale = 1.0 / (1u64 << (2 * n)) as f64;
    let values = (0..wh.len() as u64)
        .map(|a| wh[swap_halves(n, a) as usize] * scale)
        .collect();
    FourierTable {
        n,
        values,
        domain: f.domain.flipped(),
    }
}

/// `f(x) = Σ_a (-1)^{[a,x]} f̂(a)`, i.e. `4^n` times the forward transform.
pub fn inverse_symplectic_transform(fhat: &FourierTable) -> FourierTable {
    let mut t = symplectic_transform(fhat);
    let scale = (1u64 << (2 * fhat.n)) as f64;
    t.values.iter_mut().for_each(|v| *v *= scale);
    t
}

/// `(f ∗ g)(x) = 4^{-n} Σ_t f(t) g(t + x)`, evaluated directly.
pub fn convolve(f: &FourierTable, g: &FourierTable) -> Result<FourierTable> {
    ensure_same_n(f.n, g.n)?;
    let len = f.values.len();
    let scale = 1.0 / len as f64;
    let values = (0..len)
        .map(|x| (0..len).map(|t| f.values[t] * g.values[t ^ x]).sum::<f64>() * scale)
        .collect();
    Ok(FourierTable {
        n: f.n,
        values,
        domain: f.domain,
    })
}

/// `4^{-n} Σ_x f(x) g(x)`, which equals `Σ_x f̂(x) ĝ(x)`.
pub fn plancherel_inner(f: &FourierTable, g: &FourierTable) -> Result<f64> {
    Ok(f.dot(g)? / f.values.len() as f64)
}

/// `Σ_{x ∈ T} f(x)`. Equals `|T| Σ_{x ∈ T^⊥} f̂(x)`.
pub fn subspace_sum(f: &FourierTable, t: &Subspace) -> Result<f64> {
    ensure_same_n(f.n, t.n())?;
    Ok(t.element_words()
        .into_iter()
        .map(|w| f.values[w as usize])
        .sum())
}

/// `Σ_{x ∈ V} f(x + z)`, the mass on the coset `z + V`.
pub fn coset_sum(f: &FourierTable, v: &Subspace, z: &PauliVector) -> Result<f64> {
    ensure_same_n(f.n, v.n())?;
    ensure_same_n(f.n, z.n())?;
    Ok(v.element_words()
        .into_iter()
        .map(|w| f.values[(w ^ z.word()) as usize])
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{enumerate_all_subspaces, sp_word};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive(f: &FourierTable) -> Vec<f64> {
        let n = f.n();
        let len = f.len() as u64;
        (0..len)
            .map(|a| {
                (0..len)
                    .map(|x| {
                        let s = if sp_word(n, a, x) == 1 { -1.0 } else { 1.0 };
                        s * f.at(x as usize)
                    })
                    .sum::<f64>()
                    / len as f64
            })
            .collect()
    }

    fn random_table(n: usize, rng: &mut ChaCha8Rng) -> FourierTable {
        FourierTable::new(
            n,
            (0..1 << (2 * n))
                .map(|_| rng.random_range(-1.0..1.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn transform_of_delta_and_constant() {
        for n in 1..=3 {
            let d = symplectic_transform(&FourierTable::delta(n));
            let q = 1.0 / (1u64 << (2 * n)) as f64;
            assert!(d.values().iter().all(|&v| v == q));
            assert_eq!(d.domain(), Domain::Hat);
            let c = symplectic_transform(&FourierTable::constant(n, 1.0));
            assert_eq!(c.values(), FourierTable::delta(n).values());
        }
    }

    #[test]
    fn fast_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for _ in 0..100 {
                let f = random_table(n, &mut rng);
                let fast = symplectic_transform(&f);
                for (a, b) in fast.values().iter().zip(naive(&f)) {
                    assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn double_hat_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            let f = random_table(n, &mut rng);
            let hh = symplectic_transform(&symplectic_transform(&f));
            let q = 1.0 / (1u64 << (2 * n)) as f64;
            for (a, b) in hh.values().iter().zip(f.values()) {
                assert!((a - b * q).abs() <= 1e-12);
            }
            let back = inverse_symplectic_transform(&symplectic_transform(&f));
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn convolution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 2;
        let g = random_table(n, &mut rng);
        let c = convolve(&FourierTable::delta(n), &g).unwrap();
        assert!(c.max_abs_diff(&g.scaled(1.0 / 16.0)).unwrap() <= 1e-15);
        let dd = convolve(&FourierTable::delta(n), &FourierTable::delta(n)).unwrap();
        assert_eq!(dd.at(0), 1.0 / 16.0);
        assert!(dd.values()[1..].iter().all(|&v| v == 0.0));
        for n in 1..=2 {
            let f = random_table(n, &mut rng);
            let g = random_table(n, &mut rng);
            let lhs = symplectic_transform(&convolve(&f, &g).unwrap());
            let rhs = symplectic_transform(&f)
                .pointwise_mul(&symplectic_transform(&g))
                .unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
        }
        assert!(convolve(&FourierTable::delta(1), &FourierTable::delta(2)).is_err());
    }

    #[test]
    fn plancherel_examples() {
        for n in 1..=3 {
            let d = FourierTable::delta(n);
            let q = 1.0 / (1u64 << (2 * n)) as f64;
            assert_eq!(plancherel_inner(&d, &d).unwrap(), q);
            let dh = symplectic_transform(&d);
            assert!((dh.dot(&dh).unwrap() - q).abs() < 1e-15);
            let one = FourierTable::constant(n, 1.0);
            assert_eq!(plancherel_inner(&one, &one).unwrap(), 1.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = random_table(2, &mut rng);
        let g = random_table(2, &mut rng);
        let hat = symplectic_transform(&f)
            .dot(&symplectic_transform(&g))
            .unwrap();
        assert!((plancherel_inner(&f, &g).unwrap() - hat).abs() <= 1e-10);
    }

    #[test]
    fn subspace_sum_duality_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=2 {
            let f = random_table(n, &mut rng);
            let fh = symplectic_transform(&f);
            for t in enumerate_all_subspaces(n).unwrap() {
                let lhs = subspace_sum(&f, &t).unwrap();
                let rhs =
                    t.cardinality() as f64 * subspace_sum(&fh, &t.symplectic_complement()).unwrap();
                assert!((lhs - rhs).abs() <= 1e-10);
            }
        }
        let f = random_table(1, &mut rng);
        assert_eq!(subspace_sum(&f, &Subspace::zero(1)).unwrap(), f.at(0));
    }

    #[test]
    fn sum_over_characters_is_exact() {
        for n in 1..=2 {
            for t in enumerate_all_subspaces(n).unwrap() {
                let perp = t.symplectic_complement();
                let els = t.element_words();
                for x in 0..1u64 << (2 * n) {
                    let s: i64 = els.iter().map(|&a| 1 - 2 * sp_word(n, a, x) as i64).sum();
                    let expect = if perp.contains_word(x) {
                        t.cardinality() as i64
                    } else {
                        0
                    };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        FourierTable::delta(1).write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "index,a_bits,b_bits,value");
        assert_eq!(lines[1], "0,0,0,1");
        assert_eq!(lines[3], "2,1,0,0");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FourierTable::new(1, vec![0.0; 3]).is_err());
        assert!(FourierTable::new(1, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    proptest! {
        #[test]
        fn linear_and_self_inverse(seed in any::<u64>(), n in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_table(n, &mut rng);
            let g = random_table(n, &mut rng);
            let sum = FourierTable::new(n, f.values().iter().zip(g.values()).map(|(a, b)| a + b).collect()).unwrap();
            let lhs = symplectic_transform(&sum);
            let fh = symplectic_transform(&f);
            let gh = symplectic_transform(&g);
            for i in 0..lhs.len() {
                prop_assert!((lhs.at(i) - fh.at(i) - gh.at(i)).abs() <= 1e-12);
            }
            let back = inverse_symplectic_transform(&fh);
            prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
        }
    }
}
