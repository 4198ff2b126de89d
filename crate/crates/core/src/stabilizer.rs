//! Stabilizer states as (Lagrangian subspace, generator signs), brute-force
//! stabilizer fidelity, and Weyl sets.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ensure_same_n, Error, Result};
use crate::gf2::{enumerate_lagrangians, PauliVector, Subspace, MAX_ENUM_QUBITS};
use crate::quantum::{weyl_coefficients, weyl_matrix, CMatrix, DensityMatrix, MAX_DENSE_QUBITS};

/// Default tolerance for [`weyl_set`].
pub const WEYL_SET_TOL: f64 = 1e-6;

/// A stabilizer pure state: the stabilizer group is generated by
/// `sᵢ W_{gᵢ}` over the canonical basis `gᵢ` of a Lagrangian subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerState {
    lagrangian: Subspace,
    signs: Vec<i8>,
}

impl StabilizerState {
    pub fn new(lagrangian: Subspace, signs: Vec<i8>) -> Result<Self> {
        if !lagrangian.is_lagrangian() {
            return Err(Error::InvalidSubspace(
                "stabilizer group must be Lagrangian".into(),
            ));
        }
        if signs.len() != lagrangian.n() {
            return Err(Error::InvalidParameter(format!(
                "expected {} signs, got {}",
                lagrangian.n(),
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1 or -1".into()));
        }
        Ok(Self { lagrangian, signs })
    }

    /// Sign `i` is `-1` iff bit `i` of `mask` is set.
    pub fn with_sign_mask(lagrangian: Subspace, mask: u64) -> Result<Self> {
        let n = lagrangian.n();
        Self::new(
            lagrangian,
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.lagrangian.n()
    }

    pub fn lagrangian(&self) -> &Subspace {
        &self.lagrangian
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn generators(&self) -> Vec<PauliVector> {
        self.lagrangian.basis_vectors()
    }

    /// `∏ᵢ (I + sᵢ W_{gᵢ}) / 2` as a dense matrix.
    pub fn projector_matrix(&self) -> Result<CMatrix> {
        let n = self.n();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                n,
                reason: "dense projectors are limited to n <= 6",
            });
        }
        let dim = 1usize << n;
        let id = CMatrix::identity(dim, dim);
        let mut p = id.clone();
        for (g, &s) in self.generators().iter().zip(&self.signs) {
            let w = weyl_matrix(g)?;
            let factor = (&id + w.scale(f64::from(s))).scale(0.5);
            p = &p * factor;
        }
        Ok(p)
    }

    pub fn projector(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_hermitian_part(self.projector_matrix()?)
    }
}

/// Free-function form of [`StabilizerState::projector`].
pub fn projector(s: &StabilizerState) -> Result<DensityMatrix> {
    s.projector()
}

#[derive(Serialize, Deserialize)]
struct StabilizerRepr {
    n: usize,
    generators: Vec<PauliVector>,
    signs: Vec<i8>,
}

impl Serialize for StabilizerState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StabilizerRepr {
            n: self.n(),
            generators: self.generators(),
            signs: self.signs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilizerState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = StabilizerRepr::deserialize(d)?;
        let l = Subspace::span(r.n, &r.generators).map_err(D::Error::custom)?;
        // Signs attach to the canonical basis, so the listed generators must be it.
        if l.basis_vectors() != r.generators {
            return Err(D::Error::custom(
                "generators must be the canonical basis of their span",
            ));
        }
        StabilizerState::new(l, r.signs).map_err(D::Error::custom)
    }
}

/// Every stabilizer state on `n ≤ 3` qubits together with its projector.
pub struct StabilizerCatalog {
    n: usize,
    states: Vec<StabilizerState>,
    projectors: Vec<CMatrix>,
}

impl StabilizerCatalog {
    fn build(n: usize) -> Result<Self> {
        let mut states = Vec::new();
        for l in enumerate_lagrangians(n)? {
            for mask in 0..1u64 << n {
                states.push(StabilizerState::with_sign_mask(l.clone(), mask)?);
            }
        }
        let projectors = states
            .par_iter()
            .map(StabilizerState::projector_matrix)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            states,
            projectors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StabilizerState] {
        &self.states
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// `⟨φ|ρ|φ⟩` for every catalog entry, in catalog order.
    pub fn overlaps(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        ensure_same_n(self.n, rho.n())?;
        Ok(self.projectors.par_iter().map(|p| rho.overlap(p)).collect())
    }
}

static CATALOGS: [OnceLock<StabilizerCatalog>; MAX_ENUM_QUBITS] =
    [OnceLock::new(), OnceLock::new(), OnceLock::new()];

/// The cached catalog for `n` (1 ≤ n ≤ 3).
pub fn stabilizer_catalog(n: usize) -> Result<&'static StabilizerCatalog> {
    if n == 0 || n > MAX_ENUM_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "stabilizer enumeration is limited to n <= 3",
        });
    }
    let cell = &CATALOGS[n - 1];
    if let Some(c) = cell.get() {
        return Ok(c);
    }
    let built = StabilizerCatalog::build(n)?;
    Ok(cell.get_or_init(|| built))
}

/// All stabilizer states on `n ≤ 3` qubits: 6, 60, 1080.
pub fn enumerate_stabilizer_states(n: usize) -> Result<Vec<StabilizerState>> {
    Ok(stabilizer_catalog(n)?.states.clone())
}

/// Index and value of the maximum, lowest index on ties.
fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// `F(ρ) = max_φ ⟨φ|ρ|φ⟩` by exhaustive search, with the maximizing state.
pub fn stabilizer_fidelity(rho: &DensityMatrix) -> Result<(f64, StabilizerState)> {
    let cat = stabilizer_catalog(rho.n())?;
    let (i, v) = argmax(&cat.overlaps(rho)?);
    Ok((v, cat.states[i].clone()))
}

/// Best stabilizer state whose Weyl set is `l`, searching all `2ⁿ` sign choices.
pub fn best_on_lagrangian(rho: &DensityMatrix, l: &Subspace) -> Result<(f64, StabilizerState)> {
    ensure_same_n(rho.n(), l.n())?;
    if !l.is_lagrangian() {
        return Err(Error::InvalidSubspace(
            "best_on_lagrangian needs a Lagrangian subspace".into(),
        ));
    }
    let n = rho.n();
    let states: Vec<StabilizerState> = (0..1u64 << n)
        .map(|m| StabilizerState::with_sign_mask(l.clone(), m))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = states
        .par_iter()
        .map(|s| s.projector_matrix().map(|p| rho.overlap(&p)))
        .collect::<Result<_>>()?;
    let (i, v) = argmax(&values);
    Ok((v, states[i].clone()))
}

/// `{x : |tr(W_x ρ)| ≥ 1 - tol}`.
pub fn weyl_set(rho: &DensityMatrix, tol: f64) -> Vec<PauliVector> {
    let n = rho.n();
    weyl_coefficients(rho.matrix())
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c.re.abs() >= 1.0 - tol)
        .map(|(i, _)| PauliVector::new(n, i as u64).expect("index < 4^n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::subspace_sum;
    use crate::gf2::span;
    use crate::quantum::{gen_state, p_table, StateKind};
    use num_complex::Complex64 as C64;

    fn z_line() -> Subspace {
        span(1, &["x:0,z:1".parse().unwrap()]).unwrap()
    }

    #[test]
    fn projector_examples() {
        let plus = StabilizerState::new(z_line(), vec![1])
            .unwrap()
            .projector()
            .unwrap();
        assert_eq!(plus, DensityMatrix::basis_state(1, 0).unwrap());
        let minus = StabilizerState::new(z_line(), vec![-1])
            .unwrap()
            .projector()
            .unwrap();
        assert_eq!(minus, DensityMatrix::basis_state(1, 1).unwrap());
        assert!(StabilizerState::new(Subspace::full(1), vec![1]).is_err());
        assert!(StabilizerState::new(z_line(), vec![1, 1]).is_err());
    }

    #[test]
    fn weyl_coefficients_of_projectors() {
        for n in 1..=2 {
            for s in enumerate_stabilizer_states(n).unwrap() {
                let rho = s.projector().unwrap();
                assert!((rho.purity() - 1.0).abs() < 1e-10);
                let coeffs = weyl_coefficients(rho.matrix());
                for x in PauliVector::all(n) {
                    let c = coeffs[x.index()].re.abs();
                    let want = if s.lagrangian().contains(&x) {
                        1.0
                    } else {
                        0.0
                    };
                    assert!((c - want).abs() < 1e-12);
                }
                let mut ws = weyl_set(&rho, WEYL_SET_TOL);
                ws.sort();
                let mut els = s.lagrangian().elements();
                els.sort();
                assert_eq!(ws, els);
            }
        }
    }

    #[test]
    fn catalog_sizes_and_distinctness() {
        for (n, count) in [(1usize, 6usize), (2, 60), (3, 1080)] {
            let cat = stabilizer_catalog(n).unwrap();
            assert_eq!(cat.len(), count);
            assert_eq!(count as u64, (1u64 << n) * crate::gf2::lagrangian_count(n));
            let mut keys: Vec<Vec<i64>> = cat
                .projectors()
                .iter()
                .map(|p| {
                    p.iter()
                        .flat_map(|z| [(z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64])
                        .collect()
                })
                .collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), count);
        }
        assert!(enumerate_stabilizer_states(4).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let (f, s) = stabilizer_fidelity(&DensityMatrix::basis_state(1, 0).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        assert_eq!(s, StabilizerState::new(z_line(), vec![1]).unwrap());
        let (f, _) = stabilizer_fidelity(&DensityMatrix::maximally_mixed(1).unwrap()).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
        // |T⟩ = (|0⟩ + e^{iπ/4}|1⟩)/√2 against the six single-qubit stabilizer states.
        let t = [
            C64::new(1.0, 0.0),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        ];
        let rho = DensityMatrix::from_pure(&t).unwrap();
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let candidates: [[C64; 2]; 6] = [
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(s2, 0.0), C64::new(s2, 0.0)],
            [C64::new(s2, 0.0), C64::new(-s2, 0.0)],
            [C64::new(s2, 0.0), C64::new(0.0, s2)],
            [C64::new(s2, 0.0), C64::new(0.0, -s2)],
        ];
        let tn = [t[0] * s2, t[1] * s2];
        let oracle = candidates
            .iter()
            .map(|c| (c[0].conj() * tn[0] + c[1].conj() * tn[1]).norm_sqr())
            .fold(0.0f64, f64::max);
        let (f, _) = stabilizer_fidelity(&rho).unwrap();
        assert!((f - oracle).abs() < 1e-12);
        assert!((f - (std::f64::consts::PI / 8.0).cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn fidelity_range() {
        for n in 1..=3 {
            let rho = gen_state(&StateKind::MixedGinibre { rank: 1 << n }, n, 11).unwrap();
            let (f, s) = stabilizer_fidelity(&rho).unwrap();
            assert!(f >= 1.0 / (1 << n) as f64 - 1e-12 && f <= 1.0 + 1e-12);
            assert!((rho.overlap(&s.projector_matrix().unwrap()) - f).abs() < 1e-14);
        }
        assert!(stabilizer_fidelity(&DensityMatrix::maximally_mixed(4).unwrap()).is_err());
    }

    #[test]
    fn best_on_lagrangian_examples() {
        let (v, s) =
            best_on_lagrangian(&DensityMatrix::basis_state(1, 0).unwrap(), &z_line()).unwrap();
        assert!((v - 1.0).abs() < 1e-12 && s.signs() == [1]);
        let (v, s) =
            best_on_lagrangian(&DensityMatrix::basis_state(1, 1).unwrap(), &z_line()).unwrap();
        assert!((v - 1.0).abs() < 1e-12 && s.signs() == [-1]);
        assert!(best_on_lagrangian(
            &DensityMatrix::basis_state(1, 1).unwrap(),
            &Subspace::full(1)
        )
        .is_err());
        let rho = gen_state(&StateKind::MixedGinibre { rank: 3 }, 2, 5).unwrap();
        let p = p_table(&rho);
        for l in enumerate_lagrangians(2).unwrap() {
            let (v, _) = best_on_lagrangian(&rho, &l).unwrap();
            assert!(v >= subspace_sum(&p, &l).unwrap() - 1e-10);
        }
    }

    #[test]
    fn weyl_set_examples() {
        let mut ws = weyl_set(&DensityMatrix::basis_state(1, 0).unwrap(), WEYL_SET_TOL);
        ws.sort();
        assert_eq!(
            ws,
            vec!["x:0,z:0".parse().unwrap(), "x:0,z:1".parse().unwrap()]
        );
        assert_eq!(
            weyl_set(&DensityMatrix::maximally_mixed(3).unwrap(), WEYL_SET_TOL),
            vec![PauliVector::zero(3)]
        );
        let rho = gen_state(
            &StateKind::DepolarizedStabilizer {
                p: 0.3,
                index: None,
            },
            2,
            1,
        )
        .unwrap();
        assert_eq!(weyl_set(&rho, 1e-6), vec![PauliVector::zero(2)]);
        for seed in 0..10 {
            let rho = gen_state(&StateKind::MixedGinibre { rank: 2 }, 2, seed).unwrap();
            let ws = weyl_set(&rho, 1e-6);
            assert!(span(2, &ws).unwrap().is_isotropic());
        }
    }

    #[test]
    fn json_form() {
        let s = StabilizerState::new(z_line(), vec![-1]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"n":1,"generators":["x:0,z:1"],"signs":[-1]}"#);
        assert_eq!(serde_json::from_str::<StabilizerState>(&j).unwrap(), s);
        assert!(serde_json::from_str::<StabilizerState>(
            r#"{"n":1,"generators":["x:1,z:1","x:0,z:1"],"signs":[1,1]}"#
        )
        .is_err());
    }
}
