//! Subspaces of F₂^{2n}: classification, complements, Gram–Schmidt, Lagrangian extension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabtest::gf2::{extend_to_lagrangian, symplectic_gram_schmidt, Subspace};
use stabtest::PauliVector;

fn main() -> stabtest::Result<()> {
    let xx: PauliVector = "x:11,z:00".parse()?;
    let zz: PauliVector = "x:00,z:11".parse()?;
    let zi: PauliVector = "x:00,z:10".parse()?;
    println!(
        "[XX, ZZ] = {}, [XX, ZI] = {}",
        xx.symplectic_product(&zz)?,
        xx.symplectic_product(&zi)?
    );

    let bell = Subspace::span(2, &[xx, zz])?;
    println!("<XX, ZZ>: dim {}, {:?}", bell.dim(), bell.classify());

    let t = Subspace::span(2, &[zi])?;
    println!(
        "<ZI>: {:?}, complement has dim {}",
        t.classify(),
        t.symplectic_complement().dim()
    );
    let l = extend_to_lagrangian(&t)?;
    println!(
        "extended to Lagrangian with basis {:?}",
        l.basis_vectors()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = Subspace::random(3, 4, &mut rng)?;
    let gs = symplectic_gram_schmidt(&v);
    println!(
        "random 4-dim subspace of F2^6: {} hyperbolic pairs, {} central vectors, relations hold: {}",
        gs.rank(),
        gs.central.len(),
        gs.relations_hold()
    );
    Ok(())
}
