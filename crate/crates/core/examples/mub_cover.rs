//! Covering symplectic subspaces by 2^k + 1 isotropic subspaces (mutually unbiased bases).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabtest::gf2::{isotropic_cover, Subspace};

fn show(s: &Subspace) -> stabtest::Result<()> {
    let cover = isotropic_cover(s)?;
    println!(
        "dim {} symplectic subspace -> {} isotropic subspaces:",
        s.dim(),
        cover.len()
    );
    for t in &cover {
        let elems: Vec<String> = t
            .elements()
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.to_string())
            .collect();
        println!("  {}", elems.join("  "));
    }
    Ok(())
}

fn main() -> stabtest::Result<()> {
    show(&Subspace::full(1))?;
    show(&Subspace::full(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = loop {
        let s = Subspace::random(3, 4, &mut rng)?;
        if s.is_symplectic() {
            break s;
        }
    };
    show(&s)
}
