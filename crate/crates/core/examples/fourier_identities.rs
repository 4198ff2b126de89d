//! The symplectic Fourier transform and its basic identities on a random table.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabtest::fourier::{
    convolve, plancherel_inner, subspace_sum, symplectic_transform, FourierTable,
};
use stabtest::gf2::Subspace;

fn main() -> stabtest::Result<()> {
    let n = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = FourierTable::from_fn(n, |_| rand::Rng::random_range(&mut rng, -1.0..1.0))?;
    let g = FourierTable::from_fn(n, |x| x.xz_parity() as f64)?;
    let (fh, gh) = (symplectic_transform(&f), symplectic_transform(&g));

    let double = symplectic_transform(&fh);
    println!(
        "double hat = f/16: max error {:.1e}",
        double.max_abs_diff(&f.scaled(1.0 / 16.0))?
    );
    println!(
        "Plancherel: {:.12} vs {:.12}",
        plancherel_inner(&f, &g)?,
        fh.dot(&gh)?
    );

    let conv_hat = symplectic_transform(&convolve(&f, &g)?);
    println!(
        "convolution theorem: max error {:.1e}",
        conv_hat.max_abs_diff(&fh.pointwise_mul(&gh)?)?
    );

    let t = Subspace::span(n, &["x:10,z:00".parse()?, "x:00,z:01".parse()?])?;
    let lhs = subspace_sum(&f, &t)?;
    let rhs = t.cardinality() as f64 * subspace_sum(&fh, &t.symplectic_complement())?;
    println!("duality on a 2-dim subspace: {lhs:.12} vs {rhs:.12}");
    Ok(())
}
