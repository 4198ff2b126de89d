//! Writing and reading `stabtest-state-v1` files.

use stabtest::quantum::{gen_state, StateKind};
use stabtest::DensityMatrix;

fn main() -> stabtest::Result<()> {
    let rho = gen_state(&StateKind::MixedGinibre { rank: 3 }, 2, 7)?;
    let path = std::env::temp_dir().join("stabtest-example-state.json");
    rho.write_file(&path)?;
    let back = DensityMatrix::read_file(&path)?;
    println!(
        "wrote {}, reloaded exactly: {}",
        path.display(),
        back == rho
    );
    println!(
        "{}",
        std::fs::read_to_string(&path)?
            .chars()
            .take(120)
            .collect::<String>()
            + "..."
    );
    std::fs::remove_file(path)?;
    Ok(())
}
