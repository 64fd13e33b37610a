//! Singular values of per-pixel blocks and projection onto the spectral unit ball.
//!
//! `cargo run --example spectral_projection`

use wstv::spectral::project_block;
use wstv::singular_pair;

fn show(label: &str, block: &[f64]) {
    let sp = singular_pair(block);
    println!(
        "{label:<22} sigma+ {:.6}  sigma- {:.6}  nuclear {:.6}",
        sp.sigma_plus,
        sp.sigma_minus,
        sp.nuclear()
    );
}

fn main() {
    // Rows are (dx, dy) samples of a 3-row block.
    let mut edge = [3.0, 4.0, 1.5, 2.0, 0.0, 0.0];
    let mut corner = [2.0, 0.0, 0.0, 0.5, 1.0, 1.0];
    let mut inside = [0.3, 0.1, -0.2, 0.4, 0.0, 0.1];

    for (label, blk) in [("edge (rank one)", &mut edge[..]), ("corner", &mut corner[..]), ("inside", &mut inside[..])] {
        show(label, blk);
        project_block(blk);
        show("  after projection", blk);
    }
}
