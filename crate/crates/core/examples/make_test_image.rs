//! Regenerates the bundled 120x120 test image.
//!
//! cargo run --example make_test_image -- data/gradient_edges_120.pgm

use std::path::PathBuf;

use orpt::image2d::synthetic_gradient_image;
use orpt::io::write_pgm;

fn main() {
    let path: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "gradient_edges_120.pgm".into());
    let img = synthetic_gradient_image(120, 120);
    if let Err(e) = write_pgm(&img, &path) {
        eprintln!("{e}");
        std::process::exit(3);
    }
}
